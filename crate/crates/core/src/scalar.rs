//! Exact scalars: elements of Q(ζ_m)[q, q^-1], or of Q(ζ_m) when q is a root of unity.
//!
//! A scalar is a sorted list of terms `c · ζ_m^a · q^k` with rational `c`,
//! `a` below φ(m) (the power basis of the cyclotomic field) and `k` an
//! arbitrary integer when q is formal. When q has finite order n it is
//! identified with ζ_m^(m/n) and every term has `k = 0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub type Rat = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible in the coefficient ring: {0}")]
    NonInvertible(String),
    #[error("no exact square root of {0} in the coefficient field")]
    NoSquareRoot(String),
    #[error("scalars from different coefficient fields (m={0}, n={1}) and (m={2}, n={3})")]
    FieldMismatch(u32, u32, u32, u32),
    #[error("invalid field: {0}")]
    InvalidField(String),
}

pub(crate) fn radd(a: Rat, b: Rat) -> Rat {
    a.checked_add(&b).expect("rational overflow in exact arithmetic")
}

pub(crate) fn rmul(a: Rat, b: Rat) -> Rat {
    a.checked_mul(&b).expect("rational overflow in exact arithmetic")
}

/// Powers of ζ_m written in the power basis 1, ζ, …, ζ^(φ-1).
#[derive(Debug)]
pub struct CycloTable {
    phi: usize,
    powers: Vec<Vec<(u16, i64)>>,
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both polynomials have integer coefficients, lowest degree first, and
    // `den` is monic.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut out = vec![0i64; num.len() - dd];
    for i in (0..out.len()).rev() {
        let c = rem[i + dd];
        out[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    out
}

fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divide_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

impl CycloTable {
    fn build(m: u32) -> CycloTable {
        let phi_poly = cyclotomic_poly(m);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as u16, c)).collect());
            // multiply by ζ and reduce with the monic minimal polynomial
            let top = cur[phi - 1];
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for k in 0..phi {
                    cur[k] -= top * phi_poly[k];
                }
            }
        }
        CycloTable { phi, powers }
    }
}

fn table_for(m: u32) -> &'static CycloTable {
    static TABLES: OnceLock<Mutex<HashMap<u32, &'static CycloTable>>> = OnceLock::new();
    let lock = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = lock.lock().expect("cyclotomic table cache poisoned");
    map.entry(m).or_insert_with(|| Box::leak(Box::new(CycloTable::build(m))))
}

/// The coefficient field Q(ζ_m), with q formal (n = 0) or q = ζ_m^(m/n).
#[derive(Clone, Copy)]
pub struct Field {
    n: u32,
    m: u32,
    table: &'static CycloTable,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(m={}, n={})", self.m, self.n)
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::new(0, 8).expect("default field")
    }
}

impl Field {
    pub fn new(n: u32, m: u32) -> Result<Field, ScalarError> {
        if m == 0 || !m.is_multiple_of(8) {
            return Err(ScalarError::InvalidField(format!("root order {m} must be a positive multiple of 8")));
        }
        if n > 0 && !m.is_multiple_of(n) {
            return Err(ScalarError::InvalidField(format!("root order {m} must be divisible by n={n}")));
        }
        if m > 4096 {
            return Err(ScalarError::InvalidField(format!("root order {m} is too large")));
        }
        Ok(Field { n, m, table: table_for(m) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn phi(&self) -> usize {
        self.table.phi
    }

    pub fn zero(&self) -> Scalar {
        Scalar { field: *self, terms: SmallVec::new() }
    }

    pub fn one(&self) -> Scalar {
        self.rational(Rat::one())
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.rational(Rat::from_integer(v))
    }

    pub fn frac(&self, num: i64, den: i64) -> Scalar {
        self.rational(Rat::new(num, den))
    }

    pub fn rational(&self, c: Rat) -> Scalar {
        Scalar::from_raw(*self, std::iter::once((0, 0, c)))
    }

    /// ζ_m^k for any integer k.
    pub fn zeta(&self, k: i64) -> Scalar {
        let e = k.rem_euclid(self.m as i64) as u32;
        Scalar::from_raw(*self, std::iter::once((0, e, Rat::one())))
    }

    /// ζ_8^k, the primitive eighth root e^{iπ/4} raised to k.
    pub fn zeta8(&self, k: i64) -> Scalar {
        self.zeta(k * (self.m / 8) as i64)
    }

    pub fn i(&self) -> Scalar {
        self.zeta8(2)
    }

    pub fn sqrt2(&self) -> Scalar {
        self.zeta8(1).add(&self.zeta8(-1))
    }

    /// q^k: a formal power when n = 0, otherwise the matching root of unity.
    pub fn q_pow(&self, k: i64) -> Scalar {
        Scalar::from_raw(*self, std::iter::once((k, 0, Rat::one())))
    }

    pub fn q(&self) -> Scalar {
        self.q_pow(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    q: i32,
    z: u16,
    c: Rat,
}

/// Exact element of the coefficient ring.
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    terms: SmallVec<[Term; 2]>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.terms == other.terms
    }
}
impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.m.hash(state);
        self.field.n.hash(state);
        self.terms.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Scalar {
    /// Builds a canonical scalar from unreduced terms (q-exponent, ζ-exponent, coefficient).
    fn from_raw(field: Field, raw: impl IntoIterator<Item = (i64, u32, Rat)>) -> Scalar {
        let m = field.m as i64;
        let mut acc: SmallVec<[Term; 8]> = SmallVec::new();
        for (qk, z, c) in raw {
            if c.is_zero() {
                continue;
            }
            let (qexp, zexp) = if field.n > 0 {
                let n = field.n as i64;
                let shift = qk.rem_euclid(n) * (m / n);
                (0i64, (z as i64 + shift).rem_euclid(m))
            } else {
                (qk, (z as i64).rem_euclid(m))
            };
            let qexp = i32::try_from(qexp).expect("q exponent out of range");
            for &(k, coef) in &field.table.powers[zexp as usize] {
                acc.push(Term { q: qexp, z: k, c: rmul(c, Rat::from_integer(coef)) });
            }
        }
        acc.sort_unstable_by_key(|t| (t.q, t.z));
        let mut terms: SmallVec<[Term; 2]> = SmallVec::new();
        for t in acc {
            match terms.last_mut() {
                Some(last) if last.q == t.q && last.z == t.z => {
                    last.c = radd(last.c, t.c);
                    if last.c.is_zero() {
                        terms.pop();
                    }
                }
                _ => terms.push(t),
            }
        }
        Scalar { field, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].q == 0 && self.terms[0].z == 0 && self.terms[0].c.is_one()
    }

    /// The rational value when the scalar is a plain rational number.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [t] if t.q == 0 && t.z == 0 => Some(t.c),
            _ => None,
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn check(&self, other: &Scalar) {
        if self.field != other.field {
            panic!("{}", ScalarError::FieldMismatch(self.field.m, self.field.n, other.field.m, other.field.n));
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut terms: SmallVec<[Term; 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && (a[i].q, a[i].z) < (b[j].q, b[j].z));
            let take_b = i >= a.len() || (j < b.len() && (b[j].q, b[j].z) < (a[i].q, a[i].z));
            if take_a {
                terms.push(a[i]);
                i += 1;
            } else if take_b {
                terms.push(b[j]);
                j += 1;
            } else {
                let c = radd(a[i].c, b[j].c);
                if !c.is_zero() {
                    terms.push(Term { q: a[i].q, z: a[i].z, c });
                }
                i += 1;
                j += 1;
            }
        }
        Scalar { field: self.field, terms }
    }

    pub fn neg(&self) -> Scalar {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.c = -t.c;
        }
        out
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let raw = self.terms.iter().flat_map(|a| {
            other.terms.iter().map(move |b| (a.q as i64 + b.q as i64, a.z as u32 + b.z as u32, rmul(a.c, b.c)))
        });
        Scalar::from_raw(self.field, raw.collect::<Vec<_>>())
    }

    pub fn scale_rat(&self, c: Rat) -> Scalar {
        if c.is_zero() {
            return self.field.zero();
        }
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.c = rmul(t.c, c);
        }
        out
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field.one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Complex conjugation: ζ ↦ ζ^{-1}, q ↦ q^{-1}.
    pub fn conj(&self) -> Scalar {
        let m = self.field.m;
        let raw: Vec<_> = self.terms.iter().map(|t| (-(t.q as i64), (m - t.z as u32) % m, t.c)).collect();
        Scalar::from_raw(self.field, raw)
    }

    /// Multiplicative inverse. With formal q only elements c·q^k (c a nonzero
    /// cyclotomic number) are units.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let q0 = self.terms[0].q;
        if self.terms.iter().any(|t| t.q != q0) {
            return Err(ScalarError::NonInvertible(self.to_string()));
        }
        let phi = self.field.phi();
        // Solve (α · β) = 1 for β in the power basis.
        let mut mat: Vec<Vec<Rat>> = vec![vec![Rat::zero(); phi + 1]; phi];
        for k in 0..phi {
            let basis = Scalar::from_raw(self.field, std::iter::once((0, k as u32, Rat::one())));
            let col = self.mul(&basis);
            for t in col.terms.iter() {
                mat[t.z as usize][k] = t.c;
            }
        }
        mat[0][phi] = Rat::one();
        let sol = solve_dense(mat).ok_or_else(|| ScalarError::NonInvertible(self.to_string()))?;
        let raw: Vec<_> = sol.into_iter().enumerate().map(|(k, c)| (-(q0 as i64), k as u32, c)).collect();
        Ok(Scalar::from_raw(self.field, raw))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact square root of a rational whose squarefree part is ±1 or ±2.
    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        let r = self.as_rational().ok_or_else(|| ScalarError::NoSquareRoot(self.to_string()))?;
        if r.is_zero() {
            return Ok(self.field.zero());
        }
        let (sf_num, t_num) = squarefree_split(r.numer().abs());
        let (sf_den, t_den) = squarefree_split(*r.denom());
        // r = ±(sf_num t_num²)/(sf_den t_den²) = ±sf_num sf_den (t_num/(t_den sf_den))²
        let sf = sf_num * sf_den;
        let t = Rat::new(t_num, t_den * sf_den);
        let f = self.field;
        let unit = match (r.is_negative(), sf) {
            (false, 1) => f.one(),
            (false, 2) => f.sqrt2(),
            (true, 1) => f.i(),
            (true, 2) => f.zeta8(1).add(&f.zeta8(3)),
            _ => return Err(ScalarError::NoSquareRoot(self.to_string())),
        };
        Ok(unit.scale_rat(t))
    }

    /// Terms as (rational coefficient, ζ exponent, q exponent).
    pub fn terms(&self) -> impl Iterator<Item = (Rat, u32, i32)> + '_ {
        self.terms.iter().map(|t| (t.c, t.z as u32, t.q))
    }
}

fn squarefree_split(mut v: i64) -> (i64, i64) {
    let mut sf = 1i64;
    let mut t = 1i64;
    let mut p = 2i64;
    while p * p <= v {
        let mut e = 0;
        while v % p == 0 {
            v /= p;
            e += 1;
        }
        if e % 2 == 1 {
            sf *= p;
        }
        t *= p.pow(e / 2);
        p += 1;
    }
    sf *= v;
    (sf, t)
}

/// Gaussian elimination on an augmented rational matrix; `None` when singular.
pub(crate) fn solve_dense(mut a: Vec<Vec<Rat>>) -> Option<Vec<Rat>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for k in col..=n {
            a[col][k] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in col..=n {
                    let v = rmul(f, a[col][k]);
                    a[r][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in self.terms.iter() {
            let mut parts: Vec<String> = Vec::new();
            let neg = t.c.is_negative();
            let mag = t.c.abs();
            if !mag.is_one() || (t.z == 0 && t.q == 0) {
                parts.push(fmt_rat(&mag));
            }
            if t.z != 0 {
                let base = if self.field.m == 8 { "z8".to_string() } else { format!("z{}", self.field.m) };
                parts.push(if t.z == 1 { base } else { format!("{base}^{}", t.z) });
            }
            if t.q != 0 {
                parts.push(if t.q == 1 { "q".to_string() } else { format!("q^{}", t.q) });
            }
            let body = parts.join("*");
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Physical unit constants ℏ and λ; both default to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitConfig {
    pub hbar: Scalar,
    pub lambda_length: Scalar,
}

impl UnitConfig {
    pub fn natural(field: Field) -> UnitConfig {
        UnitConfig { hbar: field.one(), lambda_length: field.one() }
    }

    pub fn new(hbar: Scalar, lambda_length: Scalar) -> Result<UnitConfig, ScalarError> {
        if hbar.is_zero() || lambda_length.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(UnitConfig { hbar, lambda_length })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::default()
    }

    #[test]
    fn zeta8_squared_is_i() {
        let z = f().zeta8(1);
        assert_eq!(z.mul(&z), f().i());
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = f().zeta8(1).add(&f().zeta8(-1));
        assert_eq!(s.mul(&s), f().int(2));
    }

    #[test]
    fn q_times_inverse_is_one() {
        assert_eq!(f().q().mul(&f().q_pow(-1)), f().one());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(f().i().conj(), f().i().neg());
        assert_eq!(f().q().conj(), f().q_pow(-1));
        let x = f().int(2).add(&f().zeta8(1).scale_rat(Rat::from_integer(3)));
        let y = f().int(2).add(&f().zeta8(-1).scale_rat(Rat::from_integer(3)));
        assert_eq!(x.conj(), y);
    }

    #[test]
    fn cyclotomic_inverse() {
        let x = f().one().add(&f().zeta8(1));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), f().one());
        let w = x.mul(&f().q_pow(3));
        assert_eq!(w.mul(&w.inv().unwrap()), f().one());
    }

    #[test]
    fn non_monomial_in_q_is_not_invertible() {
        let x = f().one().sub(&f().q());
        assert!(matches!(x.inv(), Err(ScalarError::NonInvertible(_))));
        assert_eq!(f().zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn root_of_unity_q() {
        let fld = Field::new(3, 24).unwrap();
        assert_eq!(fld.q_pow(3), fld.one());
        assert_eq!(fld.q().mul(&fld.q_pow(2)), fld.one());
        let one_minus_q = fld.one().sub(&fld.q());
        assert!(one_minus_q.inv().is_ok());
    }

    #[test]
    fn sqrt_cases() {
        let fld = f();
        for v in [1i64, 2, 4, 8, -1, -2, 18] {
            let s = fld.int(v).sqrt().unwrap();
            assert_eq!(s.mul(&s), fld.int(v), "sqrt of {v}");
        }
        let half = fld.frac(1, 2).sqrt().unwrap();
        assert_eq!(half.mul(&half), fld.frac(1, 2));
        assert!(fld.int(3).sqrt().is_err());
        assert!(fld.q().sqrt().is_err());
    }

    #[test]
    fn rendering() {
        let fld = f();
        let x = fld.zeta8(3).mul(&fld.q_pow(-1)).scale_rat(Rat::new(1, 2)).add(&fld.int(2));
        assert_eq!(x.to_string(), "1/2*z8^3*q^-1 + 2");
        assert_eq!(fld.zero().to_string(), "0");
        assert_eq!(fld.one().sub(&fld.q()).to_string(), "1 - q");
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(24).len() - 1, 8);
        assert_eq!(Field::new(0, 40).unwrap().phi(), 16);
    }
}
