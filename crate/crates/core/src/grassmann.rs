//! The color Grassmann algebra: ε-commuting generators, normal-ordered
//! multivectors, the # adjoint and graded left derivatives.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::grading::{epsilon_exponents, is_nilpotent_degree, Degree, GradingConfig};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    ThetaR,
    ThetaG,
    ThetaB,
    ThetaBarR,
    ThetaBarG,
    ThetaBarB,
    Eta,
    EtaBar,
    Param,
}

impl Family {
    pub const GENERATOR_FAMILIES: [Family; 8] = [
        Family::ThetaR,
        Family::ThetaG,
        Family::ThetaB,
        Family::ThetaBarR,
        Family::ThetaBarG,
        Family::ThetaBarB,
        Family::Eta,
        Family::EtaBar,
    ];

    /// Degree fixed by the generator table; params carry their own degree.
    pub fn degree(self) -> Option<Degree> {
        Some(match self {
            Family::ThetaR => Degree::RED,
            Family::ThetaG => Degree::GREEN,
            Family::ThetaB => Degree::BLUE,
            Family::ThetaBarR => Degree::ANTIRED,
            Family::ThetaBarG => Degree::ANTIGREEN,
            Family::ThetaBarB => Degree::ANTIBLUE,
            Family::Eta => Degree::WHITE,
            Family::EtaBar => Degree::ANTIWHITE,
            Family::Param => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::ThetaR => "th_r",
            Family::ThetaG => "th_g",
            Family::ThetaB => "th_b",
            Family::ThetaBarR => "thb_r",
            Family::ThetaBarG => "thb_g",
            Family::ThetaBarB => "thb_b",
            Family::Eta => "eta",
            Family::EtaBar => "etab",
            Family::Param => "par",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::GENERATOR_FAMILIES.iter().copied().find(|f| f.name() == s)
    }
}

/// Phase i^a q^k picked up by a generator under #.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjointPhase {
    pub i_power: u8,
    pub q_power: i32,
}

impl AdjointPhase {
    pub const ONE: AdjointPhase = AdjointPhase { i_power: 0, q_power: 0 };
    pub const MINUS_I: AdjointPhase = AdjointPhase { i_power: 3, q_power: 0 };
    pub const I_Q: AdjointPhase = AdjointPhase { i_power: 1, q_power: 1 };

    pub fn to_scalar(self, field: Field) -> Scalar {
        field.zeta8(2 * self.i_power as i64).mul(&field.q_pow(self.q_power as i64))
    }

    /// The rule for degree d: −i on white/antiwhite, iq on (anti)colors,
    /// and 1 elsewhere (degree zero, bicolor and any other degree).
    pub fn default_for(grading: &GradingConfig, d: Degree) -> AdjointPhase {
        let d = grading.reduce(d);
        let white = [Degree::WHITE, Degree::ANTIWHITE].map(|w| grading.reduce(w));
        let colored = [Degree::RED, Degree::GREEN, Degree::BLUE, Degree::ANTIRED, Degree::ANTIGREEN, Degree::ANTIBLUE]
            .map(|c| grading.reduce(c));
        if white.contains(&d) {
            AdjointPhase::MINUS_I
        } else if colored.contains(&d) {
            AdjointPhase::I_Q
        } else {
            AdjointPhase::ONE
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub family: Family,
    pub index: u32,
    pub degree: Degree,
    phase: AdjointPhase,
}

impl PartialEq for Generator {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}
impl Eq for Generator {}
impl std::hash::Hash for Generator {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}
impl PartialOrd for Generator {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Generator {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl Generator {
    fn key(&self) -> (Family, u32, Degree) {
        (self.family, self.index, self.degree)
    }

    /// One of the eight generator families of the algebra.
    pub fn new(grading: &GradingConfig, family: Family, index: u32) -> Generator {
        let degree = grading.reduce(family.degree().expect("param generators use Generator::param"));
        let phase = match family {
            Family::Eta | Family::EtaBar => AdjointPhase::MINUS_I,
            _ => AdjointPhase::I_Q,
        };
        Generator { family, index, degree, phase }
    }

    /// A parameter generator of arbitrary degree with the default # phase.
    pub fn param(grading: &GradingConfig, index: u32, degree: Degree) -> Generator {
        let degree = grading.reduce(degree);
        Generator { family: Family::Param, index, degree, phase: AdjointPhase::default_for(grading, degree) }
    }

    pub fn with_phase(mut self, phase: AdjointPhase) -> Generator {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> AdjointPhase {
        self.phase
    }

    pub fn is_nilpotent(&self) -> bool {
        is_nilpotent_degree(self.degree)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family.name(), self.index)
    }
}

pub type Word = SmallVec<[Generator; 4]>;

/// A normal-ordered generator word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    word: Word,
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial { word: Word::new() }
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn degree(&self, grading: &GradingConfig) -> Degree {
        grading.reduce(self.word.iter().fold(Degree::ZERO, |acc, g| acc + g.degree))
    }

    /// Count of occurrences of generator `g`.
    pub fn multiplicity(&self, g: &Generator) -> usize {
        self.word.iter().filter(|h| *h == g).count()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.word.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sign parity and q exponent accumulated while reordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Reorder {
    pub negative: bool,
    pub q_exp: i64,
}

impl Reorder {
    fn swap(&mut self, left: &Generator, right: &Generator) {
        // left·right = ε(d_left, d_right) right·left
        let (neg, q) = epsilon_exponents(left.degree, right.degree);
        self.negative ^= neg;
        self.q_exp += q;
    }

    pub fn to_scalar(self, field: Field) -> Scalar {
        let v = field.q_pow(self.q_exp);
        if self.negative {
            v.neg()
        } else {
            v
        }
    }
}

/// Merges two normal-ordered words. `None` when a nilpotent generator repeats.
fn merge_words(a: &[Generator], b: &[Generator]) -> Option<(Reorder, Word)> {
    let mut out = Word::with_capacity(a.len() + b.len());
    let mut r = Reorder::default();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match b[j].cmp(&a[i]) {
            Ordering::Less => {
                for u in &a[i..] {
                    r.swap(u, &b[j]);
                }
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal if b[j].is_nilpotent() => return None,
            _ => {
                out.push(a[i]);
                i += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((r, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    LeftToRight,
    RightToLeft,
}

/// Normal-orders an arbitrary word by repeated adjacent transpositions.
pub fn normal_order(word: &[Generator], sweep: Sweep) -> Option<(Reorder, Word)> {
    let mut w: Word = word.iter().copied().collect();
    let mut r = Reorder::default();
    let n = w.len();
    if n < 2 {
        return Some((r, w));
    }
    loop {
        let mut swapped = false;
        let idx: Vec<usize> = match sweep {
            Sweep::LeftToRight => (0..n - 1).collect(),
            Sweep::RightToLeft => (0..n - 1).rev().collect(),
        };
        for k in idx {
            match w[k].cmp(&w[k + 1]) {
                Ordering::Greater => {
                    let (l, rt) = (w[k], w[k + 1]);
                    r.swap(&l, &rt);
                    w.swap(k, k + 1);
                    swapped = true;
                }
                Ordering::Equal if w[k].is_nilpotent() => return None,
                _ => {}
            }
        }
        if !swapped {
            return Some((r, w));
        }
    }
}

/// A finite scalar-weighted sum of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Multivector {
    pub fn zero(field: Field) -> Multivector {
        Multivector { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Multivector {
        Multivector::scalar(field.one())
    }

    pub fn scalar(s: Scalar) -> Multivector {
        let field = s.field();
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(Monomial::unit(), s);
        }
        Multivector { field, terms }
    }

    pub fn generator(field: Field, g: Generator) -> Multivector {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { word: smallvec::smallvec![g] }, field.one());
        Multivector { field, terms }
    }

    /// c · (g_1 ⋯ g_k) for an arbitrary (not necessarily ordered) word.
    pub fn from_word(field: Field, coeff: Scalar, word: &[Generator]) -> Multivector {
        let mut out = Multivector::zero(field);
        if let Some((r, w)) = normal_order(word, Sweep::LeftToRight) {
            out.add_term(Monomial { word: w }, coeff.mul(&r.to_scalar(field)));
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn grading(&self) -> GradingConfig {
        GradingConfig::from_field(self.field)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of the empty word.
    pub fn body(&self) -> Scalar {
        self.terms.get(&Monomial::unit()).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Multivector) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Multivector {
        Multivector { field: self.field, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Multivector {
        if s.is_zero() {
            return Multivector::zero(self.field);
        }
        Multivector { field: self.field, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect() }
    }

    /// The ε-commutative product.
    pub fn mul(&self, other: &Multivector) -> Multivector {
        let mut out = Multivector::zero(self.field);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((r, w)) = merge_words(&ma.word, &mb.word) {
                    let mut c = ca.mul(cb);
                    if r != Reorder::default() {
                        c = c.mul(&r.to_scalar(self.field));
                    }
                    out.add_term(Monomial { word: w }, c);
                }
            }
        }
        out
    }

    /// Distinct degrees of the monomials present.
    pub fn degrees(&self) -> Vec<Degree> {
        let g = self.grading();
        let mut v: Vec<Degree> = self.terms.keys().map(|m| m.degree(&g)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The common degree of all monomials; `Some(0)` for the zero element.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let d = self.degrees();
        match d.len() {
            0 => Some(Degree::ZERO),
            1 => Some(d[0]),
            _ => None,
        }
    }

    /// The antilinear antiautomorphism #.
    pub fn adjoint(&self) -> Multivector {
        let mut out = Multivector::zero(self.field);
        for (m, c) in &self.terms {
            let mut coeff = c.conj();
            for g in m.word.iter() {
                coeff = coeff.mul(&g.phase.to_scalar(self.field));
            }
            let reversed: Word = m.word.iter().rev().copied().collect();
            if let Some((r, w)) = normal_order(&reversed, Sweep::LeftToRight) {
                out.add_term(Monomial { word: w }, coeff.mul(&r.to_scalar(self.field)));
            }
        }
        out
    }

    /// Graded left derivative ∂/∂x following ∂(fg) = (∂f)g + ε(d_x, d_f) f ∂g.
    pub fn derivative(&self, x: &Generator) -> Multivector {
        let mut out = Multivector::zero(self.field);
        for (m, c) in &self.terms {
            let mut passed = Reorder::default();
            for (p, g) in m.word.iter().enumerate() {
                if g == x {
                    let mut w = m.word.clone();
                    w.remove(p);
                    out.add_term(Monomial { word: w }, c.mul(&passed.to_scalar(self.field)));
                }
                passed.swap(x, g);
            }
        }
        out
    }

    /// Substitutes multivectors for generators (a graded algebra morphism
    /// when every substitute has the degree of the generator it replaces).
    pub fn substitute(&self, f: &dyn Fn(&Generator) -> Option<Multivector>) -> Multivector {
        let mut out = Multivector::zero(self.field);
        for (m, c) in &self.terms {
            let mut acc = Multivector::scalar(c.clone());
            for g in m.word.iter() {
                let factor = f(g).unwrap_or_else(|| Multivector::generator(self.field, *g));
                acc = acc.mul(&factor);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Generators occurring anywhere in the element.
    pub fn generators(&self) -> Vec<Generator> {
        let mut v: Vec<Generator> = self.terms.keys().flat_map(|m| m.word.iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let single = c.term_count() == 1;
            let (neg, mag) = match c.terms().next() {
                Some((r, _, _)) if single && r < num_rational::Rational64::from_integer(0) => (true, c.neg()),
                _ => (false, c.clone()),
            };
            let coeff = if single { mag.to_string() } else { format!("({mag})") };
            let body = if m.is_empty() {
                coeff
            } else if mag.is_one() {
                m.to_string()
            } else {
                format!("{coeff}*{m}")
            };
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

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> GradingConfig {
        GradingConfig::default()
    }

    fn gen(f: Family, i: u32) -> Multivector {
        Multivector::generator(g().field(), Generator::new(&g(), f, i))
    }

    #[test]
    fn nilpotency_of_every_family() {
        for fam in Family::GENERATOR_FAMILIES {
            let x = gen(fam, 1);
            assert!(x.mul(&x).is_zero(), "{fam:?}");
        }
    }

    #[test]
    fn q_commutation_reorders() {
        let f = g().field();
        let lhs = gen(Family::ThetaG, 1).mul(&gen(Family::ThetaR, 1));
        let rhs = gen(Family::ThetaR, 1).mul(&gen(Family::ThetaG, 1)).scale(&f.q_pow(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eta_anticommute() {
        let a = gen(Family::Eta, 1).mul(&gen(Family::Eta, 2));
        let b = gen(Family::Eta, 2).mul(&gen(Family::Eta, 1));
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn white_triple_is_fermionic() {
        let t = gen(Family::ThetaR, 1).mul(&gen(Family::ThetaG, 1)).mul(&gen(Family::ThetaB, 1));
        let e = gen(Family::Eta, 1);
        assert!(t.mul(&e).add(&e.mul(&t)).is_zero());
    }

    #[test]
    fn adjoint_examples() {
        let f = g().field();
        let e = gen(Family::Eta, 1);
        assert_eq!(e.adjoint(), e.scale(&f.i().neg()));
        assert_eq!(e.adjoint().adjoint(), e);
        let t = gen(Family::ThetaR, 1).mul(&gen(Family::ThetaG, 1));
        assert_eq!(t.adjoint(), t.scale(&f.q().neg()));
    }

    #[test]
    fn derivative_examples() {
        let f = g().field();
        let tr = Generator::new(&g(), Family::ThetaR, 1);
        let tg = Generator::new(&g(), Family::ThetaG, 1);
        assert_eq!(gen(Family::ThetaR, 1).derivative(&tr), Multivector::one(f));
        assert!(Multivector::one(f).derivative(&tr).is_zero());
        let prod = gen(Family::ThetaR, 1).mul(&gen(Family::ThetaG, 1));
        assert_eq!(prod.derivative(&tg), gen(Family::ThetaR, 1).scale(&f.q_pow(-1)));
    }

    #[test]
    fn commuting_params_take_powers() {
        let gr = g();
        let f = gr.field();
        let x = Generator::param(&gr, 1, Degree::ZERO);
        let xm = Multivector::generator(f, x);
        let sq = xm.mul(&xm);
        assert_eq!(sq.derivative(&x), xm.scale(&f.int(2)));
        assert_eq!(xm.adjoint(), xm);
    }

    #[test]
    fn sweeps_agree() {
        let gr = g();
        let w: Vec<Generator> = vec![
            Generator::new(&gr, Family::Eta, 2),
            Generator::new(&gr, Family::ThetaB, 1),
            Generator::new(&gr, Family::ThetaR, 3),
            Generator::new(&gr, Family::ThetaBarG, 1),
        ];
        assert_eq!(normal_order(&w, Sweep::LeftToRight), normal_order(&w, Sweep::RightToLeft));
    }

    #[test]
    fn rendering() {
        let t = gen(Family::ThetaR, 1).mul(&gen(Family::ThetaG, 1));
        assert_eq!(t.to_string(), "th_r[1]*th_g[1]");
        let f = g().field();
        let s = t.scale(&f.one().sub(&f.q()));
        assert_eq!(s.to_string(), "(1 - q)*th_r[1]*th_g[1]");
        assert_eq!(t.neg().to_string(), "-th_r[1]*th_g[1]");
    }
}
