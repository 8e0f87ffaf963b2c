//! Structure constants of the minimal color Poincaré superalgebra in its two-
//! and four-component forms, with Jacobi, grading and antisymmetry checks and
//! the convention search.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{CliffordData, CliffordError, Convention, ConventionSpace};
use crate::grading::{bicolor_degrees, Degree, GradingConfig, SUPERTRANSLATION_DEGREES};
use crate::matrix::Mat;
use crate::report::Report;
use crate::scalar::{Field, Scalar, ScalarError, UnitConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("coupling for degree {0} is not a square in the coefficient field")]
    NonSquareKappa(String),
    #[error("coupling for degree {0} must be nonzero")]
    ZeroKappa(String),
    #[error("degree {0} carries no coupling (expected white, r, g, b or an opposite)")]
    NoCoupling(String),
    #[error("basis element {0} is not in this algebra")]
    ForeignElement(String),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formulation {
    Two,
    Four,
}

impl Formulation {
    pub fn spinor_dim(self) -> u8 {
        match self {
            Formulation::Two => 2,
            Formulation::Four => 4,
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Formulation::Two { "two" } else { "four" })
    }
}

/// A basis generator. Spacetime and spinor indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisElement {
    M(u8, u8),
    P(u8),
    Q(Degree, u8),
    R(Degree, u8),
}

impl BasisElement {
    /// Degree in Z^3; reduce with the grading for Z_n^3.
    pub fn degree(&self) -> Degree {
        match self {
            BasisElement::M(..) | BasisElement::P(_) => Degree::ZERO,
            BasisElement::Q(d, _) | BasisElement::R(d, _) => *d,
        }
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::M(a, b) => write!(f, "M({a},{b})"),
            BasisElement::P(m) => write!(f, "P({m})"),
            BasisElement::Q(d, a) => write!(f, "Q({},{a})", d.label()),
            BasisElement::R(d, a) => write!(f, "R({},{a})", d.label()),
        }
    }
}

pub const ROTATION_PAIRS: [(u8, u8); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

#[derive(Clone, Debug)]
pub struct Basis {
    elements: Vec<BasisElement>,
    index: HashMap<BasisElement, usize>,
}

impl Basis {
    pub fn new(formulation: Formulation) -> Basis {
        let mut elements: Vec<BasisElement> = ROTATION_PAIRS.iter().map(|&(a, b)| BasisElement::M(a, b)).collect();
        elements.extend((1..=4).map(BasisElement::P));
        for d in SUPERTRANSLATION_DEGREES {
            elements.extend((1..=formulation.spinor_dim()).map(|a| BasisElement::Q(d, a)));
        }
        for d in bicolor_degrees() {
            elements.extend((1..=4).map(|a| BasisElement::R(d, a)));
        }
        let index = elements.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        Basis { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn get(&self, k: usize) -> BasisElement {
        self.elements[k]
    }

    pub fn index_of(&self, e: &BasisElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    fn idx(&self, e: BasisElement) -> usize {
        self.index[&e]
    }

    /// Index of M(a,b) with sign, for any ordered pair; None on the diagonal.
    fn rotation(&self, a: u8, b: u8) -> Option<(usize, i64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((self.idx(BasisElement::M(a, b)), 1)),
            std::cmp::Ordering::Greater => Some((self.idx(BasisElement::M(b, a)), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }
}

/// κ couplings per degree and the unit constants.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingConfig {
    /// κ for white, r, g, b; opposites share the value.
    kappa: [Scalar; 4],
    sqrt_kappa: [Scalar; 4],
    pub units: UnitConfig,
}

impl CouplingConfig {
    pub fn new(field: Field) -> CouplingConfig {
        let two = field.int(2);
        let root = two.sqrt().expect("2 is a square when 8 divides the root order");
        CouplingConfig {
            kappa: std::array::from_fn(|_| two.clone()),
            sqrt_kappa: std::array::from_fn(|_| root.clone()),
            units: UnitConfig::natural(field),
        }
    }

    fn slot(d: Degree) -> Option<usize> {
        let d = if d.r < 0 || d.g < 0 || d.b < 0 { -d } else { d };
        [Degree::WHITE, Degree::RED, Degree::GREEN, Degree::BLUE].iter().position(|&x| x == d)
    }

    /// Sets κ for `d` (and −d); the value must be a nonzero square.
    pub fn with_kappa(mut self, d: Degree, value: Scalar) -> Result<CouplingConfig, AlgebraError> {
        let k = CouplingConfig::slot(d).ok_or_else(|| AlgebraError::NoCoupling(d.label()))?;
        if value.is_zero() {
            return Err(AlgebraError::ZeroKappa(d.label()));
        }
        let root = value.sqrt().map_err(|_| AlgebraError::NonSquareKappa(d.label()))?;
        self.kappa[k] = value;
        self.sqrt_kappa[k] = root;
        Ok(self)
    }

    pub fn kappa(&self, d: Degree) -> &Scalar {
        &self.kappa[CouplingConfig::slot(d).expect("coupling degree")]
    }

    pub fn sqrt_kappa(&self, d: Degree) -> &Scalar {
        &self.sqrt_kappa[CouplingConfig::slot(d).expect("coupling degree")]
    }
}

/// Sparse linear combination of basis indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: Vec<(usize, Scalar)>,
}

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb::default()
    }

    pub fn basis(field: Field, k: usize) -> LinComb {
        LinComb { terms: vec![(k, field.one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(usize, Scalar)] {
        &self.terms
    }

    pub fn add_term(&mut self, k: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&k, |t| t.0) {
            Ok(p) => {
                let s = self.terms[p].1.add(c);
                if s.is_zero() {
                    self.terms.remove(p);
                } else {
                    self.terms[p].1 = s;
                }
            }
            Err(p) => self.terms.insert(p, (k, c.clone())),
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(*k, &c.mul(s));
        }
    }

    pub fn scale(&self, s: &Scalar) -> LinComb {
        let mut out = LinComb::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn render(&self, basis: &Basis) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})*{}", basis.get(*k))).collect();
        parts.join(" + ")
    }
}

/// The full bracket table over an ordered basis.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub formulation: Formulation,
    grading: GradingConfig,
    basis: Basis,
    degrees: Vec<Degree>,
    table: Vec<LinComb>,
    pub convention: Convention,
}

impl StructureConstants {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn grading(&self) -> GradingConfig {
        self.grading
    }

    pub fn field(&self) -> Field {
        self.grading.field()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduced degree of basis index k.
    pub fn degree(&self, k: usize) -> Degree {
        self.degrees[k]
    }

    pub fn entry(&self, a: usize, b: usize) -> &LinComb {
        &self.table[a * self.len() + b]
    }

    pub fn set_entry(&mut self, a: usize, b: usize, v: LinComb) {
        let n = self.len();
        self.table[a * n + b] = v;
    }

    pub fn index_of(&self, e: &BasisElement) -> Result<usize, AlgebraError> {
        self.basis.index_of(e).ok_or_else(|| AlgebraError::ForeignElement(e.to_string()))
    }

    /// Table entry for two basis elements.
    pub fn table(&self, a: &BasisElement, b: &BasisElement) -> Result<LinComb, AlgebraError> {
        Ok(self.entry(self.index_of(a)?, self.index_of(b)?).clone())
    }

    pub fn element(&self, e: &BasisElement) -> Result<LinComb, AlgebraError> {
        Ok(LinComb::basis(self.field(), self.index_of(e)?))
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, x: &LinComb, y: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (i, a) in &x.terms {
            for (j, b) in &y.terms {
                let e = self.entry(*i, *j);
                if !e.is_zero() {
                    out.add_scaled(e, &a.mul(b));
                }
            }
        }
        out
    }

    fn eps(&self, a: usize, b: usize) -> Scalar {
        self.grading.epsilon(self.degrees[a], self.degrees[b])
    }

    /// ε(c,a)[a,[b,c]] + ε(a,b)[b,[c,a]] + ε(b,c)[c,[a,b]] for basis indices.
    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize) -> LinComb {
        let bc = self.entry(b, c);
        let ca = self.entry(c, a);
        let ab = self.entry(a, b);
        let mut out = LinComb::zero();
        if bc.is_zero() && ca.is_zero() && ab.is_zero() {
            return out;
        }
        let f = self.field();
        let one = |k| LinComb::basis(f, k);
        out.add_scaled(&self.bracket(&one(a), bc), &self.eps(c, a));
        out.add_scaled(&self.bracket(&one(b), ca), &self.eps(a, b));
        out.add_scaled(&self.bracket(&one(c), ab), &self.eps(b, c));
        out
    }

    fn jacobi_over(&self, triples: impl ParallelIterator<Item = (usize, usize, usize)>, name: &str) -> Report {
        let parts = triples
            .fold(
                || Report::new(name),
                |mut rep, (a, b, c)| {
                    let r = self.jacobi_residual(a, b, c);
                    rep.case();
                    if !r.is_zero() {
                        let (ea, eb, ec) = (self.basis.get(a), self.basis.get(b), self.basis.get(c));
                        rep.fail(format!("({ea}, {eb}, {ec})"), r.render(&self.basis), "0");
                        rep.tally(format!("{}/{}/{}", kind(ea), kind(eb), kind(ec)), 1);
                    }
                    rep
                },
            )
            .reduce(|| Report::new(name), Report::merge);
        self.decorate(parts)
    }

    fn decorate(&self, r: Report) -> Report {
        r.with_config("formulation", self.formulation.to_string())
            .with_config("n", self.grading.n())
            .with_config("convention", self.convention.label())
    }

    /// Every ordered basis triple.
    pub fn jacobi_report(&self) -> Report {
        let n = self.len();
        let triples = (0..n * n * n).into_par_iter().map(move |t| (t / (n * n), (t / n) % n, t % n));
        self.jacobi_over(triples, "algebra.jacobi")
    }

    /// Triples a ≤ b ≤ c only. Given ε-antisymmetry of the table the residual
    /// of a permuted triple is a unit multiple of the sorted one, so this has
    /// the same verdict as the full report at a sixth of the cost.
    pub fn jacobi_report_canonical(&self) -> Report {
        let n = self.len();
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|a| (a..n).flat_map(move |b| (b..n).map(move |c| (a, b, c)))).collect();
        self.jacobi_over(triples.into_par_iter(), "jacobi (sorted triples)")
    }

    /// Jacobi restricted to triples drawn from `subset`.
    pub fn jacobi_report_on(&self, subset: &[usize], name: &str) -> Report {
        let s = subset.to_vec();
        let m = s.len();
        let triples = (0..m * m * m).into_par_iter().map(move |t| (s[t / (m * m)], s[(t / m) % m], s[t % m]));
        self.jacobi_over(triples, name)
    }

    /// Every table entry lies in the sector of degree d_a + d_b.
    pub fn grading_report(&self) -> Report {
        let mut rep = Report::new("algebra.grading");
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let want = self.grading.add(self.degrees[a], self.degrees[b]);
                let bad: Vec<usize> =
                    self.entry(a, b).terms.iter().map(|t| t.0).filter(|&k| self.degrees[k] != want).collect();
                rep.check(bad.is_empty(), || crate::report::Failure {
                    context: format!("[{}, {}]", self.basis.get(a), self.basis.get(b)),
                    lhs: bad.iter().map(|&k| self.basis.get(k).to_string()).collect::<Vec<_>>().join(", "),
                    rhs: format!("degree {}", want.label()),
                });
            }
        }
        self.decorate(rep)
    }

    /// table(b,a) = −ε(d_b,d_a)·table(a,b) for every ordered pair, which is
    /// what [A,B] = AB − ε(d_A,d_B)BA implies.
    pub fn antisymmetry_report(&self) -> Report {
        let mut rep = Report::new("algebra.antisymmetry");
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let want = self.entry(a, b).scale(&self.eps(b, a).neg());
                let got = self.entry(b, a);
                rep.check(*got == want, || crate::report::Failure {
                    context: format!("[{}, {}]", self.basis.get(b), self.basis.get(a)),
                    lhs: got.render(&self.basis),
                    rhs: want.render(&self.basis),
                });
            }
        }
        self.decorate(rep)
    }

    /// Indices whose degree lies in `degrees`.
    pub fn sector(&self, degrees: &[Degree]) -> Vec<usize> {
        let red: Vec<Degree> = degrees.iter().map(|&d| self.grading.reduce(d)).collect();
        (0..self.len()).filter(|&k| red.contains(&self.degrees[k])).collect()
    }

    /// Brackets inside `subset` stay inside `subset`.
    pub fn closure_report(&self, subset: &[usize], name: &str) -> Report {
        let mut rep = Report::new(name);
        for &a in subset {
            for &b in subset {
                let outside: Vec<usize> =
                    self.entry(a, b).terms.iter().map(|t| t.0).filter(|k| !subset.contains(k)).collect();
                rep.check(outside.is_empty(), || crate::report::Failure {
                    context: format!("[{}, {}]", self.basis.get(a), self.basis.get(b)),
                    lhs: outside.iter().map(|&k| self.basis.get(k).to_string()).collect::<Vec<_>>().join(", "),
                    rhs: "subset".into(),
                });
            }
        }
        self.decorate(rep)
    }
}

fn kind(e: BasisElement) -> String {
    match e {
        BasisElement::M(..) => "M".into(),
        BasisElement::P(_) => "P".into(),
        BasisElement::Q(d, _) => format!("Q{}", d.label()),
        BasisElement::R(d, _) => format!("R{}", d.label()),
    }
}

/// Ordered color pairs whose bracket carries (1 − q)/2.
pub fn same_orientation_pairs() -> [(Degree, Degree); 6] {
    use crate::grading::Degree as D;
    [
        (D::RED, D::GREEN),
        (D::GREEN, D::BLUE),
        (D::BLUE, D::RED),
        (D::ANTIRED, D::ANTIGREEN),
        (D::ANTIGREEN, D::ANTIBLUE),
        (D::ANTIBLUE, D::ANTIRED),
    ]
}

/// Ordered color pairs whose bracket carries (1 − q⁻¹)/2.
pub fn mixed_orientation_pairs() -> [(Degree, Degree); 6] {
    use crate::grading::Degree as D;
    [
        (D::RED, D::ANTIGREEN),
        (D::GREEN, D::ANTIBLUE),
        (D::BLUE, D::ANTIRED),
        (D::ANTIRED, D::GREEN),
        (D::ANTIGREEN, D::BLUE),
        (D::ANTIBLUE, D::RED),
    ]
}

/// (white-type first argument, colored second argument).
pub fn white_anticolor_pairs() -> [(Degree, Degree); 6] {
    use crate::grading::Degree as D;
    [
        (D::WHITE, D::ANTIRED),
        (D::WHITE, D::ANTIGREEN),
        (D::WHITE, D::ANTIBLUE),
        (D::ANTIWHITE, D::RED),
        (D::ANTIWHITE, D::GREEN),
        (D::ANTIWHITE, D::BLUE),
    ]
}

fn is_positive(d: Degree) -> bool {
    d.r >= 0 && d.g >= 0 && d.b >= 0
}

struct Builder<'a> {
    sc: StructureConstants,
    filled: Vec<bool>,
    cfg: &'a CouplingConfig,
}

impl<'a> Builder<'a> {
    fn new(formulation: Formulation, grading: GradingConfig, cfg: &'a CouplingConfig, conv: Convention) -> Self {
        let basis = Basis::new(formulation);
        let n = basis.len();
        let degrees = basis.elements().iter().map(|e| grading.reduce(e.degree())).collect();
        Builder {
            sc: StructureConstants {
                formulation,
                grading,
                basis,
                degrees,
                table: vec![LinComb::zero(); n * n],
                convention: conv,
            },
            filled: vec![false; n * n],
            cfg,
        }
    }

    fn field(&self) -> Field {
        self.sc.field()
    }

    fn put(&mut self, a: BasisElement, b: BasisElement, v: LinComb) {
        let (i, j) = (self.sc.basis.idx(a), self.sc.basis.idx(b));
        let n = self.sc.len();
        self.sc.table[i * n + j] = v;
        self.filled[i * n + j] = true;
    }

    /// Fills every unset reverse entry by ε-antisymmetry.
    fn finish(mut self) -> StructureConstants {
        let n = self.sc.len();
        for a in 0..n {
            for b in 0..n {
                if self.filled[a * n + b] && !self.filled[b * n + a] {
                    let v = self.sc.table[a * n + b].scale(&self.sc.eps(b, a).neg());
                    self.sc.table[b * n + a] = v;
                    self.filled[b * n + a] = true;
                }
            }
        }
        self.sc
    }

    /// (ℏ/i)(η_{aμ} X_b − η_{bμ} X_a) for a vector index μ.
    fn rotate_vector(&self, cd: &CliffordData, a: u8, b: u8, mu: u8, x: impl Fn(u8) -> BasisElement) -> LinComb {
        let f = self.field();
        let hi = self.cfg.units.hbar.mul(&f.i().neg());
        let mut lc = LinComb::zero();
        let (ai, bi, mi) = (a as usize - 1, b as usize - 1, mu as usize - 1);
        lc.add_term(self.sc.basis.idx(x(b)), &hi.mul(&f.int(cd.eta(ai, mi))));
        lc.add_term(self.sc.basis.idx(x(a)), &hi.mul(&f.int(-cd.eta(bi, mi))));
        lc
    }

    fn lorentz(&mut self, cd: &CliffordData) {
        let f = self.field();
        let hi = self.cfg.units.hbar.mul(&f.i().neg());
        for &(a, b) in &ROTATION_PAIRS {
            for &(c, d) in &ROTATION_PAIRS {
                let mut lc = LinComb::zero();
                let (ai, bi, ci, di) = (a as usize - 1, b as usize - 1, c as usize - 1, d as usize - 1);
                let terms =
                    [(cd.eta(ai, ci), b, d), (-cd.eta(ai, di), b, c), (-cd.eta(bi, ci), a, d), (cd.eta(bi, di), a, c)];
                for (coef, x, y) in terms {
                    if coef != 0 {
                        if let Some((k, s)) = self.sc.basis.rotation(x, y) {
                            lc.add_term(k, &hi.mul(&f.int(coef * s)));
                        }
                    }
                }
                self.put(BasisElement::M(a, b), BasisElement::M(c, d), lc);
            }
            for mu in 1..=4 {
                let lc = self.rotate_vector(cd, a, b, mu, BasisElement::P);
                self.put(BasisElement::M(a, b), BasisElement::P(mu), lc);
            }
            for dd in bicolor_degrees() {
                for k in 1..=4 {
                    let lc = self.rotate_vector(cd, a, b, k, |x| BasisElement::R(dd, x));
                    self.put(BasisElement::M(a, b), BasisElement::R(dd, k), lc);
                }
            }
        }
    }

    /// [M_ab, Q(d,i)] = (ℏ/2i) Σ_j S_ij Q(d,j).
    fn spinor_rotations(&mut self, s_of: impl Fn(u8, u8, Degree) -> Mat) {
        let f = self.field();
        let half = self.cfg.units.hbar.mul(&f.i().neg()).mul(&f.frac(1, 2));
        let dim = self.sc.formulation.spinor_dim();
        for &(a, b) in &ROTATION_PAIRS {
            for d in SUPERTRANSLATION_DEGREES {
                let s = s_of(a, b, d);
                for i in 1..=dim {
                    let mut lc = LinComb::zero();
                    for j in 1..=dim {
                        lc.add_term(
                            self.sc.basis.idx(BasisElement::Q(d, j)),
                            &half.mul(s.get(i as usize - 1, j as usize - 1)),
                        );
                    }
                    self.put(BasisElement::M(a, b), BasisElement::Q(d, i), lc);
                }
            }
        }
    }

    /// [Q(d,i), Q(d',j)] = coef · Σ_A (mats[A])_{ij} X_A.
    fn spinor_pairing(
        &mut self,
        d: Degree,
        dp: Degree,
        coef: &Scalar,
        mats: &[Mat; 4],
        x: impl Fn(u8) -> BasisElement,
    ) {
        let dim = self.sc.formulation.spinor_dim();
        for i in 1..=dim {
            for j in 1..=dim {
                let mut lc = LinComb::zero();
                for (a, m) in mats.iter().enumerate() {
                    lc.add_term(self.sc.basis.idx(x(a as u8 + 1)), &coef.mul(m.get(i as usize - 1, j as usize - 1)));
                }
                self.put(BasisElement::Q(d, i), BasisElement::Q(dp, j), lc);
            }
        }
    }

    fn colored_pairings(&mut self, mats: &[Mat; 4], mats_dotted: &[Mat; 4], conv: &Convention) {
        let f = self.field();
        let half = f.frac(1, 2);
        let rb = conv.phases.qq_to_r_bicolor.to_scalar(f);
        let rw = conv.phases.qq_to_r_white.to_scalar(f);
        for (d, dp) in same_orientation_pairs() {
            let c = f.one().sub(&f.q()).mul(&half).mul(&self.root(d, dp)).mul(&rb);
            self.spinor_pairing(d, dp, &c, mats, |k| BasisElement::R(d + dp, k));
        }
        for (d, dp) in mixed_orientation_pairs() {
            let c = f.one().sub(&f.q_pow(-1)).mul(&half).mul(&self.root(d, dp)).mul(&rb);
            let m = if is_positive(d) { mats } else { mats_dotted };
            self.spinor_pairing(d, dp, &c, m, |k| BasisElement::R(d + dp, k));
        }
        for (w, col) in white_anticolor_pairs() {
            let c = self.root(w, col).neg().mul(&rw);
            let m = if is_positive(w) { mats } else { mats_dotted };
            self.spinor_pairing(w, col, &c, m, |k| BasisElement::R(w + col, k));
        }
    }

    fn root(&self, d: Degree, dp: Degree) -> Scalar {
        self.cfg.sqrt_kappa(d).mul(self.cfg.sqrt_kappa(dp))
    }
}

fn raised_sigma(cd: &CliffordData) -> [Mat; 4] {
    let f = cd.field();
    std::array::from_fn(|mu| cd.sigma[mu].scale(&f.int(cd.metric[mu] as i64)))
}

/// The 74-element two-component algebra.
pub fn build_two_component(
    cfg: &CouplingConfig,
    cd: &CliffordData,
    grading: GradingConfig,
) -> Result<StructureConstants, AlgebraError> {
    let conv = cd.convention;
    let mut b = Builder::new(Formulation::Two, grading, cfg, conv);
    let f = b.field();
    b.lorentz(cd);
    b.spinor_rotations(|a, bb, d| {
        let m = cd.sigma[bb as usize - 1].mul(&cd.sigma[a as usize - 1]);
        if is_positive(d) {
            m
        } else {
            m.conj()
        }
    });
    let p = conv.phases.qq_to_p.to_scalar(f);
    let pair = raised_sigma(cd);
    for d in [Degree::WHITE, Degree::RED, Degree::GREEN, Degree::BLUE] {
        let c = cfg.kappa(d).mul(&p);
        b.spinor_pairing(d, -d, &c, &pair, BasisElement::P);
    }
    let bicolor: [Mat; 4] = if conv.raise_bicolor_index { raised_sigma(cd) } else { cd.sigma.clone() };
    let dotted = if conv.dotted_transposed { bicolor.clone().map(|m| m.transpose()) } else { bicolor.clone() };
    b.colored_pairings(&bicolor, &dotted, &conv);
    Ok(b.finish())
}

/// The 90-element four-component algebra.
pub fn build_four_component(
    cfg: &CouplingConfig,
    cd: &CliffordData,
    grading: GradingConfig,
) -> Result<StructureConstants, AlgebraError> {
    cd.validate()?;
    let conv = cd.convention;
    let mut b = Builder::new(Formulation::Four, grading, cfg, conv);
    let f = b.field();
    b.lorentz(cd);
    b.spinor_rotations(|a, bb, _| cd.gamma[a as usize - 1].mul(&cd.gamma[bb as usize - 1]));
    let gc: [Mat; 4] = std::array::from_fn(|mu| cd.gamma_upper_c(mu));
    let p = conv.phases.qq_to_p.to_scalar(f);
    for d in SUPERTRANSLATION_DEGREES {
        let c = cfg.kappa(d).mul(&p).neg();
        b.spinor_pairing(d, -d, &c, &gc, BasisElement::P);
    }
    b.colored_pairings(&gc, &gc, &conv);
    Ok(b.finish())
}

pub fn build(
    formulation: Formulation,
    cfg: &CouplingConfig,
    cd: &CliffordData,
    grading: GradingConfig,
) -> Result<StructureConstants, AlgebraError> {
    match formulation {
        Formulation::Two => build_two_component(cfg, cd, grading),
        Formulation::Four => build_four_component(cfg, cd, grading),
    }
}

/// Result of scanning a convention space.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Four-component candidates passing Jacobi, grading and antisymmetry.
    pub passing: Vec<Convention>,
    /// Four-component candidates examined (valid Clifford data only).
    pub examined: usize,
    /// Candidates rejected by the Clifford/C preconditions.
    pub rejected: usize,
    /// Two-component choices over the first passing point, with failure
    /// counts of the sorted-triple Jacobi report, best first.
    pub two_component: Vec<(Convention, usize)>,
}

/// Scans `space` in its fixed order. Jacobi is phase-invariant in the
/// bracket families (each triple involves one anticommutator family
/// linearly), so phases are carried through unchanged.
pub fn convention_search(
    space: &ConventionSpace,
    grading: GradingConfig,
    cfg: &CouplingConfig,
    stop_at_first: bool,
) -> SearchOutcome {
    let f = grading.field();
    let mut passing = Vec::new();
    let mut examined = 0;
    let mut rejected = 0;
    for conv in space.four_component_points() {
        let cd = match CliffordData::from_convention(f, &conv) {
            Ok(cd) if cd.validate().is_ok() => cd,
            _ => {
                rejected += 1;
                continue;
            }
        };
        examined += 1;
        let Ok(sc) = build_four_component(cfg, &cd, grading) else {
            rejected += 1;
            continue;
        };
        if sc.antisymmetry_report().passed() && sc.grading_report().passed() && sc.jacobi_report_canonical().passed() {
            passing.push(conv);
            if stop_at_first {
                break;
            }
        }
    }
    let mut two_component = Vec::new();
    if let Some(first) = passing.first() {
        for conv in space.two_component_points(*first) {
            let cd = CliffordData::from_convention(f, &conv).expect("valid four-component point");
            if let Ok(sc) = build_two_component(cfg, &cd, grading) {
                two_component.push((conv, sc.jacobi_report_canonical().failures.len()));
            }
        }
        two_component.sort_by_key(|x| x.1);
    }
    SearchOutcome { passing, examined, rejected, two_component }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four() -> StructureConstants {
        let g = GradingConfig::default();
        let f = g.field();
        build_four_component(&CouplingConfig::new(f), &CliffordData::frozen(f), g).unwrap()
    }

    fn two() -> StructureConstants {
        let g = GradingConfig::default();
        let f = g.field();
        build_two_component(&CouplingConfig::new(f), &CliffordData::frozen(f), g).unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(Basis::new(Formulation::Two).len(), 74);
        assert_eq!(Basis::new(Formulation::Four).len(), 90);
    }

    #[test]
    fn translation_commutes_with_supertranslation() {
        let sc = two();
        let t = sc.table(&BasisElement::P(1), &BasisElement::Q(Degree::WHITE, 1)).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn same_color_brackets_vanish() {
        let sc = four();
        for a in 1..=4 {
            for b in 1..=4 {
                assert!(sc
                    .table(&BasisElement::Q(Degree::RED, a), &BasisElement::Q(Degree::RED, b))
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn rotation_and_orthogonal_translation() {
        let sc = four();
        assert!(sc.table(&BasisElement::M(1, 2), &BasisElement::P(3)).unwrap().is_zero());
        assert!(sc.table(&BasisElement::M(1, 2), &BasisElement::M(3, 4)).unwrap().is_zero());
    }

    #[test]
    fn bicolor_bracket_coefficient() {
        let sc = two();
        let f = sc.field();
        let cd = CliffordData::frozen(f);
        let lc = sc.table(&BasisElement::Q(Degree::RED, 1), &BasisElement::Q(Degree::GREEN, 2)).unwrap();
        let rg = Degree::RED + Degree::GREEN;
        // (1−q)/2 · √2·√2 · η^AA σ_A[0][1]
        let c = f.one().sub(&f.q());
        for a in 1..=4u8 {
            let eta = f.int(cd.metric[a as usize - 1] as i64);
            let want = c.mul(&eta).mul(cd.sigma[a as usize - 1].get(0, 1));
            let k = sc.index_of(&BasisElement::R(rg, a)).unwrap();
            let got = lc.terms().iter().find(|t| t.0 == k).map(|t| t.1.clone()).unwrap_or(f.zero());
            assert_eq!(got, want, "A={a}");
        }
    }

    #[test]
    fn white_anticolor_bracket_lands_in_complementary_bicolor() {
        let sc = four();
        let lc = sc.table(&BasisElement::Q(Degree::WHITE, 1), &BasisElement::Q(Degree::ANTIRED, 2)).unwrap();
        assert!(!lc.is_zero());
        for (k, _) in lc.terms() {
            assert_eq!(sc.degree(*k), Degree::GREEN + Degree::BLUE);
        }
    }

    #[test]
    fn tables_are_antisymmetric_and_graded() {
        for sc in [two(), four()] {
            assert!(sc.antisymmetry_report().passed(), "{}", sc.antisymmetry_report());
            assert!(sc.grading_report().passed());
        }
    }

    #[test]
    fn corrupted_table_fails_grading() {
        let mut sc = four();
        let f = sc.field();
        let a = sc.index_of(&BasisElement::Q(Degree::RED, 1)).unwrap();
        let b = sc.index_of(&BasisElement::Q(Degree::GREEN, 1)).unwrap();
        let p = sc.index_of(&BasisElement::P(1)).unwrap();
        sc.set_entry(a, b, LinComb::basis(f, p));
        let rep = sc.grading_report();
        assert_eq!(rep.failures.len(), 1);
        assert!(rep.failures[0].context.contains("Q(r,1)"));
    }

    #[test]
    fn poincare_sector_is_a_lie_algebra() {
        for sc in [two(), four()] {
            let s = sc.sector(&[Degree::ZERO]);
            assert_eq!(s.len(), 10);
            assert!(sc.jacobi_report_on(&s, "poincare").passed());
            assert!(sc.closure_report(&s, "poincare").passed());
        }
    }

    #[test]
    fn white_sector_closes() {
        for sc in [two(), four()] {
            let s = sc.sector(&[Degree::ZERO, Degree::WHITE, Degree::ANTIWHITE]);
            assert!(sc.closure_report(&s, "white").passed());
        }
    }

    #[test]
    fn jacobi_examples() {
        let sc = two();
        let p = sc.index_of(&BasisElement::P(1)).unwrap();
        let q = sc.index_of(&BasisElement::Q(Degree::WHITE, 1)).unwrap();
        let qb = sc.index_of(&BasisElement::Q(Degree::ANTIWHITE, 1)).unwrap();
        assert!(sc.jacobi_residual(p, q, qb).is_zero());
        let m = sc.index_of(&BasisElement::M(1, 2)).unwrap();
        assert!(sc.jacobi_residual(m, m, m).is_zero());
    }

    #[test]
    fn bracket_is_bilinear() {
        let sc = four();
        let q = sc.element(&BasisElement::Q(Degree::RED, 1)).unwrap();
        assert!(sc.bracket(&q, &q).is_zero());
        assert!(sc.bracket(&q, &LinComb::zero()).is_zero());
    }

    #[test]
    fn singleton_search_keeps_a_valid_point() {
        let g = GradingConfig::default();
        let cfg = CouplingConfig::new(g.field());
        let out = convention_search(&ConventionSpace::singleton(Convention::FROZEN), g, &cfg, false);
        assert_eq!(out.passing, vec![Convention::FROZEN]);
        assert_eq!(out.two_component[0].0, Convention::FROZEN);
    }

    #[test]
    fn singleton_search_rejects_bad_charge_conjugation() {
        let g = GradingConfig::default();
        let cfg = CouplingConfig::new(g.field());
        // i·γ_2 alone leaves some γ^μ C antisymmetric
        let mut space = ConventionSpace::singleton(Convention::FROZEN);
        space.charge_conjugations = vec![crate::clifford::ChargeConjugation::IG2];
        let out = convention_search(&space, g, &cfg, false);
        assert!(out.passing.is_empty());
        assert_eq!(out.rejected, 1);
    }

    #[test]
    fn non_square_kappa_is_rejected() {
        let f = Field::default();
        let err = CouplingConfig::new(f).with_kappa(Degree::RED, f.int(3)).unwrap_err();
        assert!(matches!(err, AlgebraError::NonSquareKappa(_)));
        assert!(CouplingConfig::new(f).with_kappa(Degree::ANTIRED, f.int(8)).is_ok());
    }
}
