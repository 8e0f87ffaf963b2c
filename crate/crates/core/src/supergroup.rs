//! Supergroup elements [Λ|T|ζ|U], their matrix images, and the closed-form
//! product and inverse laws checked against matrix multiplication.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::grading::{bicolor_degrees, Degree, GradingConfig, SUPERTRANSLATION_DEGREES};
use crate::grassmann::{Generator, Multivector};
use crate::matrix::{Mat, SparseMatrix};
use crate::report::{Failure, Report};
use crate::representation::{
    check_homogeneous, element_matrix_grassmann, ElementCoordinates, LadderStep, Representation, RepresentationError,
    BLOCK_COUNT, DIM, VECTOR_BLOCKS,
};
use crate::scalar::{Field, Scalar};
use crate::superalgebra::{BasisElement, ROTATION_PAIRS};

#[derive(Debug, Error)]
pub enum SupergroupError {
    #[error("matrix is not nilpotent: M² is nonzero at ({row},{col}) in block {block:?}")]
    NotNilpotent { row: usize, col: usize, block: (usize, usize) },
    #[error("Λ is not invertible over the even subalgebra")]
    SingularLambda,
    #[error(transparent)]
    Representation(#[from] RepresentationError),
}

/// Order of the supertranslation factors in the product decomposition.
pub const FACTOR_ORDER: [Degree; 8] = [
    Degree::WHITE,
    Degree::RED,
    Degree::GREEN,
    Degree::BLUE,
    Degree::ANTIWHITE,
    Degree::ANTIRED,
    Degree::ANTIGREEN,
    Degree::ANTIBLUE,
];

/// How the white terms of the ρ correction are paired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RhoPairing {
    /// ρ^{r+g} pairs (1̄, b) and ρ^{r̄+ḡ} pairs (1, b̄), as displayed.
    #[default]
    Literal,
    /// The white pairs swapped so that every term has the slot's degree.
    DegreeCorrected,
}

/// Which correction terms `compose` adds to T and U.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProductLaw {
    /// τ and ρ as displayed.
    #[default]
    Printed,
    /// τ as displayed, ρ with `RhoPairing::DegreeCorrected`.
    DegreeCorrected,
    /// τ and ρ read off ½[X, X′] in the representation, where X and X′ are
    /// the supertranslation parts of the two factors.
    Bracket,
}

/// How a group element is turned into a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parameterization {
    /// F_U · Π F_ζ^d · F_T · F_Λ, as displayed.
    #[default]
    Ordered,
    /// exp(X) · F_Λ with X the sum of all translation-type terms.
    Exponential,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GroupOptions {
    pub law: ProductLaw,
    pub parameterization: Parameterization,
    /// Rotate ζ′ by ((γ₄ᵀ)⁻¹ S γ₄ᵀ)^# and U′ by Λ^# instead of S and Λ.
    pub derived_actions: bool,
}

impl GroupOptions {
    /// The law read off the representation in every respect.
    pub const DERIVED: GroupOptions = GroupOptions {
        law: ProductLaw::Bracket,
        parameterization: Parameterization::Exponential,
        derived_actions: true,
    };

    pub fn label(&self) -> String {
        let actions = if self.derived_actions { "derived" } else { "printed" };
        format!("law={:?} parameterization={:?} actions={actions}", self.law, self.parameterization).to_lowercase()
    }
}

/// The (left ζ, right ζ′) degree pairs feeding ρ^A for each bicolor A.
/// Four families are listed; the rest follow by r → g → b → r.
pub fn rho_pairs(mode: RhoPairing) -> BTreeMap<Degree, Vec<(Degree, Degree)>> {
    use Degree as D;
    let (w, wb) = (D::WHITE, D::ANTIWHITE);
    let (r, g, b) = (D::RED, D::GREEN, D::BLUE);
    let (rb, gb, bb) = (D::ANTIRED, D::ANTIGREEN, D::ANTIBLUE);
    let (white_rg, white_rgbar) = match mode {
        RhoPairing::Literal => ([(wb, b), (b, wb)], [(w, bb), (bb, w)]),
        RhoPairing::DegreeCorrected => ([(w, bb), (bb, w)], [(wb, b), (b, wb)]),
    };
    let seeds: Vec<(Degree, Vec<(Degree, Degree)>)> = vec![
        (r + g, [vec![(r, g), (g, r)], white_rg.to_vec()].concat()),
        (rb + gb, [vec![(rb, gb), (gb, rb)], white_rgbar.to_vec()].concat()),
        (r + gb, vec![(r, gb), (gb, r)]),
        (rb + g, vec![(rb, g), (g, rb)]),
    ];
    let mut out = BTreeMap::new();
    for (slot, pairs) in seeds {
        let (mut slot, mut pairs) = (slot, pairs);
        for _ in 0..3 {
            out.insert(slot, pairs.clone());
            slot = slot.rotate_colors();
            pairs = pairs.iter().map(|(x, y)| (x.rotate_colors(), y.rotate_colors())).collect();
        }
    }
    out
}

pub(crate) type MvMat = SparseMatrix<Multivector>;

pub(crate) fn mv(s: Scalar) -> Multivector {
    Multivector::scalar(s)
}

pub(crate) fn lift4(m: &Mat) -> MvMat {
    let mut out = SparseMatrix::zero(m.field(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m.get(r, c).is_zero() {
                out.set(r, c, mv(m.get(r, c).clone()));
            }
        }
    }
    out
}

pub(crate) fn apply(m: &MvMat, v: &[Multivector]) -> Vec<Multivector> {
    (0..v.len())
        .map(|r| {
            let mut acc = Multivector::zero(m.field());
            for (c, x) in v.iter().enumerate() {
                let e = m.get(r, c);
                if !e.is_zero() && !x.is_zero() {
                    acc.add_assign(&e.mul(x));
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn vec_add(a: &[Multivector], b: &[Multivector]) -> Vec<Multivector> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn vec_neg(a: &[Multivector]) -> Vec<Multivector> {
    a.iter().map(Multivector::neg).collect()
}

pub(crate) fn zeros(field: Field, n: usize) -> Vec<Multivector> {
    vec![Multivector::zero(field); n]
}

/// exp of a nilpotent even matrix, summed until the terms vanish.
fn exp_series(n: &MvMat) -> MvMat {
    let field = n.field();
    let mut out = SparseMatrix::identity(field, n.dim());
    let mut term = SparseMatrix::identity(field, n.dim());
    let mut k = 1i64;
    loop {
        term = term.mul(n).scale(&field.frac(1, k));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        k += 1;
    }
}

/// Inverse of a matrix with invertible numeric body: B(1+X) ↦ Σ(−X)^k B⁻¹.
fn invert_even(m: &MvMat) -> Result<MvMat, SupergroupError> {
    let field = m.field();
    let n = m.dim();
    let mut body = Mat::zeros(field, n, n);
    for (r, c, v) in m.entries() {
        body.set(r, c, v.body());
    }
    let body_inv = lift4(&body.inverse().map_err(|_| SupergroupError::SingularLambda)?);
    let x = body_inv.mul(&m.sub(&lift4(&body)));
    let mut sum = SparseMatrix::identity(field, n);
    let mut term = SparseMatrix::identity(field, n);
    loop {
        term = term.mul(&x).neg();
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum.mul(&body_inv))
}

/// An element [Λ|T|ζ|U]. The spinor image of Λ is carried alongside Λ
/// because Λ determines it only up to sign.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub lambda: MvMat,
    pub spin: MvMat,
    pub t: Vec<Multivector>,
    pub zeta: BTreeMap<Degree, Vec<Multivector>>,
    pub u: BTreeMap<Degree, Vec<Multivector>>,
}

impl GroupElement {
    pub fn identity(field: Field) -> GroupElement {
        GroupElement {
            lambda: SparseMatrix::identity(field, 4),
            spin: SparseMatrix::identity(field, 4),
            t: zeros(field, 4),
            zeta: SUPERTRANSLATION_DEGREES.iter().map(|&d| (d, zeros(field, 4))).collect(),
            u: bicolor_degrees().iter().map(|&d| (d, zeros(field, 4))).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.lambda.field()
    }

    pub fn with_lorentz(mut self, lambda: MvMat, spin: MvMat) -> GroupElement {
        self.lambda = lambda;
        self.spin = spin;
        self
    }

    pub fn with_translation(mut self, t: Vec<Multivector>) -> GroupElement {
        self.t = t;
        self
    }

    pub fn with_zeta(mut self, d: Degree, v: Vec<Multivector>) -> GroupElement {
        self.zeta.insert(d, v);
        self
    }

    pub fn with_u(mut self, d: Degree, v: Vec<Multivector>) -> GroupElement {
        self.u.insert(d, v);
        self
    }

    /// Every ζ^d entry has degree d and every U^A entry degree A.
    pub fn degrees_ok(&self, grading: &GradingConfig) -> bool {
        let ok = |d: Degree, v: &[Multivector]| {
            v.iter().all(|x| x.is_zero() || x.homogeneous_degree() == Some(grading.reduce(d)))
        };
        self.zeta.iter().all(|(d, v)| ok(*d, v))
            && self.u.iter().all(|(d, v)| ok(*d, v))
            && ok(Degree::ZERO, &self.t)
            && self.lambda.entries().all(|(_, _, x)| x.homogeneous_degree() == Some(Degree::ZERO))
    }

    /// Λᵀ η Λ = η.
    pub fn preserves_metric(&self, metric: [i8; 4]) -> bool {
        let field = self.field();
        let mut eta = SparseMatrix::zero(field, 4);
        for (k, s) in metric.iter().enumerate() {
            eta.set(k, k, mv(field.int(*s as i64)));
        }
        let mut lt = SparseMatrix::zero(field, 4);
        for (r, c, v) in self.lambda.entries() {
            lt.set(c, r, v.clone());
        }
        lt.mul(&eta).mul(&self.lambda) == eta
    }
}

/// Closed-form group law parameterized by the representation data.
pub struct Supergroup<'a> {
    pub rep: &'a Representation,
    pub options: GroupOptions,
    grading: GradingConfig,
    readout: Vec<(Slot, usize, usize, Scalar)>,
    /// Per block: rotations act there as −(first spinor block)ᵀ.
    contragredient: Vec<bool>,
    rho_pairs: BTreeMap<Degree, Vec<(Degree, Degree)>>,
    /// γ₄ γ^μ for μ = 1..4.
    g4_gmu: [Mat; 4],
}

impl<'a> Supergroup<'a> {
    pub fn new(rep: &'a Representation, options: GroupOptions) -> Supergroup<'a> {
        let cd = &rep.clifford;
        let pairing = match options.law {
            ProductLaw::DegreeCorrected => RhoPairing::DegreeCorrected,
            _ => RhoPairing::Literal,
        };
        Supergroup {
            rep,
            options,
            grading: GradingConfig::from_field(rep.field()),
            readout: translation_readout(rep),
            contragredient: contragredient_blocks(rep),
            rho_pairs: rho_pairs(pairing),
            g4_gmu: std::array::from_fn(|mu| cd.gamma[3].mul(&cd.gamma_upper(mu))),
        }
    }

    pub fn field(&self) -> Field {
        self.rep.field()
    }

    pub fn contragredient_flags(&self) -> &[bool] {
        &self.contragredient
    }

    pub fn grading(&self) -> &GradingConfig {
        &self.grading
    }

    /// i (ζ̃)^# γ₄γ^μ S ζ′, with S the matrix applied to ζ′.
    fn pairing(&self, zeta: &[Multivector], mu: usize, spin: &MvMat, zeta2: &[Multivector]) -> Multivector {
        let field = self.field();
        let v = apply(spin, zeta2);
        let m = &self.g4_gmu[mu];
        let mut acc = Multivector::zero(field);
        for (a, za) in zeta.iter().enumerate() {
            if za.is_zero() {
                continue;
            }
            let za = za.adjoint();
            for (b, vb) in v.iter().enumerate() {
                let g = m.get(a, b);
                if !g.is_zero() && !vb.is_zero() {
                    acc.add_assign(&za.mul(vb).scale(g));
                }
            }
        }
        acc.scale(&field.i())
    }

    /// The closed-form product [Λ|T|ζ|U][Λ′|T′|ζ′|U′].
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let lambda = g.lambda.mul(&h.lambda);
        let spin = g.spin.mul(&h.spin);
        let action = self.spinor_action(&g.spin);
        let rotated: BTreeMap<Degree, Vec<Multivector>> = h.zeta.iter().map(|(d, z)| (*d, apply(&action, z))).collect();
        let mut t = vec_add(&g.t, &apply(&g.lambda, &h.t));
        let zeta = g.zeta.iter().map(|(d, z)| (*d, vec_add(z, &rotated[d]))).collect();
        let vector = self.bicolor_action(&g.lambda);
        let mut u: BTreeMap<Degree, Vec<Multivector>> =
            g.u.iter().map(|(d, x)| (*d, vec_add(x, &apply(&vector, &h.u[d])))).collect();
        let (tau, rho) = match self.options.law {
            ProductLaw::Bracket => self.bracket_terms(&g.zeta, &rotated),
            _ => self.printed_terms(&g.zeta, &action, &h.zeta),
        };
        for (x, y) in t.iter_mut().zip(&tau) {
            x.add_assign(y);
        }
        for (d, v) in rho {
            for (x, y) in u.get_mut(&d).expect("bicolor slot").iter_mut().zip(&v) {
                x.add_assign(y);
            }
        }
        GroupElement { lambda, spin, t, zeta, u }
    }

    /// The matrix applied to ζ′ in a product. The printed law uses the
    /// spinor image S itself. Element matrices couple to ζ^# through γ₄ᵀ,
    /// and conjugation by Γ(Λ) multiplies γ₄ᵀζ^# by S, so the law read off
    /// the representation uses ((γ₄ᵀ)⁻¹ S γ₄ᵀ)^# entrywise.
    pub fn spinor_action(&self, spin: &MvMat) -> MvMat {
        if !self.options.derived_actions {
            return spin.clone();
        }
        let g4t = lift4(&self.rep.clifford.gamma[3].transpose());
        let g4t_inv = lift4(&self.rep.clifford.gamma[3].transpose().inverse().expect("γ₄ is invertible"));
        g4t_inv.mul(spin).mul(&g4t).map(Multivector::adjoint)
    }

    /// The matrix applied to U′ in a product: Λ as printed, Λ^# entrywise
    /// when read off the representation (U enters element matrices as U^#).
    pub fn bicolor_action(&self, lambda: &MvMat) -> MvMat {
        if !self.options.derived_actions {
            return lambda.clone();
        }
        lambda.map(Multivector::adjoint)
    }

    /// τ and ρ from the displayed bilinears.
    fn printed_terms(
        &self,
        zeta: &BTreeMap<Degree, Vec<Multivector>>,
        spin: &MvMat,
        zeta2: &BTreeMap<Degree, Vec<Multivector>>,
    ) -> (Vec<Multivector>, BTreeMap<Degree, Vec<Multivector>>) {
        let field = self.field();
        let mut tau = zeros(field, 4);
        for (mu, x) in tau.iter_mut().enumerate() {
            for d in SUPERTRANSLATION_DEGREES {
                x.add_assign(&self.pairing(&zeta[&d], mu, spin, &zeta2[&-d]));
            }
        }
        let mut rho = BTreeMap::new();
        for (slot, pairs) in &self.rho_pairs {
            let mut v = zeros(field, 4);
            for (a, x) in v.iter_mut().enumerate() {
                for (d1, d2) in pairs {
                    x.add_assign(&self.pairing(&zeta[d1], a, spin, &zeta2[d2]));
                }
            }
            rho.insert(*slot, v);
        }
        (tau, rho)
    }

    /// τ and ρ read off ½[X, X′] for the supertranslation parts X, X′.
    fn bracket_terms(
        &self,
        zeta: &BTreeMap<Degree, Vec<Multivector>>,
        zeta2: &BTreeMap<Degree, Vec<Multivector>>,
    ) -> (Vec<Multivector>, BTreeMap<Degree, Vec<Multivector>>) {
        let x = self.odd_matrix(zeta);
        let y = self.odd_matrix(zeta2);
        let half = self.field().frac(1, 2);
        let comm = x.mul(&y).sub(&y.mul(&x)).scale(&half);
        self.read_translations(&comm)
    }

    /// Σ ζ^{a#} (i/√ℏ)(γ₄)_{ab} Γ(Q_b) over all supertranslation degrees.
    fn odd_matrix(&self, zeta: &BTreeMap<Degree, Vec<Multivector>>) -> MvMat {
        let mut coords = ElementCoordinates::new();
        for (d, v) in zeta {
            for (a, x) in v.iter().enumerate() {
                coords = coords.set(BasisElement::Q(*d, a as u8 + 1), x.clone());
            }
        }
        element_matrix_grassmann(self.rep, &coords).expect("ζ entries carry their slot degree")
    }

    /// T and U coordinates of a matrix in the span of the translation
    /// generators, read from one pivot entry per generator.
    pub fn read_translations(&self, m: &MvMat) -> (Vec<Multivector>, BTreeMap<Degree, Vec<Multivector>>) {
        let field = self.field();
        let mut t = zeros(field, 4);
        let mut u: BTreeMap<Degree, Vec<Multivector>> =
            bicolor_degrees().iter().map(|&d| (d, zeros(field, 4))).collect();
        for (slot, r, c, inv) in &self.readout {
            let v = m.get(*r, *c).scale(inv);
            match slot {
                Slot::T(mu) => t[*mu] = v,
                // the U coordinates enter the element matrix through U^#
                Slot::U(d, a) => u.get_mut(d).expect("bicolor slot")[*a] = v.adjoint(),
            }
        }
        (t, u)
    }

    /// [Λ⁻¹ | −Λ⁻¹T | −Γspin(Λ⁻¹)ζ | −Λ⁻¹U].
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, SupergroupError> {
        let lambda = invert_even(&g.lambda)?;
        let spin = invert_even(&g.spin)?;
        let action = self.spinor_action(&spin);
        let vector = self.bicolor_action(&lambda);
        Ok(GroupElement {
            t: vec_neg(&apply(&lambda, &g.t)),
            zeta: g.zeta.iter().map(|(d, z)| (*d, vec_neg(&apply(&action, z)))).collect(),
            u: g.u.iter().map(|(d, x)| (*d, vec_neg(&apply(&vector, x)))).collect(),
            lambda,
            spin,
        })
    }

    /// Γ([Λ|0|0|0]): Λ ⊕ 1 on the vector blocks, the spinor image elsewhere.
    /// Spinor blocks on which the rotations act contragrediently receive
    /// (S⁻¹)ᵀ instead of S.
    pub fn lorentz_matrix(&self, lambda: &MvMat, spin: &MvMat) -> MvMat {
        let field = self.field();
        let layout = &self.rep.layout;
        let contra = if self.contragredient.iter().any(|x| *x) {
            Some(transpose(&invert_even(spin).expect("spinor image is invertible")))
        } else {
            None
        };
        let mut out = SparseMatrix::zero(field, DIM);
        for k in 0..BLOCK_COUNT {
            let o = layout.offset(k);
            let src = match (k < VECTOR_BLOCKS, &contra) {
                (true, _) => lambda,
                (false, Some(c)) if self.contragredient[k] => c,
                _ => spin,
            };
            for (r, c, v) in src.entries() {
                out.set(o + r, o + c, v.clone());
            }
            if k < VECTOR_BLOCKS {
                out.set(o + 4, o + 4, Multivector::one(field));
            }
        }
        out
    }

    /// The four factor matrices, left to right: U, ζ^d in `FACTOR_ORDER`, T, Λ.
    pub fn factors(&self, g: &GroupElement) -> Result<Vec<MvMat>, SupergroupError> {
        let mut out = Vec::new();
        let mut coords = ElementCoordinates::new();
        for (d, v) in &g.u {
            for (a, x) in v.iter().enumerate() {
                coords = coords.set(BasisElement::R(*d, a as u8 + 1), x.clone());
            }
        }
        out.push(exp_nilpotent(&element_matrix_grassmann(self.rep, &coords)?, self.rep)?);
        for d in FACTOR_ORDER {
            let mut coords = ElementCoordinates::new();
            for (a, x) in g.zeta[&d].iter().enumerate() {
                coords = coords.set(BasisElement::Q(d, a as u8 + 1), x.clone());
            }
            out.push(exp_nilpotent(&element_matrix_grassmann(self.rep, &coords)?, self.rep)?);
        }
        let mut coords = ElementCoordinates::new();
        for (mu, x) in g.t.iter().enumerate() {
            coords = coords.set(BasisElement::P(mu as u8 + 1), x.clone());
        }
        out.push(exp_nilpotent(&element_matrix_grassmann(self.rep, &coords)?, self.rep)?);
        out.push(self.lorentz_matrix(&g.lambda, &g.spin));
        Ok(out)
    }

    /// Γ(g) as the product of its factor matrices.
    pub fn rep_of_element(&self, g: &GroupElement) -> Result<MvMat, SupergroupError> {
        if self.options.parameterization == Parameterization::Exponential {
            return self.exponential_matrix(g);
        }
        let mut it = self.factors(g)?.into_iter();
        let first = it.next().expect("factors");
        Ok(it.fold(first, |acc, m| acc.mul(&m)))
    }

    /// exp(X)·Γ([Λ|0|0|0]) with X the sum of every translation-type term.
    pub fn exponential_matrix(&self, g: &GroupElement) -> Result<MvMat, SupergroupError> {
        let mut coords = ElementCoordinates::new();
        for (mu, x) in g.t.iter().enumerate() {
            coords = coords.set(BasisElement::P(mu as u8 + 1), x.clone());
        }
        for (d, v) in &g.zeta {
            for (a, x) in v.iter().enumerate() {
                coords = coords.set(BasisElement::Q(*d, a as u8 + 1), x.clone());
            }
        }
        for (d, v) in &g.u {
            for (a, x) in v.iter().enumerate() {
                coords = coords.set(BasisElement::R(*d, a as u8 + 1), x.clone());
            }
        }
        let x = element_matrix_grassmann(self.rep, &coords)?;
        Ok(exp_series(&x).mul(&self.lorentz_matrix(&g.lambda, &g.spin)))
    }

    /// (i/ℏ)Γ(M_k) restricted to the first vector block and the first spinor block.
    pub(crate) fn rotation_blocks(&self, k: usize) -> (Mat, Mat) {
        let field = self.field();
        let factor = field.i().div(&self.rep.coupling.units.hbar).expect("ℏ is invertible");
        let g = self.rep.gamma(k);
        let o = self.rep.layout.offset(VECTOR_BLOCKS);
        let (mut v, mut s) = (Mat::zeros(field, 4, 4), Mat::zeros(field, 4, 4));
        for r in 0..4 {
            for c in 0..4 {
                v.set(r, c, g.get(r, c).mul(&factor));
                s.set(r, c, g.get(o + r, o + c).mul(&factor));
            }
        }
        (v, s)
    }

    /// Λ₀·exp(N) and its spinor image. Λ₀ is the quarter turn generated by
    /// rotation `k`; N = (i/ℏ)ΣΩ_k M_k for even nilpotent Ω.
    pub fn lorentz(&self, quarter_turn: Option<usize>, omega: &[(usize, Multivector)]) -> (MvMat, MvMat) {
        let field = self.field();
        let (mut lambda, mut spin) = (SparseMatrix::identity(field, 4), SparseMatrix::identity(field, 4));
        if let Some(k) = quarter_turn {
            let (kv, js) = self.rotation_blocks(k);
            // exp(π/2·K) = 1 + K + K² when K³ = −K; for J² = −¼ the spinor
            // image is (1 + 2J)/√2
            lambda = lift4(&Mat::identity(field, 4).add(&kv).add(&kv.mul(&kv)));
            let half = field.sqrt2().mul(&field.frac(1, 2));
            spin = lift4(&Mat::identity(field, 4).add(&js.scale(&field.int(2))).scale(&half));
        }
        if !omega.is_empty() {
            let (mut nv, mut ns) = (SparseMatrix::zero(field, 4), SparseMatrix::zero(field, 4));
            for (k, w) in omega {
                let (kv, js) = self.rotation_blocks(*k);
                nv = nv.add(&lift4(&kv).left_mul_entries(w));
                ns = ns.add(&lift4(&js).left_mul_entries(w));
            }
            lambda = lambda.mul(&exp_series(&nv));
            spin = spin.mul(&exp_series(&ns));
        }
        (lambda, spin)
    }

    /// Rotations whose quarter turn has the closed form above.
    pub fn quarter_turn_planes(&self) -> Vec<usize> {
        let field = self.field();
        let quarter = Mat::identity(field, 4).scale(&field.frac(-1, 4));
        (0..ROTATION_PAIRS.len())
            .filter(|&k| {
                let (kv, js) = self.rotation_blocks(k);
                kv.mul(&kv).mul(&kv) == kv.neg() && js.mul(&js) == quarter
            })
            .collect()
    }
}

fn transpose(m: &MvMat) -> MvMat {
    let mut out = SparseMatrix::zero(m.field(), m.dim());
    for (r, c, v) in m.entries() {
        out.set(c, r, v.clone());
    }
    out
}

fn contragredient_blocks(rep: &Representation) -> Vec<bool> {
    let field = rep.field();
    let layout = &rep.layout;
    let block = |g: &SparseMatrix<Scalar>, k: usize| {
        let o = layout.offset(k);
        let mut m = Mat::zeros(field, 4, 4);
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, g.get(o + r, o + c));
            }
        }
        m
    };
    (0..BLOCK_COUNT)
        .map(|k| {
            k >= VECTOR_BLOCKS
                && (0..ROTATION_PAIRS.len()).all(|j| {
                    let g = rep.gamma(j);
                    block(g, k) == block(g, VECTOR_BLOCKS).transpose().neg()
                })
                && (0..ROTATION_PAIRS.len()).any(|j| {
                    let g = rep.gamma(j);
                    block(g, k) != block(g, VECTOR_BLOCKS)
                })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    T(usize),
    U(Degree, usize),
}

/// For each translation generator, an entry where only its matrix is
/// nonzero, with the inverse of the value there. Element matrices carry
/// (i/ℏ) in front of every translation generator.
fn translation_readout(rep: &Representation) -> Vec<(Slot, usize, usize, Scalar)> {
    let field = rep.field();
    let factor = field.i().div(&rep.coupling.units.hbar).expect("ℏ is invertible");
    let mut mats: Vec<(Slot, &SparseMatrix<Scalar>)> = Vec::new();
    for mu in 0..4 {
        mats.push((Slot::T(mu), rep.gamma_of(&BasisElement::P(mu as u8 + 1)).expect("P is a basis element")));
    }
    for d in bicolor_degrees() {
        for a in 0..4 {
            let e = BasisElement::R(d, a as u8 + 1);
            mats.push((Slot::U(d, a), rep.gamma_of(&e).expect("R is a basis element")));
        }
    }
    let mut hits: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (_, m) in &mats {
        for (r, c, _) in m.entries() {
            *hits.entry((r, c)).or_default() += 1;
        }
    }
    mats.iter()
        .map(|(slot, m)| {
            let (r, c, v) = m
                .entries()
                .find(|(r, c, _)| hits[&(*r, *c)] == 1)
                .expect("every translation generator has a private entry");
            (*slot, r, c, v.mul(&factor).inv().expect("nonzero pivot"))
        })
        .collect()
}

/// 1 + M, after checking M² = 0.
pub fn exp_nilpotent(m: &MvMat, rep: &Representation) -> Result<MvMat, SupergroupError> {
    let sq = m.mul(m);
    if let Some((row, col, _)) = sq.entries().next() {
        let block = (rep.layout.block_of(row), rep.layout.block_of(col));
        return Err(SupergroupError::NotNilpotent { row, col, block });
    }
    Ok(SparseMatrix::identity(m.field(), m.dim()).add(m))
}

/// Allocates fresh parameter generators.
#[derive(Clone, Debug)]
pub struct ParameterAlgebra {
    grading: GradingConfig,
    next: u32,
}

impl ParameterAlgebra {
    pub fn new(grading: GradingConfig) -> ParameterAlgebra {
        ParameterAlgebra { grading, next: 1 }
    }

    pub fn fresh(&mut self, degree: Degree) -> Multivector {
        let g = self.fresh_generator(degree);
        Multivector::generator(self.grading.field(), g)
    }

    pub fn fresh_generator(&mut self, degree: Degree) -> Generator {
        let g = Generator::param(&self.grading, self.next, degree);
        self.next += 1;
        g
    }

    pub fn allocated(&self) -> u32 {
        self.next - 1
    }
}

fn small_rational(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    let choices = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1)];
    let (n, d) = *choices.choose(rng).unwrap();
    field.frac(n, d)
}

/// A random element with at most `budget` fresh generators.
pub fn random_element(
    group: &Supergroup,
    params: &mut ParameterAlgebra,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> GroupElement {
    let field = group.field();
    let planes = group.quarter_turn_planes();
    let mut used = 0;
    let turn = if rng.gen_bool(0.5) { planes.choose(rng).copied() } else { None };
    let mut omega = Vec::new();
    if budget >= 2 && rng.gen_bool(0.3) {
        let d = *SUPERTRANSLATION_DEGREES.choose(rng).unwrap();
        let w = params.fresh(d).mul(&params.fresh(-d)).scale(&small_rational(rng, field));
        omega.push((rng.gen_range(0..ROTATION_PAIRS.len()), w));
        used += 2;
    }
    let (lambda, spin) = group.lorentz(turn, &omega);
    let t = (0..4)
        .map(|_| if rng.gen_bool(0.5) { mv(small_rational(rng, field)) } else { Multivector::zero(field) })
        .collect();
    let mut g = GroupElement::identity(field).with_lorentz(lambda, spin).with_translation(t);
    let bicolor = bicolor_degrees();
    while used < budget {
        let c = small_rational(rng, field);
        let a = rng.gen_range(0..4);
        if rng.gen_bool(0.6) {
            let d = *SUPERTRANSLATION_DEGREES.choose(rng).unwrap();
            let x = params.fresh(d).scale(&c);
            g.zeta.get_mut(&d).unwrap()[a].add_assign(&x);
        } else {
            let d = *bicolor.choose(rng).unwrap();
            let x = params.fresh(d).scale(&c);
            g.u.get_mut(&d).unwrap()[a].add_assign(&x);
        }
        used += 1;
    }
    g
}

/// Element with a single ζ^d component set to a fresh generator.
pub fn zeta_probe(field: Field, params: &mut ParameterAlgebra, d: Degree, a: usize) -> GroupElement {
    let mut v = zeros(field, 4);
    v[a] = params.fresh(d);
    GroupElement::identity(field).with_zeta(d, v)
}

fn describe(g: &GroupElement) -> String {
    let mut parts = Vec::new();
    for (d, v) in &g.zeta {
        for (a, x) in v.iter().enumerate() {
            if !x.is_zero() {
                parts.push(format!("zeta[{}][{}]={x}", d.label(), a + 1));
            }
        }
    }
    for (d, v) in &g.u {
        for (a, x) in v.iter().enumerate() {
            if !x.is_zero() {
                parts.push(format!("U[{}][{}]={x}", d.label(), a + 1));
            }
        }
    }
    if parts.is_empty() {
        "no odd parameters".into()
    } else {
        parts.join(", ")
    }
}

fn first_difference(a: &MvMat, b: &MvMat) -> Option<(usize, usize, String, String)> {
    let diff = a.sub(b);
    let first = diff.entries().next().map(|(r, c, _)| (r, c));
    first.map(|(r, c)| (r, c, a.get(r, c).to_string(), b.get(r, c).to_string()))
}

/// Supergroup checks with fixed seeds.
pub struct GroupSuite<'a> {
    pub group: Supergroup<'a>,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
}

impl<'a> GroupSuite<'a> {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Random pairs (g, h) built over one shared parameter algebra.
    fn pairs(&self, stream: u64) -> Vec<(GroupElement, GroupElement)> {
        (0..self.samples)
            .map(|k| {
                let mut rng = self.rng(stream * 1_000_003 + k as u64);
                let mut params = ParameterAlgebra::new(*self.group.grading());
                let g = random_element(&self.group, &mut params, &mut rng, self.budget);
                let h = random_element(&self.group, &mut params, &mut rng, self.budget);
                (g, h)
            })
            .collect()
    }

    /// Γ(compose(g,h)) = Γ(g)Γ(h) for random pairs, tallied per slot family.
    pub fn fidelity_report(&self) -> Report {
        let group = &self.group;
        let mut report = Report::new("supergroup.fidelity")
            .with_config("seed", self.seed)
            .with_config("samples", self.samples)
            .with_config("options", group.options.label());
        let parts: Vec<Report> = self
            .pairs(1)
            .par_iter()
            .map(|(g, h)| {
                let mut part = Report::new("supergroup.fidelity");
                let lhs = group.rep_of_element(&group.compose(g, h));
                let rhs = group.rep_of_element(g).and_then(|a| Ok(a.mul(&group.rep_of_element(h)?)));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => match first_difference(&l, &r) {
                        None => part.case(),
                        Some((row, col, a, b)) => {
                            part.cases += 1;
                            let layout = &group.rep.layout;
                            part.tally(format!("cell ({},{})", layout.block_of(row), layout.block_of(col)), 1);
                            part.failures.push(Failure {
                                context: format!("g: {}; h: {} at ({row},{col})", describe(g), describe(h)),
                                lhs: a,
                                rhs: b,
                            });
                        }
                    },
                    (l, r) => {
                        part.cases += 1;
                        part.fail("matrix construction", format!("{:?}", l.err()), format!("{:?}", r.err()));
                    }
                }
                part
            })
            .collect();
        for p in parts {
            report.absorb(p);
        }
        report
    }

    /// Targeted products ζ^{d1} · ζ′^{d2} for every pair that feeds τ or ρ,
    /// so that each displayed formula and each color rotation is exercised.
    pub fn pairing_report(&self) -> Report {
        let group = &self.group;
        let field = group.field();
        let mut report = Report::new("supergroup.pairings").with_config("options", group.options.label());
        let mut probes: Vec<(String, Degree, Degree)> = Vec::new();
        for d in SUPERTRANSLATION_DEGREES {
            probes.push(("T".into(), d, -d));
        }
        for d1 in SUPERTRANSLATION_DEGREES {
            for d2 in SUPERTRANSLATION_DEGREES {
                let sum = d1 + d2;
                if bicolor_degrees().contains(&sum) {
                    probes.push((format!("U[{}]", sum.label()), d1, d2));
                }
            }
        }
        for (slot, d1, d2) in probes {
            for a in 0..4 {
                for b in 0..4 {
                    let mut params = ParameterAlgebra::new(*group.grading());
                    let g = zeta_probe(field, &mut params, d1, a);
                    let h = zeta_probe(field, &mut params, d2, b);
                    let lhs = group.rep_of_element(&group.compose(&g, &h));
                    let rhs = group.rep_of_element(&g).and_then(|x| Ok(x.mul(&group.rep_of_element(&h)?)));
                    let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r);
                    report.check(ok, || Failure {
                        context: format!(
                            "{slot} from zeta[{}][{}] zeta'[{}][{}]",
                            d1.label(),
                            a + 1,
                            d2.label(),
                            b + 1
                        ),
                        lhs: "closed form".into(),
                        rhs: "matrix product".into(),
                    });
                    if !ok {
                        report.tally(format!("{slot} <- ({},{})", d1.label(), d2.label()), 1);
                    }
                }
            }
        }
        report
    }

    pub fn associativity_report(&self) -> Report {
        let group = &self.group;
        let mut report = Report::new("supergroup.associativity").with_config("seed", self.seed);
        let parts: Vec<Report> = (0..self.samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = self.rng(2_000_000 + k as u64);
                let mut params = ParameterAlgebra::new(*group.grading());
                let budget = self.budget.min(4);
                let g = random_element(group, &mut params, &mut rng, budget);
                let h = random_element(group, &mut params, &mut rng, budget);
                let x = random_element(group, &mut params, &mut rng, budget);
                let left = group.compose(&group.compose(&g, &h), &x);
                let right = group.compose(&g, &group.compose(&h, &x));
                let mut part = Report::new("supergroup.associativity");
                part.check(left == right, || Failure {
                    context: format!("sample {k}: g: {}; h: {}; k: {}", describe(&g), describe(&h), describe(&x)),
                    lhs: "(gh)k".into(),
                    rhs: "g(hk)".into(),
                });
                part
            })
            .collect();
        for p in parts {
            report.absorb(p);
        }
        report
    }

    pub fn inverse_report(&self) -> Report {
        let group = &self.group;
        let field = group.field();
        let identity = GroupElement::identity(field);
        let mut report = Report::new("supergroup.inverse").with_config("seed", self.seed);
        let parts: Vec<Report> = (0..self.samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = self.rng(3_000_000 + k as u64);
                let mut params = ParameterAlgebra::new(*group.grading());
                let g = random_element(group, &mut params, &mut rng, self.budget);
                let mut part = Report::new("supergroup.inverse");
                match group.inverse(&g) {
                    Ok(inv) => {
                        for (side, prod) in [("g*g^-1", group.compose(&g, &inv)), ("g^-1*g", group.compose(&inv, &g))] {
                            part.check(prod == identity, || Failure {
                                context: format!("sample {k} {side}: {}", describe(&g)),
                                lhs: describe(&prod),
                                rhs: "identity".into(),
                            });
                        }
                        let m = group.rep_of_element(&g).and_then(|a| Ok(a.mul(&group.rep_of_element(&inv)?)));
                        let ok = matches!(&m, Ok(x) if *x == SparseMatrix::identity(field, DIM));
                        part.check(ok, || Failure {
                            context: format!("sample {k} matrix Γ(g)Γ(g^-1): {}", describe(&g)),
                            lhs: "product".into(),
                            rhs: "identity".into(),
                        });
                    }
                    Err(e) => part.fail(format!("sample {k}"), e.to_string(), "invertible"),
                }
                part
            })
            .collect();
        for p in parts {
            report.absorb(p);
        }
        report
    }

    /// Γ(g) is a degree-zero supermatrix and Λ preserves the metric.
    pub fn homogeneity_report(&self) -> Report {
        let group = &self.group;
        let mut report = Report::new("supergroup.homogeneity").with_config("seed", self.seed);
        for k in 0..self.samples.min(20) {
            let mut rng = self.rng(4_000_000 + k as u64);
            let mut params = ParameterAlgebra::new(*group.grading());
            let g = random_element(group, &mut params, &mut rng, self.budget);
            let res = group.rep_of_element(&g).map_err(|e| e.to_string()).and_then(|m| {
                check_homogeneous(&m, Degree::ZERO, &group.rep.layout, group.grading()).map_err(|e| format!("{e:?}"))
            });
            report.check(res.is_ok(), || Failure {
                context: format!("sample {k}: {}", describe(&g)),
                lhs: res.clone().err().unwrap_or_default(),
                rhs: "degree 0".into(),
            });
            report.check(g.degrees_ok(group.grading()) && g.preserves_metric(group.rep.clifford.metric), || Failure {
                context: format!("sample {k} parameter degrees and metric"),
                lhs: "violated".into(),
                rhs: "ok".into(),
            });
        }
        report
    }
}

/// M² = 0 for every Ω-free factor of the ordered product: each translation
/// generator alone, each F_ζ^d with all four components, all of T, all of U.
pub fn nilpotency_report(group: &Supergroup) -> Report {
    let field = group.field();
    let mut report = Report::new("supergroup.nilpotency");
    let mut params = ParameterAlgebra::new(*group.grading());
    let mut cases: Vec<(String, ElementCoordinates<Multivector>)> = Vec::new();
    let mut all_t = ElementCoordinates::new();
    for mu in 1..=4u8 {
        let x = mv(field.one());
        cases.push((format!("P({mu})"), ElementCoordinates::new().set(BasisElement::P(mu), x.clone())));
        all_t = all_t.set(BasisElement::P(mu), x);
    }
    cases.push(("T factor".into(), all_t));
    for d in FACTOR_ORDER {
        let mut family = ElementCoordinates::new();
        for a in 1..=4u8 {
            let e = BasisElement::Q(d, a);
            cases.push((e.to_string(), ElementCoordinates::new().set(e, params.fresh(d))));
            family = family.set(e, params.fresh(d));
        }
        cases.push((format!("zeta[{}] factor", d.label()), family));
    }
    let mut all_u = ElementCoordinates::new();
    for d in bicolor_degrees() {
        for a in 1..=4u8 {
            let e = BasisElement::R(d, a);
            cases.push((e.to_string(), ElementCoordinates::new().set(e, params.fresh(d))));
            all_u = all_u.set(e, params.fresh(d));
        }
    }
    cases.push(("U factor".into(), all_u));
    for (label, coords) in cases {
        match element_matrix_grassmann(group.rep, &coords) {
            Ok(m) => match exp_nilpotent(&m, group.rep) {
                Ok(_) => report.case(),
                Err(e) => {
                    report.case();
                    report.fail(label, e.to_string(), "M² = 0");
                }
            },
            Err(e) => {
                report.case();
                report.fail(label, e.to_string(), "element matrix");
            }
        }
    }
    report
}

/// Compares the printed τ and ρ with the terms read off ½[X, X′] on
/// single-component probes, one verdict per (left degree, right degree).
pub fn law_comparison_report(rep: &Representation) -> Report {
    let field = rep.field();
    let printed = Supergroup::new(rep, GroupOptions { derived_actions: true, ..GroupOptions::default() });
    let derived = Supergroup::new(rep, GroupOptions::DERIVED);
    let mut report = Report::new("supergroup.law_comparison");
    for d1 in SUPERTRANSLATION_DEGREES {
        for d2 in SUPERTRANSLATION_DEGREES {
            let mut coefficients: Vec<(Scalar, Scalar)> = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    let mut params = ParameterAlgebra::new(*printed.grading());
                    let g = zeta_probe(field, &mut params, d1, a);
                    let h = zeta_probe(field, &mut params, d2, b);
                    let monomial = g.zeta[&d1][a].mul(&h.zeta[&d2][b]);
                    let Some((m, _)) = monomial.terms().next() else { continue };
                    let m = m.clone();
                    let p = printed.compose(&g, &h);
                    let q = derived.compose(&g, &h);
                    let slots = |x: &GroupElement| -> Vec<Scalar> {
                        x.t.iter().chain(x.u.values().flatten()).map(|v| v.coefficient(&m)).collect()
                    };
                    coefficients.extend(slots(&p).into_iter().zip(slots(&q)));
                }
            }
            if coefficients.iter().all(|(p, q)| p.is_zero() && q.is_zero()) {
                continue;
            }
            report.case();
            let family = format!("({},{})", d1.label(), d2.label());
            let verdict = if coefficients.iter().all(|(p, q)| p == q) {
                "agree".to_string()
            } else if coefficients.iter().all(|(_, q)| q.is_zero()) {
                "printed term where the bracket vanishes".to_string()
            } else if coefficients.iter().all(|(p, _)| p.is_zero()) {
                "bracket term missing from the printed law".to_string()
            } else {
                let (p0, q0) = coefficients.iter().find(|(_, q)| !q.is_zero()).expect("some nonzero");
                match p0.div(q0) {
                    Ok(k) if coefficients.iter().all(|(p, q)| *p == q.mul(&k)) => format!("printed = ({k}) x bracket"),
                    _ => "different index pattern".to_string(),
                }
            };
            report.tally(verdict.clone(), 1);
            if verdict != "agree" {
                report.fail(family, verdict, "agree");
            }
        }
    }
    report
}

/// Cumulative changes from the printed law to the one read off the
/// representation, each scored by the fidelity suite.
pub fn group_ladder(rep: &Representation, seed: u64, samples: usize) -> Vec<LadderStep> {
    let mut options = GroupOptions::default();
    let mut steps = Vec::new();
    for stage in 0..4 {
        let label = match stage {
            0 => "as printed",
            1 => {
                options.parameterization = Parameterization::Exponential;
                "+ exponential parameterization"
            }
            2 => {
                options.derived_actions = true;
                "+ rotations acting through the adjoint"
            }
            _ => {
                options.law = ProductLaw::Bracket;
                "+ tau and rho read off the bracket"
            }
        };
        let suite = GroupSuite { group: Supergroup::new(rep, options), seed, samples, budget: 6 };
        steps.push(LadderStep { label: label.to_string(), report: suite.fidelity_report() });
    }
    steps
}

/// Parameter slots per degree: 10 of degree 0, 4 per supertranslation
/// degree, 4 per bicolor degree.
pub fn dimension_audit() -> Report {
    let mut slots: BTreeMap<Degree, usize> = BTreeMap::new();
    *slots.entry(Degree::ZERO).or_default() += ROTATION_PAIRS.len() + 4;
    for d in SUPERTRANSLATION_DEGREES {
        *slots.entry(d).or_default() += 4;
    }
    for d in bicolor_degrees() {
        *slots.entry(d).or_default() += 4;
    }
    let mut report = Report::new("supergroup.dimensions");
    let total: usize = slots.values().sum();
    report.check(slots.len() == 21, || Failure {
        context: "degrees".into(),
        lhs: slots.len().to_string(),
        rhs: "21".into(),
    });
    report.check(total == 90, || Failure { context: "total".into(), lhs: total.to_string(), rhs: "90".into() });
    report.check(slots[&Degree::ZERO] == 10, || Failure {
        context: "degree 0".into(),
        lhs: slots[&Degree::ZERO].to_string(),
        rhs: "10".into(),
    });
    for (d, n) in &slots {
        if *d != Degree::ZERO {
            report.check(*n == 4, || Failure { context: d.label(), lhs: n.to_string(), rhs: "4".into() });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordData;
    use crate::superalgebra::{build_four_component, CouplingConfig};

    fn rep() -> Representation {
        let grading = GradingConfig::new(0).unwrap();
        let field = grading.field();
        let cd = CliffordData::frozen(field);
        let cfg = CouplingConfig::new(field);
        let sc = build_four_component(&cfg, &cd, grading).unwrap();
        Representation::for_algebra(&sc, &cd, &cfg).unwrap()
    }

    #[test]
    fn rho_pairs_cover_twelve_slots_with_matching_degrees() {
        let corrected = rho_pairs(RhoPairing::DegreeCorrected);
        assert_eq!(corrected.len(), 12);
        for (slot, pairs) in &corrected {
            for (a, b) in pairs {
                assert_eq!(*a + *b, *slot);
            }
        }
        let literal = rho_pairs(RhoPairing::Literal);
        let rg = Degree::RED + Degree::GREEN;
        assert!(literal[&rg].iter().any(|(a, b)| *a + *b != rg));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let r = rep();
        let z = SparseMatrix::zero(r.field(), DIM);
        assert_eq!(exp_nilpotent(&z, &r).unwrap(), SparseMatrix::identity(r.field(), DIM));
    }

    #[test]
    fn exp_rejects_rotation_generator() {
        let r = rep();
        let m: MvMat = crate::representation::lift(r.gamma(0));
        assert!(matches!(exp_nilpotent(&m, &r), Err(SupergroupError::NotNilpotent { .. })));
    }

    #[test]
    fn translation_factor_matches_block_form() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let f = r.field();
        let g =
            GroupElement::identity(f).with_translation(vec![mv(f.int(2)), mv(f.zero()), mv(f.zero()), mv(f.zero())]);
        let m = group.rep_of_element(&g).unwrap();
        for k in 0..4 {
            assert_eq!(m.get(5 * k, 5 * k + 4).body(), f.int(2));
        }
        assert_eq!(m.nnz(), DIM + 4);
    }

    #[test]
    fn translations_compose_additively() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let f = r.field();
        let t = |x: i64| {
            GroupElement::identity(f).with_translation(vec![mv(f.int(x)), mv(f.zero()), mv(f.int(1)), mv(f.zero())])
        };
        let c = group.compose(&t(1), &t(2));
        assert_eq!(c.t[0].body(), f.int(3));
        assert_eq!(c.t[2].body(), f.int(2));
    }

    #[test]
    fn identity_is_neutral_and_self_inverse() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let f = r.field();
        let id = GroupElement::identity(f);
        assert_eq!(group.inverse(&id).unwrap(), id);
        let mut params = ParameterAlgebra::new(*group.grading());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_element(&group, &mut params, &mut rng, 6);
        assert_eq!(group.compose(&g, &id), g);
        assert_eq!(group.compose(&id, &g), g);
        assert!(params.allocated() <= 6);
    }

    #[test]
    fn quarter_turns_preserve_the_metric() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let planes = group.quarter_turn_planes();
        assert_eq!(planes.len(), 3);
        for k in planes {
            let (l, s) = group.lorentz(Some(k), &[]);
            let g = GroupElement::identity(r.field()).with_lorentz(l, s);
            assert!(g.preserves_metric(r.clifford.metric));
        }
    }

    #[test]
    fn lorentz_factor_is_a_group_homomorphism_on_turns() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let f = r.field();
        let (l, s) = group.lorentz(Some(0), &[]);
        let g = GroupElement::identity(f).with_lorentz(l, s);
        let gg = group.compose(&g, &g);
        let lhs = group.rep_of_element(&gg).unwrap();
        let a = group.rep_of_element(&g).unwrap();
        assert_eq!(lhs, a.mul(&a));
    }

    #[test]
    fn translation_inverse_negates() {
        let r = rep();
        let group = Supergroup::new(&r, GroupOptions::default());
        let f = r.field();
        let g =
            GroupElement::identity(f).with_translation(vec![mv(f.int(1)), mv(f.int(2)), mv(f.zero()), mv(f.int(-1))]);
        let inv = group.inverse(&g).unwrap();
        assert_eq!(inv.t, vec_neg(&g.t));
    }

    fn corrected() -> Representation {
        let grading = GradingConfig::new(0).unwrap();
        let cfg = CouplingConfig::new(grading.field());
        crate::representation::fully_corrected(&grading, &cfg, &crate::clifford::Convention::FROZEN).unwrap().1
    }

    #[test]
    fn omega_free_factors_are_nilpotent() {
        let r = rep();
        let report = nilpotency_report(&Supergroup::new(&r, GroupOptions::default()));
        assert_eq!(report.cases, 94);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn derived_law_matches_matrix_products() {
        let r = corrected();
        let suite = GroupSuite { group: Supergroup::new(&r, GroupOptions::DERIVED), seed: 3, samples: 12, budget: 6 };
        assert!(suite.pairing_report().passed());
        assert!(suite.fidelity_report().passed());
        assert!(suite.associativity_report().passed());
        assert!(suite.inverse_report().passed());
    }

    #[test]
    fn printed_law_fails_the_matrix_oracle() {
        let r = rep();
        let suite = GroupSuite { group: Supergroup::new(&r, GroupOptions::default()), seed: 1, samples: 8, budget: 6 };
        let pairs = suite.pairing_report();
        assert_eq!((pairs.failures.len(), pairs.cases), (616, 704));
        assert!(!suite.fidelity_report().passed());
    }

    #[test]
    fn printed_bilinears_differ_from_the_bracket_in_every_family() {
        let report = law_comparison_report(&rep());
        assert_eq!(report.cases, 44);
        assert_eq!(report.tallies.get("different index pattern"), Some(&44));
    }

    #[test]
    fn ladder_reaches_zero_on_the_corrected_representation() {
        let counts: Vec<usize> = group_ladder(&corrected(), 1, 100).iter().map(|s| s.report.failures.len()).collect();
        assert_eq!(counts, vec![97, 97, 95, 0]);
    }

    #[test]
    fn rotation_in_a_real_plane_needs_no_adjoint() {
        let r = corrected();
        let f = r.field();
        let group = Supergroup::new(&r, GroupOptions::default());
        let (l, s) = group.lorentz(Some(1), &[]);
        let g = GroupElement::identity(f).with_lorentz(l, s);
        let gm = group.rep_of_element(&g).unwrap();
        let mut params = ParameterAlgebra::new(*group.grading());
        let h = zeta_probe(f, &mut params, Degree::RED, 2);
        assert_eq!(group.rep_of_element(&group.compose(&g, &h)).unwrap(), gm.mul(&group.rep_of_element(&h).unwrap()));
    }

    #[test]
    fn dimensions_sum_to_ninety() {
        assert!(dimension_audit().passed());
    }
}
