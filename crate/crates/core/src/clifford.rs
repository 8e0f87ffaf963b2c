//! Metric, Pauli and Dirac matrices, charge conjugation, and the finite
//! space of sign and phase conventions searched by the superalgebra module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Mat;
use crate::scalar::{Field, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("Clifford relation fails for slots ({0}, {1})")]
    Clifford(usize, usize),
    #[error("charge conjugation matrix is not invertible")]
    SingularC,
    #[error("gamma^{0} C is not symmetric")]
    AsymmetricGammaC(usize),
    #[error("no charge conjugation matrix of the requested kind exists")]
    NoC,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A unit phase from {1, i, −1, −i}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::One, Phase::I, Phase::MinusOne, Phase::MinusI];

    pub fn to_scalar(self, field: Field) -> Scalar {
        match self {
            Phase::One => field.one(),
            Phase::I => field.i(),
            Phase::MinusOne => field.int(-1),
            Phase::MinusI => field.i().neg(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaSet {
    Dirac,
    Majorana,
    Weyl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChargeConjugation {
    /// γ_2 γ_4
    G2G4,
    /// γ_4 γ_2
    G4G2,
    /// i γ_2
    IG2,
    /// The solution of (γ^μ C)ᵀ = γ^μ C for all μ.
    Symmetrizing,
}

/// Overall phases multiplying families of anticommutator brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketPhases {
    pub qq_to_p: Phase,
    pub qq_to_r_bicolor: Phase,
    pub qq_to_r_white: Phase,
}

impl Default for BracketPhases {
    fn default() -> Self {
        BracketPhases { qq_to_p: Phase::One, qq_to_r_bicolor: Phase::One, qq_to_r_white: Phase::One }
    }
}

/// One point of the convention space, enough to rebuild every matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub metric: [i8; 4],
    pub gamma_set: GammaSet,
    /// Slot α (0-based) takes base matrix `permutation[α]` from the list
    /// (γ¹, γ², γ³, γ⁰) of the chosen set.
    pub permutation: [u8; 4],
    pub charge_conjugation: ChargeConjugation,
    pub sigma4: Phase,
    /// Transposes the spinor pairing in the listed brackets whose first
    /// argument has negative degree (two-component only).
    pub dotted_transposed: bool,
    /// Contracts the bicolor index with the metric, Σ σ_A η^AA R_A
    /// (two-component only).
    pub raise_bicolor_index: bool,
    pub phases: BracketPhases,
}

impl Convention {
    /// True when the two conventions agree on everything the
    /// four-component algebra depends on.
    pub fn same_four_component_point(&self, other: &Convention) -> bool {
        self.metric == other.metric
            && self.gamma_set == other.gamma_set
            && self.permutation == other.permutation
            && self.charge_conjugation == other.charge_conjugation
            && self.phases == other.phases
    }

    /// The default convention. Its four-component fields are the first
    /// candidate passing the Jacobi search over `ConventionSpace::default()`;
    /// its two-component fields have the fewest two-component Jacobi
    /// failures over that point.
    pub const FROZEN: Convention = Convention {
        metric: [-1, -1, -1, 1],
        gamma_set: GammaSet::Dirac,
        permutation: [0, 1, 2, 3],
        charge_conjugation: ChargeConjugation::G2G4,
        sigma4: Phase::One,
        dotted_transposed: true,
        raise_bicolor_index: true,
        phases: BracketPhases { qq_to_p: Phase::One, qq_to_r_bicolor: Phase::One, qq_to_r_white: Phase::One },
    };

    pub fn label(&self) -> String {
        format!(
            "metric={:?} set={:?} perm={:?} C={:?} sigma4={:?} dotted_T={} raise_R={} phases=({:?},{:?},{:?})",
            self.metric,
            self.gamma_set,
            self.permutation,
            self.charge_conjugation,
            self.sigma4,
            self.dotted_transposed,
            self.raise_bicolor_index,
            self.phases.qq_to_p,
            self.phases.qq_to_r_bicolor,
            self.phases.qq_to_r_white
        )
    }
}

/// Finite search space of conventions, enumerated in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionSpace {
    pub metrics: Vec<[i8; 4]>,
    pub gamma_sets: Vec<GammaSet>,
    pub permutations: Vec<[u8; 4]>,
    pub charge_conjugations: Vec<ChargeConjugation>,
    pub sigma4: Vec<Phase>,
    pub dotted_transposed: Vec<bool>,
    pub raise_bicolor_index: Vec<bool>,
    pub phases: Vec<BracketPhases>,
}

pub fn all_permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if (0..4u8).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

impl Default for ConventionSpace {
    fn default() -> Self {
        ConventionSpace {
            metrics: vec![[-1, -1, -1, 1], [1, 1, 1, -1], [1, 1, 1, 1]],
            gamma_sets: vec![GammaSet::Dirac, GammaSet::Majorana, GammaSet::Weyl],
            permutations: all_permutations(),
            charge_conjugations: vec![
                ChargeConjugation::G2G4,
                ChargeConjugation::G4G2,
                ChargeConjugation::IG2,
                ChargeConjugation::Symmetrizing,
            ],
            sigma4: vec![Phase::One, Phase::I, Phase::MinusI],
            dotted_transposed: vec![false, true],
            raise_bicolor_index: vec![false, true],
            phases: vec![BracketPhases::default()],
        }
    }
}

impl ConventionSpace {
    pub fn singleton(c: Convention) -> ConventionSpace {
        ConventionSpace {
            metrics: vec![c.metric],
            gamma_sets: vec![c.gamma_set],
            permutations: vec![c.permutation],
            charge_conjugations: vec![c.charge_conjugation],
            sigma4: vec![c.sigma4],
            dotted_transposed: vec![c.dotted_transposed],
            raise_bicolor_index: vec![c.raise_bicolor_index],
            phases: vec![c.phases],
        }
    }

    /// Every (metric, set, permutation, C) point, with the two-component
    /// and phase fields taken from their first listed values.
    pub fn four_component_points(&self) -> Vec<Convention> {
        let mut out = Vec::new();
        for &metric in &self.metrics {
            for &gamma_set in &self.gamma_sets {
                for &permutation in &self.permutations {
                    for &charge_conjugation in &self.charge_conjugations {
                        out.push(Convention {
                            metric,
                            gamma_set,
                            permutation,
                            charge_conjugation,
                            sigma4: self.sigma4[0],
                            dotted_transposed: self.dotted_transposed[0],
                            raise_bicolor_index: self.raise_bicolor_index[0],
                            phases: self.phases[0],
                        });
                    }
                }
            }
        }
        out
    }

    /// The two-component choices layered over a fixed four-component point.
    pub fn two_component_points(&self, base: Convention) -> Vec<Convention> {
        let mut out = Vec::new();
        for &sigma4 in &self.sigma4 {
            for &dotted_transposed in &self.dotted_transposed {
                for &raise_bicolor_index in &self.raise_bicolor_index {
                    for &phases in &self.phases {
                        out.push(Convention { sigma4, dotted_transposed, raise_bicolor_index, phases, ..base });
                    }
                }
            }
        }
        out
    }
}

pub fn pauli(field: Field) -> [Mat; 3] {
    let one = field.one();
    let i = field.i();
    [
        Mat::from_ints(field, &[&[0, 1], &[1, 0]], &one),
        Mat::from_ints(field, &[&[0, -1], &[1, 0]], &i),
        Mat::from_ints(field, &[&[1, 0], &[0, -1]], &one),
    ]
}

/// Base matrices (γ¹, γ², γ³, γ⁰) of a standard set, squaring to
/// (−1, −1, −1, +1).
pub fn base_gammas(field: Field, set: GammaSet) -> [Mat; 4] {
    let i = field.i();
    let z = Mat::zeros(field, 2, 2);
    let id = Mat::identity(field, 2);
    let s = pauli(field);
    let off = |m: &Mat| Mat::blocks(&z, m, &m.neg(), &z);
    match set {
        GammaSet::Dirac => [off(&s[0]), off(&s[1]), off(&s[2]), Mat::blocks(&id, &z, &z, &id.neg())],
        GammaSet::Weyl => [off(&s[0]), off(&s[1]), off(&s[2]), Mat::blocks(&z, &id, &id, &z)],
        GammaSet::Majorana => {
            let is3 = s[2].scale(&i);
            let is1 = s[0].scale(&i);
            [
                Mat::blocks(&is3, &z, &z, &is3),
                Mat::blocks(&z, &s[1].neg(), &s[1], &z),
                Mat::blocks(&is1.neg(), &z, &z, &is1.neg()),
                Mat::blocks(&z, &s[1], &s[1], &z),
            ]
        }
    }
}

/// Concrete matrices for a convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordData {
    pub convention: Convention,
    pub metric: [i8; 4],
    /// γ_α, lower index, α = 1..4 stored at 0..3.
    pub gamma: [Mat; 4],
    pub c: Mat,
    /// σ_1, σ_2, σ_3 and σ_4 = phase · 1.
    pub sigma: [Mat; 4],
}

impl CliffordData {
    /// Builds the matrices of `conv`. Fails only when no C of the requested
    /// kind exists; use `validate` for the algebraic conditions.
    pub fn from_convention(field: Field, conv: &Convention) -> Result<CliffordData, CliffordError> {
        let base = base_gammas(field, conv.gamma_set);
        let base_sq = [-1i8, -1, -1, 1];
        let gamma: [Mat; 4] = std::array::from_fn(|a| {
            let k = conv.permutation[a] as usize;
            let g = base[k].clone();
            if base_sq[k] == conv.metric[a] {
                g
            } else {
                g.scale(&field.i())
            }
        });
        let c = match conv.charge_conjugation {
            ChargeConjugation::G2G4 => gamma[1].mul(&gamma[3]),
            ChargeConjugation::G4G2 => gamma[3].mul(&gamma[1]),
            ChargeConjugation::IG2 => gamma[1].scale(&field.i()),
            ChargeConjugation::Symmetrizing => symmetrizing_c(field, &gamma, conv.metric)?,
        };
        let s = pauli(field);
        let sigma =
            [s[0].clone(), s[1].clone(), s[2].clone(), Mat::identity(field, 2).scale(&conv.sigma4.to_scalar(field))];
        Ok(CliffordData { convention: *conv, metric: conv.metric, gamma, c, sigma })
    }

    /// The repository default convention.
    pub fn frozen(field: Field) -> CliffordData {
        CliffordData::from_convention(field, &Convention::FROZEN).expect("frozen convention is constructible")
    }

    pub fn field(&self) -> Field {
        self.c.field()
    }

    pub fn eta(&self, a: usize, b: usize) -> i64 {
        if a == b {
            self.metric[a] as i64
        } else {
            0
        }
    }

    /// γ^μ (the metric is diagonal with entries ±1).
    pub fn gamma_upper(&self, mu: usize) -> Mat {
        if self.metric[mu] == 1 {
            self.gamma[mu].clone()
        } else {
            self.gamma[mu].neg()
        }
    }

    pub fn gamma_upper_c(&self, mu: usize) -> Mat {
        self.gamma_upper(mu).mul(&self.c)
    }

    pub fn validate(&self) -> Result<(), CliffordError> {
        let field = self.field();
        let id = Mat::identity(field, 4);
        for a in 0..4 {
            for b in 0..4 {
                let anti = self.gamma[a].mul(&self.gamma[b]).add(&self.gamma[b].mul(&self.gamma[a]));
                if anti != id.scale(&field.int(2 * self.eta(a, b))) {
                    return Err(CliffordError::Clifford(a + 1, b + 1));
                }
            }
        }
        if self.c.inverse().is_err() {
            return Err(CliffordError::SingularC);
        }
        for mu in 0..4 {
            if !self.gamma_upper_c(mu).is_symmetric() {
                return Err(CliffordError::AsymmetricGammaC(mu + 1));
            }
        }
        Ok(())
    }
}

/// Solves (γ^μ C)ᵀ = γ^μ C, returning the first nullspace vector that gives
/// an invertible C.
fn symmetrizing_c(field: Field, gamma: &[Mat; 4], metric: [i8; 4]) -> Result<Mat, CliffordError> {
    let mut sys = Mat::zeros(field, 64, 16);
    let var = |k: usize, c: usize| k * 4 + c;
    for mu in 0..4 {
        let g = if metric[mu] == 1 { gamma[mu].clone() } else { gamma[mu].neg() };
        for r in 0..4 {
            for c in 0..4 {
                let row = mu * 16 + r * 4 + c;
                // Σ_k g[r,k] C[k,c] − Σ_k g[c,k] C[k,r]
                for k in 0..4 {
                    let v = sys.get(row, var(k, c)).add(g.get(r, k));
                    sys.set(row, var(k, c), v);
                    let v = sys.get(row, var(k, r)).sub(g.get(c, k));
                    sys.set(row, var(k, r), v);
                }
            }
        }
    }
    for v in sys.nullspace()? {
        let mut c = Mat::zeros(field, 4, 4);
        for k in 0..4 {
            for col in 0..4 {
                c.set(k, col, v[var(k, col)].clone());
            }
        }
        if c.inverse().is_ok() {
            return Ok(c);
        }
    }
    Err(CliffordError::NoC)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_sets_satisfy_clifford_with_mostly_minus() {
        let f = Field::default();
        for set in [GammaSet::Dirac, GammaSet::Majorana, GammaSet::Weyl] {
            let conv = Convention { gamma_set: set, ..Convention::FROZEN };
            let cd = CliffordData::from_convention(f, &conv).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    let anti = cd.gamma[a].mul(&cd.gamma[b]).add(&cd.gamma[b].mul(&cd.gamma[a]));
                    assert_eq!(anti, Mat::identity(f, 4).scale(&f.int(2 * cd.eta(a, b))), "{set:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn frozen_convention_is_valid() {
        CliffordData::frozen(Field::default()).validate().unwrap();
    }

    #[test]
    fn identity_c_with_antisymmetric_gamma_is_rejected() {
        let f = Field::default();
        let mut cd = CliffordData::frozen(f);
        cd.c = Mat::identity(f, 4);
        assert!(matches!(cd.validate(), Err(CliffordError::AsymmetricGammaC(_))));
    }

    #[test]
    fn symmetrizing_solution_is_valid_for_every_dirac_permutation() {
        let f = Field::default();
        for p in all_permutations() {
            let conv = Convention {
                permutation: p,
                charge_conjugation: ChargeConjugation::Symmetrizing,
                ..Convention::FROZEN
            };
            CliffordData::from_convention(f, &conv).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn twenty_four_permutations() {
        assert_eq!(all_permutations().len(), 24);
    }
}
