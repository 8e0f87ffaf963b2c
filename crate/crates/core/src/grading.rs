//! Degrees in Z_n^3 (or Z^3), the commutation factor ε and classification.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("modulus n={0} is not supported (use n=0 or n>=3)")]
    UnsupportedModulus(u32),
    #[error(transparent)]
    Field(#[from] ScalarError),
}

/// A degree (r, g, b). Components are canonical representatives in [0, n)
/// when n > 0; for n = 0 they are arbitrary integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub r: i32,
    pub g: i32,
    pub b: i32,
}

impl Degree {
    pub const ZERO: Degree = Degree::new(0, 0, 0);
    pub const WHITE: Degree = Degree::new(1, 1, 1);
    pub const ANTIWHITE: Degree = Degree::new(-1, -1, -1);
    pub const RED: Degree = Degree::new(1, 0, 0);
    pub const GREEN: Degree = Degree::new(0, 1, 0);
    pub const BLUE: Degree = Degree::new(0, 0, 1);
    pub const ANTIRED: Degree = Degree::new(-1, 0, 0);
    pub const ANTIGREEN: Degree = Degree::new(0, -1, 0);
    pub const ANTIBLUE: Degree = Degree::new(0, 0, -1);

    pub const fn new(r: i32, g: i32, b: i32) -> Degree {
        Degree { r, g, b }
    }

    fn dot(self, o: Degree) -> i64 {
        self.r as i64 * o.r as i64 + self.g as i64 * o.g as i64 + self.b as i64 * o.b as i64
    }

    /// The antisymmetric form in the exponent of q.
    fn twist(self, o: Degree) -> i64 {
        let (x, y) = (self, o);
        (x.r as i64 * y.g as i64 - y.r as i64 * x.g as i64)
            + (x.g as i64 * y.b as i64 - y.g as i64 * x.b as i64)
            + (x.b as i64 * y.r as i64 - y.b as i64 * x.r as i64)
    }

    /// Cyclic color substitution r → g → b → r.
    pub fn rotate_colors(self) -> Degree {
        Degree::new(self.b, self.r, self.g)
    }

    /// Human-readable label for the 21 degrees that occur in the algebra.
    pub fn label(self) -> String {
        let named = [
            (Degree::ZERO, "0"),
            (Degree::WHITE, "1"),
            (Degree::ANTIWHITE, "1b"),
            (Degree::RED, "r"),
            (Degree::GREEN, "g"),
            (Degree::BLUE, "b"),
            (Degree::ANTIRED, "rb"),
            (Degree::ANTIGREEN, "gb"),
            (Degree::ANTIBLUE, "bb"),
        ];
        if let Some((_, n)) = named.iter().find(|(d, _)| *d == self) {
            return n.to_string();
        }
        if let Some((a, b)) = bicolor_parts(self) {
            return format!("{}+{}", a.label(), b.label());
        }
        format!("({},{},{})", self.r, self.g, self.b)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.g, self.b)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.r + o.r, self.g + o.g, self.b + o.b)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.r, -self.g, -self.b)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        self + (-o)
    }
}

/// The eight supertranslation degrees in the order 1, 1̄, r, g, b, r̄, ḡ, b̄.
pub const SUPERTRANSLATION_DEGREES: [Degree; 8] = [
    Degree::WHITE,
    Degree::ANTIWHITE,
    Degree::RED,
    Degree::GREEN,
    Degree::BLUE,
    Degree::ANTIRED,
    Degree::ANTIGREEN,
    Degree::ANTIBLUE,
];

/// The twelve bicolor degrees, as ordered pairs of constituents, in the order
/// r+g, g+b, b+r, r̄+ḡ, ḡ+b̄, b̄+r̄, r+ḡ, g+b̄, b+r̄, r̄+g, ḡ+b, b̄+r.
pub const BICOLOR_PAIRS: [(Degree, Degree); 12] = [
    (Degree::RED, Degree::GREEN),
    (Degree::GREEN, Degree::BLUE),
    (Degree::BLUE, Degree::RED),
    (Degree::ANTIRED, Degree::ANTIGREEN),
    (Degree::ANTIGREEN, Degree::ANTIBLUE),
    (Degree::ANTIBLUE, Degree::ANTIRED),
    (Degree::RED, Degree::ANTIGREEN),
    (Degree::GREEN, Degree::ANTIBLUE),
    (Degree::BLUE, Degree::ANTIRED),
    (Degree::ANTIRED, Degree::GREEN),
    (Degree::ANTIGREEN, Degree::BLUE),
    (Degree::ANTIBLUE, Degree::RED),
];

pub fn bicolor_degrees() -> [Degree; 12] {
    BICOLOR_PAIRS.map(|(a, b)| a + b)
}

fn bicolor_parts(d: Degree) -> Option<(Degree, Degree)> {
    BICOLOR_PAIRS.iter().copied().find(|(a, b)| *a + *b == d)
}

/// The 21 degrees present in the minimal algebra (over Z^3).
pub fn in_scope_degrees() -> Vec<Degree> {
    let mut v = vec![Degree::ZERO];
    v.extend(SUPERTRANSLATION_DEGREES);
    v.extend(bicolor_degrees());
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Bosonic,
    Fermionic,
    Exotic,
}

/// Grading group and coefficient field of an algebra instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct GradingConfig {
    field: Field,
}

impl GradingConfig {
    /// Grading by Z_n^3 with the default cyclotomic order lcm(8, n).
    pub fn new(n: u32) -> Result<GradingConfig, GradingError> {
        let m = if n == 0 { 8 } else { num_integer::lcm(8, n) };
        GradingConfig::with_root_order(n, m)
    }

    pub fn with_root_order(n: u32, m: u32) -> Result<GradingConfig, GradingError> {
        if n == 1 || n == 2 {
            return Err(GradingError::UnsupportedModulus(n));
        }
        Ok(GradingConfig { field: Field::new(n, m)? })
    }

    pub(crate) fn from_field(field: Field) -> GradingConfig {
        GradingConfig { field }
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn root_field_order(&self) -> u32 {
        self.field.m()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn reduce(&self, x: Degree) -> Degree {
        let n = self.n() as i32;
        if n == 0 {
            x
        } else {
            Degree::new(x.r.rem_euclid(n), x.g.rem_euclid(n), x.b.rem_euclid(n))
        }
    }

    pub fn add(&self, x: Degree, y: Degree) -> Degree {
        self.reduce(x + y)
    }

    pub fn neg(&self, x: Degree) -> Degree {
        self.reduce(-x)
    }

    /// ε(x, y), evaluated from the stored representatives.
    pub fn epsilon(&self, x: Degree, y: Degree) -> Scalar {
        let s = epsilon_exponents(x, y);
        let v = self.field.q_pow(s.1);
        if s.0 {
            v.neg()
        } else {
            v
        }
    }

    /// The eight generator degrees reduced into this grading group.
    pub fn generator_degrees(&self) -> [Degree; 8] {
        SUPERTRANSLATION_DEGREES.map(|d| self.reduce(d))
    }

    /// Classification by commutation behaviour. For Z^3 the closed form is
    /// used; for Z_n^3 the definition is evaluated on the generating set.
    pub fn classify(&self, x: Degree) -> Classification {
        if self.n() != 0 {
            return self.classify_by_evaluation(x);
        }
        if x.r == x.g && x.g == x.b {
            if x.r % 2 == 0 {
                Classification::Bosonic
            } else {
                Classification::Fermionic
            }
        } else {
            Classification::Exotic
        }
    }

    /// Direct evaluation of the classification definition over the
    /// generator degrees. ε(x, ·) is a character on the lattice they span, so
    /// checking the generators is enough.
    pub fn classify_by_evaluation(&self, x: Degree) -> Classification {
        let x = self.reduce(x);
        let one = self.field.one();
        let gens = self.generator_degrees();
        if gens.iter().all(|&y| self.epsilon(x, y) == one) {
            return Classification::Bosonic;
        }
        let fermion = gens.iter().all(|&y| {
            let sign = if (y.r + y.g + y.b).rem_euclid(2) == 0 { one.clone() } else { one.neg() };
            self.epsilon(x, y) == sign
        });
        if fermion {
            Classification::Fermionic
        } else {
            Classification::Exotic
        }
    }
}

/// (sign is negative, q exponent) of ε(x, y).
pub(crate) fn epsilon_exponents(x: Degree, y: Degree) -> (bool, i64) {
    (x.dot(y).rem_euclid(2) == 1, x.twist(y))
}

/// True when ε(d, d) = −1, i.e. a generator of degree d squares to zero.
pub fn is_nilpotent_degree(d: Degree) -> bool {
    d.dot(d).rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        let g = GradingConfig::default();
        let f = g.field();
        assert_eq!(g.epsilon(Degree::RED, Degree::GREEN), f.q());
        assert_eq!(g.epsilon(Degree::RED, Degree::RED), f.int(-1));
        assert_eq!(g.epsilon(Degree::ZERO, Degree::new(3, -2, 7)), f.one());
        assert_eq!(g.epsilon(Degree::WHITE, Degree::ANTIWHITE), f.int(-1));
        assert_eq!(g.epsilon(Degree::RED, Degree::WHITE), f.int(-1));
        assert_eq!(g.epsilon(Degree::RED, Degree::ANTIGREEN), f.q_pow(-1));
    }

    #[test]
    fn degree_arithmetic() {
        let g = GradingConfig::default();
        assert_eq!(g.add(Degree::RED, Degree::GREEN), Degree::new(1, 1, 0));
        assert_eq!(g.add(Degree::WHITE, Degree::ANTIWHITE), Degree::ZERO);
        assert_eq!(g.neg(Degree::RED), Degree::ANTIRED);
        let g3 = GradingConfig::new(3).unwrap();
        assert_eq!(g3.add(Degree::new(2, 0, 0), Degree::new(2, 0, 0)), Degree::RED);
        assert_eq!(g3.neg(Degree::new(1, 1, 0)), Degree::new(2, 2, 0));
        assert_eq!(g3.reduce(g3.reduce(Degree::new(-4, 7, 3))), g3.reduce(Degree::new(-4, 7, 3)));
    }

    #[test]
    fn rejected_moduli() {
        assert!(GradingConfig::new(1).is_err());
        assert!(GradingConfig::new(2).is_err());
        assert!(GradingConfig::new(3).is_ok());
        assert!(GradingConfig::with_root_order(3, 12).is_err());
    }

    #[test]
    fn classification_examples() {
        let g = GradingConfig::default();
        assert_eq!(g.classify(Degree::ZERO), Classification::Bosonic);
        assert_eq!(g.classify(Degree::WHITE), Classification::Fermionic);
        assert_eq!(g.classify(Degree::RED), Classification::Exotic);
        assert_eq!(g.classify(Degree::new(2, 2, 2)), Classification::Bosonic);
    }

    #[test]
    fn in_scope_degree_list() {
        let d = in_scope_degrees();
        assert_eq!(d.len(), 21);
        let mut u = d.clone();
        u.sort();
        u.dedup();
        assert_eq!(u.len(), 21);
        assert_eq!(Degree::new(1, 1, 0).label(), "r+g");
        assert_eq!(Degree::new(-1, 1, 0).label(), "rb+g");
    }
}
