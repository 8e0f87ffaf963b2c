//! Exact symbolic kernel for Z^3- and Z_n^3-graded color Poincaré
//! superalgebras, their supermatrix representations, the induced supergroup
//! and its action on color superspace.

pub mod clifford;
pub mod expr;
pub mod grading;
pub mod grassmann;
pub mod matrix;
pub mod report;
pub mod representation;
pub mod scalar;
pub mod suites;
pub mod superalgebra;
pub mod supergroup;
pub mod superspace;

pub use clifford::{CliffordData, Convention, ConventionSpace, Phase};
pub use expr::{parse_expr, ParseError, ROUND_TRIP_CORPUS};
pub use grading::{Classification, Degree, GradingConfig, GradingError};
pub use grassmann::{AdjointPhase, Family, Generator, Monomial, Multivector};
pub use matrix::{Entry, Mat, SparseMatrix};
pub use report::{Failure, Report};
pub use scalar::{Field, Scalar, ScalarError, UnitConfig};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteError};
pub use superalgebra::{BasisElement, CouplingConfig, Formulation, LinComb, StructureConstants};
