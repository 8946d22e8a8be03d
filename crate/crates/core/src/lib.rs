//! Sign problems for rational matrix semigroups, decided in exact arithmetic.

pub mod lattice;
pub mod gadget;
pub mod iplog;
pub mod linalg;
pub mod lrs;
pub mod membership;
pub mod num;
pub mod relations;
pub mod spectral;

pub use gadget::{build_reduction, verify_correspondence, PfaInstance};
pub use iplog::{solve_iplog, ConeSystem, IplogAnswer, IplogVerdict};
pub use linalg::RationalMatrix;
pub use lrs::{eventually_nonnegative, eventually_positive, sign_set, UltimatelyPeriodicSet};
pub use membership::{
    nonnegative_membership_diag, nonnegative_membership_general, positive_membership, MembershipAnswer,
    MembershipVerdict, SearchBudget,
};
pub use num::algebraic::{AlgebraicNumber, Sign, SignResult};
pub use num::elementary::{ElementaryExpr, LogLinExpr, Precision};
pub use num::Rational;
pub use spectral::{simultaneous_block_diagonalize, SpectralData};

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("the family is not simultaneously diagonalizable")]
    NotDiagonalizable,
    #[error("precision budget exhausted")]
    BudgetExhausted,
    #[error("generator {0} is not stochastic")]
    StochasticityViolation(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
