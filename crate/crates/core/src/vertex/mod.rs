//! Weight-truncated vertex algebras for the affine Kac-Moody, Weyl-Clifford
//! and supercommutative families, with Maurer-Cartan and homomorphism checks.

use thiserror::Error;

pub mod derivation;
pub mod engine;
pub mod lie;
pub mod mc;
pub mod tensor;

pub use derivation::{ce_differential, curving_affine, curving_symplectic, Derivation, Side};
pub use engine::{Combination, Letter, ModeAlgebra, ModeKind, Monomial, State, DEFAULT_CUTOFF};
pub use lie::LieData;
pub use mc::{
    cdg_identity_check, hom_check, mc_check, mc_plain, mc_plain_tensor, CdgReport, HomReport, MCReport, McMode,
    McSetup, RelationWitness,
};
pub use tensor::{TensorEngine, TensorState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("state of weight {weight} exceeds the cutoff {cutoff}")]
    CutoffExceeded { weight: String, cutoff: i64 },
    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("even generator `{0}` of weight 0 makes the truncated state space infinite")]
    UnboundedBasis(String),
}
