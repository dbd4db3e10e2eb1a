//! Quantum layer: `U_q(g)` at rank ≤ 2, its Hopf structure, quantized Verma modules,
//! the deformed adjoint `G_q` and the two-parameter algebra `A_{t,λ,h}`.

mod algebra;
mod gq;
mod hopf;
mod module;
mod slice;

pub use algebra::{Letter, UqAlgebra, UqElement, UqMono};
pub use gq::{ad_in_algebra, classical_limit, find_gq, ClassicalLimit, GqBasis, QFracEchelon};
pub use hopf::{HopfData, Tensor2, Tensor3};
pub use module::{QOp, QVermaModule};
pub use slice::{build_q_slice, equivariance_check, expand_rescaled, second_bracket_sl2, EquivarianceReport, QSliceLevel, QSliceReport, SecondBracketReport, BracketPair, TOp};
