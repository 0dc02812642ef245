//! Weyl transforms on finite abelian groups, the Schatten and Lorentz
//! norm machinery around them, and a seeded verification harness that
//! measures left/right-hand-side ratios of the transform inequalities.
//!
//! The crate is organized around five layers:
//!
//! - [`group`]: finite abelian groups `Z_{n1} x ... x Z_{nd}` and their
//!   dual characters.
//! - [`weyl`]: the Schrodinger representation, the Weyl transform (slow
//!   reference path and DFT-kernel fast path) and its inverse.
//! - [`spaces`]: weighted `Lp` norms, distribution functions, decreasing
//!   rearrangements and Lorentz quasinorms on atomic measure spaces.
//! - [`operators`]: singular-value analytics, multiplier operators and
//!   operator-norm estimation.
//! - [`inequalities`] and [`harness`]: ratio computations for each
//!   inequality and the randomized sweep machinery around them.

pub mod error;
pub mod group;
pub mod harness;
pub mod inequalities;
pub mod operators;
pub mod spaces;
pub mod svd;
pub mod weyl;

pub use error::{Error, Result};
pub use group::{Character, FiniteAbelianGroup, GroupElement};
pub use spaces::{AtomicMeasureSpace, RearrangementProfile, WeightField};
pub use weyl::{
    inverse_weyl, schrodinger_rep, weyl_transform, KernelOperator, PhaseSpaceFunction,
    TransformMode,
};
