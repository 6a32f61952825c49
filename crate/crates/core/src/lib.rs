//! Exact symbolic computation of extended Rees algebras and blow-ups of
//! presented graded algebras.
//!
//! The crate works with ℤ-graded affine algebras presented as weighted
//! polynomial rings modulo weighted-homogeneous ideals, over ℚ or 𝔽ₚ.
//! On top of a deterministic Buchberger kernel ([`ideal`]) it builds:
//!
//! * graded pieces, the degree-zero/irrelevant splitting, homogeneous
//!   localization charts, Veronese subrings and twist cocycles ([`graded`]);
//! * extended Rees algebras of finite quotients, their cones,
//!   t⁻¹-regularity diagnostics, regularization and the comparison with
//!   classical Rees algebras ([`rees`]);
//! * Proj atlases, blow-up charts, exceptional divisors and the
//!   deformation to the normal cone ([`blowup`]).
//!
//! All values are immutable after construction and all operations are
//! deterministic: repeated runs produce byte-identical canonical output.

pub mod blowup;
pub mod error;
pub mod graded;
pub mod ideal;
pub mod parser;
pub mod poly;
pub mod rees;
pub mod ring;
pub mod scalar;

pub(crate) mod span;

pub use error::Error;
pub use ideal::{Ideal, ReducedGB};
pub use poly::Polynomial;
pub use ring::{FieldSpec, Monomial, MonomialOrder, RingContext};
pub use scalar::Scalar;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
