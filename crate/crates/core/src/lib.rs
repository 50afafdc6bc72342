//! Construction and certification of metrics with holonomy inside split G2.
//!
//! The crate has two halves. An exact half (rational arithmetic over Q(√2))
//! builds the split-G2 algebra, its distinguished subalgebras, and the
//! algebraic curvature spaces that feed the Berger criterion. A numerical
//! half evaluates the coframe metric families on a coordinate box, computes
//! Christoffel symbols, curvature and one covariant derivative through
//! truncated Taylor jets, and certifies the holonomy algebra of each family
//! by curvature spans and parallel transport around small loops.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod berger;
pub mod coframe;
pub mod curvature;
pub mod exact;
pub mod expr;
pub mod holonomy;
pub mod jet;
pub mod numeric;
pub mod rng;

pub use exact::{ExactMat, Scalar};
pub use expr::Expr;
pub use jet::Jet;
