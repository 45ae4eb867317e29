//! Certified volumes, Dehn filling enumeration and non-hyperbolicity proof
//! checking for small hyperbolic 3-manifolds.

// `!(x > 0.0)` is how NaN gets rejected; index loops read better in the
// matrix code.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certify;
pub mod filling;
pub mod formats;
pub mod geometry;
pub mod grouptool;
pub mod jet;
pub mod lobachevsky;

pub use jet::{ComplexJet, Interval, Jet, JetError};
