//! Exact Bar-Natan cobordism calculus for tangles: complexes over dotted
//! cobordisms, Gaussian elimination, truncated categorified projectors and a
//! Temperley–Lieb oracle for cross-checking.

pub mod braid;
pub mod cob;
pub mod complex;
pub mod error;
pub mod grading;
pub mod poly;
pub mod projectors;
pub mod ring;
pub mod tl;
pub mod verify;

pub use cob::{FlatTangle, Morphism, MorphismBasisElement, Smoothing};
pub use error::{Error, Result};
pub use ring::{Coeff, Field, RingKind, F2, Q, Z};
