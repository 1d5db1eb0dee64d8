//! Exact-arithmetic engine for characteristic classes of manifold bundles:
//! graded polynomial rings over Q and F_p, multiplicative sequences and
//! genera, Thom-module cohomology with fibre integration, mod-p Steenrod
//! reduced powers, and the associated number-theoretic invariants.

pub mod error;
pub mod fixtures;
pub mod genus;
pub mod invariants;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod steenrod;
pub mod symmetric;
pub mod thom;
pub mod verify;

pub use error::{Error, Result};
