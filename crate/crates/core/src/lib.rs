//! Construction, verification and execution of linear repair schemes for
//! Reed-Solomon codes whose evaluation points form an F_q-linear subspace of
//! F_{q^m}.
//!
//! Layering, bottom up: `gfield` (field tower and coordinate arithmetic),
//! `linalg` (exact elimination), `subspace` (F_q-subspaces of the big field),
//! `goodpair` (the rank certificate on evaluation/symbol space pairs and the
//! randomized search around it), `rscode` (codes, duals, shortening),
//! `repair` (scheme construction, verification, execution), `json` (file
//! formats).

// index-heavy exact linear algebra: explicit indices and % tests read better
// here than iterator chains and is_multiple_of
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod error;
pub mod gfield;
pub mod goodpair;
pub mod json;
pub mod linalg;
pub mod repair;
pub mod rscode;
pub mod subspace;

pub use error::{Error, Result};
