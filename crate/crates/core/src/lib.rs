//! Certification of genuine multipartite entanglement through multipartite
//! concurrence.
//!
//! A state is genuinely multipartite entangled when its multipartite
//! concurrence exceeds a constant fixed by the number and dimension of the
//! subsystems ([`concurrence::gme_threshold`]). The concurrence of a mixed
//! state is a convex roof and is not computed directly; instead
//! [`bounds::proposition_lower_bound`] aggregates PPT/realignment lower bounds
//! of every bipartite cut into a lower bound on it, and
//! [`bounds::gme_detect`] compares that bound against the threshold.

pub mod bounds;
pub mod concurrence;
pub mod error;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
