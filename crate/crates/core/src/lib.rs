//! Exact Weil and Cartan models, the universal algebra of an invariant
//! connection, equivariant characteristic forms, and a numerical
//! monopole oracle that cross-checks them.
//!
//! Scalars live in `Q(i)[tau, tau^-1]` with `tau = 2 pi i`, so every
//! symbolic identity is decided exactly.

pub mod anomaly;
pub mod checks;
pub mod connection;
pub mod graded;
pub mod lie;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod series;
pub mod weil;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graded.md")]
    mod graded {}
    #[doc = include_str!("../../../book/src/weil.md")]
    mod weil {}
    #[doc = include_str!("../../../book/src/connection.md")]
    mod connection {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/monopole.md")]
    mod monopole {}
    #[doc = include_str!("../../../book/src/anomaly.md")]
    mod anomaly {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
