//! Pricing engine for principal-at-risk catastrophe mortality bonds.
//!
//! The engine values the 2003 Swiss Re bond structure (and structurally
//! identical contracts) three ways:
//!
//! * model-independent and model-specific **lower bounds** built from
//!   conditional expectations and comonotonic stop-loss decompositions;
//! * comonotonic **upper bounds**, unconditional and conditional;
//! * a reproducible **Monte Carlo** oracle that brackets everything.
//!
//! The principal payoff is handled through its Asian-option reformulation:
//! with per-date tranche spreads `S_i = (q_i - k1 q0)^+ / (k2 - k1)` the
//! bond principal is `D (q0 - Σ S_i)^+`, its call counterpart
//! `D (Σ S_i - q0)^+`, and one parity constant G links any bound on the
//! call side to a bound on the bond.
//!
//! ```
//! use catmort::models::preset;
//! use catmort::bounds::{bound_suite, SuiteConfig};
//!
//! let spec = preset("lin2007", 0.02).unwrap();
//! let suite = bound_suite(&spec.model, &spec.terms, SuiteConfig::default()).unwrap();
//! assert!(suite.windows(2).all(|w| w[0].call_side <= w[1].call_side));
//! ```

pub mod bounds;
pub mod contract;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod numerics;
pub mod tables;

pub use error::{Error, Result};

// The guide chapters double as doctests so the book cannot drift from the
// API. See book/src/*.md.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/contract.md")]
    pub struct ContractChapter;
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub struct BoundsChapter;
    #[doc = include_str!("../../../book/src/models.md")]
    pub struct ModelsChapter;
    #[doc = include_str!("../../../book/src/montecarlo.md")]
    pub struct MonteCarloChapter;
    #[doc = include_str!("../../../book/src/numerics.md")]
    pub struct NumericsChapter;
}
