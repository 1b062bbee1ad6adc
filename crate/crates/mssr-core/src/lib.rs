//! Estimation toolkit for the reliability of s-out-of-k systems whose
//! component strengths and common stress follow Pareto laws with a shared
//! scale, observed through upper record values.
//!
//! The crate covers the full inference chain on a pair of record samples
//! (one from the strength law, one from the stress law):
//!
//! - [`pareto`]: distribution primitives, record-sequence sampling and
//!   goodness-of-fit support;
//! - [`reliability`]: the closed-form system reliability, its derivatives
//!   and an independent quadrature route;
//! - [`classical`]: maximum likelihood, the unbiased (UMVU) estimator for
//!   known scale, and the delta-method confidence interval;
//! - [`lindley`]: Taylor-approximated Bayes estimates under squared-error
//!   and LINEX losses;
//! - [`mcmc`]: Metropolis-within-Gibbs posterior sampling, chain-based
//!   point estimates and highest-posterior-density intervals;
//! - [`bootstrap`]: parametric bootstrap resampling and its three
//!   confidence-interval constructions.
//!
//! Everything is `no_std`-compatible (with `alloc`); all randomness flows
//! through caller-supplied seeds, so any result can be reproduced exactly.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose in validations: it rejects NaN along with
// the out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bootstrap;
pub mod classical;
pub mod error;
pub mod lindley;
mod math;
pub mod mcmc;
pub mod pareto;
pub mod reliability;

pub use bootstrap::BootstrapSample;
pub use classical::{IntervalEstimate, IntervalMethod, MleFit};
pub use error::{Error, Result};
pub use lindley::{Loss, PriorConfig, ThetaMode};
pub use mcmc::{McmcConfig, PosteriorChain};
pub use pareto::{ParetoParams, RecordSample};
pub use reliability::{Reliability, SystemSpec};
