//! Monte Carlo engine used as the probabilistic oracle for the analytic laws.

pub mod ks;
mod rng;
mod samplers;

pub use ks::{histogram, ks_statistic, ks_two_sample, McReport};
pub use rng::RngStream;
pub use samplers::{
    double_barrier_weight, sample_inverse_subordinator, sample_many, sample_stable_subordinator,
    sample_wrapped_bm, simulate_planar_hit, CHUNK,
};
