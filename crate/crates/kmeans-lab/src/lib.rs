//! A clustering laboratory around the contrast between Lloyd's and
//! Hartigan's k-means in high dimensions: an isotropic Gaussian mixture
//! sampler, both solvers with fixed-point predicates, the closed-form
//! probability bounds that govern fixed-point proliferation, and a seeded
//! Monte Carlo harness that checks the bounds empirically at desk scale.
//!
//! The library surface is organized by module:
//!
//! - [`model`]: mixture sampling, partitions, purity bookkeeping,
//!   exhaustive bipartition enumeration, CSV ingestion.
//! - [`clustering`]: Lloyd and Hartigan runs, initializations, fixed-point
//!   predicates, PCA baselines.
//! - [`theory`]: distance scales, chi-squared tail bounds, decay factors,
//!   noise thresholds, union bounds.
//! - [`metrics`]: normalized mutual information, win-rate scoring, Wilson
//!   intervals.
//! - [`experiments`]: the benchmark grid, the divergence experiment, the
//!   fixed-point census, the moment check, and report files.
//!
//! Runnable walkthroughs live in `examples/`; each one demonstrates a
//! single capability end to end:
//!
//! ```bash
//! cargo run --release --example sample_dataset
//! cargo run --release --example lloyd_vs_hartigan
//! cargo run --release --example closed_form_bounds
//! cargo run --release --example tail_bound_monte_carlo
//! cargo run --release --example enumerate_partitions
//! cargo run --release --example fixed_point_census
//! cargo run --release --example divergent_criteria
//! cargo run --release --example pca_baselines
//! cargo run --release --example grid_experiment
//! cargo run --release --example scale_check
//! ```
//!
//! The `kmeans-lab` binary wraps the same entry points behind `sample`,
//! `cluster`, `bounds`, `grid`, `divergent`, `census`, and `scale-check`
//! subcommands. Everything randomized takes an explicit 64-bit seed and is
//! bit-reproducible across platforms and worker counts.

pub mod clustering;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
