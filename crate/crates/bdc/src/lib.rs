//! Bayesian distance clustering with medoid tessellation priors.
//!
//! The library operates on pairwise distance matrices rather than raw
//! observations. Partitions are induced by discrete Voronoi tessellation:
//! a set of medoid objects defines the clusters, and every object joins
//! the cluster of its nearest medoid. Inference runs over medoid sets
//! with birth-death-move MCMC, plus random-partition baselines.
//!
//! Module map:
//! - [`core`]: domain types, matrix validation, tessellation induction
//! - [`numerics`]: log-gamma, Gamma quantiles, Tricomi U, quadrature
//! - [`likelihood`]: marginal Gamma likelihoods on distances
//! - [`priors`]: medoid-set prior, PY EPPF, dependence penalty
//! - [`kmedoids`]: PAM baseline and elbow selection
//! - [`hyper`]: empirical-Bayes hyperparameter selection
//! - [`samplers`]: MCMC kernels and chain orchestration
//! - [`posterior`]: co-clustering, point estimates, partition metrics
//! - [`simulate`]: synthetic two-layer data generator
//! - [`io`]: file formats (CSV, binary matrices, traces)
//!
//! ## Example
//!
//! Cluster a small distance matrix and summarize the posterior:
//!
//! ```
//! use bdc::core::validate_distance_matrix;
//! use bdc::likelihood::{LikelihoodConfig, Mode};
//! use bdc::posterior::point_estimate;
//! use bdc::priors::MedoidPriorConfig;
//! use bdc::samplers::{run_bdm, ChainConfig, InitStrategy, LikelihoodSpec};
//!
//! // two tight groups: {0,1,2} and {3,4}
//! let raw = vec![
//!     vec![0.0, 0.1, 0.2, 5.0, 5.1],
//!     vec![0.1, 0.0, 0.1, 5.2, 5.0],
//!     vec![0.2, 0.1, 0.0, 5.1, 5.3],
//!     vec![5.0, 5.2, 5.1, 0.0, 0.2],
//!     vec![5.1, 5.0, 5.3, 0.2, 0.0],
//! ];
//! let d = validate_distance_matrix(&raw).unwrap();
//! let cfg = LikelihoodConfig::new(0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, Mode::Linear, true).unwrap();
//! let prior = MedoidPriorConfig::new(0.5, d.n()).unwrap();
//! let chain = ChainConfig::new(2_000, 500, 1, 42, InitStrategy::RandomK(2));
//! let trace = run_bdm(&d, &LikelihoodSpec::Config(cfg), &prior, &chain);
//! let estimate = point_estimate(trace.labels(0)).unwrap();
//! assert_eq!(estimate.labels(), &[0, 0, 0, 1, 1]);
//! ```

pub mod core;
pub mod hyper;
pub mod io;
pub mod kmedoids;
pub mod likelihood;
pub mod numerics;
pub mod posterior;
pub mod priors;
pub mod samplers;
pub mod simulate;
