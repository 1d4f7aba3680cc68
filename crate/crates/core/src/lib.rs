// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Discrete-time coined quantum walks on lines, cycles and hypercubes, with
//! projective-measurement decoherence on the coin, the position, or both.
//!
//! The crate provides pure-state, density-operator and Monte Carlo
//! trajectory engines, an absorbing engine for monitored hitting, classical
//! random-walk baselines, and the derived observables (spreading, mixing
//! times, uniformity, hitting probabilities).
//!
//! ```
//! use coinwalk::{evolution::run_pure, observables::std_dev, CoinOperator, WalkSpace};
//!
//! let line = WalkSpace::make_line(50).unwrap();
//! let psi0 = line.initial_state();
//! let series = run_pure(&psi0, &CoinOperator::hadamard(), &line, 50, Default::default()).unwrap();
//! let sigma = std_dev(series.last(), &line).unwrap();
//! assert!(sigma > 20.0);
//! ```

pub mod classical;
pub mod coin;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod hilbert;
pub mod observables;
pub mod space;

pub use coin::CoinOperator;
pub use error::{Result, WalkError};
pub use evolution::{EngineKind, NoiseModel, NoiseTarget, RecordOptions, TimeSeries};
pub use hilbert::{DensityOperator, Distribution, HilbertLayout, PureState, C64};
pub use space::{StochasticMatrix, Topology, WalkSpace};
