//! Scalable Bell-inequality benchmarks for stabilizer states.
//!
//! Builds GHZ and linear-cluster Bell operators over exponentially many
//! Pauli terms, plans and evaluates sampled estimates with rigorous tail
//! bounds, synthesizes preparation circuits for arbitrary device
//! connectivity, and runs noisy Clifford simulations of the whole protocol.

pub mod bell;
pub mod circuit;
pub mod devices;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod frame;
pub mod graph;
pub mod noise;
pub mod pauli;
pub mod tableau;

pub use bell::{BellBounds, BellOperator, Family};
pub use circuit::{Circuit, Gate, GateCounts, LocalComplementation, Prepared};
pub use devices::DevicePreset;
pub use error::{Error, Result};
pub use estimation::{Confidence, PValue, SamplingPlan};
pub use experiment::{
    run_experiment, sweep_and_fit, Backend, ExperimentConfig, ExperimentRecord, NoiseSpec,
    ReportFormat,
};
pub use frame::PauliFrame;
pub use graph::{longest_simple_path, ConnectivityGraph, LongestPath, PathSearch};
pub use noise::{NoiseParams, ScalingForm, ScalingModel};
pub use pauli::{graph_stabilizers, Pauli, PauliString};
pub use tableau::{Clifford, Measurement, PauliChannel, StabilizerTableau};
