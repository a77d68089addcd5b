//! Single-shot entangling and disentangling capacities of two-qubit
//! random-unitary channels.
//!
//! * [`qmat`]: small dense complex matrices with tensor structure.
//! * [`channels`]: input states, canonical-class unitaries, mixtures and the
//!   Gaussian-noise channel.
//! * [`entanglement`]: entropies, entanglement of formation and bounds on
//!   distillable entanglement.
//! * [`capacity`]: the optimizers.

pub mod capacity;
pub mod channels;
pub mod entanglement;
pub mod error;
pub mod qmat;

pub use capacity::{
    method1_capacity, method2_capacity, objective_gain, unitary_capacity, CapacityResult,
    Direction, OptimizerArgument, OptimizerConfig,
};
pub use channels::{
    canonical_unitary, gaussian_channel, mixture_channel, optimal_state, BranchSpec,
    CanonicalParams, GaussianNoiseSpec, PureState, RandomUnitaryChannel, Sign,
};
pub use entanglement::DistillableInterval;
pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, C64};
