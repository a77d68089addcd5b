//! Single-shot entangling (`Up`) and disentangling (`Down`) capacities.
//!
//! The output entanglement is the lower edge of the [`DistillableInterval`]
//! (the hashing bound), except for the ancilla-assisted `Up` objective,
//! which uses the one-way coherent information `S(BB') - S(AA'BB')`. The
//! interval rides along in every [`CapacityResult`] so the slack is visible.
//!
//! Two strategies:
//! * [`method1_capacity`] scans the family `cos a|00> +- i sin a|11>`,
//!   valid for mixtures of CNOT-class unitaries.
//! * [`method2_capacity`] runs a multi-restart finite-difference ascent over
//!   all pure states of (A, A', B, B') with qubit ancillas, giving a lower
//!   bound for arbitrary mixtures.

mod ascent;
mod scan;

pub use ascent::{finite_difference_gradient, method2_capacity, GainObjective};
pub use scan::method1_capacity;

use crate::channels::{
    cnot_class_angle, lift_to_ancilla, PureState, RandomUnitaryChannel, Sign, ANCILLA_CUT,
    FOUR_QUBITS, TWO_QUBITS,
};
use crate::entanglement::{
    coherent_informations, distillable_interval, pure_entanglement, DistillableInterval,
};
use crate::error::{Error, Result};
use crate::qmat::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// Signed gain: `out - in` for `Up`, `in - out` for `Down`.
    pub fn gain(self, input: f64, output: f64) -> f64 {
        match self {
            Direction::Up => output - input,
            Direction::Down => input - output,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            other => Err(format!("unknown direction '{other}' (expected up or down)")),
        }
    }
}

/// Where the optimum was found.
#[derive(Clone, Debug, PartialEq)]
pub enum OptimizerArgument {
    /// `cos(alpha)|00> + sign i sin(alpha)|11>`, `alpha` in `[0, pi/2]`.
    OptimalFamily { alpha: f64, sign: Sign },
    /// The 30 ancilla-state angles.
    Appendix { angles: Vec<f64> },
}

impl OptimizerArgument {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            OptimizerArgument::OptimalFamily { alpha, .. } => Some(*alpha),
            OptimizerArgument::Appendix { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityResult {
    pub direction: Direction,
    /// Non-negative; a negative best gain is reported as zero.
    pub value: f64,
    pub argument: OptimizerArgument,
    pub input_entanglement: f64,
    /// Output entanglement as scored by the objective.
    pub output_entanglement: f64,
    pub output_interval: DistillableInterval,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl CapacityResult {
    /// Unclamped gain at the reported argument.
    pub fn raw_gain(&self) -> f64 {
        self.direction
            .gain(self.input_entanglement, self.output_entanglement)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Central-difference probe, radians.
    pub fd_step: f64,
    pub initial_step: f64,
    pub shrink_factor: f64,
    /// Stop once an accepted step improves the objective by less than this.
    pub convergence_tol: f64,
    pub max_iters: usize,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            fd_step: 1e-4,
            initial_step: 0.05,
            shrink_factor: 0.5,
            convergence_tol: 1e-7,
            max_iters: 5000,
            rng_seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        for (name, v) in [
            ("fd_step", self.fd_step),
            ("initial_step", self.initial_step),
            ("convergence_tol", self.convergence_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return bad("shrink_factor must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Capacity of a single unitary. CNOT-class inputs (combinations of I and
/// XX) go through the one-parameter scan; anything else through the ancilla
/// ascent with the default configuration.
pub fn unitary_capacity(u: &ComplexMatrix, direction: Direction) -> Result<CapacityResult> {
    let ch = RandomUnitaryChannel::unitary(u.clone())?;
    if cnot_class_angle(u).is_some() {
        method1_capacity(&ch, direction)
    } else {
        method2_capacity(&ch, direction, &OptimizerConfig::default())
    }
}

/// Cut and channel used to score `psi`: four-qubit states are cut AA'|BB'
/// (lifting a two-qubit channel onto A and B), two-qubit states A|B.
fn scoring_setup(
    psi: &PureState,
    ch: &RandomUnitaryChannel,
) -> Result<(RandomUnitaryChannel, &'static [usize])> {
    match (psi.subsystem_dims(), ch.factor_dims()) {
        (s, c) if s == FOUR_QUBITS && c == TWO_QUBITS => Ok((lift_to_ancilla(ch)?, &ANCILLA_CUT)),
        (s, c) if s == FOUR_QUBITS && c == FOUR_QUBITS => Ok((ch.clone(), &ANCILLA_CUT)),
        (s, c) if s == TWO_QUBITS && c == TWO_QUBITS => Ok((ch.clone(), &[0])),
        (s, c) => Err(Error::DimensionMismatch(format!(
            "state on {s:?} cannot be scored against a channel on {c:?}"
        ))),
    }
}

/// Scored quantities for one input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Score {
    pub input: f64,
    pub output: f64,
    pub interval: DistillableInterval,
    pub gain: f64,
}

pub(crate) fn score(
    psi: &PureState,
    ch: &RandomUnitaryChannel,
    direction: Direction,
) -> Result<Score> {
    let (ch, cut) = scoring_setup(psi, ch)?;
    let input = pure_entanglement(psi, cut)?;
    let rho = ch.apply_to_pure(psi)?;
    let interval = distillable_interval(&rho, cut)?;
    let output = if direction == Direction::Up && psi.subsystem_dims() == FOUR_QUBITS {
        coherent_informations(&rho, cut)?.1
    } else {
        interval.lower
    };
    Ok(Score {
        input,
        output,
        interval,
        gain: direction.gain(input, output),
    })
}

/// One evaluation of the optimized quantity. `Up` on four-qubit inputs is
/// `S(BB') - S(AA'BB') - E(psi)`; otherwise the hashing bound of the output
/// minus the input entanglement (`Up`) or the reverse (`Down`).
pub fn objective_gain(
    psi: &PureState,
    ch: &RandomUnitaryChannel,
    direction: Direction,
) -> Result<f64> {
    Ok(score(psi, ch, direction)?.gain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{appendix_index, optimal_state, xx_rotation};
    use crate::qmat::C64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn objective_examples() {
        let id2 = RandomUnitaryChannel::identity(&TWO_QUBITS);
        let prod = PureState::basis(&TWO_QUBITS, 0).unwrap();
        assert_eq!(objective_gain(&prod, &id2, Direction::Up).unwrap(), 0.0);

        let cnot = RandomUnitaryChannel::unitary(xx_rotation(FRAC_PI_4)).unwrap();
        let start =
            optimal_state(0.0, Sign::Plus).tensor(&PureState::basis(&TWO_QUBITS, 0).unwrap());
        // reorder (A, B, A', B') -> (A, A', B, B')
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        for i in 0..2 {
            for k in 0..2 {
                amps[appendix_index(i, 0, k, 0) - 1] = start.amplitudes()[8 * i + 4 * k];
            }
        }
        let psi = PureState::new(&FOUR_QUBITS, amps).unwrap();
        let gain = objective_gain(&psi, &cnot, Direction::Up).unwrap();
        assert!((gain - 1.0).abs() < 1e-12);

        // Bell pair A-B, identity: input and output entanglement cancel
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        amps[appendix_index(0, 0, 0, 0) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
        amps[appendix_index(1, 0, 1, 0) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
        let bell = PureState::new(&FOUR_QUBITS, amps).unwrap();
        let id = RandomUnitaryChannel::identity(&TWO_QUBITS);
        for dir in [Direction::Up, Direction::Down] {
            assert!(objective_gain(&bell, &id, dir).unwrap().abs() < 1e-12);
        }

        let three = PureState::basis(&[2, 2, 2], 0).unwrap();
        assert!(objective_gain(&three, &id, Direction::Up).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let c = OptimizerConfig {
            shrink_factor: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = OptimizerConfig {
            fd_step: -1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("up".parse::<Direction>(), Ok(Direction::Up));
        assert_eq!("down".parse::<Direction>(), Ok(Direction::Down));
        assert!("sideways".parse::<Direction>().is_err());
    }
}
