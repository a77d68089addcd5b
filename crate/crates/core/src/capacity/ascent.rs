use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{score, CapacityResult, Direction, OptimizerArgument, OptimizerConfig};
use crate::channels::{
    appendix_amplitudes, appendix_state, lift_to_ancilla, RandomUnitaryChannel, APPENDIX_PARAMS,
    FOUR_QUBITS, TWO_QUBITS,
};
use crate::entanglement::entropy_of_spectrum;
use crate::error::{Error, Result};
use crate::qmat::{jacobi_in_place, C64};

/// Steps shorter than this end the line search.
const MIN_STEP: f64 = 1e-12;
/// Cap on the step length after regrowth, radians.
const MAX_STEP: f64 = 1.0;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Allocation-free evaluator of the ancilla-assisted gain as a function of
/// the 30 state angles. Agrees with [`super::objective_gain`] on the state
/// [`appendix_state`] builds.
#[derive(Clone, Debug)]
pub struct GainObjective {
    weights: Vec<f64>,
    unitaries: Vec<[C64; 256]>,
    direction: Direction,
}

fn entropy4(m: &mut [C64; 16]) -> f64 {
    jacobi_in_place(m, 4, None);
    entropy_of_spectrum(&[m[0].re, m[5].re, m[10].re, m[15].re])
}

impl GainObjective {
    /// `ch` may act on two qubits (lifted onto A and B) or already on
    /// (A, A', B, B').
    pub fn new(ch: &RandomUnitaryChannel, direction: Direction) -> Result<Self> {
        let lifted = match ch.factor_dims() {
            d if d == TWO_QUBITS => lift_to_ancilla(ch)?,
            d if d == FOUR_QUBITS => ch.clone(),
            d => {
                return Err(Error::DimensionMismatch(format!(
                    "ancilla ascent needs a two- or four-qubit channel, got {d:?}"
                )))
            }
        };
        let mut weights = Vec::new();
        let mut unitaries = Vec::new();
        for b in lifted.branches() {
            let mut u = [ZERO; 256];
            u.copy_from_slice(b.unitary.as_slice());
            weights.push(b.weight);
            unitaries.push(u);
        }
        Ok(Self {
            weights,
            unitaries,
            direction,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn eval(&self, angles: &[f64]) -> f64 {
        let psi = appendix_amplitudes(angles).expect("30 angles");

        // amplitude index 4 * (AA') + (BB'); reduced state on AA' is M M^dagger
        let mut red_in = [ZERO; 16];
        for a in 0..4 {
            for a2 in 0..4 {
                red_in[a * 4 + a2] = (0..4)
                    .map(|b| psi[a * 4 + b] * psi[a2 * 4 + b].conj())
                    .sum();
            }
        }
        let e_in = entropy4(&mut red_in);

        let k = self.weights.len();
        let mut outs: Vec<[C64; 16]> = Vec::with_capacity(k);
        for u in &self.unitaries {
            let mut phi = [ZERO; 16];
            for (r, slot) in phi.iter_mut().enumerate() {
                *slot = u[r * 16..r * 16 + 16]
                    .iter()
                    .zip(&psi)
                    .map(|(x, y)| x * y)
                    .sum();
            }
            outs.push(phi);
        }

        let mut red_a = [ZERO; 16];
        let mut red_b = [ZERO; 16];
        for (phi, &w) in outs.iter().zip(&self.weights) {
            for x in 0..4 {
                for y in 0..4 {
                    let mut sa = ZERO;
                    let mut sb = ZERO;
                    for z in 0..4 {
                        sa += phi[x * 4 + z] * phi[y * 4 + z].conj();
                        sb += phi[z * 4 + x] * phi[z * 4 + y].conj();
                    }
                    red_a[x * 4 + y] += sa * w;
                    red_b[x * 4 + y] += sb * w;
                }
            }
        }
        let s_a = entropy4(&mut red_a);
        let s_b = entropy4(&mut red_b);

        // joint output spectrum from the branch Gram matrix
        let mut gram = vec![ZERO; k * k];
        for i in 0..k {
            for j in 0..k {
                let ov: C64 = outs[i]
                    .iter()
                    .zip(&outs[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                gram[i * k + j] = ov * (self.weights[i] * self.weights[j]).sqrt();
            }
        }
        jacobi_in_place(&mut gram, k, None);
        let spectrum: Vec<f64> = (0..k).map(|i| gram[i * k + i].re).collect();
        let s_joint = entropy_of_spectrum(&spectrum);

        let out = match self.direction {
            Direction::Up => s_b - s_joint,
            Direction::Down => (s_a - s_joint).max(s_b - s_joint).max(0.0),
        };
        self.direction.gain(e_in, out)
    }
}

/// Central differences, one coordinate at a time.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + step;
            let up = f(&probe);
            probe[i] = x[i] - step;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub(crate) struct AscentRun {
    pub angles: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Normalized-gradient ascent with backtracking. Every accepted step
/// strictly increases the objective; the step grows back by
/// `1 / shrink_factor` after each success.
pub(crate) fn ascend(
    f: &impl Fn(&[f64]) -> f64,
    start: Vec<f64>,
    cfg: &OptimizerConfig,
) -> AscentRun {
    let mut x = start;
    let mut fx = f(&x);
    let mut step = cfg.initial_step;
    for iter in 0..cfg.max_iters {
        let g = finite_difference_gradient(f, &x, cfg.fd_step);
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(gnorm > 0.0 && gnorm.is_finite()) {
            return AscentRun {
                angles: x,
                value: fx,
                iterations: iter,
                converged: true,
            };
        }
        let mut t = step;
        let mut accepted = None;
        while t >= MIN_STEP {
            let cand: Vec<f64> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| (xi + t * gi / gnorm).rem_euclid(TAU))
                .collect();
            let fc = f(&cand);
            if fc > fx {
                accepted = Some((cand, fc));
                break;
            }
            t *= cfg.shrink_factor;
        }
        let Some((cand, fc)) = accepted else {
            return AscentRun {
                angles: x,
                value: fx,
                iterations: iter + 1,
                converged: true,
            };
        };
        debug_assert!(fc > fx, "accepted step decreased the objective");
        let improvement = fc - fx;
        x = cand;
        fx = fc;
        if improvement < cfg.convergence_tol {
            return AscentRun {
                angles: x,
                value: fx,
                iterations: iter + 1,
                converged: true,
            };
        }
        step = (t / cfg.shrink_factor).min(MAX_STEP);
    }
    AscentRun {
        angles: x,
        value: fx,
        iterations: cfg.max_iters,
        converged: false,
    }
}

/// Seeded uniform starting points on `[0, 2 pi]^30`, one per restart, drawn
/// in restart order from a single stream.
pub(crate) fn starting_points(cfg: &OptimizerConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    (0..cfg.restarts)
        .map(|_| {
            (0..APPENDIX_PARAMS)
                .map(|_| rng.gen_range(0.0..TAU))
                .collect()
        })
        .collect()
}

/// Lower bound on the capacity of `ch` from pure states of (A, A', B, B')
/// with qubit ancillas: best of `cfg.restarts` seeded ascents.
pub fn method2_capacity(
    ch: &RandomUnitaryChannel,
    direction: Direction,
    cfg: &OptimizerConfig,
) -> Result<CapacityResult> {
    cfg.validate()?;
    let objective = GainObjective::new(ch, direction)?;
    let f = |x: &[f64]| objective.eval(x);
    let runs: Vec<AscentRun> = starting_points(cfg)
        .into_par_iter()
        .map(|start| ascend(&f, start, cfg))
        .collect();

    // first restart wins ties, so the result does not depend on scheduling
    let mut best = &runs[0];
    for run in &runs[1..] {
        if run.value > best.value {
            best = run;
        }
    }
    let psi = appendix_state(&best.angles)?;
    let s = score(&psi, ch, direction)?;
    Ok(CapacityResult {
        direction,
        value: s.gain.max(0.0),
        argument: OptimizerArgument::Appendix {
            angles: best.angles.clone(),
        },
        input_entanglement: s.input,
        output_entanglement: s.output,
        output_interval: s.interval,
        restarts_used: runs.len(),
        iterations: best.iterations,
        converged: runs.iter().any(|r| r.converged),
    })
}
