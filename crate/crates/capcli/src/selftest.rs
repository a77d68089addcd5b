//! Quick invariant checks runnable from the binary.

use std::f64::consts::{FRAC_PI_4, PI};

use entcap_core::channels::{appendix_state, xx_rotation, APPENDIX_PARAMS, TWO_QUBITS};
use entcap_core::entanglement::{entanglement_of_formation, pure_entanglement};
use entcap_core::*;

use crate::config::Directions;
use crate::params::{ChannelParams, Family, Grid, Method, SweepVariable};
use crate::sweep::{csv_string, run_sweep, SweepSpec};

pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SelfCheck {
    match f() {
        Ok((passed, detail)) => SelfCheck {
            name,
            passed,
            detail,
        },
        Err(e) => SelfCheck {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_selftest() -> Vec<SelfCheck> {
    vec![
        run_check("cnot anchor", || {
            let u = xx_rotation(FRAC_PI_4);
            let up = unitary_capacity(&u, Direction::Up)?.value;
            let down = unitary_capacity(&u, Direction::Down)?.value;
            Ok((
                (up - 1.0).abs() < 1e-6 && (down - 1.0).abs() < 1e-6,
                format!("up {up:.9}, down {down:.9}"),
            ))
        }),
        run_check("identity has zero capacity", || {
            let id = ComplexMatrix::identity(&TWO_QUBITS);
            let v = unitary_capacity(&id, Direction::Up)?.value;
            Ok((v.abs() < 1e-9, format!("{v:.2e}")))
        }),
        run_check("unitary up equals down", || {
            let ch = RandomUnitaryChannel::unitary(xx_rotation(PI / 8.0))?;
            let up = method1_capacity(&ch, Direction::Up)?.value;
            let down = method1_capacity(&ch, Direction::Down)?.value;
            Ok((
                (up - down).abs() < 1e-6,
                format!("gap {:.2e}", (up - down).abs()),
            ))
        }),
        run_check("noiseless gaussian is the unitary", || {
            let ch = gaussian_channel(&GaussianNoiseSpec::new(FRAC_PI_4, 0.0)?);
            let v = method1_capacity(&ch, Direction::Up)?.value;
            Ok(((v - 1.0).abs() < 1e-6, format!("{v:.9}")))
        }),
        run_check("formation entropy of pure states", || {
            let worst = (0..=20)
                .map(|k| {
                    let psi = optimal_state(k as f64 * PI / 40.0, Sign::Plus);
                    let e = entanglement_of_formation(&psi.density_matrix())?;
                    Ok((e - pure_entanglement(&psi, &[0])?).abs())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((worst < 1e-9, format!("max deviation {worst:.2e}")))
        }),
        run_check("ancilla state normalization", || {
            let mut worst: f64 = 0.0;
            for k in 0..200 {
                let x: Vec<f64> = (0..APPENDIX_PARAMS)
                    .map(|j| ((k * 31 + j * 17) as f64 * 0.618_033_988_7).rem_euclid(2.0 * PI))
                    .collect();
                let n: f64 = appendix_state(&x)?
                    .amplitudes()
                    .iter()
                    .map(|a| a.norm_sqr())
                    .sum();
                worst = worst.max((n - 1.0).abs());
            }
            Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
        }),
        run_check("seeded ascent is reproducible", || {
            let ch = mixture_channel(vec![
                (0.5, CanonicalParams::new(0.4, 0.3, 0.0)?.into()),
                (0.5, CanonicalParams::new(0.6, 0.5, 0.0)?.into()),
            ])?;
            let cfg = OptimizerConfig {
                restarts: 2,
                max_iters: 30,
                rng_seed: 11,
                ..Default::default()
            };
            let a = method2_capacity(&ch, Direction::Down, &cfg)?;
            let b = method2_capacity(&ch, Direction::Down, &cfg)?;
            Ok((a == b, format!("value {:.9}", a.value)))
        }),
        run_check("sweep CSV is deterministic", || {
            let spec = SweepSpec {
                params: ChannelParams {
                    family: Family::CnotMix,
                    xi: PI / 8.0,
                    xi_y: 0.0,
                    xi_z: 0.0,
                    delta: 0.0,
                    p: 0.5,
                    mean: 0.0,
                    sigma: 0.0,
                },
                variable: SweepVariable::Delta,
                grid: Grid {
                    start: -0.2,
                    stop: 0.2,
                    points: 3,
                },
                directions: Directions {
                    up: true,
                    down: true,
                },
                method: Method::Method1,
                optimizer: OptimizerConfig::default(),
            };
            let run = || run_sweep(&spec).map(|rows| csv_string(&rows));
            match (run(), run()) {
                (Ok(a), Ok(b)) => Ok((a == b, format!("{} bytes", a.len()))),
                (Err(e), _) | (_, Err(e)) => Ok((false, e.to_string())),
            }
        }),
    ]
}
