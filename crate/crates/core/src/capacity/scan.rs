use std::f64::consts::FRAC_PI_2;

use super::{score, CapacityResult, Direction, OptimizerArgument};
use crate::channels::{cnot_class_angle, optimal_state, wrap_alpha, RandomUnitaryChannel, Sign};
use crate::error::{Error, Result};

/// Grid resolution of the alpha scan, radians.
pub(crate) const SCAN_STEP: f64 = 1e-3;
/// Bracket width at which golden-section refinement stops, radians.
pub(crate) const REFINE_TOL: f64 = 1e-7;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximize `f` on `[lo, hi]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Capacity of a mixture of CNOT-class unitaries over inputs
/// `cos(a)|00> +- i sin(a)|11>`: both signs scanned on `[0, pi/2]`, the
/// best grid cell refined by golden section.
pub fn method1_capacity(ch: &RandomUnitaryChannel, direction: Direction) -> Result<CapacityResult> {
    for (k, b) in ch.branches().iter().enumerate() {
        if cnot_class_angle(&b.unitary).is_none() {
            return Err(Error::NotCnotClass(k));
        }
    }
    let gain = |alpha: f64, sign: Sign| -> f64 {
        score(&optimal_state(alpha, sign), ch, direction)
            .map(|s| s.gain)
            .unwrap_or(f64::NEG_INFINITY)
    };

    let points = (FRAC_PI_2 / SCAN_STEP).ceil() as usize;
    let mut best = (0.0, Sign::Plus, f64::NEG_INFINITY);
    for sign in [Sign::Plus, Sign::Minus] {
        for k in 0..=points {
            let alpha = (k as f64 * SCAN_STEP).min(FRAC_PI_2);
            let g = gain(alpha, sign);
            if g > best.2 {
                best = (alpha, sign, g);
            }
        }
    }
    let (alpha0, sign, g0) = best;
    let lo = (alpha0 - SCAN_STEP).max(0.0);
    let hi = (alpha0 + SCAN_STEP).min(FRAC_PI_2);
    let (alpha_ref, g_ref) = golden_max(|a| gain(a, sign), lo, hi, REFINE_TOL);
    let alpha = if g_ref > g0 { alpha_ref } else { alpha0 };

    let (alpha, sign) = wrap_alpha(alpha, sign);
    let s = score(&optimal_state(alpha, sign), ch, direction)?;
    Ok(CapacityResult {
        direction,
        value: s.gain.max(0.0),
        argument: OptimizerArgument::OptimalFamily { alpha, sign },
        input_entanglement: s.input,
        output_entanglement: s.output,
        output_interval: s.interval,
        restarts_used: 1,
        iterations: 2 * (points + 1),
        converged: true,
    })
}
