//! Entanglement measures and two-sided bounds on distillable entanglement.
//!
//! All logarithms are base 2, so every quantity is in ebits. A `cut` names
//! the factors on one side of a bipartition; the other side is everything
//! else.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channels::{validate_state, PureState, STATE_TOL, TWO_QUBITS};
use crate::error::{Error, Result};
use crate::qmat::{
    hermitian_eig, hermitian_eigenvalues_unchecked, kron, pauli_y, ComplexMatrix, C64,
};

/// Bell-diagonal test tolerance on off-diagonal Bell-basis entries.
pub const BELL_DIAGONAL_TOL: f64 = 1e-8;
/// Population allowed outside span{|00>, |11>} for a maximally correlated
/// two-qubit state.
pub const MAX_CORRELATED_TOL: f64 = 1e-8;
/// Interval width below which the bounds count as coinciding.
pub const TIGHT_TOL: f64 = 1e-6;
/// Largest eigenvalue within this of one means the state is pure.
pub const PURITY_TOL: f64 = 1e-10;

const SPECTRAL_FLOOR: f64 = 64.0 * f64::EPSILON;

/// `-sum x log2 x` over the spectrum, with `0 log 0 = 0`. Tiny negative
/// eigenvalues from rounding are dropped.
pub(crate) fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    s.max(0.0)
}

pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eig(rho)?;
    if spec.eigenvalues[0] < -STATE_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: spec.eigenvalues[0],
        });
    }
    Ok(entropy_of_spectrum(&spec.eigenvalues))
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(entropy_of_spectrum(&[p, 1.0 - p]))
}

fn check_cut(cut: &[usize], factors: usize) -> Result<()> {
    let bad = || Error::InvalidSubsystems {
        indices: cut.to_vec(),
        count: factors,
    };
    if cut.is_empty() || cut.len() >= factors {
        return Err(bad());
    }
    for (i, &c) in cut.iter().enumerate() {
        if c >= factors || cut[..i].contains(&c) {
            return Err(bad());
        }
    }
    Ok(())
}

fn complement(cut: &[usize], factors: usize) -> Vec<usize> {
    (0..factors).filter(|i| !cut.contains(i)).collect()
}

/// Entropy of the reduced state on `cut`.
pub fn pure_entanglement(psi: &PureState, cut: &[usize]) -> Result<f64> {
    check_cut(cut, psi.subsystem_dims().len())?;
    let reduced = psi.density_matrix().partial_trace(cut)?;
    Ok(entropy_of_spectrum(&hermitian_eigenvalues_unchecked(
        &reduced,
    )))
}

fn require_two_qubits(rho: &ComplexMatrix) -> Result<()> {
    if rho.subsystem_dims() != TWO_QUBITS {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qubit state, got factors {:?}",
            rho.subsystem_dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, where the `l` are the
/// square roots of the eigenvalues of `sqrt(rho) rho~ sqrt(rho)` in
/// descending order and `rho~ = (Y (x) Y) rho* (Y (x) Y)`.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    validate_state(rho)?;
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = &(&yy * &rho.conj()) * &yy;
    // eigenvalues at the solver's rounding floor are zeroed before the
    // square root, which would otherwise lift them to ~1e-8
    let sqrt_rho = hermitian_eig(rho)?.map_eigenvalues(|l| {
        let l = if l < SPECTRAL_FLOOR { 0.0 } else { l };
        C64::new(l.sqrt(), 0.0)
    });
    let m = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let mut l: Vec<f64> = hermitian_eigenvalues_unchecked(&m)
        .into_iter()
        .map(|x| if x < SPECTRAL_FLOOR { 0.0 } else { x.sqrt() })
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `E_F = H((1 + sqrt(1 - C^2)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    entropy_of_spectrum(&[x, 1.0 - x])
}

pub fn entanglement_of_formation(rho: &ComplexMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Coherent information in both directions, `S(rho_A) - S(rho)` and
/// `S(rho_B) - S(rho)`, without clamping.
pub fn coherent_informations(rho: &ComplexMatrix, cut: &[usize]) -> Result<(f64, f64)> {
    check_cut(cut, rho.subsystem_dims().len())?;
    validate_state(rho)?;
    let other = complement(cut, rho.subsystem_dims().len());
    let s_joint = entropy_of_spectrum(&hermitian_eigenvalues_unchecked(rho));
    let s_a = entropy_of_spectrum(&hermitian_eigenvalues_unchecked(&rho.partial_trace(cut)?));
    let s_b = entropy_of_spectrum(&hermitian_eigenvalues_unchecked(
        &rho.partial_trace(&other)?,
    ));
    Ok((s_a - s_joint, s_b - s_joint))
}

/// Hashing bound: the larger one-way coherent information, clamped at 0.
pub fn hashing_lower(rho: &ComplexMatrix, cut: &[usize]) -> Result<f64> {
    let (ia, ib) = coherent_informations(rho, cut)?;
    Ok(ia.max(ib).max(0.0))
}

/// Logarithmic negativity `log2 || rho^{T_B} ||_1`, transposing every
/// factor outside `cut`.
pub fn negativity_upper(rho: &ComplexMatrix, cut: &[usize]) -> Result<f64> {
    check_cut(cut, rho.subsystem_dims().len())?;
    validate_state(rho)?;
    let mut pt = rho.clone();
    for f in complement(cut, rho.subsystem_dims().len()) {
        pt = pt.partial_transpose(f)?;
    }
    let trace_norm: f64 = hermitian_eigenvalues_unchecked(&pt)
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok(trace_norm.log2().max(0.0))
}

fn bell_basis() -> [[C64; 4]; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [
        [h, z, z, h],  // Phi+
        [h, z, z, -h], // Phi-
        [z, h, h, z],  // Psi+
        [z, h, -h, z], // Psi-
    ]
}

/// Weights of `rho` in the Bell basis (Phi+, Phi-, Psi+, Psi-), or an error
/// if `rho` has Bell-basis coherences above [`BELL_DIAGONAL_TOL`].
pub fn bell_weights(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    let basis = bell_basis();
    let mut weights = [0.0; 4];
    let mut off = 0.0f64;
    for (i, bi) in basis.iter().enumerate() {
        let rb = rho.apply(bi);
        for (j, bj) in basis.iter().enumerate() {
            let e: C64 = bj.iter().zip(&rb).map(|(x, y)| x.conj() * y).sum();
            if i == j {
                weights[i] = e.re;
            } else {
                off = off.max(e.norm());
            }
        }
    }
    if off > BELL_DIAGONAL_TOL {
        return Err(Error::NotBellDiagonal { off_diagonal: off });
    }
    Ok(weights)
}

/// Relative entropy of entanglement of a Bell-diagonal state:
/// `1 - H(p_max)` when `p_max > 1/2`, else 0.
pub fn bell_diagonal_ere(rho: &ComplexMatrix) -> Result<f64> {
    validate_state(rho)?;
    let w = bell_weights(rho)?;
    let p_max = w.iter().cloned().fold(f64::MIN, f64::max).min(1.0);
    if p_max > 0.5 {
        Ok(1.0 - entropy_of_spectrum(&[p_max, 1.0 - p_max]))
    } else {
        Ok(0.0)
    }
}

/// True for a two-qubit state supported on span{|00>, |11>}.
pub fn is_maximally_correlated(rho: &ComplexMatrix) -> bool {
    rho.subsystem_dims() == TWO_QUBITS && rho[(1, 1)].re + rho[(2, 2)].re < MAX_CORRELATED_TOL
}

/// Bracket on the distillable entanglement across a cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistillableInterval {
    pub lower: f64,
    pub upper: f64,
    pub tight: bool,
}

impl DistillableInterval {
    pub fn exact(value: f64) -> Self {
        Self {
            lower: value,
            upper: value,
            tight: true,
        }
    }

    fn new(lower: f64, upper: f64) -> Self {
        let upper = upper.max(lower);
        Self {
            lower,
            upper,
            tight: upper - lower < TIGHT_TOL,
        }
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Lower edge is the hashing bound. The upper edge is the smallest of the
/// logarithmic negativity, the Bell-diagonal relative entropy when it
/// applies, and the reduced entropy of a pure state. Maximally correlated
/// two-qubit states collapse onto the hashing value, which is exact there.
pub fn distillable_interval(rho: &ComplexMatrix, cut: &[usize]) -> Result<DistillableInterval> {
    let lower = hashing_lower(rho, cut)?;
    if is_maximally_correlated(rho) {
        return Ok(DistillableInterval::exact(lower));
    }
    let mut upper = negativity_upper(rho, cut)?;
    if rho.subsystem_dims() == TWO_QUBITS {
        if let Ok(ere) = bell_diagonal_ere(rho) {
            upper = upper.min(ere);
        }
    }
    let spectrum = hermitian_eigenvalues_unchecked(rho);
    if spectrum[spectrum.len() - 1] >= 1.0 - PURITY_TOL {
        let reduced = rho.partial_trace(cut)?;
        upper = upper.min(entropy_of_spectrum(&hermitian_eigenvalues_unchecked(
            &reduced,
        )));
    }
    Ok(DistillableInterval::new(lower, upper))
}
