//! Input states and random-unitary channels on two qubits, optionally
//! extended with one ancilla qubit per side.
//!
//! Four-qubit spaces use the factor order (A, A', B, B'); the bipartite cut
//! is AA'|BB'.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::qmat::{
    self, hermitian_eigenvalues_unchecked, pauli_x, pauli_y, pauli_z, unitary_from_generator,
    ComplexMatrix, C64,
};

pub const NORM_TOL: f64 = 1e-12;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
pub const STATE_TOL: f64 = 1e-10;

pub const TWO_QUBITS: [usize; 2] = [2, 2];
pub const FOUR_QUBITS: [usize; 4] = [2, 2, 2, 2];

/// Factor positions of A and B inside (A, A', B, B').
pub const AB_IN_ANCILLA_SPACE: [usize; 2] = [0, 2];
/// The AA' side of the AA'|BB' cut.
pub const ANCILLA_CUT: [usize; 2] = [0, 1];

/// Number of real parameters of the four-qubit ancilla state family.
pub const APPENDIX_PARAMS: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Requires unit norm within 1e-12.
    pub fn new(dims: &[usize], amplitudes: Vec<C64>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if amplitudes.len() != dim || dim == 0 {
            return Err(Error::WrongLength {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(Self {
            amplitudes,
            dims: dims.to_vec(),
        })
    }

    pub fn normalized(dims: &[usize], mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DimensionMismatch("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= n);
        Self::new(dims, amplitudes)
    }

    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if index >= dim {
            return Err(Error::WrongLength {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.dims, &self.amplitudes)
            .expect("length checked on construction")
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            amplitudes: amps,
            dims,
        }
    }

    pub fn evolve(&self, u: &ComplexMatrix) -> Result<PureState> {
        if u.dim() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} on state of dimension {}",
                u.dim(),
                self.amplitudes.len()
            )));
        }
        Ok(PureState {
            amplitudes: u.apply(&self.amplitudes),
            dims: self.dims.clone(),
        })
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Nonlocal angles of `exp(i sum_a xi_a sigma_a (x) sigma_a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalParams {
    xi_x: f64,
    xi_y: f64,
    xi_z: f64,
}

impl CanonicalParams {
    /// Strict: rejects angles outside `pi/4 >= xi_x >= xi_y >= |xi_z| >= 0`.
    pub fn new(xi_x: f64, xi_y: f64, xi_z: f64) -> Result<Self> {
        const SLACK: f64 = 1e-12;
        let ok = [xi_x, xi_y, xi_z].iter().all(|v| v.is_finite())
            && xi_x <= FRAC_PI_4 + SLACK
            && xi_x >= xi_y - SLACK
            && xi_y >= xi_z.abs() - SLACK;
        if !ok {
            return Err(Error::CanonicalOrder(xi_x, xi_y, xi_z));
        }
        Ok(Self { xi_x, xi_y, xi_z })
    }

    pub fn cnot_class(xi: f64) -> Result<Self> {
        Self::new(xi, 0.0, 0.0)
    }

    /// Maps arbitrary angles into the canonical chamber using the local
    /// equivalences: shifts by pi/2, axis permutations and paired sign flips.
    pub fn canonicalize(xi_x: f64, xi_y: f64, xi_z: f64) -> Result<Self> {
        let wrap = |v: f64| {
            let w = (v + FRAC_PI_4).rem_euclid(FRAC_PI_2) - FRAC_PI_4;
            if (w + FRAC_PI_4).abs() < 1e-15 {
                FRAC_PI_4
            } else {
                w
            }
        };
        let mut v = [wrap(xi_x), wrap(xi_y), wrap(xi_z)];
        v.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        if v[0] < 0.0 {
            v[0] = -v[0];
            v[2] = -v[2];
        }
        if v[1] < 0.0 {
            v[1] = -v[1];
            v[2] = -v[2];
        }
        // on the pi/4 face the sign of xi_z is a local choice
        if (v[0] - FRAC_PI_4).abs() < 1e-15 && v[2] < 0.0 {
            v[2] = -v[2];
        }
        Self::new(v[0], v[1], v[2])
    }

    pub fn xi_x(&self) -> f64 {
        self.xi_x
    }

    pub fn xi_y(&self) -> f64 {
        self.xi_y
    }

    pub fn xi_z(&self) -> f64 {
        self.xi_z
    }

    pub fn is_cnot_class(&self) -> bool {
        self.xi_y == 0.0 && self.xi_z == 0.0
    }

    /// `sum_a xi_a sigma_a (x) sigma_a`.
    pub fn generator(&self) -> ComplexMatrix {
        let xx = qmat::kron(&pauli_x(), &pauli_x()).scale_real(self.xi_x);
        let yy = qmat::kron(&pauli_y(), &pauli_y()).scale_real(self.xi_y);
        let zz = qmat::kron(&pauli_z(), &pauli_z()).scale_real(self.xi_z);
        &(&xx + &yy) + &zz
    }
}

pub fn canonical_unitary(p: &CanonicalParams) -> ComplexMatrix {
    unitary_from_generator(&p.generator()).expect("generator is Hermitian")
}

/// `exp(i xi XX) = cos(xi) I + i sin(xi) XX` for any real `xi`.
pub fn xx_rotation(xi: f64) -> ComplexMatrix {
    let xx = qmat::kron(&pauli_x(), &pauli_x());
    let id = ComplexMatrix::identity(&TWO_QUBITS);
    &id.scale_real(xi.cos()) + &xx.scale(C64::new(0.0, xi.sin()))
}

/// Sign choice in `cos(a)|00> + sign * i sin(a)|11>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// `cos(alpha)|00> + sign * i sin(alpha)|11>`. Every real `alpha` gives a
/// valid state; [`wrap_alpha`] maps the pair to `alpha` in `[0, pi/2]`.
pub fn optimal_state(alpha: f64, sign: Sign) -> PureState {
    let z = C64::new(0.0, 0.0);
    let amps = vec![
        C64::new(alpha.cos(), 0.0),
        z,
        z,
        C64::new(0.0, sign.value() * alpha.sin()),
    ];
    PureState::new(&TWO_QUBITS, amps).expect("unit norm by construction")
}

/// Representative of `(alpha, sign)` with `alpha` in `[0, pi/2]` that
/// names the same ray.
pub fn wrap_alpha(alpha: f64, sign: Sign) -> (f64, Sign) {
    // shifting alpha by pi is a global phase
    let mut a = alpha.rem_euclid(PI);
    let mut s = sign;
    if a > FRAC_PI_2 {
        // cos(a)|00> + s i sin(a)|11> = -(cos(pi-a)|00> - s i sin(pi-a)|11>)
        a = PI - a;
        s = s.flip();
    }
    if a == 0.0 {
        s = Sign::Plus;
    }
    (a, s)
}

/// Composite index of `|i>_A |j>_A' |k>_B |l>_B'` in the ancilla space,
/// counted from one.
pub fn appendix_index(i: usize, j: usize, k: usize, l: usize) -> usize {
    8 * i + 4 * j + 2 * k + l + 1
}

/// Four-qubit state over (A, A', B, B') from 30 angles: fifteen magnitude
/// angles `phi_1..phi_15` followed by fifteen phases `theta_2..theta_16`.
///
/// Amplitude `x` (one-based) is `sin(phi_{x-1}) prod_{y=x}^{15} cos(phi_y)`
/// times `exp(i theta_x)` with `phi_0 = pi/2` and `theta_1 = 0`. The real
/// prefactor keeps its sign; a negative prefactor is a phase of pi.
pub fn appendix_state(angles: &[f64]) -> Result<PureState> {
    Ok(PureState {
        amplitudes: appendix_amplitudes(angles)?.to_vec(),
        dims: FOUR_QUBITS.to_vec(),
    })
}

pub(crate) fn appendix_amplitudes(angles: &[f64]) -> Result<[C64; 16]> {
    if angles.len() != APPENDIX_PARAMS {
        return Err(Error::WrongLength {
            expected: APPENDIX_PARAMS,
            got: angles.len(),
        });
    }
    let (phi, theta) = angles.split_at(15);
    let mut amps = [C64::new(0.0, 0.0); 16];
    // suffix[x] = prod_{y=x}^{15} cos(phi_y), phi_y = phi[y-1]
    let mut suffix = 1.0;
    for x in (1..=16).rev() {
        let sin_prev = if x == 1 { 1.0 } else { phi[x - 2].sin() };
        let modulus = sin_prev * suffix;
        let phase = if x == 1 { 0.0 } else { theta[x - 2] };
        amps[x - 1] = C64::from_polar(modulus, phase);
        if x >= 2 {
            suffix *= phi[x - 2].cos();
        }
    }
    Ok(amps)
}

/// Inverse of [`appendix_state`]: angles reproducing `psi` up to a global
/// phase. Magnitude angles land in `[0, pi/2]`, phases in `[0, 2 pi)`.
pub fn appendix_angles(psi: &PureState) -> Result<Vec<f64>> {
    if psi.subsystem_dims() != FOUR_QUBITS {
        return Err(Error::DimensionMismatch(format!(
            "expected a four-qubit state, got factors {:?}",
            psi.subsystem_dims()
        )));
    }
    let c = psi.amplitudes();
    // global phase chosen so the first amplitude is real and non-negative
    let phase0 = if c[0].norm() > 0.0 { c[0].arg() } else { 0.0 };
    let mut phi = [0.0; 15];
    let mut theta = [0.0; 15];
    let mut prefix = c[0].norm_sqr();
    for x in 2..=16 {
        let m = c[x - 1].norm();
        phi[x - 2] = m.atan2(prefix.sqrt());
        theta[x - 2] = (c[x - 1].arg() - phase0).rem_euclid(2.0 * PI);
        prefix += m * m;
    }
    Ok(phi.iter().chain(theta.iter()).copied().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub unitary: ComplexMatrix,
}

/// `rho -> sum_k p_k U_k rho U_k^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomUnitaryChannel {
    branches: Vec<Branch>,
}

/// One mixture entry, given as canonical angles or as an explicit unitary.
#[derive(Clone, Debug, PartialEq)]
pub enum BranchSpec {
    Canonical(CanonicalParams),
    Matrix(ComplexMatrix),
}

impl From<CanonicalParams> for BranchSpec {
    fn from(p: CanonicalParams) -> Self {
        BranchSpec::Canonical(p)
    }
}

impl From<ComplexMatrix> for BranchSpec {
    fn from(m: ComplexMatrix) -> Self {
        BranchSpec::Matrix(m)
    }
}

impl RandomUnitaryChannel {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        mixture_channel(vec![(1.0, BranchSpec::Matrix(u))])
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            branches: vec![Branch {
                weight: 1.0,
                unitary: ComplexMatrix::identity(dims),
            }],
        }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn factor_dims(&self) -> &[usize] {
        self.branches[0].unitary.subsystem_dims()
    }

    pub fn dim(&self) -> usize {
        self.branches[0].unitary.dim()
    }

    /// `sum_k p_k U_k |psi><psi| U_k^dagger` for a state on exactly the
    /// channel's factors.
    pub fn apply_to_pure(&self, psi: &PureState) -> Result<ComplexMatrix> {
        if psi.subsystem_dims() != self.factor_dims() {
            return Err(Error::DimensionMismatch(format!(
                "channel on {:?}, state on {:?}",
                self.factor_dims(),
                psi.subsystem_dims()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.factor_dims());
        for b in &self.branches {
            let phi = b.unitary.apply(psi.amplitudes());
            let proj = ComplexMatrix::projector(self.factor_dims(), &phi)?;
            out = &out + &proj.scale_real(b.weight);
        }
        Ok(out.hermitian_part())
    }
}

/// Builds a channel from weighted branches; weights are normalized to one.
pub fn mixture_channel(entries: Vec<(f64, BranchSpec)>) -> Result<RandomUnitaryChannel> {
    if entries.is_empty() {
        return Err(Error::EmptyChannel);
    }
    let total: f64 = entries.iter().map(|(w, _)| *w).sum();
    let mut branches = Vec::with_capacity(entries.len());
    for (w, spec) in entries {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight(w));
        }
        let unitary = match spec {
            BranchSpec::Canonical(p) => canonical_unitary(&p),
            BranchSpec::Matrix(m) => {
                let deviation = m.unitarity_defect();
                if deviation > UNITARY_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
                m
            }
        };
        branches.push(Branch {
            weight: w / total,
            unitary,
        });
    }
    let dims = branches[0].unitary.subsystem_dims().to_vec();
    if branches.iter().any(|b| b.unitary.subsystem_dims() != dims) {
        return Err(Error::DimensionMismatch(
            "branches act on different spaces".into(),
        ));
    }
    Ok(RandomUnitaryChannel { branches })
}

/// `xi ~ N(mean_xi, sigma^2)` in `exp(i xi XX)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianNoiseSpec {
    mean_xi: f64,
    sigma: f64,
}

impl GaussianNoiseSpec {
    pub fn new(mean_xi: f64, sigma: f64) -> Result<Self> {
        if !mean_xi.is_finite() || !sigma.is_finite() {
            return Err(Error::InvalidNoise("parameters must be finite".into()));
        }
        if sigma < 0.0 {
            return Err(Error::InvalidNoise(format!(
                "standard deviation {sigma} is negative"
            )));
        }
        Ok(Self { mean_xi, sigma })
    }

    pub fn mean_xi(&self) -> f64 {
        self.mean_xi
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Weights `(q, 1 - q)` of `U(mean)` and `U(mean + pi/2)`, with
    /// `q = (1 + exp(-2 sigma^2)) / 2`.
    pub fn branch_weights(&self) -> (f64, f64) {
        let e = -2.0 * self.sigma * self.sigma;
        let rest = -e.exp_m1() / 2.0;
        (1.0 - rest, rest)
    }
}

/// Exact two-branch form of the Gaussian average of `exp(i xi XX)`.
///
/// Writing `U(mean + d) = U(mean)(cos d + i sin d XX)`, the cross terms
/// vanish because `E[sin 2d] = 0`, `E[cos^2 d] = (1 + exp(-2 sigma^2)) / 2`,
/// and `i XX = U(pi/2)`.
pub fn gaussian_channel(spec: &GaussianNoiseSpec) -> RandomUnitaryChannel {
    let (q, rest) = spec.branch_weights();
    let first = Branch {
        weight: q,
        unitary: xx_rotation(spec.mean_xi),
    };
    let mut branches = vec![first];
    if rest > 0.0 {
        branches.push(Branch {
            weight: rest,
            unitary: xx_rotation(spec.mean_xi + FRAC_PI_2),
        });
    }
    RandomUnitaryChannel { branches }
}

/// Checks `rho` is a unit-trace positive semidefinite Hermitian matrix.
pub fn validate_state(rho: &ComplexMatrix) -> Result<()> {
    let asymmetry = rho.hermiticity_defect();
    if asymmetry > STATE_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > STATE_TOL {
        return Err(Error::NotUnitTrace { trace });
    }
    let min = hermitian_eigenvalues_unchecked(rho)[0];
    if min < -STATE_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Applies the channel with its factors mapped onto `acting_on` factors of
/// `rho` (identity on the rest).
pub fn apply(
    ch: &RandomUnitaryChannel,
    rho: &ComplexMatrix,
    acting_on: &[usize],
) -> Result<ComplexMatrix> {
    validate_state(rho)?;
    if acting_on.len() != ch.factor_dims().len() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} factors but {} targets were given",
            ch.factor_dims().len(),
            acting_on.len()
        )));
    }
    let identity_map = rho.subsystem_dims() == ch.factor_dims()
        && acting_on.iter().enumerate().all(|(i, &t)| i == t);
    let mut out = ComplexMatrix::zeros(rho.subsystem_dims());
    for b in &ch.branches {
        let u = if identity_map {
            b.unitary.clone()
        } else {
            b.unitary.embed(acting_on, rho.subsystem_dims())?
        };
        let term = &(&u * rho) * &u.adjoint();
        out = &out + &term.scale_real(b.weight);
    }
    Ok(out.hermitian_part())
}

/// Extends a two-qubit channel to (A, A', B, B') with identity on the
/// ancillas.
pub fn lift_to_ancilla(ch: &RandomUnitaryChannel) -> Result<RandomUnitaryChannel> {
    if ch.factor_dims() != TWO_QUBITS {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qubit channel, got factors {:?}",
            ch.factor_dims()
        )));
    }
    let branches = ch
        .branches
        .iter()
        .map(|b| {
            Ok(Branch {
                weight: b.weight,
                unitary: b.unitary.embed(&AB_IN_ANCILLA_SPACE, &FOUR_QUBITS)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomUnitaryChannel { branches })
}

/// Returns `xi` with `U = e^{i gamma} exp(i xi XX)` when `u` is a 4x4
/// combination of I and XX, otherwise `None`.
pub fn cnot_class_angle(u: &ComplexMatrix) -> Option<f64> {
    const TOL: f64 = 1e-10;
    if u.subsystem_dims() != TWO_QUBITS {
        return None;
    }
    let a = u[(0, 0)];
    let b = u[(0, 3)];
    for r in 0..4 {
        for c in 0..4 {
            let expect = if r == c {
                a
            } else if r + c == 3 {
                b
            } else {
                C64::new(0.0, 0.0)
            };
            if (u[(r, c)] - expect).norm() > TOL {
                return None;
            }
        }
    }
    // a = e^{ig} cos xi, b = i e^{ig} sin xi
    let (gamma_ref, big) = if a.norm() >= b.norm() {
        (a, a.norm())
    } else {
        (b * C64::new(0.0, -1.0), b.norm())
    };
    let phase = gamma_ref / big;
    let cos = (a / phase).re;
    let sin = (b * C64::new(0.0, -1.0) / phase).re;
    Some(sin.atan2(cos))
}
