//! Dense complex matrices with an explicit tensor factorization.
//!
//! Everything here is sized for two to four qubits (dimension at most 16),
//! so storage is a flat row-major `Vec` and the algorithms are the direct
//! ones. Subsystem 0 is the leftmost tensor factor, which makes composite
//! indices the usual big-endian mixed-radix numbers.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity accepted on input to the eigensolver (max-entry asymmetry).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this
/// (relative to the matrix norm when that exceeds one).
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    dims: Vec<usize>,
    data: Vec<C64>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::BadFactorization {
            dims: dims.to_vec(),
            dim: 0,
        });
    }
    Ok(dims.iter().product())
}

/// Row-major strides for a factor list.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

impl ComplexMatrix {
    pub fn from_vec(dims: &[usize], data: Vec<C64>) -> Result<Self> {
        let dim = check_dims(dims)?;
        if data.len() != dim * dim {
            return Err(Error::WrongLength {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self {
            dim,
            dims: dims.to_vec(),
            data,
        })
    }

    pub fn from_real(dims: &[usize], data: &[f64]) -> Result<Self> {
        Self::from_vec(dims, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let dim: usize = dims.iter().product();
        assert!(dim > 0, "empty factorization");
        Self {
            dim,
            dims: dims.to_vec(),
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let mut m = Self::zeros(dims);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(dims: &[usize], diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(dims);
        if diag.len() != m.dim {
            return Err(Error::WrongLength {
                expected: m.dim,
                got: diag.len(),
            });
        }
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|v><v|`.
    pub fn projector(dims: &[usize], v: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(dims);
        if v.len() != m.dim {
            return Err(Error::WrongLength {
                expected: m.dim,
                got: v.len(),
            });
        }
        for r in 0..m.dim {
            for c in 0..m.dim {
                m.data[r * m.dim + c] = v[r] * v[c].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Same entries, different declared factorization.
    pub fn with_dims(mut self, dims: &[usize]) -> Result<Self> {
        let dim = check_dims(dims)?;
        if dim != self.dim {
            return Err(Error::BadFactorization {
                dims: dims.to_vec(),
                dim: self.dim,
            });
        }
        self.dims = dims.to_vec();
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(&self.dims);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let n = self.dim;
        (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.data[r * n + c] - self.data[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entry of `|U U^dagger - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self * &self.adjoint();
        prod.max_abs_diff(&Self::identity(&self.dims))
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = (self.data[r * n + c] + self.data[c * n + r].conj()) * 0.5;
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }

    pub fn partial_transpose(&self, subsystem: usize) -> Result<Self> {
        partial_transpose(self, subsystem)
    }

    /// Lift an operator on the factors `targets` (in the operator's own
    /// factor order) to the space `full_dims`, acting as identity elsewhere.
    pub fn embed(&self, targets: &[usize], full_dims: &[usize]) -> Result<Self> {
        check_subsystems(targets, full_dims.len())?;
        let local: Vec<usize> = targets.iter().map(|&t| full_dims[t]).collect();
        if local != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "operator factors {:?} cannot act on factors {:?} of {:?}",
                self.dims, targets, full_dims
            )));
        }
        let full_strides = strides(full_dims);
        let local_strides = strides(&local);
        let dim: usize = full_dims.iter().product();
        // split every composite index into (local part, rest-with-targets-zeroed)
        let split: Vec<(usize, usize)> = (0..dim)
            .map(|idx| {
                let mut loc = 0;
                let mut rest = idx;
                for (k, &t) in targets.iter().enumerate() {
                    let digit = (idx / full_strides[t]) % full_dims[t];
                    loc += digit * local_strides[k];
                    rest -= digit * full_strides[t];
                }
                (loc, rest)
            })
            .collect();
        let mut out = Self::zeros(full_dims);
        for r in 0..dim {
            for c in 0..dim {
                if split[r].1 == split[c].1 {
                    out.data[r * dim + c] = self.data[split[r].0 * self.dim + split[c].0];
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(&self.dims);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(&[2], &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        &[2],
        vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO],
    )
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(&[2], &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// Tensor product; the factor list of the result is `a`'s followed by `b`'s.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let mut data = vec![ZERO; n * n];
    for ar in 0..na {
        for ac in 0..na {
            let x = a.data[ar * na + ac];
            for br in 0..nb {
                for bc in 0..nb {
                    data[(ar * nb + br) * n + ac * nb + bc] = x * b.data[br * nb + bc];
                }
            }
        }
    }
    ComplexMatrix { dim: n, dims, data }
}

fn check_subsystems(indices: &[usize], count: usize) -> Result<()> {
    let bad = || Error::InvalidSubsystems {
        indices: indices.to_vec(),
        count,
    };
    for (i, &x) in indices.iter().enumerate() {
        if x >= count || indices[..i].contains(&x) {
            return Err(bad());
        }
    }
    Ok(())
}

/// Trace out every factor not listed in `keep`. Kept factors appear in
/// ascending order in the result.
pub fn partial_trace(m: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    check_subsystems(keep, m.dims.len())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if kept.is_empty() {
        return ComplexMatrix::from_vec(&[1], vec![m.trace()]);
    }
    let full = strides(&m.dims);
    let kept_dims: Vec<usize> = kept.iter().map(|&k| m.dims[k]).collect();
    let kept_strides = strides(&kept_dims);
    let split: Vec<(usize, usize)> = (0..m.dim)
        .map(|idx| {
            let mut loc = 0;
            let mut rest = idx;
            for (j, &k) in kept.iter().enumerate() {
                let digit = (idx / full[k]) % m.dims[k];
                loc += digit * kept_strides[j];
                rest -= digit * full[k];
            }
            (loc, rest)
        })
        .collect();
    let mut out = ComplexMatrix::zeros(&kept_dims);
    let nk = out.dim;
    for r in 0..m.dim {
        for c in 0..m.dim {
            if split[r].1 == split[c].1 {
                out.data[split[r].0 * nk + split[c].0] += m.data[r * m.dim + c];
            }
        }
    }
    Ok(out)
}

/// Transpose the indices of one tensor factor, leaving the others alone.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    check_subsystems(&[subsystem], m.dims.len())?;
    let stride = strides(&m.dims)[subsystem] as isize;
    let d = m.dims[subsystem];
    let n = m.dim;
    let mut out = ComplexMatrix::zeros(&m.dims);
    for r in 0..n {
        let dr = ((r / stride as usize) % d) as isize;
        for c in 0..n {
            let dc = ((c / stride as usize) % d) as isize;
            let rs = (r as isize + (dc - dr) * stride) as usize;
            let cs = (c as isize + (dr - dc) * stride) as usize;
            out.data[r * n + c] = m.data[rs * n + cs];
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.dim;
        (0..n).map(|r| self.eigenvectors.data[r * n + k]).collect()
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim;
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(&v.dims);
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = (0..n)
                    .map(|k| v.data[r * n + k] * fl[k] * v.data[c * n + k].conj())
                    .sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| C64::new(l, 0.0))
    }
}

/// Cyclic complex Jacobi on a row-major Hermitian `n x n` buffer. On exit
/// the diagonal of `a` holds the eigenvalues (unsorted) and, when given,
/// `v` has been right-multiplied by the accumulated rotation.
pub(crate) fn jacobi_in_place(a: &mut [C64], n: usize, mut v: Option<&mut [C64]>) {
    let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = JACOBI_OFF_TOL * norm.max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off += a[r * n + c].norm_sqr();
                }
            }
        }
        if off.sqrt() < target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = (apq / mag).conj();
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = phase * (-s);
                let gqq = phase * c;
                for k in 0..n {
                    let x = a[k * n + p];
                    let y = a[k * n + q];
                    a[k * n + p] = x * gpp + y * gqp;
                    a[k * n + q] = x * gpq + y * gqq;
                }
                for k in 0..n {
                    let x = a[p * n + k];
                    let y = a[q * n + k];
                    a[p * n + k] = gpp.conj() * x + gqp.conj() * y;
                    a[q * n + k] = gpq.conj() * x + gqq.conj() * y;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let x = v[k * n + p];
                        let y = v[k * n + q];
                        v[k * n + p] = x * gpp + y * gqp;
                        v[k * n + q] = x * gpq + y * gqq;
                    }
                }
            }
        }
    }
}

/// Eigenvalues only, ascending. Skips the Hermiticity check; callers pass
/// matrices that are Hermitian by construction.
pub(crate) fn hermitian_eigenvalues_unchecked(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim;
    let mut a = m.hermitian_part().data;
    jacobi_in_place(&mut a, n, None);
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let asymmetry = m.hermiticity_defect();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = m.dim;
    let mut a = m.hermitian_part().data;
    let mut v = ComplexMatrix::identity(&m.dims).data;
    jacobi_in_place(&mut a, n, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();

    let mut vecs = ComplexMatrix::zeros(&m.dims);
    for (k, &src) in order.iter().enumerate() {
        let col: Vec<C64> = (0..n).map(|r| v[r * n + src]).collect();
        // make the largest-magnitude component real and positive
        let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = col
            .iter()
            .position(|z| z.norm() >= big - 1e-12)
            .unwrap_or(0);
        let phase = col[pivot].conj() / col[pivot].norm();
        for (r, z) in col.iter().enumerate() {
            vecs.data[r * n + k] = z * phase;
        }
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors: vecs,
    })
}

/// `exp(i h)` for Hermitian `h`, through its spectrum.
pub fn unitary_from_generator(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(h)?;
    Ok(spec.map_eigenvalues(|l| C64::new(0.0, l).exp()))
}
