use entcap_core::channels::xx_rotation;
use entcap_core::qmat::unitary_from_generator;
use entcap_core::{
    mixture_channel, CanonicalParams, ComplexMatrix, PureState, RandomUnitaryChannel, C64,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn random_pure(rng: &mut ChaCha8Rng, dims: &[usize]) -> PureState {
    let d: usize = dims.iter().product();
    let amps = (0..d)
        .map(|_| C64::new(gaussian(rng), gaussian(rng)))
        .collect();
    PureState::normalized(dims, amps).unwrap()
}

/// Mixture of `rank` random pure states with random weights.
pub fn random_mixed(rng: &mut ChaCha8Rng, dims: &[usize], rank: usize) -> ComplexMatrix {
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(dims);
    for w in weights {
        let p = random_pure(rng, dims)
            .density_matrix()
            .scale_real(w / total);
        rho = &rho + &p;
    }
    rho
}

pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(&[d]);
    for i in 0..d {
        h[(i, i)] = C64::new(gaussian(rng), 0.0);
        for j in i + 1..d {
            let z = C64::new(gaussian(rng), gaussian(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    unitary_from_generator(&h.scale_real(2.0)).unwrap()
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
        .collect()
}

pub fn cnot_mix(p: f64, xi: f64, delta: f64) -> RandomUnitaryChannel {
    mixture_channel(vec![
        (p, xx_rotation(xi).into()),
        (1.0 - p, xx_rotation(xi + delta).into()),
    ])
    .unwrap()
}

/// DCNOT-class pair `(xi, xi, 0)`, `(xi + delta, xi + delta, 0)`.
pub fn dcnot_mix(p: f64, xi: f64, delta: f64) -> RandomUnitaryChannel {
    let b = xi + delta;
    mixture_channel(vec![
        (p, CanonicalParams::new(xi, xi, 0.0).unwrap().into()),
        (
            1.0 - p,
            CanonicalParams::canonicalize(b, b, 0.0).unwrap().into(),
        ),
    ])
    .unwrap()
}

/// SWAP-class pair `(xi, xi, xi)`, `(xi + delta, xi + delta, xi + delta)`.
pub fn swap_mix(p: f64, xi: f64, delta: f64) -> RandomUnitaryChannel {
    let b = xi + delta;
    mixture_channel(vec![
        (p, CanonicalParams::new(xi, xi, xi).unwrap().into()),
        (
            1.0 - p,
            CanonicalParams::canonicalize(b, b, b).unwrap().into(),
        ),
    ])
    .unwrap()
}
