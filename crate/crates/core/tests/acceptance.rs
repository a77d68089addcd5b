//! Acceptance suite. Prints one line per criterion and exits non-zero if a
//! hard criterion fails. Advisory checks are reported but never fail the run.

mod common;

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use common::{cnot_mix, dcnot_mix, linspace, random_mixed, random_pure, random_unitary, swap_mix};
use entcap_core::channels::{appendix_state, xx_rotation, APPENDIX_PARAMS, TWO_QUBITS};
use entcap_core::entanglement::{
    entanglement_of_formation, hashing_lower, negativity_upper, pure_entanglement,
    von_neumann_entropy,
};
use entcap_core::qmat::{kron, pauli_x};
use entcap_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    label: String,
    ok: bool,
}

fn check(label: impl Into<String>, ok: bool) -> Check {
    Check {
        label: label.into(),
        ok,
    }
}

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    hard: Vec<Check>,
    advisory: Vec<Check>,
    info: Vec<String>,
}

impl Criterion {
    fn new(id: u8, title: &'static str, limit_secs: u64) -> Self {
        Self {
            id,
            title,
            limit: Duration::from_secs(limit_secs),
            hard: Vec::new(),
            advisory: Vec::new(),
            info: Vec::new(),
        }
    }

    /// Prints the report and returns whether every hard check passed.
    fn report(mut self, elapsed: Duration) -> bool {
        let limit = self.limit;
        self.hard.push(check(
            format!(
                "runtime {:.1} s within {} s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            ),
            elapsed <= limit,
        ));
        let ok = self.hard.iter().all(|c| c.ok);
        println!(
            "criterion {}: {} [{}] ({:.1} s)",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.title,
            elapsed.as_secs_f64()
        );
        for c in &self.hard {
            println!("    {} {}", if c.ok { "ok  " } else { "FAIL" }, c.label);
        }
        for c in &self.advisory {
            println!(
                "    {} (advisory) {}",
                if c.ok { "ok  " } else { "FAIL" },
                c.label
            );
        }
        for line in &self.info {
            println!("    info {line}");
        }
        ok
    }
}

fn m1(ch: &RandomUnitaryChannel, dir: Direction) -> f64 {
    method1_capacity(ch, dir).unwrap().value
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "unitary anchors", 1);
    let u = xx_rotation(FRAC_PI_4);
    let up = unitary_capacity(&u, Direction::Up).unwrap();
    let down = unitary_capacity(&u, Direction::Down).unwrap();
    let alpha = up.argument.alpha().unwrap();
    c.hard.push(check(
        format!("E_up(U(pi/4)) = {:.9}", up.value),
        (up.value - 1.0).abs() < 1e-6,
    ));
    c.hard.push(check(
        format!("E_down(U(pi/4)) = {:.9}", down.value),
        (down.value - 1.0).abs() < 1e-6,
    ));
    c.hard.push(check(
        format!("optimal up alpha = {alpha:.3e}"),
        alpha.abs() < 1e-6,
    ));
    let id = ComplexMatrix::identity(&TWO_QUBITS);
    for dir in [Direction::Up, Direction::Down] {
        let v = unitary_capacity(&id, dir).unwrap().value;
        c.hard.push(check(
            format!("identity {} = {v:.3e}", dir.name()),
            v.abs() < 1e-6,
        ));
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "up equals down for CNOT-class unitaries", 60);
    for k in 1..=4 {
        let xi = k as f64 * PI / 16.0;
        let ch = RandomUnitaryChannel::unitary(xx_rotation(xi)).unwrap();
        let (up, down) = (m1(&ch, Direction::Up), m1(&ch, Direction::Down));
        c.hard.push(check(
            format!("xi = {k}pi/16: up {up:.9}, down {down:.9}"),
            (up - down).abs() < 1e-6,
        ));
    }
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "discrete CNOT mixtures, p = 0.5", 120);
    let mut global_max = f64::NEG_INFINITY;
    let mut top = f64::NEG_INFINITY;
    for k in 0..=4 {
        let xi = k as f64 * PI / 16.0;
        // second branch angle xi + delta stays within [0, pi/4]
        let grid = linspace(-xi, FRAC_PI_4 - xi, 60);
        let up: Vec<f64> = grid
            .iter()
            .map(|&d| m1(&cnot_mix(0.5, xi, d), Direction::Up))
            .collect();
        let down: Vec<f64> = grid
            .iter()
            .map(|&d| m1(&cnot_mix(0.5, xi, d), Direction::Down))
            .collect();
        let at0 = cnot_mix(0.5, xi, 0.0);
        let (up0, down0) = (m1(&at0, Direction::Up), m1(&at0, Direction::Down));
        global_max = up
            .iter()
            .chain(&down)
            .chain([up0, down0].iter())
            .fold(global_max, |a, &b| a.max(b));
        if k == 4 {
            top = up0;
        }

        let mut a_ok = (up0 - down0).abs() <= 1e-6;
        for ((&d, &u), &w) in grid.iter().zip(&up).zip(&down) {
            a_ok &= w >= u - 1e-9;
            if d.abs() >= 0.05 {
                a_ok &= w - u > 1e-4;
            }
        }
        c.hard.push(check(
            format!("(a) xi = {k}pi/16: E_down >= E_up, equal at 0 (gap {:.1e}), strict for |delta| >= 0.05", (up0 - down0).abs()),
            a_ok,
        ));

        if k < 4 {
            let right = *up.last().unwrap();
            let peak = grid
                .iter()
                .zip(&up)
                .filter(|(&d, &u)| d > 0.0 && u > up0 && u > right)
                .map(|(_, &u)| u)
                .fold(f64::NEG_INFINITY, f64::max);
            c.hard.push(check(
                format!("(b) xi = {k}pi/16: interior E_up max {peak:.6} above E_up(0) = {up0:.6} and right end {right:.6}"),
                peak.is_finite(),
            ));
        }

        let worst = down
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::NEG_INFINITY, f64::max);
        c.hard.push(check(
            format!("(c) xi = {k}pi/16: E_down nondecreasing (largest drop {worst:.2e})"),
            worst <= 1e-6,
        ));

        // the literal range delta in [-xi, pi/4] pushes xi + delta past pi/4
        if k > 0 {
            let wide = linspace(-xi, FRAC_PI_4, 60);
            let wd: Vec<f64> = wide
                .iter()
                .map(|&d| m1(&cnot_mix(0.5, xi, d), Direction::Down))
                .collect();
            let drop = wd
                .windows(2)
                .map(|w| w[0] - w[1])
                .fold(f64::NEG_INFINITY, f64::max);
            c.info.push(format!(
                "xi = {k}pi/16 on delta in [-xi, pi/4]: largest E_down drop {drop:.2e}"
            ));
        }
    }
    c.hard.push(check(
        format!("(d) E_up(xi = pi/4, delta = 0) = {top:.9} is the curve maximum ({global_max:.9})"),
        (top - 1.0).abs() < 1e-6 && global_max <= top + 1e-6,
    ));
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "Gaussian two-branch reduction vs quadrature", 10);
    let xx = kron(&pauli_x(), &pauli_x());
    let id = ComplexMatrix::identity(&TWO_QUBITS);
    for mean in [PI / 8.0, FRAC_PI_4] {
        for sigma in [0.18, 0.35, 0.86] {
            let ch = gaussian_channel(&GaussianNoiseSpec::new(mean, sigma).unwrap());
            let nodes = linspace(mean - 6.0 * sigma, mean + 6.0 * sigma, 201);
            let w: Vec<f64> = nodes
                .iter()
                .map(|x| (-(x - mean).powi(2) / (2.0 * sigma * sigma)).exp())
                .collect();
            let total: f64 = w.iter().sum();
            let us: Vec<ComplexMatrix> = nodes
                .iter()
                .map(|x| &id.scale_real(x.cos()) + &xx.scale(C64::new(0.0, x.sin())))
                .collect();
            let mut worst: f64 = 0.0;
            for r in 0..4 {
                for s in 0..4 {
                    let mut e = ComplexMatrix::zeros(&TWO_QUBITS);
                    e[(r, s)] = C64::new(1.0, 0.0);
                    let mut quad = ComplexMatrix::zeros(&TWO_QUBITS);
                    for (u, wk) in us.iter().zip(&w) {
                        quad = &quad + &(&(u * &e) * &u.adjoint()).scale_real(wk / total);
                    }
                    let mut exact = ComplexMatrix::zeros(&TWO_QUBITS);
                    for b in ch.branches() {
                        exact = &exact
                            + &(&(&b.unitary * &e) * &b.unitary.adjoint()).scale_real(b.weight);
                    }
                    worst = worst.max(exact.max_abs_diff(&quad));
                }
            }
            c.hard.push(check(
                format!("mean {mean:.4}, sigma {sigma}: max entry deviation {worst:.2e}"),
                worst < 1e-8,
            ));
        }
    }
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "Gaussian-noise capacities", 300);
    let sigmas = [0.0, 0.01, 0.18, 0.35, 0.52, 0.69, 0.86];
    let means = linspace(0.0, FRAC_PI_4, 41);
    let table: Vec<Vec<(f64, f64)>> = sigmas
        .iter()
        .map(|&s| {
            means
                .iter()
                .map(|&m| {
                    let ch = gaussian_channel(&GaussianNoiseSpec::new(m, s).unwrap());
                    (m1(&ch, Direction::Up), m1(&ch, Direction::Down))
                })
                .collect()
        })
        .collect();

    let dev = means
        .iter()
        .zip(&table[1])
        .map(|(&m, &(up, _))| {
            let unitary = RandomUnitaryChannel::unitary(xx_rotation(m)).unwrap();
            (up - m1(&unitary, Direction::Up)).abs()
        })
        .fold(0.0, f64::max);
    c.hard.push(check(
        format!("(a) sigma = 0.01: max |E_up - E_up(U)| = {dev:.2e} <= 0.01"),
        dev <= 0.01,
    ));

    let (mut up_rise, mut down_drop) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for pair in table.windows(2) {
        for (lo, hi) in pair[0].iter().zip(&pair[1]) {
            up_rise = up_rise.max(hi.0 - lo.0);
            down_drop = down_drop.max(lo.1 - hi.1);
        }
    }
    c.hard.push(check(
        format!("(b) E_up nonincreasing in sigma (largest rise {up_rise:.2e}), E_down nondecreasing (largest drop {down_drop:.2e})"),
        up_rise <= 1e-6 && down_drop <= 1e-6,
    ));

    let last = table.last().unwrap();
    let at_quarter = last.last().unwrap().0;
    let best = last.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    c.hard.push(check(
        format!("(c) sigma = 0.86, mean = pi/4: E_up = {at_quarter:.6} > 0.1"),
        at_quarter > 0.1,
    ));
    c.info.push(format!(
        "sigma = 0.86: largest E_up over the mean grid {best:.6}"
    ));
    let noisy = gaussian_channel(&GaussianNoiseSpec::new(FRAC_PI_4, 0.86).unwrap());
    let m2 = method2_capacity(&noisy, Direction::Up, &OptimizerConfig::default()).unwrap();
    c.info.push(format!(
        "sigma = 0.86, mean = pi/4: ancilla ascent E_up {:.6}",
        m2.value
    ));
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "Method II agrees with Method I on CNOT mixtures", 600);
    let cfg = OptimizerConfig::default();
    for delta in [-0.2, 0.0, 0.3] {
        let ch = cnot_mix(0.5, PI / 8.0, delta);
        for dir in [Direction::Up, Direction::Down] {
            let a = m1(&ch, dir);
            let b = method2_capacity(&ch, dir, &cfg).unwrap().value;
            c.hard.push(check(
                format!(
                    "delta = {delta}, {}: method1 {a:.6}, method2 {b:.6}",
                    dir.name()
                ),
                (a - b).abs() < 5e-3,
            ));
        }
    }
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "DCNOT and SWAP mixtures, p = 0.5", 1800);
    let cfg = OptimizerConfig::default();
    let grid = linspace(0.0, PI / 8.0, 10);
    let run = |family: fn(f64, f64, f64) -> RandomUnitaryChannel| -> Vec<(f64, f64)> {
        grid.iter()
            .map(|&d| {
                let ch = family(0.5, PI / 8.0, d);
                (
                    method2_capacity(&ch, Direction::Up, &cfg).unwrap().value,
                    method2_capacity(&ch, Direction::Down, &cfg).unwrap().value,
                )
            })
            .collect()
    };
    let dcnot = run(dcnot_mix);
    let swap = run(swap_mix);
    for (d, (dc, sw)) in grid.iter().zip(dcnot.iter().zip(&swap)) {
        c.info.push(format!(
            "delta {d:.4}: DCNOT up {:.6} down {:.6} | SWAP up {:.6} down {:.6}",
            dc.0, dc.1, sw.0, sw.1
        ));
    }

    let worst = dcnot
        .iter()
        .map(|(u, d)| u - d)
        .fold(f64::NEG_INFINITY, f64::max);
    c.hard.push(check(
        format!("(a) DCNOT E_down >= E_up everywhere (largest E_up - E_down {worst:.2e})"),
        worst <= 1e-6,
    ));

    let downs: Vec<f64> = swap.iter().map(|v| v.1).collect();
    let (k, peak) =
        downs.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let interior = k > 0
        && k < downs.len() - 1
        && peak > downs[0] + 1e-6
        && peak > downs[downs.len() - 1] + 1e-6;
    c.hard.push(check(
        format!(
            "(b) SWAP E_down peaks at delta = {:.4} ({peak:.6}) inside the grid",
            grid[k]
        ),
        interior,
    ));

    for ((d, dc), sw) in grid.iter().zip(&dcnot).zip(&swap) {
        if *d > 0.357 {
            c.advisory.push(check(
                format!(
                    "(c) delta = {d:.4}: SWAP E_up {:.6} below DCNOT E_up {:.6} by more than 1e-2",
                    sw.0, dc.0
                ),
                sw.0 + 1e-2 < dc.0,
            ));
        }
    }
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "measure oracle suites", 30);
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let eof_dev = (0..1000)
        .map(|_| {
            let psi = random_pure(&mut rng, &TWO_QUBITS);
            let e = entanglement_of_formation(&psi.density_matrix()).unwrap();
            (e - pure_entanglement(&psi, &[0]).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    c.hard.push(check(
        format!("E_F vs pure entropy on 1000 states: max deviation {eof_dev:.2e}"),
        eof_dev < 1e-9,
    ));

    let mut violations = 0;
    for _ in 0..1000 {
        let rank = rng.gen_range(1..=4);
        let rho = random_mixed(&mut rng, &TWO_QUBITS, rank);
        if hashing_lower(&rho, &[0]).unwrap() > negativity_upper(&rho, &[0]).unwrap() + 1e-12 {
            violations += 1;
        }
    }
    c.hard.push(check(
        format!("hashing <= negativity on 1000 mixed states: {violations} violations"),
        violations == 0,
    ));

    let states: Vec<ComplexMatrix> = (0..100)
        .map(|k| random_mixed(&mut rng, &TWO_QUBITS, 1 + k % 4))
        .collect();
    let measures = |rho: &ComplexMatrix| -> [f64; 4] {
        [
            von_neumann_entropy(rho).unwrap(),
            entanglement_of_formation(rho).unwrap(),
            hashing_lower(rho, &[0]).unwrap(),
            negativity_upper(rho, &[0]).unwrap(),
        ]
    };
    let base: Vec<[f64; 4]> = states.iter().map(measures).collect();
    let mut inv_dev: f64 = 0.0;
    for _ in 0..100 {
        let local = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
        for (rho, b) in states.iter().zip(&base) {
            let moved = &(&local * rho) * &local.adjoint();
            for (x, y) in measures(&moved).iter().zip(b) {
                inv_dev = inv_dev.max((x - y).abs());
            }
        }
    }
    c.hard.push(check(
        format!("local-unitary invariance, 100 pairs x 100 states: max deviation {inv_dev:.2e}"),
        inv_dev < 1e-10,
    ));

    let norm_dev = (0..1000)
        .map(|_| {
            let x: Vec<f64> = (0..APPENDIX_PARAMS)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            let n: f64 = appendix_state(&x)
                .unwrap()
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .sum();
            (n - 1.0).abs()
        })
        .fold(0.0, f64::max);
    c.hard.push(check(
        format!("appendix_state norm on 1000 angle vectors: max deviation {norm_dev:.2e}"),
        norm_dev < 1e-12,
    ));
    c
}

fn main() {
    let only: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let suite: [(u8, fn() -> Criterion); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = Vec::new();
    for (id, run) in suite {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let c = run();
        if !c.report(t.elapsed()) {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
