//! The desk-scale consistency suite behind `bosonkit validate`: every
//! check exercises two independent routes to the same quantity and
//! reports pass/fail with a one-line detail.

use crate::ensembles::{sample_ginibre, sample_haar};
use crate::fock::{
    amplitude_fock, amplitude_fock_contour, amplitude_fock_oracle, output_distribution,
    OccupationVector,
};
use crate::matrix::UnitaryMatrix;
use crate::moments;
use crate::representations::{amplitude_quadrature, probability_quadrature, QuadraturePoint};
use rand::Rng;

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn check(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Options for [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Upper bound applied to mode counts and moment dimensions.
    pub dim_max: usize,
    /// Deliberately flip a sign inside one check; the suite must then
    /// fail. Negative control for the reporting pipeline.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dim_max: 12,
            inject_fault: false,
        }
    }
}

/// Runs the whole suite; the caller renders the results.
pub fn run_suite(config: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check_permanent_cross_algorithm(config),
        check_amplitude_paths(config),
        check_unitarity(config),
        check_hong_ou_mandel(config),
        check_flat_quadrature(config),
        check_moment_table(config),
        check_monte_carlo_moments(config),
    ]
}

fn check_permanent_cross_algorithm(config: &SuiteConfig) -> CheckResult {
    let name = "permanent cross-algorithm agreement";
    let nmax = config.dim_max.clamp(2, 9);
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % (nmax - 1));
        let a = match sample_ginibre(n, 0.5, 40_000 + seed) {
            Ok(a) => a,
            Err(e) => return CheckResult::check(name, false, e.to_string()),
        };
        let naive = a.permanent_naive().unwrap();
        let ryser = a.permanent_ryser().unwrap();
        let glynn = a.permanent_glynn().unwrap();
        let scale = naive.norm().max(1e-300);
        worst = worst
            .max((naive - ryser).norm() / scale)
            .max((naive - glynn).norm() / scale);
    }
    CheckResult::check(
        name,
        worst <= 1e-10,
        format!("max relative disagreement {worst:.3e} (tol 1e-10)"),
    )
}

fn check_amplitude_paths(config: &SuiteConfig) -> CheckResult {
    let name = "amplitude path equivalence";
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mmax = config.dim_max.clamp(2, 3);
    for modes in 2..=mmax {
        for seed in 0..3u64 {
            let u = sample_haar(modes, 50_000 + seed).unwrap();
            for n in crate::fock::enumerate_occupations(modes, 2) {
                for m in crate::fock::enumerate_occupations(modes, 2) {
                    let p = amplitude_fock(&u, &n, &m).unwrap().value;
                    let c = amplitude_fock_contour(&u, &n, &m).unwrap().value;
                    let o = amplitude_fock_oracle(&u, &n, &m).unwrap().value;
                    worst = worst.max((p - c).norm()).max((p - o).norm());
                    cases += 1;
                }
            }
        }
    }
    CheckResult::check(
        name,
        worst <= 1e-8,
        format!("{cases} cases, max absolute spread {worst:.3e} (tol 1e-8)"),
    )
}

fn check_unitarity(config: &SuiteConfig) -> CheckResult {
    let name = "many-body unitarity";
    let modes = config.dim_max.clamp(2, 3);
    let mut worst = 0.0f64;
    for seed in 0..3u64 {
        let u = sample_haar(modes, 60_000 + seed).unwrap();
        let n = OccupationVector::new(
            (0..modes)
                .map(|i| if i == 0 { 2 } else { 1 })
                .collect::<Vec<u32>>(),
        );
        let total: f64 = output_distribution(&u, &n)
            .unwrap()
            .iter()
            .map(|(_, p)| p)
            .sum();
        worst = worst.max((total - 1.0).abs());
    }
    CheckResult::check(
        name,
        worst <= 1e-9,
        format!("max |sum - 1| = {worst:.3e} (tol 1e-9)"),
    )
}

fn check_hong_ou_mandel(config: &SuiteConfig) -> CheckResult {
    let name = "Hong-Ou-Mandel suppression";
    let u = UnitaryMatrix::beamsplitter();
    let n = OccupationVector::new(vec![1, 1]);
    let dist = output_distribution(&u, &n).unwrap();
    let mut expected = [0.5, 0.0, 0.5];
    if config.inject_fault {
        // negative control: corrupt the expectation so the suite fails
        expected[1] = 0.5;
    }
    let worst = dist
        .iter()
        .zip(expected)
        .map(|((_, p), e)| (p - e).abs())
        .fold(0.0f64, f64::max);
    CheckResult::check(
        name,
        worst <= 1e-12,
        format!("max deviation from (1/2, 0, 1/2): {worst:.3e} (tol 1e-12)"),
    )
}

fn check_flat_quadrature(config: &SuiteConfig) -> CheckResult {
    let name = "flat quadrature probability";
    let modes = config.dim_max.clamp(2, 3);
    let mut rng = crate::ensembles::rng_from_seed(3);
    for seed in 0..40u64 {
        let u = sample_haar(modes, 70_000 + seed).unwrap();
        let flat = match probability_quadrature(&u) {
            Ok(p) => p,
            Err(_) => continue, // ill-conditioned draw; try the next seed
        };
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let q = QuadraturePoint::new(
                (0..modes)
                    .map(|_| 6.0 * (rng.random::<f64>() - 0.5))
                    .collect(),
            )
            .unwrap();
            let p = QuadraturePoint::new(
                (0..modes)
                    .map(|_| 6.0 * (rng.random::<f64>() - 0.5))
                    .collect(),
            )
            .unwrap();
            let v = amplitude_quadrature(&u, &q, &p).unwrap().norm_sqr();
            worst = worst.max(((v - flat) / flat).abs());
        }
        return CheckResult::check(
            name,
            worst <= 1e-10,
            format!(
                "seed {}: max relative deviation {worst:.3e} (tol 1e-10)",
                70_000 + seed
            ),
        );
    }
    CheckResult::check(name, false, "no well-conditioned draw found".into())
}

fn check_moment_table(config: &SuiteConfig) -> CheckResult {
    let name = "exact scaled third moments";
    let max_n = config.dim_max.min(23) as u32;
    for (n, expect) in moments::SCALED_THIRD_MOMENTS {
        if n > max_n {
            break;
        }
        let got = moments::moment6_exact(n).unwrap().scaled;
        let want = moments::parse_rational(expect).unwrap();
        if got != want {
            return CheckResult::check(name, false, format!("N={n}: {got} != {want}"));
        }
    }
    CheckResult::pass(name, format!("exact match for N = 1..={max_n}"))
}

fn check_monte_carlo_moments(config: &SuiteConfig) -> CheckResult {
    let name = "Monte Carlo moment concordance";
    // exact coefficients at sigma^2 = 0.5 where (2 sigma^2)^{nN} = 1
    let mut cases: Vec<(u32, u32, usize, f64)> = vec![(1, 3, 20_000, 6.0), (2, 2, 20_000, 12.0)];
    if config.dim_max >= 2 {
        cases.push((3, 2, 50_000, 144.0));
    }
    let mut detail = String::new();
    for (order, dim, draws, exact) in cases {
        let (mean, stderr) = match moments::moment_monte_carlo(order, dim, 0.5, draws, 9001) {
            Ok(v) => v,
            Err(e) => return CheckResult::check(name, false, e.to_string()),
        };
        let dev = (mean - exact).abs() / stderr.max(1e-300);
        detail.push_str(&format!("n={order},N={dim}: {dev:.2} sigma; "));
        if dev > 3.0 {
            return CheckResult::check(name, false, detail);
        }
    }
    CheckResult::pass(name, detail)
}
