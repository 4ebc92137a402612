//! Large-occupation asymptotics.
//!
//! - the cosine (WKB) asymptotic of the Hermite polynomials, with the
//!   quarter-pi phase constant that makes it match the exact recurrence
//!   (without it the formula is off by a factor cos(pi/4) at q = 0);
//! - the generating function `f(n, q) = (q/4) sqrt(4n - q^2) -
//!   n arccos(q / 2 sqrt n)` of the number-to-quadrature canonical
//!   transformation, and the single-mode stationary-phase kernel built
//!   from it;
//! - the shooting problem: input phases theta such that `y = u x` with
//!   `x_i = sqrt(n_i) e^{-i theta_i}` lands on prescribed output moduli
//!   `|y_l|^2 = m_l`, solved by multi-start damped Newton;
//! - the single-mode composition of the three elementary canonical
//!   transformations (number -> quadrature -> quadrature -> number),
//!   evaluated as an oscillatory integral on the classically allowed box.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::OccupationVector;
use crate::hermite;
use crate::matrix::UnitaryMatrix;

const PI: f64 = std::f64::consts::PI;

/// Residual tolerance for a converged shooting solution.
pub const SHOOTING_TOLERANCE: f64 = 1e-10;
/// Fraction of the turning-point radius admitted by [`hermite_asymptotic`].
pub const HERMITE_GUARD: f64 = 0.95;
/// Fraction of `2 sqrt n` admitted by [`kernel_semiclassical_qn`].
pub const KERNEL_GUARD: f64 = 0.95;

/// Grid size per axis for [`three_step_amplitude_m1`].
const THREE_STEP_GRID: usize = 4096;
/// Cosine-taper width, as a fraction of the box half-width.
const THREE_STEP_TAPER: f64 = 0.01;

/// Asymptotic cosine form of the Hermite polynomial `H_n(q)` in the
/// classically allowed region:
///
/// ```text
/// H_n(q) ~ sqrt(2^{n+1} n^n e^{-n+q^2} / sqrt(1 - q^2/(2n+1)))
///          * cos[(n + 1/2) arcsin(q/sqrt(2n+1))
///                + (q/2) sqrt(2n+1-q^2) - (pi/2)(n + 1/2) + pi/4]
/// ```
///
/// Raw H values overflow f64 near n ~ 300; see
/// [`hermite_function_asymptotic`] for the normalized variant that does
/// not.
pub fn hermite_asymptotic(n: u32, q: f64) -> Result<f64> {
    let tn = 2.0 * n as f64 + 1.0;
    if n < 10 {
        return Err(Error::OutsideValidityRegion(format!(
            "hermite_asymptotic needs n >= 10, got {n}"
        )));
    }
    let bound = HERMITE_GUARD * tn.sqrt();
    if q.abs() > bound {
        return Err(Error::OutsideValidityRegion(format!(
            "|q| = {} exceeds {HERMITE_GUARD} sqrt(2n+1) = {bound}",
            q.abs()
        )));
    }
    let (log_amp, phase) = hermite_asymptotic_parts(n, q);
    Ok(log_amp.exp() * phase.cos())
}

/// `(ln amplitude, phase)` of the Hermite asymptotic.
fn hermite_asymptotic_parts(n: u32, q: f64) -> (f64, f64) {
    let nf = n as f64;
    let tn = 2.0 * nf + 1.0;
    let log_amp =
        0.5 * ((nf + 1.0) * 2f64.ln() + nf * nf.ln() - nf + q * q) - 0.25 * (1.0 - q * q / tn).ln();
    let phase = (nf + 0.5) * (q / tn.sqrt()).asin() + 0.5 * q * (tn - q * q).sqrt()
        - 0.5 * PI * (nf + 0.5)
        + 0.25 * PI;
    (log_amp, phase)
}

/// Asymptotic form of the orthonormal Hermite *function* `h_n(x)`;
/// stays O(n^{-1/4}) and is usable at any n where the raw polynomial
/// would overflow. Same validity region as [`hermite_asymptotic`].
pub fn hermite_function_asymptotic(n: u32, x: f64) -> Result<f64> {
    let tn = 2.0 * n as f64 + 1.0;
    let bound = HERMITE_GUARD * tn.sqrt();
    if n < 10 || x.abs() > bound {
        return Err(Error::OutsideValidityRegion(format!(
            "hermite_function_asymptotic: n = {n}, |x| = {} (bound {bound})",
            x.abs()
        )));
    }
    Ok(hermite_function_asymptotic_unchecked(n, x))
}

fn hermite_function_asymptotic_unchecked(n: u32, x: f64) -> f64 {
    let (log_amp, phase) = hermite_asymptotic_parts(n, x);
    (log_amp - hermite_norm_log(n) - 0.5 * x * x).exp() * phase.cos()
}

fn hermite_norm_log(n: u32) -> f64 {
    // ln of the h_n normalization sqrt(2^n n! sqrt(pi))
    0.5 * (n as f64 * 2f64.ln() + hermite::ln_factorial(n)) + 0.25 * PI.ln()
}

/// Envelope amplitude of the orthonormal Hermite function's asymptotic
/// (the prefactor of the cosine); the natural scale against which errors
/// of the oscillatory approximation are measured near nodes.
pub fn hermite_function_envelope(n: u32, x: f64) -> f64 {
    let (log_amp, _) = hermite_asymptotic_parts(n, x);
    (log_amp - hermite_norm_log(n) - 0.5 * x * x).exp()
}

/// Generating function of the single-mode number-to-quadrature
/// transformation, `f(n, q) = (q/4) sqrt(4n - q^2) - n arccos(q / 2
/// sqrt n)`; defined on the classically allowed strip `|q| <= 2 sqrt n`.
pub fn generating_f(n: f64, q: f64) -> Result<f64> {
    classical_bound(n, q)?;
    let s = (4.0 * n - q * q).max(0.0).sqrt();
    Ok(0.25 * q * s - n * (q / (2.0 * n.sqrt())).clamp(-1.0, 1.0).acos())
}

fn classical_bound(n: f64, q: f64) -> Result<f64> {
    if n.is_nan() || n <= 0.0 {
        return Err(Error::OutsideValidityRegion(format!(
            "occupation must be positive, got {n}"
        )));
    }
    let bound = 2.0 * n.sqrt();
    if q.abs() > bound {
        return Err(Error::ClassicallyForbidden { q, bound });
    }
    Ok(bound)
}

/// `theta = df/dn = -arccos(q / 2 sqrt n)`.
pub fn generating_f_dn(n: f64, q: f64) -> Result<f64> {
    classical_bound(n, q)?;
    Ok(-(q / (2.0 * n.sqrt())).clamp(-1.0, 1.0).acos())
}

/// `df/dq = sqrt(4n - q^2) / 2`.
pub fn generating_f_dq(n: f64, q: f64) -> Result<f64> {
    classical_bound(n, q)?;
    Ok(0.5 * (4.0 * n - q * q).max(0.0).sqrt())
}

/// Mixed derivative `d2f/dn dq = 1 / sqrt(4n - q^2)`.
pub fn generating_f_dndq(n: f64, q: f64) -> Result<f64> {
    let bound = classical_bound(n, q)?;
    let s = 4.0 * n - q * q;
    if s <= 0.0 {
        return Err(Error::ClassicallyForbidden { q, bound });
    }
    Ok(1.0 / s.sqrt())
}

/// Single-mode stationary-phase kernel
/// `A^qn(n, q) = sqrt((1/2 pi i) d2f/dn dq) e^{i f(n,q)}`
/// (principal square root). One branch of the WKB approximation to
/// `<q|n>`; its squared modulus is half the locally averaged
/// `|<q|n>|^2`, the other half belonging to the conjugate branch.
pub fn kernel_semiclassical_qn(n: f64, q: f64) -> Result<Complex64> {
    let bound = 2.0 * n.sqrt();
    if q.abs() > KERNEL_GUARD * bound {
        return Err(Error::ClassicallyForbidden {
            q,
            bound: KERNEL_GUARD * bound,
        });
    }
    let mixed = generating_f_dndq(n, q)?;
    let f = generating_f(n, q)?;
    // sqrt(mixed / 2 pi i) = sqrt(mixed / 2 pi) e^{-i pi/4}
    let amp = (mixed / (2.0 * PI)).sqrt();
    Ok(Complex64::from_polar(amp, f - 0.25 * PI))
}

/// Boundary data of the saddle-point problem: find input phases such
/// that `u` maps `sqrt(n_i) e^{-i theta_i}` onto outputs with moduli
/// `sqrt(m_l)`.
#[derive(Debug, Clone)]
pub struct ShootingProblem {
    u: UnitaryMatrix,
    input: OccupationVector,
    output: OccupationVector,
}

impl ShootingProblem {
    pub fn new(
        u: UnitaryMatrix,
        input: OccupationVector,
        output: OccupationVector,
    ) -> Result<Self> {
        for occ in [&input, &output] {
            if occ.modes() != u.dimension() {
                return Err(Error::DimensionMismatch {
                    what: "occupation vector",
                    expected: u.dimension(),
                    actual: occ.modes(),
                });
            }
        }
        if input.total() != output.total() {
            return Err(Error::ParticleNumberMismatch {
                input: input.total(),
                output: output.total(),
            });
        }
        if input.total() == 0 {
            return Err(Error::DimensionMismatch {
                what: "total particle number",
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self { u, input, output })
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.u
    }

    pub fn input(&self) -> &OccupationVector {
        &self.input
    }

    pub fn output(&self) -> &OccupationVector {
        &self.output
    }
}

/// A candidate solution: input phases theta, the output phases chi read
/// off from `y = u x`, and the residual `max_l ||y_l|^2 - m_l|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub theta: Vec<f64>,
    pub chi: Vec<f64>,
    pub residual: f64,
}

fn shooting_state(
    problem: &ShootingProblem,
    theta: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>, Vec<f64>) {
    let modes = problem.u.dimension();
    let x: Vec<Complex64> = (0..modes)
        .map(|i| Complex64::from_polar((problem.input.get(i) as f64).sqrt(), -theta[i]))
        .collect();
    let y = problem.u.apply(&x).expect("dimensions checked");
    let residuals: Vec<f64> = (0..modes)
        .map(|l| y[l].norm_sqr() - problem.output.get(l) as f64)
        .collect();
    (x, y, residuals)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// Multi-start damped Newton on the phase-matching residual.
///
/// Starts from theta = 0 and then `8 M` random phase vectors from the
/// seeded generator; each start runs Newton with backtracking on the
/// squared residual norm. The first start to reach residual 1e-10 wins
/// (start order is deterministic); if none converges, the best residual
/// found is reported via `NoSolutionFound`, a legitimate outcome since
/// the boundary problem can have an empty solution set.
pub fn solve_shooting(problem: &ShootingProblem, seed: u64) -> Result<ShootingSolution> {
    let modes = problem.u.dimension();
    // phases of empty input modes are irrelevant; the first occupied mode
    // is pinned to zero to fix the global phase
    let occupied: Vec<usize> = (0..modes).filter(|&i| problem.input.get(i) > 0).collect();
    let free: Vec<usize> = occupied.iter().skip(1).copied().collect();

    let mut rng = crate::ensembles::rng_from_seed(seed);
    let n_starts = 1 + 8 * modes;
    let mut best: Option<ShootingSolution> = None;

    for start in 0..n_starts {
        let mut theta = vec![0.0; modes];
        if start > 0 {
            for &i in &free {
                theta[i] = rng.random::<f64>() * 2.0 * PI;
            }
        }
        let solution = newton_from(problem, &free, theta);
        let better = match &best {
            None => true,
            Some(b) => solution.residual < b.residual,
        };
        if better {
            best = Some(solution);
        }
        if best.as_ref().map(|b| b.residual <= SHOOTING_TOLERANCE) == Some(true) {
            return Ok(best.unwrap());
        }
    }

    let best = best.expect("at least one start ran");
    Err(Error::NoSolutionFound {
        best_residual: best.residual,
        tolerance: SHOOTING_TOLERANCE,
    })
}

fn newton_from(problem: &ShootingProblem, free: &[usize], mut theta: Vec<f64>) -> ShootingSolution {
    let modes = problem.u.dimension();

    if !free.is_empty() {
        for _ in 0..80 {
            let (x, y, residuals) = shooting_state(problem, &theta);
            if max_abs(&residuals) <= SHOOTING_TOLERANCE {
                break;
            }
            // J[l][k] = d|y_l|^2 / d theta_{free_k} = 2 Im(conj(y_l) u_{l,i} x_i)
            let jac = DMatrix::from_fn(modes, free.len(), |l, k| {
                let i = free[k];
                2.0 * (y[l].conj() * problem.u.get(l, i) * x[i]).im
            });
            let r = DVector::from_iterator(modes, residuals.iter().copied());
            let svd = jac.svd(true, true);
            let step = match svd.solve(&r, 1e-12) {
                Ok(s) => -s,
                Err(_) => break,
            };
            // backtracking on the sum of squares
            let ssq0: f64 = residuals.iter().map(|r| r * r).sum();
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-6 {
                let mut trial = theta.clone();
                for (k, &i) in free.iter().enumerate() {
                    trial[i] += lambda * step[k];
                }
                let (_, _, rt) = shooting_state(problem, &trial);
                let ssq: f64 = rt.iter().map(|r| r * r).sum();
                if ssq < ssq0 * (1.0 - 1e-4 * lambda) {
                    theta = trial;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
    }

    let (_, y, residuals) = shooting_state(problem, &theta);
    let chi: Vec<f64> = (0..modes)
        .map(|l| {
            if problem.output.get(l) > 0 {
                y[l].arg()
            } else {
                0.0
            }
        })
        .collect();
    ShootingSolution {
        theta,
        chi,
        residual: max_abs(&residuals),
    }
}

/// Residual of the saddle condition in the form
/// `sum_{l,l'} conj(u_{l,i}) u_{l',i} sqrt(m_l m_l') e^{i(chi_l - chi_l')} = n_i`,
/// i.e. `|(u^dag y)_i|^2 = n_i` with `y_l = sqrt(m_l) e^{i chi_l}`.
/// Returns the largest deviation over i.
pub fn saddle_condition_residual(
    u: &UnitaryMatrix,
    input: &OccupationVector,
    output: &OccupationVector,
    chi: &[f64],
) -> Result<f64> {
    let modes = u.dimension();
    if chi.len() != modes {
        return Err(Error::DimensionMismatch {
            what: "chi",
            expected: modes,
            actual: chi.len(),
        });
    }
    let y: Vec<Complex64> = (0..modes)
        .map(|l| Complex64::from_polar((output.get(l) as f64).sqrt(), chi[l]))
        .collect();
    let mut worst = 0.0f64;
    for i in 0..modes {
        let z: Complex64 = (0..modes).map(|l| u.get(l, i).conj() * y[l]).sum();
        worst = worst.max((z.norm_sqr() - input.get(i) as f64).abs());
    }
    Ok(worst)
}

/// Single-mode amplitude `<m'|n>` under `u = e^{i alpha}` assembled from
/// the three-step chain: stationary-phase number-to-quadrature kernels
/// on both ends and the exact Gaussian quadrature-to-quadrature
/// amplitude in the middle, integrated over the classically allowed box
/// `|q| <= 2 sqrt n`, `|Q| <= 2 sqrt m` on a 4096^2 trapezoid grid with
/// thin cosine tapers at the box edges.
///
/// Accuracy targets are deliberately loose (stationary-phase regime):
/// `|A|` lands within 15% of `delta_{nm}` and the phase for n = m tracks
/// `n alpha` to a few hundredths of a radian.
pub fn three_step_amplitude_m1(alpha: f64, n: u32, m: u32) -> Result<Complex64> {
    for v in [n, m] {
        if !(20..=200).contains(&v) {
            return Err(Error::OutsideValidityRegion(format!(
                "occupation {v} outside the supported range 20..=200"
            )));
        }
    }
    let sa = alpha.sin();
    if sa.abs() < 0.1 {
        return Err(Error::OutsideValidityRegion(format!(
            "|sin alpha| = {} below 0.1; the quadrature map degenerates",
            sa.abs()
        )));
    }
    let ca = alpha.cos();
    let cot = ca / sa;

    // sqrt(det(-4 pi i u sin alpha)) for the 1x1 case, principal branch
    let sqrt_det = (Complex64::new(0.0, -4.0 * PI * sa) * Complex64::from_polar(1.0, alpha)).sqrt();

    let grid = THREE_STEP_GRID;
    let (qs, aq) = tapered_kernel_axis(n, cot, grid);
    let (ps, bq) = tapered_kernel_axis(m, cot, grid);
    let dq = qs[1] - qs[0];
    let dp = ps[1] - ps[0];

    let coupling = 0.5 / sa;
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = zero;
    for (i, &ai) in aq.iter().enumerate() {
        if ai == zero {
            continue;
        }
        let qi = qs[i];
        let mut inner = zero;
        for (j, &bj) in bq.iter().enumerate() {
            inner += bj * Complex64::from_polar(1.0, coupling * qi * ps[j]);
        }
        acc += ai * inner;
    }
    Ok(acc * dq * dp / sqrt_det)
}

/// Grid of `<q|n>` (asymptotic form) times the diagonal part of the
/// quadrature Gaussian, with the taper applied.
fn tapered_kernel_axis(n: u32, cot: f64, grid: usize) -> (Vec<f64>, Vec<Complex64>) {
    let half = 2.0 * (n as f64).sqrt();
    let tn = 2.0 * n as f64 + 1.0;
    let mut qs = Vec::with_capacity(grid);
    let mut vals = Vec::with_capacity(grid);
    for k in 0..grid {
        let q = -half + 2.0 * half * k as f64 / (grid - 1) as f64;
        qs.push(q);
        let x = q * std::f64::consts::FRAC_1_SQRT_2;
        // the asymptotic form diverges at the turning point; the taper
        // window zeroes the edge band before that matters
        let t = taper(q.abs() / half, THREE_STEP_TAPER);
        if t == 0.0 || x * x >= 0.999 * tn {
            vals.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let kernel = 2f64.powf(-0.25) * hermite_function_asymptotic_unchecked(n, x);
        vals.push(Complex64::from_polar(1.0, -0.25 * cot * q * q) * kernel * t);
    }
    (qs, vals)
}

fn taper(r: f64, width: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    if r <= 1.0 - width {
        return 1.0;
    }
    0.5 * (1.0 + (PI * (r - (1.0 - width)) / width).cos())
}
