//! Coherent- and quadrature-state amplitudes, the single-mode
//! basis-change kernels, and single-mode integral representations of the
//! Fock amplitude.
//!
//! Kernel conventions (single mode):
//!
//! ```text
//! <q|n>   = e^{-q^2/4} H_n(q/sqrt 2) / sqrt(2^n n! sqrt(2 pi))
//! <q|phi> = (2 pi)^{-1/4} e^{-|phi|^2/2 - (q/2 - phi)^2 + phi^2/2}
//! <n|phi> = phi^n e^{-|phi|^2/2} / sqrt(n!)
//! <q|p>   = e^{i q.p / 2} / (4 pi)^{M/2}
//! ```
//!
//! The quadrature-to-quadrature amplitude `<Q'|q>` is a Gaussian in
//! `(q, Q)` whose quadratic form is built from `u = u^r + i u^i`; its
//! squared modulus is independent of `(q, Q)`. The overall sign of the
//! Gaussian's prefactor follows the principal branch of the complex
//! square root, so only the modulus and the defining first-order PDE are
//! contractual; the phase convention is fixed but arbitrary.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ComplexAmplitude, EvalPath, OccupationVector};
use crate::hermite;
use crate::matrix::UnitaryMatrix;

/// Condition-number guard above which u^i counts as singular.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Caps for the single-mode integral representations.
pub const INTEGRAL_MAX_OCCUPATION: u32 = 4;

const GH_BASE_ORDER: usize = 40;
const GH_MAX_ORDER: usize = 160;

/// Complex field amplitudes labeling a coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentLabel(Vec<Complex64>);

impl CoherentLabel {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        for (k, z) in amplitudes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry { row: k, col: 0 });
            }
        }
        Ok(Self(amplitudes))
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }
}

/// Real quadrature eigenvalues, one per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePoint(Vec<f64>);

impl QuadraturePoint {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: k, col: 0 });
            }
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }
}

/// `<q|n>`: number state against the q-quadrature basis. Evaluated
/// through the orthonormal Hermite function, so it is stable for any n.
pub fn kernel_number_quadrature(n: u32, q: f64) -> f64 {
    // <q|n> = 2^{-1/4} h_n(q / sqrt 2)
    2f64.powf(-0.25) * hermite::hermite_function(n, q * std::f64::consts::FRAC_1_SQRT_2)
}

/// `<q|phi>`: coherent state against the q-quadrature basis.
pub fn kernel_coherent_quadrature(phi: Complex64, q: f64) -> Complex64 {
    let d = Complex64::new(q / 2.0, 0.0) - phi;
    let exponent = -phi.norm_sqr() / 2.0 - d * d + phi * phi / 2.0;
    (2.0 * std::f64::consts::PI).powf(-0.25) * exponent.exp()
}

/// `<n|phi>`: coherent state against the number basis.
pub fn kernel_coherent_number(n: u32, phi: Complex64) -> Complex64 {
    // iterate c_k = c_{k-1} * phi / sqrt(k) to avoid n! overflow
    let mut c = Complex64::new((-phi.norm_sqr() / 2.0).exp(), 0.0);
    for k in 1..=n {
        c *= phi / (k as f64).sqrt();
    }
    c
}

/// `<q|p>` between q- and p-quadrature eigenstates of M modes.
pub fn kernel_qp(q: &QuadraturePoint, p: &QuadraturePoint) -> Result<Complex64> {
    if q.modes() != p.modes() {
        return Err(Error::DimensionMismatch {
            what: "quadrature point",
            expected: q.modes(),
            actual: p.modes(),
        });
    }
    let dot: f64 = q.values().iter().zip(p.values()).map(|(a, b)| a * b).sum();
    let modes = q.modes() as f64;
    Ok(Complex64::from_polar(
        (4.0 * std::f64::consts::PI).powf(-modes / 2.0),
        dot / 2.0,
    ))
}

/// `<psi'|phi>`: coherent-to-coherent amplitude
/// `exp(-1/2 phi*.phi - 1/2 psi*.psi + psi*.u.phi)`.
pub fn amplitude_coherent(
    u: &UnitaryMatrix,
    phi: &CoherentLabel,
    psi: &CoherentLabel,
) -> Result<Complex64> {
    let m = u.dimension();
    for label in [phi, psi] {
        if label.modes() != m {
            return Err(Error::DimensionMismatch {
                what: "coherent label",
                expected: m,
                actual: label.modes(),
            });
        }
    }
    let uphi = u.apply(phi.amplitudes())?;
    let cross: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(&uphi)
        .map(|(p, v)| p.conj() * v)
        .sum();
    let norm_phi: f64 = phi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    let norm_psi: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    Ok((cross - 0.5 * Complex64::new(norm_phi + norm_psi, 0.0)).exp())
}

/// `P^C = exp(-|psi - u phi|^2)`; identically `|amplitude_coherent|^2`.
pub fn probability_coherent(
    u: &UnitaryMatrix,
    phi: &CoherentLabel,
    psi: &CoherentLabel,
) -> Result<f64> {
    if phi.modes() != u.dimension() {
        return Err(Error::DimensionMismatch {
            what: "coherent label",
            expected: u.dimension(),
            actual: phi.modes(),
        });
    }
    let uphi = u.apply(phi.amplitudes())?;
    if psi.modes() != uphi.len() {
        return Err(Error::DimensionMismatch {
            what: "coherent label",
            expected: uphi.len(),
            actual: psi.modes(),
        });
    }
    let dist: f64 = psi
        .amplitudes()
        .iter()
        .zip(&uphi)
        .map(|(p, v)| (p - v).norm_sqr())
        .sum();
    Ok((-dist).exp())
}

/// The pieces of the quadrature-to-quadrature Gaussian that depend only
/// on u: the real blocks of the quadratic form and the complex prefactor.
struct QuadratureForm {
    /// (u^i)^{-1} u^r, symmetric
    s: DMatrix<f64>,
    /// (u^i)^{-1}
    wi_inv: DMatrix<f64>,
    /// u^r (u^i)^{-1}, symmetric
    t: DMatrix<f64>,
    /// sqrt(det(-4 pi i u (u^i)^T)), principal branch
    sqrt_det: Complex64,
}

fn quadrature_form(u: &UnitaryMatrix) -> Result<QuadratureForm> {
    let m = u.dimension();
    let ur = DMatrix::from_row_slice(m, m, &u.real_part());
    let wi = DMatrix::from_row_slice(m, m, &u.imag_part());

    let svd = wi.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::SingularImaginaryPart {
            cond,
            limit: CONDITION_LIMIT,
        });
    }
    let wi_inv = wi
        .clone()
        .try_inverse()
        .ok_or(Error::SingularImaginaryPart {
            cond,
            limit: CONDITION_LIMIT,
        })?;

    // det(-4 pi i u (u^i)^T) via complex LU
    let uc = DMatrix::from_fn(m, m, |i, j| u.get(i, j));
    let wic = wi.map(|x| Complex64::new(x, 0.0));
    let prod = &uc * wic.transpose() * Complex64::new(0.0, -4.0 * std::f64::consts::PI);
    let det = prod.determinant();

    Ok(QuadratureForm {
        s: &wi_inv * &ur,
        t: &ur * &wi_inv,
        wi_inv,
        sqrt_det: det.sqrt(),
    })
}

fn quadrature_amplitude_from_form(form: &QuadratureForm, q: &[f64], big_q: &[f64]) -> Complex64 {
    let m = q.len();
    let mut quad = 0.0;
    for a in 0..m {
        for b in 0..m {
            quad += q[a] * form.s[(a, b)] * q[b];
            quad += big_q[a] * form.t[(a, b)] * big_q[b];
            // the two cross blocks contribute equally
            quad -= 2.0 * q[a] * form.wi_inv[(a, b)] * big_q[b];
        }
    }
    Complex64::from_polar(1.0, -quad / 4.0) / form.sqrt_det
}

/// `A^Q(q, Q) = <Q'|q>`: the Gaussian quadrature-to-quadrature
/// amplitude. Requires u^i invertible with condition number below 1e8.
pub fn amplitude_quadrature(
    u: &UnitaryMatrix,
    q: &QuadraturePoint,
    big_q: &QuadraturePoint,
) -> Result<Complex64> {
    let m = u.dimension();
    for point in [q, big_q] {
        if point.modes() != m {
            return Err(Error::DimensionMismatch {
                what: "quadrature point",
                expected: m,
                actual: point.modes(),
            });
        }
    }
    let form = quadrature_form(u)?;
    Ok(quadrature_amplitude_from_form(
        &form,
        q.values(),
        big_q.values(),
    ))
}

/// `P^Q = 1 / |det(4 pi u (u^i)^T)|`, the state-independent transition
/// probability between quadrature configurations.
pub fn probability_quadrature(u: &UnitaryMatrix) -> Result<f64> {
    let form = quadrature_form(u)?;
    Ok(1.0 / form.sqrt_det.norm_sqr())
}

/// Residual of the defining first-order equation of `<Q'|q>`,
/// `[i u^i d/dq - 1/2 (u^r q - Q)] A = 0`,
/// with the derivative taken by central differences; returns the largest
/// component modulus.
pub fn quadrature_pde_residual(
    u: &UnitaryMatrix,
    q: &QuadraturePoint,
    big_q: &QuadraturePoint,
    step: f64,
) -> Result<f64> {
    let m = u.dimension();
    let form = quadrature_form(u)?;
    let a0 = quadrature_amplitude_from_form(&form, q.values(), big_q.values());
    let mut grad = vec![Complex64::new(0.0, 0.0); m];
    for (j, g) in grad.iter_mut().enumerate() {
        let mut qp = q.values().to_vec();
        let mut qm = q.values().to_vec();
        qp[j] += step;
        qm[j] -= step;
        let ap = quadrature_amplitude_from_form(&form, &qp, big_q.values());
        let am = quadrature_amplitude_from_form(&form, &qm, big_q.values());
        *g = (ap - am) / (2.0 * step);
    }
    let ur = u.real_part();
    let wi = u.imag_part();
    let mut worst = 0.0f64;
    for l in 0..m {
        let mut term = Complex64::new(0.0, 0.0);
        for j in 0..m {
            term += Complex64::new(0.0, wi[l * m + j]) * grad[j];
        }
        let urq: f64 = (0..m).map(|j| ur[l * m + j] * q.values()[j]).sum();
        term -= 0.5 * Complex64::new(urq - big_q.values()[l], 0.0) * a0;
        worst = worst.max(term.norm());
    }
    Ok(worst)
}

fn check_integral_bounds(n: u32, m: u32) -> Result<()> {
    for v in [n, m] {
        if v > INTEGRAL_MAX_OCCUPATION {
            return Err(Error::DimensionTooLarge {
                what: "occupation for the integral representation",
                limit: INTEGRAL_MAX_OCCUPATION as usize,
                actual: v as usize,
            });
        }
    }
    Ok(())
}

fn check_single_mode(u: &UnitaryMatrix) -> Result<()> {
    if u.dimension() != 1 {
        return Err(Error::DimensionTooLarge {
            what: "mode count for the integral representation",
            limit: 1,
            actual: u.dimension(),
        });
    }
    Ok(())
}

/// Single-mode Fock amplitude reconstructed by integrating over the
/// coherent resolution of identity:
/// `A = (1/pi^2) int d2psi d2phi psi^m (phi*)^n e^{-|psi|^2 - |phi|^2}
///      e^{psi* u phi} / sqrt(m! n!)`.
/// Tensor-product Gauss-Hermite quadrature, order 40 doubled until the
/// change drops below tolerance.
pub fn amplitude_fock_via_coherent_integral(
    u: &UnitaryMatrix,
    n: u32,
    m: u32,
) -> Result<ComplexAmplitude> {
    check_single_mode(u)?;
    check_integral_bounds(n, m)?;
    let u00 = u.get(0, 0);

    let mut previous: Option<Complex64> = None;
    let mut order = GH_BASE_ORDER;
    loop {
        let value = coherent_integral_at_order(u00, n, m, order);
        if let Some(prev) = previous {
            if (value - prev).norm() < 1e-8 || order >= GH_MAX_ORDER {
                return Ok(ComplexAmplitude {
                    value,
                    path: EvalPath::Integral,
                });
            }
        }
        previous = Some(value);
        order *= 2;
    }
}

fn coherent_integral_at_order(u: Complex64, n: u32, m: u32, order: usize) -> Complex64 {
    // Scaled weights with the full Gaussian e^{-|phi|^2 - |psi|^2} folded
    // into the exponents, so the evaluated quantities never leave O(1)
    // territory. With psi = c + i d and v = u phi, the psi double sum
    // factorizes through the binomial expansion of (c + i d)^m:
    //   sum_{c,d} W_c W_d (c+id)^m e^{-c^2-d^2+(c-id)v}
    //     = sum_j C(m,j) i^j G_{m-j}(v) H_j(v)
    // with G_p(v) = sum_c W_c c^p e^{-c^2+cv} and
    //      H_j(v) = sum_d W_d d^j e^{-d^2-idv},
    // which turns the O(K^4) grid into O(K^3) work.
    let (nodes, weights) = hermite::gauss_hermite_scaled(order);
    let k = nodes.len();
    let norm_fac = ((1..=n).map(|i| i as f64).product::<f64>()
        * (1..=m).map(|i| i as f64).product::<f64>())
    .sqrt();
    let binom: Vec<f64> = (0..=m)
        .map(|j| (1..=j).fold(1.0, |acc, t| acc * (m - t + 1) as f64 / t as f64))
        .collect();
    let i_pow = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mp = m as usize;
    let mut gc = vec![Complex64::new(0.0, 0.0); mp + 1];
    let mut gd = vec![Complex64::new(0.0, 0.0); mp + 1];
    let mut acc = Complex64::new(0.0, 0.0);
    for ia in 0..k {
        for ib in 0..k {
            let phi = Complex64::new(nodes[ia], nodes[ib]);
            let wphi = weights[ia] * weights[ib] * (-phi.norm_sqr()).exp();
            let phin = phi.conj().powu(n);
            let v = u * phi;
            gc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            gd.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for ic in 0..k {
                let c = nodes[ic];
                let mut base_c = weights[ic] * (v * c - c * c).exp();
                let mut base_d = weights[ic] * (v * Complex64::new(0.0, -c) - c * c).exp();
                for p in 0..=mp {
                    gc[p] += base_c;
                    gd[p] += base_d;
                    base_c *= c;
                    base_d *= c;
                }
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..=mp {
                s += binom[j] * i_pow[j % 4] * gc[mp - j] * gd[j];
            }
            acc += wphi * phin * s;
        }
    }
    acc / (std::f64::consts::PI * std::f64::consts::PI) / norm_fac
}

/// Single-mode Fock amplitude reconstructed through the quadrature
/// basis: `A = int dQ dq <m|Q> A^Q(q,Q) <q|n>`. Gauss-Hermite in the
/// scaled variables, order doubled until stable. Requires u to have a
/// usable imaginary part.
pub fn amplitude_fock_via_quadrature_integral(
    u: &UnitaryMatrix,
    n: u32,
    m: u32,
) -> Result<ComplexAmplitude> {
    check_single_mode(u)?;
    check_integral_bounds(n, m)?;
    let form = quadrature_form(u)?;

    let mut previous: Option<Complex64> = None;
    let mut order = GH_BASE_ORDER;
    loop {
        let value = quadrature_integral_at_order(&form, n, m, order);
        if let Some(prev) = previous {
            if (value - prev).norm() < 1e-7 || order >= GH_MAX_ORDER {
                return Ok(ComplexAmplitude {
                    value,
                    path: EvalPath::Integral,
                });
            }
        }
        previous = Some(value);
        order *= 2;
    }
}

fn quadrature_integral_at_order(form: &QuadratureForm, n: u32, m: u32, order: usize) -> Complex64 {
    // substitute q = 2s, Q = 2t: the Gaussian e^{-s^2 - t^2} demanded by
    // the scaled rule is exactly the e^{-q^2/4 - Q^2/4} the kernels
    // already carry, so they are used as-is
    let (nodes, weights) = hermite::gauss_hermite_scaled(order);
    let k = nodes.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for iq in 0..k {
        let q = 2.0 * nodes[iq];
        let kq = kernel_number_quadrature(n, q);
        for ip in 0..k {
            let big = 2.0 * nodes[ip];
            let km = kernel_number_quadrature(m, big);
            let aq = quadrature_amplitude_from_form(form, &[q], &[big]);
            acc += weights[iq] * weights[ip] * 4.0 * kq * km * aq;
        }
    }
    acc
}

/// The via-coherent integral with the same occupation-vector signature
/// as the other amplitude paths (single mode only).
pub fn amplitude_fock_integral(
    u: &UnitaryMatrix,
    n: &OccupationVector,
    m: &OccupationVector,
) -> Result<ComplexAmplitude> {
    if n.modes() != 1 || m.modes() != 1 {
        return Err(Error::DimensionTooLarge {
            what: "mode count for the integral representation",
            limit: 1,
            actual: n.modes().max(m.modes()),
        });
    }
    amplitude_fock_via_coherent_integral(u, n.get(0), m.get(0))
}
