//! Hermite polynomial evaluation and Gauss-Hermite quadrature rules.
//!
//! Raw H_n values overflow f64 around n ~ 300, so everything downstream
//! that needs large n works with the orthonormal Hermite *function*
//! `h_n(x) = H_n(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^n n!))`,
//! which stays O(1) and has a stable normalized recurrence.

use std::sync::OnceLock;

use nalgebra::DMatrix;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`. Overflows f64 for large n; callers
/// needing n beyond a few hundred should use [`hermite_function`].
pub fn hermite_h(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut hm = 1.0;
    let mut h = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * h - 2.0 * k as f64 * hm;
        hm = h;
        h = next;
    }
    h
}

/// Orthonormal Hermite function `h_n(x)`, satisfying
/// `integral h_n h_m dx = delta_{nm}`. Stable for all n.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    let mut hm = 0.0;
    let mut h = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * h - (kf / (kf + 1.0)).sqrt() * hm;
        hm = h;
        h = next;
    }
    h
}

/// ln(n!), accumulated once and cached.
pub fn ln_factorial(n: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(1025);
        t.push(0.0);
        let mut acc = 0.0;
        for k in 1..=1024u32 {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    if (n as usize) < table.len() {
        table[n as usize]
    } else {
        // Stirling with the leading correction; not hit by in-crate callers
        let x = n as f64;
        x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
    }
}

/// Nodes and *scaled* weights of the order-n Gauss-Hermite rule:
/// `integral e^{-x^2} f(x) dx ~= sum_i W_i e^{-x_i^2} f(x_i)` with
/// `W_i = w_i e^{x_i^2} = 1 / (n h_{n-1}(x_i)^2)`.
///
/// The scaled weights are all O(1) and are computed from the orthonormal
/// Hermite recurrence, which stays accurate at any order; the raw
/// weights of extreme nodes underflow and cannot be recovered reliably
/// from an eigenvector decomposition. Callers fold the Gaussian into the
/// integrand, which also removes overflow from integrands that grow like
/// `e^{|x| |y|}`. Nodes (Jacobi-matrix eigenvalues) come back ascending.
pub fn gauss_hermite_scaled(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let weights = nodes
        .iter()
        .map(|&x| {
            let h = hermite_function(order as u32 - 1, x);
            1.0 / (order as f64 * h * h)
        })
        .collect();
    (nodes, weights)
}

/// Plain Gauss-Hermite rule,
/// `integral e^{-x^2} f(x) dx ~= sum_i w_i f(x_i)`; derived from
/// [`gauss_hermite_scaled`], so the weights are accurate down to the
/// underflow threshold.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let (nodes, scaled) = gauss_hermite_scaled(order);
    let weights = nodes
        .iter()
        .zip(&scaled)
        .map(|(&x, &sw)| sw * (-x * x).exp())
        .collect();
    (nodes, weights)
}
