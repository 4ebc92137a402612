//! Seeded random-matrix ensembles: Haar unitaries, complex Ginibre
//! matrices, and the disordered Fourier ("quench") unitary.
//!
//! All sampling is driven by `ChaCha12Rng` seeded from a caller-supplied
//! 64-bit integer, so identical parameters reproduce identical matrices
//! within one build. Cross-build or cross-language bit equality is not
//! promised.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};

/// Which ensemble to draw from, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleSpec {
    Haar {
        dimension: usize,
        seed: u64,
    },
    Ginibre {
        dimension: usize,
        sigma2: f64,
        seed: u64,
    },
    Quench {
        dimension: usize,
        disorder: f64,
        seed: u64,
    },
}

impl EnsembleSpec {
    /// Draws the matrix described by this spec, in the shared
    /// `ComplexMatrix` representation.
    pub fn sample(&self) -> Result<ComplexMatrix> {
        match *self {
            EnsembleSpec::Haar { dimension, seed } => {
                Ok(sample_haar(dimension, seed)?.matrix().clone())
            }
            EnsembleSpec::Ginibre {
                dimension,
                sigma2,
                seed,
            } => sample_ginibre(dimension, sigma2, seed),
            EnsembleSpec::Quench {
                dimension,
                disorder,
                seed,
            } => Ok(quench_unitary(dimension, disorder, seed)?.matrix().clone()),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Draws an M x M unitary from the Haar measure.
///
/// A complex Ginibre matrix is QR-decomposed and each column of Q is
/// divided by the phase of the corresponding diagonal entry of R, which
/// fixes the gauge freedom of the decomposition; without that correction
/// plain QR output is not Haar-distributed.
pub fn sample_haar(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            what: "unitary dimension",
            expected: 1,
            actual: 0,
        });
    }
    let mut rng = rng_from_seed(seed);
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] /= phase;
        }
    }
    let entries: Vec<Complex64> = (0..dim)
        .flat_map(|i| {
            let q = &q;
            (0..dim).map(move |j| q[(i, j)])
        })
        .collect();
    UnitaryMatrix::new(ComplexMatrix::new(dim, dim, entries)?)
}

/// Draws an N x N complex Ginibre matrix: i.i.d. entries whose real and
/// imaginary parts are independent normals with mean 0 and variance
/// `sigma2` each.
pub fn sample_ginibre(dim: usize, sigma2: f64, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            what: "matrix dimension",
            expected: 1,
            actual: 0,
        });
    }
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::OutsideValidityRegion(format!(
            "sigma2 must be positive, got {sigma2}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let std = sigma2.sqrt();
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re * std, im * std));
    }
    ComplexMatrix::new(dim, dim, entries)
}

/// The unitary of a sudden quench from a localized to a delocalized
/// basis: the discrete Fourier matrix `F_jk = e^{2 pi i jk / M} / sqrt M`
/// right-multiplied by a diagonal of random phases
/// `e^{i phi_j}, phi_j ~ U[-disorder*pi, disorder*pi]`.
pub fn quench_unitary(dim: usize, disorder: f64, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            what: "unitary dimension",
            expected: 1,
            actual: 0,
        });
    }
    if disorder < 0.0 {
        return Err(Error::OutsideValidityRegion(format!(
            "disorder must be nonnegative, got {disorder}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let phases: Vec<f64> = if disorder == 0.0 {
        vec![0.0; dim]
    } else {
        let u = Uniform::new(
            -disorder * std::f64::consts::PI,
            disorder * std::f64::consts::PI,
        )
        .map_err(|e| Error::OutsideValidityRegion(e.to_string()))?;
        (0..dim).map(|_| u.sample(&mut rng)).collect()
    };
    let norm = 1.0 / (dim as f64).sqrt();
    let tau = 2.0 * std::f64::consts::PI / dim as f64;
    let entries: Vec<Complex64> = (0..dim)
        .flat_map(|j| {
            let phases = &phases;
            (0..dim).map(move |k| {
                Complex64::from_polar(norm, tau * (j * k) as f64)
                    * Complex64::from_polar(1.0, phases[k])
            })
        })
        .collect();
    UnitaryMatrix::new(ComplexMatrix::new(dim, dim, entries)?)
}
