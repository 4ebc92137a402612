//! Many-boson scattering amplitudes under linear single-particle
//! transformations, with the permanent-based sampling core exposed
//! through several independently verifiable evaluation paths.
//!
//! The crate is organized around the physics it computes:
//!
//! - [`matrix`]: dense complex matrices and three permanent algorithms
//!   (brute force, Ryser, Glynn) that cross-check each other.
//! - [`fock`]: occupation vectors, the row/column-expanded matrix whose
//!   permanent gives Fock-state transition amplitudes, a bosonic-operator
//!   oracle, a contour (Fourier-coefficient) route, exact output
//!   distributions, and seeded sampling from them.
//! - [`representations`]: coherent- and quadrature-state amplitudes,
//!   single-mode basis-change kernels, and single-mode integral
//!   representations that reproduce the Fock amplitudes by quadrature.
//! - [`semiclassics`]: large-occupation asymptotics: the Hermite
//!   asymptotic formula, the generating function of the number-quadrature
//!   transformation, saddle-point ("shooting") phase matching, and the
//!   stationary-phase composition of the three elementary transformations.
//! - [`ensembles`]: seeded Haar, Ginibre, and disordered-Fourier draws.
//! - [`moments`]: exact arbitrary-precision moments of |Perm A|^{2n} over
//!   the complex Ginibre ensemble for n = 1, 2, 3, Monte Carlo
//!   cross-checks, and the exponential scaling fit.
//! - [`validation`]: the cross-path consistency suite used by the CLI.

pub mod ensembles;
pub mod error;
pub mod fock;
pub mod hermite;
pub mod matrix;
pub mod moments;
pub mod representations;
pub mod semiclassics;
pub mod textfmt;
pub mod validation;

pub use ensembles::EnsembleSpec;
pub use error::{Error, Result};
pub use fock::{ComplexAmplitude, EvalPath, ExpandedMatrix, OccupationVector};
pub use matrix::{ComplexMatrix, UnitaryMatrix};
pub use moments::{ExactRational, MomentResult};
pub use representations::{CoherentLabel, QuadraturePoint};
pub use semiclassics::{ShootingProblem, ShootingSolution};
