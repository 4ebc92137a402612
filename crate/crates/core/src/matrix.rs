//! Dense complex matrices and the permanent kernels.
//!
//! The permanent of an n x n matrix A is
//! `Perm A = sum over permutations pi of prod_i A[i, pi(i)]`,
//! the signless analogue of the determinant. Three evaluation routes are
//! provided: brute-force expansion over all permutations (the oracle for
//! small n), Ryser's inclusion-exclusion formula, and Glynn's formula,
//! the latter two walking subsets/sign vectors in Gray-code order so the
//! summation order (and hence the floating-point result) is fixed.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap for the brute-force permanent (n! cost).
pub const MAX_NAIVE_DIM: usize = 11;
/// Hard cap for Ryser and Glynn (2^n cost).
pub const MAX_PERMANENT_DIM: usize = 30;

const UNITARITY_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Every entry must be finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                what: "matrix shape",
                expected: 1,
                actual: 0,
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .expect("identity is finite")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("entries stay finite")
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    fn require_square(&self, limit: usize, what: &'static str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows > limit {
            return Err(Error::DimensionTooLarge {
                what,
                limit,
                actual: self.rows,
            });
        }
        Ok(self.rows)
    }

    /// Permanent by explicit expansion over all n! permutations (Heap's
    /// algorithm). Exact up to rounding; the oracle the fast routes are
    /// checked against. Guarded to n <= 11.
    pub fn permanent_naive(&self) -> Result<Complex64> {
        let n = self.require_square(MAX_NAIVE_DIM, "naive permanent dimension")?;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut counters = vec![0usize; n];
        let mut total = self.product_along(&perm);
        let mut i = 0;
        while i < n {
            if counters[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(counters[i], i);
                }
                total += self.product_along(&perm);
                counters[i] += 1;
                i = 0;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        Ok(total)
    }

    #[inline]
    fn product_along(&self, perm: &[usize]) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (i, &j) in perm.iter().enumerate() {
            p *= self.get(i, j);
        }
        p
    }

    /// Permanent by Ryser's inclusion-exclusion formula,
    /// `Perm A = (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} A[i,j]`,
    /// with row sums updated incrementally along the binary Gray code.
    /// O(2^n n) time; guarded to n <= 30.
    pub fn permanent_ryser(&self) -> Result<Complex64> {
        let n = self.require_square(MAX_PERMANENT_DIM, "permanent dimension")?;
        let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
        let mut total = Complex64::new(0.0, 0.0);
        let mut gray: u64 = 0;
        for k in 1u64..(1u64 << n) {
            let next = k ^ (k >> 1);
            let bit = (gray ^ next).trailing_zeros() as usize;
            if next & (gray ^ next) != 0 {
                // column `bit` enters the subset
                for (i, s) in row_sums.iter_mut().enumerate() {
                    *s += self.get(i, bit);
                }
            } else {
                for (i, s) in row_sums.iter_mut().enumerate() {
                    *s -= self.get(i, bit);
                }
            }
            gray = next;
            let mut prod = Complex64::new(1.0, 0.0);
            for s in &row_sums {
                prod *= s;
            }
            // (-1)^{n - |S|}
            if (n as u32 - next.count_ones()).is_multiple_of(2) {
                total += prod;
            } else {
                total -= prod;
            }
        }
        Ok(total)
    }

    /// Permanent by Glynn's formula,
    /// `Perm A = 2^{1-n} sum_{d in {-1,1}^n, d_1 = 1} (prod_i d_i) prod_j (sum_i d_i A[i,j])`,
    /// walking sign vectors in Gray-code order. O(2^n n) time; n <= 30.
    pub fn permanent_glynn(&self) -> Result<Complex64> {
        let n = self.require_square(MAX_PERMANENT_DIM, "permanent dimension")?;
        // column sums for the all-plus sign vector
        let mut col_sums: Vec<Complex64> = (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j)).sum())
            .collect();
        let mut sign = 1.0;
        let mut total = {
            let mut prod = Complex64::new(1.0, 0.0);
            for c in &col_sums {
                prod *= c;
            }
            prod
        };
        // flip rows 2..n (row 1 pinned to +1); Gray code over n-1 bits
        let mut gray: u64 = 0;
        for k in 1u64..(1u64 << (n - 1)) {
            let next = k ^ (k >> 1);
            let bit = (gray ^ next).trailing_zeros() as usize;
            let row = bit + 1;
            // sign of row flips: delta is -2 or +2 times the row
            let factor = if next & (gray ^ next) != 0 { -2.0 } else { 2.0 };
            for (j, c) in col_sums.iter_mut().enumerate() {
                *c += factor * self.get(row, j);
            }
            gray = next;
            sign = -sign;
            let mut prod = Complex64::new(1.0, 0.0);
            for c in &col_sums {
                prod *= c;
            }
            total += sign * prod;
        }
        Ok(total / 2f64.powi(n as i32 - 1))
    }
}

/// Unitary M x M matrix; the single-particle transformation.
///
/// Construction verifies `max |(u^dag u - I)_{ij}| <= 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += matrix.get(k, i).conj() * matrix.get(k, j);
                }
                if i == j {
                    s -= Complex64::new(1.0, 0.0);
                }
                deviation = deviation.max(s.norm());
            }
        }
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    /// The balanced two-mode beamsplitter `(1/sqrt 2) [[1, 1], [1, -1]]`.
    pub fn beamsplitter() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            ComplexMatrix::new(
                2,
                2,
                vec![
                    Complex64::new(s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(-s, 0.0),
                ],
            )
            .unwrap(),
        )
        .expect("beamsplitter is unitary")
    }

    /// Single-mode phase map `u = e^{i alpha}` as a 1 x 1 unitary.
    pub fn phase(alpha: f64) -> Self {
        Self::new(ComplexMatrix::new(1, 1, vec![Complex64::from_polar(1.0, alpha)]).unwrap())
            .expect("phase is unitary")
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Adjoint (conjugate transpose), again unitary.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.transpose().conjugate(),
        }
    }

    /// Entrywise real part, as a plain real matrix in row-major order.
    pub fn real_part(&self) -> Vec<f64> {
        self.matrix.entries().iter().map(|z| z.re).collect()
    }

    /// Entrywise imaginary part.
    pub fn imag_part(&self) -> Vec<f64> {
        self.matrix.entries().iter().map(|z| z.im).collect()
    }

    /// Applies u to a complex vector.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.dimension();
        if x.len() != m {
            return Err(Error::DimensionMismatch {
                what: "vector",
                expected: m,
                actual: x.len(),
            });
        }
        Ok((0..m)
            .map(|i| (0..m).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn permanent_1x1_is_the_entry() {
        let a = ComplexMatrix::new(1, 1, vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(a.permanent_naive().unwrap(), c(1.0, 0.0));
        assert_eq!(a.permanent_ryser().unwrap(), c(1.0, 0.0));
        assert_eq!(a.permanent_glynn().unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn permanent_all_ones_is_factorial() {
        let a = ComplexMatrix::from_fn(3, 3, |_, _| c(1.0, 0.0)).unwrap();
        assert_relative_eq!(a.permanent_naive().unwrap().re, 6.0, max_relative = 1e-12);
        assert_relative_eq!(a.permanent_glynn().unwrap().re, 6.0, max_relative = 1e-12);
    }

    #[test]
    fn permanent_identity_is_one() {
        let a = ComplexMatrix::identity(4);
        assert_relative_eq!(a.permanent_ryser().unwrap().re, 1.0, max_relative = 1e-12);
        assert!(a.permanent_ryser().unwrap().im.abs() < 1e-14);
    }

    #[test]
    fn permanent_2x2_closed_form() {
        // [[a,b],[c,d]] -> ad + bc with a = 1+i, b = 2, c = 0, d = 3-i
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(3.0, -1.0)],
        )
        .unwrap();
        let expected = c(1.0, 1.0) * c(3.0, -1.0); // 4 + 2i
        assert_eq!(expected, c(4.0, 2.0));
        assert_relative_eq!(a.permanent_ryser().unwrap().re, 4.0, max_relative = 1e-12);
        assert_relative_eq!(a.permanent_ryser().unwrap().im, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn ryser_matches_naive_on_ginibre_6x6() {
        let a = ensembles::sample_ginibre(6, 0.5, 42).unwrap();
        let naive = a.permanent_naive().unwrap();
        let ryser = a.permanent_ryser().unwrap();
        assert!((naive - ryser).norm() <= 1e-10 * naive.norm());
    }

    #[test]
    fn glynn_matches_ryser_on_ginibre_8x8_and_12x12() {
        for (n, seed) in [(8usize, 7u64), (12, 8)] {
            let a = ensembles::sample_ginibre(n, 0.5, seed).unwrap();
            let g = a.permanent_glynn().unwrap();
            let r = a.permanent_ryser().unwrap();
            assert!(
                (g - r).norm() <= 1e-10 * r.norm(),
                "n={n}: glynn {g} vs ryser {r}"
            );
        }
    }

    #[test]
    fn cross_algorithm_agreement_seeded() {
        for seed in 0..50u64 {
            let n = 2 + (seed % 8) as usize; // n in 2..=9
            let a = ensembles::sample_ginibre(n, 1.0, 1000 + seed).unwrap();
            let nv = a.permanent_naive().unwrap();
            let ry = a.permanent_ryser().unwrap();
            let gl = a.permanent_glynn().unwrap();
            let scale = nv.norm().max(1e-300);
            assert!((nv - ry).norm() <= 1e-10 * scale);
            assert!((nv - gl).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn conjugation_commutes_with_permanent() {
        let a = ensembles::sample_ginibre(5, 0.5, 3).unwrap();
        let p = a.permanent_ryser().unwrap();
        let pc = a.conjugate().permanent_ryser().unwrap();
        assert!((pc - p.conj()).norm() <= 1e-12 * p.norm());
    }

    #[test]
    fn dimension_guards() {
        let a = ComplexMatrix::from_fn(12, 12, |_, _| c(1.0, 0.0)).unwrap();
        assert!(matches!(
            a.permanent_naive(),
            Err(Error::DimensionTooLarge { .. })
        ));
        let b = ComplexMatrix::from_fn(2, 3, |_, _| c(1.0, 0.0)).unwrap();
        assert!(matches!(b.permanent_ryser(), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let r = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFiniteEntry { .. })));
    }

    #[test]
    fn unitary_construction_rejects_non_unitary() {
        let a = ComplexMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0)).unwrap();
        assert!(matches!(
            UnitaryMatrix::new(a),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn beamsplitter_hom_permanent_vanishes() {
        let u = UnitaryMatrix::beamsplitter();
        let p = u.matrix().permanent_ryser().unwrap();
        assert!(p.norm() < 1e-14);
    }
}
