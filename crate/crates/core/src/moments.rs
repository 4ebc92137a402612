//! Exact moments of |Perm A|^{2n} over the complex Ginibre ensemble for
//! n = 1, 2, 3, their Monte Carlo cross-check, and the exponential
//! scaling fit of the scaled third moment.
//!
//! With sigma^2 the per-component entry variance, every moment is an
//! integer multiple of `(2 sigma^2)^{nN}`; results carry that power
//! structurally (`sigma_power`) next to an exact rational coefficient,
//! so the values are independent of sigma by construction.
//!
//! The second and fourth moments have closed forms (`N!` and
//! `N! (N+1)!`). The sixth moment is a constrained sum over the
//! multiplicities `N_1..N_6` with which the six permutations of S_3
//! appear among the row pairings, with the column-pairing multiplicities
//! `M_a` tied to them affinely and one (`M_1`) left free; terms where
//! any tied multiplicity goes negative vanish. All arithmetic is exact.

use nalgebra::{DMatrix, DVector};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always in reduced form with a positive
/// denominator (maintained by the arithmetic type itself).
pub type ExactRational = Ratio<BigInt>;

/// Largest dimension admitted by [`moment6_exact`].
pub const MAX_MOMENT6_DIM: u32 = 30;
/// Largest dimension admitted by [`moment_monte_carlo`].
pub const MAX_MONTE_CARLO_DIM: u32 = 10;

/// The scaled third moments `<|Perm A|^6> / (2 sigma^2)^{3N} / (N!)^3`
/// for N = 1..=23, as exact fraction strings. The reference table the
/// validation suite checks [`moment6_exact`] against.
pub const SCALED_THIRD_MOMENTS: [(u32, &str); 23] = [
    (1, "6"),
    (2, "18"),
    (3, "122/3"),
    (4, "79"),
    (5, "140"),
    (6, "10508/45"),
    (7, "13068/35"),
    (8, "579"),
    (9, "276442/315"),
    (10, "228754/175"),
    (11, "3697434/1925"),
    (12, "48374363/17325"),
    (13, "12084328/3003"),
    (14, "55026632/9555"),
    (15, "5536562488/675675"),
    (16, "290360139/25025"),
    (17, "3748239326/229075"),
    (18, "73954590386/3216213"),
    (19, "156246017726/4849845"),
    (20, "33081258263/734825"),
    (21, "95883756128092/1527701175"),
    (22, "767871070556/8793675"),
    (23, "750199663660/6186609"),
];

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Ratio::new(num, den))
}

/// An exact moment `<|Perm A|^{2n}> = coefficient * (2 sigma^2)^{sigma_power}`,
/// together with the scaled value `coefficient / (N!)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    /// Moment order n in |Perm A|^{2n}; 1, 2, or 3.
    pub order: u32,
    /// Matrix dimension N.
    pub dimension: u32,
    /// Exact coefficient of (2 sigma^2)^{sigma_power}.
    pub coefficient: ExactRational,
    /// The power n*N the variance enters with.
    pub sigma_power: u32,
    /// coefficient / (N!)^order.
    pub scaled: ExactRational,
}

impl MomentResult {
    fn new(order: u32, dimension: u32, coefficient: ExactRational) -> Self {
        let nf = factorial(dimension);
        let scale = Ratio::from_integer(nf.pow(order));
        Self {
            order,
            dimension,
            scaled: &coefficient / scale,
            sigma_power: order * dimension,
            coefficient,
        }
    }

    /// The moment as a float for a concrete sigma^2.
    pub fn evaluate(&self, sigma2: f64) -> f64 {
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        c * (2.0 * sigma2).powi(self.sigma_power as i32)
    }
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Memoized factorials and binomials; the moment sums revisit the same
/// small arguments millions of times.
struct FactorialTable {
    factorials: Vec<BigInt>,
}

impl FactorialTable {
    /// Table of 0! ..= max!.
    fn up_to(max: u32) -> Self {
        let mut factorials = Vec::with_capacity(max as usize + 1);
        factorials.push(BigInt::one());
        for k in 1..=max {
            let next = &factorials[k as usize - 1] * k;
            factorials.push(next);
        }
        Self { factorials }
    }

    #[inline]
    fn factorial(&self, n: u32) -> &BigInt {
        &self.factorials[n as usize]
    }

    #[inline]
    fn binomial(&self, n: u32, k: u32) -> BigInt {
        self.factorial(n) / (self.factorial(k) * self.factorial(n - k))
    }
}

/// `<|Perm A|^2> = (2 sigma^2)^N N!`.
pub fn moment2_exact(dim: u32) -> Result<MomentResult> {
    check_positive(dim)?;
    Ok(MomentResult::new(
        1,
        dim,
        Ratio::from_integer(factorial(dim)),
    ))
}

/// `<|Perm A|^4> = (2 sigma^2)^{2N} N! (N+1)!`.
pub fn moment4_exact(dim: u32) -> Result<MomentResult> {
    check_positive(dim)?;
    Ok(MomentResult::new(
        2,
        dim,
        Ratio::from_integer(factorial(dim) * factorial(dim + 1)),
    ))
}

fn check_positive(dim: u32) -> Result<()> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            what: "matrix dimension",
            expected: 1,
            actual: 0,
        });
    }
    Ok(())
}

/// `<|Perm A|^6>`, exact, via the reduced 7-fold sum.
///
/// Outer sum: compositions `N_1 + ... + N_6 = N` of the multiplicities
/// of the six permutations of S_3 in the row table, enumerated in
/// colexicographic order. Inner sum: the free column multiplicity
/// `M_1 = 0..N`, the rest tied by
/// `M_2 = N_1+N_2-M_1, M_3 = N_1+N_3-M_1, M_4 = N_1+N_4-M_1,
///  M_5 = N_5-N_1+M_1, M_6 = N_6-N_1+M_1`
/// (negative values annihilate the term). Each term is
/// `prod_a p_a! / (M_1! prod N_a! prod_{a>=2} M_a!)` with the nine pair
/// counters `p_1 = N_1+N_3, p_2 = N_2+N_5, p_3 = N_4+N_6, p_4 = N_2+N_6,
/// p_5 = N_1+N_4, p_6 = N_3+N_5, p_7 = N_4+N_5, p_8 = N_3+N_6,
/// p_9 = N_1+N_2`; the total carries `(N!)^2`.
///
/// The sum parallelizes over compositions; terms are exact integers, so
/// the reduction order cannot affect the result.
pub fn moment6_exact(dim: u32) -> Result<MomentResult> {
    check_positive(dim)?;
    if dim > MAX_MOMENT6_DIM {
        return Err(Error::DimensionTooLarge {
            what: "third-moment dimension",
            limit: MAX_MOMENT6_DIM as usize,
            actual: dim as usize,
        });
    }
    let compositions = compositions_colex(dim, 6);
    // pair counters reach at most 2N
    let table = FactorialTable::up_to(2 * dim);
    let total: BigInt = compositions
        .par_iter()
        .map(|comp| moment6_inner_sum(dim, comp, &table))
        .reduce(BigInt::zero, |a, b| a + b);
    let coefficient = Ratio::from_integer(total * table.factorial(dim).pow(2));
    Ok(MomentResult::new(3, dim, coefficient))
}

/// One inner sum over M_1 for a fixed composition (N_1..N_6).
fn moment6_inner_sum(dim: u32, comp: &[u32; 6], table: &FactorialTable) -> BigInt {
    let [n1, n2, n3, n4, n5, n6] = *comp;
    let p4 = n2 + n6;
    let p5 = n1 + n4;
    let p6 = n3 + n5;
    // prod_a p_a! / (prod_a N_a! prod_a M_a!) assembles from binomials:
    // p_1 p_2 p_3 cover the N_a once each, p_7 p_8 p_9 cover the M_a
    // once each, and p_4 p_5 p_6 stay as raw factorials.
    let rows =
        table.binomial(n1 + n3, n1) * table.binomial(n2 + n5, n2) * table.binomial(n4 + n6, n4);
    let loose = table.factorial(p4) * table.factorial(p5) * table.factorial(p6);
    let mut acc = BigInt::zero();
    for m1 in 0..=dim {
        let m2 = (n1 + n2).checked_sub(m1);
        let m3 = (n1 + n3).checked_sub(m1);
        let m4 = (n1 + n4).checked_sub(m1);
        let m5 = (n5 + m1).checked_sub(n1);
        let m6 = (n6 + m1).checked_sub(n1);
        let (Some(m2), Some(m3), Some(m4), Some(m5), Some(m6)) = (m2, m3, m4, m5, m6) else {
            continue;
        };
        // p_9 = M_1 + M_2, p_8 = M_3 + M_6, p_7 = M_4 + M_5
        let cols =
            table.binomial(m1 + m2, m1) * table.binomial(m3 + m6, m3) * table.binomial(m4 + m5, m4);
        acc += cols;
    }
    acc * rows * loose
}

/// Compositions of `total` into `parts` nonnegative parts, in
/// colexicographic order (the last coordinate varies slowest).
pub fn compositions_colex(total: u32, parts: usize) -> Vec<[u32; 6]> {
    assert_eq!(parts, 6, "fixed arity used by the moment sums");
    let mut out = Vec::new();
    for n6 in 0..=total {
        for n5 in 0..=total - n6 {
            for n4 in 0..=total - n6 - n5 {
                for n3 in 0..=total - n6 - n5 - n4 {
                    for n2 in 0..=total - n6 - n5 - n4 - n3 {
                        let n1 = total - n6 - n5 - n4 - n3 - n2;
                        out.push([n1, n2, n3, n4, n5, n6]);
                    }
                }
            }
        }
    }
    out
}

/// Monte Carlo estimate of `<|Perm A|^{2n}>`: sample mean and standard
/// error of `|Perm|^{2n}` over seeded Ginibre draws, the permanent
/// evaluated by Ryser's formula.
pub fn moment_monte_carlo(
    order: u32,
    dim: u32,
    sigma2: f64,
    draws: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(1..=3).contains(&order) {
        return Err(Error::OutsideValidityRegion(format!(
            "moment order must be 1, 2, or 3, got {order}"
        )));
    }
    check_positive(dim)?;
    if dim > MAX_MONTE_CARLO_DIM {
        return Err(Error::DimensionTooLarge {
            what: "Monte Carlo dimension",
            limit: MAX_MONTE_CARLO_DIM as usize,
            actual: dim as usize,
        });
    }
    if draws < 100 {
        return Err(Error::InsufficientData {
            needed: 100,
            got: draws,
        });
    }
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for k in 0..draws {
        let a =
            crate::ensembles::sample_ginibre(dim as usize, sigma2, seed.wrapping_add(k as u64))?;
        let p = a.permanent_ryser()?.norm_sqr().powi(order as i32);
        sum += p;
        sumsq += p * p;
    }
    let mean = sum / draws as f64;
    let var = (sumsq / draws as f64 - mean * mean).max(0.0);
    let stderr = (var / draws as f64).sqrt();
    Ok((mean, stderr))
}

/// Least-squares fit of `log(scaled) ~ lambda N + nu log N + const`;
/// returns `(lambda, nu)`.
pub fn fit_scaling(points: &[(u32, ExactRational)]) -> Result<(f64, f64)> {
    if points.len() < 10 {
        return Err(Error::InsufficientData {
            needed: 10,
            got: points.len(),
        });
    }
    let rows = points.len();
    let design = DMatrix::from_fn(rows, 3, |r, c| {
        let n = points[r].0 as f64;
        match c {
            0 => n,
            1 => n.ln(),
            _ => 1.0,
        }
    });
    let target = DVector::from_fn(rows, |r, _| {
        let v = &points[r].1;
        // ln of a positive rational via big-integer magnitudes
        let num = v.numer().abs().to_f64().unwrap_or(f64::NAN);
        let den = v.denom().to_f64().unwrap_or(f64::NAN);
        num.ln() - den.ln()
    });
    let svd = design.svd(true, true);
    let coef = svd
        .solve(&target, 1e-14)
        .map_err(|e| Error::OutsideValidityRegion(e.to_string()))?;
    Ok((coef[0], coef[1]))
}

/// n = 1 route through the pairing combinatorics instead of the closed
/// form: the single permutation of S_1 forces both tables
/// (multiplicities N_1 = M_1 = N), and only the N! vertical
/// rearrangements of the identical pairs count. Cross-checks
/// [`moment2_exact`].
pub fn moment2_via_pairings(dim: u32) -> Result<MomentResult> {
    check_positive(dim)?;
    // (N!/N_1!) * (N!/M_1!) * p_1!  with N_1 = M_1 = p_1 = N
    let (n1, m1, p1) = (dim, dim, dim);
    let rows = factorial(dim) / factorial(n1);
    let cols = factorial(dim) / factorial(m1);
    let coefficient = rows * cols * factorial(p1);
    Ok(MomentResult::new(1, dim, Ratio::from_integer(coefficient)))
}

/// n = 2 route through the unsummed form: the two permutations of S_2
/// share no pair, so column multiplicities equal row multiplicities and
/// each composition contributes its two placement multinomials times the
/// vertical rearrangements `(N_1!)^2 (N_2!)^2`. Cross-checks
/// [`moment4_exact`].
pub fn moment4_via_pairings(dim: u32) -> Result<MomentResult> {
    check_positive(dim)?;
    let mut acc = BigInt::zero();
    for n1 in 0..=dim {
        let n2 = dim - n1;
        let placements = binomial(dim, n1).pow(2);
        let vertical = (factorial(n1) * factorial(n2)).pow(2);
        acc += placements * vertical;
    }
    Ok(MomentResult::new(2, dim, Ratio::from_integer(acc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment2_values() {
        assert_eq!(
            moment2_exact(1).unwrap().coefficient,
            parse_rational("1").unwrap()
        );
        assert_eq!(
            moment2_exact(2).unwrap().coefficient,
            parse_rational("2").unwrap()
        );
        assert_eq!(
            moment2_exact(5).unwrap().coefficient,
            parse_rational("120").unwrap()
        );
        assert_eq!(moment2_exact(5).unwrap().sigma_power, 5);
    }

    #[test]
    fn moment4_values() {
        assert_eq!(
            moment4_exact(1).unwrap().coefficient,
            parse_rational("2").unwrap()
        );
        assert_eq!(
            moment4_exact(2).unwrap().coefficient,
            parse_rational("12").unwrap()
        );
        // direct sum over multiplicities agrees
        for n in 1..=8 {
            assert_eq!(
                moment4_via_pairings(n).unwrap().coefficient,
                moment4_exact(n).unwrap().coefficient
            );
        }
    }

    #[test]
    fn pairing_route_reproduces_moment2() {
        for n in 1..=8 {
            assert_eq!(
                moment2_via_pairings(n).unwrap().coefficient,
                moment2_exact(n).unwrap().coefficient
            );
        }
    }

    #[test]
    fn moment6_first_values() {
        assert_eq!(
            moment6_exact(1).unwrap().scaled,
            parse_rational("6").unwrap()
        );
        assert_eq!(
            moment6_exact(2).unwrap().scaled,
            parse_rational("18").unwrap()
        );
        assert_eq!(
            moment6_exact(3).unwrap().scaled,
            parse_rational("122/3").unwrap()
        );
    }

    #[test]
    fn moment6_invariants() {
        // scaled * (N!)^3 = coefficient, positivity, strict growth
        let mut previous = ExactRational::zero();
        for n in 1..=8u32 {
            let r = moment6_exact(n).unwrap();
            assert_eq!(
                &r.scaled * Ratio::from_integer(factorial(n).pow(3)),
                r.coefficient
            );
            assert!(r.scaled > previous, "N={n} not increasing");
            previous = r.scaled;
        }
    }

    #[test]
    fn moment6_matches_unreduced_form_small_n() {
        for n in 1..=6u32 {
            let reduced = moment6_exact(n).unwrap().coefficient;
            let unreduced = moment6_unreduced(n);
            assert_eq!(reduced, Ratio::from_integer(unreduced), "N={n}");
        }
    }

    /// The 12-sum form with all nine pair-counter constraints, written
    /// independently of the reduced implementation.
    fn moment6_unreduced(dim: u32) -> BigInt {
        let comps = compositions_colex(dim, 6);
        let pair_counters = |c: &[u32; 6]| -> [u32; 9] {
            [
                c[0] + c[2],
                c[1] + c[4],
                c[3] + c[5],
                c[1] + c[5],
                c[0] + c[3],
                c[2] + c[4],
                c[3] + c[4],
                c[2] + c[5],
                c[0] + c[1],
            ]
        };
        let nf2 = factorial(dim).pow(2);
        let mut total = BigInt::zero();
        for rows in &comps {
            let pr = pair_counters(rows);
            for cols in &comps {
                if pair_counters(cols) != pr {
                    continue;
                }
                let mut term = nf2.clone();
                for a in 0..6 {
                    term /= factorial(rows[a]) * factorial(cols[a]);
                }
                for p in pr {
                    term *= factorial(p);
                }
                total += term;
            }
        }
        total
    }

    #[test]
    fn monte_carlo_concordance() {
        // (order, dim, draws, exact coefficient at 2 sigma^2 = 1)
        let cases: [(u32, u32, usize, f64); 2] = [(1, 3, 20_000, 6.0), (2, 2, 20_000, 12.0)];
        for (order, dim, draws, exact) in cases {
            let (mean, stderr) = moment_monte_carlo(order, dim, 0.5, draws, 2024).unwrap();
            assert!(
                (mean - exact).abs() <= 3.0 * stderr,
                "order {order} dim {dim}: {mean} +- {stderr} vs {exact}"
            );
        }
    }

    #[test]
    fn fit_recovers_synthetic_exponential() {
        let points: Vec<(u32, ExactRational)> = (1..=20)
            .map(|n| {
                let v = (0.5 * n as f64).exp();
                (n, ExactRational::from_float(v).unwrap())
            })
            .collect();
        let (lambda, nu) = fit_scaling(&points).unwrap();
        assert!((lambda - 0.5).abs() < 1e-6, "lambda {lambda}");
        assert!(nu.abs() < 1e-3, "nu {nu}");
    }

    #[test]
    fn fit_is_invariant_under_constant_scaling() {
        let base: Vec<(u32, ExactRational)> = SCALED_THIRD_MOMENTS
            .iter()
            .map(|(n, s)| (*n, parse_rational(s).unwrap()))
            .collect();
        let scaled: Vec<(u32, ExactRational)> = base
            .iter()
            .map(|(n, v)| (*n, v * Ratio::from_integer(BigInt::from(7))))
            .collect();
        let (l1, n1) = fit_scaling(&base).unwrap();
        let (l2, n2) = fit_scaling(&scaled).unwrap();
        assert!((l1 - l2).abs() < 1e-10);
        assert!((n1 - n2).abs() < 1e-9);
    }

    #[test]
    fn fit_requires_enough_points() {
        let few: Vec<(u32, ExactRational)> = (1..=5)
            .map(|n| (n, ExactRational::from_integer(BigInt::from(n))))
            .collect();
        assert!(matches!(
            fit_scaling(&few),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("122/3").unwrap(),
            Ratio::new(BigInt::from(122), BigInt::from(3))
        );
        assert_eq!(
            parse_rational("6").unwrap(),
            Ratio::from_integer(BigInt::from(6))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
