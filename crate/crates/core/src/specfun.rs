//! Polynomial special functions and hypergeometric summation identities.
//!
//! Everything downstream reduces to terminating hypergeometric series. A
//! Gauss hypergeometric function with a non-positive integer upper parameter
//! is a finite polynomial,
//!
//! ```text
//! 2F1(-m, b; c; z) = Σ_{n=0}^{m} (-m)_n (b)_n / (c)_n · z^n / n!,
//! ```
//!
//! and the Laguerre and Legendre polynomials are special cases of it. The
//! damped-state closed forms multiply such polynomials by prefactors that
//! vanish exactly where the polynomial argument diverges, so this module also
//! provides [`scaled2f1_poly`], the prefactor-absorbed form
//! `u^m · 2F1(-m, -j; 1; c/u)`, which is a plain bivariate polynomial and
//! finite everywhere, including `u = 0`.
//!
//! The generating-function identities ([`gen_sum_gn`], [`laguerre_gen_sum`],
//! [`squared2f1_sum`], [`humbert_check`]) are the summation formulas used to
//! collapse infinite series over the photon-number index into single closed
//! forms. Each has a brute-force partial-sum oracle in the test suite and in
//! [`crate::verify`].
//!
//! All evaluations are double precision. Terminating series are summed with
//! compensated (Neumaier) accumulation and term-ratio recurrences, never via
//! separate factorials.

use thiserror::Error;

/// Errors from special-function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    /// A lower-parameter Pochhammer factor vanishes before the series
    /// terminates, e.g. `2F1(-3, b; -1; z)`.
    #[error("lower parameter c = {c} hits a pole at term {term} before the series terminates")]
    ParameterPole { c: f64, term: u32 },
    /// Arguments outside the convergence region of a summation identity.
    #[error("arguments outside the convergence region: {0}")]
    OutsideConvergence(String),
    /// An infinite series failed to reach the requested tolerance.
    #[error("series did not converge within {max_terms} terms")]
    NonConvergent { max_terms: usize },
}

/// Compensated accumulator (Neumaier variant of Kahan summation).
///
/// Keeps the running error of long sums near one ulp of the result, which is
/// what lets the 1e-12-level invariants in this crate hold.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.
///
/// Overflows to infinity for huge `n`; no error is raised.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        acc *= a + k as f64;
    }
    acc
}

/// Laguerre polynomial L_l(x) by the three-term recurrence
///
/// ```text
/// (n+1) L_{n+1}(x) = (2n+1-x) L_n(x) - n L_{n-1}(x),
/// ```
///
/// which avoids the catastrophic cancellation of the factorial series for
/// degrees above ~20. L_l(x) > 0 for every x <= 0.
pub fn laguerre(l: u32, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    for n in 1..l {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - x) * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Terminating Gauss hypergeometric polynomial 2F1(-m, b; c; z).
///
/// Exact finite sum over `m + 1` terms with the term recurrence
/// `t_{n+1} = t_n (n - m)(b + n) z / ((c + n)(n + 1))` and compensated
/// accumulation.
///
/// Fails if `c` hits a non-positive integer while terms are still nonzero.
pub fn gauss2f1_poly(m: u32, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    let mut acc = CompensatedSum::new();
    let mut term = 1.0f64;
    acc.add(term);
    for n in 0..m {
        if term == 0.0 {
            // An upper parameter terminated the series early; later poles in
            // c are unreachable.
            break;
        }
        let nf = n as f64;
        let denom = c + nf;
        if denom == 0.0 {
            return Err(SpecFunError::ParameterPole { c, term: n });
        }
        term *= (nf - m as f64) * (b + nf) / (denom * (nf + 1.0)) * z;
        acc.add(term);
    }
    Ok(acc.value())
}

/// Prefactor-absorbed hypergeometric polynomial
///
/// ```text
/// u^m · 2F1(-m, -j; 1; c/u) = Σ_{k=0}^{min(m,j)} C(m,k) C(j,k) c^k u^{m-k}.
/// ```
///
/// The right-hand side is a polynomial in `u` and `c`, finite for every
/// argument including `u = 0`. Every damped closed form in [`crate::dynamics`]
/// multiplies a vanishing power of `u` against a 2F1 whose argument diverges
/// as `t -> 0`; this absorbed form removes that 0·∞ indeterminacy exactly.
///
/// Evaluated by Horner's scheme in `u` with the coefficient recurrence
/// `coef_{k+1} = coef_k (m-k)(j-k) c / (k+1)^2`. For non-negative `u` and `c`
/// all terms are positive and the evaluation is backward stable.
pub fn scaled2f1_poly(m: u32, j: u32, u: f64, c: f64) -> f64 {
    let kmax = m.min(j);
    // Horner over Q(u) = Σ_k coef_k u^{kmax-k}, then restore u^{m-kmax}.
    let mut coef = 1.0f64;
    let mut acc = coef;
    for k in 0..kmax {
        coef *= ((m - k) as f64) * ((j - k) as f64) / (((k + 1) as f64) * ((k + 1) as f64)) * c;
        acc = acc * u + coef;
    }
    // Multiply the leftover power stepwise so a tiny final value denormalizes
    // gracefully instead of the power underflowing first.
    for _ in 0..(m - kmax) {
        acc *= u;
    }
    acc
}

/// Legendre polynomial P_m(z) by the standard recurrence
/// `(n+1) P_{n+1} = (2n+1) z P_n - n P_{n-1}`.
pub fn legendre(m: u32, z: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = z;
    for n in 1..m {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * z * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form of the binomially weighted hypergeometric generating series
///
/// ```text
/// G_n(u, z) = Σ_{l>=n} C(l,n) u^l 2F1(-l, a; 1; z)
///           = u^n (1-u)^{a-n-1} (1-u+uz)^{-a} 2F1(-n, a; 1; z/(1-u+uz)).
/// ```
///
/// Valid inside `|u| < 1` and `|u(1-z)| < 1`; anything outside is a domain
/// error rather than a silent extrapolation.
pub fn gen_sum_gn(n: u32, a: f64, u: f64, z: f64) -> Result<f64, SpecFunError> {
    if u.abs() >= 1.0 || (u * (1.0 - z)).abs() >= 1.0 {
        return Err(SpecFunError::OutsideConvergence(format!(
            "|u| = {} and |u(1-z)| = {} must both be < 1",
            u.abs(),
            (u * (1.0 - z)).abs()
        )));
    }
    let base = 1.0 - u + u * z; // = 1 - u(1-z) > 0 inside the region
    let f = gauss2f1_poly(n, a, 1.0, z / base)?;
    Ok(u.powi(n as i32) * (1.0 - u).powf(a - n as f64 - 1.0) * base.powf(-a) * f)
}

/// Closed form of the binomially weighted Laguerre generating series
///
/// ```text
/// Σ_{l>=n} C(l,n) u^l L_l(z) = u^n / (1-u)^{n+1} · exp(-uz/(1-u)) · L_n(z/(1-u)),
/// ```
///
/// valid for `|u| < 1`.
pub fn laguerre_gen_sum(n: u32, u: f64, z: f64) -> Result<f64, SpecFunError> {
    if u.abs() >= 1.0 {
        return Err(SpecFunError::OutsideConvergence(format!(
            "|u| = {} must be < 1",
            u.abs()
        )));
    }
    let om = 1.0 - u;
    Ok(u.powi(n as i32) / om.powi(n as i32 + 1) * (-u * z / om).exp() * laguerre(n, z / om))
}

const SQUARED_2F1_MAX_TERMS: usize = 20_000;

/// Closed form of the power series with squared hypergeometric coefficients
///
/// ```text
/// Σ_n v^n [2F1(-n, b; 1; z)]^2
///   = (1-v)^{2b-1} (1-v+vz)^{-2b} 2F1[b, b; 1; v z^2 / (1-v+vz)^2],
/// ```
///
/// for `|v| < 1` and `1-v+vz != 0`. When `b` is a non-positive integer the
/// inner 2F1 terminates and is evaluated exactly; otherwise it is summed as a
/// series, which must satisfy `|argument| < 1` with a geometric tail bound
/// below 1e-14.
pub fn squared2f1_sum(b: f64, v: f64, z: f64) -> Result<f64, SpecFunError> {
    if v.abs() >= 1.0 {
        return Err(SpecFunError::OutsideConvergence(format!(
            "|v| = {} must be < 1",
            v.abs()
        )));
    }
    let base = 1.0 - v + v * z;
    if base == 0.0 {
        return Err(SpecFunError::OutsideConvergence(
            "1 - v + vz vanishes".to_string(),
        ));
    }
    let w = v * z * z / (base * base);
    let b_int = b.fract() == 0.0;
    let f = if b_int && b <= 0.0 {
        gauss2f1_poly((-b) as u32, b, 1.0, w)?
    } else {
        if w.abs() >= 1.0 {
            return Err(SpecFunError::OutsideConvergence(format!(
                "inner 2F1 argument |{w}| >= 1 with non-terminating b = {b}"
            )));
        }
        hyp2f1_series_bb1(b, w)?
    };
    let pre_om = (1.0 - v).powf(2.0 * b - 1.0);
    // (1-v+vz)^{-2b}: powf needs a positive base unless the exponent is an
    // integer, in which case powi handles either sign.
    let pre_base = if b_int {
        base.powi(-2 * b as i32)
    } else if base > 0.0 {
        base.powf(-2.0 * b)
    } else {
        return Err(SpecFunError::OutsideConvergence(format!(
            "(1-v+vz) = {base} < 0 with non-integer b = {b}"
        )));
    };
    Ok(pre_om * pre_base * f)
}

/// Non-terminating 2F1(b, b; 1; w) by direct series, |w| < 1.
fn hyp2f1_series_bb1(b: f64, w: f64) -> Result<f64, SpecFunError> {
    let mut acc = CompensatedSum::new();
    let mut term = 1.0f64;
    acc.add(term);
    for k in 0..SQUARED_2F1_MAX_TERMS {
        let kf = k as f64;
        term *= (b + kf) * (b + kf) / ((1.0 + kf) * (1.0 + kf)) * w;
        acc.add(term);
        // Geometric tail bound once the term ratio has settled below |w| + margin.
        let tail = term.abs() * w.abs() / (1.0 - w.abs());
        if tail < 1e-14 * acc.value().abs().max(1e-300) && k as f64 > b.abs() {
            return Ok(acc.value());
        }
    }
    Err(SpecFunError::NonConvergent {
        max_terms: SQUARED_2F1_MAX_TERMS,
    })
}

/// Kummer confluent hypergeometric series 1F1(a; c; z).
///
/// Terminates when `a` is a non-positive integer; otherwise converges for
/// every finite `z`. Panics if `c` is a non-positive integer reached before
/// termination (callers guard this).
pub fn kummer_1f1(a: f64, c: f64, z: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut term = 1.0f64;
    acc.add(term);
    for n in 0..100_000u32 {
        if term == 0.0 {
            break;
        }
        let nf = n as f64;
        let denom = c + nf;
        assert!(
            denom != 0.0,
            "1F1 lower parameter c = {c} hits a pole at term {n}"
        );
        term *= (a + nf) / (denom * (nf + 1.0)) * z;
        acc.add(term);
        if term.abs() < 1e-17 * acc.value().abs().max(1e-300) && nf > z.abs() {
            break;
        }
    }
    acc.value()
}

/// Both sides of Humbert's summation formula
///
/// ```text
/// exp(-xz) 1F1(a; c; z) = Σ_p (-xz)^p / p! · 2F1(-p, a; c; 1/x),
/// ```
///
/// with the right side truncated at `terms` partial sums. Returns
/// `(lhs, rhs)`; the caller owns the tolerance, so non-convergence simply
/// shows up as disagreement.
pub fn humbert_check(a: f64, c: f64, x: f64, z: f64, terms: u32) -> (f64, f64) {
    let lhs = (-x * z).exp() * kummer_1f1(a, c, z);
    let mut acc = CompensatedSum::new();
    let mut weight = 1.0f64; // (-xz)^p / p!
    for p in 0..=terms {
        let f = gauss2f1_poly(p, a, c, 1.0 / x)
            .expect("humbert_check requires c away from non-positive integers");
        acc.add(weight * f);
        weight *= -x * z / (p as f64 + 1.0);
    }
    (lhs, acc.value())
}

/// Dense polynomial coefficients, constant term first.
///
/// Holds expanded forms of the terminating hypergeometric family for use as
/// independent slow-path oracles: the recurrence evaluators above are checked
/// against explicit coefficient sums.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coefficients: Vec<f64>,
}

impl PolyCoeffs {
    /// Wrap explicit coefficients; all must be finite and at least one given.
    pub fn new(coefficients: Vec<f64>) -> Self {
        assert!(!coefficients.is_empty(), "a polynomial has >= 1 coefficient");
        assert!(
            coefficients.iter().all(|c| c.is_finite()),
            "polynomial coefficients must be finite"
        );
        Self { coefficients }
    }

    /// Coefficients of L_l(x): c_k = C(l,k) (-1)^k / k!.
    pub fn laguerre(l: u32) -> Self {
        let mut coefs = Vec::with_capacity(l as usize + 1);
        let mut c = 1.0f64;
        coefs.push(c);
        for k in 0..l {
            let kf = k as f64;
            c *= -((l - k) as f64) / ((kf + 1.0) * (kf + 1.0));
            coefs.push(c);
        }
        Self::new(coefs)
    }

    /// Coefficients of the terminating 2F1(-m, b; c; z) in powers of z.
    ///
    /// Panics on a lower-parameter pole; intended for oracle use where the
    /// parameters are already validated.
    pub fn gauss2f1(m: u32, b: f64, c: f64) -> Self {
        let mut coefs = Vec::with_capacity(m as usize + 1);
        let mut t = 1.0f64;
        coefs.push(t);
        for n in 0..m {
            let nf = n as f64;
            let denom = c + nf;
            assert!(denom != 0.0, "2F1 lower parameter pole at term {n}");
            t *= (nf - m as f64) * (b + nf) / (denom * (nf + 1.0));
            coefs.push(t);
        }
        Self::new(coefs)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Evaluate by Horner's scheme.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn pochhammer_base_cases() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0); // 2*3*4
        assert_eq!(pochhammer(-2.0, 3), 0.0); // (-2)(-1)(0)
        assert_eq!(pochhammer(0.5, 2), 0.75);
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 7.3), 1.0);
        assert_abs_diff_eq!(laguerre(1, 2.0), -1.0, epsilon = 1e-15);
        // L_2(x) = 1 - 2x + x^2/2
        assert_relative_eq!(laguerre(2, 0.7), 1.0 - 1.4 + 0.49 / 2.0, max_relative = 1e-14);
    }

    /// Naive series in exact rational arithmetic: the grid points are
    /// quarter-integers, so every intermediate is an exact fraction.
    fn laguerre_exact(l: u32, x_num: i64) -> f64 {
        use num::{BigRational, FromPrimitive, ToPrimitive};
        let x = BigRational::from_i64(x_num).unwrap() / BigRational::from_i64(4).unwrap();
        let mut total = BigRational::from_i64(0).unwrap();
        let mut term = BigRational::from_i64(1).unwrap(); // C(l,k) (-x)^k / k!
        for k in 0..=l {
            total += term.clone();
            if k < l {
                let ratio = BigRational::from_i64(-((l - k) as i64)).unwrap()
                    / BigRational::from_i64(((k + 1) * (k + 1)) as i64).unwrap();
                term *= ratio * x.clone();
            }
        }
        total.to_f64().unwrap()
    }

    #[test]
    fn laguerre_matches_naive_series_on_grid() {
        // Relative error <= 1e-9 against the naive series for l <= 30 on
        // x in [-10, 10]; absolute 1e-12 near the polynomial zeros. The
        // series is summed in exact rational arithmetic so the comparison is
        // against true values.
        for l in 0..=30u32 {
            for x4 in -40..=40i64 {
                let x = x4 as f64 / 4.0;
                let fast = laguerre(l, x);
                let slow = laguerre_exact(l, x4);
                let diff = (fast - slow).abs();
                assert!(
                    diff <= (1e-9 * slow.abs()).max(1e-12),
                    "l={l} x={x}: recurrence {fast} vs series {slow}"
                );
            }
        }
    }

    #[test]
    fn laguerre_positive_for_nonpositive_argument() {
        for l in 0..=40u32 {
            for &x in &[-10.0, -3.0, -0.5, 0.0] {
                assert!(laguerre(l, x) >= 1.0, "L_{l}({x}) = {}", laguerre(l, x));
            }
        }
    }

    #[test]
    fn gauss2f1_poly_hand_values() {
        assert_eq!(gauss2f1_poly(0, 5.0, 1.0, 0.7).unwrap(), 1.0);
        // m=1, b=-1, c=1: 1 + z
        let z0 = 0.37;
        assert_relative_eq!(
            gauss2f1_poly(1, -1.0, 1.0, z0).unwrap(),
            1.0 + z0,
            max_relative = 1e-15
        );
        // m=2, b=-2, c=1, z=1: brute term sum 1 + 4 + 1 = 6
        assert_abs_diff_eq!(gauss2f1_poly(2, -2.0, 1.0, 1.0).unwrap(), 6.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss2f1_poly_argument_zero_is_one() {
        for m in 0..20u32 {
            for &b in &[-3.0, 0.0, 1.7, 10.0] {
                assert_eq!(gauss2f1_poly(m, b, 1.0, 0.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn gauss2f1_poly_matches_pochhammer_sum() {
        // Independent brute force straight from the series definition.
        for &(m, b, c, z) in &[(5u32, 2.3f64, 1.0f64, 0.4f64), (8, -1.5, 2.0, -0.9), (12, 0.7, 1.0, 1.3)] {
            let mut brute = 0.0;
            let mut fact = 1.0;
            for n in 0..=m {
                if n > 0 {
                    fact *= n as f64;
                }
                brute += pochhammer(-(m as f64), n) * pochhammer(b, n)
                    / (pochhammer(c, n) * fact)
                    * z.powi(n as i32);
            }
            assert_relative_eq!(
                gauss2f1_poly(m, b, c, z).unwrap(),
                brute,
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn gauss2f1_poly_detects_parameter_pole() {
        let err = gauss2f1_poly(3, 2.0, -1.0, 0.5).unwrap_err();
        assert!(matches!(err, SpecFunError::ParameterPole { .. }));
        // But a pole past early termination by b is unreachable: b = -1 kills
        // the series after two terms, c = -3 would pole at term 3.
        assert!(gauss2f1_poly(5, -1.0, -3.0, 0.5).is_ok());
    }

    #[test]
    fn scaled2f1_poly_trivial_cases() {
        assert_eq!(scaled2f1_poly(0, 5, 0.0, 3.0), 1.0);
        let (u0, c0) = (0.83, 2.1);
        assert_relative_eq!(scaled2f1_poly(2, 0, u0, c0), u0 * u0, max_relative = 1e-15);
        // m=2, j=2: compare against u^2 * 2F1(-2,-2;1;c/u)
        let f = gauss2f1_poly(2, -2.0, 1.0, 0.25 / 0.5).unwrap();
        assert_relative_eq!(scaled2f1_poly(2, 2, 0.5, 0.25), 0.25 * f, max_relative = 1e-13);
    }

    #[test]
    fn scaled2f1_poly_finite_at_zero_scale() {
        // u = 0 picks out the single surviving term C(j,m) c^m (or 0 if m > j).
        assert_eq!(scaled2f1_poly(2, 5, 0.0, 3.0), 10.0 * 9.0);
        assert_eq!(scaled2f1_poly(5, 2, 0.0, 3.0), 0.0);
    }

    proptest! {
        #[test]
        fn scaled2f1_consistent_with_gauss2f1(
            m in 0u32..40,
            j in 0u32..40,
            u in 1e-3f64..2.0,
            c in 1e-3f64..2.0,
        ) {
            let direct = u.powi(m as i32) * gauss2f1_poly(m, -(j as f64), 1.0, c / u).unwrap();
            let absorbed = scaled2f1_poly(m, j, u, c);
            prop_assert!(
                (direct - absorbed).abs() <= 1e-11 * direct.abs().max(1e-30),
                "m={} j={} u={} c={}: {} vs {}", m, j, u, c, direct, absorbed
            );
        }

        #[test]
        fn laguerre_nonnegative_argument_positivity(l in 0u32..60, x in -50.0f64..0.0) {
            prop_assert!(laguerre(l, x) >= 1.0);
        }
    }

    #[test]
    fn legendre_low_orders_and_a2_identity() {
        assert_eq!(legendre(0, 0.4), 1.0);
        assert_eq!(legendre(1, 0.3), 0.3);
        // P_2(z) = (3z^2 - 1)/2
        assert_relative_eq!(legendre(2, 0.9), (3.0 * 0.81 - 1.0) / 2.0, max_relative = 1e-14);
        // P_M(z) = ((z+1)/2)^M 2F1(-M, -M; 1; (z-1)/(z+1))
        for m in 0..=15u32 {
            let mut z = -0.95;
            while z <= 10.0 {
                let lhs = legendre(m, z);
                let rhs = ((z + 1.0) / 2.0).powi(m as i32)
                    * gauss2f1_poly(m, -(m as f64), 1.0, (z - 1.0) / (z + 1.0)).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-6),
                    "m={m} z={z}: {lhs} vs {rhs}"
                );
                z += 0.5;
            }
        }
    }

    /// Brute-force partial sum of G_n(u,z) = Σ_{l>=n} C(l,n) u^l 2F1(-l,a;1;z).
    fn gn_partial_sum(n: u32, a: f64, u: f64, z: f64, terms: u32) -> f64 {
        let mut acc = CompensatedSum::new();
        let mut binom = 1.0f64; // C(l, n) starting at l = n
        for l in n..n + terms {
            let f = gauss2f1_poly(l, a, 1.0, z).unwrap();
            acc.add(binom * u.powi(l as i32) * f);
            binom *= (l + 1) as f64 / ((l + 1 - n) as f64);
        }
        acc.value()
    }

    #[test]
    fn gen_sum_gn_geometric_cases() {
        // n=0, a=1, z=0: Σ u^l = 1/(1-u) = 2 at u = 0.5
        assert_relative_eq!(gen_sum_gn(0, 1.0, 0.5, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        // n=1, a=0: Σ l u^l = u/(1-u)^2 = 2 at u = 0.5
        assert_relative_eq!(gen_sum_gn(1, 0.0, 0.5, 0.77).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gen_sum_gn_matches_partial_sums() {
        for &(n, a, u, z) in &[
            (2u32, -3.0, 0.3, 0.4),
            (0, 1.5, 0.4, 0.2),
            (3, 0.8, 0.25, -0.5),
            (5, -1.0, 0.5, 0.9),
        ] {
            let closed = gen_sum_gn(n, a, u, z).unwrap();
            let brute = gn_partial_sum(n, a, u, z, 300);
            assert_relative_eq!(closed, brute, max_relative = 1e-10);
        }
    }

    #[test]
    fn gen_sum_gn_rejects_outside_convergence() {
        assert!(matches!(
            gen_sum_gn(1, 0.5, 1.2, 0.0),
            Err(SpecFunError::OutsideConvergence(_))
        ));
        // |u| < 1 but |u(1-z)| >= 1
        assert!(matches!(
            gen_sum_gn(1, 0.5, 0.5, -1.5),
            Err(SpecFunError::OutsideConvergence(_))
        ));
    }

    #[test]
    fn laguerre_gen_sum_hand_values_and_series() {
        assert_relative_eq!(laguerre_gen_sum(0, 0.5, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            laguerre_gen_sum(0, 0.5, 1.0).unwrap(),
            2.0 * (-1.0f64).exp(),
            max_relative = 1e-14
        );
        // n=3: Σ_{l>=3} C(l,3) u^l L_l(z)
        let (n, u, z) = (3u32, 0.4f64, 2.5f64);
        let mut acc = CompensatedSum::new();
        let mut binom = 1.0f64;
        for l in n..n + 300 {
            acc.add(binom * u.powi(l as i32) * laguerre(l, z));
            binom *= (l + 1) as f64 / ((l + 1 - n) as f64);
        }
        assert_relative_eq!(laguerre_gen_sum(n, u, z).unwrap(), acc.value(), max_relative = 1e-10);
        assert!(laguerre_gen_sum(0, 1.0, 0.0).is_err());
    }

    #[test]
    fn squared2f1_sum_cases() {
        // b=0: every 2F1 factor is 1, closed form is 1/(1-v).
        assert_relative_eq!(squared2f1_sum(0.0, 0.5, 0.9).unwrap(), 2.0, max_relative = 1e-14);
        for &(b, v, z) in &[(-1.0, 0.3, 0.6), (-2.0, 0.25, 1.0), (0.7, 0.2, 0.5)] {
            let closed = squared2f1_sum(b, v, z).unwrap();
            let mut acc = CompensatedSum::new();
            for n in 0..300u32 {
                let f = gauss2f1_poly(n, b, 1.0, z).unwrap();
                acc.add(v.powi(n as i32) * f * f);
            }
            assert_relative_eq!(closed, acc.value(), max_relative = 1e-10);
        }
        assert!(squared2f1_sum(-1.0, 1.1, 0.5).is_err());
    }

    #[test]
    fn humbert_check_agrees() {
        // a=0: both sides are exp(-xz).
        let (lhs, rhs) = humbert_check(0.0, 1.0, 2.0, 1.0, 40);
        assert_relative_eq!(lhs, (-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        let (lhs, rhs) = humbert_check(-3.0, 1.0, 1.5, 0.8, 60);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        // x z = 8 here: the alternating sum cancels down from terms of size
        // ~(xz)^p/p!, which costs a digit relative to the point above.
        let (lhs, rhs) = humbert_check(-1.0, 1.0, 4.0, 2.0, 60);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
    }

    #[test]
    fn poly_coeffs_laguerre_expansion() {
        // L_2(x) = 1 - 2x + x^2/2
        let p = PolyCoeffs::laguerre(2);
        assert_eq!(p.degree(), 2);
        assert_abs_diff_eq!(p.coefficients()[0], 1.0);
        assert_abs_diff_eq!(p.coefficients()[1], -2.0);
        assert_abs_diff_eq!(p.coefficients()[2], 0.5);
    }
}
