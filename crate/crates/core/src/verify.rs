//! Self-verification suites: every closed form against its brute-force oracle.
//!
//! Each check evaluates an independent slow path — partial sums of the
//! defining series, the RK4 integrator, explicit vector sums, adaptive
//! quadrature — and reports the worst error observed against the fast
//! analytic path, together with the tolerance it is held to. Random parameter
//! draws use a fixed-seed generator so runs are reproducible bit for bit.
//!
//! `Fast` keeps the runtime in seconds; `Full` additionally runs the
//! three-way consistency triangle (closed form vs. hypergeometric series vs.
//! RK4 oracle) over the complete parameter grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    damped_pats, damped_state_general, damped_state_zero_temp, gaussian_purity_damped,
    mean_photon_damped, ode_dimension, ode_oracle, overlap_damped_pats, purity_damped_pats,
    purity_damped_pats_legendre, threshold_times, BathParams,
};
use crate::measures;
use crate::quasiprob::{
    default_r_max, normalization_check, quasiprob_damped, quasiprob_pats, radial_profile,
    OrderParam, ProfileSource, DEFAULT_RADIAL_POINTS,
};
use crate::specfun::{
    gauss2f1_poly, gen_sum_gn, humbert_check, laguerre, laguerre_gen_sum, legendre,
    scaled2f1_poly, squared2f1_sum, CompensatedSum, PolyCoeffs,
};
use crate::states::{FockDiagonalState, PatsParams, ThermalParams};

const SEED: u64 = 0x0b50_9d1c;
const IDENTITY_POINTS: usize = 50;

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    /// Identity suites, closed-form cross-checks, and a reduced consistency
    /// triangle.
    Fast,
    /// Everything, including the full-grid consistency triangle.
    Full,
}

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst error observed across the check's sample points.
    pub max_error: f64,
    /// The bound `max_error` is held to.
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn from_error(name: &str, max_error: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            detail,
        }
    }
}

/// Run the suite at the given level. Deterministic; safe to parallelize
/// internally (grid points are independent).
pub fn run_checks(level: VerifyLevel) -> Vec<CheckResult> {
    let mut results = vec![
        check_laguerre_series(),
        check_scaled2f1_consistency(),
        check_identity_legendre(),
        check_identity_gen_sum(),
        check_identity_laguerre_sum(),
        check_identity_humbert(),
        check_identity_squared_sum(),
        check_states_closed_forms(),
        check_measures_hand_values(),
        check_threshold_ordering(),
        check_zero_temperature_limit(),
        check_consistency_triangle(level),
        check_functionals_vs_brute_force(level),
        check_quasiprob_closed_form(),
        check_quasiprob_positivity_and_thresholds(),
        check_normalization(),
        check_measure_monotonicity(level),
    ];
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn check_laguerre_series() -> CheckResult {
    let mut worst = 0.0f64;
    for l in 0..=30u32 {
        let poly = PolyCoeffs::laguerre(l);
        let mut x = -10.0;
        while x <= 10.0 {
            let fast = laguerre(l, x);
            let slow = poly.eval(x);
            // The alternating series carries round-off of order
            // eps * sum(|terms|) = eps * L_l(-|x|); fold that into the scale
            // so the check measures the recurrence, not the oracle's noise.
            let cond = laguerre(l, -x.abs());
            let err = (fast - slow).abs() / (slow.abs() + 1e-3 * cond).max(1e-3);
            worst = worst.max(err);
            x += 0.125;
        }
    }
    CheckResult::from_error(
        "specfun.laguerre_vs_naive_series",
        worst,
        1e-9,
        "recurrence vs explicit coefficient sum, l <= 30, x in [-10, 10]".into(),
    )
}

fn check_scaled2f1_consistency() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(0..=60u32);
        let j = rng.gen_range(0..=60u32);
        let u = rng.gen_range(1e-3..2.0f64);
        let c = rng.gen_range(1e-3..2.0f64);
        let direct = u.powi(m as i32)
            * gauss2f1_poly(m, -(j as f64), 1.0, c / u).expect("c = 1 has no pole");
        worst = worst.max(rel_err(direct, scaled2f1_poly(m, j, u, c)));
    }
    CheckResult::from_error(
        "specfun.scaled2f1_vs_direct",
        worst,
        1e-11,
        "absorbed polynomial vs u^m 2F1(-m,-j;1;c/u) on 200 random points".into(),
    )
}

fn check_identity_legendre() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa2);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_POINTS {
        // Relative error is meaningless at the polynomial's zeros; draw
        // points in generic position.
        let (m, z, lhs) = loop {
            let m = rng.gen_range(0..=15u32);
            let z = rng.gen_range(-0.95..10.0f64);
            let lhs = legendre(m, z);
            if lhs.abs() >= 1e-3 {
                break (m, z, lhs);
            }
        };
        let rhs = ((z + 1.0) / 2.0).powi(m as i32)
            * gauss2f1_poly(m, -(m as f64), 1.0, (z - 1.0) / (z + 1.0)).expect("no pole at c = 1");
        worst = worst.max((lhs - rhs).abs() / lhs.abs());
    }
    CheckResult::from_error(
        "identity.legendre_hypergeometric",
        worst,
        1e-10,
        format!("{IDENTITY_POINTS} random (M, z) points"),
    )
}

fn check_identity_gen_sum() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa5);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_POINTS {
        // Keep |u(1-z)| well inside the disc (controls both the tail and the
        // oracle's term growth) and avoid zeros of the closed form, where
        // relative error loses meaning.
        let (n, a, u, z, closed) = loop {
            let n = rng.gen_range(0..=6u32);
            let a = rng.gen_range(-4.0..3.0f64);
            let u = rng.gen_range(0.05..0.5f64);
            let z = rng.gen_range(-1.0..1.5f64);
            if (u * (1.0 - z)).abs() >= 0.7 {
                continue;
            }
            let closed = gen_sum_gn(n, a, u, z).expect("inside the convergence region");
            let prefactor = u.powi(n as i32) * (1.0 - u).powf(a - n as f64 - 1.0);
            if closed.abs() >= 1e-2 * prefactor.abs() {
                break (n, a, u, z, closed);
            }
        };
        let mut partial = CompensatedSum::new();
        let mut binom = 1.0f64;
        for l in n..n + 400 {
            let f = gauss2f1_poly(l, a, 1.0, z).expect("no pole at c = 1");
            partial.add(binom * u.powi(l as i32) * f);
            binom *= (l + 1) as f64 / ((l + 1 - n) as f64);
        }
        worst = worst.max(rel_err(closed, partial.value()));
    }
    CheckResult::from_error(
        "identity.binomial_hypergeometric_sum",
        worst,
        1e-10,
        format!("{IDENTITY_POINTS} random points vs 400-term partial sums"),
    )
}

fn check_identity_laguerre_sum() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x1a5);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_POINTS {
        let (n, u, z, closed) = loop {
            let n = rng.gen_range(0..=8u32);
            let u = rng.gen_range(0.05..0.6f64);
            let z = rng.gen_range(0.0..4.0f64);
            let closed = laguerre_gen_sum(n, u, z).expect("|u| < 1");
            // Skip draws near a zero of L_n(z/(1-u)).
            if laguerre(n, z / (1.0 - u)).abs() >= 1e-2 {
                break (n, u, z, closed);
            }
        };
        let mut partial = CompensatedSum::new();
        let mut binom = 1.0f64;
        for l in n..n + 400 {
            partial.add(binom * u.powi(l as i32) * laguerre(l, z));
            binom *= (l + 1) as f64 / ((l + 1 - n) as f64);
        }
        worst = worst.max(rel_err(closed, partial.value()));
    }
    CheckResult::from_error(
        "identity.binomial_laguerre_sum",
        worst,
        1e-10,
        format!("{IDENTITY_POINTS} random points vs 400-term partial sums"),
    )
}

fn check_identity_humbert() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa55);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_POINTS {
        // The right side cancels down from terms of size ~(xz)^p/p!, so keep
        // x z modest and stay clear of zeros of 1F1.
        let (lhs, rhs) = loop {
            let a = rng.gen_range(-4.0..2.0f64);
            let c = rng.gen_range(0.5..3.0f64);
            let x = rng.gen_range(1.3..4.0f64);
            let z = rng.gen_range(0.1..1.0f64);
            if crate::specfun::kummer_1f1(a, c, z).abs() < 1e-2 {
                continue;
            }
            break humbert_check(a, c, x, z, 120);
        };
        worst = worst.max(rel_err(lhs, rhs));
    }
    CheckResult::from_error(
        "identity.humbert_summation",
        worst,
        1e-10,
        format!("{IDENTITY_POINTS} random points, 120 partial-sum terms"),
    )
}

fn check_identity_squared_sum() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa77);
    let mut worst = 0.0f64;
    for i in 0..IDENTITY_POINTS {
        // Alternate exact negative-integer b (the terminating physical case)
        // with generic real b.
        let b = if i % 2 == 0 {
            -(rng.gen_range(0..=5u32) as f64)
        } else {
            rng.gen_range(-2.0..1.5f64)
        };
        let (v, z) = loop {
            let v = rng.gen_range(0.05..0.5f64);
            let z = rng.gen_range(0.0..1.2f64);
            let base = 1.0 - v + v * z;
            if (v * z * z / (base * base)).abs() < 0.85 {
                break (v, z);
            }
        };
        let closed = squared2f1_sum(b, v, z).expect("inside the convergence region");
        let mut partial = CompensatedSum::new();
        for n in 0..400u32 {
            let f = gauss2f1_poly(n, b, 1.0, z).expect("no pole at c = 1");
            partial.add(v.powi(n as i32) * f * f);
        }
        worst = worst.max(rel_err(closed, partial.value()));
    }
    CheckResult::from_error(
        "identity.squared_hypergeometric_sum",
        worst,
        1e-10,
        format!("{IDENTITY_POINTS} random points vs 400-term partial sums"),
    )
}

fn check_states_closed_forms() -> CheckResult {
    let mut worst = 0.0f64;
    for &n in &[0.0, 0.1, 0.5, 1.0, 3.0] {
        for m in 0..=10u32 {
            let params = PatsParams::new(n, m).expect("valid");
            let s = FockDiagonalState::pats(params, 1e-12).expect("valid");
            let mut sum = CompensatedSum::new();
            s.probs().iter().for_each(|&p| sum.add(p));
            worst = worst.max((sum.value() + s.tail_mass() - 1.0).abs());
            worst = worst.max((s.mean_photon() - params.mean_photon()).abs());
        }
    }
    for &n in &[0.1, 0.5, 1.0, 2.0, 5.0, 15.5] {
        let t = FockDiagonalState::thermal(ThermalParams::new(n).expect("valid"), 1e-14)
            .expect("valid");
        worst = worst.max(rel_err(t.purity(), 1.0 / (2.0 * n + 1.0)));
        worst = worst.max(rel_err(
            t.von_neumann_entropy(),
            crate::states::thermal_entropy(n),
        ));
    }
    CheckResult::from_error(
        "states.closed_form_functionals",
        worst,
        1e-9,
        "normalization, mean photon law, thermal purity and entropy".into(),
    )
}

fn check_measures_hand_values() -> CheckResult {
    let fock1 = FockDiagonalState::fock(1);
    let mut worst = (measures::delta_hs(&fock1) - 5.0 / 12.0).abs();
    worst = worst.max((measures::delta_re(&fock1) - 2.0 * std::f64::consts::LN_2).abs());
    worst = worst.max((measures::delta_f(&fock1) - 0.5).abs());
    for &n in &[0.0, 0.5, 2.0] {
        let t = FockDiagonalState::thermal(ThermalParams::new(n).expect("valid"), 1e-14)
            .expect("valid");
        worst = worst
            .max(measures::delta_hs(&t).abs())
            .max(measures::delta_re(&t).abs())
            .max(measures::delta_f(&t).abs());
    }
    CheckResult::from_error(
        "measures.hand_values_and_thermal_zeros",
        worst,
        1e-10,
        "Fock |1> exact values; all measures vanish on thermal states".into(),
    )
}

fn check_threshold_ordering() -> CheckResult {
    let mut worst = 0.0f64;
    for &nr in &[0.01, 0.1, 1.0, 5.0, 50.0] {
        let th = threshold_times(&BathParams::new(1.0, nr).expect("valid"));
        if th.t_c <= th.t_w {
            worst = worst.max(1.0);
        }
    }
    // Spot values against the analytic formulas evaluated independently.
    let th = threshold_times(&BathParams::new(1.0, 0.1).expect("valid"));
    worst = worst.max((th.t_w - (1.0 + 1.0 / 1.2f64).ln()).abs());
    worst = worst.max((th.t_c - 11.0f64.ln()).abs());
    CheckResult::from_error(
        "dynamics.threshold_times",
        worst,
        1e-12,
        "t_c > t_w ordering and spot values".into(),
    )
}

fn check_zero_temperature_limit() -> CheckResult {
    let input = FockDiagonalState::pats(PatsParams::new(0.8, 3).expect("valid"), 1e-13)
        .expect("valid");
    let tiny = BathParams::new(1.0, 1e-8).expect("valid");
    let mut worst = 0.0f64;
    for &gt in &[0.2, 0.9, 2.0] {
        let a = damped_state_general(&input, &tiny, gt, 1e-12).expect("valid");
        let b = damped_state_zero_temp(&input, (-gt).exp(), 1e-12).expect("valid");
        for j in 0..a.probs().len().min(b.probs().len()) {
            worst = worst.max((a.probs()[j] - b.probs()[j]).abs());
        }
    }
    CheckResult::from_error(
        "dynamics.zero_temperature_limit",
        worst,
        1e-5,
        "general series at nR = 1e-8 vs binomial damping".into(),
    )
}

/// The full triangle grid from the contract: 180 parameter combinations.
pub fn triangle_grid() -> Vec<(f64, u32, f64, f64)> {
    let mut grid = Vec::new();
    for &nbar in &[0.0, 0.5, 1.0] {
        for &m in &[0u32, 1, 3, 5, 10] {
            for &nr in &[0.1, 1.0, 5.0] {
                for &gt in &[0.05, 0.2, 1.0, 3.0] {
                    grid.push((nbar, m, nr, gt));
                }
            }
        }
    }
    grid
}

fn reduced_grid() -> Vec<(f64, u32, f64, f64)> {
    let mut grid = Vec::new();
    for &m in &[1u32, 5] {
        for &nr in &[0.1, 5.0] {
            for &gt in &[0.2, 1.0] {
                grid.push((0.5, m, nr, gt));
            }
        }
    }
    grid
}

/// Step bound that keeps fixed-step RK4 both stable and well below the
/// triangle tolerance for the truncated chain of the given size.
pub fn rk4_step(bath: &BathParams, dim: usize) -> f64 {
    0.125 / (bath.gamma() * (2.0 * bath.nbar_r() + 1.0) * (dim as f64 + 1.0))
}

/// Elementwise triangle error for one grid point:
/// closed form vs general series vs RK4 oracle.
pub fn triangle_error(nbar: f64, m: u32, nr: f64, gt: f64) -> f64 {
    let params = PatsParams::new(nbar, m).expect("valid");
    let bath = BathParams::new(1.0, nr).expect("valid");
    let input = FockDiagonalState::pats(params, 1e-13).expect("valid");
    let closed = damped_pats(&params, &bath, gt, 1e-12).expect("valid");
    let series = damped_state_general(&input, &bath, gt, 1e-12).expect("valid");
    let dt = rk4_step(&bath, ode_dimension(&input, &bath));
    let numeric = ode_oracle(&input, &bath, gt, dt).expect("well-conditioned integration");
    let mut worst = 0.0f64;
    let len = closed
        .probs()
        .len()
        .max(series.probs().len())
        .max(numeric.probs().len());
    let get = |s: &FockDiagonalState, j: usize| s.probs().get(j).copied().unwrap_or(0.0);
    for j in 0..len {
        let a = get(&closed, j);
        let b = get(&series, j);
        let c = get(&numeric, j);
        worst = worst.max((a - b).abs()).max((a - c).abs()).max((b - c).abs());
    }
    worst
}

fn check_consistency_triangle(level: VerifyLevel) -> CheckResult {
    let grid = match level {
        VerifyLevel::Fast => reduced_grid(),
        VerifyLevel::Full => triangle_grid(),
    };
    let worst = grid
        .par_iter()
        .map(|&(nbar, m, nr, gt)| triangle_error(nbar, m, nr, gt))
        .reduce(|| 0.0, f64::max);
    CheckResult::from_error(
        "dynamics.consistency_triangle",
        worst,
        1e-8,
        format!(
            "closed form = series = RK4 oracle, elementwise, {} grid points",
            grid.len()
        ),
    )
}

fn check_functionals_vs_brute_force(level: VerifyLevel) -> CheckResult {
    let grid = match level {
        VerifyLevel::Fast => reduced_grid(),
        VerifyLevel::Full => triangle_grid(),
    };
    let worst = grid
        .par_iter()
        .map(|&(nbar, m, nr, gt)| {
            let params = PatsParams::new(nbar, m).expect("valid");
            let bath = BathParams::new(1.0, nr).expect("valid");
            let state = damped_pats(&params, &bath, gt, 1e-13).expect("valid");
            let reference = FockDiagonalState::thermal(
                ThermalParams::new(state.mean_photon()).expect("valid"),
                1e-14,
            )
            .expect("valid");
            let len = state.probs().len().min(reference.probs().len());
            let mut overlap = CompensatedSum::new();
            for j in 0..len {
                overlap.add(state.probs()[j] * reference.probs()[j]);
            }
            let mut worst = (overlap_damped_pats(&params, &bath, gt) - overlap.value()).abs();
            worst = worst.max((purity_damped_pats(&params, &bath, gt) - state.purity()).abs());
            worst = worst.max(
                (purity_damped_pats(&params, &bath, gt)
                    - purity_damped_pats_legendre(&params, &bath, gt))
                .abs(),
            );
            worst = worst.max(
                (gaussian_purity_damped(&params, &bath, gt)
                    - 1.0 / (2.0 * mean_photon_damped(params.mean_photon(), &bath, gt) + 1.0))
                .abs(),
            );
            // Equilibrium limit.
            let eq = 1.0 / (2.0 * nr + 1.0);
            worst = worst.max((overlap_damped_pats(&params, &bath, 40.0) - eq).abs());
            worst = worst.max((purity_damped_pats(&params, &bath, 40.0) - eq).abs());
            worst
        })
        .reduce(|| 0.0, f64::max);
    CheckResult::from_error(
        "dynamics.functionals_vs_brute_force",
        worst,
        1e-10,
        format!(
            "overlap and purity closed forms vs evolved-distribution sums, {} grid points",
            grid.len()
        ),
    )
}

fn check_quasiprob_closed_form() -> CheckResult {
    let combos = [
        (0.5, 3u32, 0.1, 0.4, OrderParam::WIGNER),
        (1.0, 2, 5.0, 0.15, OrderParam::HUSIMI),
        (0.8, 4, 1.0, 2.5, OrderParam::P),
        (0.3, 5, 0.1, 0.0, OrderParam::WIGNER),
    ];
    let mut worst = 0.0f64;
    for &(n, m, nr, gt, s) in &combos {
        let params = PatsParams::new(n, m).expect("valid");
        let state = FockDiagonalState::pats(params, 1e-14).expect("valid");
        let bath = BathParams::new(1.0, nr).expect("valid");
        for i in 0..40 {
            let r = default_r_max(params.mean_photon()) * i as f64 / 39.0;
            let a = quasiprob_damped(&state, &bath, gt, s, r).expect("valid order");
            let b = quasiprob_pats(&params, &bath, gt, s, r).expect("valid order");
            worst = worst.max((a - b).abs());
        }
    }
    CheckResult::from_error(
        "quasiprob.series_vs_closed_form",
        worst,
        1e-10,
        "photon series vs closed form over radial grids".into(),
    )
}

fn check_quasiprob_positivity_and_thresholds() -> CheckResult {
    let mut worst = 0.0f64;
    // Husimi positivity.
    for &(n, m, nr, gt) in &[(0.0, 1u32, 0.1, 0.0), (0.5, 4, 5.0, 0.1), (1.0, 2, 0.1, 1.0)] {
        let params = PatsParams::new(n, m).expect("valid");
        let bath = BathParams::new(1.0, nr).expect("valid");
        let profile = radial_profile(
            &ProfileSource::Pats(params),
            &bath,
            gt,
            OrderParam::HUSIMI,
            default_r_max(params.mean_photon()),
            DEFAULT_RADIAL_POINTS,
        )
        .expect("valid");
        worst = worst.max(-profile.min_value); // must not exceed 1e-14
    }
    // Threshold sharpness: negative at 0.95 t, clean at 1.05 t.
    for &(n, m, nr) in &[(1.0, 3u32, 0.1), (0.5, 1, 5.0)] {
        let params = PatsParams::new(n, m).expect("valid");
        let bath = BathParams::new(1.0, nr).expect("valid");
        let th = threshold_times(&bath);
        for (t_star, s) in [(th.t_w, OrderParam::WIGNER), (th.t_c, OrderParam::P)] {
            let src = ProfileSource::Pats(params);
            let r_max = default_r_max(params.mean_photon());
            let before = radial_profile(&src, &bath, 0.95 * t_star, s, r_max, 512)
                .expect("valid")
                .min_value;
            let after = radial_profile(&src, &bath, 1.05 * t_star, s, r_max, 512)
                .expect("valid")
                .min_value;
            if before >= -1e-9 {
                worst = worst.max(1.0); // lost the pre-threshold negativity
            }
            worst = worst.max(-after); // must not exceed 1e-12
        }
    }
    CheckResult::from_error(
        "quasiprob.positivity_and_threshold_sharpness",
        worst,
        1e-12,
        "Husimi >= 0 everywhere; Wigner/P sign structure around t_w and t_c".into(),
    )
}

fn check_normalization() -> CheckResult {
    let bath01 = BathParams::new(1.0, 0.1).expect("valid");
    let bath5 = BathParams::new(1.0, 5.0).expect("valid");
    let mut worst = 0.0f64;
    let combos: Vec<(PatsParams, &BathParams, f64, OrderParam)> = vec![
        (PatsParams::new(0.0, 0).expect("valid"), &bath01, 0.0, OrderParam::WIGNER),
        (PatsParams::new(0.5, 5).expect("valid"), &bath01, 0.0, OrderParam::WIGNER),
        (PatsParams::new(0.5, 5).expect("valid"), &bath01, 2.5, OrderParam::P),
        (PatsParams::new(1.0, 3).expect("valid"), &bath01, 0.3, OrderParam::HUSIMI),
        (PatsParams::new(0.5, 1).expect("valid"), &bath5, 0.25, OrderParam::P),
        (PatsParams::new(1.0, 10).expect("valid"), &bath5, 0.5, OrderParam::WIGNER),
    ];
    for (params, bath, gt, s) in combos {
        let check = normalization_check(
            |r| quasiprob_pats(&params, bath, gt, s, r).expect("valid order"),
            default_r_max(params.mean_photon().max(bath.nbar_r())),
        );
        worst = worst.max((check.integral - 1.0).abs());
        if !check.decay_ok {
            worst = worst.max(1.0);
        }
    }
    CheckResult::from_error(
        "quasiprob.normalization",
        worst,
        1e-6,
        "2 pi Int W(r) r dr = 1 by adaptive quadrature".into(),
    )
}

fn check_measure_monotonicity(level: VerifyLevel) -> CheckResult {
    let (points, ms): (usize, &[u32]) = match level {
        VerifyLevel::Fast => (40, &[1, 10]),
        VerifyLevel::Full => (100, &[1, 3, 5, 10]),
    };
    let mut worst = 0.0f64;
    for &(nbar, nr, gt_max) in &[(1.0, 0.1, 4.0), (0.5, 5.0, 1.0)] {
        let bath = BathParams::new(1.0, nr).expect("valid");
        for &m in ms {
            let params = PatsParams::new(nbar, m).expect("valid");
            let reports: Vec<_> = (0..points)
                .into_par_iter()
                .map(|i| {
                    let gt = gt_max * i as f64 / (points - 1) as f64;
                    let state = damped_pats(&params, &bath, gt, 1e-13).expect("valid");
                    measures::report(&state, gt)
                })
                .collect();
            for w in reports.windows(2) {
                worst = worst.max(w[1].delta_f - w[0].delta_f);
                worst = worst.max(w[1].delta_re - w[0].delta_re);
            }
        }
    }
    CheckResult::from_error(
        "measures.monotone_decay_under_damping",
        worst,
        1e-9,
        "delta_F and delta_RE non-increasing along damping trajectories".into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let results = run_checks(VerifyLevel::Fast);
        assert!(!results.is_empty());
        for r in &results {
            assert!(
                r.passed,
                "{} failed: max_error = {:e} > tolerance {:e}",
                r.name, r.max_error, r.tolerance
            );
        }
    }

    #[test]
    fn results_are_deterministic() {
        let a = run_checks(VerifyLevel::Fast);
        let b = run_checks(VerifyLevel::Fast);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.max_error, y.max_error);
        }
    }
}
