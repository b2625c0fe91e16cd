//! s-ordered quasiprobability densities of damped Fock-diagonal states.
//!
//! The Fourier transform of the s-ordered characteristic function of a damped
//! Fock-diagonal state depends on phase space only through `|beta|^2`, so the
//! whole API takes a radius, never a complex point. For the general input,
//!
//! ```text
//! W(r, t; s) = (1/pi) exp(-r^2/D) Σ_l p_l(0) [A^l L_l(-r^2 e^{-gt}/(D A))] / D^{l+1},
//! D = nT + (1-s)/2,
//! ```
//!
//! and for an M-photon-added thermal input the sum collapses to the single
//! `l = M` bracket with `D` replaced by `B = nT + (1-s)/2 + n e^{-gt}`. The
//! bracket is evaluated in expanded polynomial-in-A form, which is finite at
//! `A = 0` — exactly the threshold times where the density switches sign
//! structure. `A(t; s) = nR + (1-s)/2 - (nR+1) e^{-gt}` is a property of the
//! bath alone: once it turns positive every term above is positive, which is
//! why the positivity thresholds `t_w` (Wigner, s = 0) and `t_c`
//! (P function, s = 1) are universal over Fock-diagonal inputs.
//!
//! Conventions: s = 1 is the P function, s = 0 the Wigner function, s = -1
//! the Husimi Q function; densities carry units of 1/pi per unit phase-space
//! area and integrate to one against `2 pi r dr`.

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{BathParams, Damping};
use crate::specfun::CompensatedSum;
use crate::states::{FockDiagonalState, PatsParams};
use crate::textfmt::sig12;

/// Values below this are treated as genuine negativity rather than round-off.
pub const NEGATIVITY_TOL: f64 = 1e-12;

/// Errors from quasiprobability evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuasiprobError {
    #[error(
        "width parameter {width} <= 0 at s = {s}, gamma_t = {gamma_t}: \
         the distribution is not a pointwise function there"
    )]
    Distributional { width: f64, s: f64, gamma_t: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("negativity scan requires s = 0 (Wigner) or s = 1 (P), got s = {0}")]
    UnsupportedScanOrder(f64),
}

/// Ordering parameter `s <= 1` of the quasiprobability family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderParam(f64);

impl OrderParam {
    /// Glauber-Sudarshan P function.
    pub const P: OrderParam = OrderParam(1.0);
    /// Wigner function.
    pub const WIGNER: OrderParam = OrderParam(0.0);
    /// Husimi Q function.
    pub const HUSIMI: OrderParam = OrderParam(-1.0);

    pub fn new(s: f64) -> Result<Self, QuasiprobError> {
        if !s.is_finite() || s > 1.0 {
            return Err(QuasiprobError::InvalidParameter(format!(
                "ordering parameter must be finite and <= 1, got {s}"
            )));
        }
        Ok(Self(s))
    }

    pub fn s(&self) -> f64 {
        self.0
    }
}

/// The bath parameter `A(t; s) = nR + (1-s)/2 - (nR+1) exp(-gamma t)`.
///
/// Its sign controls positivity: for `A > 0` every quasiprobability of every
/// damped Fock-diagonal state is pointwise positive. `A(t; -1) > 0` for all
/// `t > 0` (the Q function is always positive); `A(t; 0)` turns positive at
/// `t_w` and `A(t; 1)` at `t_c`.
pub fn a_param(bath: &BathParams, t: f64, s: OrderParam) -> f64 {
    let d = Damping::at(bath, t);
    bath.nbar_r() + 0.5 * (1.0 - s.s()) - (bath.nbar_r() + 1.0) * d.decay
}

/// Evaluate `Σ_k C(l,k) chi^k alpha^{l-k} / k!` — the expanded
/// polynomial-in-alpha Laguerre bracket `alpha^l L_l(-chi/alpha)`.
fn laguerre_bracket(l: usize, chi: f64, alpha: f64) -> f64 {
    // Powers of alpha descending; coefficient c_k = C(l,k) chi^k / k!.
    let mut apow = vec![0.0; l + 1];
    apow[0] = 1.0;
    for i in 1..=l {
        apow[i] = apow[i - 1] * alpha;
    }
    let mut acc = CompensatedSum::new();
    let mut coef = 1.0f64;
    for k in 0..=l {
        acc.add(coef * apow[l - k]);
        if k < l {
            coef *= (l - k) as f64 * chi / (((k + 1) * (k + 1)) as f64);
        }
    }
    acc.value()
}

/// s-ordered quasiprobability density of a damped Fock-diagonal state at
/// radius `r = |beta|`.
///
/// Fails with [`QuasiprobError::Distributional`] when `D = nT + (1-s)/2 <= 0`
/// (the P function of an undamped state is a distribution, not a function).
/// The photon series is truncated at the input cutoff, whose declared tail
/// mass bounds the truncation error.
pub fn quasiprob_damped(
    input: &FockDiagonalState,
    bath: &BathParams,
    t: f64,
    s: OrderParam,
    radius: f64,
) -> Result<f64, QuasiprobError> {
    check_radius_time(radius, t)?;
    let d = Damping::at(bath, t);
    let width = d.n_t + 0.5 * (1.0 - s.s());
    if width <= 0.0 {
        return Err(QuasiprobError::Distributional {
            width,
            s: s.s(),
            gamma_t: bath.gamma() * t,
        });
    }
    let alpha = a_param(bath, t, s) / width;
    let chi = radius * radius * d.decay / (width * width);
    let envelope = (-radius * radius / width).exp();
    let mut acc = CompensatedSum::new();
    for (l, &p) in input.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc.add(p * laguerre_bracket(l, chi, alpha));
    }
    Ok(envelope * acc.value() / (std::f64::consts::PI * width))
}

/// s-ordered quasiprobability density of a damped M-photon-added thermal
/// state, in closed form:
///
/// ```text
/// W(r, t; s) = (1/pi) exp(-r^2/B) [A^M L_M(-(n+1) e^{-gt} r^2 / (B A))] / B^{M+1}.
/// ```
///
/// `B(t; s) = nT + (1-s)/2 + n e^{-gt}` is positive at all times except for
/// the P function of an undamped Fock state (`s = 1`, `t = 0`, `n = 0`),
/// which is rejected.
pub fn quasiprob_pats(
    params: &PatsParams,
    bath: &BathParams,
    t: f64,
    s: OrderParam,
    radius: f64,
) -> Result<f64, QuasiprobError> {
    check_radius_time(radius, t)?;
    let d = Damping::at(bath, t);
    let width = d.n_t + 0.5 * (1.0 - s.s()) + params.nbar() * d.decay;
    if width <= 0.0 {
        return Err(QuasiprobError::Distributional {
            width,
            s: s.s(),
            gamma_t: bath.gamma() * t,
        });
    }
    let alpha = a_param(bath, t, s) / width;
    let chi = (params.nbar() + 1.0) * d.decay * radius * radius / (width * width);
    let envelope = (-radius * radius / width).exp();
    let bracket = laguerre_bracket(params.m_added() as usize, chi, alpha);
    Ok(envelope * bracket / (std::f64::consts::PI * width))
}

fn check_radius_time(radius: f64, t: f64) -> Result<(), QuasiprobError> {
    if !(radius >= 0.0) {
        return Err(QuasiprobError::InvalidParameter(format!(
            "radius must be >= 0, got {radius}"
        )));
    }
    if !(t >= 0.0) {
        return Err(QuasiprobError::InvalidParameter(format!(
            "time must be >= 0, got {t}"
        )));
    }
    Ok(())
}

/// Where a radial profile takes its photon statistics from.
#[derive(Debug, Clone)]
pub enum ProfileSource<'a> {
    /// Arbitrary Fock-diagonal input, evaluated through the photon series.
    General(&'a FockDiagonalState),
    /// Photon-added thermal input, evaluated through the closed form.
    Pats(PatsParams),
}

impl ProfileSource<'_> {
    fn density(
        &self,
        bath: &BathParams,
        t: f64,
        s: OrderParam,
        radius: f64,
    ) -> Result<f64, QuasiprobError> {
        match self {
            ProfileSource::General(state) => quasiprob_damped(state, bath, t, s, radius),
            ProfileSource::Pats(params) => quasiprob_pats(params, bath, t, s, radius),
        }
    }

    /// Mean photon number of the underlying input state.
    pub fn mean_photon(&self) -> f64 {
        match self {
            ProfileSource::General(state) => state.mean_photon(),
            ProfileSource::Pats(params) => params.mean_photon(),
        }
    }
}

/// Default radial reach: five Gaussian widths past the envelope of a state
/// with the given mean occupancy.
pub fn default_r_max(mean_photon: f64) -> f64 {
    5.0 * (mean_photon + 1.0).sqrt()
}

/// Default number of radial grid points.
pub const DEFAULT_RADIAL_POINTS: usize = 512;

/// A quasiprobability density sampled on a uniform radial grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub s: f64,
    pub gamma_t: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub first_negative_radius: Option<f64>,
}

impl RadialProfile {
    /// CSV with one `r,value` row per grid point, preceded by a comment line
    /// carrying the profile metadata.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# s={} gamma_t={} min_value={} first_negative_radius={}\n",
            sig12(self.s),
            sig12(self.gamma_t),
            sig12(self.min_value),
            self.first_negative_radius
                .map(|r| sig12(r))
                .unwrap_or_else(|| "none".to_string()),
        ));
        out.push_str("r,value\n");
        for (r, v) in self.radii.iter().zip(&self.values) {
            out.push_str(&sig12(*r));
            out.push(',');
            out.push_str(&sig12(*v));
            out.push('\n');
        }
        out
    }
}

/// Sample the density on `n_points` radii uniformly spanning `[0, r_max]`,
/// recording the minimum and the first radius where the value drops below
/// the negativity threshold.
pub fn radial_profile(
    source: &ProfileSource<'_>,
    bath: &BathParams,
    t: f64,
    s: OrderParam,
    r_max: f64,
    n_points: usize,
) -> Result<RadialProfile, QuasiprobError> {
    if !(r_max > 0.0) || n_points < 2 {
        return Err(QuasiprobError::InvalidParameter(format!(
            "need r_max > 0 and n_points >= 2, got r_max = {r_max}, n_points = {n_points}"
        )));
    }
    let radii: Vec<f64> = (0..n_points)
        .map(|i| r_max * i as f64 / (n_points - 1) as f64)
        .collect();
    let values = radii
        .iter()
        .map(|&r| source.density(bath, t, s, r))
        .collect::<Result<Vec<f64>, _>>()?;
    let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let first_negative_radius = radii
        .iter()
        .zip(&values)
        .find(|(_, &v)| v < -NEGATIVITY_TOL)
        .map(|(&r, _)| r);
    Ok(RadialProfile {
        s: s.s(),
        gamma_t: bath.gamma() * t,
        radii,
        values,
        min_value,
        first_negative_radius,
    })
}

/// Result of a normalization quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationCheck {
    /// `2 pi Int_0^{r_max} W(r) r dr`; should be 1 within 1e-6.
    pub integral: f64,
    /// Whether the density had decayed below 1e-14 at `r_max`.
    pub decay_ok: bool,
}

/// Integrate `2 pi r W(r)` over `[0, r_max]` by adaptive Simpson quadrature.
///
/// The decay precondition (`|W(r_max)| < 1e-14`) is reported rather than
/// enforced, so a too-small window shows up as `decay_ok = false` alongside
/// whatever the integral came out to.
pub fn normalization_check<F>(density: F, r_max: f64) -> NormalizationCheck
where
    F: Fn(f64) -> f64,
{
    let decay_ok = density(r_max).abs() < 1e-14;
    let f = |r: f64| 2.0 * std::f64::consts::PI * r * density(r);
    // Seed the adaptive pass with 64 uniform panels; a narrow peak between
    // coarse sample points would otherwise terminate the recursion at zero.
    let panels = 64;
    let mut integral = 0.0;
    for i in 0..panels {
        let a = r_max * i as f64 / panels as f64;
        let b = r_max * (i + 1) as f64 / panels as f64;
        integral += adaptive_simpson(&f, a, b, 1e-10, 24);
    }
    NormalizationCheck { integral, decay_ok }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (left, lm, flm) = simpson(f, a, fa, m, fm);
    let (right, rm, frm) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Minimum of the radial profile at each grid time, for bracketing the
/// sign-change (threshold) times. Only the Wigner (`s = 0`) and P (`s = 1`)
/// orders lose negativity at a finite time, so only those are accepted.
pub fn negativity_transition_scan(
    params: &PatsParams,
    bath: &BathParams,
    s: OrderParam,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>, QuasiprobError> {
    use rayon::prelude::*;
    if s.s() != 0.0 && s.s() != 1.0 {
        return Err(QuasiprobError::UnsupportedScanOrder(s.s()));
    }
    let r_max = default_r_max(params.mean_photon());
    t_grid
        .par_iter()
        .map(|&t| {
            let profile = radial_profile(
                &ProfileSource::Pats(*params),
                bath,
                t,
                s,
                r_max,
                DEFAULT_RADIAL_POINTS,
            )?;
            Ok((t, profile.min_value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::threshold_times;
    use crate::states::{FockDiagonalState, ThermalParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn bath(nr: f64) -> BathParams {
        BathParams::new(1.0, nr).unwrap()
    }

    fn pats(n: f64, m: u32) -> PatsParams {
        PatsParams::new(n, m).unwrap()
    }

    #[test]
    fn a_param_signs() {
        let b = bath(0.1);
        // Q: positive for any t > 0.
        assert!(a_param(&b, 0.5, OrderParam::HUSIMI) > 0.0);
        // Wigner: vanishes at t_w, P: at t_c.
        let th = threshold_times(&b);
        assert_abs_diff_eq!(a_param(&b, th.t_w, OrderParam::WIGNER), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a_param(&b, th.t_c, OrderParam::P), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_wigner_is_gaussian() {
        let vac = FockDiagonalState::fock(0);
        let b = bath(0.1);
        for &r in &[0.0, 0.5, 1.3] {
            let w = quasiprob_damped(&vac, &b, 0.0, OrderParam::WIGNER, r).unwrap();
            let expect = 2.0 / std::f64::consts::PI * (-2.0 * r * r).exp();
            assert_relative_eq!(w, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn fock_one_wigner_origin_value() {
        let w = quasiprob_pats(&pats(0.0, 1), &bath(0.1), 0.0, OrderParam::WIGNER, 0.0).unwrap();
        assert_abs_diff_eq!(w, -2.0 / std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn input_husimi_closed_form() {
        // Q(r, 0) = r^{2M} exp(-r^2/(n+1)) / (pi M! (n+1)^{M+1}).
        let (n, m) = (0.7, 3u32);
        let b = bath(5.0);
        for &r in &[0.0, 0.8, 2.0] {
            let q = quasiprob_pats(&pats(n, m), &b, 0.0, OrderParam::HUSIMI, r).unwrap();
            let mf = 6.0; // 3!
            let expect = r.powi(2 * m as i32) / (mf * (n + 1.0f64).powi(m as i32 + 1))
                * (-r * r / (n + 1.0)).exp()
                / std::f64::consts::PI;
            assert_relative_eq!(q, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn input_p_function_closed_form() {
        // P(r, 0) = (-1)^M / (pi n^{M+1}) exp(-r^2/n) L_M((n+1) r^2 / n), n > 0.
        let (n, m) = (0.5, 2u32);
        let b = bath(0.1);
        for &r in &[0.0, 0.4, 1.1] {
            let p = quasiprob_pats(&pats(n, m), &b, 0.0, OrderParam::P, r).unwrap();
            let expect = (-r * r / n).exp() * crate::specfun::laguerre(m, (n + 1.0) * r * r / n)
                / (std::f64::consts::PI * n.powi(m as i32 + 1));
            assert_relative_eq!(p, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn input_wigner_closed_form() {
        // W(r, 0) = 2 (-1)^M / (pi (2n+1)^{M+1}) exp(-2r^2/(2n+1)) L_M(4(n+1)r^2/(2n+1)).
        let (n, m) = (1.0, 3u32);
        let b = bath(0.1);
        for &r in &[0.0, 0.6, 1.5] {
            let w = quasiprob_pats(&pats(n, m), &b, 0.0, OrderParam::WIGNER, r).unwrap();
            let tn = 2.0 * n + 1.0;
            let expect = -2.0 / (std::f64::consts::PI * tn.powi(m as i32 + 1))
                * (-2.0 * r * r / tn).exp()
                * crate::specfun::laguerre(m, 4.0 * (n + 1.0) * r * r / tn);
            assert_relative_eq!(w, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn p_function_of_fock_input_rejected() {
        let err = quasiprob_pats(&pats(0.0, 1), &bath(0.1), 0.0, OrderParam::P, 1.0).unwrap_err();
        assert!(matches!(err, QuasiprobError::Distributional { .. }));
        let err =
            quasiprob_damped(&FockDiagonalState::fock(1), &bath(0.1), 0.0, OrderParam::P, 1.0)
                .unwrap_err();
        assert!(matches!(err, QuasiprobError::Distributional { .. }));
    }

    #[test]
    fn series_and_closed_form_agree() {
        for &(n, m, nr, gt, s) in &[
            (0.5, 3u32, 0.1, 0.4, OrderParam::WIGNER),
            (1.0, 2, 5.0, 0.15, OrderParam::HUSIMI),
            (0.8, 4, 1.0, 2.5, OrderParam::P),
        ] {
            let params = pats(n, m);
            let state = FockDiagonalState::pats(params, 1e-14).unwrap();
            let b = bath(nr);
            for &r in &[0.0, 0.5, 1.2, 3.0] {
                let via_series = quasiprob_damped(&state, &b, gt, s, r).unwrap();
                let via_closed = quasiprob_pats(&params, &b, gt, s, r).unwrap();
                assert_abs_diff_eq!(via_series, via_closed, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn husimi_never_negative() {
        for &(n, m, nr, gt) in &[(0.0, 1u32, 0.1, 0.0), (0.5, 4, 5.0, 0.1), (1.0, 2, 0.1, 1.0)] {
            let profile = radial_profile(
                &ProfileSource::Pats(pats(n, m)),
                &bath(nr),
                gt,
                OrderParam::HUSIMI,
                default_r_max(pats(n, m).mean_photon()),
                256,
            )
            .unwrap();
            assert!(profile.min_value >= -1e-14);
            assert!(profile.first_negative_radius.is_none());
        }
    }

    #[test]
    fn wigner_negativity_disappears_past_threshold() {
        let params = pats(1.0, 3);
        let b = bath(0.1);
        let t_w = threshold_times(&b).t_w;
        let src = ProfileSource::Pats(params);
        let r_max = default_r_max(params.mean_photon());
        let before =
            radial_profile(&src, &b, 0.95 * t_w, OrderParam::WIGNER, r_max, 512).unwrap();
        assert!(before.min_value < -1e-9);
        assert!(before.first_negative_radius.is_some());
        let after = radial_profile(&src, &b, 1.05 * t_w, OrderParam::WIGNER, r_max, 512).unwrap();
        assert!(after.min_value >= -NEGATIVITY_TOL);
        assert!(after.first_negative_radius.is_none());
    }

    #[test]
    fn fock_wigner_at_exact_threshold_is_finite() {
        // At t = t_w the bath parameter A vanishes; the expanded bracket must
        // still produce a finite, non-negative profile.
        let b = bath(0.1);
        let t_w = threshold_times(&b).t_w;
        let v = quasiprob_pats(&pats(0.0, 2), &b, t_w, OrderParam::WIGNER, 0.7).unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }

    #[test]
    fn initial_wigner_sign_changes_count_added_photons() {
        for m in 1u32..=6 {
            for &n in &[0.3, 1.0] {
                let params = pats(n, m);
                let profile = radial_profile(
                    &ProfileSource::Pats(params),
                    &bath(0.1),
                    0.0,
                    OrderParam::WIGNER,
                    default_r_max(params.mean_photon()),
                    2048,
                )
                .unwrap();
                let mut changes = 0;
                for w in profile.values.windows(2) {
                    if w[0] != 0.0 && w[1] != 0.0 && w[0].signum() != w[1].signum() {
                        changes += 1;
                    }
                }
                assert_eq!(changes, m, "n = {n}, M = {m}");
            }
        }
    }

    #[test]
    fn normalization_of_representative_profiles() {
        let b = bath(0.1);
        // Vacuum Wigner: exactly normalized Gaussian.
        let vac = FockDiagonalState::fock(0);
        let check = normalization_check(
            |r| quasiprob_damped(&vac, &b, 0.0, OrderParam::WIGNER, r).unwrap(),
            default_r_max(0.0),
        );
        assert!(check.decay_ok);
        assert_abs_diff_eq!(check.integral, 1.0, epsilon = 1e-6);
        // Damped photon-added state past t_c: a genuine P density.
        let params = pats(0.5, 5);
        let check = normalization_check(
            |r| quasiprob_pats(&params, &b, 2.5, OrderParam::P, r).unwrap(),
            default_r_max(params.mean_photon()),
        );
        assert!(check.decay_ok);
        assert_abs_diff_eq!(check.integral, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn scan_brackets_threshold_time() {
        let params = pats(1.0, 3);
        let b = bath(0.1);
        let grid = [0.5, 0.7];
        let scan =
            negativity_transition_scan(&params, &b, OrderParam::WIGNER, &grid).unwrap();
        assert!(scan[0].1 < 0.0, "negative before t_w, got {}", scan[0].1);
        assert!(scan[1].1 >= -NEGATIVITY_TOL, "positive after t_w, got {}", scan[1].1);
        assert!(matches!(
            negativity_transition_scan(&params, &b, OrderParam::HUSIMI, &grid),
            Err(QuasiprobError::UnsupportedScanOrder(_))
        ));
    }

    #[test]
    fn profile_csv_shape() {
        let profile = radial_profile(
            &ProfileSource::Pats(pats(0.0, 1)),
            &bath(0.1),
            0.0,
            OrderParam::WIGNER,
            2.0,
            3,
        )
        .unwrap();
        let csv = profile.to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# s=0 gamma_t=0 min_value="));
        assert_eq!(lines.next().unwrap(), "r,value");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn thermal_equilibrium_husimi_matches_bose_einstein_gaussian() {
        // At gamma t >> 1 the mode is thermal at nR; its Q function is the
        // Gaussian (1/pi) exp(-r^2/(nR+1))/(nR+1).
        let nr = 0.7;
        let b = bath(nr);
        let thermal =
            FockDiagonalState::thermal(ThermalParams::new(nr).unwrap(), 1e-14).unwrap();
        for &r in &[0.0, 0.9, 2.2] {
            let q = quasiprob_damped(&thermal, &b, 30.0, OrderParam::HUSIMI, r).unwrap();
            let expect =
                (-r * r / (nr + 1.0)).exp() / (std::f64::consts::PI * (nr + 1.0));
            assert_relative_eq!(q, expect, max_relative = 1e-9);
        }
    }
}
