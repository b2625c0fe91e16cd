//! Distance-type non-Gaussianity degrees for Fock-diagonal states.
//!
//! The reference Gaussian of a Fock-diagonal state is the thermal state with
//! the same mean photon occupancy, so state and reference commute and the
//! three measures reduce to sums over the photon-number distribution `{p_l}`
//! against the thermal weights `s_l = N^l / (N+1)^{l+1}`:
//!
//! ```text
//! delta_HS = 1/2 [ 1 + ( 1/(2N+1) - 2 Σ p_l s_l ) / Σ p_l^2 ]
//! delta_RE = Σ p_l ln p_l + (N+1) ln(N+1) - N ln N     (= S(rho_G) - S(rho))
//! delta_F  = 1 - Σ sqrt(p_l s_l)                        (= 1 - sqrt(fidelity))
//! ```
//!
//! All three vanish exactly on thermal inputs and only there. The general
//! non-commuting fidelity with operator square roots is out of scope: this
//! crate never produces a non-diagonal state.

use serde::Serialize;

use crate::specfun::CompensatedSum;
use crate::states::{thermal_entropy, FockDiagonalState};
use crate::textfmt::sig12;

/// Round-off slack: computed measures may dip this far below zero and are
/// clamped; anything lower indicates a broken invariant and panics.
pub const MEASURE_NEG_TOL: f64 = 1e-12;

/// Hilbert-Schmidt degree of non-Gaussianity.
pub fn delta_hs(state: &FockDiagonalState) -> f64 {
    let n = state.mean_photon();
    let purity = state.purity();
    let overlap = thermal_overlap(state, n);
    let gauss_purity = 1.0 / (2.0 * n + 1.0);
    let value = 0.5 * (1.0 + (gauss_purity - 2.0 * overlap) / purity);
    clamp_measure(value, "delta_hs")
}

/// Relative-entropy degree of non-Gaussianity, `S(rho_G) - S(rho)` in nats.
pub fn delta_re(state: &FockDiagonalState) -> f64 {
    let n = state.mean_photon();
    let value = thermal_entropy(n) - state.von_neumann_entropy();
    clamp_measure(value, "delta_re")
}

/// Fidelity-based (Bures) degree of non-Gaussianity, `1 - Σ sqrt(p_l s_l)`.
///
/// The square-root terms are accumulated in decreasing-magnitude order with
/// compensation, which is what makes the 1e-12-level identities on thermal
/// inputs hold exactly.
pub fn delta_f(state: &FockDiagonalState) -> f64 {
    let n = state.mean_photon();
    let mut terms: Vec<f64> = Vec::with_capacity(state.probs().len());
    if n == 0.0 {
        // Degenerate reference: the vacuum. Only l = 0 contributes.
        terms.push(state.probs()[0].sqrt());
    } else {
        let q = n / (n + 1.0);
        let mut s_l = 1.0 / (n + 1.0);
        for &p in state.probs() {
            terms.push((p * s_l).sqrt());
            s_l *= q;
        }
    }
    terms.sort_by(|a, b| b.partial_cmp(a).expect("sqrt terms are never NaN"));
    let mut acc = CompensatedSum::new();
    terms.iter().for_each(|&t| acc.add(t));
    clamp_measure(1.0 - acc.value(), "delta_f")
}

/// `Tr(rho rho_G) = Σ p_l s_l` against the thermal reference at occupancy `n`.
fn thermal_overlap(state: &FockDiagonalState, n: f64) -> f64 {
    if n == 0.0 {
        return state.probs()[0];
    }
    let q = n / (n + 1.0);
    let mut s_l = 1.0 / (n + 1.0);
    let mut acc = CompensatedSum::new();
    for &p in state.probs() {
        acc.add(p * s_l);
        s_l *= q;
    }
    acc.value()
}

fn clamp_measure(value: f64, name: &str) -> f64 {
    if value < 0.0 {
        assert!(
            value >= -MEASURE_NEG_TOL,
            "{name} = {value} below the -{MEASURE_NEG_TOL} round-off slack; \
             the state violates an internal invariant"
        );
        return 0.0;
    }
    value
}

/// All three measures plus the basic functionals at one trajectory point.
///
/// Serializes to one CSV row (see [`MeasureReport::CSV_HEADER`]) and to a
/// JSON object with the same keys. The time tag is the dimensionless
/// `gamma * t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub gamma_t: f64,
    pub delta_hs: f64,
    pub delta_re: f64,
    pub delta_f: f64,
    pub mean_n: f64,
    pub purity: f64,
    pub entropy: f64,
}

impl MeasureReport {
    pub const CSV_HEADER: &'static str =
        "gamma_t,delta_hs,delta_re,delta_f,mean_n,purity,entropy";

    /// One CSV row, 12 significant digits per field.
    pub fn csv_row(&self) -> String {
        [
            self.gamma_t,
            self.delta_hs,
            self.delta_re,
            self.delta_f,
            self.mean_n,
            self.purity,
            self.entropy,
        ]
        .iter()
        .map(|&x| sig12(x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Bundle the measures and basic functionals of `state` under the tag
/// `gamma_t`.
pub fn report(state: &FockDiagonalState, gamma_t: f64) -> MeasureReport {
    MeasureReport {
        gamma_t,
        delta_hs: delta_hs(state),
        delta_re: delta_re(state),
        delta_f: delta_f(state),
        mean_n: state.mean_photon(),
        purity: state.purity(),
        entropy: state.von_neumann_entropy(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{PatsParams, ThermalParams};
    use approx::assert_abs_diff_eq;

    fn pats(n: f64, m: u32) -> FockDiagonalState {
        FockDiagonalState::pats(PatsParams::new(n, m).unwrap(), 1e-13).unwrap()
    }

    fn thermal(n: f64) -> FockDiagonalState {
        FockDiagonalState::thermal(ThermalParams::new(n).unwrap(), 1e-14).unwrap()
    }

    #[test]
    fn all_measures_vanish_on_thermal_inputs() {
        for &n in &[0.0, 0.3, 1.0, 5.0] {
            let s = thermal(n);
            assert_abs_diff_eq!(delta_hs(&s), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(delta_re(&s), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(delta_f(&s), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn fock_one_hand_values() {
        // For |1>: Σp^2 = 1, Tr rho_G^2 = 1/3, Σ p_l s_l = s_1 = 1/4,
        // so delta_HS = (1 + 1/3 - 1/2)/2 = 5/12; delta_RE = 2 ln 2;
        // delta_F = 1 - sqrt(1/4) = 1/2.
        let s = FockDiagonalState::fock(1);
        assert_abs_diff_eq!(delta_hs(&s), 5.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(delta_re(&s), 2.0 * std::f64::consts::LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(delta_f(&s), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fock_m_matches_explicit_matrix_evaluation() {
        // Brute force straight from the definitions with explicit vectors.
        for m in 2u32..=5 {
            let s = FockDiagonalState::fock(m);
            let n = m as f64;
            let thermal_ref = thermal(n);
            let sl = thermal_ref.probs();
            // delta_HS from Tr formulas on truncated vectors.
            let tr_rho2 = 1.0;
            let tr_g2: f64 = sl.iter().map(|x| x * x).sum();
            let tr_g_rho = sl[m as usize];
            let expect_hs = 0.5 * (1.0 + (tr_g2 - 2.0 * tr_g_rho) / tr_rho2);
            assert_abs_diff_eq!(delta_hs(&s), expect_hs, epsilon = 1e-9);
            // Pure-state saturation: 1 - delta_F = sqrt(<m|rho_G|m>).
            assert_abs_diff_eq!(1.0 - delta_f(&s), tr_g_rho.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn pats_delta_re_from_table_entries() {
        // S(rho_G) - S(rho) = 1.909 - 1.372 at n = 0.5, M = 1.
        assert_abs_diff_eq!(delta_re(&pats(0.5, 1)), 0.537, epsilon = 2e-3);
    }

    #[test]
    fn pats_delta_f_matches_bures_brute_force() {
        for m in 1u32..=5 {
            let s = pats(1.0, m);
            let g = thermal(s.mean_photon());
            let len = s.probs().len().min(g.probs().len());
            let fidelity_sqrt: f64 = (0..len)
                .map(|l| (s.probs()[l] * g.probs()[l]).sqrt())
                .sum();
            assert_abs_diff_eq!(delta_f(&s), 1.0 - fidelity_sqrt, epsilon = 1e-10);
        }
    }

    #[test]
    fn report_bundles_everything() {
        let r = report(&FockDiagonalState::fock(0), 0.0);
        assert_eq!(r.delta_hs, 0.0);
        assert_eq!(r.delta_re, 0.0);
        assert_eq!(r.delta_f, 0.0);
        assert_eq!(r.purity, 1.0);
        assert_eq!(r.entropy, 0.0);

        let r = report(&pats(0.5, 5), 0.0);
        assert_abs_diff_eq!(r.entropy, 2.078, epsilon = 1e-3);
        assert!(r.delta_hs > 0.0 && r.delta_re > 0.0 && r.delta_f > 0.0);
    }

    /// Rebuild a photon-added thermal distribution with the cutoff forced to
    /// `target_len` entries, bypassing the tail-driven stopping rule.
    fn pats_with_cutoff(n: f64, m: u32, target_len: usize) -> FockDiagonalState {
        let q = n / (n + 1.0);
        let mut probs = vec![0.0; m as usize];
        let mut p = (n + 1.0).powi(-(m as i32 + 1));
        let mut sum = crate::specfun::CompensatedSum::new();
        for l in m as usize..target_len {
            probs.push(p);
            sum.add(p);
            p *= q * (l + 1) as f64 / ((l + 1 - m as usize) as f64);
        }
        FockDiagonalState::new(probs, (1.0 - sum.value()).max(0.0), 1.0).unwrap()
    }

    #[test]
    fn truncation_robustness_doubling_cutoff() {
        // Doubling the cutoff L moves each measure by less than 1e-9.
        for &(n, m) in &[(0.1, 1u32), (0.5, 5), (1.0, 10), (3.0, 3)] {
            let base = FockDiagonalState::pats(PatsParams::new(n, m).unwrap(), 1e-12).unwrap();
            let doubled = pats_with_cutoff(n, m, 2 * base.probs().len());
            assert!((delta_hs(&base) - delta_hs(&doubled)).abs() < 1e-9);
            assert!((delta_re(&base) - delta_re(&doubled)).abs() < 1e-9);
            assert!((delta_f(&base) - delta_f(&doubled)).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_row_layout() {
        let r = report(&FockDiagonalState::fock(0), 0.0);
        assert_eq!(MeasureReport::CSV_HEADER.split(',').count(), 7);
        assert_eq!(r.csv_row(), "0,0,0,0,0,1,0");
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["purity"], 1.0);
        assert!(json.get("gamma_t").is_some());
    }
}
