//! Damping of Fock-diagonal states under the quantum optical master equation.
//!
//! The channel is phase-insensitive coupling to a thermal reservoir with
//! coupling constant `gamma` and mean occupancy `nR`. On the photon-number
//! distribution it acts as the birth-death chain
//!
//! ```text
//! dp_j/dt = gamma (nR+1) [(j+1) p_{j+1} - j p_j] + gamma nR [j p_{j-1} - (j+1) p_j],
//! ```
//!
//! which preserves diagonality, trace, and positivity, and drives every input
//! toward the reservoir's thermal state (Gaussification). This module holds
//! the analytic solutions — a hypergeometric series for arbitrary diagonal
//! inputs, a closed form for photon-added thermal inputs, binomial damping
//! for a zero-temperature bath — plus the two universal positivity-threshold
//! times, regime classification, entropy traces, and a fixed-step RK4
//! integrator of the chain above that serves as the independent ground truth
//! for everything analytic.
//!
//! All closed forms are evaluated through the prefactor-absorbed polynomial
//! [`crate::specfun::scaled2f1_poly`] in variables normalized to lie in
//! [0, 1], so they are finite and stable at `t = 0` (where the raw
//! hypergeometric argument diverges) and all series terms are positive.
//!
//! Times are absolute and carry units of `1/gamma`; internally only the
//! dimensionless product `gamma * t` enters.

use serde::Serialize;
use thiserror::Error;

use crate::specfun::{scaled2f1_poly, CompensatedSum};
use crate::states::{FockDiagonalState, PatsParams, StateError, ThermalParams, MAX_CUTOFF};

/// Beyond this value of `gamma * t` the state is the reservoir thermal state
/// to double precision (`exp(-40)` is ~4e-18), and is returned directly.
pub const GAMMA_T_ASYMPTOTIC: f64 = 40.0;

/// Field-reservoir coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathParams {
    gamma: f64,
    nbar_r: f64,
}

impl BathParams {
    pub fn new(gamma: f64, nbar_r: f64) -> Result<Self, DynError> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(DynError::InvalidParameter(format!(
                "coupling gamma must be finite and > 0, got {gamma}"
            )));
        }
        if !(nbar_r.is_finite() && nbar_r >= 0.0) {
            return Err(DynError::InvalidParameter(format!(
                "reservoir occupancy must be finite and >= 0, got {nbar_r}"
            )));
        }
        Ok(Self { gamma, nbar_r })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nbar_r(&self) -> f64 {
        self.nbar_r
    }

    /// Thermal mean occupancy accumulated in the mode by time `t`:
    /// `nT(t) = nR (1 - exp(-gamma t))`.
    pub fn nbar_t(&self, t: f64) -> f64 {
        -self.nbar_r * (-(self.gamma * t)).exp_m1()
    }
}

/// Errors from evolution operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "input tail mass {input_tail} makes the requested tolerance {requested} unreachable"
    )]
    ToleranceUnreachable { input_tail: f64, requested: f64 },
    #[error("evolved state did not reach the tail tolerance within {MAX_CUTOFF} entries")]
    CutoffExceeded,
    #[error("probability leaked during integration: |drift| = {drift} > {limit}")]
    ProbabilityLeak { drift: f64, limit: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// The two universal positivity-threshold times of a bath.
///
/// `t_w` is when the Wigner function of any damped Fock-diagonal state has
/// lost all negativity; `t_c` is when the P representation exists as a
/// genuine probability density. `t_c` is `+inf` for a zero-temperature bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdTimes {
    pub t_w: f64,
    pub t_c: f64,
}

/// Threshold times of the bath:
///
/// ```text
/// t_w = ln(1 + 1/(2 nR + 1)) / gamma,    t_c = ln(1 + 1/nR) / gamma,
/// ```
///
/// with `t_c = +inf` when `nR = 0`. Always `t_c > t_w`.
pub fn threshold_times(bath: &BathParams) -> ThresholdTimes {
    let nr = bath.nbar_r();
    let t_w = (1.0 + 1.0 / (2.0 * nr + 1.0)).ln() / bath.gamma();
    let t_c = if nr > 0.0 {
        (1.0 + 1.0 / nr).ln() / bath.gamma()
    } else {
        f64::INFINITY
    };
    ThresholdTimes { t_w, t_c }
}

/// The three decoherence stages delimited by the threshold times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    /// `t < t_w`: negative Wigner and P functions; usable for quantum
    /// computational speed-up.
    QuantumSpeedup,
    /// `t_w <= t < t_c`: positive Wigner function, negative P function
    /// (bound universal states).
    BoundUniversal,
    /// `t >= t_c`: the P function is a genuine probability density.
    Classical,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeLabel::QuantumSpeedup => "quantum-speedup",
            RegimeLabel::BoundUniversal => "bound-universal",
            RegimeLabel::Classical => "classical",
        })
    }
}

/// Which decoherence stage the time `t >= 0` falls into.
pub fn classify_regime(bath: &BathParams, t: f64) -> RegimeLabel {
    let th = threshold_times(bath);
    if t < th.t_w {
        RegimeLabel::QuantumSpeedup
    } else if t < th.t_c {
        RegimeLabel::BoundUniversal
    } else {
        RegimeLabel::Classical
    }
}

/// Mean photon number of the damped mode: `n0 exp(-gamma t) + nT(t)`.
pub fn mean_photon_damped(n0: f64, bath: &BathParams, t: f64) -> f64 {
    let decay = (-bath.gamma() * t).exp();
    n0 * decay + bath.nbar_r() * (1.0 - decay)
}

/// The `gamma t`-dependent quantities every closed form is built from.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Damping {
    /// exp(-gamma t)
    pub decay: f64,
    /// nT(t) = nR (1 - exp(-gamma t))
    pub n_t: f64,
    /// (nR + 1)(1 - exp(-gamma t))
    pub w: f64,
}

impl Damping {
    pub fn at(bath: &BathParams, t: f64) -> Self {
        let decay = (-bath.gamma() * t).exp();
        let fill = -(-bath.gamma() * t).exp_m1(); // 1 - exp(-gamma t), accurate near 0
        Self {
            decay,
            n_t: bath.nbar_r() * fill,
            w: (bath.nbar_r() + 1.0) * fill,
        }
    }
}

/// Damped state of an arbitrary Fock-diagonal input.
///
/// Evaluates the hypergeometric series solution of the master equation with
/// all prefactors absorbed into [`scaled2f1_poly`], so every term is a
/// positive product of factors in [0, 1] and the result is exact at `t = 0`.
/// A zero-temperature bath delegates to [`damped_state_zero_temp`]; beyond
/// `gamma t = 40` the reservoir thermal state is returned directly.
///
/// The output is truncated where the residual `1 - sum(rho_jj)` drops below
/// `cutoff_tol`, which therefore must comfortably exceed the input's own tail
/// mass.
pub fn damped_state_general(
    input: &FockDiagonalState,
    bath: &BathParams,
    t: f64,
    cutoff_tol: f64,
) -> Result<FockDiagonalState, DynError> {
    let gt = bath.gamma() * t;
    if !(t >= 0.0) {
        return Err(DynError::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    if input.tail_mass() > 0.5 * cutoff_tol {
        return Err(DynError::ToleranceUnreachable {
            input_tail: input.tail_mass(),
            requested: cutoff_tol,
        });
    }
    if gt == 0.0 {
        return Ok(input.clone());
    }
    if gt >= GAMMA_T_ASYMPTOTIC {
        return Ok(FockDiagonalState::thermal(
            ThermalParams::new(bath.nbar_r()).expect("bath occupancy is valid"),
            cutoff_tol,
        )?);
    }
    if bath.nbar_r() == 0.0 {
        let d = Damping::at(bath, t);
        return damped_state_zero_temp(input, d.decay, cutoff_tol);
    }

    let d = Damping::at(bath, t);
    let denom = d.n_t + 1.0;
    // Normalized variables, all in [0, 1).
    let u_hat = d.w * d.n_t / (denom * denom);
    let c_hat = d.decay / (denom * denom);
    let w_hat = d.w / denom;
    let nt_hat = d.n_t / denom;

    let p_in = input.probs();
    let mut probs = Vec::new();
    let mut total = CompensatedSum::new();
    let mut j = 0usize;
    loop {
        let mut row = CompensatedSum::new();
        for (l, &p) in p_in.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let term = if l >= j {
                w_hat.powi((l - j) as i32) * scaled2f1_poly(j as u32, l as u32, u_hat, c_hat)
            } else {
                nt_hat.powi((j - l) as i32) * scaled2f1_poly(l as u32, j as u32, u_hat, c_hat)
            };
            row.add(p * term);
        }
        let rho_jj = row.value() / denom;
        probs.push(rho_jj);
        total.add(rho_jj);
        if 1.0 - total.value() <= cutoff_tol {
            break;
        }
        j += 1;
        if j > MAX_CUTOFF {
            return Err(DynError::CutoffExceeded);
        }
    }
    let tail = (1.0 - total.value()).max(0.0);
    Ok(FockDiagonalState::new(probs, tail, cutoff_tol)?)
}

/// Binomial damping by a zero-temperature reservoir,
///
/// ```text
/// rho_jj = Σ_{l>=j} C(l,j) p_l decay^j (1 - decay)^{l-j},
/// ```
///
/// where `decay = exp(-gamma t)`; with `decay` read as a detector quantum
/// efficiency the same formula describes photon counting losses.
pub fn damped_state_zero_temp(
    input: &FockDiagonalState,
    decay: f64,
    cutoff_tol: f64,
) -> Result<FockDiagonalState, DynError> {
    if !(0.0..=1.0).contains(&decay) {
        return Err(DynError::InvalidParameter(format!(
            "decay must lie in [0, 1], got {decay}"
        )));
    }
    let p_in = input.probs();
    let len = p_in.len();
    let loss = 1.0 - decay;
    let mut probs = vec![0.0; len];
    for (j, slot) in probs.iter_mut().enumerate() {
        // b_l = C(l,j) decay^j (1-decay)^{l-j}, built up from l = j.
        let mut b = decay.powi(j as i32);
        let mut acc = CompensatedSum::new();
        for l in j..len {
            acc.add(p_in[l] * b);
            b *= loss * (l + 1) as f64 / ((l + 1 - j) as f64);
        }
        *slot = acc.value();
    }
    // The map is trace preserving, so the output tail equals the input's.
    let mut total = CompensatedSum::new();
    probs.iter().for_each(|&p| total.add(p));
    let tail = (1.0 - total.value()).max(0.0);
    Ok(FockDiagonalState::new(
        probs,
        tail,
        cutoff_tol.max(input.tail_mass() * 2.0 + 1e-15),
    )?)
}

/// Intermediates of the damped photon-added-thermal closed form, in terms of
/// the evolved thermal-like scale `V = n exp(-gamma t) + nT(t)`.
#[derive(Debug, Clone, Copy)]
struct PatsDamping {
    /// V / (V + 1)
    v_hat: f64,
    /// w / (V + 1)
    w_hat: f64,
    /// w V / (V+1)^2
    u_hat: f64,
    /// (n + 1) exp(-gamma t) / (V+1)^2
    c_hat: f64,
    /// V + 1
    denom: f64,
}

impl PatsDamping {
    fn at(params: &PatsParams, bath: &BathParams, t: f64) -> Self {
        let d = Damping::at(bath, t);
        let v = params.nbar() * d.decay + d.n_t;
        let denom = v + 1.0;
        Self {
            v_hat: v / denom,
            w_hat: d.w / denom,
            u_hat: d.w * v / (denom * denom),
            c_hat: (params.nbar() + 1.0) * d.decay / (denom * denom),
            denom,
        }
    }

    /// rho_jj(t) of the damped M-photon-added thermal state.
    fn rho_jj(&self, m: u32, j: usize) -> f64 {
        let jm = j as u32;
        if jm >= m {
            self.v_hat.powi((jm - m) as i32) * scaled2f1_poly(m, jm, self.u_hat, self.c_hat)
                / self.denom
        } else {
            self.w_hat.powi((m - jm) as i32) * scaled2f1_poly(jm, m, self.u_hat, self.c_hat)
                / self.denom
        }
    }
}

/// Damped M-photon-added thermal state in closed form.
///
/// Agrees elementwise with [`damped_state_general`] applied to
/// [`FockDiagonalState::pats`] and with the RK4 oracle; see
/// [`crate::verify`]. Valid for any `nbar_r >= 0`, including the
/// zero-temperature bath.
pub fn damped_pats(
    params: &PatsParams,
    bath: &BathParams,
    t: f64,
    cutoff_tol: f64,
) -> Result<FockDiagonalState, DynError> {
    if !(t >= 0.0) {
        return Err(DynError::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    let gt = bath.gamma() * t;
    if gt == 0.0 {
        return Ok(FockDiagonalState::pats(*params, cutoff_tol)?);
    }
    if gt >= GAMMA_T_ASYMPTOTIC {
        return Ok(FockDiagonalState::thermal(
            ThermalParams::new(bath.nbar_r()).expect("bath occupancy is valid"),
            cutoff_tol,
        )?);
    }
    let pd = PatsDamping::at(params, bath, t);
    let m = params.m_added();
    let mut probs = Vec::new();
    let mut total = CompensatedSum::new();
    let mut j = 0usize;
    loop {
        let rho = pd.rho_jj(m, j);
        probs.push(rho);
        total.add(rho);
        if j >= m as usize && 1.0 - total.value() <= cutoff_tol {
            break;
        }
        j += 1;
        if j > MAX_CUTOFF {
            return Err(DynError::CutoffExceeded);
        }
    }
    let tail = (1.0 - total.value()).max(0.0);
    Ok(FockDiagonalState::new(probs, tail, cutoff_tol)?)
}

/// Overlap of the damped state with its own reference Gaussian,
///
/// ```text
/// Tr[rho(t) rho_G(t)] = (N_t + nT + 1 - e)^M / (N_t + nT + n e + 1)^{M+1},
/// ```
///
/// with `e = exp(-gamma t)` and `N_t` the damped mean photon number. Tends to
/// the thermal purity `1/(2 nR + 1)` as `t -> inf`.
pub fn overlap_damped_pats(params: &PatsParams, bath: &BathParams, t: f64) -> f64 {
    let d = Damping::at(bath, t);
    let n_t = params.mean_photon() * d.decay + d.n_t;
    let num = n_t + d.n_t + 1.0 - d.decay;
    let den = n_t + d.n_t + params.nbar() * d.decay + 1.0;
    // num < den always; powering the ratio keeps huge M finite.
    (num / den).powi(params.m_added() as i32) / den
}

/// Purity of the damped M-photon-added thermal state via the terminating
/// hypergeometric closed form,
///
/// ```text
/// Tr[rho(t)^2] = h^{2M} 2F1(-M, -M; 1; q^2/h^2) / (q + h)^{2M+1},
/// h = (n+1) e,   q = 2 nT + n e + 1 - e,
/// ```
///
/// evaluated in the absorbed form, finite for all t including the `h -> 0`
/// equilibrium limit where it tends to `1/(2 nR + 1)`.
pub fn purity_damped_pats(params: &PatsParams, bath: &BathParams, t: f64) -> f64 {
    let (h, q) = purity_scales(params, bath, t);
    let d2 = q + h; // = 2 nT + 2 n e + 1
    let h_hat = h / d2;
    let q_hat = q / d2;
    scaled2f1_poly(
        params.m_added(),
        params.m_added(),
        h_hat * h_hat,
        q_hat * q_hat,
    ) / d2
}

/// The same purity through the Legendre-polynomial representation of the
/// squared hypergeometric polynomial; an algebraically independent route used
/// to cross-check [`purity_damped_pats`].
pub fn purity_damped_pats_legendre(params: &PatsParams, bath: &BathParams, t: f64) -> f64 {
    let (h, q) = purity_scales(params, bath, t);
    let d2 = q + h;
    let x_hat = (h * h + q * q) / (d2 * d2);
    let tau_hat = (h - q) / d2; // (h^2 - q^2)/d2^2 after the (h+q) cancellation
    scaled_legendre(params.m_added(), x_hat, tau_hat) / d2
}

fn purity_scales(params: &PatsParams, bath: &BathParams, t: f64) -> (f64, f64) {
    let d = Damping::at(bath, t);
    let h = (params.nbar() + 1.0) * d.decay;
    let q = 2.0 * d.n_t + params.nbar() * d.decay + 1.0 - d.decay;
    (h, q)
}

/// Homogenized Legendre polynomial `tau^m P_m(x / tau)` by the scaled
/// three-term recurrence; finite at `tau = 0`.
fn scaled_legendre(m: u32, x: f64, tau: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for n in 1..m {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * x * cur - nf * tau * tau * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Purity of the reference Gaussian of the damped state, `1/(2 N_t + 1)`.
pub fn gaussian_purity_damped(params: &PatsParams, bath: &BathParams, t: f64) -> f64 {
    1.0 / (2.0 * mean_photon_damped(params.mean_photon(), bath, t) + 1.0)
}

/// One point of an entropy trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub t: f64,
    pub entropy_state: f64,
    pub entropy_gaussian: f64,
}

/// Von Neumann entropy of the damped state and of its reference Gaussian at
/// each grid time. The Gaussian trace is monotone between its endpoint
/// values; the state trace may develop a transient maximum.
pub fn entropy_trace(
    params: &PatsParams,
    bath: &BathParams,
    t_grid: &[f64],
    cutoff_tol: f64,
) -> Result<Vec<EntropyPoint>, DynError> {
    use rayon::prelude::*;
    t_grid
        .par_iter()
        .map(|&t| {
            let state = damped_pats(params, bath, t, cutoff_tol)?;
            Ok(EntropyPoint {
                t,
                entropy_state: state.von_neumann_entropy(),
                entropy_gaussian: crate::states::thermal_entropy(mean_photon_damped(
                    params.mean_photon(),
                    bath,
                    t,
                )),
            })
        })
        .collect()
}

const ENTROPY_SCAN_POINTS: usize = 200;
const ENTROPY_SCAN_GT_MIN: f64 = 1e-3;

/// Interior prominence (nats) below which a grid maximum is treated as the
/// flat approach to the equilibrium plateau rather than a genuine extremum.
const ENTROPY_MAX_PROMINENCE: f64 = 1e-12;

/// Locate the transient maximum of the damped-state entropy, if any.
///
/// Scans 200 log-spaced points over `gamma t` in [1e-3, 40] and refines an
/// interior maximum by golden-section search to `tol_t` in absolute time.
/// Returns `None` when the trace is monotone on the window (the maximum sits
/// on the boundary or has no prominence above grid noise).
pub fn entropy_max(
    params: &PatsParams,
    bath: &BathParams,
    tol_t: f64,
) -> Result<Option<(f64, f64)>, DynError> {
    if !(tol_t > 0.0) {
        return Err(DynError::InvalidParameter(format!(
            "search tolerance must be > 0, got {tol_t}"
        )));
    }
    let cutoff_tol = 1e-13;
    let log_min = ENTROPY_SCAN_GT_MIN.ln();
    let log_max = GAMMA_T_ASYMPTOTIC.ln();
    let ts: Vec<f64> = (0..ENTROPY_SCAN_POINTS)
        .map(|i| {
            (log_min + (log_max - log_min) * i as f64 / (ENTROPY_SCAN_POINTS - 1) as f64).exp()
                / bath.gamma()
        })
        .collect();
    let trace = entropy_trace(params, bath, &ts, cutoff_tol)?;
    let (i_max, _) = trace
        .iter()
        .enumerate()
        .max_by(|a, b| {
            a.1.entropy_state
                .partial_cmp(&b.1.entropy_state)
                .expect("entropies are finite")
        })
        .expect("scan grid is non-empty");
    if i_max == 0 || i_max == trace.len() - 1 {
        return Ok(None);
    }
    let s_mid = trace[i_max].entropy_state;
    if s_mid - trace[i_max - 1].entropy_state <= ENTROPY_MAX_PROMINENCE
        || s_mid - trace[i_max + 1].entropy_state <= ENTROPY_MAX_PROMINENCE
    {
        return Ok(None);
    }

    let entropy_at = |t: f64| -> Result<f64, DynError> {
        Ok(damped_pats(params, bath, t, cutoff_tol)?.von_neumann_entropy())
    };
    let (mut lo, mut hi) = (ts[i_max - 1], ts[i_max + 1]);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = entropy_at(x1)?;
    let mut f2 = entropy_at(x2)?;
    while hi - lo > tol_t {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = entropy_at(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = entropy_at(x1)?;
        }
    }
    let t_max = 0.5 * (lo + hi);
    Ok(Some((t_max, entropy_at(t_max)?)))
}

/// Permitted drift of the total probability in [`ode_oracle`].
pub const ODE_LEAK_LIMIT: f64 = 1e-8;

/// Integrate the birth-death chain with classical fixed-step RK4.
///
/// This is the independent ground truth for the analytic evolutions: it never
/// touches the hypergeometric machinery. `dt` is an upper bound on the step
/// (the actual step divides `t` evenly); the caller audits accuracy by
/// halving `dt` and comparing. The truncation window is the input cutoff plus
/// a thermal-equilibrium margin, and an error is raised if more than
/// [`ODE_LEAK_LIMIT`] of probability leaks through it.
pub fn ode_oracle(
    input: &FockDiagonalState,
    bath: &BathParams,
    t: f64,
    dt: f64,
) -> Result<FockDiagonalState, DynError> {
    if !(t >= 0.0 && dt > 0.0) {
        return Err(DynError::InvalidParameter(format!(
            "need t >= 0 and dt > 0, got t = {t}, dt = {dt}"
        )));
    }
    let dim = ode_dimension(input, bath);
    let mut p = vec![0.0; dim];
    p[..input.probs().len()].copy_from_slice(input.probs());

    let start_mass: f64 = 1.0 - input.tail_mass();
    if t > 0.0 {
        let n_steps = (t / dt).ceil() as usize;
        let h = t / n_steps as f64;
        let gamma = bath.gamma();
        let nr = bath.nbar_r();
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        let rhs = |p: &[f64], out: &mut [f64]| {
            for j in 0..dim {
                let jf = j as f64;
                let up = if j + 1 < dim { p[j + 1] } else { 0.0 };
                let down = if j > 0 { p[j - 1] } else { 0.0 };
                out[j] = gamma * (nr + 1.0) * ((jf + 1.0) * up - jf * p[j])
                    + gamma * nr * (jf * down - (jf + 1.0) * p[j]);
            }
        };
        for _ in 0..n_steps {
            rhs(&p, &mut k1);
            for j in 0..dim {
                tmp[j] = p[j] + 0.5 * h * k1[j];
            }
            rhs(&tmp, &mut k2);
            for j in 0..dim {
                tmp[j] = p[j] + 0.5 * h * k2[j];
            }
            rhs(&tmp, &mut k3);
            for j in 0..dim {
                tmp[j] = p[j] + h * k3[j];
            }
            rhs(&tmp, &mut k4);
            for j in 0..dim {
                p[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
    }

    let mut total = CompensatedSum::new();
    p.iter().for_each(|&x| total.add(x));
    let drift = (total.value() - start_mass).abs();
    if drift > ODE_LEAK_LIMIT {
        return Err(DynError::ProbabilityLeak {
            drift,
            limit: ODE_LEAK_LIMIT,
        });
    }
    // RK4 noise can leave sub-1e-12 negatives in the far tail.
    for x in p.iter_mut() {
        if *x < 0.0 {
            if *x >= -1e-12 {
                *x = 0.0;
            } else {
                return Err(DynError::ProbabilityLeak {
                    drift: -*x,
                    limit: 1e-12,
                });
            }
        }
    }
    let mut total = CompensatedSum::new();
    p.iter().for_each(|&x| total.add(x));
    let tail = (1.0 - total.value()).max(0.0);
    Ok(FockDiagonalState::new(p, tail, 1e-6)?)
}

/// Size of the truncation window [`ode_oracle`] integrates on: the input
/// cutoff plus room for the reservoir's thermal equilibrium tail.
pub fn ode_dimension(input: &FockDiagonalState, bath: &BathParams) -> usize {
    input.probs().len() + thermal_margin(bath.nbar_r()) + 20
}

/// Truncation length at which the reservoir thermal tail falls below 1e-12.
fn thermal_margin(nbar_r: f64) -> usize {
    if nbar_r == 0.0 {
        return 0;
    }
    let q = nbar_r / (nbar_r + 1.0);
    ((-12.0 * std::f64::consts::LN_10) / q.ln()).ceil() as usize
}
