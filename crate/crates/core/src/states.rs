//! Fock-diagonal single-mode states.
//!
//! A state diagonal in the photon-number basis is fully described by its
//! photon-number distribution `{p_l}`. Two families are built here:
//!
//! - the thermal state, `p_l = N^l / (N+1)^{l+1}` for mean occupancy `N`;
//! - the M-photon-added thermal state, `p_l = C(l,M) n^{l-M} / (n+1)^{l+1}`,
//!   obtained by applying M creation operators to a thermal state with mean
//!   occupancy `n` and renormalizing. For `n = 0` it degenerates to the Fock
//!   state `|M>`, for `M = 0` to the thermal state itself.
//!
//! Truncation is tail-mass-driven, never a fixed length: the cutoff is chosen
//! from the analytic geometric / negative-binomial tail bound and the
//! discarded mass is recorded on the state, so every downstream sum's
//! truncation error stays auditable. Probabilities are generated by forward
//! ratio recurrences, which survive M ~ 100 where factorials overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::CompensatedSum;

/// Negative round-off below this magnitude is clamped to zero; anything more
/// negative is rejected as corrupt.
pub const PROB_NEG_TOL: f64 = 1e-14;

/// Allowed deviation of `sum(p) + tail_mass` from exactly one.
pub const NORM_TOL: f64 = 1e-10;

/// Default bound on the truncated tail mass.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Hard cap on the truncation cutoff.
pub const MAX_CUTOFF: usize = 1_000_000;

/// Errors from state construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("probability p_{index} = {value} is below -{PROB_NEG_TOL}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("sum(p) + tail_mass = {total} deviates from 1 by more than {NORM_TOL}")]
    NotNormalized { total: f64 },
    #[error("tail mass {tail_mass} exceeds the configured bound {bound}")]
    TailTooLarge { tail_mass: f64, bound: f64 },
    #[error("required cutoff exceeds the hard cap of {MAX_CUTOFF}")]
    CutoffExceeded,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("probabilities must be a non-empty list of finite values")]
    MalformedProbabilities,
}

/// Thermal-state parameters: the mean photon occupancy `<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    mean_occupancy: f64,
}

impl ThermalParams {
    pub fn new(mean_occupancy: f64) -> Result<Self, StateError> {
        if !mean_occupancy.is_finite() || mean_occupancy < 0.0 {
            return Err(StateError::InvalidParameter(format!(
                "mean occupancy must be finite and >= 0, got {mean_occupancy}"
            )));
        }
        Ok(Self { mean_occupancy })
    }

    pub fn mean_occupancy(&self) -> f64 {
        self.mean_occupancy
    }
}

/// Photon-added thermal state parameters: thermal occupancy `n` and the
/// number of added photons `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatsParams {
    nbar: f64,
    m_added: u32,
}

impl PatsParams {
    pub fn new(nbar: f64, m_added: u32) -> Result<Self, StateError> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(StateError::InvalidParameter(format!(
                "thermal occupancy must be finite and >= 0, got {nbar}"
            )));
        }
        Ok(Self { nbar, m_added })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn m_added(&self) -> u32 {
        self.m_added
    }

    /// Mean photon number of the state: `n (M+1) + M`.
    pub fn mean_photon(&self) -> f64 {
        self.nbar * (self.m_added as f64 + 1.0) + self.m_added as f64
    }
}

/// A truncated photon-number distribution with declared tail mass.
///
/// Invariants, enforced at construction:
/// - every `p_l >= 0` (round-off down to -1e-14 is clamped, worse is an error),
/// - `sum(p) + tail_mass = 1` within 1e-10,
/// - `tail_mass` does not exceed the bound it was built under.
///
/// Immutable after construction; derived functionals are computed on demand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockDiagonalState {
    probs: Vec<f64>,
    tail_mass: f64,
}

impl FockDiagonalState {
    /// Validate and build a state. `tail_tol` is the bound the tail mass is
    /// held to (use [`DEFAULT_TAIL_TOL`] unless the caller tracks its own).
    pub fn new(mut probs: Vec<f64>, tail_mass: f64, tail_tol: f64) -> Result<Self, StateError> {
        if probs.is_empty() || probs.iter().any(|p| !p.is_finite()) || !tail_mass.is_finite() {
            return Err(StateError::MalformedProbabilities);
        }
        for (index, p) in probs.iter_mut().enumerate() {
            if *p < 0.0 {
                if *p >= -PROB_NEG_TOL {
                    *p = 0.0;
                } else {
                    return Err(StateError::NegativeProbability { index, value: *p });
                }
            }
        }
        if tail_mass < 0.0 || tail_mass > tail_tol {
            return Err(StateError::TailTooLarge {
                tail_mass,
                bound: tail_tol,
            });
        }
        let mut sum = CompensatedSum::new();
        probs.iter().for_each(|&p| sum.add(p));
        let total = sum.value() + tail_mass;
        if (total - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { total });
        }
        Ok(Self { probs, tail_mass })
    }

    /// Build from an exactly normalized finite distribution (tail mass zero).
    pub fn from_probs(probs: Vec<f64>) -> Result<Self, StateError> {
        Self::new(probs, 0.0, DEFAULT_TAIL_TOL)
    }

    /// The Fock state `|m>`.
    pub fn fock(m: u32) -> Self {
        let mut probs = vec![0.0; m as usize + 1];
        probs[m as usize] = 1.0;
        Self {
            probs,
            tail_mass: 0.0,
        }
    }

    /// Thermal state with the given mean occupancy, truncated at the smallest
    /// cutoff `L` whose analytic geometric tail `(N/(N+1))^{L+1}` drops to
    /// `cutoff_tol`; the tail mass is set to that analytic value.
    pub fn thermal(params: ThermalParams, cutoff_tol: f64) -> Result<Self, StateError> {
        check_cutoff_tol(cutoff_tol)?;
        let n = params.mean_occupancy();
        if n == 0.0 {
            return Ok(Self::fock(0));
        }
        let q = n / (n + 1.0);
        // Smallest L with q^{L+1} <= tol, estimated in logs then nudged exact.
        let mut len = (cutoff_tol.ln() / q.ln()).ceil().max(1.0) as usize;
        while q.powi(len as i32) > cutoff_tol {
            len += 1;
            if len > MAX_CUTOFF {
                return Err(StateError::CutoffExceeded);
            }
        }
        while len > 1 && q.powi(len as i32 - 1) <= cutoff_tol {
            len -= 1;
        }
        if len > MAX_CUTOFF {
            return Err(StateError::CutoffExceeded);
        }
        let mut probs = Vec::with_capacity(len);
        let mut p = 1.0 / (n + 1.0);
        for _ in 0..len {
            probs.push(p);
            p *= q;
        }
        Self::new(probs, q.powi(len as i32), cutoff_tol)
    }

    /// M-photon-added thermal state, `p_l = C(l,M) n^{l-M} / (n+1)^{l+1}`.
    ///
    /// Above `l = M` this is a negative-binomial shape; the cutoff is chosen
    /// where its geometric tail bound drops below `cutoff_tol` and the tail
    /// mass is the exact residual `1 - sum(p)`.
    pub fn pats(params: PatsParams, cutoff_tol: f64) -> Result<Self, StateError> {
        check_cutoff_tol(cutoff_tol)?;
        let (n, m) = (params.nbar(), params.m_added() as usize);
        if n == 0.0 {
            return Ok(Self::fock(params.m_added()));
        }
        let q = n / (n + 1.0);
        let mut probs = vec![0.0; m];
        let mut sum = CompensatedSum::new();
        let mut p = (n + 1.0).powi(-(m as i32 + 1));
        let mut l = m;
        loop {
            probs.push(p);
            sum.add(p);
            // p_{l+1}/p_l = q (l+1)/(l+1-M); ratios decrease toward q < 1, so
            // once the next ratio is below one the tail is geometrically
            // bounded by next_term * r / (1 - r).
            let ratio_next = q * (l + 1) as f64 / ((l + 1 - m) as f64);
            let next = p * ratio_next;
            let ratio_after = q * (l + 2) as f64 / ((l + 2 - m) as f64);
            if ratio_after < 1.0 && next * ratio_after / (1.0 - ratio_after) + next <= cutoff_tol {
                break;
            }
            p = next;
            l += 1;
            if l - m > MAX_CUTOFF {
                return Err(StateError::CutoffExceeded);
            }
        }
        let tail = (1.0 - sum.value()).max(0.0);
        Self::new(probs, tail, cutoff_tol)
    }

    /// Photon-number probabilities `p_0 ..= p_L`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Truncation cutoff L (largest stored photon number).
    pub fn cutoff(&self) -> usize {
        self.probs.len() - 1
    }

    /// Declared upper bound on the discarded mass `sum_{l > L} p_l`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Mean photon occupancy `<N> = Σ l p_l`.
    pub fn mean_photon(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for (l, &p) in self.probs.iter().enumerate() {
            acc.add(l as f64 * p);
        }
        acc.value()
    }

    /// Purity `Tr(rho^2) = Σ p_l^2`.
    pub fn purity(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &p in &self.probs {
            acc.add(p * p);
        }
        acc.value()
    }

    /// Von Neumann entropy `-Σ p_l ln p_l` in nats, with `0 ln 0 := 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &p in &self.probs {
            if p > 0.0 {
                acc.add(-p * p.ln());
            }
        }
        acc.value()
    }

    /// Parameters of the reference Gaussian state: the thermal state sharing
    /// this state's mean photon occupancy.
    pub fn reference_gaussian(&self) -> ThermalParams {
        ThermalParams {
            mean_occupancy: self.mean_photon().max(0.0),
        }
    }
}

fn check_cutoff_tol(cutoff_tol: f64) -> Result<(), StateError> {
    if !(cutoff_tol > 0.0 && cutoff_tol < 1.0) {
        return Err(StateError::InvalidParameter(format!(
            "cutoff tolerance must lie in (0, 1), got {cutoff_tol}"
        )));
    }
    Ok(())
}

/// Closed form of the thermal (Gaussian) von Neumann entropy,
/// `(N+1) ln(N+1) - N ln N` nats.
pub fn thermal_entropy(mean_occupancy: f64) -> f64 {
    if mean_occupancy <= 0.0 {
        return 0.0;
    }
    let n = mean_occupancy;
    (n + 1.0) * (n + 1.0).ln() - n * n.ln()
}

impl<'de> Deserialize<'de> for FockDiagonalState {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            probs: Vec<f64>,
            tail_mass: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        // Structural invariants only; the tail bound is the producer's contract.
        FockDiagonalState::new(raw.probs, raw.tail_mass, 1.0).map_err(serde::de::Error::custom)
    }
}
