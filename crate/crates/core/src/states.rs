//! Distinguished probe states, written in the normal-mode Fock basis.
//!
//! To inject one of these states into a physical circuit, rotate it with the
//! adjoint of the generator's mixing matrix (see [`crate::fock::mode_rotate`]).

#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use alloc::collections::BTreeMap;

use num_complex::Complex64;

use crate::{
    fock::{TwoModeFockState, MAX_TRUNCATION_LOSS},
    Error, Result,
};

const OCCUPATION_TOL: f64 = 1e-9;

/// Constraint on the total particle number: mean `n_mean`, variance `var`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberBudget {
    n_mean: f64,
    var: f64,
}

impl NumberBudget {
    pub fn new(n_mean: f64, var: f64) -> Result<Self> {
        if !(n_mean > 0.0) || !n_mean.is_finite() {
            return Err(Error::InvalidArgument("mean particle number must be positive"));
        }
        if !(var >= 0.0) || !var.is_finite() {
            return Err(Error::InvalidArgument("number variance must be non-negative"));
        }
        Ok(Self { n_mean, var })
    }

    pub fn n_mean(&self) -> f64 {
        self.n_mean
    }

    /// Variance `ΔN^2`.
    pub fn var(&self) -> f64 {
        self.var
    }

    /// Standard deviation `ΔN`.
    pub fn std_dev(&self) -> f64 {
        self.var.sqrt()
    }
}

/// Corner parameters `σ±` of the variance-plane domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPair {
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

/// `σ± = s ± sqrt(s^2 - 1)` with `s = 1 + 2 ΔN^2 / N^2`.
pub fn sigma(budget: &NumberBudget) -> SigmaPair {
    let n = budget.n_mean();
    let s = 1.0 + 2.0 * budget.var() / (n * n);
    let sigma_plus = s + (s * s - 1.0).max(0.0).sqrt();
    // conjugate root; avoids the cancellation in s - sqrt(s^2 - 1)
    SigmaPair { sigma_plus, sigma_minus: 1.0 / sigma_plus }
}

/// `(|N,0> + e^{i phase} |0,N>) / sqrt(2)`.
pub fn noon(n: u32, phase: f64) -> Result<TwoModeFockState> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON state needs at least one particle"));
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    TwoModeFockState::from_amplitudes(
        [((n, 0), Complex64::new(h, 0.0)), ((0, n), Complex64::from_polar(h, phase))],
        n,
    )
}

/// How non-integer quasi-NOON occupations are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occupation {
    /// Reject budgets whose occupations are not within `1e-9` of integers.
    #[default]
    Strict,
    /// Round the occupations and report the budget actually realised.
    Rounded,
}

/// A quasi-NOON state together with the number budget it realises.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNoon {
    pub state: TwoModeFockState,
    /// Occupations `(N(1+σ+)/2, N(1+σ-)/2)` placed in the two branches.
    pub occupations: (u32, u32),
    /// Budget realised by the returned state; differs from the request only
    /// in rounded mode.
    pub realized: NumberBudget,
}

/// `sqrt(1/(1+σ+)) |N(1+σ+)/2, 0> + sqrt(1/(1+σ-)) e^{i phase} |0, N(1+σ-)/2>`.
pub fn quasi_noon(budget: &NumberBudget, phase: f64, mode: Occupation) -> Result<QuasiNoon> {
    let sig = sigma(budget);
    let n = budget.n_mean();
    let occ_plus = 0.5 * n * (1.0 + sig.sigma_plus);
    let occ_minus = 0.5 * n * (1.0 + sig.sigma_minus);
    let (m, k) = (occ_plus.round(), occ_minus.round());
    if mode == Occupation::Strict
        && ((occ_plus - m).abs() > OCCUPATION_TOL || (occ_minus - k).abs() > OCCUPATION_TOL)
    {
        return Err(Error::NonIntegerOccupation { plus: occ_plus, minus: occ_minus });
    }
    if m < 1.0 || k < 1.0 {
        return Err(Error::NonIntegerOccupation { plus: occ_plus, minus: occ_minus });
    }
    let (m, k) = (m as u32, k as u32);
    let w_plus = 1.0 / (1.0 + sig.sigma_plus);
    let w_minus = 1.0 / (1.0 + sig.sigma_minus);
    let state = TwoModeFockState::from_amplitudes(
        [
            ((m, 0), Complex64::new(w_plus.sqrt(), 0.0)),
            ((0, k), Complex64::from_polar(w_minus.sqrt(), phase)),
        ],
        m.max(k),
    )?;
    let realized = match mode {
        Occupation::Strict => *budget,
        Occupation::Rounded => {
            let mo = crate::fock::number_moments(&state);
            NumberBudget::new(mo.mean_total, mo.var_total.max(0.0))?
        }
    };
    Ok(QuasiNoon { state, occupations: (m, k), realized })
}

/// Linear phase pattern of the Poissonian cat branches:
/// `phase(m, 0) = m·step_plus + offset_plus`, `phase(0, n) = n·step_minus + offset_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CatPhases {
    pub step_plus: f64,
    pub offset_plus: f64,
    pub step_minus: f64,
    pub offset_minus: f64,
}

/// Weights of the Poissonian construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatWeights {
    pub mu_plus: f64,
    pub mu_minus: f64,
    /// Poisson mean of the `+` branch, `N / (2 μ+)`.
    pub mean_plus: f64,
    /// Poisson mean of the `-` branch, `N / (2 μ-)`.
    pub mean_minus: f64,
}

/// `μ± = (1 ± sqrt((ΔN² - N)/(N² + ΔN² - N))) / 2`.
pub fn cat_weights(budget: &NumberBudget) -> Result<CatWeights> {
    let (n, var) = (budget.n_mean(), budget.var());
    if var < n {
        return Err(Error::VarianceTooSmall { var, n_mean: n });
    }
    let root = ((var - n) / (n * n + var - n)).sqrt();
    let mu_plus = 0.5 * (1.0 + root);
    let mu_minus = 0.5 * (1.0 - root);
    Ok(CatWeights { mu_plus, mu_minus, mean_plus: n / (2.0 * mu_plus), mean_minus: n / (2.0 * mu_minus) })
}

/// Three-component form `c0 |0,0> + sqrt(μ) e^{iφ0} |α,0> + sqrt(1-μ) e^{iφ̃0} |0,α̃>`
/// of the Poissonian cat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatComponents {
    pub vacuum: Complex64,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub weight_plus: Complex64,
    pub weight_minus: Complex64,
}

pub fn cat_components(budget: &NumberBudget, phases: &CatPhases) -> Result<CatComponents> {
    let w = cat_weights(budget)?;
    let p0 = (-w.mean_plus).exp();
    let q0 = (-w.mean_minus).exp();
    let weight_plus = Complex64::from_polar(w.mu_plus.sqrt(), phases.offset_plus);
    let weight_minus = Complex64::from_polar(w.mu_minus.sqrt(), phases.offset_minus);
    let vacuum = Complex64::new((w.mu_plus * p0 + w.mu_minus * q0).sqrt(), 0.0)
        - weight_plus * (0.5 * -w.mean_plus).exp()
        - weight_minus * (0.5 * -w.mean_minus).exp();
    Ok(CatComponents {
        vacuum,
        alpha_plus: Complex64::from_polar(w.mean_plus.sqrt(), phases.step_plus),
        alpha_minus: Complex64::from_polar(w.mean_minus.sqrt(), phases.step_minus),
        weight_plus,
        weight_minus,
    })
}

/// Poissonian Schrodinger-cat state with a vacuum component.
///
/// The `|0,0>` amplitude collects both branches,
/// `sqrt(μ p0 + (1-μ) p̃0)`, and carries no phase.
pub fn poissonian_cat(budget: &NumberBudget, phases: &CatPhases, cutoff: u32) -> Result<TwoModeFockState> {
    let w = cat_weights(budget)?;
    let mut amps = BTreeMap::new();
    let p0 = (-w.mean_plus).exp();
    let q0 = (-w.mean_minus).exp();
    let mut kept = w.mu_plus * p0 + w.mu_minus * q0;
    amps.insert((0, 0), Complex64::new(kept.sqrt(), 0.0));
    for k in 1..=cutoff {
        let kf = k as f64;
        let p = (kf * w.mean_plus.ln() - w.mean_plus - libm::lgamma(kf + 1.0)).exp();
        let q = (kf * w.mean_minus.ln() - w.mean_minus - libm::lgamma(kf + 1.0)).exp();
        let a = w.mu_plus * p;
        let b = w.mu_minus * q;
        kept += a + b;
        if a > 0.0 {
            amps.insert((k, 0), Complex64::from_polar(a.sqrt(), kf * phases.step_plus + phases.offset_plus));
        }
        if b > 0.0 {
            amps.insert((0, k), Complex64::from_polar(b.sqrt(), kf * phases.step_minus + phases.offset_minus));
        }
    }
    let loss = (1.0 - kept).max(0.0);
    let state = TwoModeFockState::from_truncated(amps, cutoff, loss)?;
    state.check_truncation(MAX_TRUNCATION_LOSS)?;
    Ok(state)
}

/// Single-mode squeezed vacuum in mode `+`, vacuum in mode `-`.
///
/// The sign convention matches the covariance matrix
/// `diag(e^{2r}, 1, e^{-2r}, 1) / 2`: amplitudes
/// `sqrt((2k)!) / (2^k k!) · tanh(r)^k / sqrt(cosh r)` on `|2k, 0>`.
pub fn squeezed_vacuum_fock(r: f64, cutoff: u32) -> Result<TwoModeFockState> {
    squeezed_vacuum_fock_with_limit(r, cutoff, MAX_TRUNCATION_LOSS)
}

/// As [`squeezed_vacuum_fock`] with an explicit truncation limit.
pub fn squeezed_vacuum_fock_with_limit(r: f64, cutoff: u32, limit: f64) -> Result<TwoModeFockState> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument("squeezing must be finite"));
    }
    let mut amps = BTreeMap::new();
    if r == 0.0 {
        amps.insert((0, 0), Complex64::new(1.0, 0.0));
        return TwoModeFockState::from_truncated(amps, cutoff, 0.0);
    }
    let t = r.tanh();
    let ln_t = t.abs().ln();
    let sign = t.signum();
    let ln_norm = -0.5 * r.cosh().ln();
    // sum in increasing k, the tail is monotone; compensated summation keeps
    // the reported loss meaningful near 1e-12
    let mut kept = 0.0f64;
    let mut carry = 0.0f64;
    for k in 0..=(cutoff / 2) {
        let kf = k as f64;
        let ln_amp = ln_norm + kf * ln_t + 0.5 * libm::lgamma(2.0 * kf + 1.0)
            - kf * core::f64::consts::LN_2
            - libm::lgamma(kf + 1.0);
        let amp = ln_amp.exp();
        let y = amp * amp - carry;
        let tmp = kept + y;
        carry = (tmp - kept) - y;
        kept = tmp;
        if amp > 0.0 {
            let s = if k % 2 == 1 { sign } else { 1.0 };
            amps.insert((2 * k, 0), Complex64::new(s * amp, 0.0));
        }
    }
    let loss = squeezed_tail(t, cutoff / 2 + 1, r.cosh()).unwrap_or((1.0 - kept).max(0.0));
    let state = TwoModeFockState::from_truncated(amps, cutoff, loss)?;
    state.check_truncation(limit)?;
    Ok(state)
}

/// Discarded weight `Σ_{k >= first} C(2k,k) (t²/4)^k / cosh r`, summed
/// directly so that tiny losses are not swamped by rounding in `1 - kept`.
fn squeezed_tail(t: f64, first: u32, cosh_r: f64) -> Option<f64> {
    let t2 = t * t;
    if t2 >= 1.0 {
        return None;
    }
    let kf = first as f64;
    let ln_first = kf * t2.ln() + libm::lgamma(2.0 * kf + 1.0) - 2.0 * libm::lgamma(kf + 1.0)
        - 2.0 * kf * core::f64::consts::LN_2;
    let mut term = ln_first.exp() / cosh_r;
    let mut total = 0.0;
    let mut k = kf;
    for _ in 0..1_000_000 {
        total += term;
        // ratio of consecutive terms: t² (2k+1) / (2k+2)
        term *= t2 * (2.0 * k + 1.0) / (2.0 * k + 2.0);
        k += 1.0;
        if term < total * 1e-17 || term == 0.0 {
            return Some(total);
        }
    }
    Some(total)
}

/// Product coherent state `|α+> ⊗ |α->` truncated at `cutoff` total
/// particles.
pub fn coherent(alpha_plus: Complex64, alpha_minus: Complex64, cutoff: u32) -> Result<TwoModeFockState> {
    let mut amps = BTreeMap::new();
    let (np, nm) = (alpha_plus.norm_sqr(), alpha_minus.norm_sqr());
    let mut kept = 0.0;
    let single = |alpha: Complex64, nbar: f64, k: u32| -> Complex64 {
        if k == 0 {
            return Complex64::new((-0.5 * nbar).exp(), 0.0);
        }
        if nbar == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let kf = k as f64;
        let modulus = (-0.5 * nbar + 0.5 * kf * nbar.ln() - 0.5 * libm::lgamma(kf + 1.0)).exp();
        Complex64::from_polar(modulus, kf * alpha.arg())
    };
    for m in 0..=cutoff {
        let am = single(alpha_plus, np, m);
        if am == Complex64::new(0.0, 0.0) {
            continue;
        }
        for n in 0..=(cutoff - m) {
            let an = single(alpha_minus, nm, n);
            let a = am * an;
            if a.norm_sqr() > 0.0 {
                kept += a.norm_sqr();
                amps.insert((m, n), a);
            }
        }
    }
    let state = TwoModeFockState::from_truncated(amps, cutoff, (1.0 - kept).max(0.0))?;
    state.check_truncation(MAX_TRUNCATION_LOSS)?;
    Ok(state)
}

/// Smallest even cutoff for which the squeezed vacuum of parameter `r`
/// loses at most `limit`, bounded by `max_cutoff`.
pub fn squeezed_vacuum_cutoff(r: f64, limit: f64, max_cutoff: u32) -> Option<u32> {
    let t = r.tanh();
    let cosh_r = r.cosh();
    (0..=max_cutoff / 2)
        .map(|k| 2 * k)
        .find(|&c| squeezed_tail(t, c / 2 + 1, cosh_r).is_some_and(|l| l <= limit))
}
