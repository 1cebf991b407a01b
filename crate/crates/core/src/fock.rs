//! Sparse truncated two-mode Fock states.
//!
//! Amplitudes are keyed by `(m, n)`, the occupations of the two modes. All
//! moment and QFI routines treat `|amplitude|^2` as a classical distribution
//! `P(m, n)`; phases never enter.

#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{circuit::GeneratorSpectrum, linalg::Mat2, Eps, Error, Result};

/// Largest truncation loss accepted by verification paths.
pub const MAX_TRUNCATION_LOSS: f64 = 1e-8;

const UNITARY_TOL: f64 = 1e-12;

/// A normalised two-mode pure state with at most `cutoff` particles.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState {
    amplitudes: BTreeMap<(u32, u32), Complex64>,
    cutoff: u32,
    truncation_loss: f64,
}

impl TwoModeFockState {
    /// Build a state from raw amplitudes. Entries with `m + n > cutoff` are
    /// dropped and their weight is recorded as truncation loss; the remainder
    /// is renormalised.
    pub fn from_amplitudes<I>(amplitudes: I, cutoff: u32) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut kept = BTreeMap::new();
        let mut dropped = 0.0;
        for ((m, n), a) in amplitudes {
            if m as u64 + n as u64 > cutoff as u64 {
                dropped += a.norm_sqr();
            } else if a != Complex64::new(0.0, 0.0) {
                *kept.entry((m, n)).or_insert(Complex64::new(0.0, 0.0)) += a;
            }
        }
        let norm: f64 = kept.values().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("state has zero norm"));
        }
        let loss = dropped / (norm + dropped);
        Ok(Self::renormalised(kept, cutoff, loss))
    }

    /// Build a state from amplitudes that are already truncated at `cutoff`
    /// and whose discarded weight `truncation_loss` is known analytically.
    /// The kept amplitudes are renormalised explicitly.
    pub fn from_truncated(
        amplitudes: BTreeMap<(u32, u32), Complex64>,
        cutoff: u32,
        truncation_loss: f64,
    ) -> Result<Self> {
        if amplitudes.keys().any(|&(m, n)| m as u64 + n as u64 > cutoff as u64) {
            return Err(Error::InvalidArgument("amplitude index exceeds cutoff"));
        }
        let norm: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("state has zero norm"));
        }
        Ok(Self::renormalised(amplitudes, cutoff, truncation_loss.max(0.0)))
    }

    fn renormalised(mut amps: BTreeMap<(u32, u32), Complex64>, cutoff: u32, loss: f64) -> Self {
        let norm: f64 = amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.values_mut() {
            *a /= norm;
        }
        Self { amplitudes: amps, cutoff, truncation_loss: loss }
    }

    /// The Fock state `|m, n>`.
    pub fn basis(m: u32, n: u32) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert((m, n), Complex64::new(1.0, 0.0));
        Self { amplitudes: amps, cutoff: m + n, truncation_loss: 0.0 }
    }

    pub fn vacuum() -> Self {
        Self::basis(0, 0)
    }

    pub fn amplitudes(&self) -> &BTreeMap<(u32, u32), Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: u32, n: u32) -> Complex64 {
        self.amplitudes.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Norm discarded by truncation before renormalisation.
    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    /// Fail with `TruncationExceeded` if more than `limit` was discarded.
    pub fn check_truncation(&self, limit: f64) -> Result<()> {
        if self.truncation_loss > limit {
            Err(Error::TruncationExceeded { loss: self.truncation_loss, limit, cutoff: self.cutoff })
        } else {
            Ok(())
        }
    }

    /// Largest total particle number present in the support.
    pub fn max_sector(&self) -> u32 {
        self.amplitudes.keys().map(|&(m, n)| m + n).max().unwrap_or(0)
    }

    pub fn inner(&self, other: &TwoModeFockState) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(k, a)| other.amplitudes.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// Multiply every amplitude by `e^{i phase(m, n)}`.
    pub fn with_phases<F: Fn(u32, u32) -> f64>(&self, phase: F) -> Self {
        let mut out = self.clone();
        for (&(m, n), a) in out.amplitudes.iter_mut() {
            *a *= Complex64::from_polar(1.0, phase(m, n));
        }
        out
    }
}

/// `P(m, n) = |amplitude|^2`.
pub fn probabilities(state: &TwoModeFockState) -> BTreeMap<(u32, u32), f64> {
    state.amplitudes.iter().map(|(&k, a)| (k, a.norm_sqr())).collect()
}

/// First and second moments of the occupation numbers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NumberMoments {
    pub mean_m: f64,
    pub mean_n: f64,
    pub var_m: f64,
    pub var_n: f64,
    pub cov_mn: f64,
    pub mean_total: f64,
    pub var_total: f64,
}

impl NumberMoments {
    /// Moments of a classical distribution over `(m, n)`.
    pub fn of_distribution<'a, I>(probs: I) -> Self
    where
        I: IntoIterator<Item = (&'a (u32, u32), &'a f64)> + Clone,
    {
        let (mut mean_m, mut mean_n) = (0.0, 0.0);
        for (&(m, n), &p) in probs.clone() {
            mean_m += p * m as f64;
            mean_n += p * n as f64;
        }
        // central moments in a second pass
        let (mut var_m, mut var_n, mut cov) = (0.0, 0.0, 0.0);
        for (&(m, n), &p) in probs {
            let dm = m as f64 - mean_m;
            let dn = n as f64 - mean_n;
            var_m += p * dm * dm;
            var_n += p * dn * dn;
            cov += p * dm * dn;
        }
        Self {
            mean_m,
            mean_n,
            var_m,
            var_n,
            cov_mn: cov,
            mean_total: mean_m + mean_n,
            var_total: var_m + var_n + 2.0 * cov,
        }
    }

    /// `Var[eps+ m + eps- n]`.
    pub fn energy_variance(&self, eps: Eps) -> f64 {
        let (p, q) = (eps.plus, eps.minus);
        p * p * self.var_m + q * q * self.var_n + 2.0 * p * q * self.cov_mn
    }
}

pub fn number_moments(state: &TwoModeFockState) -> NumberMoments {
    let probs = probabilities(state);
    NumberMoments::of_distribution(probs.iter())
}

/// QFI of a pure state expressed in the normal-mode basis of `gen`.
pub fn qfi_pure(state: &TwoModeFockState, gen: &GeneratorSpectrum) -> f64 {
    qfi_pure_eps(state, gen.eps())
}

/// QFI `4 Var[eps+ m + eps- n]` for a normal-mode state.
pub fn qfi_pure_eps(state: &TwoModeFockState, eps: Eps) -> f64 {
    (4.0 * number_moments(state).energy_variance(eps)).max(0.0)
}

/// Apply the number-preserving unitary whose single-particle action is
/// `mixing`: `|1,0> -> mixing[0][0]|1,0> + mixing[1][0]|0,1>`, and likewise
/// for `|0,1>` with the second column.
///
/// Each photon-number sector is transformed by the symmetric power of
/// `mixing`, built column by column by applying the rotated creation
/// operators to the previous sector. Every intermediate vector is a
/// normalised state, which keeps the recursion stable at large occupations.
pub fn mode_rotate(state: &TwoModeFockState, mixing: &Mat2) -> Result<TwoModeFockState> {
    let deviation = mixing.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let top = state.max_sector() as usize;
    let b_plus = [mixing[(0, 0)], mixing[(1, 0)]];
    let b_minus = [mixing[(0, 1)], mixing[(1, 1)]];

    let mut sector_in: Vec<Vec<Complex64>> = (0..=top).map(|s| vec![Complex64::new(0.0, 0.0); s + 1]).collect();
    for (&(m, n), &a) in state.amplitudes.iter() {
        // index within sector s = m + n is the occupation n of the second mode
        sector_in[(m + n) as usize][n as usize] = a;
    }

    let mut out = BTreeMap::new();
    // columns[k]: image of |s - k, k>, as a vector indexed by the second-mode occupation
    let mut columns: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for (s, input) in sector_in.iter().enumerate() {
        if s > 0 {
            let mut next = Vec::with_capacity(s + 1);
            for k in 0..s {
                // |s-k, k> = b+† |s-1-k, k> / sqrt(s - k)
                next.push(create(&columns[k], b_plus, (s - k) as f64));
            }
            // |0, s> = b-† |0, s-1> / sqrt(s)
            next.push(create(&columns[s - 1], b_minus, s as f64));
            columns = next;
        }
        if input.iter().all(|a| *a == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let mut image = vec![Complex64::new(0.0, 0.0); s + 1];
        for (k, a) in input.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, v) in columns[k].iter().enumerate() {
                image[j] += a * v;
            }
        }
        for (j, v) in image.into_iter().enumerate() {
            if v.norm_sqr() > 0.0 {
                out.insert(((s - j) as u32, j as u32), v);
            }
        }
    }
    Ok(TwoModeFockState { amplitudes: out, cutoff: state.cutoff, truncation_loss: state.truncation_loss })
}

/// `(b[0] a1† + b[1] a2†) |v> / sqrt(count)` for a sector vector indexed by
/// the second-mode occupation.
fn create(v: &[Complex64], b: [Complex64; 2], count: f64) -> Vec<Complex64> {
    let s = v.len() - 1; // sector of v
    let mut out = vec![Complex64::new(0.0, 0.0); s + 2];
    let scale = 1.0 / count.sqrt();
    for (j, &a) in v.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let m = (s - j) as f64;
        // a1† |m, j> = sqrt(m+1) |m+1, j>, index stays j
        out[j] += b[0] * a * ((m + 1.0).sqrt() * scale);
        // a2† |m, j> = sqrt(j+1) |m, j+1>
        out[j + 1] += b[1] * a * (((j + 1) as f64).sqrt() * scale);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn noon2() -> TwoModeFockState {
        TwoModeFockState::from_amplitudes(
            [((2, 0), Complex64::new(1.0, 0.0)), ((0, 2), Complex64::new(1.0, 0.0))],
            2,
        )
        .unwrap()
    }

    #[test]
    fn noon_probabilities_and_moments() {
        let s = noon2();
        let p = probabilities(&s);
        assert_eq!(p.len(), 2);
        assert!((p[&(2, 0)] - 0.5).abs() < 1e-15 && (p[&(0, 2)] - 0.5).abs() < 1e-15);
        let mo = number_moments(&s);
        assert!((mo.mean_total - 2.0).abs() < 1e-15);
        assert!(mo.var_total.abs() < 1e-15);
        assert!((mo.cov_mn + 1.0).abs() < 1e-15);
        assert!((qfi_pure_eps(&s, Eps::new(1.0, -1.0)) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_moments_vanish() {
        let mo = number_moments(&TwoModeFockState::vacuum());
        assert_eq!(mo, NumberMoments::default());
        assert_eq!(probabilities(&TwoModeFockState::vacuum())[&(0, 0)], 1.0);
    }

    #[test]
    fn fock_states_carry_no_information() {
        for (m, n) in [(0, 0), (3, 1), (7, 0), (2, 9)] {
            let q = qfi_pure_eps(&TwoModeFockState::basis(m, n), Eps::new(1.3, -0.4));
            assert_eq!(q, 0.0);
        }
    }

    #[test]
    fn truncation_is_recorded() {
        let s = TwoModeFockState::from_amplitudes(
            [((0, 0), Complex64::new(0.6, 0.0)), ((5, 0), Complex64::new(0.8, 0.0))],
            3,
        )
        .unwrap();
        assert!((s.truncation_loss() - 0.64).abs() < 1e-15);
        assert_eq!(s.amplitudes().len(), 1);
        assert!(matches!(s.check_truncation(MAX_TRUNCATION_LOSS), Err(Error::TruncationExceeded { .. })));
    }

    #[test]
    fn zero_state_rejected() {
        assert!(TwoModeFockState::from_amplitudes([], 4).is_err());
    }

    #[test]
    fn beam_splitter_on_single_photon() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let bs = Mat2::new(h, -h, h, h);
        let out = mode_rotate(&TwoModeFockState::basis(1, 0), &bs).unwrap();
        assert!((out.amplitude(1, 0) - h).norm() < 1e-15);
        assert!((out.amplitude(0, 1) - h).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel() {
        // |1,1> through a balanced beam splitter has no coincidence term
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let bs = Mat2::new(h, -h, h, h);
        let out = mode_rotate(&TwoModeFockState::basis(1, 1), &bs).unwrap();
        assert!(out.amplitude(1, 1).norm() < 1e-15);
        assert!((out.amplitude(2, 0).norm_sqr() - 0.5).abs() < 1e-15);
        assert!((out.amplitude(0, 2).norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rotate_identity_and_non_unitary() {
        let s = noon2();
        let same = mode_rotate(&s, &Mat2::IDENTITY).unwrap();
        assert!((same.inner(&s).norm() - 1.0).abs() < 1e-15);
        let bad = Mat2::IDENTITY.scale(Complex64::new(1.1, 0.0));
        assert!(matches!(mode_rotate(&s, &bad), Err(Error::NonUnitary { .. })));
    }
}
