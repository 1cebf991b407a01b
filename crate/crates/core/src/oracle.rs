//! Brute-force cross-checks: finite-difference generators, random
//! distributions obeying a number budget, and explicit operator variances.

#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::{
    circuit::{transfer_matrix, CircuitSpec, GeneratorSpectrum},
    fock::{NumberMoments, TwoModeFockState},
    states::{quasi_noon, NumberBudget, Occupation},
    Eps, Error, Result,
};

/// Iteration cap of the alternating projection.
pub const MAX_PROJECTION_ITERS: usize = 10_000;

/// Residual at which the projected table is accepted.
const PROJECTION_TOL: f64 = 1e-11;

/// Central-difference estimate of the single-particle generator
/// `i U† dU/dφ`, symmetrised to its Hermitian part.
pub fn fd_generator(spec: &CircuitSpec, phi: f64, step: f64) -> Result<GeneratorSpectrum> {
    if !(1e-8..=1e-3).contains(&step) {
        return Err(Error::InvalidArgument("finite-difference step must lie in [1e-8, 1e-3]"));
    }
    let u = transfer_matrix(spec, phi).single_particle();
    let up = transfer_matrix(spec, phi + step).single_particle();
    let um = transfer_matrix(spec, phi - step).single_particle();
    let du = up.sub(&um).scale(Complex64::new(0.5 / step, 0.0));
    let h = (u.adjoint() * du).scale(Complex64::new(0.0, 1.0));
    let herm = h.add(&h.adjoint()).scale(Complex64::new(0.5, 0.0));
    Ok(GeneratorSpectrum::from_matrix(&herm))
}

/// A probability table on `0 <= m, n <= grid_max` meeting a number budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedDistribution {
    pub probs: BTreeMap<(u32, u32), f64>,
    pub budget: NumberBudget,
    /// `(|E[N] - N|, |Var[N] - ΔN²|)`
    pub residuals: (f64, f64),
}

impl ConstrainedDistribution {
    pub fn moments(&self) -> NumberMoments {
        NumberMoments::of_distribution(self.probs.iter())
    }

    /// `4 Var[ε+ m + ε- n]`
    pub fn qfi(&self, eps: Eps) -> f64 {
        4.0 * self.moments().energy_variance(eps).max(0.0)
    }
}

/// Random distribution meeting `budget`, drawn by projecting a random
/// positive table onto the normalisation, mean and second-moment
/// hyperplanes and clamping negative entries, alternately. Clamped cells
/// stay at zero, so each round either succeeds or shrinks the support; a
/// fresh table is drawn if the support degenerates.
pub fn sample_constrained_distribution(
    budget: &NumberBudget,
    grid_max: u32,
    seed: u64,
) -> Result<ConstrainedDistribution> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    sample_with(budget, grid_max, &mut rng)
}

/// As [`sample_constrained_distribution`], but each sample is a mixture that
/// puts weight `λ ∈ [0.9, 1)` on the quasi-NOON distribution of the budget.
/// Needs integer quasi-NOON occupations inside the grid.
pub fn sample_biased_distribution(
    budget: &NumberBudget,
    grid_max: u32,
    seed: u64,
) -> Result<ConstrainedDistribution> {
    let qn = quasi_noon(budget, 0.0, Occupation::Strict)?;
    let (a, b) = qn.occupations;
    if a > grid_max || b > grid_max {
        return Err(Error::InfeasibleGrid { grid_max, residual: f64::INFINITY });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let base = sample_with(budget, grid_max, &mut rng)?;
    let lambda = 0.9 + 0.1 * rng.gen::<f64>();
    let mut probs: BTreeMap<(u32, u32), f64> = base.probs.into_iter().map(|(k, p)| (k, (1.0 - lambda) * p)).collect();
    for (k, a) in qn.state.amplitudes() {
        *probs.entry(*k).or_insert(0.0) += lambda * a.norm_sqr();
    }
    Ok(finish(probs, budget))
}

fn finish(probs: BTreeMap<(u32, u32), f64>, budget: &NumberBudget) -> ConstrainedDistribution {
    let mo = NumberMoments::of_distribution(probs.iter());
    let residuals = ((mo.mean_total - budget.n_mean()).abs(), (mo.var_total - budget.var()).abs());
    ConstrainedDistribution { probs, budget: *budget, residuals }
}

fn sample_with(budget: &NumberBudget, grid_max: u32, rng: &mut ChaCha20Rng) -> Result<ConstrainedDistribution> {
    let n = budget.n_mean();
    let side = grid_max as usize + 1;
    let s_max = 2 * grid_max;

    if budget.var() == 0.0 {
        // only a single number sector is allowed
        let sector = n.round();
        if (sector - n).abs() > 1e-12 || sector as u32 > s_max {
            return Err(Error::InfeasibleGrid { grid_max, residual: (sector - n).abs() });
        }
        let s = sector as u32;
        let lo = s.saturating_sub(grid_max);
        let cells: Vec<(u32, u32)> = (lo..=s.min(grid_max)).map(|m| (m, s - m)).collect();
        let weights: Vec<f64> = cells.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let probs = cells.into_iter().zip(weights).map(|(k, w)| (k, w / total)).collect();
        return Ok(finish(probs, budget));
    }

    // Work with t = s / s_max so the constraint rows stay well scaled.
    let scale = s_max as f64;
    let targets = [1.0, n / scale, (n * n + budget.var()) / (scale * scale)];
    let rows: Vec<[f64; 3]> = (0..side * side)
        .map(|idx| {
            let t = (idx / side + idx % side) as f64 / scale;
            [1.0, t, t * t]
        })
        .collect();

    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_PROJECTION_ITERS {
        let mut p = random_table(&rows, scale, budget, rng);
        // Cells clamped to zero leave the active set; the projection is then
        // repeated on the remaining cells until no entry is negative.
        let mut active: Vec<bool> = vec![true; p.len()];
        loop {
            iterations += 1;
            let mut gram = [[0.0; 3]; 3];
            let mut ap = [0.0; 3];
            for ((x, r), _) in p.iter().zip(&rows).zip(&active).filter(|(_, &on)| on) {
                for i in 0..3 {
                    ap[i] += x * r[i];
                    for j in 0..3 {
                        gram[i][j] += r[i] * r[j];
                    }
                }
            }
            let err = [ap[0] - targets[0], ap[1] - targets[1], ap[2] - targets[2]];
            residual = err.iter().fold(0.0f64, |a, e| a.max(e.abs()));
            if residual < PROJECTION_TOL {
                return Ok(finish(to_table(&p, side), budget));
            }
            let Some(gram_inv) = invert3(&gram) else { break };
            let mut c = [0.0; 3];
            for i in 0..3 {
                c[i] = (0..3).map(|j| gram_inv[i][j] * err[j]).sum();
            }
            let mut clamped = false;
            for ((x, r), on) in p.iter_mut().zip(&rows).zip(active.iter_mut()) {
                if !*on {
                    continue;
                }
                *x -= c[0] * r[0] + c[1] * r[1] + c[2] * r[2];
                if *x < 0.0 {
                    *x = 0.0;
                    *on = false;
                    clamped = true;
                }
            }
            if !clamped {
                // exact up to rounding unless the active set was degenerate
                let mut ap = [0.0; 3];
                for ((x, r), _) in p.iter().zip(&rows).zip(&active).filter(|(_, &on)| on) {
                    for i in 0..3 {
                        ap[i] += x * r[i];
                    }
                }
                residual = (0..3).fold(0.0f64, |a, i| a.max((ap[i] - targets[i]).abs()));
                if residual < PROJECTION_TOL {
                    return Ok(finish(to_table(&p, side), budget));
                }
                break;
            }
            if iterations >= MAX_PROJECTION_ITERS {
                break;
            }
        }
    }
    Err(Error::InfeasibleGrid { grid_max, residual })
}

/// Random positive table with a random exponential falloff in `m + n`.
fn random_table(rows: &[[f64; 3]], scale: f64, budget: &NumberBudget, rng: &mut ChaCha20Rng) -> Vec<f64> {
    let length = (0.5 + 1.5 * rng.gen::<f64>()) * (budget.n_mean() + budget.std_dev()).max(1.0);
    let power = 1.0 + 3.0 * rng.gen::<f64>();
    let mut p: Vec<f64> = rows
        .iter()
        .map(|r| rng.gen::<f64>().powf(power) * (-(r[1] * scale) / length).exp())
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

fn to_table(p: &[f64], side: usize) -> BTreeMap<(u32, u32), f64> {
    let mut probs = BTreeMap::new();
    for (idx, &x) in p.iter().enumerate() {
        if x > 0.0 {
            probs.insert(((idx / side) as u32, (idx % side) as u32), x);
        }
    }
    let total: f64 = probs.values().sum();
    probs.values_mut().for_each(|x| *x /= total);
    probs
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(j, i) / det;
        }
    }
    Some(out)
}

/// `⟨H²⟩ - ⟨H⟩²` with `H|m,n> = (ε+ m + ε- n)|m,n>` applied amplitude by
/// amplitude to a normal-mode state.
pub fn variance_by_operator(state: &TwoModeFockState, gen: &GeneratorSpectrum) -> f64 {
    let eps = gen.eps();
    let mut mean = Complex64::new(0.0, 0.0);
    let mut second = 0.0;
    for (&(m, n), &a) in state.amplitudes() {
        let h_a = a * eps.energy(m, n);
        mean += a.conj() * h_a;
        second += h_a.norm_sqr();
    }
    second - mean.re * mean.re
}

/// Variance of `H = Σ h_ij a_i† a_j` for a state written in the physical
/// modes, with `h = [[A+, B*], [B, A-]]` applied through ladder operators.
pub fn variance_by_physical_operator(state: &TwoModeFockState, gen: &GeneratorSpectrum) -> f64 {
    let mut image: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (&(m, n), &a) in state.amplitudes() {
        let diag = gen.a_plus * m as f64 + gen.a_minus * n as f64;
        *image.entry((m, n)).or_insert(Complex64::new(0.0, 0.0)) += a * diag;
        if m > 0 {
            // a-† a+ |m, n> = sqrt(m (n+1)) |m-1, n+1>
            let f = ((m as f64) * (n as f64 + 1.0)).sqrt();
            *image.entry((m - 1, n + 1)).or_insert(Complex64::new(0.0, 0.0)) += a * gen.b * f;
        }
        if n > 0 {
            let f = ((n as f64) * (m as f64 + 1.0)).sqrt();
            *image.entry((m + 1, n - 1)).or_insert(Complex64::new(0.0, 0.0)) += a * gen.b.conj() * f;
        }
    }
    let mean: Complex64 = image.iter().map(|(&(m, n), h)| state.amplitude(m, n).conj() * h).sum();
    let second: f64 = image.values().map(|h| h.norm_sqr()).sum();
    second - mean.re * mean.re
}

/// Seeds `base, base+1, ...` for batch sampling.
pub fn seeds(base: u64, count: usize) -> impl Iterator<Item = u64> {
    (0..count as u64).map(move |i| base.wrapping_add(i))
}

/// Several independent samples, one per seed.
pub fn sample_batch(budget: &NumberBudget, grid_max: u32, base_seed: u64, count: usize) -> Result<Vec<ConstrainedDistribution>> {
    let mut out = vec![];
    for seed in seeds(base_seed, count) {
        out.push(sample_constrained_distribution(budget, grid_max, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::noon;

    #[test]
    fn fd_mach_zehnder() {
        let g = fd_generator(&CircuitSpec::mach_zehnder(), 0.7, 1e-5).unwrap();
        let h = g.single_particle();
        assert!(h.max_abs_diff(&crate::linalg::Mat2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 0.0),
        )) < 1e-9);
        assert!(fd_generator(&CircuitSpec::mach_zehnder(), 0.0, 1e-2).is_err());
    }

    #[test]
    fn sampler_meets_budget() {
        let b = NumberBudget::new(4.0, 2.0).unwrap();
        let d = sample_constrained_distribution(&b, 30, 1).unwrap();
        assert!(d.residuals.0 < 1e-6 && d.residuals.1 < 1e-6, "{:?}", d.residuals);
        let total: f64 = d.probs.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(d.probs.values().all(|&p| p >= 0.0));
        assert_eq!(d, sample_constrained_distribution(&b, 30, 1).unwrap());
    }

    #[test]
    fn sampler_zero_variance_stays_in_sector() {
        let b = NumberBudget::new(4.0, 0.0).unwrap();
        let d = sample_constrained_distribution(&b, 30, 9).unwrap();
        assert!(d.probs.keys().all(|&(m, n)| m + n == 4));
        assert!(sample_constrained_distribution(&NumberBudget::new(4.5, 0.0).unwrap(), 30, 9).is_err());
    }

    #[test]
    fn operator_variance_of_noon() {
        let s = noon(2, 0.3).unwrap();
        let v = variance_by_operator(&s, &GeneratorSpectrum::diagonal(Eps::new(1.0, -1.0)));
        assert!((v - 4.0).abs() < 1e-12);
        let f = TwoModeFockState::basis(3, 2);
        assert_eq!(variance_by_operator(&f, &GeneratorSpectrum::diagonal(Eps::new(0.4, -0.9))), 0.0);
    }
}
