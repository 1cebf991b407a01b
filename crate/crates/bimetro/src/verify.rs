//! The verification suite behind `bimetro verify`: every closed form is
//! re-derived by an independent route and compared at a stated tolerance.

use std::f64::consts::PI;

use bimetro_core::{
    bounds::{max_qfi, special_case_qfi, SpecialCase},
    circuit::{classical_fi_single_particle, generator, qfi_single_particle, Affine, CircuitSpec},
    fock::{mode_rotate, qfi_pure_eps, TwoModeFockState},
    gaussian::{
        gaussian_qfi_eps, gaussian_qfi_parts, optimal_gaussian, symplectic_eigenvalues, to_covariance,
        GaussianPureState, UnitaryAngles,
    },
    oracle::{fd_generator, sample_constrained_distribution},
    states::{noon, quasi_noon, squeezed_vacuum_cutoff, squeezed_vacuum_fock_with_limit, NumberBudget, Occupation},
    Complex64, Eps,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::json_num;

pub const DEFAULT_SEED: u64 = 20_240_611;

pub const EPS_PAIRS: [Eps; 5] = [
    Eps::new(1.0, -1.0),
    Eps::new(1.0, 1.0),
    Eps::new(1.0, 0.0),
    Eps::new(0.7, -0.2),
    Eps::new(-1.3, 0.4),
];

const SAMPLE_BUDGETS: [(f64, f64); 5] = [(4.0, 2.0), (3.0, 16.0), (1.0, 0.5), (6.0, 8.0), (2.5, 3.1)];

/// Deliberate defects used to check that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Evaluate the number-budget bound with the sign of `eps_minus` flipped.
    EpsSignFlip,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Number of random constrained distributions drawn for the bound check.
    pub samples: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, samples: 1000, fault: None }
    }
}

impl VerifyConfig {
    fn bound(&self, budget: &NumberBudget, eps: Eps) -> f64 {
        match self.fault {
            Some(Fault::EpsSignFlip) => max_qfi(budget, Eps::new(eps.plus, -eps.minus)),
            None => max_qfi(budget, eps),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: &'static str,
    pub tolerance: f64,
    /// Largest error seen; infinite when a computation failed outright.
    pub worst: f64,
    pub count: usize,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
}

impl VerifySummary {
    pub fn failed_groups(&self) -> Vec<&'static str> {
        let mut groups: Vec<&'static str> = self.checks.iter().filter(|c| !c.passed()).map(|c| c.group).collect();
        groups.dedup();
        groups
    }

    /// 0 on success, otherwise `2 + failed groups`, capped at 125.
    pub fn exit_code(&self) -> i32 {
        match self.failed_groups().len() {
            0 => 0,
            n => (2 + n).min(125) as i32,
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "group": c.group,
                    "name": c.name,
                    "tolerance": json_num(c.tolerance),
                    "worst": json_num(c.worst),
                    "count": c.count,
                    "passed": c.passed(),
                })
            })
            .collect();
        json!({
            "seed": self.config.seed,
            "samples": self.config.samples,
            "fault": self.config.fault.map(|_| "eps-sign-flip"),
            "passed": self.failed_groups().is_empty(),
            "failed_groups": self.failed_groups(),
            "checks": checks,
        })
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn random_spec(rng: &mut ChaCha20Rng) -> CircuitSpec {
    let mut affine = || Affine::new(rng.gen_range(-PI..PI), rng.gen_range(-3.0..3.0));
    CircuitSpec::custom(affine(), affine(), affine(), affine())
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

/// NaN is reported as a failure.
fn sanitize(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

fn generator_checks(rng: &mut ChaCha20Rng) -> Vec<Check> {
    let cases: Vec<(CircuitSpec, f64)> = (0..100).map(|_| (random_spec(rng), rng.gen_range(-PI..PI))).collect();
    let fd = max_of(cases.iter().map(|(spec, phi)| match fd_generator(spec, *phi, 1e-5) {
        Ok(g) => g.single_particle().max_abs_diff(&generator(spec, *phi).single_particle()),
        Err(_) => f64::INFINITY,
    }));
    let mz = max_of([0.0, 0.3, 1.0, 2.5, -1.7].into_iter().map(|phi| {
        let g = generator(&CircuitSpec::mach_zehnder(), phi);
        [g.a_plus.abs(), g.a_minus.abs(), (g.b - Complex64::new(0.0, 0.5)).norm(), (g.eps_plus - 0.5).abs(), (g.eps_minus + 0.5).abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }));
    vec![
        Check { group: "generator", name: "finite_difference", tolerance: 1e-6, worst: sanitize(fd), count: cases.len() },
        Check { group: "generator", name: "mach_zehnder_exact", tolerance: 0.0, worst: sanitize(mz), count: 5 },
    ]
}

fn fisher_checks(rng: &mut ChaCha20Rng) -> Vec<Check> {
    let n = 1000;
    let worst = max_of((0..n).map(|_| {
        let (spec, phi) = (random_spec(rng), rng.gen_range(-PI..PI));
        (classical_fi_single_particle(&spec, phi) - qfi_single_particle(&spec, phi)).max(0.0)
    }));
    vec![Check { group: "fisher_dominance", name: "quantum_above_classical", tolerance: 0.0, worst: sanitize(worst), count: n }]
}

fn sampling_checks(cfg: &VerifyConfig, rng: &mut ChaCha20Rng) -> Vec<Check> {
    let per = cfg.samples.div_ceil(SAMPLE_BUDGETS.len()).max(1);
    let jobs: Vec<(NumberBudget, u64)> = SAMPLE_BUDGETS
        .iter()
        .flat_map(|&(n, v)| {
            let b = NumberBudget::new(n, v).expect("fixed budgets are valid");
            (0..per).map(|_| (b, rng.gen::<u64>())).collect::<Vec<_>>()
        })
        .take(cfg.samples.max(1))
        .collect();
    let worst = jobs
        .par_iter()
        .map(|(b, seed)| match sample_constrained_distribution(b, 30, *seed) {
            Ok(d) => max_of(EPS_PAIRS.iter().map(|&e| {
                let bound = cfg.bound(b, e);
                sanitize((d.qfi(e) - bound) / bound.max(1e-300)).max(0.0)
            })),
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    vec![Check { group: "bound_sampling", name: "random_distributions_below_bound", tolerance: 1e-6, worst, count: jobs.len() }]
}

fn achievability_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let budgets = [(4.0, 2.0), (8.0, 8.0), (6.0, 12.0)];
    let qn = max_of(budgets.iter().flat_map(|&(n, v)| {
        let b = NumberBudget::new(n, v).expect("fixed budgets are valid");
        let state = quasi_noon(&b, 0.0, Occupation::Strict).map(|q| q.state);
        EPS_PAIRS.iter().map(move |&e| match &state {
            Ok(s) => sanitize(rel_err(qfi_pure_eps(s, e), cfg.bound(&b, e))),
            Err(_) => f64::INFINITY,
        }).collect::<Vec<_>>()
    }));
    let heis = max_of((1..=12u32).flat_map(|n| {
        EPS_PAIRS.iter().map(move |&e| match noon(n, 0.4) {
            Ok(s) => {
                let d = e.plus - e.minus;
                rel_err(qfi_pure_eps(&s, e), (n * n) as f64 * d * d)
            }
            Err(_) => f64::INFINITY,
        }).collect::<Vec<_>>()
    }));
    let grid: Vec<NumberBudget> = (1..=10)
        .map(|k| NumberBudget::new(k as f64 * 0.75, (k * k) as f64 * 0.3).expect("grid budgets are valid"))
        .collect();
    let special = max_of(grid.iter().flat_map(|b| {
        SpecialCase::ALL.iter().map(|&c| rel_err(special_case_qfi(c, b).qfi, cfg.bound(b, c.eps()))).collect::<Vec<_>>()
    }));
    vec![
        Check { group: "bound_achievability", name: "quasi_noon_saturates", tolerance: 1e-8, worst: sanitize(qn), count: 15 },
        Check { group: "bound_achievability", name: "noon_heisenberg", tolerance: 1e-12, worst: sanitize(heis), count: 60 },
        Check { group: "bound_achievability", name: "special_case_closed_forms", tolerance: 1e-12, worst: sanitize(special), count: 30 },
    ]
}

fn random_gaussian(rng: &mut ChaCha20Rng, r_max: f64) -> GaussianPureState {
    let rp = rng.gen_range(0.0..r_max);
    let rm = rp * rng.gen_range(0.0..1.0);
    let mut angle = || rng.gen_range(-PI..PI);
    let ang = UnitaryAngles::new(angle(), angle(), angle(), angle().abs());
    let mut c = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let alpha = [c(), c()];
    GaussianPureState::new(rp, rm, ang, alpha).expect("ordered squeezing is valid")
}

fn gaussian_checks(rng: &mut ChaCha20Rng) -> Vec<Check> {
    let n = 200;
    let states: Vec<(GaussianPureState, Eps)> =
        (0..n).map(|i| (random_gaussian(rng, 2.0), EPS_PAIRS[i % EPS_PAIRS.len()])).collect();
    let two_path = max_of(states.iter().map(|(s, e)| gaussian_qfi_parts(s, *e).map_or(f64::INFINITY, |p| p.disagreement())));
    let purity = max_of(states.iter().map(|(s, _)| {
        let (a, b) = symplectic_eigenvalues(&to_covariance(s).gamma);
        (a - 0.5).abs().max((b - 0.5).abs())
    }));
    let optimum = max_of([1.0, 2.0, 4.0, 8.0].into_iter().flat_map(|n| {
        EPS_PAIRS.iter().map(move |&e| match optimal_gaussian(n, e) {
            Ok(o) => {
                let p = e.ordered().plus;
                let expect = 8.0 * p * p * n * (n + 1.0);
                gaussian_qfi_eps(&o.state, e).map_or(f64::INFINITY, |f| rel_err(f, expect))
            }
            Err(_) => f64::INFINITY,
        }).collect::<Vec<_>>()
    }));
    vec![
        Check { group: "gaussian_two_path", name: "closed_form_vs_covariance", tolerance: 1e-8, worst: sanitize(two_path), count: n },
        Check { group: "gaussian_two_path", name: "pure_symplectic_spectrum", tolerance: 1e-10, worst: sanitize(purity), count: n },
        Check { group: "gaussian_two_path", name: "optimal_state", tolerance: 1e-10, worst: sanitize(optimum), count: 20 },
    ]
}

/// Product of two squeezed vacua in the Fock basis, truncated at `1e-13`.
fn fock_squeezed_product(rp: f64, rm: f64) -> Option<TwoModeFockState> {
    let cut = |r: f64| squeezed_vacuum_cutoff(r, 1e-13, 400);
    let (cp, cm) = (cut(rp)?, cut(rm)?);
    let sp = squeezed_vacuum_fock_with_limit(rp, cp, 1e-12).ok()?;
    let sm = squeezed_vacuum_fock_with_limit(rm, cm, 1e-12).ok()?;
    let amps: Vec<((u32, u32), Complex64)> = sp
        .amplitudes()
        .iter()
        .flat_map(|(&(m, _), a)| sm.amplitudes().iter().map(move |(&(k, _), b)| ((m, k), a * b)))
        .collect();
    TwoModeFockState::from_amplitudes(amps, cp + cm).ok()
}

fn fock_gaussian_checks(rng: &mut ChaCha20Rng) -> Vec<Check> {
    let n = 20;
    let cases: Vec<(f64, f64, UnitaryAngles, Eps)> = (0..n)
        .map(|i| {
            let rp = rng.gen_range(0.0..0.9);
            let rm = rp * rng.gen_range(0.0..1.0);
            let mut angle = || rng.gen_range(-PI..PI);
            (rp, rm, UnitaryAngles::new(angle(), angle(), angle(), angle().abs()), EPS_PAIRS[i % EPS_PAIRS.len()])
        })
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(rp, rm, ang, e)| {
            let zero = Complex64::new(0.0, 0.0);
            let g = GaussianPureState::new(rp, rm, ang, [zero; 2]).and_then(|s| gaussian_qfi_eps(&s, e));
            let f = fock_squeezed_product(rp, rm).and_then(|s| mode_rotate(&s, &ang.unitary()).ok());
            match (g, f) {
                (Ok(g), Some(f)) => sanitize(rel_err(qfi_pure_eps(&f, e), g)),
                _ => f64::INFINITY,
            }
        })
        .reduce(|| 0.0, f64::max);
    vec![Check { group: "fock_vs_gaussian", name: "rotated_squeezed_products", tolerance: 1e-8, worst, count: n }]
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifySummary {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut checks = generator_checks(&mut rng);
    checks.extend(fisher_checks(&mut rng));
    checks.extend(sampling_checks(cfg, &mut rng));
    checks.extend(achievability_checks(cfg));
    checks.extend(gaussian_checks(&mut rng));
    checks.extend(fock_gaussian_checks(&mut rng));
    VerifySummary { config: cfg.clone(), checks }
}
