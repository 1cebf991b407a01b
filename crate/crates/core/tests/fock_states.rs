mod common;

use bimetro_core::{
    bounds::max_qfi,
    circuit::{generator, transfer_matrix, GeneratorSpectrum},
    fock::*,
    oracle::{variance_by_operator, variance_by_physical_operator},
    states::*,
    Complex64, Eps, Error,
};
use common::*;
use proptest::prelude::*;

fn random_state(entries: Vec<((u32, u32), Complex64)>) -> Option<TwoModeFockState> {
    TwoModeFockState::from_amplitudes(entries, 40).ok()
}

fn entries() -> impl Strategy<Value = Vec<((u32, u32), Complex64)>> {
    prop::collection::vec(((0u32..8, 0u32..8), complex(1.0)), 1..12)
}

proptest! {
    #![proptest_config(config(300, 21))]

    #[test]
    fn qfi_ignores_phases(e in entries(), eps in eps(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let Some(s) = random_state(e) else { return Ok(()) };
        let shifted = s.with_phases(|m, n| a * m as f64 + b * n as f64 + 0.1 * (m * n) as f64);
        let (f0, f1) = (qfi_pure_eps(&s, eps), qfi_pure_eps(&shifted, eps));
        prop_assert!((f0 - f1).abs() <= 1e-12 * f0.max(1.0));
    }

    #[test]
    fn operator_variance_matches_moments(e in entries(), eps in eps()) {
        let Some(s) = random_state(e) else { return Ok(()) };
        let gen = GeneratorSpectrum::diagonal(eps);
        let v = variance_by_operator(&s, &gen);
        let f = qfi_pure(&s, &gen);
        prop_assert!((4.0 * v - f).abs() <= 1e-12 * f.max(1.0));
    }

    #[test]
    fn mode_rotation_preserves_total_number(e in entries(), spec in spec(), phi in phi()) {
        let Some(s) = random_state(e) else { return Ok(()) };
        let u = transfer_matrix(&spec, phi).single_particle();
        let r = mode_rotate(&s, &u).unwrap();
        let norm: f64 = r.amplitudes().values().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let (m0, m1) = (number_moments(&s), number_moments(&r));
        prop_assert!((m0.mean_total - m1.mean_total).abs() < 1e-10);
        prop_assert!((m0.var_total - m1.var_total).abs() < 1e-10);
        let back = mode_rotate(&r, &u.adjoint()).unwrap();
        prop_assert!((back.inner(&s).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn physical_and_normal_frames_agree(e in entries(), spec in spec(), phi in phi()) {
        // a state given in normal modes, injected into the physical ports
        let Some(normal) = random_state(e) else { return Ok(()) };
        let gen = generator(&spec, phi);
        let physical = mode_rotate(&normal, &gen.mixing.adjoint()).unwrap();
        let vp = variance_by_physical_operator(&physical, &gen);
        let vn = variance_by_operator(&normal, &gen);
        prop_assert!((vp - vn).abs() <= 1e-9 * vn.abs().max(1.0), "{vp} vs {vn}");
        let round = mode_rotate(&physical, &gen.mixing).unwrap();
        prop_assert!((round.inner(&normal).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn global_sign_flip_is_invisible(e in entries(), eps in eps(), n in 0.5..10.0f64, var in 0.0..30.0f64) {
        let Some(s) = random_state(e) else { return Ok(()) };
        let flipped = Eps::new(-eps.plus, -eps.minus);
        prop_assert!((qfi_pure_eps(&s, eps) - qfi_pure_eps(&s, flipped)).abs() < 1e-10);
        let b = NumberBudget::new(n, var).unwrap();
        prop_assert!(rel(max_qfi(&b, eps), max_qfi(&b, flipped)) < 1e-14 || max_qfi(&b, eps) == 0.0);
    }
}

#[test]
fn noon_reaches_heisenberg_limit() {
    for n in 1..=12u32 {
        for eps in [Eps::new(1.0, -1.0), Eps::new(0.5, -0.5), Eps::new(1.0, 0.0), Eps::new(0.3, 1.7)] {
            let f = qfi_pure_eps(&noon(n, 0.4).unwrap(), eps);
            let d = eps.plus - eps.minus;
            let expect = (n * n) as f64 * d * d;
            assert!((f - expect).abs() <= 1e-12 * expect.max(1.0), "N={n} {eps:?}: {f}");
        }
    }
}

#[test]
fn quasi_noon_saturates_the_bound() {
    let cases = [((4.0, 2.0), (6, 3)), ((8.0, 8.0), (12, 6)), ((6.0, 12.0), (12, 4))];
    for ((n, var), occ) in cases {
        let b = NumberBudget::new(n, var).unwrap();
        let qn = quasi_noon(&b, 0.9, Occupation::Strict).unwrap();
        assert_eq!(qn.occupations, occ);
        let mo = number_moments(&qn.state);
        assert!((mo.mean_total - n).abs() < 1e-10 && (mo.var_total - var).abs() < 1e-10);
        for eps in EPS_PAIRS {
            let f = qfi_pure_eps(&qn.state, eps);
            let bound = max_qfi(&b, eps);
            assert!(rel(f, bound) < 1e-8, "budget ({n}, {var}) {eps:?}: {f} vs {bound}");
        }
    }
}

#[test]
fn quasi_noon_rounded_reports_realised_budget() {
    let b = NumberBudget::new(3.0, 1.0).unwrap();
    assert!(matches!(quasi_noon(&b, 0.0, Occupation::Strict), Err(Error::NonIntegerOccupation { .. })));
    let qn = quasi_noon(&b, 0.0, Occupation::Rounded).unwrap();
    let mo = number_moments(&qn.state);
    assert!((mo.mean_total - qn.realized.n_mean()).abs() < 1e-12);
    assert!((mo.var_total - qn.realized.var()).abs() < 1e-12);
}

#[test]
fn poissonian_cat_meets_budget_and_bound() {
    for (n, var) in [(2.0, 4.0), (3.0, 3.0), (1.5, 6.0), (5.0, 9.0)] {
        let b = NumberBudget::new(n, var).unwrap();
        let phases = CatPhases { step_plus: 0.3, offset_plus: 1.0, step_minus: -0.7, offset_minus: 0.2 };
        let s = poissonian_cat(&b, &phases, 120).unwrap();
        let mo = number_moments(&s);
        assert!((mo.mean_total - n).abs() < 1e-8 && (mo.var_total - var).abs() < 1e-8, "{mo:?}");
        let f = qfi_pure_eps(&s, Eps::new(1.0, -1.0));
        assert!((f - 4.0 * (n * n + var)).abs() < 1e-6, "{f}");
    }
    let b = NumberBudget::new(3.0, 2.0).unwrap();
    assert!(matches!(poissonian_cat(&b, &CatPhases::default(), 80), Err(Error::VarianceTooSmall { .. })));
}

#[test]
fn cat_components_reproduce_the_fock_amplitudes() {
    // c0|0,0> + w+ |α+,0> + w- |0,α->, expanded, equals the constructed state
    let b = NumberBudget::new(2.0, 4.0).unwrap();
    let phases = CatPhases { step_plus: 0.4, offset_plus: -0.3, step_minus: 1.1, offset_minus: 0.8 };
    let s = poissonian_cat(&b, &phases, 100).unwrap();
    let c = cat_components(&b, &phases).unwrap();
    let ap = coherent(c.alpha_plus, Complex64::new(0.0, 0.0), 100).unwrap();
    let am = coherent(Complex64::new(0.0, 0.0), c.alpha_minus, 100).unwrap();
    for (&(m, n), &a) in s.amplitudes() {
        let mut e = c.weight_plus * ap.amplitude(m, n) + c.weight_minus * am.amplitude(m, n);
        if (m, n) == (0, 0) {
            e += c.vacuum;
        }
        assert!((e - a).norm() < 1e-12, "({m},{n}): {e} vs {a}");
    }
}

#[test]
fn squeezed_vacuum_needs_its_cutoff() {
    let r = (2.0 + 5.0f64.sqrt()).ln();
    assert!(matches!(squeezed_vacuum_fock(r, 80), Err(Error::TruncationExceeded { .. })));
    let cutoff = squeezed_vacuum_cutoff(r, 1e-10, 400).unwrap();
    let s = squeezed_vacuum_fock_with_limit(r, cutoff, 1e-10).unwrap();
    assert!(s.truncation_loss() <= 1e-10);
    assert!((number_moments(&s).mean_total - 4.0).abs() < 1e-6);
}

#[test]
fn coherent_state_is_poissonian() {
    let s = coherent(Complex64::new(1.1, 0.5), Complex64::new(-0.4, 0.9), 60).unwrap();
    let mo = number_moments(&s);
    let expect = 1.1f64.powi(2) + 0.25 + 0.16 + 0.81;
    assert!((mo.mean_total - expect).abs() < 1e-10);
    assert!((mo.var_total - expect).abs() < 1e-10);
    assert!(mo.cov_mn.abs() < 1e-10);
}
