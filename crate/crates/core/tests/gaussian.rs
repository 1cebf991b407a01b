mod common;

use bimetro_core::{
    circuit::{transfer_matrix, CircuitSpec},
    fock::{mode_rotate, number_moments, qfi_pure_eps, TwoModeFockState},
    gaussian::*,
    states::{coherent, squeezed_vacuum_cutoff, squeezed_vacuum_fock_with_limit},
    Complex64, Eps, Mat4,
};
use common::*;
use proptest::prelude::*;

fn angles() -> impl Strategy<Value = UnitaryAngles> {
    (-6.3..6.3f64, -6.3..6.3f64, -6.3..6.3f64, 0.0..6.3f64).prop_map(|(a, b, c, d)| UnitaryAngles::new(a, b, c, d))
}

fn pure_state() -> impl Strategy<Value = GaussianPureState> {
    (0.0..2.0f64, 0.0..1.0f64, angles(), complex(2.0), complex(2.0))
        .prop_map(|(rp, f, ang, a, b)| GaussianPureState::new(rp, rp * f, ang, [a, b]).unwrap())
}

/// Random state whose mean particle number is exactly `n`, split between the
/// two squeezers and the displacement according to `w`.
fn state_with_mean(n: f64, w: (f64, f64, f64), ang: UnitaryAngles, dir: (Complex64, Complex64)) -> GaussianPureState {
    let total = w.0 + w.1 + w.2;
    let (s1, s2, a2) = (n * w.0 / total, n * w.1 / total, n * w.2 / total);
    let (hi, lo) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
    let norm = (dir.0.norm_sqr() + dir.1.norm_sqr()).sqrt().max(1e-12);
    let scale = a2.sqrt() / norm;
    GaussianPureState::new(hi.sqrt().asinh(), lo.sqrt().asinh(), ang, [dir.0 * scale, dir.1 * scale]).unwrap()
}

fn fock_product(rp: f64, rm: f64) -> TwoModeFockState {
    let cut = |r: f64| squeezed_vacuum_cutoff(r, 1e-13, 400).unwrap();
    let sp = squeezed_vacuum_fock_with_limit(rp, cut(rp), 1e-12).unwrap();
    let sm = squeezed_vacuum_fock_with_limit(rm, cut(rm), 1e-12).unwrap();
    let mut amps = vec![];
    for (&(m, _), a) in sp.amplitudes() {
        for (&(k, _), b) in sm.amplitudes() {
            amps.push(((m, k), a * b));
        }
    }
    TwoModeFockState::from_amplitudes(amps, cut(rp) + cut(rm)).unwrap()
}

proptest! {
    #![proptest_config(config(1000, 41))]

    #[test]
    fn closed_form_and_direct_paths_agree(s in pure_state(), eps in eps()) {
        let p = gaussian_qfi_parts(&s, eps).unwrap();
        prop_assert!(p.disagreement() < 1e-8, "{p:?}");
    }

    #[test]
    fn covariance_is_pure_and_physical(s in pure_state()) {
        let cov = to_covariance(&s);
        prop_assert!(cov.gamma.max_abs_diff(&cov.gamma.transpose()) < 1e-12);
        let (a, b) = symplectic_eigenvalues(&cov.gamma);
        prop_assert!((a - 0.5).abs() < 1e-10 && (b - 0.5).abs() < 1e-10, "{a} {b}");
        prop_assert!(cov.purity_residual() < 1e-10 * (4.0 * s.r_plus()).exp());
        let r = symplectic_of(&s.unitary());
        prop_assert!((r * r.transpose()).max_abs_diff(&Mat4::identity()) < 1e-12);
        prop_assert!((r * Mat4::omega() * r.transpose()).max_abs_diff(&Mat4::omega()) < 1e-12);
    }

    #[test]
    fn displacement_term_obeys_its_ceiling(s in pure_state(), eps in eps()) {
        let f2 = qfi_displacement_part(&s, eps);
        prop_assert!(f2 <= displacement_ceiling(&s, eps) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn gaussian_ceiling_at_fixed_mean(
        n in 0.1..10.0f64,
        w in (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64),
        ang in angles(),
        dir in (complex(1.0), complex(1.0)),
        eps in eps(),
    ) {
        prop_assume!(w.0 + w.1 + w.2 > 1e-3);
        let s = state_with_mean(n, w, ang, dir);
        let mean = gaussian_number_moments(&s).mean;
        prop_assert!((mean - n).abs() < 1e-9 * n.max(1.0));
        let f = gaussian_qfi_eps(&s, eps).unwrap();
        let e = eps.ordered();
        prop_assert!(f <= 8.0 * e.plus * e.plus * n * (n + 1.0) * (1.0 + 1e-8));
        let a2 = s.displacement_norm_sqr();
        prop_assert!(f <= max_qfi_given_displacement(n, a2.min(n), eps).unwrap() * (1.0 + 1e-8) + 1e-10);
    }

    #[test]
    fn rotated_gaussian_matches_fock(rp in 0.0..0.9f64, f in 0.0..1.0f64, ang in angles(), eps in eps()) {
        let rm = rp * f;
        let s = GaussianPureState::new(rp, rm, ang, [Complex64::new(0.0, 0.0); 2]).unwrap();
        let fock = mode_rotate(&fock_product(rp, rm), &ang.unitary()).unwrap();
        let g = gaussian_qfi_eps(&s, eps).unwrap();
        let q = qfi_pure_eps(&fock, eps);
        prop_assert!((g - q).abs() <= 1e-8 * g.max(1.0), "{g} vs {q}");
        let gm = gaussian_number_moments(&s);
        let fm = number_moments(&fock);
        prop_assert!((gm.mean - fm.mean_total).abs() < 1e-9 && (gm.var - fm.var_total).abs() < 1e-8);
    }
}

#[test]
fn number_moments_match_fock_for_coherent_states() {
    for (a, b) in [(Complex64::new(1.0, 0.5), Complex64::new(0.0, -0.8)), (Complex64::new(-2.0, 0.1), Complex64::new(0.3, 0.3))] {
        let g = gaussian_number_moments(&GaussianPureState::coherent([a, b]).unwrap());
        let f = number_moments(&coherent(a, b, 80).unwrap());
        assert!((g.mean - f.mean_total).abs() < 1e-10 && (g.var - f.var_total).abs() < 1e-10);
        let eps = Eps::new(0.6, -1.1);
        let gq = gaussian_qfi_eps(&GaussianPureState::coherent([a, b]).unwrap(), eps).unwrap();
        let fq = qfi_pure_eps(&coherent(a, b, 80).unwrap(), eps);
        assert!((gq - fq).abs() < 1e-9 * gq);
    }
}

#[test]
fn squeezed_vacuum_matches_fock_oracle() {
    let anti = Eps::new(1.0, -1.0);
    for r in [0.1, 0.5, 1.0, 1.25, 1.5] {
        let cutoff = squeezed_vacuum_cutoff(r, 1e-10, 400).unwrap();
        let fock = squeezed_vacuum_fock_with_limit(r, cutoff, 1e-10).unwrap();
        assert!(fock.truncation_loss() <= 1e-10);
        let g = gaussian_qfi_eps(&GaussianPureState::squeezed_vacuum(r).unwrap(), anti).unwrap();
        let expect = 2.0 * (2.0 * r).sinh().powi(2);
        assert!(rel(g, expect) < 1e-12);
        assert!(rel(qfi_pure_eps(&fock, anti), g) < 1e-4);
    }
}

#[test]
fn displacement_trade_off_is_decreasing() {
    for eps in [Eps::new(1.0, -1.0), Eps::new(1.0, 0.0), Eps::new(0.5, 0.5)] {
        for n in [0.5, 1.0, 4.0, 20.0] {
            let mut prev = f64::INFINITY;
            for k in 0..=40 {
                let a2 = n * k as f64 / 40.0;
                let f = max_qfi_given_displacement(n, a2, eps).unwrap();
                assert!(f <= prev * (1.0 + 1e-14), "N={n} a2={a2}");
                prev = f;
            }
        }
    }
}

#[test]
fn optimal_state_for_several_means() {
    for n in [1.0, 2.0, 4.0, 8.0] {
        for eps in [Eps::new(1.0, -1.0), Eps::new(1.0, 1.0), Eps::new(1.0, 0.0)] {
            let opt = optimal_gaussian(n, eps).unwrap();
            let f = gaussian_qfi_eps(&opt.state, eps).unwrap();
            assert!((f - 8.0 * n * (n + 1.0)).abs() < 1e-10 * f.max(1.0));
            let m = gaussian_number_moments(&opt.state);
            assert!((m.mean - n).abs() < 1e-10 && (m.var - 2.0 * n * (n + 1.0)).abs() < 1e-10);
        }
    }
}

#[test]
fn mach_zehnder_at_pi_moves_the_squeezing() {
    let s = to_covariance(&GaussianPureState::squeezed_vacuum(0.8).unwrap());
    let tm = transfer_matrix(&CircuitSpec::mach_zehnder(), std::f64::consts::PI);
    let out = evolve(&s, &tm).unwrap();
    let r = 0.8f64;
    assert!((out.gamma[(1, 1)] - 0.5 * (2.0 * r).exp()).abs() < 1e-12);
    assert!((out.gamma[(3, 3)] - 0.5 * (-2.0 * r).exp()).abs() < 1e-12);
    assert!((out.gamma[(0, 0)] - 0.5).abs() < 1e-12);
    let before = covariance_number_moments(&s);
    let after = covariance_number_moments(&out);
    assert!((before.mean - after.mean).abs() < 1e-10 && (before.var - after.var).abs() < 1e-10);
}

#[test]
fn evolution_agrees_with_fock_transfer() {
    let spec = CircuitSpec::custom(
        bimetro_core::circuit::Affine::new(0.3, 0.7),
        bimetro_core::circuit::Affine::new(-0.2, 0.4),
        bimetro_core::circuit::Affine::new(0.1, -1.3),
        bimetro_core::circuit::Affine::new(0.5, 0.6),
    );
    let ang = UnitaryAngles::new(0.4, 1.3, -0.8, 2.1);
    let (rp, rm) = (0.5, 0.2);
    let s = GaussianPureState::new(rp, rm, ang, [Complex64::new(0.0, 0.0); 2]).unwrap();
    let tm = transfer_matrix(&spec, 0.37);
    let out = evolve(&to_covariance(&s), &tm).unwrap();
    let fock = mode_rotate(&fock_product(rp, rm), &(tm.single_particle() * ang.unitary())).unwrap();
    for eps in [Eps::new(0.8, -0.3), Eps::new(1.0, 0.0)] {
        let g = covariance_qfi(&out, eps).unwrap();
        let q = qfi_pure_eps(&fock, eps);
        assert!((g - q).abs() < 1e-8 * g.max(1.0), "{g} vs {q}");
    }
}

#[test]
fn generic_and_structured_inverses_agree() {
    let s = GaussianPureState::new(
        1.2,
        0.4,
        UnitaryAngles::new(1.0, 0.2, -0.4, 0.7),
        [Complex64::new(0.5, 0.5), Complex64::new(-0.2, 1.0)],
    )
    .unwrap();
    let cov = to_covariance(&s);
    let eps = Eps::new(1.0, 0.25);
    let a = covariance_qfi(&cov, eps).unwrap();
    let b = covariance_qfi_generic(&cov, eps).unwrap();
    assert!((a - b).abs() < 1e-9 * a);
}
