use bimetro::format::{json_num, num, reformat_csv, reformat_json, to_csv_string, to_json_string};
use bimetro::input::{fock_json, gaussian_json, parse_state, parse_state_json, ProbeState};
use bimetro_core::{
    fock::TwoModeFockState,
    gaussian::{GaussianPureState, UnitaryAngles},
    Complex64,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use serde_json::json;

fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        (-300i32..300, -1.0..1.0f64).prop_map(|(e, m)| m * 10f64.powi(e)),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
    ]
}

proptest! {
    #![proptest_config(config(2000, 51))]

    #[test]
    fn formatting_is_a_fixed_point(x in finite()) {
        let s = num(x);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(num(back), s.clone());
        let mantissa = s.split('e').next().unwrap();
        prop_assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 12);
        prop_assert!((back - x).abs() <= 1e-14 * x.abs());
        prop_assert!(back.is_finite());
    }

    #[test]
    fn json_documents_reemit_identically(xs in prop::collection::vec(finite(), 1..20), k in 0u32..1000) {
        let doc = json!({ "values": xs.iter().map(|&x| json_num(x)).collect::<Vec<_>>(), "count": k, "label": "x" });
        let text = to_json_string(&doc);
        prop_assert_eq!(reformat_json(&text).unwrap(), text);
    }

    #[test]
    fn csv_documents_reemit_identically(rows in prop::collection::vec((finite(), finite()), 1..20)) {
        let rows: Vec<Vec<String>> = rows.iter().map(|&(a, b)| vec![num(a), "case".into(), num(b)]).collect();
        let text = to_csv_string(&["a", "case", "b"], &rows).unwrap();
        prop_assert_eq!(reformat_csv(&text).unwrap(), text);
    }

    #[test]
    fn fock_documents_round_trip(entries in prop::collection::vec(((0u32..10, 0u32..10), -1.0..1.0f64, -1.0..1.0f64), 1..10)) {
        let amps: Vec<((u32, u32), Complex64)> = entries.iter().map(|&(k, re, im)| (k, Complex64::new(re, im))).collect();
        let Ok(s) = TwoModeFockState::from_amplitudes(amps, 12) else { return Ok(()) };
        let text = to_json_string(&fock_json(&s));
        prop_assert_eq!(reformat_json(&text).unwrap(), text.clone());
        // loading renormalises, so compare values rather than bytes
        let ProbeState::Fock(back) = parse_state_json(&text).unwrap() else { panic!("not Fock") };
        for (k, a) in s.amplitudes() {
            prop_assert!((back.amplitude(k.0, k.1) - a).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_documents_round_trip(rp in 0.0..3.0f64, f in 0.0..1.0f64, ang in prop::array::uniform4(-3.0..3.0f64), a in prop::array::uniform4(-2.0..2.0f64)) {
        let s = GaussianPureState::new(
            rp, rp * f,
            UnitaryAngles::new(ang[0], ang[1], ang[2], ang[3].abs()),
            [Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])],
        ).unwrap();
        let text = to_json_string(&gaussian_json(&s));
        let ProbeState::Gaussian(back) = parse_state_json(&text).unwrap() else { panic!("not Gaussian") };
        prop_assert_eq!(to_json_string(&gaussian_json(&back)), text);
    }
}

#[test]
fn mini_language_is_strict() {
    assert!(parse_state("noon:3").is_ok());
    assert!(parse_state("noon:N=3,phase=0.5").is_ok());
    assert!(parse_state("quasi-noon:N=4,var=2,mode=rounded").is_ok());
    assert!(parse_state("fock:2,0").is_ok());
    assert!(parse_state("coherent:re_plus=1,im_minus=-0.5").is_ok());
    assert!(parse_state("gaussian:rp=0.5,rm=0.2,theta=1").is_ok());
    for bad in [
        "noon:3,4",
        "noon:3,N=3",
        "noon:N=3,N=4",
        "noon",
        "quasi-noon:N=4,var=2,mode=loose",
        "quasi-noon:N=4,variance=2",
        "fock:2",
        "fock:a,b",
        "squeezed-vacuum:r=1,N=2",
        "squeezed-vacuum",
        "coherent:re=1",
        "gaussian:rm=0.1",
        "noon:3,phase=nan",
        "",
    ] {
        assert!(parse_state(bad).is_err(), "{bad}");
    }
}
