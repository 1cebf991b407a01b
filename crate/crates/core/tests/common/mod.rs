#![allow(dead_code)]

use bimetro_core::{
    circuit::{Affine, CircuitSpec},
    Complex64, Eps,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn affine() -> impl Strategy<Value = Affine> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(o, s)| Affine::new(o, s))
}

pub fn spec() -> impl Strategy<Value = CircuitSpec> {
    (affine(), affine(), affine(), affine()).prop_map(|(b, c, t, r)| CircuitSpec::custom(b, c, t, r))
}

pub fn phi() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

pub fn eps() -> impl Strategy<Value = Eps> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Eps::new(a, b))
}

pub fn complex(radius: f64) -> impl Strategy<Value = Complex64> {
    (-radius..radius, -radius..radius).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// The five generator eigenvalue pairs used by the bound sweeps.
pub const EPS_PAIRS: [Eps; 5] = [
    Eps::new(1.0, -1.0),
    Eps::new(1.0, 1.0),
    Eps::new(1.0, 0.0),
    Eps::new(0.7, -0.2),
    Eps::new(-1.3, 0.4),
];
