//! Circuit and state inputs: catalog names, JSON documents and the state
//! constructor mini-language.

use std::collections::BTreeMap;
use std::path::Path;

use bimetro_core::{
    bounds::SpecialCase,
    circuit::{generator, Affine, CatalogTag, CircuitSpec},
    fock::TwoModeFockState,
    gaussian::{optimal_squeezing, GaussianPureState, UnitaryAngles},
    states::{noon, poissonian_cat, quasi_noon, CatPhases, NumberBudget, Occupation},
    Complex64, Eps,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::format::{json_num, json_nums};

pub const STATE_HELP: &str = "\
State constructors (--state NAME:ARGS, comma separated, unknown keys are errors):
  noon:N[,phase=P]                     (|N,0> + e^{iP}|0,N>)/sqrt2
  quasi-noon:N=..,var=..[,phase=P][,mode=strict|rounded]
  poisson-cat:N=..,var=..[,cutoff=K][,step_plus=..][,offset_plus=..][,step_minus=..][,offset_minus=..]
  fock:M,N                             number state |M,N>
  squeezed-vacuum:r=R | squeezed-vacuum:N=MEAN   (Gaussian, mode +)
  coherent:[re_plus=..][,im_plus=..][,re_minus=..][,im_minus=..]      (Gaussian)
  gaussian:rp=..[,rm=..][,eta=..][,chi=..][,phi=..][,theta=..][,re_plus=..][,im_plus=..][,re_minus=..][,im_minus=..]
States are given in the normal modes of the generator unless --frame physical.
JSON files (--state-file): {\"cutoff\":K,\"amplitudes\":[[m,n,re,im],...]} or
{\"r\":[rp,rm],\"u\":[eta,chi,phi,theta],\"alpha\":[[re,im],[re,im]]}.";

#[derive(Debug, Clone)]
pub enum ProbeState {
    Fock(TwoModeFockState),
    Gaussian(GaussianPureState),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogJson {
    catalog: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineJson {
    beta: [f64; 2],
    chi: [f64; 2],
    tau: [f64; 2],
    rho: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FockJson {
    cutoff: u32,
    amplitudes: Vec<[f64; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianJson {
    r: [f64; 2],
    u: [f64; 4],
    #[serde(default)]
    alpha: [[f64; 2]; 2],
}

/// Pick the document type by its keys. Untagged serde enums cannot be used
/// here: they buffer numbers, which breaks under `arbitrary_precision`.
fn has_key(v: &Value, key: &str) -> bool {
    v.as_object().is_some_and(|o| o.contains_key(key))
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|source| CliError::Io { path: path.into(), source })
}

fn catalog(name: &str) -> Result<CircuitSpec> {
    match CatalogTag::from_name(name) {
        Some(CatalogTag::Custom) | None => Err(CliError::usage(format!(
            "unknown circuit `{name}` (expected mach_zehnder, antisymmetric, symmetric, unbalanced, inline JSON or a file)"
        ))),
        Some(tag) => Ok(CircuitSpec::from_catalog(tag)),
    }
}

/// Catalog name, inline JSON object, or path to a JSON file.
pub fn parse_circuit(arg: &str) -> Result<CircuitSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else if CatalogTag::from_name(arg).is_some() || !Path::new(arg).exists() {
        return catalog(arg);
    } else {
        read_file(arg)?
    };
    let bad = || {
        CliError::usage("circuit JSON must be {\"catalog\":NAME} or {\"beta\":[b0,b1],\"chi\":[..],\"tau\":[..],\"rho\":[..]}")
    };
    let v: Value = serde_json::from_str(&text).map_err(|_| bad())?;
    if has_key(&v, "catalog") {
        let c: CatalogJson = serde_json::from_value(v).map_err(|_| bad())?;
        return catalog(&c.catalog);
    }
    let a: AffineJson = serde_json::from_value(v).map_err(|_| bad())?;
    let f = |p: [f64; 2]| Affine::new(p[0], p[1]);
    Ok(CircuitSpec::custom(f(a.beta), f(a.chi), f(a.tau), f(a.rho)))
}

pub fn circuit_json(spec: &CircuitSpec) -> Value {
    match spec.catalog {
        Some(tag) if tag != CatalogTag::Custom => json!({ "catalog": tag.name() }),
        _ => {
            let f = |a: Affine| json_nums(&[a.offset, a.slope]);
            json!({ "beta": f(spec.beta), "chi": f(spec.chi), "tau": f(spec.tau), "rho": f(spec.rho) })
        }
    }
}

pub fn parse_pair(arg: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => Ok((parse_f64("first entry", a)?, parse_f64("second entry", b)?)),
        _ => Err(CliError::usage(format!("expected two comma-separated numbers, got `{arg}`"))),
    }
}

fn parse_f64(what: &str, s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::usage(format!("{what}: `{s}` is not a finite number"))),
    }
}

fn parse_u32(what: &str, s: &str) -> Result<u32> {
    s.parse::<u32>().map_err(|_| CliError::usage(format!("{what}: `{s}` is not a non-negative integer")))
}

/// Where the normal-mode eigenvalues come from.
#[derive(Debug, Clone)]
pub enum EpsSource {
    Case(SpecialCase),
    Pair(Eps),
    Circuit(CircuitSpec, f64),
}

impl EpsSource {
    pub fn from_args(case: Option<&str>, eps: Option<&str>, circuit: Option<&str>, phi: f64) -> Result<Self> {
        match (case, eps, circuit) {
            (Some(c), None, None) => SpecialCase::from_name(c)
                .map(EpsSource::Case)
                .ok_or_else(|| CliError::usage(format!("unknown case `{c}` (antisymmetric, symmetric, unbalanced)"))),
            (None, Some(e), None) => parse_pair(e).map(|p| EpsSource::Pair(p.into())),
            (None, None, Some(c)) => Ok(EpsSource::Circuit(parse_circuit(c)?, phi)),
            (None, None, None) => Err(CliError::usage("one of --case, --eps or --circuit is required")),
            _ => Err(CliError::usage("--case, --eps and --circuit are mutually exclusive")),
        }
    }

    pub fn eps(&self) -> Eps {
        match self {
            EpsSource::Case(c) => c.eps(),
            EpsSource::Pair(e) => *e,
            EpsSource::Circuit(spec, phi) => generator(spec, *phi).eps(),
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            EpsSource::Case(c) => json!({ "case": c.name() }),
            EpsSource::Pair(e) => json!({ "eps": json_nums(&[e.plus, e.minus]) }),
            EpsSource::Circuit(spec, phi) => json!({ "circuit": circuit_json(spec), "phi": json_num(*phi) }),
        }
    }
}

/// Parsed `name:args` with consumable keyed and positional arguments.
struct Ctor<'a> {
    name: &'a str,
    positional: Vec<&'a str>,
    keyed: BTreeMap<&'a str, &'a str>,
}

impl<'a> Ctor<'a> {
    fn parse(spec: &'a str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut c = Ctor { name: name.trim(), positional: vec![], keyed: BTreeMap::new() };
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => {
                    if c.keyed.insert(k.trim(), v.trim()).is_some() {
                        return Err(CliError::usage(format!("{}: key `{}` given twice", c.name, k.trim())));
                    }
                }
                None => c.positional.push(item),
            }
        }
        Ok(c)
    }

    fn key(&mut self, k: &str) -> Option<&'a str> {
        self.keyed.remove(k)
    }

    fn f64_or(&mut self, k: &str, default: f64) -> Result<f64> {
        self.key(k).map_or(Ok(default), |v| parse_f64(k, v))
    }

    fn required(&mut self, k: &str) -> Result<f64> {
        let v = self.key(k).ok_or_else(|| CliError::usage(format!("{}: missing `{k}=`", self.name)))?;
        parse_f64(k, v)
    }

    fn positional_count(&self, allowed: usize) -> Result<()> {
        if self.positional.len() > allowed {
            return Err(CliError::usage(format!("{}: unexpected argument `{}`", self.name, self.positional[allowed])));
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        self.positional_count(0)?;
        match self.keyed.keys().next() {
            Some(k) => Err(CliError::usage(format!("{}: unknown key `{k}`", self.name))),
            None => Ok(()),
        }
    }

    fn alpha(&mut self) -> Result<[Complex64; 2]> {
        Ok([
            Complex64::new(self.f64_or("re_plus", 0.0)?, self.f64_or("im_plus", 0.0)?),
            Complex64::new(self.f64_or("re_minus", 0.0)?, self.f64_or("im_minus", 0.0)?),
        ])
    }
}

pub fn parse_state(spec: &str) -> Result<ProbeState> {
    let mut c = Ctor::parse(spec)?;
    let state = match c.name {
        "noon" => {
            c.positional_count(1)?;
            let n = match (c.positional.pop(), c.key("N")) {
                (Some(p), None) | (None, Some(p)) => parse_u32("N", p)?,
                (Some(_), Some(_)) => return Err(CliError::usage("noon: N given twice")),
                (None, None) => return Err(CliError::usage("noon: missing N")),
            };
            let phase = c.f64_or("phase", 0.0)?;
            ProbeState::Fock(noon(n, phase)?)
        }
        "quasi-noon" => {
            let b = NumberBudget::new(c.required("N")?, c.required("var")?)?;
            let phase = c.f64_or("phase", 0.0)?;
            let mode = match c.key("mode") {
                None | Some("strict") => Occupation::Strict,
                Some("rounded") => Occupation::Rounded,
                Some(m) => return Err(CliError::usage(format!("quasi-noon: mode `{m}` (strict, rounded)"))),
            };
            ProbeState::Fock(quasi_noon(&b, phase, mode)?.state)
        }
        "poisson-cat" => {
            let b = NumberBudget::new(c.required("N")?, c.required("var")?)?;
            let cutoff = c.key("cutoff").map_or(Ok(200), |v| parse_u32("cutoff", v))?;
            let phases = CatPhases {
                step_plus: c.f64_or("step_plus", 0.0)?,
                offset_plus: c.f64_or("offset_plus", 0.0)?,
                step_minus: c.f64_or("step_minus", 0.0)?,
                offset_minus: c.f64_or("offset_minus", 0.0)?,
            };
            ProbeState::Fock(poissonian_cat(&b, &phases, cutoff)?)
        }
        "fock" => {
            c.positional_count(2)?;
            let [m, n] = c.positional[..] else {
                return Err(CliError::usage("fock: expected fock:M,N"));
            };
            let s = TwoModeFockState::basis(parse_u32("M", m)?, parse_u32("N", n)?);
            c.positional.clear();
            ProbeState::Fock(s)
        }
        "squeezed-vacuum" => {
            let r = match (c.key("r"), c.key("N")) {
                (Some(r), None) => parse_f64("r", r)?,
                (None, Some(n)) => optimal_squeezing(parse_f64("N", n)?),
                _ => return Err(CliError::usage("squeezed-vacuum: give exactly one of r= or N=")),
            };
            ProbeState::Gaussian(GaussianPureState::squeezed_vacuum(r)?)
        }
        "coherent" => ProbeState::Gaussian(GaussianPureState::coherent(c.alpha()?)?),
        "gaussian" => {
            let (rp, rm) = (c.required("rp")?, c.f64_or("rm", 0.0)?);
            let angles = UnitaryAngles::new(
                c.f64_or("eta", 0.0)?,
                c.f64_or("chi", 0.0)?,
                c.f64_or("phi", 0.0)?,
                c.f64_or("theta", 0.0)?,
            );
            let alpha = c.alpha()?;
            ProbeState::Gaussian(GaussianPureState::new(rp, rm, angles, alpha)?)
        }
        other => return Err(CliError::usage(format!("unknown state constructor `{other}`"))),
    };
    c.finish()?;
    Ok(state)
}

pub fn parse_state_file(path: &str) -> Result<ProbeState> {
    parse_state_json(&read_file(path)?)
}

pub fn parse_state_json(text: &str) -> Result<ProbeState> {
    let bad = || CliError::usage("state JSON must be a Fock document {cutoff, amplitudes} or a Gaussian one {r, u, alpha}");
    let v: Value = serde_json::from_str(text).map_err(|_| bad())?;
    if !has_key(&v, "amplitudes") {
        let g: GaussianJson = serde_json::from_value(v).map_err(|_| bad())?;
        let [eta, chi, phi, theta] = g.u;
        let alpha = g.alpha.map(|[re, im]| Complex64::new(re, im));
        let angles = UnitaryAngles::new(eta, chi, phi, theta);
        return Ok(ProbeState::Gaussian(GaussianPureState::new(g.r[0], g.r[1], angles, alpha)?));
    }
    let f: FockJson = serde_json::from_value(v).map_err(|_| bad())?;
    let index = |x: f64| {
        if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
            Ok(x as u32)
        } else {
            Err(CliError::usage(format!("Fock index {x} is not a non-negative integer")))
        }
    };
    let mut amps = Vec::with_capacity(f.amplitudes.len());
    for [m, n, re, im] in f.amplitudes {
        amps.push(((index(m)?, index(n)?), Complex64::new(re, im)));
    }
    Ok(ProbeState::Fock(TwoModeFockState::from_amplitudes(amps, f.cutoff)?))
}

pub fn fock_json(s: &TwoModeFockState) -> Value {
    let amps: Vec<Value> = s
        .amplitudes()
        .iter()
        .map(|(&(m, n), a)| json!([m, n, json_num(a.re), json_num(a.im)]))
        .collect();
    json!({ "cutoff": s.cutoff(), "amplitudes": amps })
}

pub fn gaussian_json(s: &GaussianPureState) -> Value {
    let u = s.angles();
    let [a, b] = s.alpha();
    json!({
        "r": json_nums(&[s.r_plus(), s.r_minus()]),
        "u": json_nums(&[u.eta, u.chi, u.phi, u.theta]),
        "alpha": [json_nums(&[a.re, a.im]), json_nums(&[b.re, b.im])],
    })
}

pub fn state_json(s: &ProbeState) -> Value {
    match s {
        ProbeState::Fock(f) => fock_json(f),
        ProbeState::Gaussian(g) => gaussian_json(g),
    }
}
