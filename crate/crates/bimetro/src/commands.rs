//! The report-producing commands. Each returns a JSON value or CSV text; the
//! binary only parses arguments and prints.

use bimetro_core::{
    bounds::{boundary_maximum, cramer_rao, gaussian_gap, max_qfi, special_case_qfi, Corner, SpecialCase},
    circuit::generator,
    fock::{mode_rotate, number_moments, qfi_pure_eps},
    gaussian::{
        covariance_number_moments, covariance_qfi, gaussian_number_moments, gaussian_qfi_parts,
        max_qfi_given_displacement, optimal_gaussian, rotate, symplectic_eigenvalues, to_covariance,
        GaussianPureState,
    },
    states::{poissonian_cat, quasi_noon, CatPhases, NumberBudget, Occupation},
    Eps, Error, Mat2,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::format::{json_num, json_nums, num, to_csv_string};
use crate::input::{fock_json, gaussian_json, EpsSource, ProbeState};

/// Basis in which a probe state is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Frame {
    /// Normal modes of the generator.
    #[default]
    Normal,
    /// Physical input ports of the circuit.
    Physical,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::Normal => "normal",
            Frame::Physical => "physical",
        }
    }
}

/// `δφ_min`, or `None` when the information vanishes.
fn uncertainty(qfi: f64, trials: u32) -> Result<Option<f64>> {
    match cramer_rao(qfi, trials) {
        Ok(d) => Ok(Some(d)),
        Err(Error::ZeroInformation) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_num)
}

fn moments_json(mean: f64, var: f64) -> Value {
    json!({ "mean": json_num(mean), "var": json_num(var) })
}

fn eps_json(e: Eps) -> Value {
    json_nums(&[e.plus, e.minus])
}

pub struct QfiRequest {
    pub source: EpsSource,
    pub state: ProbeState,
    pub label: String,
    pub frame: Frame,
    pub trials: u32,
}

pub fn cmd_qfi(req: &QfiRequest) -> Result<Value> {
    let eps = req.source.eps();
    let mixing = match (&req.source, req.frame) {
        (EpsSource::Circuit(spec, phi), Frame::Physical) => generator(spec, *phi).mixing,
        _ => Mat2::IDENTITY,
    };
    let (repr, qfi, mean, var) = match &req.state {
        ProbeState::Fock(s) => {
            let normal = mode_rotate(s, &mixing)?;
            let m = number_moments(&normal);
            ("fock", qfi_pure_eps(&normal, eps), m.mean_total, m.var_total)
        }
        ProbeState::Gaussian(g) => {
            let cov = rotate(&to_covariance(g), &mixing)?;
            let m = covariance_number_moments(&cov);
            ("gaussian", covariance_qfi(&cov, eps)?, m.mean, m.var)
        }
    };
    let bound = max_qfi(&NumberBudget::new(mean, var.max(0.0))?, eps);
    Ok(json!({
        "source": req.source.describe(),
        "eps": eps_json(eps),
        "frame": req.frame.name(),
        "state": req.label,
        "representation": repr,
        "qfi": json_num(qfi),
        "trials": req.trials,
        "delta_phi_min": opt_num(uncertainty(qfi, req.trials)?),
        "moments": moments_json(mean, var),
        "max_qfi": json_num(bound),
    }))
}

fn corner_name(c: Corner) -> &'static str {
    match c {
        Corner::Plus => "plus",
        Corner::Tie => "tie",
    }
}

pub fn cmd_bound(source: &EpsSource, budget: &NumberBudget, trials: u32) -> Result<Value> {
    let eps = source.eps();
    let f = max_qfi(budget, eps);
    let top = boundary_maximum(budget, eps);
    let mut cases = Map::new();
    for case in SpecialCase::ALL {
        let b = special_case_qfi(case, budget);
        cases.insert(
            case.name().into(),
            json!({ "qfi": json_num(b.qfi), "delta_phi_min": opt_num(uncertainty(b.qfi, trials)?) }),
        );
    }
    Ok(json!({
        "source": source.describe(),
        "eps": eps_json(eps),
        "N": json_num(budget.n_mean()),
        "var": json_num(budget.var()),
        "max_qfi": json_num(f),
        "trials": trials,
        "delta_phi_min": opt_num(uncertainty(f, trials)?),
        "corner": corner_name(top.corner),
        "special_cases": Value::Object(cases),
    }))
}

pub const BOUND_COLUMNS: [&str; 9] =
    ["N", "var", "eps_plus", "eps_minus", "max_qfi", "delta_phi_min", "antisymmetric", "symmetric", "unbalanced"];

/// Read a grid file: CSV with (at least) the columns `N` and `var`.
pub fn parse_grid(text: &str) -> Result<Vec<NumberBudget>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::usage(format!("grid file needs a `{name}` column")))
    };
    let (cn, cv) = (col("N")?, col("var")?);
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::usage(format!("grid row {}: unreadable number", line + 1)))
        };
        out.push(NumberBudget::new(field(cn)?, field(cv)?)?);
    }
    if out.is_empty() {
        return Err(CliError::usage("grid file has no rows"));
    }
    Ok(out)
}

/// One CSV row per budget, evaluated in parallel and sorted by `(N, var)`.
pub fn bound_grid(source: &EpsSource, grid: &[NumberBudget], trials: u32) -> Result<String> {
    let eps = source.eps();
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| a.n_mean().total_cmp(&b.n_mean()).then(a.var().total_cmp(&b.var())));
    let rows: Vec<Vec<String>> = sorted
        .par_iter()
        .map(|b| -> Result<Vec<String>> {
            let f = max_qfi(b, eps);
            let d = uncertainty(f, trials)?.unwrap_or(f64::INFINITY);
            let mut row = vec![num(b.n_mean()), num(b.var()), num(eps.plus), num(eps.minus), num(f), num(d)];
            row.extend(SpecialCase::ALL.iter().map(|&c| num(special_case_qfi(c, b).qfi)));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    to_csv_string(&BOUND_COLUMNS, &rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub n: f64,
    pub case: SpecialCase,
    pub f_gauss: f64,
    pub f_tilde: f64,
    pub gap: f64,
}

pub const FIG4_COLUMNS: [&str; 5] = ["N", "case", "F_G_max", "F_Q_tilde_max", "gap"];

/// Optimal Gaussian QFI against the bound at `ΔN² = 2N(N+1)` for the three
/// special cases, ordered by `N` then case.
pub fn cmd_fig4(ns: &[f64]) -> Result<Vec<Fig4Row>> {
    let mut ns = ns.to_vec();
    ns.sort_by(f64::total_cmp);
    let rows: Vec<Vec<Fig4Row>> = ns
        .par_iter()
        .map(|&n| {
            SpecialCase::ALL
                .iter()
                .map(|&case| {
                    let g = gaussian_gap(case.eps(), n)?;
                    Ok(Fig4Row { n, case, f_gauss: g.f_gauss, f_tilde: g.f_tilde, gap: g.relative_gap })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn fig4_csv(rows: &[Fig4Row]) -> Result<String> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![num(r.n), r.case.name().into(), num(r.f_gauss), num(r.f_tilde), num(r.gap)])
        .collect();
    to_csv_string(&FIG4_COLUMNS, &rows)
}

pub fn cmd_gaussian(state: &GaussianPureState, source: &EpsSource, trials: u32) -> Result<Value> {
    let eps = source.eps();
    let parts = gaussian_qfi_parts(state, eps)?;
    let qfi = parts.total();
    let m = gaussian_number_moments(state);
    let cov = to_covariance(state);
    let (nu1, nu2) = symplectic_eigenvalues(&cov.gamma);
    let e = eps.ordered();
    let a2 = state.displacement_norm_sqr();
    Ok(json!({
        "source": source.describe(),
        "eps": eps_json(eps),
        "state": gaussian_json(state),
        "qfi": json_num(qfi),
        "squeezing_part": json_num(parts.f1),
        "displacement_part": json_num(parts.f2),
        "covariance_qfi": json_num(parts.direct),
        "trials": trials,
        "delta_phi_min": opt_num(uncertainty(qfi, trials)?),
        "moments": moments_json(m.mean, m.var),
        "symplectic_eigenvalues": json_nums(&[nu1, nu2]),
        "gaussian_ceiling": json_num(8.0 * e.plus * e.plus * m.mean * (m.mean + 1.0)),
        "ceiling_at_displacement": json_num(max_qfi_given_displacement(m.mean, a2.min(m.mean), eps)?),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Single-mode squeezed vacuum in the dominant normal mode.
    Gaussian,
    /// Quasi-NOON state saturating the number-budget bound.
    QuasiNoon,
    /// Poissonian cat with vacuum, saturating the bound for `var >= N`.
    Cat,
}

pub fn cmd_optimal_state(family: Family, n: f64, var: Option<f64>, source: &EpsSource) -> Result<Value> {
    let eps = source.eps();
    let need_var = || var.ok_or_else(|| CliError::usage("--var is required for this family"));
    let (state, qfi, mean, var_out, extra) = match family {
        Family::Gaussian => {
            if var.is_some() {
                return Err(CliError::usage("the Gaussian optimum fixes var = 2N(N+1); drop --var"));
            }
            let opt = optimal_gaussian(n, eps)?;
            let m = gaussian_number_moments(&opt.state);
            (gaussian_json(&opt.state), opt.qfi, m.mean, m.var, Value::Null)
        }
        Family::QuasiNoon => {
            let b = NumberBudget::new(n, need_var()?)?;
            let qn = quasi_noon(&b, 0.0, Occupation::Strict)?;
            let m = number_moments(&qn.state);
            let occ = json!([qn.occupations.0, qn.occupations.1]);
            (fock_json(&qn.state), qfi_pure_eps(&qn.state, eps), m.mean_total, m.var_total, occ)
        }
        Family::Cat => {
            let b = NumberBudget::new(n, need_var()?)?;
            let s = poissonian_cat(&b, &CatPhases::default(), 200)?;
            let m = number_moments(&s);
            (fock_json(&s), qfi_pure_eps(&s, eps), m.mean_total, m.var_total, Value::Null)
        }
    };
    let bound = max_qfi(&NumberBudget::new(mean, var_out.max(0.0))?, eps);
    let mut out = json!({
        "family": family.name(),
        "source": source.describe(),
        "eps": eps_json(eps),
        "state": state,
        "qfi": json_num(qfi),
        "moments": moments_json(mean, var_out),
        "max_qfi": json_num(bound),
    });
    if !extra.is_null() {
        out["occupations"] = extra;
    }
    Ok(out)
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::QuasiNoon => "quasi-noon",
            Family::Cat => "cat",
        }
    }
}
