//! Running a [`RunPlan`].

use crate::output::{fmt_f64, json_document, json_f64, Table};
use crate::plan::{BranchArg, CommandKind, Format, Range, RunPlan};
use hulthen::verify::Bound;
use hulthen::{
    energy_closed_form, fd_dirac_spectrum, q0_state, reality_condition, run_suite, spinor_state,
    spinor_state_at, BranchSign, BoundState, Complex64 as C, Error, PotentialSpec, StateStatus, Variant,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum RunError {
    Model(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Model(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Model(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Rendered output plus the exit code it implies.
pub struct Rendered {
    pub content: String,
    pub code: i32,
    /// One-line note for stderr.
    pub note: Option<String>,
}

const BRANCHES: [BranchSign; 2] = [BranchSign::Plus, BranchSign::Minus];

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Real => "real",
        Variant::PTSymmetric => "pt",
        Variant::PseudoHermitian => "ph",
        Variant::Exponential => "exp",
    }
}

fn status_name(s: StateStatus) -> &'static str {
    match s {
        StateStatus::Consistent => "consistent",
        StateStatus::ConjugateSheet => "conjugate_sheet",
        StateStatus::Discrepant => "discrepant",
    }
}

fn spec_header(spec: &PotentialSpec) -> Vec<(String, String)> {
    vec![
        ("variant".into(), variant_name(spec.variant).into()),
        ("m".into(), fmt_f64(spec.m)),
        ("q".into(), fmt_f64(spec.q)),
        ("alpha".into(), fmt_f64(spec.alpha)),
        ("V0".into(), fmt_f64(spec.v0)),
    ]
}

fn spec_json(spec: &PotentialSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("variant".into(), Value::String(variant_name(spec.variant).into()));
    m.insert("m".into(), json_f64(spec.m));
    m.insert("q".into(), json_f64(spec.q));
    m.insert("alpha".into(), json_f64(spec.alpha));
    m.insert("V0".into(), json_f64(spec.v0));
    m
}

fn bool_str(b: bool) -> String {
    b.to_string()
}

fn energy_json(e: C) -> Value {
    json!({ "re": json_f64(e.re), "im": json_f64(e.im) })
}

pub fn execute(plan: &RunPlan) -> Result<Rendered, RunError> {
    match &plan.command {
        CommandKind::Spectrum => spectrum(plan),
        CommandKind::Scan(range) => scan(plan, range),
        CommandKind::Wavefunction { branch, energy, x_min, x_max, points } => {
            wavefunction(plan, *branch, *energy, *x_min, *x_max, *points)
        }
        CommandKind::Verify => verify(plan),
        CommandKind::Oracle { grid } => oracle(plan, grid),
    }
}

type StateRow = (u32, BranchSign, Result<BoundState, Error>);

fn spectrum_states(spec: &PotentialSpec, levels: &[u32]) -> Vec<StateRow> {
    levels
        .iter()
        .flat_map(|&n| BRANCHES.iter().map(move |&b| (n, b, energy_closed_form(spec, n, b))))
        .collect()
}

fn spectrum(plan: &RunPlan) -> Result<Rendered, RunError> {
    let spec = &plan.spec;
    let rows = spectrum_states(spec, &plan.levels);
    let content = match plan.output.format {
        Format::Csv => {
            let mut header = spec_header(spec);
            header.push(("command".into(), plan.command_line.clone()));
            let rows = rows
                .iter()
                .map(|(n, b, st)| match st {
                    Ok(st) => vec![
                        n.to_string(),
                        b.label().into(),
                        fmt_f64(st.energy.re),
                        fmt_f64(st.energy.im),
                        bool_str(st.is_real_spectrum),
                        bool_str(st.in_window),
                        status_name(st.status).into(),
                    ],
                    Err(e) => vec![
                        n.to_string(),
                        b.label().into(),
                        "nan".into(),
                        "nan".into(),
                        "false".into(),
                        "false".into(),
                        format!("\"error: {e}\""),
                    ],
                })
                .collect();
            let columns = vec!["n", "branch", "E_re", "E_im", "is_real", "in_window", "status"];
            Table { header, columns, rows }.to_csv()
        }
        Format::Json => {
            let results = rows
                .iter()
                .map(|(n, b, st)| match st {
                    Ok(st) => json!({
                        "n": n,
                        "branch": b.label(),
                        "E": energy_json(st.energy),
                        "is_real": st.is_real_spectrum,
                        "in_window": st.in_window,
                        "status": status_name(st.status),
                    }),
                    Err(e) => json!({ "n": n, "branch": b.label(), "E": Value::Null, "error": e.to_string() }),
                })
                .collect();
            json_document(spec_json(spec), results, &plan.command_line)
        }
    };
    Ok(Rendered { content, code: EXIT_OK, note: None })
}

struct ScanRow {
    value: f64,
    n: u32,
    branch: BranchSign,
    energy: Option<C>,
    is_real: bool,
    outside_window: bool,
}

fn scan_point(base: &PotentialSpec, range: &Range, value: f64, levels: &[u32]) -> Vec<ScanRow> {
    let spec = range.param.apply(base, value);
    let valid = spec.validate().is_ok();
    let mut out = Vec::with_capacity(2 * levels.len());
    for &n in levels {
        let outside_window = valid && spec.variant.is_complexified() && !reality_condition(&spec, n);
        for &branch in &BRANCHES {
            let st = if valid { energy_closed_form(&spec, n, branch).ok() } else { None };
            out.push(ScanRow {
                value,
                n,
                branch,
                energy: st.map(|s| s.energy),
                is_real: st.is_some_and(|s| s.is_real_spectrum),
                outside_window,
            });
        }
    }
    out
}

fn scan(plan: &RunPlan, range: &Range) -> Result<Rendered, RunError> {
    let spec = plan.spec;
    let mut rows: Vec<ScanRow> = range
        .values()
        .par_iter()
        .flat_map_iter(|&v| scan_point(&spec, range, v, &plan.levels))
        .collect();
    rows.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.n.cmp(&b.n)).then(a.branch.cmp(&b.branch)));
    let failed = rows.iter().filter(|r| r.energy.is_none()).count();
    let note = (failed > 0).then(|| format!("{failed} scan rows had no closed-form energy"));
    let content = match plan.output.format {
        Format::Csv => {
            let mut header = spec_header(&spec);
            header.push(("vary".into(), range.param.name().into()));
            header.push(("from".into(), fmt_f64(range.from)));
            header.push(("to".into(), fmt_f64(range.to)));
            header.push(("steps".into(), range.steps.to_string()));
            header.push(("command".into(), plan.command_line.clone()));
            let columns = vec!["param_value", "n", "branch", "E_re", "E_im", "is_real", "outside_window"];
            let rows = rows
                .iter()
                .map(|r| {
                    let e = r.energy.unwrap_or(C::new(f64::NAN, f64::NAN));
                    vec![
                        fmt_f64(r.value),
                        r.n.to_string(),
                        r.branch.label().into(),
                        fmt_f64(e.re),
                        fmt_f64(e.im),
                        bool_str(r.is_real),
                        bool_str(r.outside_window),
                    ]
                })
                .collect();
            Table { header, columns, rows }.to_csv()
        }
        Format::Json => {
            let mut params = spec_json(&spec);
            params.insert(
                "scan".into(),
                json!({ "vary": range.param.name(), "from": json_f64(range.from), "to": json_f64(range.to), "steps": range.steps }),
            );
            let results = rows
                .iter()
                .map(|r| {
                    json!({
                        "param_value": json_f64(r.value),
                        "n": r.n,
                        "branch": r.branch.label(),
                        "E": r.energy.map_or(Value::Null, energy_json),
                        "is_real": r.is_real,
                        "in_window": !r.outside_window,
                    })
                })
                .collect();
            json_document(params, results, &plan.command_line)
        }
    };
    Ok(Rendered { content, code: EXIT_OK, note })
}

fn wavefunction(
    plan: &RunPlan,
    branch: BranchArg,
    energy: Option<C>,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Rendered, RunError> {
    let spec = &plan.spec;
    let n = plan.levels[0];
    let sign = match branch {
        BranchArg::Plus => BranchSign::Plus,
        BranchArg::Minus => BranchSign::Minus,
    };
    let (ev, e) = if spec.variant == Variant::Exponential {
        let e = energy.expect("checked at parse time");
        (q0_state(spec, e)?, e)
    } else if let Some(e) = energy {
        let st = energy_closed_form(spec, n, sign)?;
        (spinor_state_at(spec, n, e, st.sheet)?, e)
    } else {
        let st = energy_closed_form(spec, n, sign)?;
        (spinor_state(spec, &st)?, st.energy)
    };
    let d = (points - 1) as f64;
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let t = i as f64;
        let x = (x_min * (d - t) + x_max * t) / d;
        // Poles of the mapped variable on the real line leave a gap.
        let (u, l) = match ev.eval_x(spec, x) {
            Ok(p) => (p.upper, p.lower / spec.m),
            Err(Error::PoleAtS { .. } | Error::PoleAtX { .. }) => (C::new(f64::NAN, f64::NAN), C::new(f64::NAN, f64::NAN)),
            Err(e) => return Err(e.into()),
        };
        samples.push((x, u, l));
    }
    let content = match plan.output.format {
        Format::Csv => {
            let mut header = spec_header(spec);
            header.push(("n".into(), n.to_string()));
            header.push(("branch".into(), sign.label().into()));
            header.push(("E_re".into(), fmt_f64(e.re)));
            header.push(("E_im".into(), fmt_f64(e.im)));
            header.push(("command".into(), plan.command_line.clone()));
            let columns = vec!["x", "upper_re", "upper_im", "lower_re", "lower_im"];
            let rows = samples
                .iter()
                .map(|(x, u, l)| vec![fmt_f64(*x), fmt_f64(u.re), fmt_f64(u.im), fmt_f64(l.re), fmt_f64(l.im)])
                .collect();
            Table { header, columns, rows }.to_csv()
        }
        Format::Json => {
            let mut params = spec_json(spec);
            params.insert("n".into(), json!(n));
            params.insert("branch".into(), json!(sign.label()));
            params.insert("E".into(), energy_json(e));
            let results = samples
                .iter()
                .map(|(x, u, l)| json!({ "x": json_f64(*x), "upper": energy_json(*u), "lower": energy_json(*l) }))
                .collect();
            json_document(params, results, &plan.command_line)
        }
    };
    Ok(Rendered { content, code: EXIT_OK, note: None })
}

fn bound_name(b: Bound) -> &'static str {
    match b {
        Bound::AtMost => "at_most",
        Bound::AtLeast => "at_least",
    }
}

fn verify(plan: &RunPlan) -> Result<Rendered, RunError> {
    let results = run_suite(&plan.tolerances)?;
    let failed: Vec<&str> = results.iter().filter(|r| r.failed()).map(|r| r.name).collect();
    let content = match plan.output.format {
        Format::Csv => {
            let header = vec![("command".into(), plan.command_line.clone())];
            let columns = vec!["check", "measured", "tolerance", "bound", "passed", "informational"];
            let rows = results
                .iter()
                .map(|r| {
                    vec![
                        r.name.into(),
                        fmt_f64(r.measured),
                        fmt_f64(r.tolerance),
                        bound_name(r.bound).into(),
                        bool_str(r.passed),
                        bool_str(r.informational),
                    ]
                })
                .collect();
            Table { header, columns, rows }.to_csv()
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert(
                "overrides".into(),
                Value::Object(plan.tolerances.iter().map(|(k, v)| (k.clone(), json_f64(*v))).collect()),
            );
            let items = results
                .iter()
                .map(|r| {
                    json!({
                        "check": r.name,
                        "measured": json_f64(r.measured),
                        "tolerance": json_f64(r.tolerance),
                        "bound": bound_name(r.bound),
                        "passed": r.passed,
                        "informational": r.informational,
                    })
                })
                .collect();
            json_document(params, items, &plan.command_line)
        }
    };
    let (code, note) = if failed.is_empty() {
        (EXIT_OK, format!("verify: {} checks, all passed", results.len()))
    } else {
        (EXIT_VERIFY_FAILED, format!("verify: failed {}", failed.join(", ")))
    };
    Ok(Rendered { content, code, note: Some(note) })
}

fn oracle(plan: &RunPlan, grid: &hulthen::GridSpec) -> Result<Rendered, RunError> {
    let spec = &plan.spec;
    let spec_ = fd_dirac_spectrum(spec, grid)?;
    let content = match plan.output.format {
        Format::Csv => {
            let mut header = spec_header(spec);
            header.push(("x_min".into(), fmt_f64(grid.x_min)));
            header.push(("x_max".into(), fmt_f64(grid.x_max)));
            header.push(("cells".into(), grid.n_points.to_string()));
            header.push(("staggered".into(), grid.staggered.to_string()));
            header.push(("command".into(), plan.command_line.clone()));
            let columns = vec!["index", "E_re", "E_im"];
            let rows = spec_
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, e)| vec![i.to_string(), fmt_f64(e.re), fmt_f64(e.im)])
                .collect();
            Table { header, columns, rows }.to_csv()
        }
        Format::Json => {
            let mut params = spec_json(spec);
            params.insert(
                "grid".into(),
                json!({
                    "x_min": json_f64(grid.x_min),
                    "x_max": json_f64(grid.x_max),
                    "cells": grid.n_points,
                    "staggered": grid.staggered,
                }),
            );
            let results = spec_.eigenvalues.iter().map(|e| json!({ "E": energy_json(*e) })).collect();
            json_document(params, results, &plan.command_line)
        }
    };
    Ok(Rendered { content, code: EXIT_OK, note: None })
}
