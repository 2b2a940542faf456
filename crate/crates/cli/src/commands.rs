use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use oh_core::conditions::{minimal_constant, shared_constants, ConditionId};
use oh_core::funcspace::io::{format_value, read_csv, write_csv};
use oh_core::funcspace::{sample_cone, ConeConfig};
use oh_core::harness::{verify_theorem, Setup, TheoremId, Verdict};
use oh_core::nfunctions::{check_delta2, check_order, DEFAULT_RANGE, DEFAULT_SAMPLES};
use oh_core::operators::{dunkl_hausdorff, dunkl_hausdorff_adjoint, Classical};
use oh_core::orlicz::{duality_gap, luxemburg_norm, modular, sawyer_duality_gap};
use oh_core::{Error, Result};

use crate::config::Config;
use crate::Which;

/// Pretty JSON with keys in sorted order.
fn canonical<T: Serialize>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value).map_err(|e| Error::numerical(format!("report serialization: {e}")))?;
    Ok(serde_json::to_string_pretty(&v).expect("values serialize"))
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(line: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print<T: Serialize>(value: &T) -> Result<()> {
    emit(&canonical(value)?)
}

pub fn nfunc_check(path: &Path) -> Result<()> {
    let cfg = Config::load(path)?;
    let mut entries = serde_json::Map::new();
    for (name, spec) in &cfg.nfunctions {
        let nf = spec.build()?;
        let delta2 = check_delta2(&nf, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
        let conjugate = match nf.complementary() {
            Ok(pair) => {
                let probes = [0.1, 1.0, 10.0];
                let values: Vec<Value> =
                    probes.iter().map(|&t| json!({"t": t, "value": format_value(pair.conjugate.eval(t))})).collect();
                let d2 = check_delta2(&pair.conjugate, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
                json!({"method": format!("{:?}", pair.method), "samples": values, "delta2": d2})
            }
            Err(e) => json!({"error": e.to_string()}),
        };
        entries.insert(name.clone(), json!({"delta2": delta2, "conjugate": conjugate}));
    }

    let phi = cfg.phi()?;
    let psi = cfg.psi()?;
    let mut failure = None;
    let d_phi = check_delta2(&phi, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
    if !d_phi.passes {
        failure.get_or_insert("Phi in Delta2 required");
    }
    let order = check_order(&phi, &psi, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
    if !order.precedes {
        failure.get_or_insert("Phi precedes Psi required");
    }
    if failure.is_none() {
        let conj = phi.complementary()?;
        if !check_delta2(&conj.conjugate, DEFAULT_RANGE, DEFAULT_SAMPLES)?.passes {
            failure = Some("complementary Phi in Delta2 required");
        }
    }
    print(&json!({
        "nfunctions": entries,
        "pair": {"phi": cfg.pair.phi, "psi": cfg.pair.psi, "order": order},
        "failed": failure,
    }))?;
    match failure {
        Some(name) => Err(Error::hypothesis(name)),
        None => Ok(()),
    }
}

pub fn norm(path: &Path, function: &str, report: Option<&Path>) -> Result<()> {
    let cfg = Config::load(path)?;
    let (f, phi, v) = (cfg.function(function)?, cfg.phi()?, cfg.v()?);
    let value = luxemburg_norm(&f, &phi, &v);
    let line = json!({
        "function": function,
        "nfunction": cfg.pair.phi,
        "luxemburg": format_value(value),
        "modular": format_value(modular(&f, &phi, &v)),
    });
    emit(&format!("{function} {}", format_value(value)))?;
    if let Some(out) = report {
        let mut file = OpenOptions::new().create(true).append(true).open(out)?;
        writeln!(file, "{line}")?;
    }
    if value.is_nan() {
        return Err(Error::numerical("norm evaluation produced NaN"));
    }
    Ok(())
}

pub fn op_apply(config: Option<&Path>, op: &str, input: &Path, output: &Path) -> Result<()> {
    let cfg = config.map(Config::load).transpose()?;
    let grid = match &cfg {
        Some(c) => c.output_grid()?,
        None => None,
    };
    let f = read_csv(input)?;
    let multiplier = || {
        cfg.as_ref()
            .ok_or_else(|| Error::Config(format!("operator '{op}' needs --config with a multiplier")))?
            .multiplier()
    };
    let out = match op {
        "dunkl" => dunkl_hausdorff(&multiplier()?, &f, grid.as_deref())?,
        "adjoint" => dunkl_hausdorff_adjoint(&multiplier()?, &f, grid.as_deref())?,
        other => other.parse::<Classical>()?.apply(&f, grid.as_deref())?,
    };
    write_csv(&out, output)?;
    print(&json!({"op": op, "input": input, "output": output, "points": out.xs().len()}))
}

pub fn conditions(path: &Path, theorem: &str, csv: Option<&Path>) -> Result<()> {
    let cfg = Config::load(path)?;
    let ids = ConditionId::for_theorem(theorem)?;
    let ctx = cfg.condition_context()?;
    let grid = cfg.condition_grid()?;
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        reports.push(minimal_constant(&ctx, id, &grid)?);
    }
    if let Some(out) = csv {
        let mut file = std::fs::File::create(out)?;
        for (i, rep) in reports.iter().enumerate() {
            let mut buf = Vec::new();
            rep.write_csv(&mut buf)?;
            let text = String::from_utf8(buf).expect("csv is utf-8");
            // one header for the whole table
            let body = if i == 0 { text.as_str() } else { text.split_once('\n').map_or("", |(_, b)| b) };
            file.write_all(body.as_bytes())?;
        }
    }
    let effective: Vec<Value> = reports
        .iter()
        .map(|r| json!({"id": r.id, "effective_constant": format_value(r.effective_constant())}))
        .collect();
    print(&json!({
        "theorem": theorem,
        "conditions": reports,
        "effective": effective,
        "shared_constants": shared_constants(&reports),
    }))
}

pub fn verify(path: &Path, theorem: &str, seed: Option<u64>) -> Result<()> {
    let cfg = Config::load(path)?;
    let theorem: TheoremId = theorem.parse()?;
    let phi = cfg.phi()?;
    // a generator outside Delta2 can make the conjugate unbuildable, so gate first
    if !check_delta2(&phi, DEFAULT_RANGE, DEFAULT_SAMPLES)?.passes {
        return Err(Error::hypothesis("Phi in Delta2 required"));
    }
    let multiplier = match theorem {
        TheoremId::C24 => oh_core::operators::MultiplierFunction::calderon(),
        _ => cfg.multiplier()?,
    };
    let mut setup = Setup::new(phi.complementary()?, cfg.psi()?.complementary()?, cfg.v()?, cfg.w0()?, cfg.w1()?, multiplier);
    setup.cone = cfg.cone.apply(setup.cone);
    if let Some(s) = seed {
        setup.cone.seed = s;
    }
    setup.grid = cfg.condition_grid()?;
    if let Some(eps) = cfg.eps_scale()? {
        setup.eps = eps;
    }
    setup.policy = cfg.policy;
    let report = verify_theorem(theorem, &setup)?;
    print(&report)?;
    match (report.verdict, report.failed_assumption()) {
        (Verdict::Indeterminate, Some(name)) => Err(Error::hypothesis(name)),
        _ => Ok(()),
    }
}

pub fn duality(path: &Path, which: Which, only: Option<&str>) -> Result<()> {
    let cfg = Config::load(path)?;
    let pair = cfg.phi()?.complementary()?;
    let v = cfg.v()?;
    let cone_cfg = cfg.cone.apply(ConeConfig::default());
    let cone = sample_cone(&cone_cfg);
    let names: Vec<&String> = match only {
        Some(name) => vec![cfg.functions.get_key_value(name).map(|(k, _)| k).ok_or_else(|| Error::Config(format!("no function named '{name}'")))?],
        None => cfg.functions.keys().collect(),
    };
    if names.is_empty() {
        return Err(Error::Config("the configuration declares no functions".into()));
    }
    match which {
        Which::Plain => {
            emit("function,rhs,rhs_orlicz,best_lhs,best_cone_lhs,best_young_lhs,gap,candidates")?;
            for name in names {
                let r = duality_gap(&cfg.function(name)?, &pair, &v, &cone)?;
                emit(&format!(
                    "{name},{},{},{},{},{},{},{}",
                    format_value(r.rhs),
                    format_value(r.rhs_orlicz),
                    format_value(r.best_lhs),
                    format_value(r.best_cone_lhs),
                    format_value(r.best_young_lhs),
                    format_value(r.gap),
                    r.candidates
                ))?;
            }
        }
        Which::Sawyer => {
            emit("function,rhs,best_lhs,ratio,candidates")?;
            for name in names {
                let r = sawyer_duality_gap(&cfg.function(name)?, &pair, &v, &cone)?;
                emit(&format!(
                    "{name},{},{},{},{}",
                    format_value(r.rhs),
                    format_value(r.best_lhs),
                    format_value(r.ratio),
                    r.candidates
                ))?;
            }
        }
    }
    Ok(())
}
