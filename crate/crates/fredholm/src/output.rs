//! JSON and CSV forms of results.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use fredholm_core::index::{FredholmStatus, IndexMethod, IndexResult, RootReport};
use fredholm_core::portrait::{JumpHistogram, PortraitGrid, WindingChange, WrapOutcome};
use fredholm_core::qhe::{LandauWeights, StepCurve};
use fredholm_core::truncation::IndexSignature;
use fredholm_core::{CoefficientField, Error};
use serde::Serialize;
use serde_json::{json, Value};

pub fn index_result(r: &IndexResult) -> Value {
    let method = match r.method {
        IndexMethod::Roots => "roots",
        IndexMethod::Winding => "winding",
    };
    match r.status {
        FredholmStatus::Fredholm { index } => json!({
            "status": "fredholm",
            "index": index,
            "min_modulus": r.min_modulus,
            "method": method,
        }),
        FredholmStatus::NotFredholm { witness_theta } => json!({
            "status": "not_fredholm",
            "witness_theta": witness_theta,
            "min_modulus": r.min_modulus,
            "method": method,
        }),
    }
}

pub fn root_report(r: &RootReport) -> Value {
    let roots: Vec<[f64; 2]> = r.roots.iter().map(|z| [z.re, z.im]).collect();
    json!({
        "roots": roots,
        "pole_order": r.pole_order,
        "inside": r.inside_count,
        "on_circle": r.on_circle_count,
        "outside": r.outside_count,
    })
}

pub fn signature(s: &IndexSignature) -> Value {
    json!({
        "N": s.size,
        "magnitude": s.magnitude,
        "sign": s.sign,
        "sigmas": s.smallest_sigmas,
    })
}

pub fn field_name(f: CoefficientField) -> &'static str {
    match f {
        CoefficientField::Complex => "complex",
        CoefficientField::Real => "real",
    }
}

#[derive(Serialize)]
struct JumpsJson<'a> {
    ensemble: &'a str,
    degree: usize,
    counts: BTreeMap<String, u64>,
    unresolved: u64,
    paths: usize,
    steps: usize,
    seed: u64,
}

pub fn jumps(h: &JumpHistogram) -> Value {
    serde_json::to_value(JumpsJson {
        ensemble: field_name(h.ensemble),
        degree: h.degree,
        counts: h.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        unresolved: h.unresolved,
        paths: h.paths,
        steps: h.steps,
        seed: h.seed,
    })
    .expect("plain data serializes")
}

pub fn wrap(ell: u32, delta: f64, big_n: u64, eps: f64, w: &WrapOutcome) -> Value {
    let (status, change, theta) = match w.winding_change {
        WindingChange::Defined(k) => ("fredholm", Some(k), None),
        WindingChange::NotFredholm { witness_theta } => ("not_fredholm", None, Some(witness_theta)),
    };
    let mut v = json!({
        "ell": ell,
        "delta": delta,
        "N": big_n,
        "eps": eps,
        "status": status,
        "winding_change": change,
        "perturbation_cl_norm": w.perturbation_cl_norm,
        "grid": w.grid,
    });
    if let Some(t) = theta {
        v["witness_theta"] = json!(t);
    }
    v
}

/// Structured form of a core error for the diagnostic stream.
pub fn error(e: &Error) -> Value {
    match e {
        Error::ZeroSymbol => json!({"error": "zero_symbol", "message": e.to_string()}),
        Error::NotFredholm { witness_theta, min_modulus } => {
            json!({"error": "not_fredholm", "witness_theta": witness_theta, "min_modulus": min_modulus})
        }
        Error::GridTooCoarse { grid, step, theta } => {
            json!({"error": "grid_too_coarse", "grid": grid, "step": step, "theta": theta})
        }
        Error::Inconclusive { sigma_tol, sigma } => {
            json!({"error": "inconclusive", "sigma_tol": sigma_tol, "sigma": sigma})
        }
        Error::WrongRegime(m) => json!({"error": "wrong_regime", "message": m}),
        Error::DegenerateFermi { energy, eigenvalue, gap } => {
            json!({"error": "degenerate_fermi", "energy": energy, "eigenvalue": eigenvalue, "gap": gap})
        }
        Error::OriginOnSite { x, y } => json!({"error": "origin_on_site", "x": x, "y": y}),
        Error::InvalidArgument(m) => json!({"error": "invalid_argument", "message": m}),
    }
}

/// `c1,c0,index`, first axis outer; non-Fredholm cells read `NF`.
pub fn write_portrait_csv(grid: &PortraitGrid, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c1", "c0", "index"])?;
    let (r0, r1) = grid.shape();
    for i in 0..r0 {
        for j in 0..r1 {
            let (x, y) = grid.point(i, j);
            let code = match grid.cell(i, j).index() {
                Some(k) => k.to_string(),
                None => "NF".to_string(),
            };
            w.write_record([x.to_string(), y.to_string(), code])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn portrait_sidecar(grid: &PortraitGrid) -> Value {
    let band = fredholm_core::IndexOptions::default().band;
    json!({
        "family": grid.family.name,
        "field": field_name(grid.family.field),
        "axes": ["c1", "c0"],
        "window": grid.axes.iter().map(|a| [a.min, a.max]).collect::<Vec<_>>(),
        "resolution": grid.axes.iter().map(|a| a.resolution).collect::<Vec<_>>(),
        "cells": grid.cells.len(),
        "not_fredholm_cells": grid.cells.iter().filter(|c| c.index().is_none()).count(),
        "not_fredholm_code": "NF",
        "oracle": {"name": "roots", "band": band, "version": env!("CARGO_PKG_VERSION")},
        "cross_check": {
            "oracle": "winding",
            "fraction": fredholm_core::portrait::CROSS_CHECK_FRACTION,
            "checked": grid.cross_checked,
            "mismatches": grid.cross_check_mismatches,
        },
    })
}

/// `m,w,asymptote,residual` with `asymptote = 1 - 1/(8m)`; the `m = 0` row
/// has no asymptote.
pub fn write_landau_csv(w: &LandauWeights, out: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["m", "w", "asymptote", "residual"])?;
    for m in 0..=w.m_max() {
        let (asym, res) = if m == 0 {
            ("nan".to_string(), "nan".to_string())
        } else {
            let a = 1.0 - 1.0 / (8.0 * m as f64);
            (a.to_string(), w.asymptotic_residual(m).to_string())
        };
        csv.write_record([m.to_string(), w.weight(m).to_string(), asym, res])?;
    }
    csv.flush()?;
    Ok(())
}

/// `E,estimate,nearest_int,deviation,flags`; flags is `shifted` when the
/// energy was nudged off an eigenvalue and `-` otherwise.
pub fn write_steps_csv(curve: &StepCurve, out: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["E", "estimate", "nearest_int", "deviation", "flags"])?;
    for ((e, est), shifted) in curve.energies.iter().zip(&curve.estimates).zip(&curve.shifted) {
        csv.write_record([
            e.to_string(),
            est.value.to_string(),
            est.nearest.to_string(),
            est.deviation.to_string(),
            if *shifted { "shifted" } else { "-" }.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// `E,sigma_min` for the smallest singular values of `C_beta(E)`.
pub fn write_cbeta_csv(energies: &[f64], sigmas: &[f64], out: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["E", "sigma_min"])?;
    for (e, s) in energies.iter().zip(sigmas) {
        csv.write_record([e.to_string(), s.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}
