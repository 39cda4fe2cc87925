//! Deterministic report trees. Keys are sorted (serde_json's default map is
//! ordered) and rationals are written as `"p/q"` strings.

use serde_json::{json, Map, Value};

use crate::cohomology::{betti, betti_table, class_report_up_to, is_closed, is_exact};
use crate::error::Result;
use crate::forms::{trace_form, AlternatingForm, PERMUTATION_CAP};
use crate::geometry::{Convergence, FrameDiagnostics};
use crate::lie::{LieAlgebra, ValidationReport};
use crate::rational::format_rational;

/// Largest dimension for which the full Betti table is computed by default.
pub const MAX_BETTI_DIM: usize = 12;

fn violations(report: &ValidationReport) -> Value {
    Value::Array(
        report
            .violations
            .iter()
            .map(|v| json!({"i": v.i, "j": v.j, "k": v.k, "m": v.m, "value": format_rational(&v.value)}))
            .collect(),
    )
}

fn form_components(alg: &LieAlgebra, form: &AlternatingForm) -> Value {
    Value::Array(
        form.entries()
            .into_iter()
            .map(|(subset, value)| {
                let labels: Vec<&str> = subset.iter().map(|&i| alg.names()[i - 1].as_str()).collect();
                json!({"subset": subset, "basis": labels, "value": format_rational(&value)})
            })
            .collect(),
    )
}

/// The full analysis; the flag is `false` when the Jacobi identity fails, in
/// which case only the validation part is filled in.
pub fn analysis(name: &str, alg: &LieAlgebra, max_degree: Option<usize>) -> Result<(Value, bool)> {
    let validation = alg.validate();
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("dim".into(), json!(alg.dim()));
    m.insert("basis".into(), json!(alg.names()));
    m.insert("jacobi_ok".into(), json!(validation.ok));
    if !validation.ok {
        m.insert("jacobi_violations".into(), violations(&validation));
        return Ok((Value::Object(m), false));
    }
    let n = alg.dim();
    let sig = alg.killing_signature();
    m.insert("solvable".into(), json!(alg.is_solvable()));
    m.insert("nilpotent".into(), json!(alg.is_nilpotent()));
    m.insert("semisimple".into(), json!(alg.is_semisimple()));
    m.insert("unimodular".into(), json!(alg.is_unimodular()));
    m.insert(
        "killing_signature".into(),
        json!({"positive": sig.positive, "negative": sig.negative, "zero": sig.zero}),
    );
    m.insert("derived_series".into(), json!(alg.derived_series()));
    m.insert("lower_central_series".into(), json!(alg.lower_central_series()));
    let top = max_degree.unwrap_or(n).min(n);
    if max_degree.is_some() || n <= MAX_BETTI_DIM {
        let b: Vec<usize> = if top == n {
            betti_table(alg)
        } else {
            (0..=top).map(|k| betti(alg, k)).collect::<Result<_>>()?
        };
        m.insert("betti".into(), json!(b));
    }
    let classes = class_report_up_to(alg, top.min(PERMUTATION_CAP))?;
    let classes: Map<String, Value> = classes
        .into_iter()
        .map(|(k, s)| (k.to_string(), json!(s.as_str())))
        .collect();
    m.insert("classes".into(), Value::Object(classes));
    Ok((Value::Object(m), true))
}

pub fn forms(name: &str, alg: &LieAlgebra, degree: usize) -> Result<Value> {
    let w = trace_form(alg, degree)?;
    Ok(json!({
        "name": name,
        "degree": degree,
        "zero": w.is_zero(),
        "components": form_components(alg, &w),
    }))
}

pub fn cohomology(name: &str, alg: &LieAlgebra, degree: usize) -> Result<Value> {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("degree".into(), json!(degree));
    m.insert("betti".into(), json!(betti(alg, degree)?));
    let trace = if degree == 0 || degree > PERMUTATION_CAP {
        Value::Null
    } else {
        let w = trace_form(alg, degree)?;
        let closed = is_closed(alg, &w)?;
        let mut t = Map::new();
        t.insert("zero".into(), json!(w.is_zero()));
        t.insert("closed".into(), json!(closed));
        if closed {
            let e = is_exact(alg, &w)?;
            t.insert("exact".into(), json!(e.exact));
            t.insert(
                "primitive".into(),
                e.primitive.map_or(Value::Null, |p| form_components(alg, &p)),
            );
        }
        Value::Object(t)
    };
    m.insert("trace_form".into(), trace);
    Ok(Value::Object(m))
}

fn convergence(c: &Convergence) -> Value {
    json!({
        "h": c.h,
        "coarse": c.coarse,
        "fine": c.fine,
        "ratio": if c.ratio.is_finite() { json!(c.ratio) } else { Value::Null },
        "tolerance": c.tolerance,
        "floor": c.floor,
        "passed": c.passed,
    })
}

pub fn curvature(name: &str, d: &FrameDiagnostics) -> Value {
    json!({
        "frame": name,
        "h": d.h,
        "lattice_points": d.points,
        "sample_pairs": d.pairs,
        "min_abs_det": d.min_det,
        "max_gamma": d.gamma,
        "max_torsion": d.torsion,
        "max_w": d.w,
        "max_r1": d.r1,
        "max_r2": d.r2,
        "max_r_full": d.r_full,
        "max_r_full_diagonal": d.r_full_diagonal,
        "max_dw_minus_tr_r2": d.dw_residual,
        "scale": d.scale,
        "tolerance": d.tolerance,
        "r2_vanishes": d.r2_vanishes(),
        "r_full_vanishes": d.r_full_vanishes(),
        "r1_convergence": convergence(&d.r1_convergence),
        "dw_minus_tr_r2_convergence": convergence(&d.dw_convergence),
    })
}

/// Indented `key: value` lines for `--format text`.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    write_text(value, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(item, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
