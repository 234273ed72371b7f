//! Reports as JSON values, with text rendered from the same value.

use std::fmt::Write;

use ndsid::ident::{IdentVerdict, Method, MethodChoice, Status};
use ndsid::pencil::KroneckerForm;
use ndsid::polymat::{PolyMatrix, SmithMcMillanForm};
use serde_json::{json, Value};

use crate::modelfile::{matrix_json, FORMAT_VERSION};

/// Exit code of a verdict.
pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Identifiable => 0,
        Status::Unidentifiable => 1,
        Status::Inconclusive => 2,
    }
}

/// Flag value of a method on the command line.
pub fn method_flag(m: Method) -> &'static str {
    match m {
        Method::Sufficient => "thm2",
        Method::CoefficientStack => "thm5",
        Method::Factored => "cor2",
        Method::PencilChain => "chain",
    }
}

fn trail(v: &IdentVerdict, choice: MethodChoice) -> Vec<String> {
    let mut t = Vec::new();
    if choice == MethodChoice::Auto {
        t.push(
            match v.method {
                Method::Factored => "auto: factorization supplied, using the factored coefficient-stack test",
                Method::CoefficientStack => "auto: G_zv is identically zero, using the coefficient-stack test",
                _ => "auto: G_zv is not identically zero and no factorization given, using the sufficient rank test",
            }
            .to_string(),
        );
    }
    t.push(match v.method {
        Method::Sufficient | Method::PencilChain => {
            "condition: every G_yv(i) of full normal column rank and every G_zu(i) of full normal row rank (sufficient only)".into()
        }
        Method::CoefficientStack | Method::Factored => {
            "condition: every coefficient stack of full column rank (necessary and sufficient)".into()
        }
    });
    t.extend(v.notes.iter().cloned());
    t
}

pub fn check_json(v: &IdentVerdict, choice: MethodChoice, elapsed_ms: f64) -> Value {
    let subsystems: Vec<Value> = v
        .subsystems
        .iter()
        .map(|s| {
            json!({
                "index": s.index, "m_v": s.m_v, "m_z": s.m_z,
                "rank_yv": s.rank_yv, "rank_zu": s.rank_zu,
                "fncr_yv": s.fncr_yv, "fnrr_zu": s.fnrr_zu,
            })
        })
        .collect();
    let pairs: Vec<Value> = v
        .pairs
        .iter()
        .map(|p| {
            json!({
                "i": p.i, "j": p.j, "rows": p.rows, "cols": p.cols,
                "free_cols": p.free_cols, "rank": p.rank, "fcr": p.fcr,
            })
        })
        .collect();
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "block": [w.i, w.j],
            "delta": matrix_json(&w.delta),
            "phi1": matrix_json(&w.phi1),
            "phi2": matrix_json(&w.phi2),
        })
    });
    json!({
        "format_version": FORMAT_VERSION,
        "command": "check",
        "status": v.status.to_string(),
        "method": v.method.to_string(),
        "method_flag": method_flag(v.method),
        "exit_code": exit_code(v.status),
        "trail": trail(v, choice),
        "subsystems": subsystems,
        "pairs": pairs,
        "witness": witness,
        "elapsed_ms": elapsed_ms,
    })
}

fn opt(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn matrix_text(v: &Value, indent: &str) -> String {
    let rows = v.as_array().cloned().unwrap_or_default();
    if rows.is_empty() {
        return format!("{indent}[]\n");
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| r.as_array().map(|c| c.iter().map(opt).collect()).unwrap_or_default()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for r in cells {
        let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{indent}[ {} ]", line.join("  "));
    }
    out
}

pub fn check_text(r: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {} (method {}, flag {})", opt(&r["status"]), opt(&r["method"]), opt(&r["method_flag"]));
    for t in r["trail"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  - {}", opt(t));
    }
    let subs = r["subsystems"].as_array().cloned().unwrap_or_default();
    if !subs.is_empty() {
        let _ = writeln!(out, "subsystem  m_v  m_z  rank G_yv  rank G_zu  FNCR G_yv  FNRR G_zu");
        for s in &subs {
            let _ = writeln!(
                out,
                "{:>9}  {:>3}  {:>3}  {:>9}  {:>9}  {:>9}  {:>9}",
                opt(&s["index"]), opt(&s["m_v"]), opt(&s["m_z"]), opt(&s["rank_yv"]),
                opt(&s["rank_zu"]), opt(&s["fncr_yv"]), opt(&s["fnrr_zu"])
            );
        }
    }
    let pairs = r["pairs"].as_array().cloned().unwrap_or_default();
    if !pairs.is_empty() {
        let _ = writeln!(out, "block   stack rows  free cols  rank  full column rank");
        for p in &pairs {
            let _ = writeln!(
                out,
                "({},{})  {:>10}  {:>9}  {:>4}  {}",
                opt(&p["i"]), opt(&p["j"]), opt(&p["rows"]), opt(&p["free_cols"]), opt(&p["rank"]), opt(&p["fcr"])
            );
        }
    }
    if let Some(w) = r["witness"].as_object() {
        let _ = writeln!(out, "witness: block {} of Phi changed by", w["block"]);
        out.push_str(&matrix_text(&w["delta"], "  "));
        let _ = writeln!(out, "  Phi1 =");
        out.push_str(&matrix_text(&w["phi1"], "    "));
        let _ = writeln!(out, "  Phi2 =");
        out.push_str(&matrix_text(&w["phi2"], "    "));
        let _ = writeln!(out, "  both give the same input-output transfer matrix");
    }
    let _ = writeln!(out, "elapsed: {:.1} ms", r["elapsed_ms"].as_f64().unwrap_or(0.0));
    out
}

pub fn poly_matrix_json(m: &PolyMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|p| json!(p.to_string())).collect())).collect())
}

pub fn smith_json(tfm: &str, subsystem: usize, sm: &SmithMcMillanForm, self_test: Option<bool>) -> Value {
    let diag: Vec<Value> =
        sm.alpha.iter().zip(&sm.beta).map(|(a, b)| json!({"num": a.to_string(), "den": b.to_string()})).collect();
    json!({
        "format_version": FORMAT_VERSION,
        "command": "smith",
        "tfm": tfm,
        "subsystem": subsystem,
        "rows": sm.u.rows(),
        "cols": sm.v.cols(),
        "rank": sm.rank(),
        "diagonal": diag,
        "u": poly_matrix_json(&sm.u),
        "v": poly_matrix_json(&sm.v),
        "self_test": self_test,
    })
}

pub fn smith_text(r: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Smith-McMillan form of G_{}({}): {}x{}, rank {}",
        opt(&r["tfm"]), opt(&r["subsystem"]), opt(&r["rows"]), opt(&r["cols"]), opt(&r["rank"])
    );
    for (k, d) in r["diagonal"].as_array().into_iter().flatten().enumerate() {
        let _ = writeln!(out, "  entry {}: ({}) / ({})", k + 1, opt(&d["num"]), opt(&d["den"]));
    }
    let _ = writeln!(out, "U =");
    out.push_str(&matrix_text(&r["u"], "  "));
    let _ = writeln!(out, "V =");
    out.push_str(&matrix_text(&r["v"], "  "));
    if !r["self_test"].is_null() {
        let _ = writeln!(out, "self-test (U diag V == G): {}", if r["self_test"] == json!(true) { "pass" } else { "FAIL" });
    }
    out
}

pub fn kcf_json(subsystem: usize, dual: bool, pencil: &str, k: &KroneckerForm, fncr: Option<bool>) -> Value {
    let inv = k.inventory();
    let blocks: Vec<Value> = k.blocks.iter().map(|b| json!({"kind": b.kind.to_string(), "size": b.size})).collect();
    let canon = k.canonical();
    json!({
        "format_version": FORMAT_VERSION,
        "command": "kcf",
        "subsystem": subsystem,
        "dual": dual,
        "pencil": pencil,
        "rows": canon.rows(),
        "cols": canon.cols(),
        "blocks": blocks,
        "inventory": {"h": inv.h, "k": inv.k, "n": inv.n, "l": inv.l, "j": inv.j},
        "zeta_l": k.zeta_l(),
        "u": matrix_json(&k.u),
        "v": matrix_json(&k.v),
        "fncr": fncr,
    })
}

pub fn kcf_text(r: &Value) -> String {
    let mut out = String::new();
    let side = if r["dual"] == json!(true) { "dual of subsystem" } else { "subsystem" };
    let _ = writeln!(out, "Kronecker form of the {} pencil, {} {}: {}x{}", opt(&r["pencil"]), side, opt(&r["subsystem"]), opt(&r["rows"]), opt(&r["cols"]));
    let blocks: Vec<String> = r["blocks"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|b| format!("{}{}", opt(&b["kind"]), opt(&b["size"])))
        .collect();
    let _ = writeln!(out, "blocks: {}", if blocks.is_empty() { "none".into() } else { blocks.join(" ") });
    let _ = writeln!(out, "number of L blocks: {}", opt(&r["zeta_l"]));
    if !r["fncr"].is_null() {
        let what = if r["dual"] == json!(true) { "G_zu full normal row rank" } else { "G_yv full normal column rank" };
        let _ = writeln!(out, "{what}: {}", opt(&r["fncr"]));
    }
    let _ = writeln!(out, "U =");
    out.push_str(&matrix_text(&r["u"], "  "));
    let _ = writeln!(out, "V =");
    out.push_str(&matrix_text(&r["v"], "  "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndsid::ident::check_sufficient;
    use ndsid::model::circuit::reference_nds;
    use ndsid::ratpoly::rat;

    #[test]
    fn text_follows_json() {
        let v = check_sufficient(&reference_nds(&rat(1, 2)).unwrap()).unwrap();
        let j = check_json(&v, MethodChoice::Auto, 1.0);
        assert_eq!(j["exit_code"], 2);
        let t = check_text(&j);
        assert!(t.starts_with("verdict: inconclusive"));
        assert!(t.contains("subsystem 0: G_zu lacks full normal row rank"));
    }
}
