//! JSON model files.
//!
//! Every exact entry is either a string (`"3"`, `"-2/7"`, `"0.25"`, `"1e-3"`)
//! or a JSON number, which is read through its decimal text so `0.1` becomes
//! exactly `1/10`. Omitted blocks default to zero of the shape given by
//! `dims`.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "metadata": {"name": "demo"},
//!   "subsystems": [{
//!     "dims": {"m_x": 1, "m_v": 1, "m_u": 1, "m_y": 1, "m_z": 1},
//!     "nominal": {"A_xx": [["-1"]], "A_xv": [[1]], "B_x": [[1]],
//!                 "A_zx": [[1]], "C_x": [[1]]}
//!   }],
//!   "phi": {"values": [["0"]], "pattern": [[true]]}
//! }
//! ```

use ndsid::ident::Factorization;
use ndsid::model::{Dims, NdsModel, Scm, SubsystemLft, SubsystemRealized};
use ndsid::polymat::{Mat, QMatrix, RatMatrix};
use ndsid::ratpoly::{format_rat, parse_rat, Poly, Rat, RatFunc};
use ndsid::{Error, Result};
use serde_json::{json, Map, Value};

pub const FORMAT_VERSION: u64 = 1;

/// A parsed model file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: NdsModel,
    pub metadata: Value,
    pub factorization: Option<Factorization>,
}

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn entry(v: &Value, path: &str) -> Result<Rat> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(err(path, format!("expected a rational, got {other}"))),
    };
    parse_rat(&text).map_err(|e| err(path, e))
}

fn rows_of<'a>(v: &'a Value, path: &str) -> Result<Vec<&'a Vec<Value>>> {
    let outer = v.as_array().ok_or_else(|| err(path, "expected an array of rows"))?;
    outer
        .iter()
        .enumerate()
        .map(|(i, r)| r.as_array().ok_or_else(|| err(&format!("{path}[{i}]"), "expected a row array")))
        .collect()
}

fn grid<T: Clone>(v: &Value, path: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<Mat<T>> {
    let rows = rows_of(v, path)?;
    let width = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(err(path, format!("row {i} has {} entries, expected {width}", r.len())));
        }
        out.push(r.iter().enumerate().map(|(j, x)| f(x, &format!("{path}[{i}][{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    if out.is_empty() {
        return Ok(Mat::from_fn(0, 0, |_, _| unreachable!()));
    }
    Ok(Mat::from_rows(out))
}

/// Parses a matrix of exact entries.
pub fn parse_matrix(v: &Value, path: &str) -> Result<QMatrix> {
    grid(v, path, entry)
}

fn shaped(v: Option<&Value>, path: &str, rows: usize, cols: usize) -> Result<QMatrix> {
    let Some(v) = v else { return Ok(QMatrix::zeros(rows, cols)) };
    let m = parse_matrix(v, path)?;
    // An empty array stands for any shape with a zero dimension.
    if m.rows() == 0 && (rows == 0 || cols == 0) {
        return Ok(QMatrix::zeros(rows, cols));
    }
    if m.shape() != (rows, cols) {
        return Err(err(path, format!("expected {rows}x{cols}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn dim(obj: &Map<String, Value>, key: &str, path: &str) -> Result<usize> {
    match obj.get(key) {
        None => Ok(0),
        Some(v) => v
            .as_u64()
            .map(|d| d as usize)
            .ok_or_else(|| err(&format!("{path}.{key}"), "expected a non-negative integer")),
    }
}

fn parse_subsystem(v: &Value, path: &str) -> Result<SubsystemLft> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
    let dp = format!("{path}.dims");
    let dv = obj.get("dims").and_then(Value::as_object).ok_or_else(|| err(&dp, "missing dims object"))?;
    let d = Dims {
        m_x: dim(dv, "m_x", &dp)?,
        m_v: dim(dv, "m_v", &dp)?,
        m_u: dim(dv, "m_u", &dp)?,
        m_y: dim(dv, "m_y", &dp)?,
        m_z: dim(dv, "m_z", &dp)?,
        m_g: dim(dv, "m_g", &dp)?,
        m_p: dim(dv, "m_p", &dp)?,
    };
    let empty = Map::new();
    let sect = |name: &str| -> Result<&Map<String, Value>> {
        match obj.get(name) {
            None => Ok(&empty),
            Some(v) => v.as_object().ok_or_else(|| err(&format!("{path}.{name}"), "expected an object")),
        }
    };
    let nom = sect("nominal")?;
    let lft = sect("lft")?;
    let np = |k: &str| format!("{path}.nominal.{k}");
    let lp = |k: &str| format!("{path}.lft.{k}");
    let nominal = SubsystemRealized {
        a_xx: shaped(nom.get("A_xx"), &np("A_xx"), d.m_x, d.m_x)?,
        a_xv: shaped(nom.get("A_xv"), &np("A_xv"), d.m_x, d.m_v)?,
        b_x: shaped(nom.get("B_x"), &np("B_x"), d.m_x, d.m_u)?,
        a_zx: shaped(nom.get("A_zx"), &np("A_zx"), d.m_z, d.m_x)?,
        a_zv: shaped(nom.get("A_zv"), &np("A_zv"), d.m_z, d.m_v)?,
        b_z: shaped(nom.get("B_z"), &np("B_z"), d.m_z, d.m_u)?,
        c_x: shaped(nom.get("C_x"), &np("C_x"), d.m_y, d.m_x)?,
        c_v: shaped(nom.get("C_v"), &np("C_v"), d.m_y, d.m_v)?,
        d_u: shaped(nom.get("D_u"), &np("D_u"), d.m_y, d.m_u)?,
    };
    if let Some(name) = nom.keys().find(|k| !NOMINAL_KEYS.contains(&k.as_str())) {
        return Err(err(&np(name), "unknown block"));
    }
    if let Some(name) = lft.keys().find(|k| !LFT_KEYS.contains(&k.as_str())) {
        return Err(err(&lp(name), "unknown block"));
    }
    Ok(SubsystemLft {
        nominal,
        h_x: shaped(lft.get("H_x"), &lp("H_x"), d.m_x, d.m_p)?,
        h_z: shaped(lft.get("H_z"), &lp("H_z"), d.m_z, d.m_p)?,
        h_y: shaped(lft.get("H_y"), &lp("H_y"), d.m_y, d.m_p)?,
        f_x: shaped(lft.get("F_x"), &lp("F_x"), d.m_g, d.m_x)?,
        f_v: shaped(lft.get("F_v"), &lp("F_v"), d.m_g, d.m_v)?,
        f_u: shaped(lft.get("F_u"), &lp("F_u"), d.m_g, d.m_u)?,
        g: shaped(lft.get("G"), &lp("G"), d.m_g, d.m_p)?,
        p: shaped(lft.get("P"), &lp("P"), d.m_p, d.m_g)?,
    })
}

const NOMINAL_KEYS: [&str; 9] = ["A_xx", "A_xv", "B_x", "A_zx", "A_zv", "B_z", "C_x", "C_v", "D_u"];
const LFT_KEYS: [&str; 8] = ["H_x", "H_z", "H_y", "F_x", "F_v", "F_u", "G", "P"];

fn flag(v: &Value, path: &str) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        other => Err(err(path, format!("expected true/false or 0/1, got {other}"))),
    }
}

fn parse_phi(v: Option<&Value>, rows: usize, cols: usize) -> Result<Scm> {
    match v {
        None => Ok(Scm::new(QMatrix::zeros(rows, cols))),
        Some(Value::Object(o)) => {
            let values = shaped(o.get("values"), "phi.values", rows, cols)?;
            let mask = o.get("pattern").or_else(|| o.get("free"));
            let free = match mask {
                None => None,
                Some(m) => {
                    let g = grid(m, "phi.pattern", flag)?;
                    if g.shape() != (rows, cols) && !(g.rows() == 0 && (rows == 0 || cols == 0)) {
                        return Err(err("phi.pattern", format!("expected {rows}x{cols}, got {}x{}", g.rows(), g.cols())));
                    }
                    Some(if g.rows() == 0 { Mat::from_fn(rows, cols, |_, _| true) } else { g })
                }
            };
            Ok(Scm { phi: values, free })
        }
        Some(m) => Ok(Scm::new(shaped(Some(m), "phi", rows, cols)?)),
    }
}

fn coeffs(v: &Value, path: &str) -> Result<Poly> {
    let a = v.as_array().ok_or_else(|| err(path, "expected a coefficient array (ascending powers)"))?;
    Ok(Poly::new(a.iter().enumerate().map(|(k, c)| entry(c, &format!("{path}[{k}]"))).collect::<Result<_>>()?))
}

fn ratfunc(v: &Value, path: &str) -> Result<RatFunc> {
    match v {
        Value::Object(o) => {
            let num = o.get("num").map_or(Ok(Poly::zero()), |n| coeffs(n, &format!("{path}.num")))?;
            let den = o.get("den").map_or(Ok(Poly::one()), |d| coeffs(d, &format!("{path}.den")))?;
            RatFunc::new(num, den).map_err(|e| err(path, e))
        }
        other => Ok(RatFunc::constant(entry(other, path)?)),
    }
}

fn parse_factorization(v: &Value) -> Result<Factorization> {
    let o = v.as_object().ok_or_else(|| err("factorization", "expected an object"))?;
    let get = |k: &str| -> Result<RatMatrix> {
        let path = format!("factorization.{k}");
        grid(o.get(k).ok_or_else(|| err(&path, "missing"))?, &path, ratfunc)
    };
    Ok(Factorization { gbar_yv: get("gbar_yv")?, gbar_zu: get("gbar_zu")? })
}

/// Parses and validates a model file.
pub fn from_value(doc: &Value) -> Result<ModelFile> {
    let root = doc.as_object().ok_or_else(|| err("$", "expected a JSON object"))?;
    if let Some(v) = root.get("format_version") {
        if v.as_u64() != Some(FORMAT_VERSION) {
            return Err(err("format_version", format!("unsupported version {v}")));
        }
    }
    let subs = root
        .get("subsystems")
        .and_then(Value::as_array)
        .ok_or_else(|| err("subsystems", "missing subsystem array"))?;
    let subsystems = subs
        .iter()
        .enumerate()
        .map(|(i, s)| parse_subsystem(s, &format!("subsystems[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let m_v: usize = subsystems.iter().map(|s| s.dims().m_v).sum();
    let m_z: usize = subsystems.iter().map(|s| s.dims().m_z).sum();
    let scm = parse_phi(root.get("phi"), m_v, m_z)?;
    let model = NdsModel::new(subsystems, scm)?;
    let factorization = root.get("factorization").map(parse_factorization).transpose()?;
    Ok(ModelFile { model, metadata: root.get("metadata").cloned().unwrap_or(Value::Null), factorization })
}

/// Parses model-file text, reporting syntax errors with line and column.
pub fn from_str(text: &str) -> Result<ModelFile> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    from_value(&doc)
}

pub fn load(path: &std::path::Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_str(&text)
}

/// Exact entries as `"p/q"` strings.
pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| json!(format_rat(x))).collect())).collect())
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| json!(format_rat(c))).collect())
}

fn ratfunc_json(f: &RatFunc) -> Value {
    match f.as_constant() {
        Some(c) => json!(format_rat(&c)),
        None => json!({"num": poly_json(f.num()), "den": poly_json(f.den())}),
    }
}

fn ratmatrix_json(m: &RatMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(ratfunc_json).collect())).collect())
}

fn subsystem_json(s: &SubsystemLft) -> Value {
    let d = s.dims();
    let n = &s.nominal;
    json!({
        "dims": {"m_x": d.m_x, "m_v": d.m_v, "m_u": d.m_u, "m_y": d.m_y, "m_z": d.m_z, "m_g": d.m_g, "m_p": d.m_p},
        "nominal": {
            "A_xx": matrix_json(&n.a_xx), "A_xv": matrix_json(&n.a_xv), "B_x": matrix_json(&n.b_x),
            "A_zx": matrix_json(&n.a_zx), "A_zv": matrix_json(&n.a_zv), "B_z": matrix_json(&n.b_z),
            "C_x": matrix_json(&n.c_x), "C_v": matrix_json(&n.c_v), "D_u": matrix_json(&n.d_u),
        },
        "lft": {
            "H_x": matrix_json(&s.h_x), "H_z": matrix_json(&s.h_z), "H_y": matrix_json(&s.h_y),
            "F_x": matrix_json(&s.f_x), "F_v": matrix_json(&s.f_v), "F_u": matrix_json(&s.f_u),
            "G": matrix_json(&s.g), "P": matrix_json(&s.p),
        },
    })
}

/// Serializes a model file; [`from_value`] inverts it exactly.
pub fn to_value(f: &ModelFile) -> Value {
    let scm = &f.model.scm;
    let phi = match &scm.free {
        None => matrix_json(&scm.phi),
        Some(mask) => json!({
            "values": matrix_json(&scm.phi),
            "pattern": Value::Array((0..mask.rows()).map(|i| json!(mask.row(i))).collect()),
        }),
    };
    let mut doc = json!({
        "format_version": FORMAT_VERSION,
        "metadata": f.metadata,
        "subsystems": f.model.subsystems.iter().map(subsystem_json).collect::<Vec<_>>(),
        "phi": phi,
    });
    if let Some(fac) = &f.factorization {
        doc["factorization"] = json!({"gbar_yv": ratmatrix_json(&fac.gbar_yv), "gbar_zu": ratmatrix_json(&fac.gbar_zu)});
    }
    doc
}

pub fn to_string(f: &ModelFile) -> String {
    serde_json::to_string_pretty(&to_value(f)).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndsid::model::circuit::reference_nds;
    use ndsid::ratpoly::rat;

    #[test]
    fn circuit_round_trip() {
        let f = ModelFile { model: reference_nds(&rat(2, 5)).unwrap(), metadata: json!({"k1": "2/5"}), factorization: None };
        let back = from_str(&to_string(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn decimals_are_exact() {
        let doc = json!({
            "subsystems": [{"dims": {"m_x": 1, "m_v": 1, "m_z": 1}, "nominal": {"A_xx": [[-0.1]], "A_zv": [["1e-2"]]}}],
        });
        let f = from_value(&doc).unwrap();
        assert_eq!(f.model.subsystems[0].nominal.a_xx[(0, 0)], rat(-1, 10));
        assert_eq!(f.model.subsystems[0].nominal.a_zv[(0, 0)], rat(1, 100));
    }

    #[test]
    fn shape_errors_name_the_block() {
        let doc = json!({"subsystems": [{"dims": {"m_x": 2}, "nominal": {"A_xx": [["1"]]}}]});
        let e = from_value(&doc).unwrap_err().to_string();
        assert!(e.contains("subsystems[0].nominal.A_xx") && e.contains("expected 2x2"), "{e}");
        let e = from_str("{\n \"subsystems\": [,]\n}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn factorization_round_trip() {
        let doc = json!({
            "subsystems": [{"dims": {"m_x": 1, "m_v": 1, "m_u": 1, "m_y": 1, "m_z": 1}}],
            "phi": {"values": [["0"]], "pattern": [[1]]},
            "factorization": {"gbar_yv": [[{"num": ["1"], "den": ["1", "1"]}]], "gbar_zu": [["2/3"]]},
        });
        let f = from_value(&doc).unwrap();
        assert_eq!(from_value(&to_value(&f)).unwrap(), f);
    }
}
