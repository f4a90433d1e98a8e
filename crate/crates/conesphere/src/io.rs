//! JSON persistence: arrangements, surfaces, frame specs, catalog files, and
//! audit reports.
//!
//! Writers emit a canonical form: fixed key order, reals with 17 significant
//! digits (`{:.16e}`), no locale dependence. Parsing canonical output and
//! re-serializing reproduces the bytes exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::Value;
use thiserror::Error;

use crate::arrangement::{LabeledVertexSet, LoopArrangement, OrientedLoop, SignedLabel};
use crate::decomposition::{DeficitAudit, QuadKey};
use crate::developing::{ConePointRef, FrameEdge, FrameSpec};
use crate::geom::UnitVec3;

#[derive(Debug, Error, PartialEq)]
#[error("parse error at {line}:{col}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub reason: String,
}

impl ParseError {
    fn at_path(path: &str, reason: impl Into<String>) -> Self {
        ParseError {
            line: 0,
            col: 0,
            reason: format!("{path}: {}", reason.into()),
        }
    }
}

/// Formats a real with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

pub fn parse_json(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        col: e.column(),
        reason: e.to_string(),
    })
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, ParseError> {
    v.get(key)
        .ok_or_else(|| ParseError::at_path(path, format!("missing key `{key}`")))
}

fn as_f64(v: &Value, path: &str) -> Result<f64, ParseError> {
    v.as_f64()
        .ok_or_else(|| ParseError::at_path(path, "expected a number"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, ParseError> {
    v.as_str()
        .ok_or_else(|| ParseError::at_path(path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array()
        .ok_or_else(|| ParseError::at_path(path, "expected an array"))
}

fn parse_vec3(v: &Value, path: &str) -> Result<UnitVec3, ParseError> {
    let arr = as_array(v, path)?;
    if arr.len() != 3 {
        return Err(ParseError::at_path(path, "expected 3 components"));
    }
    let x = as_f64(&arr[0], path)?;
    let y = as_f64(&arr[1], path)?;
    let z = as_f64(&arr[2], path)?;
    UnitVec3::new(x, y, z)
        .or_else(|_| UnitVec3::normalized(x, y, z))
        .map_err(|e| ParseError::at_path(path, e.to_string()))
}

/// Parses the arrangement schema:
/// `{ "n_pairs": N, "vertices": [[x,y,z]×N], "deficits": [δ×N],
///    "loops": [{"label": str, "normal": [x,y,z]}×k] }`.
pub fn parse_arrangement(text: &str) -> Result<LoopArrangement, ParseError> {
    let v = parse_json(text)?;
    arrangement_from_value(&v, "$")
}

pub fn arrangement_from_value(v: &Value, path: &str) -> Result<LoopArrangement, ParseError> {
    let n_pairs = get(v, "n_pairs", path)?
        .as_u64()
        .ok_or_else(|| ParseError::at_path(path, "`n_pairs` must be a positive integer"))?
        as usize;
    let verts = as_array(get(v, "vertices", path)?, path)?;
    if verts.len() != n_pairs {
        return Err(ParseError::at_path(
            path,
            format!("expected {n_pairs} vertices, got {}", verts.len()),
        ));
    }
    let positions = verts
        .iter()
        .enumerate()
        .map(|(i, w)| parse_vec3(w, &format!("{path}.vertices[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let defs = as_array(get(v, "deficits", path)?, path)?;
    if defs.len() != n_pairs {
        return Err(ParseError::at_path(
            path,
            format!("expected {n_pairs} deficits, got {}", defs.len()),
        ));
    }
    let deficits = defs
        .iter()
        .enumerate()
        .map(|(i, w)| as_f64(w, &format!("{path}.deficits[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let loops_v = as_array(get(v, "loops", path)?, path)?;
    let mut loops = Vec::with_capacity(loops_v.len());
    for (i, lv) in loops_v.iter().enumerate() {
        let lpath = format!("{path}.loops[{i}]");
        let label = as_str(get(lv, "label", &lpath)?, &lpath)?.to_string();
        let normal = parse_vec3(get(lv, "normal", &lpath)?, &lpath)?;
        loops.push(OrientedLoop { label, normal });
    }
    Ok(LoopArrangement {
        vertices: LabeledVertexSet::new(positions),
        loops,
        deficits,
    })
}

/// Canonical arrangement serialization.
pub fn serialize_arrangement(arr: &LoopArrangement) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"n_pairs\": {},", arr.n_pairs());
    s.push_str("  \"vertices\": [\n");
    for (i, p) in arr.vertices.positions().iter().enumerate() {
        let _ = write!(
            s,
            "    [{}, {}, {}]",
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.z)
        );
        s.push_str(if i + 1 < arr.n_pairs() { ",\n" } else { "\n" });
    }
    s.push_str("  ],\n  \"deficits\": [");
    for (i, d) in arr.deficits.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt_f64(*d));
    }
    s.push_str("],\n  \"loops\": [\n");
    for (i, l) in arr.loops.iter().enumerate() {
        let _ = write!(
            s,
            "    {{\"label\": \"{}\", \"normal\": [{}, {}, {}]}}",
            escape(&l.label),
            fmt_f64(l.normal.x),
            fmt_f64(l.normal.y),
            fmt_f64(l.normal.z)
        );
        s.push_str(if i + 1 < arr.loops.len() { ",\n" } else { "\n" });
    }
    s.push_str("  ]\n}\n");
    s
}

/// Per-label lengths from `{"a": 1.0, ...}`.
pub fn lengths_from_value(v: &Value, path: &str) -> Result<BTreeMap<String, f64>, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError::at_path(path, "expected an object of label: length"))?;
    let mut out = BTreeMap::new();
    for (k, w) in obj {
        out.insert(k.clone(), as_f64(w, &format!("{path}.{k}"))?);
    }
    Ok(out)
}

pub fn serialize_lengths(lengths: &BTreeMap<String, f64>) -> String {
    let mut s = String::from("{");
    for (i, (k, v)) in lengths.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "\"{}\": {}", escape(k), fmt_f64(*v));
    }
    s.push('}');
    s
}

/// A surface file: an arrangement (inline or by file reference) plus lengths.
#[derive(Debug, Clone)]
pub enum ArrangementSource {
    Inline(LoopArrangement),
    Path(String),
}

pub fn parse_surface(text: &str) -> Result<(ArrangementSource, BTreeMap<String, f64>), ParseError> {
    let v = parse_json(text)?;
    let arr_v = get(&v, "arrangement", "$")?;
    let source = match arr_v {
        Value::String(p) => ArrangementSource::Path(p.clone()),
        other => ArrangementSource::Inline(arrangement_from_value(other, "$.arrangement")?),
    };
    let lengths = lengths_from_value(get(&v, "lengths", "$")?, "$.lengths")?;
    Ok((source, lengths))
}

/// Quad key text form: `i|j|+` / `i|j|-` with loop labels in label order.
pub fn quad_key_to_string(arr: &LoopArrangement, k: QuadKey) -> String {
    format!(
        "{}|{}|{}",
        arr.loops[k.i].label,
        arr.loops[k.j].label,
        if k.sign > 0 { "+" } else { "-" }
    )
}

pub fn quad_key_from_str(
    arr: &LoopArrangement,
    s: &str,
    path: &str,
) -> Result<QuadKey, ParseError> {
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() != 3 {
        return Err(ParseError::at_path(path, format!("bad quad key `{s}`")));
    }
    let i = arr
        .loop_index(parts[0])
        .map_err(|e| ParseError::at_path(path, e.to_string()))?;
    let j = arr
        .loop_index(parts[1])
        .map_err(|e| ParseError::at_path(path, e.to_string()))?;
    let sign = match parts[2] {
        "+" => 1,
        "-" => -1,
        _ => return Err(ParseError::at_path(path, format!("bad quad sign in `{s}`"))),
    };
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    Ok(QuadKey { i, j, sign })
}

fn cone_ref_to_string(r: &ConePointRef) -> String {
    match r {
        ConePointRef::Labeled(l) => l.to_string(),
        ConePointRef::Cell(i) => format!("cell:{i}"),
    }
}

fn cone_ref_from_str(s: &str, path: &str) -> Result<ConePointRef, ParseError> {
    if let Some(rest) = s.strip_prefix("cell:") {
        let idx: usize = rest
            .parse()
            .map_err(|_| ParseError::at_path(path, format!("bad cell id `{s}`")))?;
        return Ok(ConePointRef::Cell(idx));
    }
    SignedLabel::parse(s)
        .map(ConePointRef::Labeled)
        .ok_or_else(|| ParseError::at_path(path, format!("bad cone point id `{s}`")))
}

/// Frame spec JSON:
/// `{ "entries": [ {"from": id, "to": id, "path": [quad ids]} ] }`.
pub fn frame_spec_from_value(
    arr: &LoopArrangement,
    v: &Value,
    path: &str,
) -> Result<FrameSpec, ParseError> {
    let entries_v = as_array(get(v, "entries", path)?, path)?;
    let mut entries = Vec::with_capacity(entries_v.len());
    for (i, ev) in entries_v.iter().enumerate() {
        let epath = format!("{path}.entries[{i}]");
        let from = cone_ref_from_str(as_str(get(ev, "from", &epath)?, &epath)?, &epath)?;
        let to = cone_ref_from_str(as_str(get(ev, "to", &epath)?, &epath)?, &epath)?;
        let path_v = as_array(get(ev, "path", &epath)?, &epath)?;
        let quads = path_v
            .iter()
            .map(|q| quad_key_from_str(arr, as_str(q, &epath)?, &epath))
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(FrameEdge {
            from,
            to,
            path: quads,
        });
    }
    Ok(FrameSpec { entries })
}

pub fn parse_frame_spec(arr: &LoopArrangement, text: &str) -> Result<FrameSpec, ParseError> {
    let v = parse_json(text)?;
    frame_spec_from_value(arr, &v, "$")
}

pub fn serialize_frame_spec(arr: &LoopArrangement, spec: &FrameSpec) -> String {
    let mut s = String::from("{\"entries\": [\n");
    for (i, e) in spec.entries.iter().enumerate() {
        let quads: Vec<String> = e
            .path
            .iter()
            .map(|k| format!("\"{}\"", quad_key_to_string(arr, *k)))
            .collect();
        let _ = write!(
            s,
            "  {{\"from\": \"{}\", \"to\": \"{}\", \"path\": [{}]}}",
            cone_ref_to_string(&e.from),
            cone_ref_to_string(&e.to),
            quads.join(", ")
        );
        s.push_str(if i + 1 < spec.entries.len() {
            ",\n"
        } else {
            "\n"
        });
    }
    s.push_str("]}");
    s
}

/// Deficit audit as a machine-readable report.
pub fn serialize_audit(audit: &DeficitAudit) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"pass\": {},", audit.pass);
    let _ = writeln!(s, "  \"tolerance\": {},", fmt_f64(audit.tolerance));
    let _ = writeln!(s, "  \"total_deficit\": {},", fmt_f64(audit.total_measured));
    let _ = writeln!(s, "  \"total_pass\": {},", audit.total_pass);
    s.push_str("  \"cone_points\": [\n");
    for (i, r) in audit.rows.iter().enumerate() {
        let enclosed: Vec<String> = r.enclosed.iter().map(|l| format!("\"{l}\"")).collect();
        let _ = write!(
            s,
            "    {{\"cone\": {}, \"enclosed\": [{}], \"expected\": {}, \"measured\": {}, \"error\": {}, \"pass\": {}}}",
            r.cone.0,
            enclosed.join(", "),
            fmt_f64(r.expected),
            fmt_f64(r.measured),
            fmt_f64(r.error),
            r.pass
        );
        s.push_str(if i + 1 < audit.rows.len() {
            ",\n"
        } else {
            "\n"
        });
    }
    s.push_str("  ]\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> LoopArrangement {
        LoopArrangement {
            vertices: LabeledVertexSet::new(vec![
                UnitVec3::normalized(1.0, 1.0, 1.0).unwrap(),
                UnitVec3::normalized(-1.0, 1.0, 1.0).unwrap(),
            ]),
            loops: vec![
                OrientedLoop {
                    label: "a".into(),
                    normal: UnitVec3::normalized(0.0, 1.0, 0.1).unwrap(),
                },
                OrientedLoop {
                    label: "b".into(),
                    normal: UnitVec3::normalized(1.0, 0.0, 0.2).unwrap(),
                },
            ],
            deficits: vec![std::f64::consts::PI, std::f64::consts::PI],
        }
    }

    #[test]
    fn arrangement_roundtrip_is_byte_identical() {
        let arr = sample();
        let text = serialize_arrangement(&arr);
        let back = parse_arrangement(&text).unwrap();
        assert_eq!(serialize_arrangement(&back), text);
    }

    #[test]
    fn missing_key_is_a_parse_error() {
        let text = r#"{"n_pairs": 1, "vertices": [[1.0, 0.0, 0.0]], "loops": []}"#;
        let err = parse_arrangement(text).unwrap_err();
        assert!(err.reason.contains("deficits"));
    }

    #[test]
    fn syntax_error_is_positioned() {
        let err = parse_arrangement("{\n  \"n_pairs\": oops\n}").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }
}
