//! The shipped catalog: frozen reference arrangements, their default frames,
//! and adjacent-pair records for the side-of-face comparisons.
//!
//! Entries are produced once by the generator binary (rejection search from
//! bipartition specs, then frame construction and determinant validation)
//! and committed as JSON; loading re-validates nothing by itself, the test
//! suite does.

use std::fmt::Write as _;

use serde_json::Value;

use crate::arrangement::LoopArrangement;
use crate::developing::FrameSpec;
use crate::io::{
    arrangement_from_value, frame_spec_from_value, parse_json, serialize_arrangement,
    serialize_frame_spec, ParseError,
};

pub mod gen;

/// A frozen catalog arrangement.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    /// What the entry realizes and which configuration it uses.
    pub provenance: String,
    pub arrangement: LoopArrangement,
    /// Bipartition spec per loop: 1-based pairs whose positive vertex lies on
    /// the normal side.
    pub plus_sets: Vec<Vec<usize>>,
    /// Default frame spec for the chart, when one is shipped.
    pub frame: Option<FrameSpec>,
    /// Sign of det M for the default frame (+1/−1); 0 when no frame.
    pub det_sign: i8,
}

/// An adjacent pair with the shared frame on either side.
#[derive(Debug, Clone)]
pub struct CatalogPair {
    pub name: String,
    pub provenance: String,
    pub chart_a: String,
    pub chart_b: String,
    pub loop_label: String,
    pub frame_a: FrameSpec,
    pub frame_b: FrameSpec,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub pairs: Vec<CatalogPair>,
}

impl Catalog {
    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn pair(&self, name: &str) -> Option<&CatalogPair> {
        self.pairs.iter().find(|p| p.name == name)
    }
}

/// The catalog committed with the crate.
pub fn builtin() -> Result<Catalog, ParseError> {
    parse_catalog(include_str!("../data/catalog.json"))
}

pub fn parse_catalog(text: &str) -> Result<Catalog, ParseError> {
    let v = parse_json(text)?;
    let version = v.get("version").and_then(Value::as_str).unwrap_or_default();
    if version != "conesphere/1" {
        return Err(ParseError {
            line: 0,
            col: 0,
            reason: format!("unsupported catalog version `{version}`"),
        });
    }
    let mut entries = Vec::new();
    for (i, ev) in v
        .get("entries")
        .and_then(Value::as_array)
        .into_iter()
        .flatten()
        .enumerate()
    {
        let path = format!("$.entries[{i}]");
        let name = ev
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| ParseError {
                line: 0,
                col: 0,
                reason: format!("{path}: missing name"),
            })?
            .to_string();
        let provenance = ev
            .get("provenance")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string();
        let arrangement = arrangement_from_value(
            ev.get("arrangement").ok_or_else(|| ParseError {
                line: 0,
                col: 0,
                reason: format!("{path}: missing arrangement"),
            })?,
            &format!("{path}.arrangement"),
        )?;
        let mut plus_sets = Vec::new();
        for sv in ev
            .get("plus_sets")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            let set: Vec<usize> = sv
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_u64)
                .map(|x| x as usize)
                .collect();
            plus_sets.push(set);
        }
        let frame = match ev.get("frame") {
            Some(Value::Null) | None => None,
            Some(fv) => Some(frame_spec_from_value(
                &arrangement,
                fv,
                &format!("{path}.frame"),
            )?),
        };
        let det_sign = ev.get("det_sign").and_then(Value::as_i64).unwrap_or(0) as i8;
        entries.push(CatalogEntry {
            name,
            provenance,
            arrangement,
            plus_sets,
            frame,
            det_sign,
        });
    }
    let find = |name: &str| -> Result<&CatalogEntry, ParseError> {
        entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| ParseError {
                line: 0,
                col: 0,
                reason: format!("pair references unknown entry `{name}`"),
            })
    };
    let mut pairs = Vec::new();
    for (i, pv) in v
        .get("pairs")
        .and_then(Value::as_array)
        .into_iter()
        .flatten()
        .enumerate()
    {
        let path = format!("$.pairs[{i}]");
        let s = |key: &str| -> Result<String, ParseError> {
            pv.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| ParseError {
                    line: 0,
                    col: 0,
                    reason: format!("{path}: missing `{key}`"),
                })
        };
        let chart_a = s("chart_a")?;
        let chart_b = s("chart_b")?;
        let arr_a = find(&chart_a)?.arrangement.clone();
        let arr_b = find(&chart_b)?.arrangement.clone();
        let frame_a = frame_spec_from_value(
            &arr_a,
            pv.get("frame_a").ok_or_else(|| ParseError {
                line: 0,
                col: 0,
                reason: format!("{path}: missing frame_a"),
            })?,
            &format!("{path}.frame_a"),
        )?;
        let frame_b = frame_spec_from_value(
            &arr_b,
            pv.get("frame_b").ok_or_else(|| ParseError {
                line: 0,
                col: 0,
                reason: format!("{path}: missing frame_b"),
            })?,
            &format!("{path}.frame_b"),
        )?;
        pairs.push(CatalogPair {
            name: s("name")?,
            provenance: pv
                .get("provenance")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string(),
            chart_a,
            chart_b,
            loop_label: s("loop")?,
            frame_a,
            frame_b,
        });
    }
    Ok(Catalog { entries, pairs })
}

pub fn serialize_catalog(c: &Catalog) -> String {
    let mut s = String::from("{\n\"version\": \"conesphere/1\",\n\"entries\": [\n");
    for (i, e) in c.entries.iter().enumerate() {
        s.push_str("{\n");
        let _ = writeln!(s, "\"name\": \"{}\",", e.name);
        let _ = writeln!(s, "\"provenance\": \"{}\",", e.provenance);
        let _ = write!(
            s,
            "\"arrangement\": {},",
            serialize_arrangement(&e.arrangement)
        );
        let sets: Vec<String> = e
            .plus_sets
            .iter()
            .map(|set| {
                let items: Vec<String> = set.iter().map(usize::to_string).collect();
                format!("[{}]", items.join(", "))
            })
            .collect();
        let _ = writeln!(s, "\n\"plus_sets\": [{}],", sets.join(", "));
        match &e.frame {
            Some(f) => {
                let _ = writeln!(s, "\"frame\": {},", serialize_frame_spec(&e.arrangement, f));
            }
            None => {
                let _ = writeln!(s, "\"frame\": null,");
            }
        }
        let _ = writeln!(s, "\"det_sign\": {}", e.det_sign);
        s.push('}');
        s.push_str(if i + 1 < c.entries.len() { ",\n" } else { "\n" });
    }
    s.push_str("],\n\"pairs\": [\n");
    for (i, p) in c.pairs.iter().enumerate() {
        let arr_a = &c.entry(&p.chart_a).expect("pair chart").arrangement;
        let arr_b = &c.entry(&p.chart_b).expect("pair chart").arrangement;
        s.push_str("{\n");
        let _ = writeln!(s, "\"name\": \"{}\",", p.name);
        let _ = writeln!(s, "\"provenance\": \"{}\",", p.provenance);
        let _ = writeln!(s, "\"chart_a\": \"{}\",", p.chart_a);
        let _ = writeln!(s, "\"chart_b\": \"{}\",", p.chart_b);
        let _ = writeln!(s, "\"loop\": \"{}\",", p.loop_label);
        let _ = writeln!(
            s,
            "\"frame_a\": {},",
            serialize_frame_spec(arr_a, &p.frame_a)
        );
        let _ = writeln!(
            s,
            "\"frame_b\": {}",
            serialize_frame_spec(arr_b, &p.frame_b)
        );
        s.push('}');
        s.push_str(if i + 1 < c.pairs.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n}\n");
    s
}
