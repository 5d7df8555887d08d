//! Serialization of curves, maps and design reports.
//!
//! CSV floats carry 17 significant digits so every value round-trips
//! exactly; unavailable cells are empty fields. JSON output is a single
//! `{"meta": …, "data": …}` object. Nothing here depends on timing or
//! thread count, so equal inputs give identical bytes.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::analysis::DesignReport;
use crate::gain::{GainCurve, GainMap, SampleWarning, WarningKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// `d.dddddddddddddddde±x`: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn to_json_bytes(meta: &Value, data: Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&json!({ "meta": meta, "data": data }))
        .expect("JSON values always serialize");
    out.push(b'\n');
    out
}

pub fn emit_curve(curve: &GainCurve, format: TableFormat, meta: &Value) -> Vec<u8> {
    match format {
        TableFormat::Csv => {
            let mut s = String::from("coordinate_m");
            for c in &curve.columns {
                write!(s, ",{}", c.route).unwrap();
            }
            s.push('\n');
            for (i, &x) in curve.coordinates.iter().enumerate() {
                s.push_str(&format_float(x));
                for c in &curve.columns {
                    write!(s, ",{}", cell(c.values[i])).unwrap();
                }
                s.push('\n');
            }
            s.into_bytes()
        }
        TableFormat::Json => {
            let mut data = Map::new();
            data.insert("coordinate_m".into(), json!(curve.coordinates));
            for c in &curve.columns {
                data.insert(c.route.as_str().into(), json!(c.values));
            }
            let mut meta = meta.clone();
            meta["axis"] = json!(curve.axis.as_str());
            to_json_bytes(&meta, Value::Object(data))
        }
    }
}

pub fn emit_map(map: &GainMap, format: TableFormat, meta: &Value) -> Vec<u8> {
    let nx = map.x.len();
    match format {
        TableFormat::Csv => {
            let mut s = String::from("x_m,z_m,gain\n");
            for (i, v) in map.values.iter().enumerate() {
                writeln!(
                    s,
                    "{},{},{}",
                    format_float(map.x[i % nx]),
                    format_float(map.z[i / nx]),
                    cell(*v)
                )
                .unwrap();
            }
            s.into_bytes()
        }
        TableFormat::Json => {
            let xs: Vec<f64> = (0..map.values.len()).map(|i| map.x[i % nx]).collect();
            let zs: Vec<f64> = (0..map.values.len()).map(|i| map.z[i / nx]).collect();
            let mut meta = meta.clone();
            meta["route"] = json!(map.route.as_str());
            let data = json!({ "x_m": xs, "z_m": zs, "gain": map.values });
            to_json_bytes(&meta, data)
        }
    }
}

fn report_fields(r: &DesignReport) -> Vec<(&'static str, Value)> {
    let m = &r.metrics;
    vec![
        ("elements_per_subarray", json!(r.elements_per_subarray)),
        ("spacing_m", json!(r.spacing)),
        ("separation_m", json!(r.separation)),
        ("half_offset_m", json!(r.half_offset)),
        ("wavelength_m", json!(r.wavelength)),
        ("focus_m", json!(r.focus)),
        ("aperture_length_m", json!(r.aperture_length)),
        ("fraunhofer_distance_m", json!(r.fraunhofer_distance)),
        ("bw_3db_m", json!(m.bw_3db)),
        ("null_spacing_m", json!(m.null_spacing)),
        ("null_positions_m", json!(m.null_positions)),
        ("null_count_in_region", json!(m.null_count_in_region)),
        ("single_beam", json!(m.single_beam)),
        (
            "min_elements_per_subarray",
            json!(r.min_elements_per_subarray),
        ),
        ("fill_ratio", json!(r.fill_ratio)),
        ("mla_elements", json!(r.mla_elements)),
        ("equivalent_ula_elements", json!(r.equivalent_ula_elements)),
        ("savings", json!(r.savings)),
    ]
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

pub fn emit_report(report: &DesignReport, format: ReportFormat, meta: &Value) -> Vec<u8> {
    let fields = report_fields(report);
    match format {
        ReportFormat::Json => {
            let data: Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            to_json_bytes(meta, Value::Object(data))
        }
        ReportFormat::Text => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in &fields {
                writeln!(s, "{k:<width$} = {}", text_value(v)).unwrap();
            }
            s.into_bytes()
        }
    }
}

fn kind_name(kind: WarningKind) -> &'static str {
    match kind {
        WarningKind::NotConverged => "not_converged",
        WarningKind::Unsupported => "unsupported",
        WarningKind::Other => "error",
    }
}

/// One line per flagged cell: grid index, route, kind and message.
pub fn emit_warnings(warnings: &[SampleWarning]) -> Vec<u8> {
    let mut s = String::from("index,route,kind,message\n");
    for w in warnings {
        // messages never contain newlines; commas are kept readable by
        // putting the message last
        writeln!(
            s,
            "{},{},{},{}",
            w.index,
            w.route,
            kind_name(w.kind),
            w.message
        )
        .unwrap();
    }
    s.into_bytes()
}
