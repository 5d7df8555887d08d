//! Scenario configuration files.
//!
//! TOML with fixed sections; every key is required unless noted and unknown
//! keys are rejected:
//!
//! ```toml
//! [layout]
//! kind = "mla"            # "ula" or "mla"
//! elements = 64           # per sub-array
//! spacing_m = 0.01
//! separation_m = 0.72     # mla only
//!
//! [carrier]
//! frequency_hz = 15e9     # or wavelength_m, not both
//!
//! [focus]
//! distance_m = 30.0
//!
//! [sweep]                 # optional; or [map], not both
//! axis = "z"              # "x" (focal plane) or "z" (on axis)
//! start = 10.0
//! stop = 100.0
//! count = 901
//!
//! [routes]                # required with [sweep] or [map]
//! names = ["closed", "exact_numeric"]
//! ```
//!
//! A `[map]` section uses `x_start`, `x_stop`, `x_count`, `z_start`,
//! `z_stop`, `z_count` and exactly one numeric route.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;
use toml::{Table, Value as TomlValue};

use crate::gain::{Axis, GainError, Grid, Route, Scenario};
use crate::geometry::{ArrayKind, ArrayLayout, CarrierSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config is not valid TOML: {0}")]
    Syntax(String),
    #[error("unknown key(s): {}", .0.join(", "))]
    Unknown(Vec<String>),
    #[error("missing required key(s): {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("`{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridConfig {
    Sweep { axis: Axis, grid: Grid },
    Map { x: Grid, z: Grid },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub layout: ArrayLayout,
    pub carrier: CarrierSpec,
    pub focus: f64,
    pub grid: Option<GridConfig>,
    pub routes: Vec<Route>,
}

const SECTIONS: [(&str, &[&str]); 6] = [
    ("layout", &["kind", "elements", "spacing_m", "separation_m"]),
    ("carrier", &["frequency_hz", "wavelength_m"]),
    ("focus", &["distance_m"]),
    ("sweep", &["axis", "start", "stop", "count"]),
    (
        "map",
        &[
            "x_start", "x_stop", "x_count", "z_start", "z_stop", "z_count",
        ],
    ),
    ("routes", &["names"]),
];

/// Key lookup that records what is absent instead of failing on the first.
struct Reader<'a> {
    root: &'a Table,
    missing: Vec<String>,
}

impl<'a> Reader<'a> {
    fn get(&mut self, section: &str, key: &str) -> Option<&'a TomlValue> {
        let value = self
            .root
            .get(section)
            .and_then(TomlValue::as_table)
            .and_then(|t| t.get(key));
        if value.is_none() {
            self.missing.push(format!("{section}.{key}"));
        }
        value
    }

    fn has_section(&self, section: &str) -> bool {
        self.root.contains_key(section)
    }
}

fn as_f64(key: &str, v: &TomlValue) -> Result<f64, ConfigError> {
    let x = match v {
        TomlValue::Float(f) => *f,
        TomlValue::Integer(i) => *i as f64,
        _ => return Err(invalid(key, "expected a number")),
    };
    if !x.is_finite() {
        return Err(invalid(key, "must be finite"));
    }
    Ok(x)
}

fn as_count(key: &str, v: &TomlValue) -> Result<usize, ConfigError> {
    match v {
        TomlValue::Integer(i) if *i >= 0 => Ok(*i as usize),
        TomlValue::Integer(_) => Err(invalid(key, "must be non-negative")),
        _ => Err(invalid(key, "expected an integer")),
    }
}

fn as_str<'v>(key: &str, v: &'v TomlValue) -> Result<&'v str, ConfigError> {
    v.as_str().ok_or_else(|| invalid(key, "expected a string"))
}

fn check_unknown(root: &Table) -> Result<(), ConfigError> {
    let mut unknown = Vec::new();
    for (name, value) in root {
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            unknown.push(name.clone());
            continue;
        };
        match value.as_table() {
            Some(table) => unknown.extend(
                table
                    .keys()
                    .filter(|k| !keys.contains(&k.as_str()))
                    .map(|k| format!("{name}.{k}")),
            ),
            None => return Err(invalid(name, "expected a section")),
        }
    }
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(ConfigError::Unknown(unknown))
    }
}

fn grid(key: &str, start: f64, stop: f64, count: usize) -> Result<Grid, ConfigError> {
    Grid::new(start, stop, count).map_err(|e| match e {
        GainError::InvalidGrid(reason) => invalid(key, reason),
        other => invalid(key, other.to_string()),
    })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
    check_unknown(&root)?;

    let mut r = Reader {
        root: &root,
        missing: Vec::new(),
    };
    let kind = r.get("layout", "kind");
    let elements = r.get("layout", "elements");
    let spacing = r.get("layout", "spacing_m");
    let is_mla = kind.and_then(TomlValue::as_str) == Some("mla");
    let separation = if is_mla {
        r.get("layout", "separation_m")
    } else {
        None
    };

    let carrier = root.get("carrier").and_then(TomlValue::as_table);
    let frequency = carrier.and_then(|t| t.get("frequency_hz"));
    let wavelength = carrier.and_then(|t| t.get("wavelength_m"));
    if frequency.is_none() && wavelength.is_none() {
        r.missing
            .push("carrier.frequency_hz | carrier.wavelength_m".into());
    }
    let focus = r.get("focus", "distance_m");

    if r.has_section("sweep") && r.has_section("map") {
        return Err(invalid("sweep", "`sweep` and `map` are mutually exclusive"));
    }
    let sweep = r
        .has_section("sweep")
        .then(|| ["axis", "start", "stop", "count"].map(|k| r.get("sweep", k)));
    let map = r.has_section("map").then(|| {
        [
            "x_start", "x_stop", "x_count", "z_start", "z_stop", "z_count",
        ]
        .map(|k| r.get("map", k))
    });
    let routes = if sweep.is_some() || map.is_some() || r.has_section("routes") {
        r.get("routes", "names")
    } else {
        None
    };

    if !r.missing.is_empty() {
        return Err(ConfigError::Missing(r.missing));
    }
    let (kind, elements, spacing, focus) = (
        kind.unwrap(),
        elements.unwrap(),
        spacing.unwrap(),
        focus.unwrap(),
    );

    let n = as_count("layout.elements", elements)?;
    let spacing = as_f64("layout.spacing_m", spacing)?;
    let layout = match as_str("layout.kind", kind)? {
        "ula" => {
            if root["layout"]
                .as_table()
                .unwrap()
                .contains_key("separation_m")
            {
                return Err(invalid(
                    "layout.separation_m",
                    "only valid for kind = \"mla\"",
                ));
            }
            ArrayLayout::ula(n, spacing)
        }
        "mla" => {
            let separation = as_f64("layout.separation_m", separation.unwrap())?;
            ArrayLayout::mla(n, spacing, separation)
        }
        other => {
            return Err(invalid(
                "layout.kind",
                format!("expected \"ula\" or \"mla\", got {other:?}"),
            ))
        }
    }
    .map_err(|e| invalid("layout", e.to_string()))?;

    let carrier = match (frequency, wavelength) {
        (Some(_), Some(_)) => {
            return Err(invalid(
                "carrier",
                "give exactly one of frequency_hz and wavelength_m",
            ))
        }
        (Some(f), None) => CarrierSpec::from_frequency(as_f64("carrier.frequency_hz", f)?),
        (None, Some(w)) => CarrierSpec::from_wavelength(as_f64("carrier.wavelength_m", w)?),
        (None, None) => unreachable!("reported as missing"),
    }
    .map_err(|e| invalid("carrier", e.to_string()))?;

    let focus = as_f64("focus.distance_m", focus)?;
    if focus <= 0.0 {
        return Err(invalid("focus.distance_m", "must be > 0"));
    }

    let grid = if let Some([axis, start, stop, count]) = sweep {
        let axis = match as_str("sweep.axis", axis.unwrap())? {
            "x" => Axis::Transverse,
            "z" => Axis::Depth,
            other => {
                return Err(invalid(
                    "sweep.axis",
                    format!("expected \"x\" or \"z\", got {other:?}"),
                ))
            }
        };
        let g = grid(
            "sweep",
            as_f64("sweep.start", start.unwrap())?,
            as_f64("sweep.stop", stop.unwrap())?,
            as_count("sweep.count", count.unwrap())?,
        )?;
        if axis == Axis::Depth && g.start <= 0.0 {
            return Err(invalid("sweep.start", "z sweeps must start above 0"));
        }
        Some(GridConfig::Sweep { axis, grid: g })
    } else if let Some([xs, xe, xc, zs, ze, zc]) = map {
        let x = grid(
            "map.x",
            as_f64("map.x_start", xs.unwrap())?,
            as_f64("map.x_stop", xe.unwrap())?,
            as_count("map.x_count", xc.unwrap())?,
        )?;
        let z = grid(
            "map.z",
            as_f64("map.z_start", zs.unwrap())?,
            as_f64("map.z_stop", ze.unwrap())?,
            as_count("map.z_count", zc.unwrap())?,
        )?;
        if z.start <= 0.0 {
            return Err(invalid("map.z_start", "must be > 0"));
        }
        Some(GridConfig::Map { x, z })
    } else {
        None
    };

    let routes = match routes {
        Some(v) => parse_routes(v)?,
        None => Vec::new(),
    };
    check_route_compatibility(grid.as_ref(), &routes)?;

    Ok(ScenarioConfig {
        layout,
        carrier,
        focus,
        grid,
        routes,
    })
}

fn parse_routes(v: &TomlValue) -> Result<Vec<Route>, ConfigError> {
    let key = "routes.names";
    let items = v
        .as_array()
        .ok_or_else(|| invalid(key, "expected an array of route names"))?;
    let mut routes = Vec::with_capacity(items.len());
    for item in items {
        let route: Route = as_str(key, item)?.parse().map_err(|e| invalid(key, e))?;
        if routes.contains(&route) {
            return Err(invalid(key, format!("route `{route}` listed twice")));
        }
        routes.push(route);
    }
    if routes.is_empty() {
        return Err(invalid(key, "at least one route is required"));
    }
    Ok(routes)
}

fn check_route_compatibility(
    grid: Option<&GridConfig>,
    routes: &[Route],
) -> Result<(), ConfigError> {
    let key = "routes.names";
    match grid {
        Some(GridConfig::Sweep {
            axis: Axis::Depth, ..
        }) => {
            if let Some(r) = routes
                .iter()
                .find(|r| matches!(r, Route::TransverseClosed | Route::UpperBound))
            {
                return Err(invalid(
                    key,
                    format!("route `{r}` only applies on the focal plane (axis = \"x\")"),
                ));
            }
        }
        Some(GridConfig::Map { .. }) => {
            if routes.len() != 1 {
                return Err(invalid(key, "a map takes exactly one route"));
            }
            if !matches!(routes[0], Route::FresnelNumeric | Route::ExactNumeric) {
                return Err(invalid(
                    key,
                    format!("route `{}` cannot cover the xz-plane; use fresnel_numeric or exact_numeric", routes[0]),
                ));
            }
        }
        _ => {}
    }
    Ok(())
}

fn toml_float(x: f64) -> String {
    // Debug keeps a decimal point or exponent and round-trips exactly
    format!("{x:?}")
}

impl ScenarioConfig {
    pub fn wavelength(&self) -> f64 {
        self.carrier.wavelength()
    }

    /// Transmitter at the focal point; sweeps move it from there.
    pub fn scenario(&self) -> Result<Scenario, GainError> {
        Scenario::new(self.layout, self.carrier, self.focus, 0.0, self.focus)
    }

    /// Canonical TOML text that parses back to an equal config.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let l = &self.layout;
        writeln!(s, "[layout]").unwrap();
        writeln!(s, "kind = \"{}\"", l.kind().as_str()).unwrap();
        writeln!(s, "elements = {}", l.elements_per_subarray()).unwrap();
        writeln!(s, "spacing_m = {}", toml_float(l.spacing())).unwrap();
        if l.kind() == ArrayKind::Mla {
            writeln!(s, "separation_m = {}", toml_float(l.separation())).unwrap();
        }
        writeln!(s, "\n[carrier]").unwrap();
        match self.carrier.frequency() {
            Some(f) => writeln!(s, "frequency_hz = {}", toml_float(f)).unwrap(),
            None => writeln!(s, "wavelength_m = {}", toml_float(self.wavelength())).unwrap(),
        }
        writeln!(s, "\n[focus]\ndistance_m = {}", toml_float(self.focus)).unwrap();
        match &self.grid {
            Some(GridConfig::Sweep { axis, grid }) => {
                writeln!(s, "\n[sweep]\naxis = \"{}\"", axis.as_str()).unwrap();
                writeln!(s, "start = {}", toml_float(grid.start)).unwrap();
                writeln!(s, "stop = {}", toml_float(grid.stop)).unwrap();
                writeln!(s, "count = {}", grid.count).unwrap();
            }
            Some(GridConfig::Map { x, z }) => {
                writeln!(s, "\n[map]").unwrap();
                for (p, g) in [("x", x), ("z", z)] {
                    writeln!(s, "{p}_start = {}", toml_float(g.start)).unwrap();
                    writeln!(s, "{p}_stop = {}", toml_float(g.stop)).unwrap();
                    writeln!(s, "{p}_count = {}", g.count).unwrap();
                }
            }
            None => {}
        }
        if !self.routes.is_empty() {
            let names: Vec<String> = self.routes.iter().map(|r| format!("\"{r}\"")).collect();
            writeln!(s, "\n[routes]\nnames = [{}]", names.join(", ")).unwrap();
        }
        s
    }

    /// Config echo plus derived quantities, for output metadata.
    pub fn to_json(&self) -> Value {
        let l = &self.layout;
        let mut layout = json!({
            "kind": l.kind().as_str(),
            "elements": l.elements_per_subarray(),
            "spacing_m": l.spacing(),
        });
        if l.kind() == ArrayKind::Mla {
            layout["separation_m"] = json!(l.separation());
        }
        let carrier = match self.carrier.frequency() {
            Some(f) => json!({ "frequency_hz": f }),
            None => json!({ "wavelength_m": self.wavelength() }),
        };
        let mut v = json!({
            "layout": layout,
            "carrier": carrier,
            "focus": { "distance_m": self.focus },
        });
        match &self.grid {
            Some(GridConfig::Sweep { axis, grid }) => {
                v["sweep"] = json!({
                    "axis": axis.as_str(),
                    "start": grid.start,
                    "stop": grid.stop,
                    "count": grid.count,
                });
            }
            Some(GridConfig::Map { x, z }) => {
                v["map"] = json!({
                    "x_start": x.start, "x_stop": x.stop, "x_count": x.count,
                    "z_start": z.start, "z_stop": z.stop, "z_count": z.count,
                });
            }
            None => {}
        }
        if !self.routes.is_empty() {
            let names: Vec<&str> = self.routes.iter().map(Route::as_str).collect();
            v["routes"] = json!({ "names": names });
        }
        v["derived"] = json!({
            "wavelength_m": self.wavelength(),
            "half_offset_m": l.half_offset(),
            "total_elements": l.total_elements(),
        });
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ULA: &str = r#"
[layout]
kind = "ula"
elements = 50
spacing_m = 0.01

[carrier]
frequency_hz = 15e9

[focus]
distance_m = 30
"#;

    const MLA_SWEEP: &str = r#"
[layout]
kind = "mla"
elements = 64
spacing_m = 0.01
separation_m = 0.72

[carrier]
wavelength_m = 0.02

[focus]
distance_m = 30.0

[sweep]
axis = "z"
start = 10.0
stop = 100.0
count = 901

[routes]
names = ["closed", "exact_numeric"]
"#;

    #[test]
    fn minimal_ula_config() {
        let c = parse_config(ULA).unwrap();
        assert_eq!(c.layout.kind(), ArrayKind::Ula);
        assert_eq!(c.layout.elements_per_subarray(), 50);
        assert!((c.wavelength() - 0.019986163866666667).abs() < 1e-15);
        assert_eq!(c.focus, 30.0);
        assert_eq!(c.grid, None);
        assert!(c.routes.is_empty());
    }

    #[test]
    fn mla_sweep_config_echoes_half_offset() {
        let c = parse_config(MLA_SWEEP).unwrap();
        assert_eq!(c.routes, vec![Route::Closed, Route::ExactNumeric]);
        let derived = &c.to_json()["derived"];
        assert!((derived["half_offset_m"].as_f64().unwrap() - 0.675).abs() < 1e-12);
        match c.grid {
            Some(GridConfig::Sweep { axis, grid }) => {
                assert_eq!(axis, Axis::Depth);
                assert_eq!(grid.count, 901);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn both_carrier_keys_rejected() {
        let text = ULA.replace(
            "frequency_hz = 15e9",
            "frequency_hz = 15e9\nwavelength_m = 0.02",
        );
        let err = parse_config(&text).unwrap_err();
        assert!(
            matches!(&err, ConfigError::Invalid { key, .. } if key == "carrier"),
            "{err}"
        );
    }

    #[test]
    fn all_missing_keys_reported_together() {
        let err = parse_config("[layout]\nkind = \"mla\"\n").unwrap_err();
        let ConfigError::Missing(keys) = err else {
            panic!("{err:?}")
        };
        assert_eq!(
            keys,
            vec![
                "layout.elements",
                "layout.spacing_m",
                "layout.separation_m",
                "carrier.frequency_hz | carrier.wavelength_m",
                "focus.distance_m",
            ]
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse_config(&format!("{ULA}\n[extra]\na = 1\n")).unwrap_err();
        assert_eq!(err, ConfigError::Unknown(vec!["extra".into()]));
        let err =
            parse_config(&ULA.replace("elements", "element_count = 3\nelements")).unwrap_err();
        assert_eq!(
            err,
            ConfigError::Unknown(vec!["layout.element_count".into()])
        );
    }

    #[test]
    fn invalid_values_name_the_key() {
        let cases = [
            (ULA.replace("elements = 50", "elements = 0"), "layout"),
            (
                ULA.replace("elements = 50", "elements = 5.5"),
                "layout.elements",
            ),
            (
                ULA.replace("distance_m = 30", "distance_m = -1"),
                "focus.distance_m",
            ),
            (ULA.replace("\"ula\"", "\"upa\""), "layout.kind"),
            (MLA_SWEEP.replace("count = 901", "count = 1"), "sweep"),
            (MLA_SWEEP.replace("stop = 100.0", "stop = 5.0"), "sweep"),
            (
                MLA_SWEEP.replace("start = 10.0", "start = -1.0\n"),
                "sweep.start",
            ),
            (
                MLA_SWEEP.replace("\"closed\"", "\"closed\", \"closed\""),
                "routes.names",
            ),
            (
                MLA_SWEEP.replace("\"closed\"", "\"upper_bound\""),
                "routes.names",
            ),
            (MLA_SWEEP.replace("\"closed\"", "\"nope\""), "routes.names"),
        ];
        for (text, key) in &cases {
            match parse_config(text) {
                Err(ConfigError::Invalid { key: k, .. }) => assert_eq!(&k, key, "{text}"),
                other => panic!("{key}: {other:?}"),
            }
        }
    }

    #[test]
    fn ula_with_separation_rejected() {
        let text = ULA.replace("spacing_m = 0.01", "spacing_m = 0.01\nseparation_m = 1.0");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { key, .. }) if key == "layout.separation_m"
        ));
    }

    #[test]
    fn map_needs_one_numeric_route() {
        let map = r#"
[layout]
kind = "ula"
elements = 50
spacing_m = 0.01
[carrier]
wavelength_m = 0.02
[focus]
distance_m = 30
[map]
x_start = -2
x_stop = 2
x_count = 5
z_start = 5
z_stop = 100
z_count = 4
[routes]
names = ["exact_numeric"]
"#;
        assert!(matches!(
            parse_config(map).unwrap().grid,
            Some(GridConfig::Map { .. })
        ));
        for names in ["\"closed\"", "\"exact_numeric\", \"fresnel_numeric\""] {
            let text = map.replace("\"exact_numeric\"", names);
            assert!(parse_config(&text).is_err(), "{names}");
        }
        assert!(parse_config(&map.replace("z_start = 5", "z_start = 0")).is_err());
        let both = format!("{map}\n[sweep]\naxis = \"x\"\nstart = 0\nstop = 1\ncount = 2\n");
        assert!(parse_config(&both).is_err());
    }

    #[test]
    fn sweep_without_routes_is_missing() {
        let text = MLA_SWEEP.replace("[routes]\nnames = [\"closed\", \"exact_numeric\"]", "");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::Missing(vec!["routes.names".into()]))
        );
    }

    #[test]
    fn syntax_errors_are_reported() {
        assert!(matches!(
            parse_config("[layout"),
            Err(ConfigError::Syntax(_))
        ));
    }

    #[test]
    fn round_trip_through_canonical_text() {
        for text in [ULA, MLA_SWEEP] {
            let c = parse_config(text).unwrap();
            assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
        }
    }
}
