//! JSON and key=value descriptions of a domain with an optional window.
//!
//! JSON form:
//! ```json
//! {"type": "annulus", "params": {"R1": 1, "R2": 2},
//!  "window": {"component": "inner", "center": 3.14159, "half_width": 0.05,
//!             "convention": "angular-half-width"}}
//! ```
//! The key=value form uses the same names, one per line:
//! `type = annulus`, `R1 = 1`, `window.half_width = 0.05`, … Lines starting
//! with `#` are comments.

use super::{
    BoundaryComponent, Convention, Domain, GeometryError, PlanarDomain, PlanarShape,
    SphericalDomain, Window,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// A validated domain together with its window, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub domain: Domain,
    pub window: Option<Window>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawGeometry {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<RawWindow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    component: Option<BoundaryComponent>,
    center: Option<f64>,
    half_width: f64,
    convention: Convention,
}

const TYPES: &[(&str, &[&str])] = &[
    ("disk", &["R"]),
    ("annulus", &["R1", "R2"]),
    ("rectangle", &["a", "b"]),
    ("tangent-circles", &["R", "d"]),
    ("sphere", &["R"]),
    ("decapitated-sphere", &["R", "delta"]),
];

impl GeometryConfig {
    pub fn from_json_str(text: &str) -> Result<Self, GeometryError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))?;
        Self::from_json_value(&value)
    }

    /// Reads the geometry fields of a JSON object; other top-level fields are ignored.
    pub fn from_json_value(value: &Value) -> Result<Self, GeometryError> {
        let raw: RawGeometry = serde_json::from_value(value.clone())
            .map_err(|e| GeometryError::Parse(format!("geometry: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_key_value(text: &str) -> Result<Self, GeometryError> {
        let mut kind = None;
        let mut params = BTreeMap::new();
        let mut component = None;
        let mut center = None;
        let mut half_width = None;
        let mut convention = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                GeometryError::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, val) = (key.trim(), val.trim());
            let number = || {
                val.parse::<f64>().map_err(|_| {
                    GeometryError::Parse(format!("line {}: `{val}` is not a number", lineno + 1))
                })
            };
            let tag = |v: &str| Value::String(v.to_string());
            match key {
                "type" => kind = Some(val.to_string()),
                "window.component" => {
                    component = Some(serde_json::from_value(tag(val)).map_err(|_| {
                        GeometryError::Parse(format!("unknown window component `{val}`"))
                    })?)
                }
                "window.convention" => {
                    convention = Some(serde_json::from_value(tag(val)).map_err(|_| {
                        GeometryError::Parse(format!("unknown window convention `{val}`"))
                    })?)
                }
                "window.center" => center = Some(number()?),
                "window.half_width" => half_width = Some(number()?),
                _ => {
                    let name = key.strip_prefix("params.").unwrap_or(key);
                    params.insert(name.to_string(), number()?);
                }
            }
        }
        let window = match (half_width, convention) {
            (None, None) if component.is_none() && center.is_none() => None,
            (Some(half_width), Some(convention)) => Some(RawWindow {
                component,
                center,
                half_width,
                convention,
            }),
            (None, _) => return Err(GeometryError::MissingParameter("window.half_width".into())),
            (_, None) => return Err(GeometryError::MissingParameter("window.convention".into())),
        };
        Self::from_raw(RawGeometry {
            kind: kind.ok_or_else(|| GeometryError::MissingParameter("type".into()))?,
            params,
            window,
        })
    }

    fn from_raw(raw: RawGeometry) -> Result<Self, GeometryError> {
        let names = TYPES
            .iter()
            .find(|(k, _)| *k == raw.kind)
            .map(|(_, n)| *n)
            .ok_or_else(|| GeometryError::UnknownType(raw.kind.clone()))?;
        if let Some(extra) = raw.params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(GeometryError::UnknownKey(extra.clone()));
        }
        let get = |name: &str| {
            raw.params
                .get(name)
                .copied()
                .ok_or_else(|| GeometryError::MissingParameter(name.to_string()))
        };
        let domain: Domain = match raw.kind.as_str() {
            "disk" => PlanarDomain::disk(get("R")?)?.into(),
            "annulus" => PlanarDomain::annulus(get("R1")?, get("R2")?)?.into(),
            "rectangle" => PlanarDomain::rectangle(get("a")?, get("b")?)?.into(),
            "tangent-circles" => PlanarDomain::tangent_circles(get("R")?, get("d")?)?.into(),
            "sphere" => SphericalDomain::full_sphere(get("R")?)?.into(),
            "decapitated-sphere" => SphericalDomain::decapitated(get("R")?, get("delta")?)?.into(),
            other => return Err(GeometryError::UnknownType(other.to_string())),
        };
        let window = match raw.window {
            None => None,
            Some(w) => {
                let mut window = Window::canonical_unchecked(&domain, w.half_width, w.convention);
                if let Some(c) = w.component {
                    window.component = c;
                }
                if let Some(c) = w.center {
                    window.center = c;
                }
                window.measures(&domain)?;
                Some(window)
            }
        };
        Ok(Self { domain, window })
    }

    fn to_raw(self) -> RawGeometry {
        let mut params = BTreeMap::new();
        let kind = match self.domain {
            Domain::Planar(p) => match p.shape() {
                PlanarShape::Disk { radius } => {
                    params.insert("R".into(), radius);
                    "disk"
                }
                PlanarShape::Annulus { inner, outer } => {
                    params.insert("R1".into(), inner);
                    params.insert("R2".into(), outer);
                    "annulus"
                }
                PlanarShape::Rectangle { width, height } => {
                    params.insert("a".into(), width);
                    params.insert("b".into(), height);
                    "rectangle"
                }
                PlanarShape::TangentCircles { radius, ratio } => {
                    params.insert("R".into(), radius);
                    params.insert("d".into(), ratio);
                    "tangent-circles"
                }
            },
            Domain::Spherical(s) => {
                params.insert("R".into(), s.radius());
                match s.cap_angle() {
                    Some(delta) => {
                        params.insert("delta".into(), delta);
                        "decapitated-sphere"
                    }
                    None => "sphere",
                }
            }
        };
        RawGeometry {
            kind: kind.to_string(),
            params,
            window: self.window.map(|w| RawWindow {
                component: Some(w.component),
                center: Some(w.center),
                half_width: w.half_width,
                convention: w.convention,
            }),
        }
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("geometry serializes")
    }

    pub fn to_key_value(&self) -> String {
        let raw = self.to_raw();
        let mut out = format!("type = {}\n", raw.kind);
        for (k, v) in &raw.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        if let Some(w) = raw.window {
            if let Some(c) = w.component {
                out.push_str(&format!("window.component = {c}\n"));
            }
            if let Some(c) = w.center {
                out.push_str(&format!("window.center = {c}\n"));
            }
            out.push_str(&format!("window.half_width = {}\n", w.half_width));
            out.push_str(&format!("window.convention = {}\n", w.convention));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn json_round_trip() {
        let text = r#"{"type":"annulus","params":{"R1":1,"R2":2},
            "window":{"component":"inner","center":3.141592653589793,"half_width":0.05,
                      "convention":"angular-half-width"}}"#;
        let g = GeometryConfig::from_json_str(text).unwrap();
        assert_eq!(g.domain.area(), 3.0 * PI);
        let again = GeometryConfig::from_json_value(&g.to_json_value()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn key_value_round_trip() {
        let text = "# cap\ntype = decapitated-sphere\nR = 1\ndelta = 0.3\n\
                    window.half_width = 0.05\nwindow.convention = angular-half-width\n";
        let g = GeometryConfig::from_key_value(text).unwrap();
        let w = g.window.unwrap();
        assert_eq!(w.component, BoundaryComponent::CapRim);
        assert_eq!(w.center, PI);
        assert_eq!(GeometryConfig::from_key_value(&g.to_key_value()).unwrap(), g);
    }

    #[test]
    fn diagnostics() {
        let e = GeometryConfig::from_json_str(r#"{"type":"annulus","params":{"R1":3,"R2":2}}"#);
        assert!(matches!(e, Err(GeometryError::InvalidParameter { .. })));
        let e = GeometryConfig::from_json_str(r#"{"type":"torus","params":{}}"#);
        assert!(matches!(e, Err(GeometryError::UnknownType(_))));
        let e = GeometryConfig::from_json_str(r#"{"type":"disk","params":{"R":1,"x":2}}"#);
        assert!(matches!(e, Err(GeometryError::UnknownKey(_))));
        let e = GeometryConfig::from_json_str(r#"{"type":"disk","params":{}}"#);
        assert!(matches!(e, Err(GeometryError::MissingParameter(_))));
        let e = GeometryConfig::from_key_value("type = disk\nR = 1\nwindow.half_width = 0.1\n");
        assert!(matches!(e, Err(GeometryError::MissingParameter(_))));
    }

    #[test]
    fn default_rectangle_window_sits_at_corner() {
        let g = GeometryConfig::from_json_str(
            r#"{"type":"rectangle","params":{"a":2,"b":1},
                "window":{"half_width":0.02,"convention":"arclength"}}"#,
        )
        .unwrap();
        assert_eq!(g.window.unwrap().center, 2.0);
    }
}
