use crate::{CliError, CommandKind, Format, RunArgs, SolverChoice};
use narrow_escape::geometry::{
    BoundaryComponent, Convention, Domain, GeometryConfig, GeometryError, PlanarShape,
    SphericalDomain, Window,
};
use narrow_escape_mc::{McConfig, Start};
use serde::Deserialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

pub const DEFAULT_ORDER: usize = 64;

/// A fully resolved command: validated geometry plus every option.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: CommandKind,
    pub geometry: GeometryConfig,
    /// Window sizes for `sweep`; the other commands use `geometry.window`.
    pub eps: Vec<f64>,
    pub d: f64,
    pub order: usize,
    pub method: SolverChoice,
    pub mc: McConfig,
    pub absorb: Option<BoundaryComponent>,
    pub output: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum EpsList {
    One(f64),
    Many(Vec<f64>),
}

/// The "run" block of a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunBlock {
    dt: Option<f64>,
    dt_max: Option<f64>,
    n_paths: Option<u64>,
    seed: Option<u64>,
    max_steps: Option<u64>,
    start: Option<Start>,
    #[serde(alias = "adaptive_near_singularity")]
    adaptive: Option<bool>,
    window_factor: Option<f64>,
    wall_factor: Option<f64>,
    eps: Option<EpsList>,
    delta: Option<f64>,
    #[serde(rename = "D")]
    d: Option<f64>,
    order: Option<usize>,
    method: Option<SolverChoice>,
    absorb: Option<BoundaryComponent>,
    output: Option<Format>,
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_geometry(text: &str) -> Result<GeometryConfig, GeometryError> {
    if text.trim_start().starts_with('{') {
        GeometryConfig::from_json_str(text)
    } else {
        GeometryConfig::from_key_value(text)
    }
}

/// Convention used when a window is built from `--eps` alone.
pub fn default_convention(domain: &Domain) -> Convention {
    match domain {
        Domain::Planar(p) => match p.shape() {
            PlanarShape::Rectangle { .. } => Convention::Arclength,
            PlanarShape::TangentCircles { .. } => Convention::LengthRatio,
            _ => Convention::AngularHalfWidth,
        },
        Domain::Spherical(_) => Convention::AngularHalfWidth,
    }
}

fn parse_start(text: &str) -> Result<Start, CliError> {
    if text.trim() == "uniform" {
        return Ok(Start::Uniform);
    }
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("start `{text}` is neither `uniform` nor two numbers")))?;
    match parts[..] {
        [a, b] => Ok(Start::Point { coords: [a, b] }),
        _ => Err(CliError::Usage(format!("start `{text}` needs exactly two coordinates"))),
    }
}

fn parse_component(text: &str) -> Result<BoundaryComponent, CliError> {
    serde_json::from_value(Value::String(text.to_string()))
        .map_err(|_| CliError::Usage(format!("unknown boundary component `{text}`")))
}

impl RunSpec {
    pub fn resolve(command: CommandKind, args: &RunArgs) -> Result<Self, CliError> {
        let (config_geometry, run) = match &args.config {
            Some(path) => {
                let value: Value = serde_json::from_str(&read(path)?)
                    .map_err(|e| GeometryError::Parse(format!("{}: {e}", path.display())))?;
                let run = match value.get("run") {
                    Some(r) => serde_json::from_value(r.clone())
                        .map_err(|e| CliError::Usage(format!("run block: {e}")))?,
                    None => RunBlock::default(),
                };
                let geometry = match &args.geometry {
                    Some(_) => None,
                    None => Some(GeometryConfig::from_json_value(&value)?),
                };
                (geometry, run)
            }
            None => (None, RunBlock::default()),
        };
        let mut geometry = match (&args.geometry, config_geometry) {
            (Some(path), _) => parse_geometry(&read(path)?)?,
            (None, Some(g)) => g,
            (None, None) => {
                return Err(CliError::Usage("either --geometry or --config is required".into()))
            }
        };

        if let Some(delta) = args.delta.or(run.delta) {
            let Domain::Spherical(s) = geometry.domain else {
                return Err(CliError::Usage("--delta applies to sphere geometries only".into()));
            };
            geometry.domain = SphericalDomain::decapitated(s.radius(), delta)?.into();
        }

        let eps = if !args.eps.is_empty() {
            args.eps.clone()
        } else {
            match run.eps {
                Some(EpsList::One(e)) => vec![e],
                Some(EpsList::Many(v)) => v,
                None => geometry.window.map(|w| vec![w.half_width]).unwrap_or_default(),
            }
        };
        if let Some(&first) = eps.first() {
            let window = match geometry.window {
                Some(w) => Window {
                    half_width: first,
                    ..w
                },
                None => Window::canonical(
                    &geometry.domain,
                    first,
                    default_convention(&geometry.domain),
                )?,
            };
            geometry.window = Some(window);
        }
        if let Some(w) = &geometry.window {
            w.measures(&geometry.domain)?;
        }

        let mut mc = McConfig::default();
        macro_rules! set {
            ($field:ident, $($value:expr),+) => {
                $(if let Some(v) = $value { mc.$field = v; })+
            };
        }
        set!(dt, run.dt, args.dt);
        set!(n_paths, run.n_paths, args.paths);
        set!(seed, run.seed, args.seed);
        set!(max_steps, run.max_steps, args.max_steps);
        set!(start, run.start, args.start.as_deref().map(parse_start).transpose()?);
        set!(adaptive, run.adaptive);
        set!(window_factor, run.window_factor);
        set!(wall_factor, run.wall_factor);
        mc.dt_max = run.dt_max;

        let absorb = match &args.absorb {
            Some(text) => Some(parse_component(text)?),
            None => run.absorb,
        };
        let d = args.diffusivity.or(run.d).unwrap_or(1.0);
        if !(d > 0.0 && d.is_finite()) {
            return Err(CliError::Usage(format!("diffusivity {d} must be positive")));
        }
        Ok(Self {
            command,
            geometry,
            eps,
            d,
            order: args.order.or(run.order).unwrap_or(DEFAULT_ORDER),
            method: args.method.or(run.method).unwrap_or(SolverChoice::Collocation),
            mc,
            absorb,
            output: args.output.or(run.output).unwrap_or(Format::Table),
            out: args.out.clone().or(run.out),
        })
    }
}
