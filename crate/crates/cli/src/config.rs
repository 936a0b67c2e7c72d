//! Experiment configuration: a plain-text `key = value` format with one
//! level of `[section]` nesting and `#` comments.
//!
//! ```text
//! command = count
//! seed = 7
//!
//! [generator]
//! kind = lattice
//! d = 2
//! m = 20
//!
//! [query]
//! family = simplex
//! k = 1
//! t = 0.5
//! delta = 0.01
//! ```
//!
//! Lists are separated by commas or semicolons. Frequency directions use
//! `|` between blocks, e.g. `direction = 1, 0 | -1, 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use configeo::configcount::{Algorithm, Family, PhiFunction, VolumeConvention};
use configeo::expfit::ScanFamily;
use configeo::fourierlab::{FrequencyPoint, MeasureSpec};
use configeo::pointgen::GeneratorSpec;
use thiserror::Error;

pub const SEED_ENV: &str = "CONFIGEO_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}field `{field}`: {msg}", location(*line))]
    Field {
        line: Option<usize>,
        field: String,
        msg: String,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn location(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gen,
    Energy,
    Count,
    Scan,
    Ft,
    Curvature,
    Dim,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gen => "gen",
            Self::Energy => "energy",
            Self::Count => "count",
            Self::Scan => "scan",
            Self::Ft => "ft",
            Self::Curvature => "curvature",
            Self::Dim => "dim",
        }
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "gen" => Self::Gen,
            "energy" => Self::Energy,
            "count" => Self::Count,
            "scan" => Self::Scan,
            "ft" => Self::Ft,
            "curvature" => Self::Curvature,
            "dim" => Self::Dim,
            other => return Err(format!("unknown command `{other}`")),
        })
    }
}

/// Raw `section.key -> value` entries with the line they came from
/// (`None` for command-line overrides). Top-level keys have an empty section.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<(String, String), (String, Option<usize>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                    line: lineno,
                    msg: format!("unterminated section header `{line}`"),
                })?;
                let name = name.trim();
                if name.is_empty() || name.contains(['[', ']', '.']) {
                    return Err(ConfigError::Syntax {
                        line: lineno,
                        msg: format!("invalid section name `{name}`"),
                    });
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: lineno,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line: lineno,
                    msg: "empty key".into(),
                });
            }
            let slot = (section.clone(), key.to_string());
            if let Some((_, Some(prev))) = raw.entries.get(&slot) {
                return Err(ConfigError::Syntax {
                    line: lineno,
                    msg: format!("`{}` already set on line {prev}", dotted(&slot.0, &slot.1)),
                });
            }
            raw.entries.insert(slot, (value.trim().to_string(), Some(lineno)));
        }
        Ok(raw)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Sets `section.key` (or a top-level `key`) from the command line.
    pub fn set(&mut self, dotted_key: &str, value: &str) {
        let (section, key) = match dotted_key.split_once('.') {
            Some((s, k)) => (s.to_string(), k.to_string()),
            None => (String::new(), dotted_key.to_string()),
        };
        self.entries.insert((section, key), (value.to_string(), None));
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .map(|(v, _)| v.as_str())
    }

    fn line(&self, section: &str, key: &str) -> Option<usize> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .and_then(|(_, l)| *l)
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.entries.keys().any(|(s, _)| s == section)
    }

    /// The entries rendered back in config syntax, sorted by section and key.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut current: Option<&str> = None;
        for ((section, key), (value, _)) in &self.entries {
            if current != Some(section.as_str()) {
                if !section.is_empty() {
                    out.push_str(&format!("\n[{section}]\n"));
                }
                current = Some(section);
            }
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

fn dotted(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

/// Typed access to a [`RawConfig`] with field-level diagnostics.
struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn err(&self, section: &str, key: &str, msg: impl Into<String>) -> ConfigError {
        ConfigError::Field {
            line: self.raw.line(section, key),
            field: dotted(section, key),
            msg: msg.into(),
        }
    }

    fn opt<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| self.err(section, key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn req<T: FromStr>(&self, section: &str, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.opt(section, key)?
            .ok_or_else(|| self.err(section, key, "required field is missing"))
    }

    fn list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(v) = self.raw.get(section, key) else {
            return Ok(None);
        };
        parse_list(v)
            .map(Some)
            .map_err(|e| self.err(section, key, e))
    }

    fn req_list(&self, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.list(section, key)?
            .ok_or_else(|| self.err(section, key, "required field is missing"))
    }
}

pub fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    let items: Vec<&str> = v
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err("empty list".into());
    }
    items
        .iter()
        .map(|s| s.parse::<f64>().map_err(|e| format!("cannot parse `{s}`: {e}")))
        .collect()
}

fn parse_direction(v: &str) -> Result<FrequencyPoint, String> {
    let blocks = v
        .split('|')
        .map(parse_list)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrequencyPoint::new(blocks))
}

#[derive(Clone, Debug)]
pub struct QueryConfig {
    pub family: Family,
    pub k: usize,
    pub t: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub volume_convention: VolumeConvention,
    pub phi: Option<PhiFunction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Debug)]
pub struct FtConfig {
    pub measure: MeasureSpec,
    pub method: FtMethod,
    pub direction: FrequencyPoint,
    pub radii: Vec<f64>,
    pub nodes: usize,
    pub samples: usize,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurvatureTarget {
    Sphere { n: usize },
    PartialDeterminant,
    PairedForm { d: usize },
    Circulant { d_max: usize },
    PhaseHessian { d: usize, xi: Vec<f64>, eta: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct CurvatureConfig {
    pub target: CurvatureTarget,
    pub t: f64,
    pub h: f64,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub family: ScanFamily,
    pub d: usize,
    pub schedule: Vec<usize>,
    pub s: Option<f64>,
    pub predicted: Option<f64>,
    pub adaptability: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct EnergyConfig {
    pub s: Vec<f64>,
    pub constant: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimSource {
    Points,
    Solutions,
}

#[derive(Clone, Debug)]
pub struct DimConfig {
    pub source: DimSource,
    pub scales: Vec<f64>,
}

/// Fully validated configuration for one run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub threads: Option<usize>,
    pub algorithm: Algorithm,
    pub record_timing: bool,
    pub generator: Option<GeneratorSpec>,
    pub query: Option<QueryConfig>,
    pub scan: Option<ScanConfig>,
    pub energy: Option<EnergyConfig>,
    pub ft: Option<FtConfig>,
    pub curvature: Option<CurvatureConfig>,
    pub dim: Option<DimConfig>,
    /// The effective raw entries, for the manifest.
    pub raw: RawConfig,
}

impl ExperimentConfig {
    /// Resolves defaults and validates the sections the command needs.
    /// `env_seed` is the value of [`SEED_ENV`], consulted when no seed is set.
    pub fn from_raw(mut raw: RawConfig, env_seed: Option<&str>) -> Result<Self, ConfigError> {
        if raw.get("", "seed").is_none() {
            let seed = match env_seed {
                Some(s) => s.trim().parse::<u64>().map_err(|e| ConfigError::Field {
                    line: None,
                    field: SEED_ENV.into(),
                    msg: format!("cannot parse `{s}`: {e}"),
                })?,
                None => 0,
            };
            raw.set("seed", &seed.to_string());
        }
        let r = Reader { raw: &raw };
        let command: Command = r.req("", "command")?;
        let seed: u64 = r.req("", "seed")?;
        let output_dir = PathBuf::from(r.opt::<String>("", "output_dir")?.unwrap_or_else(|| "out".into()));
        let threads: Option<usize> = r.opt("", "threads")?;
        if threads == Some(0) {
            return Err(r.err("", "threads", "must be at least 1"));
        }
        let algorithm = r.opt::<Algorithm>("", "algorithm")?.unwrap_or_default();
        let record_timing = r.opt::<bool>("", "record_timing")?.unwrap_or(false);

        let needs_generator = matches!(
            command,
            Command::Gen | Command::Energy | Command::Count | Command::Dim
        );
        let generator = if needs_generator {
            Some(generator_spec(&r, seed)?)
        } else {
            None
        };
        let d_hint = match &generator {
            Some(GeneratorSpec::Lattice { d, .. })
            | Some(GeneratorSpec::CantorProduct { d, .. })
            | Some(GeneratorSpec::Homogeneous { d, .. })
            | Some(GeneratorSpec::UniformRandom { d, .. })
            | Some(GeneratorSpec::Coplanar { d, .. }) => Some(*d),
            _ => r.opt::<usize>("scan", "d")?,
        };

        let mut cfg = Self {
            command,
            seed,
            output_dir,
            threads,
            algorithm,
            record_timing,
            generator,
            query: None,
            scan: None,
            energy: None,
            ft: None,
            curvature: None,
            dim: None,
            raw: RawConfig::default(),
        };
        match command {
            Command::Gen => {}
            Command::Count => {
                let q = query(&r, d_hint, true)?;
                if q.family == Family::Custom && q.phi.is_none() {
                    return Err(r.err("query", "phi", "custom family needs a Φ function"));
                }
                cfg.query = Some(q);
            }
            Command::Scan => {
                cfg.scan = Some(scan(&r)?);
                let q = query(&r, d_hint, false)?;
                if q.delta.is_some() {
                    return Err(r.err("query", "delta", "scans use δ_n = n^(-1/s); remove delta"));
                }
                cfg.query = Some(q);
            }
            Command::Energy => {
                cfg.energy = Some(EnergyConfig {
                    s: r.req_list("energy", "s")?,
                    constant: r.opt("energy", "constant")?.unwrap_or(10.0),
                });
            }
            Command::Ft => cfg.ft = Some(ft(&r)?),
            Command::Curvature => cfg.curvature = Some(curvature(&r)?),
            Command::Dim => {
                let source = match r.opt::<String>("dim", "source")?.as_deref() {
                    None | Some("points") => DimSource::Points,
                    Some("solutions") => DimSource::Solutions,
                    Some(other) => {
                        return Err(r.err("dim", "source", format!("unknown source `{other}`")))
                    }
                };
                let scales = match r.list("dim", "scales")? {
                    Some(s) => s,
                    None => {
                        let lo: i32 = r.req("dim", "dyadic_min")?;
                        let hi: i32 = r.req("dim", "dyadic_max")?;
                        if hi < lo {
                            return Err(r.err("dim", "dyadic_max", "must be >= dyadic_min"));
                        }
                        (lo..=hi).map(|j| 2f64.powi(-j)).collect()
                    }
                };
                if source == DimSource::Solutions {
                    let q = query(&r, d_hint, true)?;
                    if q.phi.is_none() {
                        return Err(r.err("query", "phi", "solution sets need a Φ function"));
                    }
                    cfg.query = Some(q);
                }
                cfg.dim = Some(DimConfig { source, scales });
            }
        }
        cfg.raw = raw;
        Ok(cfg)
    }

    pub fn from_text(text: &str, env_seed: Option<&str>) -> Result<Self, ConfigError> {
        Self::from_raw(RawConfig::parse(text)?, env_seed)
    }
}

fn generator_spec(r: &Reader, seed: u64) -> Result<GeneratorSpec, ConfigError> {
    let s = "generator";
    let kind: String = r.req(s, "kind")?;
    let gseed = r.opt::<u64>(s, "seed")?.unwrap_or(seed);
    let spec = match kind.as_str() {
        "lattice" => GeneratorSpec::Lattice { d: r.req(s, "d")?, m: r.req(s, "m")? },
        "cantor_product" | "cantor" => GeneratorSpec::CantorProduct {
            d: r.req(s, "d")?,
            ratio: r.req(s, "ratio")?,
            level: r.req(s, "level")?,
        },
        "homogeneous" => GeneratorSpec::Homogeneous { d: r.req(s, "d")?, n: r.req(s, "n")?, seed: gseed },
        "uniform_random" | "random" => {
            GeneratorSpec::UniformRandom { d: r.req(s, "d")?, n: r.req(s, "n")?, seed: gseed }
        }
        "coplanar" => GeneratorSpec::Coplanar { d: r.req(s, "d")?, n: r.req(s, "n")?, seed: gseed },
        "from_file" | "file" => {
            let path = PathBuf::from(r.req::<String>(s, "path")?);
            if !path.exists() {
                return Err(r.err(s, "path", format!("{} does not exist", path.display())));
            }
            GeneratorSpec::FromFile { path }
        }
        other => return Err(r.err(s, "kind", format!("unknown generator `{other}`"))),
    };
    spec.validate().map_err(|e| r.err(s, "kind", e.to_string()))?;
    Ok(spec)
}

fn query(r: &Reader, d_hint: Option<usize>, need_target: bool) -> Result<QueryConfig, ConfigError> {
    let s = "query";
    let family: Family = r.req(s, "family")?;
    let default_k = match family {
        Family::Volume => d_hint,
        Family::Area2 | Family::Angle => Some(2),
        _ => None,
    };
    let k: usize = match r.opt(s, "k")? {
        Some(k) => k,
        None => default_k.ok_or_else(|| r.err(s, "k", "required field is missing"))?,
    };
    let t = r.list(s, "t")?;
    if need_target && t.is_none() {
        return Err(r.err(s, "t", format!("required for family {family}")));
    }
    let delta = r.opt::<f64>(s, "delta")?;
    if need_target && delta.is_none() {
        return Err(r.err(s, "delta", "required field is missing"));
    }
    if let Some(t) = &t {
        if family == Family::Simplex && t.len() != k * (k + 1) / 2 {
            return Err(r.err(
                s,
                "t",
                format!("simplex with k = {k} needs {} distances, got {}", k * (k + 1) / 2, t.len()),
            ));
        }
    }
    let volume_convention = r.opt(s, "volume_convention")?.unwrap_or_default();
    let phi = match r.opt::<String>(s, "phi")? {
        None => None,
        Some(name) => Some(match name.as_str() {
            "pairwise_distances" => PhiFunction::pairwise_distances(k + 1),
            "constant" => PhiFunction::constant(k + 1, r.req_list(s, "phi_value")?),
            "determinant" => {
                let d = d_hint.ok_or_else(|| r.err(s, "phi", "determinant needs a dimension"))?;
                PhiFunction::determinant(d)
            }
            "difference" => {
                let d = d_hint.ok_or_else(|| r.err(s, "phi", "difference needs a dimension"))?;
                PhiFunction::difference(d)
            }
            other => return Err(r.err(s, "phi", format!("unknown Φ `{other}`"))),
        }),
    };
    if phi.is_some() && family != Family::Custom {
        return Err(r.err(s, "phi", "Φ functions require family = custom"));
    }
    Ok(QueryConfig { family, k, t, delta, volume_convention, phi })
}

fn scan(r: &Reader) -> Result<ScanConfig, ConfigError> {
    let s = "scan";
    let name: String = r.req(s, "generator")?;
    let family = match name.as_str() {
        "lattice" => ScanFamily::Lattice,
        "cantor" | "cantor_product" => ScanFamily::Cantor { ratio: r.req(s, "ratio")? },
        "random" | "uniform_random" => ScanFamily::Random,
        "coplanar" => ScanFamily::Coplanar,
        "homogeneous" => ScanFamily::Homogeneous,
        other => return Err(r.err(s, "generator", format!("unknown scan family `{other}`"))),
    };
    let schedule = r.req_list(s, "schedule")?;
    if schedule.iter().any(|&n| n < 1.0 || n.fract() != 0.0) {
        return Err(r.err(s, "schedule", "sizes must be positive integers"));
    }
    Ok(ScanConfig {
        family,
        d: r.req(s, "d")?,
        schedule: schedule.into_iter().map(|n| n as usize).collect(),
        s: r.opt(s, "s")?,
        predicted: r.opt(s, "predicted")?,
        adaptability: r.opt(s, "adaptability")?,
    })
}

fn ft(r: &Reader) -> Result<FtConfig, ConfigError> {
    let s = "ft";
    let name: String = r.req(s, "measure")?;
    let measure = match name.as_str() {
        "sphere" => MeasureSpec::Sphere { d: r.req(s, "d")? },
        "triangle2d" => MeasureSpec::Triangle2d,
        "chain_spheres" => MeasureSpec::ChainSpheres {
            d: r.req(s, "d")?,
            r1: r.opt(s, "r1")?.unwrap_or(1.0),
            r2: r.opt(s, "r2")?.unwrap_or(1.0),
            t: r.opt(s, "t")?.unwrap_or(1.0),
        },
        "determinant_variety" => MeasureSpec::DeterminantVariety {
            d: r.opt(s, "d")?.unwrap_or(3),
            t: r.req(s, "t")?,
            radius: r.opt(s, "radius")?.unwrap_or(2.0),
        },
        other => return Err(r.err(s, "measure", format!("unknown measure `{other}`"))),
    };
    measure.validate().map_err(|e| r.err(s, "measure", e.to_string()))?;
    let method = match r.opt::<String>(s, "method")?.as_deref() {
        Some("closed_form") | None => FtMethod::ClosedForm,
        Some("quadrature") => FtMethod::Quadrature,
        Some("montecarlo") => FtMethod::MonteCarlo,
        Some(other) => return Err(r.err(s, "method", format!("unknown method `{other}`"))),
    };
    match (method, &measure) {
        (FtMethod::ClosedForm, MeasureSpec::Sphere { .. } | MeasureSpec::Triangle2d) => {}
        (FtMethod::Quadrature, MeasureSpec::Sphere { .. }) => {}
        (FtMethod::MonteCarlo, _) => {}
        _ => return Err(r.err(s, "method", format!("method not available for measure `{name}`"))),
    }
    let dims = measure.block_dims();
    let direction = match r.raw.get(s, "direction") {
        Some(v) => parse_direction(v).map_err(|e| r.err(s, "direction", e))?,
        None => default_direction(&measure),
    };
    let got: Vec<usize> = direction.blocks.iter().map(Vec::len).collect();
    if got != dims {
        return Err(r.err(s, "direction", format!("expected blocks of sizes {dims:?}, got {got:?}")));
    }
    if direction.norm() == 0.0 {
        return Err(r.err(s, "direction", "direction must be nonzero"));
    }
    let radii = match r.list(s, "radii")? {
        Some(v) => v,
        None => {
            let lo: f64 = r.req(s, "radius_min")?;
            let hi: f64 = r.req(s, "radius_max")?;
            let step: f64 = r.req(s, "radius_step")?;
            if !(step > 0.0 && hi > lo) {
                return Err(r.err(s, "radius_step", "need radius_max > radius_min and step > 0"));
            }
            let n = ((hi - lo) / step).round() as usize;
            (0..=n).map(|i| lo + step * i as f64).collect()
        }
    };
    Ok(FtConfig {
        measure,
        method,
        direction,
        radii,
        nodes: r.opt(s, "nodes")?.unwrap_or(512),
        samples: r.opt(s, "samples")?.unwrap_or(1_000_000),
        epsilon: r.opt(s, "epsilon")?.unwrap_or(1e-3),
    })
}

/// Unit direction used when none is given: `e_d` for spheres, `(ξ, -ξ)`
/// for pair measures.
pub fn default_direction(measure: &MeasureSpec) -> FrequencyPoint {
    let e = |d: usize, sign: f64| {
        let mut v = vec![0.0; d];
        v[d - 1] = sign;
        v
    };
    match *measure {
        MeasureSpec::Sphere { d } => FrequencyPoint::new(vec![e(d, 1.0)]),
        MeasureSpec::Triangle2d => FrequencyPoint::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]),
        MeasureSpec::ChainSpheres { d, .. } => FrequencyPoint::new(vec![e(d, 1.0), e(d, -1.0)]),
        MeasureSpec::DeterminantVariety { d, .. } => {
            FrequencyPoint::new((0..d).map(|i| if i == 0 { e(d, 1.0) } else { vec![0.0; d] }).collect())
        }
    }
}

fn curvature(r: &Reader) -> Result<CurvatureConfig, ConfigError> {
    let s = "curvature";
    let name: String = r.req(s, "target")?;
    let target = match name.as_str() {
        "sphere" => CurvatureTarget::Sphere { n: r.opt(s, "n")?.unwrap_or(3) },
        "partial_determinant" => CurvatureTarget::PartialDeterminant,
        "paired_form" => CurvatureTarget::PairedForm { d: r.req(s, "d")? },
        "circulant" => CurvatureTarget::Circulant { d_max: r.opt(s, "d_max")?.unwrap_or(12) },
        "phase_hessian" => {
            let d: usize = r.req(s, "d")?;
            let xi = r.req_list(s, "xi")?;
            let eta = r.req_list(s, "eta")?;
            if d < 3 || xi.len() != d || eta.len() != d {
                return Err(r.err(s, "d", "phase_hessian needs d >= 3 and ξ, η of length d"));
            }
            CurvatureTarget::PhaseHessian { d, xi, eta }
        }
        other => return Err(r.err(s, "target", format!("unknown target `{other}`"))),
    };
    if let CurvatureTarget::PairedForm { d } = target {
        if d == 0 || d % 2 != 0 {
            return Err(r.err(s, "d", "paired_form needs even d"));
        }
    }
    if let CurvatureTarget::Sphere { n } = target {
        if n < 2 {
            return Err(r.err(s, "n", "sphere needs n >= 2"));
        }
    }
    Ok(CurvatureConfig {
        target,
        t: r.opt(s, "t")?.unwrap_or(1.0),
        h: r.opt(s, "h")?.unwrap_or(configeo::fourierlab::DEFAULT_STEP),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_COUNT: &str = "\
command = count
seed = 7
[generator]
kind = lattice   # 400 points
d = 2
m = 20
[query]
family = simplex
k = 1
t = 0.5
delta = 0.01
";

    #[test]
    fn minimal_count_config() {
        let cfg = ExperimentConfig::from_text(MINIMAL_COUNT, None).unwrap();
        assert_eq!(cfg.command, Command::Count);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.generator, Some(GeneratorSpec::Lattice { d: 2, m: 20 }));
        let q = cfg.query.unwrap();
        assert_eq!(q.t, Some(vec![0.5]));
        assert_eq!(q.delta, Some(0.01));
    }

    #[test]
    fn missing_target_names_field() {
        let text = MINIMAL_COUNT.replace("t = 0.5\n", "");
        let err = ExperimentConfig::from_text(&text, None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("query.t"), "{msg}");
    }

    #[test]
    fn bad_value_reports_line() {
        let text = MINIMAL_COUNT.replace("m = 20", "m = twenty");
        let err = ExperimentConfig::from_text(&text, None).unwrap_err();
        assert!(err.to_string().starts_with("line 6: field `generator.m`"), "{err}");
    }

    #[test]
    fn flag_overrides_file_seed() {
        let mut raw = RawConfig::parse(MINIMAL_COUNT).unwrap();
        raw.set("seed", "42");
        let cfg = ExperimentConfig::from_raw(raw, Some("9")).unwrap();
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn environment_seed_is_default() {
        let text = MINIMAL_COUNT.replace("seed = 7\n", "");
        assert_eq!(ExperimentConfig::from_text(&text, Some("13")).unwrap().seed, 13);
        assert_eq!(ExperimentConfig::from_text(&text, None).unwrap().seed, 0);
        assert!(ExperimentConfig::from_text(&text, Some("x")).is_err());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            RawConfig::parse("command = count\n[query\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            RawConfig::parse("just words\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            RawConfig::parse("a = 1\na = 2\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn lists_and_directions() {
        assert_eq!(parse_list("1, 2; 3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_list(" , ").is_err());
        let d = parse_direction("1, 0 | -1, 0").unwrap();
        assert_eq!(d.blocks, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
    }

    #[test]
    fn ft_section() {
        let text = "command = ft\n[ft]\nmeasure = sphere\nd = 3\nradius_min = 10\nradius_max = 20\nradius_step = 0.5\n";
        let cfg = ExperimentConfig::from_text(text, None).unwrap();
        let ft = cfg.ft.unwrap();
        assert_eq!(ft.radii.len(), 21);
        assert_eq!(ft.direction.blocks, vec![vec![0.0, 0.0, 1.0]]);
        let bad = text.replace("sphere", "chain_spheres");
        assert!(ExperimentConfig::from_text(&bad, None).is_err());
    }

    #[test]
    fn render_round_trips() {
        let raw = RawConfig::parse(MINIMAL_COUNT).unwrap();
        let again = RawConfig::parse(&raw.render()).unwrap();
        assert_eq!(raw.render(), again.render());
    }
}
