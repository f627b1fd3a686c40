//! Experiment configuration: a TOML file, overridden by `--section.key=value`
//! flags, deserialized into [`ExperimentConfig`].

use std::path::PathBuf;

use brenier_core::concentration::BaseSet;
use brenier_core::measures::{ConvexBody, Norm, Potential, SearchSpec, Tilt};
use brenier_core::suite::SuiteConfig;
use brenier_core::transport1d::PairSpec;
use brenier_core::transport_nd::{SolverSpec, Target};
use brenier_core::verify::{config_digest, EnvelopeVariant};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Output directory; falls back to `$BRENIER_OUT`, then `./out`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub svg: bool,
    pub envelope: EnvelopeConfig,
    pub transport1d: Transport1dConfig,
    pub transportnd: TransportNdConfig,
    pub concentrate: ConcentrateConfig,
    pub suite: SuiteSection,
    pub report: ReportConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            out: None,
            jobs: 1,
            svg: false,
            envelope: EnvelopeConfig::default(),
            transport1d: Transport1dConfig::default(),
            transportnd: TransportNdConfig::default(),
            concentrate: ConcentrateConfig::default(),
            suite: SuiteSection::default(),
            report: ReportConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvelopeConfig {
    pub p: f64,
    pub a: f64,
    pub rows: usize,
    pub oracle_nodes: usize,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self { p: 0.25, a: 1.0, rows: 201, oracle_nodes: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Transport1dConfig {
    pub source: String,
    pub target: String,
    pub rows: usize,
    /// Smoothness exponent of the source potential.
    pub p: f64,
    /// Convexity exponent of the target potential.
    pub q: f64,
    pub pairs: PairSpec,
    pub search: SearchSpec,
}

impl Default for Transport1dConfig {
    fn default() -> Self {
        Self {
            source: "gaussian".into(),
            target: "uniform:-1:1".into(),
            rows: 401,
            p: 1.0,
            q: 1.0,
            pairs: PairSpec::default(),
            search: SearchSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TransportNdConfig {
    pub dim: usize,
    pub source: String,
    pub target: String,
    pub solver: SolverSpec,
    pub pair_count: usize,
    /// Upper bound on the source Hessian; `None` takes it from the family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub variant: EnvelopeVariant,
    pub lipschitz_slack: f64,
    pub envelope_slack: f64,
    pub search: SearchSpec,
}

impl Default for TransportNdConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            source: "gaussian".into(),
            target: "box".into(),
            solver: SolverSpec::default(),
            pair_count: 10_000,
            lambda: None,
            variant: EnvelopeVariant::Dimensional,
            lipschitz_slack: 1.15,
            envelope_slack: 1.2,
            search: SearchSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConcentrateConfig {
    pub dim: usize,
    pub measure: String,
    pub base: BaseSet,
    pub radii: Vec<f64>,
    pub samples: usize,
    pub norm: Norm,
    pub marton: bool,
    /// One-dimensional tilt for the Talagrand and log-Sobolev checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilt: Option<Tilt>,
    pub search: SearchSpec,
}

impl Default for ConcentrateConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            measure: "power:4".into(),
            base: BaseSet::HalfSpace { normal: vec![1.0, 0.0], offset: 0.0 },
            radii: vec![0.5, 1.0, 2.0, 4.0],
            samples: 1_000_000,
            norm: Norm::L2,
            marton: true,
            tilt: None,
            search: SearchSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSection {
    pub criteria: Vec<u8>,
    #[serde(flatten)]
    pub battery: SuiteConfig,
}

impl Default for SuiteSection {
    fn default() -> Self {
        Self { criteria: (1..=13).collect(), battery: SuiteConfig::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportConfig {
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

const TOP_LEVEL: [&str; 5] = ["seed", "out", "jobs", "svg", "config"];

/// Parse an override value as a TOML literal, or take it as a bare string.
fn literal(raw: &str) -> Value {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.into())),
        Err(_) => Value::String(raw.into()),
    }
}

fn set_path(table: &mut Table, path: &str, value: Value) -> Result<(), ConfigError> {
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(ConfigError(format!("malformed key `{path}`")));
    }
    let mut cur = table;
    for k in &keys[..keys.len() - 1] {
        let entry = cur.entry(k.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(ConfigError(format!("`{path}`: `{k}` is not a section"))),
        };
    }
    cur.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Command-line settings after the subcommand: `--key value`, `--key=value`
/// or a bare `--flag`. Undotted keys belong to `section` unless they are
/// top-level; positionals are returned separately.
pub fn apply_settings(table: &mut Table, section: &str, args: &[String]) -> Result<(Vec<String>, Option<PathBuf>), ConfigError> {
    let mut positionals = Vec::new();
    let mut config_file = None;
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(body) = arg.strip_prefix("--") else {
            positionals.push(arg.clone());
            i += 1;
            continue;
        };
        let (key, raw) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => {
                let next = args.get(i + 1).filter(|n| !n.starts_with("--") || n.parse::<f64>().is_ok());
                if let Some(n) = next {
                    i += 1;
                    (body.to_string(), Some(n.clone()))
                } else {
                    (body.to_string(), None)
                }
            }
        };
        i += 1;
        let value = raw.as_deref().map(literal).unwrap_or(Value::Boolean(true));
        if key == "config" {
            let Value::String(p) = value else {
                return Err(ConfigError("`config` expects a path".into()));
            };
            config_file = Some(PathBuf::from(p));
            continue;
        }
        let path = if key.contains('.') || TOP_LEVEL.contains(&key.as_str()) { key } else { format!("{section}.{key}") };
        // Paths are strings even when they look like numbers.
        let value = match (path.as_str(), value) {
            ("out", v) => Value::String(raw.unwrap_or_else(|| v.to_string())),
            (_, v) => v,
        };
        set_path(table, &path, value)?;
    }
    Ok((positionals, config_file))
}

/// Load a config file into a table.
pub fn read_table(path: &std::path::Path) -> Result<Table, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    text.parse::<Table>().map_err(|e| ConfigError(format!("config {}: {e}", path.display())))
}

/// Keys of `given` that do not survive a round trip through the typed config.
fn unknown_keys(given: &Table, known: &Table, prefix: &str, out: &mut Vec<String>) {
    for (k, v) in given {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match (v, known.get(k)) {
            (_, None) => out.push(path),
            (Value::Table(g), Some(Value::Table(kn))) => {
                // Tagged enums (`variant`, `shape`, `family`) have data-dependent keys.
                if !kn.contains_key("variant") && !kn.contains_key("shape") && !kn.contains_key("family") {
                    unknown_keys(g, kn, &path, out);
                }
            }
            _ => {}
        }
    }
}

pub fn build(table: Table) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = table.clone().try_into().map_err(|e: toml::de::Error| ConfigError(format!("invalid config: {}", e.message())))?;
    let known = Table::try_from(&cfg).map_err(|e| ConfigError(e.to_string()))?;
    let mut unknown = Vec::new();
    unknown_keys(&table, &known, "", &mut unknown);
    // Optional fields that are absent from the defaults.
    unknown.retain(|k| !["out", "transportnd.lambda", "concentrate.tilt", "transport1d.pairs.range"].contains(&k.as_str()));
    if let Some(k) = unknown.first() {
        return Err(ConfigError(format!("unknown config field `{k}`")));
    }
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        if self.jobs == 0 {
            return Err(ConfigError("`jobs` must be at least 1".into()));
        }
        if let Some(bad) = self.suite.criteria.iter().find(|c| !(1..=13).contains(*c)) {
            return Err(ConfigError(format!("`suite.criteria`: {bad} is not a criterion between 1 and 13")));
        }
        if self.envelope.rows < 2 {
            return Err(ConfigError("`envelope.rows` must be at least 2".into()));
        }
        if self.transport1d.rows < 2 {
            return Err(ConfigError("`transport1d.rows` must be at least 2".into()));
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os("BRENIER_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Digest of the seed and the section a command reads; the output
    /// directory and worker count do not enter it.
    pub fn digest(&self, command: &str) -> String {
        let section = match command {
            "envelope" => serde_json::to_value(&self.envelope),
            "transport1d" => serde_json::to_value(&self.transport1d),
            "transportnd" => serde_json::to_value(&self.transportnd),
            "concentrate" => serde_json::to_value(&self.concentrate),
            "suite" => serde_json::to_value(&self.suite),
            _ => serde_json::to_value(&self.report),
        }
        .unwrap_or_default();
        config_digest(&serde_json::json!({ "command": command, "seed": self.seed, "section": section }))
    }
}

fn num(field: &str, s: &str) -> Result<f64, ConfigError> {
    s.parse().map_err(|_| ConfigError(format!("`{field}`: `{s}` is not a number")))
}

fn core_err(field: &str) -> impl Fn(brenier_core::Error) -> ConfigError + '_ {
    move |e| ConfigError(format!("`{field}`: {e}"))
}

/// `gaussian[:sigma]`, `gaussian:mean:sigma` (1D), `power:beta`, `huber`,
/// `uniform:lo:hi` (1D), `poly:quadratic:linear:quartic` (1D), `box[:lo:hi]`, `ball[:radius]`.
pub fn parse_measure(field: &str, spec: &str, dim: usize) -> Result<Potential, ConfigError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let e = core_err(field);
    let need = |n: usize| {
        if parts.len() == n {
            Ok(())
        } else {
            Err(ConfigError(format!("`{field}`: `{spec}` expects {} parameter(s)", n - 1)))
        }
    };
    let one_d = || {
        if dim == 1 {
            Ok(())
        } else {
            Err(ConfigError(format!("`{field}`: `{}` is one-dimensional", parts[0])))
        }
    };
    match parts[0] {
        "gaussian" => match parts.len() {
            1 => Ok(Potential::gaussian(dim)),
            2 => Potential::gaussian_with(vec![0.0; dim], num(field, parts[1])?).map_err(e),
            3 => {
                one_d()?;
                Potential::gaussian_with(vec![num(field, parts[1])?], num(field, parts[2])?).map_err(e)
            }
            _ => Err(ConfigError(format!("`{field}`: `{spec}` has too many parameters"))),
        },
        "power" => {
            need(2)?;
            Potential::power_law(dim, num(field, parts[1])?).map_err(e)
        }
        "huber" => {
            need(1)?;
            Potential::huber(dim).map_err(e)
        }
        "uniform" => {
            need(3)?;
            one_d()?;
            Potential::uniform_interval(num(field, parts[1])?, num(field, parts[2])?).map_err(e)
        }
        "poly" => {
            need(4)?;
            one_d()?;
            Potential::polynomial_1d(num(field, parts[1])?, num(field, parts[2])?, num(field, parts[3])?).map_err(e)
        }
        "box" | "ball" => Ok(Potential::uniform(parse_body(field, spec, dim)?)),
        other => Err(ConfigError(format!("`{field}`: unknown measure `{other}`"))),
    }
}

pub fn parse_body(field: &str, spec: &str, dim: usize) -> Result<ConvexBody, ConfigError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let e = core_err(field);
    match (parts[0], parts.len()) {
        ("box", 1) => Ok(ConvexBody::unit_box(dim)),
        ("box", 3) => ConvexBody::boxed(vec![num(field, parts[1])?; dim], vec![num(field, parts[2])?; dim]).map_err(e),
        ("ball", 1) => ConvexBody::ball(vec![0.0; dim], 1.0).map_err(e),
        ("ball", 2) => ConvexBody::ball(vec![0.0; dim], num(field, parts[1])?).map_err(e),
        _ => Err(ConfigError(format!("`{field}`: `{spec}` is not a body (box[:lo:hi] or ball[:radius])"))),
    }
}

pub fn parse_target(field: &str, spec: &str, dim: usize) -> Result<Target, ConfigError> {
    if spec.starts_with("box") || spec.starts_with("ball") {
        Ok(Target::Body { body: parse_body(field, spec, dim)? })
    } else {
        Ok(Target::Measure { potential: parse_measure(field, spec, dim)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn overrides_route_to_sections() {
        let mut t = Table::new();
        let (pos, _) = apply_settings(&mut t, "envelope", &args(&["--p", "0.5", "--a=2", "--seed", "7", "--suite.criteria=[1,2]", "--svg"])).unwrap();
        assert!(pos.is_empty());
        let cfg = build(t).unwrap();
        assert_eq!(cfg.envelope.p, 0.5);
        assert_eq!(cfg.envelope.a, 2.0);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.suite.criteria, vec![1, 2]);
        assert!(cfg.svg);
    }

    #[test]
    fn negative_values_are_values() {
        let mut t = Table::new();
        apply_settings(&mut t, "envelope", &args(&["--p", "-0.5"])).unwrap();
        assert_eq!(build(t).unwrap().envelope.p, -0.5);
    }

    #[test]
    fn unknown_field_is_named() {
        let mut t = Table::new();
        apply_settings(&mut t, "envelope", &args(&["--envelope.q=1"])).unwrap();
        let err = build(t).unwrap_err().0;
        assert!(err.contains("envelope.q"), "{err}");
    }

    #[test]
    fn wrong_type_is_reported() {
        let mut t = Table::new();
        apply_settings(&mut t, "envelope", &args(&["--p=abc"])).unwrap();
        let err = build(t).unwrap_err().0;
        assert!(err.contains('p'), "{err}");
    }

    #[test]
    fn config_round_trips() {
        let cfg = ExperimentConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = build(text.parse::<Table>().unwrap()).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.digest("suite"), back.digest("suite"));
    }

    #[test]
    fn measures_parse() {
        assert_eq!(parse_measure("m", "gaussian", 2).unwrap().dim(), 2);
        assert!(parse_measure("m", "uniform:-1:1", 1).unwrap().body().is_some());
        assert!(parse_measure("m", "uniform:-1:1", 2).is_err());
        assert!(parse_measure("m", "power", 1).is_err());
        assert!(parse_measure("m", "cauchy", 1).unwrap_err().0.contains("cauchy"));
        assert!(matches!(parse_target("t", "ball:2", 2).unwrap(), Target::Body { .. }));
        assert!(matches!(parse_target("t", "power:4", 2).unwrap(), Target::Measure { .. }));
    }
}
