//! `key = value` experiment configuration with per-experiment schemas.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use super::HarnessError;

/// The experiments the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Simulate,
    Extinction,
    Weyl,
    Strichartz,
    Sogge,
    Concentration,
    Trilinear,
    Hflfi,
    ProjectorCheck,
    ProfileCompare,
    Ball,
    BallVerify,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::Simulate,
        Experiment::Extinction,
        Experiment::Weyl,
        Experiment::Strichartz,
        Experiment::Sogge,
        Experiment::Concentration,
        Experiment::Trilinear,
        Experiment::Hflfi,
        Experiment::ProjectorCheck,
        Experiment::ProfileCompare,
        Experiment::Ball,
        Experiment::BallVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Extinction => "extinction",
            Experiment::Weyl => "weyl",
            Experiment::Strichartz => "strichartz",
            Experiment::Sogge => "sogge",
            Experiment::Concentration => "concentration",
            Experiment::Trilinear => "trilinear",
            Experiment::Hflfi => "hflfi",
            Experiment::ProjectorCheck => "projector-check",
            Experiment::ProfileCompare => "profile-compare",
            Experiment::Ball => "ball",
            Experiment::BallVerify => "ball-verify",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Keys accepted by this experiment, with kinds, defaults and
    /// descriptions.
    pub fn params(self) -> Vec<ParamDoc> {
        schema(self).iter().map(|p| ParamDoc { key: p.key, kind: p.kind.describe(), default: p.default, doc: p.doc }).collect()
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Human-readable description of one key.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDoc {
    pub key: &'static str,
    pub kind: String,
    pub default: &'static str,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    UInt { min: u64, max: u64 },
    Float { min: f64, max: f64, open_min: bool },
    UIntList { min: u64, max: u64 },
    FloatList { min: f64, max: f64 },
    Choice(&'static [&'static str]),
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::UInt { min, max } => format!("integer in [{min}, {max}]"),
            Kind::Float { min, max, open_min } => {
                format!("number in {}{min}, {max}]", if *open_min { "(" } else { "[" })
            }
            Kind::UIntList { min, max } => format!("list of integers in [{min}, {max}]"),
            Kind::FloatList { min, max } => format!("list of numbers in [{min}, {max}]"),
            Kind::Choice(options) => format!("one of {}", options.join(", ")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Param {
    key: &'static str,
    kind: Kind,
    default: &'static str,
    doc: &'static str,
}

const fn uint(key: &'static str, min: u64, max: u64, default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::UInt { min, max }, default, doc }
}

const fn float(key: &'static str, min: f64, max: f64, default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::Float { min, max, open_min: false }, default, doc }
}

const fn positive(key: &'static str, max: f64, default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::Float { min: 0.0, max, open_min: true }, default, doc }
}

const fn uints(key: &'static str, min: u64, max: u64, default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::UIntList { min, max }, default, doc }
}

const fn floats(key: &'static str, min: f64, max: f64, default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::FloatList { min, max }, default, doc }
}

const fn choice(key: &'static str, options: &'static [&'static str], default: &'static str, doc: &'static str) -> Param {
    Param { key, kind: Kind::Choice(options), default, doc }
}

const BIG: u64 = 1 << 24;
const PROFILES: &[&str] = &["reference", "bump", "gaussian"];

const SIMULATE: &[Param] = &[
    uint("K", 1, 1 << 16, "64", "spectral truncation"),
    uint("M", 0, BIG, "0", "grid order; 0 selects 3K"),
    positive("dt", 1.0, "5e-5", "time step, at most 1/(4K^2)"),
    float("rho", -1.0, 1.0, "-1", "nonlinearity sign: -1, 0 or 1"),
    float("T", 0.0, 1e6, "0.1", "final time"),
    uint("stride", 1, BIG, "100", "steps between snapshots"),
    choice("init", &["smooth", "mode", "random", "constant"], "smooth", "initial datum"),
    uint("mode", 1, 1 << 16, "1", "mode k for init = mode"),
    float("amplitude", 0.0, 1e300, "1", "amplitude of the datum"),
    positive("width", 1e6, "4", "spectral width w of c_j = A e^{-j^2/w^2} (smooth, random)"),
    choice("output", &["conserved", "coeffs"], "conserved", "conserved quantities or coefficient snapshots"),
];

const EXTINCTION: &[Param] = &[
    uint("N", 2, 1 << 16, "256", "concentration scale"),
    floats("T", 2.0, 1e6, "4, 16, 64", "window parameters, each in [2, N)"),
    choice("profile", PROFILES, "reference", "radial profile"),
    positive("radius", 1e3, "2", "bump radius (profile = bump)"),
    positive("width", 1e3, "1", "Gaussian width (profile = gaussian)"),
    float("amplitude", 0.0, 1e6, "1", "Gaussian amplitude (profile = gaussian)"),
    float("t0", -1e6, 1e6, "0", "time shift of the data"),
    uint("log_points", 2, BIG, "256", "log-spaced mesh points"),
    uint("q_max", 0, 1 << 16, "0", "largest resonant denominator; 0 selects max(64, ceil(8 pi T))"),
];

const WEYL: &[Param] = &[
    choice("family", &["flat", "zero", "gauss"], "flat", "sequence family; gauss checks |S(2pi/q)| = sqrt(q) for q in N"),
    uints("N", 1, 1 << 20, "256", "sequence lengths (family = gauss: moduli q)"),
    uint("samples", 1, BIG, "10000", "uniform sample times on [-pi, pi]"),
    uint("q_max", 0, 1 << 12, "64", "largest denominator of the resonant times pi a/q"),
    choice("rows", &["summary", "samples"], "summary", "one row per N or one row per sample"),
];

const STRICHARTZ: &[Param] = &[
    uints("N", 1, 1 << 12, "8, 16, 32, 64, 128, 256", "dyadic frequencies"),
    Param {
        key: "p",
        kind: Kind::Float { min: 4.0, max: f64::INFINITY, open_min: true },
        default: "100",
        doc: "space-time exponent, p > 4",
    },
    float("t_lo", -1e3, 1e3, "-1", "time interval start"),
    float("t_hi", -1e3, 1e3, "1", "time interval end"),
    uint("replicates", 1, 1 << 12, "8", "random fields per N"),
];

const SOGGE: &[Param] = &[
    uints("q", 1, 1 << 16, "8, 16, 32, 64, 128, 256, 512", "eigenvalue indices"),
    float("p", 2.0, f64::INFINITY, "inf", "Lebesgue exponent, p >= 2 (inf allowed)"),
];

const CONCENTRATION: &[Param] = &[
    floats("N", 1.0, 1e6, "8, 16, 32", "cap radius 1/N"),
    uints("q", 1, 1 << 20, "8, 16, 32, 64, 128, 256, 512, 1024", "modes"),
];

const TRILINEAR: &[Param] = &[
    uints("N1", 1, 1 << 12, "8, 16, 32, 64, 128", "highest dyadic frequencies"),
    uint("N2", 1, 1 << 12, "4", "middle dyadic frequency"),
    uint("N3", 1, 1 << 12, "2", "lowest dyadic frequency"),
    float("t_lo", -1e3, 1e3, "-1", "time interval start"),
    float("t_hi", -1e3, 1e3, "1", "time interval end"),
    uint("replicates", 1, 1 << 12, "4", "random triples per N1"),
];

const HFLFI: &[Param] = &[
    uints("q", 1, 1 << 16, "16, 32, 64, 128, 256, 512", "diagonal modes p = q"),
    uints("N", 2, 1 << 16, "8, 16, 32, 64", "cap radius 2/N"),
];

const PROJECTOR_CHECK: &[Param] = &[
    uint("k_max", 1, 1 << 10, "32", "largest projected mode"),
    uint("truncation", 1, 1 << 12, "48", "modes of the random fields"),
    uint("quad_order", 64, 1 << 14, "2048", "kernel quadrature order Mq"),
    uint("fields", 1, 1 << 12, "20", "random fields"),
];

const PROFILE_COMPARE: &[Param] = &[
    uints("N", 10, 1 << 12, "64, 256", "concentration scales"),
    positive("T0", 1e3, "4", "window length, t in [0, T0/N^2]"),
    float("rho", -1.0, 1.0, "-1", "nonlinearity sign: -1, 0 or 1"),
    choice("profile", PROFILES, "reference", "radial profile"),
    positive("radius", 1e3, "2", "bump radius (profile = bump)"),
    positive("width", 1e3, "1", "Gaussian width (profile = gaussian)"),
    float("amplitude", 0.0, 1e6, "1", "Gaussian amplitude (profile = gaussian)"),
    float("R", 0.0, 1e6, "0", "cutoff radius; 0 selects N/10"),
    uint("snapshots", 1, 1 << 12, "16", "sampled times after t = 0"),
    float("k_factor", 0.0, 1e3, "0", "sphere truncation K = k_factor N; 0 selects max(8, 6 bandwidth)"),
    float("euclid_radius", 0.0, 1e6, "0", "Euclidean domain radius; 0 selects max(4R, 16 decay radius)"),
    uint("euclid_modes", 0, 1 << 16, "0", "Euclidean modes; 0 selects 8 bandwidth R_dom / pi"),
];

const BALL: &[Param] = &[
    uint("modes", 1, 1 << 12, "16", "random modes of the datum"),
    float("amplitude", 0.0, 1e6, "0.1", "scale of the random coefficients"),
    uint("K", 1, 1 << 14, "32", "spectral truncation"),
    uint("M", 0, BIG, "0", "grid order; 0 selects 3K"),
    positive("dt", 1.0, "1e-4", "time step, at most 1/(4K^2)"),
    float("rho", -1.0, 1.0, "-1", "nonlinearity sign: -1, 0 or 1"),
    float("T", 0.0, 1e6, "1", "final time"),
    uint("stride", 1, BIG, "100", "steps between snapshots"),
];

const BALL_VERIFY: &[Param] = &[
    uint("modes", 1, 1 << 12, "32", "random Dirichlet modes"),
    uint("fields", 1, 1 << 14, "100", "random data"),
    floats("t", -1e6, 1e6, "0.1, 0.37, 1.0", "evolution times"),
    uint("M", 2, BIG, "128", "grid order, above the mode count"),
];

fn schema(e: Experiment) -> &'static [Param] {
    match e {
        Experiment::Simulate => SIMULATE,
        Experiment::Extinction => EXTINCTION,
        Experiment::Weyl => WEYL,
        Experiment::Strichartz => STRICHARTZ,
        Experiment::Sogge => SOGGE,
        Experiment::Concentration => CONCENTRATION,
        Experiment::Trilinear => TRILINEAR,
        Experiment::Hflfi => HFLFI,
        Experiment::ProjectorCheck => PROJECTOR_CHECK,
        Experiment::ProfileCompare => PROFILE_COMPARE,
        Experiment::Ball => BALL,
        Experiment::BallVerify => BALL_VERIFY,
    }
}

/// A parsed parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u64),
    Float(f64),
    UIntList(Vec<u64>),
    FloatList(Vec<f64>),
    Text(String),
}

fn parse_float(raw: &str) -> Option<f64> {
    let x: f64 = raw.parse().ok()?;
    (!x.is_nan()).then_some(x)
}

fn parse_value(p: &Param, raw: &str, line: Option<usize>) -> Result<Value, HarnessError> {
    let malformed = || HarnessError::config(line, format!("malformed value {raw:?} for {}", p.key));
    let range = |shown: &str| HarnessError::config(line, format!("{} = {shown} outside {}", p.key, p.kind.describe()));
    let list = |raw: &str| -> Vec<String> {
        raw.trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    };
    let int = |s: &str, min: u64, max: u64| -> Result<u64, HarnessError> {
        let v: i128 = s.parse().map_err(|_| malformed())?;
        if v < min as i128 || v > max as i128 {
            return Err(range(s));
        }
        Ok(v as u64)
    };
    let num = |s: &str, min: f64, max: f64, open_min: bool| -> Result<f64, HarnessError> {
        let v = parse_float(s).ok_or_else(malformed)?;
        if v < min || v > max || (open_min && v == min) {
            return Err(range(s));
        }
        Ok(v)
    };
    match p.kind {
        Kind::UInt { min, max } => Ok(Value::UInt(int(raw, min, max)?)),
        Kind::Float { min, max, open_min } => Ok(Value::Float(num(raw, min, max, open_min)?)),
        Kind::UIntList { min, max } => {
            let items = list(raw);
            if items.is_empty() {
                return Err(malformed());
            }
            let mut v = items.iter().map(|s| int(s, min, max)).collect::<Result<Vec<_>, _>>()?;
            v.sort_unstable();
            v.dedup();
            Ok(Value::UIntList(v))
        }
        Kind::FloatList { min, max } => {
            let items = list(raw);
            if items.is_empty() {
                return Err(malformed());
            }
            let mut v = items.iter().map(|s| num(s, min, max, false)).collect::<Result<Vec<_>, _>>()?;
            v.sort_by(f64::total_cmp);
            v.dedup();
            Ok(Value::FloatList(v))
        }
        Kind::Choice(options) => {
            if options.contains(&raw) {
                Ok(Value::Text(raw.to_string()))
            } else {
                Err(HarnessError::config(line, format!("{} = {raw:?} is not {}", p.key, p.kind.describe())))
            }
        }
    }
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub out: Option<PathBuf>,
    params: BTreeMap<&'static str, Value>,
    lines: BTreeMap<&'static str, usize>,
}

pub const DEFAULT_SEED: u64 = 1;

impl ExperimentConfig {
    /// All keys at their defaults.
    pub fn defaults(experiment: Experiment) -> Self {
        let params = schema(experiment)
            .iter()
            .map(|p| (p.key, parse_value(p, p.default, None).expect("schema defaults parse")))
            .collect();
        Self { experiment, seed: DEFAULT_SEED, out: None, params, lines: BTreeMap::new() }
    }

    /// Sets `key` from its textual value; `line` is reported in errors.
    pub fn set(&mut self, key: &str, raw: &str, line: Option<usize>) -> Result<(), HarnessError> {
        let raw = raw.trim();
        match key {
            "seed" => {
                self.seed = raw
                    .parse()
                    .map_err(|_| HarnessError::config(line, format!("seed = {raw:?} is not a 64-bit unsigned integer")))?;
                return Ok(());
            }
            "out" => {
                if raw.is_empty() {
                    return Err(HarnessError::config(line, "empty output path"));
                }
                self.out = Some(PathBuf::from(raw));
                return Ok(());
            }
            "experiment" => {
                return match Experiment::from_name(raw) {
                    Some(e) if e == self.experiment => Ok(()),
                    Some(e) => Err(HarnessError::config(
                        line,
                        format!("config names experiment {e} but {} was requested", self.experiment),
                    )),
                    None => Err(HarnessError::config(line, format!("unknown experiment {raw:?}"))),
                };
            }
            _ => {}
        }
        let Some(p) = schema(self.experiment).iter().find(|p| p.key == key) else {
            return Err(HarnessError::config(line, format!("unknown key {key:?} for experiment {}", self.experiment)));
        };
        let value = parse_value(p, raw, line)?;
        self.params.insert(p.key, value);
        match line {
            Some(l) => self.lines.insert(p.key, l),
            None => self.lines.remove(p.key),
        };
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.params.get(key)
    }

    /// Line of `key` in the parsed text, when it was set there.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.lines.get(key).copied()
    }

    pub(crate) fn uint(&self, key: &str) -> u64 {
        match self.params.get(key) {
            Some(Value::UInt(v)) => *v,
            other => panic!("{key} is not an integer parameter: {other:?}"),
        }
    }

    pub(crate) fn usize(&self, key: &str) -> usize {
        self.uint(key) as usize
    }

    pub(crate) fn float(&self, key: &str) -> f64 {
        match self.params.get(key) {
            Some(Value::Float(v)) => *v,
            other => panic!("{key} is not a numeric parameter: {other:?}"),
        }
    }

    pub(crate) fn uints(&self, key: &str) -> &[u64] {
        match self.params.get(key) {
            Some(Value::UIntList(v)) => v,
            other => panic!("{key} is not an integer list: {other:?}"),
        }
    }

    pub(crate) fn floats(&self, key: &str) -> &[f64] {
        match self.params.get(key) {
            Some(Value::FloatList(v)) => v,
            other => panic!("{key} is not a numeric list: {other:?}"),
        }
    }

    pub(crate) fn text(&self, key: &str) -> &str {
        match self.params.get(key) {
            Some(Value::Text(v)) => v,
            other => panic!("{key} is not a choice parameter: {other:?}"),
        }
    }
}

fn apply_text(cfg: &mut ExperimentConfig, text: &str) -> Result<(), HarnessError> {
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(HarnessError::config(Some(line), format!("expected `key = value`, found {content:?}")));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(HarnessError::config(Some(line), "missing key before `=`"));
        }
        cfg.set(key, value, Some(line))?;
    }
    Ok(())
}

fn experiment_line(text: &str) -> Result<Option<Experiment>, HarnessError> {
    for (i, raw_line) in text.lines().enumerate() {
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if let Some((key, value)) = content.split_once('=') {
            if key.trim() == "experiment" {
                let name = value.trim();
                return Experiment::from_name(name)
                    .map(Some)
                    .ok_or_else(|| HarnessError::config(Some(i + 1), format!("unknown experiment {name:?}")));
            }
        }
    }
    Ok(None)
}

/// Parses a configuration naming its experiment with `experiment = name`.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    let experiment = experiment_line(text)?
        .ok_or_else(|| HarnessError::config(None, "no `experiment = name` line and no experiment given"))?;
    parse_config_for(text, experiment)
}

/// Parses a configuration for `experiment`; unspecified keys keep their
/// defaults.
pub fn parse_config_for(text: &str, experiment: Experiment) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::defaults(experiment);
    apply_text(&mut cfg, text)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for e in Experiment::ALL {
            assert_eq!(Experiment::from_name(e.name()), Some(e));
            assert!(!e.params().is_empty());
        }
        assert_eq!(Experiment::from_name("nope"), None);
    }

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config_for("", Experiment::Simulate).unwrap();
        assert_eq!(cfg, ExperimentConfig::defaults(Experiment::Simulate));
        assert_eq!(cfg.uint("K"), 64);
    }

    #[test]
    fn fields_set() {
        let cfg = parse_config_for("K = 128\ndt = 1e-5", Experiment::Simulate).unwrap();
        assert_eq!(cfg.uint("K"), 128);
        assert_eq!(cfg.float("dt"), 1e-5);
        assert_eq!(cfg.line_of("dt"), Some(2));
    }

    #[test]
    fn range_violation_names_key() {
        let err = parse_config_for("K = -4", Experiment::Simulate).unwrap_err();
        let HarnessError::Config { line, message } = &err else { panic!("{err:?}") };
        assert_eq!(*line, Some(1));
        assert!(message.contains('K'), "{message}");
        assert!(message.contains("outside"), "{message}");
    }

    #[test]
    fn unknown_key_and_malformed_line() {
        let err = parse_config_for("# comment\n\nbogus = 3", Experiment::Weyl).unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: Some(3), .. }), "{err:?}");
        let err = parse_config_for("K 128", Experiment::Simulate).unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: Some(1), .. }));
        let err = parse_config_for("dt = fast", Experiment::Simulate).unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: Some(1), .. }));
        let err = parse_config_for("dt = 0", Experiment::Simulate).unwrap_err();
        assert!(matches!(err, HarnessError::Config { line: Some(1), .. }));
    }

    #[test]
    fn lists_comments_and_experiment_line() {
        let cfg = parse_config("experiment = weyl # flat family\nN = [512, 64, 64]\nseed = 9\nout = a.csv").unwrap();
        assert_eq!(cfg.experiment, Experiment::Weyl);
        assert_eq!(cfg.uints("N"), &[64, 512]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.out, Some(PathBuf::from("a.csv")));
        assert!(parse_config("N = 4").is_err());
        assert!(parse_config_for("experiment = sogge", Experiment::Weyl).is_err());
        let sogge = parse_config_for("p = inf", Experiment::Sogge).unwrap();
        assert!(sogge.float("p").is_infinite());
    }
}
