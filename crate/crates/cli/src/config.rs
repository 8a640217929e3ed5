//! Experiment configuration files.
//!
//! The format is a flat, sectioned `key = value` text:
//!
//! ```text
//! # comments start with '#' or ';'
//! [run]
//! seed = 1
//! reps = 10
//! out = results/gmm
//! timing = false
//!
//! [model]
//! name = gmm
//! alpha = 0.55
//! points = 1000
//!
//! [algo.em]
//! name = em
//! horizon = 300
//! theta0 = -2
//!
//! [algo.smcs-prior]
//! name = smcs-lvm
//! gamma = 0.05
//! kernel = prior
//! ```
//!
//! Sections are `[run]`, `[model]` and one or more `[algo]` / `[algo.LABEL]`.
//! Keys may appear once per section, lists are comma separated and every
//! error carries the 1-based line it refers to. Keys left out take the
//! defaults listed in the README; [`ExperimentConfig::to_text`] writes every
//! key explicitly so the echo parses back to an equal configuration.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

// ------------------------------------------------------------------ syntax

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn parse_opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .or_else(|m| err(e.line, format!("bad value {:?} for `{key}`: {m}", e.value))),
        }
    }

    fn parse_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: Display,
    {
        Ok(self.parse_opt(key)?.unwrap_or(default))
    }

    fn list_opt(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => parse_list(&e.value)
                .map(Some)
                .or_else(|m| err(e.line, format!("bad list {:?} for `{key}`: {m}", e.value))),
        }
    }

    fn required(&mut self, key: &str) -> Result<Entry, ConfigError> {
        self.take(key).map_or_else(|| err(self.line, format!("[{}] needs `{key}`", self.name)), Ok)
    }

    /// Fails on the first key nobody consumed.
    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.iter().min_by_key(|(_, e)| e.line) {
            Some((k, e)) => err(e.line, format!("unknown key `{k}` in [{}]", self.name)),
            None => Ok(()),
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{:?}: {e}", s.trim())))
        .collect()
}

fn format_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn tokenize(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(line, format!("unterminated section header {s:?}"));
            };
            let name = name.trim();
            if name.is_empty() {
                return err(line, "empty section name");
            }
            if sections.iter().any(|sec| sec.name == name) {
                return err(line, format!("section [{name}] appears twice"));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let Some((key, value)) = s.split_once('=') else {
            return err(line, format!("expected `key = value`, found {s:?}"));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return err(line, "missing key before `=`");
        }
        let Some(section) = sections.last_mut() else {
            return err(line, format!("`{key}` appears before any section header"));
        };
        if section.entries.contains_key(key) {
            return err(line, format!("`{key}` repeated in [{}]", section.name));
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(sections)
}

// ------------------------------------------------------------------- model

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    /// The bundled karate-club network with its two-faction labels.
    Karate,
    /// An edge-list file, 0-indexed `i j` per line.
    File(PathBuf),
    /// A graph drawn from the block model itself.
    Simulated { nodes: usize, p: Vec<f64>, nu: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Toy { dim: usize, theta: f64 },
    Gmm { points: usize, alpha: f64, theta: f64 },
    Multimodal { data: Vec<f64>, shape: f64, rate: f64 },
    Blr { points: usize, theta: Vec<f64> },
    Sbm { graph: GraphSource, blocks: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSection {
    pub spec: ModelSpec,
    /// Seed of the data-generating stream, shared by every replication.
    pub data_seed: u64,
    /// Reference parameter for the MSE column. Defaults to the model's own
    /// reference (data-generating value or known maximizer) when it has one.
    pub truth: Option<Vec<f64>>,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Toy { .. } => "toy",
            Self::Gmm { .. } => "gmm",
            Self::Multimodal { .. } => "multimodal",
            Self::Blr { .. } => "blr",
            Self::Sbm { .. } => "sbm",
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Gmm { .. } | Self::Sbm { .. })
    }

    pub fn theta_dim(&self) -> usize {
        match self {
            Self::Blr { theta, .. } => theta.len(),
            Self::Sbm { blocks, .. } => blocks + blocks * (blocks + 1) / 2,
            _ => 1,
        }
    }
}

fn parse_model(mut s: Section) -> Result<ModelSection, ConfigError> {
    let name = s.required("name")?;
    let data_seed = s.parse_or("data_seed", 0u64)?;
    let truth = s.list_opt("truth")?;
    let spec = match name.value.as_str() {
        "toy" => ModelSpec::Toy {
            dim: s.parse_or("dim", 50)?,
            theta: s.parse_or("theta", 1.0)?,
        },
        "gmm" => ModelSpec::Gmm {
            points: s.parse_or("points", 1000)?,
            alpha: s.parse_or("alpha", 0.5)?,
            theta: s.parse_or("theta", 1.0)?,
        },
        "multimodal" => ModelSpec::Multimodal {
            data: s.list_opt("data")?.unwrap_or_else(|| vec![-20.0, 1.0, 2.0, 3.0]),
            shape: s.parse_or("shape", 0.525)?,
            rate: s.parse_or("rate", 0.025)?,
        },
        "blr" => ModelSpec::Blr {
            points: s.parse_or("points", 900)?,
            theta: s.list_opt("theta")?.unwrap_or_else(|| vec![2.0, 3.0, 4.0]),
        },
        "sbm" => {
            let graph = match s.take("graph") {
                None => return err(s.line, "[model] sbm needs `graph` (karate, simulated or a file path)"),
                Some(e) => match e.value.as_str() {
                    "karate" => GraphSource::Karate,
                    "simulated" => GraphSource::Simulated {
                        nodes: s.parse_or("nodes", 100)?,
                        p: s.list_opt("p")?.unwrap_or_else(|| vec![0.6, 0.4]),
                        nu: s.list_opt("nu")?.unwrap_or_else(|| vec![0.25, 0.1, 0.1, 0.2]),
                    },
                    path => GraphSource::File(PathBuf::from(path)),
                },
            };
            let default_blocks = match &graph {
                GraphSource::Simulated { p, .. } => p.len(),
                _ => 2,
            };
            ModelSpec::Sbm {
                graph,
                blocks: s.parse_or("blocks", default_blocks)?,
            }
        }
        other => return err(name.line, format!("unknown model `{other}`")),
    };
    if let Some(t) = &truth {
        if t.len() != spec.theta_dim() {
            return err(s.line, format!("`truth` has {} entries but theta has {}", t.len(), spec.theta_dim()));
        }
    }
    let line = s.line;
    s.finish()?;
    validate_model(&spec, line)?;
    Ok(ModelSection { spec, data_seed, truth })
}

fn validate_model(spec: &ModelSpec, line: usize) -> Result<(), ConfigError> {
    match spec {
        ModelSpec::Toy { dim, .. } if *dim == 0 => err(line, "toy `dim` must be positive"),
        ModelSpec::Gmm { points, alpha, .. } if *points == 0 || !(*alpha > 0.0 && *alpha < 1.0) => {
            err(line, "gmm needs `points` >= 1 and `alpha` in (0, 1)")
        }
        ModelSpec::Multimodal { data, shape, rate } if data.is_empty() || !(*shape > 0.0 && *rate > 0.0) => {
            err(line, "multimodal needs data and positive `shape` and `rate`")
        }
        ModelSpec::Blr { points, theta } if *points == 0 || theta.is_empty() => {
            err(line, "blr needs `points` >= 1 and a non-empty `theta`")
        }
        ModelSpec::Sbm { blocks, graph } => {
            if *blocks < 2 {
                return err(line, "sbm needs `blocks` >= 2");
            }
            if let GraphSource::Simulated { p, nu, nodes } = graph {
                if p.len() != *blocks || nu.len() != blocks * blocks || *nodes < 2 {
                    return err(line, "simulated sbm needs `p` with `blocks` entries and a full `nu` matrix");
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn write_model(m: &ModelSection, out: &mut String) {
    out.push_str("[model]\n");
    out.push_str(&format!("name = {}\n", m.spec.name()));
    match &m.spec {
        ModelSpec::Toy { dim, theta } => out.push_str(&format!("dim = {dim}\ntheta = {theta}\n")),
        ModelSpec::Gmm { points, alpha, theta } => {
            out.push_str(&format!("points = {points}\nalpha = {alpha}\ntheta = {theta}\n"))
        }
        ModelSpec::Multimodal { data, shape, rate } => {
            out.push_str(&format!("data = {}\nshape = {shape}\nrate = {rate}\n", format_list(data)))
        }
        ModelSpec::Blr { points, theta } => {
            out.push_str(&format!("points = {points}\ntheta = {}\n", format_list(theta)))
        }
        ModelSpec::Sbm { graph, blocks } => {
            match graph {
                GraphSource::Karate => out.push_str("graph = karate\n"),
                GraphSource::File(p) => out.push_str(&format!("graph = {}\n", p.display())),
                GraphSource::Simulated { nodes, p, nu } => out.push_str(&format!(
                    "graph = simulated\nnodes = {nodes}\np = {}\nnu = {}\n",
                    format_list(p),
                    format_list(nu)
                )),
            }
            out.push_str(&format!("blocks = {blocks}\n"));
        }
    }
    out.push_str(&format!("data_seed = {}\n", m.data_seed));
    if let Some(t) = &m.truth {
        out.push_str(&format!("truth = {}\n", format_list(t)));
    }
}

// --------------------------------------------------------------- algorithms

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    MdLvm,
    SmcsLvm,
    Em,
    Saem,
    Pgd,
    Ipla,
    SmcMml,
}

impl AlgorithmKind {
    const ALL: [Self; 7] = [
        Self::MdLvm,
        Self::SmcsLvm,
        Self::Em,
        Self::Saem,
        Self::Pgd,
        Self::Ipla,
        Self::SmcMml,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::MdLvm => "md-lvm",
            Self::SmcsLvm => "smcs-lvm",
            Self::Em => "em",
            Self::Saem => "saem",
            Self::Pgd => "pgd",
            Self::Ipla => "ipla",
            Self::SmcMml => "smc-mml",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorKind {
    SquaredNorm,
    LogBarrier,
    Entropy,
}

impl MirrorKind {
    fn name(&self) -> &'static str {
        match self {
            Self::SquaredNorm => "squared-norm",
            Self::LogBarrier => "log-barrier",
            Self::Entropy => "entropy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelChoice {
    /// Random walk Metropolis with the adapted full covariance.
    Rwm,
    /// Random walk Metropolis with the adapted diagonal covariance.
    RwmDiagonal,
    /// Single-site Metropolis, uniform category proposal.
    Uniform,
    /// Single-site Metropolis, the model's own category law as proposal.
    Prior,
}

impl KernelChoice {
    fn name(&self) -> &'static str {
        match self {
            Self::Rwm => "rwm",
            Self::RwmDiagonal => "rwm-diagonal",
            Self::Uniform => "uniform",
            Self::Prior => "prior",
        }
    }

    fn is_discrete(&self) -> bool {
        matches!(self, Self::Uniform | Self::Prior)
    }
}

fn parse_named<T: Copy>(entry: &Entry, key: &str, table: &[(T, &str)]) -> Result<T, ConfigError> {
    table
        .iter()
        .find(|(_, n)| *n == entry.value)
        .map(|(v, _)| *v)
        .map_or_else(
            || {
                let names: Vec<&str> = table.iter().map(|(_, n)| *n).collect();
                err(entry.line, format!("`{key}` must be one of {names:?}, found {:?}", entry.value))
            },
            Ok,
        )
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    pub label: String,
    pub kind: AlgorithmKind,
    pub schedule: ScheduleKind,
    /// Step size of the constant schedule (ignored by `harmonic`).
    pub gamma: f64,
    /// Iterations; rungs of the ladder for `smc-mml`.
    pub horizon: usize,
    pub particles: usize,
    pub mirror: MirrorKind,
    pub kernel: KernelChoice,
    pub mcmc_steps: usize,
    pub theta0: Vec<f64>,
    pub stop_threshold: Option<f64>,
    /// Box of the flat parameter prior of `smc-mml`.
    pub theta_lo: f64,
    pub theta_hi: f64,
}

fn default_theta0(model: &ModelSpec) -> Vec<f64> {
    match model {
        ModelSpec::Gmm { .. } => vec![-2.0],
        ModelSpec::Sbm { .. } => vec![0.3; model.theta_dim()],
        _ => vec![0.0; model.theta_dim()],
    }
}

fn parse_algorithm(mut s: Section, model: &ModelSpec) -> Result<AlgorithmSpec, ConfigError> {
    let label = s.name.strip_prefix("algo.").unwrap_or(&s.name).to_string();
    let name = s.required("name")?;
    let table: Vec<(AlgorithmKind, &str)> = AlgorithmKind::ALL.iter().map(|k| (*k, k.name())).collect();
    let kind = parse_named(&name, "name", &table)?;
    let schedule = match s.take("schedule") {
        None if kind == AlgorithmKind::Saem => ScheduleKind::Harmonic,
        None => ScheduleKind::Constant,
        Some(e) => parse_named(&e, "schedule", &[(ScheduleKind::Constant, "constant"), (ScheduleKind::Harmonic, "harmonic")])?,
    };
    let mirror = match s.take("mirror") {
        None if matches!(model, ModelSpec::Sbm { .. }) => MirrorKind::LogBarrier,
        None => MirrorKind::SquaredNorm,
        Some(e) => parse_named(
            &e,
            "mirror",
            &[
                (MirrorKind::SquaredNorm, MirrorKind::SquaredNorm.name()),
                (MirrorKind::LogBarrier, MirrorKind::LogBarrier.name()),
                (MirrorKind::Entropy, MirrorKind::Entropy.name()),
            ],
        )?,
    };
    let kernel_line = s.entries.get("kernel").map_or(s.line, |e| e.line);
    let kernel = match s.take("kernel") {
        None if model.is_discrete() => KernelChoice::Uniform,
        None => KernelChoice::Rwm,
        Some(e) => parse_named(
            &e,
            "kernel",
            &[KernelChoice::Rwm, KernelChoice::RwmDiagonal, KernelChoice::Uniform, KernelChoice::Prior]
                .map(|k| (k, k.name())),
        )?,
    };
    if kernel.is_discrete() != model.is_discrete() {
        return err(
            kernel_line,
            format!("kernel `{}` does not match the {} model's latent space", kernel.name(), model.name()),
        );
    }
    let theta0_line = s.entries.get("theta0").map_or(s.line, |e| e.line);
    let theta0 = s.list_opt("theta0")?.unwrap_or_else(|| default_theta0(model));
    if theta0.len() != model.theta_dim() {
        return err(
            theta0_line,
            format!("`theta0` has {} entries but the model has {}", theta0.len(), model.theta_dim()),
        );
    }
    let gamma_line = s.entries.get("gamma").map_or(s.line, |e| e.line);
    let spec = AlgorithmSpec {
        label,
        kind,
        schedule,
        gamma: s.parse_or("gamma", 0.01)?,
        horizon: s.parse_or("horizon", 100)?,
        particles: s.parse_or("particles", 100)?,
        mirror,
        kernel,
        mcmc_steps: s.parse_or("mcmc_steps", 1)?,
        theta0,
        stop_threshold: s.parse_opt("stop_threshold")?,
        theta_lo: s.parse_or("theta_lo", -30.0)?,
        theta_hi: s.parse_or("theta_hi", 30.0)?,
    };
    if !(spec.gamma > 0.0 && spec.gamma <= 1.0) {
        return err(gamma_line, format!("`gamma` must lie in (0, 1], found {}", spec.gamma));
    }
    if spec.mcmc_steps == 0 || spec.particles == 0 {
        return err(s.line, "`particles` and `mcmc_steps` must be positive");
    }
    if spec.theta_lo.partial_cmp(&spec.theta_hi) != Some(std::cmp::Ordering::Less) {
        return err(s.line, "`theta_lo` must be below `theta_hi`");
    }
    s.finish()?;
    Ok(spec)
}

fn write_algorithm(a: &AlgorithmSpec, out: &mut String) {
    out.push_str(&format!("[algo.{}]\n", a.label));
    out.push_str(&format!("name = {}\n", a.kind.name()));
    let schedule = match a.schedule {
        ScheduleKind::Constant => "constant",
        ScheduleKind::Harmonic => "harmonic",
    };
    out.push_str(&format!("schedule = {schedule}\ngamma = {}\n", a.gamma));
    out.push_str(&format!("horizon = {}\nparticles = {}\n", a.horizon, a.particles));
    out.push_str(&format!("mirror = {}\nkernel = {}\n", a.mirror.name(), a.kernel.name()));
    out.push_str(&format!("mcmc_steps = {}\ntheta0 = {}\n", a.mcmc_steps, format_list(&a.theta0)));
    if let Some(t) = a.stop_threshold {
        out.push_str(&format!("stop_threshold = {t}\n"));
    }
    out.push_str(&format!("theta_lo = {}\ntheta_hi = {}\n", a.theta_lo, a.theta_hi));
}

// -------------------------------------------------------------- experiment

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub seed: u64,
    pub reps: usize,
    pub out: PathBuf,
    /// Write measured wall-clock times into trace.csv. Off by default so
    /// that traces are byte-identical across runs.
    pub timing: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 0,
            reps: 1,
            out: PathBuf::from("out"),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub model: ModelSection,
    pub algorithms: Vec<AlgorithmSpec>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut run = None;
        let mut model = None;
        let mut algos = Vec::new();
        for s in tokenize(text)? {
            match s.name.as_str() {
                "run" => run = Some(s),
                "model" => model = Some(s),
                n if n == "algo" || n.starts_with("algo.") => {
                    if n == "algo." {
                        return err(s.line, "empty algorithm label");
                    }
                    algos.push(s)
                }
                n => return err(s.line, format!("unknown section [{n}]")),
            }
        }
        let run = match run {
            None => RunSection::default(),
            Some(mut s) => {
                let d = RunSection::default();
                let parsed = RunSection {
                    seed: s.parse_or("seed", d.seed)?,
                    reps: s.parse_or("reps", d.reps)?,
                    out: s.take("out").map_or(d.out, |e| PathBuf::from(e.value)),
                    timing: s.parse_or("timing", d.timing)?,
                };
                if parsed.reps == 0 {
                    return err(s.line, "`reps` must be at least 1");
                }
                s.finish()?;
                parsed
            }
        };
        let Some(model) = model else {
            return err(0, "missing [model] section");
        };
        let model = parse_model(model)?;
        if algos.is_empty() {
            return err(0, "no [algo] section");
        }
        let algorithms = algos
            .into_iter()
            .map(|s| parse_algorithm(s, &model.spec))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, a) in algorithms.iter().enumerate() {
            if algorithms[..i].iter().any(|b| b.label == a.label) {
                return err(0, format!("algorithm label `{}` used twice", a.label));
            }
        }
        Ok(Self { run, model, algorithms })
    }

    /// Every setting spelled out, in a form [`ExperimentConfig::parse`]
    /// reads back to an equal value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("[run]\n");
        out.push_str(&format!(
            "seed = {}\nreps = {}\nout = {}\ntiming = {}\n\n",
            self.run.seed,
            self.run.reps,
            self.run.out.display(),
            self.run.timing
        ));
        write_model(&self.model, &mut out);
        for a in &self.algorithms {
            out.push('\n');
            write_algorithm(a, &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GMM: &str = "\
[run]
seed = 3
reps = 2

[model]
name = gmm
alpha = 0.55

[algo.em]
name = em
horizon = 300

[algo.smcs]
name = smcs-lvm
gamma = 0.05
kernel = prior
";

    #[test]
    fn parses_defaults_and_labels() {
        let c = ExperimentConfig::parse(GMM).unwrap();
        assert_eq!(c.run.seed, 3);
        assert_eq!(c.run.out, PathBuf::from("out"));
        assert_eq!(c.algorithms.len(), 2);
        assert_eq!(c.algorithms[0].label, "em");
        assert_eq!(c.algorithms[0].theta0, vec![-2.0]);
        assert_eq!(c.algorithms[1].kernel, KernelChoice::Prior);
        assert_eq!(c.algorithms[1].gamma, 0.05);
    }

    #[test]
    fn echo_round_trips() {
        let c = ExperimentConfig::parse(GMM).unwrap();
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn errors_point_at_lines() {
        let cases = [
            ("[model]\nname = toy\nbogus = 1\n[algo]\nname = md-lvm\n", 3),
            ("[model]\nname = toy\n[algo]\nname = md-lvm\ngamma = 1.5\n", 5),
            ("[model]\nname = toy\n[algo]\nname = md-lvm\nkernel = uniform\n", 5),
            ("[model]\nname = toy\n[algo]\nname = md-lvm\nmcmc_steps = x\n", 5),
            ("[model]\nname = toy\nname = gmm\n", 3),
            ("name = toy\n", 1),
            ("[model\n", 1),
            ("[model]\nname toy\n", 2),
            ("[model]\nname = nope\n[algo]\nname = em\n", 2),
            ("[model]\nname = toy\n[algo]\nname = em\ntheta0 = 1, 2\n", 5),
        ];
        for (text, line) in cases {
            let e = ExperimentConfig::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?} gave {e}");
        }
    }

    #[test]
    fn missing_sections() {
        assert!(ExperimentConfig::parse("[run]\nseed = 1\n").unwrap_err().message.contains("[model]"));
        assert!(ExperimentConfig::parse("[model]\nname = toy\n").unwrap_err().message.contains("[algo]"));
    }

    #[test]
    fn sbm_defaults_to_log_barrier_and_uniform_moves() {
        let c = ExperimentConfig::parse("[model]\nname = sbm\ngraph = karate\n[algo]\nname = smcs-lvm\n").unwrap();
        let a = &c.algorithms[0];
        assert_eq!((a.mirror, a.kernel), (MirrorKind::LogBarrier, KernelChoice::Uniform));
        assert_eq!(a.theta0, vec![0.3; 5]);
    }
}
