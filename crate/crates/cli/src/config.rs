//! Command-line and config-file ingestion.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;
use qxcorr_core::{HamiltonianParams, SweepVariable, XStateParams};

use crate::CliError;

/// Smallest temperature accepted by `eval` and `sweep`.
pub const TEMPERATURE_FLOOR: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SWEEP_POINTS: usize = 300;

#[derive(Debug, Parser, Default)]
#[command(name = "qxcorr", version, about = "LQFI and LQU of thermal two-qubit X states")]
pub struct Args {
    /// eval | sweep | transitions | selftest
    #[arg(long)]
    pub mode: Option<String>,
    /// Line-oriented `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long = "Jx", allow_hyphen_values = true)]
    pub jx: Option<String>,
    #[arg(long = "Jy", allow_hyphen_values = true)]
    pub jy: Option<String>,
    #[arg(long = "Jz", allow_hyphen_values = true)]
    pub jz: Option<String>,
    /// Dzyaloshinsky–Moriya coupling
    #[arg(long = "Dz", allow_hyphen_values = true)]
    pub dz: Option<String>,
    /// KSEA coupling
    #[arg(long = "Gz", allow_hyphen_values = true)]
    pub gz: Option<String>,
    #[arg(long = "B1", allow_hyphen_values = true)]
    pub b1: Option<String>,
    #[arg(long = "B2", allow_hyphen_values = true)]
    pub b2: Option<String>,
    #[arg(long = "r1", allow_hyphen_values = true)]
    pub r1: Option<String>,
    #[arg(long = "r2", allow_hyphen_values = true)]
    pub r2: Option<String>,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Evaluate the zero-temperature limits instead of a finite T (eval only).
    #[arg(long = "T0")]
    pub t0: bool,

    /// Swept parameter: T, B1, B2, r1, r2 or Jz
    #[arg(long)]
    pub var: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    #[arg(long)]
    pub points: Option<String>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | tsv
    #[arg(long)]
    pub format: Option<String>,
    /// Also write a gnuplot script next to the output file.
    #[arg(long = "plot-script")]
    pub plot_script: bool,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    pub jobs: Option<String>,
    /// Seed for the selftest sample.
    #[arg(long)]
    pub seed: Option<String>,
}

const KNOWN_KEYS: &[&str] = &[
    "mode", "Jx", "Jy", "Jz", "Dz", "Gz", "B1", "B2", "r1", "r2", "T", "T0", "var", "from", "to", "points", "out",
    "format", "plot_script", "jobs", "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Eval,
    Sweep,
    Transitions,
    SelfTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

/// Model parameters without the temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSet {
    Reduced { jz: f64, r1: f64, r2: f64, b1: f64, b2: f64 },
    Full(HamiltonianParams),
}

impl ParamSet {
    /// Reduced parameters at temperature `t`, without validating `t`.
    pub fn at(&self, t: f64) -> XStateParams {
        match *self {
            ParamSet::Reduced { jz, r1, r2, b1, b2 } => XStateParams { jz, r1, r2, b1, b2, t },
            ParamSet::Full(h) => {
                let r = h.radii();
                XStateParams { jz: h.jz, r1: r.r1, r2: r.r2, b1: h.b1, b2: h.b2, t }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Absent only in selftest mode.
    pub params: Option<ParamSet>,
    pub t: Option<f64>,
    pub zero_t: bool,
    pub range: Option<Range>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot_script: bool,
    pub jobs: Option<usize>,
    pub seed: u64,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

fn overlay(map: &mut BTreeMap<String, String>, args: &Args) {
    let mut set = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            map.insert(k.to_string(), v.clone());
        }
    };
    set("mode", &args.mode);
    set("Jx", &args.jx);
    set("Jy", &args.jy);
    set("Jz", &args.jz);
    set("Dz", &args.dz);
    set("Gz", &args.gz);
    set("B1", &args.b1);
    set("B2", &args.b2);
    set("r1", &args.r1);
    set("r2", &args.r2);
    set("T", &args.t);
    set("var", &args.var);
    set("from", &args.from);
    set("to", &args.to);
    set("points", &args.points);
    set("format", &args.format);
    set("jobs", &args.jobs);
    set("seed", &args.seed);
    if let Some(out) = &args.out {
        map.insert("out".into(), out.display().to_string());
    }
    if args.t0 {
        map.insert("T0".into(), "true".into());
    }
    if args.plot_script {
        map.insert("plot_script".into(), "true".into());
    }
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn has(&self, k: &str) -> bool {
        self.0.contains_key(k)
    }

    fn float(&self, k: &str) -> Result<Option<f64>, CliError> {
        self.0
            .get(k)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Config(format!("`{k}`: malformed number `{v}`")))
            })
            .transpose()
    }

    fn float_or(&self, k: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.float(k)?.unwrap_or(default))
    }

    fn required(&self, k: &str) -> Result<f64, CliError> {
        self.float(k)?.ok_or_else(|| CliError::Config(format!("missing `{k}`")))
    }

    fn integer<I: std::str::FromStr>(&self, k: &str) -> Result<Option<I>, CliError> {
        self.0
            .get(k)
            .map(|v| v.parse::<I>().map_err(|_| CliError::Config(format!("`{k}`: malformed integer `{v}`"))))
            .transpose()
    }

    fn flag(&self, k: &str) -> Result<bool, CliError> {
        match self.0.get(k).map(String::as_str) {
            None | Some("false") | Some("0") | Some("no") => Ok(false),
            Some("true") | Some("1") | Some("yes") | Some("") => Ok(true),
            Some(v) => Err(CliError::Config(format!("`{k}`: expected true or false, got `{v}`"))),
        }
    }
}

fn param_set(e: &Entries) -> Result<ParamSet, CliError> {
    let full_keys = ["Jx", "Jy", "Dz", "Gz"].into_iter().filter(|k| e.has(k)).collect::<Vec<_>>();
    let reduced_keys = ["r1", "r2"].into_iter().filter(|k| e.has(k)).collect::<Vec<_>>();
    match (full_keys.is_empty(), reduced_keys.is_empty()) {
        (false, false) => Err(CliError::Config(format!(
            "conflicting parameter sets: {} with {}",
            reduced_keys.join(", "),
            full_keys.join(", ")
        ))),
        (false, true) => Ok(ParamSet::Full(HamiltonianParams {
            jx: e.required("Jx")?,
            jy: e.required("Jy")?,
            jz: e.required("Jz")?,
            dz: e.float_or("Dz", 0.0)?,
            gz: e.float_or("Gz", 0.0)?,
            b1: e.float_or("B1", 0.0)?,
            b2: e.float_or("B2", 0.0)?,
        })),
        _ => Ok(ParamSet::Reduced {
            jz: e.required("Jz")?,
            r1: e.required("r1")?,
            r2: e.required("r2")?,
            b1: e.float_or("B1", 0.0)?,
            b2: e.float_or("B2", 0.0)?,
        }),
    }
}

/// Merges the optional config file with the flags (flags win) and checks
/// that the result is a complete, consistent run description.
pub fn parse_config(args: &Args, file_text: Option<&str>) -> Result<RunConfig, CliError> {
    let mut map = match file_text {
        Some(text) => parse_config_text(text)?,
        None => BTreeMap::new(),
    };
    overlay(&mut map, args);
    let e = Entries(map);

    let mode = match e.0.get("mode").map(String::as_str) {
        None => return Err(CliError::Usage("missing --mode (eval, sweep, transitions or selftest)".into())),
        Some("eval") => Mode::Eval,
        Some("sweep") => Mode::Sweep,
        Some("transitions") => Mode::Transitions,
        Some("selftest") => Mode::SelfTest,
        Some(m) => return Err(CliError::Usage(format!("unknown mode `{m}`"))),
    };
    let format = match e.0.get("format").map(String::as_str) {
        None | Some("csv") => Format::Csv,
        Some("tsv") => Format::Tsv,
        Some(f) => return Err(CliError::Config(format!("unknown format `{f}`"))),
    };
    let jobs = e.integer::<usize>("jobs")?;
    if jobs == Some(0) {
        return Err(CliError::Config("`jobs` must be at least 1".into()));
    }
    let seed = e.integer::<u64>("seed")?.unwrap_or(DEFAULT_SEED);
    let zero_t = e.flag("T0")?;
    let plot_script = e.flag("plot_script")?;
    let out = e.0.get("out").map(PathBuf::from);
    let t = e.float("T")?;

    if zero_t && mode != Mode::Eval {
        return Err(CliError::Config("`T0` is only available in eval mode".into()));
    }
    if zero_t && t.is_some() {
        return Err(CliError::Config("`T0` and `T` are mutually exclusive".into()));
    }
    if plot_script && (mode != Mode::Sweep || out.is_none()) {
        return Err(CliError::Config("`plot-script` needs sweep mode and an output file".into()));
    }

    let params = if mode == Mode::SelfTest { None } else { Some(param_set(&e)?) };

    let range = match mode {
        Mode::Sweep | Mode::Transitions => {
            let name = e.0.get("var").ok_or_else(|| CliError::Config("missing `var`".into()))?;
            let variable = name.parse::<SweepVariable>().map_err(|err| CliError::Config(err.to_string()))?;
            if matches!(variable, SweepVariable::R1 | SweepVariable::R2)
                && matches!(params, Some(ParamSet::Full(_)))
            {
                return Err(CliError::Config(format!("cannot sweep `{variable}` with full Hamiltonian parameters")));
            }
            let default_points =
                if mode == Mode::Sweep { DEFAULT_SWEEP_POINTS } else { qxcorr_core::analysis::DEFAULT_TRANSITION_POINTS };
            Some(Range {
                variable,
                from: e.required("from")?,
                to: e.required("to")?,
                points: e.integer::<usize>("points")?.unwrap_or(default_points),
            })
        }
        _ => None,
    };

    let needs_t = match mode {
        Mode::Eval => !zero_t,
        Mode::Sweep | Mode::Transitions => range.is_some_and(|r| r.variable != SweepVariable::T),
        Mode::SelfTest => false,
    };
    if needs_t && t.is_none() {
        return Err(CliError::Config("missing `T` (or `T0` in eval mode)".into()));
    }

    Ok(RunConfig { mode, params, t, zero_t, range, out, format, plot_script, jobs, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("qxcorr").chain(list.iter().copied())).unwrap()
    }

    #[test]
    fn reduced_eval_config() {
        let a = args(&["--mode", "eval", "--Jz", "-1", "--r1", "0.5", "--r2", "1", "--B1", "-0.4", "--B2", "0.7", "--T", "1"]);
        let c = parse_config(&a, None).unwrap();
        assert_eq!(c.mode, Mode::Eval);
        assert_eq!(c.params, Some(ParamSet::Reduced { jz: -1.0, r1: 0.5, r2: 1.0, b1: -0.4, b2: 0.7 }));
        assert_eq!(c.t, Some(1.0));
    }

    #[test]
    fn flags_override_file() {
        let file = "mode = eval\nJz = 1 # coupling\nr1 = 1\nr2 = 2\nT = 1\n";
        let c = parse_config(&args(&["--T", "2"]), Some(file)).unwrap();
        assert_eq!(c.t, Some(2.0));
    }

    #[test]
    fn error_classes() {
        let e = parse_config(&args(&["--mode", "eval", "--Jz", "1", "--r1", "1", "--Jx", "1", "--T", "1"]), None);
        assert_eq!(e.unwrap_err().exit_code(), 3);
        let e = parse_config(&args(&["--Jz", "1"]), None);
        assert_eq!(e.unwrap_err().exit_code(), 2);
        let e = parse_config(&args(&["--mode", "eval", "--Jz", "x1", "--r1", "1", "--r2", "1", "--T", "1"]), None);
        assert_eq!(e.unwrap_err().exit_code(), 3);
        assert_eq!(parse_config_text("bogus = 1").unwrap_err().exit_code(), 3);
        assert_eq!(parse_config_text("T 1").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn full_parameters_reduce() {
        let a = args(&["--mode", "eval", "--Jx", "3.3", "--Jy", "-0.1", "--Jz", "1", "--T", "1"]);
        let c = parse_config(&a, None).unwrap();
        let p = c.params.unwrap().at(1.0);
        assert!((p.r1 - 3.4).abs() < 1e-12 && (p.r2 - 3.2).abs() < 1e-12);
    }

    #[test]
    fn sweep_needs_range() {
        let a = args(&["--mode", "sweep", "--Jz", "1", "--r1", "1", "--r2", "1", "--var", "T", "--from", "0.1"]);
        assert_eq!(parse_config(&a, None).unwrap_err().exit_code(), 3);
        let a = args(&["--mode", "sweep", "--Jz", "1", "--r1", "1", "--r2", "1", "--var", "T", "--from", "0.1", "--to", "2"]);
        let c = parse_config(&a, None).unwrap();
        assert_eq!(c.range.unwrap().points, DEFAULT_SWEEP_POINTS);
    }
}
