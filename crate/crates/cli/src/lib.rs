//! Command-line front end for `qxcorr-core`.
//!
//! Exit codes: 0 success, 2 usage, 3 configuration, 4 domain validation,
//! 5 I/O, 6 selftest deviation.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use qxcorr_core::oracle::GenericDensityMatrix;
use qxcorr_core::{
    dephase, find_transitions, lqfi_x, lqu_x, oracle_measure, random_xstate, sweep, thermal_correlations,
    zero_t_limit, Branch, BranchPair, Measure, SweepSpec, SweepVariable, XMatrix, XStateParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use config::{Args, Mode, ParamSet, RunConfig, TEMPERATURE_FLOOR};
use output::fmt_sig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("selftest failed: {0}")]
    SelfTest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Io(_) => 5,
            CliError::SelfTest(_) => 6,
        }
    }
}

impl From<qxcorr_core::Error> for CliError {
    fn from(e: qxcorr_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub const SELFTEST_STATES: usize = 100;
pub const SELFTEST_TOLERANCE: f64 = 1e-9;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn check_temperature(t: f64) -> Result<(), CliError> {
    if t < TEMPERATURE_FLOOR {
        return Err(CliError::Domain(format!(
            "temperature {t} is below the floor {TEMPERATURE_FLOOR}; use --T0 for the zero-temperature limit"
        )));
    }
    Ok(())
}

fn validated_params(c: &RunConfig, t: f64) -> Result<XStateParams, CliError> {
    let set = c.params.ok_or_else(|| CliError::Config("missing model parameters".into()))?;
    if let ParamSet::Full(h) = set {
        h.validate()?;
    }
    let p = set.at(t);
    p.validate()?;
    Ok(p)
}

fn sweep_spec(c: &RunConfig) -> Result<SweepSpec, CliError> {
    let range = c.range.ok_or_else(|| CliError::Config("missing sweep range".into()))?;
    let lowest_t = if range.variable == SweepVariable::T { range.from } else { c.t.unwrap_or(0.0) };
    check_temperature(lowest_t)?;
    let base = validated_params(c, if range.variable == SweepVariable::T { range.to } else { lowest_t })?;
    Ok(SweepSpec::new(base, range.variable, range.from, range.to, range.points)?)
}

fn eval(c: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let data = if c.zero_t {
        let p = c.params.ok_or_else(|| CliError::Config("missing model parameters".into()))?.at(1.0);
        p.validate()?;
        let limit = |b: Branch| -> Result<f64, CliError> { Ok(zero_t_limit(&p, b)?.value().unwrap_or(f64::NAN)) };
        let f0 = limit(Branch::F0)?;
        let lqu = BranchPair::new(limit(Branch::U0)?, limit(Branch::U1)?);
        // F1 has no closed zero-temperature limit, so F and its label stay open.
        let sep = c.format.separator().to_string();
        let lqu_line = output::data_line(0.0, &lqu, &lqu, c.format);
        let lqu_fields: Vec<&str> = lqu_line.split(sep.as_str()).skip(5).collect();
        let mut fields = vec![fmt_sig(0.0), fmt_sig(f0), "nan".into(), "nan".into(), "nan".into()];
        fields.extend(lqu_fields.iter().map(|f| f.to_string()));
        fields.join(&sep)
    } else {
        let t = c.t.ok_or_else(|| CliError::Config("missing `T`".into()))?;
        check_temperature(t)?;
        let (f, u) = thermal_correlations(&validated_params(c, t)?)?;
        output::data_line(t, &f, &u, c.format)
    };
    let text = format!("{}\n{}\n", output::header("T", c.format), data);
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

fn run_sweep(c: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = sweep_spec(c)?;
    let rows = sweep(&spec)?;
    let text = output::table(spec.variable.name(), &rows, c.format);
    match &c.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| io_err(path, e))?;
            if c.plot_script {
                let script = path.with_extension("gp");
                std::fs::write(&script, output::plot_script(path, spec.variable.name(), c.format))
                    .map_err(|e| io_err(&script, e))?;
            }
            Ok(())
        }
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn transitions(c: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = sweep_spec(c)?;
    let mut text = String::new();
    for tp in find_transitions(&spec)? {
        text.push_str(&format!("{} {} {}\n", tp.measure, fmt_sig(tp.location), fmt_sig(tp.residual)));
    }
    match &c.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| io_err(path, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Largest deviation between the closed forms and the brute-force oracle
/// over `SELFTEST_STATES` random X states drawn from `seed`.
pub fn selftest_deviation(seed: u64) -> Result<(f64, f64), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut df, mut du) = (0.0f64, 0.0f64);
    for _ in 0..SELFTEST_STATES {
        let x: XMatrix = random_xstate(&mut rng);
        let rho = GenericDensityMatrix::from_xmatrix(&x)?;
        let xd = dephase(&x);
        df = df.max((lqfi_x(&xd).value - oracle_measure(&rho, Measure::Lqfi)).abs());
        du = du.max((lqu_x(&xd).value - oracle_measure(&rho, Measure::Lqu)).abs());
    }
    Ok((df, du))
}

fn selftest(c: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (df, du) = selftest_deviation(c.seed)?;
    let text = format!(
        "selftest seed {} states {}\nLQFI max deviation {}\nLQU max deviation {}\n",
        c.seed,
        SELFTEST_STATES,
        fmt_sig(df),
        fmt_sig(du)
    );
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    let worst = df.max(du);
    if worst > SELFTEST_TOLERANCE {
        return Err(CliError::SelfTest(format!("deviation {worst:e} exceeds {SELFTEST_TOLERANCE:e}")));
    }
    Ok(())
}

pub fn run(c: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let work = || {
        let mut buf = Vec::new();
        let result = match c.mode {
            Mode::Eval => eval(c, &mut buf),
            Mode::Sweep => run_sweep(c, &mut buf),
            Mode::Transitions => transitions(c, &mut buf),
            Mode::SelfTest => selftest(c, &mut buf),
        };
        (buf, result)
    };
    let (buf, result) = match c.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    };
    out.write_all(&buf).map_err(|e| CliError::Io(e.to_string()))?;
    result
}

/// Parses arguments, runs, and maps the outcome to an exit code. Errors are
/// reported on `err`.
pub fn main_with_args<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            // --help and --version are not errors.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let outcome = (|| {
        let text = match &args.config {
            Some(path) => Some(std::fs::read_to_string(path).map_err(|e| io_err(path, e))?),
            None => None,
        };
        let config = config::parse_config(&args, text.as_deref())?;
        run(&config, out)
    })();
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "qxcorr: {e}");
            e.exit_code()
        }
    }
}
