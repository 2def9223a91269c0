//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigDocument, Resolved};
use crate::report::{self, Command};

#[derive(Parser, Debug)]
#[command(name = "nonlocal-pencil", version, about = "Fredholm solvability of nonlocal elliptic problems in plane angles")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Eigenvalues in the configured region and on the critical line.
    Spectrum(Target),
    /// Proper/improper classification of the critical-line eigenvalues.
    Classify(Target),
    /// The rank condition with its dependency report.
    Condition(Target),
    /// Fredholm verdicts for L, L_a (when a weight is given) and L_B.
    Verdict(Target),
    /// Singular exponents between the smoothness levels l and l1.
    Asymptotics(Target),
}

#[derive(Args, Debug)]
struct Target {
    /// Problem description (TOML).
    config: PathBuf,
}

#[derive(Args, Debug)]
struct Options {
    /// Half-width of the Re λ window scanned on lines.
    #[arg(long, global = true)]
    re_window: Option<f64>,
    #[arg(long, global = true)]
    delta_line: Option<f64>,
    #[arg(long, global = true)]
    tol_det: Option<f64>,
    #[arg(long, global = true)]
    tol_chain: Option<f64>,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "NONLOCAL_PENCIL_THREADS")]
    threads: Option<usize>,
    /// Also write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for the contour jitter.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl Cmd {
    fn split(self) -> (Command, PathBuf) {
        match self {
            Cmd::Spectrum(t) => (Command::Spectrum, t.config),
            Cmd::Classify(t) => (Command::Classify, t.config),
            Cmd::Condition(t) => (Command::Condition, t.config),
            Cmd::Verdict(t) => (Command::Verdict, t.config),
            Cmd::Asymptotics(t) => (Command::Asymptotics, t.config),
        }
    }
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, String> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(format!("--{name} must be positive, got {x}")),
        _ => Ok(v),
    }
}

fn apply(options: &Options, resolved: &mut Resolved) -> Result<(), String> {
    let a = &mut resolved.analysis;
    if let Some(w) = positive("re-window", options.re_window)? {
        a.re_window = Some(w);
    }
    if let Some(v) = positive("delta-line", options.delta_line)? {
        a.tol.delta_line = v;
    }
    if let Some(v) = positive("tol-det", options.tol_det)? {
        a.tol.tol_det = v;
    }
    if let Some(v) = positive("tol-chain", options.tol_chain)? {
        a.tol.tol_chain = v;
    }
    if let Some(s) = options.seed {
        a.seed = s;
    }
    Ok(())
}

/// Runs the CLI and returns the exit code: 0 on success, 2 when a verdict is
/// indeterminate, 1 on any error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let (command, path) = cli.command.split();
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return 1;
        }
    };
    let (doc, mut resolved) = match ConfigDocument::load(&text) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 1;
        }
    };
    if let Err(e) = apply(&cli.options, &mut resolved) {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.options.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return 1;
        }
    };
    let report = pool.install(|| report::run(command, &doc, &resolved));
    let _ = write!(out, "{}", report::render_text(&report));
    if let Some(json) = &cli.options.json {
        if let Err(e) = std::fs::write(json, report.to_json()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", json.display());
            return 1;
        }
    }
    report.exit_code()
}
