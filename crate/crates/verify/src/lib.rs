//! Library behind the `verify` binary: suites, report formats and the
//! command-line driver.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 for
//! usage errors (bad flags, invalid grids, unreadable config, I/O failures).

pub mod cache;
pub mod config;
pub mod grid;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use arithdiff::models::charts::chart_tree;
use arithdiff::models::IdealSpec;
use arithdiff::{LevelParams, Prime};
use clap::Parser;
use serde_json::json;

use config::{resolve, usage, Cli, Command, Format, GridArgs, OutputSettings, UsageError};
use report::{Document, Status, SuiteReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::ExportTree(a) => export_tree(a.p, a.n, a.n_cap, a.output.as_deref(), stdout).map(|_| EXIT_PASS),
        Command::ExportLattice(a) => {
            export_lattice(a.p, a.n, a.d, a.m, a.output.as_deref(), stdout).map(|_| EXIT_PASS)
        }
        cmd => {
            let (names, args) = suites_of(cmd);
            run_suites(&names, args, stdout)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn suites_of(cmd: &Command) -> (Vec<&'static str>, &GridArgs) {
    let one = |name: &'static str, a| (vec![name], a);
    match cmd {
        Command::Arith(a) => one("arith", a),
        Command::DistPairing(a) => one("dist-pairing", a),
        Command::Closure(a) => one("closure", a),
        Command::Cnj(a) => one("cnj", a),
        Command::Hopf(a) => one("hopf", a),
        Command::Charts(a) => one("charts", a),
        Command::Ideal(a) => one("ideal", a),
        Command::Sandwich(a) => one("sandwich", a),
        Command::Rewrite(a) => one("rewrite", a),
        Command::Xi(a) => one("xi", a),
        Command::Theorem1(a) => one("theorem1", a),
        Command::Theorem2(a) => one("theorem2", a),
        Command::All(a) => (suites::SUITES.to_vec(), a),
        Command::ExportTree(_) | Command::ExportLattice(_) => unreachable!("not a suite"),
    }
}

/// Runs the named suites and writes their reports.
pub fn run_suites(names: &[&str], args: &GridArgs, stdout: &mut dyn Write) -> Result<i32, UsageError> {
    let (settings, out) = resolve(args)?;
    // only flags: a config file may be shared between suites
    if let [name] = names {
        let given = [
            ("p", args.p.is_some()),
            ("n", args.n.is_some()),
            ("m", args.m.is_some()),
            ("d", args.d.is_some()),
            ("deg", args.deg.is_some()),
        ];
        for (flag, set) in given {
            if set && !suites::axes(name).contains(&flag) {
                return usage(format!("{name} does not take --{flag}"));
            }
        }
    }
    if names.len() > 1 && out.format == Format::Csv && out.out_dir.is_none() {
        return usage("CSV output of several suites needs --out-dir");
    }
    if names.len() > 1 && out.format == Format::Text && out.output.is_some() {
        return usage("text output of several suites goes to stdout or --out-dir");
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = out.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| UsageError(format!("thread pool: {e}")))?;
    let mut reports: Vec<SuiteReport> =
        pool.install(|| names.iter().map(|n| suites::run_suite(n, &settings)).collect());
    if let Some(seed) = settings.inject_fault {
        inject_fault(&mut reports, seed);
    }
    write_reports(&reports, &out, stdout)?;
    Ok(if reports.iter().all(SuiteReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

/// Flips the expected outcome of one record chosen by `seed`, so that the
/// record fails with a counterexample describing the flip.
pub fn inject_fault(reports: &mut [SuiteReport], seed: u64) {
    let total: usize = reports.iter().map(|r| r.records.len()).sum();
    if total == 0 {
        return;
    }
    let mut k = (seed % total as u64) as usize;
    for rep in reports.iter_mut() {
        if k < rep.records.len() {
            let rec = &mut rep.records[k];
            let observed = rec.status;
            let expected = if observed == Status::Pass { Status::Fail } else { Status::Pass };
            rec.status = Status::Fail;
            rec.counterexample = Some(json!({
                "injected_fault": {"seed": seed, "expected": expected, "observed": observed}
            }));
            rep.resummarize();
            return;
        }
        k -= rep.records.len();
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), UsageError> {
    std::fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

fn render(reports: &[&SuiteReport], format: Format) -> String {
    match format {
        Format::Json => Document::new(reports.to_vec()).to_json(),
        Format::Csv => reports.iter().map(|r| r.to_csv()).collect(),
        Format::Text => reports.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n"),
    }
}

fn write_reports(reports: &[SuiteReport], out: &OutputSettings, stdout: &mut dyn Write) -> Result<(), UsageError> {
    let all: Vec<&SuiteReport> = reports.iter().collect();
    let io = |e: std::io::Error| UsageError(format!("cannot write to stdout: {e}"));
    if let Some(dir) = &out.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| UsageError(format!("cannot create {}: {e}", dir.display())))?;
        for r in reports {
            let path = dir.join(format!("{}.{}", r.suite, out.format.extension()));
            write_file(&path, &render(&[r], out.format))?;
        }
        for r in reports {
            let s = &r.summary;
            writeln!(stdout, "{}: {} records, {} passed, {} failed", r.suite, s.records, s.passed, s.failed).map_err(io)?;
        }
        return Ok(());
    }
    let text = render(&all, out.format);
    match &out.output {
        Some(path) => write_file(path, &text),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

fn emit(text: String, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), UsageError> {
    match output {
        Some(path) => write_file(path, &text),
        None => stdout.write_all(text.as_bytes()).map_err(|e| UsageError(format!("cannot write to stdout: {e}"))),
    }
}

fn prime(p: u64) -> Result<Prime, UsageError> {
    Prime::new(p).map_err(|_| UsageError(format!("--p: {p} is not prime")))
}

pub fn export_tree(p: u64, n: u32, n_cap: u32, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), UsageError> {
    let p = prime(p)?;
    if n > n_cap {
        return usage(format!("--n {n} exceeds the cap {n_cap}"));
    }
    let tree = chart_tree(p, n);
    let doc = json!({
        "schema_version": report::SCHEMA_VERSION,
        "tree": tree,
        "degrees": tree.degrees(),
        "ends": tree.ends(),
        "is_tree": tree.is_tree(),
    });
    emit(serde_json::to_string_pretty(&doc).expect("serializable") + "\n", output, stdout)
}

pub fn export_lattice(p: u64, n: u32, d: u32, m: u32, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), UsageError> {
    let p = prime(p)?;
    if d > config::DEFAULT_DEG_CAP {
        return usage(format!("--d {d} exceeds the cap {}", config::DEFAULT_DEG_CAP));
    }
    let params = LevelParams::new(p.get(), m, 0).map_err(|e| UsageError(e.to_string()))?;
    let sl = cache::section_lattice(&IdealSpec::new(n, d), &params);
    let doc = json!({
        "schema_version": report::SCHEMA_VERSION,
        "lattice": sl,
        "optimal_exponent": sl.lattice.optimal_exponent(),
        "index_exponent": sl.lattice.index_exponent(),
    });
    emit(serde_json::to_string_pretty(&doc).expect("serializable") + "\n", output, stdout)
}
