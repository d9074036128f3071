use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use td2g::groups::PseudoOrthogonal;
use td2g::json::{
    cocycle_from_json, cocycle_to_json, element_from_json, intvec_to_json, mor_to_json, obj_from_json, parse,
    raw_matrix_from_json, to_canonical_string,
};
use td2g::kinvariant::k_cocycle;
use td2g::rng;
use td2g::suites::{run_suite, section_payload, Suite};
use td2g::tdcorr::{act, random_cocycle};
use td2g::twogroup::beta_multiplicator;

/// Exact computations in the automorphism 2-group of the T-duality 2-group.
///
/// Exit codes: 0 pass, 1 mathematical failure or counterexample, 2 input
/// error, 3 internal error. TD2G_THREADS caps the worker threads.
#[derive(Parser)]
#[command(name = "td2g", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether a matrix lies in O±(n,n,Z).
    Check { file: PathBuf },
    /// Print B_A and the section object S(A) = (A, (B_A)_low).
    Section { file: PathBuf },
    /// Print the multiplicator morphism S(A)·S(B) → S(AB).
    Mult {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Print the k-invariant cocycle m_{A,B,C}.
    Kinv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
    },
    /// Run a seeded verification suite and print its report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Leave out elapsed time so reports can be byte-compared.
        #[arg(long)]
        no_timing: bool,
        /// One JSON value per line: header, each failure, summary.
        #[arg(long)]
        jsonl: bool,
    },
    /// Write a random valid TD cocycle.
    RandomCocycle {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        charts: usize,
        #[arg(long)]
        seed: u64,
        /// Output file; stdout if absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Apply an object of the 2-group to a TD cocycle.
    Act {
        /// Object {"matrix", "eta"}; a bare element means its section.
        #[arg(long)]
        auto: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// An error carrying its exit code.
struct Fail(u8, anyhow::Error);

fn input(e: impl Into<anyhow::Error>) -> Fail {
    Fail(2, e.into())
}

fn internal(e: impl Into<anyhow::Error>) -> Fail {
    Fail(3, e.into())
}

fn read(path: &Path) -> Result<(Vec<u8>, Value), Fail> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
    let text =
        std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display())).map_err(input)?;
    let v = parse(text).with_context(|| format!("parsing {}", path.display())).map_err(input)?;
    Ok((bytes, v))
}

fn element(path: &Path) -> Result<PseudoOrthogonal, Fail> {
    let (_, v) = read(path)?;
    element_from_json(&v).with_context(|| format!("{}", path.display())).map_err(input)
}

fn print(v: &Value) -> Result<(), Fail> {
    std::io::stdout().write_all(to_canonical_string(v).as_bytes()).map_err(internal)
}

fn hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn cmd_check(file: &Path) -> Result<u8, Fail> {
    let (_, v) = read(file)?;
    let m = raw_matrix_from_json(&v).map_err(input)?;
    match PseudoOrthogonal::check_membership(&m) {
        Ok(a) => {
            print(&json!({ "member": true, "iso": a.iso(), "n": a.n() }))?;
            Ok(0)
        }
        Err(e) => {
            print(&json!({ "member": false, "reason": e.to_string() }))?;
            Ok(1)
        }
    }
}

fn cmd_mult(a: &Path, b: &Path) -> Result<u8, Fail> {
    let (a, b) = (element(a)?, element(b)?);
    let m = beta_multiplicator(&a, &b).map_err(input)?;
    print(&mor_to_json(&m))?;
    Ok(0)
}

fn cmd_kinv(a: &Path, b: &Path, c: &Path) -> Result<u8, Fail> {
    let (a, b, c) = (element(a)?, element(b)?, element(c)?);
    let m = k_cocycle(&a, &b, &c).map_err(input)?;
    print(&intvec_to_json(&m))?;
    Ok(0)
}

fn cmd_verify(suite: Suite, n: usize, trials: usize, seed: u64, timing: bool, jsonl: bool) -> Result<u8, Fail> {
    if n == 0 {
        return Err(input(anyhow!("--n must be at least 1")));
    }
    let report = run_suite(suite, n, trials, seed).map_err(internal)?;
    let full = report.to_json(timing);
    if jsonl {
        let mut header = full.as_object().cloned().unwrap_or_default();
        let failures = header.remove("failures").unwrap_or(Value::Null);
        let mut out = std::io::stdout().lock();
        let mut line = |v: &Value| writeln!(out, "{v}").map_err(internal);
        line(&json!({ "suite": suite.name(), "n": report.n, "trials": trials, "seed": seed }))?;
        for f in failures.as_array().into_iter().flatten() {
            line(&json!({ "failure": f }))?;
        }
        line(&Value::Object(header))?;
    } else {
        print(&full)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_act(auto: &Path, cocycle: &Path, out: &Path) -> Result<u8, Fail> {
    let (auto_bytes, auto_json) = read(auto)?;
    let (cocycle_bytes, cocycle_json) = read(cocycle)?;
    let o = obj_from_json(&auto_json).with_context(|| format!("{}", auto.display())).map_err(input)?;
    let c = cocycle_from_json(&cocycle_json).with_context(|| format!("{}", cocycle.display())).map_err(input)?;
    c.validate().map_err(|v| input(anyhow!("{}: not a cocycle: {v}", cocycle.display())))?;
    if o.n() != c.n {
        return Err(input(anyhow!("object has n = {}, cocycle has n = {}", o.n(), c.n)));
    }
    let d = act(&o, &c).map_err(internal)?;
    d.validate().map_err(|v| internal(anyhow!("transformed cocycle fails validation: {v}")))?;
    let mut payload = match cocycle_to_json(&d) {
        Value::Object(m) => m,
        _ => unreachable!("cocycles serialize to objects"),
    };
    let mut meta = Map::new();
    meta.insert("command".into(), "act".into());
    meta.insert("auto_sha256".into(), hex(&auto_bytes).into());
    meta.insert("cocycle_sha256".into(), hex(&cocycle_bytes).into());
    meta.insert("iso".into(), o.iso().into());
    payload.insert("meta".into(), Value::Object(meta));
    fs::write(out, to_canonical_string(&Value::Object(payload)))
        .with_context(|| format!("writing {}", out.display()))
        .map_err(input)?;
    Ok(0)
}

fn cmd_random_cocycle(n: usize, points: usize, charts: usize, seed: u64, out: Option<&Path>) -> Result<u8, Fail> {
    if n == 0 || points == 0 || charts == 0 {
        return Err(input(anyhow!("--n, --points and --charts must be at least 1")));
    }
    let c = random_cocycle(n, points, charts, &mut rng::seeded(seed));
    let text = to_canonical_string(&cocycle_to_json(&c));
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(input)?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(internal)?,
    }
    Ok(0)
}

fn configure_threads() -> Result<(), Fail> {
    if let Ok(s) = std::env::var("TD2G_THREADS") {
        let n: usize = s.parse().map_err(|_| input(anyhow!("TD2G_THREADS={s:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(internal)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Fail> {
    configure_threads()?;
    match cli.cmd {
        Cmd::Check { file } => cmd_check(&file),
        Cmd::Section { file } => {
            print(&section_payload(&element(&file)?))?;
            Ok(0)
        }
        Cmd::Mult { a, b } => cmd_mult(&a, &b),
        Cmd::Kinv { a, b, c } => cmd_kinv(&a, &b, &c),
        Cmd::Verify { suite, n, trials, seed, no_timing, jsonl } => {
            cmd_verify(suite, n, trials, seed, !no_timing, jsonl)
        }
        Cmd::RandomCocycle { n, points, charts, seed, out } => {
            cmd_random_cocycle(n, points, charts, seed, out.as_deref())
        }
        Cmd::Act { auto, cocycle, out } => cmd_act(&auto, &cocycle, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, e)) => {
            eprintln!("td2g: {e:#}");
            ExitCode::from(code)
        }
    }
}
