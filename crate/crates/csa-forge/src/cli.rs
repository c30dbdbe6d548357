//! The `csa-forge` command-line driver. Subcommands construct, sample, and
//! verify the library's artifacts using the text formats in `textio`:
//!
//! ```text
//! csa-forge symbol build  --field F9 --p 3 --a <expr> --b <expr> [--out FILE]
//! csa-forge symbol split  --field F8 --a <expr> --b <expr> [--out FILE]
//! csa-forge brauer verify --transcript FILE
//! csa-forge rowen sample  --field F16 --seed N [--count N] [--jobs N] [--out DIR]
//! csa-forge rowen build   --point FILE [--jobs N] [--out FILE]
//! csa-forge rowen verify  --cert FILE
//! csa-forge dec descend   --field F16 --basis 1,g --classes g,g^2 [--out FILE]
//! csa-forge dec verify    --record FILE
//! ```
//!
//! Exit codes: 0 when every verification passes, 1 when a verification
//! fails (the failing stage goes to standard error), 2 for usage and parse
//! errors. Outputs are deterministic in (inputs, seed): batch items use
//! seed + index, and files are written atomically (temp file then rename)
//! so `--jobs` never interleaves partial output.
//!
//! `CSA_FORGE_FIELD`, when set, supplies the default for `--field`.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use crate::algcore::csa::csa_test;
use crate::brauer::replay;
use crate::descent::{descent_parameter, subspace_basis, verify_descent};
use crate::exactfield::grammar::{parse_scalar, print_scalar};
use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::rowen::{
    build_b, build_b_with_witness, sample_point_with_stats, validate_point, FREE_COORDS,
};
use crate::symbols::{norm_witness_search, quaternion_algebra, quaternion_split, symbol_algebra};
use crate::textio::{
    parse_certificate, parse_dec_record, parse_field_desc, parse_point, parse_transcript,
    print_certificate, print_dec_record, print_point,
};

/// A parsed invocation: the subcommand words and its `--flag value` pairs.
pub struct JobConfig {
    pub subcommand: Vec<String>,
    flags: BTreeMap<String, String>,
}

enum CliError {
    /// Bad invocation or unreadable input: usage message, exit 2.
    Usage(String),
    /// A verification failed: failing stage on stderr, exit 1.
    Failed(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Display) -> CliResult<T> {
    Err(CliError::Usage(msg.to_string()))
}

fn failed<T>(stage: &str, msg: impl Display) -> CliResult<T> {
    Err(CliError::Failed(format!("{stage}: {msg}")))
}

impl JobConfig {
    /// Split argv into subcommand words (everything before the first flag)
    /// and `--key value` pairs.
    pub fn parse(args: &[String]) -> Result<JobConfig, String> {
        let mut subcommand = Vec::new();
        let mut flags = BTreeMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            if let Some(key) = arg.strip_prefix("--") {
                if key.is_empty() {
                    return Err("empty flag `--`".to_string());
                }
                let Some(val) = it.next() else {
                    return Err(format!("flag --{key} needs a value"));
                };
                if flags.insert(key.to_string(), val.clone()).is_some() {
                    return Err(format!("flag --{key} given twice"));
                }
            } else if flags.is_empty() {
                subcommand.push(arg.clone());
            } else {
                return Err(format!("unexpected argument `{arg}` after flags"));
            }
        }
        Ok(JobConfig { subcommand, flags })
    }

    fn take(&self, key: &str) -> CliResult<&str> {
        match self.flags.get(key) {
            Some(v) => Ok(v),
            None => usage(format!("missing required flag --{key}")),
        }
    }

    fn take_opt(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(String::as_str)
    }

    /// The working field: `--field`, falling back to `CSA_FORGE_FIELD`.
    fn field(&self) -> CliResult<FieldDesc> {
        let name = match self.take_opt("field") {
            Some(v) => v.to_string(),
            None => match std::env::var("CSA_FORGE_FIELD") {
                Ok(v) => v,
                Err(_) => return usage("missing required flag --field (or CSA_FORGE_FIELD)"),
            },
        };
        match parse_field_desc(&name) {
            Ok(f) => Ok(f),
            Err(e) => usage(e),
        }
    }

    fn unsigned(&self, key: &str, default: u64) -> CliResult<u64> {
        match self.take_opt(key) {
            None => Ok(default),
            Some(v) => match v.parse::<u64>() {
                Ok(n) if n > 0 || key == "seed" => Ok(n),
                Ok(_) => usage(format!("--{key} must be positive")),
                Err(_) => usage(format!("--{key} expects an unsigned integer, got `{v}`")),
            },
        }
    }

    fn scalar(&self, key: &str, fld: &FieldDesc) -> CliResult<Scalar> {
        let v = self.take(key)?;
        match parse_scalar(v, fld) {
            Ok(s) => Ok(s),
            Err(e) => usage(format!("--{key} `{v}`: {e}")),
        }
    }

    /// Comma-separated list of scalar expressions.
    fn scalar_list(&self, key: &str, fld: &FieldDesc) -> CliResult<Vec<Scalar>> {
        let v = self.take(key)?;
        v.split(',')
            .map(|piece| match parse_scalar(piece.trim(), fld) {
                Ok(s) => Ok(s),
                Err(e) => usage(format!("--{key} `{piece}`: {e}")),
            })
            .collect()
    }
}

fn read_input(path: &str) -> CliResult<String> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => usage(format!("cannot read {path}: {e}")),
    }
}

/// Write via a temp file in the same directory, then rename, so a crashed
/// or parallel run never leaves a truncated artifact behind.
fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    let err = |e: std::io::Error| format!("cannot write {}: {e}", path.display());
    if let Err(e) = fs::write(&tmp, content) {
        return usage(err(e));
    }
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return usage(err(e));
    }
    Ok(())
}

/// Emit to --out when given, stdout otherwise.
fn emit(config: &JobConfig, content: &str) -> CliResult<()> {
    match config.take_opt("out") {
        Some(path) => write_atomic(Path::new(path), content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---- symbol ----

fn symbol_build(config: &JobConfig) -> CliResult<String> {
    let fld = config.field()?;
    let p = config.unsigned("p", fld.characteristic() as u64)? as u32;
    let a = config.scalar("a", &fld)?;
    let b = config.scalar("b", &fld)?;
    let sa = match symbol_algebra(&fld, p, &a, &b) {
        Ok(sa) => sa,
        Err(e) => return failed("symbol build", e),
    };
    let report = csa_test(&sa.alg);
    let mut out = String::from("csa-forge/1 symbol-report\n");
    out.push_str(&format!("field = {}\n", fld.name()));
    out.push_str(&format!("p = {p}\n"));
    out.push_str(&format!("a = {}\n", print_scalar(&a)));
    out.push_str(&format!("b = {}\n", print_scalar(&b)));
    out.push_str(&format!("dim = {}\n", sa.alg.dim));
    out.push_str(&format!("csa = {report}\n"));
    if !report.verdict.is_csa() {
        return failed("symbol build", format!("central-simplicity test: {report}"));
    }
    Ok(out)
}

fn symbol_split(config: &JobConfig) -> CliResult<String> {
    let fld = config.field()?;
    let a = config.scalar("a", &fld)?;
    let b = config.scalar("b", &fld)?;
    let sa = match quaternion_algebra(&fld, &a, &b) {
        Ok(sa) => sa,
        Err(e) => return failed("symbol split", e),
    };
    let Some(w) = norm_witness_search(&fld, &a, &b) else {
        return failed("symbol split", "no norm witness: the algebra does not split");
    };
    let split = match quaternion_split(&sa, &w) {
        Ok(s) => s,
        Err(e) => return failed("symbol split", e),
    };
    let mut out = String::from("csa-forge/1 split-report\n");
    out.push_str(&format!("field = {}\n", fld.name()));
    out.push_str(&format!("a = {}\n", print_scalar(&a)));
    out.push_str(&format!("b = {}\n", print_scalar(&b)));
    out.push_str(&format!("witness-x = {}\n", print_scalar(&w.x)));
    out.push_str(&format!("witness-y = {}\n", print_scalar(&w.y)));
    out.push_str("matrix-units = verified 2x2 system\n");
    out.push_str(&format!("factor-dim = {}\n", split.factor.dim));
    Ok(out)
}

// ---- brauer ----

fn brauer_verify(config: &JobConfig) -> CliResult<String> {
    let path = config.take("transcript")?;
    let transcript = match parse_transcript(&read_input(path)?) {
        Ok(t) => t,
        Err(e) => return usage(format!("{path}: {e}")),
    };
    match replay(&transcript) {
        Ok(word) => Ok(format!("replayed {} steps: {word}\n", transcript.steps.len())),
        Err(e) => failed("brauer verify", e),
    }
}

// ---- rowen ----

/// Run `work` over the indices 0..count on up to `jobs` threads, collecting
/// results in index order so output is deterministic.
fn parallel<T: Send>(
    count: usize,
    jobs: usize,
    work: impl Fn(usize) -> CliResult<T> + Sync,
) -> Vec<CliResult<T>> {
    let jobs = jobs.max(1).min(count.max(1));
    if jobs <= 1 {
        return (0..count).map(&work).collect();
    }
    let mut out: Vec<Option<CliResult<T>>> = (0..count).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut out);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = work(i);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_iter().map(|r| r.expect("every index visited")).collect()
}

fn rowen_sample(config: &JobConfig) -> CliResult<String> {
    let fld = config.field()?;
    let seed = config.unsigned("seed", 0)?;
    let count = config.unsigned("count", 1)? as usize;
    let jobs = config.unsigned("jobs", 1)? as usize;
    let out_dir = config.take_opt("out").map(PathBuf::from);
    if let Some(dir) = &out_dir {
        if let Err(e) = fs::create_dir_all(dir) {
            return usage(format!("cannot create {}: {e}", dir.display()));
        }
    }

    let results = parallel(count, jobs, |i| {
        let item_seed = seed + i as u64;
        match sample_point_with_stats(&fld, item_seed) {
            Ok((pt, stats)) => {
                debug_assert_eq!(stats.free_draws, FREE_COORDS);
                let text = print_point(&pt);
                if let Some(dir) = &out_dir {
                    write_atomic(&dir.join(format!("point-{item_seed}.txt")), &text)?;
                    Ok(format!("point-{item_seed}.txt: ok ({} attempts)\n", stats.attempts))
                } else {
                    Ok(text)
                }
            }
            Err(e) => failed(&format!("rowen sample (seed {item_seed})"), e),
        }
    });
    let mut out = String::new();
    for r in results {
        out.push_str(&r?);
    }
    Ok(out)
}

fn rowen_build(config: &JobConfig) -> CliResult<String> {
    let path = config.take("point")?;
    let pf = match parse_point(&read_input(path)?) {
        Ok(p) => p,
        Err(e) => return usage(format!("{path}: {e}")),
    };
    let pt = match validate_point(&pf.fld, &pf.coords) {
        Ok(pt) => pt,
        Err(e) => return failed("rowen build: point validation", e),
    };
    let cert = match build_b(&pt) {
        Ok(c) => c,
        Err(e) => return failed("rowen build", e),
    };
    Ok(print_certificate(&cert))
}

fn rowen_verify(config: &JobConfig) -> CliResult<String> {
    let path = config.take("cert")?;
    let cf = match parse_certificate(&read_input(path)?) {
        Ok(c) => c,
        Err(e) => return usage(format!("{path}: {e}")),
    };
    let pt = match validate_point(&cf.fld, &cf.coords) {
        Ok(pt) => pt,
        Err(e) => return failed("rowen verify: point validation", e),
    };
    match build_b_with_witness(&pt, &cf.witness) {
        Ok(cert) => Ok(format!(
            "certificate verifies: dim(B) = {}, dim(B') = {}, both central simple over {}\n",
            cert.b().dim,
            cert.bprime.dim,
            pt.fld.name()
        )),
        Err(e) => failed("rowen verify", e),
    }
}

// ---- dec ----

fn dec_descend(config: &JobConfig) -> CliResult<String> {
    let fld = config.field()?;
    let lambdas = config.scalar_list("basis", &fld)?;
    let classes = config.scalar_list("classes", &fld)?;
    let basis = match subspace_basis(&fld, &lambdas) {
        Ok(b) => b,
        Err(e) => return failed("dec descend: basis", e),
    };
    let record = match descent_parameter(&classes, &basis) {
        Ok(r) => r,
        Err(e) => return failed("dec descend", e),
    };
    Ok(print_dec_record(&record, &classes))
}

fn dec_verify(config: &JobConfig) -> CliResult<String> {
    let path = config.take("record")?;
    let (record, classes) = match parse_dec_record(&read_input(path)?) {
        Ok(rc) => rc,
        Err(e) => return usage(format!("{path}: {e}")),
    };
    if verify_descent(&record, &classes) {
        Ok(format!(
            "record verifies: rank {} descent of {} classes over {}\n",
            record.basis.rank(),
            classes.len(),
            record.basis.fld.name()
        ))
    } else {
        failed("dec verify", "record does not verify against its classes")
    }
}

// ---- dispatch ----

const USAGE: &str = "usage: csa-forge <subcommand> [flags]

subcommands:
  symbol build  --field F --p P --a EXPR --b EXPR [--out FILE]
  symbol split  --field F --a EXPR --b EXPR [--out FILE]
  brauer verify --transcript FILE
  rowen sample  --field F --seed N [--count N] [--jobs N] [--out DIR]
  rowen build   --point FILE [--out FILE]
  rowen verify  --cert FILE
  dec descend   --field F --basis L1,..,Lr --classes A1,..,Ar [--out FILE]
  dec verify    --record FILE

CSA_FORGE_FIELD supplies the default for --field.
Exit codes: 0 all checks pass, 1 verification failure, 2 usage or parse error.";

/// Run the CLI and return the process exit code.
pub fn run(args: &[String]) -> i32 {
    let config = match JobConfig::parse(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}\n{USAGE}");
            return 2;
        }
    };
    let sub: Vec<&str> = config.subcommand.iter().map(String::as_str).collect();
    let result = match sub.as_slice() {
        ["symbol", "build"] => symbol_build(&config),
        ["symbol", "split"] => symbol_split(&config),
        ["brauer", "verify"] => brauer_verify(&config),
        ["rowen", "sample"] => rowen_sample(&config),
        ["rowen", "build"] => rowen_build(&config),
        ["rowen", "verify"] => rowen_verify(&config),
        ["dec", "descend"] => dec_descend(&config),
        ["dec", "verify"] => dec_verify(&config),
        [] => {
            eprintln!("{USAGE}");
            return 2;
        }
        other => {
            eprintln!("unknown subcommand `{}`\n{USAGE}", other.join(" "));
            return 2;
        }
    };
    match result {
        Ok(output) => {
            // sample with --out already wrote its files; its summary goes to
            // stdout either way
            if matches!(sub.as_slice(), ["rowen", "sample"]) && config.take_opt("out").is_some() {
                print!("{output}");
                0
            } else {
                match emit(&config, &output) {
                    Ok(()) => 0,
                    Err(CliError::Usage(e)) => {
                        eprintln!("{e}");
                        2
                    }
                    Err(CliError::Failed(e)) => {
                        eprintln!("{e}");
                        1
                    }
                }
            }
        }
        Err(CliError::Usage(e)) => {
            eprintln!("{e}\n{USAGE}");
            2
        }
        Err(CliError::Failed(e)) => {
            eprintln!("{e}");
            1
        }
    }
}
