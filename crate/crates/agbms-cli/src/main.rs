mod files;
mod spec;

use std::fmt::Write as _;
use std::process::ExitCode;

use agbms::agcode::{encode, inject_errors, syndromes, CodeSpec, ErrorPattern, Word};
use agbms::archsim::{bench_table, resources, simulate_checked, ArchKind, Architecture, SimError, SimOptions};
use agbms::bms::{dump_boundaries, dump_records, run_traced, Mode};
use agbms::decoder::{decode_with, DecodeStatus};
use agbms::galois::{FieldElem, Session};
use agbms::oracle::{generic_ratio, is_generic, random_pattern};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::files::FileError;
use crate::spec::{LoadedSpec, SpecError};

const EXIT_PARSE: u8 = 1;
const EXIT_NOT_GENERIC: u8 = 2;
const EXIT_FAILURE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "agbms", version, about = "Decode one-point AG codes with the inverse-free parallel BMS algorithm")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decode a received word and print the result record.
    Decode {
        /// Spec file, or a bundled preset name.
        spec: String,
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "inverse-free")]
        mode: ModeArg,
        /// Write the per-N BMS state dump here.
        #[arg(long)]
        dump_state: Option<String>,
    },
    /// Run a clock-level architecture model and write its register trace.
    TraceArch {
        spec: String,
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        arch: ArchArg,
        /// CSV trace output.
        #[arg(long)]
        out: String,
        /// Boundary dump output; defaults to <out>.boundaries.
        #[arg(long)]
        boundaries: Option<String>,
    },
    /// Estimate the fraction of generic error patterns of weight t.
    StatsGeneric {
        spec: String,
        /// Defaults to the code's generic capability.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the architecture cost table with measured clocks.
    Bench {
        spec: String,
        /// Seed of the error pattern used for the measured runs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a random error file.
    GenErrors {
        spec: String,
        /// Defaults to the code's generic capability.
        #[arg(long)]
        weight: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only accept generic patterns.
        #[arg(long)]
        generic: bool,
        #[arg(long)]
        out: String,
        /// Also write a random codeword plus these errors.
        #[arg(long)]
        received_out: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Received word: whitespace-separated logs, -1 for zero.
    #[arg(long)]
    received: Option<String>,
    /// Error file (`index value_log` lines) applied to the zero codeword.
    #[arg(long)]
    errors: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(alias = "inverse_free")]
    InverseFree,
    Division,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    #[value(alias = "inverse_free")]
    InverseFree,
    Serial,
    #[value(alias = "serial_inverse_free")]
    SerialInverseFree,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::InverseFree => Mode::InverseFree,
            ModeArg::Division => Mode::Division,
        }
    }
}

impl From<ArchArg> for ArchKind {
    fn from(a: ArchArg) -> ArchKind {
        match a {
            ArchArg::InverseFree => ArchKind::InverseFree,
            ArchArg::Serial => ArchKind::Serial,
            ArchArg::SerialInverseFree => ArchKind::SerialInverseFree,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    File(#[from] FileError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

fn received_word(code: &CodeSpec, input: &Input) -> Result<Word, CliError> {
    match (&input.received, &input.errors) {
        (Some(p), _) => Ok(files::parse_word(code, &files::read(p)?)?),
        (None, Some(p)) => Ok(files::parse_errors(code, &files::read(p)?)?.to_word(code.n)),
        (None, None) => Err(CliError::Usage("one of --received or --errors is required".into())),
    }
}

fn header(spec: &LoadedSpec, seed: Option<u64>) -> String {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    format!("spec_hash={}\nseed={}\n", spec.hash, seed)
}

fn cmd_decode(spec: &str, input: &Input, mode: Mode, dump: Option<&str>) -> Result<u8, CliError> {
    let spec = spec::load(spec)?;
    let code = &spec.code;
    let word = received_word(code, input)?;
    let r = decode_with(code, &word, mode);
    if let Some(path) = dump {
        let synd = syndromes(code, &word).map_err(FileError::from)?;
        let mut s = Session::new(code.field());
        let text = match run_traced(&code.curve, &synd, mode, code.m, &mut s) {
            Ok((_, records)) => dump_records(&records),
            Err(e) => format!("# bms error: {e}\n"),
        };
        write_file(path, &format!("# spec_hash={} seed=none mode={mode}\n{text}", spec.hash))?;
    }
    let mut out = header(&spec, None);
    let _ = writeln!(out, "mode={mode}");
    let _ = writeln!(out, "status={}", r.status);
    let _ = writeln!(out, "evaluator={}", r.evaluator.map_or_else(|| "none".to_string(), |e| e.to_string()));
    let _ = writeln!(out, "error_count={}", r.error_locs.len());
    for (j, v) in r.error_locs.iter().zip(&r.error_vals) {
        let _ = writeln!(out, "error {j} {}", v.log());
    }
    let _ = writeln!(out, "corrected={}", files::format_word(&r.corrected));
    let _ = writeln!(out, "bms_muls={} bms_invs={}", r.bms_ops.muls, r.bms_ops.invs);
    let _ = writeln!(out, "eval_muls={} eval_invs={}", r.eval_ops.muls, r.eval_ops.invs);
    print!("{out}");
    Ok(match r.status {
        DecodeStatus::Success => 0,
        DecodeStatus::NotGenericDetected => EXIT_NOT_GENERIC,
        DecodeStatus::Failure => EXIT_FAILURE,
    })
}

fn cmd_trace_arch(spec: &str, input: &Input, arch: ArchKind, out: &str, bounds: Option<&str>) -> Result<u8, CliError> {
    let spec = spec::load(spec)?;
    let code = &spec.code;
    let word = received_word(code, input)?;
    let synd = syndromes(code, &word).map_err(FileError::from)?;
    let mut report = header(&spec, None);
    let _ = writeln!(report, "arch={arch}");
    let trace = match simulate_checked(code, &synd, arch, SimOptions { record: true }) {
        Ok(t) => t,
        Err(SimError::TooFewBlocks) => return Err(CliError::Usage(format!("{arch} needs a curve with a >= 2"))),
        Err(e) => {
            let _ = writeln!(report, "equivalence=FAIL ({e})");
            print!("{report}");
            return Ok(EXIT_MISMATCH);
        }
    };
    write_file(out, &format!("# spec_hash={} seed=none arch={arch}\n{}", spec.hash, trace.to_csv()))?;
    let bpath = bounds.map_or_else(|| format!("{out}.boundaries"), str::to_string);
    let bdump = dump_boundaries(&trace.boundary_states);
    write_file(&bpath, &format!("# spec_hash={} seed=none arch={arch}\n{bdump}", spec.hash))?;
    let regs = trace.registers;
    let _ = writeln!(report, "equivalence=PASS");
    let _ = writeln!(report, "period={}", trace.period);
    let _ = writeln!(report, "total_clocks={}", trace.total_clocks);
    let _ = writeln!(report, "registers vf={} wg={} exchange={} supplementary={}", regs.vf, regs.wg, regs.exchange, regs.supplementary);
    let _ = writeln!(report, "multipliers={} max_per_clock={} uses={}", trace.mult_budget, trace.max_mults_per_clock, trace.mult_uses);
    let _ = writeln!(report, "inversions={}", trace.inv_uses);
    let _ = writeln!(report, "trace={out}\nboundaries={bpath}");
    print!("{report}");
    Ok(0)
}

fn cmd_stats_generic(spec: &str, t: Option<usize>, trials: u64, seed: u64) -> Result<u8, CliError> {
    let spec = spec::load(spec)?;
    let code = &spec.code;
    let t = t.unwrap_or_else(|| code.t_generic());
    if t > code.n {
        return Err(CliError::Usage(format!("t = {t} exceeds n = {}", code.n)));
    }
    let r = generic_ratio(code, t, trials as usize, seed);
    let mut out = header(&spec, Some(seed));
    let _ = writeln!(out, "t={t}\ntrials={}\nhits={}", r.trials, r.hits);
    let _ = writeln!(out, "estimate={:.6}\nexpected={:.6}", r.estimate, r.expected);
    print!("{out}");
    Ok(0)
}

fn cmd_bench(spec: &str, seed: u64) -> Result<u8, CliError> {
    let spec = spec::load(spec)?;
    let code = &spec.code;
    let (a, m) = (code.curve.a() as i64, code.m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = random_pattern(code, code.t_generic().min(code.n), &mut rng);
    let synd = syndromes(code, &e.to_word(code.n)).map_err(FileError::from)?;
    let mut rows = Vec::new();
    let mut status = 0;
    for arch in Architecture::ALL {
        let mut r = resources(arch, a, m);
        if let Some(kind) = arch.simulated() {
            match simulate_checked(code, &synd, kind, SimOptions::default()) {
                Ok(t) => r.measured_clocks = Some(t.total_clocks),
                Err(SimError::TooFewBlocks) => {}
                Err(_) => status = EXIT_MISMATCH,
            }
        }
        rows.push(r);
    }
    print!("{}a={a} m={m}\n{}", header(&spec, Some(seed)), bench_table(&rows));
    Ok(status)
}

fn random_codeword<R: Rng>(code: &CodeSpec, rng: &mut R) -> Word {
    let order = code.field().order() as i64;
    let msg: Vec<FieldElem> = (0..code.dimension())
        .map(|_| match rng.gen_range(-1..order) {
            -1 => FieldElem::ZERO,
            k => code.field().alpha_pow(k),
        })
        .collect();
    encode(code, &msg).expect("message has the code dimension")
}

fn cmd_gen_errors(
    spec: &str,
    weight: Option<usize>,
    seed: u64,
    generic: bool,
    out: &str,
    received_out: Option<&str>,
) -> Result<u8, CliError> {
    const MAX_TRIES: usize = 100_000;
    let spec = spec::load(spec)?;
    let code = &spec.code;
    let weight = weight.unwrap_or_else(|| code.t_generic());
    if weight > code.n {
        return Err(CliError::Usage(format!("weight {weight} exceeds n = {}", code.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pattern: Option<ErrorPattern> = None;
    for _ in 0..MAX_TRIES {
        let e = random_pattern(code, weight, &mut rng);
        if !generic || is_generic(code, &e.locs).is_generic {
            pattern = Some(e);
            break;
        }
    }
    let e = pattern.ok_or_else(|| CliError::Usage(format!("no generic pattern of weight {weight} found")))?;
    let prov = format!("# spec_hash={} seed={seed}\n", spec.hash);
    write_file(out, &format!("{prov}{}", files::format_errors(&e)))?;
    let mut report = header(&spec, Some(seed));
    let _ = writeln!(report, "weight={weight}\ngeneric={}", is_generic(code, &e.locs).is_generic);
    let _ = writeln!(report, "errors={out}");
    if let Some(path) = received_out {
        let c = random_codeword(code, &mut rng);
        let w = inject_errors(code, &c, &e).map_err(FileError::from)?;
        write_file(path, &format!("{prov}{}\n", files::format_word(&w)))?;
        let _ = writeln!(report, "received={path}");
    }
    print!("{report}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    let res = match &cli.cmd {
        Cmd::Decode { spec, input, mode, dump_state } => cmd_decode(spec, input, (*mode).into(), dump_state.as_deref()),
        Cmd::TraceArch { spec, input, arch, out, boundaries } => {
            cmd_trace_arch(spec, input, (*arch).into(), out, boundaries.as_deref())
        }
        Cmd::StatsGeneric { spec, t, trials, seed } => cmd_stats_generic(spec, *t, *trials, *seed),
        Cmd::Bench { spec, seed } => cmd_bench(spec, *seed),
        Cmd::GenErrors { spec, weight, seed, generic, out, received_out } => {
            cmd_gen_errors(spec, *weight, *seed, *generic, out, received_out.as_deref())
        }
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}
