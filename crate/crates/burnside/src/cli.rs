//! Command-line front end. `run` parses argv, dispatches and returns the exit code.

use crate::canonical::{can, can_r, certify, mult_r, CertificationOutcome, Direction};
use crate::config::{Measure, Mode, Params, DEFAULT_TAU};
use crate::error::Error;
use crate::occurrences::{all_maximal_occurrences, maximal_occurrences, Occurrence};
use crate::relators::rank_witness;
use crate::semican::{greedy_kappa, greedy_to, SemicanonicalForm};
use crate::support::{
    control_suite, cube_free_words, cubefree_suite, finewilf_suite, is_cube_free, rank1_suite, rank_prefix_suite, shifts_suite,
    OracleReport,
};
use crate::turns::{turn, Triangle};
use crate::words::Word;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "burnside", version, about = "Canonical forms in free Burnside groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Odd exponent.
    #[arg(long, global = true, default_value_t = 593)]
    n: i64,
    /// Number of generators.
    #[arg(long, global = true, default_value_t = 2)]
    m: u32,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
    /// Nesting constant (lab mode only).
    #[arg(long, global = true)]
    tau: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include step-by-step traces.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Print words letter by letter instead of with power notation.
    #[arg(long, global = true)]
    expanded: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Finewilf,
    RankPrefix,
    Shifts,
    Control,
    Rank1,
    Cubefree,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Free reduction.
    Reduce { word: String },
    /// Rank of a primitive cyclically reduced period.
    Rank { word: String },
    /// Maximal occurrences of one rank.
    Occurrences {
        word: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value = "2")]
        min_measure: String,
    },
    /// Turn the maximal occurrence starting at an offset.
    Turn {
        word: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long)]
        at: usize,
    },
    /// Greedy descent to a semicanonical form.
    Semican {
        word: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Canonical form, stabilized or of a fixed rank.
    Can {
        word: String,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Canonical product of two words.
    Mult {
        left: String,
        right: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Certification outcomes next to an occurrence.
    Certify {
        word: String,
        #[arg(long)]
        at: usize,
        #[arg(long, value_enum)]
        dir: DirArg,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Distinct canonical words built from cube-free words over two letters.
    WitnessInfinity {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
    },
    /// Brute-force checks of the combinatorial lemmas.
    VerifyLemmas {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) if e.is_verification_failure() => EXIT_VERIFY,
            CliError::Lib(_) => EXIT_USAGE,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => e.code(),
        }
    }
}

/// Output of one command: the text lines and the JSON body, plus whether checks passed.
struct Report {
    text: Vec<String>,
    json: Value,
    ok: bool,
}

impl Report {
    fn new(text: Vec<String>, json: Value) -> Report {
        Report { text, json, ok: true }
    }
}

struct Ctx {
    params: Params,
    expanded: bool,
    trace: bool,
    seed: u64,
}

impl Ctx {
    fn show(&self, w: &Word) -> String {
        w.render(!self.expanded)
    }

    fn word(&self, text: &str) -> Result<Word, CliError> {
        Ok(Word::parse_for(text, self.params.m)?)
    }

    fn occ_json(&self, o: &Occurrence) -> Value {
        json!({
            "offset": o.offset,
            "length": o.length,
            "period": self.show(&o.period),
            "k": o.k(),
            "a1": self.show(o.a1()),
            "measure": o.measure.to_string(),
            "rank": o.rank,
        })
    }

    fn occ_text(&self, o: &Occurrence) -> String {
        format!(
            "offset={} length={} period={} k={} a1={} measure={} rank={}",
            o.offset,
            o.length,
            self.show(&o.period),
            o.k(),
            self.show(o.a1()),
            o.measure,
            o.rank
        )
    }

    fn triangle_json(&self, t: &Triangle) -> Value {
        json!([self.show(&t.first), self.show(&t.second), self.show(&t.third)])
    }
}

fn parse_measure(text: &str) -> Result<Measure, CliError> {
    let bad = || CliError::Usage(format!("cannot read {text:?} as a measure"));
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Measure::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10i64.pow(frac.len() as u32);
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let part: i64 = frac.parse().map_err(|_| bad())?;
        let signed = if negative { -part } else { part };
        return Ok(Measure::from_integer(whole) + Measure::new(signed, scale));
    }
    Ok(Measure::from_integer(t.parse().map_err(|_| bad())?))
}

fn build_params(g: &Global) -> Result<Params, CliError> {
    let mode = match g.mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Lab => Mode::Lab,
    };
    if mode == Mode::Strict && g.tau.is_some() {
        return Err(CliError::Usage("--tau is only accepted with --mode lab".into()));
    }
    Ok(Params::with_tau(g.n, g.m, mode, g.tau.unwrap_or(DEFAULT_TAU))?)
}

fn occurrence_at(ctx: &Ctx, a: &Word, at: usize, rank: Option<u32>) -> Result<Occurrence, CliError> {
    let floor = Measure::from_integer(2);
    let found = match rank {
        Some(r) => maximal_occurrences(a, r, floor, ctx.params.tau),
        None => all_maximal_occurrences(a, floor, ctx.params.tau),
    };
    found
        .into_iter()
        .filter(|o| o.offset == at)
        .max_by(|x, y| x.measure.cmp(&y.measure))
        .ok_or_else(|| CliError::Usage(format!("no maximal occurrence starts at offset {at}")))
}

fn semican_report(ctx: &Ctx, f: &SemicanonicalForm) -> Report {
    let mut text = vec![ctx.show(&f.word)];
    for s in &f.trace {
        text.push(format!(
            "  turn offset={} length={} period={} measure={} {:?}",
            s.offset, s.length, s.period, s.measure, s.type_tag
        ));
    }
    Report::new(
        text,
        json!({
            "result": ctx.show(&f.word),
            "kappa": f.kappa.to_string(),
            "rank": f.rank,
            "trace": f.trace,
        }),
    )
}

fn outcome_json(ctx: &Ctx, o: &CertificationOutcome) -> Value {
    json!({
        "direction": o.direction,
        "kind": o.kind,
        "side": o.certified_side,
        "choices": o.choices,
        "sequence": o.sequence.iter().map(|s| ctx.occ_json(s)).collect::<Vec<_>>(),
        "witness": ctx.show(&o.witness),
    })
}

fn suite_report(r: &OracleReport) -> Report {
    let mut text = vec![format!("{}: {} checked, {} violations", r.suite, r.checked, r.failures)];
    text.extend(r.violations.iter().map(|v| format!("  {v}")));
    Report {
        text,
        json: serde_json::to_value(r).unwrap_or(Value::Null),
        ok: r.passed(),
    }
}

fn witness_infinity(ctx: &Ctx, count: usize, max_len: usize) -> Result<Report, CliError> {
    let params = &ctx.params;
    let mut words: Vec<Word> = Vec::with_capacity(count);
    'outer: for len in 1..=max_len {
        for w in cube_free_words(len) {
            if words.len() == count {
                break 'outer;
            }
            words.push(w);
        }
    }
    let distinct = words.iter().map(|w| w.letters().to_vec()).collect::<BTreeSet<_>>().len();
    let (mut cube_free, mut below_window, mut canonical) = (0usize, 0usize, 0usize);
    for w in &words {
        if is_cube_free(w.letters()) {
            cube_free += 1;
        }
        if all_maximal_occurrences(w, params.window_lo, params.tau)
            .iter()
            .all(|o| o.measure <= params.window_lo)
        {
            below_window += 1;
        }
        if can(params, w)?.word == *w {
            canonical += 1;
        }
    }
    let n = words.len();
    let ok = n == count && distinct == n && cube_free == n && below_window == n && canonical == n;
    let mut text = Vec::new();
    if ctx.trace {
        text.extend(words.iter().map(|w| w.to_expanded()));
    }
    text.push(format!(
        "{n} words, {distinct} distinct, {cube_free} cube-free, {below_window} below {}, {canonical} canonical",
        params.window_lo
    ));
    text.push(if ok {
        "verified".to_string()
    } else {
        "verification failed".to_string()
    });
    let json = json!({
        "words": words.iter().map(|w| w.to_expanded()).collect::<Vec<_>>(),
        "report": {
            "requested": count,
            "emitted": n,
            "distinct": distinct,
            "cube_free": cube_free,
            "below_window": below_window,
            "canonical": canonical,
            "window_lo": params.window_lo.to_string(),
            "verified": ok,
        },
    });
    Ok(Report { text, json, ok })
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Report, CliError> {
    let params = &ctx.params;
    match command {
        Command::Reduce { word } => {
            let w = ctx.word(word)?;
            Ok(Report::new(
                vec![ctx.show(&w)],
                json!({ "result": ctx.show(&w), "length": w.len() }),
            ))
        }
        Command::Rank { word } => {
            let w = ctx.word(word)?;
            let chain = rank_witness(&w, params.tau)?;
            let rank = chain[0].1;
            let mut text = vec![rank.to_string()];
            text.extend(
                chain
                    .iter()
                    .skip(1)
                    .map(|(p, r)| format!("  ({})^{} of rank {r}", ctx.show(p), params.tau)),
            );
            let witness: Vec<Value> = chain
                .iter()
                .skip(1)
                .map(|(p, r)| json!({ "period": ctx.show(p), "rank": r }))
                .collect();
            Ok(Report::new(text, json!({ "rank": rank, "witness": witness })))
        }
        Command::Occurrences { word, rank, min_measure } => {
            let w = ctx.word(word)?;
            let q = parse_measure(min_measure)?;
            let occs: Vec<Occurrence> = maximal_occurrences(&w, *rank, q, params.tau)
                .into_iter()
                .filter(|o| o.measure >= q)
                .collect();
            Ok(Report::new(
                occs.iter().map(|o| ctx.occ_text(o)).collect(),
                json!({ "occurrences": occs.iter().map(|o| ctx.occ_json(o)).collect::<Vec<_>>() }),
            ))
        }
        Command::Turn { word, rank, at } => {
            let w = ctx.word(word)?;
            let occ = occurrence_at(ctx, &w, *at, Some(*rank))?;
            let tr = turn(params, &w, &occ, *rank)?;
            let text = vec![
                ctx.show(&tr.result),
                format!("type {:?}", tr.type_tag),
                format!("remainder {} at {}", ctx.show(&tr.remainder), tr.remainder_offset),
                format!(
                    "left {} {} {}",
                    ctx.show(&tr.triangle_left.first),
                    ctx.show(&tr.triangle_left.second),
                    ctx.show(&tr.triangle_left.third)
                ),
                format!(
                    "right {} {} {}",
                    ctx.show(&tr.triangle_right.first),
                    ctx.show(&tr.triangle_right.second),
                    ctx.show(&tr.triangle_right.third)
                ),
            ];
            Ok(Report::new(
                text,
                json!({
                    "result": ctx.show(&tr.result),
                    "occurrence": ctx.occ_json(&tr.occurrence),
                    "complement": ctx.show(&tr.complement),
                    "type": tr.type_tag,
                    "remainder": ctx.show(&tr.remainder),
                    "remainder_offset": tr.remainder_offset,
                    "triangle_left": ctx.triangle_json(&tr.triangle_left),
                    "triangle_right": ctx.triangle_json(&tr.triangle_right),
                }),
            ))
        }
        Command::Semican { word, rank, kappa } => {
            let w = ctx.word(word)?;
            let kappa = match kappa {
                Some(k) => parse_measure(k)?,
                None => greedy_kappa(params),
            };
            Ok(semican_report(ctx, &greedy_to(params, &w, *rank, kappa)?))
        }
        Command::Can { word, rank } => {
            let w = ctx.word(word)?;
            match rank {
                Some(r) => {
                    let c = can_r(params, &w, *r)?;
                    Ok(Report::new(vec![ctx.show(&c)], json!({ "result": ctx.show(&c), "rank": r })))
                }
                None => {
                    let f = can(params, &w)?;
                    let mut text = vec![ctx.show(&f.word)];
                    let mut body = json!({ "result": ctx.show(&f.word), "rank": f.rank });
                    if ctx.trace {
                        text.extend(f.history.iter().enumerate().map(|(r, h)| format!("  can_{r} = {}", ctx.show(h))));
                        body["history"] = json!(f.history.iter().map(|h| ctx.show(h)).collect::<Vec<_>>());
                    }
                    Ok(Report::new(text, body))
                }
            }
        }
        Command::Mult { left, right, rank } => {
            let (a, b) = (ctx.word(left)?, ctx.word(right)?);
            let p = mult_r(params, &a, &b, *rank)?;
            let text = vec![
                ctx.show(&p.word),
                format!(
                    "factors {} | {} | {} (middle free: {})",
                    ctx.show(&p.left),
                    ctx.show(&p.middle),
                    ctx.show(&p.right),
                    p.middle_free
                ),
            ];
            Ok(Report::new(
                text,
                json!({
                    "result": ctx.show(&p.word),
                    "left": ctx.show(&p.left),
                    "middle": ctx.show(&p.middle),
                    "right": ctx.show(&p.right),
                    "middle_free": p.middle_free,
                }),
            ))
        }
        Command::Certify { word, at, dir, rank } => {
            let w = ctx.word(word)?;
            let occ = occurrence_at(ctx, &w, *at, *rank)?;
            let direction = match dir {
                DirArg::Left => Direction::Left,
                DirArg::Right => Direction::Right,
            };
            let outcomes = certify(params, &w, &occ, direction, occ.rank)?;
            let mut text = Vec::new();
            for o in &outcomes {
                text.push(format!(
                    "{:?} of {:?} side, {} members, witness {}",
                    o.kind,
                    o.certified_side,
                    o.sequence.len(),
                    ctx.show(&o.witness)
                ));
                if ctx.trace {
                    text.extend(o.sequence.iter().map(|s| format!("  {}", ctx.occ_text(s))));
                }
            }
            Ok(Report::new(
                text,
                json!({ "outcomes": outcomes.iter().map(|o| outcome_json(ctx, o)).collect::<Vec<_>>() }),
            ))
        }
        Command::WitnessInfinity { count, max_len } => witness_infinity(ctx, *count, *max_len),
        Command::VerifyLemmas { suite } => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let report = match suite {
                Suite::Finewilf => finewilf_suite(5),
                Suite::RankPrefix => rank_prefix_suite(params.tau, 10_000, 6, &mut rng),
                Suite::Shifts => shifts_suite(params.tau, 4, 6),
                Suite::Control => control_suite(4096),
                Suite::Rank1 => rank1_suite(params, 1000, 2000, &mut rng),
                Suite::Cubefree => cubefree_suite(16),
            };
            Ok(suite_report(&report))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Reduce { .. } => "reduce",
        Command::Rank { .. } => "rank",
        Command::Occurrences { .. } => "occurrences",
        Command::Turn { .. } => "turn",
        Command::Semican { .. } => "semican",
        Command::Can { .. } => "can",
        Command::Mult { .. } => "mult",
        Command::Certify { .. } => "certify",
        Command::WitnessInfinity { .. } => "witness-infinity",
        Command::VerifyLemmas { .. } => "verify-lemmas",
    }
}

/// Runs one invocation, writing to the given streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let json_out = cli.global.format == Format::Json;
    let name = command_name(&cli.command);
    let result = build_params(&cli.global).and_then(|params| {
        let ctx = Ctx {
            params,
            expanded: cli.global.expanded,
            trace: cli.global.trace,
            seed: cli.global.seed,
        };
        dispatch(&ctx, &cli.command)
    });
    match result {
        Ok(report) => {
            emit(out, json_out, name, &report);
            if report.ok {
                EXIT_OK
            } else {
                let _ = writeln!(err, "error[verification-failed]: {name} found violations");
                EXIT_VERIFY
            }
        }
        Err(e) => {
            if json_out {
                let body = json!({ "schema": 1, "command": name, "error": { "code": e.code(), "message": e.to_string() } });
                let _ = writeln!(err, "{body}");
            } else {
                let _ = writeln!(err, "error[{}]: {e}", e.code());
            }
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, json_out: bool, name: &str, report: &Report) {
    if json_out {
        let mut body = json!({ "schema": 1, "command": name, "ok": report.ok });
        if let (Value::Object(dst), Value::Object(src)) = (&mut body, &report.json) {
            dst.extend(src.clone());
        } else {
            body["data"] = report.json.clone();
        }
        let _ = writeln!(out, "{body}");
    } else {
        for line in &report.text {
            let _ = writeln!(out, "{line}");
        }
    }
}

/// Runs against the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
