mod input;
mod report;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use z4forge::bincodes::{write_g2m, BinaryCode, WeightDistribution};
use z4forge::construct::{
    census, default_workers, lemma3_violations, make_frame, search_extremal, CensusConfig, ExtendConfig, Mode, Search,
    DEFAULT_RANDOM_BUDGET,
};
use z4forge::paperdata::support_vector;
use z4forge::z4::{euclidean_distribution, extremality, hamming_distribution, lee_distribution, write_z4m, Method};
use z4forge::Z4Code;

use report::{Failure, Report, Status, EXIT_BUDGET, EXIT_INPUT};

/// Construction and verification of extremal Type II codes over Z4.
///
/// Inputs are file paths (`.z4m` generator rows over Z4, `.g2m` binary rows)
/// or `@NAME` for embedded data: figure matrices `@C32_7`..`@C32_15`,
/// `@C40_8`..`@C40_19`, `@C40_7prime`, `@G40` (also `@C40_7`), the census member
/// `@RM15_CENSUS`, and binary codes `@RM15`, `@B32_6`..`@B32_15`,
/// `@B40_7`..`@B40_19`, `@N32`, `@N40`, `@C40_7PRIME_RESIDUE`.
#[derive(Parser)]
#[command(name = "z4forge", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Workers {
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "Z4FORGE_WORKERS")]
    workers: Option<usize>,
}

impl Workers {
    fn get(self) -> usize {
        self.workers.filter(|&w| w > 0).unwrap_or_else(default_workers)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Self-duality, Type II and certified minimum weights of a code.
    Check { code: String },
    /// Residue and torsion codes with their weight distributions.
    Residue { code: String },
    /// Weight distribution of a code.
    Wenum {
        code: String,
        #[arg(long, value_enum, default_value = "euclidean")]
        weight: WeightKind,
        #[arg(long, conflicts_with = "weight")]
        hamming: bool,
        #[arg(long, conflicts_with = "weight")]
        lee: bool,
        #[arg(long, conflicts_with = "weight")]
        euclidean: bool,
        /// Binary input, or the residue of a Z4 code.
        #[arg(long, conflicts_with = "weight")]
        binary: bool,
    },
    /// Census of the Type II codes over a residue.
    Construct {
        #[arg(long)]
        residue: String,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: SearchMode,
        /// Sweep every completion of B instead of those containing all-ones.
        #[arg(long)]
        all_completions: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidates drawn in random mode.
        #[arg(long, default_value_t = DEFAULT_RANDOM_BUDGET)]
        limit: u64,
        #[command(flatten)]
        workers: Workers,
        /// Directory receiving each extremal code found as `.z4m`.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Most codes written by --emit.
        #[arg(long, default_value_t = 1024)]
        emit_max: usize,
    },
    /// Extremal code whose residue is the residue of CODE extended by a
    /// weight-4 vector.
    Extend {
        #[arg(long)]
        code: String,
        /// 1-based support, comma separated.
        #[arg(long)]
        support: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random candidates tried when the space is too large to sweep.
        #[arg(long, default_value_t = DEFAULT_RANDOM_BUDGET)]
        budget: u64,
        #[command(flatten)]
        workers: Workers,
        /// Write the generator rows of the found code here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a group of published claims and compare.
    Reproduce {
        #[arg(long, value_enum)]
        suite: Suite,
        /// External matrix list (for --suite external).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Allow suites that may run long.
        #[arg(long)]
        long: bool,
        #[command(flatten)]
        workers: Workers,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightKind {
    Hamming,
    Lee,
    Euclidean,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    Table1,
    Table2,
    Enumerators,
    Figures,
    Census32,
    Census40,
    External,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    match outcome {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            eprintln!("elapsed: {:.2?}", start.elapsed());
            ExitCode::from(report.status.exit_code())
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}

fn run(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Check { code } => check(&code),
        Command::Residue { code } => residue(&code),
        Command::Wenum {
            code,
            weight,
            hamming,
            lee,
            euclidean,
            binary,
        } => {
            let kind = match (hamming, lee, euclidean, binary) {
                (true, _, _, _) => WeightKind::Hamming,
                (_, true, _, _) => WeightKind::Lee,
                (_, _, true, _) => WeightKind::Euclidean,
                (_, _, _, true) => WeightKind::Binary,
                _ => weight,
            };
            wenum(&code, kind)
        }
        Command::Construct {
            residue,
            mode,
            all_completions,
            seed,
            limit,
            workers,
            emit,
            emit_max,
        } => {
            let search = match mode {
                SearchMode::Exhaustive => Search::Exhaustive,
                SearchMode::Random => Search::Random { seed, limit },
            };
            let b_mode = if all_completions { Mode::Free } else { Mode::AllOnes };
            construct(&residue, search, b_mode, workers.get(), emit, emit_max)
        }
        Command::Extend {
            code,
            support,
            seed,
            budget,
            workers,
            out,
        } => extend(&code, &support, seed, budget, workers.get(), out),
        Command::Reproduce {
            suite,
            data,
            long,
            workers,
        } => reproduce(suite, data, long, workers.get()),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Decomposition => "decomposition",
        Method::BruteForce => "brute-force",
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or("-".to_string(), |x| x.to_string())
}

fn check(arg: &str) -> Result<Report, Failure> {
    let loaded = input::z4_code(arg)?;
    let c = &loaded.value;
    let mut rep = Report::new("check", arg, loaded.digest);
    let self_dual = c.is_self_dual();
    rep.line(format!("n: {}", c.len()));
    rep.line(format!("k1: {}  k2: {}", c.k1(), c.k2()));
    rep.line(format!("self_dual: {self_dual}"));
    let r = if self_dual && c.is_type_ii() { Some(extremality(c)?) } else { None };
    rep.line(format!("type_ii: {}", r.is_some()));
    let mut result = json!({
        "n": c.len(),
        "k1": c.k1(),
        "k2": c.k2(),
        "self_dual": self_dual,
        "type_ii": r.is_some(),
    });
    if let Some(r) = r {
        rep.line(format!(
            "d_E: {}  d_L: {}  d_H: {}  ({})",
            opt(r.d_e),
            opt(r.d_l),
            opt(r.d_h),
            method_name(r.method)
        ));
        rep.line(format!("extremal: {}", r.extremal));
        if let Some(w) = &r.witness {
            rep.line(format!("witness: {w}"));
        }
        result["d_e"] = json!(r.d_e);
        result["d_l"] = json!(r.d_l);
        result["d_h"] = json!(r.d_h);
        result["method"] = json!(r.method);
        result["extremal"] = json!(r.extremal);
        result["witness"] = json!(r.witness.map(|w| w.to_string()));
    } else {
        rep.line("extremal: false");
        result["extremal"] = json!(false);
    }
    rep.result = result;
    Ok(rep)
}

fn distribution_json(w: &WeightDistribution) -> serde_json::Value {
    json!({
        "enumerator": w.to_string(),
        "counts": w.counts(),
    })
}

fn residue(arg: &str) -> Result<Report, Failure> {
    let loaded = input::z4_code(arg)?;
    let c = &loaded.value;
    let mut rep = Report::new("residue", arg, loaded.digest);
    let res = c.residue();
    let tor = c.torsion();
    let rw = res.weight_distribution_any()?;
    let tw = tor.weight_distribution_any()?;
    rep.line(format!("residue: [{}, {}]", res.len(), res.dim()));
    rep.line(write_g2m(res.basis()).trim_end().to_string());
    rep.line(format!("residue weights: {rw}"));
    rep.line(format!("torsion: [{}, {}]", tor.len(), tor.dim()));
    rep.line(write_g2m(tor.basis()).trim_end().to_string());
    rep.line(format!("torsion weights: {tw}"));
    rep.result = json!({
        "residue": { "dim": res.dim(), "generators": g2m_rows(res), "weights": distribution_json(&rw) },
        "torsion": { "dim": tor.dim(), "generators": g2m_rows(tor), "weights": distribution_json(&tw) },
    });
    Ok(rep)
}

fn g2m_rows(c: &BinaryCode) -> Vec<String> {
    c.basis().rows().iter().map(|r| r.to_string()).collect()
}

fn wenum(arg: &str, kind: WeightKind) -> Result<Report, Failure> {
    let (w, digest, label) = if input::is_binary(arg) {
        let loaded = input::binary_code(arg)?;
        if !matches!(kind, WeightKind::Binary | WeightKind::Hamming) {
            return Err(Failure::Input("binary input supports --binary or --hamming only".into()));
        }
        (loaded.value.weight_distribution_any()?, loaded.digest, "binary")
    } else {
        let loaded = input::z4_code(arg)?;
        let c = &loaded.value;
        let (w, label) = match kind {
            WeightKind::Binary => (c.residue().weight_distribution_any()?, "residue"),
            WeightKind::Hamming => (hamming_distribution(c)?, "hamming"),
            WeightKind::Lee => (lee_distribution(c)?, "lee"),
            WeightKind::Euclidean => (euclidean_distribution(c)?, "euclidean"),
        };
        (w, loaded.digest, label)
    };
    let mut rep = Report::new("wenum", arg, digest);
    rep.line(format!("{label}: {w}"));
    rep.result = json!({ "weight": label, "distribution": distribution_json(&w) });
    Ok(rep)
}

fn construct(arg: &str, search: Search, mode: Mode, workers: usize, emit: Option<PathBuf>, emit_max: usize) -> Result<Report, Failure> {
    let loaded = input::binary_code(arg)?;
    let frame = make_frame(&loaded.value)?;
    let config = CensusConfig {
        mode,
        search,
        workers,
        collect: if emit.is_some() { emit_max } else { 0 },
    };
    let r = census(&frame, &config)?;
    let mut rep = Report::new("construct", arg, loaded.digest);
    if let Search::Random { seed, .. } = search {
        rep.seed = Some(seed);
    }
    rep.workers = Some(r.workers);
    rep.line(format!("n: {}  k: {}  mode: {:?}", r.n, r.k, r.mode));
    rep.line(format!("candidates: {}", r.n_candidates));
    rep.line(format!("type_ii: {}", r.n_type_ii));
    rep.line(format!("extremal: {}", r.n_extremal));
    rep.line(format!("fingerprint classes: {}", r.fingerprint_classes.len()));
    const SHOWN: usize = 20;
    for class in r.fingerprint_classes.iter().take(SHOWN) {
        let f = &class.fingerprint;
        rep.line(format!(
            "  count {}: k1 {} k2 {} residue {} ew16 {}",
            class.count, f.k1, f.k2, f.residue, f.ew16
        ));
    }
    if r.fingerprint_classes.len() > SHOWN {
        rep.line(format!("  ... {} more (see --json)", r.fingerprint_classes.len() - SHOWN));
    }
    if let Some(fb) = &r.representative {
        rep.line(format!("representative free bits: {fb}"));
    }
    if let Some(dir) = emit {
        std::fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (t, fb) in r.collected.iter().enumerate() {
            let rows = frame.generator_rows(&frame.complete_b(fb)?)?;
            let path = dir.join(format!("extremal_{t:05}.z4m"));
            std::fs::write(&path, format!("# free bits {}\n{}", fb.bits(), write_z4m(&rows)))
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        rep.line(format!("emitted: {} files in {}", r.collected.len(), dir.display()));
    }
    rep.result = serde_json::to_value(&r).expect("census report serialises");
    if matches!(search, Search::Random { .. }) && r.n_extremal == 0 {
        rep.status = Status::BudgetExhausted;
    }
    Ok(rep)
}

fn parse_support(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Input(format!("bad support entry {t:?}")))
        })
        .collect()
}

fn extend(arg: &str, support: &str, seed: u64, budget: u64, workers: usize, out: Option<PathBuf>) -> Result<Report, Failure> {
    let loaded = input::z4_code(arg)?;
    let c: &Z4Code = &loaded.value;
    let positions = parse_support(support)?;
    let v = support_vector(c.len(), &positions)?;
    let mut rep = Report::new("extend", arg, loaded.digest);
    rep.seed = Some(seed);
    rep.workers = Some(workers);
    let violations = lemma3_violations(c, &v)?;
    if !violations.is_empty() {
        return Err(Failure::Input(format!("hypotheses violated: {}", violations.join("; "))));
    }
    rep.line("hypotheses: length in {24, 32, 40}, extremal Type II, weight 4, outside residue, doubly even extension: all hold");
    let frame = make_frame(&c.residue().extend(&v)?)?;
    let config = ExtendConfig { budget, seed, workers };
    let e = match search_extremal(frame, &config) {
        Ok(e) => e,
        Err(z4forge::Error::BudgetExhausted { budget }) => {
            rep.status = Status::BudgetExhausted;
            rep.line(format!("no extremal code within {budget} candidates"));
            rep.result = json!({ "found": false, "budget": budget });
            return Ok(rep);
        }
        Err(err) => return Err(err.into()),
    };
    let r = extremality(&e.code)?;
    let rw = e.code.residue().weight_distribution_any()?;
    rep.line(format!("search: {}", if e.exhaustive { "exhaustive" } else { "random" }));
    rep.line(format!("candidates examined: {}", e.candidates));
    rep.line(format!("free bits: {}", e.free_bits.bits()));
    rep.line(format!("residue dim: {}", e.code.residue().dim()));
    rep.line(format!("residue weights: {rw}"));
    rep.line(format!("d_E: {}  d_L: {}  d_H: {}  extremal: {}", opt(r.d_e), opt(r.d_l), opt(r.d_h), r.extremal));
    let rows = e.frame.generator_rows(&e.frame.complete_b(&e.free_bits)?)?;
    if let Some(path) = &out {
        std::fs::write(path, write_z4m(&rows)).map_err(|err| Failure::Input(format!("{}: {err}", path.display())))?;
        rep.line(format!("written: {}", path.display()));
    }
    rep.result = json!({
        "found": true,
        "exhaustive": e.exhaustive,
        "candidates": e.candidates,
        "free_bits": e.free_bits.bits().to_string(),
        "residue_dim": e.code.residue().dim(),
        "residue_weights": distribution_json(&rw),
        "d_e": r.d_e,
        "d_l": r.d_l,
        "d_h": r.d_h,
        "extremal": r.extremal,
        "generators": rows.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    Ok(rep)
}

fn reproduce(suite: Suite, data: Option<PathBuf>, long: bool, workers: usize) -> Result<Report, Failure> {
    let (name, claims, digest) = match suite {
        Suite::Table1 => ("table1", reproduce::table1()?, None),
        Suite::Table2 => ("table2", reproduce::table2()?, None),
        Suite::Enumerators => ("enumerators", reproduce::enumerators()?, None),
        Suite::Figures => ("figures", reproduce::figures()?, None),
        Suite::Census32 => ("census32", reproduce::census32(workers)?, None),
        Suite::Census40 => {
            if !long {
                return Err(Failure::Input("census40 runs long; pass --long".into()));
            }
            ("census40", reproduce::census40(workers)?, None)
        }
        Suite::External => {
            let path = data.ok_or_else(|| Failure::Input("--suite external needs --data <file>".into()))?;
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if !long {
                return Err(Failure::Input("external verification runs long; pass --long".into()));
            }
            ("external", reproduce::external(&text)?, Some(input::text_digest(&text)))
        }
    };
    let mut rep = Report::new("reproduce", name, digest.unwrap_or_default());
    if matches!(suite, Suite::Census32 | Suite::Census40) {
        rep.workers = Some(workers);
    }
    for c in &claims {
        rep.line(format!(
            "{} {}: expected {}, actual {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.actual
        ));
    }
    let failed = claims.iter().filter(|c| !c.pass).count();
    rep.line(format!("{} claims, {failed} failed", claims.len()));
    if failed > 0 {
        rep.status = Status::Mismatch;
    }
    rep.result = json!({ "suite": name, "claims": claims });
    Ok(rep)
}
