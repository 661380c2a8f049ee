//! `subseq` — counting, moments, simulation, and asymptotics for common
//! subsequences of two words, with machine-readable JSON output.
//!
//! Exit codes: 0 success, 2 usage or input-parse error, 3 work budget
//! exceeded, 4 file I/O error, 5 internal cross-check failure.

mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use subseq::asymptotics::{
    exact_log_expected_total, master_approx, regime_formula, KappaBranch, RegimeParams,
};
use subseq::count::{count_all_direct, count_by_level, count_k};
use subseq::moments::{expected_count_k, expected_total, second_moment_bounds, Dist, ProbVector};
use subseq::montecarlo::{clt_trend, simulate, SimulationReport};
use subseq::seq::Sequence;
use subseq::{BigCount, ExactRational};

use json::Json;

/// Default ceiling on DP cell work (table cells × levels) for `count`.
const DEFAULT_CELL_BUDGET: u128 = 2_000_000_000;

#[derive(Parser)]
#[command(
    name = "subseq",
    version,
    about = "Count common-subsequence embedding pairs of two words and study their statistics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count k-long or all-length embedding pairs of two words
    Count(CountArgs),
    /// Exact moments of the counts under i.i.d. random letters
    Moments(MomentsArgs),
    /// Shorthand for `moments --bounds`
    Bounds(MomentsArgs),
    /// Sample random word pairs and compare the standardized counts to the normal law
    Simulate(SimulateArgs),
    /// Log-space asymptotics of the expected all-length total
    Asymptotics(AsymptoticsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Encoding {
    /// One word per file: first non-blank line, each non-whitespace character a symbol
    Chars,
    /// Whitespace-separated nonnegative integer symbol ids
    Tokens,
}

#[derive(Args)]
struct CountArgs {
    /// File holding the first word
    x: PathBuf,
    /// File holding the second word
    y: PathBuf,
    /// Count embedding pairs of exactly this length (default: all-length total)
    #[arg(long, conflicts_with = "per_level")]
    k: Option<usize>,
    /// Emit the whole per-length profile plus the total
    #[arg(long)]
    per_level: bool,
    /// How the input files encode symbols
    #[arg(long, value_enum, default_value_t = Encoding::Chars)]
    encoding: Encoding,
    /// Alphabet size (default: inferred as max symbol id + 1 over both words)
    #[arg(long)]
    alphabet: Option<u32>,
    /// Max DP cell work; overrides the SUBSEQ_BUDGET environment variable
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("dist").required(true).args(["alphabet", "probs"])))]
struct MomentsArgs {
    /// Word length
    #[arg(long)]
    n: u64,
    /// Embedding length (default: the all-length total)
    #[arg(long)]
    k: Option<u64>,
    /// Uniform alphabet of this size
    #[arg(long)]
    alphabet: Option<u32>,
    /// Exact letter probabilities, e.g. "7/10,3/10" or "0.7,0.3" (must sum to 1)
    #[arg(long)]
    probs: Option<String>,
    /// Also emit the second-moment bounds (uniform alphabet, requires --k)
    #[arg(long)]
    bounds: bool,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("dist").required(true).args(["alphabet", "probs"])))]
struct SimulateArgs {
    /// Word length (single run)
    #[arg(long, conflicts_with = "trend", required_unless_present = "trend")]
    n: Option<u64>,
    /// Embedding length
    #[arg(long)]
    k: u64,
    /// Uniform alphabet of this size
    #[arg(long)]
    alphabet: Option<u32>,
    /// Exact letter probabilities, e.g. "7/10,3/10" (must sum to 1)
    #[arg(long)]
    probs: Option<String>,
    /// Number of sampled word pairs
    #[arg(long)]
    samples: u64,
    /// Master seed; all randomness is a pure function of (seed, sample index)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism; never changes results)
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated increasing word lengths: one run per length
    #[arg(long, value_delimiter = ',')]
    trend: Option<Vec<u64>>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Word length
    #[arg(long)]
    n: u64,
    /// Alphabet growth coefficient in a_n = a·n^alpha
    #[arg(long)]
    a: f64,
    /// Alphabet growth exponent, in [0, 2)
    #[arg(long)]
    alpha: f64,
    /// Force the exact log-space sum even for n > 300 (O(n) work)
    #[arg(long)]
    compare: bool,
}

enum CmdError {
    Usage(String),
    Budget(String),
    Io(String),
    CrossCheck(String),
}

impl CmdError {
    fn code(&self) -> u8 {
        match self {
            CmdError::Usage(_) => 2,
            CmdError::Budget(_) => 3,
            CmdError::Io(_) => 4,
            CmdError::CrossCheck(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::Budget(m) | CmdError::Io(m) | CmdError::CrossCheck(m) => m,
        }
    }
}

impl From<subseq::Error> for CmdError {
    fn from(e: subseq::Error) -> Self {
        match e {
            subseq::Error::BudgetExceeded { .. } => CmdError::Budget(e.to_string()),
            _ => CmdError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Count(args) => cmd_count(args),
        Cmd::Moments(args) => cmd_moments(args, "moments", args.bounds),
        Cmd::Bounds(args) => cmd_moments(args, "bounds", true),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Asymptotics(args) => cmd_asymptotics(args),
    };
    match outcome {
        Ok(doc) => {
            // tolerate a closed pipe (e.g. `subseq ... | head`)
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{}", doc.to_document());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))
}

/// chars encoding: first non-blank line, one symbol per non-whitespace
/// character, ids assigned by first appearance into the shared `map`.
fn parse_chars(text: &str, path: &Path, map: &mut Vec<char>) -> Result<Vec<u32>, CmdError> {
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| CmdError::Usage(format!("{}: no non-blank line", path.display())))?;
    Ok(line
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match map.iter().position(|&m| m == c) {
            Some(i) => i as u32,
            None => {
                map.push(c);
                (map.len() - 1) as u32
            }
        })
        .collect())
}

/// tokens encoding: the whole file, whitespace-split into integer symbol ids.
fn parse_tokens(text: &str, path: &Path) -> Result<Vec<u32>, CmdError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| {
                CmdError::Usage(format!(
                    "{}: token {t:?} is not a nonnegative integer symbol id",
                    path.display()
                ))
            })
        })
        .collect()
}

fn resolve_budget(flag: Option<u128>) -> Result<u128, CmdError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("SUBSEQ_BUDGET") {
        Ok(v) => v.trim().parse::<u128>().map_err(|_| {
            CmdError::Usage(format!("SUBSEQ_BUDGET must be a nonnegative integer, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_CELL_BUDGET),
    }
}

fn cmd_count(args: &CountArgs) -> Result<Json, CmdError> {
    let budget = resolve_budget(args.budget)?;
    let x_text = read_file(&args.x)?;
    let y_text = read_file(&args.y)?;

    let mut map: Vec<char> = Vec::new();
    let (xs, ys) = match args.encoding {
        Encoding::Chars => (
            parse_chars(&x_text, &args.x, &mut map)?,
            parse_chars(&y_text, &args.y, &mut map)?,
        ),
        Encoding::Tokens => (
            parse_tokens(&x_text, &args.x)?,
            parse_tokens(&y_text, &args.y)?,
        ),
    };
    if xs.is_empty() || ys.is_empty() {
        return Err(CmdError::Usage("input words must be nonempty".into()));
    }
    let inferred = xs.iter().chain(ys.iter()).copied().max().unwrap() + 1;
    let alphabet = args.alphabet.unwrap_or(inferred);
    let x = Sequence::new(xs, alphabet)?;
    let y = Sequence::new(ys, alphabet)?;
    let (nx, ny) = (x.len(), y.len());

    // budget guard: one table of nx·ny cells per level touched
    let levels = match args.k {
        Some(k) => k,
        None => nx.min(ny) + 1, // full profile + direct-recurrence cross-check
    };
    let work = nx as u128 * ny as u128 * (levels.max(1) as u128);
    if work > budget {
        return Err(CmdError::Budget(format!(
            "counting needs {work} cell updates but the budget is {budget} \
             (raise --budget or SUBSEQ_BUDGET)"
        )));
    }

    let result = if let Some(k) = args.k {
        let count = count_k(&x, &y, k)?;
        Json::Obj(vec![
            ("n_x", Json::UInt(nx as u128)),
            ("n_y", Json::UInt(ny as u128)),
            ("k", Json::UInt(k as u128)),
            ("count", json::big(&count)),
        ])
    } else {
        let per_level = count_by_level(&x, &y)?;
        let direct = count_all_direct(&x, &y)?;
        let total = per_level
            .iter()
            .fold(BigCount::zero(), |acc, c| acc + c);
        if total != direct {
            return Err(CmdError::CrossCheck(format!(
                "leveled sum {total} disagrees with the direct recurrence {direct}"
            )));
        }
        let mut fields = vec![
            ("n_x", Json::UInt(nx as u128)),
            ("n_y", Json::UInt(ny as u128)),
        ];
        if args.per_level {
            fields.push((
                "per_level",
                Json::Arr(per_level.iter().map(json::big).collect()),
            ));
        }
        fields.push(("total", json::big(&direct)));
        Json::Obj(fields)
    };

    let inputs = Json::Obj(vec![
        ("x", Json::Str(args.x.display().to_string())),
        ("y", Json::Str(args.y.display().to_string())),
        (
            "encoding",
            Json::Str(
                match args.encoding {
                    Encoding::Chars => "chars",
                    Encoding::Tokens => "tokens",
                }
                .to_string(),
            ),
        ),
        ("alphabet_size", Json::UInt(alphabet as u128)),
        (
            "k",
            args.k.map_or(Json::Null, |k| Json::UInt(k as u128)),
        ),
        ("per_level", Json::Bool(args.per_level)),
        ("budget", Json::UInt(budget)),
        (
            "symbol_map",
            if args.encoding == Encoding::Chars {
                Json::Arr(map.iter().map(|c| Json::Str(c.to_string())).collect())
            } else {
                Json::Null
            },
        ),
    ]);
    Ok(json::envelope("count", inputs, result))
}

/// Parses one probability: "n/d", an integer, or a decimal (decimals convert
/// exactly — "0.7" is 7/10, never a float).
fn parse_prob(tok: &str) -> Result<ExactRational, CmdError> {
    let bad = || CmdError::Usage(format!("cannot parse probability {tok:?}"));
    let tok = tok.trim();
    if let Some((whole, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = if whole.is_empty() {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(ExactRational::new(whole * &scale + digits, scale));
    }
    tok.parse::<ExactRational>().map_err(|_| bad())
}

fn parse_dist(alphabet: Option<u32>, probs: &Option<String>) -> Result<Dist, CmdError> {
    match (alphabet, probs) {
        (Some(a), None) => Ok(Dist::Uniform(a)),
        (None, Some(list)) => {
            let probs = list
                .split(',')
                .map(parse_prob)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Dist::Probs(ProbVector::new(probs)?))
        }
        _ => unreachable!("clap enforces exactly one of --alphabet/--probs"),
    }
}

fn dist_json(dist: &Dist) -> Json {
    match dist {
        Dist::Uniform(a) => Json::Obj(vec![("uniform", Json::UInt(*a as u128))]),
        Dist::Probs(p) => Json::Obj(vec![(
            "probs",
            Json::Arr(p.probs().iter().map(json::rational).collect()),
        )]),
    }
}

fn cmd_moments(args: &MomentsArgs, command: &'static str, bounds: bool) -> Result<Json, CmdError> {
    let dist = parse_dist(args.alphabet, &args.probs)?;

    let mut fields = Vec::new();
    match args.k {
        Some(k) => fields.push(("mean", json::rational(&expected_count_k(args.n, k, &dist)?))),
        None => fields.push((
            "total_mean",
            json::rational(&expected_total(args.n, &dist)?),
        )),
    }
    if bounds {
        let k = args.k.ok_or_else(|| {
            CmdError::Usage("--bounds needs --k: the bounds concern one embedding length".into())
        })?;
        let a = match &dist {
            Dist::Uniform(a) => *a,
            Dist::Probs(_) => {
                return Err(CmdError::Usage(
                    "second-moment bounds are stated for the uniform alphabet; use --alphabet"
                        .into(),
                ))
            }
        };
        let b = second_moment_bounds(args.n, k, a)?;
        fields.push(("second_moment_lower", json::rational(&b.lower)));
        fields.push(("second_moment_upper", json::rational(&b.upper)));
    }

    let inputs = Json::Obj(vec![
        ("n", Json::UInt(args.n as u128)),
        ("k", args.k.map_or(Json::Null, |k| Json::UInt(k as u128))),
        ("dist", dist_json(&dist)),
        ("bounds", Json::Bool(bounds)),
    ]);
    Ok(json::envelope(command, inputs, Json::Obj(fields)))
}

fn report_json(r: &SimulationReport) -> Json {
    Json::Obj(vec![
        ("n", Json::UInt(r.n as u128)),
        ("k", Json::UInt(r.k as u128)),
        ("num_samples", Json::UInt(r.num_samples as u128)),
        ("seed", Json::UInt(r.seed as u128)),
        ("sample_mean", Json::Float(r.sample_mean)),
        ("sample_variance", Json::Float(r.sample_variance)),
        ("kolmogorov_distance", Json::Float(r.kolmogorov_distance)),
        ("theoretical_mean", json::rational(&r.theoretical_mean)),
        (
            "histogram",
            Json::Arr(
                r.histogram
                    .iter()
                    .map(|b| {
                        Json::Obj(vec![
                            ("lo", Json::Float(b.lo)),
                            ("hi", Json::Float(b.hi)),
                            ("count", Json::UInt(b.count as u128)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Json, CmdError> {
    let dist = parse_dist(args.alphabet, &args.probs)?;
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));

    let result = if let Some(trend) = &args.trend {
        let pairs = clt_trend(trend, args.k, &dist, args.samples, args.seed)?;
        Json::Obj(vec![(
            "trend",
            Json::Arr(
                pairs
                    .iter()
                    .map(|(n, d)| {
                        Json::Obj(vec![
                            ("n", Json::UInt(*n as u128)),
                            ("kolmogorov_distance", Json::Float(*d)),
                        ])
                    })
                    .collect(),
            ),
        )])
    } else {
        let n = args.n.expect("clap requires --n without --trend");
        report_json(&simulate(n, args.k, &dist, args.samples, args.seed, threads)?)
    };

    let inputs = Json::Obj(vec![
        ("n", args.n.map_or(Json::Null, |n| Json::UInt(n as u128))),
        ("k", Json::UInt(args.k as u128)),
        ("dist", dist_json(&dist)),
        ("samples", Json::UInt(args.samples as u128)),
        ("seed", Json::UInt(args.seed as u128)),
        ("threads", Json::UInt(threads as u128)),
        (
            "trend",
            args.trend.as_ref().map_or(Json::Null, |t| {
                Json::Arr(t.iter().map(|n| Json::UInt(*n as u128)).collect())
            }),
        ),
    ]);
    Ok(json::envelope("simulate", inputs, result))
}

fn branch_name(b: KappaBranch) -> &'static str {
    match b {
        KappaBranch::ClosedForm => "closed-form",
        KappaBranch::LowGrowth => "low-growth",
        KappaBranch::MidGrowth => "mid-growth",
        KappaBranch::HighGrowth => "high-growth",
        KappaBranch::Linear => "linear",
        KappaBranch::Superlinear => "superlinear",
    }
}

fn cmd_asymptotics(args: &AsymptoticsArgs) -> Result<Json, CmdError> {
    let p = RegimeParams::new(args.n, args.a, args.alpha)?;
    let regime = regime_formula(args.n, args.a, args.alpha)?;
    let master = master_approx(args.n, p.a_n)?;
    let exact = if args.compare || args.n <= 300 {
        Some(exact_log_expected_total(args.n, p.a_n)?)
    } else {
        None
    };

    let regime_ln = regime.ln().expect("regime formula is positive");
    let master_ln = master.ln().expect("master approximation is positive");
    let mut fields = vec![
        ("a_n", Json::Float(p.a_n)),
        ("k_star", Json::Float(p.k_star)),
        ("big_a", Json::Float(p.big_a)),
        ("kappa", Json::Float(p.kappa)),
        ("branch", Json::Str(branch_name(p.branch).to_string())),
        ("regime", json::log_real(regime)),
        ("master", json::log_real(master)),
    ];
    match exact {
        Some(e) => {
            let e_ln = e.ln().expect("the exact total is positive");
            fields.push(("exact", json::log_real(e)));
            fields.push(("log_ratio_regime", Json::Float(regime_ln - e_ln)));
            fields.push(("log_ratio_master", Json::Float(master_ln - e_ln)));
        }
        None => {
            fields.push(("exact", Json::Null));
            fields.push(("log_ratio_regime", Json::Null));
            fields.push(("log_ratio_master", Json::Null));
        }
    }

    let inputs = Json::Obj(vec![
        ("n", Json::UInt(args.n as u128)),
        ("a", Json::Float(args.a)),
        ("alpha", Json::Float(args.alpha)),
        ("compare", Json::Bool(args.compare)),
    ]);
    Ok(json::envelope("asymptotics", inputs, Json::Obj(fields)))
}
