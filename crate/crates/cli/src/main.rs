//! Command-line interface: solve games exactly, decide class membership,
//! verify profiles, run the enumeration oracle, reconstruct minimal
//! polynomials and generate seeded corpora.
//!
//! Exit codes: 0 success, 2 not in class, 3 positive-dimensional,
//! 4 input error.

use clap::{Args, Parser, Subcommand};
use ipie_core::algebraic::{to_radicals, AlgebraicNumber};
use ipie_core::dyadic::{parse_decimal, parse_rational, rational_to_decimal};
use ipie_core::factor::factor_over_q;
use ipie_core::fixtures::{random_game, SplitMix64};
use ipie_core::game::{verify_equilibrium, Game, MixedProfile, ProfileCoord};
use ipie_core::lll::{minimal_polynomial, KllParams};
use ipie_core::pipeline::{
    all_equilibria, decide_membership_payoffs, enumerate_oracle, Equilibrium, MembershipVerdict,
    NonMemberReason, PipelineError, SolveOptions,
};
use ipie_core::unipoly::UniPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ipie", about = "Exact Nash equilibria of integer-payoff games with irrational equilibria", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveFlags {
    /// Override the reconstruction precision in bits
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Override the minimal-polynomial degree bound
    #[arg(long)]
    degree: Option<usize>,
    /// Override the coefficient height bound
    #[arg(long)]
    height: Option<i64>,
    /// Newton iteration cap per start
    #[arg(long, default_value_t = 256)]
    max_iters: u32,
    /// Number of deterministic starting points
    #[arg(long, default_value_t = 32)]
    starts: usize,
}

#[derive(Args, Clone)]
struct OutputFlags {
    /// Decimal digits for approximations
    #[arg(long, default_value_t = 12)]
    digits: usize,
    /// Emit a JSON document instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all equilibria of a game
    Solve {
        game: PathBuf,
        #[command(flatten)]
        solve: SolveFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Decide membership in the integer-payoff irrational-equilibria class
    Membership {
        game: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Verify whether a profile is a Nash equilibrium
    Verify {
        game: PathBuf,
        profile: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Enumerate all equilibria by support enumeration (ground truth)
    Oracle {
        game: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Reconstruct the minimal polynomial of a decimal approximation,
    /// or factor a polynomial given with --check
    Minpoly {
        /// Decimal approximation, e.g. 0.3588989435
        value: Option<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 3)]
        height: i64,
        /// Factor the polynomial given as comma-separated coefficients
        /// (constant term first) instead of reconstructing
        #[arg(long)]
        check: Option<String>,
    },
    /// Generate seeded random integer games, one JSON document per line
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Strategy counts, e.g. 2,2,2
        #[arg(long, default_value = "2,2")]
        strategies: String,
        /// Payoff magnitude bound
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Pipeline(PipelineError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 4,
            CliError::Pipeline(PipelineError::NotIpie) => 2,
            CliError::Pipeline(PipelineError::NoUnivariate) => 3,
            CliError::Pipeline(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Pipeline(e)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve {
            game,
            solve,
            output,
        } => {
            let parsed = parse_game_file(&game)?;
            let game = parsed.integer_game().map_err(CliError::Input)?;
            let opts = SolveOptions {
                precision_bits: solve.precision_bits,
                degree_bound: solve.degree,
                height_bound: solve.height.map(BigInt::from),
                max_iters: solve.max_iters,
                starts: solve.starts,
            };
            let set = all_equilibria(&game, &opts)?;
            if output.json {
                println!("{}", solve_json(&game, &set.equilibria, output.digits));
            } else {
                render_solve(&game, &set.equilibria, set.tuples.len(), output.digits);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Membership { game, output } => {
            let parsed = parse_game_file(&game)?;
            let verdict =
                decide_membership_payoffs(parsed.strategies.clone(), &parsed.payoffs)?;
            if output.json {
                println!("{}", membership_json(&verdict));
            } else {
                render_membership(&verdict);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            game,
            profile,
            output,
        } => {
            let parsed = parse_game_file(&game)?;
            let game = parsed.integer_game().map_err(CliError::Input)?;
            let profile = parse_profile_file(&profile, &game)?;
            let ok = verify_equilibrium(&game, &profile)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if output.json {
                println!("{{\"equilibrium\": {ok}}}");
            } else {
                println!("equilibrium: {ok}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { game, output } => {
            let parsed = parse_game_file(&game)?;
            let game = parsed.integer_game().map_err(CliError::Input)?;
            let outcome = enumerate_oracle(&game)?;
            if output.json {
                println!("{}", oracle_json(&outcome.equilibria, output.digits));
            } else {
                println!("{} equilibria", outcome.equilibria.len());
                for (i, p) in outcome.equilibria.iter().enumerate() {
                    println!("equilibrium {}:", i + 1);
                    render_profile(p, output.digits);
                }
                if outcome.degenerate_supports > 0 {
                    eprintln!(
                        "note: {} degenerate support combinations skipped",
                        outcome.degenerate_supports
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Minpoly {
            value,
            degree,
            height,
            check,
        } => {
            if let Some(coeffs) = check {
                let poly = parse_coeff_list(&coeffs)?;
                for (factor, mult) in factor_over_q(&poly) {
                    for _ in 0..mult {
                        println!("{}", coeff_list(&factor));
                    }
                }
                return Ok(ExitCode::SUCCESS);
            }
            let Some(value) = value else {
                return Err(CliError::Input(
                    "minpoly needs a decimal value or --check".into(),
                ));
            };
            let (approx, bits) = parse_decimal(&value)
                .ok_or_else(|| CliError::Input(format!("not a decimal literal: {value}")))?;
            let params = KllParams::new(degree.max(1), BigInt::from(height.max(1)));
            let poly = minimal_polynomial(&approx, bits, &params)
                .map_err(|e| CliError::Pipeline(e.into()))?;
            println!("{poly}");
            println!("{}", coeff_list(&poly));
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus {
            seed,
            count,
            strategies,
            bound,
        } => {
            let counts: Result<Vec<usize>, _> =
                strategies.split(',').map(|s| s.trim().parse()).collect();
            let counts =
                counts.map_err(|_| CliError::Input(format!("bad strategy list: {strategies}")))?;
            if counts.iter().any(|&k| k < 2) {
                return Err(CliError::Input("every player needs at least 2 strategies".into()));
            }
            let mut rng = SplitMix64::new(seed);
            for _ in 0..count {
                let game = random_game(&mut rng, &counts, bound.max(0));
                println!("{}", game_json(&game));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

struct ParsedGame {
    strategies: Vec<usize>,
    payoffs: Vec<Vec<BigRational>>,
}

impl ParsedGame {
    fn integer_game(&self) -> Result<Game, String> {
        let mut rows = Vec::with_capacity(self.payoffs.len());
        for row in &self.payoffs {
            let mut out = Vec::with_capacity(row.len());
            for c in row {
                if !c.denom().is_one() {
                    return Err(format!("non-integer payoff {c}"));
                }
                out.push(c.numer().clone());
            }
            rows.push(out);
        }
        Game::new(self.strategies.clone(), rows).map_err(|e| e.to_string())
    }
}

fn parse_game_file(path: &PathBuf) -> Result<ParsedGame, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    let players = value
        .get("players")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| CliError::Input("missing integer field \"players\"".into()))?
        as usize;
    let strategies: Vec<usize> = value
        .get("strategies")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::Input("missing array field \"strategies\"".into()))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|k| k as usize)
                .ok_or_else(|| CliError::Input("strategies must be integers".into()))
        })
        .collect::<Result<_, _>>()?;
    if strategies.len() != players {
        return Err(CliError::Input(format!(
            "\"players\" is {players} but \"strategies\" lists {}",
            strategies.len()
        )));
    }
    if strategies.iter().any(|&k| k < 2) {
        return Err(CliError::Input(
            "every entry of \"strategies\" must be at least 2".into(),
        ));
    }
    let k_star: usize = strategies.iter().product();
    let payoff_rows = value
        .get("payoffs")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::Input("missing array field \"payoffs\"".into()))?;
    if payoff_rows.len() != players {
        return Err(CliError::Input(format!(
            "\"payoffs\" must have one row per player ({players}), got {}",
            payoff_rows.len()
        )));
    }
    let mut payoffs = Vec::with_capacity(players);
    for (i, row) in payoff_rows.iter().enumerate() {
        let entries = row.as_array().ok_or_else(|| {
            CliError::Input(format!("payoffs[{i}] must be an array of numbers"))
        })?;
        if entries.len() != k_star {
            return Err(CliError::Input(format!(
                "payoffs[{i}] must list {k_star} entries (row-major over pure profiles), got {}",
                entries.len()
            )));
        }
        let mut out = Vec::with_capacity(k_star);
        for (j, e) in entries.iter().enumerate() {
            let q = json_number_to_rational(e).ok_or_else(|| {
                CliError::Input(format!("payoffs[{i}][{j}] is not a number"))
            })?;
            out.push(q);
        }
        payoffs.push(out);
    }
    Ok(ParsedGame {
        strategies,
        payoffs,
    })
}

fn json_number_to_rational(v: &serde_json::Value) -> Option<BigRational> {
    if let Some(i) = v.as_i64() {
        return Some(BigRational::from_integer(BigInt::from(i)));
    }
    if let Some(s) = v.as_str() {
        return parse_rational(s);
    }
    if let Some(f) = v.as_f64() {
        // non-integral JSON numbers arrive here; keep them exact enough to
        // flag as non-integer downstream
        return BigRational::from_float(f);
    }
    None
}

fn parse_profile_file(path: &PathBuf, game: &Game) -> Result<MixedProfile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    let rows = value
        .get("profile")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::Input("missing array field \"profile\"".into()))?;
    let mut probs = Vec::with_capacity(rows.len());
    for row in rows {
        let entries = row
            .as_array()
            .ok_or_else(|| CliError::Input("profile rows must be arrays".into()))?;
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let q = match e {
                serde_json::Value::String(s) => parse_rational(s),
                other => json_number_to_rational(other),
            }
            .ok_or_else(|| CliError::Input(format!("bad probability: {e}")))?;
            out.push(ProfileCoord::Rational(q));
        }
        probs.push(out);
    }
    MixedProfile::new(game, probs).map_err(|e| CliError::Input(e.to_string()))
}

fn parse_coeff_list(s: &str) -> Result<UniPoly, CliError> {
    let coeffs: Result<Vec<BigInt>, _> = s
        .split(',')
        .map(|c| c.trim().parse::<BigInt>())
        .collect();
    let coeffs = coeffs.map_err(|_| CliError::Input(format!("bad coefficient list: {s}")))?;
    let poly = UniPoly::new(coeffs);
    if poly.degree() == 0 || poly.is_zero() {
        return Err(CliError::Input("polynomial must be nonconstant".into()));
    }
    Ok(poly)
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn coeff_list(p: &UniPoly) -> String {
    p.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Full per-player probability rows of an equilibrium given in free
/// coordinates.
fn equilibrium_rows(game: &Game, eq: &Equilibrium) -> Vec<Vec<AlgebraicNumber>> {
    let mut rows = Vec::new();
    let mut idx = 0;
    for &k in game.strategy_counts() {
        let mine = &eq.coords[idx..idx + k - 1];
        idx += k - 1;
        let mut row: Vec<AlgebraicNumber> = mine.to_vec();
        if k == 2 {
            row.push(mine[0].one_minus());
        } else {
            // rational tail: 1 - sum (free coordinates are rational here)
            let sum: BigRational = mine
                .iter()
                .map(|c| c.as_rational().expect("rational coordinates"))
                .sum();
            row.push(AlgebraicNumber::from_rational(&(BigRational::one() - sum)));
        }
        rows.push(row);
    }
    rows
}

fn describe_coord(a: &AlgebraicNumber, digits: usize) -> String {
    let decimal = rational_to_decimal(&a.approx(digits as u32 * 4 + 16), digits);
    match to_radicals(a) {
        Ok(r) => format!("{r} ~ {decimal} [minpoly {}]", a.minpoly()),
        Err(_) => format!("~ {decimal} [minpoly {}]", a.minpoly()),
    }
}

fn render_solve(game: &Game, equilibria: &[Equilibrium], tuples: usize, digits: usize) {
    println!("{} equilibria", equilibria.len());
    eprintln!("(certified solution tuples: {tuples})");
    for (i, eq) in equilibria.iter().enumerate() {
        println!("equilibrium {}:", i + 1);
        for (p, row) in equilibrium_rows(game, eq).iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|a| describe_coord(a, digits)).collect();
            println!("  player {}: {}", p + 1, cells.join(", "));
        }
    }
}

fn render_membership(verdict: &MembershipVerdict) {
    match verdict {
        MembershipVerdict::Member { shape_fast_path } => {
            if *shape_fast_path {
                println!("MEMBER (shape fast path)");
            } else {
                println!("MEMBER");
            }
        }
        MembershipVerdict::NonMember { reason } => match reason {
            NonMemberReason::NonIntegerPayoff => println!("NON-MEMBER (non-integer payoffs)"),
            NonMemberReason::RationalEquilibrium(witness) => {
                let rows: Vec<String> = witness
                    .iter()
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
                        format!("({})", cells.join(", "))
                    })
                    .collect();
                println!("NON-MEMBER (rational equilibrium: {})", rows.join(" "));
            }
        },
    }
}

fn render_profile(p: &MixedProfile, digits: usize) {
    for (i, row) in p.probs().iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c.as_rational() {
                Some(q) => q.to_string(),
                None => describe_coord(&c.to_algebraic(), digits),
            })
            .collect();
        println!("  player {}: {}", i + 1, cells.join(", "));
    }
}

fn game_json(game: &Game) -> String {
    let payoffs: Vec<Vec<String>> = (0..game.num_players())
        .map(|p| {
            game.payoff_tensor(p)
                .iter()
                .map(|c| c.to_string())
                .collect()
        })
        .collect();
    // payoffs are emitted as bare numbers
    let rows: Vec<String> = payoffs
        .iter()
        .map(|row| format!("[{}]", row.join(",")))
        .collect();
    format!(
        "{{\"players\": {}, \"strategies\": {:?}, \"payoffs\": [{}]}}",
        game.num_players(),
        game.strategy_counts(),
        rows.join(",")
    )
}

fn json_string(s: &str) -> serde_json::Value {
    serde_json::Value::String(s.to_string())
}

fn solve_json(game: &Game, equilibria: &[Equilibrium], digits: usize) -> String {
    let mut eqs = Vec::new();
    for eq in equilibria {
        let rows = equilibrium_rows(game, eq);
        let flat: Vec<&AlgebraicNumber> = rows.iter().flatten().collect();
        let minpolys: Vec<serde_json::Value> = flat
            .iter()
            .map(|a| {
                serde_json::Value::Array(
                    a.minpoly()
                        .coeffs()
                        .iter()
                        .map(|c| json_string(&c.to_string()))
                        .collect(),
                )
            })
            .collect();
        let intervals: Vec<serde_json::Value> = flat
            .iter()
            .map(|a| {
                let iv = a.interval();
                serde_json::Value::Array(vec![
                    json_string(&iv.lo.to_rational().to_string()),
                    json_string(&iv.hi.to_rational().to_string()),
                ])
            })
            .collect();
        let radicals: Vec<serde_json::Value> = flat
            .iter()
            .map(|a| match to_radicals(a) {
                Ok(r) => json_string(&r.to_string()),
                Err(_) => serde_json::Value::Null,
            })
            .collect();
        let decimals: Vec<serde_json::Value> = flat
            .iter()
            .map(|a| json_string(&rational_to_decimal(&a.approx(digits as u32 * 4 + 16), digits)))
            .collect();
        eqs.push(serde_json::json!({
            "minpolys": minpolys,
            "intervals": intervals,
            "radicals": radicals,
            "decimals": decimals,
        }));
    }
    serde_json::json!({ "equilibria": eqs }).to_string()
}

fn membership_json(verdict: &MembershipVerdict) -> String {
    let doc = match verdict {
        MembershipVerdict::Member { shape_fast_path } => serde_json::json!({
            "verdict": "member",
            "shape_fast_path": shape_fast_path,
        }),
        MembershipVerdict::NonMember { reason } => match reason {
            NonMemberReason::NonIntegerPayoff => serde_json::json!({
                "verdict": "non_member",
                "witness": { "reason": "non_integer_payoff" },
            }),
            NonMemberReason::RationalEquilibrium(witness) => {
                let rows: Vec<Vec<String>> = witness
                    .iter()
                    .map(|row| row.iter().map(|q| q.to_string()).collect())
                    .collect();
                serde_json::json!({
                    "verdict": "non_member",
                    "witness": { "reason": "rational_equilibrium", "profile": rows },
                })
            }
        },
    };
    doc.to_string()
}

fn oracle_json(equilibria: &[MixedProfile], digits: usize) -> String {
    let mut eqs = Vec::new();
    for p in equilibria {
        let rows: Vec<Vec<serde_json::Value>> = p
            .probs()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c.as_rational() {
                        Some(q) => json_string(&q.to_string()),
                        None => {
                            let a = c.to_algebraic();
                            json_string(&rational_to_decimal(
                                &a.approx(digits as u32 * 4 + 16),
                                digits,
                            ))
                        }
                    })
                    .collect()
            })
            .collect();
        eqs.push(serde_json::json!({ "profile": rows }));
    }
    serde_json::json!({ "equilibria": eqs }).to_string()
}
