use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wcgame_core::analysis::{poa_bounds, AnalysisResult};
use wcgame_core::dynamics::{read_trace, run_algorithm, write_trace};
use wcgame_core::format::{parse_state, serialize_state};
use wcgame_core::instances::{gen_lower_bound, gen_random, RandomParams};
use wcgame_core::rational::{format_rational, to_f64};
use wcgame_core::verify::{
    audit_trace, brute_force_poa, check_group_bounds, min_equilibrium_factor, DEFAULT_STATE_CAP,
};
use wcgame_core::{
    parse_game, parse_instance, parse_rational, serialize_game, serialize_instance, DynamicsError,
    Game, PlayerSet, Rational, VerifyError,
};

/// Weighted polynomial congestion games: equilibria, audits and bounds.
#[derive(Parser, Debug)]
#[command(name = "wcgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the phased best-response algorithm
    Solve(SolveArgs),
    /// Report the equilibrium factor of a state
    Verify(VerifyArgs),
    /// Replay a trace and check every bound along it
    Audit(AuditArgs),
    /// Exhaustive price of anarchy of rho-equilibria
    BrutePoa(BrutePoaArgs),
    /// Price-of-anarchy constants for degree d and factor rho
    Poa(PoaArgs),
    /// Write a member of the lower-bound family and its two states
    GenLb(GenLbArgs),
    /// Write a seeded random game
    GenRandom(GenRandomArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Replace the constant p (labels the run as not paper-exact)
    #[arg(long)]
    p_override: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    state: PathBuf,
    /// Fail unless the state is a rho-equilibrium
    #[arg(long)]
    rho: Option<String>,
    /// Comma-separated player indices (default: all players)
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    /// Check the deviation bound at every strategy, not only the best response
    #[arg(long)]
    all_deviations: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct BrutePoaArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    rho: String,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: u64,
    /// Also check the group bounds over all (R, s, s') triples
    #[arg(long)]
    groups: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct PoaArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    rho: String,
    /// Print rows for every degree 1..=DMAX instead of d alone
    #[arg(long, value_name = "DMAX")]
    table: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct GenLbArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    rho: String,
    #[arg(long)]
    n: usize,
    /// Significant decimal digits of the rational Phi
    #[arg(long, default_value_t = 40)]
    precision: u32,
    /// Game file; the states go to <stem>.equilibrium.json and <stem>.optimal.json
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenRandomArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    players: usize,
    #[arg(long, default_value_t = 1)]
    degree: u32,
    #[arg(long, default_value_t = 4)]
    resources: usize,
    #[arg(long, default_value_t = 2)]
    strategies: usize,
    #[arg(long, default_value_t = 2)]
    max_strategy_size: usize,
    #[arg(long, default_value = "0")]
    coeff_min: String,
    #[arg(long, default_value = "3")]
    coeff_max: String,
    #[arg(long, default_value = "1")]
    weight_min: String,
    #[arg(long, default_value = "3")]
    weight_max: String,
    #[arg(long, default_value_t = 2)]
    denominator: u64,
    /// Destination file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes and their exit codes.
enum Failure {
    /// Exit 2.
    Verification(String),
    /// Exit 3.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    parse_game(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::Input(format!("--{name}: {e}")))
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

/// Verification errors that describe the data rather than malformed input.
fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::NoEquilibrium | VerifyError::TraceMismatch(_) => {
            Failure::Verification(e.to_string())
        }
        other => input(other),
    }
}

fn solve(args: SolveArgs) -> Outcome {
    let bytes = read(&args.input)?;
    let instance = parse_instance(&bytes)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let start = instance.start();
    // rescaling leaves states and cost ratios untouched
    let game = instance.game.normalize();
    match run_algorithm(&game, &start, args.p_override) {
        Ok((state, trace)) => {
            write(&args.output, &serialize_state(&state))?;
            if let Some(path) = &args.trace {
                write(path, &write_trace(&trace))?;
            }
            let factor = min_equilibrium_factor(&game, &state, None).map_err(input)?;
            println!(
                "phases {} moves {} factor {} ({:.6})",
                trace.schedule.m,
                trace.moves.len(),
                factor,
                factor.to_f64()
            );
            Ok(())
        }
        Err(DynamicsError::AlreadyZero) => {
            write(&args.output, &serialize_state(&start))?;
            eprintln!("every player has zero cost at the initial state; no trace written");
            Ok(())
        }
        Err(e @ DynamicsError::MoveBudgetExceeded { .. }) => {
            Err(Failure::Verification(e.to_string()))
        }
        Err(e) => Err(input(e)),
    }
}

fn parse_group(n: usize, text: &str) -> Result<PlayerSet, Failure> {
    let mut members = Vec::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let u: usize = part
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("--group: bad player index {part:?}")))?;
        if u >= n {
            return Err(Failure::Input(format!("--group: player {u} out of range")));
        }
        members.push(u);
    }
    Ok(PlayerSet::from_indices(n, members))
}

fn verify(args: VerifyArgs) -> Outcome {
    let game = load_game(&args.game)?;
    let state = parse_state(&game, &read(&args.state)?).map_err(input)?;
    let group = args
        .group
        .as_deref()
        .map(|g| parse_group(game.num_players(), g))
        .transpose()?;
    let rho = args
        .rho
        .as_deref()
        .map(|r| rational_arg("rho", r))
        .transpose()?;
    let factor = min_equilibrium_factor(&game, &state, group.as_ref()).map_err(input)?;
    let cost = game.social_cost(&state).map_err(input)?;
    let holds = rho.as_ref().map(|r| factor.is_at_most(r));
    match args.format {
        Format::Json => print_json(&json!({
            "factor": factor.to_string(),
            "factor_f64": factor.to_f64(),
            "social_cost": format_rational(&cost),
            "rho": rho.as_ref().map(format_rational),
            "equilibrium": holds,
        })),
        _ => {
            println!("factor {factor} ({:.6})", factor.to_f64());
            println!("social_cost {}", format_rational(&cost));
            if let (Some(r), Some(h)) = (&rho, holds) {
                println!("rho {} equilibrium {h}", format_rational(r));
            }
        }
    }
    match (rho, holds) {
        (Some(r), Some(false)) => Err(Failure::Verification(format!(
            "state is not a {}-equilibrium",
            format_rational(&r)
        ))),
        _ => Ok(()),
    }
}

fn audit(args: AuditArgs) -> Outcome {
    let game = load_game(&args.game)?.normalize();
    let text = String::from_utf8(read(&args.trace)?).map_err(input)?;
    let trace =
        read_trace(&text).map_err(|e| Failure::Input(format!("{}: {e}", args.trace.display())))?;
    let report = audit_trace(&game, &trace, args.all_deviations).map_err(verify_failure)?;
    match args.format {
        Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
        _ => {
            println!(
                "moves {} phases {} fixed {} paper_exact {}",
                report.moves.len(),
                report.phases.len(),
                report.fixed.len(),
                report.paper_exact
            );
            println!(
                "final_factor {} ({:.6}) ceiling {} ({:.6})",
                report.final_factor,
                report.final_factor.to_f64(),
                format_rational(&report.factor_ceiling),
                to_f64(&report.factor_ceiling)
            );
            for f in &report.findings {
                println!(
                    "finding {:?} phase {:?} step {:?} player {:?}: {}",
                    f.check, f.phase, f.step, f.player, f.detail
                );
            }
            println!("{}", if report.passed() { "PASS" } else { "FAIL" });
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} audit findings",
            report.findings.len()
        )))
    }
}

fn brute_poa(args: BrutePoaArgs) -> Outcome {
    let game = load_game(&args.game)?;
    let rho = rational_arg("rho", &args.rho)?;
    let report = brute_force_poa(&game, &rho, args.cap).map_err(verify_failure)?;
    let groups = if args.groups {
        Some(check_group_bounds(&game, &rho, args.cap).map_err(verify_failure)?)
    } else {
        None
    };
    match args.format {
        Format::Json => print_json(&json!({ "poa": report, "groups": groups })),
        _ => {
            println!("poa {} ({:.6})", report.poa, report.poa_f64());
            println!(
                "worst_state {:?} optimum_state {:?}",
                report.worst_state.choices(),
                report.optimum_state.choices()
            );
            println!("states {} equilibria {}", report.states, report.equilibria);
            if let Some(g) = &groups {
                println!(
                    "groups triples {} worst_cost_ratio {:.6} worst_stretch_ratio {:.6} violations {}",
                    g.triples,
                    g.worst_cost_ratio,
                    g.worst_stretch_ratio,
                    g.cost_violations + g.stretch_violations
                );
            }
        }
    }
    match groups {
        Some(g) if !g.passed() => Err(Failure::Verification("group bounds violated".into())),
        _ => Ok(()),
    }
}

const POA_COLUMNS: [&str; 7] = [
    "d",
    "rho",
    "phi",
    "poa_bound",
    "lambert_bound",
    "mu_hat",
    "b_mu_hat",
];

fn poa_row(r: &AnalysisResult) -> Vec<String> {
    vec![
        r.d.to_string(),
        format!("{:.6}", r.rho),
        format!("{:.6}", r.phi),
        format!("{:.6}", r.poa_bound),
        format!("{:.6}", r.lambert_bound),
        format!("{:.6}", r.mu_hat),
        format!("{:.6}", r.b_at_mu_hat),
    ]
}

fn poa(args: PoaArgs) -> Outcome {
    let rho = to_f64(&rational_arg("rho", &args.rho)?);
    let degrees: Vec<u32> = match args.table {
        Some(dmax) => (1..=dmax).collect(),
        None => vec![args.d],
    };
    let rows = degrees
        .into_iter()
        .map(|d| poa_bounds(d, rho))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input)?;
    match args.format {
        Format::Json => print_json(&serde_json::to_value(&rows).expect("serializable")),
        Format::Csv => {
            println!("{}", POA_COLUMNS.join(","));
            for r in &rows {
                println!("{}", poa_row(r).join(","));
            }
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(poa_row).collect();
            let widths: Vec<usize> = (0..POA_COLUMNS.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].len())
                        .chain([POA_COLUMNS[c].len()])
                        .max()
                        .unwrap()
                })
                .collect();
            let line = |row: Vec<&str>| {
                row.iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            println!("{}", line(POA_COLUMNS.to_vec()));
            for row in &cells {
                println!("{}", line(row.iter().map(String::as_str).collect()));
            }
        }
    }
    Ok(())
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("game");
    out.with_file_name(format!("{stem}.{suffix}.json"))
}

fn gen_lb(args: GenLbArgs) -> Outcome {
    let rho = rational_arg("rho", &args.rho)?;
    let bundle = gen_lower_bound(args.d, &rho, args.n, args.precision).map_err(input)?;
    let eq_path = sibling(&args.out, "equilibrium");
    let opt_path = sibling(&args.out, "optimal");
    write(
        &args.out,
        &serialize_instance(&bundle.game, Some(&bundle.equilibrium_state)),
    )?;
    write(&eq_path, &serialize_state(&bundle.equilibrium_state))?;
    write(&opt_path, &serialize_state(&bundle.optimal_state))?;
    println!("phi {:.12}", to_f64(&bundle.phi_approx));
    println!("rho_error {:.3e}", to_f64(&bundle.rho_error));
    println!(
        "wrote {} {} {}",
        args.out.display(),
        eq_path.display(),
        opt_path.display()
    );
    Ok(())
}

fn gen_random_game(args: GenRandomArgs) -> Outcome {
    let params = RandomParams {
        players: args.players,
        degree: args.degree,
        resources: args.resources,
        strategies_per_player: args.strategies,
        max_strategy_size: args.max_strategy_size,
        coeff_range: (
            rational_arg("coeff-min", &args.coeff_min)?,
            rational_arg("coeff-max", &args.coeff_max)?,
        ),
        weight_range: (
            rational_arg("weight-min", &args.weight_min)?,
            rational_arg("weight-max", &args.weight_max)?,
        ),
        denominator: args.denominator,
        seed: args.seed,
    };
    let text = serialize_game(&gen_random(&params).map_err(input)?);
    match &args.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Audit(a) => audit(a),
        Command::BrutePoa(a) => brute_poa(a),
        Command::Poa(a) => poa(a),
        Command::GenLb(a) => gen_lb(a),
        Command::GenRandom(a) => gen_random_game(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
