//! `maxn`: run tournaments, solve positions exactly, benchmark agents,
//! re-aggregate records, and count game trees.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use maxn_core::games::{make_game, AnyGame, GameParams, ParamValue, GAME_NAMES};
use maxn_core::oracle::solve_maxn;
use maxn_core::search::AlgorithmId;
use maxn_core::Game;

use maxn_harness::agent::{choose_action, AgentSpec, BudgetSpec};
use maxn_harness::bootstrap::{aggregate, StrataRule};
use maxn_harness::config::load_config;
use maxn_harness::protocol::move_seed;
use maxn_harness::record::load_records;
use maxn_harness::runner::{run_experiment, RunOptions};

#[derive(Parser)]
#[command(name = "maxn", about = "Multiplayer game-search tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) a tournament from a JSON config.
    Run {
        config: PathBuf,
        /// Override the config's tournament seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to MAXN_WORKERS or the CPU count.
        #[arg(long)]
        workers: Option<usize>,
        /// Continue an existing records file instead of refusing.
        #[arg(long)]
        resume: bool,
        /// Output directory; beats MAXN_OUTPUT_DIR and the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustively solve a position and print per-action values.
    Solve {
        /// Game name; see `--help` for the list.
        game: String,
        /// Game parameter, `key=value` or `key=a,b,c`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Position to solve, in the game's text encoding; `-` or omitted
        /// for the initial position.
        #[arg(long)]
        state: Option<String>,
        /// State cap for the solver.
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
    },
    /// Time one agent playing every seat from a position.
    Bench {
        game: String,
        /// Algorithm identifier, e.g. `umaxn-safe`, `kbest:3`, `mcts:sqrt2`.
        agent: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Node budget per move.
        #[arg(long, conflicts_with = "millis")]
        nodes: Option<u64>,
        /// Wall-clock budget per move, in milliseconds.
        #[arg(long)]
        millis: Option<u64>,
        /// Evaluator variant.
        #[arg(long, default_value_t = 0)]
        variant: u32,
        #[arg(long)]
        state: Option<String>,
        /// Stop after this many moves even if the game continues.
        #[arg(long, default_value_t = 20)]
        moves: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-aggregate a records file into a score table.
    Report {
        records: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        resamples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stratification: cell, seat, or pooled.
        #[arg(long, default_value = "cell")]
        strata: String,
    },
    /// Count leaf nodes at a fixed depth, as a rules cross-check.
    Perft {
        game: String,
        depth: u32,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        state: Option<String>,
    },
}

/// Parse repeated `key=value` pairs; comma-separated values become lists.
fn parse_params(entries: &[String]) -> Result<GameParams> {
    let mut params = GameParams::new();
    for entry in entries {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("bad parameter '{entry}', expected key=value"))?;
        let parsed = if value.contains(',') {
            let items: Result<Vec<i64>, _> = value.split(',').map(str::trim).map(str::parse).collect();
            ParamValue::IntList(items.map_err(|_| anyhow!("bad list in '{entry}'"))?)
        } else {
            ParamValue::Int(value.trim().parse().map_err(|_| anyhow!("bad integer in '{entry}'"))?)
        };
        params.insert(key.to_string(), parsed);
    }
    Ok(params)
}

fn build_game(name: &str, params: &[String]) -> Result<AnyGame> {
    let params = parse_params(params)?;
    make_game(name, &params).map_err(|e| anyhow!("{e} (games: {GAME_NAMES:?})"))
}

fn workers_from(flag: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n.max(1);
    }
    if let Ok(text) = std::env::var("MAXN_WORKERS") {
        if let Ok(n) = text.parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            resume,
            output,
        } => {
            let cfg = load_config(&config)?;
            let outcome = run_experiment(
                &cfg,
                &RunOptions {
                    workers: workers_from(workers),
                    resume,
                    seed,
                    output,
                    quiet: false,
                },
            )?;
            println!(
                "{} matches played, {} resumed; records in {}",
                outcome.played,
                outcome.resumed,
                outcome.records_path.display()
            );
            print!("{}", outcome.table.render_text());
        }
        Command::Solve {
            game,
            params,
            state,
            cap,
        } => {
            let any = build_game(&game, &params)?;
            maxn_core::with_game!(&any, |g| solve_one(g, state.as_deref(), cap))?;
        }
        Command::Bench {
            game,
            agent,
            params,
            nodes,
            millis,
            variant,
            state,
            moves,
            seed,
        } => {
            let budget = match (nodes, millis) {
                (Some(n), None) => BudgetSpec::Nodes(n),
                (None, Some(ms)) => BudgetSpec::Millis(ms),
                (None, None) => BudgetSpec::Nodes(10_000),
                (Some(_), Some(_)) => bail!("pass either --nodes or --millis, not both"),
            };
            let spec = AgentSpec {
                algorithm: AlgorithmId::parse(&agent).map_err(|e| anyhow!("{e}"))?,
                variant,
                budget,
            };
            let any = build_game(&game, &params)?;
            maxn_core::with_game!(&any, |g| bench_one(g, &spec, state.as_deref(), moves, seed))?;
        }
        Command::Report {
            records,
            resamples,
            seed,
            strata,
        } => {
            let rule = StrataRule::parse(&strata).map_err(|e| anyhow!("{e}"))?;
            let loaded = load_records(&records)?;
            if loaded.is_empty() {
                bail!("{} holds no records", records.display());
            }
            let table = aggregate(&loaded, rule, resamples, seed);
            print!("{}", table.render_text());
        }
        Command::Perft {
            game,
            depth,
            params,
            state,
        } => {
            let any = build_game(&game, &params)?;
            let started = Instant::now();
            let count = maxn_core::games::perft_check(&any, state.as_deref(), depth)
                .map_err(|e| anyhow!("{e}"))?;
            let elapsed = started.elapsed();
            let rate = count as f64 / elapsed.as_secs_f64().max(1e-9);
            println!(
                "perft({depth}) = {count} in {:.3}s ({:.0} leaves/s)",
                elapsed.as_secs_f64(),
                rate
            );
        }
    }
    Ok(())
}

fn resolve_state<G: Game>(game: &G, text: Option<&str>) -> Result<G::State> {
    match text {
        None | Some("-") => Ok(game.initial_state()),
        Some(t) => game.parse_state(t).map_err(|e| anyhow!("{e}")),
    }
}

fn solve_one<G: Game>(game: &G, state: Option<&str>, cap: usize) -> Result<()> {
    let state = resolve_state(game, state)?;
    if game.is_terminal(&state) {
        let payoff = game.terminal_payoff(&state).map_err(|e| anyhow!("{e}"))?;
        println!("terminal position, payoff {:?}", payoff.components());
        return Ok(());
    }
    let started = Instant::now();
    let table = solve_maxn(game, &state, cap).map_err(|e| anyhow!("{e}"))?;
    let elapsed = started.elapsed();
    let root = table
        .get(game.zobrist_key(&state))
        .ok_or_else(|| anyhow!("solver did not store the root"))?;
    let mover = game.current_player(&state).map_err(|e| anyhow!("{e}"))?;
    println!(
        "{} states solved in {:.3}s; player {} to move",
        table.len(),
        elapsed.as_secs_f64(),
        mover.0
    );
    for (ordinal, action) in game
        .legal_actions(&state)
        .map_err(|e| anyhow!("{e}"))?
        .into_iter()
        .enumerate()
    {
        let child = game.apply(&state, action).map_err(|e| anyhow!("{e}"))?;
        let entry = table
            .get(game.zobrist_key(&child))
            .ok_or_else(|| anyhow!("child missing from the solved table"))?;
        let marker = if root.best == Some(ordinal as u16) {
            " <= best"
        } else {
            ""
        };
        println!(
            "  [{ordinal}] {} -> {:?}{marker}",
            game.action_text(&state, action),
            entry.value.components()
        );
    }
    println!("value {:?}", root.value.components());
    Ok(())
}

fn bench_one<G: maxn_core::eval::HeuristicGame>(
    game: &G,
    spec: &AgentSpec,
    state: Option<&str>,
    moves: u32,
    seed: u64,
) -> Result<()> {
    let mut state = resolve_state(game, state)?;
    println!("{} on {}, per-move budget {}", spec.id_text(), game.name(), spec.budget.id_text());
    let mut total_nodes = 0u64;
    let mut total_millis = 0u128;
    let mut played = 0u32;
    for ply in 0..moves {
        if game.is_terminal(&state) {
            break;
        }
        let mover = game.current_player(&state).map_err(|e| anyhow!("{e}"))?;
        let started = Instant::now();
        let choice = choose_action(game, spec, &state, move_seed(seed, ply))
            .map_err(|e| anyhow!("agent failed: {e}"))?;
        let elapsed = started.elapsed();
        let actions = game.legal_actions(&state).map_err(|e| anyhow!("{e}"))?;
        let action = *actions
            .get(choice.ordinal as usize)
            .ok_or_else(|| anyhow!("agent chose illegal ordinal {}", choice.ordinal))?;
        println!(
            "  ply {ply}: seat {} plays [{:>2}] {} ({} nodes, {:.1}ms)",
            mover.0,
            choice.ordinal,
            game.action_text(&state, action),
            choice.nodes,
            elapsed.as_secs_f64() * 1e3
        );
        state = game.apply(&state, action).map_err(|e| anyhow!("{e}"))?;
        total_nodes += choice.nodes;
        total_millis += elapsed.as_millis();
        played += 1;
    }
    if game.is_terminal(&state) {
        let payoff = game.terminal_payoff(&state).map_err(|e| anyhow!("{e}"))?;
        println!("terminal after {played} moves, payoff {:?}", payoff.components());
    } else {
        println!("stopped after {played} moves");
    }
    println!("total {total_nodes} nodes, {total_millis}ms");
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
