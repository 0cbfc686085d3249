//! Tournament execution: schedule, play, persist, aggregate.
//!
//! Records land in an append-only `records.jsonl` inside the output
//! directory, written in schedule order whatever the worker count. A run
//! can be resumed: already recorded matches are loaded by key and never
//! replayed or double-counted.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use anyhow::{anyhow, bail, Context, Result};
use maxn_core::games::make_game;

use crate::bootstrap::{aggregate_expecting, ExpectedCell, ScoreTable};
use crate::config::{params_to_json, TournamentConfig};
use crate::play::play_match_any;
use crate::protocol::{schedule, Assignment, MatchKey};
use crate::record::{append_record, load_records, MatchRecord};

/// Execution knobs that live outside the config file.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub workers: usize,
    /// Continue an existing records file instead of refusing to touch it.
    pub resume: bool,
    /// Overrides the config seed.
    pub seed: Option<u64>,
    /// Overrides the output directory (flag beats `MAXN_OUTPUT_DIR` beats
    /// the config).
    pub output: Option<PathBuf>,
    /// Suppress per-match progress lines.
    pub quiet: bool,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            workers: 1,
            resume: false,
            seed: None,
            output: None,
            quiet: true,
        }
    }
}

/// What a finished run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub table: ScoreTable,
    pub records_path: PathBuf,
    pub table_path: PathBuf,
    pub csv_path: PathBuf,
    /// Matches played in this invocation.
    pub played: usize,
    /// Matches taken over from an earlier, resumed invocation.
    pub resumed: usize,
}

fn output_dir(cfg: &TournamentConfig, opts: &RunOptions) -> PathBuf {
    if let Some(dir) = &opts.output {
        return dir.clone();
    }
    if let Some(dir) = std::env::var_os("MAXN_OUTPUT_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(dir) = &cfg.output {
        return PathBuf::from(dir);
    }
    PathBuf::from("maxn-runs")
}

/// Run (or resume) a tournament and aggregate its score table.
pub fn run_experiment(cfg: &TournamentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let out_dir = output_dir(&cfg, opts);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("create {}", out_dir.display()))?;
    let records_path = out_dir.join("records.jsonl");

    let plan = schedule(&cfg);
    let mut done: BTreeMap<MatchKey, MatchRecord> = BTreeMap::new();
    if records_path.exists() {
        if !opts.resume {
            bail!(
                "{} already exists; use resume to continue it",
                records_path.display()
            );
        }
        let plan_keys: BTreeSet<&MatchKey> = plan.iter().map(|a| &a.key).collect();
        for record in load_records(&records_path)? {
            let key = record.key();
            if !plan_keys.contains(&key) {
                bail!(
                    "resume found a record outside this schedule (config or seed changed?): \
                     game={} seat={} i={} j={} rep={} seed={}",
                    key.game,
                    key.seat,
                    key.i,
                    key.j,
                    key.rep,
                    key.seed
                );
            }
            done.insert(key, record);
        }
    }
    let resumed = done.len();
    let pending: Vec<&Assignment> = plan.iter().filter(|a| !done.contains_key(&a.key)).collect();

    // Records always carry the canonical JSON form of the params, so replay
    // rebuilds the exact same game even for programmatically built configs.
    let params_json = params_to_json(&cfg.params);
    let game = make_game(&cfg.game, &cfg.params).map_err(|e| anyhow!("{e}"))?;

    let total = plan.len();
    let report_progress = |key: &MatchKey, finished: usize| {
        if !opts.quiet {
            eprintln!(
                "[{finished}/{total}] {} seat={} i={} j={} rep={}",
                key.game, key.seat, key.i, key.j, key.rep
            );
        }
    };

    if opts.workers <= 1 {
        for (index, assignment) in pending.iter().enumerate() {
            let record = play_match_any(&game, &assignment.key, &assignment.agents, &params_json)?;
            append_record(&records_path, &record)?;
            report_progress(&assignment.key, resumed + index + 1);
            done.insert(assignment.key.clone(), record);
        }
    } else {
        let next_job = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<(usize, Result<MatchRecord>)>();
        let mut outputs: Vec<Option<MatchRecord>> = vec![None; pending.len()];
        let mut first_error: Option<anyhow::Error> = None;
        std::thread::scope(|scope| {
            for _ in 0..opts.workers {
                let tx = tx.clone();
                let next_job = &next_job;
                let pending = &pending;
                let cfg = &cfg;
                let params_json = &params_json;
                scope.spawn(move || {
                    let game = match make_game(&cfg.game, &cfg.params) {
                        Ok(g) => g,
                        Err(e) => {
                            let idx = next_job.fetch_add(1, Ordering::Relaxed);
                            if idx < pending.len() {
                                let _ = tx.send((idx, Err(anyhow!("{e}"))));
                            }
                            return;
                        }
                    };
                    loop {
                        let idx = next_job.fetch_add(1, Ordering::Relaxed);
                        if idx >= pending.len() {
                            break;
                        }
                        let a = pending[idx];
                        let result = play_match_any(&game, &a.key, &a.agents, params_json);
                        if tx.send((idx, result)).is_err() {
                            break;
                        }
                    }
                });
            }
            drop(tx);
            let mut next_to_write = 0usize;
            let mut buffer: BTreeMap<usize, ()> = BTreeMap::new();
            let mut finished = resumed;
            while let Ok((idx, result)) = rx.recv() {
                match result {
                    Ok(record) => {
                        finished += 1;
                        report_progress(&pending[idx].key, finished);
                        outputs[idx] = Some(record);
                        buffer.insert(idx, ());
                    }
                    Err(e) => {
                        if first_error.is_none() {
                            first_error = Some(e);
                        }
                    }
                }
                while buffer.remove(&next_to_write).is_some() {
                    let record = outputs[next_to_write].as_ref().expect("buffered");
                    if let Err(e) = append_record(&records_path, record) {
                        if first_error.is_none() {
                            first_error = Some(e);
                        }
                    }
                    next_to_write += 1;
                }
            }
        });
        if let Some(e) = first_error {
            return Err(e);
        }
        for (assignment, record) in pending.iter().zip(outputs) {
            let record = record.ok_or_else(|| anyhow!("worker dropped a match"))?;
            done.insert(assignment.key.clone(), record);
        }
    }
    let played = total - resumed;

    let records: Vec<MatchRecord> = plan
        .iter()
        .map(|a| done.get(&a.key).cloned().expect("every planned match played"))
        .collect();
    let expected: Vec<ExpectedCell> = {
        let mut cells = BTreeSet::new();
        for a in &plan {
            cells.insert(ExpectedCell {
                algorithm: cfg.evaluated.0.to_string(),
                game: cfg.game.clone(),
                seat: a.key.seat,
                i: a.key.i,
                j: a.key.j,
            });
        }
        cells.into_iter().collect()
    };
    let table = aggregate_expecting(&records, cfg.strata, cfg.resamples, cfg.seed, Some(&expected));

    let table_path = out_dir.join("table.txt");
    let csv_path = out_dir.join("scores.csv");
    std::fs::write(&table_path, table.render_text())
        .with_context(|| format!("write {}", table_path.display()))?;
    std::fs::write(&csv_path, table.to_csv())
        .with_context(|| format!("write {}", csv_path.display()))?;

    Ok(RunOutcome {
        table,
        records_path,
        table_path,
        csv_path,
        played,
        resumed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::BudgetSpec;
    use crate::bootstrap::StrataRule;
    use crate::config::params_from_json;
    use crate::record::replay;
    use maxn_core::search::AlgorithmId;

    fn bandit_config(seed: u64) -> TournamentConfig {
        let params_json = serde_json::json!({"players": 3, "arms": 3, "seed": 5});
        TournamentConfig {
            game: "bandit".to_string(),
            params: params_from_json(&params_json).unwrap(),
            params_json,
            seats: 3,
            evaluated: (AlgorithmId::Random, BudgetSpec::Nodes(1)),
            benchmark: (AlgorithmId::Random, BudgetSpec::Nodes(1)),
            evaluators: 2,
            seed,
            repetitions: 1,
            resamples: 200,
            strata: StrataRule::Cell,
            output: None,
        }
    }

    fn run_into(dir: &std::path::Path, cfg: &TournamentConfig, workers: usize, resume: bool) -> RunOutcome {
        run_experiment(
            cfg,
            &RunOptions {
                workers,
                resume,
                output: Some(dir.to_path_buf()),
                ..RunOptions::default()
            },
        )
        .unwrap()
    }

    fn sorted_canonical(path: &std::path::Path) -> Vec<String> {
        let mut records = load_records(path).unwrap();
        records.sort_by_key(|r| r.key());
        records.iter().map(|r| r.canonical_line()).collect()
    }

    #[test]
    fn a_tiny_tournament_runs_end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_into(dir.path(), &bandit_config(3), 1, false);
        assert_eq!(outcome.played, 12);
        assert_eq!(outcome.resumed, 0);
        assert_eq!(outcome.table.rows.len(), 1);
        assert_eq!(outcome.table.rows[0].matches, 12);
        assert!(outcome.table.notes.is_empty(), "{:?}", outcome.table.notes);
        let records = load_records(&outcome.records_path).unwrap();
        assert_eq!(records.len(), 12);
        for record in &records {
            replay(record).unwrap();
        }
        assert!(outcome.table_path.exists() && outcome.csv_path.exists());
    }

    #[test]
    fn sequential_and_parallel_runs_emit_identical_records() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let a = run_into(dir_a.path(), &bandit_config(4), 1, false);
        let b = run_into(dir_b.path(), &bandit_config(4), 3, false);
        assert_eq!(
            sorted_canonical(&a.records_path),
            sorted_canonical(&b.records_path)
        );
        assert_eq!(a.table, b.table);
        // Ordered writes mean even the file order matches.
        assert_eq!(
            std::fs::read_to_string(&a.records_path).unwrap().lines().count(),
            std::fs::read_to_string(&b.records_path).unwrap().lines().count()
        );
    }

    #[test]
    fn finished_runs_resume_as_a_no_op_but_never_overwrite_silently() {
        let dir = tempfile::tempdir().unwrap();
        let first = run_into(dir.path(), &bandit_config(5), 1, false);
        let again = run_into(dir.path(), &bandit_config(5), 1, true);
        assert_eq!(again.played, 0);
        assert_eq!(again.resumed, 12);
        assert_eq!(first.table, again.table);

        let err = run_experiment(
            &bandit_config(5),
            &RunOptions {
                output: Some(dir.path().to_path_buf()),
                ..RunOptions::default()
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("resume"), "{err}");
    }

    #[test]
    fn an_interrupted_run_resumes_to_the_same_table() {
        let dir_full = tempfile::tempdir().unwrap();
        let full = run_into(dir_full.path(), &bandit_config(6), 1, false);

        let dir_cut = tempfile::tempdir().unwrap();
        let lines: Vec<String> = std::fs::read_to_string(&full.records_path)
            .unwrap()
            .lines()
            .map(String::from)
            .collect();
        std::fs::write(
            dir_cut.path().join("records.jsonl"),
            format!("{}\n", lines[..5].join("\n")),
        )
        .unwrap();
        let resumed = run_into(dir_cut.path(), &bandit_config(6), 1, true);
        assert_eq!(resumed.resumed, 5);
        assert_eq!(resumed.played, 7);
        assert_eq!(full.table, resumed.table);
        assert_eq!(
            sorted_canonical(&full.records_path),
            sorted_canonical(&resumed.records_path)
        );
    }

    #[test]
    fn resume_rejects_records_from_a_different_schedule() {
        let dir = tempfile::tempdir().unwrap();
        run_into(dir.path(), &bandit_config(7), 1, false);
        let err = run_experiment(
            &bandit_config(8),
            &RunOptions {
                resume: true,
                output: Some(dir.path().to_path_buf()),
                ..RunOptions::default()
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("schedule"), "{err}");
    }
}
