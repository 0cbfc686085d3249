//! Score aggregation: stratified bootstrap confidence intervals over binary
//! match scores.
//!
//! Records are grouped into one row per (evaluated algorithm, game). Within
//! a row, scores are partitioned into strata; the bootstrap resamples each
//! stratum independently (preserving its size) and pools the resample into
//! one mean, which keeps cross-cell imbalance out of the interval. Scores
//! are sorted inside each stratum before any random draw, so the result is
//! invariant under record order.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::protocol::{binary_score, mix64, stable_hash};
use crate::record::MatchRecord;

/// How scores are partitioned into bootstrap strata within a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrataRule {
    /// One stratum per schedule cell `(seat, i, j)`.
    Cell,
    /// One stratum per seat.
    Seat,
    /// A single stratum: a plain bootstrap.
    Pooled,
}

impl Default for StrataRule {
    fn default() -> StrataRule {
        StrataRule::Cell
    }
}

impl StrataRule {
    pub fn parse(text: &str) -> Result<StrataRule, String> {
        match text {
            "cell" => Ok(StrataRule::Cell),
            "seat" => Ok(StrataRule::Seat),
            "pooled" => Ok(StrataRule::Pooled),
            other => Err(format!("unknown strata rule '{other}'")),
        }
    }
}

impl fmt::Display for StrataRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrataRule::Cell => write!(f, "cell"),
            StrataRule::Seat => write!(f, "seat"),
            StrataRule::Pooled => write!(f, "pooled"),
        }
    }
}

/// A schedule cell the caller expected records for; used to surface holes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpectedCell {
    pub algorithm: String,
    pub game: String,
    pub seat: u8,
    pub i: u32,
    pub j: u32,
}

/// One aggregated row: the evaluated algorithm's mean binary score on one
/// game with a 95% bootstrap interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRow {
    pub algorithm: String,
    pub game: String,
    pub matches: usize,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
    /// Human-readable irregularities, e.g. expected cells with no records.
    pub notes: Vec<String>,
}

impl ScoreTable {
    /// Fixed-width text table plus notes.
    pub fn render_text(&self) -> String {
        let header = ["algorithm", "game", "matches", "mean", "95% CI"];
        let body: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.algorithm.clone(),
                    r.game.clone(),
                    r.matches.to_string(),
                    format!("{:+.4}", r.mean),
                    format!("[{:+.4}, {:+.4}]", r.lower, r.upper),
                ]
            })
            .collect();
        let mut width = [0usize; 5];
        for (w, h) in width.iter_mut().zip(header) {
            *w = h.len();
        }
        for row in &body {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let push_row = |cells: [&str; 5], out: &mut String| {
            for (index, (cell, w)) in cells.iter().zip(width).enumerate() {
                if index > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{cell:<w$}"));
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        };
        push_row(header, &mut out);
        for row in &body {
            push_row(
                [&row[0], &row[1], &row[2], &row[3], &row[4]],
                &mut out,
            );
        }
        for note in &self.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,game,matches,mean,lower,upper\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.algorithm, r.game, r.matches, r.mean, r.lower, r.upper
            ));
        }
        out
    }
}

/// Linear-interpolation percentile of an ascending slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Aggregate records into a score table. Deterministic in `seed` and
/// invariant under record order.
pub fn aggregate(
    records: &[MatchRecord],
    rule: StrataRule,
    resamples: u32,
    seed: u64,
) -> ScoreTable {
    aggregate_expecting(records, rule, resamples, seed, None)
}

/// [`aggregate`] that also checks coverage: any `expected` cell without a
/// record is reported in the notes and excluded from the numbers.
pub fn aggregate_expecting(
    records: &[MatchRecord],
    rule: StrataRule,
    resamples: u32,
    seed: u64,
    expected: Option<&[ExpectedCell]>,
) -> ScoreTable {
    type StratumKey = (u8, u32, u32);
    let stratum_of = |seat: u8, i: u32, j: u32| -> StratumKey {
        match rule {
            StrataRule::Cell => (seat, i, j),
            StrataRule::Seat => (seat, 0, 0),
            StrataRule::Pooled => (0, 0, 0),
        }
    };

    let mut rows: BTreeMap<(String, String), BTreeMap<StratumKey, Vec<f64>>> = BTreeMap::new();
    for record in records {
        let row = (record.evaluated_algorithm().to_string(), record.game.clone());
        rows.entry(row)
            .or_default()
            .entry(stratum_of(record.seat, record.i, record.j))
            .or_default()
            .push(binary_score(record, record.seat) as f64);
    }

    let mut notes = Vec::new();
    if let Some(cells) = expected {
        for cell in cells {
            let key = (cell.algorithm.clone(), cell.game.clone());
            let covered = rows
                .get(&key)
                .map_or(false, |strata| {
                    strata.contains_key(&stratum_of(cell.seat, cell.i, cell.j))
                });
            if !covered {
                notes.push(format!(
                    "{} on {}: no records for seat={} i={} j={}; cell excluded",
                    cell.algorithm, cell.game, cell.seat, cell.i, cell.j
                ));
            }
        }
    }

    let mut out_rows = Vec::new();
    for ((algorithm, game), mut strata) in rows {
        for scores in strata.values_mut() {
            scores.sort_by(f64::total_cmp);
        }
        let matches: usize = strata.values().map(Vec::len).sum();
        let mean = strata.values().flatten().sum::<f64>() / matches as f64;
        let (lower, upper) = if resamples == 0 {
            (mean, mean)
        } else {
            // Seeded per row so merging tables or reordering rows cannot
            // shift another row's draws.
            let row_seed = mix64(seed ^ stable_hash(&algorithm) ^ stable_hash(&game).rotate_left(17));
            let mut rng = ChaCha8Rng::seed_from_u64(row_seed);
            let mut means = Vec::with_capacity(resamples as usize);
            for _ in 0..resamples {
                let mut sum = 0.0;
                for scores in strata.values() {
                    for _ in 0..scores.len() {
                        sum += scores[rng.gen_range(0..scores.len())];
                    }
                }
                means.push(sum / matches as f64);
            }
            means.sort_by(f64::total_cmp);
            // The clamps keep degenerate resamples from excluding the
            // point estimate itself.
            (
                percentile(&means, 0.025).min(mean),
                percentile(&means, 0.975).max(mean),
            )
        };
        out_rows.push(ScoreRow {
            algorithm,
            game,
            matches,
            mean,
            lower,
            upper,
        });
    }
    ScoreTable {
        rows: out_rows,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A bare record whose binary score for the evaluated seat is `score`.
    fn scored(alg: &str, game: &str, seat: u8, i: u32, j: u32, rep: u32, score: i8) -> MatchRecord {
        let mut agents = vec!["bench@v0+n1".to_string(); 3];
        agents[seat as usize] = format!("{alg}@v0+n1");
        let winners = match score {
            1 => vec![seat],
            0 => Vec::new(),
            _ => vec![(seat + 1) % 3],
        };
        MatchRecord {
            game: game.to_string(),
            params: serde_json::json!({}),
            seat,
            i,
            j,
            rep,
            seed: 7,
            agents,
            moves: Vec::new(),
            outcome: vec![0.0; 3],
            winners,
            failure: None,
        }
    }

    #[test]
    fn zero_variance_scores_collapse_the_interval_to_a_point() {
        let records: Vec<MatchRecord> = (0..40usize)
            .map(|t| scored("umaxn", "threehex", (t % 3) as u8, (t % 2) as u32, (t % 5) as u32, 0, 1))
            .collect();
        let table = aggregate(&records, StrataRule::Cell, 500, 11);
        assert_eq!(table.rows.len(), 1);
        let row = &table.rows[0];
        assert_eq!((row.mean, row.lower, row.upper), (1.0, 1.0, 1.0));
        assert_eq!(row.matches, 40);
        assert!(table.notes.is_empty());
    }

    #[test]
    fn aggregation_ignores_record_order() {
        let mut records: Vec<MatchRecord> = (0..60usize)
            .map(|t| {
                let score = [1i8, 1, 0, -1][t % 4];
                scored("umaxn", "threehex", (t % 3) as u8, (t % 2) as u32, (t % 5) as u32, 0, score)
            })
            .collect();
        let a = aggregate(&records, StrataRule::Cell, 2000, 13);
        records.reverse();
        let b = aggregate(&records, StrataRule::Cell, 2000, 13);
        records.swap(1, 40);
        records.swap(7, 33);
        let c = aggregate(&records, StrataRule::Cell, 2000, 13);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn intervals_are_deterministic_in_the_seed_and_ordered() {
        let records: Vec<MatchRecord> = (0..30usize)
            .map(|t| scored("mcts:1", "trinim", (t % 3) as u8, 0, (t % 5) as u32, 0, [1i8, -1][t % 2]))
            .collect();
        let a = aggregate(&records, StrataRule::Pooled, 3000, 5);
        let b = aggregate(&records, StrataRule::Pooled, 3000, 5);
        assert_eq!(a, b);
        let row = &a.rows[0];
        assert!(row.lower <= row.mean && row.mean <= row.upper);
        assert!((-1.0..=1.0).contains(&row.lower) && (-1.0..=1.0).contains(&row.upper));
    }

    #[test]
    fn expected_cells_without_records_are_noted_and_excluded() {
        let records = vec![scored("umaxn", "threehex", 0, 0, 0, 0, 1)];
        let expected = vec![
            ExpectedCell {
                algorithm: "umaxn".to_string(),
                game: "threehex".to_string(),
                seat: 0,
                i: 0,
                j: 0,
            },
            ExpectedCell {
                algorithm: "umaxn".to_string(),
                game: "threehex".to_string(),
                seat: 1,
                i: 0,
                j: 0,
            },
        ];
        let table = aggregate_expecting(&records, StrataRule::Cell, 100, 3, Some(&expected));
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].matches, 1);
        assert_eq!(table.notes.len(), 1);
        assert!(table.notes[0].contains("seat=1"), "{}", table.notes[0]);
    }

    #[test]
    fn tables_render_as_text_and_csv() {
        let records = vec![
            scored("umaxn-safe", "threehex", 0, 0, 0, 0, 1),
            scored("umaxn-safe", "threehex", 1, 0, 0, 0, -1),
        ];
        let mut table = aggregate(&records, StrataRule::Seat, 0, 0);
        table.notes.push("demo note".to_string());
        let text = table.render_text();
        assert!(text.contains("algorithm"), "{text}");
        assert!(text.contains("umaxn-safe"), "{text}");
        assert!(text.contains("note: demo note"), "{text}");
        let csv = table.to_csv();
        assert!(csv.starts_with("algorithm,game,matches,mean,lower,upper\n"));
        assert!(csv.contains("umaxn-safe,threehex,2,0,"), "{csv}");
    }
}
