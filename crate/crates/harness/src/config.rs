//! Tournament configuration files.
//!
//! Configs are JSON. Parsing collects every problem instead of stopping at
//! the first one, and each error names the offending field path, so a bad
//! config is fixable in one round trip.

use std::fmt;
use std::path::Path;

use maxn_core::games::{make_game, GameParams, ParamValue};
use maxn_core::search::AlgorithmId;
use serde_json::Value;

use crate::agent::BudgetSpec;
use crate::bootstrap::StrataRule;

/// One config problem, located by its JSON field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// A fully validated tournament description.
#[derive(Clone, Debug)]
pub struct TournamentConfig {
    pub game: String,
    pub params: GameParams,
    /// The params as given, stored verbatim into each match record.
    pub params_json: Value,
    /// Player count of the configured game.
    pub seats: usize,
    pub evaluated: (AlgorithmId, BudgetSpec),
    pub benchmark: (AlgorithmId, BudgetSpec),
    /// Evaluator family size E; the schedule is seats * E^2 per repetition.
    pub evaluators: u32,
    pub seed: u64,
    pub repetitions: u32,
    /// Bootstrap resamples for the final table.
    pub resamples: u32,
    pub strata: StrataRule,
    /// Output directory; flags and the environment can override it.
    pub output: Option<String>,
}

/// Convert a JSON object into registry game parameters. Accepts integers
/// and arrays of integers.
pub fn params_from_json(value: &Value) -> Result<GameParams, String> {
    let mut params = GameParams::new();
    let object = match value {
        Value::Null => return Ok(params),
        Value::Object(map) => map,
        other => return Err(format!("expected an object, got {other}")),
    };
    for (key, entry) in object {
        let parsed = match entry {
            Value::Number(n) => match n.as_i64() {
                Some(v) => ParamValue::Int(v),
                None => return Err(format!("'{key}' must be an integer")),
            },
            Value::Array(items) => {
                let mut list = Vec::with_capacity(items.len());
                for item in items {
                    match item.as_i64() {
                        Some(v) => list.push(v),
                        None => return Err(format!("'{key}' must hold integers")),
                    }
                }
                ParamValue::IntList(list)
            }
            other => return Err(format!("'{key}' must be an integer or list, got {other}")),
        };
        params.insert(key.clone(), parsed);
    }
    Ok(params)
}

/// Inverse of [`params_from_json`], for writing records of programmatically
/// built configs.
pub fn params_to_json(params: &GameParams) -> Value {
    let mut map = serde_json::Map::new();
    for (key, value) in params {
        let entry = match value {
            ParamValue::Int(v) => Value::from(*v),
            ParamValue::IntList(list) => Value::from(list.clone()),
        };
        map.insert(key.clone(), entry);
    }
    Value::Object(map)
}

fn parse_agent(
    value: &Value,
    path: &str,
    errors: &mut Vec<ConfigError>,
) -> Option<(AlgorithmId, BudgetSpec)> {
    let object = match value.as_object() {
        Some(map) => map,
        None => {
            errors.push(ConfigError::new(path, "expected an object"));
            return None;
        }
    };
    for key in object.keys() {
        if !matches!(key.as_str(), "algorithm" | "nodes" | "millis") {
            errors.push(ConfigError::new(&format!("{path}.{key}"), "unknown field"));
        }
    }
    let algorithm = match object.get("algorithm").and_then(Value::as_str) {
        Some(text) => match AlgorithmId::parse(text) {
            Ok(id) => Some(id),
            Err(e) => {
                errors.push(ConfigError::new(&format!("{path}.algorithm"), e));
                None
            }
        },
        None => {
            errors.push(ConfigError::new(
                &format!("{path}.algorithm"),
                "required string",
            ));
            None
        }
    };
    let budget = match (object.get("nodes"), object.get("millis")) {
        (Some(n), None) => match n.as_u64() {
            Some(n) if n >= 1 => Some(BudgetSpec::Nodes(n)),
            _ => {
                errors.push(ConfigError::new(
                    &format!("{path}.nodes"),
                    "must be an integer >= 1",
                ));
                None
            }
        },
        (None, Some(ms)) => match ms.as_u64() {
            Some(ms) if ms >= 1 => Some(BudgetSpec::Millis(ms)),
            _ => {
                errors.push(ConfigError::new(
                    &format!("{path}.millis"),
                    "must be an integer >= 1",
                ));
                None
            }
        },
        _ => {
            errors.push(ConfigError::new(
                path,
                "exactly one of 'nodes' or 'millis' is required",
            ));
            None
        }
    };
    Some((algorithm?, budget?))
}

fn uint_field(
    object: &serde_json::Map<String, Value>,
    key: &str,
    default: u64,
    minimum: u64,
    errors: &mut Vec<ConfigError>,
) -> u64 {
    match object.get(key) {
        None => default,
        Some(value) => match value.as_u64() {
            Some(v) if v >= minimum => v,
            _ => {
                errors.push(ConfigError::new(
                    key,
                    format!("must be an integer >= {minimum}"),
                ));
                default
            }
        },
    }
}

/// Parse and validate a config. On failure, every detected problem is
/// returned, each with its field path.
pub fn parse_config(text: &str) -> Result<TournamentConfig, Vec<ConfigError>> {
    let mut errors = Vec::new();
    let root: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return Err(vec![ConfigError::new("<root>", format!("bad JSON: {e}"))]),
    };
    let object = match root.as_object() {
        Some(map) => map,
        None => return Err(vec![ConfigError::new("<root>", "expected an object")]),
    };

    const KNOWN: [&str; 10] = [
        "game",
        "evaluated",
        "benchmark",
        "evaluators",
        "seed",
        "repetitions",
        "resamples",
        "strata",
        "seats",
        "output",
    ];
    for key in object.keys() {
        if !KNOWN.contains(&key.as_str()) {
            errors.push(ConfigError::new(key, "unknown field"));
        }
    }

    let mut game_name = String::new();
    let mut params = GameParams::new();
    let mut params_json = Value::Object(serde_json::Map::new());
    let mut seats = 0usize;
    match object.get("game") {
        Some(Value::Object(game)) => {
            for key in game.keys() {
                if !matches!(key.as_str(), "name" | "params") {
                    errors.push(ConfigError::new(&format!("game.{key}"), "unknown field"));
                }
            }
            match game.get("name").and_then(Value::as_str) {
                Some(name) => game_name = name.to_string(),
                None => errors.push(ConfigError::new("game.name", "required string")),
            }
            if let Some(raw) = game.get("params") {
                match params_from_json(raw) {
                    Ok(p) => {
                        params = p;
                        params_json = raw.clone();
                    }
                    Err(e) => errors.push(ConfigError::new("game.params", e)),
                }
            }
            if !game_name.is_empty() {
                match make_game(&game_name, &params) {
                    Ok(g) => seats = g.player_count(),
                    Err(e) => errors.push(ConfigError::new("game", e.to_string())),
                }
            }
        }
        Some(_) => errors.push(ConfigError::new("game", "expected an object")),
        None => errors.push(ConfigError::new("game", "required field")),
    }

    let evaluated = match object.get("evaluated") {
        Some(value) => parse_agent(value, "evaluated", &mut errors),
        None => {
            errors.push(ConfigError::new("evaluated", "required field"));
            None
        }
    };
    let benchmark = match object.get("benchmark") {
        Some(value) => parse_agent(value, "benchmark", &mut errors),
        None => {
            errors.push(ConfigError::new("benchmark", "required field"));
            None
        }
    };

    let evaluators = uint_field(object, "evaluators", 2, 1, &mut errors) as u32;
    let seed = uint_field(object, "seed", 0, 0, &mut errors);
    let repetitions = uint_field(object, "repetitions", 1, 1, &mut errors) as u32;
    let resamples = uint_field(object, "resamples", 10_000, 0, &mut errors) as u32;

    let strata = match object.get("strata") {
        None => StrataRule::Cell,
        Some(value) => match value.as_str().map(StrataRule::parse) {
            Some(Ok(rule)) => rule,
            Some(Err(e)) => {
                errors.push(ConfigError::new("strata", e));
                StrataRule::Cell
            }
            None => {
                errors.push(ConfigError::new("strata", "expected a string"));
                StrataRule::Cell
            }
        },
    };

    if let Some(value) = object.get("seats") {
        match value.as_u64() {
            Some(v) if seats == 0 || v as usize == seats => {}
            Some(v) => errors.push(ConfigError::new(
                "seats",
                format!("game has {seats} seats, not {v}"),
            )),
            None => errors.push(ConfigError::new("seats", "expected an integer")),
        }
    }

    let output = match object.get("output") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            errors.push(ConfigError::new("output", "expected a string"));
            None
        }
    };

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(TournamentConfig {
        game: game_name,
        params,
        params_json,
        seats,
        evaluated: evaluated.expect("checked above"),
        benchmark: benchmark.expect("checked above"),
        evaluators,
        seed,
        repetitions,
        resamples,
        strata,
        output,
    })
}

/// Load a config file.
pub fn load_config(path: &Path) -> anyhow::Result<TournamentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|errors| {
        let mut lines = String::new();
        for e in &errors {
            lines.push_str(&format!("\n  {e}"));
        }
        anyhow::anyhow!("{} is invalid:{lines}", path.display())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "game": {"name": "threehex", "params": {"side": 3}},
        "evaluated": {"algorithm": "umaxn-safe", "nodes": 5000},
        "benchmark": {"algorithm": "maxn", "nodes": 5000},
        "evaluators": 4,
        "seed": 11,
        "repetitions": 2,
        "resamples": 500,
        "strata": "cell"
    }"#;

    #[test]
    fn a_complete_config_parses_with_the_game_seat_count() {
        let cfg = parse_config(GOOD).unwrap();
        assert_eq!(cfg.game, "threehex");
        assert_eq!(cfg.seats, 3);
        assert_eq!(cfg.evaluators, 4);
        assert_eq!(cfg.repetitions, 2);
        assert_eq!(cfg.strata, StrataRule::Cell);
        assert_eq!(cfg.evaluated.1, BudgetSpec::Nodes(5000));
        assert_eq!(
            cfg.evaluated.0,
            maxn_core::search::AlgorithmId::UnboundedMaxn { safe: true }
        );
    }

    #[test]
    fn defaults_fill_in_when_fields_are_omitted() {
        let cfg = parse_config(
            r#"{
                "game": {"name": "trinim", "params": {"heaps": [3, 4]}},
                "evaluated": {"algorithm": "umaxn", "nodes": 100},
                "benchmark": {"algorithm": "random", "nodes": 1}
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.evaluators, 2);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.repetitions, 1);
        assert_eq!(cfg.resamples, 10_000);
        assert_eq!(cfg.strata, StrataRule::Cell);
        assert_eq!(cfg.seats, 3);
    }

    #[test]
    fn every_problem_is_reported_with_its_field_path() {
        let errors = parse_config(
            r#"{
                "game": {"name": "nonsuch"},
                "evaluated": {"algorithm": "warp", "nodes": 100},
                "benchmark": {"algorithm": "maxn", "nodes": 100, "millis": 5},
                "seed": -4,
                "mystery": 1
            }"#,
        )
        .unwrap_err();
        let paths: Vec<&str> = errors.iter().map(|e| e.path.as_str()).collect();
        assert!(paths.contains(&"game"), "{paths:?}");
        assert!(paths.contains(&"evaluated.algorithm"), "{paths:?}");
        assert!(paths.contains(&"benchmark"), "{paths:?}");
        assert!(paths.contains(&"seed"), "{paths:?}");
        assert!(paths.contains(&"mystery"), "{paths:?}");
    }

    #[test]
    fn an_explicit_seat_count_must_match_the_game() {
        let text = GOOD.replace(r#""evaluators": 4,"#, r#""evaluators": 4, "seats": 4,"#);
        let errors = parse_config(&text).unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].path, "seats");
        assert!(errors[0].message.contains("3 seats"), "{}", errors[0]);
    }

    #[test]
    fn params_round_trip_between_json_and_the_registry_form() {
        let json = serde_json::json!({"heaps": [1, 2, 3], "side": 4});
        let params = params_from_json(&json).unwrap();
        assert_eq!(params_to_json(&params), json);
        assert!(params_from_json(&serde_json::json!({"x": "y"})).is_err());
        assert!(params_from_json(&serde_json::json!({"x": 1.5})).is_err());
    }
}
