//! Config-driven experiment driver: training runs with CSV/JSON artifacts, estimator
//! variance reports, checkpoint evaluation, game sizes and the matching-pennies demo.

mod config;
mod figure1;

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{build_game, Game};
use crate::learner::{Algorithm, IterationMetrics, Trainer, TrainerState};
use crate::oracle::{exploitability, DeviationReport};

pub use config::{validate_game_name, ExperimentConfig, OUT_DIR_ENV};
pub use figure1::{figure1_demo, figure1_rows, Figure1Row};

/// Column order of every metrics CSV.
pub const METRICS_COLUMNS: [&str; 12] = [
    "iteration",
    "exploitability",
    "adv_std",
    "clip_fraction",
    "kl_ref",
    "kl_uniform",
    "mean_return_p1",
    "mean_traj_len",
    "lr_actor",
    "lr_critic",
    "eps",
    "alpha",
];

/// Appends one metrics row per iteration and flushes after each, so an interrupted run
/// leaves a parseable prefix.
pub struct MetricsWriter {
    path: PathBuf,
    inner: csv::Writer<File>,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = MetricsWriter { path: path.to_path_buf(), inner: csv::Writer::from_writer(file) };
        writer.record(METRICS_COLUMNS.iter().map(|c| c.to_string()).collect())?;
        Ok(writer)
    }

    pub fn write(&mut self, m: &IterationMetrics) -> Result<()> {
        let row = vec![
            m.iteration.to_string(),
            m.exploitability.map_or_else(String::new, |e| e.to_string()),
            m.adv_std.to_string(),
            m.clip_fraction.to_string(),
            m.kl_ref.to_string(),
            m.kl_uniform.to_string(),
            m.mean_return_p1.to_string(),
            m.mean_traj_len.to_string(),
            m.lr_actor.to_string(),
            m.lr_critic.to_string(),
            m.eps.to_string(),
            m.alpha.to_string(),
        ];
        self.record(row)
    }

    fn record(&mut self, row: Vec<String>) -> Result<()> {
        let to_io = |e: csv::Error| std::io::Error::other(e.to_string());
        self.inner.write_record(&row).map_err(|e| Error::io(&self.path, to_io(e)))?;
        self.inner.flush().map_err(|e| Error::io(&self.path, e))
    }
}

/// Headline numbers of one finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub game: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub iterations: usize,
    /// Last evaluated exploitability of the current actors.
    pub final_exploitability: Option<f64>,
    /// Exploitability of the averaged evaluation policy after the last iteration.
    pub final_ema_exploitability: f64,
    pub mean_adv_std: f64,
    pub wall_time_secs: f64,
}

/// Files written for one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifact {
    pub seed: u64,
    pub metrics_csv: PathBuf,
    pub checkpoint: PathBuf,
    pub summary_json: PathBuf,
    pub summary: RunSummary,
}

/// Directory of one seed's artifacts below the output root.
pub fn run_dir(config: &ExperimentConfig, seed: u64) -> PathBuf {
    config
        .out_dir
        .join(config.game.replace(':', "_"))
        .join(config.algorithm.name())
        .join(format!("seed-{seed}"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::CheckFailed(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Trains every configured seed and writes its metrics, checkpoint and summary.
pub fn run(config: &ExperimentConfig) -> Result<Vec<RunArtifact>> {
    config.validate()?;
    let game = build_game(&config.game)?;
    config.seeds.iter().map(|&seed| run_seed(&game, config, seed)).collect()
}

/// One seed of [`run`] on an already built game.
pub fn run_seed(game: &Game, config: &ExperimentConfig, seed: u64) -> Result<RunArtifact> {
    let started = Instant::now();
    let dir = run_dir(config, seed);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let metrics_csv = dir.join("metrics.csv");
    let checkpoint = dir.join("checkpoint.json");
    let summary_json = dir.join("summary.json");

    let mut trainer = Trainer::new(game, config.algorithm, config.trainer_for(seed))?;
    let mut writer = MetricsWriter::create(&metrics_csv)?;
    let mut final_exploitability = None;
    let mut std_sum = 0.0;
    let iterations = config.trainer.total_iterations;
    for _ in 0..iterations {
        let metrics = trainer.step();
        writer.write(&metrics)?;
        std_sum += metrics.adv_std;
        if metrics.exploitability.is_some() {
            final_exploitability = metrics.exploitability;
        }
    }
    trainer.save(&checkpoint)?;
    let summary = RunSummary {
        game: config.game.clone(),
        algorithm: config.algorithm,
        seed,
        iterations,
        final_exploitability,
        final_ema_exploitability: exploitability(game, &trainer.ema_profile()).exploitability,
        mean_adv_std: if iterations == 0 { 0.0 } else { std_sum / iterations as f64 },
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    write_json(&summary_json, &summary)?;
    Ok(RunArtifact { seed, metrics_csv, checkpoint, summary_json, summary })
}

/// Per-iteration advantage standard deviation of several algorithms under matched
/// seeds and schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    pub algorithms: Vec<Algorithm>,
    /// `(seed, iteration, one std per algorithm)`.
    pub rows: Vec<(u64, usize, Vec<f64>)>,
}

impl VarianceReport {
    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["seed".to_string(), "iteration".to_string()];
        cols.extend(self.algorithms.iter().map(|a| format!("adv_std_{a}")));
        cols
    }

    /// Mean std of `algorithm` for `seed` over iterations `from..=to`.
    pub fn mean_std(&self, algorithm: Algorithm, seed: u64, from: usize, to: usize) -> Option<f64> {
        let col = self.algorithms.iter().position(|&a| a == algorithm)?;
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter(|(s, t, _)| *s == seed && (from..=to).contains(t))
            .map(|(_, _, v)| v[col])
            .collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let to_io = |e: csv::Error| Error::io(path, std::io::Error::other(e.to_string()));
        let mut writer = csv::Writer::from_path(path).map_err(to_io)?;
        writer.write_record(self.columns()).map_err(to_io)?;
        for (seed, iteration, stds) in &self.rows {
            let mut row = vec![seed.to_string(), iteration.to_string()];
            row.extend(stds.iter().map(|s| s.to_string()));
            writer.write_record(&row).map_err(to_io)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

/// Trains each algorithm for `iterations` iterations per seed and records the standard
/// deviation of the advantages consumed by actor updates.
pub fn variance_report(config: &ExperimentConfig, iterations: usize, algorithms: &[Algorithm]) -> Result<VarianceReport> {
    config.validate()?;
    if algorithms.is_empty() {
        return Err(Error::invalid("algo", "at least one algorithm is required"));
    }
    let game = build_game(&config.game)?;
    let mut rows = Vec::new();
    for &seed in &config.seeds {
        let mut series = Vec::new();
        for &algorithm in algorithms {
            let mut trainer_config = config.trainer_for(seed);
            trainer_config.total_iterations = iterations;
            trainer_config.eval_interval = usize::MAX;
            let mut trainer = Trainer::new(&game, algorithm, trainer_config)?;
            series.push((0..iterations).map(|_| trainer.step().adv_std).collect::<Vec<_>>());
        }
        for t in 0..iterations {
            rows.push((seed, t + 1, series.iter().map(|s| s[t]).collect()));
        }
    }
    Ok(VarianceReport { algorithms: algorithms.to_vec(), rows })
}

/// Exploitability of a saved trainer's current and averaged policies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub game: String,
    pub algorithm: Algorithm,
    pub iteration: usize,
    pub current: DeviationReport,
    pub ema: DeviationReport,
}

pub fn evaluate(checkpoint: &Path) -> Result<Evaluation> {
    let text = fs::read_to_string(checkpoint).map_err(|e| Error::io(checkpoint, e))?;
    let state: TrainerState = serde_json::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let game = build_game(&state.game)?;
    let trainer = Trainer::from_state(&game, state)?;
    Ok(Evaluation {
        game: game.name().to_string(),
        algorithm: trainer.algorithm(),
        iteration: trainer.iteration(),
        current: exploitability(&game, &trainer.profile()),
        ema: exploitability(&game, &trainer.ema_profile()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameSize {
    pub game: String,
    pub states: usize,
    pub terminals: usize,
    pub infosets_per_player: Vec<usize>,
    pub infosets: usize,
}

pub fn enumerate(name: &str) -> Result<GameSize> {
    let game = build_game(name)?;
    let e = game.enumerate();
    Ok(GameSize {
        game: name.to_string(),
        states: e.states,
        terminals: (0..game.num_states()).filter(|&s| game.is_terminal(s)).count(),
        infosets: e.total_infosets(),
        infosets_per_player: e.infosets_per_player,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(dir: &Path) -> ExperimentConfig {
        let mut config = ExperimentConfig {
            game: "matching_pennies_imperfect".into(),
            out_dir: dir.to_path_buf(),
            seeds: vec![3],
            ..ExperimentConfig::default()
        };
        config.trainer.batch_size = 16;
        config.trainer.total_iterations = 12;
        config.trainer.eval_interval = 5;
        config
    }

    #[test]
    fn run_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let artifacts = run(&tiny(dir.path())).unwrap();
        let a = &artifacts[0];
        let text = fs::read_to_string(&a.metrics_csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], METRICS_COLUMNS.join(","));
        assert_eq!(lines.len(), 13);
        // evaluated at 5, 10 and the final iteration only
        let evaluated = lines[1..].iter().filter(|l| !l.split(',').nth(1).unwrap().is_empty()).count();
        assert_eq!(evaluated, 3);
        assert!(a.checkpoint.exists() && a.summary_json.exists());
        let eval = evaluate(&a.checkpoint).unwrap();
        assert_eq!(eval.iteration, 12);
        assert_eq!(Some(eval.current.exploitability), a.summary.final_exploitability);
    }

    #[test]
    fn empty_variance_range_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let report = variance_report(&tiny(dir.path()), 0, &[Algorithm::Vrpo, Algorithm::Mappo]).unwrap();
        let path = dir.path().join("v.csv");
        report.write_csv(&path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "seed,iteration,adv_std_vrpo,adv_std_mappo\n");
    }

    #[test]
    fn kuhn_size() {
        let size = enumerate("kuhn").unwrap();
        assert_eq!((size.states, size.infosets), (58, 12));
        assert_eq!(size.terminals, 30);
    }
}
