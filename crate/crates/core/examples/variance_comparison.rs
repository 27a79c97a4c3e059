// Advantage standard deviation of VRPO, MAPPO and IPPO under matched seeds.

use vrpo::experiment::{variance_report, ExperimentConfig, VarianceReport};
use vrpo::learner::Algorithm;

pub fn run_example() -> vrpo::Result<VarianceReport> {
    let mut config = ExperimentConfig { game: "kuhn".into(), seeds: vec![0, 1], ..ExperimentConfig::default() };
    config.trainer.batch_size = 128;
    variance_report(&config, 60, &Algorithm::ALL)
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    let report = run_example()?;
    for seed in [0, 1] {
        let line: Vec<String> = report
            .algorithms
            .iter()
            .map(|&a| format!("{a} {:.3}", report.mean_std(a, seed, 20, 60).unwrap()))
            .collect();
        println!("seed {seed}: mean std over iterations 20-60: {}", line.join(", "));
    }
    Ok(())
}
