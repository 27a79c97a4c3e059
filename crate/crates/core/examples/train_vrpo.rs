// Train VRPO on Kuhn poker and watch exploitability fall.

use vrpo::game::build_kuhn_poker;
use vrpo::learner::{Algorithm, Trainer, TrainerConfig};
use vrpo::oracle::exploitability;

pub fn run_example() -> vrpo::Result<Vec<(usize, f64)>> {
    let game = build_kuhn_poker();
    let config = TrainerConfig { total_iterations: 150, eval_interval: 25, seed: 7, ..TrainerConfig::default() };
    let mut trainer = Trainer::new(&game, Algorithm::Vrpo, config)?;
    let mut curve = vec![(0, exploitability(&game, &trainer.profile()).exploitability)];
    while trainer.iteration() < trainer.config().total_iterations {
        let m = trainer.step();
        if let Some(x) = m.exploitability {
            curve.push((m.iteration, x));
        }
    }
    Ok(curve)
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    for (t, x) in run_example()? {
        println!("iteration {t:>4}  exploitability {x:.4}");
    }
    Ok(())
}
