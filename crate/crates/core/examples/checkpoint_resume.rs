// Save a trainer mid-run, reload it, and continue bit for bit.

use vrpo::game::build_game;
use vrpo::learner::{Algorithm, Trainer, TrainerConfig};

pub fn run_example() -> vrpo::Result<bool> {
    let game = build_game("liars_dice:1x3")?;
    let config = TrainerConfig { batch_size: 64, seed: 3, ..TrainerConfig::default() };
    let mut trainer = Trainer::new(&game, Algorithm::Mappo, config)?;
    for _ in 0..5 {
        trainer.step();
    }
    let path = std::env::temp_dir().join(format!("vrpo-example-{}.json", std::process::id()));
    trainer.save(&path)?;
    let mut resumed = Trainer::load(&game, &path)?;
    let _ = std::fs::remove_file(&path);
    let same = (0..10).all(|_| trainer.step() == resumed.step());
    Ok(same && trainer.state() == resumed.state())
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    println!("resumed run identical: {}", run_example()?);
    Ok(())
}
