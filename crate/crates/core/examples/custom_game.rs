// Plug a new game into the oracles and the trainer by implementing `GameRules`.
// Here: rock-paper-scissors where the second player moves without seeing the first,
// and rock beating scissors pays double, so uniform play is no longer an equilibrium.

use vrpo::game::{Game, GameRules, StepKind, DEFAULT_STATE_GUARD};
use vrpo::learner::{Algorithm, Trainer, TrainerConfig};
use vrpo::oracle::exploitability;

struct Rps;

impl GameRules for Rps {
    type State = Vec<usize>;

    fn name(&self) -> String {
        "rock_paper_scissors".into()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> Vec<usize> {
        Vec::new()
    }

    fn step_kind(&self, state: &Vec<usize>) -> StepKind {
        match state.as_slice() {
            [] => StepKind::Agent { player: 0, num_actions: 3 },
            [_] => StepKind::Agent { player: 1, num_actions: 3 },
            [a, b] => {
                // 0 rock, 1 paper, 2 scissors
                let stake = if (*a == 0 && *b == 2) || (*a == 2 && *b == 0) { 2.0 } else { 1.0 };
                let win = match (3 + a - b) % 3 {
                    0 => 0.0,
                    1 => stake,
                    _ => -stake,
                };
                StepKind::Terminal(vec![win, -win])
            }
            _ => unreachable!(),
        }
    }

    fn observation(&self, state: &Vec<usize>, _player: usize) -> Vec<u8> {
        vec![state.len() as u8]
    }

    fn apply(&self, state: &Vec<usize>, action: usize) -> Vec<usize> {
        let mut next = state.clone();
        next.push(action);
        next
    }
}

pub fn run_example() -> vrpo::Result<(f64, f64)> {
    let game = Game::build(&Rps, DEFAULT_STATE_GUARD)?;
    let config = TrainerConfig { batch_size: 128, total_iterations: 80, seed: 1, ..TrainerConfig::default() };
    let mut trainer = Trainer::new(&game, Algorithm::Vrpo, config)?;
    let start = exploitability(&game, &trainer.profile()).exploitability;
    for _ in 0..80 {
        trainer.step();
    }
    Ok((start, exploitability(&game, &trainer.profile()).exploitability))
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    let (start, end) = run_example()?;
    println!("exploitability {start:.4} -> {end:.4}");
    Ok(())
}
