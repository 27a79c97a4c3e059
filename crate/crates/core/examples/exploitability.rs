// Exact values, best responses and exploitability of a few Kuhn poker profiles.

use vrpo::game::{build_kuhn_poker, TabularProfile};
use vrpo::oracle::{exact_values, exploitability};

pub struct ProfileReport {
    pub label: &'static str,
    pub value_p1: f64,
    pub exploitability: f64,
}

pub fn run_example() -> vrpo::Result<Vec<ProfileReport>> {
    let game = build_kuhn_poker();
    let uniform = TabularProfile::uniform(&game);
    // always bet or call
    let aggressive = TabularProfile::from_fn(&game, |_, n| {
        let mut p = vec![0.0; n];
        p[n - 1] = 1.0;
        p
    });
    // bet or call only with the king
    let tight = TabularProfile::from_fn(&game, |id, n| {
        let card = game.infoset(id).key.observation[1];
        let mut p = vec![0.0; n];
        p[if card == 2 { n - 1 } else { 0 }] = 1.0;
        p
    });
    Ok([("uniform", uniform), ("aggressive", aggressive), ("tight", tight)]
        .into_iter()
        .map(|(label, profile)| ProfileReport {
            label,
            value_p1: exact_values(&game, &profile).root_values()[0],
            exploitability: exploitability(&game, &profile).exploitability,
        })
        .collect())
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    for r in run_example()? {
        println!("{:<11} v1 = {:+.4}  exploitability = {:.4}", r.label, r.value_p1, r.exploitability);
    }
    Ok(())
}
