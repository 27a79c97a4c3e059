// Enumerate the built-in games and print their sizes.

use vrpo::experiment::{enumerate, GameSize};

pub fn run_example() -> vrpo::Result<Vec<GameSize>> {
    ["matching_pennies_perfect", "matching_pennies_imperfect", "kuhn", "leduc", "liars_dice:1x3", "liars_dice:1x4"]
        .iter()
        .map(|name| enumerate(name))
        .collect()
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    println!("{:<28} {:>8} {:>9} {:>9}", "game", "states", "terminals", "infosets");
    for size in run_example()? {
        println!("{:<28} {:>8} {:>9} {:>9}", size.game, size.states, size.terminals, size.infosets);
    }
    Ok(())
}
