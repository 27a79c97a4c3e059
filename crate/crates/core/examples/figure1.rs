// GAE against Q-boosting on the two matching-pennies panels.
//
// ```text
// cargo run --example figure1
// ```

use vrpo::experiment::{figure1_demo, figure1_rows};

pub fn run_example() -> vrpo::Result<String> {
    let report = figure1_demo()?;
    let rows = figure1_rows();
    let imperfect: Vec<_> = rows.iter().filter(|r| r.panel == "imperfect").collect();
    let gae_var: f64 = imperfect.iter().map(|r| r.probability * r.gae * r.gae).sum();
    let boost_var: f64 = imperfect.iter().map(|r| r.probability * r.boost * r.boost).sum();
    Ok(format!("{report}imperfect panel second moments: gae {gae_var}, boost {boost_var}\n"))
}

#[allow(dead_code)]
fn main() -> vrpo::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
