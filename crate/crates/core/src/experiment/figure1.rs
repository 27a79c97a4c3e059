use std::fmt::Write;

use crate::error::{Error, Result};
use crate::estimators::{gae_trace, qboost_trace, QCritic, VCritic};
use crate::game::{build_matching_pennies, scripted_trajectory, Game, TabularProfile, HEADS, TAILS};
use crate::oracle::{exact_values, ExactValues};

/// Estimates of player 1's advantage at the root along one scripted play.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Row {
    pub panel: &'static str,
    pub trajectory: &'static str,
    /// Probability of the play under the panel's profile.
    pub probability: f64,
    pub td: [f64; 2],
    pub boosted_td: [f64; 2],
    pub gae: f64,
    pub boost: f64,
}

const PLAYS: [(&str, [usize; 2]); 4] = [
    ("hh", [HEADS, HEADS]),
    ("ht", [HEADS, TAILS]),
    ("th", [TAILS, HEADS]),
    ("tt", [TAILS, TAILS]),
];

/// Perfect information with the deterministic mismatching reply, or imperfect
/// information with both players uniform.
fn panel_profile(game: &Game, imperfect: bool) -> TabularProfile {
    let mut profile = TabularProfile::uniform(game);
    if !imperfect {
        let after_h = game.agent(game.successor(game.root(), HEADS)).unwrap().1;
        let after_t = game.agent(game.successor(game.root(), TAILS)).unwrap().1;
        profile.set_pure(after_h, TAILS);
        profile.set_pure(after_t, HEADS);
    }
    profile
}

fn panel_rows(panel: &'static str, imperfect: bool) -> (Game, ExactValues, Vec<Figure1Row>) {
    let game = build_matching_pennies(imperfect);
    let profile = panel_profile(&game, imperfect);
    let exact = exact_values(&game, &profile);
    let v = VCritic::from_exact(&exact);
    let q = QCritic::from_exact(&exact);
    let rows = PLAYS
        .iter()
        .map(|&(name, actions)| {
            let traj = scripted_trajectory(&game, game.root(), &actions);
            let td = gae_trace(&game, &traj, &v, 0.0, 1.0, 0);
            let gae = gae_trace(&game, &traj, &v, 1.0, 1.0, 0);
            let boost = qboost_trace(&game, &traj, &q, &profile, 1.0, 1.0, 0);
            let probability = traj
                .steps
                .iter()
                .map(|s| game.action_probs(&profile, s.state)[s.action])
                .product();
            Figure1Row {
                panel,
                trajectory: name,
                probability,
                td: [td[0], td[1]],
                boosted_td: [boost.residuals[0], boost.residuals[1]],
                gae: gae[0],
                boost: boost.advantages[0],
            }
        })
        .collect();
    (game, exact, rows)
}

/// Rows of the deterministic-reply panel followed by the mixed-reply panel.
pub fn figure1_rows() -> Vec<Figure1Row> {
    let mut rows = panel_rows("perfect", false).2;
    rows.extend(panel_rows("imperfect", true).2);
    rows
}

fn expect(label: &str, got: f64, want: f64, failures: &mut Vec<String>) {
    if (got - want).abs() > 1e-12 {
        failures.push(format!("{label}: got {got}, expected {want}"));
    }
}

/// Text report of both matching-pennies panels with exact critics and λ = γ = 1.
/// Fails when any printed value differs from the reference values.
pub fn figure1_demo() -> Result<String> {
    let mut out = String::new();
    let mut failures = Vec::new();
    for (panel, imperfect) in [("perfect", false), ("imperfect", true)] {
        let (game, exact, rows) = panel_rows(panel, imperfect);
        let root = game.root();
        let h = game.successor(root, HEADS);
        writeln!(out, "[{panel} information]").unwrap();
        writeln!(
            out,
            "  V1(root) = {}  V1(h) = {}  Q1(root,h) = {}  Q1(h,t) = {}",
            exact.v(root, 0),
            exact.v(h, 0),
            exact.q(&game, root, HEADS, 0),
            exact.q(&game, h, TAILS, 0)
        )
        .unwrap();
        writeln!(out, "  play  prob   delta1 delta2  delta1+ delta2+  A_gae  A_boost").unwrap();
        for r in &rows {
            writeln!(
                out,
                "  {:<4}  {:<5}  {:>6} {:>6}  {:>7} {:>7}  {:>5}  {:>7}",
                r.trajectory, r.probability, r.td[0], r.td[1], r.boosted_td[0], r.boosted_td[1], r.gae, r.boost
            )
            .unwrap();
        }
        let mean_gae: f64 = rows.iter().map(|r| r.probability * r.gae).sum();
        writeln!(out, "  E[A_gae] = {mean_gae}").unwrap();
        expect(&format!("{panel}: E[A_gae]"), mean_gae, 0.0, &mut failures);

        let row = |name: &str| rows.iter().find(|r| r.trajectory == name).unwrap();
        if imperfect {
            expect("imperfect V1(h)", exact.v(h, 0), 0.0, &mut failures);
            expect("imperfect Q1(h,t)", exact.q(&game, h, TAILS, 0), -1.0, &mut failures);
            expect("imperfect ht delta2", row("ht").td[1], -1.0, &mut failures);
            expect("imperfect ht A_gae", row("ht").gae, -1.0, &mut failures);
            expect("imperfect ht A_boost", row("ht").boost, 0.0, &mut failures);
            expect("imperfect hh A_gae", row("hh").gae, 1.0, &mut failures);
            expect("imperfect hh A_boost", row("hh").boost, 0.0, &mut failures);
            for r in &rows {
                expect(&format!("imperfect {} delta+", r.trajectory), r.boosted_td[0].abs() + r.boosted_td[1].abs(), 0.0, &mut failures);
            }
        } else {
            expect("perfect V1(h)", exact.v(h, 0), -1.0, &mut failures);
            expect("perfect ht delta1", row("ht").td[0], 0.0, &mut failures);
            expect("perfect ht delta2", row("ht").td[1], 0.0, &mut failures);
            expect("perfect ht A_gae", row("ht").gae, 0.0, &mut failures);
        }
    }
    if failures.is_empty() {
        writeln!(out, "all reference values reproduced").unwrap();
        Ok(out)
    } else {
        Err(Error::CheckFailed(failures.join("; ")))
    }
}
