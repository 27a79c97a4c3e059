use super::{GameRules, StepKind};

pub const HEADS: usize = 0;
pub const TAILS: usize = 1;

/// Two-step matching pennies. Player 0 picks heads or tails, then player 1 does; player 0
/// wins +1 on a match and loses 1 otherwise. In the imperfect variant player 1 does not
/// see player 0's coin.
#[derive(Debug, Clone, Copy)]
pub struct MatchingPennies {
    imperfect: bool,
}

impl MatchingPennies {
    pub fn new(imperfect: bool) -> Self {
        MatchingPennies { imperfect }
    }
}

impl GameRules for MatchingPennies {
    type State = Vec<usize>;

    fn name(&self) -> String {
        if self.imperfect {
            "matching_pennies_imperfect".into()
        } else {
            "matching_pennies_perfect".into()
        }
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> Vec<usize> {
        Vec::new()
    }

    fn step_kind(&self, state: &Vec<usize>) -> StepKind {
        match state.len() {
            0 => StepKind::Agent {
                player: 0,
                num_actions: 2,
            },
            1 => StepKind::Agent {
                player: 1,
                num_actions: 2,
            },
            _ => {
                let win = if state[0] == state[1] { 1.0 } else { -1.0 };
                StepKind::Terminal(vec![win, -win])
            }
        }
    }

    fn observation(&self, state: &Vec<usize>, player: usize) -> Vec<u8> {
        let mut obs = vec![state.len() as u8];
        if player == 0 || !self.imperfect {
            obs.extend(state.iter().map(|&a| a as u8));
        }
        obs
    }

    fn apply(&self, state: &Vec<usize>, action: usize) -> Vec<usize> {
        let mut next = state.clone();
        next.push(action);
        next
    }
}

#[cfg(test)]
mod tests {
    use crate::game::build_matching_pennies;

    #[test]
    fn imperfect_counts() {
        let game = build_matching_pennies(true);
        let e = game.enumerate();
        assert_eq!(e.states, 7);
        assert_eq!(e.total_infosets(), 2);
        assert_eq!(e.infosets_per_player, vec![1, 1]);
        assert_eq!(game.infoset(1).members.len(), 2);
    }

    #[test]
    fn perfect_separates_player_two() {
        let game = build_matching_pennies(false);
        assert_eq!(game.enumerate().infosets_per_player, vec![1, 2]);
    }

    #[test]
    fn heads_then_tails_loses() {
        let game = build_matching_pennies(true);
        let h = game.successor(0, super::HEADS);
        assert_eq!(game.reward(h, super::TAILS), &[-1.0, 1.0]);
        assert_eq!(game.reward(h, super::HEADS), &[1.0, -1.0]);
    }
}
