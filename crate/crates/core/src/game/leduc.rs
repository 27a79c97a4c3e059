use super::{GameRules, StepKind};

const NUM_CARDS: u8 = 6;
const MAX_RAISES: u8 = 2;
const UNDEALT: u8 = 0xff;
const ROUND_BREAK: u8 = 0xfe;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Fold,
    Call,
    Raise,
}

/// Leduc hold'em: a six-card deck (three ranks in two suits), one private card each,
/// one public card, two betting rounds with raise sizes 2 and 4, at most two raises per
/// round and an ante of 1. Player 0 opens both rounds. Fold is only legal when facing a
/// bet.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeducHoldem;

#[derive(Debug, Clone, Default)]
pub struct LeducState {
    // private card of player 0, player 1, then the public card
    cards: Vec<u8>,
    rounds: [Vec<u8>; 2],
    contrib: [u32; 2],
    folded: Option<usize>,
}

fn rank(card: u8) -> u8 {
    card / 2
}

impl LeducState {
    fn round(&self) -> usize {
        if self.cards.len() < 3 {
            0
        } else {
            1
        }
    }

    fn raises(&self) -> u8 {
        self.rounds[self.round()]
            .iter()
            .filter(|&&m| m == Move::Raise as u8)
            .count() as u8
    }

    fn facing_bet(&self) -> bool {
        self.contrib[0] != self.contrib[1]
    }

    fn round_over(&self) -> bool {
        let moves = &self.rounds[self.round()];
        moves.len() >= 2 && moves.last() == Some(&(Move::Call as u8))
    }

    fn legal_moves(&self) -> Vec<Move> {
        let can_raise = self.raises() < MAX_RAISES;
        match (self.facing_bet(), can_raise) {
            (false, _) => vec![Move::Call, Move::Raise],
            (true, true) => vec![Move::Fold, Move::Call, Move::Raise],
            (true, false) => vec![Move::Fold, Move::Call],
        }
    }

    fn remaining_cards(&self) -> Vec<u8> {
        (0..NUM_CARDS).filter(|c| !self.cards.contains(c)).collect()
    }

    fn needs_deal(&self) -> bool {
        self.cards.len() < 2 || (self.cards.len() == 2 && self.round_over())
    }
}

impl GameRules for LeducHoldem {
    type State = LeducState;

    fn name(&self) -> String {
        "leduc".into()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> LeducState {
        LeducState {
            contrib: [1, 1],
            ..Default::default()
        }
    }

    fn step_kind(&self, s: &LeducState) -> StepKind {
        if let Some(folder) = s.folded {
            let stake = s.contrib[folder] as f64;
            let mut payoff = vec![stake; 2];
            payoff[folder] = -stake;
            return StepKind::Terminal(payoff);
        }
        if s.needs_deal() {
            let n = s.remaining_cards().len();
            return StepKind::Nature(vec![1.0 / n as f64; n]);
        }
        if s.round() == 1 && s.round_over() {
            let public = rank(s.cards[2]);
            let strength = |p: usize| {
                let r = rank(s.cards[p]);
                if r == public {
                    10 + r
                } else {
                    r
                }
            };
            let stake = s.contrib[0] as f64;
            let win = match strength(0).cmp(&strength(1)) {
                std::cmp::Ordering::Greater => stake,
                std::cmp::Ordering::Less => -stake,
                std::cmp::Ordering::Equal => 0.0,
            };
            return StepKind::Terminal(vec![win, -win]);
        }
        StepKind::Agent {
            player: s.rounds[s.round()].len() % 2,
            num_actions: s.legal_moves().len(),
        }
    }

    fn observation(&self, s: &LeducState, player: usize) -> Vec<u8> {
        let mut obs = vec![
            s.cards.len() as u8,
            s.cards.get(player).copied().unwrap_or(UNDEALT),
            s.cards.get(2).copied().unwrap_or(UNDEALT),
        ];
        obs.extend_from_slice(&s.rounds[0]);
        obs.push(ROUND_BREAK);
        obs.extend_from_slice(&s.rounds[1]);
        obs
    }

    fn apply(&self, s: &LeducState, action: usize) -> LeducState {
        let mut next = s.clone();
        if s.needs_deal() {
            next.cards.push(s.remaining_cards()[action]);
            return next;
        }
        let round = s.round();
        let actor = s.rounds[round].len() % 2;
        let other = 1 - actor;
        let mv = s.legal_moves()[action];
        match mv {
            Move::Fold => next.folded = Some(actor),
            Move::Call => next.contrib[actor] = s.contrib[other],
            Move::Raise => {
                let size = if round == 0 { 2 } else { 4 };
                next.contrib[actor] = s.contrib[other] + size;
            }
        }
        next.rounds[round].push(mv as u8);
        next
    }
}

#[cfg(test)]
mod tests {
    use crate::game::build_leduc_holdem;

    #[test]
    fn table_one_sizes() {
        let game = build_leduc_holdem();
        let e = game.enumerate();
        assert_eq!(e.states, 9457);
        assert_eq!(e.total_infosets(), 936);
        assert_eq!(e.infosets_per_player, vec![468, 468]);
        game.check_invariants().unwrap();
    }

    #[test]
    fn payoffs_bounded_by_max_pot() {
        let game = build_leduc_holdem();
        // ante 1 + 2 raises of 2 + 2 raises of 4
        for s in 0..game.num_states() {
            for a in 0..game.num_actions(s) {
                assert!(game.reward(s, a).iter().all(|r| r.abs() <= 13.0));
            }
        }
    }
}
