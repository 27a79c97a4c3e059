use super::{GameRules, StepKind};

const NUM_CARDS: u8 = 3;
const PASS: u8 = 0;
const BET: u8 = 1;
const UNDEALT: u8 = 0xff;

/// Three-card Kuhn poker. Nature deals one card to each player (player 0 first), each
/// player antes 1, and a single bet of 1 is allowed. Action 0 is check/fold, action 1
/// is bet/call.
#[derive(Debug, Clone, Copy, Default)]
pub struct KuhnPoker;

#[derive(Debug, Clone, Default)]
pub struct KuhnState {
    cards: Vec<u8>,
    history: Vec<u8>,
}

impl KuhnState {
    fn remaining_cards(&self) -> Vec<u8> {
        (0..NUM_CARDS).filter(|c| !self.cards.contains(c)).collect()
    }
}

impl GameRules for KuhnPoker {
    type State = KuhnState;

    fn name(&self) -> String {
        "kuhn".into()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> KuhnState {
        KuhnState::default()
    }

    fn step_kind(&self, s: &KuhnState) -> StepKind {
        if s.cards.len() < 2 {
            let n = s.remaining_cards().len();
            return StepKind::Nature(vec![1.0 / n as f64; n]);
        }
        let showdown = |stake: f64| {
            let win = if s.cards[0] > s.cards[1] { stake } else { -stake };
            StepKind::Terminal(vec![win, -win])
        };
        match s.history.as_slice() {
            [PASS, PASS] => showdown(1.0),
            [BET, BET] | [PASS, BET, BET] => showdown(2.0),
            [BET, PASS] => StepKind::Terminal(vec![1.0, -1.0]),
            [PASS, BET, PASS] => StepKind::Terminal(vec![-1.0, 1.0]),
            h => StepKind::Agent {
                player: h.len() % 2,
                num_actions: 2,
            },
        }
    }

    fn observation(&self, s: &KuhnState, player: usize) -> Vec<u8> {
        let mut obs = vec![s.cards.len() as u8, s.cards.get(player).copied().unwrap_or(UNDEALT)];
        obs.extend_from_slice(&s.history);
        obs
    }

    fn apply(&self, s: &KuhnState, action: usize) -> KuhnState {
        let mut next = s.clone();
        if s.cards.len() < 2 {
            next.cards.push(s.remaining_cards()[action]);
        } else {
            next.history.push(action as u8);
        }
        next
    }
}
