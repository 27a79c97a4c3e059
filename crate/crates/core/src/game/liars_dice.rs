use super::{GameRules, StepKind};
use crate::error::{Error, Result};

const ROLL_BREAK: u8 = 0xfe;

/// Two-player Liar's Dice. Nature rolls every die (player 0's dice first). Players then
/// alternate bids `(quantity, face)`; a bid must raise the quantity, or keep it and
/// raise the face. Bids are numbered so that this order is the index order. Instead of
/// bidding a player may call liar: the bidder wins if at least `quantity` dice show
/// `face`, the caller wins otherwise. The winner gets +1 and the loser -1.
///
/// Action layout at a decision: the legal bids in increasing order, then liar (only
/// once a bid exists).
#[derive(Debug, Clone, Copy)]
pub struct LiarsDice {
    dice_per_player: usize,
    faces: usize,
}

#[derive(Debug, Clone, Default)]
pub struct LiarsDiceState {
    dice: Vec<u8>,
    bids: Vec<u16>,
    called: bool,
}

impl LiarsDice {
    pub fn new(dice_per_player: usize, faces: usize) -> Result<Self> {
        if dice_per_player < 1 {
            return Err(Error::invalid("dice_per_player", "must be at least 1"));
        }
        if faces < 2 {
            return Err(Error::invalid("faces", "must be at least 2"));
        }
        if 2 * dice_per_player * faces > u16::MAX as usize || faces > 200 {
            return Err(Error::invalid("faces", "bid space too large"));
        }
        Ok(LiarsDice {
            dice_per_player,
            faces,
        })
    }

    fn total_dice(&self) -> usize {
        2 * self.dice_per_player
    }

    fn num_bids(&self) -> usize {
        self.total_dice() * self.faces
    }

    /// `(quantity, face)` of a bid index, both one-based.
    pub fn bid(&self, index: u16) -> (usize, usize) {
        let index = index as usize;
        (index / self.faces + 1, index % self.faces + 1)
    }

    fn next_bid(&self, s: &LiarsDiceState) -> usize {
        s.bids.last().map_or(0, |&b| b as usize + 1)
    }
}

/// Closed-form state count of [`LiarsDice`] with the given parameters, saturating at
/// `u128::MAX`.
pub fn liars_dice_state_count(dice_per_player: usize, faces: usize) -> u128 {
    let total = 2 * dice_per_player as u32;
    let faces = faces as u128;
    let bids = total as u128 * faces;
    let rolls: u128 = (0..total).fold(0u128, |acc, k| acc.saturating_add(faces.saturating_pow(k)));
    let deals = faces.saturating_pow(total);
    // increasing bid sequences (decision states) plus the non-empty ones closed by liar
    let per_deal = if bids >= 127 {
        u128::MAX
    } else {
        (1u128 << bids) * 2 - 1
    };
    rolls.saturating_add(deals.saturating_mul(per_deal))
}

impl GameRules for LiarsDice {
    type State = LiarsDiceState;

    fn name(&self) -> String {
        format!("liars_dice:{}x{}", self.dice_per_player, self.faces)
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> LiarsDiceState {
        LiarsDiceState::default()
    }

    fn step_kind(&self, s: &LiarsDiceState) -> StepKind {
        if s.dice.len() < self.total_dice() {
            return StepKind::Nature(vec![1.0 / self.faces as f64; self.faces]);
        }
        if s.called {
            let last = *s.bids.last().expect("liar needs a bid");
            let (quantity, face) = self.bid(last);
            let count = s.dice.iter().filter(|&&d| d as usize + 1 == face).count();
            let bidder = (s.bids.len() - 1) % 2;
            let winner = if count >= quantity { bidder } else { 1 - bidder };
            let mut payoff = vec![-1.0; 2];
            payoff[winner] = 1.0;
            return StepKind::Terminal(payoff);
        }
        let bids_left = self.num_bids() - self.next_bid(s);
        let liar = usize::from(!s.bids.is_empty());
        StepKind::Agent {
            player: s.bids.len() % 2,
            num_actions: bids_left + liar,
        }
    }

    fn observation(&self, s: &LiarsDiceState, player: usize) -> Vec<u8> {
        let own = player * self.dice_per_player..(player + 1) * self.dice_per_player;
        let mut obs = vec![s.dice.len() as u8];
        obs.extend(s.dice.iter().enumerate().filter(|(i, _)| own.contains(i)).map(|(_, &d)| d));
        obs.push(ROLL_BREAK);
        for b in &s.bids {
            obs.extend_from_slice(&b.to_be_bytes());
        }
        obs
    }

    fn apply(&self, s: &LiarsDiceState, action: usize) -> LiarsDiceState {
        let mut next = s.clone();
        if s.dice.len() < self.total_dice() {
            next.dice.push(action as u8);
            return next;
        }
        let bid = self.next_bid(s) + action;
        if bid < self.num_bids() {
            next.bids.push(bid as u16);
        } else {
            next.called = true;
        }
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_liars_dice, Game};

    #[test]
    fn one_die_three_faces() {
        let game = build_liars_dice(1, 3).unwrap();
        let e = game.enumerate();
        assert_eq!(e.states as u128, liars_dice_state_count(1, 3));
        assert_eq!(e.states, 1147);
        // 3 faces times 32 bid histories per seat
        assert_eq!(e.infosets_per_player, vec![96, 96]);
        game.check_invariants().unwrap();
        for s in 0..game.num_states() {
            for a in 0..game.num_actions(s) {
                let r = game.reward(s, a);
                if game.is_terminal(game.successor(s, a)) {
                    assert!(r == [1.0, -1.0] || r == [-1.0, 1.0]);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for (d, f) in [(1, 2), (1, 4), (2, 2)] {
            let game = Game::build(&LiarsDice::new(d, f).unwrap(), 1 << 24).unwrap();
            assert_eq!(game.num_states() as u128, liars_dice_state_count(d, f), "{d}x{f}");
        }
    }

    #[test]
    fn two_dice_five_faces_is_rejected() {
        let count = liars_dice_state_count(2, 5);
        assert_eq!(count, 1_310_719_531);
        assert!(matches!(
            build_liars_dice(2, 5),
            Err(Error::SizeGuardExceeded { .. })
        ));
    }

    #[test]
    fn bid_order_is_quantity_then_face() {
        let rules = LiarsDice::new(1, 3).unwrap();
        assert_eq!(rules.bid(0), (1, 1));
        assert_eq!(rules.bid(2), (1, 3));
        assert_eq!(rules.bid(3), (2, 1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LiarsDice::new(0, 3).is_err());
        assert!(LiarsDice::new(1, 1).is_err());
    }
}
