//! Extensive-form games with an explicit Nature player and deterministic transitions.
//!
//! Every game is enumerated eagerly into a [`Game`] table. States are numbered in
//! depth-first preorder from the initial state, so a parent always has a smaller index
//! than its children and a reverse sweep over indices is a reverse topological order.
//! The `(state, action)` pairs of a non-terminal state occupy a contiguous block of
//! *edges*; edge-keyed tables (action values, rewards, Nature probabilities) index by
//! [`Game::edge`].

mod kuhn;
mod leduc;
mod liars_dice;
mod matching_pennies;
mod policy;
mod rollout;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use kuhn::KuhnPoker;
pub use leduc::LeducHoldem;
pub use liars_dice::{liars_dice_state_count, LiarsDice};
pub use matching_pennies::{MatchingPennies, HEADS, TAILS};
pub use policy::{Policy, TabularProfile};
pub use rollout::{
    rollout, rollout_batch, rollout_from, sample_index, scripted_trajectory, trajectory_seed,
    Origin, Step, Trajectory,
};

/// Default cap on the number of enumerated states.
pub const DEFAULT_STATE_GUARD: usize = 10_000_000;

/// Who moves at a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Role {
    Nature,
    /// Zero-based player index.
    Agent(usize),
}

/// Identifies an information set: the acting player and that player's canonical
/// observation bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoKey {
    pub player: usize,
    pub observation: Vec<u8>,
}

impl fmt::Display for InfoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:", self.player)?;
        for b in &self.observation {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// What the rules say about a state before it is enumerated.
#[derive(Debug, Clone, PartialEq)]
pub enum StepKind {
    /// Terminal with the per-player payoff credited to the action that reached it.
    Terminal(Vec<f64>),
    /// Nature moves with the given fixed distribution over its actions.
    Nature(Vec<f64>),
    Agent { player: usize, num_actions: usize },
}

/// Rules of a finite game. [`Game::build`] walks these eagerly into a table.
pub trait GameRules {
    type State: Clone;

    fn name(&self) -> String;
    fn num_players(&self) -> usize;
    fn initial_state(&self) -> Self::State;
    fn step_kind(&self, state: &Self::State) -> StepKind;
    /// Private plus public information of `player` at a non-terminal state. For the
    /// acting player this is the information-set key and must be canonical.
    fn observation(&self, state: &Self::State, player: usize) -> Vec<u8>;
    fn apply(&self, state: &Self::State, action: usize) -> Self::State;

    fn discount(&self) -> f64 {
        1.0
    }

    fn zero_sum(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Terminal,
    Nature,
    Agent { player: usize, infoset: usize },
}

#[derive(Debug, Clone)]
struct Node {
    kind: NodeKind,
    parent: Option<usize>,
    first_edge: usize,
    num_actions: usize,
    depth: usize,
    height: usize,
}

/// One information set of the enumerated game.
#[derive(Debug, Clone)]
pub struct Infoset {
    pub key: InfoKey,
    pub num_actions: usize,
    /// Member states in index order.
    pub members: Vec<usize>,
    /// Position among the owning player's information sets.
    pub local: usize,
}

/// An enumerated game: states, deterministic transitions, edge rewards, Nature
/// distributions and the information-set index.
#[derive(Debug, Clone)]
pub struct Game {
    name: String,
    n_players: usize,
    discount: f64,
    zero_sum: bool,
    nodes: Vec<Node>,
    successors: Vec<usize>,
    rewards: Vec<f64>,
    chance: Vec<f64>,
    // state * n_players -> interned observation id of that player
    observations: Vec<u32>,
    n_observations: Vec<usize>,
    infosets: Vec<Infoset>,
    infoset_lookup: HashMap<InfoKey, usize>,
    player_infosets: Vec<Vec<usize>>,
}

const NO_OBSERVATION: u32 = u32::MAX;

impl Game {
    /// Enumerates `rules` into a table, failing if more than `state_guard` states exist.
    pub fn build<R: GameRules>(rules: &R, state_guard: usize) -> Result<Game> {
        let n = rules.num_players();
        let mut game = Game {
            name: rules.name(),
            n_players: n,
            discount: rules.discount(),
            zero_sum: rules.zero_sum(),
            nodes: Vec::new(),
            successors: Vec::new(),
            rewards: Vec::new(),
            chance: Vec::new(),
            observations: Vec::new(),
            n_observations: vec![0; n],
            infosets: Vec::new(),
            infoset_lookup: HashMap::new(),
            player_infosets: vec![Vec::new(); n],
        };
        let mut obs_intern: Vec<HashMap<Vec<u8>, u32>> = vec![HashMap::new(); n];

        // (rules state, (parent, incoming edge))
        let mut stack: Vec<(R::State, Option<(usize, usize)>)> =
            vec![(rules.initial_state(), None)];
        while let Some((state, from)) = stack.pop() {
            let index = game.nodes.len();
            if index >= state_guard {
                return Err(Error::SizeGuardExceeded {
                    what: "game states",
                    required: index as u128 + 1,
                    limit: state_guard as u128,
                });
            }
            let incoming = from.map(|(_, edge)| edge);
            let parent = from.map(|(parent, edge)| {
                game.successors[edge] = index;
                parent
            });
            let depth = parent.map_or(0, |p| game.nodes[p].depth + 1);
            let first_edge = game.successors.len();

            let kind = rules.step_kind(&state);
            if !matches!(kind, StepKind::Terminal(_)) {
                for player in 0..n {
                    let bytes = rules.observation(&state, player);
                    let next = obs_intern[player].len() as u32;
                    let id = *obs_intern[player].entry(bytes).or_insert(next);
                    game.observations.push(id);
                }
            } else {
                game.observations
                    .extend(std::iter::repeat_n(NO_OBSERVATION, n));
            }

            let (node_kind, num_actions) = match kind {
                StepKind::Terminal(payoff) => {
                    assert_eq!(payoff.len(), n, "payoff arity mismatch");
                    if let Some(edge) = incoming {
                        game.rewards[edge * n..(edge + 1) * n].copy_from_slice(&payoff);
                    }
                    (NodeKind::Terminal, 0)
                }
                StepKind::Nature(probs) => {
                    assert!(!probs.is_empty(), "nature state without outcomes");
                    game.chance.extend_from_slice(&probs);
                    (NodeKind::Nature, probs.len())
                }
                StepKind::Agent {
                    player,
                    num_actions,
                } => {
                    assert!(player < n, "agent index out of range");
                    assert!(num_actions > 0, "agent state without actions");
                    let key = InfoKey {
                        player,
                        observation: rules.observation(&state, player),
                    };
                    let infoset = game.intern_infoset(key, num_actions, index);
                    game.chance.extend(std::iter::repeat_n(0.0, num_actions));
                    (NodeKind::Agent { player, infoset }, num_actions)
                }
            };
            game.successors
                .extend(std::iter::repeat_n(usize::MAX, num_actions));
            game.rewards
                .extend(std::iter::repeat_n(0.0, num_actions * n));
            game.nodes.push(Node {
                kind: node_kind,
                parent,
                first_edge,
                num_actions,
                depth,
                height: 0,
            });
            for action in (0..num_actions).rev() {
                stack.push((rules.apply(&state, action), Some((index, first_edge + action))));
            }
        }

        for (player, intern) in obs_intern.iter().enumerate() {
            game.n_observations[player] = intern.len();
        }
        for s in (0..game.nodes.len()).rev() {
            let height = game
                .children(s)
                .map(|c| game.nodes[c].height + 1)
                .max()
                .unwrap_or(0);
            game.nodes[s].height = height;
        }
        Ok(game)
    }

    fn intern_infoset(&mut self, key: InfoKey, num_actions: usize, state: usize) -> usize {
        if let Some(&id) = self.infoset_lookup.get(&key) {
            let infoset = &mut self.infosets[id];
            assert_eq!(
                infoset.num_actions, num_actions,
                "states of information set {} disagree on the action count",
                infoset.key
            );
            infoset.members.push(state);
            return id;
        }
        let id = self.infosets.len();
        let player = key.player;
        self.infoset_lookup.insert(key.clone(), id);
        self.infosets.push(Infoset {
            key,
            num_actions,
            members: vec![state],
            local: self.player_infosets[player].len(),
        });
        self.player_infosets[player].push(id);
        id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_players(&self) -> usize {
        self.n_players
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    pub fn num_states(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.successors.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn kind(&self, state: usize) -> NodeKind {
        self.nodes[state].kind
    }

    pub fn role(&self, state: usize) -> Option<Role> {
        match self.nodes[state].kind {
            NodeKind::Terminal => None,
            NodeKind::Nature => Some(Role::Nature),
            NodeKind::Agent { player, .. } => Some(Role::Agent(player)),
        }
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        matches!(self.nodes[state].kind, NodeKind::Terminal)
    }

    /// Acting player and information set id, for Agent states.
    pub fn agent(&self, state: usize) -> Option<(usize, usize)> {
        match self.nodes[state].kind {
            NodeKind::Agent { player, infoset } => Some((player, infoset)),
            _ => None,
        }
    }

    pub fn num_actions(&self, state: usize) -> usize {
        self.nodes[state].num_actions
    }

    pub fn parent(&self, state: usize) -> Option<usize> {
        self.nodes[state].parent
    }

    /// Number of actions from the initial state to `state`.
    pub fn depth(&self, state: usize) -> usize {
        self.nodes[state].depth
    }

    /// Longest number of actions from `state` to a terminal state.
    pub fn height(&self, state: usize) -> usize {
        self.nodes[state].height
    }

    pub fn edge(&self, state: usize, action: usize) -> usize {
        debug_assert!(action < self.nodes[state].num_actions);
        self.nodes[state].first_edge + action
    }

    pub fn edges(&self, state: usize) -> std::ops::Range<usize> {
        let node = &self.nodes[state];
        node.first_edge..node.first_edge + node.num_actions
    }

    pub fn successor(&self, state: usize, action: usize) -> usize {
        self.successors[self.edge(state, action)]
    }

    pub fn children(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges(state).map(move |e| self.successors[e])
    }

    /// Per-player reward for taking `action` at `state`.
    pub fn reward(&self, state: usize, action: usize) -> &[f64] {
        let e = self.edge(state, action);
        &self.rewards[e * self.n_players..(e + 1) * self.n_players]
    }

    /// Fixed Nature distribution at a Nature state.
    pub fn nature_probs(&self, state: usize) -> Option<&[f64]> {
        match self.nodes[state].kind {
            NodeKind::Nature => Some(&self.chance[self.edges(state)]),
            _ => None,
        }
    }

    /// Action distribution of the joint profile at a non-terminal state: Nature's fixed
    /// distribution or the acting player's policy at its information set.
    pub fn action_probs<'a, P: Policy + ?Sized>(&'a self, policy: &'a P, state: usize) -> &'a [f64] {
        match self.nodes[state].kind {
            NodeKind::Nature => &self.chance[self.edges(state)],
            NodeKind::Agent { infoset, .. } => policy.infoset_probs(infoset),
            NodeKind::Terminal => &[],
        }
    }

    pub fn infosets(&self) -> &[Infoset] {
        &self.infosets
    }

    pub fn infoset(&self, id: usize) -> &Infoset {
        &self.infosets[id]
    }

    pub fn infoset_id(&self, key: &InfoKey) -> Option<usize> {
        self.infoset_lookup.get(key).copied()
    }

    /// Global information set ids owned by `player`, in local order.
    pub fn player_infosets(&self, player: usize) -> &[usize] {
        &self.player_infosets[player]
    }

    /// Interned observation id of `player` at a non-terminal state.
    pub fn observation_id(&self, state: usize, player: usize) -> Option<usize> {
        let id = self.observations[state * self.n_players + player];
        (id != NO_OBSERVATION).then_some(id as usize)
    }

    /// Number of distinct observations of `player` over non-terminal states.
    pub fn num_observations(&self, player: usize) -> usize {
        self.n_observations[player]
    }

    /// State count, information sets per player, and the information-set index.
    pub fn enumerate(&self) -> Enumeration<'_> {
        Enumeration {
            states: self.num_states(),
            infosets_per_player: self.player_infosets.iter().map(Vec::len).collect(),
            index: &self.infosets,
        }
    }

    /// Checks the structural invariants of the table, returning the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for s in 0..self.num_states() {
            let node = &self.nodes[s];
            if s > 0 && node.parent.is_none() {
                return Err(format!("state {s} is unreachable"));
            }
            for c in self.children(s) {
                if c <= s || c >= self.num_states() {
                    return Err(format!("edge from {s} to {c} breaks preorder"));
                }
            }
            match node.kind {
                NodeKind::Terminal => {}
                NodeKind::Nature => {
                    let probs = &self.chance[self.edges(s)];
                    if probs.iter().any(|&p| p < 0.0) {
                        return Err(format!("negative nature probability at {s}"));
                    }
                    let total: f64 = probs.iter().sum();
                    if (total - 1.0).abs() > 1e-12 {
                        return Err(format!("nature distribution at {s} sums to {total}"));
                    }
                }
                NodeKind::Agent { player, infoset } => {
                    let info = &self.infosets[infoset];
                    if info.key.player != player || info.num_actions != node.num_actions {
                        return Err(format!("state {s} disagrees with infoset {}", info.key));
                    }
                }
            }
            if self.zero_sum {
                for e in self.edges(s) {
                    let total: f64 = self.rewards[e * self.n_players..(e + 1) * self.n_players]
                        .iter()
                        .sum();
                    if total.abs() > 1e-12 {
                        return Err(format!("reward on edge {e} sums to {total}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Result of [`Game::enumerate`].
#[derive(Debug, Clone)]
pub struct Enumeration<'a> {
    pub states: usize,
    pub infosets_per_player: Vec<usize>,
    pub index: &'a [Infoset],
}

impl Enumeration<'_> {
    pub fn total_infosets(&self) -> usize {
        self.infosets_per_player.iter().sum()
    }
}

/// Builds a built-in game by name: `matching_pennies_imperfect`,
/// `matching_pennies_perfect`, `kuhn`, `leduc` or `liars_dice:<dice>x<faces>`.
pub fn build_game(name: &str) -> Result<Game> {
    build_game_with_guard(name, DEFAULT_STATE_GUARD)
}

pub fn build_game_with_guard(name: &str, state_guard: usize) -> Result<Game> {
    match name {
        "matching_pennies_imperfect" => Game::build(&MatchingPennies::new(true), state_guard),
        "matching_pennies_perfect" => Game::build(&MatchingPennies::new(false), state_guard),
        "kuhn" => Game::build(&KuhnPoker, state_guard),
        "leduc" => Game::build(&LeducHoldem, state_guard),
        other => {
            let spec = other
                .strip_prefix("liars_dice:")
                .ok_or_else(|| Error::invalid("game", format!("unknown game `{other}`")))?;
            let (dice, faces) = spec
                .split_once('x')
                .and_then(|(d, f)| Some((d.parse::<usize>().ok()?, f.parse::<usize>().ok()?)))
                .ok_or_else(|| {
                    Error::invalid("game", format!("expected liars_dice:<dice>x<faces>, got `{other}`"))
                })?;
            build_liars_dice_with_guard(dice, faces, state_guard)
        }
    }
}

pub fn build_matching_pennies(imperfect: bool) -> Game {
    Game::build(&MatchingPennies::new(imperfect), DEFAULT_STATE_GUARD)
        .expect("matching pennies fits the guard")
}

pub fn build_kuhn_poker() -> Game {
    Game::build(&KuhnPoker, DEFAULT_STATE_GUARD).expect("kuhn poker fits the guard")
}

pub fn build_leduc_holdem() -> Game {
    Game::build(&LeducHoldem, DEFAULT_STATE_GUARD).expect("leduc fits the guard")
}

pub fn build_liars_dice(dice_per_player: usize, faces: usize) -> Result<Game> {
    build_liars_dice_with_guard(dice_per_player, faces, DEFAULT_STATE_GUARD)
}

pub fn build_liars_dice_with_guard(
    dice_per_player: usize,
    faces: usize,
    state_guard: usize,
) -> Result<Game> {
    let rules = LiarsDice::new(dice_per_player, faces)?;
    let required = liars_dice_state_count(dice_per_player, faces);
    if required > state_guard as u128 {
        return Err(Error::SizeGuardExceeded {
            what: "liar's dice states",
            required,
            limit: state_guard as u128,
        });
    }
    Game::build(&rules, state_guard)
}
