//! Pushdown parity games and the arena of a Gale-Stewart game with a deterministic condition.

use super::finite::FiniteParityGame;
use super::{GameError, Player};
use crate::pda::{is_deterministic, OmegaPda, Transition, BOTTOM};

/// A pushdown system whose transitions are moves (labels are ignored) with an owner per state.
#[derive(Clone, Debug)]
pub struct PushdownParityGame {
    pub system: OmegaPda,
    pub owner: Vec<Player>,
}

/// Arena node of the Gale-Stewart game on a deterministic automaton over `Σ1 × Σ2'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArenaNode {
    /// Player 1 picks a letter of `Σ1`.
    Adam(usize),
    /// Player 2 answers the `Σ1` letter with a letter of `Σ2'`.
    Eve(usize, usize),
    /// The automaton processes the pair.
    Forced(usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct GsArena {
    pub game: PushdownParityGame,
    pub nodes: Vec<ArenaNode>,
    pub n1: usize,
    pub n2: usize,
}

impl GsArena {
    pub fn node_id(&self, n: ArenaNode) -> usize {
        match n {
            ArenaNode::Adam(s) => s,
            ArenaNode::Eve(s, b) => self.dpda_states() + s * self.n1 + b,
            ArenaNode::Forced(s, b, c) => self.dpda_states() * (1 + self.n1) + (s * self.n1 + b) * self.n2 + c,
        }
    }

    pub fn dpda_states(&self) -> usize {
        self.game.system.states.len() / (1 + self.n1 + self.n1 * self.n2)
    }
}

/// Arena of `G(L(dpda))` where letter `b * n2 + c` of `dpda` is the pair `(b, c)`.
///
/// Letter choices carry the automaton's minimum color; forced nodes apply the unique
/// transition on the chosen pair, after any ε-transitions enabled first.
pub fn gs_to_pushdown_game(dpda: &OmegaPda, n1: usize, n2: usize) -> Result<GsArena, GameError> {
    if !is_deterministic(dpda).deterministic {
        return Err(GameError::NotDeterministic);
    }
    assert_eq!(dpda.letters.len(), n1 * n2, "letters must be the pairs");
    let nq = dpda.states.len();
    let low = dpda.transitions.iter().map(|t| t.color).min().unwrap_or(0);
    let mut nodes = Vec::with_capacity(nq * (1 + n1 + n1 * n2));
    let mut states = Vec::new();
    for s in 0..nq {
        nodes.push(ArenaNode::Adam(s));
        states.push(format!("{}", dpda.states[s]));
    }
    for s in 0..nq {
        for b in 0..n1 {
            nodes.push(ArenaNode::Eve(s, b));
            states.push(format!("{}?{}", dpda.states[s], b));
        }
    }
    for s in 0..nq {
        for b in 0..n1 {
            for c in 0..n2 {
                nodes.push(ArenaNode::Forced(s, b, c));
                states.push(format!("{}!{}", dpda.states[s], dpda.letters[b * n2 + c]));
            }
        }
    }
    let eve = |s: usize, b: usize| nq + s * n1 + b;
    let forced = |s: usize, b: usize, c: usize| nq * (1 + n1) + (s * n1 + b) * n2 + c;
    let owner = nodes.iter().map(|n| if matches!(n, ArenaNode::Adam(_)) { Player::Adam } else { Player::Eve }).collect();
    let mut transitions = Vec::new();
    let keep = |src: usize, x: usize, dst: usize| Transition { source: src, top: x, label: None, target: dst, push: vec![x], color: low };
    for s in 0..nq {
        for x in 0..dpda.num_syms() {
            for b in 0..n1 {
                transitions.push(keep(s, x, eve(s, b)));
                for c in 0..n2 {
                    transitions.push(keep(eve(s, b), x, forced(s, b, c)));
                }
            }
        }
    }
    for t in &dpda.transitions {
        for b in 0..n1 {
            for c in 0..n2 {
                let target = match t.label {
                    None => forced(t.target, b, c),
                    Some(l) if l == b * n2 + c => t.target,
                    Some(_) => continue,
                };
                transitions.push(Transition { source: forced(t.source, b, c), top: t.top, label: None, target, push: t.push.clone(), color: t.color });
            }
        }
    }
    let system = OmegaPda { states, letters: Vec::new(), stack_syms: dpda.stack_syms.clone(), initial: dpda.initial, transitions };
    Ok(GsArena { game: PushdownParityGame { system, owner }, nodes, n1, n2 })
}

/// The finite game as a pushdown game that never touches the stack.
pub fn embed_finite(g: &FiniteParityGame) -> PushdownParityGame {
    let states = (0..g.owner.len()).map(|v| format!("v{v}")).collect();
    let transitions = g
        .edges
        .iter()
        .map(|&(u, v, c)| Transition { source: u, top: BOTTOM, label: None, target: v, push: vec![BOTTOM], color: c })
        .collect();
    PushdownParityGame {
        system: OmegaPda { states, letters: Vec::new(), stack_syms: Vec::new(), initial: 0, transitions },
        owner: g.owner.clone(),
    }
}
