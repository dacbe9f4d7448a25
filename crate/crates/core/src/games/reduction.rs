//! Solving pushdown parity games by reduction to a finite parity game.
//!
//! A play position of the finite game is a mode `(q, X)` together with the claim `R` Eve made
//! when the current top level was pushed and the largest color `m` seen since then. `R` lists
//! the pairs `(p, c)`: "if this level is popped into state `p` with largest color `c`, Eve
//! wins". At a push Eve names a claim for the new level, and Adam either enters the new level
//! or skips it by picking a pair of the claim. A pop ends the finite play, won by Eve iff the
//! pair reached is in `R`.

use super::arena::PushdownParityGame;
use super::finite::{solve_finite, FiniteParityGame, FiniteSolution};
use super::{GameError, Player};
use crate::analysis::heads::Summaries;
use crate::pda::{StateId, Sym, BOTTOM};
use std::collections::{BTreeSet, HashMap};

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Mode { q: StateId, x: Sym, claim: usize, m: u32 },
    /// Eve picks a claim after push transition `t` taken with largest color `m` below.
    Push { t: usize, claim: usize, m: u32 },
    /// Adam enters the pushed level or skips it using one of the pairs of `chosen`.
    Claim { t: usize, claim: usize, m: u32, chosen: usize },
    EveWins,
    AdamWins,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub vertices: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    /// Interned claims; claim 0 is empty.
    pub claims: Vec<Vec<(StateId, u32)>>,
    pub game: FiniteParityGame,
}

impl Reduction {
    pub fn mode(&self, q: StateId, x: Sym, claim: usize, m: u32) -> Option<usize> {
        self.index.get(&Vertex::Mode { q, x, claim, m }).copied()
    }
}

#[derive(Clone, Debug)]
pub struct PushdownSolution {
    pub winner: Player,
    pub reduction: Reduction,
    pub solution: FiniteSolution,
}

impl PushdownSolution {
    pub fn vertices(&self) -> usize {
        self.reduction.vertices.len()
    }

    /// Successor Eve plays at vertex `v` of the reduction, if she has one there.
    pub fn eve_move(&self, v: usize) -> Option<usize> {
        let e = self.solution.strategy[v]?;
        (self.reduction.game.owner[v] == Player::Eve).then(|| self.reduction.game.edges[e].1)
    }
}

struct Builder<'a> {
    g: &'a PushdownParityGame,
    by_mode: HashMap<(StateId, Sym), Vec<usize>>,
    returns: HashMap<(StateId, Sym), Vec<(StateId, u32)>>,
    sums: Summaries,
    red: Reduction,
    claim_ids: HashMap<Vec<(StateId, u32)>, usize>,
    queue: Vec<usize>,
    budget: usize,
}

impl Builder<'_> {
    fn vertex(&mut self, v: Vertex) -> Result<usize, GameError> {
        if let Some(&i) = self.red.index.get(&v) {
            return Ok(i);
        }
        if self.red.vertices.len() >= self.budget {
            return Err(GameError::ResourceExceeded(self.budget));
        }
        let i = self.red.vertices.len();
        let owner = match v {
            Vertex::Mode { q, .. } => self.g.owner[q],
            Vertex::Push { .. } | Vertex::EveWins => Player::Eve,
            Vertex::Claim { .. } | Vertex::AdamWins => Player::Adam,
        };
        self.red.vertices.push(v);
        self.red.index.insert(v, i);
        self.red.game.owner.push(owner);
        self.queue.push(i);
        Ok(i)
    }

    fn claim_id(&mut self, c: Vec<(StateId, u32)>) -> usize {
        if let Some(&i) = self.claim_ids.get(&c) {
            return i;
        }
        self.red.claims.push(c.clone());
        self.claim_ids.insert(c, self.red.claims.len() - 1);
        self.red.claims.len() - 1
    }

    fn returns(&mut self, q: StateId, x: Sym) -> Vec<(StateId, u32)> {
        if let Some(r) = self.returns.get(&(q, x)) {
            return r.clone();
        }
        let set: BTreeSet<(StateId, u32)> = self.sums.from_head(q, x).iter().map(|&e| (self.sums.keys[e].to, self.sums.keys[e].color)).collect();
        let r: Vec<_> = set.into_iter().collect();
        self.returns.insert((q, x), r.clone());
        r
    }

    fn edge(&mut self, u: usize, v: usize, c: u32) {
        self.red.game.edges.push((u, v, c));
    }

    fn expand(&mut self, i: usize) -> Result<(), GameError> {
        let sys = &self.g.system;
        match self.red.vertices[i] {
            Vertex::Mode { q, x, claim, m } => {
                let moves = self.by_mode.get(&(q, x)).cloned().unwrap_or_default();
                for ti in moves {
                    let t = &sys.transitions[ti];
                    let m2 = m.max(t.color);
                    match t.push.len() {
                        0 => {
                            let win = self.red.claims[claim].contains(&(t.target, m2));
                            let v = self.vertex(if win { Vertex::EveWins } else { Vertex::AdamWins })?;
                            self.edge(i, v, t.color);
                        }
                        1 => {
                            let v = self.vertex(Vertex::Mode { q: t.target, x: t.push[0], claim, m: m2 })?;
                            self.edge(i, v, t.color);
                        }
                        _ => {
                            let v = self.vertex(Vertex::Push { t: ti, claim, m: m2 })?;
                            self.edge(i, v, t.color);
                        }
                    }
                }
            }
            Vertex::Push { t, claim, m } => {
                let tr = &sys.transitions[t];
                let rets = self.returns(tr.target, tr.push[1]);
                if rets.len() >= usize::BITS as usize - 1 || (1usize << rets.len()) > self.budget {
                    return Err(GameError::ResourceExceeded(self.budget));
                }
                for mask in 0..(1usize << rets.len()) {
                    let chosen: Vec<_> = (0..rets.len()).filter(|b| mask >> b & 1 == 1).map(|b| rets[b]).collect();
                    let chosen = self.claim_id(chosen);
                    let v = self.vertex(Vertex::Claim { t, claim, m, chosen })?;
                    self.edge(i, v, 0);
                }
            }
            Vertex::Claim { t, claim, m, chosen } => {
                let tr = &sys.transitions[t];
                let (target, below, above) = (tr.target, tr.push[0], tr.push[1]);
                let v = self.vertex(Vertex::Mode { q: target, x: above, claim: chosen, m: 0 })?;
                self.edge(i, v, 0);
                for (p, c) in self.red.claims[chosen].clone() {
                    let v = self.vertex(Vertex::Mode { q: p, x: below, claim, m: m.max(c) })?;
                    self.edge(i, v, c);
                }
            }
            Vertex::EveWins => self.edge(i, i, 0),
            Vertex::AdamWins => self.edge(i, i, 1),
        }
        Ok(())
    }
}

/// Builds the part of the finite game reachable from the initial configuration.
pub fn build_reduction(g: &PushdownParityGame, budget: usize) -> Result<Reduction, GameError> {
    let mut by_mode: HashMap<(StateId, Sym), Vec<usize>> = HashMap::new();
    for (i, t) in g.system.transitions.iter().enumerate() {
        by_mode.entry((t.source, t.top)).or_default().push(i);
    }
    let mut b = Builder {
        g,
        by_mode,
        returns: HashMap::new(),
        sums: Summaries::compute(&g.system, &|_| true),
        red: Reduction { vertices: Vec::new(), index: HashMap::new(), claims: Vec::new(), game: FiniteParityGame::default() },
        claim_ids: HashMap::new(),
        queue: Vec::new(),
        budget,
    };
    b.claim_id(Vec::new());
    b.vertex(Vertex::Mode { q: g.system.initial, x: BOTTOM, claim: 0, m: 0 })?;
    let mut next = 0;
    while next < b.red.vertices.len() {
        b.expand(next)?;
        next += 1;
    }
    Ok(b.red)
}

/// Winner of the initial configuration `(q_I, ⊥)`, with Eve's positional strategy in the
/// finite game. Dead ends lose for their owner.
pub fn solve_pushdown_game(g: &PushdownParityGame, budget: usize) -> Result<PushdownSolution, GameError> {
    let reduction = build_reduction(g, budget)?;
    let solution = solve_finite(&reduction.game);
    Ok(PushdownSolution { winner: solution.winner[0], reduction, solution })
}
