//! Strategies as pushdown transducers and their synthesis.
//!
//! A [`StrategyPdt`] reads letters of `Σ1` and names an output letter in each state where it
//! waits for input. A round of a play feeds one input letter, follows ε-moves until the
//! machine waits again and reads the output there.
//!
//! Synthesis produces three machines. `T` plays the block game on `P_d`: its states are
//! vertices of the finite reduction (plus the input letter not yet consumed by the arena) and
//! its stack holds one frame `(symbol below, claim, largest color)` per pushed level. `T'`
//! additionally keeps the top stack symbol in its state. `T_{-d}` hides the ε-simulation of
//! the condition: it answers with the `Σ2` letter of a block once the block's transition
//! reading the pair has been chosen, feeding a filler letter to `T'` in between.

use super::arena::{ArenaNode, GsArena};
use super::pd::{build_pd, PdAutomaton};
use super::reduction::{solve_pushdown_game, PushdownSolution, Vertex};
use super::{gs_to_pushdown_game, GaleStewartSpec, GameError, Player};
use crate::pda::{apply, replay, Configuration, LassoWord, ModeIndex, OmegaPda, Sym, Transition, BOTTOM};
use crate::resolvers::Resolver;
use crate::text::{lines, parse_pda_with_rest, parse_usize, print_pda, ParseError};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const DEFAULT_EPS_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyPdt {
    /// Letters are the inputs; colors are unused.
    pub machine: OmegaPda,
    /// Output letter of each state, if it has one.
    pub output: Vec<Option<usize>>,
    pub out_letters: Vec<String>,
    pub eps_cap: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayError {
    #[error("no repetition within {0} rounds")]
    GuardExceeded(usize),
    #[error("transducer stuck in state {state} on input {input}")]
    Stuck { state: String, input: String },
    #[error("transducer has no output in state {0}")]
    NoOutput(String),
    #[error("more than {0} consecutive epsilon moves")]
    EpsilonDivergence(usize),
}

impl StrategyPdt {
    /// Output after feeding `inputs` from the start.
    pub fn respond(&self, inputs: &[usize]) -> Result<usize, PlayError> {
        let mut run = StrategyRun::new(self)?;
        let mut last = None;
        for &b in inputs {
            last = Some(run.step(b)?);
        }
        last.ok_or_else(|| PlayError::NoOutput(self.machine.states[run.config.state].clone()))
    }

    /// Drops states unreachable from the initial state in the transition graph.
    fn pruned(self) -> Self {
        let n = self.machine.states.len();
        let mut succ = vec![Vec::new(); n];
        for t in &self.machine.transitions {
            succ[t.source].push(t.target);
        }
        let mut new_id = vec![usize::MAX; n];
        let mut order = vec![self.machine.initial];
        new_id[self.machine.initial] = 0;
        let mut k = 0;
        while k < order.len() {
            for &w in &succ[order[k]] {
                if new_id[w] == usize::MAX {
                    new_id[w] = order.len();
                    order.push(w);
                }
            }
            k += 1;
        }
        let transitions = self
            .machine
            .transitions
            .iter()
            .filter(|t| new_id[t.source] != usize::MAX)
            .map(|t| Transition { source: new_id[t.source], target: new_id[t.target], ..t.clone() })
            .collect();
        let machine = OmegaPda {
            states: order.iter().map(|&q| self.machine.states[q].clone()).collect(),
            letters: self.machine.letters,
            stack_syms: self.machine.stack_syms,
            initial: 0,
            transitions,
        };
        StrategyPdt { machine, output: order.iter().map(|&q| self.output[q]).collect(), out_letters: self.out_letters, eps_cap: self.eps_cap }
    }
}

/// A transducer mid-play.
pub struct StrategyRun<'a> {
    pdt: &'a StrategyPdt,
    index: ModeIndex,
    pub config: Configuration,
}

impl<'a> StrategyRun<'a> {
    pub fn new(pdt: &'a StrategyPdt) -> Result<Self, PlayError> {
        let mut run = StrategyRun { pdt, index: pdt.machine.mode_index(), config: pdt.machine.initial_config() };
        run.close(&mut |_| {})?;
        Ok(run)
    }

    fn close(&mut self, on_height: &mut dyn FnMut(usize)) -> Result<(), PlayError> {
        let m = &self.pdt.machine;
        let mut steps = 0;
        while let Some(&ti) = self.index.at(self.config.state, self.config.top()).iter().find(|&&t| m.transitions[t].label.is_none()) {
            steps += 1;
            if steps > self.pdt.eps_cap {
                return Err(PlayError::EpsilonDivergence(self.pdt.eps_cap));
            }
            apply(&mut self.config, &m.transitions[ti]);
            on_height(self.config.height());
        }
        Ok(())
    }

    pub fn output(&self) -> Option<usize> {
        self.pdt.output[self.config.state]
    }

    /// Feeds one input letter and returns the answer.
    pub fn step(&mut self, input: usize) -> Result<usize, PlayError> {
        self.step_with(input, &mut |_| {})
    }

    fn step_with(&mut self, input: usize, on_height: &mut dyn FnMut(usize)) -> Result<usize, PlayError> {
        let m = &self.pdt.machine;
        let name = |s: usize| m.states[s].clone();
        let ti = *self
            .index
            .at(self.config.state, self.config.top())
            .iter()
            .find(|&&t| m.transitions[t].label == Some(input))
            .ok_or_else(|| PlayError::Stuck { state: name(self.config.state), input: m.letters.get(input).cloned().unwrap_or_default() })?;
        apply(&mut self.config, &m.transitions[ti]);
        on_height(self.config.height());
        self.close(on_height)?;
        self.output().ok_or_else(|| PlayError::NoOutput(name(self.config.state)))
    }
}

/// A play as rounds `(input, output)`: `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    pub prefix: Vec<(usize, usize)>,
    pub cycle: Vec<(usize, usize)>,
}

impl Play {
    /// The outcome as a word over the condition letters of `spec`.
    pub fn condition_word(&self, spec: &GaleStewartSpec) -> LassoWord {
        let conv = |v: &[(usize, usize)]| v.iter().map(|&(b, a)| spec.letter_of(b, a)).collect();
        LassoWord { prefix: conv(&self.prefix), cycle: conv(&self.cycle) }
    }
}

/// Plays `pdt` against the input lasso until a round repeats with the stack below untouched.
pub fn simulate_play(pdt: &StrategyPdt, adam: &LassoWord, guard: usize) -> Result<Play, PlayError> {
    type Key = (usize, Sym, usize);
    let mut run = StrategyRun::new(pdt)?;
    let mut live: Vec<(usize, Key, usize)> = Vec::new();
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut rounds = Vec::new();
    for k in 0..guard {
        let pos = adam.pos_after(k);
        let key = (run.config.state, run.config.top(), pos);
        if let Some(&li) = index.get(&key) {
            let start = live[li].2;
            return Ok(Play { prefix: rounds[..start].to_vec(), cycle: rounds[start..].to_vec() });
        }
        index.insert(key, live.len());
        live.push((run.config.height(), key, rounds.len()));
        let b = adam.at_pos(pos);
        let out = run.step_with(b, &mut |h| {
            while live.last().is_some_and(|l| l.0 > h) {
                let (_, key, _) = live.pop().unwrap();
                index.remove(&key);
            }
        })?;
        rounds.push((b, out));
    }
    Err(PlayError::GuardExceeded(guard))
}

type TKey = (usize, Option<usize>);
type Frame = (Sym, usize, u32);

enum TMove {
    Read(usize, TKey),
    Eps(TKey),
    Push(Frame, TKey),
    Pop(Frame, TKey),
}

struct Extractor<'a> {
    arena: &'a GsArena,
    sol: &'a PushdownSolution,
    out: Vec<Vec<usize>>,
    states: Vec<TKey>,
    state_ids: HashMap<TKey, usize>,
    frames: Vec<Frame>,
    frame_ids: HashMap<Frame, usize>,
}

impl Extractor<'_> {
    fn state(&mut self, k: TKey) -> usize {
        if let Some(&i) = self.state_ids.get(&k) {
            return i;
        }
        self.states.push(k);
        self.state_ids.insert(k, self.states.len() - 1);
        self.states.len() - 1
    }

    fn frame(&mut self, f: Frame) -> usize {
        if let Some(&i) = self.frame_ids.get(&f) {
            return i;
        }
        self.frames.push(f);
        self.frame_ids.insert(f, self.frames.len() - 1);
        self.frames.len() - 1
    }

    fn mode_of(&self, v: usize) -> Result<(usize, Sym, usize, u32), GameError> {
        match self.sol.reduction.vertices[v] {
            Vertex::Mode { q, x, claim, m } => Ok((q, x, claim, m)),
            other => Err(GameError::BadSpec(format!("strategy reaches non-mode vertex {other:?}"))),
        }
    }

    fn succ(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().map(move |&e| self.sol.reduction.game.edges[e].1)
    }

    /// Output and moves of a `T` state; interns every state and frame mentioned.
    fn moves(&mut self, (v, pend): TKey) -> Result<(Option<usize>, Vec<TMove>), GameError> {
        let red = &self.sol.reduction;
        let (q, x, _, m) = self.mode_of(v)?;
        let mut moves = Vec::new();
        let mut output = None;
        match self.arena.nodes[q] {
            ArenaNode::Adam(_) => {
                let succ: Vec<usize> = self.succ(v).collect();
                for w in succ {
                    let (q2, ..) = self.mode_of(w)?;
                    let ArenaNode::Eve(_, b) = self.arena.nodes[q2] else { continue };
                    match pend {
                        None => moves.push(TMove::Read(b, (w, None))),
                        Some(p) if p == b => moves.push(TMove::Eps((w, None))),
                        Some(_) => {}
                    }
                }
            }
            ArenaNode::Eve(..) => {
                if let Some(w) = self.sol.eve_move(v) {
                    let (q2, ..) = self.mode_of(w)?;
                    if let ArenaNode::Forced(_, _, c) = self.arena.nodes[q2] {
                        output = Some(c);
                        for b in 0..self.arena.n1 {
                            moves.push(TMove::Read(b, (w, Some(b))));
                        }
                    }
                }
            }
            ArenaNode::Forced(..) => {
                let Some(w) = self.succ(v).next() else { return Ok((None, moves)) };
                match red.vertices[w] {
                    Vertex::Mode { .. } => moves.push(TMove::Eps((w, pend))),
                    Vertex::Push { t, claim: below_claim, m: below_m } => {
                        let Some(c) = self.sol.eve_move(w) else { return Ok((None, moves)) };
                        let Vertex::Claim { chosen, .. } = red.vertices[c] else { return Ok((None, moves)) };
                        let tr = &self.arena.game.system.transitions[t];
                        if let Some(enter) = red.mode(tr.target, tr.push[1], chosen, 0) {
                            moves.push(TMove::Push((tr.push[0], below_claim, below_m), (enter, pend)));
                        }
                    }
                    Vertex::EveWins | Vertex::AdamWins => {
                        let sys = &self.arena.game.system;
                        let Some(tr) = sys.transitions.iter().find(|t| t.source == q && t.top == x && t.push.is_empty()) else {
                            return Ok((None, moves));
                        };
                        let m2 = m.max(tr.color);
                        let target = tr.target;
                        for f in self.frames.clone() {
                            let (y, r, m1) = f;
                            if let Some(back) = red.mode(target, y, r, m1.max(m2)) {
                                moves.push(TMove::Pop(f, (back, pend)));
                            }
                        }
                    }
                    Vertex::Claim { .. } => {}
                }
            }
        }
        for mv in &moves {
            match *mv {
                TMove::Read(_, k) | TMove::Eps(k) | TMove::Pop(_, k) => {
                    self.state(k);
                }
                TMove::Push(f, k) => {
                    self.frame(f);
                    self.state(k);
                }
            }
        }
        Ok((output, moves))
    }
}

/// Eve's strategy in the block game on `P_d` as a transducer from `Σ1` to `Σ2'`.
fn extract_t(spec: &GaleStewartSpec, pd: &PdAutomaton, arena: &GsArena, sol: &PushdownSolution) -> Result<StrategyPdt, GameError> {
    let mut ex = Extractor {
        arena,
        sol,
        out: sol.reduction.game.out_edges(),
        states: Vec::new(),
        state_ids: HashMap::new(),
        frames: Vec::new(),
        frame_ids: HashMap::new(),
    };
    ex.state((0, None));
    // Pops depend on the frames seen so far, so repeat until nothing new appears.
    let all = loop {
        let sizes = (ex.states.len(), ex.frames.len());
        let mut all = Vec::new();
        let mut i = 0;
        while i < ex.states.len() {
            all.push(ex.moves(ex.states[i])?);
            i += 1;
        }
        if sizes == (ex.states.len(), ex.frames.len()) {
            break all;
        }
    };
    let nf = ex.frames.len();
    let mut transitions = Vec::new();
    let t = |source: usize, top: Sym, label: Option<usize>, target: usize, push: Vec<Sym>| Transition { source, top, label, target, push, color: 0 };
    for (i, (_, moves)) in all.iter().enumerate() {
        for mv in moves {
            match *mv {
                TMove::Read(b, k) => transitions.extend((0..=nf).map(|top| t(i, top, Some(b), ex.state_ids[&k], vec![top]))),
                TMove::Eps(k) => transitions.extend((0..=nf).map(|top| t(i, top, None, ex.state_ids[&k], vec![top]))),
                TMove::Push(f, k) => {
                    let f = ex.frame_ids[&f] + 1;
                    transitions.extend((0..=nf).map(|top| t(i, top, None, ex.state_ids[&k], vec![top, f])));
                }
                TMove::Pop(f, k) => transitions.push(t(i, ex.frame_ids[&f] + 1, None, ex.state_ids[&k], vec![])),
            }
        }
    }
    let states = ex
        .states
        .iter()
        .map(|&(v, p)| match p {
            None => format!("v{v}"),
            Some(b) => format!("v{v}+{b}"),
        })
        .collect();
    let machine = OmegaPda {
        states,
        letters: spec.sigma1.clone(),
        stack_syms: (0..nf).map(|i| format!("f{i}")).collect(),
        initial: 0,
        transitions,
    };
    let out_letters = (0..pd.n2p).map(|c| super::pd::sigma2_prime_name(spec, c)).collect();
    Ok(StrategyPdt { machine, output: all.into_iter().map(|(o, _)| o).collect(), out_letters, eps_cap: DEFAULT_EPS_CAP })
}

/// Keeps the top stack symbol in the state: `(q, X)` is `q` with `X` on top, and plain `q`
/// is the moment right after a pop, before the uncovered symbol is read.
pub fn track_top(t: &StrategyPdt) -> StrategyPdt {
    let m = &t.machine;
    let (nq, ns) = (m.states.len(), m.num_syms());
    let pair = |q: usize, x: Sym| q * ns + x;
    let plain = |q: usize| nq * ns + q;
    let mut states = Vec::with_capacity(nq * ns + nq);
    for q in 0..nq {
        for x in 0..ns {
            states.push(format!("{}.{}", m.states[q], m.sym_name(x)));
        }
    }
    states.extend(m.states.iter().cloned());
    let mut transitions = Vec::new();
    for tr in &m.transitions {
        let target = match tr.push.last() {
            Some(&y) => pair(tr.target, y),
            None => plain(tr.target),
        };
        transitions.push(Transition { source: pair(tr.source, tr.top), target, ..tr.clone() });
    }
    for q in 0..nq {
        for x in 0..ns {
            transitions.push(Transition { source: plain(q), top: x, label: None, target: pair(q, x), push: vec![x], color: 0 });
        }
    }
    let mut output = Vec::with_capacity(states.len());
    for q in 0..nq {
        output.extend(std::iter::repeat_n(t.output[q], ns));
    }
    output.extend(std::iter::repeat_n(None, nq));
    let machine = OmegaPda { states, letters: m.letters.clone(), stack_syms: m.stack_syms.clone(), initial: pair(m.initial, BOTTOM), transitions };
    StrategyPdt { machine, output, out_letters: t.out_letters.clone(), eps_cap: t.eps_cap }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Answer {
    None,
    Letter(usize),
    EpsStep,
    ReadStep,
}

/// Turns a `Σ2'` transducer with the top tracked in its state into a `Σ2` transducer.
///
/// Phases: `0` before the first input, `1` waiting for a block's `Σ2` letter, `2 + a2` while
/// the block of `a2` is being simulated. Input letter `0` is the filler fed to the inner machine.
pub fn remove_delays(spec: &GaleStewartSpec, tp: &StrategyPdt) -> StrategyPdt {
    let m = &tp.machine;
    let n2 = spec.sigma2.len();
    let nq = m.states.len();
    let np = 2 + n2;
    let id = |q: usize, ph: usize| q * np + ph;
    let mut reading = vec![false; nq];
    for t in &m.transitions {
        if t.label.is_some() {
            reading[t.source] = true;
        }
    }
    let answer = |q: usize| match tp.output[q] {
        None => Answer::None,
        Some(c) if c < n2 => Answer::Letter(c),
        Some(c) if spec.condition.transitions[c - n2].label.is_none() => Answer::EpsStep,
        Some(_) => Answer::ReadStep,
    };
    let mut states = Vec::with_capacity(nq * np);
    for q in &m.states {
        states.push(format!("{q}|init"));
        states.push(format!("{q}|wait"));
        for a in &spec.sigma2 {
            states.push(format!("{q}|out:{a}"));
        }
    }
    let mut transitions = Vec::new();
    let mut add = |tr: &Transition, sp: usize, label: Option<usize>, tph: usize| {
        transitions.push(Transition { source: id(tr.source, sp), top: tr.top, label, target: id(tr.target, tph), push: tr.push.clone(), color: 0 });
    };
    for tr in &m.transitions {
        let src = tr.source;
        match tr.label {
            None => {
                for ph in 0..np {
                    add(tr, ph, None, ph);
                }
            }
            Some(a) => {
                add(tr, 0, Some(a), 1);
                if a == 0 {
                    if let Answer::Letter(c) = answer(src) {
                        add(tr, 1, None, 2 + c);
                    }
                }
                for a2 in 0..n2 {
                    match answer(src) {
                        Answer::EpsStep if a == 0 && reading[src] => add(tr, 2 + a2, None, 2 + a2),
                        Answer::ReadStep if reading[src] => add(tr, 2 + a2, Some(a), 1),
                        _ => {}
                    }
                }
            }
        }
    }
    let mut output = vec![None; nq * np];
    for q in 0..nq {
        if reading[q] && answer(q) == Answer::ReadStep {
            for a2 in 0..n2 {
                output[id(q, 2 + a2)] = Some(a2);
            }
        }
    }
    let machine = OmegaPda { states, letters: m.letters.clone(), stack_syms: m.stack_syms.clone(), initial: id(m.initial, 0), transitions };
    StrategyPdt { machine, output, out_letters: spec.sigma2.clone(), eps_cap: tp.eps_cap }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    /// Strategy in the block game, answering with letters of `Σ2 ∪ Δ`.
    pub t: StrategyPdt,
    pub t_prime: StrategyPdt,
    /// Strategy in the original game.
    pub t_minus_d: StrategyPdt,
    /// Size of the finite reduction solved.
    pub vertices: usize,
}

pub fn synthesize(spec: &GaleStewartSpec, budget: usize) -> Result<Synthesis, GameError> {
    let pd = build_pd(spec);
    let arena = gs_to_pushdown_game(&pd.pda, pd.n1, pd.n2p)?;
    let sol = solve_pushdown_game(&arena.game, budget)?;
    if sol.winner == Player::Adam {
        return Err(GameError::NoStrategy);
    }
    let t = extract_t(spec, &pd, &arena, &sol)?.pruned();
    let t_prime = track_top(&t).pruned();
    let t_minus_d = remove_delays(spec, &t_prime).pruned();
    Ok(Synthesis { t, t_prime, t_minus_d, vertices: sol.vertices() })
}

/// Answers of the block-game strategy built from `sigma` and a resolver of the condition, for
/// every prefix of `inputs`: a `Σ2` letter opens each block, then the resolver names
/// transitions until one reads the block's pair. Answers are `Σ2'` indices.
pub fn compose_sigma_d(
    spec: &GaleStewartSpec,
    sigma: &dyn Fn(&[usize]) -> usize,
    r: &dyn Resolver,
    inputs: &[usize],
) -> Result<Vec<usize>, GameError> {
    let p = &spec.condition;
    let n2 = spec.sigma2.len();
    let mut outs: Vec<usize> = Vec::with_capacity(inputs.len());
    for n in 0..inputs.len() {
        let opens = n == 0 || (outs[n - 1] >= n2 && p.transitions[outs[n - 1] - n2].label.is_some());
        if opens {
            let visible: Vec<usize> = (0..=n).filter(|&j| j == n || outs[j] < n2).map(|j| inputs[j]).collect();
            let a2 = sigma(&visible);
            if a2 >= n2 {
                return Err(GameError::BadSpec(format!("strategy answered {a2}, not a letter of sigma2")));
            }
            outs.push(a2);
        } else {
            let rho: Vec<usize> = outs.iter().filter(|&&c| c >= n2).map(|&c| c - n2).collect();
            let j = (0..n).rev().find(|&j| outs[j] < n2).expect("a block is open");
            let letter = spec.letter_of(inputs[j], outs[j]);
            let run = replay(p, &rho).map_err(|e| GameError::BadSpec(e.to_string()))?;
            let mut memo = r.start(p);
            for &t in &rho {
                memo = r.observe(p, &memo, t)?;
            }
            let t = r.choose(p, &memo, run.last(), letter)?;
            outs.push(n2 + t);
        }
    }
    Ok(outs)
}

pub fn print_strategy(s: &StrategyPdt) -> String {
    let mut out = print_pda(&s.machine);
    writeln!(out, "outputs {}", s.out_letters.join(" ")).unwrap();
    for (q, o) in s.output.iter().enumerate() {
        if let Some(c) = o {
            writeln!(out, "tout {} {}", s.machine.states[q], s.out_letters[*c]).unwrap();
        }
    }
    writeln!(out, "epscap {}", s.eps_cap).unwrap();
    out
}

pub fn parse_strategy(src: &str) -> Result<StrategyPdt, ParseError> {
    let (machine, rest) = parse_pda_with_rest(src)?;
    let mut out_letters: Option<Vec<String>> = None;
    let mut output = vec![None; machine.states.len()];
    let mut eps_cap = DEFAULT_EPS_CAP;
    for l in rest {
        match l.keyword() {
            "outputs" => out_letters = Some(l.tokens[1..].iter().map(|s| s.to_string()).collect()),
            "tout" => {
                let a = l.args(2)?;
                let q = machine.state_id(a[0]).ok_or_else(|| l.err(format!("unknown state `{}`", a[0])))?;
                let letters = out_letters.as_ref().ok_or_else(|| l.err("`outputs` must come before `tout`"))?;
                let c = letters.iter().position(|x| x == a[1]).ok_or_else(|| l.err(format!("unknown output `{}`", a[1])))?;
                output[q] = Some(c);
            }
            "epscap" => eps_cap = parse_usize(&l, l.args(1)?[0])?,
            k => return Err(l.err(format!("unknown declaration `{k}`"))),
        }
    }
    let out_letters = out_letters.ok_or_else(|| ParseError::new(0, "missing `outputs`"))?;
    Ok(StrategyPdt { machine, output, out_letters, eps_cap })
}

/// Whether a source holds a transducer rather than a bare automaton or spec.
pub fn is_strategy_source(src: &str) -> bool {
    lines(src).iter().any(|l| l.keyword() == "outputs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lasso_membership;
    use crate::games::{universality_spec, DEFAULT_BUDGET};
    use crate::resolvers::FirstEnabled;
    use crate::zoo;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_lassos(n1: usize, seed: u64, count: usize) -> Vec<LassoWord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let u = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..n1)).collect();
                let v = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..n1)).collect();
                LassoWord::new(u, v).unwrap()
            })
            .collect()
    }

    #[test]
    fn echo_strategy_copies_and_wins() {
        let spec = zoo::echo_spec();
        let s = synthesize(&spec, DEFAULT_BUDGET).unwrap();
        for w in random_lassos(2, 7, 30) {
            let play = simulate_play(&s.t_minus_d, &w, 1000).unwrap();
            assert!(play.prefix.iter().chain(&play.cycle).all(|&(b, a)| b == a));
            assert!(lasso_membership(&spec.condition, &play.condition_word(&spec)));
        }
    }

    #[test]
    fn counter_strategy_wins() {
        let spec = zoo::counter_spec();
        let s = synthesize(&spec, DEFAULT_BUDGET).unwrap();
        for w in random_lassos(2, 11, 30) {
            let play = simulate_play(&s.t_minus_d, &w, 10_000).unwrap();
            assert!(lasso_membership(&spec.condition, &play.condition_word(&spec)), "{w:?}");
        }
    }

    #[test]
    fn block_strategy_outcomes_are_accepted_by_pd() {
        let spec = zoo::echo_spec();
        let pd = build_pd(&spec);
        let s = synthesize(&spec, DEFAULT_BUDGET).unwrap();
        for w in random_lassos(2, 3, 20) {
            let play = simulate_play(&s.t, &w, 1000).unwrap();
            let conv = |v: &[(usize, usize)]| v.iter().map(|&(b, c)| pd.letter(b, c)).collect::<Vec<_>>();
            let x = LassoWord::new(conv(&play.prefix), conv(&play.cycle)).unwrap();
            assert!(lasso_membership(&pd.pda, &x));
        }
    }

    #[test]
    fn text_round_trip() {
        let s = synthesize(&zoo::echo_spec(), DEFAULT_BUDGET).unwrap();
        let again = parse_strategy(&print_strategy(&s.t_minus_d)).unwrap();
        assert_eq!(again, s.t_minus_d);
    }

    #[test]
    fn no_strategy_when_adam_wins() {
        let spec = universality_spec(&zoo::example23().pda, true);
        assert_eq!(synthesize(&spec, DEFAULT_BUDGET).unwrap_err(), GameError::NoStrategy);
    }

    #[test]
    fn composed_answers_form_blocks() {
        let spec = zoo::echo_spec();
        let pd = build_pd(&spec);
        let copy = |v: &[usize]| *v.last().unwrap();
        let inputs = [0, 1, 1, 0, 1, 0, 0, 1];
        let outs = compose_sigma_d(&spec, &copy, &FirstEnabled, &inputs).unwrap();
        let word: Vec<usize> = inputs.iter().zip(&outs).map(|(&b, &c)| pd.letter(b, c)).collect();
        // the deterministic block checker can read the whole answer sequence
        let mut c = pd.pda.initial_config();
        for &l in &word {
            let t = pd.pda.transitions.iter().find(|t| t.source == c.state && t.top == c.top() && t.label == Some(l));
            apply(&mut c, t.expect("block checker stuck"));
        }
        // letter, reading transition, then letter, ε back to the start, reading transition
        assert_eq!(outs[0], inputs[0]);
        assert_eq!(outs[2], inputs[2]);
        assert!(outs[1] >= 2 && outs[2] < 2 && outs[3] >= 2 && outs[4] >= 2 && outs[5] < 2);
    }
}
