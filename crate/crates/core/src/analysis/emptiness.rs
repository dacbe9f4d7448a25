//! Parity emptiness with witnesses, lasso membership, and tail-acceptance sets.

use super::heads::{HeadGraph, Summaries};
use super::pautomaton::{saturate_pre_star, PAutomaton};
use crate::pda::{replay, Configuration, LassoWord, LetterId, OmegaPda, StateId, Transition};
use std::collections::{HashMap, VecDeque};

/// Finite certificate of an accepting run: replaying `stem` then repeating `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptinessWitness {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
    pub loop_start: Configuration,
}

/// An automaton derived from another, with each transition mapped to its origin.
#[derive(Clone, Debug)]
pub struct Derived {
    pub pda: OmegaPda,
    pub origin: Vec<usize>,
}

/// Moves ε-colors onto the next letter transition. ε-transitions get color 0 and
/// letter transitions a nonzero color; a run keeps its parity verdict.
pub fn normalize_colors(pda: &OmegaPda) -> Derived {
    let shift = if pda.transitions.iter().any(|t| t.label.is_some() && t.color == 0) { 2 } else { 0 };
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); pda.states.len()];
    for (i, t) in pda.transitions.iter().enumerate() {
        by_source[t.source].push(i);
    }
    let mut ids: HashMap<(StateId, u32), StateId> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |q: StateId, p: u32, states: &mut Vec<(StateId, u32)>, queue: &mut VecDeque<StateId>| {
        *ids.entry((q, p)).or_insert_with(|| {
            states.push((q, p));
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    intern(pda.initial, 0, &mut states, &mut queue);
    let mut transitions = Vec::new();
    let mut origin = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (q, p) = states[s];
        for &i in &by_source[q] {
            let t = &pda.transitions[i];
            let (target, color) = match t.label {
                None => (intern(t.target, p.max(t.color), &mut states, &mut queue), 0),
                Some(_) => (intern(t.target, 0, &mut states, &mut queue), p.max(t.color) + shift),
            };
            transitions.push(Transition { source: s, top: t.top, label: t.label, target, push: t.push.clone(), color });
            origin.push(i);
        }
    }
    let names = states
        .iter()
        .map(|&(q, p)| if p == 0 { pda.states[q].clone() } else { format!("{}/{}", pda.states[q], p) })
        .collect();
    Derived {
        pda: OmegaPda {
            states: names,
            letters: pda.letters.clone(),
            stack_syms: pda.stack_syms.clone(),
            initial: 0,
            transitions,
        },
        origin,
    }
}

/// Accepting run search over the head graph, without normalization.
fn find_witness(pda: &OmegaPda) -> Option<EmptinessWitness> {
    let all = |_: usize| true;
    let sums = Summaries::compute(pda, &all);
    let g = HeadGraph::build(pda, &all, &sums);
    let root = g.head(pda.initial, crate::pda::BOTTOM);
    let parent = g.bfs(&[root], &|_| true);
    for cores in g.accepting_cores(&pda.colors()) {
        for &(acc, letter) in &cores.cores {
            let u = g.edges[acc].from;
            if parent[u].is_none() {
                continue;
            }
            let v = g.edges[acc].to;
            let x = g.edges[letter].from;
            let y = g.edges[letter].to;
            let mut loop_edges = vec![acc];
            loop_edges.extend(g.path_within(v, x, cores.d, &cores.comp_of));
            loop_edges.push(letter);
            loop_edges.extend(g.path_within(y, u, cores.d, &cores.comp_of));
            let mut stem = Vec::new();
            for e in g.path_to(&parent, u) {
                g.expand_edge(&sums, e, &mut stem);
            }
            let mut cycle = Vec::new();
            for e in loop_edges {
                g.expand_edge(&sums, e, &mut cycle);
            }
            let loop_start = replay(pda, &stem).expect("stem replays").last().clone();
            return Some(EmptinessWitness { stem, cycle, loop_start });
        }
    }
    None
}

/// Returns an accepting-run witness, or `None` when the language is empty.
pub fn parity_nonempty(pda: &OmegaPda) -> Option<EmptinessWitness> {
    let norm = normalize_colors(pda);
    let w = find_witness(&norm.pda)?;
    let stem: Vec<usize> = w.stem.iter().map(|&t| norm.origin[t]).collect();
    let cycle: Vec<usize> = w.cycle.iter().map(|&t| norm.origin[t]).collect();
    let loop_start = replay(pda, &stem).expect("mapped stem replays").last().clone();
    Some(EmptinessWitness { stem, cycle, loop_start })
}

/// Checks that a witness describes a genuine accepting run.
pub fn validate_witness(pda: &OmegaPda, w: &EmptinessWitness) -> Result<(), String> {
    if w.cycle.is_empty() {
        return Err("empty loop".into());
    }
    let mut all = w.stem.clone();
    all.extend(&w.cycle);
    let run = replay(pda, &all).map_err(|e| e.to_string())?;
    let start = &run.configurations[w.stem.len()];
    if *start != w.loop_start {
        return Err("loop start does not match the replayed stem".into());
    }
    let end = run.last();
    let h = start.height();
    let min_h = run.configurations[w.stem.len()..].iter().map(|c| c.height()).min().unwrap();
    if end.state != start.state || end.top() != start.top() || min_h < h {
        return Err("loop does not pump".into());
    }
    if !w.cycle.iter().any(|&t| pda.transitions[t].label.is_some()) {
        return Err("loop reads no letter".into());
    }
    let colors: Vec<u32> = w.cycle.iter().map(|&t| pda.transitions[t].color).collect();
    match crate::pda::lim_sup_color(&colors) {
        Some((_, true)) => Ok(()),
        _ => Err("loop max color is odd".into()),
    }
}

/// Product of the automaton with the deterministic tracker of `w`.
/// State `q@i` means the automaton is in `q` and the next letter is at tracker position `i`.
pub fn lasso_product(pda: &OmegaPda, w: &LassoWord) -> Derived {
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); pda.states.len()];
    for (i, t) in pda.transitions.iter().enumerate() {
        by_source[t.source].push(i);
    }
    let mut ids: HashMap<(StateId, usize), StateId> = HashMap::new();
    let mut states: Vec<(StateId, usize)> = vec![(pda.initial, 0)];
    ids.insert((pda.initial, 0), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut transitions = Vec::new();
    let mut origin = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (q, pos) = states[s];
        for &i in &by_source[q] {
            let t = &pda.transitions[i];
            let npos = match t.label {
                None => pos,
                Some(a) if a == w.at_pos(pos) => w.next_pos(pos),
                Some(_) => continue,
            };
            let target = *ids.entry((t.target, npos)).or_insert_with(|| {
                states.push((t.target, npos));
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            transitions.push(Transition { source: s, top: t.top, label: t.label, target, push: t.push.clone(), color: t.color });
            origin.push(i);
        }
    }
    let names = states.iter().map(|&(q, i)| format!("{}@{}", pda.states[q], i)).collect();
    Derived {
        pda: OmegaPda {
            states: names,
            letters: pda.letters.clone(),
            stack_syms: pda.stack_syms.clone(),
            initial: 0,
            transitions,
        },
        origin,
    }
}

/// Accepting run of the automaton on `w`, as a witness over the automaton's own transitions.
pub fn lasso_witness(pda: &OmegaPda, w: &LassoWord) -> Option<EmptinessWitness> {
    let prod = lasso_product(pda, w);
    let wit = parity_nonempty(&prod.pda)?;
    let stem: Vec<usize> = wit.stem.iter().map(|&t| prod.origin[t]).collect();
    let cycle: Vec<usize> = wit.cycle.iter().map(|&t| prod.origin[t]).collect();
    let loop_start = replay(pda, &stem).expect("projected stem replays").last().clone();
    Some(EmptinessWitness { stem, cycle, loop_start })
}

pub fn lasso_membership(pda: &OmegaPda, w: &LassoWord) -> bool {
    parity_nonempty(&lasso_product(pda, w).pda).is_some()
}

/// Configurations from which `tail^ω` is accepted.
pub fn accepts_tail_of(pda: &OmegaPda, tail: LetterId) -> PAutomaton {
    let allowed = |i: usize| pda.transitions[i].label.is_none_or(|a| a == tail);
    let sums = Summaries::compute(pda, &allowed);
    let g = HeadGraph::build(pda, &allowed, &sums);
    let colors: Vec<u32> = {
        let mut c: Vec<u32> = (0..pda.transitions.len()).filter(|&i| allowed(i)).map(|i| pda.transitions[i].color).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    // Good heads reach an accepting core; search backwards from core members.
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); g.num_heads];
    for e in &g.edges {
        rev[e.to].push(e.from);
    }
    let mut good = vec![false; g.num_heads];
    let mut stack = Vec::new();
    for cores in g.accepting_cores(&colors) {
        for &(acc, _) in &cores.cores {
            let h = g.edges[acc].from;
            if !good[h] {
                good[h] = true;
                stack.push(h);
            }
        }
    }
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !good[u] {
                good[u] = true;
                stack.push(u);
            }
        }
    }
    let heads: Vec<(StateId, usize)> = (0..g.num_heads).filter(|&h| good[h]).map(|h| g.split(h)).collect();
    let c0 = PAutomaton::from_heads(pda, &heads);
    saturate_pre_star(pda, &allowed, &c0)
}
