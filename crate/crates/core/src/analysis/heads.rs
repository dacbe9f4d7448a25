//! Same-level summaries and the head graph.
//!
//! A summary `(p, Y, p2, color, letter)` records that from `(p, γY)` the automaton can
//! reach `(p2, γ)` without touching `γ`, with the given maximal color and with or
//! without reading a letter. The head graph connects heads `(state, top)` by swaps,
//! pushes, and push-then-return summaries; its cycles are pumpable loops.

use crate::pda::{OmegaPda, StateId, Sym};
use std::collections::{HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SummaryKey {
    pub from: StateId,
    pub top: Sym,
    pub to: StateId,
    pub color: u32,
    pub letter: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    Pop(usize),
    Swap(usize, usize),
    /// Push transition, summary of the pushed symbol, summary of the symbol below.
    Push(usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct Summaries {
    pub keys: Vec<SummaryKey>,
    pub derivations: Vec<Derivation>,
    index: HashMap<SummaryKey, usize>,
    by_head: HashMap<(StateId, Sym), Vec<usize>>,
}

impl Summaries {
    /// Summaries over the transitions accepted by `allowed`.
    pub fn compute(pda: &OmegaPda, allowed: &dyn Fn(usize) -> bool) -> Self {
        let mut s = Summaries { keys: Vec::new(), derivations: Vec::new(), index: HashMap::new(), by_head: HashMap::new() };
        let mut swaps: HashMap<(StateId, Sym), Vec<usize>> = HashMap::new();
        let mut pushes: HashMap<(StateId, Sym), Vec<usize>> = HashMap::new();
        let mut work = VecDeque::new();
        for (i, t) in pda.transitions.iter().enumerate() {
            if !allowed(i) {
                continue;
            }
            match t.push.len() {
                0 => {
                    let k = SummaryKey { from: t.source, top: t.top, to: t.target, color: t.color, letter: t.label.is_some() };
                    s.insert(k, Derivation::Pop(i), &mut work);
                }
                1 => swaps.entry((t.target, t.push[0])).or_default().push(i),
                _ => pushes.entry((t.target, t.push[1])).or_default().push(i),
            }
        }
        // (state, symbol) -> push transitions with their upper summary, waiting for a summary of the lower symbol.
        let mut pending: HashMap<(StateId, Sym), Vec<(usize, usize)>> = HashMap::new();
        while let Some(e) = work.pop_front() {
            let k = s.keys[e];
            let head = (k.from, k.top);
            if let Some(ts) = swaps.get(&head) {
                for &ti in ts {
                    let t = &pda.transitions[ti];
                    let nk = SummaryKey {
                        from: t.source,
                        top: t.top,
                        to: k.to,
                        color: t.color.max(k.color),
                        letter: t.label.is_some() || k.letter,
                    };
                    s.insert(nk, Derivation::Swap(ti, e), &mut work);
                }
            }
            if let Some(ts) = pushes.get(&head) {
                for &ti in ts {
                    let t = &pda.transitions[ti];
                    let below = (k.to, t.push[0]);
                    pending.entry(below).or_default().push((ti, e));
                    let lowers: Vec<usize> = s.by_head.get(&below).cloned().unwrap_or_default();
                    for e2 in lowers {
                        s.combine(pda, ti, e, e2, &mut work);
                    }
                }
            }
            if let Some(ps) = pending.get(&head).cloned() {
                for (ti, e1) in ps {
                    s.combine(pda, ti, e1, e, &mut work);
                }
            }
        }
        s
    }

    fn combine(&mut self, pda: &OmegaPda, ti: usize, e1: usize, e2: usize, work: &mut VecDeque<usize>) {
        let t = &pda.transitions[ti];
        let (k1, k2) = (self.keys[e1], self.keys[e2]);
        let nk = SummaryKey {
            from: t.source,
            top: t.top,
            to: k2.to,
            color: t.color.max(k1.color).max(k2.color),
            letter: t.label.is_some() || k1.letter || k2.letter,
        };
        self.insert(nk, Derivation::Push(ti, e1, e2), work);
    }

    fn insert(&mut self, k: SummaryKey, d: Derivation, work: &mut VecDeque<usize>) {
        if self.index.contains_key(&k) {
            return;
        }
        let i = self.keys.len();
        self.keys.push(k);
        self.derivations.push(d);
        self.index.insert(k, i);
        self.by_head.entry((k.from, k.top)).or_default().push(i);
        work.push_back(i);
    }

    pub fn from_head(&self, q: StateId, top: Sym) -> &[usize] {
        self.by_head.get(&(q, top)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Transition sequence realizing summary `e`.
    pub fn expand(&self, e: usize, out: &mut Vec<usize>) {
        match self.derivations[e] {
            Derivation::Pop(t) => out.push(t),
            Derivation::Swap(t, e1) => {
                out.push(t);
                self.expand(e1, out);
            }
            Derivation::Push(t, e1, e2) => {
                out.push(t);
                self.expand(e1, out);
                self.expand(e2, out);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Swap(usize),
    Push(usize),
    /// Push transition followed by the summary that pops the pushed symbol.
    Summary(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeadEdge {
    pub from: usize,
    pub to: usize,
    pub color: u32,
    pub letter: bool,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug)]
pub struct Cores {
    pub d: u32,
    pub comp_of: Vec<usize>,
    /// `(edge of color d, letter edge)` per accepting component.
    pub cores: Vec<(usize, usize)>,
}

/// Heads are numbered `state * num_syms + symbol`.
#[derive(Clone, Debug)]
pub struct HeadGraph {
    pub num_syms: usize,
    pub num_heads: usize,
    pub edges: Vec<HeadEdge>,
    pub out: Vec<Vec<usize>>,
}

impl HeadGraph {
    pub fn build(pda: &OmegaPda, allowed: &dyn Fn(usize) -> bool, sums: &Summaries) -> Self {
        let num_syms = pda.num_syms();
        let num_heads = pda.states.len() * num_syms;
        let mut edges = Vec::new();
        let h = |q: StateId, x: Sym| q * num_syms + x;
        for (i, t) in pda.transitions.iter().enumerate() {
            if !allowed(i) {
                continue;
            }
            let from = h(t.source, t.top);
            let letter = t.label.is_some();
            match t.push.len() {
                1 => edges.push(HeadEdge { from, to: h(t.target, t.push[0]), color: t.color, letter, kind: EdgeKind::Swap(i) }),
                2 => {
                    edges.push(HeadEdge { from, to: h(t.target, t.push[1]), color: t.color, letter, kind: EdgeKind::Push(i) });
                    for &e in sums.from_head(t.target, t.push[1]) {
                        let k = sums.keys[e];
                        edges.push(HeadEdge {
                            from,
                            to: h(k.to, t.push[0]),
                            color: t.color.max(k.color),
                            letter: letter || k.letter,
                            kind: EdgeKind::Summary(i, e),
                        });
                    }
                }
                _ => {}
            }
        }
        let mut out = vec![Vec::new(); num_heads];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
        }
        HeadGraph { num_syms, num_heads, edges, out }
    }

    pub fn head(&self, q: StateId, x: Sym) -> usize {
        q * self.num_syms + x
    }

    pub fn split(&self, head: usize) -> (StateId, Sym) {
        (head / self.num_syms, head % self.num_syms)
    }

    pub fn expand_edge(&self, sums: &Summaries, e: usize, out: &mut Vec<usize>) {
        match self.edges[e].kind {
            EdgeKind::Swap(t) | EdgeKind::Push(t) => out.push(t),
            EdgeKind::Summary(t, s) => {
                out.push(t);
                sums.expand(s, out);
            }
        }
    }

    /// Breadth-first search from `start` over edges accepted by `keep`; returns parent edges.
    pub fn bfs(&self, start: &[usize], keep: &dyn Fn(&HeadEdge) -> bool) -> Vec<Option<Option<usize>>> {
        let mut parent: Vec<Option<Option<usize>>> = vec![None; self.num_heads];
        let mut queue = VecDeque::new();
        for &s in start {
            if parent[s].is_none() {
                parent[s] = Some(None);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &e in &self.out[v] {
                let edge = &self.edges[e];
                if keep(edge) && parent[edge.to].is_none() {
                    parent[edge.to] = Some(Some(e));
                    queue.push_back(edge.to);
                }
            }
        }
        parent
    }

    /// Edge path from a BFS root to `target` using the parent table.
    pub fn path_to(&self, parent: &[Option<Option<usize>>], target: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut v = target;
        while let Some(Some(e)) = parent[v] {
            path.push(e);
            v = self.edges[e].from;
        }
        path.reverse();
        path
    }

    /// Strongly connected components over edges with color at most `d`.
    /// Returns, per component, whether it has a `d`-colored edge and a letter edge inside.
    pub fn sccs_upto(&self, d: u32) -> (Vec<usize>, Vec<Vec<usize>>) {
        use petgraph::graph::{DiGraph, NodeIndex};
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.num_heads, self.edges.len());
        for _ in 0..self.num_heads {
            g.add_node(());
        }
        for e in &self.edges {
            if e.color <= d {
                g.add_edge(NodeIndex::new(e.from), NodeIndex::new(e.to), ());
            }
        }
        let comps = petgraph::algo::tarjan_scc(&g);
        let mut comp_of = vec![usize::MAX; self.num_heads];
        let comps: Vec<Vec<usize>> = comps.into_iter().map(|c| c.into_iter().map(|n| n.index()).collect()).collect();
        for (ci, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = ci;
            }
        }
        (comp_of, comps)
    }

    /// For each even `d`, the components containing both a `d`-colored edge and a letter
    /// edge when only edges of color ≤ `d` are kept.
    pub fn accepting_cores(&self, colors: &[u32]) -> Vec<Cores> {
        let mut out = Vec::new();
        for &d in colors.iter().filter(|c| *c % 2 == 0) {
            let (comp_of, _) = self.sccs_upto(d);
            let mut acc: HashMap<usize, usize> = HashMap::new();
            let mut let_: HashMap<usize, usize> = HashMap::new();
            for (i, e) in self.edges.iter().enumerate() {
                if e.color > d || comp_of[e.from] != comp_of[e.to] {
                    continue;
                }
                let c = comp_of[e.from];
                if e.color == d {
                    acc.entry(c).or_insert(i);
                }
                if e.letter {
                    let_.entry(c).or_insert(i);
                }
            }
            let mut cs: Vec<usize> = acc.keys().copied().filter(|c| let_.contains_key(c)).collect();
            cs.sort_unstable();
            if !cs.is_empty() {
                let cores = cs.into_iter().map(|c| (acc[&c], let_[&c])).collect();
                out.push(Cores { d, comp_of, cores });
            }
        }
        out
    }

    /// Edge path from `a` to `b` inside component `comp` using edges of color ≤ `d`.
    pub fn path_within(&self, a: usize, b: usize, d: u32, comp_of: &[usize]) -> Vec<usize> {
        let c = comp_of[a];
        let parent = self.bfs(&[a], &|e| e.color <= d && comp_of[e.from] == c && comp_of[e.to] == c);
        debug_assert!(parent[b].is_some());
        self.path_to(&parent, b)
    }
}
