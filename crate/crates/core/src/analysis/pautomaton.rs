//! Finite automata over stack contents recognizing regular sets of configurations,
//! and pre* saturation.
//!
//! Words are read top-of-stack first, starting from the entry state `s_q` of the
//! configuration's control state and ending with the bottom marker in a final state.

use crate::pda::{Configuration, OmegaPda, StateId, Sym, BOTTOM};
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAutomaton {
    /// Control states of the subject automaton; automaton states `0..num_control` are the entries.
    pub num_control: usize,
    pub num_syms: usize,
    pub num_states: usize,
    pub finals: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, Sym, usize)>,
}

impl PAutomaton {
    pub fn empty(pda: &OmegaPda) -> Self {
        PAutomaton {
            num_control: pda.states.len(),
            num_syms: pda.num_syms(),
            num_states: pda.states.len(),
            finals: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// Every well-formed configuration.
    pub fn all(pda: &OmegaPda) -> Self {
        let mut a = Self::empty(pda);
        let u = a.fresh();
        let f = a.fresh();
        a.finals.insert(f);
        for q in 0..a.num_control {
            a.edges.insert((q, BOTTOM, f));
            for x in 1..a.num_syms {
                a.edges.insert((q, x, u));
            }
        }
        for x in 1..a.num_syms {
            a.edges.insert((u, x, u));
        }
        a.edges.insert((u, BOTTOM, f));
        a
    }

    /// Exactly the listed configurations.
    pub fn from_configs(pda: &OmegaPda, configs: &[Configuration]) -> Self {
        let mut a = Self::empty(pda);
        let f = a.fresh();
        a.finals.insert(f);
        for c in configs {
            let mut cur = c.state;
            let syms: Vec<Sym> = c.stack.iter().rev().copied().collect();
            for (i, &x) in syms.iter().enumerate() {
                let next = if i + 1 == syms.len() { f } else { a.fresh() };
                a.edges.insert((cur, x, next));
                cur = next;
            }
        }
        a
    }

    /// All configurations whose head `(state, top)` is in `heads`.
    pub fn from_heads(pda: &OmegaPda, heads: &[(StateId, Sym)]) -> Self {
        let mut a = Self::empty(pda);
        let u = a.fresh();
        let f = a.fresh();
        a.finals.insert(f);
        for x in 1..a.num_syms {
            a.edges.insert((u, x, u));
        }
        a.edges.insert((u, BOTTOM, f));
        for &(q, x) in heads {
            let to = if x == BOTTOM { f } else { u };
            a.edges.insert((q, x, to));
        }
        a
    }

    fn fresh(&mut self) -> usize {
        self.num_states += 1;
        self.num_states - 1
    }

    fn step_set(&self, from: &HashSet<usize>, x: Sym) -> HashSet<usize> {
        self.edges
            .iter()
            .filter(|(s, y, _)| *y == x && from.contains(s))
            .map(|&(_, _, t)| t)
            .collect()
    }

    /// States reachable from `start` reading `word` (top-first symbols).
    pub fn read(&self, start: usize, word: &[Sym]) -> HashSet<usize> {
        let mut cur: HashSet<usize> = [start].into_iter().collect();
        for &x in word {
            cur = self.step_set(&cur, x);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        let word: Vec<Sym> = c.stack.iter().rev().copied().collect();
        self.read(c.state, &word).iter().any(|s| self.finals.contains(s))
    }

    /// Membership of an encoded word `⊥ γ q`, i.e. stack bottom-first followed by the state.
    pub fn accepts_encoded(&self, stack: &[Sym], state: StateId) -> bool {
        self.contains(&Configuration::new(state, stack.to_vec()))
    }

    /// True when no configuration is accepted.
    pub fn is_empty(&self) -> bool {
        let mut seen: HashSet<usize> = (0..self.num_control).collect();
        let mut stack: Vec<usize> = seen.iter().copied().collect();
        while let Some(s) = stack.pop() {
            if self.finals.contains(&s) {
                return false;
            }
            for &(a, _, b) in &self.edges {
                if a == s && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        true
    }
}

/// Saturates `target` to the set of configurations reaching it using transitions accepted by `allowed`.
pub fn saturate_pre_star(pda: &OmegaPda, allowed: &dyn Fn(usize) -> bool, target: &PAutomaton) -> PAutomaton {
    let mut a = target.clone();
    let rules: Vec<usize> = (0..pda.transitions.len()).filter(|&i| allowed(i)).collect();
    loop {
        let mut added = Vec::new();
        for &i in &rules {
            let t = &pda.transitions[i];
            let word: Vec<Sym> = t.push.iter().rev().copied().collect();
            for s in a.read(t.target, &word) {
                let e = (t.source, t.top, s);
                if !a.edges.contains(&e) {
                    added.push(e);
                }
            }
        }
        if added.is_empty() {
            return a;
        }
        a.edges.extend(added);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn encodes_configs_exactly() {
        let p = zoo::example23().pda;
        let c1 = Configuration::new(2, vec![0, 1]);
        let c2 = Configuration::new(4, vec![0]);
        let a = PAutomaton::from_configs(&p, &[c1.clone(), c2.clone()]);
        assert!(a.contains(&c1));
        assert!(a.contains(&c2));
        assert!(!a.contains(&Configuration::new(2, vec![0])));
        assert!(!a.contains(&Configuration::new(2, vec![0, 1, 1])));
        assert!(a.accepts_encoded(&[0, 1], 2));
        assert!(!PAutomaton::from_configs(&p, &[]).contains(&c1));
        assert!(PAutomaton::from_configs(&p, &[]).is_empty());
    }

    #[test]
    fn pre_star_of_everything_and_nothing() {
        let p = zoo::example23().pda;
        let all = PAutomaton::all(&p);
        let sat = saturate_pre_star(&p, &|_| true, &all);
        for c in crate::analysis::configs_up_to(&p, 3) {
            assert!(sat.contains(&c));
        }
        assert_eq!(saturate_pre_star(&p, &|_| true, &sat), sat);
        let none = PAutomaton::from_configs(&p, &[]);
        assert!(saturate_pre_star(&p, &|_| true, &none).is_empty());
    }
}
