//! Resolver for the two-component safe-suffix automaton.
//!
//! It tracks the component whose earliest still-safe suffix starts first (component 1 on
//! ties, and an absent suffix counts as starting after the current position). The memo
//! lists live suffix candidates in start order as `(component, energy)`; a candidate that
//! starts later with no more energy than an earlier one of the same component can never
//! become the earliest and is dropped.

use super::{Memo, Resolver, ResolverError};
use crate::pda::{Configuration, LassoWord, LetterId, OmegaPda};

#[derive(Clone, Debug)]
pub struct LssResolver {
    /// Per letter, the energy change in each component.
    pub deltas: Vec<[i64; 2]>,
}

fn encode(comp: usize, e: i64) -> i64 {
    e * 2 + comp as i64
}

fn decode(v: i64) -> (usize, i64) {
    ((v & 1) as usize, v >> 1)
}

impl LssResolver {
    /// Reads component deltas off letter names of the form `(x,y)` with `x, y ∈ {0,+,-}`.
    pub fn for_automaton(pda: &OmegaPda) -> Self {
        let d = |c: char| match c {
            '+' => 1,
            '-' => -1,
            _ => 0,
        };
        let deltas = pda
            .letters
            .iter()
            .map(|l| {
                let cs: Vec<char> = l.chars().collect();
                [d(cs[1]), d(cs[3])]
            })
            .collect();
        LssResolver { deltas }
    }

    fn update(&self, memo: &Memo, a: LetterId) -> Memo {
        let delta = self.deltas[a];
        let mut entries: Vec<(usize, i64)> = memo
            .iter()
            .map(|&v| decode(v))
            .map(|(c, e)| (c, e + delta[c]))
            .filter(|&(_, e)| e >= 0)
            .collect();
        for c in 0..2 {
            if delta[c] >= 0 {
                entries.push((c, delta[c]));
            }
        }
        let mut best = [i64::MIN; 2];
        entries.retain(|&(c, e)| {
            if e > best[c] {
                best[c] = e;
                true
            } else {
                false
            }
        });
        entries.into_iter().map(|(c, e)| encode(c, e)).collect()
    }

    /// Component (0 or 1) to track after the memo has absorbed the next letter.
    pub fn tracked(memo: &Memo) -> usize {
        memo.first().map(|&v| decode(v).0).unwrap_or(0)
    }
}

impl Resolver for LssResolver {
    fn start(&self, _: &OmegaPda) -> Memo {
        Vec::new()
    }

    fn observe(&self, pda: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        match pda.transitions[t].label {
            Some(a) => Ok(self.update(memo, a)),
            None => Ok(memo.clone()),
        }
    }

    fn choose(&self, pda: &OmegaPda, memo: &Memo, c: &Configuration, a: LetterId) -> Result<usize, ResolverError> {
        let want = Self::tracked(&self.update(memo, a));
        let top = c.top();
        let found = if want != c.state {
            pda.transitions
                .iter()
                .position(|t| t.source == c.state && t.top == top && t.label == Some(a) && t.target == want)
        } else {
            self.stay(pda, c, a)
        };
        found.ok_or_else(|| ResolverError::Undefined(format!("no transition to state {want}")))
    }

    /// Energies above the largest dip the rest of `w` can cause are immortal; capping them
    /// (and dropping later capped candidates of the same component) keeps every future choice.
    fn lasso_key(&self, memo: &Memo, w: &LassoWord) -> Option<Memo> {
        let cap = (w.prefix.len() + 2 * w.cycle.len() + 1) as i64;
        let mut capped = [false; 2];
        let mut out = Vec::new();
        for &v in memo {
            let (c, e) = decode(v);
            if capped[c] {
                continue;
            }
            if e >= cap {
                capped[c] = true;
                out.push(encode(c, cap));
            } else {
                out.push(v);
            }
        }
        Some(out)
    }
}

impl LssResolver {
    /// The unique non-switching transition for letter `a`.
    fn stay(&self, pda: &OmegaPda, c: &Configuration, a: LetterId) -> Option<usize> {
        let top = c.top();
        let d = self.deltas[a][c.state];
        pda.transitions.iter().position(|t| {
            t.source == c.state
                && t.target == c.state
                && t.top == top
                && t.label == Some(a)
                && match d {
                    1 => t.push.len() == 2,
                    -1 => t.push.is_empty() || top == crate::pda::BOTTOM,
                    _ => t.push == [top],
                }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvers::{ext, lasso_acceptance, Acceptance, GuidedRun};
    use crate::text::parse_lasso;
    use crate::zoo;

    #[test]
    fn first_letter_stays_and_pushes() {
        let f = zoo::lss();
        let r = LssResolver::for_automaton(&f.pda);
        let a = f.pda.letter_id("(+,0)").unwrap();
        let g = ext(&f.pda, &r, &GuidedRun::new(&f.pda, &r), a, None).unwrap();
        assert_eq!(g.config.state, 0);
        assert_eq!(g.config.stack.len(), 2);
    }

    #[test]
    fn switches_to_the_safe_component() {
        let f = zoo::lss();
        let r = LssResolver::for_automaton(&f.pda);
        let w = parse_lasso(&f.pda.letters, "(-,0);(-,+)").unwrap();
        let run = lasso_acceptance(&f.pda, &r, &w, 1000).unwrap();
        assert_eq!(run.acceptance, Acceptance::Accepted);
        assert!(run.cycle.iter().all(|&t| f.pda.transitions[t].source == 1));
    }
}
