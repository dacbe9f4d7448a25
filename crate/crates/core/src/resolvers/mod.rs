//! Resolvers: functions picking the next transition from the run so far and the next letter.
//!
//! A resolver keeps a memo summarizing the history; the current configuration is passed
//! alongside so implementations can consult the top stack symbol.

pub mod lss;
pub mod moore;
pub mod pdt;

pub use lss::LssResolver;
pub use moore::{determinize_moore, MooreResolver};
pub use pdt::PdtResolver;

use crate::pda::{apply, is_enabled, Configuration, LassoWord, LetterId, OmegaPda, Sym};
use std::collections::HashMap;
use thiserror::Error;

pub type Memo = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolverError {
    #[error("resolver returned transition {transition} which cannot process letter {letter} here")]
    ResolverStuck { transition: usize, letter: usize },
    #[error("more than {0} consecutive epsilon transitions")]
    EpsilonDivergence(usize),
    #[error("resolver output undefined: {0}")]
    Undefined(String),
    #[error("transducer has no run on the history: {0}")]
    TransducerStuck(String),
}

pub trait Resolver {
    fn start(&self, pda: &OmegaPda) -> Memo;
    /// Memo after transition `t` was taken.
    fn observe(&self, pda: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError>;
    /// Transition to take in `config` when `letter` is next.
    fn choose(&self, pda: &OmegaPda, memo: &Memo, config: &Configuration, letter: LetterId) -> Result<usize, ResolverError>;
    /// Finite abstraction of the memo that determines all future choices on `w`.
    /// `None` means no such abstraction is known.
    fn lasso_key(&self, memo: &Memo, _w: &LassoWord) -> Option<Memo> {
        Some(memo.clone())
    }
}

impl<R: Resolver + ?Sized> Resolver for &R {
    fn start(&self, pda: &OmegaPda) -> Memo {
        (**self).start(pda)
    }
    fn observe(&self, pda: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        (**self).observe(pda, memo, t)
    }
    fn choose(&self, pda: &OmegaPda, memo: &Memo, config: &Configuration, letter: LetterId) -> Result<usize, ResolverError> {
        (**self).choose(pda, memo, config, letter)
    }
    fn lasso_key(&self, memo: &Memo, w: &LassoWord) -> Option<Memo> {
        (**self).lasso_key(memo, w)
    }
}

impl<R: Resolver + ?Sized> Resolver for Box<R> {
    fn start(&self, pda: &OmegaPda) -> Memo {
        (**self).start(pda)
    }
    fn observe(&self, pda: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        (**self).observe(pda, memo, t)
    }
    fn choose(&self, pda: &OmegaPda, memo: &Memo, config: &Configuration, letter: LetterId) -> Result<usize, ResolverError> {
        (**self).choose(pda, memo, config, letter)
    }
    fn lasso_key(&self, memo: &Memo, w: &LassoWord) -> Option<Memo> {
        (**self).lasso_key(memo, w)
    }
}

/// A run prefix produced by a resolver, with the resolver's memo.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidedRun {
    pub transitions: Vec<usize>,
    pub config: Configuration,
    pub letters: usize,
    pub memo: Memo,
}

impl GuidedRun {
    pub fn new(pda: &OmegaPda, r: &dyn Resolver) -> Self {
        GuidedRun { transitions: Vec::new(), config: pda.initial_config(), letters: 0, memo: r.start(pda) }
    }
}

pub fn default_eps_cap(pda: &OmegaPda, height: usize) -> usize {
    pda.states.len() * (height + 2) * pda.num_syms() + 1
}

/// Extends `g` by the resolver's choices until one letter `a` has been processed.
pub fn ext(pda: &OmegaPda, r: &dyn Resolver, g: &GuidedRun, a: LetterId, eps_cap: Option<usize>) -> Result<GuidedRun, ResolverError> {
    let mut g = g.clone();
    ext_in_place(pda, r, &mut g, a, eps_cap, &mut |_, _| {})?;
    Ok(g)
}

/// In-place `ext` calling `on_step(transition, config after)` for each appended transition.
pub fn ext_in_place(
    pda: &OmegaPda,
    r: &dyn Resolver,
    g: &mut GuidedRun,
    a: LetterId,
    eps_cap: Option<usize>,
    on_step: &mut dyn FnMut(usize, &Configuration),
) -> Result<(), ResolverError> {
    let mut eps = 0;
    loop {
        let ti = r.choose(pda, &g.memo, &g.config, a)?;
        let t = pda.transitions.get(ti).ok_or(ResolverError::ResolverStuck { transition: ti, letter: a })?;
        if !is_enabled(t, &g.config) || t.label.is_some_and(|b| b != a) {
            return Err(ResolverError::ResolverStuck { transition: ti, letter: a });
        }
        apply(&mut g.config, t);
        g.transitions.push(ti);
        g.memo = r.observe(pda, &g.memo, ti)?;
        on_step(ti, &g.config);
        if t.label.is_some() {
            g.letters += 1;
            return Ok(());
        }
        eps += 1;
        let cap = eps_cap.unwrap_or_else(|| default_eps_cap(pda, g.config.height()));
        if eps > cap {
            return Err(ResolverError::EpsilonDivergence(cap));
        }
    }
}

pub fn run_on_prefix(pda: &OmegaPda, r: &dyn Resolver, word: &[LetterId], eps_cap: Option<usize>) -> Result<GuidedRun, ResolverError> {
    let mut g = GuidedRun::new(pda, r);
    for &a in word {
        ext_in_place(pda, r, &mut g, a, eps_cap, &mut |_, _| {})?;
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Accepted,
    Rejected,
    Stuck(ResolverError),
}

/// Resolver-induced run on a lasso, split into a prefix and a segment repeating forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedRun {
    pub acceptance: Acceptance,
    pub prefix: Vec<usize>,
    /// Empty when the run got stuck.
    pub cycle: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no repetition found within {0} letters")]
pub struct GuardExceeded(pub usize);

/// Decides whether the run induced by `r` on `w` is accepting.
///
/// Before each letter the tuple (state, top, lasso position, memo key) is recorded with the
/// stack height. A record stays live while the stack never drops below its height; meeting a
/// live record again means the segment in between repeats forever.
pub fn lasso_acceptance(pda: &OmegaPda, r: &dyn Resolver, w: &LassoWord, guard: usize) -> Result<InducedRun, GuardExceeded> {
    type Key = (usize, Sym, usize, Memo);
    let mut g = GuidedRun::new(pda, r);
    // Live records: (height, key, run position), heights nondecreasing.
    let mut live: Vec<(usize, Key, usize)> = Vec::new();
    let mut index: HashMap<Key, usize> = HashMap::new();
    for k in 0..guard {
        let pos = w.pos_after(k);
        if let Some(mk) = r.lasso_key(&g.memo, w) {
            let key: Key = (g.config.state, g.config.top(), pos, mk);
            if let Some(&li) = index.get(&key) {
                let start = live[li].2;
                let cycle = g.transitions[start..].to_vec();
                let max = cycle.iter().map(|&t| pda.transitions[t].color).max().unwrap_or(1);
                let acceptance = if max % 2 == 0 { Acceptance::Accepted } else { Acceptance::Rejected };
                return Ok(InducedRun { acceptance, prefix: g.transitions[..start].to_vec(), cycle });
            }
            index.insert(key.clone(), live.len());
            live.push((g.config.height(), key, g.transitions.len()));
        }
        let res = ext_in_place(pda, r, &mut g, w.at_pos(pos), None, &mut |_, c| {
            let h = c.height();
            while live.last().is_some_and(|l| l.0 > h) {
                let (_, key, _) = live.pop().unwrap();
                index.remove(&key);
            }
        });
        if let Err(e) = res {
            return Ok(InducedRun { acceptance: Acceptance::Stuck(e), prefix: g.transitions, cycle: Vec::new() });
        }
    }
    Err(GuardExceeded(guard))
}

/// Lasso acceptance for a Moore resolver.
pub fn moore_lasso_acceptance(pda: &OmegaPda, m: &MooreResolver, w: &LassoWord, guard: usize) -> Result<InducedRun, GuardExceeded> {
    lasso_acceptance(pda, m, w, guard)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conformance {
    Pass,
    Fail(String),
    Inconclusive,
    /// Word outside the language; nothing to check.
    Skipped,
}

/// Checks that `r` induces accepting runs on the in-language words of `suite`.
pub fn verify_resolver(pda: &OmegaPda, r: &dyn Resolver, suite: &[(LassoWord, bool)], guard: usize) -> Vec<Conformance> {
    suite
        .iter()
        .map(|(w, inside)| {
            if !inside {
                return Conformance::Skipped;
            }
            match lasso_acceptance(pda, r, w, guard) {
                Ok(InducedRun { acceptance: Acceptance::Accepted, .. }) => Conformance::Pass,
                Ok(InducedRun { acceptance: Acceptance::Rejected, .. }) => Conformance::Fail("induced run rejects".into()),
                Ok(InducedRun { acceptance: Acceptance::Stuck(e), .. }) => Conformance::Fail(e.to_string()),
                Err(_) => Conformance::Inconclusive,
            }
        })
        .collect()
}

/// Resolver that always returns the first enabled transition for the letter, preferring letter
/// transitions over epsilon ones.
#[derive(Clone, Debug, Default)]
pub struct FirstEnabled;

impl Resolver for FirstEnabled {
    fn start(&self, _: &OmegaPda) -> Memo {
        Vec::new()
    }
    fn observe(&self, _: &OmegaPda, memo: &Memo, _: usize) -> Result<Memo, ResolverError> {
        Ok(memo.clone())
    }
    fn choose(&self, pda: &OmegaPda, _: &Memo, c: &Configuration, a: LetterId) -> Result<usize, ResolverError> {
        let en = crate::pda::enabled(pda, c);
        en.iter()
            .copied()
            .find(|&t| pda.transitions[t].label == Some(a))
            .or_else(|| en.iter().copied().find(|&t| pda.transitions[t].label.is_none()))
            .ok_or_else(|| ResolverError::Undefined(format!("no transition for letter {a}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_lasso, parse_word};
    use crate::zoo;

    struct Disabled;
    impl Resolver for Disabled {
        fn start(&self, _: &OmegaPda) -> Memo {
            Vec::new()
        }
        fn observe(&self, _: &OmegaPda, m: &Memo, _: usize) -> Result<Memo, ResolverError> {
            Ok(m.clone())
        }
        fn choose(&self, pda: &OmegaPda, _: &Memo, _: &Configuration, _: LetterId) -> Result<usize, ResolverError> {
            Ok(pda.transitions.len() - 1)
        }
    }

    #[test]
    fn ext_with_fig6() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let p = &f.pda;
        let g = ext(p, &m, &GuidedRun::new(p, &m), p.letter_id("a").unwrap(), None).unwrap();
        assert_eq!(g.transitions, vec![0]);
        assert_eq!(g.config, Configuration::new(1, vec![0, p.sym_id("A").unwrap()]));
        let e = ext(p, &Disabled, &GuidedRun::new(p, &Disabled), 0, None).unwrap_err();
        assert!(matches!(e, ResolverError::ResolverStuck { .. }));
    }

    #[test]
    fn run_on_prefix_fig6() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let p = &f.pda;
        let sym = |s: &str| p.sym_id(s).unwrap();
        let g = run_on_prefix(p, &m, &parse_word(&p.letters, "acd").unwrap(), None).unwrap();
        assert_eq!(g.config, Configuration::new(p.state_id("q2").unwrap(), vec![0, sym("A")]));
        let g = run_on_prefix(p, &m, &parse_word(&p.letters, "bcd").unwrap(), None).unwrap();
        assert_eq!(g.config, Configuration::new(p.state_id("q3").unwrap(), vec![0, sym("B"), sym("N")]));
        let g = run_on_prefix(p, &m, &[], None).unwrap();
        assert!(g.transitions.is_empty());
        assert_eq!(g.letters, 0);
    }

    #[test]
    fn lasso_acceptance_fig6() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let p = &f.pda;
        let w = parse_lasso(&p.letters, "acd;#").unwrap();
        assert_eq!(moore_lasso_acceptance(p, &m, &w, 1000).unwrap().acceptance, Acceptance::Accepted);
        let w = parse_lasso(&p.letters, "acdd;#").unwrap();
        let a = moore_lasso_acceptance(p, &m, &w, 1000).unwrap().acceptance;
        assert!(matches!(a, Acceptance::Rejected | Acceptance::Stuck(_)));
    }

    #[test]
    fn empty_suite_gives_empty_report() {
        let f = zoo::example23();
        assert!(verify_resolver(&f.pda, &FirstEnabled, &[], 100).is_empty());
    }
}
