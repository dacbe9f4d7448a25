//! Resolvers implemented by deterministic pushdown transducers reading transitions.

use super::{Memo, MooreResolver, Resolver, ResolverError};
use crate::pda::{apply, Configuration, LetterId, OmegaPda, StateId, Sym, BOTTOM};
use std::collections::BTreeMap;

/// The machine reads letter `i` for subject transition `i`; `output` maps
/// `(machine state, subject letter, subject top)` to a subject transition.
#[derive(Clone, Debug)]
pub struct PdtResolver {
    pub machine: OmegaPda,
    pub output: BTreeMap<(StateId, LetterId, Sym), usize>,
    /// Bound on consecutive ε-moves of the machine.
    pub eps_cap: usize,
}

impl PdtResolver {
    pub fn new(machine: OmegaPda, output: BTreeMap<(StateId, LetterId, Sym), usize>) -> Self {
        let eps_cap = machine.states.len() * machine.num_syms() * 4 + 16;
        PdtResolver { machine, output, eps_cap }
    }

    /// Wraps a Moore resolver as a stackless transducer.
    pub fn from_moore(pda: &OmegaPda, m: &MooreResolver) -> Self {
        let mut machine = OmegaPda {
            states: m.states.clone(),
            letters: (0..pda.transitions.len()).map(|i| format!("t{i}")).collect(),
            stack_syms: Vec::new(),
            initial: m.initial,
            transitions: Vec::new(),
        };
        for (mm, row) in m.delta.iter().enumerate() {
            for (t, &m2) in row.iter().enumerate() {
                machine.transitions.push(crate::pda::Transition { source: mm, top: BOTTOM, label: Some(t), target: m2, push: vec![BOTTOM], color: 0 });
            }
        }
        Self::new(machine, m.lambda.clone())
    }

    fn decode(memo: &Memo) -> Configuration {
        Configuration::new(memo[0] as usize, memo[1..].iter().map(|&x| x as usize).collect())
    }

    fn encode(c: &Configuration) -> Memo {
        std::iter::once(c.state as i64).chain(c.stack.iter().map(|&x| x as i64)).collect()
    }

    fn close(&self, c: &mut Configuration) -> Result<(), ResolverError> {
        for _ in 0..=self.eps_cap {
            let top = c.top();
            match self.machine.transitions.iter().find(|t| t.source == c.state && t.top == top && t.label.is_none()) {
                Some(t) => apply(c, t),
                None => return Ok(()),
            }
        }
        Err(ResolverError::TransducerStuck("epsilon moves do not terminate".into()))
    }
}

impl Resolver for PdtResolver {
    fn start(&self, _: &OmegaPda) -> Memo {
        let mut c = self.machine.initial_config();
        match self.close(&mut c) {
            Ok(()) => Self::encode(&c),
            // A diverging initial closure surfaces on the first query.
            Err(_) => vec![-1],
        }
    }

    fn observe(&self, _: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        if memo.first() == Some(&-1) {
            return Err(ResolverError::TransducerStuck("no initial run".into()));
        }
        let mut c = Self::decode(memo);
        let top = c.top();
        let tr = self
            .machine
            .transitions
            .iter()
            .find(|x| x.source == c.state && x.top == top && x.label == Some(t))
            .ok_or_else(|| ResolverError::TransducerStuck(format!("no move on transition {t}")))?;
        apply(&mut c, tr);
        self.close(&mut c)?;
        Ok(Self::encode(&c))
    }

    fn choose(&self, pda: &OmegaPda, memo: &Memo, c: &Configuration, a: LetterId) -> Result<usize, ResolverError> {
        if memo.first() == Some(&-1) {
            return Err(ResolverError::TransducerStuck("no initial run".into()));
        }
        let q = memo[0] as usize;
        self.output.get(&(q, a, c.top())).copied().ok_or_else(|| {
            ResolverError::Undefined(format!("no output at {} for {} / {}", self.machine.states[q], pda.letters[a], pda.sym_name(c.top())))
        })
    }
}

/// Answer of the transducer resolver after replaying `history` on the subject automaton.
pub fn pdt_resolver_step(pda: &OmegaPda, t: &PdtResolver, history: &[usize], next: LetterId) -> Result<usize, ResolverError> {
    let run = crate::pda::replay(pda, history).map_err(|e| ResolverError::TransducerStuck(e.to_string()))?;
    let mut memo = t.start(pda);
    for &h in history {
        memo = t.observe(pda, &memo, h)?;
    }
    t.choose(pda, &memo, run.last(), next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvers::run_on_prefix;
    use crate::text::parse_word;
    use crate::zoo;

    #[test]
    fn wrapped_moore_matches_stepwise() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let t = PdtResolver::from_moore(&f.pda, &m);
        let word = parse_word(&f.pda.letters, "acd").unwrap();
        let a = run_on_prefix(&f.pda, &m, &word, None).unwrap();
        let b = run_on_prefix(&f.pda, &t, &word, None).unwrap();
        assert_eq!(a.transitions, b.transitions);
        for k in 0..a.transitions.len() {
            let next = f.pda.transitions[a.transitions[k]].label.unwrap();
            assert_eq!(pdt_resolver_step(&f.pda, &t, &a.transitions[..k], next).unwrap(), a.transitions[k]);
        }
    }

    #[test]
    fn base_case_and_missing_output() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let mut t = PdtResolver::from_moore(&f.pda, &m);
        let a = f.pda.letter_id("a").unwrap();
        assert_eq!(pdt_resolver_step(&f.pda, &t, &[], a).unwrap(), 0);
        t.output.clear();
        assert!(matches!(pdt_resolver_step(&f.pda, &t, &[], a), Err(ResolverError::Undefined(_))));
    }
}
