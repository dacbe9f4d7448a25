//! Finite-memory resolvers and their determinization.

use super::{Memo, Resolver, ResolverError};
use crate::pda::{Configuration, LetterId, OmegaPda, Sym, Transition};
use crate::text::{lines, parse_usize, ParseError};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Memory states `0..states.len()`, total update `delta[m][t]`, partial output `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreResolver {
    pub states: Vec<String>,
    pub initial: usize,
    pub delta: Vec<Vec<usize>>,
    /// `(memory, letter, top) -> transition`
    pub lambda: BTreeMap<(usize, LetterId, Sym), usize>,
}

impl MooreResolver {
    pub fn output(&self, m: usize, a: LetterId, top: Sym) -> Option<usize> {
        self.lambda.get(&(m, a, top)).copied()
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

impl Resolver for MooreResolver {
    fn start(&self, _: &OmegaPda) -> Memo {
        vec![self.initial as i64]
    }

    fn observe(&self, _: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        let m = memo[0] as usize;
        let next = self.delta[m].get(t).ok_or_else(|| ResolverError::Undefined(format!("no update for transition {t}")))?;
        Ok(vec![*next as i64])
    }

    fn choose(&self, pda: &OmegaPda, memo: &Memo, c: &Configuration, a: LetterId) -> Result<usize, ResolverError> {
        let m = memo[0] as usize;
        self.output(m, a, c.top()).ok_or_else(|| {
            ResolverError::Undefined(format!(
                "no output for memory {} on letter {} with top {}",
                self.states[m],
                pda.letters[a],
                pda.sym_name(c.top())
            ))
        })
    }
}

pub fn parse_moore(pda: &OmegaPda, src: &str) -> Result<MooreResolver, ParseError> {
    let mut states: Vec<String> = Vec::new();
    let mut initial = None;
    let mut trans: Vec<(usize, String, usize, String)> = Vec::new();
    let mut outs: Vec<(usize, String, String, String, usize)> = Vec::new();
    for l in lines(src) {
        match l.keyword() {
            "mstate" => {
                let a = l.args(1)?;
                if states.iter().any(|s| s == a[0]) {
                    return Err(l.err(format!("duplicate memory state `{}`", a[0])));
                }
                states.push(a[0].to_string());
            }
            "minitial" => initial = Some((l.number, l.args(1)?[0].to_string())),
            "mtrans" => {
                let a = l.args(3)?;
                trans.push((l.number, a[0].into(), parse_usize(&l, a[1])?, a[2].into()));
            }
            "mout" => {
                let a = l.args(4)?;
                outs.push((l.number, a[0].into(), a[1].into(), a[2].into(), parse_usize(&l, a[3])?));
            }
            k => return Err(l.err(format!("unknown declaration `{k}`"))),
        }
    }
    let find = |line: usize, n: &str| states.iter().position(|s| s == n).ok_or_else(|| ParseError::new(line, format!("unknown memory state `{n}`")));
    let (il, iname) = initial.ok_or_else(|| ParseError::new(0, "missing `minitial`"))?;
    let initial = find(il, &iname)?;
    let nt = pda.transitions.len();
    let mut delta = vec![vec![usize::MAX; nt]; states.len()];
    for (line, m, t, m2) in trans {
        if t >= nt {
            return Err(ParseError::new(line, format!("transition index {t} out of range")));
        }
        delta[find(line, &m)?][t] = find(line, &m2)?;
    }
    for (m, row) in delta.iter().enumerate() {
        if let Some(t) = row.iter().position(|&x| x == usize::MAX) {
            return Err(ParseError::new(0, format!("update of memory `{}` on transition {t} missing", states[m])));
        }
    }
    let mut lambda = BTreeMap::new();
    for (line, m, a, x, t) in outs {
        let a = pda.letter_id(&a).ok_or_else(|| ParseError::new(line, format!("unknown letter `{a}`")))?;
        let x = pda.sym_id(&x).ok_or_else(|| ParseError::new(line, format!("unknown stack symbol `{x}`")))?;
        if t >= nt {
            return Err(ParseError::new(line, format!("transition index {t} out of range")));
        }
        lambda.insert((find(line, &m)?, a, x), t);
    }
    Ok(MooreResolver { states, initial, delta, lambda })
}

pub fn print_moore(pda: &OmegaPda, m: &MooreResolver) -> String {
    let mut out = String::new();
    for s in &m.states {
        writeln!(out, "mstate {s}").unwrap();
    }
    writeln!(out, "minitial {}", m.states[m.initial]).unwrap();
    for (i, row) in m.delta.iter().enumerate() {
        for (t, &j) in row.iter().enumerate() {
            writeln!(out, "mtrans {} {} {}", m.states[i], t, m.states[j]).unwrap();
        }
    }
    for (&(i, a, x), &t) in &m.lambda {
        writeln!(out, "mout {} {} {} {}", m.states[i], pda.letters[a], pda.sym_name(x), t).unwrap();
    }
    out
}

/// Deterministic automaton simulating the run the resolver induces.
///
/// States `(q, m)` read a letter `a` into `(q, m, a)`; from there the resolver's output for the
/// current top symbol is simulated by ε-moves until its `a`-transition returns to `Q × M`.
pub fn determinize_moore(pda: &OmegaPda, m: &MooreResolver) -> OmegaPda {
    let nq = pda.states.len();
    let nm = m.states.len();
    let ns = pda.letters.len();
    let pair = |q: usize, mm: usize| q * nm + mm;
    let triple = |q: usize, mm: usize, a: usize| nq * nm + (q * nm + mm) * ns + a;
    let mut states = Vec::with_capacity(nq * nm * (ns + 1));
    for q in 0..nq {
        for mm in 0..nm {
            states.push(format!("{}|{}", pda.states[q], m.states[mm]));
        }
    }
    for q in 0..nq {
        for mm in 0..nm {
            for a in 0..ns {
                states.push(format!("{}|{}|{}", pda.states[q], m.states[mm], pda.letters[a]));
            }
        }
    }
    let min_color = pda.transitions.iter().map(|t| t.color).min().unwrap_or(0);
    let mut transitions = Vec::new();
    for q in 0..nq {
        for mm in 0..nm {
            for x in 0..pda.num_syms() {
                for a in 0..ns {
                    transitions.push(Transition {
                        source: pair(q, mm),
                        top: x,
                        label: Some(a),
                        target: triple(q, mm, a),
                        push: vec![x],
                        color: min_color,
                    });
                }
            }
        }
    }
    for q in 0..nq {
        for mm in 0..nm {
            for a in 0..ns {
                for x in 0..pda.num_syms() {
                    let Some(ti) = m.output(mm, a, x) else { continue };
                    let t = &pda.transitions[ti];
                    if t.source != q || t.top != x {
                        continue;
                    }
                    let m2 = m.delta[mm][ti];
                    let target = match t.label {
                        None => triple(t.target, m2, a),
                        Some(b) if b == a => pair(t.target, m2),
                        Some(_) => continue,
                    };
                    transitions.push(Transition { source: triple(q, mm, a), top: x, label: None, target, push: t.push.clone(), color: t.color });
                }
            }
        }
    }
    OmegaPda {
        states,
        letters: pda.letters.clone(),
        stack_syms: pda.stack_syms.clone(),
        initial: pair(pda.initial, m.initial),
        transitions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lasso_membership;
    use crate::pda::{is_deterministic, PdaBuilder};
    use crate::text::parse_lasso;
    use crate::zoo;

    #[test]
    fn state_count_formula() {
        let mut b = PdaBuilder::new();
        for q in 0..6 {
            b.state(&format!("q{q}"));
        }
        b.initial("q0");
        for a in ["a", "b", "c", "d"] {
            b.letter(a);
        }
        for q in 0..6 {
            b.trans(&format!("q{q}"), "_", "a", &format!("q{}", (q + 1) % 6), &["_"], 0);
        }
        let p = b.build();
        let m = MooreResolver {
            states: (0..7).map(|i| format!("m{i}")).collect(),
            initial: 0,
            delta: vec![vec![0; p.transitions.len()]; 7],
            lambda: BTreeMap::new(),
        };
        assert_eq!(determinize_moore(&p, &m).states.len(), 210);
    }

    #[test]
    fn fig6_determinization() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let d = determinize_moore(&f.pda, &m);
        assert!(is_deterministic(&d).deterministic);
        assert_eq!(d.states.len(), 6 * 8 + 6 * 8 * 5);
        let w = parse_lasso(&d.letters, "acd;#").unwrap();
        assert!(lasso_membership(&d, &w));
        let w = parse_lasso(&d.letters, "acdd;#").unwrap();
        assert!(!lasso_membership(&d, &w));
    }

    #[test]
    fn text_round_trip() {
        let f = zoo::example23();
        let m = f.moore.clone().unwrap();
        let s = print_moore(&f.pda, &m);
        assert_eq!(parse_moore(&f.pda, &s).unwrap(), m);
        let missing: String = s.lines().filter(|l| !l.starts_with("mtrans i 0 ")).map(|l| format!("{l}\n")).collect();
        assert!(parse_moore(&f.pda, &missing).is_err());
    }
}
