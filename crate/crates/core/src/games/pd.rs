//! The deterministic automaton over `Σ1 × (Σ2 ∪ Δ)` checking block-encoded runs of a condition.
//!
//! A block is a pair `(a1, a2)` followed by `(b, τ)` letters naming ε-transitions of the
//! condition and finally a transition reading `(a1, a2)`; the `b` components are ignored.
//! Control is `(q, await)` or `(q, pending pair, largest ε-color so far)`. Pair reads have
//! color 0, ε-simulation reads color 1, and a completing read the block's largest color plus
//! 2, so a suffix of ε-reads alone is rejected while block parities are kept.

use super::GaleStewartSpec;
use crate::pda::{LassoWord, LetterId, OmegaPda, Transition};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct PdAutomaton {
    pub pda: OmegaPda,
    pub n1: usize,
    /// `|Σ2|`
    pub n2: usize,
    /// `|Σ2| + |Δ|`: letter `b * n2p + c` is `(b, c)`.
    pub n2p: usize,
}

/// What a `Σ2'` letter stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Letter(usize),
    Transition(usize),
}

impl PdAutomaton {
    pub fn letter(&self, b: usize, c: usize) -> LetterId {
        b * self.n2p + c
    }

    pub fn split(&self, l: LetterId) -> (usize, usize) {
        (l / self.n2p, l % self.n2p)
    }

    pub fn kind(&self, c: usize) -> Move {
        if c < self.n2 {
            Move::Letter(c)
        } else {
            Move::Transition(c - self.n2)
        }
    }
}

pub fn sigma2_prime_name(spec: &GaleStewartSpec, c: usize) -> String {
    if c < spec.sigma2.len() {
        spec.sigma2[c].clone()
    } else {
        format!("t{}", c - spec.sigma2.len())
    }
}

pub fn build_pd(spec: &GaleStewartSpec) -> PdAutomaton {
    let p = &spec.condition;
    let (n1, n2) = (spec.sigma1.len(), spec.sigma2.len());
    let n2p = n2 + p.transitions.len();
    let nl = p.letters.len();
    let eps_colors: Vec<u32> = p.transitions.iter().filter(|t| t.label.is_none()).map(|t| t.color).collect::<BTreeSet<_>>().into_iter().collect();
    let na = eps_colors.len() + 1;
    let await_id = |q: usize| q;
    let pend_id = |q: usize, l: usize, acc: usize| p.states.len() + (q * nl + l) * na + acc;
    let acc_index = |c: u32| 1 + eps_colors.iter().position(|&x| x == c).unwrap();
    let acc_color = |a: usize| if a == 0 { 0 } else { eps_colors[a - 1] };

    let mut states: Vec<String> = p.states.clone();
    for q in &p.states {
        for l in &p.letters {
            states.push(format!("{q}[{l}]"));
            for c in &eps_colors {
                states.push(format!("{q}[{l}:{c}]"));
            }
        }
    }
    let mut letters = Vec::with_capacity(n1 * n2p);
    for b in &spec.sigma1 {
        for c in 0..n2p {
            letters.push(format!("{b}/{}", sigma2_prime_name(spec, c)));
        }
    }
    let mut transitions = Vec::new();
    for q in 0..p.states.len() {
        for x in 0..p.num_syms() {
            for (l, &(b, a2)) in spec.pairs.iter().enumerate() {
                transitions.push(Transition {
                    source: await_id(q),
                    top: x,
                    label: Some(b * n2p + a2),
                    target: pend_id(q, l, 0),
                    push: vec![x],
                    color: 0,
                });
            }
        }
    }
    for (ti, t) in p.transitions.iter().enumerate() {
        for l in 0..nl {
            for a in 0..na {
                let acc = acc_color(a);
                let (target, color) = match t.label {
                    None => (pend_id(t.target, l, acc_index(acc.max(t.color))), 1),
                    Some(m) if m == l => (await_id(t.target), acc.max(t.color) + 2),
                    Some(_) => continue,
                };
                for b in 0..n1 {
                    transitions.push(Transition {
                        source: pend_id(t.source, l, a),
                        top: t.top,
                        label: Some(b * n2p + n2 + ti),
                        target,
                        push: t.push.clone(),
                        color,
                    });
                }
            }
        }
    }
    PdAutomaton {
        pda: OmegaPda { states, letters, stack_syms: p.stack_syms.clone(), initial: await_id(p.initial), transitions },
        n1,
        n2,
        n2p,
    }
}

/// Block encoding of a run segment made of whole blocks; `filler` is the ignored `Σ1` letter.
pub fn encode_blocks(spec: &GaleStewartSpec, pd: &PdAutomaton, run: &[usize], filler: usize) -> Result<Vec<LetterId>, String> {
    let mut out = Vec::new();
    let mut block_start = true;
    for (k, &ti) in run.iter().enumerate() {
        if block_start {
            let l = run[k..]
                .iter()
                .find_map(|&t| spec.condition.transitions[t].label)
                .ok_or("run segment ends inside a block")?;
            let (b, a2) = spec.pairs[l];
            out.push(pd.letter(b, a2));
        }
        out.push(pd.letter(filler, pd.n2 + ti));
        block_start = spec.condition.transitions[ti].label.is_some();
    }
    if !block_start {
        return Err("run segment ends inside a block".into());
    }
    Ok(out)
}

/// Moves the cycle start to just after a letter transition so both parts are whole blocks.
pub fn align_to_blocks(pda: &OmegaPda, stem: &[usize], cycle: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let j = cycle.iter().rposition(|&t| pda.transitions[t].label.is_some())?;
    let mut s = stem.to_vec();
    s.extend_from_slice(&cycle[..=j]);
    let mut c = cycle[j + 1..].to_vec();
    c.extend_from_slice(&cycle[..=j]);
    Some((s, c))
}

/// Parses whole blocks: the condition letters read and the transitions named.
pub fn parse_blocks(spec: &GaleStewartSpec, pd: &PdAutomaton, x: &[LetterId]) -> Result<(Vec<LetterId>, Vec<usize>), String> {
    let mut word = Vec::new();
    let mut run = Vec::new();
    let mut pending: Option<LetterId> = None;
    for (k, &l) in x.iter().enumerate() {
        let (b, c) = pd.split(l);
        match (pending, pd.kind(c)) {
            (None, Move::Letter(a2)) => pending = Some(spec.letter_of(b, a2)),
            (Some(want), Move::Transition(t)) => {
                run.push(t);
                match spec.condition.transitions[t].label {
                    None => {}
                    Some(m) if m == want => {
                        word.push(m);
                        pending = None;
                    }
                    Some(_) => return Err(format!("position {k}: transition reads the wrong letter")),
                }
            }
            (None, _) => return Err(format!("position {k}: block must open with a pair")),
            (Some(_), _) => return Err(format!("position {k}: pair inside an open block")),
        }
    }
    if pending.is_some() {
        return Err("open block at the end".into());
    }
    Ok((word, run))
}

/// A decoded block lasso: the condition word and the run `stem cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedRun {
    pub word: LassoWord,
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// Decodes a lasso over the letters of P_d, rotating the loop to a block boundary if needed.
pub fn decode_blocks(spec: &GaleStewartSpec, pd: &PdAutomaton, x: &LassoWord) -> Result<DecodedRun, String> {
    let mut last = String::from("empty loop");
    for k in 0..x.cycle.len() {
        let mut u = x.prefix.clone();
        u.extend_from_slice(&x.cycle[..k]);
        let mut v = x.cycle[k..].to_vec();
        v.extend_from_slice(&x.cycle[..k]);
        let (pw, pr) = match parse_blocks(spec, pd, &u) {
            Ok(r) => r,
            Err(e) => {
                last = e;
                continue;
            }
        };
        match parse_blocks(spec, pd, &v) {
            Ok((cw, cr)) if !cw.is_empty() => {
                let word = LassoWord::new(pw, cw).map_err(|e| e.to_string())?;
                return Ok(DecodedRun { word, stem: pr, cycle: cr });
            }
            Ok(_) => last = "loop has no complete block".into(),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::universality_spec;
    use crate::pda::is_deterministic;
    use crate::text::parse_lasso;
    use crate::zoo;

    #[test]
    fn deterministic_and_sized() {
        for f in zoo::all() {
            let spec = universality_spec(&f.pda, false);
            let pd = build_pd(&spec);
            assert!(is_deterministic(&pd.pda).deterministic, "{}", f.name);
            let eps = f.pda.transitions.iter().filter(|t| t.label.is_none()).map(|t| t.color).collect::<BTreeSet<_>>().len();
            assert_eq!(pd.pda.states.len(), f.pda.states.len() * (1 + f.pda.letters.len() * (1 + eps)));
        }
    }

    #[test]
    fn figure1_block_word_with_finitely_many_a() {
        let f = zoo::figure1();
        let spec = universality_spec(&f.pda, false);
        let pd = build_pd(&spec);
        let t = |s: &str, a: &str, d: &str| {
            let (s, a, d) = (f.pda.state_id(s).unwrap(), f.pda.letter_id(a).unwrap(), f.pda.state_id(d).unwrap());
            f.pda.transitions.iter().position(|t| t.source == s && t.label == Some(a) && t.target == d).unwrap()
        };
        let stem = encode_blocks(&spec, &pd, &[t("i", "a", "q1")], 0).unwrap();
        let cycle = encode_blocks(&spec, &pd, &[t("q1", "b", "q1")], 0).unwrap();
        let x = LassoWord::new(stem, cycle).unwrap();
        assert!(crate::analysis::lasso_membership(&pd.pda, &x));
        let d = decode_blocks(&spec, &pd, &x).unwrap();
        assert_eq!(d.word, parse_lasso(&f.pda.letters, "a;b").unwrap());
        let bad = encode_blocks(&spec, &pd, &[t("q1", "a", "black"), t("black", "b", "q1")], 0).unwrap();
        let x = LassoWord::new(x.prefix.clone(), bad).unwrap();
        assert!(!crate::analysis::lasso_membership(&pd.pda, &x));
    }

    #[test]
    fn epsilon_only_suffix_is_rejected() {
        let mut b = crate::pda::PdaBuilder::new();
        b.state("s");
        b.initial("s");
        b.trans("s", "_", "eps", "s", &["_"], 2);
        b.trans("s", "_", "x", "s", &["_"], 2);
        let p = b.build();
        let spec = universality_spec(&p, true);
        let pd = build_pd(&spec);
        let open = pd.letter(0, 0);
        let eps = pd.letter(0, pd.n2);
        let read = pd.letter(0, pd.n2 + 1);
        let starve = LassoWord::new(vec![open], vec![eps]).unwrap();
        assert!(!crate::analysis::lasso_membership(&pd.pda, &starve));
        let fine = LassoWord::new(vec![], vec![open, eps, read]).unwrap();
        assert!(crate::analysis::lasso_membership(&pd.pda, &fine));
    }
}
