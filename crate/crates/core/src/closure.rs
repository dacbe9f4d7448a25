//! Products of pushdown automata with deterministic parity automata.
//!
//! The product runs both machines side by side and keeps a latest appearance record over
//! the pairs `(pda color, dpa color)` seen so far. Each product transition moves its pair to
//! the front of the record; if the pair was at position `h`, the `h + 1` front pairs are
//! exactly those seen since its previous occurrence, and the transition gets color
//! `2(h + 1)` when that set satisfies the mode's condition, `2h + 1` otherwise. The largest
//! hit seen infinitely often is the size of the limit set, so the product's parity verdict
//! is the mode's verdict on the limit set.
//!
//! ε-transitions leave the DPA where it is and contribute its smallest color.

use crate::pda::{Configuration, LassoWord, OmegaPda, StateId, Transition};
use crate::resolvers::{Memo, Resolver, ResolverError};
use crate::text::{lines, parse_u32, ParseError};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    pub states: Vec<String>,
    pub letters: Vec<String>,
    pub initial: usize,
    /// `delta[q][a] = (target, color)`
    pub delta: Vec<Vec<(usize, u32)>>,
}

impl Dpa {
    /// One state looping on every letter with `color`.
    pub fn constant(letters: &[String], color: u32) -> Dpa {
        Dpa { states: vec!["d".into()], letters: letters.to_vec(), initial: 0, delta: vec![vec![(0, color); letters.len()]] }
    }

    pub fn min_color(&self) -> u32 {
        self.delta.iter().flatten().map(|&(_, c)| c).min().unwrap_or(0)
    }

    /// Runs the automaton on `w` until the state at a loop boundary repeats.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        let mut q = self.initial;
        for &a in &w.prefix {
            q = self.delta[q][a].0;
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut maxes = Vec::new();
        loop {
            if let Some(&i) = seen.get(&q) {
                return maxes[i..].iter().max().is_some_and(|c| c % 2 == 0);
            }
            seen.insert(q, maxes.len());
            let mut m = 0;
            for &a in &w.cycle {
                let (t, c) = self.delta[q][a];
                m = m.max(c);
                q = t;
            }
            maxes.push(m);
        }
    }
}

/// `state`, `initial`, `letter` and `trans <from> <letter> <to> <color>` lines; the
/// transition function must be total.
pub fn parse_dpa(src: &str) -> Result<Dpa, ParseError> {
    let mut states: Vec<String> = Vec::new();
    let mut letters: Vec<String> = Vec::new();
    let mut initial = None;
    let mut trans = Vec::new();
    for l in lines(src) {
        match l.keyword() {
            "state" => {
                let a = l.args(1)?[0];
                if states.iter().any(|s| s == a) {
                    return Err(l.err(format!("duplicate state `{a}`")));
                }
                states.push(a.into());
            }
            "letter" => {
                let a = l.args(1)?[0];
                if !letters.iter().any(|s| s == a) {
                    letters.push(a.into());
                }
            }
            "initial" => initial = Some(l.clone()),
            "trans" => trans.push(l),
            k => return Err(l.err(format!("unknown declaration `{k}`"))),
        }
    }
    let find = |l: &crate::text::Line, v: &[String], x: &str, what: &str| v.iter().position(|s| s == x).ok_or_else(|| l.err(format!("unknown {what} `{x}`")));
    let il = initial.ok_or_else(|| ParseError::new(0, "missing `initial` declaration"))?;
    let initial = find(&il, &states, il.args(1)?[0], "state")?;
    let mut delta = vec![vec![None; letters.len()]; states.len()];
    for l in trans {
        let a = l.args(4)?;
        let (p, x, q) = (find(&l, &states, a[0], "state")?, find(&l, &letters, a[1], "letter")?, find(&l, &states, a[2], "state")?);
        if delta[p][x].replace((q, parse_u32(&l, a[3])?)).is_some() {
            return Err(l.err(format!("second transition from `{}` on `{}`", a[0], a[1])));
        }
    }
    let mut total = Vec::with_capacity(states.len());
    for (p, row) in delta.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (x, e) in row.into_iter().enumerate() {
            out.push(e.ok_or_else(|| ParseError::new(0, format!("no transition from `{}` on `{}`", states[p], letters[x])))?);
        }
        total.push(out);
    }
    Ok(Dpa { states, letters, initial, delta: total })
}

pub fn print_dpa(d: &Dpa) -> String {
    let mut out = String::new();
    for s in &d.states {
        writeln!(out, "state {s}").unwrap();
    }
    writeln!(out, "initial {}", d.states[d.initial]).unwrap();
    for a in &d.letters {
        writeln!(out, "letter {a}").unwrap();
    }
    for (p, row) in d.delta.iter().enumerate() {
        for (a, &(q, c)) in row.iter().enumerate() {
            writeln!(out, "trans {} {} {} {c}", d.states[p], d.letters[a], d.states[q]).unwrap();
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("alphabets differ: automaton has {pda:?}, parity automaton has {dpa:?}")]
    AlphabetMismatch { pda: Vec<String>, dpa: Vec<String> },
    #[error("product exceeds {0} states")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Intersect,
    Union,
    Minus,
}

impl Mode {
    /// Verdict on a limit set of `(pda color, dpa color)` pairs.
    pub fn accepts(self, set: impl IntoIterator<Item = (u32, u32)>) -> bool {
        let (mut p, mut d) = (None, None);
        for (a, b) in set {
            p = p.max(Some(a));
            d = d.max(Some(b));
        }
        let (pe, de) = (p.is_some_and(|c| c % 2 == 0), d.is_some_and(|c| c % 2 == 0));
        match self {
            Mode::Intersect => pe && de,
            Mode::Union => pe || de,
            Mode::Minus => pe && !de,
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "intersect" => Ok(Mode::Intersect),
            "union" => Ok(Mode::Union),
            "minus" => Ok(Mode::Minus),
            o => Err(format!("unknown mode `{o}` (expected intersect, union or minus)")),
        }
    }
}

/// Latest appearance record: pair indices, most recent first, and where the last one was.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LarState {
    pub perm: Vec<usize>,
    pub hit: usize,
}

impl LarState {
    pub fn new(k: usize) -> Self {
        LarState { perm: (0..k).collect(), hit: 0 }
    }

    pub fn update(&self, p: usize) -> LarState {
        let hit = self.perm.iter().position(|&x| x == p).expect("pair is recorded");
        let mut perm = Vec::with_capacity(self.perm.len());
        perm.push(p);
        perm.extend(self.perm.iter().copied().filter(|&x| x != p));
        LarState { perm, hit }
    }

    /// Pairs seen since the previous occurrence of the front pair.
    pub fn recent(&self) -> &[usize] {
        &self.perm[..=self.hit]
    }

    pub fn color(&self, pairs: &[(u32, u32)], mode: Mode) -> u32 {
        let h = self.hit as u32;
        if mode.accepts(self.recent().iter().map(|&i| pairs[i])) {
            2 * (h + 1)
        } else {
            2 * h + 1
        }
    }
}

/// Parity verdict of the LAR on the pair sequence `stem · cycle^ω`.
pub fn lar_verdict(pairs: &[(u32, u32)], mode: Mode, stem: &[usize], cycle: &[usize]) -> bool {
    let mut l = LarState::new(pairs.len());
    for &p in stem.iter().chain(cycle).chain(cycle) {
        l = l.update(p);
    }
    let mut m = 0;
    for &p in cycle {
        l = l.update(p);
        m = m.max(l.color(pairs, mode));
    }
    m % 2 == 0
}

pub const PRODUCT_STATE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Product {
    pub pda: OmegaPda,
    /// `(base state, dpa state, record id)` of each product state.
    pub parts: Vec<(StateId, usize, usize)>,
    /// Base transition behind each product transition.
    pub origin: Vec<usize>,
    /// The input automaton, completed with a rejecting sink for unions.
    pub base: OmegaPda,
    /// The input automaton; base transitions past its own enter or loop in the sink.
    pub original: OmegaPda,
    pub pairs: Vec<(u32, u32)>,
}

/// Adds a state looping with color 1 and, for each mode and letter with no transition
/// reading it, a move there. Every word then has an infinite run.
pub fn complete_with_sink(pda: &OmegaPda) -> OmegaPda {
    let mut reads = vec![false; pda.states.len() * pda.num_syms() * pda.letters.len()];
    let at = |q: usize, x: usize, a: usize| (q * pda.num_syms() + x) * pda.letters.len() + a;
    for t in &pda.transitions {
        if let Some(a) = t.label {
            reads[at(t.source, t.top, a)] = true;
        }
    }
    if reads.iter().all(|&r| r) {
        return pda.clone();
    }
    let mut out = pda.clone();
    let mut name = String::from("sink");
    while out.states.contains(&name) {
        name.push('\'');
    }
    let sink = out.states.len();
    out.states.push(name);
    for q in 0..pda.states.len() {
        for x in 0..pda.num_syms() {
            for a in 0..pda.letters.len() {
                if !reads[at(q, x, a)] {
                    out.transitions.push(Transition { source: q, top: x, label: Some(a), target: sink, push: vec![x], color: 1 });
                }
            }
        }
    }
    for x in 0..pda.num_syms() {
        for a in 0..pda.letters.len() {
            out.transitions.push(Transition { source: sink, top: x, label: Some(a), target: sink, push: vec![x], color: 1 });
        }
    }
    out
}

pub fn product(pda: &OmegaPda, dpa: &Dpa, mode: Mode) -> Result<Product, ClosureError> {
    let mismatch = || ClosureError::AlphabetMismatch { pda: pda.letters.clone(), dpa: dpa.letters.clone() };
    if pda.letters.len() != dpa.letters.len() {
        return Err(mismatch());
    }
    let dletter: Vec<usize> = pda.letters.iter().map(|a| dpa.letters.iter().position(|b| b == a)).collect::<Option<_>>().ok_or_else(mismatch)?;
    let base = if mode == Mode::Union { complete_with_sink(pda) } else { pda.clone() };
    let sentinel = dpa.min_color();
    let mut pair_set = BTreeSet::new();
    for t in &base.transitions {
        match t.label {
            None => {
                pair_set.insert((t.color, sentinel));
            }
            Some(a) => {
                for row in &dpa.delta {
                    pair_set.insert((t.color, row[dletter[a]].1));
                }
            }
        }
    }
    let pairs: Vec<(u32, u32)> = pair_set.into_iter().collect();
    let pair_ix: HashMap<(u32, u32), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut by_source = vec![Vec::new(); base.states.len()];
    for (i, t) in base.transitions.iter().enumerate() {
        by_source[t.source].push(i);
    }

    let mut lars: Vec<Vec<usize>> = Vec::new();
    let mut lar_ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut parts: Vec<(StateId, usize, usize)> = Vec::new();
    let mut ids: HashMap<(StateId, usize, usize), usize> = HashMap::new();
    let mut intern_lar = |perm: Vec<usize>, lars: &mut Vec<Vec<usize>>| -> usize {
        *lar_ids.entry(perm.clone()).or_insert_with(|| {
            lars.push(perm);
            lars.len() - 1
        })
    };
    let l0 = intern_lar(LarState::new(pairs.len()).perm, &mut lars);
    parts.push((base.initial, dpa.initial, l0));
    ids.insert(parts[0], 0);
    let mut transitions = Vec::new();
    let mut origin = Vec::new();
    let mut next = 0;
    while next < parts.len() {
        let (q, d, l) = parts[next];
        for &ti in &by_source[q] {
            let t = &base.transitions[ti];
            let (d2, dc) = match t.label {
                None => (d, sentinel),
                Some(a) => dpa.delta[d][dletter[a]],
            };
            let rec = LarState { perm: lars[l].clone(), hit: 0 }.update(pair_ix[&(t.color, dc)]);
            let color = rec.color(&pairs, mode);
            let l2 = intern_lar(rec.perm, &mut lars);
            let key = (t.target, d2, l2);
            let target = match ids.get(&key) {
                Some(&i) => i,
                None => {
                    if parts.len() >= PRODUCT_STATE_LIMIT {
                        return Err(ClosureError::TooLarge(PRODUCT_STATE_LIMIT));
                    }
                    parts.push(key);
                    ids.insert(key, parts.len() - 1);
                    parts.len() - 1
                }
            };
            transitions.push(Transition { source: next, top: t.top, label: t.label, target, push: t.push.clone(), color });
            origin.push(ti);
        }
        next += 1;
    }
    let states = parts.iter().map(|&(q, d, l)| format!("{}~{}~{l}", base.states[q], dpa.states[d])).collect();
    let out = OmegaPda { states, letters: base.letters.clone(), stack_syms: base.stack_syms.clone(), initial: 0, transitions };
    Ok(Product { pda: out, parts, origin, base, original: pda.clone(), pairs })
}

/// A resolver of the input automaton driving the product: the other components are
/// deterministic, so its answer extends to a unique product transition. Once the input
/// automaton is stuck, a union product continues in its sink.
pub struct LiftedResolver<'a, R> {
    product: &'a Product,
    inner: R,
    by_origin: HashMap<(StateId, usize), usize>,
}

pub fn lift_resolver<R: Resolver>(product: &Product, inner: R) -> LiftedResolver<'_, R> {
    let by_origin = product.origin.iter().enumerate().map(|(i, &o)| ((product.pda.transitions[i].source, o), i)).collect();
    LiftedResolver { product, inner, by_origin }
}

impl<R> LiftedResolver<'_, R> {
    /// Product transition into (or within) the sink reading `letter`, if any.
    fn to_sink(&self, config: &Configuration, letter: usize) -> Option<usize> {
        let p = &self.product;
        (0..p.pda.transitions.len()).find(|&i| {
            let t = &p.pda.transitions[i];
            t.source == config.state && t.top == config.top() && t.label == Some(letter) && p.origin[i] >= p.original.transitions.len()
        })
    }
}

impl<R: Resolver> Resolver for LiftedResolver<'_, R> {
    fn start(&self, _pda: &OmegaPda) -> Memo {
        self.inner.start(&self.product.original)
    }

    fn observe(&self, _pda: &OmegaPda, memo: &Memo, t: usize) -> Result<Memo, ResolverError> {
        let o = self.product.origin[t];
        if o < self.product.original.transitions.len() {
            self.inner.observe(&self.product.original, memo, o)
        } else {
            Ok(memo.clone())
        }
    }

    fn choose(&self, _pda: &OmegaPda, memo: &Memo, config: &Configuration, letter: usize) -> Result<usize, ResolverError> {
        let (q, ..) = self.product.parts[config.state];
        if q >= self.product.original.states.len() {
            return self.to_sink(config, letter).ok_or(ResolverError::Undefined("sink has no move".into()));
        }
        let projected = Configuration { state: q, stack: config.stack.clone() };
        let base = self.inner.choose(&self.product.original, memo, &projected, letter);
        match base.map(|o| self.by_origin.get(&(config.state, o)).copied()) {
            Ok(Some(t)) => Ok(t),
            Ok(None) => self.to_sink(config, letter).ok_or(ResolverError::Undefined("answer has no product transition".into())),
            Err(e) => self.to_sink(config, letter).ok_or(e),
        }
    }

    fn lasso_key(&self, memo: &Memo, w: &LassoWord) -> Option<Memo> {
        self.inner.lasso_key(memo, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lasso_membership;
    use crate::resolvers::{lasso_acceptance, run_on_prefix, Acceptance};
    use crate::text::parse_lasso;
    use crate::zoo;

    #[test]
    fn dpa_text_round_trip() {
        let src = "state p\nstate q\ninitial p\nletter a\nletter b\ntrans p a q 1\ntrans p b p 0\ntrans q a q 2\ntrans q b p 1\n";
        let d = parse_dpa(src).unwrap();
        assert_eq!(parse_dpa(&print_dpa(&d)).unwrap(), d);
        assert!(parse_dpa("state p\ninitial p\nletter a\n").is_err());
    }

    #[test]
    fn lasso_simulation() {
        let d = parse_dpa("state p\nstate q\ninitial p\nletter a\nletter b\ntrans p a q 2\ntrans p b p 1\ntrans q a q 2\ntrans q b p 1\n").unwrap();
        let l = vec!["a".to_string(), "b".to_string()];
        assert!(d.accepts_lasso(&parse_lasso(&l, "b;a").unwrap()));
        assert!(!d.accepts_lasso(&parse_lasso(&l, "a;b").unwrap()));
        assert!(d.accepts_lasso(&parse_lasso(&l, ";ab").unwrap()));
    }

    #[test]
    fn intersect_with_everything_keeps_the_word() {
        let f = zoo::example23();
        let p = product(&f.pda, &Dpa::constant(&f.pda.letters, 0), Mode::Intersect).unwrap();
        let w = parse_lasso(&f.pda.letters, "acd;#").unwrap();
        assert!(lasso_membership(&p.pda, &w));
    }

    #[test]
    fn alphabet_mismatch() {
        let f = zoo::example23();
        let d = Dpa::constant(&["a".to_string()], 0);
        assert!(matches!(product(&f.pda, &d, Mode::Union), Err(ClosureError::AlphabetMismatch { .. })));
    }

    #[test]
    fn lifted_resolver_follows_the_base_run() {
        let f = zoo::example23();
        let p = product(&f.pda, &Dpa::constant(&f.pda.letters, 0), Mode::Intersect).unwrap();
        let moore = f.moore.clone().unwrap();
        let lifted = lift_resolver(&p, &moore);
        let w = parse_lasso(&f.pda.letters, "acd;#").unwrap();
        let run = lasso_acceptance(&p.pda, &lifted, &w, 200).unwrap();
        assert_eq!(run.acceptance, Acceptance::Accepted);
        let word = w.unroll(12);
        let lifted_run = run_on_prefix(&p.pda, &lifted, &word, None).unwrap();
        let base_run = run_on_prefix(&f.pda, &moore, &word, None).unwrap();
        let projected: Vec<usize> = lifted_run.transitions.iter().map(|&t| p.origin[t]).collect();
        assert_eq!(projected, base_run.transitions);
    }

    #[test]
    fn union_with_nothing_is_the_language() {
        let f = zoo::example23();
        let p = product(&f.pda, &Dpa::constant(&f.pda.letters, 1), Mode::Union).unwrap();
        for (w, inside) in f.sample(5, 20) {
            assert_eq!(lasso_membership(&p.pda, &w), inside);
        }
    }
}
