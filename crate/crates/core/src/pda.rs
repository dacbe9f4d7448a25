//! Automaton model: states, alphabets, colored transitions, configurations and runs.

use std::collections::HashMap;
use thiserror::Error;

pub type StateId = usize;
pub type LetterId = usize;
/// Stack symbol index. `BOTTOM` is the reserved bottom marker; declared symbols start at 1.
pub type Sym = usize;
pub const BOTTOM: Sym = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdaError {
    #[error("transition {0} is not enabled in the given configuration")]
    NotEnabled(usize),
    #[error("transition at index {0} is not enabled; not a run")]
    NotARun(usize),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("lasso loop must be nonempty")]
    EmptyLoop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: StateId,
    pub top: Sym,
    /// `None` is an epsilon transition.
    pub label: Option<LetterId>,
    pub target: StateId,
    /// Replacement for the top symbol, bottom-first.
    pub push: Vec<Sym>,
    pub color: u32,
}

impl Transition {
    pub fn is_epsilon(&self) -> bool {
        self.label.is_none()
    }

    pub fn height_delta(&self) -> isize {
        self.push.len() as isize - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPda {
    pub states: Vec<String>,
    pub letters: Vec<String>,
    /// Declared stack symbols; symbol `i + 1` is named `stack_syms[i]`.
    pub stack_syms: Vec<String>,
    pub initial: StateId,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<Sym>,
}

impl Configuration {
    pub fn new(state: StateId, stack: Vec<Sym>) -> Self {
        Configuration { state, stack }
    }

    pub fn top(&self) -> Sym {
        *self.stack.last().expect("stack always holds the bottom marker")
    }

    pub fn height(&self) -> usize {
        self.stack.len() - 1
    }

    pub fn is_well_formed(&self) -> bool {
        !self.stack.is_empty()
            && self.stack[0] == BOTTOM
            && self.stack[1..].iter().all(|&s| s != BOTTOM)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPrefix {
    pub transitions: Vec<usize>,
    pub configurations: Vec<Configuration>,
}

impl RunPrefix {
    pub fn last(&self) -> &Configuration {
        self.configurations.last().unwrap()
    }

    pub fn word(&self, pda: &OmegaPda) -> Vec<LetterId> {
        self.transitions.iter().filter_map(|&t| pda.transitions[t].label).collect()
    }
}

/// Ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<LetterId>,
    pub cycle: Vec<LetterId>,
}

impl LassoWord {
    pub fn new(prefix: Vec<LetterId>, cycle: Vec<LetterId>) -> Result<Self, PdaError> {
        if cycle.is_empty() {
            return Err(PdaError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Number of tracker positions, `|u| + |v|`.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn at_pos(&self, pos: usize) -> LetterId {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.cycle[pos - self.prefix.len()]
        }
    }

    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.span() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Tracker position after reading `k` letters.
    pub fn pos_after(&self, k: usize) -> usize {
        if k < self.prefix.len() {
            k
        } else {
            self.prefix.len() + (k - self.prefix.len()) % self.cycle.len()
        }
    }

    /// The `k`-th letter of the infinite word.
    pub fn letter(&self, k: usize) -> LetterId {
        self.at_pos(self.pos_after(k))
    }

    pub fn unroll(&self, n: usize) -> Vec<LetterId> {
        (0..n).map(|k| self.letter(k)).collect()
    }
}

impl OmegaPda {
    pub fn num_syms(&self) -> usize {
        self.stack_syms.len() + 1
    }

    pub fn sym_name(&self, s: Sym) -> &str {
        if s == BOTTOM {
            "_"
        } else {
            &self.stack_syms[s - 1]
        }
    }

    pub fn label_name(&self, l: Option<LetterId>) -> &str {
        match l {
            None => "eps",
            Some(a) => &self.letters[a],
        }
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|s| s == name)
    }

    pub fn sym_id(&self, name: &str) -> Option<Sym> {
        if name == "_" {
            return Some(BOTTOM);
        }
        self.stack_syms.iter().position(|s| s == name).map(|i| i + 1)
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration::new(self.initial, vec![BOTTOM])
    }

    pub fn colors(&self) -> Vec<u32> {
        let mut cs: Vec<u32> = self.transitions.iter().map(|t| t.color).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn max_color(&self) -> u32 {
        self.transitions.iter().map(|t| t.color).max().unwrap_or(0)
    }

    pub fn mode_index(&self) -> ModeIndex {
        ModeIndex::new(self)
    }

    /// Short human-readable rendering of a transition.
    pub fn show_transition(&self, t: &Transition) -> String {
        format!(
            "({}, {}, {}, {}, {}) color {}",
            self.states[t.source],
            self.sym_name(t.top),
            self.label_name(t.label),
            self.states[t.target],
            self.show_push(&t.push),
            t.color
        )
    }

    pub fn show_push(&self, push: &[Sym]) -> String {
        if push.is_empty() {
            "eps".to_string()
        } else {
            push.iter().map(|&s| self.sym_name(s)).collect::<Vec<_>>().join("")
        }
    }

    pub fn show_config(&self, c: &Configuration) -> String {
        let stack: Vec<&str> = c.stack.iter().map(|&s| self.sym_name(s)).collect();
        format!("({}, {})", self.states[c.state], stack.join(""))
    }
}

/// Transitions grouped by mode `(state, top)`, each group in declaration order.
#[derive(Clone, Debug)]
pub struct ModeIndex {
    nsyms: usize,
    by_mode: Vec<Vec<usize>>,
}

impl ModeIndex {
    pub fn new(pda: &OmegaPda) -> Self {
        let nsyms = pda.num_syms();
        let mut by_mode = vec![Vec::new(); pda.states.len() * nsyms];
        for (i, t) in pda.transitions.iter().enumerate() {
            if t.source < pda.states.len() && t.top < nsyms {
                by_mode[t.source * nsyms + t.top].push(i);
            }
        }
        ModeIndex { nsyms, by_mode }
    }

    pub fn at(&self, state: StateId, top: Sym) -> &[usize] {
        &self.by_mode[state * self.nsyms + top]
    }
}

/// Incremental constructor addressing everything by name. Declarations are idempotent.
#[derive(Clone, Debug)]
pub struct PdaBuilder {
    pda: OmegaPda,
    state_ix: HashMap<String, StateId>,
    letter_ix: HashMap<String, LetterId>,
    sym_ix: HashMap<String, Sym>,
    initial_set: bool,
}

impl Default for PdaBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl PdaBuilder {
    pub fn new() -> Self {
        PdaBuilder {
            pda: OmegaPda {
                states: Vec::new(),
                letters: Vec::new(),
                stack_syms: Vec::new(),
                initial: 0,
                transitions: Vec::new(),
            },
            state_ix: HashMap::new(),
            letter_ix: HashMap::new(),
            sym_ix: HashMap::new(),
            initial_set: false,
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&i) = self.state_ix.get(name) {
            return i;
        }
        let i = self.pda.states.len();
        self.pda.states.push(name.to_string());
        self.state_ix.insert(name.to_string(), i);
        i
    }

    pub fn letter(&mut self, name: &str) -> LetterId {
        if let Some(&i) = self.letter_ix.get(name) {
            return i;
        }
        let i = self.pda.letters.len();
        self.pda.letters.push(name.to_string());
        self.letter_ix.insert(name.to_string(), i);
        i
    }

    pub fn stack_sym(&mut self, name: &str) -> Sym {
        if name == "_" {
            return BOTTOM;
        }
        if let Some(&i) = self.sym_ix.get(name) {
            return i;
        }
        self.pda.stack_syms.push(name.to_string());
        let i = self.pda.stack_syms.len();
        self.sym_ix.insert(name.to_string(), i);
        i
    }

    pub fn initial(&mut self, name: &str) {
        let s = self.state(name);
        self.pda.initial = s;
        self.initial_set = true;
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.state_ix.contains_key(name)
    }

    pub fn state_count(&self) -> usize {
        self.pda.states.len()
    }

    /// Adds a transition; `label` of `"eps"` is epsilon and `push` lists symbols bottom-first.
    pub fn trans(&mut self, src: &str, top: &str, label: &str, dst: &str, push: &[&str], color: u32) -> usize {
        let source = self.state(src);
        let target = self.state(dst);
        let top = self.stack_sym(top);
        let label = if label == "eps" { None } else { Some(self.letter(label)) };
        let push = push.iter().map(|p| self.stack_sym(p)).collect();
        self.add(Transition { source, top, label, target, push, color })
    }

    pub fn add(&mut self, t: Transition) -> usize {
        self.pda.transitions.push(t);
        self.pda.transitions.len() - 1
    }

    pub fn build(mut self) -> OmegaPda {
        if !self.initial_set && self.pda.states.is_empty() {
            self.pda.states.push("init".to_string());
        }
        self.pda
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub transition: Option<usize>,
    pub field: &'static str,
    pub message: String,
}

/// Structural validation; an empty result means every invariant holds.
pub fn validate(pda: &OmegaPda) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let nstates = pda.states.len();
    let nsyms = pda.num_syms();
    if pda.initial >= nstates {
        out.push(Diagnostic { transition: None, field: "initial", message: "initial state not declared".into() });
    }
    let dup = |names: &[String], field: &'static str, out: &mut Vec<Diagnostic>| {
        let mut seen = std::collections::HashSet::new();
        for n in names {
            if n.is_empty() {
                out.push(Diagnostic { transition: None, field, message: "empty identifier".into() });
            } else if !seen.insert(n) {
                out.push(Diagnostic { transition: None, field, message: format!("duplicate identifier {n}") });
            }
        }
    };
    dup(&pda.states, "states", &mut out);
    dup(&pda.letters, "letters", &mut out);
    dup(&pda.stack_syms, "stack", &mut out);
    if pda.stack_syms.iter().any(|s| s == "_") {
        out.push(Diagnostic { transition: None, field: "stack", message: "bottom symbol is reserved".into() });
    }
    for (i, t) in pda.transitions.iter().enumerate() {
        let d = |field, message: &str| Diagnostic { transition: Some(i), field, message: message.to_string() };
        if t.source >= nstates {
            out.push(d("source", "undeclared source state"));
        }
        if t.target >= nstates {
            out.push(d("target", "undeclared target state"));
        }
        if t.top >= nsyms {
            out.push(d("top", "undeclared stack symbol"));
        }
        if let Some(a) = t.label {
            if a >= pda.letters.len() {
                out.push(d("label", "undeclared letter"));
            }
        }
        if t.push.iter().any(|&s| s >= nsyms) {
            out.push(d("push", "undeclared stack symbol"));
        }
        if t.push.len() > 2 {
            out.push(d("push", "push too long"));
            continue;
        }
        if t.top == BOTTOM {
            match t.push.as_slice() {
                [] => out.push(d("push", "bottom deleted")),
                [BOTTOM] => {}
                [BOTTOM, x] if *x != BOTTOM => {}
                [BOTTOM, _] => out.push(d("push", "bottom written twice")),
                _ => out.push(d("push", "bottom not preserved at the base")),
            }
        } else if t.push.contains(&BOTTOM) {
            out.push(d("push", "bottom written above the base"));
        }
    }
    out
}

/// Transitions enabled in `c`, in declaration order.
pub fn enabled(pda: &OmegaPda, c: &Configuration) -> Vec<usize> {
    let top = c.top();
    pda.transitions
        .iter()
        .enumerate()
        .filter(|(_, t)| t.source == c.state && t.top == top)
        .map(|(i, _)| i)
        .collect()
}

pub fn is_enabled(t: &Transition, c: &Configuration) -> bool {
    t.source == c.state && t.top == c.top()
}

pub fn step(c: &Configuration, t: &Transition) -> Result<Configuration, PdaError> {
    if !is_enabled(t, c) {
        return Err(PdaError::NotEnabled(0));
    }
    let mut stack = c.stack.clone();
    stack.pop();
    stack.extend_from_slice(&t.push);
    Ok(Configuration { state: t.target, stack })
}

/// In-place variant of `step` without the enabledness check.
pub fn apply(c: &mut Configuration, t: &Transition) {
    c.stack.pop();
    c.stack.extend_from_slice(&t.push);
    c.state = t.target;
}

pub fn replay(pda: &OmegaPda, ts: &[usize]) -> Result<RunPrefix, PdaError> {
    let mut configs = vec![pda.initial_config()];
    for (i, &ti) in ts.iter().enumerate() {
        let t = pda.transitions.get(ti).ok_or(PdaError::NotARun(i))?;
        let cur = configs.last().unwrap();
        if !is_enabled(t, cur) {
            return Err(PdaError::NotARun(i));
        }
        let next = step(cur, t).map_err(|_| PdaError::NotARun(i))?;
        configs.push(next);
    }
    Ok(RunPrefix { transitions: ts.to_vec(), configurations: configs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismReport {
    pub deterministic: bool,
    /// Pairs of transition indices that share a mode and conflict.
    pub violations: Vec<(usize, usize)>,
}

pub fn is_deterministic(pda: &OmegaPda) -> DeterminismReport {
    let mut groups: HashMap<(StateId, Sym), Vec<usize>> = HashMap::new();
    for (i, t) in pda.transitions.iter().enumerate() {
        groups.entry((t.source, t.top)).or_default().push(i);
    }
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut violations = Vec::new();
    for k in keys {
        let g = &groups[&k];
        for (x, &i) in g.iter().enumerate() {
            for &j in &g[x + 1..] {
                let (ti, tj) = (&pda.transitions[i], &pda.transitions[j]);
                if ti.label == tj.label || ti.label.is_none() || tj.label.is_none() {
                    violations.push((i, j));
                }
            }
        }
    }
    DeterminismReport { deterministic: violations.is_empty(), violations }
}

/// Letter classes of a visibly pushdown alphabet: calls push, returns pop, internals keep the stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisiblyPartition {
    pub calls: Vec<LetterId>,
    pub returns: Vec<LetterId>,
    pub internals: Vec<LetterId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LetterClass {
    Call,
    Return,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisiblyReport {
    pub visibly: bool,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn check_visibly(pda: &OmegaPda, partition: &VisiblyPartition) -> Result<VisiblyReport, PdaError> {
    let mut class = vec![None; pda.letters.len()];
    let groups = [
        (&partition.calls, LetterClass::Call),
        (&partition.returns, LetterClass::Return),
        (&partition.internals, LetterClass::Internal),
    ];
    for (letters, c) in groups {
        for &a in letters.iter() {
            if a >= class.len() {
                return Err(PdaError::BadPartition(format!("letter index {a} out of range")));
            }
            if class[a].is_some() {
                return Err(PdaError::BadPartition(format!("letter {} listed twice", pda.letters[a])));
            }
            class[a] = Some(c);
        }
    }
    if let Some(a) = class.iter().position(|c| c.is_none()) {
        return Err(PdaError::BadPartition(format!("letter {} not covered", pda.letters[a])));
    }
    let mut diagnostics = Vec::new();
    for (i, t) in pda.transitions.iter().enumerate() {
        let Some(a) = t.label else {
            diagnostics.push(Diagnostic { transition: Some(i), field: "label", message: "epsilon transition".into() });
            continue;
        };
        let ok = match class[a].unwrap() {
            LetterClass::Call => t.push.len() == 2 && t.push[0] == t.top && t.push[1] != BOTTOM,
            LetterClass::Return => {
                if t.top == BOTTOM {
                    t.push == [BOTTOM]
                } else {
                    t.push.is_empty()
                }
            }
            LetterClass::Internal => t.push == [t.top],
        };
        if !ok {
            let kind = match class[a].unwrap() {
                LetterClass::Call => "call letter must push one symbol",
                LetterClass::Return => "return letter must pop (or keep the bottom)",
                LetterClass::Internal => "internal letter must leave the stack unchanged",
            };
            diagnostics.push(Diagnostic { transition: Some(i), field: "push", message: kind.into() });
        }
    }
    Ok(VisiblyReport { visibly: diagnostics.is_empty(), diagnostics })
}

/// Maximum color of a loop and whether it is even.
pub fn lim_sup_color(colors: &[u32]) -> Option<(u32, bool)> {
    colors.iter().copied().max().map(|m| (m, m % 2 == 0))
}
