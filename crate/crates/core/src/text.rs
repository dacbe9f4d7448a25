//! Line-oriented text formats for automata and lasso words.
//!
//! One declaration per line. A line whose first token starts with `#` is a comment;
//! tokens past a declaration's arity that start with `#` are trailing comments.

use crate::pda::{LassoWord, OmegaPda, PdaBuilder, Sym, Transition, BOTTOM};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// A non-comment line split into tokens, with its 1-based line number.
#[derive(Clone, Debug)]
pub struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0]
    }

    /// Arguments after the keyword, requiring exactly `n` of them (plus optional trailing comment).
    pub fn args(&self, n: usize) -> Result<&[&'a str], ParseError> {
        let rest = &self.tokens[1..];
        if rest.len() < n || (rest.len() > n && !rest[n].starts_with('#')) {
            return Err(ParseError::new(
                self.number,
                format!("`{}` expects {} argument(s), got {}", self.keyword(), n, rest.len()),
            ));
        }
        Ok(&rest[..n])
    }

    /// All arguments up to a trailing comment.
    pub fn list(&self) -> &[&'a str] {
        let rest = &self.tokens[1..];
        let end = rest.iter().position(|t| t.starts_with('#')).unwrap_or(rest.len());
        &rest[..end]
    }

    pub fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, message)
    }
}

pub fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let tokens: Vec<&str> = l.split_whitespace().collect();
            if tokens.is_empty() || tokens[0].starts_with('#') {
                None
            } else {
                Some(Line { number: i + 1, tokens })
            }
        })
        .collect()
}

pub fn parse_u32(line: &Line, tok: &str) -> Result<u32, ParseError> {
    tok.parse().map_err(|_| line.err(format!("expected a nonnegative integer, got `{tok}`")))
}

pub fn parse_usize(line: &Line, tok: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| line.err(format!("expected a nonnegative integer, got `{tok}`")))
}

/// Greedy longest-match tokenization of `s` against `names`.
pub fn tokenize_greedy<'n>(s: &str, names: impl Iterator<Item = &'n str> + Clone) -> Option<Vec<&'n str>> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let best = names.clone().filter(|n| !n.is_empty() && rest.starts_with(n)).max_by_key(|n| n.len())?;
        out.push(best);
        rest = &rest[best.len()..];
    }
    Some(out)
}

/// Parses a push token: `eps`, a single symbol, a `.`-separated list, or concatenated names.
fn parse_push(pda: &OmegaPda, line: &Line, tok: &str) -> Result<Vec<Sym>, ParseError> {
    if tok == "eps" {
        return Ok(Vec::new());
    }
    if let Some(s) = pda.sym_id(tok) {
        return Ok(vec![s]);
    }
    let unknown = |n: &str| line.err(format!("unknown stack symbol `{n}`"));
    if tok.contains('.') {
        return tok.split('.').map(|n| pda.sym_id(n).ok_or_else(|| unknown(n))).collect();
    }
    let names = std::iter::once("_").chain(pda.stack_syms.iter().map(|s| s.as_str()));
    let parts = tokenize_greedy(tok, names).ok_or_else(|| unknown(tok))?;
    Ok(parts.into_iter().map(|n| pda.sym_id(n).unwrap()).collect())
}

fn is_pda_keyword(k: &str) -> bool {
    matches!(k, "state" | "initial" | "letter" | "stacksym" | "trans")
}

/// Parses the automaton part of `src`, returning it together with lines it did not consume.
pub fn parse_pda_with_rest(src: &str) -> Result<(OmegaPda, Vec<Line<'_>>), ParseError> {
    let all = lines(src);
    let mut b = PdaBuilder::new();
    let mut initial = None;
    let mut rest = Vec::new();
    let mut trans_lines = Vec::new();
    for l in all {
        match l.keyword() {
            "state" => {
                let a = l.args(1)?;
                if b.has_state(a[0]) {
                    return Err(l.err(format!("duplicate state `{}`", a[0])));
                }
                b.state(a[0]);
            }
            "initial" => {
                let a = l.args(1)?;
                if initial.is_some() {
                    return Err(l.err("initial state declared twice"));
                }
                initial = Some((l.number, a[0].to_string()));
            }
            "letter" => {
                let a = l.args(1)?;
                if a[0] == "eps" {
                    return Err(l.err("`eps` is reserved"));
                }
                b.letter(a[0]);
            }
            "stacksym" => {
                let a = l.args(1)?;
                if a[0] == "_" || a[0] == "eps" || a[0].contains('.') {
                    return Err(l.err(format!("`{}` is not a valid stack symbol name", a[0])));
                }
                b.stack_sym(a[0]);
            }
            "trans" => trans_lines.push(l),
            _ => rest.push(l),
        }
    }
    let (iline, iname) = initial.ok_or_else(|| ParseError::new(0, "missing `initial` declaration"))?;
    if !b.has_state(&iname) {
        return Err(ParseError::new(iline, format!("initial state `{iname}` not declared")));
    }
    b.initial(&iname);
    let mut pda = b.build();
    for l in trans_lines {
        let a = l.args(6)?;
        let source = pda.state_id(a[0]).ok_or_else(|| l.err(format!("unknown state `{}`", a[0])))?;
        let top = pda.sym_id(a[1]).ok_or_else(|| l.err(format!("unknown stack symbol `{}`", a[1])))?;
        let label = if a[2] == "eps" {
            None
        } else {
            Some(pda.letter_id(a[2]).ok_or_else(|| l.err(format!("unknown letter `{}`", a[2])))?)
        };
        let target = pda.state_id(a[3]).ok_or_else(|| l.err(format!("unknown state `{}`", a[3])))?;
        let push = parse_push(&pda, &l, a[4])?;
        let color = parse_u32(&l, a[5])?;
        pda.transitions.push(Transition { source, top, label, target, push, color });
    }
    Ok((pda, rest))
}

pub fn parse_pda(src: &str) -> Result<OmegaPda, ParseError> {
    let (pda, rest) = parse_pda_with_rest(src)?;
    if let Some(l) = rest.first() {
        return Err(l.err(format!("unknown declaration `{}`", l.keyword())));
    }
    Ok(pda)
}

pub fn keyword_is_pda(k: &str) -> bool {
    is_pda_keyword(k)
}

/// Renders a push string so that `parse_push` reads it back identically.
pub fn format_push(pda: &OmegaPda, push: &[Sym]) -> String {
    if push.is_empty() {
        return "eps".into();
    }
    let names: Vec<&str> = push.iter().map(|&s| pda.sym_name(s)).collect();
    if names.len() == 1 {
        return names[0].to_string();
    }
    let concat = names.concat();
    let multi = pda.stack_syms.iter().any(|s| s.chars().count() != 1);
    let clashes = pda.sym_id(&concat).is_some() || concat == "eps";
    if multi || clashes {
        names.join(".")
    } else {
        concat
    }
}

pub fn print_pda(pda: &OmegaPda) -> String {
    let mut out = String::new();
    for s in &pda.states {
        writeln!(out, "state {s}").unwrap();
    }
    writeln!(out, "initial {}", pda.states[pda.initial]).unwrap();
    for a in &pda.letters {
        writeln!(out, "letter {a}").unwrap();
    }
    for x in &pda.stack_syms {
        writeln!(out, "stacksym {x}").unwrap();
    }
    for t in &pda.transitions {
        writeln!(out, "{}", format_transition(pda, t)).unwrap();
    }
    out
}

pub fn format_transition(pda: &OmegaPda, t: &Transition) -> String {
    format!(
        "trans {} {} {} {} {} {}",
        pda.states[t.source],
        pda.sym_name(t.top),
        pda.label_name(t.label),
        pda.states[t.target],
        format_push(pda, &t.push),
        t.color
    )
}

/// Splits a word into letter names: whitespace-separated if it contains whitespace,
/// otherwise greedy longest match against the alphabet.
pub fn parse_word(letters: &[String], s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let lookup = |n: &str| letters.iter().position(|l| l == n).ok_or_else(|| format!("unknown letter `{n}`"));
    if s.contains(char::is_whitespace) {
        return s.split_whitespace().map(lookup).collect();
    }
    let parts = tokenize_greedy(s, letters.iter().map(|l| l.as_str()))
        .ok_or_else(|| format!("cannot split `{s}` into letters"))?;
    parts.into_iter().map(lookup).collect()
}

/// Parses `u;v` into a lasso over `letters`.
pub fn parse_lasso(letters: &[String], s: &str) -> Result<LassoWord, String> {
    let (u, v) = s.split_once(';').ok_or_else(|| format!("lasso `{s}` must have the form u;v"))?;
    let prefix = parse_word(letters, u)?;
    let cycle = parse_word(letters, v)?;
    LassoWord::new(prefix, cycle).map_err(|e| e.to_string())
}

pub fn format_word(letters: &[String], w: &[usize]) -> String {
    let names: Vec<&str> = w.iter().map(|&a| letters[a].as_str()).collect();
    let single = letters.iter().all(|l| l.chars().count() == 1);
    if single {
        names.concat()
    } else {
        names.join(" ")
    }
}

pub fn format_lasso(letters: &[String], w: &LassoWord) -> String {
    format!("{};{}", format_word(letters, &w.prefix), format_word(letters, &w.cycle))
}

/// Stack contents rendered bottom-first, `_` for the bottom.
pub fn format_stack(pda: &OmegaPda, stack: &[Sym]) -> String {
    stack
        .iter()
        .map(|&s| if s == BOTTOM { "_".to_string() } else { pda.sym_name(s).to_string() })
        .collect::<Vec<_>>()
        .join("")
}
