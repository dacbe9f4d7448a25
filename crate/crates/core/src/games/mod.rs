//! Gale-Stewart games whose winning condition is an ω-pushdown automaton over letter pairs.
//!
//! Pipeline: the condition becomes the deterministic block checker of [`pd`], whose game is a
//! pushdown parity game ([`arena`]) solved by a finite reduction ([`reduction`]). Eve's
//! strategy there is turned into a pushdown transducer over `Σ1` ([`strategy`]).

pub mod arena;
pub mod finite;
pub mod pd;
pub mod reduction;
pub mod strategy;

pub use arena::{embed_finite, gs_to_pushdown_game, ArenaNode, GsArena, PushdownParityGame};
pub use finite::{solve_finite, verify_solution, FiniteParityGame, FiniteSolution};
pub use pd::{build_pd, decode_blocks, encode_blocks, PdAutomaton};
pub use reduction::{solve_pushdown_game, PushdownSolution, DEFAULT_BUDGET};
pub use strategy::{compose_sigma_d, simulate_play, synthesize, StrategyPdt, Synthesis};

use crate::pda::{validate, LetterId, OmegaPda};
use crate::resolvers::ResolverError;
use crate::text::{lines, parse_pda_with_rest, print_pda, ParseError};
use std::fmt::Write as _;
use thiserror::Error;

/// Eve is Player 2 (she wins on even colors), Adam is Player 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("more than {0} vertices in the finite reduction")]
    ResourceExceeded(usize),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("invalid game description: {0}")]
    BadSpec(String),
    #[error("Player 2 has no winning strategy to synthesize")]
    NoStrategy,
    #[error(transparent)]
    Resolver(#[from] ResolverError),
}

#[derive(Clone, Debug)]
pub struct GaleStewartSpec {
    pub sigma1: Vec<String>,
    pub sigma2: Vec<String>,
    pub condition: OmegaPda,
    /// `(Σ1 index, Σ2 index)` of each condition letter.
    pub pairs: Vec<(usize, usize)>,
    /// Whether the condition is asserted to be good-for-games.
    pub gfg_claimed: bool,
}

impl GaleStewartSpec {
    pub fn new(sigma1: Vec<String>, sigma2: Vec<String>, condition: OmegaPda, pairs: Vec<(usize, usize)>, gfg_claimed: bool) -> Result<Self, GameError> {
        if sigma1.is_empty() || sigma2.is_empty() {
            return Err(GameError::BadSpec("both alphabets must be nonempty".into()));
        }
        if pairs.len() != condition.letters.len() {
            return Err(GameError::BadSpec("every condition letter needs a pair".into()));
        }
        let mut seen = vec![false; sigma1.len() * sigma2.len()];
        for &(b, a) in &pairs {
            if b >= sigma1.len() || a >= sigma2.len() {
                return Err(GameError::BadSpec("pair component out of range".into()));
            }
            if std::mem::replace(&mut seen[b * sigma2.len() + a], true) {
                return Err(GameError::BadSpec(format!("pair ({}, {}) listed twice", sigma1[b], sigma2[a])));
            }
        }
        if let Some(k) = seen.iter().position(|&s| !s) {
            let (b, a) = (k / sigma2.len(), k % sigma2.len());
            return Err(GameError::BadSpec(format!("pair ({}, {}) has no condition letter", sigma1[b], sigma2[a])));
        }
        if let Some(d) = validate(&condition).first() {
            return Err(GameError::BadSpec(format!("condition: {}", d.message)));
        }
        Ok(GaleStewartSpec { sigma1, sigma2, condition, pairs, gfg_claimed })
    }

    /// Condition letter of the pair `(b, a2)`.
    pub fn letter_of(&self, b: usize, a2: usize) -> LetterId {
        self.pairs.iter().position(|&p| p == (b, a2)).expect("pairs cover Σ1 × Σ2")
    }

    pub fn pair_name(&self, l: LetterId) -> String {
        let (b, a) = self.pairs[l];
        format!("({},{})", self.sigma1[b], self.sigma2[a])
    }
}

/// The game `{(w, #^ω) | w ∈ L(pda)}`: Player 2 has a single letter `#`.
pub fn universality_spec(pda: &OmegaPda, gfg_claimed: bool) -> GaleStewartSpec {
    let pairs = (0..pda.letters.len()).map(|a| (a, 0)).collect();
    GaleStewartSpec::new(pda.letters.clone(), vec!["#".into()], pda.clone(), pairs, gfg_claimed).expect("letters pair up with #")
}

/// Spec files: the condition in the automaton format plus `sigma1 ...`, `sigma2 ...`,
/// `pair <letter> <a1> <a2>` per condition letter and an optional `gfg yes|no`.
pub fn parse_spec(src: &str) -> Result<GaleStewartSpec, ParseError> {
    let (pda, rest) = parse_pda_with_rest(src)?;
    let mut sigma1 = None;
    let mut sigma2 = None;
    let mut pair_lines = Vec::new();
    let mut gfg = true;
    for l in rest {
        match l.keyword() {
            "sigma1" => sigma1 = Some(l.tokens[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "sigma2" => sigma2 = Some(l.tokens[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "pair" => pair_lines.push(l),
            "gfg" => {
                gfg = match l.args(1)?[0] {
                    "yes" => true,
                    "no" => false,
                    o => return Err(l.err(format!("expected yes or no, got `{o}`"))),
                }
            }
            k => return Err(l.err(format!("unknown declaration `{k}`"))),
        }
    }
    let sigma1: Vec<String> = sigma1.ok_or_else(|| ParseError::new(0, "missing `sigma1`"))?;
    let sigma2: Vec<String> = sigma2.ok_or_else(|| ParseError::new(0, "missing `sigma2`"))?;
    let mut pairs = vec![None; pda.letters.len()];
    for l in pair_lines {
        let a = l.args(3)?;
        let c = pda.letter_id(a[0]).ok_or_else(|| l.err(format!("unknown letter `{}`", a[0])))?;
        let b = sigma1.iter().position(|s| s == a[1]).ok_or_else(|| l.err(format!("`{}` not in sigma1", a[1])))?;
        let d = sigma2.iter().position(|s| s == a[2]).ok_or_else(|| l.err(format!("`{}` not in sigma2", a[2])))?;
        pairs[c] = Some((b, d));
    }
    let pairs = pairs
        .into_iter()
        .enumerate()
        .map(|(c, p)| p.ok_or_else(|| ParseError::new(0, format!("letter `{}` has no pair", pda.letters[c]))))
        .collect::<Result<Vec<_>, _>>()?;
    GaleStewartSpec::new(sigma1, sigma2, pda, pairs, gfg).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn print_spec(spec: &GaleStewartSpec) -> String {
    let mut out = print_pda(&spec.condition);
    writeln!(out, "sigma1 {}", spec.sigma1.join(" ")).unwrap();
    writeln!(out, "sigma2 {}", spec.sigma2.join(" ")).unwrap();
    for (c, &(b, a)) in spec.pairs.iter().enumerate() {
        writeln!(out, "pair {} {} {}", spec.condition.letters[c], spec.sigma1[b], spec.sigma2[a]).unwrap();
    }
    writeln!(out, "gfg {}", if spec.gfg_claimed { "yes" } else { "no" }).unwrap();
    out
}

/// Whether a source looks like a spec rather than a bare automaton.
pub fn is_spec_source(src: &str) -> bool {
    lines(src).iter().any(|l| l.keyword() == "sigma1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsVerdict {
    Player2Wins,
    Player1Wins,
    /// Player 1 wins the block game but the condition is not claimed good-for-games.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct GsSolution {
    pub verdict: GsVerdict,
    pub vertices: usize,
}

pub fn solve_gale_stewart(spec: &GaleStewartSpec, budget: usize) -> Result<GsSolution, GameError> {
    let pd = build_pd(spec);
    let arena = gs_to_pushdown_game(&pd.pda, pd.n1, pd.n2p)?;
    let sol = solve_pushdown_game(&arena.game, budget)?;
    let verdict = match sol.winner {
        Player::Eve => GsVerdict::Player2Wins,
        Player::Adam if spec.gfg_claimed => GsVerdict::Player1Wins,
        Player::Adam => GsVerdict::Inconclusive,
    };
    Ok(GsSolution { verdict, vertices: sol.vertices() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universality {
    Universal,
    NotUniversal,
    Inconclusive,
}

pub fn universality(pda: &OmegaPda, gfg_claimed: bool, budget: usize) -> Result<(Universality, usize), GameError> {
    let s = solve_gale_stewart(&universality_spec(pda, gfg_claimed), budget)?;
    let u = match s.verdict {
        GsVerdict::Player2Wins => Universality::Universal,
        GsVerdict::Player1Wins => Universality::NotUniversal,
        GsVerdict::Inconclusive => Universality::Inconclusive,
    };
    Ok((u, s.vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn spec_text_round_trip() {
        let spec = zoo::counter_spec();
        let again = parse_spec(&print_spec(&spec)).unwrap();
        assert_eq!(again.pairs, spec.pairs);
        assert_eq!(again.sigma2, spec.sigma2);
        assert_eq!(again.condition, spec.condition);
    }

    #[test]
    fn example23_is_not_universal() {
        let f = zoo::example23();
        let (u, _) = universality(&f.pda, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(u, Universality::NotUniversal);
    }

    #[test]
    fn empty_condition_loses() {
        let f = zoo::all_odd();
        let (u, _) = universality(&f.pda, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(u, Universality::NotUniversal);
    }

    #[test]
    fn parity_language_is_not_universal() {
        let f = zoo::parity_language(2);
        assert_eq!(universality(&f.pda, true, DEFAULT_BUDGET).unwrap().0, Universality::NotUniversal);
    }

    #[test]
    fn eve_wins_the_extra_specs() {
        for spec in [zoo::echo_spec(), zoo::counter_spec()] {
            assert_eq!(solve_gale_stewart(&spec, DEFAULT_BUDGET).unwrap().verdict, GsVerdict::Player2Wins);
        }
    }
}
