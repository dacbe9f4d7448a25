//! Fixture automata with closed-form language definitions.
//!
//! Each fixture carries a classifier that decides membership of a lasso by counting or
//! by an energy/value recurrence, independently of the analysis engine, plus a seeded
//! sampler producing classified lassos.

use crate::games::GaleStewartSpec;
use crate::pda::{LassoWord, OmegaPda, PdaBuilder, VisiblyPartition};
use crate::resolvers::{LssResolver, MooreResolver, Resolver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Figure1,
    Example23,
    Lss,
    TwoPump,
    Parity(u32),
    Repbdd,
    Palindrome,
    L1,
    L2,
    AllOdd,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub kind: Kind,
    pub pda: OmegaPda,
    pub moore: Option<MooreResolver>,
    pub partition: Option<VisiblyPartition>,
}

pub const NAMES: &[&str] = &["figure1", "example23", "lss", "twopump", "parity3", "repbdd", "palindrome", "l1", "l2", "allodd"];

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| by_name(n).unwrap()).collect()
}

pub fn by_name(name: &str) -> Option<Fixture> {
    Some(match name {
        "figure1" => figure1(),
        "example23" => example23(),
        "lss" => lss(),
        "twopump" => two_pump(),
        "repbdd" => repbdd(),
        "palindrome" => palindrome(),
        "l1" => l1(),
        "l2" => l2(),
        "allodd" => all_odd(),
        n if n.starts_with("parity") => parity_language(n["parity".len()..].parse().ok().filter(|&k| k >= 1)?),
        _ => return None,
    })
}

fn fixture(name: &str, kind: Kind, pda: OmegaPda) -> Fixture {
    Fixture { name: name.to_string(), kind, pda, moore: None, partition: None }
}

/// Stackless automaton for `{a,b}^ω` that must guess whether there are infinitely many `a`.
/// Colors follow the entered vertex: black 3, white 2, gray 1.
pub fn figure1() -> Fixture {
    let mut b = PdaBuilder::new();
    for s in ["i", "q1", "black", "q2", "white"] {
        b.state(s);
    }
    b.initial("i");
    b.letter("a");
    b.letter("b");
    let color = |s: &str| match s {
        "black" => 3,
        "q1" | "white" => 2,
        _ => 1,
    };
    let edges = [
        ("i", "a", "q1"),
        ("i", "b", "q1"),
        ("i", "a", "q2"),
        ("i", "b", "q2"),
        ("q1", "a", "black"),
        ("q1", "b", "q1"),
        ("black", "a", "black"),
        ("black", "b", "q1"),
        ("q2", "a", "white"),
        ("q2", "b", "q2"),
        ("white", "a", "white"),
        ("white", "b", "q2"),
    ];
    for (s, a, t) in edges {
        b.trans(s, "_", a, t, &["_"], color(t));
    }
    fixture("figure1", Kind::Figure1, b.build())
}

/// `a c^n d^n #^ω ∪ b c^n d^{2n} #^ω` with its first-letter Moore resolver.
pub fn example23() -> Fixture {
    let mut b = PdaBuilder::new();
    for q in 0..6 {
        b.state(&format!("q{q}"));
    }
    b.initial("q0");
    for a in ["a", "b", "c", "d", "#"] {
        b.letter(a);
    }
    for x in ["A", "B", "N"] {
        b.stack_sym(x);
    }
    let t_a = b.trans("q0", "_", "a", "q1", &["_", "A"], 1);
    let t_b = b.trans("q0", "_", "b", "q1", &["_", "B"], 1);
    let t_c: Vec<usize> = ["A", "B", "N"].iter().map(|x| b.trans("q1", x, "c", "q1", &[x, "N"], 1)).collect();
    let t_12 = b.trans("q1", "N", "d", "q2", &[], 1);
    let t_13 = b.trans("q1", "N", "d", "q3", &["N"], 1);
    let t_22 = b.trans("q2", "N", "d", "q2", &[], 1);
    let t_35 = b.trans("q3", "N", "d", "q5", &[], 1);
    let t_53 = b.trans("q5", "N", "d", "q3", &["N"], 1);
    let t_54 = b.trans("q5", "B", "#", "q4", &[], 1);
    let t_24 = b.trans("q2", "A", "#", "q4", &[], 1);
    let t_44 = b.trans("q4", "_", "#", "q4", &["_"], 2);
    let pda = b.build();

    let names = ["i", "ua", "ub", "ad", "bd1", "bd2", "acc", "sink"];
    let sink = 7;
    let mut delta = vec![vec![sink; pda.transitions.len()]; names.len()];
    let mut lambda = BTreeMap::new();
    let l = |s: &str| pda.letter_id(s).unwrap();
    let x = |s: &str| pda.sym_id(s).unwrap();
    delta[0][t_a] = 1;
    delta[0][t_b] = 2;
    lambda.insert((0, l("a"), 0), t_a);
    lambda.insert((0, l("b"), 0), t_b);
    for (m, down, next) in [(1, t_12, 3), (2, t_13, 4)] {
        for (k, sym) in ["A", "B", "N"].iter().enumerate() {
            delta[m][t_c[k]] = m;
            lambda.insert((m, l("c"), x(sym)), t_c[k]);
        }
        delta[m][down] = next;
        lambda.insert((m, l("d"), x("N")), down);
    }
    delta[3][t_22] = 3;
    delta[3][t_24] = 6;
    lambda.insert((3, l("d"), x("N")), t_22);
    lambda.insert((3, l("#"), x("A")), t_24);
    delta[4][t_35] = 5;
    lambda.insert((4, l("d"), x("N")), t_35);
    delta[5][t_53] = 4;
    delta[5][t_54] = 6;
    lambda.insert((5, l("d"), x("N")), t_53);
    lambda.insert((5, l("#"), x("B")), t_54);
    delta[6][t_44] = 6;
    lambda.insert((6, l("#"), 0), t_44);
    let moore = MooreResolver { states: names.iter().map(|s| s.to_string()).collect(), initial: 0, delta, lambda };
    let mut f = fixture("example23", Kind::Example23, pda);
    f.moore = Some(moore);
    f
}

const ENERGY: [&str; 3] = ["0", "+", "-"];

/// Two-component safe-suffix automaton: state `i` tracks component `i`; switching and
/// `-` on an empty stack have color 1, everything else color 0.
pub fn lss() -> Fixture {
    let mut b = PdaBuilder::new();
    b.state("1");
    b.state("2");
    b.initial("1");
    b.stack_sym("N");
    let mut letters = Vec::new();
    for x in ENERGY {
        for y in ENERGY {
            let name = format!("({x},{y})");
            b.letter(&name);
            letters.push((name, [x, y]));
        }
    }
    for (i, (me, other)) in [("1", "2"), ("2", "1")].into_iter().enumerate() {
        for (name, comps) in &letters {
            for top in ["_", "N"] {
                b.trans(me, top, name, other, &[top], 1);
            }
            match comps[i] {
                "0" => {
                    for top in ["_", "N"] {
                        b.trans(me, top, name, me, &[top], 0);
                    }
                }
                "+" => {
                    for top in ["_", "N"] {
                        b.trans(me, top, name, me, &[top, "N"], 0);
                    }
                }
                _ => {
                    b.trans(me, "N", name, me, &[], 0);
                    b.trans(me, "_", name, me, &["_"], 1);
                }
            }
        }
    }
    fixture("lss", Kind::Lss, b.build())
}

/// First `k` segments of the word whose both components have energy unbounded below:
/// `x1 (x2)^3 (x1)^7 (x2)^15 ...`, as letter names.
pub fn w_ss_bar_prefix(k: usize) -> Vec<String> {
    let x1 = ["(+,0)", "(+,-)"];
    let x2 = ["(0,+)", "(-,+)"];
    let mut out = Vec::new();
    for j in 1..=k {
        let x = if j % 2 == 1 { x1 } else { x2 };
        for _ in 0..((1usize << j) - 1) {
            out.extend(x.iter().map(|s| s.to_string()));
        }
    }
    out
}

/// Energy of component `comp` (0 or 1) over letter names `(x,y)`.
pub fn energy(word: &[String], comp: usize) -> i64 {
    word.iter()
        .map(|l| match l.chars().nth(1 + 2 * comp) {
            Some('+') => 1,
            Some('-') => -1,
            _ => 0,
        })
        .sum()
}

/// `(a#)^n (b#)^n #^ω ∪ (a#)^n (b#)^{2n} #^ω`, guessing the branch by an ε-move.
pub fn two_pump() -> Fixture {
    let mut b = PdaBuilder::new();
    for s in ["s", "A1h", "A1", "B1h", "B1", "A2h", "A2", "B2h'", "B2'", "B2h", "B2", "F"] {
        b.state(s);
    }
    b.initial("s");
    for a in ["a", "b", "#"] {
        b.letter(a);
    }
    b.stack_sym("N");
    b.trans("s", "_", "eps", "A1h", &["_"], 1);
    b.trans("s", "_", "eps", "A2h", &["_"], 1);
    for top in ["_", "N"] {
        b.trans("A1h", top, "a", "A1", &[top, "N"], 1);
        b.trans("A1", top, "#", "A1h", &[top], 1);
        b.trans("A2h", top, "a", "A2", &[top, "N"], 1);
        b.trans("A2", top, "#", "A2h", &[top], 1);
        b.trans("B1", top, "#", "B1h", &[top], 1);
        b.trans("B2'", top, "#", "B2h'", &[top], 1);
        b.trans("B2", top, "#", "B2h", &[top], 1);
    }
    b.trans("A1h", "N", "b", "B1", &[], 1);
    b.trans("B1h", "N", "b", "B1", &[], 1);
    b.trans("B1h", "_", "#", "F", &["_"], 1);
    b.trans("A2h", "N", "b", "B2'", &["N"], 1);
    b.trans("B2h", "N", "b", "B2'", &["N"], 1);
    b.trans("B2h'", "N", "b", "B2", &[], 1);
    b.trans("B2h", "_", "#", "F", &["_"], 1);
    b.trans("F", "_", "#", "F", &["_"], 2);
    fixture("twopump", Kind::TwoPump, b.build())
}

/// One state; reading letter `p` has color `p`.
pub fn parity_language(n: u32) -> Fixture {
    let mut b = PdaBuilder::new();
    b.state("s");
    b.initial("s");
    for p in 1..=n {
        b.trans("s", "_", &p.to_string(), "s", &["_"], p);
    }
    fixture(&format!("parity{n}"), Kind::Parity(n), b.build())
}

/// Visibly pushdown automaton over `{+,-}` accepting words whose value (stack height with
/// pops on the empty stack ignored) returns to some level infinitely often.
///
/// `g` follows the value; it may push a marker `M` when climbing to the guessed level and
/// move to `k`, or move to `kb` at the bottom. `N'` sits right above the guessed level, so
/// popping it means the level was revisited.
pub fn repbdd() -> Fixture {
    let mut b = PdaBuilder::new();
    for s in ["g", "k", "kb"] {
        b.state(s);
    }
    b.initial("g");
    b.letter("+");
    b.letter("-");
    for x in ["N", "N'", "M"] {
        b.stack_sym(x);
    }
    for top in ["_", "N"] {
        b.trans("g", top, "+", "g", &[top, "N"], 1);
        b.trans("g", top, "+", "k", &[top, "M"], 1);
    }
    b.trans("g", "N", "-", "g", &[], 1);
    b.trans("g", "_", "-", "g", &["_"], 1);
    b.trans("g", "_", "+", "kb", &["_", "N'"], 1);
    b.trans("g", "_", "-", "kb", &["_"], 2);
    b.trans("k", "M", "+", "k", &["M", "N'"], 1);
    for top in ["N", "N'"] {
        b.trans("k", top, "+", "k", &[top, "N"], 1);
        b.trans("kb", top, "+", "kb", &[top, "N"], 1);
    }
    b.trans("k", "N", "-", "k", &[], 1);
    b.trans("k", "N'", "-", "k", &[], 2);
    b.trans("kb", "_", "+", "kb", &["_", "N'"], 1);
    b.trans("kb", "N", "-", "kb", &[], 1);
    b.trans("kb", "N'", "-", "kb", &[], 2);
    b.trans("kb", "_", "-", "kb", &["_"], 2);
    let pda = b.build();
    let partition = VisiblyPartition { calls: vec![0], returns: vec![1], internals: vec![] };
    let mut f = fixture("repbdd", Kind::Repbdd, pda);
    f.partition = Some(partition);
    f
}

/// `v #^ω` where `v` with `#` erased is an even-length palindrome over `{0,1}`.
pub fn palindrome() -> Fixture {
    let mut b = PdaBuilder::new();
    b.state("p");
    b.state("q");
    b.initial("p");
    for a in ["0", "1", "#"] {
        b.letter(a);
    }
    b.stack_sym("0");
    b.stack_sym("1");
    for top in ["_", "0", "1"] {
        b.trans("p", top, "0", "p", &[top, "0"], 1);
        b.trans("p", top, "1", "p", &[top, "1"], 1);
        b.trans("p", top, "#", "p", &[top], 1);
        b.trans("p", top, "eps", "q", &[top], 1);
    }
    b.trans("q", "0", "0", "q", &[], 1);
    b.trans("q", "1", "1", "q", &[], 1);
    b.trans("q", "0", "#", "q", &["0"], 1);
    b.trans("q", "1", "#", "q", &["1"], 1);
    b.trans("q", "_", "#", "q", &["_"], 2);
    fixture("palindrome", Kind::Palindrome, b.build())
}

/// Deterministic automaton for `a^n b^n a^* b^ω`, `n ≥ 1`.
pub fn l1() -> Fixture {
    let mut b = PdaBuilder::new();
    for s in ["p0", "pa", "pb", "pc", "pd"] {
        b.state(s);
    }
    b.initial("p0");
    b.letter("a");
    b.letter("b");
    b.stack_sym("N");
    b.trans("p0", "_", "a", "pa", &["_", "N"], 1);
    b.trans("pa", "N", "a", "pa", &["N", "N"], 1);
    b.trans("pa", "N", "b", "pb", &[], 1);
    b.trans("pb", "N", "b", "pb", &[], 1);
    b.trans("pb", "_", "a", "pc", &["_"], 1);
    b.trans("pb", "_", "b", "pd", &["_"], 2);
    b.trans("pc", "_", "a", "pc", &["_"], 1);
    b.trans("pc", "_", "b", "pd", &["_"], 2);
    b.trans("pd", "_", "b", "pd", &["_"], 2);
    fixture("l1", Kind::L1, b.build())
}

/// Deterministic automaton for `a^* b^n a^n b^ω`, `n ≥ 1`.
pub fn l2() -> Fixture {
    let mut b = PdaBuilder::new();
    for s in ["r0", "rb", "ra", "rd"] {
        b.state(s);
    }
    b.initial("r0");
    b.letter("a");
    b.letter("b");
    b.stack_sym("N");
    b.trans("r0", "_", "a", "r0", &["_"], 1);
    b.trans("r0", "_", "b", "rb", &["_", "N"], 1);
    b.trans("rb", "N", "b", "rb", &["N", "N"], 1);
    b.trans("rb", "N", "a", "ra", &[], 1);
    b.trans("ra", "N", "a", "ra", &[], 1);
    b.trans("ra", "_", "b", "rd", &["_"], 2);
    b.trans("rd", "_", "b", "rd", &["_"], 2);
    fixture("l2", Kind::L2, b.build())
}

/// Every transition has an odd color, so nothing is accepted.
pub fn all_odd() -> Fixture {
    let mut b = PdaBuilder::new();
    b.state("s");
    b.state("t");
    b.initial("s");
    b.stack_sym("X");
    b.trans("s", "_", "a", "s", &["_", "X"], 1);
    b.trans("s", "X", "a", "s", &["X", "X"], 3);
    b.trans("s", "X", "b", "t", &[], 1);
    b.trans("t", "X", "b", "t", &[], 5);
    b.trans("t", "_", "b", "s", &["_"], 1);
    b.trans("t", "X", "eps", "s", &["X"], 1);
    fixture("allodd", Kind::AllOdd, b.build())
}

pub const SPEC_NAMES: &[&str] = &["echo", "counter"];

pub fn spec_by_name(name: &str) -> Option<GaleStewartSpec> {
    match name {
        "echo" => Some(echo_spec()),
        "counter" => Some(counter_spec()),
        _ => None,
    }
}

/// Builder with one condition letter `b.a` per pair, declared row by row.
fn pair_builder(sigma1: &[&str], sigma2: &[&str]) -> (PdaBuilder, Vec<(usize, usize)>) {
    let mut b = PdaBuilder::new();
    let mut pairs = Vec::new();
    for (i, x) in sigma1.iter().enumerate() {
        for (j, y) in sigma2.iter().enumerate() {
            b.letter(&format!("{x}.{y}"));
            pairs.push((i, j));
        }
    }
    (b, pairs)
}

fn spec_of(sigma1: &[&str], sigma2: &[&str], b: PdaBuilder, pairs: Vec<(usize, usize)>) -> GaleStewartSpec {
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    GaleStewartSpec::new(own(sigma1), own(sigma2), b.build(), pairs, true).expect("zoo specs are well formed")
}

/// Player 2 must repeat each letter; every block passes through an ε-transition.
pub fn echo_spec() -> GaleStewartSpec {
    let (s1, s2) = (["a", "b"], ["a", "b"]);
    let (mut b, pairs) = pair_builder(&s1, &s2);
    b.initial("s");
    for x in s1 {
        let t = format!("t{x}");
        b.trans("s", "_", &format!("{x}.{x}"), &t, &["_"], 1);
        b.trans(&t, "_", "eps", "s", &["_"], 2);
    }
    spec_of(&s1, &s2, b, pairs)
}

/// Player 2 must answer `y` exactly when the `a`s and `b`s read so far balance out. The
/// difference is kept on the stack; a wrong answer falls into an odd sink.
pub fn counter_spec() -> GaleStewartSpec {
    let (s1, s2) = (["a", "b"], ["x", "y"]);
    let (mut b, pairs) = pair_builder(&s1, &s2);
    b.initial("s");
    for l in ["a.x", "a.y", "b.x", "b.y"] {
        for top in ["_", "P1", "P", "M1", "M"] {
            b.trans("bad", top, l, "bad", &[top], 1);
        }
    }
    let rules: [(&str, &str, &str, &[&str]); 20] = [
        ("_", "a.x", "s", &["_", "P1"]),
        ("_", "b.x", "s", &["_", "M1"]),
        ("_", "a.y", "bad", &["_"]),
        ("_", "b.y", "bad", &["_"]),
        ("P1", "a.x", "s", &["P1", "P"]),
        ("P1", "b.y", "s", &[]),
        ("P1", "a.y", "bad", &["P1"]),
        ("P1", "b.x", "bad", &["P1"]),
        ("P", "a.x", "s", &["P", "P"]),
        ("P", "b.x", "s", &[]),
        ("P", "a.y", "bad", &["P"]),
        ("P", "b.y", "bad", &["P"]),
        ("M1", "b.x", "s", &["M1", "M"]),
        ("M1", "a.y", "s", &[]),
        ("M1", "b.y", "bad", &["M1"]),
        ("M1", "a.x", "bad", &["M1"]),
        ("M", "b.x", "s", &["M", "M"]),
        ("M", "a.x", "s", &[]),
        ("M", "a.y", "bad", &["M"]),
        ("M", "b.y", "bad", &["M"]),
    ];
    for (top, l, dst, push) in rules {
        b.trans("s", top, l, dst, push, if dst == "s" { 2 } else { 1 });
    }
    spec_of(&s1, &s2, b, pairs)
}

fn names(f: &Fixture, w: &[usize]) -> Vec<String> {
    w.iter().map(|&a| f.pda.letters[a].clone()).collect()
}

fn joined(f: &Fixture, w: &[usize]) -> String {
    names(f, w).concat()
}

/// Run-length blocks of `s` followed by `b^ω`, as (letter, length) with the last block infinite.
fn blocks_then_b(s: &str) -> Vec<(char, usize)> {
    let mut out: Vec<(char, usize)> = Vec::new();
    for c in s.chars().chain(std::iter::once('b')) {
        match out.last_mut() {
            Some((d, n)) if *d == c => *n += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

fn two_pump_prefix_ok(x: &str) -> bool {
    let pairs: Vec<char> = {
        let cs: Vec<char> = x.chars().collect();
        if cs.len() % 2 != 0 || cs.chunks(2).any(|p| p[1] != '#' || p[0] == '#') {
            return false;
        }
        cs.chunks(2).map(|p| p[0]).collect()
    };
    let n = pairs.iter().take_while(|&&c| c == 'a').count();
    let m = pairs.len() - n;
    n >= 1 && pairs[n..].iter().all(|&c| c == 'b') && (m == n || m == 2 * n)
}

impl Fixture {
    /// Membership by the closed-form definition of the fixture's language.
    pub fn classify(&self, w: &LassoWord) -> bool {
        let u = joined(self, &w.prefix);
        let v = joined(self, &w.cycle);
        let all = |s: &str, c: char| s.chars().all(|x| x == c);
        match self.kind {
            Kind::Figure1 => true,
            Kind::AllOdd => false,
            Kind::Example23 => {
                if !all(&v, '#') {
                    return false;
                }
                let x = u.trim_end_matches('#');
                let Some(first) = x.chars().next() else { return false };
                let rest = &x[1..];
                let n = rest.chars().take_while(|&c| c == 'c').count();
                let tail = &rest[n..];
                let want = match first {
                    'a' => n,
                    'b' => 2 * n,
                    _ => return false,
                };
                n >= 1 && tail.len() == want && all(tail, 'd')
            }
            Kind::Lss => {
                let cyc = names(self, &w.cycle);
                energy(&cyc, 0) >= 0 || energy(&cyc, 1) >= 0
            }
            Kind::TwoPump => {
                if !all(&v, '#') {
                    return false;
                }
                let x = format!("{}#", u.trim_end_matches('#'));
                two_pump_prefix_ok(&x)
            }
            Kind::Parity(_) => {
                let m = w.cycle.iter().map(|&a| self.pda.letters[a].parse::<u32>().unwrap()).max().unwrap();
                m % 2 == 0
            }
            Kind::Repbdd => {
                let plus = v.chars().filter(|&c| c == '+').count();
                plus * 2 <= v.len()
            }
            Kind::Palindrome => {
                if !all(&v, '#') {
                    return false;
                }
                let h: Vec<char> = u.chars().filter(|&c| c != '#').collect();
                h.len() % 2 == 0 && h.iter().eq(h.iter().rev())
            }
            Kind::L1 => {
                if !all(&v, 'b') {
                    return false;
                }
                let bl = blocks_then_b(&u);
                match bl.as_slice() {
                    [('a', _), ('b', _)] => true,
                    [('a', n), ('b', m), ('a', _), ('b', _)] => n == m,
                    _ => false,
                }
            }
            Kind::L2 => {
                if !all(&v, 'b') {
                    return false;
                }
                let bl = blocks_then_b(&u);
                match bl.as_slice() {
                    [('b', n), ('a', m), ('b', _)] => n == m,
                    [('a', _), ('b', n), ('a', m), ('b', _)] => n == m,
                    _ => false,
                }
            }
        }
    }

    /// Resolver known to be correct for the fixture, when one exists.
    pub fn resolver(&self) -> Option<Box<dyn Resolver>> {
        match self.kind {
            Kind::Example23 => self.moore.clone().map(|m| Box::new(m) as Box<dyn Resolver>),
            Kind::Lss => Some(Box::new(LssResolver::for_automaton(&self.pda))),
            _ if crate::pda::is_deterministic(&self.pda).deterministic => Some(Box::new(crate::resolvers::FirstEnabled)),
            _ => None,
        }
    }

    fn word(&self, s: &[&str]) -> Vec<usize> {
        s.iter().map(|n| self.pda.letter_id(n).expect("fixture letter")).collect()
    }

    fn from_str(&self, u: &str, v: &str) -> LassoWord {
        let u = crate::text::parse_word(&self.pda.letters, u).expect("fixture word");
        let v = crate::text::parse_word(&self.pda.letters, v).expect("fixture word");
        LassoWord::new(u, v).expect("nonempty loop")
    }

    /// `n` classified lassos drawn deterministically from `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<(LassoWord, bool)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<LassoWord> = Vec::new();
        let mut tries = 0;
        while out.len() < n && tries < n * 50 {
            tries += 1;
            let w = self.draw(&mut rng);
            if !out.contains(&w) {
                out.push(w);
            }
        }
        out.into_iter().map(|w| {
            let c = self.classify(&w);
            (w, c)
        }).collect()
    }

    fn random_word(&self, rng: &mut ChaCha8Rng, min: usize, max: usize) -> Vec<usize> {
        let len = rng.gen_range(min..=max);
        (0..len).map(|_| rng.gen_range(0..self.pda.letters.len())).collect()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> LassoWord {
        let tail = |rng: &mut ChaCha8Rng, good: &str, bad: &[&str]| -> String {
            if rng.gen_bool(0.75) {
                good.repeat(rng.gen_range(1..=2))
            } else {
                bad.choose(rng).unwrap().to_string()
            }
        };
        match self.kind {
            Kind::Figure1 | Kind::Lss | Kind::Parity(_) | Kind::Repbdd | Kind::AllOdd => {
                let u = self.random_word(rng, 0, 4);
                let v = self.random_word(rng, 1, 4);
                LassoWord::new(u, v).unwrap()
            }
            Kind::Example23 => {
                let n = rng.gen_range(1..=3);
                let first = if rng.gen_bool(0.5) { "a" } else { "b" };
                let mut d = if first == "a" { n } else { 2 * n };
                if rng.gen_bool(0.3) {
                    d = (d as i64 + [-1i64, 1].choose(rng).unwrap()).max(0) as usize;
                }
                let mut u = format!("{first}{}{}", "c".repeat(n), "d".repeat(d));
                if rng.gen_bool(0.1) {
                    u = u.replacen('c', "", 1);
                }
                u.push_str(&"#".repeat(rng.gen_range(0..=1)));
                let v = tail(rng, "#", &["#d", "c", "d#"]);
                self.from_str(&u, &v)
            }
            Kind::TwoPump => {
                let n: usize = rng.gen_range(1..=3);
                let m: usize = *[n, 2 * n, n + 1, n - 1, 3 * n].choose(rng).unwrap();
                let mut u = format!("{}{}", "a#".repeat(n), "b#".repeat(m));
                match rng.gen_range(0..3) {
                    0 => {
                        u.pop();
                    }
                    1 => u.push('#'),
                    _ => {}
                }
                let v = tail(rng, "#", &["#a", "b#"]);
                self.from_str(&u, &v)
            }
            Kind::Palindrome => {
                let k = rng.gen_range(0..=3);
                let x: String = (0..k).map(|_| if rng.gen_bool(0.5) { '0' } else { '1' }).collect();
                let mut h: String = format!("{x}{}", x.chars().rev().collect::<String>());
                match rng.gen_range(0..4) {
                    0 => h.push('1'),
                    1 if !h.is_empty() => {
                        let i = rng.gen_range(0..h.len());
                        let flip = if &h[i..=i] == "0" { "1" } else { "0" };
                        h.replace_range(i..=i, flip);
                    }
                    _ => {}
                }
                let mut u = String::new();
                for c in h.chars() {
                    if rng.gen_bool(0.25) {
                        u.push('#');
                    }
                    u.push(c);
                }
                let v = tail(rng, "#", &["#0", "1"]);
                self.from_str(&u, &v)
            }
            Kind::L1 | Kind::L2 => {
                let n = rng.gen_range(1..=3);
                let m = if rng.gen_bool(0.7) { n } else { n + 1 };
                let k = rng.gen_range(0..=2);
                let u = if self.kind == Kind::L1 {
                    format!("{}{}{}", "a".repeat(n), "b".repeat(m), "a".repeat(k))
                } else {
                    format!("{}{}{}", "a".repeat(k), "b".repeat(n), "a".repeat(m))
                };
                let v = tail(rng, "b", &["ab", "a"]);
                self.from_str(&u, &v)
            }
        }
    }

    /// Hand-picked lassos with their expected classification.
    pub fn landmarks(&self) -> Vec<(LassoWord, bool)> {
        let pick: &[(&str, &str, bool)] = match self.kind {
            Kind::Figure1 => &[("", "a", true), ("", "b", true), ("ab", "ba", true)],
            Kind::Example23 => &[("acd", "#", true), ("bccdddd", "#", true), ("bcd", "#", false), ("acdd", "#", false), ("bcdd", "#", true)],
            Kind::Lss => &[("", "(+,0)(+,-)", true), ("", "(-,-)", false), ("(-,0)", "(+,+)", true)],
            Kind::TwoPump => &[("a#b#", "#", true), ("a#b#b#", "#", true), ("a#b#b#b#", "#", false)],
            Kind::Parity(_) => &[("", "2", true), ("", "12", true), ("", "3", false)],
            Kind::Repbdd => &[("", "+-", true), ("", "+", false), ("-", "-", true)],
            Kind::Palindrome => &[("0110", "#", true), ("01#10", "#", true), ("010", "#", false)],
            Kind::L1 => &[("ab", "b", true), ("aab", "b", true), ("aabba", "b", true), ("aabbba", "b", false)],
            Kind::L2 => &[("ba", "b", true), ("abbaa", "b", true), ("bba", "b", false)],
            Kind::AllOdd => &[("", "a", false), ("a", "b", false)],
        };
        pick.iter()
            .filter(|(u, v, _)| {
                let ok = |s: &str| crate::text::parse_word(&self.pda.letters, s).is_ok();
                ok(u) && ok(v)
            })
            .map(|(u, v, c)| (self.from_str(u, v), *c))
            .collect()
    }

    /// Letter ids for a list of names.
    pub fn letters(&self, s: &[&str]) -> Vec<usize> {
        self.word(s)
    }
}
