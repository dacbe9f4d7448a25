//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria contain a part that cannot hold: the stackless automaton `figure1`
//! recognizes every word but is not good-for-games, so the first player wins its
//! universality game (the game then proves nothing) and there is no strategy to synthesize.
//! Those parts are reported as failures and flagged as known; the process exits nonzero
//! only when some other check fails.

use gfg_core::analysis::{brute_force_lasso_oracle, lasso_membership, OracleVerdict};
use gfg_core::closure::{lar_verdict, product, Dpa, Mode};
use gfg_core::games::pd::{build_pd, decode_blocks, encode_blocks};
use gfg_core::games::strategy::simulate_play;
use gfg_core::games::{
    embed_finite, solve_pushdown_game, synthesize, universality, universality_spec, FiniteParityGame, GameError, Player, Universality,
    DEFAULT_BUDGET,
};
use gfg_core::pda::{check_visibly, is_deterministic, replay, LassoWord, VisiblyPartition};
use gfg_core::resolvers::{determinize_moore, lasso_acceptance, verify_resolver, Acceptance, Conformance, LssResolver};
use gfg_core::zoo::{self, Fixture};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
    /// Why a failure is expected, if it is.
    known: Option<&'static str>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail, known: None }
}

const FIGURE1_NOT_GFG: &str = "figure1 is not good-for-games, so the game is won by player 1 although the language is universal";

fn corpus() -> Vec<(Fixture, Vec<(LassoWord, bool)>)> {
    zoo::all()
        .into_iter()
        .map(|f| {
            let mut ws = f.landmarks();
            ws.extend(f.sample(2024, 20));
            (f, ws)
        })
        .collect()
}

fn c1_membership_corpus() -> Outcome {
    let t = Instant::now();
    let (mut checks, mut bad) = (0, Vec::new());
    let mut thin = Vec::new();
    for (f, ws) in corpus() {
        if ws.len() < 20 {
            thin.push(f.name.clone());
        }
        for (w, inside) in ws {
            checks += 1;
            if lasso_membership(&f.pda, &w) != inside {
                bad.push(format!("{}:{:?}", f.name, w));
            }
        }
    }
    let el = t.elapsed();
    let pass = bad.is_empty() && thin.is_empty() && checks >= 180 && el < Duration::from_secs(10);
    outcome(pass, format!("{checks} checks, {} disagreements, fixtures under 20 lassos {thin:?}, {el:.2?}", bad.len()))
}

fn c2_oracle_equivalence() -> Outcome {
    let (mut conclusive, mut unknown, mut bad) = (0, 0, Vec::new());
    for (f, ws) in corpus() {
        for (w, _) in ws {
            let engine = lasso_membership(&f.pda, &w);
            match brute_force_lasso_oracle(&f.pda, &w, 6, 80) {
                OracleVerdict::Unknown => unknown += 1,
                v => {
                    conclusive += 1;
                    if (v == OracleVerdict::Accepted) != engine {
                        bad.push(format!("{}:{:?}", f.name, w));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty() && conclusive > 0, format!("{conclusive} conclusive pairs, {unknown} unknown, {} disagreements {bad:?}", bad.len()))
}

fn c3_universality() -> Outcome {
    let fig1 = zoo::figure1();
    let ex23 = zoo::example23();
    let t = Instant::now();
    let u1 = universality(&fig1.pda, fig1.resolver().is_some(), DEFAULT_BUDGET);
    let t1 = t.elapsed();
    let t = Instant::now();
    let u2 = universality(&ex23.pda, ex23.resolver().is_some(), DEFAULT_BUDGET);
    let t2 = t.elapsed();
    let ok1 = matches!(u1, Ok((Universality::Universal, _))) && t1 < Duration::from_secs(60);
    let ok2 = matches!(u2, Ok((Universality::NotUniversal, _))) && t2 < Duration::from_secs(60);
    let detail = format!("figure1 {:?} in {t1:.2?} (want Universal); example23 {:?} in {t2:.2?} (want NotUniversal)", u1.map(|x| x.0), u2.map(|x| x.0));
    Outcome { pass: ok1 && ok2, detail, known: (!ok1 && ok2).then_some(FIGURE1_NOT_GFG) }
}

fn c4_moore_determinization() -> Outcome {
    let f = zoo::example23();
    let d = determinize_moore(&f.pda, f.moore.as_ref().expect("example23 ships its resolver"));
    let ws = f.sample(4, 50);
    let inside = ws.iter().filter(|w| w.1).count();
    let bad = ws.iter().filter(|(w, _)| lasso_membership(&d, w) != lasso_membership(&f.pda, w)).count();
    outcome(bad == 0 && ws.len() == 50 && inside > 0 && inside < 50, format!("{} lassos ({inside} inside), {bad} disagreements", ws.len()))
}

fn c5_resolver_soundness() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let lss = zoo::lss();
    let ex23 = zoo::example23();
    let runs = [
        ("lss", verify_resolver(&lss.pda, &LssResolver::for_automaton(&lss.pda), &lss.sample(5, 40), 5000)),
        ("example23", verify_resolver(&ex23.pda, ex23.moore.as_ref().unwrap(), &ex23.sample(5, 40), 5000)),
    ];
    for (name, res) in runs {
        let checked = res.iter().filter(|c| **c != Conformance::Skipped).count();
        let passed = res.iter().filter(|c| **c == Conformance::Pass).count();
        pass &= checked > 0 && checked == passed;
        parts.push(format!("{name} {passed}/{checked}"));
    }
    outcome(pass, parts.join(", "))
}

fn random_game(rng: &mut ChaCha8Rng) -> FiniteParityGame {
    let n = rng.gen_range(1..=8);
    let mut g = FiniteParityGame::default();
    for _ in 0..n {
        g.add_vertex(if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam });
    }
    for u in 0..n {
        let deg = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=3) };
        for _ in 0..deg {
            g.edges.push((u, rng.gen_range(0..n), rng.gen_range(0..4)));
        }
    }
    g
}

/// Winner of vertex 0 by trying every positional strategy of Eve.
fn exhaustive_winner(g: &FiniteParityGame) -> Player {
    let n = g.owner.len();
    let out: Vec<Vec<usize>> = (0..n).map(|v| (0..g.edges.len()).filter(|&e| g.edges[e].0 == v).collect()).collect();
    let eve: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Eve && !out[v].is_empty()).collect();
    let mut choice = vec![0usize; eve.len()];
    loop {
        // Edges left once Eve commits to her choices.
        let mut kept = Vec::new();
        for v in 0..n {
            if let Some(i) = eve.iter().position(|&x| x == v) {
                kept.push(out[v][choice[i]]);
            } else {
                kept.extend(&out[v]);
            }
        }
        if !adam_wins_against(g, &kept) {
            return Player::Eve;
        }
        let mut i = 0;
        loop {
            if i == eve.len() {
                return Player::Adam;
            }
            choice[i] += 1;
            if choice[i] < out[eve[i]].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Adam wins in the one-player graph iff he reaches a dead end of Eve or a cycle whose
/// largest color is odd.
fn adam_wins_against(g: &FiniteParityGame, kept: &[usize]) -> bool {
    let n = g.owner.len();
    let reach_with = |max: u32| {
        let mut r = vec![vec![false; n]; n];
        for &e in kept {
            let (u, v, c) = g.edges[e];
            if c <= max {
                r[u][v] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    };
    let all = reach_with(u32::MAX);
    let reachable: Vec<bool> = (0..n).map(|v| v == 0 || all[0][v]).collect();
    let has_out = |v: usize| kept.iter().any(|&e| g.edges[e].0 == v);
    if (0..n).any(|v| reachable[v] && g.owner[v] == Player::Eve && !has_out(v)) {
        return true;
    }
    kept.iter().any(|&e| {
        let (u, v, c) = g.edges[e];
        c % 2 == 1 && reachable[u] && (u == v || reach_with(c)[v][u])
    })
}

fn c6_pushdown_solver_vs_enumeration() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    for _ in 0..100 {
        let g = random_game(&mut rng);
        let got = solve_pushdown_game(&embed_finite(&g), DEFAULT_BUDGET).expect("tiny game").winner;
        if got != exhaustive_winner(&g) {
            bad += 1;
        }
    }
    let el = t.elapsed();
    outcome(bad == 0 && el < Duration::from_secs(60), format!("100 games, {bad} disagreements, {el:.2?}"))
}

fn adam_lassos(n1: usize, seed: u64) -> Vec<LassoWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|_| {
            let u = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..n1)).collect();
            let v = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..n1)).collect();
            LassoWord::new(u, v).unwrap()
        })
        .collect()
}

fn c7_synthesis() -> Outcome {
    let t = Instant::now();
    let fig1 = zoo::figure1();
    let specs = [
        ("figure1", universality_spec(&fig1.pda, fig1.resolver().is_some())),
        ("echo", zoo::echo_spec()),
        ("counter", zoo::counter_spec()),
    ];
    let mut parts = Vec::new();
    let (mut fig1_ok, mut others_ok) = (true, true);
    for (i, (name, spec)) in specs.iter().enumerate() {
        let ok = match synthesize(spec, DEFAULT_BUDGET) {
            Ok(s) => {
                let won = adam_lassos(spec.sigma1.len(), 70 + i as u64)
                    .iter()
                    .filter(|w| simulate_play(&s.t_minus_d, w, 100_000).is_ok_and(|p| lasso_membership(&spec.condition, &p.condition_word(spec))))
                    .count();
                parts.push(format!("{name} {won}/20"));
                won == 20
            }
            Err(GameError::NoStrategy) => {
                parts.push(format!("{name}: player 1 wins the game, no strategy"));
                false
            }
            Err(e) => {
                parts.push(format!("{name}: {e}"));
                false
            }
        };
        if *name == "figure1" {
            fig1_ok = ok;
        } else {
            others_ok &= ok;
        }
    }
    let el = t.elapsed();
    let in_time = el < Duration::from_secs(120);
    parts.push(format!("{el:.2?}"));
    Outcome { pass: fig1_ok && others_ok && in_time, detail: parts.join(", "), known: (!fig1_ok && others_ok && in_time).then_some(FIGURE1_NOT_GFG) }
}

fn c8_pd_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fixtures: Vec<Fixture> = ["example23", "lss", "parity3", "l1", "l2", "repbdd"].iter().map(|n| zoo::by_name(n).unwrap()).collect();
    let (mut encoded, mut enc_bad, mut accepted, mut dec_bad, mut sampled) = (0, Vec::new(), 0, Vec::new(), 0);
    for f in &fixtures {
        let Some(r) = f.resolver() else { continue };
        let spec = universality_spec(&f.pda, true);
        let pd = build_pd(&spec);
        let words: Vec<LassoWord> = f.sample(88, 80).into_iter().filter(|w| w.1).map(|w| w.0).take(10).collect();
        for w in words {
            let Ok(run) = lasso_acceptance(&f.pda, &*r, &w, 5000) else { continue };
            if run.acceptance != Acceptance::Accepted {
                continue;
            }
            encoded += 1;
            let (Ok(u), Ok(v)) = (encode_blocks(&spec, &pd, &run.prefix, 0), encode_blocks(&spec, &pd, &run.cycle, 0)) else {
                enc_bad.push(format!("{}: encoding failed", f.name));
                continue;
            };
            let x = LassoWord::new(u, v).unwrap();
            if !lasso_membership(&pd.pda, &x) {
                enc_bad.push(format!("{}:{:?}", f.name, w));
            }
            // Mutations of the encoding; the unmutated one is part of the sample.
            for k in 0..6 {
                let mut y = x.clone();
                for _ in 0..k.min(2) {
                    let part = if y.prefix.is_empty() || rng.gen_bool(0.5) { &mut y.cycle } else { &mut y.prefix };
                    let i = rng.gen_range(0..part.len());
                    part[i] = rng.gen_range(0..pd.pda.letters.len());
                }
                if k >= 3 {
                    let r = rng.gen_range(0..y.cycle.len());
                    y.cycle.rotate_left(r);
                }
                sampled += 1;
                if !lasso_membership(&pd.pda, &y) {
                    continue;
                }
                accepted += 1;
                match decode_blocks(&spec, &pd, &y) {
                    Ok(d) => {
                        let mut full = d.stem.clone();
                        for _ in 0..4 {
                            full.extend(&d.cycle);
                        }
                        let runs = replay(&f.pda, &full).is_ok();
                        let even = d.cycle.iter().map(|&t| f.pda.transitions[t].color).max().is_some_and(|c| c % 2 == 0);
                        if !(runs && even && lasso_membership(&f.pda, &d.word)) {
                            dec_bad.push(format!("{}: decoded run not accepting", f.name));
                        }
                    }
                    Err(e) => dec_bad.push(format!("{}: {e}", f.name)),
                }
            }
        }
    }
    let pass = encoded >= 30 && enc_bad.is_empty() && dec_bad.is_empty() && accepted > 0;
    outcome(
        pass,
        format!(
            "{encoded} resolver runs encoded, {} rejected; {accepted}/{sampled} sampled encodings accepted, {} bad decodings {:?}",
            enc_bad.len(),
            dec_bad.len(),
            enc_bad.iter().chain(&dec_bad).take(3).collect::<Vec<_>>()
        ),
    )
}

/// Direct simulation of a deterministic parity automaton given as `delta[state][letter]`.
fn dpa_oracle(delta: &[Vec<(usize, u32)>], w: &LassoWord) -> bool {
    let mut q = 0;
    for &a in &w.prefix {
        q = delta[q][a].0;
    }
    // After |Q| loop iterations the boundary state is periodic; one more period decides.
    for _ in 0..delta.len() {
        for &a in &w.cycle {
            q = delta[q][a].0;
        }
    }
    let start = q;
    let mut max = 0;
    loop {
        for &a in &w.cycle {
            let (t, c) = delta[q][a];
            max = max.max(c);
            q = t;
        }
        if q == start {
            return max % 2 == 0;
        }
    }
}

fn c9_closure_products() -> Outcome {
    // (fixture, dpa built from a letter predicate: color 2 on matching letters, else 1)
    let cases: [(&str, fn(&str) -> bool); 3] = [
        ("parity3", |a| a == "1"),
        ("example23", |a| a == "#"),
        ("l1", |a| a == "a"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checks, mut bad) = (0, Vec::new());
    for (name, pred) in cases {
        let f = zoo::by_name(name).unwrap();
        let row: Vec<(usize, u32)> = f.pda.letters.iter().map(|a| (0, if pred(a) { 2 } else { 1 })).collect();
        let dpa = Dpa { states: vec!["d".into()], letters: f.pda.letters.clone(), initial: 0, delta: vec![row] };
        let mut ws = f.sample(90, 50);
        ws.shuffle(&mut rng);
        ws.truncate(17);
        for mode in [Mode::Intersect, Mode::Union, Mode::Minus] {
            let p = match product(&f.pda, &dpa, mode) {
                Ok(p) => p,
                Err(e) => {
                    bad.push(format!("{name} {mode:?}: {e}"));
                    continue;
                }
            };
            for (w, inside) in &ws {
                let d = dpa_oracle(&dpa.delta, w);
                let want = match mode {
                    Mode::Intersect => *inside && d,
                    Mode::Union => *inside || d,
                    Mode::Minus => *inside && !d,
                };
                checks += 1;
                if lasso_membership(&p.pda, w) != want {
                    bad.push(format!("{name} {mode:?} {w:?}"));
                }
            }
        }
    }
    let lasso_count = checks / 3;
    // LAR against the Muller verdict on the limit set.
    let mut lar_bad = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=5);
        let pairs: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(0..4), rng.gen_range(0..4))).collect();
        let stem: Vec<usize> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..k)).collect();
        let cycle: Vec<usize> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..k)).collect();
        let mode = [Mode::Intersect, Mode::Union, Mode::Minus][rng.gen_range(0..3)];
        let inf: Vec<(u32, u32)> = cycle.iter().map(|&i| pairs[i]).collect();
        let pmax = inf.iter().map(|p| p.0).max().unwrap();
        let dmax = inf.iter().map(|p| p.1).max().unwrap();
        let want = match mode {
            Mode::Intersect => pmax % 2 == 0 && dmax % 2 == 0,
            Mode::Union => pmax % 2 == 0 || dmax % 2 == 0,
            Mode::Minus => pmax % 2 == 0 && dmax % 2 == 1,
        };
        if lar_verdict(&pairs, mode, &stem, &cycle) != want {
            lar_bad += 1;
        }
    }
    outcome(
        bad.is_empty() && lasso_count >= 50 && lar_bad == 0,
        format!("{lasso_count} lassos x 3 modes, {} disagreements {:?}; LAR 200 sequences, {lar_bad} disagreements", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn c10_structural_determinism() -> Outcome {
    let mut bad = Vec::new();
    for f in zoo::all() {
        if !is_deterministic(&build_pd(&universality_spec(&f.pda, false)).pda).deterministic {
            bad.push(format!("P_d of {}", f.name));
        }
    }
    let ex23 = zoo::example23();
    if !is_deterministic(&determinize_moore(&ex23.pda, ex23.moore.as_ref().unwrap())).deterministic {
        bad.push("determinized example23".into());
    }
    for (name, spec) in [("echo", zoo::echo_spec()), ("counter", zoo::counter_spec())] {
        match synthesize(&spec, DEFAULT_BUDGET) {
            Ok(s) if is_deterministic(&s.t_minus_d.machine).deterministic => {}
            _ => bad.push(format!("strategy for {name}")),
        }
    }
    let rep = zoo::repbdd();
    if !check_visibly(&rep.pda, rep.partition.as_ref().unwrap()).is_ok_and(|r| r.visibly) {
        bad.push("repbdd not visibly".into());
    }
    let lss = zoo::lss();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10 {
        let mut p = VisiblyPartition { calls: Vec::new(), returns: Vec::new(), internals: Vec::new() };
        for a in 0..lss.pda.letters.len() {
            match rng.gen_range(0..3) {
                0 => p.calls.push(a),
                1 => p.returns.push(a),
                _ => p.internals.push(a),
            }
        }
        if check_visibly(&lss.pda, &p).is_ok_and(|r| r.visibly) {
            bad.push(format!("lss accepted under {p:?}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all structural checks hold".into() } else { bad.join("; ") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("membership corpus", c1_membership_corpus),
        ("oracle equivalence", c2_oracle_equivalence),
        ("universality via games", c3_universality),
        ("Moore determinization", c4_moore_determinization),
        ("resolver soundness", c5_resolver_soundness),
        ("pushdown solver vs enumeration", c6_pushdown_solver_vs_enumeration),
        ("synthesis end-to-end", c7_synthesis),
        ("block encoding round trip", c8_pd_round_trip),
        ("closure products and LAR", c9_closure_products),
        ("structural determinism", c10_structural_determinism),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let status = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {:2} {status}: {name}: {} [{:.2?}]", i + 1, o.detail, t.elapsed());
        if let (false, Some(why)) = (o.pass, o.known) {
            println!("             reason: {why}");
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
