use gfg_core::analysis::{brute_force_lasso_oracle, lasso_membership, parity_nonempty, validate_witness, OracleVerdict};
use gfg_core::closure::{lar_verdict, parse_dpa, print_dpa, Dpa, LarState, Mode};
use gfg_core::games::pd::build_pd;
use gfg_core::games::strategy::{parse_strategy, print_strategy};
use gfg_core::games::{parse_spec, print_spec, universality_spec};
use gfg_core::pda::{is_deterministic, validate, LassoWord, OmegaPda, Transition, BOTTOM};
use gfg_core::text::{parse_pda, print_pda};
use gfg_core::zoo;
use proptest::prelude::*;

const STATES: usize = 3;
const LETTERS: usize = 2;
const SYMS: usize = 2;

/// Random transition over `STATES` states, `LETTERS` letters and `SYMS` stack symbols that
/// never removes or duplicates the bottom marker.
fn transition() -> impl Strategy<Value = Transition> {
    (0..STATES, 0..=SYMS, proptest::option::weighted(0.8, 0..LETTERS), 0..STATES, 0..3usize, 1..=SYMS, 1..=SYMS, 0..4u32).prop_map(
        |(source, top, label, target, shape, x, y, color)| {
            let push = match (top == BOTTOM, shape) {
                (true, 0) => vec![BOTTOM],
                (true, _) => vec![BOTTOM, x],
                (false, 0) => vec![],
                (false, 1) => vec![x],
                (false, _) => vec![x, y],
            };
            Transition { source, top, label, target, push, color }
        },
    )
}

fn pda() -> impl Strategy<Value = OmegaPda> {
    proptest::collection::vec(transition(), 1..10).prop_map(|mut ts| {
        ts.sort();
        ts.dedup();
        OmegaPda {
            states: (0..STATES).map(|i| format!("q{i}")).collect(),
            letters: ["a", "b"].iter().map(|s| s.to_string()).collect(),
            stack_syms: (1..=SYMS).map(|i| format!("S{i}")).collect(),
            initial: 0,
            transitions: ts,
        }
    })
}

fn lasso(letters: usize) -> impl Strategy<Value = LassoWord> {
    (proptest::collection::vec(0..letters, 0..4), proptest::collection::vec(0..letters, 1..4)).prop_map(|(u, v)| LassoWord::new(u, v).unwrap())
}

fn dpa() -> impl Strategy<Value = Dpa> {
    (1..4usize).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec((0..n, 0..4u32), LETTERS), n).prop_map(move |delta| Dpa {
            states: (0..n).map(|i| format!("d{i}")).collect(),
            letters: vec!["a".into(), "b".into()],
            initial: 0,
            delta,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_automata_are_valid(p in pda()) {
        prop_assert!(validate(&p).is_empty());
    }

    #[test]
    fn automaton_text_round_trips(p in pda()) {
        prop_assert_eq!(parse_pda(&print_pda(&p)).unwrap(), p);
    }

    #[test]
    fn membership_agrees_with_bounded_search(p in pda(), w in lasso(LETTERS)) {
        let engine = lasso_membership(&p, &w);
        match brute_force_lasso_oracle(&p, &w, 5, 40) {
            OracleVerdict::Accepted => prop_assert!(engine),
            OracleVerdict::Rejected => prop_assert!(!engine),
            OracleVerdict::Unknown => {}
        }
    }

    #[test]
    fn membership_ignores_lasso_presentation(p in pda(), w in lasso(LETTERS), k in 0..4usize) {
        let mut u = w.prefix.clone();
        u.extend(&w.cycle[..k % w.cycle.len()]);
        let mut v = w.cycle.clone();
        v.rotate_left(k % w.cycle.len());
        let vv = [v.clone(), v].concat();
        prop_assert_eq!(lasso_membership(&p, &w), lasso_membership(&p, &LassoWord::new(u, vv).unwrap()));
    }

    #[test]
    fn emptiness_witnesses_check_out(p in pda()) {
        if let Some(wit) = parity_nonempty(&p) {
            prop_assert!(validate_witness(&p, &wit).is_ok());
        }
    }

    #[test]
    fn block_checker_is_deterministic(p in pda()) {
        prop_assert!(is_deterministic(&build_pd(&universality_spec(&p, true)).pda).deterministic);
    }

    #[test]
    fn spec_text_round_trips(p in pda(), gfg in any::<bool>()) {
        let spec = universality_spec(&p, gfg);
        let again = parse_spec(&print_spec(&spec)).unwrap();
        prop_assert_eq!(&again.condition, &spec.condition);
        prop_assert_eq!(&again.pairs, &spec.pairs);
        prop_assert_eq!(again.gfg_claimed, gfg);
    }

    #[test]
    fn dpa_text_round_trips(d in dpa()) {
        let again = parse_dpa(&print_dpa(&d)).unwrap();
        prop_assert_eq!(again.delta, d.delta);
        prop_assert_eq!(again.initial, d.initial);
    }

    #[test]
    fn lar_agrees_with_the_limit_set(
        pairs in proptest::collection::vec((0..5u32, 0..5u32), 1..5),
        stem in proptest::collection::vec(0..5usize, 0..6),
        cycle in proptest::collection::vec(0..5usize, 1..6),
        m in 0..3usize,
    ) {
        let k = pairs.len();
        let stem: Vec<usize> = stem.into_iter().map(|i| i % k).collect();
        let cycle: Vec<usize> = cycle.into_iter().map(|i| i % k).collect();
        let mode = [Mode::Intersect, Mode::Union, Mode::Minus][m];
        let pmax = cycle.iter().map(|&i| pairs[i].0).max().unwrap();
        let dmax = cycle.iter().map(|&i| pairs[i].1).max().unwrap();
        let (pe, de) = (pmax % 2 == 0, dmax % 2 == 0);
        let want = match mode {
            Mode::Intersect => pe && de,
            Mode::Union => pe || de,
            Mode::Minus => pe && !de,
        };
        prop_assert_eq!(lar_verdict(&pairs, mode, &stem, &cycle), want);
    }

    #[test]
    fn lar_update_keeps_a_permutation(k in 1..6usize, seq in proptest::collection::vec(0..6usize, 0..20)) {
        let mut s = LarState::new(k);
        for p in seq {
            let p = p % k;
            s = s.update(p);
            prop_assert_eq!(s.perm[0], p);
            prop_assert_eq!(s.recent().len(), s.hit + 1);
            let mut sorted = s.perm.clone();
            sorted.sort();
            prop_assert_eq!(sorted, (0..k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn lasso_letters_follow_the_unrolling(w in lasso(3), n in 0..30usize) {
        let un = w.unroll(n + 1);
        prop_assert_eq!(un[n], w.letter(n));
        prop_assert_eq!(w.at_pos(w.pos_after(n)), w.letter(n));
        prop_assert_eq!(w.pos_after(n + 1), w.next_pos(w.pos_after(n)));
    }

    #[test]
    fn fixture_samples_match_their_classifier(seed in any::<u64>()) {
        for f in zoo::all() {
            for (w, inside) in f.sample(seed, 3) {
                prop_assert_eq!(f.classify(&w), inside);
                prop_assert_eq!(lasso_membership(&f.pda, &w), inside, "{} on {:?}", f.name, w);
            }
        }
    }
}

#[test]
fn strategy_text_round_trips() {
    let s = gfg_core::games::synthesize(&zoo::echo_spec(), gfg_core::games::DEFAULT_BUDGET).unwrap();
    let again = parse_strategy(&print_strategy(&s.t_minus_d)).unwrap();
    assert_eq!(print_strategy(&again), print_strategy(&s.t_minus_d));
}
