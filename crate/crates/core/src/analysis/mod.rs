//! Configuration sets, saturation, parity emptiness and lasso membership.

pub mod emptiness;
pub mod heads;
pub mod oracle;
pub mod pautomaton;

pub use emptiness::{
    accepts_tail_of, lasso_membership, lasso_product, lasso_witness, normalize_colors, parity_nonempty, validate_witness,
    Derived, EmptinessWitness,
};
pub use oracle::{brute_force_lasso_oracle, OracleVerdict};
pub use pautomaton::{saturate_pre_star, PAutomaton};

use crate::pda::{Configuration, OmegaPda, BOTTOM};

/// Every well-formed configuration with stack height at most `h`.
pub fn configs_up_to(pda: &OmegaPda, h: usize) -> Vec<Configuration> {
    let mut stacks = vec![vec![BOTTOM]];
    let mut frontier = stacks.clone();
    for _ in 0..h {
        let mut next = Vec::new();
        for s in &frontier {
            for x in 1..pda.num_syms() {
                let mut n = s.clone();
                n.push(x);
                next.push(n);
            }
        }
        stacks.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for q in 0..pda.states.len() {
        for s in &stacks {
            out.push(Configuration::new(q, s.clone()));
        }
    }
    out
}

/// Whether some configuration in `target` is reachable from `c` using `allowed` transitions
/// while never exceeding stack height `max_height`.
pub fn bounded_reach(
    pda: &OmegaPda,
    allowed: &dyn Fn(usize) -> bool,
    target: &dyn Fn(&Configuration) -> bool,
    c: &Configuration,
    max_height: usize,
) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![c.clone()];
    seen.insert(c.clone());
    while let Some(cur) = stack.pop() {
        if target(&cur) {
            return true;
        }
        for (i, t) in pda.transitions.iter().enumerate() {
            if !allowed(i) || !crate::pda::is_enabled(t, &cur) {
                continue;
            }
            let n = crate::pda::step(&cur, t).unwrap();
            if n.height() <= max_height && seen.insert(n.clone()) {
                stack.push(n);
            }
        }
    }
    false
}
