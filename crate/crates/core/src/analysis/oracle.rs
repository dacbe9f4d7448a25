//! Explicit-state lasso membership with bounded stacks, used to cross-check the
//! symbolic engine.

use crate::pda::{Configuration, LassoWord, OmegaPda, Sym};
use petgraph::graph::{DiGraph, NodeIndex};
use std::collections::{HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Accepted,
    Rejected,
    Unknown,
}

/// Explores product configurations `(state, stack, tracker position)` breadth-first up to
/// `length_bound` steps and stack height `height_bound`, then looks for an accepting cycle.
pub fn brute_force_lasso_oracle(pda: &OmegaPda, w: &LassoWord, height_bound: usize, length_bound: usize) -> OracleVerdict {
    type Node = (usize, Vec<Sym>, usize);
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    // (from, to, color, reads a letter)
    let mut edges: Vec<(usize, usize, u32, bool)> = Vec::new();
    let mut truncated = false;
    let start: Node = (pda.initial, vec![crate::pda::BOTTOM], 0);
    ids.insert(start.clone(), 0);
    nodes.push(start);
    depth.push(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let (q, stack, pos) = nodes[v].clone();
        if depth[v] >= length_bound {
            truncated = true;
            continue;
        }
        let c = Configuration::new(q, stack);
        for t in &pda.transitions {
            if t.source != q || t.top != c.top() {
                continue;
            }
            let npos = match t.label {
                None => pos,
                Some(a) if a == w.at_pos(pos) => w.next_pos(pos),
                Some(_) => continue,
            };
            let mut ns = c.stack.clone();
            ns.pop();
            ns.extend_from_slice(&t.push);
            if ns.len() - 1 > height_bound {
                truncated = true;
                continue;
            }
            let node: Node = (t.target, ns, npos);
            let to = match ids.get(&node) {
                Some(&i) => i,
                None => {
                    let i = nodes.len();
                    ids.insert(node.clone(), i);
                    nodes.push(node);
                    depth.push(depth[v] + 1);
                    queue.push_back(i);
                    i
                }
            };
            edges.push((v, to, t.color, t.label.is_some()));
        }
    }
    let mut colors: Vec<u32> = edges.iter().map(|e| e.2).filter(|c| c % 2 == 0).collect();
    colors.sort_unstable();
    colors.dedup();
    for d in colors {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        for _ in 0..nodes.len() {
            g.add_node(());
        }
        for e in edges.iter().filter(|e| e.2 <= d) {
            g.add_edge(NodeIndex::new(e.0), NodeIndex::new(e.1), ());
        }
        let mut comp = vec![0; nodes.len()];
        for (ci, c) in petgraph::algo::tarjan_scc(&g).into_iter().enumerate() {
            for n in c {
                comp[n.index()] = ci;
            }
        }
        let inside = |e: &&(usize, usize, u32, bool)| e.2 <= d && comp[e.0] == comp[e.1];
        let with_d: Vec<usize> = edges.iter().filter(inside).filter(|e| e.2 == d).map(|e| comp[e.0]).collect();
        let with_letter: Vec<usize> = edges.iter().filter(inside).filter(|e| e.3).map(|e| comp[e.0]).collect();
        if with_d.iter().any(|c| with_letter.contains(c)) {
            return OracleVerdict::Accepted;
        }
    }
    if truncated {
        OracleVerdict::Unknown
    } else {
        OracleVerdict::Rejected
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_lasso;
    use crate::zoo;

    #[test]
    fn example_words() {
        let p = zoo::example23().pda;
        let w = parse_lasso(&p.letters, "acd;#").unwrap();
        assert_eq!(brute_force_lasso_oracle(&p, &w, 5, 100), OracleVerdict::Accepted);
        let w = parse_lasso(&p.letters, "acdd;#").unwrap();
        assert_eq!(brute_force_lasso_oracle(&p, &w, 5, 100), OracleVerdict::Rejected);
    }

    #[test]
    fn deep_push_is_unknown() {
        let p = zoo::repbdd().pda;
        let w = parse_lasso(&p.letters, ";+").unwrap();
        assert_eq!(brute_force_lasso_oracle(&p, &w, 1, 100), OracleVerdict::Unknown);
    }
}
