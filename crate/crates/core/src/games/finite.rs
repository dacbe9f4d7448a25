//! Finite parity games with colored edges, solved by Zielonka's recursive algorithm.
//!
//! Max-parity: a play is won by Eve iff the largest color seen infinitely often is even.
//! A vertex without successors is lost by its owner.

use super::Player;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteParityGame {
    pub owner: Vec<Player>,
    /// `(from, to, color)`
    pub edges: Vec<(usize, usize, u32)>,
}

impl FiniteParityGame {
    pub fn add_vertex(&mut self, p: Player) -> usize {
        self.owner.push(p);
        self.owner.len() - 1
    }

    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.owner.len()];
        for (i, &(u, _, _)) in self.edges.iter().enumerate() {
            out[u].push(i);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSolution {
    pub winner: Vec<Player>,
    /// For each vertex won by its owner and having a successor, the edge it plays.
    pub strategy: Vec<Option<usize>>,
}

/// Vertex-priority arena: original vertices get priority 0, each edge becomes a vertex
/// carrying the edge color, and two sinks absorb dead ends.
struct Arena {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    prio: Vec<u32>,
    owner: Vec<u8>,
}

fn side(p: Player) -> u8 {
    match p {
        Player::Eve => 0,
        Player::Adam => 1,
    }
}

impl Arena {
    fn attractor(&self, alive: &[bool], target: &[bool], player: u8, strat: &mut [usize]) -> Vec<bool> {
        let n = self.succ.len();
        let mut inside = target.to_vec();
        let mut degree = vec![usize::MAX; n];
        let mut queue: Vec<usize> = (0..n).filter(|&v| target[v]).collect();
        while let Some(v) = queue.pop() {
            for &u in &self.pred[v] {
                if !alive[u] || inside[u] {
                    continue;
                }
                if self.owner[u] == player {
                    inside[u] = true;
                    strat[u] = v;
                    queue.push(u);
                } else {
                    if degree[u] == usize::MAX {
                        degree[u] = self.succ[u].iter().filter(|&&w| alive[w]).count();
                    }
                    degree[u] -= 1;
                    if degree[u] == 0 {
                        inside[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        inside
    }

    /// Winning regions `[Eve, Adam]` of the subgame on `alive`.
    fn zielonka(&self, alive: &[bool], strat: &mut [usize]) -> [Vec<bool>; 2] {
        let n = alive.len();
        let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| self.prio[v]).max() else {
            return [vec![false; n], vec![false; n]];
        };
        let i = (p % 2) as u8;
        let top: Vec<bool> = (0..n).map(|v| alive[v] && self.prio[v] == p).collect();
        let a = self.attractor(alive, &top, i, strat);
        for v in 0..n {
            if top[v] && self.owner[v] == i {
                if let Some(&w) = self.succ[v].iter().find(|&&w| alive[w]) {
                    strat[v] = w;
                }
            }
        }
        let sub: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let w1 = self.zielonka(&sub, strat);
        let opp = 1 - i as usize;
        if !w1[opp].iter().any(|&x| x) {
            let mut out = [vec![false; n], vec![false; n]];
            out[i as usize] = alive.to_vec();
            return out;
        }
        let b = self.attractor(alive, &w1[opp], 1 - i, strat);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let mut w2 = self.zielonka(&rest, strat);
        for v in 0..n {
            if b[v] {
                w2[opp][v] = true;
            }
        }
        w2
    }
}

/// Runs `f` on a thread with a large stack; the recursive solver can nest deeply.
pub(crate) fn with_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| std::thread::Builder::new().stack_size(1 << 30).spawn_scoped(s, f).expect("spawn solver").join().expect("solver panicked"))
}

pub fn solve_finite(g: &FiniteParityGame) -> FiniteSolution {
    let n = g.owner.len();
    let m = g.edges.len();
    let (eve_sink, adam_sink) = (n + m, n + m + 1);
    let total = n + m + 2;
    let mut succ = vec![Vec::new(); total];
    let mut prio = vec![0u32; total];
    let mut owner: Vec<u8> = g.owner.iter().map(|&p| side(p)).collect();
    owner.extend(std::iter::repeat_n(0, m + 2));
    for (i, &(u, v, c)) in g.edges.iter().enumerate() {
        succ[u].push(n + i);
        succ[n + i].push(v);
        prio[n + i] = c;
    }
    for v in 0..n {
        if succ[v].is_empty() {
            succ[v].push(if g.owner[v] == Player::Eve { adam_sink } else { eve_sink });
        }
    }
    succ[eve_sink].push(eve_sink);
    succ[adam_sink].push(adam_sink);
    prio[adam_sink] = 1;
    let mut pred = vec![Vec::new(); total];
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            pred[v].push(u);
        }
    }
    let arena = Arena { succ, pred, prio, owner };
    let mut strat = vec![usize::MAX; total];
    let alive = vec![true; total];
    let regions = with_big_stack(|| arena.zielonka(&alive, &mut strat));
    let winner: Vec<Player> = (0..n).map(|v| if regions[0][v] { Player::Eve } else { Player::Adam }).collect();
    let strategy = (0..n)
        .map(|v| {
            let s = strat[v];
            (winner[v] == g.owner[v] && s >= n && s < n + m).then(|| s - n)
        })
        .collect();
    FiniteSolution { winner, strategy }
}

/// Checks that each player's strategy wins from its whole region: the region is closed
/// under the strategy and every cycle the opponent can force there has the winner's parity.
pub fn verify_solution(g: &FiniteParityGame, sol: &FiniteSolution) -> Result<(), String> {
    let out = g.out_edges();
    for p in [Player::Eve, Player::Adam] {
        let region: Vec<bool> = sol.winner.iter().map(|&w| w == p).collect();
        let mut kept: Vec<usize> = Vec::new();
        for v in 0..g.owner.len() {
            if !region[v] {
                continue;
            }
            if g.owner[v] == p {
                if out[v].is_empty() {
                    return Err(format!("vertex {v} is a dead end of its owner but marked won"));
                }
                let e = sol.strategy[v].ok_or_else(|| format!("no strategy at vertex {v}"))?;
                if g.edges[e].0 != v || !region[g.edges[e].1] {
                    return Err(format!("strategy at {v} leaves the region"));
                }
                kept.push(e);
            } else {
                for &e in &out[v] {
                    if !region[g.edges[e].1] {
                        return Err(format!("opponent escapes the region from {v}"));
                    }
                    kept.push(e);
                }
            }
        }
        let bad_parity = match p {
            Player::Eve => 1,
            Player::Adam => 0,
        };
        let colors: std::collections::BTreeSet<u32> = kept.iter().map(|&e| g.edges[e].2).filter(|c| c % 2 == bad_parity).collect();
        for d in colors {
            let mut graph = DiGraph::<(), ()>::new();
            let nodes: Vec<_> = (0..g.owner.len()).map(|_| graph.add_node(())).collect();
            for &e in &kept {
                let (u, v, c) = g.edges[e];
                if c <= d {
                    graph.add_edge(nodes[u], nodes[v], ());
                }
            }
            let mut comp = vec![usize::MAX; g.owner.len()];
            for (ci, scc) in tarjan_scc(&graph).into_iter().enumerate() {
                for n in scc {
                    comp[n.index()] = ci;
                }
            }
            if let Some(&e) = kept.iter().find(|&&e| {
                let (u, v, c) = g.edges[e];
                c == d && comp[u] == comp[v]
            }) {
                return Err(format!("{p:?} region has a cycle through edge {e} with max color {d}"));
            }
        }
    }
    Ok(())
}
