//! Hardness constructions from Max-Independent-Set.
//!
//! Vertices are `0..|V|` in declaration order. Follower actions are
//! zero-based, so the paper's `j = 1, 2, 3` are columns `0, 1, 2` here.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::game::{FollowerType, Game, GameError, Matrix, MixedStrategy, Outcome, Policy};

/// Largest graph the brute-force MIS oracle accepts.
pub const MIS_VERTEX_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph has {0} vertices; brute force is limited to {MIS_VERTEX_LIMIT}")]
    TooLarge(usize),
    #[error("vertices {0} and {1} are adjacent, so the set is not independent")]
    NotIndependent(usize, usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Simple undirected graph; edges are stored as sorted pairs without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, ReductionError> {
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(ReductionError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(ReductionError::SelfLoop(u));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Graph { n, edges: out })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        Graph { n, edges: (1..n).map(|v| (v - 1, v)).collect() }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.has_edge(v, w)).collect()
    }

    fn first_conflict(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                if u == v || self.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&v| v < self.n) && self.first_conflict(set).is_none()
    }
}

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices (`n ≤ 6`), ordered by edge count then edge list.
pub fn non_isomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "isomorphism enumeration is limited to 6 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| *e).collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut key = 0u32;
                for &(u, v) in &edges {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    let idx = pairs.iter().position(|e| *e == (a, b)).expect("pair exists");
                    key |= 1 << idx;
                }
                key
            })
            .min()
            .unwrap_or(0);
        if !seen.contains(&canon) {
            seen.push(canon);
            out.push(Graph { n, edges });
        }
    }
    out.sort_by(|a, b| a.edges.len().cmp(&b.edges.len()).then_with(|| a.edges.cmp(&b.edges)));
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Size of a maximum independent set, by branching on the lowest-numbered
/// undecided vertex (take it and drop its neighbours, or drop it).
pub fn max_independent_set_bruteforce(g: &Graph) -> Result<usize, ReductionError> {
    Ok(max_independent_set(g)?.len())
}

/// A maximum independent set (lexicographically first among the largest).
pub fn max_independent_set(g: &Graph) -> Result<Vec<usize>, ReductionError> {
    if g.n > MIS_VERTEX_LIMIT {
        return Err(ReductionError::TooLarge(g.n));
    }
    let adj: Vec<u32> = (0..g.n).map(|v| g.neighbors(v).iter().fold(0u32, |acc, w| acc | 1 << w)).collect();
    let mut best = 0u32;
    let all = if g.n == 32 { u32::MAX } else { (1u32 << g.n) - 1 };
    search(&adj, all, 0, &mut best);
    Ok((0..g.n).filter(|v| best >> v & 1 == 1).collect())
}

fn search(adj: &[u32], candidates: u32, chosen: u32, best: &mut u32) {
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    if candidates == 0 {
        *best = chosen;
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    search(adj, candidates & !(1 << v) & !adj[v], chosen | 1 << v, best);
    search(adj, candidates & !(1 << v), chosen, best);
}

fn check_nonempty(g: &Graph) -> Result<(), ReductionError> {
    if g.n == 0 {
        Err(ReductionError::EmptyGraph)
    } else {
        Ok(())
    }
}

/// Game of the pure no-IC hardness proof: types `θ_*` (prior 0) then `θ_v`
/// (prior `1/|V|`); leader rows `a_0, a_1..a_|V|, b_1..b_|V|`; the leader
/// earns 1 exactly when the follower plays the first action.
pub fn build_opt_hardness_game(g: &Graph) -> Result<Game, ReductionError> {
    check_nonempty(g)?;
    let nv = g.n;
    let rows = 2 * nv + 1;
    let a = |v: usize| 1 + v;
    let b = |v: usize| 1 + nv + v;
    let leader = Matrix::from_fn(rows, 3, |_, j| if j == 0 { 1.0 } else { 0.0 });
    let mut types = vec![FollowerType::new("theta*", 0.0, leader.clone())];
    for v in 0..nv {
        let neighbours = g.neighbors(v);
        let payoff = Matrix::from_fn(rows, 3, |i, j| {
            let row: [f64; 3] = if i == 0 {
                [0.5, 1.0, 1.0]
            } else if i == a(v) {
                [0.0, 0.5, 0.5]
            } else if i == b(v) || (i <= nv && neighbours.contains(&(i - 1))) {
                [0.0, 1.0, 1.0]
            } else {
                [0.0, 0.5, 1.0]
            };
            row[j]
        });
        types.push(FollowerType::new(format!("theta{}", v + 1), 1.0 / nv as f64, payoff));
    }
    Ok(Game::new(leader, types)?.with_name(format!("opt-hardness-{nv}")))
}

/// Game of the IC hardness proof: types `θ_v` with prior `1/|V|`; leader
/// rows `a_1..a_|V|, b_1..b_|V|`.
pub fn build_ic_hardness_game(g: &Graph) -> Result<Game, ReductionError> {
    check_nonempty(g)?;
    let nv = g.n;
    let rows = 2 * nv;
    let leader = Matrix::from_fn(rows, 3, |_, j| if j == 0 { 1.0 } else { 0.0 });
    let mut types = Vec::with_capacity(nv);
    for v in 0..nv {
        let neighbours = g.neighbors(v);
        let payoff = Matrix::from_fn(rows, 3, |i, j| {
            let row: [f64; 3] = if i == v {
                [0.0, 0.0, 0.0]
            } else if i == nv + v {
                [0.0, 1.0, 1.0]
            } else if i < nv && neighbours.contains(&i) {
                [0.5, 0.0, 1.0]
            } else {
                [0.0, 0.0, 1.0]
            };
            row[j]
        });
        types.push(FollowerType::new(format!("theta{}", v + 1), 1.0 / nv as f64, payoff));
    }
    Ok(Game::new(leader, types)?.with_name(format!("ic-hardness-{nv}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Opt,
    Ic,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        match s.to_ascii_lowercase().as_str() {
            "opt" => Some(Variant::Opt),
            "ic" => Some(Variant::Ic),
            _ => None,
        }
    }

    pub fn build(self, g: &Graph) -> Result<Game, ReductionError> {
        match self {
            Variant::Opt => build_opt_hardness_game(g),
            Variant::Ic => build_ic_hardness_game(g),
        }
    }
}

/// The policy the proofs build from an independent set. Under the `Opt`
/// variant its value is `|set|/|V|`; under `Ic` it is IC with the same value.
pub fn independent_set_to_policy(
    g: &Graph,
    set: &[usize],
    variant: Variant,
) -> Result<Policy, ReductionError> {
    check_nonempty(g)?;
    let nv = g.n;
    if let Some(&v) = set.iter().find(|&&v| v >= nv) {
        return Err(ReductionError::VertexOutOfRange { vertex: v, n: nv });
    }
    if let Some((u, v)) = g.first_conflict(set) {
        return Err(ReductionError::NotIndependent(u, v));
    }
    let outcomes = match variant {
        Variant::Opt => {
            let rows = 2 * nv + 1;
            let mut out = vec![Outcome::new(MixedStrategy::pure(rows, 0), 0)];
            for v in 0..nv {
                let row = if set.contains(&v) { 1 + v } else { 1 + nv + v };
                out.push(Outcome::new(MixedStrategy::pure(rows, row), 1));
            }
            out
        }
        Variant::Ic => (0..nv)
            .map(|v| {
                if set.contains(&v) {
                    Outcome::new(MixedStrategy::pure(2 * nv, v), 0)
                } else {
                    Outcome::new(MixedStrategy::pure(2 * nv, nv + v), 1)
                }
            })
            .collect(),
    };
    Ok(Policy::from_outcomes(outcomes))
}

/// `"u v"` edge-list text: first line `V E`, then `E` lines of 1-indexed
/// endpoints. Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line_no, header) = lines.next().ok_or_else(|| String::from("empty graph file"))?;
    let nums = parse_pair(header).map_err(|e| format!("line {line_no}: {e}"))?;
    let (nv, ne) = nums;
    let mut edges = Vec::with_capacity(ne);
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line).map_err(|e| format!("line {line_no}: {e}"))?;
        if u == 0 || v == 0 {
            return Err(format!("line {line_no}: vertices are 1-indexed"));
        }
        edges.push((u - 1, v - 1));
    }
    if edges.len() != ne {
        return Err(format!("header declares {ne} edges but {} were listed", edges.len()));
    }
    Graph::new(nv, &edges).map_err(|e| format!("{e}"))
}

fn parse_pair(line: &str) -> Result<(usize, usize), String> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, String> {
        let tok = it.next().ok_or_else(|| format!("expected two integers, got {line:?}"))?;
        tok.parse().map_err(|_| format!("{tok:?} is not a non-negative integer"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(format!("expected two integers, got {line:?}"));
    }
    Ok(pair)
}
