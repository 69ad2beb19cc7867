//! Exhaustive `K_t`-subdivision and `K_t`-minor searches for small graphs, and
//! the constructive subdivision extraction for dense graphs.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::numeric::binomial;

pub const DEFAULT_SUBDIVISION_LIMIT: usize = 16;
pub const DEFAULT_MINOR_LIMIT: usize = 14;
/// Largest `C(m, t)` for which the dense extraction scans every `t`-subset.
pub const EXHAUSTIVE_SUBSET_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TopoError {
    #[error("graph has {n} vertices, above the oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no t-subset with more than C(t,2) - m/4 edges was found")]
    NoQualifyingSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPath {
    pub pair: [u32; 2],
    pub path: Vec<u32>,
}

/// Branch vertices plus one path per unordered branch pair. Paths run from
/// `pair[0]` to `pair[1]` and are listed in branch-index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionWitness {
    #[serde(rename = "branch")]
    pub branch_vertices: Vec<u32>,
    pub paths: Vec<BranchPath>,
}

impl SubdivisionWitness {
    /// Vertices used as path interiors.
    pub fn connectors(&self) -> impl Iterator<Item = u32> + '_ {
        self.paths
            .iter()
            .flat_map(|p| p.path[1..p.path.len().saturating_sub(1)].iter().copied())
    }
}

/// `t` disjoint connected vertex sets, pairwise joined by an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub branch_sets: Vec<VertexSet>,
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Bits strictly above position `v`.
fn above(v: usize) -> u64 {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.n() as u32)
        .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | bit(w as usize)))
        .collect()
}

fn check_limit(g: &Graph, limit: usize) -> Result<(), TopoError> {
    let limit = limit.min(64);
    if g.n() > limit {
        Err(TopoError::TooLarge { n: g.n(), limit })
    } else {
        Ok(())
    }
}

/// Vertex sets of the biconnected components with at least `min_size`
/// vertices.
fn blocks(adj: &[u64], min_size: u32) -> Vec<u64> {
    struct Dfs<'a> {
        adj: &'a [u64],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        edges: Vec<(usize, usize)>,
        out: Vec<u64>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.time += 1;
            self.disc[u] = self.time;
            self.low[u] = self.time;
            for w in bits(self.adj[u]) {
                if self.disc[w] == 0 {
                    self.edges.push((u, w));
                    self.visit(w, Some(u));
                    self.low[u] = self.low[u].min(self.low[w]);
                    if self.low[w] >= self.disc[u] {
                        let mut block = 0u64;
                        while let Some((a, b)) = self.edges.pop() {
                            block |= bit(a) | bit(b);
                            if (a, b) == (u, w) {
                                break;
                            }
                        }
                        self.out.push(block);
                    }
                } else if Some(w) != parent && self.disc[w] < self.disc[u] {
                    self.edges.push((u, w));
                    self.low[u] = self.low[u].min(self.disc[w]);
                }
            }
        }
    }
    let n = adj.len();
    let mut dfs = Dfs {
        adj,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        edges: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if dfs.disc[v] == 0 {
            dfs.visit(v, None);
        }
    }
    let mut out: Vec<u64> = dfs
        .out
        .into_iter()
        .filter(|b| b.count_ones() >= min_size)
        .collect();
    out.sort_unstable_by_key(|b| b.trailing_zeros());
    out
}

fn trivial_subdivision(g: &Graph, t: usize) -> Option<Option<SubdivisionWitness>> {
    match t {
        0 => Some(Some(SubdivisionWitness {
            branch_vertices: vec![],
            paths: vec![],
        })),
        1 => Some((g.n() > 0).then(|| SubdivisionWitness {
            branch_vertices: vec![0],
            paths: vec![],
        })),
        2 => Some(g.edges().next().map(|(u, v)| SubdivisionWitness {
            branch_vertices: vec![u, v],
            paths: vec![BranchPath {
                pair: [u, v],
                path: vec![u, v],
            }],
        })),
        _ => {
            let candidates = (0..g.n() as u32).filter(|&v| g.degree(v) + 1 >= t).count();
            (candidates < t).then_some(None)
        }
    }
}

/// Searches every choice of `t` branch vertices of degree at least `t − 1`
/// and, for each, every system of internally disjoint connecting paths.
pub fn has_subdivision(
    g: &Graph,
    t: usize,
    oracle_limit: usize,
) -> Result<Option<SubdivisionWitness>, TopoError> {
    if let Some(answer) = trivial_subdivision(g, t) {
        return Ok(answer);
    }
    check_limit(g, oracle_limit)?;
    let adj = adjacency_masks(g);
    for block in blocks(&adj, t as u32) {
        let local: Vec<u64> = adj.iter().map(|&m| m & block).collect();
        let candidates: Vec<usize> = bits(block)
            .filter(|&v| local[v].count_ones() as usize + 1 >= t)
            .collect();
        if candidates.len() < t {
            continue;
        }
        let mut router = Router {
            adj: &local,
            region: block,
            failed: HashSet::new(),
        };
        let mut choice: Vec<usize> = (0..t).collect();
        loop {
            let branch: Vec<usize> = choice.iter().map(|&i| candidates[i]).collect();
            if let Some(paths) = router.route_branch_set(&branch) {
                return Ok(Some(assemble(&branch, paths)));
            }
            if !next_combination(&mut choice, candidates.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `choice` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(choice: &mut [usize], n: usize) -> bool {
    let k = choice.len();
    let Some(i) = (0..k).rev().find(|&i| choice[i] < n - k + i) else {
        return false;
    };
    choice[i] += 1;
    for j in i + 1..k {
        choice[j] = choice[j - 1] + 1;
    }
    true
}

fn assemble(branch: &[usize], routed: Vec<((usize, usize), Vec<usize>)>) -> SubdivisionWitness {
    let index = |v: usize| {
        branch
            .iter()
            .position(|&b| b == v)
            .expect("endpoint is a branch vertex")
    };
    let mut paths: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    for (i, &a) in branch.iter().enumerate() {
        for &b in &branch[i + 1..] {
            let routed_path = routed
                .iter()
                .find(|((x, y), _)| (*x, *y) == (a, b) || (*x, *y) == (b, a))
                .map(|((x, _), p)| {
                    let mut p: Vec<u32> = p.iter().map(|&v| v as u32).collect();
                    if *x != a {
                        p.reverse();
                    }
                    p
                });
            paths.push((
                index(a),
                index(b),
                routed_path.unwrap_or_else(|| vec![a as u32, b as u32]),
            ));
        }
    }
    paths.sort_by_key(|(i, j, _)| (*i, *j));
    SubdivisionWitness {
        branch_vertices: branch.iter().map(|&v| v as u32).collect(),
        paths: paths
            .into_iter()
            .map(|(i, j, path)| BranchPath {
                pair: [branch[i] as u32, branch[j] as u32],
                path,
            })
            .collect(),
    }
}

/// Routes the non-adjacent branch pairs along chordless paths. Adjacent
/// pairs always take their edge: any system routing them elsewhere can be
/// rerouted onto the edge, and any path can be shortened to a chordless one
/// on a subset of its vertices.
struct Router<'a> {
    adj: &'a [u64],
    region: u64,
    failed: HashSet<(u64, Vec<u64>)>,
}

type Routed = Vec<((usize, usize), Vec<usize>)>;

impl Router<'_> {
    fn route_branch_set(&mut self, branch: &[usize]) -> Option<Routed> {
        let branch_mask = branch.iter().fold(0, |m, &v| m | bit(v));
        let mut pairs = Vec::new();
        for (i, &a) in branch.iter().enumerate() {
            for &b in &branch[i + 1..] {
                if self.adj[a] & bit(b) == 0 {
                    pairs.push((a, b));
                }
            }
        }
        let free = self.region & !branch_mask;
        if (free.count_ones() as usize) < pairs.len() {
            return None;
        }
        self.failed.clear();
        let mut remaining: Vec<bool> = vec![true; pairs.len()];
        let mut out = Vec::new();
        self.route(&pairs, &mut remaining, branch_mask, &mut out)
            .then_some(out)
    }

    fn route(
        &mut self,
        pairs: &[(usize, usize)],
        remaining: &mut [bool],
        used: u64,
        out: &mut Routed,
    ) -> bool {
        let open: Vec<usize> = (0..pairs.len()).filter(|&i| remaining[i]).collect();
        if open.is_empty() {
            return true;
        }
        let free = self.region & !used;
        if (free.count_ones() as usize) < open.len() {
            return false;
        }
        // every routed pair at `a` leaves through its own free neighbor
        let mut need = std::collections::HashMap::<usize, u32>::new();
        for &i in &open {
            *need.entry(pairs[i].0).or_default() += 1;
            *need.entry(pairs[i].1).or_default() += 1;
        }
        if need
            .iter()
            .any(|(&a, &k)| (self.adj[a] & free).count_ones() < k)
        {
            return false;
        }
        let key = (used, pack(remaining));
        if self.failed.contains(&key) {
            return false;
        }
        let mut best: Option<(usize, usize)> = None;
        for &i in &open {
            let cap = best.map_or(usize::MAX, |(_, c)| c);
            let (a, b) = pairs[i];
            let count = self.chordless_paths(a, b, free, cap, None);
            if count == 0 {
                self.failed.insert(key);
                return false;
            }
            if count < cap {
                best = Some((i, count));
                if count == 1 {
                    break;
                }
            }
        }
        let (chosen, _) = best.expect("open pairs exist");
        let (a, b) = pairs[chosen];
        let mut paths = Vec::new();
        self.chordless_paths(a, b, free, usize::MAX, Some(&mut paths));
        let mut seen = HashSet::new();
        let mut options: Vec<(u64, Vec<usize>)> = paths
            .into_iter()
            .map(|p| (p[1..p.len() - 1].iter().fold(0, |m, &v| m | bit(v)), p))
            .filter(|(mask, _)| seen.insert(*mask))
            .collect();
        options.sort_by_key(|(mask, p)| (mask.count_ones(), p.clone()));
        remaining[chosen] = false;
        for (mask, path) in options {
            if self.route(pairs, remaining, used | mask, out) {
                out.push(((a, b), path));
                remaining[chosen] = true;
                return true;
            }
        }
        remaining[chosen] = true;
        self.failed.insert(key);
        false
    }

    /// Counts (up to `cap`) the chordless `a`–`b` paths whose interior lies
    /// in `free`, collecting them when `sink` is given.
    fn chordless_paths(
        &self,
        a: usize,
        b: usize,
        free: u64,
        cap: usize,
        mut sink: Option<&mut Vec<Vec<usize>>>,
    ) -> usize {
        let mut count = 0;
        let mut path = vec![a];
        // stack of (candidate mask still to try, banned set for that level)
        let mut stack = vec![(self.adj[a] & free, bit(a))];
        while let Some((candidates, banned)) = stack.last_mut() {
            if *candidates == 0 {
                stack.pop();
                path.pop();
                continue;
            }
            let x = candidates.trailing_zeros() as usize;
            *candidates &= *candidates - 1;
            let banned = *banned;
            if self.adj[x] & bit(b) != 0 {
                count += 1;
                if let Some(sink) = sink.as_deref_mut() {
                    let mut p = path.clone();
                    p.extend([x, b]);
                    sink.push(p);
                }
                if count >= cap {
                    return count;
                }
                continue;
            }
            let last = *path.last().expect("path starts at a");
            let next_banned = banned | self.adj[last] | bit(x);
            path.push(x);
            stack.push((self.adj[x] & free & !next_banned, next_banned));
        }
        count
    }
}

fn pack(flags: &[bool]) -> Vec<u64> {
    flags
        .chunks(64)
        .map(|c| {
            c.iter()
                .enumerate()
                .fold(0, |m, (i, &f)| m | (f as u64) << i)
        })
        .collect()
}

pub fn verify_witness(g: &Graph, w: &SubdivisionWitness, t: usize) -> bool {
    let branch = &w.branch_vertices;
    let n = g.n() as u32;
    if branch.len() != t || branch.iter().any(|&v| v >= n) {
        return false;
    }
    let branch_set: HashSet<u32> = branch.iter().copied().collect();
    if branch_set.len() != t || w.paths.len() != t * t.saturating_sub(1) / 2 {
        return false;
    }
    let mut pairs = HashSet::new();
    let mut interior = HashSet::new();
    for p in &w.paths {
        let [x, y] = p.pair;
        if x == y
            || !branch_set.contains(&x)
            || !branch_set.contains(&y)
            || !pairs.insert((x.min(y), x.max(y)))
        {
            return false;
        }
        let path = &p.path;
        if path.len() < 2 || path[0] != x || path[path.len() - 1] != y {
            return false;
        }
        if path.iter().any(|&v| v >= n) || path.windows(2).any(|e| !g.has_edge(e[0], e[1])) {
            return false;
        }
        for &v in &path[1..path.len() - 1] {
            if branch_set.contains(&v) || !interior.insert(v) {
                return false;
            }
        }
    }
    true
}

/// Searches for a `K_t` minor by contracting edges. Parts of degree at most
/// one are deleted; for `t ≥ 4` a part of degree two is merged into a
/// neighbor. Among the rest, a part of degree below `t − 1` is either
/// deleted or merged into one of its neighbors; once every part has degree
/// at least `t − 1`, every edge is tried.
pub fn has_minor(
    g: &Graph,
    t: usize,
    oracle_limit: usize,
) -> Result<Option<MinorWitness>, TopoError> {
    let singletons = |vs: &[u32]| MinorWitness {
        branch_sets: vs.iter().map(|&v| VertexSet::from(vec![v])).collect(),
    };
    match t {
        0 => return Ok(Some(singletons(&[]))),
        1 => return Ok((g.n() > 0).then(|| singletons(&[0]))),
        2 => return Ok(g.edges().next().map(|(u, v)| singletons(&[u, v]))),
        _ => {}
    }
    if g.n() < t || g.edge_count() < t * (t - 1) / 2 {
        return Ok(None);
    }
    check_limit(g, oracle_limit)?;
    let adj = adjacency_masks(g);
    for block in blocks(&adj, t as u32) {
        let mut search = MinorSearch {
            adj: &adj,
            t,
            seen: HashSet::new(),
        };
        if let Some(parts) = search.search(bits(block).map(bit).collect()) {
            let branch_sets = parts
                .into_iter()
                .map(|p| bits(p).map(|v| v as u32).collect())
                .collect();
            return Ok(Some(MinorWitness { branch_sets }));
        }
    }
    Ok(None)
}

struct MinorSearch<'a> {
    adj: &'a [u64],
    t: usize,
    seen: HashSet<Vec<u64>>,
}

impl MinorSearch<'_> {
    fn neighborhood(&self, part: u64) -> u64 {
        bits(part).fold(0, |m, v| m | self.adj[v]) & !part
    }

    fn quotient(&self, parts: &[u64]) -> Vec<u64> {
        let reach: Vec<u64> = parts.iter().map(|&p| self.neighborhood(p)).collect();
        (0..parts.len())
            .map(|i| {
                (0..parts.len())
                    .filter(|&j| j != i && reach[i] & parts[j] != 0)
                    .fold(0, |m, j| m | bit(j))
            })
            .collect()
    }

    fn reduce(&self, mut parts: Vec<u64>) -> Vec<u64> {
        loop {
            let q = self.quotient(&parts);
            let degree = |i: usize| q[i].count_ones();
            if let Some(i) = (0..parts.len()).find(|&i| degree(i) <= 1) {
                parts.remove(i);
                continue;
            }
            if self.t >= 4 {
                if let Some(i) = (0..parts.len()).find(|&i| degree(i) == 2) {
                    let j = q[i].trailing_zeros() as usize;
                    parts[j] |= parts[i];
                    parts.remove(i);
                    continue;
                }
            }
            parts.sort_unstable();
            return parts;
        }
    }

    fn search(&mut self, parts: Vec<u64>) -> Option<Vec<u64>> {
        let parts = self.reduce(parts);
        let t = self.t;
        if parts.len() < t {
            return None;
        }
        let q = self.quotient(&parts);
        let edges: usize = q.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2;
        if edges < t * (t - 1) / 2 || !self.seen.insert(parts.clone()) {
            return None;
        }
        if let Some(clique) = find_clique(&q, t) {
            return Some(clique.into_iter().map(|i| parts[i]).collect());
        }
        let (low, low_degree) = (0..parts.len())
            .map(|i| (i, q[i].count_ones() as usize))
            .min_by_key(|&(i, d)| (d, i))
            .expect("parts are non-empty");
        let merge = |i: usize, j: usize| {
            let mut next = parts.clone();
            next[i] |= next[j];
            next.remove(j);
            next
        };
        if low_degree + 1 < t {
            let mut without = parts.clone();
            without.remove(low);
            if let Some(found) = self.search(without) {
                return Some(found);
            }
            for j in bits(q[low]) {
                if let Some(found) = self.search(merge(low, j)) {
                    return Some(found);
                }
            }
        } else {
            for (i, &qi) in q.iter().enumerate().take(parts.len()) {
                for j in bits(qi & above(i)) {
                    if let Some(found) = self.search(merge(i, j)) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }
}

/// A `k`-clique in the graph given by adjacency masks, if any.
fn find_clique(adj: &[u64], k: usize) -> Option<Vec<usize>> {
    fn extend(adj: &[u64], k: usize, chosen: &mut Vec<usize>, candidates: u64) -> bool {
        if chosen.len() == k {
            return true;
        }
        if chosen.len() + (candidates.count_ones() as usize) < k {
            return false;
        }
        for v in bits(candidates) {
            chosen.push(v);
            let rest = candidates & adj[v] & above(v);
            if extend(adj, k, chosen, rest) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let eligible = (0..adj.len())
        .filter(|&v| adj[v].count_ones() as usize + 1 >= k)
        .fold(0, |m, v| m | bit(v));
    let mut chosen = Vec::with_capacity(k);
    let restricted: Vec<u64> = adj.iter().map(|&m| m & eligible).collect();
    extend(&restricted, k, &mut chosen, eligible).then_some(chosen)
}

pub fn verify_minor(g: &Graph, w: &MinorWitness, t: usize) -> bool {
    let sets = &w.branch_sets;
    if sets.len() != t
        || sets
            .iter()
            .any(|s| s.is_empty() || s.iter().any(|v| v as usize >= g.n()))
    {
        return false;
    }
    let mut seen = HashSet::new();
    if !sets.iter().flat_map(|s| s.iter()).all(|v| seen.insert(v)) {
        return false;
    }
    let connected = |s: &VertexSet| {
        let mut reached = vec![s.as_slice()[0]];
        let mut stack = reached.clone();
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if s.contains(w) && !reached.contains(&w) {
                    reached.push(w);
                    stack.push(w);
                }
            }
        }
        reached.len() == s.len()
    };
    let touching = |a: &VertexSet, b: &VertexSet| {
        a.iter()
            .any(|v| g.neighbors(v).iter().any(|&w| b.contains(w)))
    };
    sets.iter().all(connected) && (0..t).all(|i| (i + 1..t).all(|j| touching(&sets[i], &sets[j])))
}

/// Follows the averaging argument for dense graphs: pick `t` vertices `Y`
/// spanning more than `C(t,2) − m/4` edges, then join every non-adjacent
/// pair of `Y` through its own common neighbor outside `Y`.
///
/// Requires `11m ≥ 20t`, where `m` is the vertex count. Success is
/// guaranteed when the minimum degree is at least `9m/10`; below that the
/// construction is still attempted and may end in
/// [`TopoError::NoQualifyingSubset`].
pub fn extract_subdivision_dense(g: &Graph, t: usize) -> Result<SubdivisionWitness, TopoError> {
    let m = g.n();
    if 11 * m < 20 * t {
        return Err(TopoError::Precondition(format!(
            "need at least 20t/11 vertices; m = {m}, t = {t}"
        )));
    }
    if t == 0 {
        return Ok(SubdivisionWitness {
            branch_vertices: vec![],
            paths: vec![],
        });
    }
    // e(Y) > C(t,2) − m/4  ⇔  4·e(Y) > 2t(t−1) − m
    let qualifies = |y: &[u32]| {
        let e: usize = y
            .iter()
            .enumerate()
            .map(|(i, &u)| y[i + 1..].iter().filter(|&&v| g.has_edge(u, v)).count())
            .sum();
        (4 * e) as i64 > (2 * t * (t - 1)) as i64 - m as i64
    };
    let subsets = binomial(m as u64, t as u64);
    if subsets <= BigUint::from(EXHAUSTIVE_SUBSET_LIMIT) {
        let total = subsets.to_u64().unwrap_or(u64::MAX);
        let mut choice: Vec<usize> = (0..t).collect();
        for _ in 0..total {
            let y: Vec<u32> = choice.iter().map(|&i| i as u32).collect();
            if qualifies(&y) {
                if let Some(w) = connect_through_common_neighbors(g, &y) {
                    return Ok(w);
                }
            }
            next_combination(&mut choice, m);
        }
    } else {
        for seed in 0..m as u32 {
            let y = greedy_dense_subset(g, seed, t);
            if qualifies(&y) {
                if let Some(w) = connect_through_common_neighbors(g, &y) {
                    return Ok(w);
                }
            }
        }
    }
    Err(TopoError::NoQualifyingSubset)
}

/// Grows a `t`-set from `seed`, each time adding the vertex with the most
/// neighbors already chosen (smallest id on ties).
fn greedy_dense_subset(g: &Graph, seed: u32, t: usize) -> Vec<u32> {
    let mut chosen = vec![seed];
    let mut score = vec![0usize; g.n()];
    let mut taken = vec![false; g.n()];
    taken[seed as usize] = true;
    for &w in g.neighbors(seed) {
        score[w as usize] += 1;
    }
    while chosen.len() < t {
        let next = (0..g.n())
            .filter(|&v| !taken[v])
            .max_by_key(|&v| (score[v], std::cmp::Reverse(v)))
            .expect("t is at most the vertex count") as u32;
        taken[next as usize] = true;
        chosen.push(next);
        for &w in g.neighbors(next) {
            score[w as usize] += 1;
        }
    }
    chosen.sort_unstable();
    chosen
}

fn connect_through_common_neighbors(g: &Graph, y: &[u32]) -> Option<SubdivisionWitness> {
    let mut used: HashSet<u32> = y.iter().copied().collect();
    let mut paths = Vec::new();
    for (i, &u) in y.iter().enumerate() {
        for &v in &y[i + 1..] {
            let path = if g.has_edge(u, v) {
                vec![u, v]
            } else {
                let w = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .find(|&w| !used.contains(&w) && g.has_edge(w, v))?;
                used.insert(w);
                vec![u, w, v]
            };
            paths.push(BranchPath { pair: [u, v], path });
        }
    }
    Some(SubdivisionWitness {
        branch_vertices: y.to_vec(),
        paths,
    })
}
