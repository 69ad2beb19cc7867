//! Reference implementations used as oracles by the integration tests. They
//! share no code with the library beyond `Graph` accessors.
#![allow(dead_code)]

use clique_census::constructions::random_gnp;
use clique_census::Graph;

pub fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n() as u32)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Clique counts by size, from a scan of all `2^n` vertex subsets.
pub fn brute_force_census(g: &Graph) -> Vec<u64> {
    let n = g.n();
    assert!(n <= 24, "brute force is for small graphs");
    let adj = masks(g);
    let mut is_clique = vec![false; 1 << n];
    let mut counts = vec![0u64; n + 1];
    is_clique[0] = true;
    counts[0] = 1;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if is_clique[rest] && adj[low] & rest as u64 == rest as u64 {
            is_clique[mask] = true;
            counts[mask.count_ones() as usize] += 1;
        }
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    counts
}

/// Existence of a `K_t`-subdivision by plain backtracking: every `t`-subset
/// of vertices (last subset first) and every simple path for every pair.
pub fn reference_has_subdivision(g: &Graph, t: usize) -> bool {
    let n = g.n();
    assert!(n <= 12 && t <= 6);
    if t == 0 {
        return true;
    }
    let adj = masks(g);
    let mut subsets: Vec<u64> = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == t)
        .collect();
    subsets.reverse();
    subsets.into_iter().any(|branch| {
        let vs: Vec<usize> = (0..n).filter(|&v| branch >> v & 1 == 1).collect();
        let pairs: Vec<(usize, usize)> = (0..t)
            .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
            .map(|(i, j)| (vs[i], vs[j]))
            .collect();
        connect(&adj, &pairs, branch)
    })
}

fn connect(adj: &[u64], pairs: &[(usize, usize)], used: u64) -> bool {
    let Some((&(a, b), rest)) = pairs.split_first() else {
        return true;
    };
    let mut found = false;
    simple_paths(adj, a, b, used, 0, &mut |internal| {
        found = connect(adj, rest, used | internal);
        found
    });
    found
}

/// Calls `visit` with the internal-vertex mask of every simple `a`-`b` path
/// avoiding `blocked`; stops when `visit` returns true.
fn simple_paths(
    adj: &[u64],
    a: usize,
    b: usize,
    blocked: u64,
    internal: u64,
    visit: &mut dyn FnMut(u64) -> bool,
) -> bool {
    if adj[a] >> b & 1 == 1 && visit(internal) {
        return true;
    }
    let mut next = adj[a] & !blocked & !internal;
    while next != 0 {
        let w = next.trailing_zeros() as usize;
        next &= next - 1;
        if simple_paths(adj, w, b, blocked, internal | 1 << w, visit) {
            return true;
        }
    }
    false
}

pub struct Sample {
    pub index: usize,
    pub n: u32,
    pub p: f64,
    pub seed: u64,
    pub graph: Graph,
}

/// The 200 seeded random graphs: `n = 8 + i mod 11`, `p` cycling through
/// 0.2, 0.5, 0.8 every 11 graphs.
pub fn random_samples() -> Vec<Sample> {
    (0..200)
        .map(|i| {
            let n = 8 + (i % 11) as u32;
            let p = [0.2, 0.5, 0.8][(i / 11) % 3];
            let seed = 0x5eed_0000 + i as u64;
            Sample {
                index: i,
                n,
                p,
                seed,
                graph: random_gnp(n, p, seed).expect("valid parameters"),
            }
        })
        .collect()
}
