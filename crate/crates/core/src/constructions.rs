//! Reference graph families with closed-form clique counts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` is missing parameter `{param}`")]
    MissingParam { family: String, param: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("malformed construction spec `{0}`")]
    Malformed(String),
}

/// `P_n^k`: vertices `0..n`, `i ~ j` iff `0 < |i - j| ≤ k`.
pub fn path_power(n: u32, k: u32) -> Graph {
    Graph::from_edges(
        n as usize,
        (0..n).flat_map(|u| {
            (u + 1..n.min(u.saturating_add(k).saturating_add(1))).map(move |v| (u, v))
        }),
    )
    .expect("path powers are simple graphs")
}

/// `K_{2,…,2}` with `k` parts `{2i, 2i+1}`.
pub fn complete_multipartite_222(k: u32) -> Result<Graph, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidParam(
            "complete_multipartite needs k >= 1".into(),
        ));
    }
    let n = 2 * k;
    Ok(Graph::from_edges(
        n as usize,
        (0..n).flat_map(|u| {
            (u + 1..n)
                .filter(move |v| v / 2 != u / 2)
                .map(move |v| (u, v))
        }),
    )
    .expect("multipartite graphs are simple"))
}

pub fn complete(n: u32) -> Graph {
    path_power(n, n.saturating_sub(1))
}

pub fn cycle(n: u32) -> Graph {
    match n {
        0..=2 => path_power(n, 1),
        _ => Graph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n)))
            .expect("cycles are simple"),
    }
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let edges = (0..5u32).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]);
    Graph::from_edges(10, edges).expect("Petersen graph is simple")
}

/// `K_t` with every edge subdivided once: branch vertices `0..t`, then one
/// new vertex per edge in lexicographic order.
pub fn subdivided_complete(t: u32) -> Graph {
    let mut edges = Vec::new();
    let mut next = t;
    for u in 0..t {
        for v in u + 1..t {
            edges.push((u, next));
            edges.push((next, v));
            next += 1;
        }
    }
    Graph::from_edges(next as usize, edges).expect("subdivisions are simple")
}

/// `K_n` minus the perfect matching `{2i, 2i+1}`; `n` must be even.
pub fn complete_minus_matching(n: u32) -> Result<Graph, ConstructionError> {
    if !n.is_multiple_of(2) {
        return Err(ConstructionError::InvalidParam(format!(
            "K_n minus a perfect matching needs even n, got {n}"
        )));
    }
    complete_multipartite_222(n / 2)
}

/// `G(n, p)` from a ChaCha8 stream seeded with `seed`. Pairs `(u, v)` with
/// `u < v` are visited in lexicographic order and each consumes one
/// `f64` draw; the edge is present when the draw is below `p`.
pub fn random_gnp(n: u32, p: f64, seed: u64) -> Result<Graph, ConstructionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConstructionError::InvalidParam(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n as usize, edges).expect("random graphs are simple"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PathPower,
    CompleteMultipartite,
    Complete,
    Cycle,
    Edgeless,
    Petersen,
    SubdividedComplete,
    CompleteMinusMatching,
    RandomGnp,
}

impl Family {
    const ALL: [Family; 9] = [
        Family::PathPower,
        Family::CompleteMultipartite,
        Family::Complete,
        Family::Cycle,
        Family::Edgeless,
        Family::Petersen,
        Family::SubdividedComplete,
        Family::CompleteMinusMatching,
        Family::RandomGnp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PathPower => "path_power",
            Family::CompleteMultipartite => "complete_multipartite",
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::Edgeless => "edgeless",
            Family::Petersen => "petersen",
            Family::SubdividedComplete => "subdivided_complete",
            Family::CompleteMinusMatching => "complete_minus_matching",
            Family::RandomGnp => "random_gnp",
        }
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ConstructionError::UnknownFamily(s.to_string()))
    }
}

/// A graph family plus its parameters. Parameter values are kept as the
/// strings they were written with so specs round-trip exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ConstructionSpec {
    pub fn new(family: Family) -> Self {
        ConstructionSpec {
            family,
            params: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn path_power(n: u32, k: u32) -> Self {
        Self::new(Family::PathPower).with("n", n).with("k", k)
    }

    pub fn complete_multipartite(k: u32) -> Self {
        Self::new(Family::CompleteMultipartite).with("k", k)
    }

    pub fn from_json(text: &str) -> Result<Self, ConstructionError> {
        serde_json::from_str(text).map_err(|e| ConstructionError::Malformed(e.to_string()))
    }

    fn missing(&self, key: &str) -> ConstructionError {
        ConstructionError::MissingParam {
            family: self.family.name().into(),
            param: key.into(),
        }
    }

    fn int(&self, key: &str) -> Result<u32, ConstructionError> {
        let value = self.params.get(key).ok_or_else(|| self.missing(key))?;
        value
            .as_u64()
            .and_then(|v| u32::try_from(v).ok())
            .or_else(|| value.as_str().and_then(|s| s.parse().ok()))
            .ok_or_else(|| {
                ConstructionError::InvalidParam(format!("`{key}` must be a non-negative integer"))
            })
    }

    fn float(&self, key: &str) -> Result<f64, ConstructionError> {
        let value = self.params.get(key).ok_or_else(|| self.missing(key))?;
        value
            .as_f64()
            .or_else(|| value.as_str().and_then(|s| s.parse().ok()))
            .ok_or_else(|| ConstructionError::InvalidParam(format!("`{key}` must be a number")))
    }

    pub fn generate(&self) -> Result<Graph, ConstructionError> {
        match self.family {
            Family::PathPower => {
                let n = self.int("n")?;
                if n == 0 {
                    return Err(ConstructionError::InvalidParam(
                        "path_power needs n >= 1".into(),
                    ));
                }
                Ok(path_power(n, self.int("k")?))
            }
            Family::CompleteMultipartite => complete_multipartite_222(self.int("k")?),
            Family::Complete => Ok(complete(self.int("n")?)),
            Family::Cycle => {
                let n = self.int("n")?;
                if n < 3 {
                    return Err(ConstructionError::InvalidParam("cycle needs n >= 3".into()));
                }
                Ok(cycle(n))
            }
            Family::Edgeless => Ok(Graph::empty(self.int("n")? as usize)),
            Family::Petersen => Ok(petersen()),
            Family::SubdividedComplete => Ok(subdivided_complete(self.int("t")?)),
            Family::CompleteMinusMatching => complete_minus_matching(self.int("n")?),
            Family::RandomGnp => random_gnp(
                self.int("n")?,
                self.float("p")?,
                self.seed.ok_or_else(|| self.missing("seed"))?,
            ),
        }
    }

    /// Closed-form clique count (empty clique included) where one exists.
    pub fn predicted_clique_count(&self) -> Option<BigUint> {
        let pow = |base: u32, e: u32| BigUint::from(base).pow(e);
        match self.family {
            Family::PathPower => {
                let (n, k) = (self.int("n").ok()?, self.int("k").ok()?);
                if n > k {
                    Some(pow(2, k) * (n - k + 1))
                } else {
                    Some(pow(2, n))
                }
            }
            Family::CompleteMultipartite => Some(pow(3, self.int("k").ok()?)),
            Family::Complete => Some(pow(2, self.int("n").ok()?)),
            Family::Cycle => match self.int("n").ok()? {
                3 => Some(BigUint::from(8u32)),
                n => Some(BigUint::from(2 * n + 1)),
            },
            Family::Edgeless => Some(BigUint::from(self.int("n").ok()? + 1)),
            // ∅, 10 vertices, 15 edges; the Petersen graph is triangle-free
            Family::Petersen => Some(BigUint::from(26u32)),
            Family::SubdividedComplete => {
                let t = self.int("t").ok()?;
                let edges = t * t.saturating_sub(1) / 2;
                Some(BigUint::one() + (t + edges) + 2 * edges)
            }
            Family::CompleteMinusMatching => Some(pow(3, self.int("n").ok()? / 2)),
            Family::RandomGnp => None,
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.name())?;
        let mut parts: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| match v {
                serde_json::Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        if let Some(seed) = self.seed {
            parts.push(format!("seed={seed}"));
        }
        if !parts.is_empty() {
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// Inline form `family:key=val,key=val`; `seed` is lifted out of the params.
impl FromStr for ConstructionSpec {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (s.trim(), ""),
        };
        let mut spec = ConstructionSpec::new(family.parse()?);
        for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| ConstructionError::Malformed(s.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "seed" {
                spec.seed = Some(value.parse().map_err(|_| {
                    ConstructionError::InvalidParam(format!("seed `{value}` is not an integer"))
                })?);
                continue;
            }
            let json = match value.parse::<u64>() {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => match value.parse::<f64>() {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(value),
                },
            };
            spec.params.insert(key.to_string(), json);
        }
        Ok(spec)
    }
}

/// One line of the lower-bound report for `K_{2,…,2}` with `k` parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub k: u32,
    /// Smallest `t` for which `K_{2,…,2}` has no `K_t`-subdivision: `⌊3k/2⌋ + 1`.
    pub t: u32,
    #[serde(serialize_with = "crate::serialize_display")]
    pub clique_count: BigUint,
    /// `log₂(3^k) / t`.
    pub exponent: f64,
    /// `(2/3) log₂ 3`, the value the exponents approach.
    pub limit: f64,
}

pub fn lower_bound_constant(k: u32) -> Result<LowerBoundReport, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidParam("k must be >= 1".into()));
    }
    let t = 3 * k / 2 + 1;
    let log2_3 = 3f64.log2();
    let clique_count = BigUint::from(3u32).pow(k);
    Ok(LowerBoundReport {
        k,
        t,
        exponent: k as f64 * log2_3 / t as f64,
        limit: 2.0 / 3.0 * log2_3,
        clique_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::count_cliques;

    #[test]
    fn path_power_examples() {
        assert_eq!(
            path_power(6, 1),
            Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap()
        );
        assert_eq!(path_power(5, 4), complete(5));
        assert_eq!(path_power(5, 9), complete(5));
        assert_eq!(count_cliques(&path_power(20, 3)), BigUint::from(144u32));
    }

    #[test]
    fn multipartite_examples() {
        let k1 = complete_multipartite_222(1).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (2, 0));
        assert_eq!(count_cliques(&k1), BigUint::from(3u32));
        let octahedron = complete_multipartite_222(3).unwrap();
        assert_eq!((octahedron.n(), octahedron.edge_count()), (6, 12));
        assert_eq!(count_cliques(&octahedron), BigUint::from(27u32));
        assert!(complete_multipartite_222(0).is_err());
    }

    #[test]
    fn predicted_counts() {
        assert_eq!(
            ConstructionSpec::path_power(20, 3).predicted_clique_count(),
            Some(BigUint::from(144u32))
        );
        assert_eq!(
            ConstructionSpec::complete_multipartite(5).predicted_clique_count(),
            Some(BigUint::from(243u32))
        );
        assert_eq!(
            ConstructionSpec::new(Family::Complete)
                .with("n", 4)
                .predicted_clique_count(),
            Some(BigUint::from(16u32))
        );
        assert_eq!(
            ConstructionSpec::path_power(3, 5).predicted_clique_count(),
            Some(BigUint::from(8u32))
        );
        let gnp: ConstructionSpec = "random_gnp:n=5,p=0.5,seed=1".parse().unwrap();
        assert_eq!(gnp.predicted_clique_count(), None);
    }

    #[test]
    fn every_closed_form_matches_the_counter() {
        let specs = [
            "path_power:n=12,k=4",
            "path_power:n=1,k=0",
            "complete_multipartite:k=4",
            "complete:n=7",
            "cycle:n=3",
            "cycle:n=9",
            "edgeless:n=6",
            "petersen",
            "subdivided_complete:t=5",
            "complete_minus_matching:n=10",
        ];
        for text in specs {
            let spec: ConstructionSpec = text.parse().unwrap();
            let g = spec.generate().unwrap();
            assert_eq!(
                Some(count_cliques(&g)),
                spec.predicted_clique_count(),
                "{text}"
            );
        }
    }

    #[test]
    fn spec_text_round_trip() {
        let spec: ConstructionSpec = "random_gnp:n=12,p=0.5,seed=7".parse().unwrap();
        assert_eq!(spec.seed, Some(7));
        assert_eq!(spec.to_string().parse::<ConstructionSpec>().unwrap(), spec);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(ConstructionSpec::from_json(&json).unwrap(), spec);
        assert!("nope:n=3".parse::<ConstructionSpec>().is_err());
        assert!("path_power:n".parse::<ConstructionSpec>().is_err());
        assert!(matches!(
            "path_power:n=4"
                .parse::<ConstructionSpec>()
                .unwrap()
                .generate(),
            Err(ConstructionError::MissingParam { .. })
        ));
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_gnp(15, 0.4, 99).unwrap();
        let b = random_gnp(15, 0.4, 99).unwrap();
        let c = random_gnp(15, 0.4, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(random_gnp(6, 1.0, 3).unwrap(), complete(6));
        assert_eq!(random_gnp(6, 0.0, 3).unwrap(), Graph::empty(6));
    }

    #[test]
    fn petersen_shape() {
        let p = petersen();
        assert_eq!((p.n(), p.edge_count()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn lower_bound_examples() {
        let r = lower_bound_constant(2).unwrap();
        assert_eq!((r.t, r.clique_count.clone()), (4, BigUint::from(9u32)));
        assert!((r.exponent - 2.0 * 3f64.log2() / 4.0).abs() < 1e-12);
        assert!((r.exponent - 0.792).abs() < 1e-3);
        let r = lower_bound_constant(4).unwrap();
        assert_eq!((r.t, r.clique_count.clone()), (7, BigUint::from(81u32)));
        assert!((r.exponent - 0.906).abs() < 1e-3);
        assert!((r.limit - 1.0566).abs() < 1e-4);
    }
}
