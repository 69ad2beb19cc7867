//! `(β, N)`-local sparsity: every vertex set `X` with `|X| ≥ N` has a vertex
//! of degree at most `β|X|` in `G[X]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::numeric::{ceil_rational, rational_string};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 22;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SparsityError {
    #[error("exhaustive sparsity check needs n <= {limit}, got n = {n}")]
    Oversized { n: usize, limit: usize },
    #[error("invalid sparsity parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityParams {
    pub beta: BigRational,
    pub n_threshold: u64,
}

impl SparsityParams {
    pub fn new(beta: BigRational, n_threshold: u64) -> Result<Self, SparsityError> {
        if n_threshold == 0 {
            return Err(SparsityError::InvalidParams("N must be at least 1".into()));
        }
        if beta > BigRational::one() {
            return Err(SparsityError::InvalidParams(format!(
                "beta = {} exceeds 1",
                rational_string(&beta)
            )));
        }
        Ok(SparsityParams { beta, n_threshold })
    }

    /// `⌊β s⌋` for `s = 0..=n`: a set of size `s` violates the condition iff
    /// its minimum degree exceeds this.
    fn floors(&self, n: usize) -> Vec<i64> {
        (0..=n)
            .map(|s| {
                (&self.beta * BigRational::from_integer(BigInt::from(s)))
                    .floor()
                    .to_integer()
                    .to_i64()
                    .expect("thresholds are bounded by n")
            })
            .collect()
    }

    /// True when `x` witnesses a violation: `|X| ≥ N` and every vertex has
    /// degree above `β|X|` in `G[X]`.
    pub fn is_violated_by(&self, g: &Graph, x: &VertexSet) -> bool {
        if (x.len() as u64) < self.n_threshold || x.is_empty() {
            return false;
        }
        let floor = self.floors(x.len())[x.len()];
        x.iter().all(|v| g.degree_within(v, x) as i64 > floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sparse,
    Violated,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsityMode {
    Exhaustive,
    Peeling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityCertificate {
    pub verdict: Verdict,
    pub witness: Option<VertexSet>,
    pub method: SparsityMode,
    pub params: SparsityParams,
}

impl SparsityCertificate {
    /// Re-checks the witness (if any) against `g`.
    pub fn recheck(&self, g: &Graph) -> bool {
        match (&self.verdict, &self.witness) {
            (Verdict::Violated, Some(x)) => self.params.is_violated_by(g, x),
            (Verdict::Violated, None) => false,
            (_, witness) => witness.is_none(),
        }
    }
}

impl Serialize for SparsityCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            verdict: Verdict,
            method: SparsityMode,
            witness: Option<&'a VertexSet>,
            beta: String,
            #[serde(rename = "N")]
            n: u64,
        }
        Wire {
            verdict: self.verdict,
            method: self.method,
            witness: self.witness.as_ref(),
            beta: rational_string(&self.params.beta),
            n: self.params.n_threshold,
        }
        .serialize(serializer)
    }
}

pub fn check_local_sparsity(
    g: &Graph,
    p: &SparsityParams,
    mode: SparsityMode,
    exhaustive_limit: usize,
) -> Result<SparsityCertificate, SparsityError> {
    let witness = match mode {
        SparsityMode::Exhaustive => {
            if g.n() > exhaustive_limit || g.n() > 63 {
                return Err(SparsityError::Oversized {
                    n: g.n(),
                    limit: exhaustive_limit.min(63),
                });
            }
            exhaustive_witness(g, p)
        }
        SparsityMode::Peeling => peeling_witness(g, p),
    };
    let verdict = match (&witness, mode) {
        (Some(_), _) => Verdict::Violated,
        (None, SparsityMode::Exhaustive) => Verdict::Sparse,
        (None, SparsityMode::Peeling) => Verdict::Unknown,
    };
    Ok(SparsityCertificate {
        verdict,
        witness,
        method: mode,
        params: p.clone(),
    })
}

/// Smallest violating subset in the numeric order of its bitmask.
fn exhaustive_witness(g: &Graph, p: &SparsityParams) -> Option<VertexSet> {
    let n = g.n();
    let adj: Vec<u64> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let floors = p.floors(n);
    let min_size = p.n_threshold;
    let violates = |x: u64| {
        let size = x.count_ones();
        if (size as u64) < min_size {
            return false;
        }
        let floor = floors[size as usize];
        let mut rest = x;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if (adj[v as usize] & x).count_ones() as i64 <= floor {
                return false;
            }
        }
        true
    };
    (1u64..1 << n)
        .into_par_iter()
        .find_first(|&x| violates(x))
        .map(|x| (0..n as u32).filter(|&v| x >> v & 1 == 1).collect())
}

/// Walks the min-degree peeling of `V`; every intermediate set's minimum
/// degree is the degree of the vertex removed next.
fn peeling_witness(g: &Graph, p: &SparsityParams) -> Option<VertexSet> {
    let order = g
        .peel(&VertexSet::range(g.n()))
        .expect("full vertex set is valid");
    let floors = p.floors(g.n());
    let n = order.len();
    let first = order.iter().enumerate().position(|(i, &(_, d))| {
        let size = n - i;
        size as u64 >= p.n_threshold && d as i64 > floors[size]
    })?;
    Some(order[first..].iter().map(|&(v, _)| v).collect())
}

/// `(1 − m/(2t²), ⌈20t/11⌉)`.
pub fn lemma_sparsity_params(m: u64, t: u64) -> Result<SparsityParams, SparsityError> {
    if t == 0 {
        return Err(SparsityError::InvalidParams("t must be at least 1".into()));
    }
    let t = BigInt::from(t);
    let beta = BigRational::one() - BigRational::new(BigInt::from(m), 2 * &t * &t);
    let n = ceil_rational(&BigRational::new(20 * t, BigInt::from(11)));
    Ok(SparsityParams {
        beta,
        n_threshold: n.to_u64().expect("N fits in u64"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedSparsity {
    /// `β' = 1 − βm/t²` and `N = ⌈t/(1 − 2α − β/2)⌉`.
    pub params: SparsityParams,
    /// `t/(1 − 2α − β/2)` before rounding.
    pub n_exact: BigRational,
    /// `max{t/(1 − 2α − β/2), (α/β)t²}`.
    pub size_bound: BigRational,
}

pub fn generalized_sparsity_params(
    m: u64,
    t: u64,
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<GeneralizedSparsity, SparsityError> {
    if t == 0 {
        return Err(SparsityError::InvalidParams("t must be at least 1".into()));
    }
    if !beta.is_positive() {
        return Err(SparsityError::InvalidParams("beta must be positive".into()));
    }
    if alpha.is_negative() {
        return Err(SparsityError::InvalidParams(
            "alpha must be non-negative".into(),
        ));
    }
    let slack = window_slack(alpha, beta);
    if !slack.is_positive() {
        return Err(SparsityError::InvalidParams(
            "1 - 2*alpha - beta/2 must be positive".into(),
        ));
    }
    let t = BigRational::from_integer(BigInt::from(t));
    let n_exact = &t / &slack;
    let quadratic = alpha / beta * &t * &t;
    let size_bound = if quadratic > n_exact {
        quadratic
    } else {
        n_exact.clone()
    };
    let sparse_beta =
        BigRational::one() - beta * BigRational::from_integer(BigInt::from(m)) / (&t * &t);
    Ok(GeneralizedSparsity {
        params: SparsityParams {
            beta: sparse_beta,
            n_threshold: ceil_rational(&n_exact).to_u64().expect("N fits in u64"),
        },
        n_exact,
        size_bound,
    })
}

/// `1 − 2α − β/2`.
pub fn window_slack(alpha: &BigRational, beta: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    BigRational::one() - &two * alpha - beta / &two
}
