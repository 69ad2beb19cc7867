//! Acceptance suite: one line per criterion with its time budget.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clique_census::audit::{
    audit, bound_degenerate, check_binom_sum_inequality, refined_exponents, AuditConfig,
};
use clique_census::constructions::{
    complete, complete_minus_matching, complete_multipartite_222, lower_bound_constant, path_power,
    petersen, subdivided_complete,
};
use clique_census::numeric::rational;
use clique_census::topo::{extract_subdivision_dense, has_minor, has_subdivision, verify_witness};
use clique_census::tree::subtree_bound_check;
use clique_census::{build_tree, census, count_cliques, NodeId, RootedSubtree};

use common::{brute_force_census, random_samples, Sample};

/// Oracle limit large enough for every random sample.
const SAMPLE_LIMIT: usize = 18;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Verdict {
    for (t, n) in [(4u32, 10u32), (4, 30), (5, 20), (6, 12), (7, 15)] {
        let got = count_cliques(&path_power(n, t - 2));
        let expected = (BigUint::from(1u32) << (t - 2)) * (n - t + 3);
        ensure(got == expected, || {
            format!("t={t}, n={n}: {got} != {expected}")
        })?;
    }
    Ok("5 path powers exact".into())
}

fn criterion_2() -> Verdict {
    for k in 1..=6u32 {
        let got = count_cliques(&complete_multipartite_222(k).unwrap());
        let expected = BigUint::from(3u32).pow(k);
        ensure(got == expected, || format!("k={k}: {got} != {expected}"))?;
    }
    Ok("k = 1..6 exact".into())
}

fn criterion_3(samples: &[Sample]) -> Verdict {
    for s in samples {
        let expected: Vec<BigUint> = brute_force_census(&s.graph)
            .into_iter()
            .map(BigUint::from)
            .collect();
        let got = census(&s.graph);
        ensure(got.counts == expected, || {
            format!("graph {} (n={}, p={}): census differs", s.index, s.n, s.p)
        })?;
        let total: BigUint = expected.iter().sum();
        ensure(count_cliques(&s.graph) == total, || {
            format!("graph {}: total differs", s.index)
        })?;
    }
    Ok(format!("{} graphs match the subset oracle", samples.len()))
}

fn criterion_4(samples: &[Sample]) -> Verdict {
    let mut sampled = 0usize;
    for s in samples {
        let g = &s.graph;
        let tree = build_tree(g, 1 << 22).map_err(|e| e.to_string())?;
        let c = tree.census();
        ensure(c.total == BigUint::from(tree.len()), || {
            format!("graph {}: census total", s.index)
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        for _ in 0..50 {
            let a = NodeId(rng.random_range(0..tree.len()));
            let label = tree.node(a).unwrap().label.clone();
            let (h, map) = g.induced_subgraph(&label).unwrap();
            let local = build_tree(&h, 1 << 22).unwrap();
            ensure(
                tree.subtree_at(a).unwrap().matches_under(&local, &map),
                || format!("graph {}: subtree at node {} differs", s.index, a.0),
            )?;
            sampled += 1;
        }
        for (id, node) in tree.nodes() {
            if let Some(p) = node.parent {
                let parent = tree.node(p).unwrap();
                let nested = node.label.is_subset(&parent.label)
                    && node.label.len() < parent.label.len()
                    && node
                        .chosen_vertex
                        .is_some_and(|v| parent.label.contains(v) && !node.label.contains(v));
                ensure(nested, || {
                    format!("graph {}: node {} not strictly nested", s.index, id.0)
                })?;
            }
        }
        let t = c.clique_number() + 1;
        for _ in 0..20 {
            let keep: f64 = rng.random_range(0.1..0.95);
            let sub = RootedSubtree::grow(&tree, |_, _| rng.random_bool(keep));
            let bound = subtree_bound_check(&tree, t, &sub).map_err(|e| e.to_string())?;
            ensure(bound.holds, || {
                format!("graph {}: subtree bound fails: {bound:?}", s.index)
            })?;
        }
    }
    Ok(format!(
        "{sampled} subtrees matched, nesting and bounds hold"
    ))
}

fn criterion_5(samples: &[Sample]) -> Verdict {
    ensure(
        has_subdivision(&complete(5), 5, 16).unwrap().is_some(),
        || "K5".into(),
    )?;
    ensure(
        has_subdivision(&petersen(), 5, 16).unwrap().is_none(),
        || "Petersen".into(),
    )?;
    ensure(
        has_subdivision(&subdivided_complete(4), 4, 16)
            .unwrap()
            .is_some(),
        || "subdivided K4".into(),
    )?;
    ensure(
        has_subdivision(&complete_multipartite_222(4).unwrap(), 7, 16)
            .unwrap()
            .is_none(),
        || "K_{2,2,2,2}".into(),
    )?;
    ensure(has_minor(&petersen(), 5, 16).unwrap().is_some(), || {
        "Petersen minor".into()
    })?;
    let mut minor_free = 0;
    for s in samples {
        for t in [4, 5] {
            let minor = has_minor(&s.graph, t, SAMPLE_LIMIT).map_err(|e| e.to_string())?;
            if minor.is_none() {
                minor_free += 1;
                let sub = has_subdivision(&s.graph, t, SAMPLE_LIMIT).map_err(|e| e.to_string())?;
                ensure(sub.is_none(), || {
                    format!("graph {} t={t}: minor-free with a subdivision", s.index)
                })?;
            }
        }
    }
    Ok(format!(
        "reference graphs correct; {minor_free} minor-free cases are subdivision-free"
    ))
}

fn criterion_6() -> Verdict {
    let bound = rational(80, 11);
    for (name, g) in [
        ("K10", complete(10)),
        ("K10 - PM", complete_minus_matching(10).unwrap()),
    ] {
        ensure(rational(10, 1) > bound, || "size bound".into())?;
        let w = extract_subdivision_dense(&g, 4).map_err(|e| format!("{name}: {e}"))?;
        ensure(verify_witness(&g, &w, 4), || {
            format!("{name}: witness rejected")
        })?;
    }
    Ok("both witnesses verify".into())
}

fn criterion_7() -> Verdict {
    let mut n = 0;
    for m in 1..=60u64 {
        for k in 1..=m {
            let c =
                check_binom_sum_inequality(m, &rational(k as i64, 1)).map_err(|e| e.to_string())?;
            ensure(c.holds, || format!("m={m}, k={k}: {} > {}", c.lhs, c.rhs))?;
            n += 1;
        }
    }
    Ok(format!("{n} (m, k) pairs"))
}

fn criterion_8(samples: &[Sample]) -> Verdict {
    for s in samples {
        let d = s.graph.degeneracy().d as u64;
        let bound = bound_degenerate(d, s.graph.n() as u64).map_err(|e| e.to_string())?;
        ensure(count_cliques(&s.graph) <= bound, || {
            format!("graph {}", s.index)
        })?;
    }
    let g = path_power(20, 3);
    let d = g.degeneracy().d as u64;
    ensure(d == 3, || format!("degeneracy {d}"))?;
    let bound = bound_degenerate(d, 20).unwrap();
    ensure(count_cliques(&g) == bound, || {
        "path_power(20, 3) not tight".into()
    })?;
    Ok(format!(
        "{} graphs bounded; equality at path_power(20, 3)",
        samples.len()
    ))
}

fn criterion_9(samples: &[Sample]) -> Verdict {
    let mut cfg4 = AuditConfig::new(4);
    cfg4.oracle_limit = SAMPLE_LIMIT;
    let mut cfg5 = AuditConfig::new(5);
    cfg5.oracle_limit = SAMPLE_LIMIT;
    let mut checks = 0;
    let fixed = [
        ("path_power(30, 2)", path_power(30, 2), &cfg4),
        ("K_{2,2,2}", complete_multipartite_222(3).unwrap(), &cfg4),
    ];
    let mut audited = 0;
    let chosen = samples
        .iter()
        .filter(|s| matches!(has_subdivision(&s.graph, 5, SAMPLE_LIMIT), Ok(None)))
        .take(20)
        .map(|s| (format!("sample {}", s.index), s.graph.clone(), &cfg5));
    for (name, g, cfg) in fixed
        .into_iter()
        .map(|(n, g, c)| (n.to_string(), g, c))
        .chain(chosen)
    {
        let report = audit(&g, cfg).map_err(|e| e.to_string())?;
        let failed: Vec<_> = report.failed().map(|c| c.name.clone()).collect();
        ensure(failed.is_empty(), || format!("{name}: failed {failed:?}"))?;
        checks += report.checks.len();
        audited += 1;
    }
    ensure(audited == 22, || format!("only {audited} graphs audited"))?;
    Ok(format!("{audited} graphs, {checks} checks hold"))
}

fn criterion_10() -> Verdict {
    let a =
        refined_exponents(&rational(1, 100), &rational(65, 100), 4).map_err(|e| e.to_string())?;
    ensure(a.asymptotic_exponent < 4.0, || {
        format!("asymptotic {}", a.asymptotic_exponent)
    })?;
    let b =
        refined_exponents(&rational(35, 100), &rational(40, 100), 4).map_err(|e| e.to_string())?;
    ensure(b.total_exponent < 20.0, || {
        format!("total {}", b.total_exponent)
    })?;
    for t in [4u32, 8, 11, 20] {
        let c =
            refined_exponents(&rational(1, 10), &rational(1, 2), t).map_err(|e| e.to_string())?;
        let expected = rational(20 * t as i64, 11).max(rational((t * t) as i64, 5));
        ensure(
            c.window_bound == clique_census::numeric::rational_string(&expected),
            || format!("t={t}: window bound {}", c.window_bound),
        )?;
        ensure(
            c.dense_exponent_limit <= 5.0 && c.dense_exponent <= 5.0,
            || format!("t={t}: dense exponent {}", c.dense_exponent_limit),
        )?;
    }
    Ok(format!(
        "c = {:.4} at (0.01, 0.65); C = {:.4} at (0.35, 0.4)",
        a.asymptotic_exponent, b.total_exponent
    ))
}

fn criterion_11() -> Verdict {
    let limit = 2.0 / 3.0 * 3f64.log2();
    let reports: Vec<_> = (1..=200)
        .map(|k| lower_bound_constant(k).unwrap())
        .collect();
    for r in &reports {
        ensure(r.exponent <= limit + 1e-9, || {
            format!("k={}: {} above the limit", r.k, r.exponent)
        })?;
        ensure((r.limit - limit).abs() < 1e-9, || "limit value".into())?;
        ensure(r.clique_count == BigUint::from(3u32).pow(r.k), || {
            format!("k={}: count", r.k)
        })?;
    }
    // even and odd k approach the limit separately
    for parity in [0, 1] {
        let seq: Vec<f64> = reports
            .iter()
            .filter(|r| r.k % 2 == parity)
            .map(|r| r.exponent)
            .collect();
        ensure(seq.windows(2).all(|w| w[0] < w[1]), || {
            format!("parity {parity} not increasing")
        })?;
    }
    ensure(limit - reports[199].exponent < 1e-2, || {
        "does not approach the limit".into()
    })?;
    let log2_3 = 3f64.log2();
    for (k, t) in [(2u32, 4u32), (4, 7), (8, 13)] {
        let r = &reports[k as usize - 1];
        ensure(r.t == t, || format!("k={k}: t = {}", r.t))?;
        let expected = k as f64 / t as f64 * log2_3;
        ensure((r.exponent - expected).abs() < 1e-9, || {
            format!("k={k}: {} vs {expected}", r.exponent)
        })?;
    }
    Ok(format!("k = 1..200 below {limit:.9}"))
}

fn main() {
    let start = Instant::now();
    let samples = random_samples();
    println!(
        "generated {} random graphs in {:.2?}",
        samples.len(),
        start.elapsed()
    );

    let criteria: Vec<Criterion> = vec![
        ("construction exactness", 5, Box::new(criterion_1)),
        ("multipartite exactness", 1, Box::new(criterion_2)),
        ("oracle equivalence", 60, Box::new(|| criterion_3(&samples))),
        (
            "clique search tree structure",
            120,
            Box::new(|| criterion_4(&samples)),
        ),
        (
            "subdivision oracle sanity",
            120,
            Box::new(|| criterion_5(&samples)),
        ),
        ("dense subdivision extraction", 10, Box::new(criterion_6)),
        ("binomial chain", 5, Box::new(criterion_7)),
        ("degenerate bound", 10, Box::new(|| criterion_8(&samples))),
        (
            "full audit pipeline",
            120,
            Box::new(|| criterion_9(&samples)),
        ),
        ("refined constants", 1, Box::new(criterion_10)),
        ("lower-bound constant", 1, Box::new(criterion_11)),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let begin = Instant::now();
        let verdict = run();
        let elapsed = begin.elapsed();
        let budget = Duration::from_secs(*budget);
        let (ok, detail) = match verdict {
            Ok(detail) if elapsed <= budget => (true, detail),
            Ok(detail) => (false, format!("{detail}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {} [{}] {:.3?} / {:?}: {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            elapsed,
            budget,
            detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
