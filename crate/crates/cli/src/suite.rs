//! Seeded property checks aggregated into one report.

use std::sync::Arc;

use emtkit::cats::{
    check_adjunction, colimit, cross_check_formulas, default_probes, diagram_corpus, limit, random_adjunction_inputs,
    standard_adjunctions, theorem_b_check, verify_universal, CategoryTag, Verdict,
};
use emtkit::exec;
use emtkit::functors::{compactify, emt_fication, gamma_bar, geodesify, metric_completion};
use emtkit::gen::{rng, small_emt, small_space};
use emtkit::spaces::{
    has_dense_image, is_embedding_map, is_emt, is_iso_map, is_lsc, lip_sup_oracle, recovery_witness, witness_attains,
};
use emtkit::{Config, EmtError, ExtPseudoMetric, ExtValue, Space};
use serde_json::{json, Map, Value};

use crate::{EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS};

/// Outcome of one check on one instance.
enum Case {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl From<Result<Verdict, EmtError>> for Case {
    fn from(r: Result<Verdict, EmtError>) -> Self {
        match Verdict::from_result(r) {
            Ok(Verdict::Pass { .. }) => Case::Pass,
            Ok(Verdict::Fail { reason, .. }) => Case::Fail(reason),
            Ok(Verdict::Inconclusive { reason }) => Case::Inconclusive(reason),
            Err(e) => Case::Fail(e.to_string()),
        }
    }
}

fn check(ok: Result<bool, EmtError>, what: impl FnOnce() -> String) -> Case {
    match ok {
        Ok(true) => Case::Pass,
        Ok(false) => Case::Fail(what()),
        Err(e) if e.is_cap_exceeded() => Case::Inconclusive(e.to_string()),
        Err(e) => Case::Fail(e.to_string()),
    }
}

fn tally(cases: Vec<Case>) -> Value {
    let (mut pass, mut fail, mut inconclusive) = (0, 0, 0);
    let mut first: Option<(usize, String)> = None;
    for (i, c) in cases.into_iter().enumerate() {
        match c {
            Case::Pass => pass += 1,
            Case::Fail(r) => {
                fail += 1;
                first.get_or_insert((i, r));
            }
            Case::Inconclusive(r) => {
                inconclusive += 1;
                first.get_or_insert((i, r));
            }
        }
    }
    let mut v = json!({ "pass": pass, "fail": fail, "inconclusive": inconclusive });
    if let Some((i, r)) = first {
        v["first_problem"] = json!({ "index": i, "reason": r });
    }
    v
}

fn spaces(seed: u64, count: usize) -> Vec<Arc<Space>> {
    let mut r = rng(seed);
    (0..count).map(|i| Arc::new(small_space(&mut r, i % 6))).collect()
}

fn emts(seed: u64, count: usize) -> Vec<Arc<Space>> {
    let mut r = rng(seed);
    (0..count).map(|i| Arc::new(small_emt(&mut r, i % 7))).collect()
}

fn recovered_oracle(s: &Space, config: &Config) -> Case {
    let rho = s.recovered();
    for x in 0..s.len() {
        for y in 0..s.len() {
            match lip_sup_oracle(s, x, y, &config.caps) {
                Ok(v) if &v == rho.get(x, y) => {}
                Ok(v) => return Case::Fail(format!("({x},{y}): recovered {} oracle {v}", rho.get(x, y))),
                Err(e) => return check(Err(e), String::new),
            }
        }
    }
    Case::Pass
}

fn emt_equivalence(s: &Space) -> Case {
    let metric = s.metric().is_extended_metric();
    let a = is_emt(s);
    let b = s.topology().is_hausdorff() && metric;
    let c = is_lsc(s) && metric;
    check(a.map(|a| a == b && b == c), || format!("is_emt / hausdorff / lsc disagree on {s:?}"))
}

fn compactification(s: &Arc<Space>) -> Case {
    let ok = compactify(s).map(|g| {
        let u = &g.unit;
        is_iso_map(&u.source, &u.target, &u.map) && has_dense_image(u) && is_embedding_map(&u.source, &u.target, &u.map)
    });
    check(ok, || "γ unit is not an isomorphism".into())
}

fn gamma_bar_factors(s: &Arc<Space>) -> Case {
    let ok = (|| {
        let gb = gamma_bar(s)?;
        let e = emt_fication(s)?;
        let g = compactify(&e.object)?;
        Ok(*gb.object == *g.object && gb.unit.map == e.unit.map.then(&g.unit.map)?)
    })();
    check(ok, || "γ̄ ≠ γ∘emt".into())
}

fn theorem_b(s: &Arc<Space>, config: &Config) -> Case {
    if !s.metric().is_extended_metric() {
        return Case::Pass;
    }
    let hausdorff = s.topology().is_hausdorff();
    let ok = theorem_b_check(s, !hausdorff, config).map(|r| {
        let c = r.conditions;
        if hausdorff {
            r.all_equal
        } else {
            [c[5], c[6], c[7]].iter().all(|&b| b == c[0])
        }
    });
    check(ok, || "conditions disagree".into())
}

fn degenerate(s: &Arc<Space>) -> Case {
    let ok = (|| {
        let geo_ok = s.len() < 2
            || *geodesify(s)?.object.metric() == ExtPseudoMetric::constant_off_diagonal(s.len(), &ExtValue::Infinite);
        let mc = metric_completion(s)?.unit;
        Ok(geo_ok && is_iso_map(&mc.source, &mc.target, &mc.map))
    })();
    check(ok, || "degenerate functor mismatch".into())
}

fn witness(s: &Space) -> Case {
    let rho = s.recovered();
    for x in 0..s.len() {
        for y in 0..s.len() {
            if rho.get(x, y).is_finite() {
                let attained = recovery_witness(s, x, y).is_some_and(|f| witness_attains(s, &f, x, y, rho.get(x, y)));
                if !attained {
                    return Case::Fail(format!("witness misses at ({x},{y})"));
                }
            }
        }
    }
    Case::Pass
}

fn diagrams(tag: CategoryTag, seed: u64, count: usize, config: &Config) -> Vec<emtkit::cats::Diagram> {
    diagram_corpus(tag, seed, count, config).expect("generated diagrams are valid")
}

type Job<'a> = (String, Box<dyn Fn() -> Vec<Case> + Send + Sync + 'a>);

/// Every check over `count` seeded instances, keyed by check name in sorted order.
pub fn run_suite(seed: u64, count: usize, config: &Config) -> Value {
    let mut jobs: Vec<Job> = vec![
        ("recovered_oracle".into(), Box::new(move || spaces(seed, count).iter().map(|s| recovered_oracle(s, config)).collect())),
        ("emt_equivalence".into(), Box::new(move || spaces(seed + 1, count).iter().map(|s| emt_equivalence(s)).collect())),
        ("compactification".into(), Box::new(move || emts(seed + 2, count).iter().map(compactification).collect())),
        ("gamma_bar".into(), Box::new(move || spaces(seed + 3, count).iter().map(gamma_bar_factors).collect())),
        ("theorem_b".into(), Box::new(move || spaces(seed + 4, count).iter().map(|s| theorem_b(s, config)).collect())),
        ("degenerate_functors".into(), Box::new(move || emts(seed + 5, count).iter().map(degenerate).collect())),
        ("witness".into(), Box::new(move || emts(seed + 6, count).iter().map(|s| witness(s)).collect())),
    ];
    for tag in CategoryTag::ALL {
        let key = tag.to_string().to_lowercase();
        jobs.push((
            format!("limit_{key}"),
            Box::new(move || {
                let probes = default_probes(tag);
                diagrams(tag, seed, count, config)
                    .iter()
                    .map(|d| Case::from(limit(d, config).and_then(|c| verify_universal(d, &c, &probes, config))))
                    .collect()
            }),
        ));
        jobs.push((
            format!("colimit_{key}"),
            Box::new(move || {
                let probes = default_probes(tag);
                diagrams(tag, seed, count, config)
                    .iter()
                    .map(|d| Case::from(colimit(d, config).and_then(|c| verify_universal(d, &c, &probes, config))))
                    .collect()
            }),
        ));
        jobs.push((
            format!("crosscheck_{key}"),
            Box::new(move || {
                diagrams(tag, seed, count, config)
                    .iter()
                    .map(|d| check(cross_check_formulas(d, config).map(|r| r.all()), || "routes disagree".into()))
                    .collect()
            }),
        ));
    }
    for adj in standard_adjunctions() {
        jobs.push((
            format!("adjunction_{adj}"),
            Box::new(move || {
                let mut r = rng(seed + 7);
                (0..count)
                    .map(|_| {
                        let (left, right) = random_adjunction_inputs(&mut r, &adj);
                        Case::from(check_adjunction(&adj, &left, &right, config))
                    })
                    .collect()
            }),
        ));
    }
    jobs.sort_by(|a, b| a.0.cmp(&b.0));
    let results = exec::map_slice(config.exec, &jobs, |(_, job)| tally(job()));

    let mut checks = Map::new();
    let (mut pass, mut fail, mut inconclusive) = (0u64, 0u64, 0u64);
    for ((name, _), t) in jobs.iter().zip(results) {
        pass += t["pass"].as_u64().unwrap_or(0);
        fail += t["fail"].as_u64().unwrap_or(0);
        inconclusive += t["inconclusive"].as_u64().unwrap_or(0);
        checks.insert(name.clone(), t);
    }
    json!({
        "seed": seed,
        "count": count,
        "checks": checks,
        "totals": { "pass": pass, "fail": fail, "inconclusive": inconclusive },
    })
}

pub fn exit_code(report: &Value) -> i32 {
    let totals = &report["totals"];
    if totals["fail"].as_u64() != Some(0) {
        EXIT_FAIL
    } else if totals["inconclusive"].as_u64() != Some(0) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}
