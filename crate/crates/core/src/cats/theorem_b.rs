//! The eight equivalent characterizations of an e.m.t. space, each computed
//! by its own route.
//!
//! Notation: `d̃` is the recovered distance, LIP the bounded continuous
//! 1-Lipschitz functions. On a finite space LIP is exactly the set of
//! functions that are 1-Lipschitz for `d̃`, and for `C ⊆ X` the largest value
//! at `x̄` of an `f ∈ LIP` vanishing on `C` is `d̃(x̄, C)`.

use std::sync::Arc;

use serde::Serialize;

use crate::config::Config;
use crate::error::{EmtError, Result};
use crate::extmetric::ExtPseudoMetric;
use crate::finmap::FinMap;
use crate::fintop::{partition_topology, FiniteTopology};
use crate::functors::{emt_fication, gamma_bar, metric_topology_attach};
use crate::partition::Partition;
use crate::spaces::{enumerate_homs, is_embedding_map, is_emt, is_iso_map, validate_morphism, zero_classes, HomKind, Space};
use crate::value::ExtValue;

use super::verify::probe_pool;
use super::CategoryTag;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremB {
    pub conditions: [bool; 8],
    pub all_equal: bool,
}

/// Computes conditions i–viii.
///
/// Requires an extended metric and, unless `relaxed`, a Hausdorff topology.
pub fn theorem_b_check(s: &Arc<Space>, relaxed: bool, config: &Config) -> Result<TheoremB> {
    if !s.metric().is_extended_metric() {
        return Err(EmtError::Domain("the characterizations need an extended metric".into()));
    }
    if !relaxed && !s.topology().is_hausdorff() {
        return Err(EmtError::Domain("the characterizations need a Hausdorff topology".into()));
    }
    let subsets = crate::config::saturating_pow(2, s.len());
    if subsets > config.caps.opens as u128 {
        return Err(EmtError::CapExceeded { what: "subsets", needed: subsets, cap: config.caps.opens as u128 });
    }
    let conditions = [
        is_emt(s)?,
        cond_ii(s, config)?,
        cond_iii(s, config)?,
        cond_iv(s, config)?,
        cond_v(s),
        cond_vi(s)?,
        cond_vii(s)?,
        cond_viii(s)?,
    ];
    let all_equal = conditions.iter().all(|&c| c == conditions[0]);
    Ok(TheoremB { conditions, all_equal })
}

/// Every map `φ: Y → X` with `f∘φ ∈ LIP(Y)` for all `f ∈ LIP(X)` is continuous-short.
///
/// The hypothesis reads `d̃_X(φa, φb) ≤ d̃_Y(a, b)`. Probes: every space on at
/// most two points with all maps into `X`, plus the identity from
/// `(X, τ, d̃)` and from `(X, σ, ∞-discrete)` where `σ` is the partition
/// topology of the zero classes of `d̃`.
fn cond_ii(s: &Arc<Space>, config: &Config) -> Result<bool> {
    let rho = s.recovered();
    let holds = |y: &Space, phi: &FinMap| -> bool {
        let ry = y.recovered();
        let hypothesis = (0..y.len())
            .all(|a| (0..y.len()).all(|b| rho.get(phi.apply(a), phi.apply(b)) <= ry.get(a, b)));
        !hypothesis || validate_morphism(y, s, phi).is_ok()
    };
    for y in probe_pool(CategoryTag::Pre, 2) {
        for phi in enumerate_homs(HomKind::Any, &y, s, config)? {
            if !holds(&y, &phi) {
                return Ok(false);
            }
        }
    }
    let id = FinMap::identity(s.len());
    let recovery = Space::anonymous(s.topology().clone(), rho.clone())?;
    let sigma = partition_topology(&zero_classes(rho));
    let topology = Space::anonymous(sigma, ExtPseudoMetric::constant_off_diagonal(s.len(), &ExtValue::Infinite))?;
    Ok(holds(&recovery, &id) && holds(&topology, &id))
}

/// `d̃(x̄, C)` for the recovered distance, `∞` for empty `C`.
fn recovered_to_set(s: &Space, x: usize, c: &[usize]) -> ExtValue {
    s.recovered().dist_to_set(x, c)
}

/// Pairs of a closed set and a point outside it.
fn closed_point_pairs(s: &Space, config: &Config) -> Result<Vec<(Vec<usize>, usize)>> {
    let closed = s.topology().closed_sets(&config.caps)?;
    Ok(closed
        .into_iter()
        .flat_map(|c| {
            let outside: Vec<usize> = (0..s.len()).filter(|x| !c.contains(x)).collect();
            outside.into_iter().map(move |x| (c.clone(), x))
        })
        .collect())
}

fn separates(s: &Space, config: &Config) -> Result<bool> {
    Ok(closed_point_pairs(s, config)?
        .iter()
        .all(|(c, x)| !recovered_to_set(s, *x, c).is_zero()))
}

/// Separation, and every LIP function on every subset extends: the
/// recovered distance of each subspace equals the ambient one restricted.
fn cond_iii(s: &Arc<Space>, config: &Config) -> Result<bool> {
    if !separates(s, config)? {
        return Ok(false);
    }
    let n = s.len();
    for mask in 0u64..(1 << n) {
        let k: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub = s.subspace(&k)?;
        if *sub.recovered() != s.recovered().restrict(&k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Separation, with every value `λ ≤ d(x̄, C)` attainable: `d̃(x̄, C) ≥ d(x̄, C)`.
fn cond_iv(s: &Arc<Space>, config: &Config) -> Result<bool> {
    Ok(separates(s, config)?
        && closed_point_pairs(s, config)?
            .iter()
            .all(|(c, x)| recovered_to_set(s, *x, c) >= s.metric().dist_to_set(*x, c)))
}

/// `Λ = {|h(·) - h(·)| : h = min(d̃(·, y), c)}` over points `y` and levels `c`.
///
/// `sup Λ(a, b) = max_y |d̃(a, y) - d̃(b, y)|` (with `|∞ - ∞| = 0`), and the
/// initial topology of `{δ(·, x)}` is the partition topology of "equal rows
/// of `d̃`". Checks both against `d` and `τ`.
fn cond_v(s: &Arc<Space>) -> bool {
    let rho = s.recovered();
    let n = s.len();
    let gap = |a: usize, b: usize, y: usize| -> ExtValue {
        rho.get(a, y).abs_diff(rho.get(b, y)).unwrap_or_else(ExtValue::zero)
    };
    let sup_matches = (0..n).all(|a| {
        (0..n).all(|b| {
            let sup = (0..n).map(|y| gap(a, b, y)).max().unwrap_or_else(ExtValue::zero);
            &sup == s.dist(a, b)
        })
    });
    let rows: Vec<Vec<&ExtValue>> = (0..n).map(|a| (0..n).map(|y| rho.get(a, y)).collect()).collect();
    let initial = partition_topology(&Partition::from_labels(&rows));
    sup_matches && &initial == s.topology()
}

/// The e.m.t.-fication unit is an isomorphism.
fn cond_vi(s: &Arc<Space>) -> Result<bool> {
    let r = emt_fication(s)?;
    Ok(is_iso_map(&r.unit.source, &r.unit.target, &r.unit.map))
}

/// `ῑ: X → γ̄X` is an embedding.
fn cond_vii(s: &Arc<Space>) -> Result<bool> {
    let r = gamma_bar(s)?;
    Ok(is_embedding_map(&r.unit.source, &r.unit.target, &r.unit.map))
}

/// Some embedding into a compact e.m.t. space exists.
///
/// A compact e.m.t. space here is a finite discrete space with an extended
/// metric, so an embedding exists iff `τ` is discrete and `d` a metric; the
/// candidate targets are `γ̄X` and `(X, discrete, d)`.
fn cond_viii(s: &Arc<Space>) -> Result<bool> {
    if cond_vii(s)? {
        return Ok(true);
    }
    if !s.metric().is_extended_metric() {
        return Ok(false);
    }
    let t = metric_topology_attach(s.metric())?;
    debug_assert_eq!(t.topology(), &FiniteTopology::discrete(s.len()));
    Ok(is_embedding_map(s, &t, &FinMap::identity(s.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmetric::tests::metric;
    use crate::gen::{all_small_emt_spaces, all_topologies, all_grid_metrics, standard_grid};

    #[test]
    fn discrete_all_true() {
        let cfg = Config::default();
        for s in all_small_emt_spaces(3, &standard_grid()) {
            let r = theorem_b_check(&s, false, &cfg).unwrap();
            assert_eq!(r.conditions, [true; 8], "{s:?}");
            assert!(r.all_equal);
        }
    }

    #[test]
    fn relaxed_sierpinski_all_false() {
        let cfg = Config::default();
        let s = Arc::new(Space::anonymous(FiniteTopology::sierpinski(), metric(&[&["0", "1"], &["1", "0"]])).unwrap());
        let r = theorem_b_check(&s, true, &cfg).unwrap();
        assert_eq!(r.conditions, [false; 8]);
        assert!(theorem_b_check(&s, false, &cfg).is_err());
    }

    #[test]
    fn relaxed_agrees_on_falsity() {
        let cfg = Config::default();
        let positive: Vec<ExtValue> = standard_grid().into_iter().filter(|v| !v.is_zero()).collect();
        for n in 0..=3 {
            for t in all_topologies(n).into_iter().filter(|t| !t.is_hausdorff()) {
                for m in all_grid_metrics(n, &positive) {
                    let s = Arc::new(Space::anonymous(t.clone(), m).unwrap());
                    let c = theorem_b_check(&s, true, &cfg).unwrap().conditions;
                    assert_eq!([c[0], c[5], c[6], c[7]], [false; 4], "{s:?}");
                }
            }
        }
    }

    #[test]
    fn needs_metric() {
        let s = Arc::new(Space::anonymous(FiniteTopology::discrete(2), ExtPseudoMetric::zero(2)).unwrap());
        assert!(theorem_b_check(&s, false, &Config::default()).is_err());
    }
}
