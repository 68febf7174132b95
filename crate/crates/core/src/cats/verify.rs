//! Probe-bounded verification of universal properties.

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::Config;
use crate::error::Result;
use crate::exec;
use crate::finmap::FinMap;
use crate::fintop::FiniteTopology;
use crate::gen::{all_grid_metrics, all_small_emt_spaces, all_topologies, standard_grid};
use crate::extmetric::ExtPseudoMetric;
use crate::spaces::{enumerate_homs, HomKind, Space};

use super::{CategoryTag, ConeCert, Diagram, Side, Verdict};

/// Every space on at most `max_points` points that is distinct as an object
/// of `tag`, with distances from `{0, 1/2, 1, 2, ∞}`.
///
/// Structure a tag ignores is fixed (discrete topology, zero or grid metric)
/// so that the pool holds no duplicates up to that tag.
pub fn probe_pool(tag: CategoryTag, max_points: usize) -> Vec<Arc<Space>> {
    let grid = standard_grid();
    let mut out = Vec::new();
    for n in 0..=max_points {
        let spaces: Vec<Space> = match tag {
            CategoryTag::Set => vec![Space::anonymous(FiniteTopology::discrete(n), ExtPseudoMetric::zero(n)).expect("sizes")],
            CategoryTag::Top => all_topologies(n)
                .into_iter()
                .map(|t| Space::anonymous(t, ExtPseudoMetric::zero(n)).expect("sizes"))
                .collect(),
            CategoryTag::ExtPMet => all_grid_metrics(n, &grid)
                .into_iter()
                .map(|m| Space::anonymous(FiniteTopology::discrete(n), m).expect("sizes"))
                .collect(),
            CategoryTag::Pre => {
                let metrics = all_grid_metrics(n, &grid);
                all_topologies(n)
                    .into_iter()
                    .flat_map(|t| metrics.iter().map(move |m| Space::anonymous(t.clone(), m.clone()).expect("sizes")))
                    .collect()
            }
            CategoryTag::Emt => {
                return all_small_emt_spaces(max_points, &grid);
            }
        };
        out.extend(spaces.into_iter().map(Arc::new));
    }
    out
}

/// The probe pool on at most two points.
pub fn default_probes(tag: CategoryTag) -> Vec<Arc<Space>> {
    probe_pool(tag, 2)
}

/// Checks that `cand` is a (co)cone over `d` through which every probe
/// (co)cone factors exactly once.
///
/// Sound but bounded: a pass means no counterexample exists among the given
/// probes. Exceeding an enumeration cap yields `Inconclusive`, never a pass.
pub fn verify_universal(d: &Diagram, cand: &ConeCert, probes: &[Arc<Space>], config: &Config) -> Result<Verdict> {
    d.validate()?;
    let kind = d.category.hom_kind();
    if cand.legs.len() != d.objects.len() {
        return Ok(Verdict::fail(format!("{} legs for {} objects", cand.legs.len(), d.objects.len()), vec![]));
    }
    for (i, leg) in cand.legs.iter().enumerate() {
        let (src, dst) = match cand.side {
            Side::Cone => (&cand.apex, &d.objects[i]),
            Side::Cocone => (&d.objects[i], &cand.apex),
        };
        if *leg.source != **src || *leg.target != **dst || !kind.admits(src, dst, &leg.map) {
            return Ok(Verdict::fail(format!("leg {i} is not a morphism of {}", d.category), vec![leg.map.image().to_vec()]));
        }
    }
    if let Some(a) = cand.non_commuting_arrow(d) {
        return Ok(Verdict::fail(format!("legs do not commute with arrow {:?}", d.arrows[a].name), vec![]));
    }
    let per_probe = exec::map_slice(config.exec, probes, |p| check_probe(d, cand, p, kind, config));
    let mut checked = 0u64;
    for (idx, r) in per_probe.into_iter().enumerate() {
        match Verdict::from_result(r)? {
            Verdict::Pass { checked: c } => checked += c,
            Verdict::Fail { reason, witness } => {
                return Ok(Verdict::Fail { reason: format!("probe {idx}: {reason}"), witness });
            }
            inconclusive => return Ok(inconclusive),
        }
    }
    Ok(Verdict::Pass { checked })
}

/// All commuting leg families from (cone) or to (cocone) the probe.
fn commuting_families(d: &Diagram, probe: &Space, side: Side, kind: HomKind, config: &Config) -> Result<Vec<Vec<FinMap>>> {
    let homs: Vec<Vec<FinMap>> = d
        .objects
        .iter()
        .map(|o| match side {
            Side::Cone => enumerate_homs(kind, probe, o, config),
            Side::Cocone => enumerate_homs(kind, o, probe, config),
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut current: Vec<FinMap> = Vec::with_capacity(homs.len());
    extend(d, side, &homs, &mut current, &mut out);
    Ok(out)
}

fn commutes(side: Side, arrow: &FinMap, at_src: &FinMap, at_dst: &FinMap) -> bool {
    match side {
        Side::Cone => at_src.then(arrow).ok().as_ref() == Some(at_dst),
        Side::Cocone => arrow.then(at_dst).ok().as_ref() == Some(at_src),
    }
}

fn extend(d: &Diagram, side: Side, homs: &[Vec<FinMap>], current: &mut Vec<FinMap>, out: &mut Vec<Vec<FinMap>>) {
    let i = current.len();
    if i == homs.len() {
        out.push(current.clone());
        return;
    }
    for h in &homs[i] {
        current.push(h.clone());
        let ok = d
            .arrows
            .iter()
            .filter(|a| a.src.max(a.dst) == i)
            .all(|a| commutes(side, &a.map, &current[a.src], &current[a.dst]));
        if ok {
            extend(d, side, homs, current, out);
        }
        current.pop();
    }
}

fn check_probe(d: &Diagram, cand: &ConeCert, probe: &Arc<Space>, kind: HomKind, config: &Config) -> Result<Verdict> {
    let families = commuting_families(d, probe, cand.side, kind, config)?;
    let mediators = match cand.side {
        Side::Cone => enumerate_homs(kind, probe, &cand.apex, config)?,
        Side::Cocone => enumerate_homs(kind, &cand.apex, probe, config)?,
    };
    let mut induced: HashMap<Vec<FinMap>, Vec<&FinMap>> = HashMap::new();
    for u in &mediators {
        let family = cand
            .legs
            .iter()
            .map(|l| match cand.side {
                Side::Cone => u.then(&l.map),
                Side::Cocone => l.map.then(u),
            })
            .collect::<Result<Vec<_>>>()?;
        induced.entry(family).or_default().push(u);
    }
    for fam in &families {
        match induced.get(fam).map(Vec::as_slice) {
            None | Some([]) => {
                return Ok(Verdict::fail(
                    "existence: a probe family has no mediating morphism",
                    fam.iter().map(|m| m.image().to_vec()).collect(),
                ))
            }
            Some([_]) => {}
            Some([u, w, ..]) => {
                return Ok(Verdict::fail(
                    "uniqueness: two mediating morphisms",
                    vec![u.image().to_vec(), w.image().to_vec()],
                ))
            }
        }
    }
    Ok(Verdict::Pass { checked: families.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cats::{colimit, limit};
    use crate::extmetric::tests::metric;
    use crate::spaces::CSMorphism;

    fn emt2(d: &str) -> Arc<Space> {
        Arc::new(Space::anonymous(FiniteTopology::discrete(2), metric(&[&["0", d], &[d, "0"]])).unwrap())
    }

    #[test]
    fn pool_sizes() {
        assert_eq!(probe_pool(CategoryTag::Set, 2).len(), 3);
        assert_eq!(probe_pool(CategoryTag::Top, 2).len(), 1 + 1 + 4);
        assert_eq!(probe_pool(CategoryTag::ExtPMet, 2).len(), 1 + 1 + 5);
        assert_eq!(probe_pool(CategoryTag::Pre, 2).len(), 1 + 1 + 20);
        assert_eq!(probe_pool(CategoryTag::Emt, 2).len(), 1 + 1 + 4);
    }

    #[test]
    fn product_passes_on_three_point_probes() {
        let cfg = Config::default();
        let d = Diagram::discrete(CategoryTag::Emt, vec![emt2("1"), emt2("2")]).unwrap();
        let l = limit(&d, &cfg).unwrap();
        assert!(verify_universal(&d, &l, &probe_pool(CategoryTag::Emt, 3), &cfg).unwrap().is_pass());
    }

    #[test]
    fn fattened_apex_fails() {
        let cfg = Config::default();
        let d = Diagram::discrete(CategoryTag::Emt, vec![emt2("1"), emt2("2")]).unwrap();
        let l = limit(&d, &cfg).unwrap();
        // a fifth point with the same legs as point 0, at distance 2 from it
        let n = l.apex.len();
        let base = |x: usize| if x == n { 0 } else { x };
        let m = crate::extmetric::ExtPseudoMetric::from_fn(n + 1, |x, y| match (x == n, y == n) {
            (true, true) | (false, false) => l.apex.dist(x, y).clone(),
            _ if base(x) == base(y) => crate::value::ExtValue::int(2),
            _ => l.apex.dist(base(x), base(y)).clone(),
        })
        .unwrap();
        let apex = Arc::new(Space::anonymous(FiniteTopology::discrete(n + 1), m).unwrap());
        let legs = l
            .legs
            .iter()
            .map(|leg| {
                let mut img = leg.map.image().to_vec();
                img.push(leg.map.apply(0));
                CSMorphism::new(apex.clone(), leg.target.clone(), FinMap::new(leg.target.len(), img).unwrap()).unwrap()
            })
            .collect();
        let fat = ConeCert { apex, legs, side: Side::Cone };
        let v = verify_universal(&d, &fat, &default_probes(CategoryTag::Emt), &cfg).unwrap();
        assert!(v.is_fail(), "{v:?}");
    }

    #[test]
    fn empty_limit_passes() {
        let cfg = Config::default();
        let d = Diagram::discrete(CategoryTag::Emt, vec![]).unwrap();
        let l = limit(&d, &cfg).unwrap();
        assert!(verify_universal(&d, &l, &default_probes(CategoryTag::Emt), &cfg).unwrap().is_pass());
        let c = colimit(&d, &cfg).unwrap();
        assert!(verify_universal(&d, &c, &default_probes(CategoryTag::Emt), &cfg).unwrap().is_pass());
    }

    #[test]
    fn missing_point_fails_existence() {
        let cfg = Config::default();
        let d = Diagram::discrete(CategoryTag::Set, vec![emt2("1")]).unwrap();
        let pt = Arc::new(Space::point());
        let leg = CSMorphism::new(pt.clone(), emt2("1"), FinMap::new(2, vec![0]).unwrap()).unwrap();
        let cand = ConeCert { apex: pt, legs: vec![leg], side: Side::Cone };
        match verify_universal(&d, &cand, &default_probes(CategoryTag::Set), &cfg).unwrap() {
            Verdict::Fail { reason, .. } => assert!(reason.contains("existence")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cap_gives_inconclusive() {
        let mut cfg = Config::default();
        cfg.caps.enumeration = 2;
        let d = Diagram::discrete(CategoryTag::Emt, vec![emt2("1"), emt2("2")]).unwrap();
        let l = limit(&d, &Config::default()).unwrap();
        assert!(verify_universal(&d, &l, &default_probes(CategoryTag::Emt), &cfg).unwrap().is_inconclusive());
    }
}
