//! Agreement between independent (co)limit routes.

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::extmetric::{chain_quotient_metric, metric_disjoint_union, metric_product_sup};
use crate::finmap::FinMap;
use crate::fintop::{topology_disjoint_union, topology_product, topology_quotient};
use crate::partition::Partition;
use crate::spaces::is_iso_map;

use super::construct::{
    colimit, colimit_via_coproduct_coequalizer, coequalizer, coproduct, equalizer, limit,
    limit_via_products_equalizers, product,
};
use super::{CategoryTag, ConeCert, Diagram, Side};

/// An isomorphism between two apexes compatible with the legs, if any.
///
/// For cones `h` must satisfy `leg_b ∘ h = leg_a`, for cocones
/// `h ∘ leg_a = leg_b`; these constraints prune the bijection search.
pub fn find_iso_respecting_legs(a: &ConeCert, b: &ConeCert) -> Option<FinMap> {
    if a.side != b.side || a.legs.len() != b.legs.len() || a.apex.len() != b.apex.len() {
        return None;
    }
    let n = a.apex.len();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            (0..n)
                .filter(|&q| match a.side {
                    Side::Cone => a.legs.iter().zip(&b.legs).all(|(la, lb)| la.map.apply(p) == lb.map.apply(q)),
                    Side::Cocone => a.legs.iter().zip(&b.legs).all(|(la, lb)| {
                        (0..la.map.source_size()).all(|x| (la.map.apply(x) == p) == (lb.map.apply(x) == q))
                    }),
                })
                .collect()
        })
        .collect();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(a, b, &candidates, &mut image, &mut used)
}

fn search(a: &ConeCert, b: &ConeCert, cands: &[Vec<usize>], image: &mut Vec<usize>, used: &mut [bool]) -> Option<FinMap> {
    if image.len() == cands.len() {
        let h = FinMap::new(b.apex.len(), image.clone()).ok()?;
        return is_iso_map(&a.apex, &b.apex, &h).then_some(h);
    }
    for &q in &cands[image.len()] {
        if !used[q] {
            used[q] = true;
            image.push(q);
            if let Some(h) = search(a, b, cands, image, used) {
                return Some(h);
            }
            image.pop();
            used[q] = false;
        }
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    /// Generic limit vs products and equalizers.
    pub limit_routes: bool,
    /// Generic colimit vs coproducts and coequalizers.
    pub colimit_routes: bool,
    /// Direct binary formulas (product, equalizer, coproduct, coequalizer)
    /// where the diagram has that shape; `true` otherwise.
    pub direct_formulas: bool,
    /// EMT colimit vs the e.m.t. reflection of the PRE colimit.
    pub emt_colimit_reflects_pre: bool,
    /// PRE (co)limit vs pairing separately computed TOP and EXTPMET structure.
    pub pre_is_pairing: bool,
    /// Underlying carriers agree across all tags the diagram belongs to.
    pub carriers_agree: bool,
}

impl CrossCheckReport {
    pub fn all(&self) -> bool {
        self.limit_routes
            && self.colimit_routes
            && self.direct_formulas
            && self.emt_colimit_reflects_pre
            && self.pre_is_pairing
            && self.carriers_agree
    }
}

fn iso(a: &ConeCert, b: &ConeCert) -> bool {
    find_iso_respecting_legs(a, b).is_some()
}

/// Runs every cross-check on one diagram.
pub fn cross_check_formulas(d: &Diagram, config: &Config) -> Result<CrossCheckReport> {
    let lim = limit(d, config)?;
    let colim = colimit(d, config)?;
    let mut r = CrossCheckReport {
        limit_routes: iso(&lim, &limit_via_products_equalizers(d, config)?),
        colimit_routes: iso(&colim, &colimit_via_coproduct_coequalizer(d, config)?),
        ..Default::default()
    };

    r.direct_formulas = true;
    if d.arrows.is_empty() {
        r.direct_formulas &= iso(&lim, &product(&d.objects, config)?);
        r.direct_formulas &= iso(&colim, &coproduct(&d.objects)?);
    }
    if d.is_parallel_pair() {
        let (x, y) = (&d.objects[0], &d.objects[1]);
        let (f, g) = (&d.arrows[0].map, &d.arrows[1].map);
        r.direct_formulas &= iso(&lim, &equalizer(x, y, f, g)?);
        r.direct_formulas &= iso(&colim, &coequalizer(d.category, x, y, f, g)?);
    }

    r.emt_colimit_reflects_pre = if d.category == CategoryTag::Emt {
        let pre = colimit(&d.retag(CategoryTag::Pre)?, config)?;
        let reflected = crate::functors::emt_fication(&pre.apex)?;
        let legs = pre.legs.iter().map(|l| l.then(&reflected.unit)).collect::<Result<_>>()?;
        iso(&colim, &ConeCert { apex: reflected.object, legs, side: Side::Cocone })
    } else {
        true
    };

    let pre = d.retag(CategoryTag::Pre);
    r.pre_is_pairing = match pre {
        Ok(pre) => pairing_matches(&pre, config)?,
        Err(_) => true,
    };

    r.carriers_agree = carriers_agree(d, config)?;
    Ok(r)
}

/// Recomputes the PRE limit and colimit structure from the topological and
/// metric data separately and compares on the common carrier.
fn pairing_matches(pre: &Diagram, config: &Config) -> Result<bool> {
    let lim = limit(pre, config)?;
    let colim = colimit(pre, config)?;
    let sizes: Vec<usize> = pre.objects.iter().map(|o| o.len()).collect();
    let total: usize = sizes.iter().product();

    // limit carrier: tuples satisfying every arrow equation
    let coords = |mut idx: usize| -> Vec<usize> {
        let mut c = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            c[i] = idx % sizes[i];
            idx /= sizes[i];
        }
        c
    };
    let keep: Vec<usize> = (0..total)
        .filter(|&x| {
            let c = coords(x);
            pre.arrows.iter().all(|a| a.map.apply(c[a.src]) == c[a.dst])
        })
        .collect();
    let tops: Vec<_> = pre.objects.iter().map(|o| o.topology().clone()).collect();
    let mets: Vec<_> = pre.objects.iter().map(|o| o.metric().clone()).collect();
    let top = crate::fintop::topology_subspace(&topology_product(&tops, &config.caps)?, &keep)?;
    let met = metric_product_sup(&mets, &config.caps)?.restrict(&keep)?;
    let limit_ok = &top == lim.apex.topology() && &met == lim.apex.metric();

    // colimit carrier: blocks glued along the arrows
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let n: usize = sizes.iter().sum();
    let pairs = pre
        .arrows
        .iter()
        .flat_map(|a| {
            let (os, od) = (offsets[a.src], offsets[a.dst]);
            (0..a.map.source_size()).map(move |x| (os + x, od + a.map.apply(x)))
        })
        .collect::<Vec<_>>();
    let p = Partition::generated_by(n, pairs)?;
    let top = topology_quotient(&topology_disjoint_union(&tops), &p)?;
    let met = chain_quotient_metric(&metric_disjoint_union(&mets), &p)?;
    let colimit_ok = &top == colim.apex.topology() && &met == colim.apex.metric();
    Ok(limit_ok && colimit_ok)
}

/// The underlying sets (and leg functions) agree for every tag the diagram is
/// valid in; EMT colimits are compared after reflection, so they are skipped.
fn carriers_agree(d: &Diagram, config: &Config) -> Result<bool> {
    let reference_lim = limit(&d.retag(CategoryTag::Set)?, config)?;
    let reference_colim = colimit(&d.retag(CategoryTag::Set)?, config)?;
    let same = |a: &ConeCert, b: &ConeCert| {
        a.apex.names() == b.apex.names() && a.legs.iter().zip(&b.legs).all(|(x, y)| x.map == y.map)
    };
    for tag in CategoryTag::ALL {
        let Ok(t) = d.retag(tag) else { continue };
        if !same(&limit(&t, config)?, &reference_lim) {
            return Ok(false);
        }
        if tag != CategoryTag::Emt && !same(&colimit(&t, config)?, &reference_colim) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmetric::tests::metric;
    use crate::fintop::FiniteTopology;
    use crate::spaces::Space;
    use std::sync::Arc;

    fn emt(rows: &[&[&str]]) -> Arc<Space> {
        Arc::new(Space::anonymous(FiniteTopology::discrete(rows.len()), metric(rows)).unwrap())
    }

    #[test]
    fn product_routes_agree() {
        let d = Diagram::discrete(CategoryTag::Emt, vec![emt(&[&["0", "1"], &["1", "0"]]), emt(&[&["0", "2"], &["2", "0"]])]).unwrap();
        let r = cross_check_formulas(&d, &Config::default()).unwrap();
        assert!(r.all(), "{r:?}");
    }

    #[test]
    fn coequalizer_routes_agree() {
        let pt = Arc::new(Space::point());
        let y = emt(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]);
        let d = Diagram::parallel_pair(
            CategoryTag::Emt,
            pt,
            y,
            FinMap::new(3, vec![0]).unwrap(),
            FinMap::new(3, vec![2]).unwrap(),
        )
        .unwrap();
        let r = cross_check_formulas(&d, &Config::default()).unwrap();
        assert!(r.all(), "{r:?}");
    }

    #[test]
    fn iso_search_rejects_different_apexes() {
        let cfg = Config::default();
        let a = emt(&[&["0", "1"], &["1", "0"]]);
        let b = emt(&[&["0", "2"], &["2", "0"]]);
        let pa = product(std::slice::from_ref(&a), &cfg).unwrap();
        let pb = product(&[b], &cfg).unwrap();
        assert!(find_iso_respecting_legs(&pa, &pa).is_some());
        assert!(find_iso_respecting_legs(&pa, &pb).is_none());
    }
}
