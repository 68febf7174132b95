//! Limit and colimit constructions.
//!
//! The same carrier construction serves every tag; the tag only decides which
//! maps count as morphisms. Products carry the product topology and the sup
//! metric, coproducts the sum topology and the block metric (`∞` across
//! summands), quotients the quotient topology and the chain quotient metric.

use std::sync::Arc;

use crate::config::Config;
use crate::error::{EmtError, Result};
use crate::extmetric::{chain_quotient_metric, metric_disjoint_union, metric_product_sup};
use crate::finmap::FinMap;
use crate::fintop::{product_coords, product_size, topology_disjoint_union, topology_product, topology_quotient};
use crate::functors::{class_names, emt_fication};
use crate::partition::Partition;
use crate::spaces::{is_emt, uniquify, CSMorphism, Space};

use super::{CategoryTag, ConeCert, Diagram, Side};

/// Product with its projections. Points are tuples, first factor most significant.
pub fn product(objects: &[Arc<Space>], config: &Config) -> Result<ConeCert> {
    let sizes: Vec<usize> = objects.iter().map(|o| o.len()).collect();
    let total = product_size(&sizes, &config.caps)?;
    let topologies: Vec<_> = objects.iter().map(|o| o.topology().clone()).collect();
    let metrics: Vec<_> = objects.iter().map(|o| o.metric().clone()).collect();
    let topology = topology_product(&topologies, &config.caps)?;
    let metric = metric_product_sup(&metrics, &config.caps)?;
    let coords: Vec<Vec<usize>> = (0..total).map(|idx| product_coords(idx, &sizes)).collect();
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(objects).map(|(&x, o)| o.names()[x].as_str()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let apex = Arc::new(Space::new_unchecked(uniquify(names), topology, metric));
    let legs = objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let map = FinMap::new(o.len(), coords.iter().map(|c| c[i]).collect())?;
            CSMorphism::new(apex.clone(), o.clone(), map)
        })
        .collect::<Result<_>>()?;
    Ok(ConeCert { apex, legs, side: Side::Cone })
}

/// Restricts a cone to the apex points in `keep`.
fn restrict_cone(cone: &ConeCert, keep: &[usize]) -> Result<ConeCert> {
    let apex = Arc::new(cone.apex.subspace(keep)?);
    let incl = CSMorphism::new(apex.clone(), cone.apex.clone(), FinMap::new(cone.apex.len(), keep.to_vec())?)?;
    let legs = cone.legs.iter().map(|l| incl.then(l)).collect::<Result<_>>()?;
    Ok(ConeCert { apex, legs, side: Side::Cone })
}

fn check_emt_apex(tag: CategoryTag, apex: &Space) -> Result<()> {
    if tag == CategoryTag::Emt && !is_emt(apex)? {
        return Err(EmtError::Inconsistent(format!("EMT (co)limit apex is not e.m.t.: {apex:?}")));
    }
    Ok(())
}

/// Limit: the subspace of the product cut out by `D(a)(x_src) = x_dst` for
/// every arrow `a`. EMT limits are computed the same way and checked e.m.t.
pub fn limit(d: &Diagram, config: &Config) -> Result<ConeCert> {
    d.validate()?;
    let prod = product(&d.objects, config)?;
    let keep: Vec<usize> = (0..prod.apex.len())
        .filter(|&x| {
            d.arrows
                .iter()
                .all(|a| a.map.apply(prod.legs[a.src].map.apply(x)) == prod.legs[a.dst].map.apply(x))
        })
        .collect();
    let cone = restrict_cone(&prod, &keep)?;
    check_emt_apex(d.category, &cone.apex)?;
    Ok(cone)
}

/// Equalizer of `f, g: X ⇉ Y`: the subspace `{x | f(x) = g(x)}`, with legs
/// to `X` (inclusion) and `Y` (`f` after inclusion).
pub fn equalizer(x: &Arc<Space>, y: &Arc<Space>, f: &FinMap, g: &FinMap) -> Result<ConeCert> {
    if f.source_size() != x.len() || g.source_size() != x.len() || f.target_size() != y.len() || g.target_size() != y.len() {
        return Err(EmtError::SizeMismatch("parallel pair does not match its spaces".into()));
    }
    let keep: Vec<usize> = (0..x.len()).filter(|&p| f.apply(p) == g.apply(p)).collect();
    let apex = Arc::new(x.subspace(&keep)?);
    let incl = FinMap::new(x.len(), keep.clone())?;
    let to_y = incl.then(f)?;
    let legs = vec![
        CSMorphism { source: apex.clone(), target: x.clone(), map: incl },
        CSMorphism { source: apex.clone(), target: y.clone(), map: to_y },
    ];
    Ok(ConeCert { apex, legs, side: Side::Cone })
}

/// Coproduct with its inclusions; points are named `i:name`.
pub fn coproduct(objects: &[Arc<Space>]) -> Result<ConeCert> {
    let topologies: Vec<_> = objects.iter().map(|o| o.topology().clone()).collect();
    let metrics: Vec<_> = objects.iter().map(|o| o.metric().clone()).collect();
    let names = objects
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.names().iter().map(move |n| format!("{i}:{n}")))
        .collect();
    let apex = Arc::new(Space::new_unchecked(
        uniquify(names),
        topology_disjoint_union(&topologies),
        metric_disjoint_union(&metrics),
    ));
    let mut offset = 0;
    let mut legs = Vec::with_capacity(objects.len());
    for o in objects {
        let map = FinMap::new(apex.len(), (offset..offset + o.len()).collect())?;
        legs.push(CSMorphism::new(o.clone(), apex.clone(), map)?);
        offset += o.len();
    }
    Ok(ConeCert { apex, legs, side: Side::Cocone })
}

/// Quotient of a cocone's apex by `p`, composing the legs with the projection.
fn quotient_cocone(cocone: &ConeCert, p: &Partition) -> Result<ConeCert> {
    let src = &cocone.apex;
    let topology = topology_quotient(src.topology(), p)?;
    let metric = chain_quotient_metric(src.metric(), p)?;
    let apex = Arc::new(Space::new_unchecked(uniquify(class_names(src.names(), p)), topology, metric));
    let q = CSMorphism::new(src.clone(), apex.clone(), FinMap::new(p.num_classes(), p.labels().to_vec())?)?;
    let legs = cocone.legs.iter().map(|l| l.then(&q)).collect::<Result<_>>()?;
    Ok(ConeCert { apex, legs, side: Side::Cocone })
}

/// Applies the e.m.t. reflection to a cocone's apex.
fn reflect_cocone(cocone: ConeCert) -> Result<ConeCert> {
    let e = emt_fication(&cocone.apex)?;
    let legs = cocone.legs.iter().map(|l| l.then(&e.unit)).collect::<Result<_>>()?;
    Ok(ConeCert { apex: e.object, legs, side: Side::Cocone })
}

/// Colimit: the coproduct quotiented by the partition generated by
/// `x ~ D(a)(x)`. For EMT the e.m.t. reflection is applied afterwards.
pub fn colimit(d: &Diagram, _config: &Config) -> Result<ConeCert> {
    d.validate()?;
    let sum = coproduct(&d.objects)?;
    let pairs = d.arrows.iter().flat_map(|a| {
        let (is, id) = (&sum.legs[a.src].map, &sum.legs[a.dst].map);
        (0..a.map.source_size()).map(move |x| (is.apply(x), id.apply(a.map.apply(x))))
    });
    let p = Partition::generated_by(sum.apex.len(), pairs)?;
    let cocone = quotient_cocone(&sum, &p)?;
    let cocone = if d.category == CategoryTag::Emt { reflect_cocone(cocone)? } else { cocone };
    check_emt_apex(d.category, &cocone.apex)?;
    Ok(cocone)
}

/// Coequalizer of `f, g: X ⇉ Y`: `Y` modulo `f(x) ~ g(x)`, with legs from
/// `X` (`f` then projection) and `Y` (projection). Reflected for EMT.
pub fn coequalizer(tag: CategoryTag, x: &Arc<Space>, y: &Arc<Space>, f: &FinMap, g: &FinMap) -> Result<ConeCert> {
    if f.source_size() != x.len() || g.source_size() != x.len() || f.target_size() != y.len() || g.target_size() != y.len() {
        return Err(EmtError::SizeMismatch("parallel pair does not match its spaces".into()));
    }
    let p = Partition::generated_by(y.len(), (0..x.len()).map(|p| (f.apply(p), g.apply(p))))?;
    let base = ConeCert { apex: y.clone(), legs: vec![CSMorphism::identity(y.clone())], side: Side::Cocone };
    let q = quotient_cocone(&base, &p)?;
    let leg_y = q.legs[0].clone();
    let leg_x = CSMorphism { source: x.clone(), target: q.apex.clone(), map: f.then(&leg_y.map)? };
    let cocone = ConeCert { apex: q.apex, legs: vec![leg_x, leg_y], side: Side::Cocone };
    if tag == CategoryTag::Emt {
        reflect_cocone(cocone)
    } else {
        Ok(cocone)
    }
}

/// Limit as the equalizer of `∏ D_i ⇉ ∏_a D_dst(a)`, with
/// `s(x)_a = D(a)(x_src(a))` and `t(x)_a = x_dst(a)`.
pub fn limit_via_products_equalizers(d: &Diagram, config: &Config) -> Result<ConeCert> {
    d.validate()?;
    let prod = product(&d.objects, config)?;
    let target_sizes: Vec<usize> = d.arrows.iter().map(|a| d.objects[a.dst].len()).collect();
    // the equalizer only needs the two maps as functions into the tuple set
    let strides: Vec<usize> = {
        let mut s = vec![1usize; target_sizes.len()];
        for i in (0..target_sizes.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * target_sizes[i + 1];
        }
        s
    };
    let q_size: usize = target_sizes.iter().product();
    let encode = |coords: Vec<usize>| coords.iter().zip(&strides).map(|(c, s)| c * s).sum::<usize>();
    let n = prod.apex.len();
    let s = FinMap::new(
        q_size,
        (0..n)
            .map(|x| encode(d.arrows.iter().map(|a| a.map.apply(prod.legs[a.src].map.apply(x))).collect()))
            .collect(),
    )?;
    let t = FinMap::new(
        q_size,
        (0..n)
            .map(|x| encode(d.arrows.iter().map(|a| prod.legs[a.dst].map.apply(x)).collect()))
            .collect(),
    )?;
    let keep: Vec<usize> = (0..n).filter(|&x| s.apply(x) == t.apply(x)).collect();
    let cone = restrict_cone(&prod, &keep)?;
    check_emt_apex(d.category, &cone.apex)?;
    Ok(cone)
}

/// Colimit as the coequalizer of `∐_a D_src(a) ⇉ ∐ D_i`, with
/// `s = ι_dst(a) ∘ D(a)` and `t = ι_src(a)`.
pub fn colimit_via_coproduct_coequalizer(d: &Diagram, _config: &Config) -> Result<ConeCert> {
    d.validate()?;
    let sum = coproduct(&d.objects)?;
    let sources: Vec<Arc<Space>> = d.arrows.iter().map(|a| d.objects[a.src].clone()).collect();
    let rel = coproduct(&sources)?;
    let mut s_img = Vec::with_capacity(rel.apex.len());
    let mut t_img = Vec::with_capacity(rel.apex.len());
    for a in &d.arrows {
        for x in 0..a.map.source_size() {
            s_img.push(sum.legs[a.dst].map.apply(a.map.apply(x)));
            t_img.push(sum.legs[a.src].map.apply(x));
        }
    }
    let s = FinMap::new(sum.apex.len(), s_img)?;
    let t = FinMap::new(sum.apex.len(), t_img)?;
    let coeq = coequalizer(d.category, &rel.apex, &sum.apex, &s, &t)?;
    let to_apex = &coeq.legs[1];
    let legs = sum.legs.iter().map(|l| l.then(to_apex)).collect::<Result<_>>()?;
    let cocone = ConeCert { apex: coeq.apex, legs, side: Side::Cocone };
    check_emt_apex(d.category, &cocone.apex)?;
    Ok(cocone)
}
