//! The reflections and auxiliary functors, with their structural morphisms.
//!
//! Every operation returns a [`FunctorResult`] carrying the output object and
//! the structural morphism relating it to the input: the unit of a reflection
//! (input → output), or, for [`geodesify`], the counit (output → input).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{EmtError, Result};
use crate::extmetric::{completion_finite, length_distance_finite, truncate_metric, ExtPseudoMetric};
use crate::finmap::FinMap;
use crate::fintop::{continuity_partition, partition_topology, topology_quotient, FiniteTopology};
use crate::partition::Partition;
use crate::spaces::{has_dense_image, is_emt, is_embedding_map, is_iso_map, zero_classes, CSMorphism, Space};
use crate::value::ExtValue;

/// Warning attached to results whose content is trivial on finite spaces.
pub const DEGENERATE: &str = "degenerate-at-finite-scale";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `unit: input → object`.
    Unit,
    /// `unit: object → input`.
    Counit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorResult {
    pub tag: String,
    pub object: Arc<Space>,
    pub unit: CSMorphism,
    pub direction: Direction,
    pub warnings: Vec<String>,
}

impl FunctorResult {
    fn unit(tag: impl Into<String>, object: Arc<Space>, unit: CSMorphism) -> Self {
        debug_assert!(unit.validate().is_ok() && *unit.target == *object);
        FunctorResult { tag: tag.into(), object, unit, direction: Direction::Unit, warnings: Vec::new() }
    }
}

/// Names for the classes of `p`: the member name for singletons, `[a,b,..]` otherwise.
pub(crate) fn class_names(names: &[String], p: &Partition) -> Vec<String> {
    p.classes()
        .iter()
        .map(|c| match c.as_slice() {
            [x] => names[*x].clone(),
            _ => format!("[{}]", c.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(",")),
        })
        .collect()
}

fn quotient_map(p: &Partition) -> FinMap {
    FinMap::new(p.num_classes(), p.labels().to_vec()).expect("labels are class indices")
}

fn require_emt(s: &Space, what: &str) -> Result<()> {
    if !is_emt(s)? {
        return Err(EmtError::Domain(format!("{what} needs an e.m.t. space")));
    }
    Ok(())
}

/// Reflection onto e.m.t. spaces.
///
/// Quotients by the zero classes of the recovered distance `d̃`, with metric
/// induced by `d̃`. The output topology is computed as the initial topology of
/// the bounded continuous 1-Lipschitz functions of the quotient (quotient
/// topology, then the zero classes of its recovered distance), and is checked
/// to be discrete.
pub fn emt_fication(s: &Arc<Space>) -> Result<FunctorResult> {
    let rho = s.recovered();
    let zc = zero_classes(rho);
    let metric = rho.induced_on_classes(&zc);
    let quotient_topology = topology_quotient(s.topology(), &zc)?;
    let names = crate::spaces::uniquify(class_names(s.names(), &zc));
    let staged = Space::new(names.clone(), quotient_topology, metric.clone())
        .map_err(|v| EmtError::Inconsistent(v.to_string()))?;
    let initial = partition_topology(&zero_classes(staged.recovered()));
    if !initial.is_discrete() {
        return Err(EmtError::Inconsistent(format!("initial topology of the quotient is not discrete: {initial:?}")));
    }
    let object = Arc::new(Space::new_unchecked(names, initial, metric));
    if !is_emt(&object)? {
        return Err(EmtError::Inconsistent(format!("emt-fication output is not e.m.t.: {object:?}")));
    }
    let unit = CSMorphism::new(s.clone(), object.clone(), quotient_map(&zc))?;
    Ok(FunctorResult::unit("emt", object, unit))
}

/// The map induced by a structural morphism on a surjective unit: the unique
/// `ψ` with `ψ ∘ u_X = u_Y ∘ φ`.
fn induced(phi: &CSMorphism, fx: &FunctorResult, fy: &FunctorResult) -> Result<CSMorphism> {
    // both units point input → object here
    let (ux, uy) = (&fx.unit.map, &fy.unit.map);
    let mut image = vec![None; fx.object.len()];
    for x in 0..phi.source.len() {
        let target = uy.apply(phi.map.apply(x));
        match image[ux.apply(x)] {
            None => image[ux.apply(x)] = Some(target),
            Some(t) if t == target => {}
            Some(_) => {
                return Err(EmtError::Inconsistent(format!(
                    "{} of a morphism is not well defined at point {x}",
                    fx.tag
                )))
            }
        }
    }
    let image = image
        .into_iter()
        .map(|v| v.ok_or_else(|| EmtError::Inconsistent("structural map is not surjective".into())))
        .collect::<Result<Vec<_>>>()?;
    CSMorphism::new(fx.object.clone(), fy.object.clone(), FinMap::new(fy.object.len(), image)?)
}

/// `φ̌`: the unique continuous-short map with `c_Y ∘ φ = φ̌ ∘ c_X`.
pub fn emt_fication_morphism(phi: &CSMorphism) -> Result<CSMorphism> {
    phi.validate().map_err(|v| EmtError::InvalidMorphism(v.to_string()))?;
    induced(phi, &emt_fication(&phi.source)?, &emt_fication(&phi.target)?)
}

/// Stone–Čech compactification of a finite space: the continuity classes,
/// discretely topologized, with the class projection.
pub fn stone_cech_finite(t: &FiniteTopology) -> (FiniteTopology, FinMap) {
    let p = continuity_partition(t);
    (FiniteTopology::discrete(p.num_classes()), quotient_map(&p))
}

/// Compactification `γ` of an e.m.t. space.
///
/// `βX` carries the recovered distance pushed to continuity classes; `γX` is
/// its e.m.t.-fication and the unit is `X → βX → γX`. The unit is checked to
/// have dense image and to be an embedding.
pub fn compactify(s: &Arc<Space>) -> Result<FunctorResult> {
    require_emt(s, "compactification")?;
    let (beta_t, i) = stone_cech_finite(s.topology());
    let p = s.continuity_partition();
    let beta_d = s.recovered().induced_on_classes(p);
    let beta = Arc::new(Space::new_unchecked(class_names(s.names(), p), beta_t, beta_d));
    let i = CSMorphism::new(s.clone(), beta.clone(), i)?;
    let e = emt_fication(&beta)?;
    let unit = i.then(&e.unit)?;
    if !has_dense_image(&unit) || !is_embedding_map(&unit.source, &unit.target, &unit.map) {
        return Err(EmtError::Inconsistent("compactification unit is not a dense embedding".into()));
    }
    Ok(FunctorResult::unit("gamma", e.object, unit))
}

/// `γ̄ = γ ∘ emt`, with unit `ῑ = ι ∘ c`.
pub fn gamma_bar(s: &Arc<Space>) -> Result<FunctorResult> {
    let e = emt_fication(s)?;
    let g = compactify(&e.object)?;
    let unit = e.unit.then(&g.unit)?;
    Ok(FunctorResult::unit("gammabar", g.object, unit))
}

/// `λ`-discrete distance on a topology (`0` on the diagonal, `λ` elsewhere).
///
/// The structural morphism is the identity of the output, whose underlying
/// map is the unit of the adjunction with the forgetful functor.
pub fn discretize(t: &FiniteTopology, lambda: &ExtValue, hausdorff_required: bool) -> Result<FunctorResult> {
    if lambda.is_zero() {
        return Err(EmtError::Domain("discretization level must be positive".into()));
    }
    if hausdorff_required && !t.is_hausdorff() {
        return Err(EmtError::Domain("discretization needs a Tychonoff (here: discrete) topology".into()));
    }
    let object = Arc::new(Space::anonymous(t.clone(), ExtPseudoMetric::constant_off_diagonal(t.len(), lambda))?);
    let unit = CSMorphism::identity(object.clone());
    Ok(FunctorResult::unit(format!("disc:{lambda}"), object, unit))
}

/// An extended metric with the topology it induces (discrete on finite sets).
pub fn metric_topology_attach(m: &ExtPseudoMetric) -> Result<Space> {
    if !m.is_extended_metric() {
        return Err(EmtError::Domain("attaching a topology needs an extended metric".into()));
    }
    Space::anonymous(FiniteTopology::discrete(m.len()), m.clone())
}

/// `(X, τ, d ∧ λ)` with the identity as unit.
pub fn truncate_functor(s: &Arc<Space>, lambda: &ExtValue) -> Result<FunctorResult> {
    require_emt(s, "truncation")?;
    let metric = truncate_metric(s.metric(), lambda)?;
    let object = Arc::new(Space::new_unchecked(s.names().to_vec(), s.topology().clone(), metric));
    let unit = CSMorphism::new(s.clone(), object.clone(), FinMap::identity(s.len()))?;
    Ok(FunctorResult::unit(format!("trunc:{lambda}"), object, unit))
}

/// Metric completion: the `γd`-closure of `ι(X)` inside `γX`.
pub fn metric_completion(s: &Arc<Space>) -> Result<FunctorResult> {
    let g = compactify(s)?;
    let gx = &g.object;
    // the γd metric topology on a finite set is discrete, so the closure is the image
    let mut closure: Vec<usize> = g.unit.map.image().to_vec();
    closure.sort_unstable();
    closure.dedup();
    let object = Arc::new(gx.subspace(&closure)?);
    completion_finite(object.metric())?;
    let image = g.unit.map.image().iter().map(|y| closure.binary_search(y).expect("in closure")).collect();
    let unit = CSMorphism::new(s.clone(), object.clone(), FinMap::new(object.len(), image)?)?;
    Ok(FunctorResult::unit("mc", object, unit))
}

/// `(X, τ, d_ℓ)`, with the counit `id: geo X → X`.
///
/// At finite scale `d_ℓ` is the `∞`-discrete distance, so the result carries
/// the [`DEGENERATE`] warning. Since `d ≤ d_ℓ`, the identity is short only in
/// the direction `geo X → X`.
pub fn geodesify(s: &Arc<Space>) -> Result<FunctorResult> {
    require_emt(s, "geodesification")?;
    let metric = length_distance_finite(s.metric(), s.topology().is_discrete())?;
    let object = Arc::new(Space::new_unchecked(s.names().to_vec(), s.topology().clone(), metric));
    let counit = CSMorphism::new(object.clone(), s.clone(), FinMap::identity(s.len()))?;
    Ok(FunctorResult {
        tag: "geo".into(),
        object,
        unit: counit,
        direction: Direction::Counit,
        warnings: vec![DEGENERATE.into()],
    })
}

/// Named functor, as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    Emt,
    Gamma,
    GammaBar,
    Mc,
    Geo,
    Trunc(ExtValue),
    Disc(ExtValue),
    T,
}

impl FromStr for Functor {
    type Err = EmtError;

    fn from_str(s: &str) -> Result<Self> {
        let level = |v: &str| v.parse::<ExtValue>().map_err(|e| EmtError::parse("name", e.to_string()));
        match s {
            "emt" => Ok(Functor::Emt),
            "gamma" => Ok(Functor::Gamma),
            "gammabar" => Ok(Functor::GammaBar),
            "mc" => Ok(Functor::Mc),
            "geo" => Ok(Functor::Geo),
            "T" => Ok(Functor::T),
            _ => {
                if let Some(v) = s.strip_prefix("trunc:") {
                    Ok(Functor::Trunc(level(v)?))
                } else if let Some(v) = s.strip_prefix("disc:") {
                    Ok(Functor::Disc(level(v)?))
                } else {
                    Err(EmtError::parse("name", format!("unknown functor {s:?}")))
                }
            }
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Emt => f.write_str("emt"),
            Functor::Gamma => f.write_str("gamma"),
            Functor::GammaBar => f.write_str("gammabar"),
            Functor::Mc => f.write_str("mc"),
            Functor::Geo => f.write_str("geo"),
            Functor::Trunc(l) => write!(f, "trunc:{l}"),
            Functor::Disc(l) => write!(f, "disc:{l}"),
            Functor::T => f.write_str("T"),
        }
    }
}

impl Functor {
    /// Applies the functor to a space. `disc` reads only the topology and `T`
    /// only the metric of the input.
    pub fn apply(&self, s: &Arc<Space>) -> Result<FunctorResult> {
        match self {
            Functor::Emt => emt_fication(s),
            Functor::Gamma => compactify(s),
            Functor::GammaBar => gamma_bar(s),
            Functor::Mc => metric_completion(s),
            Functor::Geo => geodesify(s),
            Functor::Trunc(l) => truncate_functor(s, l),
            Functor::Disc(l) => {
                let r = discretize(s.topology(), l, true)?;
                rename(r, s.names())
            }
            Functor::T => {
                let object = Arc::new(metric_topology_attach(s.metric())?.with_names(s.names().to_vec())?);
                let unit = CSMorphism::identity(object.clone());
                Ok(FunctorResult::unit("T", object, unit))
            }
        }
    }

    /// Action on a morphism: the unique map compatible with the structural
    /// morphisms of source and target.
    pub fn apply_morphism(&self, phi: &CSMorphism) -> Result<CSMorphism> {
        phi.validate().map_err(|v| EmtError::InvalidMorphism(v.to_string()))?;
        let fx = self.apply(&phi.source)?;
        let fy = self.apply(&phi.target)?;
        match self {
            // the structural map of these is the identity of the output
            Functor::Disc(_) | Functor::T => CSMorphism::new(fx.object, fy.object, phi.map.clone()),
            Functor::Geo => {
                let (cx, cy) = (&fx.unit.map, &fy.unit.map);
                let inv_x = cx.inverse().expect("counit is bijective");
                let map = inv_x.then(&phi.map)?.then(&cy.inverse().expect("counit is bijective"))?;
                CSMorphism::new(fx.object, fy.object, map)
            }
            _ => induced(phi, &fx, &fy),
        }
    }
}

fn rename(mut r: FunctorResult, names: &[String]) -> Result<FunctorResult> {
    let object = Arc::new((*r.object).clone().with_names(names.to_vec())?);
    r.unit = CSMorphism::identity(object.clone());
    r.object = object;
    Ok(r)
}

/// Whether `u` is an isomorphism of pre-e.pm.t. spaces.
pub fn unit_is_iso(r: &FunctorResult) -> bool {
    is_iso_map(&r.unit.source, &r.unit.target, &r.unit.map)
}
