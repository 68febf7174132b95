//! Pre-e.pm.t. spaces, continuous-short maps and the predicates on them.
//!
//! # Finite-scale reductions
//!
//! * A real function on a finite space is continuous iff it is constant on
//!   the classes of [`continuity_partition`]. Hence the bounded, continuous,
//!   1-Lipschitz functions are the functions constant on those classes with
//!   `|f(a) - f(b)| ≤ d(a,b)`; equivalently, the 1-Lipschitz functions for the
//!   chain quotient distance over that partition. By McShane extension the
//!   supremum of `|f(x) - f(y)|` over them is that chain distance, which is
//!   what [`recovered_distance`] returns.
//! * The initial topology of a family of real functions on a finite set is the
//!   partition topology of "agrees on every function". For the Lipschitz
//!   family two points agree on every function iff their recovered distance
//!   is zero.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::config::{Caps, Config};
use crate::error::{EmtError, Result};
use crate::exec;
use crate::extmetric::{chain_quotient_metric, ExtPseudoMetric, MetricViolation};
use crate::finmap::FinMap;
use crate::fintop::{
    continuity_partition, continuous_by_neighborhoods, is_continuous, partition_topology, point_set,
    topology_subspace, FiniteTopology,
};
use crate::partition::Partition;
use crate::value::ExtValue;

/// A pre-e.pm.t. space: named points, a topology and an extended pseudometric.
#[derive(Clone)]
pub struct Space {
    names: Vec<String>,
    topology: FiniteTopology,
    metric: ExtPseudoMetric,
    continuity: OnceLock<Partition>,
    recovered: OnceLock<ExtPseudoMetric>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.topology == other.topology && self.metric == other.metric
    }
}

impl Eq for Space {}

impl Hash for Space {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.names.hash(state);
        self.topology.hash(state);
        self.metric.hash(state);
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("names", &self.names)
            .field("topology", &self.topology)
            .field("metric", &self.metric)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum SpaceViolation {
    SizeMismatch { names: usize, topology: usize, metric: usize },
    DuplicateName { name: String },
    Metric { detail: MetricViolation },
}

impl fmt::Display for SpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceViolation::SizeMismatch { names, topology, metric } => write!(
                f,
                "sizes disagree: {names} names, topology on {topology}, metric on {metric}"
            ),
            SpaceViolation::DuplicateName { name } => write!(f, "duplicate point name {name:?}"),
            SpaceViolation::Metric { detail } => write!(f, "{detail}"),
        }
    }
}

/// Aggregated size and naming checks; topology and metric are valid by type.
pub fn validate_space(
    names: &[String],
    topology: &FiniteTopology,
    metric: &ExtPseudoMetric,
) -> std::result::Result<(), SpaceViolation> {
    if names.len() != topology.len() || names.len() != metric.len() {
        return Err(SpaceViolation::SizeMismatch {
            names: names.len(),
            topology: topology.len(),
            metric: metric.len(),
        });
    }
    let mut seen = HashSet::new();
    if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
        return Err(SpaceViolation::DuplicateName { name: dup.clone() });
    }
    Ok(())
}

/// Numeric names `"0"`, `"1"`, ...
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Makes generated names unique by suffixing repeats with `#k`.
pub(crate) fn uniquify(names: Vec<String>) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    names
        .into_iter()
        .map(|n| {
            let mut candidate = n.clone();
            let mut k = 1;
            while !seen.insert(candidate.clone()) {
                candidate = format!("{n}#{k}");
                k += 1;
            }
            candidate
        })
        .collect()
}

impl Space {
    pub fn new(
        names: Vec<String>,
        topology: FiniteTopology,
        metric: ExtPseudoMetric,
    ) -> std::result::Result<Self, SpaceViolation> {
        validate_space(&names, &topology, &metric)?;
        Ok(Self::new_unchecked(names, topology, metric))
    }

    pub(crate) fn new_unchecked(names: Vec<String>, topology: FiniteTopology, metric: ExtPseudoMetric) -> Self {
        debug_assert!(validate_space(&names, &topology, &metric).is_ok());
        Space {
            names,
            topology,
            metric,
            continuity: OnceLock::new(),
            recovered: OnceLock::new(),
        }
    }

    /// Numeric point names.
    pub fn anonymous(topology: FiniteTopology, metric: ExtPseudoMetric) -> Result<Self> {
        let names = default_names(topology.len());
        Space::new(names, topology, metric).map_err(|v| EmtError::InvalidSpace(v.to_string()))
    }

    pub fn empty() -> Self {
        Self::new_unchecked(Vec::new(), FiniteTopology::empty(), ExtPseudoMetric::zero(0))
    }

    pub fn point() -> Self {
        Self::new_unchecked(default_names(1), FiniteTopology::discrete(1), ExtPseudoMetric::zero(1))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn metric(&self) -> &ExtPseudoMetric {
        &self.metric
    }

    pub fn dist(&self, x: usize, y: usize) -> &ExtValue {
        self.metric.get(x, y)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        validate_space(&names, &self.topology, &self.metric).map_err(|v| EmtError::InvalidSpace(v.to_string()))?;
        self.names = names;
        Ok(self)
    }

    pub fn continuity_partition(&self) -> &Partition {
        self.continuity.get_or_init(|| continuity_partition(&self.topology))
    }

    /// Cached [`recovered_distance`].
    pub fn recovered(&self) -> &ExtPseudoMetric {
        self.recovered.get_or_init(|| {
            let p = self.continuity_partition();
            let q = chain_quotient_metric(&self.metric, p).expect("sizes agree");
            let n = self.len();
            let d = (0..n * n)
                .map(|i| q.get(p.class_of(i / n), p.class_of(i % n)).clone())
                .collect();
            ExtPseudoMetric::from_flat_unchecked(n, d)
        })
    }

    /// Subspace on `subset` (relative topology, restricted metric), in increasing point order.
    pub fn subspace(&self, subset: &[usize]) -> Result<Space> {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let topology = topology_subspace(&self.topology, &pts)?;
        let metric = self.metric.restrict(&pts)?;
        let names = pts.iter().map(|&x| self.names[x].clone()).collect();
        Ok(Space::new_unchecked(names, topology, metric))
    }
}

/// A map between two spaces, claimed continuous-short.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSMorphism {
    pub source: Arc<Space>,
    pub target: Arc<Space>,
    pub map: FinMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MorphismViolation {
    SizeMismatch { map_source: usize, map_target: usize, source: usize, target: usize },
    /// `y ∈ U_x` but `f(y) ∉ U_{f(x)}`.
    NotContinuous { x: usize, y: usize },
    /// `d(f x, f y) > d(x, y)`.
    NotShort { x: usize, y: usize },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::SizeMismatch { map_source, map_target, source, target } => write!(
                f,
                "map {map_source}→{map_target} between spaces of {source} and {target} points"
            ),
            MorphismViolation::NotContinuous { x, y } => {
                write!(f, "not continuous: {y} ∈ U_{x} but its image leaves U_f({x})")
            }
            MorphismViolation::NotShort { x, y } => write!(f, "not short at ({x},{y})"),
        }
    }
}

fn continuity_witness(f: &FinMap, src: &FiniteTopology, dst: &FiniteTopology) -> Option<(usize, usize)> {
    (0..src.len()).find_map(|x| {
        let fx = f.apply(x);
        src.nbhd(x).ones().find(|&y| !dst.in_nbhd(fx, f.apply(y))).map(|y| (x, y))
    })
}

/// Reports the first continuity or shortness violation.
pub fn validate_morphism(source: &Space, target: &Space, map: &FinMap) -> std::result::Result<(), MorphismViolation> {
    if map.source_size() != source.len() || map.target_size() != target.len() {
        return Err(MorphismViolation::SizeMismatch {
            map_source: map.source_size(),
            map_target: map.target_size(),
            source: source.len(),
            target: target.len(),
        });
    }
    if let Some((x, y)) = continuity_witness(map, &source.topology, &target.topology) {
        return Err(MorphismViolation::NotContinuous { x, y });
    }
    if let Some((x, y)) = source.metric.shortness_witness(map, &target.metric).expect("sizes checked") {
        return Err(MorphismViolation::NotShort { x, y });
    }
    Ok(())
}

impl CSMorphism {
    /// Validated construction.
    pub fn new(source: Arc<Space>, target: Arc<Space>, map: FinMap) -> Result<Self> {
        validate_morphism(&source, &target, &map).map_err(|v| EmtError::InvalidMorphism(v.to_string()))?;
        Ok(CSMorphism { source, target, map })
    }

    pub fn identity(space: Arc<Space>) -> Self {
        let n = space.len();
        CSMorphism { source: space.clone(), target: space, map: FinMap::identity(n) }
    }

    pub fn validate(&self) -> std::result::Result<(), MorphismViolation> {
        validate_morphism(&self.source, &self.target, &self.map)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CSMorphism) -> Result<CSMorphism> {
        if *self.target != *next.source {
            return Err(EmtError::InvalidMorphism("composition of non-composable morphisms".into()));
        }
        Ok(CSMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.then(&next.map)?,
        })
    }
}

fn require_valid_morphism(phi: &CSMorphism) -> Result<()> {
    phi.validate().map_err(|v| EmtError::InvalidMorphism(v.to_string()))
}

/// Lower semicontinuity of `d` on the product topology: `d(x,y) ≤ d(x',y')`
/// whenever `x' ∈ U_x` and `y' ∈ U_y`.
pub fn is_lsc(s: &Space) -> bool {
    let t = &s.topology;
    (0..s.len()).all(|x| {
        (0..s.len()).all(|y| {
            let base = s.dist(x, y);
            t.nbhd(x).ones().all(|x2| t.nbhd(y).ones().all(|y2| s.dist(x2, y2) >= base))
        })
    })
}

/// Supremum over bounded continuous 1-Lipschitz `f` of `|f(x) - f(y)|`, for all pairs.
pub fn recovered_distance(s: &Space) -> ExtPseudoMetric {
    s.recovered().clone()
}

/// `d` equals its recovered distance.
pub fn is_recovered(s: &Space) -> bool {
    s.recovered() == s.metric()
}

/// Independent oracle for one entry of the recovered distance.
///
/// Maximizing `f(x) - f(y)` over class-constant functions with
/// `|f(a) - f(b)| ≤ d(a,b)` is the dual of a shortest path with free moves
/// inside classes. This enumerates every chain `x = z1 ~ … ` whose visited
/// classes are pairwise distinct, by depth-first search, and returns the
/// cheapest total hop length reaching the class of `y` (`∞` if none does).
pub fn lip_sup_oracle(s: &Space, x: usize, y: usize, caps: &Caps) -> Result<ExtValue> {
    let n = s.len();
    if n > caps.oracle_points {
        return Err(EmtError::CapExceeded {
            what: "oracle",
            needed: n as u128,
            cap: caps.oracle_points as u128,
        });
    }
    if x >= n || y >= n {
        return Err(EmtError::SizeMismatch(format!("points ({x},{y}) outside {n}")));
    }
    // classes recomputed by flood fill over the neighborhood relation, not via Partition
    let mut class = vec![usize::MAX; n];
    let mut k = 0;
    for start in 0..n {
        if class[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        class[start] = k;
        while let Some(a) = stack.pop() {
            for b in 0..n {
                let linked = s.topology.in_nbhd(a, b) || s.topology.in_nbhd(b, a);
                if linked && class[b] == usize::MAX {
                    class[b] = k;
                    stack.push(b);
                }
            }
        }
        k += 1;
    }
    let target = class[y];
    let mut best = ExtValue::Infinite;
    let mut visited = vec![false; k];
    fn dfs(
        s: &Space,
        class: &[usize],
        target: usize,
        current: usize,
        cost: ExtValue,
        visited: &mut Vec<bool>,
        best: &mut ExtValue,
    ) {
        if current == target {
            if cost < *best {
                *best = cost;
            }
            return;
        }
        if cost >= *best {
            return;
        }
        visited[current] = true;
        for a in (0..class.len()).filter(|&a| class[a] == current) {
            for b in 0..class.len() {
                let c = class[b];
                if visited[c] || s.dist(a, b).is_infinite() {
                    continue;
                }
                dfs(s, class, target, c, cost.saturating_sum(s.dist(a, b)), visited, best);
            }
        }
        visited[current] = false;
    }
    dfs(s, &class, target, class[x], ExtValue::zero(), &mut visited, &mut best);
    Ok(best)
}

/// Witness `f = min(ρ(·, y), ρ(x, y))` for a finite recovered distance `ρ(x,y)`.
pub fn recovery_witness(s: &Space, x: usize, y: usize) -> Option<Vec<ExtValue>> {
    let rho = s.recovered();
    let cap = rho.get(x, y);
    if cap.is_infinite() {
        return None;
    }
    Some((0..s.len()).map(|z| rho.get(z, y).minimum(cap)).collect())
}

/// Checks that `f` is continuous (class-constant), 1-Lipschitz for `d`, and
/// that `f(x) - f(y)` equals `target`.
pub fn witness_attains(s: &Space, f: &[ExtValue], x: usize, y: usize, target: &ExtValue) -> bool {
    let p = s.continuity_partition();
    if f.len() != s.len() || f.iter().any(|v| v.is_infinite()) {
        return false;
    }
    let class_constant = (0..s.len()).all(|a| f[a] == f[p.representative(p.class_of(a))]);
    let lipschitz = (0..s.len())
        .all(|a| (0..s.len()).all(|b| f[a].abs_diff(&f[b]).is_some_and(|g| &g <= s.dist(a, b))));
    class_constant && lipschitz && f[x].checked_sub(&f[y]).as_ref() == Some(target)
}

/// Definitional e.m.t. test, cross-checked against the finite shortcut.
///
/// Definitional route: `d` is an extended metric, `d` equals its recovered
/// distance, and `τ` is the partition topology of the recovered distance's
/// zero classes. Shortcut: `τ` discrete and `d` an extended metric. A
/// disagreement is returned as [`EmtError::Inconsistent`].
pub fn is_emt(s: &Space) -> Result<bool> {
    let definitional = emt_definitional(s);
    let shortcut = s.topology.is_discrete() && s.metric.is_extended_metric();
    if definitional != shortcut {
        return Err(EmtError::Inconsistent(format!(
            "is_emt routes disagree (definitional {definitional}, shortcut {shortcut}) on {s:?}"
        )));
    }
    Ok(definitional)
}

pub(crate) fn emt_definitional(s: &Space) -> bool {
    let rho = s.recovered();
    s.metric.is_extended_metric() && rho == s.metric() && s.topology == partition_topology(&zero_classes(rho))
}

/// Classes of `x ~ y iff d(x,y) = 0` for a pseudometric.
pub fn zero_classes(m: &ExtPseudoMetric) -> Partition {
    let pairs = (0..m.len()).flat_map(|x| (0..m.len()).filter(move |&y| m.get(x, y).is_zero()).map(move |y| (x, y)));
    Partition::generated_by(m.len(), pairs).expect("pairs in range")
}

/// Which structure a morphism must respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HomKind {
    /// Any function.
    Any,
    Continuous,
    Short,
    ContinuousShort,
}

impl HomKind {
    fn continuity(self) -> bool {
        matches!(self, HomKind::Continuous | HomKind::ContinuousShort)
    }

    fn shortness(self) -> bool {
        matches!(self, HomKind::Short | HomKind::ContinuousShort)
    }

    /// Whether `map` is a morphism of this kind.
    pub fn admits(self, src: &Space, dst: &Space, map: &FinMap) -> bool {
        if map.source_size() != src.len() || map.target_size() != dst.len() {
            return false;
        }
        (!self.continuity() || continuous_by_neighborhoods(map, &src.topology, &dst.topology))
            && (!self.shortness() || src.metric.is_short_map(map, &dst.metric).unwrap_or(false))
    }
}

/// All morphisms of `kind` from `src` to `dst`, in lexicographic order of images.
///
/// Backtracking assigns images point by point; continuity is the pairwise
/// condition `y ∈ U_x ⟹ f(y) ∈ U_{f(x)}` and shortness is pairwise, so every
/// partial assignment is checked against the points already placed.
pub fn enumerate_homs(kind: HomKind, src: &Space, dst: &Space, config: &Config) -> Result<Vec<FinMap>> {
    config.caps.check_enumeration("morphism enumeration", dst.len(), src.len())?;
    let (n, m) = (src.len(), dst.len());
    if n == 0 {
        return Ok(vec![FinMap::new_unchecked(m, Vec::new())]);
    }
    let shards = exec::map_range(config.exec, m, |first| {
        let mut out = Vec::new();
        let mut image = vec![first];
        extend_homs(kind, src, dst, &mut image, &mut out);
        out
    });
    Ok(shards.into_iter().flatten().map(|img| FinMap::new_unchecked(m, img)).collect())
}

fn compatible(kind: HomKind, src: &Space, dst: &Space, image: &[usize], i: usize, v: usize) -> bool {
    (0..i).all(|j| {
        let w = image[j];
        if kind.continuity() {
            let (st, dt) = (&src.topology, &dst.topology);
            if st.in_nbhd(j, i) && !dt.in_nbhd(w, v) {
                return false;
            }
            if st.in_nbhd(i, j) && !dt.in_nbhd(v, w) {
                return false;
            }
        }
        !kind.shortness() || dst.dist(v, w) <= src.dist(i, j)
    })
}

fn extend_homs(kind: HomKind, src: &Space, dst: &Space, image: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = image.len();
    if i == 1 && !compatible(kind, src, dst, image, 0, image[0]) {
        return;
    }
    if i == src.len() {
        out.push(image.clone());
        return;
    }
    for v in 0..dst.len() {
        if compatible(kind, src, dst, image, i, v) {
            image.push(v);
            extend_homs(kind, src, dst, image, out);
            image.pop();
        }
    }
}

/// All continuous-short maps `src → dst`.
pub fn enumerate_cs_morphisms(src: &Arc<Space>, dst: &Arc<Space>, config: &Config) -> Result<Vec<CSMorphism>> {
    Ok(enumerate_homs(HomKind::ContinuousShort, src, dst, config)?
        .into_iter()
        .map(|map| CSMorphism { source: src.clone(), target: dst.clone(), map })
        .collect())
}

/// Bijective, open and distance-preserving.
pub fn is_isomorphism(phi: &CSMorphism) -> Result<bool> {
    require_valid_morphism(phi)?;
    Ok(is_iso_map(&phi.source, &phi.target, &phi.map))
}

/// Isomorphism test for a bare map, without requiring a prior validity check.
pub fn is_iso_map(src: &Space, dst: &Space, map: &FinMap) -> bool {
    let Some(inverse) = map.inverse() else {
        return false;
    };
    map.source_size() == src.len()
        && map.target_size() == dst.len()
        && continuous_by_neighborhoods(map, &src.topology, &dst.topology)
        && continuous_by_neighborhoods(&inverse, &dst.topology, &src.topology)
        && src.metric.is_distance_preserving(map, &dst.metric)
}

/// Injective, distance-preserving, and a homeomorphism onto the image with
/// its relative topology.
pub fn is_embedding(phi: &CSMorphism) -> Result<bool> {
    require_valid_morphism(phi)?;
    Ok(is_embedding_map(&phi.source, &phi.target, &phi.map))
}

pub fn is_embedding_map(src: &Space, dst: &Space, map: &FinMap) -> bool {
    if !map.is_injective() || !src.metric.is_distance_preserving(map, &dst.metric) {
        return false;
    }
    let mut image: Vec<usize> = map.image().to_vec();
    image.sort_unstable();
    let sub = topology_subspace(&dst.topology, &image).expect("image in range");
    let corestricted = FinMap::new_unchecked(
        image.len(),
        map.image().iter().map(|y| image.binary_search(y).expect("in image")).collect(),
    );
    let inverse = corestricted.inverse().expect("injective corestriction is bijective");
    is_continuous(&corestricted, &src.topology, &sub).unwrap_or(false)
        && is_continuous(&inverse, &sub, &src.topology).unwrap_or(false)
}

/// Dense image: the closure of `φ(X)` is the whole target.
pub fn has_dense_image(phi: &CSMorphism) -> bool {
    let t = &phi.target.topology;
    let img = point_set(t.len(), phi.map.image().iter().copied());
    // closure = complement of the largest open set missing the image
    (0..t.len()).all(|y| !t.nbhd(y).is_disjoint(&img))
}

/// Left-cancellation over probe spaces: `φ∘g = φ∘h ⟹ g = h`.
pub fn is_mono_by_cancellation(phi: &CSMorphism, probes: &[Arc<Space>], config: &Config) -> Result<bool> {
    for p in probes {
        let homs = enumerate_cs_morphisms(p, &phi.source, config)?;
        let mut seen: HashSet<FinMap> = HashSet::new();
        for g in &homs {
            if !seen.insert(g.map.then(&phi.map)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Right-cancellation over probe spaces: `g∘φ = h∘φ ⟹ g = h`.
pub fn is_epi_by_cancellation(phi: &CSMorphism, probes: &[Arc<Space>], config: &Config) -> Result<bool> {
    for q in probes {
        let homs = enumerate_cs_morphisms(&phi.target, q, config)?;
        let mut seen: HashSet<FinMap> = HashSet::new();
        for g in &homs {
            if !seen.insert(phi.map.then(&g.map)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmetric::tests::{metric, v};
    use crate::gen::all_topologies;

    fn space(t: FiniteTopology, m: ExtPseudoMetric) -> Space {
        Space::anonymous(t, m).unwrap()
    }

    fn sierpinski(d: &str) -> Space {
        space(FiniteTopology::sierpinski(), metric(&[&["0", d], &[d, "0"]]))
    }

    fn discrete2(d: &str) -> Space {
        space(FiniteTopology::discrete(2), metric(&[&["0", d], &[d, "0"]]))
    }

    #[test]
    fn validate_examples() {
        assert!(validate_space(&default_names(2), &FiniteTopology::sierpinski(), &ExtPseudoMetric::zero(2)).is_ok());
        assert!(Space::anonymous(FiniteTopology::discrete(2), metric(&[&["0", "1"], &["1", "0"]])).is_ok());
        assert!(matches!(
            validate_space(&default_names(2), &FiniteTopology::discrete(3), &ExtPseudoMetric::zero(2)),
            Err(SpaceViolation::SizeMismatch { .. })
        ));
        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(matches!(
            validate_space(&dup, &FiniteTopology::discrete(2), &ExtPseudoMetric::zero(2)),
            Err(SpaceViolation::DuplicateName { .. })
        ));
    }

    #[test]
    fn morphism_validation() {
        let s = Arc::new(discrete2("2"));
        let t = Arc::new(space(
            FiniteTopology::discrete(3),
            metric(&[&["0", "3", "1"], &["3", "0", "2"], &["1", "2", "0"]]),
        ));
        assert!(CSMorphism::identity(s.clone()).validate().is_ok());
        assert!(validate_morphism(&s, &t, &FinMap::constant(2, 3, 2).unwrap()).is_ok());
        assert_eq!(
            validate_morphism(&s, &t, &FinMap::new(3, vec![0, 1]).unwrap()),
            Err(MorphismViolation::NotShort { x: 0, y: 1 })
        );
        let sier = sierpinski("0");
        let disc = space(FiniteTopology::discrete(2), ExtPseudoMetric::zero(2));
        assert_eq!(
            validate_morphism(&sier, &disc, &FinMap::identity(2)),
            Err(MorphismViolation::NotContinuous { x: 0, y: 1 })
        );
    }

    #[test]
    fn lsc_examples() {
        assert!(is_lsc(&space(
            FiniteTopology::discrete(3),
            metric(&[&["0", "3", "1"], &["3", "0", "2"], &["1", "2", "0"]])
        )));
        assert!(!is_lsc(&sierpinski("1")));
        assert!(is_lsc(&space(FiniteTopology::indiscrete(3), ExtPseudoMetric::zero(3))));
    }

    #[test]
    fn recovered_examples() {
        let m = metric(&[&["0", "3", "1"], &["3", "0", "2"], &["1", "2", "0"]]);
        let d3 = space(FiniteTopology::discrete(3), m.clone());
        assert_eq!(recovered_distance(&d3), m);

        assert_eq!(recovered_distance(&sierpinski("1")), ExtPseudoMetric::zero(2));

        // points on a line at 0, 2, 3, 5 with classes {0,1},{2,3}
        let t = partition_topology(&Partition::from_labels(&[0, 0, 1, 1]));
        let pos = [0i64, 2, 3, 5];
        let m = ExtPseudoMetric::from_fn(4, |x, y| ExtValue::int((pos[x] - pos[y]).unsigned_abs()));
        let s = space(t, m.unwrap());
        let rho = recovered_distance(&s);
        assert_eq!(rho.get(0, 3), &v("1"));
        assert_eq!(lip_sup_oracle(&s, 0, 3, &Caps::default()).unwrap(), v("1"));
    }

    #[test]
    fn oracle_examples() {
        let caps = Caps::default();
        assert_eq!(lip_sup_oracle(&discrete2("1"), 0, 1, &caps).unwrap(), v("1"));
        assert_eq!(lip_sup_oracle(&sierpinski("1"), 0, 1, &caps).unwrap(), v("0"));
        assert_eq!(lip_sup_oracle(&discrete2("inf"), 0, 1, &caps).unwrap(), ExtValue::Infinite);
        let big = space(FiniteTopology::discrete(7), ExtPseudoMetric::zero(7));
        assert!(lip_sup_oracle(&big, 0, 1, &caps).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn emt_examples() {
        assert!(is_emt(&discrete2("1")).unwrap());
        assert!(!is_emt(&sierpinski("1")).unwrap());
        assert!(!is_emt(&discrete2("0")).unwrap());
        assert!(is_emt(&Space::empty()).unwrap());
        assert!(is_emt(&Space::point()).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let cfg = Config::default();
        let pt = Arc::new(Space::point());
        assert_eq!(enumerate_cs_morphisms(&pt, &pt, &cfg).unwrap().len(), 1);

        let one = Arc::new(discrete2("1"));
        assert_eq!(enumerate_cs_morphisms(&one, &one, &cfg).unwrap().len(), 4);

        let three = Arc::new(discrete2("3"));
        assert_eq!(enumerate_cs_morphisms(&three, &one, &cfg).unwrap().len(), 4);
        let homs = enumerate_cs_morphisms(&one, &three, &cfg).unwrap();
        let images: Vec<&[usize]> = homs.iter().map(|h| h.map.image()).collect();
        assert_eq!(images, vec![&[0, 0][..], &[1, 1][..]]);

        let big = Arc::new(space(FiniteTopology::discrete(13), ExtPseudoMetric::zero(13)));
        assert!(enumerate_cs_morphisms(&big, &one, &cfg).unwrap_err().is_cap_exceeded());
        let e = Arc::new(Space::empty());
        assert_eq!(enumerate_cs_morphisms(&e, &one, &cfg).unwrap().len(), 1);
        assert_eq!(enumerate_cs_morphisms(&one, &e, &cfg).unwrap().len(), 0);
    }

    #[test]
    fn enumeration_matches_filtering_all_maps() {
        let cfg = Config::default();
        let grid = ["0", "1", "inf"];
        let mut spaces = Vec::new();
        for t in all_topologies(2) {
            for d in grid {
                spaces.push(space(t.clone(), metric(&[&["0", d], &[d, "0"]])));
            }
        }
        for t in all_topologies(3).into_iter().step_by(4) {
            spaces.push(space(t, metric(&[&["0", "1", "1"], &["1", "0", "2"], &["1", "2", "0"]])));
        }
        for a in &spaces {
            for b in &spaces {
                for kind in [HomKind::Any, HomKind::Continuous, HomKind::Short, HomKind::ContinuousShort] {
                    let fast = enumerate_homs(kind, a, b, &cfg).unwrap();
                    let slow: Vec<FinMap> = all_maps(a.len(), b.len())
                        .into_iter()
                        .filter(|f| kind.admits(a, b, f))
                        .collect();
                    assert_eq!(fast, slow);
                    if kind == HomKind::ContinuousShort {
                        for f in &slow {
                            assert!(validate_morphism(a, b, f).is_ok());
                        }
                    }
                }
            }
        }
    }

    fn all_maps(n: usize, m: usize) -> Vec<FinMap> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|f: Vec<usize>| (0..m).map(move |v| [f.clone(), vec![v]].concat()))
                .collect();
        }
        out.into_iter().map(|img| FinMap::new(m, img).unwrap()).collect()
    }

    #[test]
    fn isomorphism_examples() {
        let s = Arc::new(space(
            FiniteTopology::discrete(3),
            metric(&[&["0", "2", "4"], &["2", "0", "2"], &["4", "2", "0"]]),
        ));
        assert!(is_isomorphism(&CSMorphism::identity(s.clone())).unwrap());

        let half = Arc::new(space(
            FiniteTopology::discrete(3),
            metric(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]),
        ));
        let phi = CSMorphism::new(s.clone(), half, FinMap::identity(3)).unwrap();
        assert!(!is_isomorphism(&phi).unwrap());

        // relabelling 0↔2 of a space with the same shape
        let relabel = CSMorphism::new(s.clone(), s.clone(), FinMap::new(3, vec![2, 1, 0]).unwrap()).unwrap();
        assert!(is_isomorphism(&relabel).unwrap());

        // continuous bijection that is not open
        let sier = Arc::new(sierpinski("0"));
        let ind = Arc::new(space(FiniteTopology::indiscrete(2), ExtPseudoMetric::zero(2)));
        let phi = CSMorphism::new(sier, ind, FinMap::identity(2)).unwrap();
        assert!(!is_isomorphism(&phi).unwrap());
    }

    #[test]
    fn embedding_examples() {
        let m = metric(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]);
        let x = Arc::new(space(FiniteTopology::discrete(3), m));
        let sub = Arc::new(x.subspace(&[0, 2]).unwrap());
        let incl = CSMorphism::new(sub.clone(), x.clone(), FinMap::new(3, vec![0, 2]).unwrap()).unwrap();
        assert!(is_embedding(&incl).unwrap());

        let collapse = CSMorphism::new(x.clone(), x.clone(), FinMap::constant(3, 3, 1).unwrap()).unwrap();
        assert!(!is_embedding(&collapse).unwrap());

        let shrink = CSMorphism::new(sub, x.clone(), FinMap::new(3, vec![0, 1]).unwrap()).unwrap();
        assert!(!is_embedding(&shrink).unwrap());

        // subspace inclusion of a non-discrete space embeds too
        let sier = Arc::new(space(
            FiniteTopology::from_minimal_neighborhoods(3, &[vec![0, 1], vec![1], vec![2]]).unwrap(),
            ExtPseudoMetric::zero(3),
        ));
        let part = Arc::new(sier.subspace(&[0, 1]).unwrap());
        let incl = CSMorphism::new(part, sier, FinMap::new(3, vec![0, 1]).unwrap()).unwrap();
        assert!(is_embedding(&incl).unwrap());
    }

    #[test]
    fn witness_examples() {
        let m = metric(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]);
        let s = space(FiniteTopology::discrete(3), m);
        let f = recovery_witness(&s, 0, 2).unwrap();
        assert!(witness_attains(&s, &f, 0, 2, &v("2")));
        assert!(recovery_witness(&discrete2("inf"), 0, 1).is_none());
    }
}
