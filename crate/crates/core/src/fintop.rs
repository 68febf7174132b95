//! Finite topologies.
//!
//! A topology on a finite set is determined by the minimal neighborhoods
//! `U_x` (the intersection of all opens containing `x`); the opens are exactly
//! the sets `O` with `U_x ⊆ O` for every `x ∈ O`. [`FiniteTopology`] stores the
//! family `(U_x)_x`, which is canonical, so derived `PartialEq` is equality of
//! topologies. The explicit open family is materialized on demand.
//!
//! The specialization preorder is `x ≤ y iff x ∈ U_y`.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{EmtError, Result};
use crate::finmap::FinMap;
use crate::partition::Partition;

pub type PointSet = FixedBitSet;

pub(crate) fn point_set(n: usize, members: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    for x in members {
        s.insert(x);
    }
    s
}

pub(crate) fn members(s: &PointSet) -> Vec<usize> {
    s.ones().collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    n: usize,
    nbhd: Vec<PointSet>,
}

impl fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<Vec<usize>> = self.nbhd.iter().map(members).collect();
        f.debug_struct("FiniteTopology")
            .field("n", &self.n)
            .field("minimal_neighborhoods", &sets)
            .finish()
    }
}

/// Why an explicit family of subsets is not a topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum TopologyViolation {
    PointOutOfRange { open: usize, point: usize },
    MissingEmptySet,
    MissingFullSet,
    UnionNotOpen { first: Vec<usize>, second: Vec<usize> },
    IntersectionNotOpen { first: Vec<usize>, second: Vec<usize> },
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyViolation::PointOutOfRange { open, point } => {
                write!(f, "open #{open} mentions point {point} out of range")
            }
            TopologyViolation::MissingEmptySet => f.write_str("family lacks the empty set"),
            TopologyViolation::MissingFullSet => f.write_str("family lacks the whole space"),
            TopologyViolation::UnionNotOpen { first, second } => {
                write!(f, "union of {first:?} and {second:?} is not in the family")
            }
            TopologyViolation::IntersectionNotOpen { first, second } => {
                write!(f, "intersection of {first:?} and {second:?} is not in the family")
            }
        }
    }
}

/// Checks the topology axioms on an explicit family of subsets of `0..n`.
///
/// Pairwise closure suffices on a finite set. Reports the first violation in
/// the order: range, `∅`, whole space, then pairs in family order.
pub fn validate_topology(n: usize, opens: &[Vec<usize>]) -> std::result::Result<(), TopologyViolation> {
    for (i, o) in opens.iter().enumerate() {
        if let Some(&p) = o.iter().find(|&&p| p >= n) {
            return Err(TopologyViolation::PointOutOfRange { open: i, point: p });
        }
    }
    let sets: Vec<PointSet> = opens.iter().map(|o| point_set(n, o.iter().copied())).collect();
    let family: HashSet<&PointSet> = sets.iter().collect();
    if !family.contains(&PointSet::with_capacity(n)) {
        return Err(TopologyViolation::MissingEmptySet);
    }
    if !family.contains(&point_set(n, 0..n)) {
        return Err(TopologyViolation::MissingFullSet);
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let pair = || (members(&sets[i]), members(&sets[j]));
            let mut u = sets[i].clone();
            u.union_with(&sets[j]);
            if !family.contains(&u) {
                let (first, second) = pair();
                return Err(TopologyViolation::UnionNotOpen { first, second });
            }
            let mut m = sets[i].clone();
            m.intersect_with(&sets[j]);
            if !family.contains(&m) {
                let (first, second) = pair();
                return Err(TopologyViolation::IntersectionNotOpen { first, second });
            }
        }
    }
    Ok(())
}

/// Specialization preorder as a dense boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecializationPreorder {
    n: usize,
    leq: Vec<bool>,
}

impl SpecializationPreorder {
    /// Reflexive-transitive closure of an arbitrary relation.
    pub fn closure_of(n: usize, relation: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for (a, b) in relation {
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        SpecializationPreorder { n, leq }
    }

    /// Accepts a matrix only if it is reflexive and transitive.
    pub fn from_matrix(n: usize, leq: Vec<bool>) -> Option<Self> {
        if leq.len() != n * n || (0..n).any(|x| !leq[x * n + x]) {
            return None;
        }
        for i in 0..n {
            for k in 0..n {
                if leq[i * n + k] && (0..n).any(|j| leq[k * n + j] && !leq[i * n + j]) {
                    return None;
                }
            }
        }
        Some(SpecializationPreorder { n, leq })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }
}

impl FiniteTopology {
    /// From an explicit open family, which must satisfy the axioms.
    pub fn from_opens(n: usize, opens: &[Vec<usize>]) -> std::result::Result<Self, TopologyViolation> {
        validate_topology(n, opens)?;
        let sets: Vec<PointSet> = opens.iter().map(|o| point_set(n, o.iter().copied())).collect();
        let nbhd = (0..n)
            .map(|x| {
                let mut u = point_set(n, 0..n);
                for s in sets.iter().filter(|s| s.contains(x)) {
                    u.intersect_with(s);
                }
                u
            })
            .collect();
        Ok(FiniteTopology { n, nbhd })
    }

    /// From a family of minimal neighborhoods `U_x`.
    ///
    /// Requires `x ∈ U_x` and `y ∈ U_x ⟹ U_y ⊆ U_x`.
    pub fn from_minimal_neighborhoods(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.len() != n {
            return Err(EmtError::InvalidTopology(format!(
                "expected {n} neighborhoods, got {}",
                sets.len()
            )));
        }
        if let Some(p) = sets.iter().flatten().find(|&&p| p >= n) {
            return Err(EmtError::InvalidTopology(format!("point {p} out of range")));
        }
        let nbhd: Vec<PointSet> = sets.iter().map(|s| point_set(n, s.iter().copied())).collect();
        for x in 0..n {
            if !nbhd[x].contains(x) {
                return Err(EmtError::InvalidTopology(format!("U_{x} does not contain {x}")));
            }
            if let Some(y) = nbhd[x].ones().find(|&y| !nbhd[y].is_subset(&nbhd[x])) {
                return Err(EmtError::InvalidTopology(format!(
                    "{y} ∈ U_{x} but U_{y} ⊄ U_{x}"
                )));
            }
        }
        Ok(FiniteTopology { n, nbhd })
    }

    pub(crate) fn from_nbhd_unchecked(n: usize, nbhd: Vec<PointSet>) -> Self {
        debug_assert_eq!(nbhd.len(), n);
        FiniteTopology { n, nbhd }
    }

    /// `U_y = {x | x ≤ y}`.
    pub fn from_preorder(p: &SpecializationPreorder) -> Self {
        let n = p.len();
        let nbhd = (0..n).map(|y| point_set(n, (0..n).filter(|&x| p.leq(x, y)))).collect();
        FiniteTopology { n, nbhd }
    }

    pub fn empty() -> Self {
        FiniteTopology { n: 0, nbhd: Vec::new() }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_nbhd_unchecked(n, (0..n).map(|x| point_set(n, [x])).collect())
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::from_nbhd_unchecked(n, (0..n).map(|_| point_set(n, 0..n)).collect())
    }

    /// Opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        Self::from_nbhd_unchecked(2, vec![point_set(2, [0, 1]), point_set(2, [1])])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn minimal_neighborhoods(&self) -> &[PointSet] {
        &self.nbhd
    }

    pub fn nbhd(&self, x: usize) -> &PointSet {
        &self.nbhd[x]
    }

    pub fn in_nbhd(&self, x: usize, y: usize) -> bool {
        self.nbhd[x].contains(y)
    }

    pub fn specialization_preorder(&self) -> SpecializationPreorder {
        let n = self.n;
        let mut leq = vec![false; n * n];
        for y in 0..n {
            for x in self.nbhd[y].ones() {
                leq[x * n + y] = true;
            }
        }
        SpecializationPreorder { n, leq }
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        set.ones().all(|x| self.nbhd[x].is_subset(set))
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        let mut complement = point_set(self.n, 0..self.n);
        complement.difference_with(set);
        self.is_open(&complement)
    }

    /// All open sets, sorted lexicographically by member list.
    pub fn opens(&self, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut frontier = vec![PointSet::with_capacity(self.n)];
        seen.insert(PointSet::with_capacity(self.n));
        while let Some(o) = frontier.pop() {
            for x in 0..self.n {
                if o.contains(x) {
                    continue;
                }
                let mut u = o.clone();
                u.union_with(&self.nbhd[x]);
                if seen.insert(u.clone()) {
                    if seen.len() > caps.opens {
                        return Err(EmtError::CapExceeded {
                            what: "open family",
                            needed: seen.len() as u128,
                            cap: caps.opens as u128,
                        });
                    }
                    frontier.push(u);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.iter().map(members).collect();
        out.sort();
        Ok(out)
    }

    /// Closed sets (complements of opens), sorted by member list.
    pub fn closed_sets(&self, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<usize>> = self
            .opens(caps)?
            .into_iter()
            .map(|o| (0..self.n).filter(|x| !o.contains(x)).collect())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|x| self.nbhd[x].count_ones(..) == 1)
    }

    /// Distinct points have disjoint neighborhoods.
    ///
    /// On a finite space this coincides with discreteness; the two are
    /// computed separately and compared.
    pub fn is_hausdorff(&self) -> bool {
        let separated = (0..self.n)
            .all(|x| (x + 1..self.n).all(|y| self.nbhd[x].is_disjoint(&self.nbhd[y])));
        debug_assert_eq!(separated, self.is_discrete());
        separated
    }
}

/// Minimal neighborhoods as sorted member lists.
pub fn minimal_neighborhoods(t: &FiniteTopology) -> Vec<Vec<usize>> {
    t.nbhd.iter().map(members).collect()
}

/// Connected components of the relation `y ∈ U_x`.
///
/// A real-valued function on the space is continuous exactly when it is
/// constant on each class.
pub fn continuity_partition(t: &FiniteTopology) -> Partition {
    let pairs = (0..t.n).flat_map(|x| t.nbhd[x].ones().map(move |y| (x, y)));
    Partition::generated_by(t.n, pairs).expect("pairs are in range")
}

/// Opens are the unions of classes.
pub fn partition_topology(p: &Partition) -> FiniteTopology {
    let n = p.len();
    let nbhd = (0..n)
        .map(|x| point_set(n, p.class(p.class_of(x)).iter().copied()))
        .collect();
    FiniteTopology { n, nbhd }
}

fn check_map_sizes(f: &FinMap, src: &FiniteTopology, dst: &FiniteTopology) -> Result<()> {
    if f.source_size() != src.len() || f.target_size() != dst.len() {
        return Err(EmtError::SizeMismatch(format!(
            "map {}→{} against topologies on {} and {} points",
            f.source_size(),
            f.target_size(),
            src.len(),
            dst.len()
        )));
    }
    Ok(())
}

/// `f(U_x) ⊆ U_{f(x)}` for every `x`.
pub(crate) fn continuous_by_neighborhoods(f: &FinMap, src: &FiniteTopology, dst: &FiniteTopology) -> bool {
    (0..src.len()).all(|x| {
        let fx = f.apply(x);
        src.nbhd[x].ones().all(|y| dst.nbhd[fx].contains(f.apply(y)))
    })
}

/// Preimage of every basic open `U_y` is open.
pub(crate) fn continuous_by_preimages(f: &FinMap, src: &FiniteTopology, dst: &FiniteTopology) -> bool {
    (0..dst.len()).all(|y| {
        let pre = point_set(src.len(), (0..src.len()).filter(|&x| dst.nbhd[y].contains(f.apply(x))));
        src.is_open(&pre)
    })
}

/// Continuity, computed by two routes that must agree.
pub fn is_continuous(f: &FinMap, src: &FiniteTopology, dst: &FiniteTopology) -> Result<bool> {
    check_map_sizes(f, src, dst)?;
    let by_nbhd = continuous_by_neighborhoods(f, src, dst);
    let by_preimage = continuous_by_preimages(f, src, dst);
    if by_nbhd != by_preimage {
        return Err(EmtError::Inconsistent(format!(
            "continuity routes disagree for {:?}",
            f.image()
        )));
    }
    Ok(by_nbhd)
}

/// Strides for lexicographic indexing of a product (first factor most significant).
pub(crate) fn product_strides(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    strides
}

/// Decomposes a product index into coordinates.
pub(crate) fn product_coords(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        if sizes[i] == 0 {
            return coords;
        }
        coords[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    coords
}

pub(crate) fn product_size(sizes: &[usize], caps: &Caps) -> Result<usize> {
    let total = sizes
        .iter()
        .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
        .unwrap_or(u128::MAX);
    caps.check_product(total)?;
    Ok(total as usize)
}

/// Product topology on the lexicographically indexed product set.
pub fn topology_product(ts: &[FiniteTopology], caps: &Caps) -> Result<FiniteTopology> {
    let sizes: Vec<usize> = ts.iter().map(|t| t.len()).collect();
    let total = product_size(&sizes, caps)?;
    let strides = product_strides(&sizes);
    let nbhd = (0..total)
        .map(|idx| {
            let coords = product_coords(idx, &sizes);
            // U_(x1..xk) = U_x1 × ... × U_xk
            let mut acc = vec![0usize];
            for (i, t) in ts.iter().enumerate() {
                let factor: Vec<usize> = t.nbhd[coords[i]].ones().collect();
                let stride = strides[i];
                acc = acc
                    .iter()
                    .flat_map(|&a| factor.iter().map(move |&c| a + c * stride))
                    .collect();
            }
            point_set(total, acc)
        })
        .collect();
    Ok(FiniteTopology { n: total, nbhd })
}

/// Relative topology on `subset`, reindexed in increasing point order.
pub fn topology_subspace(t: &FiniteTopology, subset: &[usize]) -> Result<FiniteTopology> {
    let mut pts = subset.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if let Some(&p) = pts.iter().find(|&&p| p >= t.n) {
        return Err(EmtError::SizeMismatch(format!("point {p} outside {} points", t.n)));
    }
    let m = pts.len();
    let nbhd = pts
        .iter()
        .map(|&x| point_set(m, (0..m).filter(|&j| t.nbhd[x].contains(pts[j]))))
        .collect();
    Ok(FiniteTopology { n: m, nbhd })
}

/// Quotient topology on the classes of `p`.
pub fn topology_quotient(t: &FiniteTopology, p: &Partition) -> Result<FiniteTopology> {
    if p.len() != t.n {
        return Err(EmtError::SizeMismatch(format!(
            "partition over {} points, topology over {}",
            p.len(),
            t.n
        )));
    }
    let k = p.num_classes();
    let nbhd = (0..k)
        .map(|c| {
            // smallest saturated open set containing the class
            let mut s = point_set(t.n, p.class(c).iter().copied());
            loop {
                let mut next = s.clone();
                for x in s.ones() {
                    next.union_with(&t.nbhd[x]);
                    for &z in p.class(p.class_of(x)) {
                        next.insert(z);
                    }
                }
                if next == s {
                    break;
                }
                s = next;
            }
            point_set(k, s.ones().map(|x| p.class_of(x)))
        })
        .collect();
    Ok(FiniteTopology { n: k, nbhd })
}

/// Coproduct topology; summand `i` occupies a contiguous block after summands `< i`.
pub fn topology_disjoint_union(ts: &[FiniteTopology]) -> FiniteTopology {
    let total: usize = ts.iter().map(|t| t.n).sum();
    let mut nbhd = Vec::with_capacity(total);
    let mut offset = 0;
    for t in ts {
        for u in &t.nbhd {
            nbhd.push(point_set(total, u.ones().map(|y| y + offset)));
        }
        offset += t.n;
    }
    FiniteTopology { n: total, nbhd }
}

pub fn is_hausdorff(t: &FiniteTopology) -> bool {
    t.is_hausdorff()
}
