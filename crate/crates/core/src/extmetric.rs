//! Extended pseudometrics as exact matrices, and the metric half of every
//! construction: quotient chain distances, sup products, block unions,
//! truncation, finiteness components, completion and length distance.

use std::fmt;

use serde::Serialize;

use crate::config::Caps;
use crate::error::{EmtError, Result};
use crate::finmap::FinMap;
use crate::fintop::{product_coords, product_size};
use crate::partition::Partition;
use crate::value::ExtValue;

/// Symmetric `[0,∞]`-valued matrix, zero on the diagonal, satisfying the
/// triangle inequality. Construct with [`ExtPseudoMetric::new`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtPseudoMetric {
    n: usize,
    d: Vec<ExtValue>,
}

impl fmt::Debug for ExtPseudoMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MetricViolation {
    NotSquare { row: usize, len: usize, expected: usize },
    NonzeroDiagonal { x: usize },
    Asymmetric { x: usize, y: usize },
    /// `d(x,y) > d(x,via) + d(via,y)`.
    Triangle { x: usize, via: usize, y: usize },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            MetricViolation::NonzeroDiagonal { x } => write!(f, "d({x},{x}) is not zero"),
            MetricViolation::Asymmetric { x, y } => write!(f, "d({x},{y}) ≠ d({y},{x})"),
            MetricViolation::Triangle { x, via, y } => {
                write!(f, "d({x},{y}) > d({x},{via}) + d({via},{y})")
            }
        }
    }
}

/// Checks the extended-pseudodistance axioms and reports the first failure.
pub fn validate_pseudometric(rows: &[Vec<ExtValue>]) -> std::result::Result<(), MetricViolation> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(MetricViolation::NotSquare { row, len: r.len(), expected: n });
        }
    }
    for x in 0..n {
        if !rows[x][x].is_zero() {
            return Err(MetricViolation::NonzeroDiagonal { x });
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if rows[x][y] != rows[y][x] {
                return Err(MetricViolation::Asymmetric { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for via in 0..n {
                if rows[x][y] > rows[x][via].saturating_sum(&rows[via][y]) {
                    return Err(MetricViolation::Triangle { x, via, y });
                }
            }
        }
    }
    Ok(())
}

/// In-place all-pairs shortest paths over `([0,∞], min, +)`.
pub fn shortest_path_closure(n: usize, d: &mut [ExtValue]) {
    assert_eq!(d.len(), n * n);
    for k in 0..n {
        for i in 0..n {
            if d[i * n + k].is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = d[i * n + k].saturating_sum(&d[k * n + j]);
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
}

impl ExtPseudoMetric {
    pub fn new(rows: Vec<Vec<ExtValue>>) -> std::result::Result<Self, MetricViolation> {
        validate_pseudometric(&rows)?;
        let n = rows.len();
        Ok(ExtPseudoMetric { n, d: rows.into_iter().flatten().collect() })
    }

    pub(crate) fn from_flat_unchecked(n: usize, d: Vec<ExtValue>) -> Self {
        debug_assert_eq!(d.len(), n * n);
        let m = ExtPseudoMetric { n, d };
        debug_assert!(validate_pseudometric(&m.rows()).is_ok(), "{m:?}");
        m
    }

    /// Builds `d(x,y) = f(x,y)` for `x < y`, mirrored, with zero diagonal.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> ExtValue) -> std::result::Result<Self, MetricViolation> {
        let mut rows = vec![vec![ExtValue::zero(); n]; n];
        for x in 0..n {
            for y in x + 1..n {
                let v = f(x, y);
                rows[x][y] = v.clone();
                rows[y][x] = v;
            }
        }
        Self::new(rows)
    }

    /// `λ` off the diagonal. Every `λ` gives a valid pseudometric.
    pub fn constant_off_diagonal(n: usize, lambda: &ExtValue) -> Self {
        let d = (0..n * n)
            .map(|i| if i / n.max(1) == i % n.max(1) { ExtValue::zero() } else { lambda.clone() })
            .collect();
        Self::from_flat_unchecked(n, d)
    }

    pub fn zero(n: usize) -> Self {
        Self::constant_off_diagonal(n, &ExtValue::zero())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, x: usize, y: usize) -> &ExtValue {
        &self.d[x * self.n + y]
    }

    pub fn rows(&self) -> Vec<Vec<ExtValue>> {
        (0..self.n).map(|x| self.d[x * self.n..(x + 1) * self.n].to_vec()).collect()
    }

    /// Largest finite off-diagonal entry, if any.
    pub fn max_finite(&self) -> Option<&ExtValue> {
        self.d.iter().filter(|v| v.is_finite()).max()
    }

    /// Supremum of all entries (zero for fewer than two points).
    pub fn diameter(&self) -> ExtValue {
        self.d.iter().max().cloned().unwrap_or_else(ExtValue::zero)
    }

    /// Vanishes only on the diagonal.
    pub fn is_extended_metric(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| x == y || !self.get(x, y).is_zero()))
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &ExtPseudoMetric) -> bool {
        self.n == other.n && self.d.iter().zip(&other.d).all(|(a, b)| a <= b)
    }

    /// `d(x, C) = min_{c∈C} d(x,c)`, `∞` for empty `C`.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> ExtValue {
        set.iter().map(|&c| self.get(x, c)).min().cloned().unwrap_or(ExtValue::Infinite)
    }

    /// Restriction to `subset`, reindexed in increasing point order.
    pub fn restrict(&self, subset: &[usize]) -> Result<ExtPseudoMetric> {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if let Some(&p) = pts.iter().find(|&&p| p >= self.n) {
            return Err(EmtError::SizeMismatch(format!("point {p} outside {} points", self.n)));
        }
        let d = pts
            .iter()
            .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.get(x, y).clone())
            .collect();
        Ok(Self::from_flat_unchecked(pts.len(), d))
    }

    /// `d(f x, f y) ≤ self(x,y)` for all pairs, `target` being the codomain metric.
    pub fn is_short_map(&self, f: &FinMap, target: &ExtPseudoMetric) -> Result<bool> {
        Ok(self.shortness_witness(f, target)?.is_none())
    }

    /// First pair `(x,y)` violating shortness.
    pub fn shortness_witness(&self, f: &FinMap, target: &ExtPseudoMetric) -> Result<Option<(usize, usize)>> {
        if f.source_size() != self.n || f.target_size() != target.n {
            return Err(EmtError::SizeMismatch(format!(
                "map {}→{} against metrics on {} and {} points",
                f.source_size(),
                f.target_size(),
                self.n,
                target.n
            )));
        }
        for x in 0..self.n {
            for y in x + 1..self.n {
                if target.get(f.apply(x), f.apply(y)) > self.get(x, y) {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    /// `d(f x, f y) = self(x,y)` for all pairs.
    pub fn is_distance_preserving(&self, f: &FinMap, target: &ExtPseudoMetric) -> bool {
        f.source_size() == self.n
            && f.target_size() == target.n
            && (0..self.n).all(|x| (x + 1..self.n).all(|y| target.get(f.apply(x), f.apply(y)) == self.get(x, y)))
    }

    /// Induced metric on the classes of `p`, assuming `self` vanishes within classes.
    pub(crate) fn induced_on_classes(&self, p: &Partition) -> ExtPseudoMetric {
        let k = p.num_classes();
        let d = (0..k * k)
            .map(|i| self.get(p.representative(i / k), p.representative(i % k)).clone())
            .collect();
        Self::from_flat_unchecked(k, d)
    }
}

pub fn is_extended_metric(m: &ExtPseudoMetric) -> bool {
    m.is_extended_metric()
}

/// Chain-infimum quotient distance on the classes of `p`.
///
/// Shortest paths on the complete graph weighted by `m`, with zero-cost
/// edges between points of the same class, read off between class
/// representatives.
pub fn chain_quotient_metric(m: &ExtPseudoMetric, p: &Partition) -> Result<ExtPseudoMetric> {
    if p.len() != m.n {
        return Err(EmtError::SizeMismatch(format!(
            "partition over {} points, metric over {}",
            p.len(),
            m.n
        )));
    }
    let n = m.n;
    let mut d = m.d.clone();
    for class in p.classes() {
        for &a in class {
            for &b in class {
                d[a * n + b] = ExtValue::zero();
            }
        }
    }
    shortest_path_closure(n, &mut d);
    let closed = ExtPseudoMetric { n, d };
    Ok(closed.induced_on_classes(p))
}

/// Sup metric on the lexicographically indexed product.
pub fn metric_product_sup(ms: &[ExtPseudoMetric], caps: &Caps) -> Result<ExtPseudoMetric> {
    let sizes: Vec<usize> = ms.iter().map(|m| m.n).collect();
    let total = product_size(&sizes, caps)?;
    let coords: Vec<Vec<usize>> = (0..total).map(|i| product_coords(i, &sizes)).collect();
    let mut d = Vec::with_capacity(total * total);
    for a in &coords {
        for b in &coords {
            let v = ms
                .iter()
                .enumerate()
                .map(|(i, m)| m.get(a[i], b[i]))
                .max()
                .cloned()
                .unwrap_or_else(ExtValue::zero);
            d.push(v);
        }
    }
    Ok(ExtPseudoMetric::from_flat_unchecked(total, d))
}

/// Block-diagonal union, `∞` across blocks.
pub fn metric_disjoint_union(ms: &[ExtPseudoMetric]) -> ExtPseudoMetric {
    let total: usize = ms.iter().map(|m| m.n).sum();
    let mut d = vec![ExtValue::Infinite; total * total];
    let mut offset = 0;
    for m in ms {
        for x in 0..m.n {
            for y in 0..m.n {
                d[(offset + x) * total + offset + y] = m.get(x, y).clone();
            }
        }
        offset += m.n;
    }
    ExtPseudoMetric::from_flat_unchecked(total, d)
}

/// `d ∧ λ` for finite `λ > 0`.
pub fn truncate_metric(m: &ExtPseudoMetric, lambda: &ExtValue) -> Result<ExtPseudoMetric> {
    if !lambda.is_finite() || lambda.is_zero() {
        return Err(EmtError::Domain(format!("truncation level must be finite and positive, got {lambda}")));
    }
    let d = m.d.iter().map(|v| v.minimum(lambda)).collect();
    Ok(ExtPseudoMetric::from_flat_unchecked(m.n, d))
}

/// Classes of mutually finite distance.
pub fn finiteness_components(m: &ExtPseudoMetric) -> Partition {
    let pairs = (0..m.n).flat_map(|x| (0..m.n).filter(move |&y| m.get(x, y).is_finite()).map(move |y| (x, y)));
    Partition::generated_by(m.n, pairs).expect("pairs in range")
}

/// Completion of a finite extended metric space: itself, with the identity
/// embedding. Every finite extended metric space is complete.
pub fn completion_finite(m: &ExtPseudoMetric) -> Result<(ExtPseudoMetric, FinMap)> {
    if !m.is_extended_metric() {
        return Err(EmtError::Domain("completion needs an extended metric".into()));
    }
    Ok((m.clone(), FinMap::identity(m.n)))
}

/// Length distance of a finite space with discrete topology.
///
/// Continuous curves `[0,1] → X` into a finite discrete space are constant,
/// so distinct points are joined by no curve at all and sit at `∞`.
pub fn length_distance_finite(m: &ExtPseudoMetric, topology_is_discrete: bool) -> Result<ExtPseudoMetric> {
    if !topology_is_discrete {
        return Err(EmtError::Domain(
            "length distance not computable for non-discrete finite topologies at finite scale".into(),
        ));
    }
    Ok(ExtPseudoMetric::constant_off_diagonal(m.n, &ExtValue::Infinite))
}
