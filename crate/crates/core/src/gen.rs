//! Seeded instance generation and exhaustive small-space enumeration.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{EmtError, Result};
use crate::extmetric::{shortest_path_closure, validate_pseudometric, ExtPseudoMetric};
use crate::fintop::{partition_topology, FiniteTopology, SpecializationPreorder};
use crate::partition::Partition;
use crate::spaces::Space;
use crate::value::ExtValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyMode {
    /// Up-sets of a random preorder.
    RandomPreorder,
    Discrete,
    /// Unions of the classes of a random partition.
    Partition,
}

impl FromStr for TopologyMode {
    type Err = EmtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-preorder" => Ok(TopologyMode::RandomPreorder),
            "discrete" => Ok(TopologyMode::Discrete),
            "partition" => Ok(TopologyMode::Partition),
            other => Err(EmtError::parse("topology_mode", format!("unknown mode {other:?}"))),
        }
    }
}

/// Parameters of [`random_instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Generated spaces have exactly this many points.
    pub max_points: usize,
    /// Finite candidate distances.
    pub value_grid: Vec<ExtValue>,
    /// Probability that an off-diagonal sample is `∞` instead of a grid value.
    pub infinity_probability: Ratio<u32>,
    pub topology_mode: TopologyMode,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_points: 3,
            value_grid: vec![ExtValue::zero(), ExtValue::ratio(1, 2), ExtValue::int(1), ExtValue::int(2)],
            infinity_probability: Ratio::new(1, 5),
            topology_mode: TopologyMode::RandomPreorder,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.infinity_probability > Ratio::from_integer(1) {
            return Err(EmtError::Domain("infinity_probability above 1".into()));
        }
        if self.infinity_probability < Ratio::from_integer(1) && self.value_grid.is_empty() {
            return Err(EmtError::Domain("empty value grid with finite values requested".into()));
        }
        if let Some(v) = self.value_grid.iter().find(|v| v.is_infinite()) {
            return Err(EmtError::Domain(format!("value grid entry {v} is not finite")));
        }
        Ok(())
    }
}

/// A space drawn from `cfg`; identical configurations give identical spaces.
pub fn random_instance(cfg: &GenConfig) -> Result<Space> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(sample_space(&mut rng, cfg))
}

/// `count` spaces from consecutive seeds starting at `cfg.seed`.
pub fn random_instances(cfg: &GenConfig, count: usize) -> Result<Vec<Space>> {
    (0..count as u64)
        .map(|i| random_instance(&GenConfig { seed: cfg.seed.wrapping_add(i), ..cfg.clone() }))
        .collect()
}

pub(crate) fn sample_space<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Space {
    let n = cfg.max_points;
    let topology = random_topology(rng, n, cfg.topology_mode);
    let metric = random_metric(rng, n, &cfg.value_grid, cfg.infinity_probability);
    Space::anonymous(topology, metric).expect("generated sizes agree")
}

pub fn random_topology<R: Rng>(rng: &mut R, n: usize, mode: TopologyMode) -> FiniteTopology {
    match mode {
        TopologyMode::Discrete => FiniteTopology::discrete(n),
        TopologyMode::Partition => {
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            partition_topology(&Partition::from_labels(&labels))
        }
        TopologyMode::RandomPreorder => {
            let mut leq = vec![false; n * n];
            for x in 0..n {
                for y in 0..n {
                    leq[x * n + y] = x == y || rng.gen_ratio(1, 3);
                }
            }
            // transitive closure
            for k in 0..n {
                for x in 0..n {
                    if leq[x * n + k] {
                        for y in 0..n {
                            if leq[k * n + y] {
                                leq[x * n + y] = true;
                            }
                        }
                    }
                }
            }
            let p = SpecializationPreorder::from_matrix(n, leq).expect("closure is a preorder");
            FiniteTopology::from_preorder(&p)
        }
    }
}

/// Samples a matrix, symmetrizes by minimum, zeroes the diagonal and closes
/// under shortest paths.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, grid: &[ExtValue], p_inf: Ratio<u32>) -> ExtPseudoMetric {
    let sample = |rng: &mut R| {
        if *p_inf.numer() > 0 && rng.gen_ratio(*p_inf.numer(), *p_inf.denom()) {
            ExtValue::Infinite
        } else {
            grid.choose(rng).cloned().unwrap_or(ExtValue::Infinite)
        }
    };
    let raw: Vec<ExtValue> = (0..n * n).map(|_| sample(rng)).collect();
    let mut d: Vec<ExtValue> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            if x == y {
                ExtValue::zero()
            } else {
                raw[x * n + y].clone().minimum(&raw[y * n + x])
            }
        })
        .collect();
    shortest_path_closure(n, &mut d);
    ExtPseudoMetric::new(d.chunks(n.max(1)).take(n).map(|r| r.to_vec()).collect()).expect("closure is a pseudometric")
}

/// A random e.m.t. space: discrete topology and an extended metric.
pub fn random_emt<R: Rng>(rng: &mut R, n: usize, grid: &[ExtValue], p_inf: Ratio<u32>) -> Space {
    let positive: Vec<ExtValue> = grid.iter().filter(|v| !v.is_zero()).cloned().collect();
    let metric = random_metric(rng, n, &positive, p_inf);
    Space::anonymous(FiniteTopology::discrete(n), metric).expect("generated sizes agree")
}

/// A space on `n` points with a random-preorder topology and a metric over
/// the default grid.
pub fn small_space<R: Rng>(rng: &mut R, n: usize) -> Space {
    let cfg = GenConfig { max_points: n, ..GenConfig::default() };
    sample_space(rng, &cfg)
}

/// [`random_emt`] over the default grid.
pub fn small_emt<R: Rng>(rng: &mut R, n: usize) -> Space {
    let cfg = GenConfig::default();
    random_emt(rng, n, &cfg.value_grid, cfg.infinity_probability)
}

/// Deterministic generator seeded from a `u64`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every topology on `n` points, one per preorder.
pub fn all_topologies(n: usize) -> Vec<FiniteTopology> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                leq[i * n + j] = true;
            }
        }
        if let Some(p) = SpecializationPreorder::from_matrix(n, leq) {
            out.push(FiniteTopology::from_preorder(&p));
        }
    }
    out
}

/// Every pseudometric on `n` points whose off-diagonal entries lie in `grid`.
pub fn all_grid_metrics(n: usize, grid: &[ExtValue]) -> Vec<ExtPseudoMetric> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let mut rows = vec![vec![ExtValue::zero(); n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            rows[i][j] = grid[choice[k]].clone();
            rows[j][i] = grid[choice[k]].clone();
        }
        if validate_pseudometric(&rows).is_ok() {
            out.push(ExtPseudoMetric::new(rows).expect("validated"));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < grid.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// The standard grid `{0, 1/2, 1, 2, ∞}`.
pub fn standard_grid() -> Vec<ExtValue> {
    vec![
        ExtValue::zero(),
        ExtValue::ratio(1, 2),
        ExtValue::int(1),
        ExtValue::int(2),
        ExtValue::Infinite,
    ]
}

/// Every space on at most `max_points` points over all topologies and grid metrics.
pub fn all_small_spaces(max_points: usize, grid: &[ExtValue]) -> Vec<Arc<Space>> {
    let mut out = Vec::new();
    for n in 0..=max_points {
        let metrics = all_grid_metrics(n, grid);
        for t in all_topologies(n) {
            for m in &metrics {
                out.push(Arc::new(Space::anonymous(t.clone(), m.clone()).expect("sizes agree")));
            }
        }
    }
    out
}

/// Every e.m.t. space on at most `max_points` points with grid distances.
pub fn all_small_emt_spaces(max_points: usize, grid: &[ExtValue]) -> Vec<Arc<Space>> {
    let positive: Vec<ExtValue> = grid.iter().filter(|v| !v.is_zero()).cloned().collect();
    (0..=max_points)
        .flat_map(|n| {
            all_grid_metrics(n, &positive)
                .into_iter()
                .map(move |m| Arc::new(Space::anonymous(FiniteTopology::discrete(n), m).expect("sizes agree")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::validate_space;

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn grid_metric_counts() {
        let g = standard_grid();
        assert_eq!(all_grid_metrics(0, &g).len(), 1);
        assert_eq!(all_grid_metrics(2, &g).len(), 5);
        // 125 candidates on 3 points, keep those satisfying every triangle
        let brute = (0..125)
            .filter(|c| {
                let (a, b, d) = (&g[c % 5], &g[c / 5 % 5], &g[c / 25]);
                a <= &b.saturating_sum(d) && b <= &a.saturating_sum(d) && d <= &a.saturating_sum(b)
            })
            .count();
        assert_eq!(all_grid_metrics(3, &g).len(), brute);
    }

    #[test]
    fn deterministic_and_valid() {
        let cfg = GenConfig { seed: 1, max_points: 3, topology_mode: TopologyMode::Discrete, ..Default::default() };
        let a = random_instance(&cfg).unwrap();
        let b = random_instance(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.topology().is_discrete());
    }

    #[test]
    fn all_infinite() {
        let cfg = GenConfig { max_points: 4, infinity_probability: Ratio::from_integer(1), ..Default::default() };
        let s = random_instance(&cfg).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(s.dist(x, y).is_infinite(), x != y);
            }
        }
    }

    #[test]
    fn empty_instance() {
        let cfg = GenConfig { max_points: 0, ..Default::default() };
        assert!(random_instance(&cfg).unwrap().is_empty());
    }

    #[test]
    fn many_instances_validate() {
        for mode in [TopologyMode::RandomPreorder, TopologyMode::Discrete, TopologyMode::Partition] {
            for n in 0..=6 {
                let cfg = GenConfig { seed: 7, max_points: n, topology_mode: mode, ..Default::default() };
                for s in random_instances(&cfg, 40).unwrap() {
                    assert!(validate_space(s.names(), s.topology(), s.metric()).is_ok());
                }
            }
        }
    }

    #[test]
    fn bad_configs() {
        let cfg = GenConfig { infinity_probability: Ratio::new(3, 2), ..Default::default() };
        assert!(random_instance(&cfg).is_err());
        let cfg = GenConfig { value_grid: vec![ExtValue::Infinite], ..Default::default() };
        assert!(random_instance(&cfg).is_err());
    }
}
