//! Hom-set bijections of the adjunctions between the categories involved.
//!
//! For a reflection `F ⊣ ι` with unit `η_X: X → FX`, the transposition
//! `ψ ↦ ψ ∘ η_X` must be a bijection `Hom(FX, Y) → Hom(X, Y)`; equivalently,
//! every morphism `X → Y` factors through `η_X` exactly once.
//!
//! Geodesification is checked as a coreflection `ι ⊣ geo`: the counit
//! `ε_X = id: geo X → X` is short because `d ≤ d_ℓ`, and composing with it
//! must be a bijection `Hom(Z, geo X) → Hom(Z, X)` for geodesic `Z`. On finite
//! spaces the opposite orientation fails already for two points at distance 1.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::config::Config;
use crate::error::{EmtError, Result};
use crate::extmetric::{truncate_metric, ExtPseudoMetric};
use crate::finmap::FinMap;
use crate::fintop::FiniteTopology;
use crate::gen::{small_emt, small_space};
use crate::functors::{compactify, discretize, emt_fication, geodesify, metric_completion, metric_topology_attach, truncate_functor};
use crate::spaces::{enumerate_homs, is_emt, HomKind, Space};
use crate::value::ExtValue;

use super::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Adjunction {
    /// `emt ⊣ ι`: pre-e.pm.t. space and e.m.t. space.
    Emt,
    /// `γ ⊣ ι`: e.m.t. space and compact e.m.t. space.
    Gamma,
    /// `mc ⊣ ι`: e.m.t. space and metrically complete e.m.t. space.
    Mc,
    /// `𝔗_λ ⊣ ι`: e.m.t. space and e.m.t. space of diameter at most `λ`.
    Trunc(ExtValue),
    /// `𝔇_λ ⊣ U_λ`: the left input's topology and an e.m.t. space of diameter at most `λ`.
    Disc(ExtValue),
    /// `T ⊣ U`: the left input's metric and an e.m.t. space.
    T,
    /// `ι ⊣ geo`: a geodesic e.m.t. space and a compact e.m.t. space.
    Geo,
}

impl FromStr for Adjunction {
    type Err = EmtError;

    fn from_str(s: &str) -> Result<Self> {
        let level = |v: &str| v.parse::<ExtValue>().map_err(|e| EmtError::parse("name", e.to_string()));
        match s {
            "emt" => Ok(Adjunction::Emt),
            "gamma" => Ok(Adjunction::Gamma),
            "mc" => Ok(Adjunction::Mc),
            "geo" => Ok(Adjunction::Geo),
            "T" => Ok(Adjunction::T),
            _ => {
                if let Some(v) = s.strip_prefix("trunc:") {
                    Ok(Adjunction::Trunc(level(v)?))
                } else if let Some(v) = s.strip_prefix("disc:") {
                    Ok(Adjunction::Disc(level(v)?))
                } else {
                    Err(EmtError::parse("name", format!("unknown adjunction {s:?}")))
                }
            }
        }
    }
}

impl fmt::Display for Adjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adjunction::Emt => f.write_str("emt"),
            Adjunction::Gamma => f.write_str("gamma"),
            Adjunction::Mc => f.write_str("mc"),
            Adjunction::Trunc(l) => write!(f, "trunc:{l}"),
            Adjunction::Disc(l) => write!(f, "disc:{l}"),
            Adjunction::T => f.write_str("T"),
            Adjunction::Geo => f.write_str("geo"),
        }
    }
}

/// Random inputs inside the domain of `adj`, on at most three points each.
pub fn random_adjunction_inputs<R: Rng>(rng: &mut R, adj: &Adjunction) -> (Arc<Space>, Arc<Space>) {
    let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let emt_within = |rng: &mut R, n: usize, l: &ExtValue| {
        let s = small_emt(rng, n);
        if l.is_infinite() {
            return s;
        }
        let m = truncate_metric(s.metric(), l).expect("positive level");
        Space::anonymous(FiniteTopology::discrete(n), m).expect("sizes agree")
    };
    let (left, right) = match adj {
        Adjunction::Emt => (small_space(rng, a), small_emt(rng, b)),
        Adjunction::Gamma | Adjunction::Mc => (small_emt(rng, a), small_emt(rng, b)),
        Adjunction::Trunc(l) => (small_emt(rng, a), emt_within(rng, b, l)),
        Adjunction::Disc(l) => {
            let s = small_space(rng, a);
            let left = Space::anonymous(FiniteTopology::discrete(a), s.metric().clone()).expect("sizes agree");
            (left, emt_within(rng, b, l))
        }
        Adjunction::T => {
            let t = small_space(rng, a).topology().clone();
            let m = small_emt(rng, a).metric().clone();
            (Space::anonymous(t, m).expect("sizes agree"), small_emt(rng, b))
        }
        Adjunction::Geo => {
            let m = ExtPseudoMetric::constant_off_diagonal(a, &ExtValue::Infinite);
            (Space::anonymous(FiniteTopology::discrete(a), m).expect("sizes agree"), small_emt(rng, b))
        }
    };
    (Arc::new(left), Arc::new(right))
}

/// The adjunctions checked by default: every kind, with `λ ∈ {1, ∞}` for
/// discretization and `λ = 1` for truncation.
pub fn standard_adjunctions() -> Vec<Adjunction> {
    vec![
        Adjunction::Emt,
        Adjunction::Gamma,
        Adjunction::Disc(ExtValue::int(1)),
        Adjunction::Disc(ExtValue::Infinite),
        Adjunction::T,
        Adjunction::Trunc(ExtValue::int(1)),
        Adjunction::Mc,
        Adjunction::Geo,
    ]
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(EmtError::Domain(what.to_string()))
    }
}

/// Checks that `transpose` maps `from` bijectively onto `onto`.
fn bijection(from: &[FinMap], onto: &[FinMap], transpose: impl Fn(&FinMap) -> Result<FinMap>) -> Result<Verdict> {
    let mut hits: HashMap<FinMap, Vec<&FinMap>> = onto.iter().map(|m| (m.clone(), Vec::new())).collect();
    for psi in from {
        let t = transpose(psi)?;
        match hits.get_mut(&t) {
            Some(v) => v.push(psi),
            None => {
                return Ok(Verdict::fail(
                    "transpose is not a morphism of the other hom-set",
                    vec![psi.image().to_vec(), t.image().to_vec()],
                ))
            }
        }
    }
    for f in onto {
        match hits[f].as_slice() {
            [] => return Ok(Verdict::fail("no factorization through the unit", vec![f.image().to_vec()])),
            [_] => {}
            [a, b, ..] => {
                return Ok(Verdict::fail(
                    "two factorizations through the unit",
                    vec![f.image().to_vec(), a.image().to_vec(), b.image().to_vec()],
                ))
            }
        }
    }
    Ok(Verdict::Pass { checked: onto.len() as u64 })
}

fn emt_diameter_at_most(s: &Space, lambda: &ExtValue) -> Result<bool> {
    Ok(is_emt(s)? && s.metric().diameter() <= *lambda)
}

/// Enumerates both hom-sets of `adj` at `(left, right)` and checks the
/// transposition is a bijection. Cap overruns give `Inconclusive`.
pub fn check_adjunction(adj: &Adjunction, left: &Arc<Space>, right: &Arc<Space>, config: &Config) -> Result<Verdict> {
    Verdict::from_result(check_inner(adj, left, right, config))
}

fn check_inner(adj: &Adjunction, left: &Arc<Space>, right: &Arc<Space>, config: &Config) -> Result<Verdict> {
    let cs = HomKind::ContinuousShort;
    match adj {
        Adjunction::Emt | Adjunction::Gamma | Adjunction::Mc | Adjunction::Trunc(_) => {
            let r = match adj {
                Adjunction::Emt => {
                    require(is_emt(right)?, "right input must be e.m.t.")?;
                    emt_fication(left)?
                }
                Adjunction::Gamma => {
                    require(is_emt(right)?, "right input must be a compact e.m.t. space")?;
                    compactify(left)?
                }
                Adjunction::Mc => {
                    require(is_emt(right)?, "right input must be a complete e.m.t. space")?;
                    metric_completion(left)?
                }
                Adjunction::Trunc(l) => {
                    require(emt_diameter_at_most(right, l)?, "right input must be e.m.t. with diameter at most λ")?;
                    truncate_functor(left, l)?
                }
                _ => unreachable!(),
            };
            let from = enumerate_homs(cs, &r.object, right, config)?;
            let onto = enumerate_homs(cs, left, right, config)?;
            bijection(&from, &onto, |psi| r.unit.map.then(psi))
        }
        Adjunction::Disc(l) => {
            require(left.topology().is_hausdorff(), "left topology must be Tychonoff (discrete)")?;
            require(emt_diameter_at_most(right, l)?, "right input must be e.m.t. with diameter at most λ")?;
            let r = discretize(left.topology(), l, true)?;
            let from = enumerate_homs(cs, &r.object, right, config)?;
            let onto = enumerate_homs(HomKind::Continuous, left, right, config)?;
            bijection(&from, &onto, |psi| r.unit.map.then(psi))
        }
        Adjunction::T => {
            require(left.metric().is_extended_metric(), "left metric must be an extended metric")?;
            require(is_emt(right)?, "right input must be e.m.t.")?;
            let tx = Arc::new(metric_topology_attach(left.metric())?);
            let from = enumerate_homs(cs, &tx, right, config)?;
            let onto = enumerate_homs(HomKind::Short, left, right, config)?;
            bijection(&from, &onto, |psi| Ok(psi.clone()))
        }
        Adjunction::Geo => {
            let geodesic = is_emt(left)? && (0..left.len()).all(|x| (0..left.len()).all(|y| x == y || left.dist(x, y).is_infinite()));
            require(geodesic, "left input must be a geodesic e.m.t. space")?;
            let g = geodesify(right)?;
            let from = enumerate_homs(cs, left, &g.object, config)?;
            let onto = enumerate_homs(cs, left, right, config)?;
            bijection(&from, &onto, |psi| psi.then(&g.unit.map))
        }
    }
}
