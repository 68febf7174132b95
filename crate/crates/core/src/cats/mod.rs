//! Finite diagrams, limits and colimits, and bounded checks of universal
//! properties.
//!
//! Index categories are given by generating arrows only: a family commuting
//! with every generator commutes with every composite.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{EmtError, Result};
use crate::finmap::FinMap;
use crate::spaces::{is_emt, CSMorphism, HomKind, Space};

mod adjunction;
mod construct;
mod corpus;
mod crosscheck;
mod theorem_b;
mod verify;

pub use adjunction::{check_adjunction, random_adjunction_inputs, standard_adjunctions, Adjunction};
pub use construct::{
    colimit, coequalizer, coproduct, equalizer, limit, product, colimit_via_coproduct_coequalizer,
    limit_via_products_equalizers,
};
pub use corpus::{diagram_corpus, random_diagram};
pub use crosscheck::{cross_check_formulas, find_iso_respecting_legs, CrossCheckReport};
pub use theorem_b::{theorem_b_check, TheoremB};
pub use verify::{default_probes, probe_pool, verify_universal};

/// Which category a diagram lives in; decides which maps are morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CategoryTag {
    #[serde(rename = "SET")]
    Set,
    #[serde(rename = "TOP")]
    Top,
    #[serde(rename = "EXTPMET")]
    ExtPMet,
    #[serde(rename = "PRE")]
    Pre,
    #[serde(rename = "EMT")]
    Emt,
}

impl CategoryTag {
    pub const ALL: [CategoryTag; 5] =
        [CategoryTag::Set, CategoryTag::Top, CategoryTag::ExtPMet, CategoryTag::Pre, CategoryTag::Emt];

    pub fn hom_kind(self) -> HomKind {
        match self {
            CategoryTag::Set => HomKind::Any,
            CategoryTag::Top => HomKind::Continuous,
            CategoryTag::ExtPMet => HomKind::Short,
            CategoryTag::Pre | CategoryTag::Emt => HomKind::ContinuousShort,
        }
    }

    pub fn admits_object(self, s: &Space) -> Result<bool> {
        match self {
            CategoryTag::Emt => is_emt(s),
            _ => Ok(true),
        }
    }
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CategoryTag::Set => "SET",
            CategoryTag::Top => "TOP",
            CategoryTag::ExtPMet => "EXTPMET",
            CategoryTag::Pre => "PRE",
            CategoryTag::Emt => "EMT",
        })
    }
}

impl FromStr for CategoryTag {
    type Err = EmtError;

    fn from_str(s: &str) -> Result<Self> {
        CategoryTag::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| EmtError::parse("/category", format!("unknown category {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub map: FinMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub category: CategoryTag,
    pub objects: Vec<Arc<Space>>,
    pub arrows: Vec<Arrow>,
}

impl Diagram {
    /// Validated construction: every arrow is a morphism of the tagged category.
    pub fn new(category: CategoryTag, objects: Vec<Arc<Space>>, arrows: Vec<Arrow>) -> Result<Self> {
        let d = Diagram { category, objects, arrows };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, o) in self.objects.iter().enumerate() {
            if !self.category.admits_object(o)? {
                return Err(EmtError::InvalidDiagram(format!("object {i} is not in {}", self.category)));
            }
        }
        let kind = self.category.hom_kind();
        for a in &self.arrows {
            let (Some(src), Some(dst)) = (self.objects.get(a.src), self.objects.get(a.dst)) else {
                return Err(EmtError::InvalidDiagram(format!("arrow {:?} has an endpoint out of range", a.name)));
            };
            if !kind.admits(src, dst, &a.map) {
                return Err(EmtError::InvalidDiagram(format!(
                    "arrow {:?} is not a morphism of {}",
                    a.name, self.category
                )));
            }
        }
        Ok(())
    }

    /// The same objects and arrows read in another category.
    pub fn retag(&self, category: CategoryTag) -> Result<Diagram> {
        Diagram::new(category, self.objects.clone(), self.arrows.clone())
    }

    /// The diagram with two objects and no arrows.
    pub fn discrete(category: CategoryTag, objects: Vec<Arc<Space>>) -> Result<Diagram> {
        Diagram::new(category, objects, Vec::new())
    }

    /// `f, g: X ⇉ Y`.
    pub fn parallel_pair(category: CategoryTag, x: Arc<Space>, y: Arc<Space>, f: FinMap, g: FinMap) -> Result<Diagram> {
        let arrows = vec![
            Arrow { name: "f".into(), src: 0, dst: 1, map: f },
            Arrow { name: "g".into(), src: 0, dst: 1, map: g },
        ];
        Diagram::new(category, vec![x, y], arrows)
    }

    pub fn is_parallel_pair(&self) -> bool {
        self.objects.len() == 2
            && self.arrows.len() == 2
            && self.arrows.iter().all(|a| a.src == 0 && a.dst == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cone,
    Cocone,
}

/// A candidate (co)limit: an apex with one leg per diagram object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCert {
    pub apex: Arc<Space>,
    pub legs: Vec<CSMorphism>,
    pub side: Side,
}

impl ConeCert {
    /// First arrow whose (co)cone square fails to commute.
    pub fn non_commuting_arrow(&self, d: &Diagram) -> Option<usize> {
        d.arrows.iter().position(|a| {
            let (ls, ld) = (&self.legs[a.src].map, &self.legs[a.dst].map);
            match self.side {
                Side::Cone => ls.then(&a.map).ok().as_ref() != Some(ld),
                Side::Cocone => a.map.then(ld).ok().as_ref() != Some(ls),
            }
        })
    }
}

/// Outcome of a bounded check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass { checked: u64 },
    Fail { reason: String, witness: Vec<Vec<usize>> },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    pub(crate) fn fail(reason: impl Into<String>, witness: Vec<Vec<usize>>) -> Self {
        Verdict::Fail { reason: reason.into(), witness }
    }

    /// Turns a cap error into an inconclusive verdict; other errors propagate.
    pub fn from_result(r: Result<Verdict>) -> Result<Verdict> {
        match r {
            Err(e) if e.is_cap_exceeded() => Ok(Verdict::Inconclusive { reason: e.to_string() }),
            other => other,
        }
    }
}
