//! Exact arithmetic for finite extended metric-topological spaces.
//!
//! A *pre-e.pm.t. space* is a finite set carrying a topology and an extended
//! pseudometric (distances in `[0, ∞]`). Morphisms are maps that are both
//! continuous and short. The crate decides the defining predicates, computes
//! the reflections onto e.m.t. spaces, builds finite limits and colimits, and
//! checks universal properties by bounded enumeration.
//!
//! All distances are exact rationals or `∞`; there is no floating point.

pub mod cats;
pub mod config;
pub mod error;
pub mod exec;
pub mod extmetric;
pub mod finmap;
pub mod fintop;
pub mod functors;
pub mod gen;
pub mod json;
pub mod partition;
pub mod spaces;
pub mod value;

pub use cats::{CategoryTag, ConeCert, Diagram, Verdict};
pub use config::{Caps, Config, Exec};
pub use error::{EmtError, Result};
pub use extmetric::{ExtPseudoMetric, MetricViolation};
pub use finmap::FinMap;
pub use fintop::{FiniteTopology, TopologyViolation};
pub use functors::{Functor, FunctorResult};
pub use partition::Partition;
pub use spaces::{CSMorphism, HomKind, Space};
pub use value::ExtValue;
