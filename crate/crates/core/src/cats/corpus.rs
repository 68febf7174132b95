//! Seeded random diagrams.

use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::Config;
use crate::error::Result;
use crate::gen::{random_emt, random_metric, random_topology, rng, TopologyMode};
use crate::spaces::{enumerate_homs, Space};
use crate::value::ExtValue;

use super::{Arrow, CategoryTag, Diagram};

/// Shape bounds of [`random_diagram`].
pub const MAX_OBJECTS: usize = 3;
pub const MAX_POINTS: usize = 3;
pub const MAX_ARROWS: usize = 4;

/// A random diagram of `tag`: up to three objects of up to three points and
/// up to four arrows, each arrow a uniformly chosen morphism of `tag`.
pub fn random_diagram<R: Rng>(rng: &mut R, tag: CategoryTag, config: &Config) -> Result<Diagram> {
    let grid = [ExtValue::zero(), ExtValue::ratio(1, 2), ExtValue::int(1), ExtValue::int(2)];
    let p_inf = Ratio::new(1, 5);
    let k = rng.gen_range(0..=MAX_OBJECTS);
    let objects: Vec<Arc<Space>> = (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=MAX_POINTS);
            let s = match tag {
                CategoryTag::Emt => random_emt(rng, n, &grid, p_inf),
                _ => {
                    let t = random_topology(rng, n, TopologyMode::RandomPreorder);
                    Space::anonymous(t, random_metric(rng, n, &grid, p_inf)).expect("sizes agree")
                }
            };
            Arc::new(s)
        })
        .collect();
    let mut arrows = Vec::new();
    if k > 0 {
        let count = rng.gen_range(0..=MAX_ARROWS);
        for i in 0..count {
            let (src, dst) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let homs = enumerate_homs(tag.hom_kind(), &objects[src], &objects[dst], config)?;
            if let Some(map) = homs.choose(rng) {
                arrows.push(Arrow { name: format!("a{i}"), src, dst, map: map.clone() });
            }
        }
    }
    Diagram::new(tag, objects, arrows)
}

/// `count` diagrams from seeds `seed, seed + 1, ...`.
pub fn diagram_corpus(tag: CategoryTag, seed: u64, count: usize, config: &Config) -> Result<Vec<Diagram>> {
    (0..count as u64)
        .map(|i| random_diagram(&mut rng(seed.wrapping_add(i)), tag, config))
        .collect()
}
