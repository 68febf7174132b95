use serde::Serialize;

use crate::error::{EmtError, Result};

/// A function `0..source_size -> 0..target_size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinMap {
    source_size: usize,
    target_size: usize,
    image: Vec<usize>,
}

impl FinMap {
    pub fn new(target_size: usize, image: Vec<usize>) -> Result<Self> {
        if let Some((x, &y)) = image.iter().enumerate().find(|(_, &y)| y >= target_size) {
            return Err(EmtError::SizeMismatch(format!(
                "image of {x} is {y}, target has {target_size} points"
            )));
        }
        Ok(FinMap {
            source_size: image.len(),
            target_size,
            image,
        })
    }

    pub(crate) fn new_unchecked(target_size: usize, image: Vec<usize>) -> Self {
        debug_assert!(image.iter().all(|&y| y < target_size));
        FinMap {
            source_size: image.len(),
            target_size,
            image,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked(n, (0..n).collect())
    }

    pub fn constant(source_size: usize, target_size: usize, value: usize) -> Result<Self> {
        Self::new(target_size, vec![value; source_size])
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &FinMap) -> Result<FinMap> {
        if self.target_size != next.source_size {
            return Err(EmtError::SizeMismatch(format!(
                "cannot compose: target {} vs source {}",
                self.target_size, next.source_size
            )));
        }
        Ok(Self::new_unchecked(
            next.target_size,
            self.image.iter().map(|&y| next.image[y]).collect(),
        ))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        for &y in &self.image {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_size == self.target_size && self.is_injective()
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.source_size];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Some(Self::new_unchecked(self.source_size, inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks_range() {
        assert!(FinMap::new(2, vec![0, 2]).is_err());
        let f = FinMap::new(3, vec![2, 0]).unwrap();
        assert_eq!(f.source_size(), 2);
        assert!(f.is_injective() && !f.is_surjective());
    }

    #[test]
    fn composition() {
        let f = FinMap::new(3, vec![2, 0]).unwrap();
        let g = FinMap::new(2, vec![1, 1, 0]).unwrap();
        assert_eq!(f.then(&g).unwrap().image(), &[0, 1]);
        assert!(g.then(&g).is_err());
        let swap = FinMap::new(2, vec![1, 0]).unwrap();
        assert_eq!(swap.inverse().unwrap(), swap);
        assert!(g.inverse().is_none());
    }
}
