//! Partitions of `0..n` with canonical class numbering.

use serde::Serialize;

use crate::error::{EmtError, Result};

/// A partition of `0..n`.
///
/// Classes are numbered in order of their smallest member and each class
/// lists its members in increasing order, so two partitions are equal as
/// values exactly when they are equal as equivalence relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling: points with equal labels share a class.
    pub fn from_labels<L: Eq + Clone>(labels: &[L]) -> Self {
        let mut seen: Vec<L> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for l in labels {
            let idx = match seen.iter().position(|s| s == l) {
                Some(i) => i,
                None => {
                    seen.push(l.clone());
                    seen.len() - 1
                }
            };
            class_of.push(idx);
        }
        Self::from_canonical_labels(class_of)
    }

    // Labels already numbered by first occurrence.
    fn from_canonical_labels(class_of: Vec<usize>) -> Self {
        let k = class_of.iter().map(|c| c + 1).max().unwrap_or(0);
        let mut classes = vec![Vec::new(); k];
        for (x, &c) in class_of.iter().enumerate() {
            classes[c].push(x);
        }
        Partition { class_of, classes }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_canonical_labels((0..n).collect())
    }

    /// One class holding everything (no classes when `n == 0`).
    pub fn one_class(n: usize) -> Self {
        Self::from_canonical_labels(vec![0; n])
    }

    /// Smallest partition in which every listed pair is identified.
    pub fn generated_by(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(EmtError::SizeMismatch(format!(
                    "pair ({a},{b}) out of range for {n} points"
                )));
            }
            uf.union(a, b);
        }
        Ok(uf.into_partition())
    }

    /// From explicit classes; they must be disjoint, nonempty and cover `0..n`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (ci, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(EmtError::Domain("empty class".into()));
            }
            for &x in class {
                if x >= n {
                    return Err(EmtError::SizeMismatch(format!("point {x} out of range {n}")));
                }
                if label[x] != usize::MAX {
                    return Err(EmtError::Domain(format!("point {x} in two classes")));
                }
                label[x] = ci;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(EmtError::Domain("classes do not cover all points".into()));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    /// Smallest member of class `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.len() != other.len() {
            return Err(EmtError::SizeMismatch(format!(
                "join of partitions over {} and {} points",
                self.len(),
                other.len()
            )));
        }
        let mut uf = UnionFind::new(self.len());
        for p in [self, other] {
            for class in &p.classes {
                for w in class.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        Ok(uf.into_partition())
    }

    /// True when every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|&x| other.same_class(x, c[0])))
    }
}

/// `join_partitions` under its operational name.
pub fn join_partitions(p: &Partition, q: &Partition) -> Result<Partition> {
    p.join(q)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as root so roots are class minima
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }

    fn into_partition(mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, classes: &[&[usize]]) -> Partition {
        let cs: Vec<Vec<usize>> = classes.iter().map(|c| c.to_vec()).collect();
        Partition::from_classes(n, &cs).unwrap()
    }

    #[test]
    fn join_examples() {
        let a = p(3, &[&[0], &[1], &[2]]);
        let b = p(3, &[&[0, 1], &[2]]);
        assert_eq!(a.join(&b).unwrap(), b);

        let c = p(3, &[&[1, 2], &[0]]);
        assert_eq!(b.join(&c).unwrap(), Partition::one_class(3));
        assert_eq!(b.join(&b).unwrap(), b);
    }

    #[test]
    fn join_size_mismatch() {
        assert!(Partition::singletons(2).join(&Partition::singletons(3)).is_err());
    }

    #[test]
    fn canonical_numbering() {
        let q = Partition::from_labels(&['b', 'a', 'b', 'c']);
        assert_eq!(q.labels(), &[0, 1, 0, 2]);
        assert_eq!(q.classes(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(q.representative(0), 0);
    }

    #[test]
    fn from_classes_rejects_bad_input() {
        assert!(Partition::from_classes(2, &[vec![0]]).is_err());
        assert!(Partition::from_classes(2, &[vec![0, 1], vec![1]]).is_err());
        assert!(Partition::from_classes(2, &[vec![0, 1], vec![]]).is_err());
        assert!(Partition::from_classes(2, &[vec![0, 2]]).is_err());
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0..n, n).prop_map(|l| Partition::from_labels(&l))
    }

    proptest! {
        #[test]
        fn join_is_a_semilattice(a in arb_partition(6), b in arb_partition(6), c in arb_partition(6)) {
            let ab = a.join(&b).unwrap();
            prop_assert_eq!(&ab, &b.join(&a).unwrap());
            prop_assert_eq!(ab.join(&c).unwrap(), a.join(&b.join(&c).unwrap()).unwrap());
            prop_assert_eq!(a.join(&a).unwrap(), a.clone());
            prop_assert_eq!(a.join(&Partition::singletons(6)).unwrap(), a.clone());
            prop_assert!(a.refines(&ab) && b.refines(&ab));
        }
    }
}
