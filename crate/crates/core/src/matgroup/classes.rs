use std::collections::VecDeque;

use super::FiniteGroup;
use crate::Error;

/// Conjugacy classes of an enumerated group. Class 0 is always the identity class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClasses {
    reps: Vec<usize>,
    sizes: Vec<usize>,
    class_of: Vec<u32>,
    inverse_class: Vec<usize>,
    id: u64,
}

impl ConjClasses {
    /// Partition `group` into orbits of conjugation by the subgroup generated by `gens`.
    /// With a generating set of the whole group these are the conjugacy classes.
    pub fn compute<G: FiniteGroup + ?Sized>(group: &G, gens: &[usize]) -> ConjClasses {
        let n = group.order();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let start = std::iter::once(group.identity()).chain(0..n);
        for x in start {
            if class_of[x] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            let size = bfs_class(group, gens, x, c, &mut class_of);
            reps.push(x);
            sizes.push(size);
        }
        Self::finish(group, reps, sizes, class_of)
    }

    /// Rebuild classes from a known representative list (e.g. a cache file).
    pub fn from_reps<G: FiniteGroup + ?Sized>(
        group: &G,
        gens: &[usize],
        reps: &[usize],
    ) -> Result<ConjClasses, Error> {
        let n = group.order();
        let mut class_of = vec![u32::MAX; n];
        let mut sizes = Vec::with_capacity(reps.len());
        for (c, &x) in reps.iter().enumerate() {
            if x >= n || class_of[x] != u32::MAX {
                return Err(Error::Parse("class representatives overlap".into()));
            }
            sizes.push(bfs_class(group, gens, x, c as u32, &mut class_of));
        }
        if class_of.iter().any(|&c| c == u32::MAX) || reps.first() != Some(&group.identity()) {
            return Err(Error::Parse("class representatives do not cover the group".into()));
        }
        Ok(Self::finish(group, reps.to_vec(), sizes, class_of))
    }

    fn finish<G: FiniteGroup + ?Sized>(
        group: &G,
        reps: Vec<usize>,
        sizes: Vec<usize>,
        class_of: Vec<u32>,
    ) -> ConjClasses {
        let inverse_class = reps
            .iter()
            .map(|&x| class_of[group.inv(x)] as usize)
            .collect();
        // FNV-1a over the order and representatives
        let mut id: u64 = 0xcbf2_9ce4_8422_2325;
        for v in std::iter::once(group.order()).chain(reps.iter().copied()) {
            id ^= v as u64;
            id = id.wrapping_mul(0x0100_0000_01b3);
        }
        ConjClasses {
            reps,
            sizes,
            class_of,
            inverse_class,
            id,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.class_of.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    #[inline]
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    /// Class of `g^{-1}` for `g` in class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    /// Fingerprint used to detect class functions built on different class data.
    pub fn id(&self) -> u64 {
        self.id
    }
}

fn bfs_class<G: FiniteGroup + ?Sized>(
    group: &G,
    gens: &[usize],
    start: usize,
    label: u32,
    class_of: &mut [u32],
) -> usize {
    let mut queue = VecDeque::from([start]);
    class_of[start] = label;
    let mut size = 1;
    while let Some(y) = queue.pop_front() {
        for &g in gens {
            let z = group.conj(g, y);
            if class_of[z] == u32::MAX {
                class_of[z] = label;
                size += 1;
                queue.push_back(z);
            }
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::CayleyTable;

    #[test]
    fn abelian_classes_are_singletons() {
        let g = CayleyTable::cyclic(6);
        let all: Vec<usize> = (0..6).collect();
        let cl = ConjClasses::compute(&g, &all);
        assert_eq!(cl.len(), 6);
        assert!(cl.sizes().iter().all(|&s| s == 1));
        assert_eq!(cl.reps()[0], g.identity());
    }

    #[test]
    fn round_trip_from_reps() {
        let g = CayleyTable::cyclic(5);
        let all: Vec<usize> = (0..5).collect();
        let cl = ConjClasses::compute(&g, &all);
        let again = ConjClasses::from_reps(&g, &all, cl.reps()).unwrap();
        assert_eq!(cl, again);
        assert!(ConjClasses::from_reps(&g, &all, &[0, 1]).is_err());
    }
}
