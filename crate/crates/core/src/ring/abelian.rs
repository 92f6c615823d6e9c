use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use super::Phase;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element set is not closed under the operation")]
    NotClosed,
    #[error("empty element set")]
    Empty,
    #[error("subgroup element is not in the group")]
    NotASubgroup,
}

/// All linear characters of a finite abelian group given by its element list and operation.
///
/// Characters are built by adjoining one element at a time to a growing
/// subgroup `S`, always picking an element whose image in `A/S` has maximal
/// order `k`; every character of `S` then extends in exactly `k` ways.
#[derive(Debug, Clone)]
pub struct AbelianCharTable<T> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    identity: usize,
    /// `characters[c][i]` is the value of character `c` at `elements[i]`.
    characters: Vec<Vec<Phase>>,
}

impl<T: Copy + Eq + Hash> AbelianCharTable<T> {
    /// Character group of the whole of `elements`.
    pub fn new(elements: &[T], op: impl Fn(T, T) -> T) -> Result<Self, AbelianError> {
        Self::build(elements, &op, None)
    }

    /// All extensions to `elements` of the character `chi` of the subgroup `sub`.
    /// There are exactly `[A : B]` of them.
    pub fn extensions(
        elements: &[T],
        op: impl Fn(T, T) -> T,
        sub: &[T],
        chi: impl Fn(T) -> Phase,
    ) -> Result<Self, AbelianError> {
        Self::build(elements, &op, Some((sub, &chi)))
    }

    fn build(
        elements: &[T],
        op: &dyn Fn(T, T) -> T,
        seed: Option<(&[T], &dyn Fn(T) -> Phase)>,
    ) -> Result<Self, AbelianError> {
        if elements.is_empty() {
            return Err(AbelianError::Empty);
        }
        let index: HashMap<T, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elements.len();
        let mut table = vec![0usize; n * n];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let ab = op(a, b);
                if ab != op(b, a) {
                    return Err(AbelianError::NotAbelian);
                }
                table[i * n + j] = *index.get(&ab).ok_or(AbelianError::NotClosed)?;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e * n + j] == j))
            .ok_or(AbelianError::NotClosed)?;
        let mul = |i: usize, j: usize| table[i * n + j];

        let mut in_span = vec![false; n];
        let mut span: Vec<usize> = Vec::new();
        let mut chars: Vec<Vec<Phase>> = Vec::new();
        match seed {
            None => {
                in_span[identity] = true;
                span.push(identity);
                let mut triv = vec![Phase::ZERO; n];
                triv[identity] = Phase::ZERO;
                chars.push(triv);
            }
            Some((sub, chi)) => {
                let mut values = vec![Phase::ZERO; n];
                for &s in sub {
                    let i = *index.get(&s).ok_or(AbelianError::NotASubgroup)?;
                    if !in_span[i] {
                        in_span[i] = true;
                        span.push(i);
                    }
                    values[i] = chi(s);
                }
                if !in_span[identity] {
                    return Err(AbelianError::NotASubgroup);
                }
                chars.push(values);
            }
        }

        while span.len() < n {
            // relative order of each outside element
            let rel_order = |g: usize| {
                let mut x = g;
                let mut k = 1usize;
                while !in_span[x] {
                    x = mul(x, g);
                    k += 1;
                }
                (k, x)
            };
            let (g, k, gk) = (0..n)
                .filter(|&g| !in_span[g])
                .map(|g| {
                    let (k, gk) = rel_order(g);
                    (g, k, gk)
                })
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("span is a proper subset");

            // new span = ⋃_{j<k} span · g^j, with (s, j) recorded for each new element
            let mut layers: Vec<(usize, usize, usize)> = Vec::with_capacity(span.len() * k);
            let mut g_pow = identity;
            for j in 0..k {
                for &s in &span {
                    layers.push((mul(s, g_pow), s, j));
                }
                g_pow = mul(g_pow, g);
            }
            let mut next = Vec::with_capacity(chars.len() * k);
            for chi in &chars {
                let target = chi[gk];
                for branch in 0..k as u64 {
                    let zeta = target.root(k as u64, branch);
                    let mut values = vec![Phase::ZERO; n];
                    for &(x, s, j) in &layers {
                        values[x] = chi[s] + zeta.times(j as u64);
                    }
                    next.push(values);
                }
            }
            chars = next;
            span.clear();
            for &(x, _, _) in &layers {
                if !in_span[x] {
                    in_span[x] = true;
                }
                span.push(x);
            }
            span.sort_unstable();
            span.dedup();
        }

        Ok(AbelianCharTable {
            elements: elements.to_vec(),
            index,
            identity,
            characters: chars,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn identity(&self) -> T {
        self.elements[self.identity]
    }

    pub fn index_of(&self, x: T) -> Option<usize> {
        self.index.get(&x).copied()
    }

    /// Value of character `c` at `x`. Panics if `x` is not a group element.
    pub fn value(&self, c: usize, x: T) -> Phase {
        self.characters[c][self.index[&x]]
    }

    pub fn character(&self, c: usize) -> &[Phase] {
        &self.characters[c]
    }

    pub fn characters(&self) -> impl Iterator<Item = &[Phase]> {
        self.characters.iter().map(Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn units_mod(n: u32) -> Vec<u32> {
        (1..n).filter(|&x| num_integer::gcd(x, n) == 1).collect()
    }

    #[test]
    fn units_mod_4() {
        let tab = AbelianCharTable::new(&units_mod(4), |a, b| a * b % 4).unwrap();
        assert_eq!(tab.len(), 2);
        let mut vals: Vec<(Phase, Phase)> =
            (0..2).map(|c| (tab.value(c, 1), tab.value(c, 3))).collect();
        vals.sort();
        assert_eq!(vals, vec![(Phase::ZERO, Phase::ZERO), (Phase::ZERO, Phase::new(1, 2))]);
    }

    #[test]
    fn units_mod_8_are_two_torsion() {
        let tab = AbelianCharTable::new(&units_mod(8), |a, b| a * b % 8).unwrap();
        assert_eq!(tab.len(), 4);
        for chi in tab.characters() {
            assert!(chi.iter().all(|v| v.times(2).is_zero()));
        }
    }

    #[test]
    fn column_orthogonality_and_multiplicativity() {
        for n in [9u32, 16, 15, 21, 32] {
            let els = units_mod(n);
            let tab = AbelianCharTable::new(&els, |a, b| a * b % n).unwrap();
            assert_eq!(tab.len(), els.len());
            for &a in &els {
                let s: Complex64 = (0..tab.len()).map(|c| tab.value(c, a).to_complex()).sum();
                let expect = if a == 1 { els.len() as f64 } else { 0.0 };
                assert!((s - Complex64::new(expect, 0.0)).norm() < 1e-9, "n={n} a={a}");
                for &b in &els {
                    for c in 0..tab.len() {
                        assert_eq!(tab.value(c, a * b % n), tab.value(c, a) + tab.value(c, b));
                    }
                }
            }
            // characters pairwise distinct
            let mut rows: Vec<&[Phase]> = tab.characters().collect();
            rows.sort();
            rows.dedup();
            assert_eq!(rows.len(), els.len());
        }
    }

    #[test]
    fn extension_count_is_index() {
        let els = units_mod(16);
        let sub = vec![1u32, 9];
        for target in [Phase::ZERO, Phase::new(1, 2)] {
            let chi = |x: u32| if x == 9 { target } else { Phase::ZERO };
            let tab = AbelianCharTable::extensions(&els, |a, b| a * b % 16, &sub, chi).unwrap();
            assert_eq!(tab.len(), els.len() / sub.len());
            for c in 0..tab.len() {
                assert_eq!(tab.value(c, 9), target);
            }
        }
    }

    #[test]
    fn non_abelian_rejected() {
        // S3 as permutations of 3 points
        let perms: Vec<[u8; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let compose = |a: [u8; 3], b: [u8; 3]| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]];
        assert_eq!(
            AbelianCharTable::new(&perms, compose).unwrap_err(),
            AbelianError::NotAbelian
        );
    }
}
