use num_complex::Complex64;

use crate::matgroup::{FiniteGroup, Subgroup};
use crate::ring::Phase;
use crate::Error;

/// A one-dimensional character of a subgroup, with exact root-of-unity values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChar {
    domain: Subgroup,
    values: Vec<Phase>,
}

/// Domains up to this size get an all-pairs multiplicativity check.
const EXHAUSTIVE_PAIRS: usize = 1 << 22;

impl LinearChar {
    /// `values[i]` is the value at `domain.elements()[i]`.
    pub fn new(domain: Subgroup, values: Vec<Phase>) -> LinearChar {
        assert_eq!(domain.order(), values.len());
        LinearChar { domain, values }
    }

    pub fn trivial(domain: Subgroup) -> LinearChar {
        let n = domain.order();
        LinearChar::new(domain, vec![Phase::ZERO; n])
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    /// Value at a group element; panics outside the domain.
    pub fn value(&self, g: usize) -> Phase {
        self.values[self.domain.position(g).expect("element outside the character's domain")]
    }

    pub fn get(&self, g: usize) -> Option<Phase> {
        self.domain.position(g).map(|i| self.values[i])
    }

    pub fn complex_values(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.to_complex()).collect()
    }

    pub fn restrict(&self, sub: &Subgroup) -> LinearChar {
        let values = sub.elements().iter().map(|&g| self.value(g)).collect();
        LinearChar::new(sub.clone(), values)
    }

    /// Pointwise product.
    pub fn times(&self, other: &LinearChar) -> LinearChar {
        assert_eq!(self.domain, other.domain);
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        LinearChar::new(self.domain.clone(), values)
    }

    /// Kernel, as a subgroup.
    pub fn kernel(&self) -> Subgroup {
        self.domain.filter(|g| self.value(g).is_zero())
    }

    /// Agreement on the common part of both domains.
    pub fn agrees_with(&self, other: &LinearChar) -> bool {
        self.domain
            .elements()
            .iter()
            .zip(&self.values)
            .all(|(&g, &v)| other.get(g).is_none_or(|w| w == v))
    }

    /// `χ(g x g^{-1}) = χ(x)` for every `g` in `gens`.
    pub fn is_stable_under<G: FiniteGroup + ?Sized>(&self, group: &G, gens: &[usize]) -> bool {
        gens.iter().all(|&g| {
            self.domain
                .elements()
                .iter()
                .zip(&self.values)
                .all(|(&x, &v)| self.get(group.conj(g, x)) == Some(v))
        })
    }

    /// `χ(xy) = χ(x)χ(y)`: over all pairs for small domains, otherwise over `x`
    /// and a generating set for `y` (which implies the same).
    pub fn is_multiplicative<G: FiniteGroup + ?Sized>(&self, group: &G) -> bool {
        let elems = self.domain.elements();
        if self.get(group.identity()) != Some(Phase::ZERO) {
            return false;
        }
        let right: Vec<usize> = if elems.len() * elems.len() <= EXHAUSTIVE_PAIRS {
            elems.to_vec()
        } else {
            self.domain.generators(group)
        };
        elems.iter().zip(&self.values).all(|(&x, &vx)| {
            right
                .iter()
                .all(|&y| self.get(group.mul(x, y)) == Some(vx + self.value(y)))
        })
    }

    /// All linear characters of `target` extending `self`.
    ///
    /// The domain is grown one element at a time; each new element `g` must
    /// normalize the current domain `S`. A character extends across `S⟨g⟩` iff
    /// it is `g`-stable, and then in exactly `k` ways where `k` is the order of
    /// `g` modulo `S`. Requires `target / domain` to be abelian.
    pub fn extensions_to<G: FiniteGroup + ?Sized>(
        &self,
        group: &G,
        target: &Subgroup,
    ) -> Result<Vec<LinearChar>, Error> {
        if !self.domain.is_subset_of(target) {
            return Err(Error::NotSubgroup("domain not inside the target".into()));
        }
        let mut span = self.domain.clone();
        let mut chars = vec![self.clone()];
        let mut remaining: Vec<usize> = target.generators(group);
        while span.order() < target.order() {
            remaining.retain(|&g| !span.contains(g));
            let pick = remaining
                .iter()
                .copied()
                .find(|&g| span.elements().iter().all(|&x| span.contains(group.conj(g, x))))
                .or_else(|| {
                    target.elements().iter().copied().find(|&g| {
                        !span.contains(g)
                            && span.elements().iter().all(|&x| span.contains(group.conj(g, x)))
                    })
                })
                .ok_or_else(|| {
                    Error::NotSubgroup("no element of the target normalizes the span".into())
                })?;
            let (next_span, next_chars) = adjoin(group, &span, &chars, pick);
            span = next_span;
            chars = next_chars;
            if chars.is_empty() {
                break;
            }
        }
        Ok(chars)
    }
}

/// Extend every `g`-stable character of `span` to `span⟨g⟩`.
fn adjoin<G: FiniteGroup + ?Sized>(
    group: &G,
    span: &Subgroup,
    chars: &[LinearChar],
    g: usize,
) -> (Subgroup, Vec<LinearChar>) {
    let mut k = 1u64;
    let mut gk = g;
    while !span.contains(gk) {
        gk = group.mul(gk, g);
        k += 1;
    }
    // element s·g^j for each s ∈ span, 0 <= j < k
    let mut layers = Vec::with_capacity(span.order() * k as usize);
    let mut gj = group.identity();
    for j in 0..k {
        for (i, &s) in span.elements().iter().enumerate() {
            layers.push((group.mul(s, gj), i, j));
        }
        gj = group.mul(gj, g);
    }
    let new_span = Subgroup::from_elements(group.order(), layers.iter().map(|l| l.0).collect());
    let mut out = Vec::new();
    for chi in chars {
        if !chi.is_stable_under(group, &[g]) {
            continue;
        }
        let target = chi.value(gk);
        for branch in 0..k {
            let zeta = target.root(k, branch);
            let mut values = vec![Phase::ZERO; new_span.order()];
            for &(x, i, j) in &layers {
                values[new_span.position(x).expect("layer element")] = chi.values[i] + zeta.times(j);
            }
            out.push(LinearChar::new(new_span.clone(), values));
        }
    }
    (new_span, out)
}
