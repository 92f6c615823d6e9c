//! `M_2(O_r)`, the group `G_r = GL_2(O_r)` and its congruence subgroups.

mod classes;
mod subgroup;

use std::fmt;

pub use classes::ConjClasses;
pub use subgroup::{CayleyTable, FiniteGroup, Subgroup};

use crate::ring::{Ring, RingElem, RingSpec};
use crate::Error;

/// A 2×2 matrix `[[a, b], [c, d]]` over some `O_r`. The ring is carried by the caller.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mat2 {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub d: RingElem,
}

impl Mat2 {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Mat2 {
        Mat2 {
            a: RingElem(a),
            b: RingElem(b),
            c: RingElem(c),
            d: RingElem(d),
        }
    }

    pub const IDENTITY: Mat2 = Mat2 {
        a: RingElem::ONE,
        b: RingElem::ZERO,
        c: RingElem::ZERO,
        d: RingElem::ONE,
    };

    pub const ZERO: Mat2 = Mat2 {
        a: RingElem::ZERO,
        b: RingElem::ZERO,
        c: RingElem::ZERO,
        d: RingElem::ZERO,
    };

    pub fn entries(&self) -> [RingElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [RingElem; 4]) -> Mat2 {
        Mat2 {
            a: e[0],
            b: e[1],
            c: e[2],
            d: e[3],
        }
    }

    /// Packed encoding `((a n + b) n + c) n + d` for a ring of size `n`.
    #[inline]
    pub fn code(&self, n: u32) -> u64 {
        let n = n as u64;
        ((self.a.0 as u64 * n + self.b.0 as u64) * n + self.c.0 as u64) * n + self.d.0 as u64
    }

    pub fn decode(code: u64, n: u32) -> Mat2 {
        let n = n as u64;
        Mat2::new(
            (code / (n * n * n)) as u32,
            (code / (n * n) % n) as u32,
            (code / n % n) as u32,
            (code % n) as u32,
        )
    }

    /// The same matrix viewed in `O_s`, `s` below the current level: entrywise reduction.
    pub fn reduce(&self, ring: &Ring, s: u32) -> Mat2 {
        Mat2::from_entries(self.entries().map(|x| ring.reduce_to(x, s)))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a.0, self.b.0, self.c.0, self.d.0)
    }
}

/// Matrix arithmetic over a ring context.
impl Ring {
    #[inline]
    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            c: self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            d: self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        }
    }

    pub fn mat_add(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(x.a, y.a),
            b: self.add(x.b, y.b),
            c: self.add(x.c, y.c),
            d: self.add(x.d, y.d),
        }
    }

    pub fn mat_sub(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.sub(x.a, y.a),
            b: self.sub(x.b, y.b),
            c: self.sub(x.c, y.c),
            d: self.sub(x.d, y.d),
        }
    }

    pub fn mat_scale(&self, s: RingElem, x: &Mat2) -> Mat2 {
        Mat2::from_entries(x.entries().map(|e| self.mul(s, e)))
    }

    pub fn scalar(&self, s: RingElem) -> Mat2 {
        Mat2 {
            a: s,
            b: RingElem::ZERO,
            c: RingElem::ZERO,
            d: s,
        }
    }

    pub fn det(&self, x: &Mat2) -> RingElem {
        self.sub(self.mul(x.a, x.d), self.mul(x.b, x.c))
    }

    pub fn trace(&self, x: &Mat2) -> RingElem {
        self.add(x.a, x.d)
    }

    pub fn adjugate(&self, x: &Mat2) -> Mat2 {
        Mat2 {
            a: x.d,
            b: self.neg(x.b),
            c: self.neg(x.c),
            d: x.a,
        }
    }

    pub fn mat_inv(&self, x: &Mat2) -> Result<Mat2, Error> {
        let det_inv = self.inv(self.det(x))?;
        Ok(self.mat_scale(det_inv, &self.adjugate(x)))
    }

    /// Minimal valuation of the entries.
    pub fn mat_valuation(&self, x: &Mat2) -> u32 {
        x.entries().iter().map(|&e| self.valuation(e)).min().unwrap_or(0)
    }

    pub fn matrices(&self) -> impl Iterator<Item = Mat2> {
        let n = self.size();
        (0..(n as u64).pow(4)).map(move |c| Mat2::decode(c, n))
    }
}

/// `|GL_2(O_r)| = p^{4(r-1)} (p^2 - 1)(p^2 - p)`.
pub fn gl2_order(spec: RingSpec) -> u64 {
    let p = spec.p as u64;
    p.pow(4 * (spec.r - 1)) * (p * p - 1) * (p * p - p)
}

/// The fully enumerated group `G_r = GL_2(O_r)`.
#[derive(Debug, Clone)]
pub struct Gl2Group {
    ring: Ring,
    elems: Vec<Mat2>,
    index: Vec<u32>,
    inverses: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
}

const NOT_IN_GROUP: u32 = u32::MAX;

impl Gl2Group {
    /// Enumerate all invertible matrices, refusing if `|G_r|` exceeds `cap`.
    pub fn enumerate(spec: RingSpec, cap: usize) -> Result<Gl2Group, Error> {
        let ring = Ring::new(spec)?;
        let order = gl2_order(spec);
        if order > cap as u64 {
            return Err(Error::TooLarge { order, cap });
        }
        let n = ring.size();
        let codes = (n as u64).pow(4);
        let mut index = vec![NOT_IN_GROUP; codes as usize];
        let mut elems = Vec::with_capacity(order as usize);
        for m in ring.matrices() {
            if ring.is_unit(ring.det(&m)) {
                index[m.code(n) as usize] = elems.len() as u32;
                elems.push(m);
            }
        }
        debug_assert_eq!(elems.len() as u64, order);
        let identity = index[Mat2::IDENTITY.code(n) as usize] as usize;
        let inverses = elems
            .iter()
            .map(|m| {
                let inv = ring.mat_inv(m).expect("enumerated element is invertible");
                index[inv.code(n) as usize]
            })
            .collect();
        let mut group = Gl2Group {
            ring,
            elems,
            index,
            inverses,
            identity,
            generators: Vec::new(),
        };
        group.generators = group.find_generators()?;
        Ok(group)
    }

    /// Both elementary transvections plus `diag(u, 1)` for generators `u` of `O_r^×`,
    /// checked to generate the whole group.
    fn find_generators(&self) -> Result<Vec<usize>, Error> {
        let one = RingElem::ONE;
        let zero = RingElem::ZERO;
        let mut mats = vec![
            Mat2 { a: one, b: one, c: zero, d: one },
            Mat2 { a: one, b: zero, c: one, d: one },
        ];
        for u in self.ring.unit_generators() {
            mats.push(Mat2 { a: u, b: zero, c: zero, d: one });
        }
        let gens: Vec<usize> = mats.iter().filter_map(|m| self.index_of(m)).collect();
        if self.closure(&gens).order() != self.order() {
            return Err(Error::TheoryViolation(
                "transvections and diagonal units do not generate G_r".into(),
            ));
        }
        Ok(gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn spec(&self) -> RingSpec {
        self.ring.spec()
    }

    pub fn level(&self) -> u32 {
        self.ring.level()
    }

    /// A verified generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mat(&self, g: usize) -> &Mat2 {
        &self.elems[g]
    }

    pub fn mats(&self) -> &[Mat2] {
        &self.elems
    }

    #[inline]
    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        let code = m.code(self.ring.size());
        match self.index.get(code as usize) {
            Some(&i) if i != NOT_IN_GROUP => Some(i as usize),
            _ => None,
        }
    }

    pub fn det(&self, g: usize) -> RingElem {
        self.ring.det(&self.elems[g])
    }

    pub fn conjugacy_classes(&self) -> ConjClasses {
        ConjClasses::compute(self, &self.generators)
    }

    /// `K_i = {g : g ≡ 1 mod ϖ^i}` for `1 <= i <= r - 1`.
    pub fn congruence_subgroup(&self, i: u32) -> Result<Subgroup, Error> {
        let r = self.level();
        if i < 1 || i >= r {
            return Err(Error::OutOfRange(format!("K_{i} needs 1 <= i <= {}", r - 1)));
        }
        Ok(self.kernel_of_reduction(i))
    }

    /// `{g : g ≡ 1 mod ϖ^i}` for any `0 <= i <= r`, including the trivial ends.
    pub(crate) fn kernel_of_reduction(&self, i: u32) -> Subgroup {
        let ring = &self.ring;
        let mut elems = Vec::new();
        for (g, m) in self.elems.iter().enumerate() {
            if m.reduce(ring, i) == Mat2::IDENTITY.reduce(ring, i) {
                elems.push(g);
            }
        }
        Subgroup::from_sorted(self.order(), elems)
    }

    /// Upper-triangular elements `B_r`.
    pub fn borel(&self) -> Subgroup {
        self.whole().filter(|g| self.elems[g].c == RingElem::ZERO)
    }

    /// `x ↦ 1 + ϖ^i x`, mapping `M_2(O_{r-i})` onto `K_i`; only a homomorphism for `2i >= r`.
    pub fn lift_iso(&self, i: u32, x: &Mat2) -> Result<usize, Error> {
        let r = self.level();
        if 2 * i < r || i >= r {
            return Err(Error::OutOfRange(format!(
                "1 + ϖ^{i} x is not an isomorphism onto K_{i} at level {r}"
            )));
        }
        let ring = &self.ring;
        let shifted = ring.mat_scale(ring.uniformizer_pow(i), x);
        let m = ring.mat_add(&Mat2::IDENTITY, &shifted);
        self.index_of(&m)
            .ok_or_else(|| Error::OutOfRange("lifted matrix not in G_r".into()))
    }

    /// Inverse of [`Gl2Group::lift_iso`]: `g = 1 + ϖ^i x ↦ x ∈ M_2(O_{r-i})`.
    pub fn unlift_iso(&self, i: u32, g: usize) -> Result<Mat2, Error> {
        let r = self.level();
        if 2 * i < r || i >= r {
            return Err(Error::OutOfRange(format!("K_{i} is not abelian at level {r}")));
        }
        let ring = &self.ring;
        let y = ring.mat_sub(&self.elems[g], &Mat2::IDENTITY);
        if ring.mat_valuation(&y) < i {
            return Err(Error::OutOfRange("element not in K_i".into()));
        }
        let scale = self.spec().p.pow(i);
        Ok(Mat2::from_entries(y.entries().map(|e| RingElem(e.0 / scale))))
    }

    /// Reduction `G_r -> G_s` as an index map into `lower` (which must be `G_s`, `s <= r`).
    pub fn reduction_map(&self, lower: &Gl2Group) -> Vec<usize> {
        let s = lower.level();
        self.elems
            .iter()
            .map(|m| {
                lower
                    .index_of(&m.reduce(&self.ring, s))
                    .expect("reduction of an invertible matrix is invertible")
            })
            .collect()
    }
}

impl FiniteGroup for Gl2Group {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.ring.mat_mul(&self.elems[a], &self.elems[b]);
        self.index[m.code(self.ring.size()) as usize] as usize
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }
}

#[cfg(test)]
mod tests;
