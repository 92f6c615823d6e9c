//! Exact arithmetic in the finite local rings `Z/p^r` and `F_p[t]/t^r`.
//!
//! Elements of both flavors are stored as a single integer code in `[0, p^r)`.
//! For the p-adic flavor the code is the residue itself; for the Laurent flavor
//! it is the base-`p` packing `a_0 + a_1 p + ... + a_{r-1} p^{r-1}` of the
//! coefficient vector. With this packing the canonical section `O_s -> O_r`
//! (same low digits, zero top digits) and the reduction `O_r -> O_s` are the
//! identity map and `code mod p^s` respectively, for both flavors.

mod abelian;
mod phase;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use abelian::{AbelianCharTable, AbelianError};
pub use phase::Phase;

use crate::Error;

/// Which of the two complete discrete valuation ring families the quotient comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `Z_p / p^r = Z/p^r`.
    Padic,
    /// `F_p[[t]] / t^r = F_p[t]/t^r`.
    Laurent,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Padic => f.write_str("padic"),
            Flavor::Laurent => f.write_str("laurent"),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "padic" => Ok(Flavor::Padic),
            "laurent" => Ok(Flavor::Laurent),
            other => Err(Error::InvalidSpec(format!("unknown flavor {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingSpec {
    pub flavor: Flavor,
    pub p: u32,
    pub r: u32,
}

impl RingSpec {
    pub const fn new(flavor: Flavor, p: u32, r: u32) -> Self {
        RingSpec { flavor, p, r }
    }

    pub const fn padic(p: u32, r: u32) -> Self {
        RingSpec::new(Flavor::Padic, p, r)
    }

    pub const fn laurent(p: u32, r: u32) -> Self {
        RingSpec::new(Flavor::Laurent, p, r)
    }

    /// The same ring family at another level.
    pub fn at_level(self, r: u32) -> Self {
        RingSpec { r, ..self }
    }

    /// Number of elements, `p^r`.
    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }

    pub fn unit_count(&self) -> u64 {
        (self.p as u64).pow(self.r - 1) * (self.p as u64 - 1)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, p={}, r={})", self.flavor, self.p, self.r)
    }
}

/// An element of `O_r`, as its canonical code. Only meaningful together with a [`Ring`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem(pub u32);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);
    pub const ONE: RingElem = RingElem(1);

    pub fn code(self) -> u32 {
        self.0
    }
}

/// Largest ring size for which addition and multiplication are tabulated.
const TABLE_LIMIT: u32 = 256;

/// Ring context for `O_r`.
#[derive(Debug, Clone)]
pub struct Ring {
    spec: RingSpec,
    size: u32,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Self, Error> {
        if !is_prime(spec.p) {
            return Err(Error::InvalidSpec(format!("p = {} is not prime", spec.p)));
        }
        if spec.r == 0 {
            return Err(Error::InvalidSpec("level r must be at least 1".into()));
        }
        let size = spec.size();
        if size > u16::MAX as u64 {
            return Err(Error::InvalidSpec(format!(
                "ring of size {size} is beyond the supported range"
            )));
        }
        let mut ring = Ring {
            spec,
            size: size as u32,
            add_table: Vec::new(),
            mul_table: Vec::new(),
        };
        if ring.size <= TABLE_LIMIT {
            let n = ring.size;
            let mut add = Vec::with_capacity((n * n) as usize);
            let mut mul = Vec::with_capacity((n * n) as usize);
            for x in 0..n {
                for y in 0..n {
                    add.push(ring.add_direct(x, y));
                    mul.push(ring.mul_direct(x, y));
                }
            }
            ring.add_table = add;
            ring.mul_table = mul;
        }
        Ok(ring)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn level(&self) -> u32 {
        self.spec.r
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size).map(RingElem)
    }

    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.elements().filter(move |&x| self.is_unit(x))
    }

    /// The integer `k` viewed in the ring (image of `Z -> O_r`).
    pub fn from_int(&self, k: i64) -> RingElem {
        let p = self.spec.p as i64;
        match self.spec.flavor {
            Flavor::Padic => RingElem(k.rem_euclid(self.size as i64) as u32),
            Flavor::Laurent => RingElem(k.rem_euclid(p) as u32),
        }
    }

    /// The uniformizer `p` or `t`.
    pub fn uniformizer(&self) -> RingElem {
        if self.spec.r == 1 {
            RingElem::ZERO
        } else {
            RingElem(self.spec.p)
        }
    }

    /// `ϖ^k`, which is zero for `k >= r`.
    pub fn uniformizer_pow(&self, k: u32) -> RingElem {
        if k >= self.spec.r {
            RingElem::ZERO
        } else {
            RingElem(self.spec.p.pow(k))
        }
    }

    fn digits(&self, x: u32) -> impl Iterator<Item = u32> + '_ {
        let p = self.spec.p;
        (0..self.spec.r).scan(x, move |rest, _| {
            let d = *rest % p;
            *rest /= p;
            Some(d)
        })
    }

    fn add_direct(&self, x: u32, y: u32) -> u32 {
        match self.spec.flavor {
            Flavor::Padic => ((x as u64 + y as u64) % self.size as u64) as u32,
            Flavor::Laurent => {
                let p = self.spec.p;
                let mut out = 0u32;
                let mut scale = 1u32;
                for (a, b) in self.digits(x).zip(self.digits(y)) {
                    out += ((a + b) % p) * scale;
                    scale = scale.wrapping_mul(p);
                }
                out
            }
        }
    }

    fn mul_direct(&self, x: u32, y: u32) -> u32 {
        match self.spec.flavor {
            Flavor::Padic => ((x as u64 * y as u64) % self.size as u64) as u32,
            Flavor::Laurent => {
                let p = self.spec.p as u64;
                let r = self.spec.r as usize;
                let a: Vec<u64> = self.digits(x).map(u64::from).collect();
                let b: Vec<u64> = self.digits(y).map(u64::from).collect();
                let mut out = 0u64;
                let mut scale = 1u64;
                for k in 0..r {
                    let c: u64 = (0..=k).map(|i| a[i] * b[k - i]).sum::<u64>() % p;
                    out += c * scale;
                    scale *= p;
                }
                out as u32
            }
        }
    }

    #[inline]
    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        if self.add_table.is_empty() {
            RingElem(self.add_direct(x.0, y.0))
        } else {
            RingElem(self.add_table[(x.0 * self.size + y.0) as usize])
        }
    }

    #[inline]
    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        if self.mul_table.is_empty() {
            RingElem(self.mul_direct(x.0, y.0))
        } else {
            RingElem(self.mul_table[(x.0 * self.size + y.0) as usize])
        }
    }

    pub fn neg(&self, x: RingElem) -> RingElem {
        match self.spec.flavor {
            Flavor::Padic => RingElem((self.size - x.0) % self.size),
            Flavor::Laurent => {
                let p = self.spec.p;
                let mut out = 0u32;
                let mut scale = 1u32;
                for a in self.digits(x.0) {
                    out += ((p - a) % p) * scale;
                    scale = scale.wrapping_mul(p);
                }
                RingElem(out)
            }
        }
    }

    #[inline]
    pub fn sub(&self, x: RingElem, y: RingElem) -> RingElem {
        self.add(x, self.neg(y))
    }

    pub fn pow(&self, x: RingElem, mut e: u64) -> RingElem {
        let mut base = x;
        let mut acc = RingElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Largest `i` with `x ∈ (ϖ^i)`; zero has valuation `r`.
    ///
    /// In both flavors `x ∈ (ϖ^i)` exactly when `p^i` divides the code.
    pub fn valuation(&self, x: RingElem) -> u32 {
        if x.0 == 0 {
            return self.spec.r;
        }
        let mut v = 0;
        let mut c = x.0;
        while c % self.spec.p == 0 {
            c /= self.spec.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        x.0 % self.spec.p != 0
    }

    pub fn inv(&self, x: RingElem) -> Result<RingElem, Error> {
        if !self.is_unit(x) {
            return Err(Error::NonUnit);
        }
        Ok(self.pow(x, self.spec.unit_count() - 1))
    }

    /// Reduction `O_r -> O_s` for `s <= r`.
    pub fn reduce_to(&self, x: RingElem, s: u32) -> RingElem {
        RingElem(x.0 % self.spec.p.pow(s.min(self.spec.r)))
    }

    /// Residue in `F_p`.
    pub fn residue(&self, x: RingElem) -> u32 {
        x.0 % self.spec.p
    }

    /// Value of the fixed additive character `ψ` of conductor `ϖ^r`, as a phase.
    ///
    /// p-adic: `ψ(x) = exp(2πi x / p^r)`. Laurent: `ψ(Σ a_i t^i) = exp(2πi a_{r-1} / p)`.
    pub fn psi(&self, x: RingElem) -> Phase {
        match self.spec.flavor {
            Flavor::Padic => Phase::new(x.0 as u64, self.size as u64),
            Flavor::Laurent => {
                let top = x.0 / self.spec.p.pow(self.spec.r - 1);
                Phase::new(top as u64, self.spec.p as u64)
            }
        }
    }

    pub fn format(&self, x: RingElem) -> String {
        match self.spec.flavor {
            Flavor::Padic => x.0.to_string(),
            Flavor::Laurent => {
                let terms: Vec<String> = self
                    .digits(x.0)
                    .enumerate()
                    .filter(|&(_, a)| a != 0)
                    .map(|(i, a)| match (i, a) {
                        (0, a) => a.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, a) => format!("{a}t"),
                        (i, 1) => format!("t^{i}"),
                        (i, a) => format!("{a}t^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    pub fn parse(&self, s: &str) -> Result<RingElem, Error> {
        let bad = || Error::Parse(format!("bad ring element {s:?} for {}", self.spec));
        let s = s.trim();
        match self.spec.flavor {
            Flavor::Padic => {
                let v: u32 = s.parse().map_err(|_| bad())?;
                if v >= self.size {
                    return Err(bad());
                }
                Ok(RingElem(v))
            }
            Flavor::Laurent => {
                let p = self.spec.p;
                let mut coeffs = vec![0u32; self.spec.r as usize];
                if s != "0" {
                    for term in s.split('+') {
                        let term = term.trim();
                        let (coef, deg) = match term.find('t') {
                            None => (term, 0usize),
                            Some(pos) => {
                                let deg = match &term[pos + 1..] {
                                    "" => 1,
                                    rest => rest
                                        .strip_prefix('^')
                                        .and_then(|d| d.parse().ok())
                                        .ok_or_else(bad)?,
                                };
                                (&term[..pos], deg)
                            }
                        };
                        let c: u32 = if coef.is_empty() {
                            1
                        } else {
                            coef.parse().map_err(|_| bad())?
                        };
                        if c == 0 || c >= p || deg >= coeffs.len() || coeffs[deg] != 0 {
                            return Err(bad());
                        }
                        coeffs[deg] = c;
                    }
                }
                Ok(RingElem(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)))
            }
        }
    }

    /// Generators of the unit group, found by greedy order search.
    pub fn unit_generators(&self) -> Vec<RingElem> {
        let units: Vec<RingElem> = self.units().collect();
        let order_of = |u: RingElem| {
            let mut x = u;
            let mut k = 1u64;
            while x != RingElem::ONE {
                x = self.mul(x, u);
                k += 1;
            }
            k
        };
        let mut by_order: Vec<(u64, RingElem)> = units.iter().map(|&u| (order_of(u), u)).collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut span = vec![false; self.size as usize];
        span[1] = true;
        let mut span_len = 1usize;
        let mut gens = Vec::new();
        for (_, u) in by_order {
            if span_len == units.len() {
                break;
            }
            if span[u.0 as usize] {
                continue;
            }
            gens.push(u);
            let mut frontier: Vec<RingElem> =
                (0..self.size).filter(|&x| span[x as usize]).map(RingElem).collect();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !span[y.0 as usize] {
                        span[y.0 as usize] = true;
                        span_len += 1;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_inverse_and_sum() {
        let r = Ring::new(RingSpec::padic(2, 3)).unwrap();
        assert_eq!(r.inv(RingElem(3)).unwrap(), RingElem(3));
        let r9 = Ring::new(RingSpec::padic(3, 2)).unwrap();
        assert_eq!(r9.add(RingElem(4), RingElem(7)), RingElem(2));
    }

    #[test]
    fn laurent_valuation() {
        let r = Ring::new(RingSpec::laurent(2, 3)).unwrap();
        let t = r.uniformizer();
        let t2 = r.mul(t, t);
        assert_eq!(r.valuation(t2), 2);
        assert_eq!(r.valuation(RingElem::ZERO), 3);
        assert_eq!(r.mul(t2, t), RingElem::ZERO);
    }

    #[test]
    fn laurent_is_characteristic_p() {
        let r = Ring::new(RingSpec::laurent(3, 2)).unwrap();
        let one = RingElem::ONE;
        let three = r.add(r.add(one, one), one);
        assert_eq!(three, RingElem::ZERO);
        // (1 + t)^3 = 1 + t^3 = 1
        let x = r.add(one, r.uniformizer());
        assert_eq!(r.pow(x, 3), one);
    }

    #[test]
    fn non_unit_and_non_prime_rejected() {
        let r = Ring::new(RingSpec::padic(2, 3)).unwrap();
        assert!(matches!(r.inv(RingElem(2)), Err(Error::NonUnit)));
        assert!(Ring::new(RingSpec::padic(4, 2)).is_err());
        assert!(Ring::new(RingSpec::padic(2, 0)).is_err());
    }

    #[test]
    fn psi_examples() {
        let r = Ring::new(RingSpec::padic(2, 3)).unwrap();
        assert_eq!(r.psi(RingElem(1)), Phase::new(1, 8));
        assert_eq!(r.psi(RingElem(4)), Phase::new(1, 2));
        let l = Ring::new(RingSpec::laurent(3, 2)).unwrap();
        assert_eq!(l.psi(l.uniformizer()), Phase::new(1, 3));
        assert_eq!(l.psi(RingElem::ONE), Phase::ZERO);
    }

    #[test]
    fn psi_is_additive_with_exact_conductor() {
        for spec in [
            RingSpec::padic(2, 3),
            RingSpec::padic(3, 2),
            RingSpec::laurent(2, 3),
            RingSpec::laurent(3, 2),
            RingSpec::padic(2, 8),
        ] {
            let r = Ring::new(spec).unwrap();
            for x in r.elements() {
                for y in r.elements() {
                    assert_eq!(r.psi(r.add(x, y)), r.psi(x) + r.psi(y));
                }
                if x != RingElem::ZERO {
                    assert!(
                        r.elements().any(|y| !r.psi(r.mul(x, y)).is_zero()),
                        "{spec}: psi(x·) trivial for x = {x:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn unit_counts_and_generators() {
        for spec in [
            RingSpec::padic(2, 1),
            RingSpec::padic(2, 4),
            RingSpec::padic(3, 3),
            RingSpec::laurent(2, 4),
            RingSpec::laurent(5, 2),
        ] {
            let r = Ring::new(spec).unwrap();
            assert_eq!(r.units().count() as u64, spec.unit_count());
            let gens = r.unit_generators();
            // (Z/2^r)^× needs two generators from r = 3 on
            if spec == RingSpec::padic(2, 4) {
                assert_eq!(gens.len(), 2);
            }
            for u in r.units() {
                assert_eq!(r.mul(u, r.inv(u).unwrap()), RingElem::ONE);
            }
        }
    }

    #[test]
    fn laurent_format_round_trip() {
        let r = Ring::new(RingSpec::laurent(3, 3)).unwrap();
        for x in r.elements() {
            assert_eq!(r.parse(&r.format(x)).unwrap(), x);
        }
        assert_eq!(r.format(RingElem(1 + 9)), "1+t^2");
        assert_eq!(r.format(RingElem(2 * 3)), "2t");
    }
}
