use crate::Error;

/// A finite group with elements indexed `0..order`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    /// `g x g^{-1}`
    fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a^{-1} b^{-1}`
    fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    fn element_order(&self, g: usize) -> u64 {
        let e = self.identity();
        let mut x = g;
        let mut k = 1;
        while x != e {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order(), (0..self.order()).collect())
    }

    /// Subgroup generated by `gens`.
    fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order()];
        let e = self.identity();
        member[e] = true;
        let mut elems = vec![e];
        let mut frontier = vec![e];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        Subgroup::from_sorted(self.order(), elems)
    }

    /// The set `{ab : a ∈ A, b ∈ B}`, which must be a subgroup.
    fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup, Error> {
        let mut member = vec![false; self.order()];
        let mut elems = Vec::new();
        for &x in a.elements() {
            for &y in b.elements() {
                let z = self.mul(x, y);
                if !member[z] {
                    member[z] = true;
                    elems.push(z);
                }
            }
        }
        elems.sort_unstable();
        let s = Subgroup::from_sorted(self.order(), elems);
        if !self.is_closed(&s) {
            return Err(Error::NotSubgroup("product set is not closed".into()));
        }
        Ok(s)
    }

    fn is_closed(&self, s: &Subgroup) -> bool {
        let gens = s.generators(self);
        s.contains(self.identity())
            && s.elements().iter().all(|&x| gens.iter().all(|&g| s.contains(self.mul(x, g))))
    }

    /// `g H g^{-1} = H` for every `g` in `gens`.
    fn normalizes(&self, gens: &[usize], h: &Subgroup) -> bool {
        gens.iter()
            .all(|&g| h.elements().iter().all(|&x| h.contains(self.conj(g, x))))
    }

    /// Left transversal of `H` in `U`: one representative `t` per coset `tH`.
    fn coset_reps(&self, u: &Subgroup, h: &Subgroup) -> Result<Vec<usize>, Error> {
        if !h.is_subset_of(u) {
            return Err(Error::NotSubgroup("H is not contained in G".into()));
        }
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::with_capacity(u.order() / h.order());
        for &t in u.elements() {
            if covered[t] {
                continue;
            }
            reps.push(t);
            for &x in h.elements() {
                covered[self.mul(t, x)] = true;
            }
        }
        Ok(reps)
    }
}

/// A subset of a finite group, stored as a sorted index list plus a dense position map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elems: Vec<usize>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl Subgroup {
    pub(crate) fn from_sorted(parent_order: usize, elems: Vec<usize>) -> Subgroup {
        let mut pos = vec![ABSENT; parent_order];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i as u32;
        }
        Subgroup { elems, pos }
    }

    /// Build from an arbitrary element list; closure is not checked here.
    pub fn from_elements(parent_order: usize, mut elems: Vec<usize>) -> Subgroup {
        elems.sort_unstable();
        elems.dedup();
        Subgroup::from_sorted(parent_order, elems)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn parent_order(&self) -> usize {
        self.pos.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.pos[g] != ABSENT
    }

    /// Position of `g` in [`Subgroup::elements`].
    #[inline]
    pub fn position(&self, g: usize) -> Option<usize> {
        match self.pos[g] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elems = self.elems.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted(self.parent_order(), elems)
    }

    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Subgroup {
        let elems = self.elems.iter().copied().filter(|&x| keep(x)).collect();
        Subgroup::from_sorted(self.parent_order(), elems)
    }

    /// A generating set, picked greedily in element order.
    pub fn generators<G: FiniteGroup + ?Sized>(&self, group: &G) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; group.order()];
        let e = group.identity();
        span[e] = true;
        let mut span_elems = vec![e];
        for &x in &self.elems {
            if span[x] {
                continue;
            }
            gens.push(x);
            let mut frontier = span_elems.clone();
            while let Some(y) = frontier.pop() {
                for &g in &gens {
                    let z = group.mul(y, g);
                    if !span[z] {
                        span[z] = true;
                        span_elems.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        gens
    }

    pub fn is_abelian<G: FiniteGroup + ?Sized>(&self, group: &G) -> bool {
        let gens = self.generators(group);
        gens.iter()
            .all(|&a| gens.iter().all(|&b| group.mul(a, b) == group.mul(b, a)))
    }
}

/// A group given by an explicit multiplication table.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    identity: usize,
}

impl CayleyTable {
    pub fn new(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, Error> {
        let table: Vec<usize> = (0..n * n).map(|k| mul(k / n, k % n)).collect();
        if table.iter().any(|&x| x >= n) {
            return Err(Error::NotSubgroup("table not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::NotSubgroup("no identity".into()))?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x * n + y] == identity)
                    .ok_or_else(|| Error::NotSubgroup("missing inverse".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(CayleyTable {
            n,
            table,
            inverses,
            identity,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        CayleyTable::new(n, |a, b| (a + b) % n).expect("cyclic group table")
    }
}

impl FiniteGroup for CayleyTable {
    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
}
