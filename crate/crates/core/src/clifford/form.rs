use crate::ring::Phase;

/// Value type of an alternating form: `F_p` for the residue form, roots of unity
/// for commutator forms.
pub trait FormValue: Copy + Eq {
    fn is_trivial(self) -> bool;
}

impl FormValue for u32 {
    fn is_trivial(self) -> bool {
        self == 0
    }
}

impl FormValue for Phase {
    fn is_trivial(self) -> bool {
        self.is_zero()
    }
}

/// A form on a finite elementary abelian group `V`, tabulated on all pairs of
/// its enumerated elements. Element 0 is the zero vector.
#[derive(Debug, Clone)]
pub struct BilinearFormTable<V> {
    size: usize,
    values: Vec<V>,
}

impl<V: FormValue> BilinearFormTable<V> {
    pub fn tabulate(size: usize, form: impl Fn(usize, usize) -> V) -> Self {
        let values = (0..size * size).map(|k| form(k / size, k % size)).collect();
        BilinearFormTable { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, v: usize, w: usize) -> V {
        self.values[v * self.size + w]
    }

    /// `form(v, v)` trivial for every `v`.
    pub fn is_alternating(&self) -> bool {
        (0..self.size).all(|v| self.get(v, v).is_trivial())
    }

    /// `{v : form(v, w) trivial for all w}`.
    pub fn radical(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&v| (0..self.size).all(|w| self.get(v, w).is_trivial()))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    pub fn is_isotropic(&self, subset: &[usize]) -> bool {
        subset
            .iter()
            .all(|&v| subset.iter().all(|&w| self.get(v, w).is_trivial()))
    }

    /// Isotropic, containing the radical, and of the maximal size `sqrt(|V| |rad|)`.
    pub fn is_maximal_isotropic(&self, subset: &[usize]) -> bool {
        let rad = self.radical();
        self.is_isotropic(subset)
            && rad.iter().all(|v| subset.contains(v))
            && subset.len() * subset.len() == self.size * rad.len()
    }
}
