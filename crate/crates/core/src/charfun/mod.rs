//! Class functions on `G_r`, linear characters of subgroups, induction and inner products.

mod linear;

use std::sync::Arc;

use num_complex::Complex64;

pub use linear::LinearChar;

use crate::matgroup::{ConjClasses, FiniteGroup, Gl2Group, Mat2, Subgroup};
use crate::orbits::LevelConstants;
use crate::ring::{Phase, RingElem, RingSpec};
use crate::{Error, TOLERANCE};

/// Everything fixed at one level `r`: the enumerated group, its classes and the
/// additive character `x ↦ ψ(u x)` in use.
#[derive(Debug, Clone)]
pub struct Level {
    group: Arc<Gl2Group>,
    classes: Arc<ConjClasses>,
    psi_unit: RingElem,
}

impl Level {
    pub fn new(spec: RingSpec, cap: usize) -> Result<Level, Error> {
        let group = Gl2Group::enumerate(spec, cap)?;
        let classes = group.conjugacy_classes();
        Ok(Level::from_parts(group, classes))
    }

    pub fn from_parts(group: Gl2Group, classes: ConjClasses) -> Level {
        Level {
            group: Arc::new(group),
            classes: Arc::new(classes),
            psi_unit: RingElem::ONE,
        }
    }

    /// Replace `ψ` by `x ↦ ψ(u x)` for a unit `u`.
    pub fn with_psi_unit(mut self, u: RingElem) -> Result<Level, Error> {
        if !self.group.ring().is_unit(u) {
            return Err(Error::NonUnit);
        }
        self.psi_unit = u;
        Ok(self)
    }

    pub fn group(&self) -> &Gl2Group {
        &self.group
    }

    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn shared_classes(&self) -> Arc<ConjClasses> {
        Arc::clone(&self.classes)
    }

    pub fn spec(&self) -> RingSpec {
        self.group.spec()
    }

    pub fn r(&self) -> u32 {
        self.group.level()
    }

    pub fn psi_unit(&self) -> RingElem {
        self.psi_unit
    }

    pub fn constants(&self) -> LevelConstants {
        LevelConstants::new(self.r())
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn psi(&self, x: RingElem) -> Phase {
        let ring = self.group.ring();
        ring.psi(ring.mul(self.psi_unit, x))
    }

    /// `ψ(Tr(β̂ (x - 1)))` for `x ∈ K_i`; independent of the lift when `x - 1 ∈ ϖ^i M_2`.
    pub fn psi_beta_value(&self, beta_hat: &Mat2, x: usize) -> Phase {
        let ring = self.group.ring();
        let y = ring.mat_sub(self.group.mat(x), &Mat2::IDENTITY);
        self.psi(ring.trace(&ring.mat_mul(beta_hat, &y)))
    }

    /// `ψ_β` on `K_i`, `2i >= r`.
    pub fn psi_beta(&self, beta_hat: &Mat2, i: u32) -> Result<LinearChar, Error> {
        if 2 * i < self.r() {
            return Err(Error::OutOfRange(format!(
                "ψ_β is only a character of K_{i} when 2i >= r = {}",
                self.r()
            )));
        }
        let k = self.group.congruence_subgroup(i)?;
        let values = k
            .elements()
            .iter()
            .map(|&x| self.psi_beta_value(beta_hat, x))
            .collect();
        Ok(LinearChar::new(k, values))
    }

    pub fn class_function(&self, values: Vec<Complex64>) -> ClassFunction {
        assert_eq!(values.len(), self.classes.len());
        ClassFunction {
            class_id: self.classes.id(),
            values,
        }
    }

    pub fn trivial(&self) -> ClassFunction {
        self.class_function(vec![Complex64::new(1.0, 0.0); self.classes.len()])
    }

    /// `(Ind_H^G χ)(g) = Σ_{t ∈ G/H, t^{-1} g t ∈ H} χ(t^{-1} g t)` at each class representative.
    pub fn induce(&self, h: &Subgroup, chi: &[Complex64]) -> Result<ClassFunction, Error> {
        let group = &*self.group;
        let transversal = group.coset_reps(&group.whole(), h)?;
        let values = self
            .classes
            .reps()
            .iter()
            .map(|&g| induced_value(group, h, &transversal, chi, g))
            .collect();
        Ok(self.class_function(values))
    }

    pub fn induce_linear(&self, chi: &LinearChar) -> Result<ClassFunction, Error> {
        self.induce(chi.domain(), &chi.complex_values())
    }

    /// Induction through class sums, `(Ind χ)(C) = |G| / (|H| |C|) Σ_{h ∈ H ∩ C} χ(h)`.
    /// Independent of the transversal route and used to cross-check it.
    pub fn induce_by_class_sums(&self, h: &Subgroup, chi: &[Complex64]) -> ClassFunction {
        let mut sums = vec![Complex64::new(0.0, 0.0); self.classes.len()];
        for (i, &x) in h.elements().iter().enumerate() {
            sums[self.classes.class_of(x)] += chi[i];
        }
        let scale = self.order() as f64 / h.order() as f64;
        let values = sums
            .iter()
            .zip(self.classes.sizes())
            .map(|(s, &size)| s * (scale / size as f64))
            .collect();
        self.class_function(values)
    }

    /// Values of `f` on the elements of `h`, in `h`'s element order.
    pub fn restrict(&self, f: &ClassFunction, h: &Subgroup) -> Vec<Complex64> {
        h.elements()
            .iter()
            .map(|&x| f.values[self.classes.class_of(x)])
            .collect()
    }

    /// `⟨f, g⟩ = |G|^{-1} Σ_C |C| f(C) conj(g(C))`.
    pub fn inner(&self, f: &ClassFunction, g: &ClassFunction) -> Result<Complex64, Error> {
        if f.class_id != self.classes.id() || g.class_id != self.classes.id() {
            return Err(Error::ClassMismatch);
        }
        let total: Complex64 = f
            .values
            .iter()
            .zip(&g.values)
            .zip(self.classes.sizes())
            .map(|((a, b), &s)| a * b.conj() * s as f64)
            .sum();
        Ok(total / self.order() as f64)
    }

    /// Pointwise product with `λ∘det` for a character `λ` of `O_r^×`.
    pub fn mult_by_linear(&self, f: &ClassFunction, lambda: impl Fn(RingElem) -> Phase) -> ClassFunction {
        let values = self
            .classes
            .reps()
            .iter()
            .zip(&f.values)
            .map(|(&g, v)| v * lambda(self.group.det(g)).to_complex())
            .collect();
        ClassFunction {
            class_id: f.class_id,
            values,
        }
    }
}

/// One value of an induced class function; `chi` is indexed by position in `h`.
pub(crate) fn induced_value<G: FiniteGroup + ?Sized>(
    group: &G,
    h: &Subgroup,
    transversal: &[usize],
    chi: &[Complex64],
    g: usize,
) -> Complex64 {
    transversal
        .iter()
        .filter_map(|&t| h.position(group.conj(group.inv(t), g)))
        .map(|i| chi[i])
        .sum()
}

/// `Ind_H^U χ` evaluated at every element of `U` (in `U`'s element order).
pub fn induce_within<G: FiniteGroup + ?Sized>(
    group: &G,
    u: &Subgroup,
    h: &Subgroup,
    chi: &[Complex64],
) -> Result<Vec<Complex64>, Error> {
    let transversal = group.coset_reps(u, h)?;
    Ok(u.elements()
        .iter()
        .map(|&g| induced_value(group, h, &transversal, chi, g))
        .collect())
}

/// `|H|^{-1} Σ_h f(h) conj(g(h))` for functions given on the elements of a subgroup.
pub fn inner_on_elements(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let total: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum();
    total / f.len() as f64
}

/// A complex-valued class function on `G_r`, one value per conjugacy class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    class_id: u64,
    values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn class_id(&self) -> u64 {
        self.class_id
    }

    /// Value at the identity class.
    pub fn degree(&self) -> f64 {
        self.values[0].re
    }

    pub fn max_distance(&self, other: &ClassFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ClassFunction) -> bool {
        self.class_id == other.class_id && self.max_distance(other) < TOLERANCE
    }

    pub fn scaled(&self, s: f64) -> ClassFunction {
        ClassFunction {
            class_id: self.class_id,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sum(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            class_id: self.class_id,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }
}

#[cfg(test)]
mod tests;
