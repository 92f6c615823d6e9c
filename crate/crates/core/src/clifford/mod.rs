//! Constructions of the irreducible characters lying over a reduced orbit.
//!
//! Three strategies are available behind the [`Construction`] trait:
//!
//! | name           | parity | orbit types              |
//! |----------------|--------|--------------------------|
//! | `even`         | even   | `(1')`, `(2')`, `(3')`   |
//! | `odd-split`    | odd    | `(1')`, `(3')`           |
//! | `odd-cuspidal` | odd    | `(2')`                   |
//!
//! [`Registry::standard`] holds all three and [`Registry::select`] picks the
//! one responsible for a given level and orbit.

mod cuspidal;
mod even;
mod form;
mod matrep;
mod split;

pub use cuspidal::{
    cyclic_extend, cyclic_extend_on_branch, heisenberg, heisenberg_family, odd_cuspidal, Heisenberg, INTERTWINER_SEED,
};
pub use even::even_case;
pub use form::{BilinearFormTable, FormValue};
pub use matrep::MatrixRep;
pub use split::{odd_split, split_form, stable_extensions, ExtensionClass, SplitForm, StableExtensions};

use crate::charfun::{Level, LinearChar};
use crate::driver::IrrepRecord;
use crate::matgroup::{FiniteGroup, Subgroup};
use crate::orbits::{OrbitDescriptor, OrbitType};
use crate::ring::{AbelianCharTable, Phase};
use crate::{Error, TOLERANCE};

/// A strategy for building `Irr(G_r | ψ_β)` from a reduced orbit representative.
pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether this strategy is responsible for `kind` at level `r`.
    fn handles(&self, r: u32, kind: OrbitType) -> bool;

    fn construct(&self, level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error>;
}

struct Even;
struct OddSplit;
struct OddCuspidal;

fn is_reduced(kind: OrbitType) -> bool {
    kind != OrbitType::Scalar
}

impl Construction for Even {
    fn name(&self) -> &'static str {
        "even"
    }

    fn handles(&self, r: u32, kind: OrbitType) -> bool {
        r % 2 == 0 && is_reduced(kind)
    }

    fn construct(&self, level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
        even_case(level, orbit)
    }
}

impl Construction for OddSplit {
    fn name(&self) -> &'static str {
        "odd-split"
    }

    fn handles(&self, r: u32, kind: OrbitType) -> bool {
        r % 2 == 1 && matches!(kind, OrbitType::SplitDiag | OrbitType::ScalarPlusNilpotent)
    }

    fn construct(&self, level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
        odd_split(level, orbit)
    }
}

impl Construction for OddCuspidal {
    fn name(&self) -> &'static str {
        "odd-cuspidal"
    }

    fn handles(&self, r: u32, kind: OrbitType) -> bool {
        r % 2 == 1 && kind == OrbitType::Cuspidal
    }

    fn construct(&self, level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
        odd_cuspidal(level, orbit)
    }
}

/// Named constructions, looked up by name or selected by level and orbit type.
pub struct Registry {
    entries: Vec<Box<dyn Construction>>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { entries: Vec::new() }
    }

    /// `even`, `odd-split` and `odd-cuspidal`.
    pub fn standard() -> Registry {
        let mut reg = Registry::empty();
        reg.register(Box::new(Even));
        reg.register(Box::new(OddSplit));
        reg.register(Box::new(OddCuspidal));
        reg
    }

    /// Adds a construction, replacing any existing one with the same name.
    pub fn register(&mut self, c: Box<dyn Construction>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Construction> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn select(&self, r: u32, kind: OrbitType) -> Option<&dyn Construction> {
        self.entries.iter().find(|e| e.handles(r, kind)).map(|e| e.as_ref())
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}

/// The linear character `ak ↦ left(a) right(k)` on `target = A K`, with every
/// factorization of every element checked to give the same value.
pub(crate) fn glue<G: FiniteGroup + ?Sized>(
    group: &G,
    target: &Subgroup,
    left: &LinearChar,
    right: &LinearChar,
) -> Result<LinearChar, Error> {
    let mut values: Vec<Option<Phase>> = vec![None; target.order()];
    for (&a, &va) in left.domain().elements().iter().zip(left.values()) {
        for (&k, &vk) in right.domain().elements().iter().zip(right.values()) {
            let pos = target
                .position(group.mul(a, k))
                .ok_or_else(|| Error::NotSubgroup("product outside the glued domain".into()))?;
            let v = va + vk;
            match values[pos] {
                Some(w) if w != v => {
                    return Err(Error::TheoryViolation(
                        "glued character is not well defined on an overlap".into(),
                    ))
                }
                _ => values[pos] = Some(v),
            }
        }
    }
    let values = values
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotSubgroup("product set does not cover the target".into()))?;
    Ok(LinearChar::new(target.clone(), values))
}

/// Characters of the abelian subgroup `a` restricting to `chi` on `sub`.
pub(crate) fn abelian_extensions<G: FiniteGroup + ?Sized>(
    group: &G,
    a: &Subgroup,
    sub: &Subgroup,
    chi: impl Fn(usize) -> Phase,
) -> Result<Vec<LinearChar>, Error> {
    let table = AbelianCharTable::extensions(a.elements(), |x, y| group.mul(x, y), sub.elements(), chi)
        .map_err(|e| Error::TheoryViolation(format!("character extension failed: {e}")))?;
    Ok((0..table.len())
        .map(|c| {
            let vals = a.elements().iter().map(|&x| table.value(c, x)).collect();
            LinearChar::new(a.clone(), vals)
        })
        .collect())
}

/// Checks shared by every construction: each output irreducible, outputs
/// pairwise orthogonal, each lying over `ψ_β`, and together exhausting
/// `Ind_{K_l}^{G} ψ_β`, i.e. `Σ dim² = [G : T(ψ_β)] [G : K_l]`.
pub(crate) fn check_outputs(level: &Level, orbit: &OrbitDescriptor, records: &[IrrepRecord]) -> Result<(), Error> {
    let t = crate::orbits::stabilizer(level, orbit)?;
    let kl = level.group().congruence_subgroup(level.constants().l)?;
    let mass: u64 = records.iter().map(|r| r.dim * r.dim).sum();
    let expected = (level.order() / t.order()) as u64 * (level.order() / kl.order()) as u64;
    if mass != expected {
        return Err(Error::TheoryViolation(format!(
            "characters over {} have Σ dim² = {mass}, expected {expected}",
            orbit.label(level.group().ring())
        )));
    }
    let psi = level.psi_beta(&orbit.beta_hat, level.constants().l)?;
    let psi_vals = psi.complex_values();
    for (i, rec) in records.iter().enumerate() {
        let norm = level.inner(&rec.chi, &rec.chi)?;
        if (norm.re - 1.0).abs() > TOLERANCE || norm.im.abs() > TOLERANCE {
            return Err(Error::TheoryViolation(format!("{}: ⟨χ,χ⟩ = {norm}", rec.label)));
        }
        for other in &records[..i] {
            let ip = level.inner(&rec.chi, &other.chi)?;
            if ip.norm() > TOLERANCE {
                return Err(Error::TheoryViolation(format!(
                    "{} and {} are not orthogonal ({ip})",
                    rec.label, other.label
                )));
            }
        }
        let res = level.restrict(&rec.chi, &kl);
        let over = crate::charfun::inner_on_elements(&res, &psi_vals);
        if over.re < 0.5 {
            return Err(Error::TheoryViolation(format!("{} does not lie over ψ_β", rec.label)));
        }
    }
    Ok(())
}
