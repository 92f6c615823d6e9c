use crate::charfun::ClassFunction;
use crate::orbits::OrbitType;
use crate::{Error, TOLERANCE};

/// One irreducible character of `G_r` together with where it came from.
///
/// The label records the level, the source (oracle row, inflation, or orbit
/// construction with its parameter indices) and the `λ∘det` twist.
#[derive(Debug, Clone)]
pub struct IrrepRecord {
    pub label: String,
    pub level: u32,
    pub orbit_type: OrbitType,
    pub dim: u64,
    pub chi: ClassFunction,
}

impl IrrepRecord {
    pub fn new(label: String, level: u32, orbit_type: OrbitType, chi: ClassFunction) -> Result<Self, Error> {
        let d = chi.values()[0];
        if d.im.abs() > TOLERANCE || (d.re - d.re.round()).abs() > TOLERANCE || d.re < 0.5 {
            return Err(Error::TheoryViolation(format!("{label}: degree {d} is not a positive integer")));
        }
        Ok(IrrepRecord {
            label,
            level,
            orbit_type,
            dim: d.re.round() as u64,
            chi,
        })
    }

    pub fn twisted(&self, chi: ClassFunction, twist: usize) -> IrrepRecord {
        IrrepRecord {
            label: format!("{} λ{twist}", self.label),
            chi,
            ..self.clone()
        }
    }
}
