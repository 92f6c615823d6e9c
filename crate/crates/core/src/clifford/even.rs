use crate::charfun::Level;
use crate::driver::IrrepRecord;
use crate::matgroup::FiniteGroup;
use crate::orbits::{unit_algebra, OrbitDescriptor, OrbitType};
use crate::Error;

use super::{abelian_extensions, check_outputs, glue};

/// `Ind_{A K_l}^{G_r}(θ ψ_β)` for every character `θ` of `A = O_r[β̂]^×`
/// agreeing with `ψ_β` on `A ∩ K_l`. Requires `r` even.
pub fn even_case(level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
    let consts = level.constants();
    if !consts.is_even() {
        return Err(Error::WrongParity(format!("even construction needs even r, got r = {}", level.r())));
    }
    if orbit.kind == OrbitType::Scalar {
        return Err(Error::WrongConstruction("scalar orbits are obtained by twisting".into()));
    }
    let group = level.group();
    let a = unit_algebra(level, &orbit.beta_hat);
    let psi = level.psi_beta(&orbit.beta_hat, consts.l)?;
    let inter = a.intersection(psi.domain());
    let thetas = abelian_extensions(group, &a, &inter, |x| psi.value(x))?;
    if thetas.len() * inter.order() != a.order() {
        return Err(Error::TheoryViolation(format!(
            "{} characters θ, expected [A : A ∩ K_l] = {}",
            thetas.len(),
            a.order() / inter.order()
        )));
    }
    let t = group.product_set(&a, psi.domain())?;
    let label = orbit.label(group.ring());
    let mut out = Vec::with_capacity(thetas.len());
    for (i, theta) in thetas.iter().enumerate() {
        let glued = glue(group, &t, theta, &psi)?;
        let chi = level.induce_linear(&glued)?;
        out.push(IrrepRecord::new(
            format!("r={} even {label} θ{i}", level.r()),
            level.r(),
            orbit.kind,
            chi,
        )?);
    }
    check_outputs(level, orbit, &out)?;
    log::debug!("even {label}: {} characters of degree {}", out.len(), out[0].dim);
    Ok(out)
}
