use crate::charfun::{inner_on_elements, Level, LinearChar};
use crate::driver::IrrepRecord;
use crate::matgroup::{FiniteGroup, Gl2Group, Subgroup};
use crate::orbits::{stabilizer, unit_algebra, OrbitDescriptor, OrbitType};
use crate::{Error, TOLERANCE};

use super::{abelian_extensions, check_outputs, cyclic_extend, glue, BilinearFormTable, MatrixRep, INTERTWINER_SEED};

/// The residue form on `V = K_{l'}/K_l ≅ M_2(F_p)` and the subgroup `H_β`.
///
/// Vectors are indexed by `m_11 + p m_12 + p² m_21 + p³ m_22`.
#[derive(Debug, Clone)]
pub struct SplitForm {
    pub form: BilinearFormTable<u32>,
    /// `H_β = K_l (B ∩ K_{l'})`.
    pub h: Subgroup,
    /// Image of `H_β` in `V`, sorted.
    pub h_image: Vec<usize>,
    /// Radical of the form, found by exhaustive search.
    pub radical: Vec<usize>,
    /// Image of `O_r[β̂]^× ∩ K_{l'}` in `V`, sorted.
    pub unit_image: Vec<usize>,
}

fn vector_index(p: u32, m: [u32; 4]) -> usize {
    let p = p as usize;
    m[0] as usize + p * (m[1] as usize + p * (m[2] as usize + p * m[3] as usize))
}

fn vector_entries(p: u32, mut v: usize) -> [u32; 4] {
    let p = p as usize;
    let mut m = [0u32; 4];
    for e in &mut m {
        *e = (v % p) as u32;
        v /= p;
    }
    m
}

/// `(x - 1) / ϖ^i mod ϖ` for `x ∈ K_i`.
fn layer_vector(group: &Gl2Group, x: usize, i: u32) -> usize {
    let ring = group.ring();
    let p = ring.p();
    let shift = p.pow(i);
    let y = ring.mat_sub(group.mat(x), &crate::matgroup::Mat2::IDENTITY);
    vector_index(p, y.entries().map(|e| (e.code() / shift) % p))
}

fn mat_mul_mod(p: u32, x: [u32; 4], y: [u32; 4]) -> [u32; 4] {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

fn image(group: &Gl2Group, s: &Subgroup, i: u32) -> Vec<usize> {
    let mut v: Vec<usize> = s.elements().iter().map(|&x| layer_vector(group, x, i)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn check_split_input(level: &Level, orbit: &OrbitDescriptor) -> Result<(), Error> {
    let consts = level.constants();
    if consts.is_even() {
        return Err(Error::WrongParity(format!("odd construction needs odd r, got r = {}", level.r())));
    }
    if consts.l_prime == 0 {
        return Err(Error::OutOfRange("r = 1 has no orbit constructions".into()));
    }
    match orbit.kind {
        OrbitType::Cuspidal => Err(Error::WrongConstruction("use odd_cuspidal".into())),
        OrbitType::Scalar => Err(Error::WrongConstruction("scalar orbits are obtained by twisting".into())),
        OrbitType::SplitDiag | OrbitType::ScalarPlusNilpotent => Ok(()),
    }
}

/// `⟨m, n⟩ = Tr(β̄ (m n - n m))` on `K_{l'}/K_l` and the subgroup `H_β`, with
/// `H_β/K_l` checked to be maximal isotropic and `H_β` normal in `T(ψ_β)`.
/// The representative must be upper triangular mod `ϖ`.
pub fn split_form(level: &Level, orbit: &OrbitDescriptor) -> Result<SplitForm, Error> {
    check_split_input(level, orbit)?;
    let consts = level.constants();
    let group = level.group();
    let ring = group.ring();
    let p = ring.p();
    let beta_bar = orbit.beta.entries().map(|e| ring.residue(e));
    let form = BilinearFormTable::tabulate(p.pow(4) as usize, |v, w| {
        let (m, n) = (vector_entries(p, v), vector_entries(p, w));
        let (mn, nm) = (mat_mul_mod(p, m, n), mat_mul_mod(p, n, m));
        let comm = [0, 1, 2, 3].map(|k| (mn[k] + p - nm[k]) % p);
        let prod = mat_mul_mod(p, beta_bar, comm);
        (prod[0] + prod[3]) % p
    });
    if !form.is_alternating() {
        return Err(Error::TheoryViolation("residue form is not alternating".into()));
    }

    let k_lp = group.congruence_subgroup(consts.l_prime)?;
    let k_l = group.congruence_subgroup(consts.l)?;
    let h = group.product_set(&group.borel().intersection(&k_lp), &k_l)?;
    let h_image = image(group, &h, consts.l_prime);
    if !form.is_maximal_isotropic(&h_image) {
        return Err(Error::TheoryViolation(format!(
            "H_β/K_l is not maximal isotropic for {}; the representative must be upper triangular mod ϖ",
            orbit.label(ring)
        )));
    }
    let t = stabilizer(level, orbit)?;
    if !group.normalizes(&t.generators(group), &h) {
        return Err(Error::TheoryViolation("H_β is not normal in T(ψ_β)".into()));
    }
    let radical = form.radical();
    let unit_image = image(group, &unit_algebra(level, &orbit.beta_hat).intersection(&k_lp), consts.l_prime);
    Ok(SplitForm {
        form,
        h,
        h_image,
        radical,
        unit_image,
    })
}

/// Extensions of `ψ_β` from `K_l` to `H_β`, grouped by `K_{l'}`-conjugacy.
///
/// The `K_{l'}`-orbits of extensions correspond to the `q²` irreducible
/// constituents `ρ = Ind_{H_β}^{K_{l'}} ψ'` of `Ind_{K_l}^{K_{l'}} ψ_β`. An orbit
/// may hold several `A`-stable extensions (over `F_2` the split torus is
/// trivial and `A ⊆ H_β`) or none at all (over `F_2` the unipotent part of
/// `A` for a `(3')` orbit can swap the two members of an orbit).
#[derive(Debug, Clone)]
pub struct StableExtensions {
    /// Number of extensions of `ψ_β` to `H_β`.
    pub total: usize,
    /// The extensions stable under `A = O_r[β̂]^×`.
    pub stable: Vec<LinearChar>,
    /// One entry per `K_{l'}`-orbit.
    pub classes: Vec<ExtensionClass>,
}

#[derive(Debug, Clone)]
pub enum ExtensionClass {
    /// Index into `stable` of the first stable member.
    Stable(usize),
    /// No member is `A`-stable; any member.
    Unstable(LinearChar),
}

pub fn stable_extensions(level: &Level, orbit: &OrbitDescriptor, h: &Subgroup) -> Result<StableExtensions, Error> {
    let group = level.group();
    let consts = level.constants();
    let psi = level.psi_beta(&orbit.beta_hat, consts.l)?;
    let a = unit_algebra(level, &orbit.beta_hat);
    let a_gens = a.generators(group);
    let all = psi.extensions_to(group, h)?;

    let k_gens = group.congruence_subgroup(consts.l_prime)?.generators(group);
    let conjugate = |c: &LinearChar, k: usize| {
        let k_inv = group.inv(k);
        let vals = h.elements().iter().map(|&x| c.value(group.conj(k_inv, x))).collect();
        LinearChar::new(h.clone(), vals)
    };
    let mut orbit_of = vec![usize::MAX; all.len()];
    let mut n_orbits = 0;
    for start in 0..all.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        orbit_of[start] = n_orbits;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &k in &k_gens {
                let image = conjugate(&all[i], k);
                let j = all
                    .iter()
                    .position(|c| *c == image)
                    .ok_or_else(|| Error::TheoryViolation("K_{l'} does not permute the extensions".into()))?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = n_orbits;
                    stack.push(j);
                }
            }
        }
        n_orbits += 1;
    }
    let q = group.ring().p() as usize;
    if n_orbits != q * q {
        return Err(Error::TheoryViolation(format!(
            "{n_orbits} K_{{l'}}-orbits of extensions of ψ_β to H_β, expected q² = {}",
            q * q
        )));
    }

    let total = all.len();
    let mut stable = Vec::new();
    let mut classes: Vec<Option<ExtensionClass>> = vec![None; n_orbits];
    for (c, &o) in all.into_iter().zip(&orbit_of) {
        if c.is_stable_under(group, &a_gens) {
            if !matches!(classes[o], Some(ExtensionClass::Stable(_))) {
                classes[o] = Some(ExtensionClass::Stable(stable.len()));
            }
            stable.push(c);
        } else if classes[o].is_none() {
            classes[o] = Some(ExtensionClass::Unstable(c));
        }
    }
    Ok(StableExtensions {
        total,
        stable,
        classes: classes.into_iter().map(|c| c.expect("every orbit is non-empty")).collect(),
    })
}

/// Irreducible characters over a split or scalar-plus-nilpotent orbit for odd `r`:
/// `Ind_{A H_β}^{G_r}(ω' ψ̃_β)` for each `A`-stable extension `ψ'_β` of `ψ_β`
/// to `H_β` and each character `ω'` of `A H_β / H_β`.
pub fn odd_split(level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
    odd_split_choosing(level, orbit, 0)
}

/// `odd_split` taking the `choice`-th (cyclically) extension `ψ''_β` to `A K_l`
/// compatible with each `ψ'_β`, instead of the first.
pub(crate) fn odd_split_choosing(
    level: &Level,
    orbit: &OrbitDescriptor,
    choice: usize,
) -> Result<Vec<IrrepRecord>, Error> {
    let sf = split_form(level, orbit)?;
    let consts = level.constants();
    let group = level.group();
    let h = &sf.h;
    let psi = level.psi_beta(&orbit.beta_hat, consts.l)?;
    let k_l = psi.domain();
    let a = unit_algebra(level, &orbit.beta_hat);
    let stable = stable_extensions(level, orbit, h)?;

    let a_kl = group.product_set(&a, k_l)?;
    let thetas = abelian_extensions(group, &a, &a.intersection(k_l), |x| psi.value(x))?;
    let psi2_candidates = thetas
        .iter()
        .map(|theta| glue(group, &a_kl, theta, &psi))
        .collect::<Result<Vec<_>, _>>()?;

    let ah = group.product_set(&a, h)?;
    let a_cap_h = a.intersection(h);
    let omegas = abelian_extensions(group, &a, &a_cap_h, |_| crate::ring::Phase::ZERO)?;
    let trivial_h = LinearChar::trivial(h.clone());
    let omega_lifts = omegas
        .iter()
        .map(|w| glue(group, &ah, w, &trivial_h))
        .collect::<Result<Vec<_>, _>>()?;

    let label = orbit.label(group.ring());
    let mut out = Vec::new();
    let t = stabilizer(level, orbit)?;
    let k_lp = group.congruence_subgroup(consts.l_prime)?;
    for (i, class) in stable.classes.iter().enumerate() {
        let psi1 = match class {
            ExtensionClass::Stable(k) => &stable.stable[*k],
            ExtensionClass::Unstable(c) => {
                // no A-stable member: extend ρ = Ind_{H_β}^{K_{l'}} ψ' to T directly
                let rho = MatrixRep::induced_from_linear(group, &k_lp, c)?;
                let chi_rho = rho.character();
                if (inner_on_elements(&chi_rho, &chi_rho) - 1.0).norm() > TOLERANCE {
                    return Err(Error::TheoryViolation("Ind_{H_β}^{K_{l'}} ψ' is reducible".into()));
                }
                for (j, ext) in cyclic_extend(group, &rho, &t, INTERTWINER_SEED)?.iter().enumerate() {
                    out.push(IrrepRecord::new(
                        format!("r={} odd-split {label} ρ{i} ρ̃{j}", level.r()),
                        level.r(),
                        orbit.kind,
                        level.induce(&t, &ext.character())?,
                    )?);
                }
                continue;
            }
        };
        let compatible: Vec<&LinearChar> = psi2_candidates.iter().filter(|c| c.agrees_with(psi1)).collect();
        if compatible.is_empty() {
            return Err(Error::TheoryViolation("no extension to A K_l agrees with ψ'_β".into()));
        }
        let psi2 = compatible[choice % compatible.len()];
        let psi3 = glue(group, &ah, &psi2.restrict(&a), psi1)?;
        if !psi3.is_multiplicative(group) {
            return Err(Error::TheoryViolation("ψ‴_β is not multiplicative".into()));
        }
        for (j, w) in omega_lifts.iter().enumerate() {
            let chi = level.induce_linear(&psi3.times(w))?;
            out.push(IrrepRecord::new(
                format!("r={} odd-split {label} ψ'{i} ω'{j}", level.r()),
                level.r(),
                orbit.kind,
                chi,
            )?);
        }
    }
    let q = group.ring().p() as usize;
    if out.len() != q * q * (a.order() / a_cap_h.order()) {
        return Err(Error::TheoryViolation(format!("odd-split produced {} characters", out.len())));
    }
    check_outputs(level, orbit, &out)?;
    log::debug!("odd-split {label}: {} characters of degree {}", out.len(), out[0].dim);
    Ok(out)
}
