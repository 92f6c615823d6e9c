//! Conjugation orbits on `M_2(O_{l'})`, their normal forms, and the stabilizers `T(ψ_β)`.
//!
//! Every orbit falls into one of four types according to its reduction mod `ϖ`.
//! Scalar orbits are handled by twisting and inflation; the scalar-plus-nilpotent
//! ones become type `(3')` after a scalar twist. What remains to be constructed
//! are the reduced representatives:
//!
//! * `(1')` `diag(a, d)` with `a ≢ d mod ϖ`
//! * `(2')` `companion(Δ, s)` with `x² - s x + Δ` irreducible mod `ϖ`
//! * `(3')` `companion(Δ, s)` with `Δ, s ∈ ϖ O_{l'}`

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charfun::Level;
use crate::matgroup::{FiniteGroup, Mat2, Subgroup};
use crate::ring::{Ring, RingElem};
use crate::Error;

/// `l = ⌊(r+1)/2⌋` and `l' = ⌊r/2⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelConstants {
    pub l: u32,
    pub l_prime: u32,
}

impl LevelConstants {
    pub fn new(r: u32) -> Self {
        LevelConstants {
            l: (r + 1) / 2,
            l_prime: r / 2,
        }
    }

    pub fn is_even(&self) -> bool {
        self.l == self.l_prime
    }
}

/// Type of an orbit by its reduction mod `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitType {
    Scalar,
    SplitDiag,
    Cuspidal,
    ScalarPlusNilpotent,
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitType::Scalar => "scalar",
            OrbitType::SplitDiag => "split_diag",
            OrbitType::Cuspidal => "cuspidal",
            OrbitType::ScalarPlusNilpotent => "scalar_plus_nilpotent",
        };
        f.write_str(s)
    }
}

/// Normal-form parameters of a reduced representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitParams {
    Diagonal { a: RingElem, d: RingElem },
    Companion { s: RingElem, delta: RingElem },
}

/// A reduced orbit representative `β ∈ M_2(O_{l'})` together with a lift `β̂ ∈ M_2(O_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitDescriptor {
    pub beta: Mat2,
    pub beta_hat: Mat2,
    pub kind: OrbitType,
    pub params: OrbitParams,
}

impl OrbitDescriptor {
    /// Descriptor with the canonical lift (same digits, zero top digits), whose code equals `beta`'s.
    pub fn new(beta: Mat2, kind: OrbitType, params: OrbitParams) -> Self {
        OrbitDescriptor {
            beta,
            beta_hat: beta,
            kind,
            params,
        }
    }

    pub fn with_lift(self, beta_hat: Mat2) -> Self {
        OrbitDescriptor { beta_hat, ..self }
    }

    pub fn label(&self, ring: &Ring) -> String {
        let f = |x: RingElem| ring.format(x);
        match self.params {
            OrbitParams::Diagonal { a, d } => format!("{}[a={},d={}]", self.kind, f(a), f(d)),
            OrbitParams::Companion { s, delta } => {
                format!("{}[s={},Δ={}]", self.kind, f(s), f(delta))
            }
        }
    }
}

/// `[[0, 1], [-Δ, s]]`, the companion matrix of `x² - s x + Δ`.
pub fn companion(ring: &Ring, delta: RingElem, s: RingElem) -> Mat2 {
    Mat2 {
        a: RingElem::ZERO,
        b: RingElem::ONE,
        c: ring.neg(delta),
        d: s,
    }
}

/// Number of roots of `x² - s x + Δ` in `F_p`, counted without multiplicity.
fn residue_roots(p: u32, s: u32, delta: u32) -> Vec<u32> {
    (0..p)
        .filter(|&x| (x * x + (p - s % p) * x + delta) % p == 0)
        .collect()
}

/// Type of `β` from its reduction mod `ϖ` (rational canonical form over `F_p`).
pub fn classify_mod_p(ring: &Ring, beta: &Mat2) -> OrbitType {
    let bar = beta.reduce(ring, 1);
    if bar.b.0 == 0 && bar.c.0 == 0 && bar.a == bar.d {
        return OrbitType::Scalar;
    }
    let p = ring.p();
    let s = ring.residue(ring.trace(beta));
    let delta = ring.residue(ring.det(beta));
    match residue_roots(p, s, delta).len() {
        0 => OrbitType::Cuspidal,
        1 => OrbitType::ScalarPlusNilpotent,
        _ => OrbitType::SplitDiag,
    }
}

/// The reduced representatives `(1')`, `(2')`, `(3')` over `ring = O_{l'}`.
pub fn orbit_reps(ring: &Ring) -> Vec<OrbitDescriptor> {
    let p = ring.p();
    let mut out = Vec::new();
    for a in ring.elements() {
        for d in ring.elements() {
            if a < d && ring.residue(a) != ring.residue(d) {
                let beta = Mat2 {
                    a,
                    b: RingElem::ZERO,
                    c: RingElem::ZERO,
                    d,
                };
                out.push(OrbitDescriptor::new(
                    beta,
                    OrbitType::SplitDiag,
                    OrbitParams::Diagonal { a, d },
                ));
            }
        }
    }
    for s in ring.elements() {
        for delta in ring.elements() {
            let irreducible = residue_roots(p, ring.residue(s), ring.residue(delta)).is_empty();
            let in_ideal = ring.residue(s) == 0 && ring.residue(delta) == 0;
            let kind = if irreducible {
                OrbitType::Cuspidal
            } else if in_ideal {
                OrbitType::ScalarPlusNilpotent
            } else {
                continue;
            };
            out.push(OrbitDescriptor::new(
                companion(ring, delta, s),
                kind,
                OrbitParams::Companion { s, delta },
            ));
        }
    }
    out
}

/// What remains of `β` after conjugating and subtracting a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalForm {
    /// `gβg^{-1} - aI` is the listed representative.
    Reduced(OrbitDescriptor),
    /// `β - aI ∈ ϖ M_2(O_{l'})`: the orbit is handled by twisting and inflation.
    Inflated { residual: Mat2 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Canonical {
    /// `g ∈ G_{l'}`.
    pub conjugator: Mat2,
    /// The scalar `a` subtracted after conjugation, if any.
    pub twist: Option<RingElem>,
    pub form: CanonicalForm,
}

/// Bring `β ∈ M_2(O_{l'})` to its listed normal form.
pub fn canonicalize(ring: &Ring, beta: &Mat2) -> Canonical {
    let kind = classify_mod_p(ring, beta);
    match kind {
        OrbitType::Scalar => {
            let a = RingElem(ring.residue(beta.a));
            Canonical {
                conjugator: Mat2::IDENTITY,
                twist: Some(a),
                form: CanonicalForm::Inflated {
                    residual: ring.mat_sub(beta, &ring.scalar(a)),
                },
            }
        }
        OrbitType::SplitDiag => {
            let (g, a, d) = diagonalize(ring, beta);
            Canonical {
                conjugator: g,
                twist: None,
                form: CanonicalForm::Reduced(OrbitDescriptor::new(
                    Mat2 {
                        a,
                        b: RingElem::ZERO,
                        c: RingElem::ZERO,
                        d,
                    },
                    kind,
                    OrbitParams::Diagonal { a, d },
                )),
            }
        }
        OrbitType::Cuspidal => {
            let g = cyclic_conjugator(ring, beta);
            let (s, delta) = (ring.trace(beta), ring.det(beta));
            Canonical {
                conjugator: g,
                twist: None,
                form: CanonicalForm::Reduced(OrbitDescriptor::new(
                    companion(ring, delta, s),
                    kind,
                    OrbitParams::Companion { s, delta },
                )),
            }
        }
        OrbitType::ScalarPlusNilpotent => {
            let p = ring.p();
            let root = residue_roots(p, ring.residue(ring.trace(beta)), ring.residue(ring.det(beta)))[0];
            let a = RingElem(root);
            let shifted = ring.mat_sub(beta, &ring.scalar(a));
            let g = cyclic_conjugator(ring, &shifted);
            let (s, delta) = (ring.trace(&shifted), ring.det(&shifted));
            Canonical {
                conjugator: g,
                twist: Some(a),
                form: CanonicalForm::Reduced(OrbitDescriptor::new(
                    companion(ring, delta, s),
                    kind,
                    OrbitParams::Companion { s, delta },
                )),
            }
        }
    }
}

/// `g` with rows `w, wβ` for a cyclic row vector `w`, so that `gβg^{-1}` is the companion
/// matrix of `β`'s characteristic polynomial. Requires `β` non-scalar mod `ϖ`.
fn cyclic_conjugator(ring: &Ring, beta: &Mat2) -> Mat2 {
    let one = RingElem::ONE;
    let zero = RingElem::ZERO;
    for (w0, w1) in [(one, zero), (zero, one), (one, one)] {
        let v0 = ring.add(ring.mul(w0, beta.a), ring.mul(w1, beta.c));
        let v1 = ring.add(ring.mul(w0, beta.b), ring.mul(w1, beta.d));
        let g = Mat2 {
            a: w0,
            b: w1,
            c: v0,
            d: v1,
        };
        if ring.is_unit(ring.det(&g)) {
            return g;
        }
    }
    unreachable!("a matrix that is non-scalar mod ϖ has a cyclic vector among e1, e2, e1+e2")
}

/// Eigenvalues `a < d` (in code order) and `g` with `gβg^{-1} = diag(a, d)`.
fn diagonalize(ring: &Ring, beta: &Mat2) -> (Mat2, RingElem, RingElem) {
    let s = ring.trace(beta);
    let delta = ring.det(beta);
    let roots: Vec<RingElem> = ring
        .elements()
        .filter(|&x| {
            let val = ring.add(ring.sub(ring.mul(x, x), ring.mul(s, x)), delta);
            val == RingElem::ZERO
        })
        .collect();
    let a = roots[0];
    let d = *roots
        .iter()
        .find(|&&x| ring.residue(x) != ring.residue(a))
        .expect("split type has two roots distinct mod ϖ");
    let eigenrow = |lambda: RingElem| {
        ring.elements()
            .flat_map(|w0| ring.elements().map(move |w1| (w0, w1)))
            .find(|&(w0, w1)| {
                (ring.is_unit(w0) || ring.is_unit(w1))
                    && ring.add(ring.mul(w0, beta.a), ring.mul(w1, beta.c)) == ring.mul(lambda, w0)
                    && ring.add(ring.mul(w0, beta.b), ring.mul(w1, beta.d)) == ring.mul(lambda, w1)
            })
            .expect("Hensel: each simple root has an eigenvector")
    };
    let (a0, a1) = eigenrow(a);
    let (d0, d1) = eigenrow(d);
    let g = Mat2 {
        a: a0,
        b: a1,
        c: d0,
        d: d1,
    };
    (g, a, d)
}

/// `O_r[β̂]^× = {x + yβ̂ invertible}` as a subgroup of `G_r`.
pub fn unit_algebra(level: &Level, beta_hat: &Mat2) -> Subgroup {
    let group = level.group();
    let ring = group.ring();
    let mut elems = Vec::new();
    for x in ring.elements() {
        for y in ring.elements() {
            let m = ring.mat_add(&ring.scalar(x), &ring.mat_scale(y, beta_hat));
            if let Some(g) = group.index_of(&m) {
                elems.push(g);
            }
        }
    }
    Subgroup::from_elements(group.order(), elems)
}

/// `T(ψ_β) = O_r[β̂]^× K_{l'}`.
pub fn stabilizer(level: &Level, orbit: &OrbitDescriptor) -> Result<Subgroup, Error> {
    let consts = level.constants();
    let units = unit_algebra(level, &orbit.beta_hat);
    let k = level.group().congruence_subgroup(consts.l_prime)?;
    level.group().product_set(&units, &k)
}

/// `{g ∈ G_r : ψ_β(g^{-1} x g) = ψ_β(x) for all x ∈ K_l}`, by exhaustion.
pub fn exact_stabilizer(level: &Level, orbit: &OrbitDescriptor) -> Result<Subgroup, Error> {
    let group = level.group();
    let consts = level.constants();
    let psi = level.psi_beta(&orbit.beta_hat, consts.l)?;
    let k_gens = psi.domain().generators(group);
    Ok(group.whole().filter(|g| {
        let g_inv = group.inv(g);
        k_gens
            .iter()
            .all(|&x| psi.value(group.conj(g_inv, x)) == psi.value(x))
    }))
}

/// Number of `G_{l'}`-orbits on `M_2(O_{l'})`, from the type census:
/// scalar-type orbits are `p` copies of the orbits one level down, split orbits
/// are unordered eigenvalue pairs, cuspidal orbits are irreducible characteristic
/// polynomials, and scalar-plus-nilpotent orbits are `p` twists of each `(3')`.
pub fn expected_orbit_count(ring: &Ring) -> usize {
    let p = ring.p() as usize;
    let lp = ring.level();
    let lower = if lp == 1 {
        1
    } else {
        expected_orbit_count(&Ring::new(ring.spec().at_level(lp - 1)).expect("lower ring"))
    };
    let reps = orbit_reps(ring);
    let count = |k: OrbitType| reps.iter().filter(|o| o.kind == k).count();
    p * lower
        + count(OrbitType::SplitDiag)
        + count(OrbitType::Cuspidal)
        + p * count(OrbitType::ScalarPlusNilpotent)
}
