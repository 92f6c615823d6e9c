use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charfun::{induce_within, inner_on_elements, Level, LinearChar};
use crate::driver::IrrepRecord;
use crate::matgroup::{FiniteGroup, Subgroup};
use crate::orbits::{stabilizer, unit_algebra, OrbitDescriptor, OrbitType};
use crate::ring::Phase;
use crate::{Error, TOLERANCE};

use super::{abelian_extensions, check_outputs, glue, BilinearFormTable, MatrixRep};

/// Seed for the random starting matrix of the intertwiner average.
pub const INTERTWINER_SEED: u64 = 0x1e7e_12a1;
const MAX_ATTEMPTS: u64 = 8;
const EXHAUSTIVE_PAIRS: usize = 1 << 22;

/// The Heisenberg data of a cuspidal orbit at odd level.
#[derive(Debug, Clone)]
pub struct Heisenberg {
    /// `Z¹ = O_r[β̂]^× ∩ K_1`.
    pub z1: Subgroup,
    /// `Z¹ K_l`, the domain of `ψ̃_β`.
    pub n: Subgroup,
    /// `Z¹ K_{l'}`, the domain of `η_β`.
    pub u: Subgroup,
    pub psi_tilde: LinearChar,
    /// Representatives of `V = U/N`; entry 0 is the identity.
    pub coset_reps: Vec<usize>,
    /// `h(v, w) = ψ̃_β([v, w])` on `V`.
    pub form: BilinearFormTable<Phase>,
    /// Indices into `coset_reps` of a maximal isotropic subgroup of `V`.
    pub lagrangian: Vec<usize>,
    /// Preimage of the Lagrangian in `U`.
    pub w_tilde: Subgroup,
    pub eta: MatrixRep,
}

fn check_cuspidal_input(level: &Level, orbit: &OrbitDescriptor) -> Result<(), Error> {
    let consts = level.constants();
    if consts.is_even() {
        return Err(Error::WrongParity(format!("odd construction needs odd r, got r = {}", level.r())));
    }
    if consts.l_prime == 0 {
        return Err(Error::OutOfRange("r = 1 has no orbit constructions".into()));
    }
    if orbit.kind != OrbitType::Cuspidal {
        return Err(Error::WrongConstruction("use odd_split".into()));
    }
    Ok(())
}

/// `η_β` for the first `T(ψ_β)`-stable extension `ψ̃_β` of `ψ_β` to `Z¹K_l`:
/// the unique irreducible representation of `Z¹ K_{l'}` lying over `ψ̃_β`, built
/// as a monomial representation induced from the preimage of a Lagrangian in
/// `V = Z¹K_{l'} / Z¹K_l`.
pub fn heisenberg(level: &Level, orbit: &OrbitDescriptor) -> Result<Heisenberg, Error> {
    let (z1, n, u, mut tildes) = psi_tilde_candidates(level, orbit)?;
    heisenberg_over(level, z1, n, u, tildes.swap_remove(0))
}

/// [`heisenberg`] for every `T(ψ_β)`-stable extension `ψ̃_β`, in a fixed order.
pub fn heisenberg_family(level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<Heisenberg>, Error> {
    let (z1, n, u, tildes) = psi_tilde_candidates(level, orbit)?;
    tildes
        .into_iter()
        .map(|t| heisenberg_over(level, z1.clone(), n.clone(), u.clone(), t))
        .collect()
}

type Candidates = (Subgroup, Subgroup, Subgroup, Vec<LinearChar>);

fn psi_tilde_candidates(level: &Level, orbit: &OrbitDescriptor) -> Result<Candidates, Error> {
    check_cuspidal_input(level, orbit)?;
    let consts = level.constants();
    let group = level.group();
    let a = unit_algebra(level, &orbit.beta_hat);
    let z1 = a.intersection(&group.congruence_subgroup(1)?);
    let psi = level.psi_beta(&orbit.beta_hat, consts.l)?;
    let k_lp = group.congruence_subgroup(consts.l_prime)?;
    let n = group.product_set(&z1, psi.domain())?;
    let u = group.product_set(&z1, &k_lp)?;

    let k_side: Vec<usize> = if z1.order() * k_lp.order() <= EXHAUSTIVE_PAIRS {
        k_lp.elements().to_vec()
    } else {
        k_lp.generators(group)
    };
    for &z in z1.elements() {
        let z_inv = group.inv(z);
        for &k in &k_side {
            if psi.get(group.commutator(z_inv, k)) != Some(Phase::ZERO) {
                return Err(Error::TheoryViolation("ψ_β([z^{-1}, k]) ≠ 1".into()));
            }
        }
    }

    let t_gens = stabilizer(level, orbit)?.generators(group);
    let thetas = abelian_extensions(group, &z1, &z1.intersection(psi.domain()), |x| psi.value(x))?;
    let mut tildes = Vec::new();
    for theta in &thetas {
        let cand = glue(group, &n, theta, &psi)?;
        if !cand.is_multiplicative(group) {
            return Err(Error::TheoryViolation("ψ̃_β is not multiplicative".into()));
        }
        if cand.is_stable_under(group, &t_gens) {
            tildes.push(cand);
        }
    }
    if tildes.is_empty() {
        return Err(Error::TheoryViolation("no T(ψ_β)-stable extension of ψ_β to Z¹K_l".into()));
    }
    Ok((z1, n, u, tildes))
}

fn heisenberg_over(
    level: &Level,
    z1: Subgroup,
    n: Subgroup,
    u: Subgroup,
    psi_tilde: LinearChar,
) -> Result<Heisenberg, Error> {
    let group = level.group();
    let p = group.ring().p() as u64;
    let coset_reps = group.coset_reps(&u, &n)?;
    let mut coset_of = vec![usize::MAX; group.order()];
    for (i, &t) in coset_reps.iter().enumerate() {
        for &x in n.elements() {
            coset_of[group.mul(t, x)] = i;
        }
    }
    for &v in &coset_reps {
        if !n.contains(group.pow(v, p)) || coset_reps.iter().any(|&w| !n.contains(group.commutator(v, w))) {
            return Err(Error::TheoryViolation("Z¹K_{l'} / Z¹K_l is not elementary abelian".into()));
        }
    }
    let form = BilinearFormTable::tabulate(coset_reps.len(), |i, j| {
        psi_tilde.value(group.commutator(coset_reps[i], coset_reps[j]))
    });
    if !form.is_alternating() || !form.is_nondegenerate() {
        return Err(Error::TheoryViolation("commutator form on V is degenerate".into()));
    }

    let size = coset_reps.len();
    let mut lagrangian = vec![0usize];
    for v in 1..size {
        if lagrangian.len() * lagrangian.len() >= size {
            break;
        }
        if lagrangian.contains(&v) || lagrangian.iter().any(|&w| !form.get(v, w).is_zero()) {
            continue;
        }
        let mut span = Vec::new();
        for &w in &lagrangian {
            let mut x = coset_reps[w];
            for _ in 0..p {
                span.push(coset_of[x]);
                x = group.mul(x, coset_reps[v]);
            }
        }
        span.sort_unstable();
        span.dedup();
        lagrangian = span;
    }
    if lagrangian.len() * lagrangian.len() != size || !form.is_isotropic(&lagrangian) {
        return Err(Error::TheoryViolation("greedy Lagrangian search failed".into()));
    }
    let w_tilde = Subgroup::from_elements(
        group.order(),
        lagrangian
            .iter()
            .flat_map(|&w| n.elements().iter().map(move |&x| (w, x)))
            .map(|(w, x)| group.mul(coset_reps[w], x))
            .collect(),
    );
    let lambda = psi_tilde
        .extensions_to(group, &w_tilde)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::TheoryViolation("ψ̃_β does not extend to the Lagrangian preimage".into()))?;
    let eta = MatrixRep::induced_from_linear(group, &u, &lambda)?;

    let chi_eta = eta.character();
    if eta.dim() * eta.dim() != size {
        return Err(Error::TheoryViolation(format!("dim η = {}, |V| = {size}", eta.dim())));
    }
    if (inner_on_elements(&chi_eta, &chi_eta) - 1.0).norm() > TOLERANCE {
        return Err(Error::TheoryViolation("η_β is reducible".into()));
    }
    let induced = induce_within(group, &u, &n, &psi_tilde.complex_values())?;
    let q = eta.dim() as f64;
    if induced.iter().zip(&chi_eta).any(|(x, y)| (x - y * q).norm() > TOLERANCE) {
        return Err(Error::TheoryViolation("Ind ψ̃_β is not a multiple of η_β".into()));
    }
    if !eta.is_homomorphism(group) {
        return Err(Error::TheoryViolation("η_β is not a homomorphism".into()));
    }
    Ok(Heisenberg {
        z1,
        n,
        u,
        psi_tilde,
        coset_reps,
        form,
        lagrangian,
        w_tilde,
        eta,
    })
}

/// All extensions of `eta` from a normal subgroup `U` to `t_group` when
/// `T/U` is cyclic, using the principal `m`-th root for the intertwiner.
pub fn cyclic_extend<G: FiniteGroup + ?Sized>(
    group: &G,
    eta: &MatrixRep,
    t_group: &Subgroup,
    seed: u64,
) -> Result<Vec<MatrixRep>, Error> {
    cyclic_extend_on_branch(group, eta, t_group, seed, 0)
}

/// As [`cyclic_extend`], with the intertwiner's `m`-th root taken on branch `branch`.
pub fn cyclic_extend_on_branch<G: FiniteGroup + ?Sized>(
    group: &G,
    eta: &MatrixRep,
    t_group: &Subgroup,
    seed: u64,
    branch: u64,
) -> Result<Vec<MatrixRep>, Error> {
    let u = eta.domain();
    if !u.is_subset_of(t_group) {
        return Err(Error::NotSubgroup("U is not inside T".into()));
    }
    let t_gens = t_group.generators(group);
    if !group.normalizes(&t_gens, u) {
        return Err(Error::NotSubgroup("U is not normal in T".into()));
    }
    let m = (t_group.order() / u.order()) as u64;
    let order_mod_u = |g: usize| {
        let mut k = 1;
        let mut x = g;
        while !u.contains(x) {
            x = group.mul(x, g);
            k += 1;
        }
        k
    };
    let t = t_group
        .elements()
        .iter()
        .copied()
        .find(|&g| order_mod_u(g) == m)
        .ok_or_else(|| Error::TheoryViolation("T/U is not cyclic".into()))?;

    let chi_eta = eta.character();
    let t_inv = group.inv(t);
    if u
        .elements()
        .iter()
        .zip(&chi_eta)
        .any(|(&x, c)| (chi_eta[u.position(group.conj(t_inv, x)).unwrap()] - c).norm() > TOLERANCE)
    {
        return Err(Error::TheoryViolation("η is not T-stable".into()));
    }

    let d = eta.dim();
    let mut intertwiner = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let x = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut a = DMatrix::<Complex64>::zeros(d, d);
        for &y in u.elements() {
            a += eta.matrix(group.conj(t, y)) * &x * eta.matrix(y).adjoint();
        }
        if a.norm() > TOLERANCE * u.order() as f64 {
            intertwiner = Some(a);
            break;
        }
        log::debug!("intertwiner attempt {attempt} averaged to zero, retrying");
    }
    let mut a = intertwiner
        .ok_or_else(|| Error::TheoryViolation("Schur averaging kept producing a zero intertwiner".into()))?;

    let t_m = group.pow(t, m);
    let a_m = pow_matrix(&a, m);
    let scalar_part = &a_m * eta.matrix(t_m).adjoint();
    let c = scalar_part[(0, 0)];
    if (&scalar_part - DMatrix::identity(d, d) * c).norm() > TOLERANCE * c.norm() {
        return Err(Error::TheoryViolation("A^m is not a scalar multiple of η(t^m)".into()));
    }
    let root = c.powf(1.0 / m as f64) * Phase::new(branch % m, m).to_complex();
    a /= root;

    let mut mats: Vec<Option<DMatrix<Complex64>>> = vec![None; t_group.order()];
    let mut exponent = vec![0u64; t_group.order()];
    let mut a_j = DMatrix::<Complex64>::identity(d, d);
    let mut t_j = group.identity();
    for j in 0..m {
        for &y in u.elements() {
            let pos = t_group.position(group.mul(t_j, y)).expect("t^j u lies in T");
            if mats[pos].is_some() {
                return Err(Error::TheoryViolation("t does not generate T/U".into()));
            }
            mats[pos] = Some(&a_j * eta.matrix(y));
            exponent[pos] = j;
        }
        a_j = &a_j * &a;
        t_j = group.mul(t_j, t);
    }
    let mats: Vec<DMatrix<Complex64>> = mats.into_iter().map(|m| m.expect("T covered")).collect();
    let base = MatrixRep::new(t_group.clone(), d, mats);
    if !base.is_homomorphism(group) || !base.is_unitary() {
        return Err(Error::TheoryViolation("extension of η is not a unitary homomorphism".into()));
    }

    let extensions: Vec<MatrixRep> = (0..m)
        .map(|k| {
            let mats = base
                .matrices()
                .iter()
                .zip(&exponent)
                .map(|(mat, &j)| mat * Phase::new((j * k) % m, m).to_complex())
                .collect();
            MatrixRep::new(t_group.clone(), d, mats)
        })
        .collect();
    let chars: Vec<Vec<Complex64>> = extensions.iter().map(|e| e.character()).collect();
    for (i, ci) in chars.iter().enumerate() {
        for cj in &chars[..i] {
            if inner_on_elements(ci, cj).norm() > TOLERANCE {
                return Err(Error::TheoryViolation("extensions of η are not distinct".into()));
            }
        }
    }
    Ok(extensions)
}

fn pow_matrix(a: &DMatrix<Complex64>, k: u64) -> DMatrix<Complex64> {
    let mut acc = DMatrix::<Complex64>::identity(a.nrows(), a.ncols());
    for _ in 0..k {
        acc = &acc * a;
    }
    acc
}

/// Cuspidal characters for odd `r`: `Ind_{T(ψ_β)}^{G_r} η̃` over every extension
/// `η̃` of the Heisenberg representation.
pub fn odd_cuspidal(level: &Level, orbit: &OrbitDescriptor) -> Result<Vec<IrrepRecord>, Error> {
    let group = level.group();
    let t = stabilizer(level, orbit)?;
    let q = group.ring().p() as usize;
    let label = orbit.label(group.ring());
    let mut out = Vec::new();
    for (i, heis) in heisenberg_family(level, orbit)?.iter().enumerate() {
        let exts = cyclic_extend(group, &heis.eta, &t, INTERTWINER_SEED)?;
        if exts.len() != q * q - 1 {
            return Err(Error::TheoryViolation(format!(
                "|T/U| = {}, expected q² - 1 = {}",
                exts.len(),
                q * q - 1
            )));
        }
        for (k, ext) in exts.iter().enumerate() {
            let chi = level.induce(&t, &ext.character())?;
            out.push(IrrepRecord::new(
                format!("r={} odd-cuspidal {label} ψ̃{i} η̃{k}", level.r()),
                level.r(),
                orbit.kind,
                chi,
            )?);
        }
    }
    check_outputs(level, orbit, &out)?;
    log::debug!("odd-cuspidal {label}: {} characters of degree {}", out.len(), out[0].dim);
    Ok(out)
}
