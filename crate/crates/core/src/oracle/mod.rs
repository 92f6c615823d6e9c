//! Brute-force character tables of arbitrary enumerated groups.
//!
//! Nothing here depends on the orbit constructions: the table is recovered
//! from class-sum structure constants alone, so it can serve as an
//! independent witness for the classification.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matgroup::{ConjClasses, FiniteGroup};
use crate::{Error, TOLERANCE};

pub const DEFAULT_SEED: u64 = 0x5eed_0f_c1a55;
pub const MAX_CLASSES: usize = 200;
const MAX_ATTEMPTS: usize = 8;

/// Structure constants `a_{ijk}` of the class algebra: `C_i C_j = Σ_k a_{ijk} C_k`.
#[derive(Debug, Clone)]
pub struct ClassAlgebra {
    n: usize,
    consts: Vec<u32>,
}

impl ClassAlgebra {
    /// `a_{ijk} = #{x ∈ C_i : x^{-1} z_k ∈ C_j}` for a fixed `z_k ∈ C_k`.
    pub fn compute<G: FiniteGroup + ?Sized>(group: &G, classes: &ConjClasses) -> ClassAlgebra {
        let n = classes.len();
        let mut consts = vec![0u32; n * n * n];
        for (k, &z) in classes.reps().iter().enumerate() {
            for x in 0..group.order() {
                let i = classes.class_of(x);
                let j = classes.class_of(group.mul(group.inv(x), z));
                consts[(i * n + j) * n + k] += 1;
            }
        }
        ClassAlgebra { n, consts }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.consts[(i * self.n + j) * self.n + k]
    }
}

/// Irreducible characters of `group`, one row per character, values per class of `classes`.
///
/// A random self-adjoint element `z = Σ c_i C_i` of the centre (with
/// `c_{i*} = conj(c_i)` for the inverse class `i*`) acts on the centre as a
/// Hermitian matrix in the orthonormal basis `C_k / √|C_k|`. Its eigenvectors
/// are the central idempotents, whose coordinates are `conj(χ(C_k)) √|C_k|` up
/// to scale. The scale is fixed by `Σ_k |C_k| |χ(C_k)|² = |G|` and `χ(1) > 0`.
/// Rows come back sorted by degree, then by value.
pub fn oracle_table<G: FiniteGroup + ?Sized>(
    group: &G,
    classes: &ConjClasses,
    seed: u64,
) -> Result<Vec<Vec<Complex64>>, Error> {
    let n = classes.len();
    if n > MAX_CLASSES {
        return Err(Error::OutOfRange(format!(
            "oracle supports at most {MAX_CLASSES} classes, group has {n}"
        )));
    }
    let algebra = ClassAlgebra::compute(group, classes);
    let sizes: Vec<f64> = classes.sizes().iter().map(|&s| s as f64).collect();
    let order = group.order() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for attempt in 0..MAX_ATTEMPTS {
        let coeffs = random_hermitian_coefficients(classes, &mut rng);
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for (i, &c) in coeffs.iter().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    let a = algebra.get(i, j, k);
                    if a != 0 {
                        h[(k, j)] += c * (a as f64 * (sizes[k] / sizes[j]).sqrt());
                    }
                }
            }
        }
        let asym = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (h[(j, k)] - h[(k, j)].conj()).norm())
            .fold(0.0, f64::max);
        if asym > 1e-8 * (1.0 + h.norm()) {
            return Err(Error::TheoryViolation(format!(
                "central element is not self-adjoint (residual {asym:e})"
            )));
        }
        let eig = SymmetricEigen::new(h);
        let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evals.sort_by(f64::total_cmp);
        let spread = evals.last().unwrap() - evals.first().unwrap();
        let min_gap = evals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if n > 1 && min_gap < 1e-7 * spread.max(1.0) {
            log::debug!("oracle attempt {attempt}: eigenvalue gap {min_gap:e}, retrying");
            continue;
        }
        let mut rows: Vec<Vec<Complex64>> = (0..n)
            .map(|col| {
                let v = eig.eigenvectors.column(col);
                let lead = v[0];
                let c = lead / lead.norm() * order.sqrt();
                (0..n).map(|k| c * v[k].conj() / sizes[k].sqrt()).collect()
            })
            .collect();
        rows.sort_by(|a, b| compare_rows(a, b));
        check_table(&rows, classes)?;
        return Ok(rows);
    }
    Err(Error::TheoryViolation(format!(
        "eigenvalues of random class-sum combinations kept colliding after {MAX_ATTEMPTS} attempts"
    )))
}

fn random_hermitian_coefficients(classes: &ConjClasses, rng: &mut impl Rng) -> Vec<Complex64> {
    let n = classes.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let star = classes.inverse_class(i);
        if star < i {
            coeffs[i] = coeffs[star].conj();
        } else if star == i {
            coeffs[i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        } else {
            coeffs[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    coeffs
}

/// Order rows by degree, then lexicographically by rounded values.
pub fn compare_rows(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    let key = |v: &Complex64| ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64);
    a.iter().map(key).cmp(b.iter().map(key))
}

fn check_table(rows: &[Vec<Complex64>], classes: &ConjClasses) -> Result<(), Error> {
    let order = classes.group_order() as f64;
    let mut dim_sq = 0u64;
    for row in rows {
        let d = row[0];
        if d.im.abs() > TOLERANCE || (d.re - d.re.round()).abs() > TOLERANCE || d.re < 0.5 {
            return Err(Error::TheoryViolation(format!("non-integral degree {d}")));
        }
        dim_sq += (d.re.round() as u64).pow(2);
    }
    if dim_sq != classes.group_order() as u64 {
        return Err(Error::TheoryViolation(format!(
            "Σ dim² = {dim_sq} ≠ |G| = {order}"
        )));
    }
    let (row_res, col_res) = orthogonality_residuals(rows, classes);
    if row_res > TOLERANCE || col_res > TOLERANCE {
        return Err(Error::TheoryViolation(format!(
            "orthogonality residuals {row_res:e} (rows), {col_res:e} (columns)"
        )));
    }
    Ok(())
}

/// Largest deviation from row orthonormality and from column orthogonality
/// `Σ_χ χ(C_i) conj(χ(C_j)) = δ_ij |G| / |C_i|` (scaled by `|C_i| / |G|`).
pub fn orthogonality_residuals(rows: &[Vec<Complex64>], classes: &ConjClasses) -> (f64, f64) {
    let order = classes.group_order() as f64;
    let sizes = classes.sizes();
    let n = classes.len();
    let mut row_res: f64 = 0.0;
    for (a, ra) in rows.iter().enumerate() {
        for (b, rb) in rows.iter().enumerate() {
            let ip: Complex64 = (0..n).map(|k| ra[k] * rb[k].conj() * sizes[k] as f64).sum::<Complex64>() / order;
            let target = if a == b { 1.0 } else { 0.0 };
            row_res = row_res.max((ip - target).norm());
        }
    }
    let mut col_res: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = rows.iter().filter(|r| r.len() == n).map(|r| r[i] * r[j].conj()).sum();
            let target = if i == j { order / sizes[i] as f64 } else { 0.0 };
            col_res = col_res.max((s - target).norm() * sizes[i] as f64 / order);
        }
    }
    (row_res, col_res)
}

/// Orbits of a finite group acting on `0..n_points` through the given generator actions.
pub fn orbit_partition(n_points: usize, actions: &[&dyn Fn(usize) -> usize]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n_points];
    let mut orbits = Vec::new();
    for start in 0..n_points {
        if label[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for act in actions {
                let y = act(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}
