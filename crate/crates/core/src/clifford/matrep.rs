use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::charfun::LinearChar;
use crate::matgroup::{FiniteGroup, Subgroup};
use crate::{Error, TOLERANCE};

const EXHAUSTIVE_PAIRS: usize = 1 << 22;

/// An explicit matrix representation of a subgroup; `mats[i]` is the image of
/// `domain.elements()[i]`.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    domain: Subgroup,
    dim: usize,
    mats: Vec<DMatrix<Complex64>>,
}

impl MatrixRep {
    pub fn new(domain: Subgroup, dim: usize, mats: Vec<DMatrix<Complex64>>) -> MatrixRep {
        assert_eq!(domain.order(), mats.len());
        MatrixRep { domain, dim, mats }
    }

    /// The monomial representation `Ind_H^U λ`: with a transversal `t_1..t_d`,
    /// `u t_j = t_i h` puts `λ(h)` at position `(i, j)`.
    pub fn induced_from_linear<G: FiniteGroup + ?Sized>(
        group: &G,
        u: &Subgroup,
        lambda: &LinearChar,
    ) -> Result<MatrixRep, Error> {
        let h = lambda.domain();
        let transversal = group.coset_reps(u, h)?;
        let d = transversal.len();
        // element of U -> (coset index i, h) with x = t_i h
        let mut coset = vec![(usize::MAX, 0usize); group.order()];
        for (i, &t) in transversal.iter().enumerate() {
            for &y in h.elements() {
                coset[group.mul(t, y)] = (i, y);
            }
        }
        let lambda_vals = lambda.complex_values();
        let mats = u
            .elements()
            .iter()
            .map(|&x| {
                let mut m = DMatrix::<Complex64>::zeros(d, d);
                for (j, &tj) in transversal.iter().enumerate() {
                    let (i, y) = coset[group.mul(x, tj)];
                    m[(i, j)] = lambda_vals[h.position(y).expect("coset decomposition")];
                }
                m
            })
            .collect();
        Ok(MatrixRep::new(u.clone(), d, mats))
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &DMatrix<Complex64> {
        &self.mats[self.domain.position(g).expect("element outside the representation's domain")]
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.mats
    }

    /// Traces, in the domain's element order.
    pub fn character(&self) -> Vec<Complex64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    /// `ρ(xy) = ρ(x)ρ(y)`, over all pairs for small domains and over `x` times
    /// a generating set otherwise.
    pub fn is_homomorphism<G: FiniteGroup + ?Sized>(&self, group: &G) -> bool {
        let elems = self.domain.elements();
        let right: Vec<usize> = if elems.len() * elems.len() <= EXHAUSTIVE_PAIRS {
            elems.to_vec()
        } else {
            self.domain.generators(group)
        };
        let id = DMatrix::<Complex64>::identity(self.dim, self.dim);
        if (self.matrix(group.identity()) - &id).norm() > TOLERANCE {
            return false;
        }
        elems.iter().all(|&x| {
            right.iter().all(|&y| {
                let lhs = self.matrix(group.mul(x, y));
                (lhs - self.matrix(x) * self.matrix(y)).norm() < TOLERANCE
            })
        })
    }

    pub fn is_unitary(&self) -> bool {
        let id = DMatrix::<Complex64>::identity(self.dim, self.dim);
        self.mats.iter().all(|m| (m.adjoint() * m - &id).norm() < TOLERANCE)
    }
}
