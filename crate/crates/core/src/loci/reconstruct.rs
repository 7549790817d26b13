//! Recovering a trivector from the linear span of its contractions.

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::matrix::DenseMatrix;
use crate::trivector::{triples, Trivector, DIM};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ATTEMPTS: usize = 2000;

/// The nine matrices `Φ(e_1*), …, Φ(e_9*)`.
pub fn pencil_of(t: &Trivector<Gf>) -> Vec<DenseMatrix<Gf>> {
    (0..DIM)
        .map(|i| {
            let mut e = vec![0u64; DIM];
            e[i] = 1;
            t.phi_at(&e)
        })
        .collect()
}

fn combination(f: &Gf, basis: &[DenseMatrix<Gf>], a: &[u64]) -> DenseMatrix<Gf> {
    let mut m = DenseMatrix::zeros(f.clone(), DIM, DIM);
    for (b, c) in basis.iter().zip(a) {
        m = m.add(&b.scale(c));
    }
    m
}

/// Finds ten rank-8 elements whose coefficient vectors are in general
/// position, reads the scales off the linear relation among their kernel
/// lines, and assembles the trivector. The result is defined up to a
/// nonzero scalar.
pub fn reconstruct_from_pencil(w: &[DenseMatrix<Gf>], seed: u64) -> Result<Trivector<Gf>> {
    if w.len() != DIM {
        return Err(Error::Dimension(format!("expected 9 matrices, got {}", w.len())));
    }
    let f = w[0].field.clone();
    if w.iter().any(|m| m.rows() != DIM || m.cols() != DIM || !m.is_skew()) {
        return Err(Error::NotSkew);
    }
    let flat = DenseMatrix::from_fn(f.clone(), DIM, DIM * DIM, |r, c| w[r][(c / DIM, c % DIM)]);
    if flat.rank() != DIM {
        return Err(Error::Reconstruction("matrices are linearly dependent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<Vec<u64>> = Vec::new();
    let mut kernels: Vec<Vec<u64>> = Vec::new();
    let mut attempts = 0;
    while coeffs.len() < 10 {
        attempts += 1;
        if attempts > ATTEMPTS {
            return Err(Error::Reconstruction("no ten rank-8 elements in general position".into()));
        }
        let a: Vec<u64> = (0..DIM).map(|_| f.random_elem(&mut rng)).collect();
        let m = combination(&f, w, &a);
        let (rank, ker) = m.rank_and_kernel();
        if rank != 8 {
            continue;
        }
        let mut cand = coeffs.clone();
        cand.push(a.clone());
        if !general_position(&f, &cand) {
            continue;
        }
        coeffs = cand;
        kernels.push(ker[0].clone());
    }
    // a_10 = Σ μ_i a_i, then Σ μ_i λ_i x_i − λ_10 x_10 = 0
    let a9 = DenseMatrix::from_fn(f.clone(), DIM, DIM, |r, c| coeffs[c][r]);
    let mu = a9.solve(&coeffs[9]).ok_or_else(|| Error::Reconstruction("singular coefficient matrix".into()))?;
    let sys = DenseMatrix::from_fn(f.clone(), DIM, 10, |r, c| {
        if c < 9 {
            f.mul(&mu[c], &kernels[c][r])
        } else {
            f.neg(&kernels[9][r])
        }
    });
    let (_, null) = sys.rank_and_kernel();
    if null.len() != 1 || null[0].iter().any(|v| *v == 0) {
        return Err(Error::Reconstruction("scale system is degenerate".into()));
    }
    let lambda = &null[0];
    // ψ(M_j) for the chosen elements, then for the input basis: ψ is linear
    // with ψ(Σ a_i w_i) = λ x, so ψ(w_k) = Σ_j (A⁻¹)_{jk} λ_j x_j.
    let ainv = a9.inverse()?;
    let xi: Vec<Vec<u64>> = (0..DIM)
        .map(|k| {
            let mut v = vec![0u64; DIM];
            for j in 0..DIM {
                let s = f.mul(&ainv[(j, k)], &lambda[j]);
                for r in 0..DIM {
                    v[r] = f.mul_add(&v[r], &s, &kernels[j][r]);
                }
            }
            v
        })
        .collect();
    // Φ(e_i*) = Σ_k (Ξ⁻¹)_{ik} w_k where row k of Ξ is ψ(w_k)
    let xim = DenseMatrix::from_rows(f.clone(), &xi);
    let xinv = xim.inverse().map_err(|_| Error::Reconstruction("covectors are dependent".into()))?;
    let mut t = Trivector::zero(f.clone());
    let phis: Vec<DenseMatrix<Gf>> = (0..DIM)
        .map(|i| {
            let row: Vec<u64> = (0..DIM).map(|k| xinv[(i, k)]).collect();
            combination(&f, w, &row)
        })
        .collect();
    for (n, &[i, j, k]) in triples().iter().enumerate() {
        t.dense_mut()[n] = phis[i][(j, k)];
    }
    Ok(t)
}

fn general_position(f: &Gf, vecs: &[Vec<u64>]) -> bool {
    let n = vecs.len();
    if n <= DIM {
        return DenseMatrix::from_rows(f.clone(), vecs).rank() == n;
    }
    (0..n).all(|skip| {
        let rows: Vec<Vec<u64>> = vecs.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
        DenseMatrix::from_rows(f.clone(), &rows).rank() == DIM
    })
}

/// Whether `a = s·b` for some nonzero scalar `s`.
pub fn proportional(a: &Trivector<Gf>, b: &Trivector<Gf>) -> bool {
    let f = &a.field;
    let Some(n) = b.dense().iter().position(|c| *c != 0) else {
        return a.is_zero();
    };
    let Some(s) = f.div(&a.dense()[n], &b.dense()[n]).ok().filter(|s| *s != 0) else {
        return false;
    };
    *a == b.scale(&s)
}
