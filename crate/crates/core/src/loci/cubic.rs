//! The cubic hypersurface through the rank-≤6 locus, by interpolation.

use super::fold_points;
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::matrix::{DenseMatrix, Echelon};
use crate::poly::MultiPoly;
use crate::trivector::Trivector;
use std::sync::OnceLock;

/// Degree-3 exponent vectors in 9 variables, lexicographically descending
/// (`x1³` first).
pub fn cubic_monomials() -> &'static [[u32; 9]] {
    static M: OnceLock<Vec<[u32; 9]>> = OnceLock::new();
    M.get_or_init(|| {
        let mut v = Vec::with_capacity(165);
        for i in 0..9 {
            for j in i..9 {
                for k in j..9 {
                    let mut e = [0u32; 9];
                    e[i] += 1;
                    e[j] += 1;
                    e[k] += 1;
                    v.push(e);
                }
            }
        }
        v.sort_by(|a, b| b.cmp(a));
        v
    })
}

fn monomial_vars(e: &[u32; 9]) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for (i, &k) in e.iter().enumerate() {
        for _ in 0..k {
            out[n] = i;
            n += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicForm {
    pub field: Gf,
    /// Coefficients in [`cubic_monomials`] order.
    pub coeffs: Vec<u64>,
}

impl CubicForm {
    pub fn eval(&self, x: &[u64]) -> u64 {
        let f = &self.field;
        let mut acc = 0;
        for (e, c) in cubic_monomials().iter().zip(&self.coeffs) {
            if *c == 0 {
                continue;
            }
            let [a, b, d] = monomial_vars(e);
            if x[a] == 0 || x[b] == 0 || x[d] == 0 {
                continue;
            }
            acc = f.add(&acc, &f.mul(c, &f.mul(&x[a], &f.mul(&x[b], &x[d]))));
        }
        acc
    }

    pub fn to_poly(&self) -> MultiPoly<Gf> {
        MultiPoly::from_terms(
            self.field.clone(),
            9,
            cubic_monomials().iter().zip(&self.coeffs).map(|(e, c)| (e.to_vec(), *c)),
        )
    }

    pub fn partials(&self) -> Vec<MultiPoly<Gf>> {
        let p = self.to_poly();
        (0..9).map(|i| p.derivative(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }
}

fn monomial_values(f: &Gf, x: &[u64]) -> Vec<u64> {
    cubic_monomials()
        .iter()
        .map(|e| {
            let [a, b, d] = monomial_vars(e);
            f.mul(&x[a], &f.mul(&x[b], &x[d]))
        })
        .collect()
}

/// The interpolated cubic together with how it was obtained.
#[derive(Clone, Debug)]
pub struct CubicSample {
    pub cubic: CubicForm,
    /// Degree of the sampling field over the field of `t`.
    pub ext_degree: u32,
    pub sample_points: u64,
    pub kernel_dim: usize,
}

/// Interpolates the cubic through the rank-≤6 points of `P⁸`, sampling
/// over `GF(q^d)` for increasing `d ≤ max_ext_degree` until the evaluation
/// matrix has a one-dimensional kernel.
pub fn cubic_of_y(t: &Trivector<Gf>, max_ext_degree: u32, budget: u64) -> Result<CubicSample> {
    let base = t.field.clone();
    let mut last_dim = 0;
    for d in 1..=max_ext_degree {
        let (field, tl) = if d == 1 {
            (base.clone(), t.clone())
        } else {
            let (big, emb) = base.extension(d)?;
            let tl = Trivector::from_dense(big.clone(), t.dense().iter().map(|c| emb.apply(*c)).collect());
            (big, tl)
        };
        let n = cubic_monomials().len();
        let (span, count) = fold_points(
            &tl,
            budget,
            || (Echelon::new(field.clone(), n), 0u64),
            |acc, x, r| {
                if r <= 6 {
                    acc.1 += 1;
                    if acc.0.dim() < n {
                        acc.0.insert(monomial_values(&field, x));
                    }
                }
            },
            |mut a, b| {
                for row in b.0.basis() {
                    a.0.insert(row);
                }
                a.1 += b.1;
                a
            },
        )?;
        let kernel_dim = n - span.dim();
        last_dim = kernel_dim;
        if kernel_dim == 1 {
            let k = DenseMatrix::from_rows(field.clone(), &span.basis()).kernel();
            return Ok(CubicSample {
                cubic: CubicForm { field, coeffs: k[0].clone() },
                ext_degree: d,
                sample_points: count,
                kernel_dim,
            });
        }
        if kernel_dim == 0 {
            break;
        }
    }
    Err(Error::Invalid(format!("interpolation kernel has dimension {last_dim}, expected 1")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trivector::{build_gamma_c, CurveCoeffs};

    #[test]
    fn monomial_list() {
        let m = cubic_monomials();
        assert_eq!(m.len(), 165);
        assert_eq!(m[0], [3, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(m[164], [0, 0, 0, 0, 0, 0, 0, 0, 3]);
    }

    #[test]
    fn cubic_over_f4() {
        let f = Gf::new(2, 2).unwrap();
        let g = build_gamma_c(&CurveCoeffs::zero(f.clone()).with(15, 1));
        let s = cubic_of_y(&g, 1, super::super::DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(s.kernel_dim, 1);
        let lead = s.cubic.coeffs.iter().find(|c| **c != 0).unwrap();
        assert_eq!(*lead, 1);
    }
}
