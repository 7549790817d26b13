use super::UniPoly;
use crate::field::Field;

/// Resultant of two polynomials in a main variable whose coefficients are
/// univariate polynomials in a parameter (low degree first on both levels).
///
/// Computed as the Sylvester determinant by fraction-free elimination.
/// Returns the zero polynomial when either input has degree 0 in the main
/// variable.
pub fn resultant<F: Field>(a: &[UniPoly<F>], b: &[UniPoly<F>]) -> UniPoly<F> {
    let trim = |v: &[UniPoly<F>]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let a = trim(a);
    let b = trim(b);
    let field = a
        .first()
        .or(b.first())
        .map(|c| c.field.clone())
        .expect("nonempty input");
    if a.len() < 2 || b.len() < 2 {
        return UniPoly::zero(field);
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let zero = UniPoly::zero(field.clone());
    let mut mat = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (i, c) in a.iter().enumerate() {
            mat[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().enumerate() {
            mat[n + r][r + i] = c.clone();
        }
    }
    bareiss_det(mat, field)
}

fn bareiss_det<F: Field>(mut m: Vec<Vec<UniPoly<F>>>, field: F) -> UniPoly<F> {
    let n = m.len();
    let mut prev = UniPoly::constant(field.clone(), field.one());
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return UniPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.scale(&field.neg(&field.one()))
    } else {
        d
    }
}
