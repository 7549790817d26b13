//! The finite Heisenberg group acting on the 3×3 grid basis.
//!
//! Basis vector `e_{3r+c+1}` sits at row `r`, column `c`. The group is
//! generated by cyclic row and column shifts and by the two phase
//! characters `ζ^r` and `ζ^c`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::DenseMatrix;
use crate::trivector::{Trivector, DIM, NTRIPLES};

fn grid(r: usize, c: usize) -> usize {
    3 * (r % 3) + c % 3
}

/// The four generators as 9×9 matrices.
pub fn generators<F: Field>(field: &F, zeta: &F::Elem) -> Vec<DenseMatrix<F>> {
    let mut row_shift = DenseMatrix::zeros(field.clone(), DIM, DIM);
    let mut col_shift = DenseMatrix::zeros(field.clone(), DIM, DIM);
    let mut row_phase = DenseMatrix::zeros(field.clone(), DIM, DIM);
    let mut col_phase = DenseMatrix::zeros(field.clone(), DIM, DIM);
    for r in 0..3 {
        for c in 0..3 {
            let i = grid(r, c);
            row_shift[(grid(r + 1, c), i)] = field.one();
            col_shift[(grid(r, c + 1), i)] = field.one();
            row_phase[(i, i)] = field.pow(zeta, r as u64);
            col_phase[(i, i)] = field.pow(zeta, c as u64);
        }
    }
    vec![row_shift, col_shift, row_phase, col_phase]
}

/// The induced 84×84 matrix on trivectors.
pub fn wedge3_matrix<F: Field>(g: &DenseMatrix<F>) -> DenseMatrix<F> {
    let f = &g.field;
    let mut m = DenseMatrix::zeros(f.clone(), NTRIPLES, NTRIPLES);
    for n in 0..NTRIPLES {
        let mut e = Trivector::zero(f.clone());
        e.dense_mut()[n] = f.one();
        for (r, v) in e.linear_image(g).dense().iter().enumerate() {
            m[(r, n)] = v.clone();
        }
    }
    m
}

/// A primitive cube root of unity in a finite field.
pub fn cube_root<F: Field>(field: &F) -> Result<F::Elem> {
    let gf = field.as_gf().ok_or(Error::NoCubeRoot)?;
    let z = gf.cube_root_of_unity().ok_or(Error::NoCubeRoot)?;
    field.parse_elem(&gf.format_elem(&z))
}

/// A basis of the trivectors fixed by every generator.
pub fn heisenberg_invariants<F: Field>(field: &F) -> Result<Vec<Trivector<F>>> {
    let zeta = cube_root(field)?;
    let gens = generators(field, &zeta);
    let id = DenseMatrix::identity(field.clone(), NTRIPLES);
    let mut rows = Vec::new();
    for g in &gens {
        rows.extend(wedge3_matrix(g).sub(&id).to_rows());
    }
    let stacked = DenseMatrix::from_rows(field.clone(), &rows);
    Ok(stacked
        .kernel()
        .into_iter()
        .map(|v| Trivector::from_dense(field.clone(), v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rationals};
    use crate::matrix::Echelon;
    use crate::trivector::standard_cartan_element;

    #[test]
    fn invariants_over_f7() {
        let f = Gf::prime(7).unwrap();
        let inv = heisenberg_invariants(&f).unwrap();
        assert_eq!(inv.len(), 4);
        let mut span = Echelon::new(f.clone(), NTRIPLES);
        for t in &inv {
            span.insert(t.dense().to_vec());
        }
        for n in 0..4 {
            let mut a = [&0u64; 4];
            a[n] = &1;
            let c = standard_cartan_element(&f, a);
            assert!(span.contains(c.dense()));
            // direct oracle: each generator fixes it
            let zeta = cube_root(&f).unwrap();
            for g in generators(&f, &zeta) {
                assert_eq!(c.linear_image(&g), c);
            }
        }
    }

    #[test]
    fn no_cube_root() {
        assert!(matches!(heisenberg_invariants(&Gf::prime(5).unwrap()), Err(Error::NoCubeRoot)));
        assert!(matches!(heisenberg_invariants(&Gf::prime(2).unwrap()), Err(Error::NoCubeRoot)));
        assert!(matches!(heisenberg_invariants(&Rationals), Err(Error::NoCubeRoot)));
    }

    #[test]
    fn two_generators_are_not_enough() {
        let f = Gf::prime(7).unwrap();
        let zeta = cube_root(&f).unwrap();
        let gens = generators(&f, &zeta);
        let id = DenseMatrix::identity(f.clone(), NTRIPLES);
        let mut rows = Vec::new();
        for g in [&gens[0], &gens[2]] {
            rows.extend(wedge3_matrix(g).sub(&id).to_rows());
        }
        let k = DenseMatrix::from_rows(f, &rows).kernel();
        assert!(k.len() > 4);
    }
}
