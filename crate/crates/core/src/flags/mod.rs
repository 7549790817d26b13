//! Flags `F1 ⊂ F3 ⊂ F6 ⊂ F8` compatible with a trivector.
//!
//! A flag is compatible when, in a basis adapted to it, the coefficients of
//! the 31 monomials of [`forbidden_monomials`] vanish.

mod chern;
mod search;

pub use chern::{chern_top_class, reduce_mod_symmetric, ChernClass};
pub use search::{flag_search, flags_at_point, FlagSearchReport, FoundFlag, DEFAULT_FLAG_BUDGET};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::matrix::{DenseMatrix, Echelon};
use crate::trivector::{build_gamma_c, flag_permutation, permutation_matrix, CurveCoeffs, Trivector, CURVE_KEYS, DIM};
use std::sync::OnceLock;

pub const FLAG_DIMS: [usize; 4] = [1, 3, 6, 8];

/// The 31 monomials (1-based) whose coefficients vanish for the standard flag.
pub fn forbidden_monomials() -> &'static [[usize; 3]] {
    static M: OnceLock<Vec<[usize; 3]>> = OnceLock::new();
    M.get_or_init(|| {
        let mut out = Vec::new();
        for i in 4..=8 {
            for j in i + 1..=8 {
                out.push([i, j, 9]);
            }
        }
        for i in [2, 3] {
            for j in 4..=8 {
                out.push([i, j, 9]);
            }
        }
        for i in 2..=6 {
            out.push([i, 7, 8]);
        }
        for k in [7, 8] {
            for i in 4..=6 {
                for j in i + 1..=6 {
                    out.push([i, j, k]);
                }
            }
        }
        out
    })
}

/// Row-reduced bases of the four subspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag1368<F: Field> {
    pub field: F,
    pub spaces: [DenseMatrix<F>; 4],
}

impl<F: Field> Flag1368<F> {
    /// Row-reduces the four spanning sets and checks dimensions and nesting.
    pub fn new(field: F, rows: [Vec<Vec<F::Elem>>; 4]) -> Result<Self> {
        let mut spaces = Vec::with_capacity(4);
        for (n, r) in rows.iter().enumerate() {
            if r.iter().any(|v| v.len() != DIM) {
                return Err(Error::Dimension("flag vectors must have 9 coordinates".into()));
            }
            let (m, piv) = DenseMatrix::from_rows(field.clone(), r).rref();
            if piv.len() != FLAG_DIMS[n] {
                return Err(Error::Invalid(format!("F{} has dimension {}", FLAG_DIMS[n], piv.len())));
            }
            spaces.push(DenseMatrix::from_rows(field.clone(), &m.to_rows()[..piv.len()]));
        }
        for n in 1..4 {
            let mut stacked = spaces[n].to_rows();
            stacked.extend(spaces[n - 1].to_rows());
            if DenseMatrix::from_rows(field.clone(), &stacked).rank() != FLAG_DIMS[n] {
                return Err(Error::Invalid(format!("F{} is not contained in F{}", FLAG_DIMS[n - 1], FLAG_DIMS[n])));
            }
        }
        let spaces: [DenseMatrix<F>; 4] = spaces.try_into().unwrap();
        Ok(Self { field, spaces })
    }

    /// `F_i = ⟨e_1, …, e_i⟩`.
    pub fn standard(field: F) -> Self {
        let unit = |i: usize| -> Vec<F::Elem> { (0..DIM).map(|j| if i == j { field.one() } else { field.zero() }).collect() };
        let rows = FLAG_DIMS.map(|d| (0..d).map(unit).collect::<Vec<_>>());
        Self::new(field.clone(), rows).unwrap()
    }

    pub fn space(&self, n: usize) -> &DenseMatrix<F> {
        &self.spaces[n]
    }

    /// An invertible matrix whose first `d` columns span `F_d` for each `d`.
    pub fn adapted_basis(&self) -> DenseMatrix<F> {
        let f = &self.field;
        let mut ech = Echelon::new(f.clone(), DIM);
        let mut cols: Vec<Vec<F::Elem>> = Vec::with_capacity(DIM);
        let units = (0..DIM).map(|i| (0..DIM).map(|j| if i == j { f.one() } else { f.zero() }).collect::<Vec<_>>());
        let candidates = self.spaces.iter().flat_map(|s| s.to_rows()).chain(units);
        for v in candidates {
            if ech.insert(v.clone()) {
                cols.push(v);
            }
        }
        DenseMatrix::from_fn(f.clone(), DIM, DIM, |r, c| cols[c][r].clone())
    }

    /// The flag `g·F`.
    pub fn transform(&self, g: &DenseMatrix<F>) -> Result<Self> {
        let rows = self.spaces.clone().map(|s| s.mul(&g.transpose()).to_rows());
        Self::new(self.field.clone(), rows)
    }

    /// `F8` as the kernel of a covector, normalized with first nonzero entry 1.
    pub fn point(&self) -> Vec<F::Elem> {
        let f = &self.field;
        let mut x = self.spaces[3].kernel().pop().unwrap();
        let lead = x.iter().find(|v| !f.is_zero(v)).cloned().unwrap();
        let inv = f.inv(&lead).unwrap();
        for v in x.iter_mut() {
            *v = f.mul(v, &inv);
        }
        x
    }
}

impl Flag1368<Gf> {
    /// Smallest `e` such that the flag is defined over the subfield of
    /// degree `e` over `GF(p^base_degree)`.
    pub fn definition_degree(&self, base_degree: u32) -> u32 {
        let total = self.field.degree() / base_degree;
        (1..=total)
            .filter(|e| total % e == 0)
            .find(|&e| {
                self.spaces
                    .iter()
                    .all(|s| s.to_rows().iter().flatten().all(|&a| self.field.in_subfield(a, e * base_degree)))
            })
            .unwrap_or(total)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport<F: Field> {
    pub compatible: bool,
    /// Violated conditions with their coefficients in the adapted basis.
    pub violated: Vec<([usize; 3], F::Elem)>,
}

/// Checks the 31 vanishing conditions in a basis adapted to `flag`.
pub fn flag_compatible<F: Field>(t: &Trivector<F>, flag: &Flag1368<F>) -> Result<CompatibilityReport<F>> {
    compatible_in_basis(t, &flag.adapted_basis())
}

/// The check with an explicit adapted basis `g` (columns).
pub fn compatible_in_basis<F: Field>(t: &Trivector<F>, g: &DenseMatrix<F>) -> Result<CompatibilityReport<F>> {
    let local = t.gl_act(&g.inverse()?)?;
    let violated: Vec<_> = forbidden_monomials()
        .iter()
        .map(|&m| (m, local.get(m)))
        .filter(|(_, v)| !t.field.is_zero(v))
        .collect();
    Ok(CompatibilityReport { compatible: violated.is_empty(), violated })
}

/// `γ_c` with its basis permuted by the flag permutation.
pub fn permuted_gamma<F: Field>(c: &CurveCoeffs<F>) -> Trivector<F> {
    let pm = permutation_matrix(&c.field, &flag_permutation());
    build_gamma_c(c).gl_act(&pm).expect("permutation matrices are invertible")
}

/// Compatibility of the whole permuted family with the standard flag.
///
/// The forbidden coefficients are affine in `c`, so it suffices that they
/// vanish at `c = 0` and for each coordinate direction.
pub fn permuted_family_compatible<F: Field>(field: &F) -> Result<bool> {
    let standard = Flag1368::standard(field.clone());
    let base = CurveCoeffs::zero(field.clone());
    let mut ok = flag_compatible(&permuted_gamma(&base), &standard)?.compatible;
    for key in CURVE_KEYS {
        let unit = base.clone().with(key, field.one());
        let dir = permuted_gamma(&unit).sub(&permuted_gamma(&base));
        ok &= flag_compatible(&dir, &standard)?.compatible;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(f: &Gf, rng: &mut ChaCha8Rng) -> DenseMatrix<Gf> {
        loop {
            let g = DenseMatrix::from_fn(f.clone(), 9, 9, |_, _| f.random_elem(rng));
            if g.rank() == 9 {
                return g;
            }
        }
    }

    /// Upper block-triangular matrix preserving the standard flag.
    fn random_parabolic(f: &Gf, rng: &mut ChaCha8Rng) -> DenseMatrix<Gf> {
        let block = |i: usize| FLAG_DIMS.iter().position(|&d| i < d).unwrap_or(4);
        loop {
            let p = DenseMatrix::from_fn(f.clone(), 9, 9, |r, c| if block(r) <= block(c) { f.random_elem(rng) } else { f.zero() });
            if p.rank() == 9 {
                return p;
            }
        }
    }

    #[test]
    fn thirty_one_conditions() {
        let m = forbidden_monomials();
        assert_eq!(m.len(), 31);
        let mut s = m.to_vec();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 31);
        assert!(m.iter().all(|t| t[0] < t[1] && t[1] < t[2]));
    }

    #[test]
    fn forbidden_span_is_parabolic_stable() {
        // the complement of the forbidden set spans a submodule
        let f = Gf::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let forb = forbidden_monomials();
        for _ in 0..5 {
            let p = random_parabolic(&f, &mut rng);
            for m in crate::trivector::triples() {
                let m1 = [m[0] + 1, m[1] + 1, m[2] + 1];
                if forb.contains(&m1) {
                    continue;
                }
                let t = Trivector::from_terms(f.clone(), &[(m1, 1)]).unwrap();
                let img = t.gl_act(&p).unwrap();
                assert!(forb.iter().all(|&x| img.get(x) == 0));
            }
        }
    }

    #[test]
    fn permuted_gamma_compatible() {
        let f = Gf::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let std = Flag1368::standard(f.clone());
        for _ in 0..50 {
            let c = CurveCoeffs::random(f.clone(), &mut rng);
            assert!(flag_compatible(&permuted_gamma(&c), &std).unwrap().compatible);
        }
        assert!(permuted_family_compatible(&f).unwrap());
        assert!(permuted_family_compatible(&crate::field::Rationals).unwrap());
    }

    #[test]
    fn gamma_zero_incompatible() {
        let f = Gf::prime(5).unwrap();
        let r = flag_compatible(&build_gamma_c(&CurveCoeffs::zero(f.clone())), &Flag1368::standard(f)).unwrap();
        assert!(!r.compatible);
        assert!(r.violated.iter().any(|(m, _)| *m == [2, 4, 9]));
    }

    #[test]
    fn equivariance_and_reducer_independence() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let c = CurveCoeffs::random(f.clone(), &mut rng);
            let t = permuted_gamma(&c);
            let std = Flag1368::standard(f.clone());
            let g = random_invertible(&f, &mut rng);
            let moved = std.transform(&g).unwrap();
            assert!(flag_compatible(&t.gl_act(&g).unwrap(), &moved).unwrap().compatible);
            // an incompatible pair stays incompatible
            let other = build_gamma_c(&c);
            let a = flag_compatible(&other, &std).unwrap().compatible;
            let b = flag_compatible(&other.gl_act(&g).unwrap(), &moved).unwrap().compatible;
            assert_eq!(a, b);
            // a second reducer differing by a parabolic element
            let g1 = moved.adapted_basis();
            let g2 = g1.mul(&random_parabolic(&f, &mut rng));
            for s in [&t, &other] {
                let s = s.gl_act(&g).unwrap();
                let r1 = compatible_in_basis(&s, &g1).unwrap();
                let r2 = compatible_in_basis(&s, &g2).unwrap();
                assert_eq!(r1.compatible, r2.compatible);
            }
        }
    }

    #[test]
    fn flag_validation() {
        let f = Gf::prime(3).unwrap();
        let std = Flag1368::standard(f.clone());
        let mut rows = std.spaces.clone().map(|s| s.to_rows());
        rows[0] = vec![vec![0, 0, 0, 0, 0, 0, 0, 0, 1]];
        assert!(Flag1368::new(f.clone(), rows).is_err());
        assert_eq!(std.point(), vec![0, 0, 0, 0, 0, 0, 0, 0, 1]);
    }
}
