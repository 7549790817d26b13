//! Stability of trivectors via destabilizing 6-dimensional subspaces.
//!
//! A subspace `U` destabilizes `t` when `t ∈ ⋀³U + ⋀²U ⊗ V/U`. Writing
//! `W = U^⊥` (three covectors), this is `t(ξ, η, ·) = 0` for all `ξ, η ∈ W`.

use crate::error::{Error, Result};
use crate::fast;
use crate::field::{Field, Gf};
use crate::matrix::{DenseMatrix, Echelon};
use crate::poly::singular_point_search;
use crate::trivector::{build_gamma_c, CurveCoeffs, Trivector, DIM};
use rayon::prelude::*;
use serde::Serialize;

/// Extension degree up to which curve singularities are searched. The
/// arithmetic genus is 2, so a singular curve has at most two singular
/// points and each is defined over a field of degree at most 2.
pub const SMOOTHNESS_BOUND: u32 = 2;

pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Stable,
    NonStable,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub field: Gf,
    /// Row-reduced 6×9 basis of `U`.
    pub u: DenseMatrix<Gf>,
    /// Row-reduced 3×9 basis of `U^⊥`.
    pub w: DenseMatrix<Gf>,
}

#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witness: Option<Witness>,
    pub searched_ext_degree: u32,
    /// Number of subspaces covered by the search, when it fits in `u128`.
    pub subspaces_covered: Option<u128>,
    /// Whether a `Stable` status is a certificate over the algebraic closure.
    pub certified: bool,
}

/// `[n choose k]_q`
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Option<u128> {
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(q.checked_pow(n - i)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow(i + 1)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Echelon pivot patterns of 3×9 matrices in colexicographic order.
pub fn pivot_patterns() -> Vec<[usize; 3]> {
    let mut v = Vec::with_capacity(84);
    for p3 in 0..DIM {
        for p2 in 0..p3 {
            for p1 in 0..p2 {
                v.push([p1, p2, p3]);
            }
        }
    }
    v
}

fn first_row_free(p: &[usize; 3]) -> Vec<usize> {
    (p[0] + 1..DIM).filter(|c| *c != p[1] && *c != p[2]).collect()
}

/// Searches `GF(q)` (the field of `t`) for three covectors spanning a
/// witness. Returns them in echelon form.
pub fn search_witness_covectors(t: &Trivector<Gf>, budget: u64) -> Result<Option<[Vec<u64>; 3]>> {
    let f = t.field.clone();
    let q = f.q();
    let sparse: Vec<(usize, usize, usize, u64)> = t.sparse();
    let patterns = pivot_patterns();
    let mut offsets = Vec::with_capacity(patterns.len() + 1);
    let mut total: u128 = 0;
    offsets.push(0u128);
    for p in &patterns {
        total += (q as u128).pow(first_row_free(p).len() as u32);
        offsets.push(total);
    }
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{total} first rows over {} exceed the budget of {budget}",
            f.spec()
        )));
    }
    let found = (0..total as u64).into_par_iter().find_map_first(|idx| {
        let pi = offsets.partition_point(|&o| o <= idx as u128) - 1;
        let local = idx as u128 - offsets[pi];
        check_chunk(&f, &sparse, &patterns[pi], local as u64)
    });
    Ok(found)
}

fn check_chunk(f: &Gf, sparse: &[(usize, usize, usize, u64)], p: &[usize; 3], mut local: u64) -> Option<[Vec<u64>; 3]> {
    let q = f.q();
    let mut w1 = vec![0u64; DIM];
    w1[p[0]] = 1;
    for c in first_row_free(p) {
        w1[c] = local % q;
        local /= q;
    }
    let mut m1 = [0u64; 81];
    fast::phi_into(f, sparse, &w1, &mut m1);
    if fast::rank9(f, &m1, 6) > 6 {
        return None;
    }
    let k1 = fast::kernel(f, m1.to_vec(), DIM, DIM);
    let s = k1.len();
    // w2 = K1·β with echelon shape: zero before p2 and at p3, one at p2
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for c in (0..p[1]).chain([p[2], p[1]]) {
        rows.extend(k1.iter().map(|v| v[c]));
        rhs.push(u64::from(c == p[1]));
    }
    let (part, ker) = fast::solve_affine(f, &rows, &rhs, rhs.len(), s)?;
    let mut coeffs = vec![0u64; ker.len()];
    loop {
        let mut beta = part.clone();
        for (c, v) in coeffs.iter().zip(&ker) {
            for i in 0..s {
                beta[i] = f.mul_add(&beta[i], c, &v[i]);
            }
        }
        let w2 = fast::combine(f, &beta, &k1, DIM);
        let mut m2 = [0u64; 81];
        fast::phi_into(f, sparse, &w2, &mut m2);
        // w3 = K1·γ with Φ(w2)w3 = 0, zero before p3, one at p3
        let mut rows3 = Vec::new();
        let mut rhs3 = Vec::new();
        for a in 0..DIM {
            rows3.extend((0..s).map(|j| {
                (0..DIM).fold(0, |acc, b| f.mul_add(&acc, &m2[a * 9 + b], &k1[j][b]))
            }));
            rhs3.push(0);
        }
        for c in 0..=p[2] {
            rows3.extend(k1.iter().map(|v| v[c]));
            rhs3.push(u64::from(c == p[2]));
        }
        if let Some((g, _)) = fast::solve_affine(f, &rows3, &rhs3, rhs3.len(), s) {
            let w3 = fast::combine(f, &g, &k1, DIM);
            return Some([w1, w2, w3]);
        }
        if !fast::next_vector(&mut coeffs, q) {
            return None;
        }
    }
}

/// Checks a claimed destabilizing subspace by an explicit change of basis:
/// in a basis beginning with `U`, every coefficient of `t` with two or more
/// indices outside `U` must vanish.
pub fn verify_witness<F: Field>(t: &Trivector<F>, u: &DenseMatrix<F>) -> bool {
    let f = &t.field;
    if u.rows() != 6 || u.cols() != DIM || u.rank() != 6 {
        return false;
    }
    let mut basis = u.to_rows();
    let mut span = Echelon::new(f.clone(), DIM);
    for r in &basis {
        span.insert(r.clone());
    }
    for i in 0..DIM {
        let mut e = vec![f.zero(); DIM];
        e[i] = f.one();
        if span.insert(e.clone()) {
            basis.push(e);
        }
    }
    let g = DenseMatrix::from_fn(f.clone(), DIM, DIM, |r, c| basis[c][r].clone());
    let Ok(gi) = g.inverse() else { return false };
    let adapted = t.linear_image(&gi);
    adapted
        .terms()
        .iter()
        .all(|(m, _)| m.iter().filter(|&&i| i > 6).count() < 2)
}

fn witness_from_covectors(field: &Gf, w: &[Vec<u64>; 3]) -> Witness {
    let wm = DenseMatrix::from_rows(field.clone(), w);
    let (_, k) = wm.rank_and_kernel();
    Witness {
        field: field.clone(),
        u: DenseMatrix::from_rows(field.clone(), &k),
        w: wm.rref().0,
    }
}

/// Searches `GF(q^d)` for `d = 1, …, max_ext_degree`.
pub fn destabilizer_search(t: &Trivector<Gf>, max_ext_degree: u32, budget: u64) -> Result<StabilityVerdict> {
    let base = t.field.clone();
    let mut covered: Option<u128> = Some(0);
    for d in 1..=max_ext_degree {
        let (field, tl) = if d == 1 {
            (base.clone(), t.clone())
        } else {
            let (big, emb) = base.extension(d)?;
            let tl = Trivector::from_dense(big.clone(), t.dense().iter().map(|c| emb.apply(*c)).collect());
            (big, tl)
        };
        if let Some(w) = search_witness_covectors(&tl, budget)? {
            let witness = witness_from_covectors(&field, &w);
            if !verify_witness(&tl, &witness.u) {
                return Err(Error::Invalid("search produced an invalid witness".into()));
            }
            return Ok(StabilityVerdict {
                status: StabilityStatus::NonStable,
                witness: Some(witness),
                searched_ext_degree: d,
                subspaces_covered: None,
                certified: true,
            });
        }
        covered = covered.and_then(|c| Some(c + gaussian_binomial(9, 3, field.q())?));
    }
    Ok(StabilityVerdict {
        status: StabilityStatus::Stable,
        witness: None,
        searched_ext_degree: max_ext_degree,
        subspaces_covered: covered,
        certified: false,
    })
}

/// Whether the affine curve `F = 0` has no singular point over extensions
/// of degree ≤ `max_ext_degree`.
pub fn curve_is_smooth<F: Field>(c: &CurveCoeffs<F>, max_ext_degree: u32) -> Result<bool> {
    Ok(curve_singular_points(c, max_ext_degree)?.is_empty())
}

/// Singular points of the affine curve, each in its minimal field.
pub fn curve_singular_points<F: Field>(
    c: &CurveCoeffs<F>,
    max_ext_degree: u32,
) -> Result<Vec<crate::poly::PointSolution>> {
    let p = c.curve_poly();
    singular_point_search(&[p.clone(), p.derivative(0), p.derivative(1)], max_ext_degree)
}

#[derive(Clone, Debug)]
pub struct GammaStabilityReport {
    pub smooth: bool,
    pub verdict: StabilityVerdict,
    pub consistent: bool,
}

/// Runs the smoothness test and the destabilizer search on `γ_c` and
/// compares them.
pub fn stability_verdict_gamma_c(c: &CurveCoeffs<Gf>, budget: u64) -> Result<GammaStabilityReport> {
    let sing = curve_singular_points(c, SMOOTHNESS_BOUND)?;
    let smooth = sing.is_empty();
    let gamma = build_gamma_c(c);
    let degree = sing.iter().map(|s| s.degree).min().unwrap_or(1);
    let mut verdict = destabilizer_search(&gamma, degree, budget)?;
    let consistent = match verdict.status {
        StabilityStatus::Stable => smooth,
        StabilityStatus::NonStable => !smooth,
        StabilityStatus::Inconclusive => false,
    };
    if smooth && consistent {
        verdict.certified = true;
    }
    Ok(GammaStabilityReport { smooth, verdict, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Gf {
        Gf::prime(2).unwrap()
    }

    /// Visits every 3-dimensional subspace of `F_2^9` through all echelon
    /// matrices and reports (count, whether any is a witness).
    fn brute_force(t: &Trivector<Gf>) -> (u64, bool) {
        let f = &t.field;
        let mut count = 0;
        let mut any = false;
        for p in pivot_patterns() {
            let free: Vec<Vec<usize>> = (0..3)
                .map(|r| (p[r] + 1..9).filter(|c| !p.contains(c)).collect())
                .collect();
            let n: usize = free.iter().map(|v| v.len()).sum();
            for bits in 0u64..(1 << n) {
                let mut rows = vec![vec![0u64; 9]; 3];
                let mut b = 0;
                for r in 0..3 {
                    rows[r][p[r]] = 1;
                    for &c in &free[r] {
                        rows[r][c] = (bits >> b) & 1;
                        b += 1;
                    }
                }
                count += 1;
                if any {
                    continue;
                }
                let ok = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .all(|&(a, b)| t.contract2(&rows[a], &rows[b]).iter().all(|x| *x == 0));
                any |= ok;
            }
        }
        let _ = f;
        (count, any)
    }

    #[test]
    fn gaussian_binomial_f2() {
        assert_eq!(gaussian_binomial(9, 3, 2), Some(788_035));
        assert_eq!(gaussian_binomial(9, 6, 2), Some(788_035));
        assert_eq!(pivot_patterns().len(), 84);
    }

    #[test]
    fn principal_nilpotent_is_unstable() {
        let f = f2();
        let g0 = build_gamma_c(&CurveCoeffs::zero(f.clone()));
        let v = destabilizer_search(&g0, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, StabilityStatus::NonStable);
        let u = DenseMatrix::from_fn(f.clone(), 6, 9, |r, c| u64::from(c == r + 3));
        assert!(verify_witness(&g0, &u));
    }

    #[test]
    fn zero_trivector_is_unstable() {
        let t = Trivector::zero(f2());
        assert_eq!(destabilizer_search(&t, 1, DEFAULT_BUDGET).unwrap().status, StabilityStatus::NonStable);
    }

    #[test]
    fn smooth_example_is_stable() {
        let f = f2();
        let c = CurveCoeffs::zero(f.clone()).with(15, 1);
        let v = destabilizer_search(&build_gamma_c(&c), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, StabilityStatus::Stable);
        assert_eq!(v.subspaces_covered, Some(788_035));
        assert!(curve_is_smooth(&c, 8).unwrap());
    }

    #[test]
    fn smoothness_examples() {
        let f = Gf::prime(7).unwrap();
        assert!(!curve_is_smooth(&CurveCoeffs::zero(f.clone()), 2).unwrap());
        assert!(curve_is_smooth(&CurveCoeffs::zero(f.clone()).with(30, 1), 2).unwrap());
    }

    #[test]
    fn search_agrees_with_brute_force() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 0..8 {
            let c = if n == 0 {
                CurveCoeffs::zero(f.clone())
            } else {
                CurveCoeffs::random(f.clone(), &mut rng)
            };
            let g = build_gamma_c(&c);
            let (count, any) = brute_force(&g);
            assert_eq!(count, 788_035);
            let found = search_witness_covectors(&g, DEFAULT_BUDGET).unwrap().is_some();
            assert_eq!(found, any, "c = {:?}", c.c);
        }
    }

    #[test]
    fn witness_equivariance_and_monotonicity() {
        let f = f2();
        let g0 = build_gamma_c(&CurveCoeffs::zero(f.clone()));
        let u = destabilizer_search(&g0, 1, DEFAULT_BUDGET).unwrap().witness.unwrap().u;
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let g = loop {
                let g = DenseMatrix::from_fn(f.clone(), 9, 9, |_, _| f.random_elem(&mut rng));
                if g.det() != 0 {
                    break g;
                }
            };
            let gu = u.mul(&g.transpose());
            assert!(verify_witness(&g0.gl_act(&g).unwrap(), &gu));
        }
        let (big, emb) = f.extension(2).unwrap();
        let lift = |t: &Trivector<Gf>| Trivector::from_dense(big.clone(), t.dense().iter().map(|c| emb.apply(*c)).collect());
        let ub = DenseMatrix::from_fn(big.clone(), 6, 9, |r, c| emb.apply(u[(r, c)]));
        assert!(verify_witness(&lift(&g0), &ub));
    }

    #[test]
    fn rank_two_point_forces_instability() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let mut t = Trivector::zero(f.clone());
            t.add_term([1, 2, 3], &1).unwrap();
            for (n, m) in crate::trivector::triples().iter().enumerate() {
                if m[0] != 0 {
                    t.dense_mut()[n] = f.random_elem(&mut rng);
                }
            }
            let mut x = vec![0u64; 9];
            x[0] = 1;
            assert_eq!(t.phi_at(&x).rank(), 2);
            let v = destabilizer_search(&t, 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(v.status, StabilityStatus::NonStable);
        }
    }

    #[test]
    fn gamma_reports_consistent() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let c = CurveCoeffs::random(f.clone(), &mut rng);
            let r = stability_verdict_gamma_c(&c, DEFAULT_BUDGET).unwrap();
            assert!(r.consistent, "c = {:?}", c.c);
        }
    }
}
