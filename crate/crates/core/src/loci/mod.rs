//! Rank strata of the skew pencil over finite fields.

mod cubic;
mod curve;
mod reconstruct;

pub use cubic::{cubic_monomials, cubic_of_y, CubicForm, CubicSample};
pub use curve::{
    curve_affine_points, curve_point_counts, embedding_point, jacobian_order_from_counts,
    kernel_rows, verify_curve_embedding, EmbeddingCertificate,
};
pub use reconstruct::{pencil_of, proportional, reconstruct_from_pencil};

use crate::error::{Error, Result};
use crate::fast;
use crate::field::{Field, Gf};
use crate::trivector::Trivector;
use rayon::prelude::*;
use std::time::Instant;

/// Default cap on `#P⁸(F_q)` for a full enumeration (`q ≤ 11`).
pub const DEFAULT_POINT_BUDGET: u64 = 2_400_000_000;

/// Largest point list returned by [`enumerate_rank_locus`].
pub const POINT_LIST_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RankLocusReport {
    pub q: u64,
    /// Number of points of rank 0, 2, 4, 6, 8.
    pub counts: [u64; 5],
    pub elapsed_ms: u128,
    /// Points of rank ≤ the requested bound, when requested.
    pub points: Option<Vec<Vec<u64>>>,
}

impl RankLocusReport {
    pub fn count_at_most(&self, r: usize) -> u64 {
        self.counts[..=r / 2].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `#P⁸(F_q)`
pub fn projective_size(q: u64) -> Option<u64> {
    let mut s: u64 = 0;
    for i in 0..9 {
        s = s.checked_add(q.checked_pow(i)?)?;
    }
    Some(s)
}

/// The point with the given index: canonical representatives ordered by
/// position of the leading 1 (last position first), then by the tail read
/// as a base-`q` number, most significant coordinate first.
pub fn point_at(q: u64, mut idx: u64) -> Vec<u64> {
    let mut x = vec![0u64; 9];
    for lead in (0..9).rev() {
        let block = q.pow(8 - lead as u32);
        if idx < block {
            x[lead] = 1;
            for c in (lead + 1..9).rev() {
                x[c] = idx % q;
                idx /= q;
            }
            return x;
        }
        idx -= block;
    }
    unreachable!("index out of range")
}

const CHUNK: u64 = 1 << 14;

/// Parallel fold over all points of `P⁸(F_q)` with their `Φ` ranks.
pub fn fold_points<T, Fold, Merge>(t: &Trivector<Gf>, budget: u64, init: impl Fn() -> T + Sync + Send, fold: Fold, merge: Merge) -> Result<T>
where
    T: Send,
    Fold: Fn(&mut T, &[u64], usize) + Sync + Send,
    Merge: Fn(T, T) -> T + Sync + Send,
{
    let f = &t.field;
    let q = f.q();
    let n = projective_size(q).filter(|&n| n <= budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("P^8({}) exceeds the point budget {budget}", f.spec()))
    })?;
    let sparse = t.sparse();
    let chunks = n.div_ceil(CHUNK);
    let result = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut acc = init();
            let start = ch * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut x = point_at(q, start);
            let mut m = [0u64; 81];
            for idx in start..end {
                if idx > start {
                    advance(&mut x, q);
                }
                fast::phi_into(f, &sparse, &x, &mut m);
                let r = fast::rank9(f, &m, 8);
                fold(&mut acc, &x, r);
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// Next canonical representative in [`point_at`] order.
fn advance(x: &mut [u64], q: u64) {
    let lead = x.iter().position(|&v| v != 0).unwrap();
    for c in (lead + 1..9).rev() {
        x[c] += 1;
        if x[c] < q {
            return;
        }
        x[c] = 0;
    }
    x[lead] = 0;
    x[lead - 1] = 1;
}

/// Counts points by rank; collects points of rank ≤ `max_rank` if asked.
pub fn enumerate_rank_locus(t: &Trivector<Gf>, max_rank: Option<usize>, budget: u64) -> Result<RankLocusReport> {
    let start = Instant::now();
    let (counts, points) = fold_points(
        t,
        budget,
        || ([0u64; 5], Vec::new()),
        |acc, x, r| {
            acc.0[r / 2] += 1;
            if let Some(m) = max_rank {
                if r <= m && acc.1.len() < POINT_LIST_CAP {
                    acc.1.push(x.to_vec());
                }
            }
        },
        |mut a, b| {
            for i in 0..5 {
                a.0[i] += b.0[i];
            }
            a.1.extend(b.1);
            a
        },
    )?;
    let points = match max_rank {
        Some(m) => {
            let expected: u64 = counts[..=m / 2].iter().sum();
            if expected as usize > POINT_LIST_CAP {
                return Err(Error::BudgetExceeded(format!("{expected} points exceed the list cap")));
            }
            Some(points)
        }
        None => None,
    };
    Ok(RankLocusReport { q: t.field.q(), counts, elapsed_ms: start.elapsed().as_millis(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::trivector::{build_gamma_c, CurveCoeffs};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_order_is_a_bijection() {
        for q in [2u64, 3] {
            let n = projective_size(q).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut x = point_at(q, 0);
            for i in 0..n {
                if i > 0 {
                    advance(&mut x, q);
                }
                assert_eq!(x, point_at(q, i));
                let lead = x.iter().position(|&v| v != 0).unwrap();
                assert_eq!(x[lead], 1);
                assert!(seen.insert(x.clone()));
            }
        }
    }

    #[test]
    fn zero_trivector_all_rank_zero() {
        let f = Gf::prime(2).unwrap();
        let r = enumerate_rank_locus(&Trivector::zero(f), None, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(r.counts, [511, 0, 0, 0, 0]);
    }

    #[test]
    fn smooth_gamma_strata() {
        let f = Gf::prime(2).unwrap();
        let g = build_gamma_c(&CurveCoeffs::zero(f.clone()).with(15, 1));
        let r = enumerate_rank_locus(&g, Some(4), DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(r.total(), 511);
        assert_eq!(r.count_at_most(2), 0);
        let mut p = vec![0u64; 9];
        p[8] = 1;
        assert!(r.points.unwrap().contains(&p));
    }

    #[test]
    fn strata_invariant_under_gl() {
        let f = Gf::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g = build_gamma_c(&CurveCoeffs::random(f.clone(), &mut rng));
        let m = loop {
            let m = DenseMatrix::from_fn(f.clone(), 9, 9, |_, _| f.random_elem(&mut rng));
            if m.det() != 0 {
                break m;
            }
        };
        let a = enumerate_rank_locus(&g, None, DEFAULT_POINT_BUDGET).unwrap();
        let b = enumerate_rank_locus(&g.gl_act(&m).unwrap(), None, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(a.counts, b.counts);
    }
}
