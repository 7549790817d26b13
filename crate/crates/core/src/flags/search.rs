//! Search for compatible flags through points of the rank-≤4 locus `X`.
//!
//! A compatible flag is determined by its point `x = F8^⊥` of `X`. For a
//! point `x` with `K = ker Φ(x)` the restriction of `t` to `K` has a
//! 2-dimensional kernel `L ∋ x`; for `l ∈ L` outside `⟨x⟩` the line `F1`
//! is spanned by `Φ(x)b` where `b` annihilates `Φ(l)(K)`. Then
//! `F3 = Φ(x)(F1^⊥)`, `F6^⊥` is the kernel of `t` restricted to `F3^⊥`, and
//! the result is checked against the 31 conditions.
//!
//! Points of `X` over `GF(q^d)` come from full enumeration of `P⁸` when it
//! fits the budget, and otherwise by walking: every `y ∈ X` contributes the
//! points of `X` on `P(ker Φ(y))`.

use super::{flag_compatible, Flag1368};
use crate::error::{Error, Result};
use crate::fast;
use crate::field::{Embedding, Field, Gf};
use crate::loci::{enumerate_rank_locus, projective_size};
use crate::matrix::DenseMatrix;
use crate::trivector::{Trivector, DIM};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub const DEFAULT_FLAG_BUDGET: u64 = 400_000_000;
const MAX_DEGREE: u64 = 81;
/// Largest projective candidate set for `F1` tried at a single point.
const LINE_CANDIDATES: u64 = 4096;

#[derive(Clone, Debug)]
pub struct FoundFlag {
    pub flag: Flag1368<Gf>,
    /// Degree of the field of definition over the base field.
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct FlagSearchReport {
    pub flags: Vec<FoundFlag>,
    /// Number of geometric points found: each flag of degree `d` stands for
    /// itself, its conjugates are found separately.
    pub weighted_count: u64,
    /// True exactly when the count reached 81.
    pub complete: bool,
    pub searched_degree: u32,
    /// Points of `X` at which the flag could not be pinned down.
    pub indeterminate: u64,
    pub budget_exhausted: bool,
}

fn normalize(f: &Gf, v: &mut [u64]) {
    if let Some(&lead) = v.iter().find(|&&a| a != 0) {
        let inv = f.inv(&lead).unwrap();
        for a in v.iter_mut() {
            *a = f.mul(a, &inv);
        }
    }
}

fn dot(f: &Gf, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |s, (x, y)| f.mul_add(&s, x, y))
}

/// `t(a, b, c)` for covectors.
fn eval3(t: &Trivector<Gf>, a: &[u64], b: &[u64], c: &[u64]) -> u64 {
    dot(&t.field, &t.contract2(a, b), c)
}

fn combine(f: &Gf, coeffs: &[u64], basis: &[Vec<u64>]) -> Vec<u64> {
    fast::combine(f, coeffs, basis, DIM)
}

/// Kernel of `t` restricted to the span of `basis`.
fn restricted_kernel(t: &Trivector<Gf>, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let f = &t.field;
    let n = basis.len();
    let mut rows = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            rows.extend((0..n).map(|i| eval3(t, &basis[i], &basis[j], &basis[k])));
        }
    }
    let npairs = n * (n - 1) / 2;
    fast::kernel(f, rows, npairs, n)
        .iter()
        .map(|c| combine(f, c, basis))
        .collect()
}

fn span_rank(f: &Gf, vs: &[Vec<u64>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let mut buf: Vec<u64> = vs.iter().flatten().copied().collect();
    fast::rref(f, &mut buf, vs.len(), DIM, usize::MAX).len()
}

fn row_kernel(f: &Gf, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if rows.is_empty() {
        return (0..DIM).map(|i| (0..DIM).map(|j| (i == j) as u64).collect()).collect();
    }
    fast::kernel(f, rows.iter().flatten().copied().collect(), rows.len(), DIM)
}

fn phi_apply(m: &DenseMatrix<Gf>, a: &[u64]) -> Vec<u64> {
    m.mul_vec(a)
}

/// Builds the flag through `x` with `F1 = ⟨u⟩`, if the construction
/// produces subspaces of the right dimensions.
fn assemble(t: &Trivector<Gf>, m: &DenseMatrix<Gf>, x: &[u64], u: &[u64]) -> Option<Flag1368<Gf>> {
    let f = &t.field;
    let u_perp = row_kernel(f, &[u.to_vec()]);
    let f3: Vec<Vec<u64>> = u_perp.iter().map(|a| phi_apply(m, a)).collect();
    if span_rank(f, &f3) != 3 {
        return None;
    }
    let f3_perp = row_kernel(f, &f3);
    let n = restricted_kernel(t, &f3_perp);
    if n.len() != 3 {
        return None;
    }
    let f6 = row_kernel(f, &n);
    let f8 = row_kernel(f, &[x.to_vec()]);
    Flag1368::new(f.clone(), [vec![u.to_vec()], f3, f6, f8]).ok()
}

/// Compatible flags whose point is `x`, and whether the construction was
/// inconclusive at this field.
pub fn flags_at_point(t: &Trivector<Gf>, x: &[u64]) -> Result<(Vec<Flag1368<Gf>>, bool)> {
    let f = &t.field;
    let m = t.phi_at(x);
    let rank = m.rank();
    if rank <= 2 {
        return Err(Error::NonStableInput(format!("Φ has rank {rank} at a point")));
    }
    if rank != 4 {
        return Ok((Vec::new(), false));
    }
    let k = m.kernel();
    let l = restricted_kernel(t, &k);
    if l.len() != 2 {
        return Ok((Vec::new(), true));
    }
    let l1 = l.iter().find(|v| span_rank(f, &[x.to_vec(), (*v).clone()]) == 2).unwrap();
    let ml = t.phi_at(l1);
    let s: Vec<Vec<u64>> = k.iter().map(|v| phi_apply(&ml, v)).collect();
    let b = row_kernel(f, &s);
    let images: Vec<Vec<u64>> = b.iter().map(|v| phi_apply(&m, v)).collect();
    let (red, piv) = DenseMatrix::from_rows(f.clone(), &images).rref();
    let basis: Vec<Vec<u64>> = red.to_rows().into_iter().take(piv.len()).collect();
    let dim = basis.len() as u32;
    if dim == 0 {
        return Ok((Vec::new(), true));
    }
    let qn = f.q().checked_pow(dim - 1).filter(|&n| n <= LINE_CANDIDATES);
    let Some(_) = qn else {
        return Ok((Vec::new(), true));
    };
    let mut found = Vec::new();
    for coeffs in projective_points(f.q(), dim as usize) {
        let u = combine(f, &coeffs, &basis);
        if let Some(flag) = assemble(t, &m, x, &u) {
            if flag_compatible(t, &flag)?.compatible {
                found.push(flag);
            }
        }
    }
    Ok((found, false))
}

/// Canonical representatives of `P^{n-1}(GF(q))`.
fn projective_points(q: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let mut v = vec![0u64; n];
        v[lead] = 1;
        let tail = n - lead - 1;
        let mut buf = vec![0u64; tail];
        loop {
            v[lead + 1..].copy_from_slice(&buf);
            out.push(v.clone());
            if !fast::next_vector(&mut buf, q) {
                break;
            }
        }
    }
    out
}

/// An embedding `GF(q^e) -> GF(q^d)` over the common base field.
struct Lift {
    up: Embedding,
    twist: u32,
}

impl Lift {
    fn new(small: &Embedding, big: &Embedding) -> Result<Self> {
        let up = Embedding::new(&small.target, &big.target)?;
        let base = &small.source;
        let gen = if base.degree() > 1 { base.p() } else { 1 };
        let want = big.apply(gen);
        let got = up.apply(small.apply(gen));
        let f = &big.target;
        let twist = (0..f.degree())
            .find(|&j| f.frobenius(got, j) == want)
            .ok_or_else(|| Error::InvalidField("incompatible field embeddings".into()))?;
        Ok(Self { up, twist })
    }

    fn apply(&self, a: u64) -> u64 {
        self.up.target.frobenius(self.up.apply(a), self.twist)
    }
}

fn map_trivector(t: &Trivector<Gf>, emb: &Embedding) -> Trivector<Gf> {
    Trivector::from_dense(emb.target.clone(), t.dense().iter().map(|&a| emb.apply(a)).collect())
}

/// Points of `X` on `P(ker Φ(y))`, and the number of points examined.
fn walk_step(t: &Trivector<Gf>, sparse: &[(usize, usize, usize, u64)], y: &[u64]) -> Result<(Vec<Vec<u64>>, u64)> {
    let f = &t.field;
    let mut m = [0u64; 81];
    fast::phi_into(f, sparse, y, &mut m);
    let rank = fast::rank9(f, &m, 8);
    if rank <= 2 {
        return Err(Error::NonStableInput(format!("Φ has rank {rank} at a point")));
    }
    let k = fast::kernel(f, m.to_vec(), 9, 9);
    let pts = projective_points(f.q(), k.len());
    let n = pts.len() as u64;
    let hits: Vec<Vec<u64>> = pts
        .par_iter()
        .filter_map(|c| {
            let mut z = combine(f, c, &k);
            let mut mz = [0u64; 81];
            fast::phi_into(f, sparse, &z, &mut mz);
            (fast::rank9(f, &mz, 4) <= 4).then(|| {
                normalize(f, &mut z);
                z
            })
        })
        .collect();
    Ok((hits, n))
}

/// Points of `X(GF(Q))`: full enumeration when affordable, else a walk
/// from `seeds`. Returns the points, the work spent and whether the budget
/// stopped the walk early.
fn locus_points(t: &Trivector<Gf>, seeds: &[Vec<u64>], budget: u64) -> Result<(BTreeSet<Vec<u64>>, u64, bool)> {
    let f = &t.field;
    if let Some(n) = projective_size(f.q()).filter(|&n| n <= budget) {
        let r = enumerate_rank_locus(t, Some(4), n)?;
        if r.counts[0] + r.counts[1] > 0 {
            return Err(Error::NonStableInput("the rank-2 locus is nonempty".into()));
        }
        return Ok((r.points.unwrap_or_default().into_iter().collect(), n, false));
    }
    let sparse = t.sparse();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        let mut s = s.clone();
        normalize(f, &mut s);
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    let mut spent = 0u64;
    while let Some(y) = queue.pop_front() {
        let per = projective_size_n(f.q(), 5);
        if spent.saturating_add(per) > budget {
            return Ok((seen, spent, true));
        }
        let (hits, n) = walk_step(t, &sparse, &y)?;
        spent += n;
        for z in hits {
            if seen.insert(z.clone()) {
                queue.push_back(z);
            }
        }
    }
    Ok((seen, spent, false))
}

fn projective_size_n(q: u64, n: u32) -> u64 {
    (0..n).fold(0u64, |s, i| s.saturating_add(q.saturating_pow(i)))
}

/// Searches compatible flags over `GF(q^d)` for `d = 1..=max_ext_degree`,
/// stopping once 81 geometric points are found.
pub fn flag_search(t: &Trivector<Gf>, max_ext_degree: u32, budget: u64) -> Result<FlagSearchReport> {
    let base = t.field.clone();
    let mut report = FlagSearchReport {
        flags: Vec::new(),
        weighted_count: 0,
        complete: false,
        searched_degree: 0,
        indeterminate: 0,
        budget_exhausted: false,
    };
    let mut points_by_degree: BTreeMap<u32, (Embedding, Vec<Vec<u64>>)> = BTreeMap::new();
    let mut remaining = budget;
    for d in 1..=max_ext_degree {
        let emb = if d == 1 { Embedding::identity(&base) } else { base.extension(d)?.1 };
        let td = map_trivector(t, &emb);
        let mut seeds = Vec::new();
        for (&e, (emb_e, pts)) in &points_by_degree {
            if d % e == 0 {
                let lift = Lift::new(emb_e, &emb)?;
                seeds.extend(pts.iter().map(|p| p.iter().map(|&a| lift.apply(a)).collect::<Vec<_>>()));
            }
        }
        let (points, spent, stopped) = locus_points(&td, &seeds, remaining)?;
        remaining = remaining.saturating_sub(spent);
        let points: Vec<Vec<u64>> = points.into_iter().collect();
        let results: Vec<Result<(Vec<Flag1368<Gf>>, bool)>> = points.par_iter().map(|x| flags_at_point(&td, x)).collect();
        for r in results {
            let (flags, indeterminate) = r?;
            report.indeterminate += indeterminate as u64;
            for flag in flags {
                let degree = flag.definition_degree(base.degree());
                if degree == d {
                    report.flags.push(FoundFlag { flag, degree });
                    report.weighted_count += 1;
                }
            }
        }
        points_by_degree.insert(d, (emb, points));
        report.searched_degree = d;
        if report.weighted_count > MAX_DEGREE {
            return Err(Error::Disagreement(format!("{} compatible flags exceed 81", report.weighted_count)));
        }
        if report.weighted_count == MAX_DEGREE {
            report.complete = true;
            break;
        }
        if stopped {
            report.budget_exhausted = true;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::permuted_gamma;
    use crate::trivector::CurveCoeffs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_flag_recovered_from_its_point() {
        let f = Gf::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = 0;
        for _ in 0..10 {
            let c = CurveCoeffs::random(f.clone(), &mut rng);
            if !crate::stability::curve_is_smooth(&c, 2).unwrap() {
                continue;
            }
            let t = permuted_gamma(&c);
            let std = Flag1368::standard(f.clone());
            let (flags, _) = flags_at_point(&t, &std.point()).unwrap();
            assert!(flags.iter().all(|g| flag_compatible(&t, g).unwrap().compatible));
            hits += flags.contains(&std) as usize;
        }
        assert!(hits > 0);
    }

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(4, 3).len(), 21);
        assert_eq!(projective_size_n(4, 3), 21);
    }
}
