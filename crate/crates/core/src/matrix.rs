//! Dense matrices over an exact field.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::UniPoly;
use std::ops::{Index, IndexMut};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F: Field> {
    pub field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Index<(usize, usize)> for DenseMatrix<F> {
    type Output = F::Elem;
    fn index(&self, (r, c): (usize, usize)) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for DenseMatrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F::Elem {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = m.field.one();
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: &[Vec<F::Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |r, c| rows[r][c].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] = f.mul_add(&out[(i, j)], a, &o[(k, j)]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.mul_add(&acc, a, b))
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, self.cols, |r, c| f.add(&self[(r, c)], &o[(r, c)]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, self.cols, |r, c| f.sub(&self[(r, c)], &o[(r, c)]))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, self.cols, |r, c| f.mul(&self[(r, c)], s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::identity(self.field.clone(), self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(&m[(r, c)]).unwrap();
            for j in c..self.cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..self.cols {
                    let t = f.mul(&factor, &m[(r, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a kernel basis whose rows form a reduced echelon matrix.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<F::Elem>>) {
        let f = &self.field;
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(&m[(i, free)]);
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return (pivots.len(), basis);
        }
        let k = Self::from_rows(f.clone(), &basis).rref().0;
        (pivots.len(), k.to_rows())
    }

    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        self.rank_and_kernel().1
    }

    /// Row space basis (nonzero rows of the reduced echelon form).
    pub fn row_space(&self) -> Vec<Vec<F::Elem>> {
        let (m, p) = self.rref();
        (0..p.len()).map(|i| m.row(i).to_vec()).collect()
    }

    pub fn det(&self) -> F::Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut d = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&m[(i, c)])) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                d = f.neg(&d);
            }
            d = f.mul(&d, &m[(c, c)]);
            let inv = f.inv(&m[(c, c)]).unwrap();
            for i in c + 1..n {
                if f.is_zero(&m[(i, c)]) {
                    continue;
                }
                let factor = f.mul(&m[(i, c)], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &m[(c, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
        }
        d
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let aug = Self::from_fn(f.clone(), n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                f.one()
            } else {
                f.zero()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(f.clone(), n, n, |r, c| m[(r, c + n)].clone()))
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let aug = Self::from_fn(f.clone(), self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = m[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// `Mᵀ = −M` with zero diagonal.
    pub fn is_skew(&self) -> bool {
        let f = &self.field;
        self.is_square()
            && (0..self.rows).all(|i| {
                f.is_zero(&self[(i, i)])
                    && (i + 1..self.cols).all(|j| f.is_zero(&f.add(&self[(i, j)], &self[(j, i)])))
            })
    }

    /// Pfaffian by expansion along the first row, normalized so that
    /// `pf([[0, a], [-a, 0]]) = a`.
    pub fn pfaffian(&self) -> Result<F::Elem> {
        if !self.is_skew() {
            return Err(Error::NotSkew);
        }
        if self.rows % 2 == 1 {
            return Err(Error::OddSize);
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.pf_rec(&idx))
    }

    fn pf_rec(&self, idx: &[usize]) -> F::Elem {
        let f = &self.field;
        if idx.is_empty() {
            return f.one();
        }
        let first = idx[0];
        let mut acc = f.zero();
        for j in 1..idx.len() {
            let a = &self[(first, idx[j])];
            if f.is_zero(a) {
                continue;
            }
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
            let term = f.mul(a, &self.pf_rec(&rest));
            acc = if j % 2 == 1 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
        }
        acc
    }

    /// Minimal polynomial (monic), as the lcm of the local minimal
    /// polynomials of enough standard basis vectors to span the space.
    pub fn minimal_polynomial(&self) -> UniPoly<F> {
        assert!(self.is_square(), "minimal polynomial of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut span = Echelon::new(f.clone(), n);
        let mut m = UniPoly::constant(f.clone(), f.one());
        for j in 0..n {
            let mut e = vec![f.zero(); n];
            e[j] = f.one();
            if span.contains(&e) {
                continue;
            }
            let (local, krylov) = self.vector_minpoly(e);
            for v in krylov {
                span.insert(v);
            }
            m = m.lcm(&local);
            if span.dim() == n {
                break;
            }
        }
        m
    }

    /// Minimal polynomial of `v` relative to `self`, with the Krylov vectors.
    fn vector_minpoly(&self, v: Vec<F::Elem>) -> (UniPoly<F>, Vec<Vec<F::Elem>>) {
        let f = &self.field;
        let n = self.rows;
        // reduced rows with their coefficient vectors in the Krylov basis
        let mut reduced: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)> = Vec::new();
        let mut krylov = Vec::new();
        let mut cur = v;
        loop {
            let d = krylov.len();
            let mut r = cur.clone();
            let mut comb = vec![f.zero(); d + 1];
            comb[d] = f.one();
            for (p, row, c) in &reduced {
                if f.is_zero(&r[*p]) {
                    continue;
                }
                let factor = r[*p].clone();
                for i in 0..n {
                    r[i] = f.sub(&r[i], &f.mul(&factor, &row[i]));
                }
                for i in 0..c.len() {
                    comb[i] = f.sub(&comb[i], &f.mul(&factor, &c[i]));
                }
            }
            match (0..n).find(|&i| !f.is_zero(&r[i])) {
                None => return (UniPoly::new(f.clone(), comb), krylov),
                Some(p) => {
                    let inv = f.inv(&r[p]).unwrap();
                    let r: Vec<_> = r.iter().map(|x| f.mul(x, &inv)).collect();
                    let c: Vec<_> = comb.iter().map(|x| f.mul(x, &inv)).collect();
                    reduced.push((p, r, c));
                }
            }
            krylov.push(cur.clone());
            cur = self.mul_vec(&cur);
        }
    }

    /// Whether the minimal polynomial is squarefree.
    pub fn is_semisimple(&self) -> bool {
        let m = self.minimal_polynomial();
        m.gcd(&m.derivative()).degree() == Some(0)
    }
}

/// Incrementally maintained echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    n: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, n: usize) -> Self {
        Self { field, n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if f.is_zero(&r[*p]) {
                continue;
            }
            let factor = r[*p].clone();
            for i in 0..self.n {
                if !f.is_zero(&row[i]) {
                    r[i] = f.sub(&r[i], &f.mul(&factor, &row[i]));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        let f = self.field.clone();
        let r = self.reduce(&v);
        let Some(p) = (0..self.n).find(|&i| !f.is_zero(&r[i])) else {
            return false;
        };
        let inv = f.inv(&r[p]).unwrap();
        let r: Vec<_> = r.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vec<F::Elem>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn det_cofactor<F: Field>(m: &DenseMatrix<F>) -> F::Elem {
        let f = &m.field;
        let n = m.rows();
        if n == 0 {
            return f.one();
        }
        let mut acc = f.zero();
        for j in 0..n {
            let minor = DenseMatrix::from_fn(f.clone(), n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let t = f.mul(&m[(0, j)], &det_cofactor(&minor));
            acc = if j % 2 == 0 { f.add(&acc, &t) } else { f.sub(&acc, &t) };
        }
        acc
    }

    fn random_skew<F: Field>(f: &F, n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix<F> {
        let mut m = DenseMatrix::zeros(f.clone(), n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x = f.random_elem(rng);
                m[(j, i)] = f.neg(&x);
                m[(i, j)] = x;
            }
        }
        m
    }

    #[test]
    fn trivial_ranks() {
        let f = Gf::prime(7).unwrap();
        let (r, k) = DenseMatrix::zeros(f.clone(), 9, 9).rank_and_kernel();
        assert_eq!((r, k.len()), (0, 9));
        let (r, k) = DenseMatrix::identity(f, 9).rank_and_kernel();
        assert_eq!((r, k.len()), (9, 0));
    }

    #[test]
    fn kernel_is_kernel_and_echelon() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random_skew(&f, 9, &mut rng);
            let (r, k) = m.rank_and_kernel();
            assert_eq!(r % 2, 0);
            assert_eq!(r + k.len(), 9);
            for v in &k {
                assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
            if !k.is_empty() {
                let km = DenseMatrix::from_rows(f.clone(), &k);
                assert_eq!(km.rref().0, km);
            }
        }
    }

    #[test]
    fn skew_ranks_even_exhaustive_small() {
        let f = Gf::prime(2).unwrap();
        for bits in 0u32..64 {
            let mut m = DenseMatrix::zeros(f.clone(), 4, 4);
            let mut b = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    m[(i, j)] = ((bits >> b) & 1) as u64;
                    m[(j, i)] = m[(i, j)];
                    b += 1;
                }
            }
            assert_eq!(m.rank() % 2, 0);
        }
    }

    #[test]
    fn pfaffian_squares_to_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [2u64, 5, 7] {
            let f = Gf::prime(p).unwrap();
            for n in [2usize, 4, 6, 8] {
                for _ in 0..10 {
                    let m = random_skew(&f, n, &mut rng);
                    let pf = m.pfaffian().unwrap();
                    assert_eq!(f.mul(&pf, &pf), det_cofactor(&m));
                    assert_eq!(m.det(), det_cofactor(&m));
                }
            }
        }
        let q = Rationals;
        for _ in 0..5 {
            let m = random_skew(&q, 6, &mut rng);
            let pf = m.pfaffian().unwrap();
            assert_eq!(&pf * &pf, det_cofactor(&m));
        }
    }

    #[test]
    fn pfaffian_base_cases() {
        let f = Gf::prime(5).unwrap();
        let m = DenseMatrix::from_rows(f.clone(), &[vec![0, 3], vec![2, 0]]);
        assert_eq!(m.pfaffian().unwrap(), 3);
        let mut j = DenseMatrix::zeros(f.clone(), 4, 4);
        j[(0, 1)] = 1;
        j[(1, 0)] = 4;
        j[(2, 3)] = 1;
        j[(3, 2)] = 4;
        assert_eq!(j.pfaffian().unwrap(), 1);
        assert!(matches!(DenseMatrix::identity(f.clone(), 2).pfaffian(), Err(Error::NotSkew)));
        assert!(matches!(DenseMatrix::zeros(f, 3, 3).pfaffian(), Err(Error::OddSize)));
        // symmetric with nonzero diagonal is not alternating in characteristic 2
        let g = Gf::prime(2).unwrap();
        assert!(!DenseMatrix::identity(g, 2).is_skew());
    }

    #[test]
    fn pfaffian_congruence() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_skew(&f, 6, &mut rng);
            let g = DenseMatrix::from_fn(f.clone(), 6, 6, |_, _| f.random_elem(&mut rng));
            let lhs = g.transpose().mul(&m).mul(&g).pfaffian().unwrap();
            assert_eq!(lhs, f.mul(&g.det(), &m.pfaffian().unwrap()));
        }
    }

    #[test]
    fn semisimplicity() {
        let f = Gf::prime(7).unwrap();
        assert!(DenseMatrix::identity(f.clone(), 4).is_semisimple());
        let j = DenseMatrix::from_rows(f.clone(), &[vec![0, 1], vec![0, 0]]);
        assert!(!j.is_semisimple());
        let m = DenseMatrix::from_rows(
            f.clone(),
            &[vec![1, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 3, 1], vec![0, 0, 0, 3]],
        );
        // (x-1)(x-2)(x-3)^2
        let expect = [(1u64, 1usize), (2, 1), (3, 2)]
            .iter()
            .map(|&(r, e)| {
                let lin = UniPoly::new(f.clone(), vec![f.neg(&r), 1]);
                (0..e).fold(UniPoly::constant(f.clone(), 1), |a, _| a.mul(&lin))
            })
            .fold(UniPoly::constant(f.clone(), 1), |a, b| a.mul(&b));
        assert_eq!(m.minimal_polynomial(), expect);
        assert!(!m.is_semisimple());
    }

    #[test]
    fn inverse_and_solve() {
        let f = Gf::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let m = DenseMatrix::from_fn(f.clone(), 5, 5, |_, _| f.random_elem(&mut rng));
            match m.inverse() {
                Ok(inv) => assert_eq!(m.mul(&inv), DenseMatrix::identity(f.clone(), 5)),
                Err(_) => assert_eq!(m.det(), 0),
            }
        }
    }
}
