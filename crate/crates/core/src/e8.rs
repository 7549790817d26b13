//! The Z/3-graded Lie algebra e8 = g0 ⊕ ∧³V ⊕ ∧⁶V on a 9-dimensional `V`,
//! restricted cubes in characteristic 3 and the 3-rank of a curve.
//!
//! Degree 0 is stored as a pair `(B, c)` standing for `B + c·X0` where
//! `X0 = diag(1,…,1,-8)/3`. `X0` acts on `[ijk]` by `1 - 3[9 ∈ ijk]` and on
//! lower triples by the negative. Away from characteristic 3 the pair is
//! folded into a traceless matrix with `c = 0`; in characteristic 3 `B` is
//! traceless and taken modulo the identity.
//!
//! Degree 2 is stored on lower triples: slot `n` holds the coefficient of
//! `e^T` for the `n`-th triple `T`, which the volume form identifies with
//! `∧⁶V` through the complement of `T`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::DenseMatrix;
use crate::stability::{curve_is_smooth, SMOOTHNESS_BOUND};
use crate::trivector::{build_gamma_c, sort_triple, triple_index, triples, CurveCoeffs, Trivector, DIM, NTRIPLES};
use rand::Rng;
use serde::Serialize;
use std::sync::OnceLock;

pub const E8_DIM: usize = 248;
#[cfg(test)]
const DEG0_DIM: usize = 80;

/// `(A, B, C, sign)` with `A, B, C` disjoint triple slots and `sign` the sign
/// of the permutation `A ∪ B ∪ C` of `1..9`.
fn wedge_table() -> &'static [(usize, usize, usize, bool)] {
    static W: OnceLock<Vec<(usize, usize, usize, bool)>> = OnceLock::new();
    W.get_or_init(|| {
        let t = triples();
        let mut out = Vec::with_capacity(1680);
        for (a, ta) in t.iter().enumerate() {
            for (b, tb) in t.iter().enumerate() {
                if ta.iter().any(|x| tb.contains(x)) {
                    continue;
                }
                let rest: Vec<usize> = (0..DIM).filter(|x| !ta.contains(x) && !tb.contains(x)).collect();
                let c = triple_index(rest[0], rest[1], rest[2]);
                let word: Vec<usize> = ta.iter().chain(tb).chain(&rest).copied().collect();
                let mut inv = 0;
                for i in 0..9 {
                    for j in i + 1..9 {
                        if word[i] > word[j] {
                            inv += 1;
                        }
                    }
                }
                out.push((a, b, c, inv % 2 == 0));
            }
        }
        out
    })
}

/// Weight of `X0` on an upper triple.
fn x0_weight(t: &[usize; 3]) -> i64 {
    if t[2] == DIM - 1 {
        -2
    } else {
        1
    }
}

/// Antisymmetric read of a coefficient vector at an arbitrary 0-based triple.
fn coeff<F: Field>(f: &F, v: &[F::Elem], i: usize, j: usize, k: usize) -> F::Elem {
    match sort_triple([i, j, k]) {
        Some((s, neg)) => {
            let x = &v[triple_index(s[0], s[1], s[2])];
            if neg {
                f.neg(x)
            } else {
                x.clone()
            }
        }
        None => f.zero(),
    }
}

fn act_upper<F: Field>(f: &F, b: &DenseMatrix<F>, c: &F::Elem, om: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); NTRIPLES];
    for (n, t) in triples().iter().enumerate() {
        let [i, j, k] = *t;
        let mut v = f.mul(&f.mul(c, &f.from_i64(x0_weight(t))), &om[n]);
        for m in 0..DIM {
            v = f.mul_add(&v, &b[(i, m)], &coeff(f, om, m, j, k));
            v = f.mul_add(&v, &b[(j, m)], &coeff(f, om, i, m, k));
            v = f.mul_add(&v, &b[(k, m)], &coeff(f, om, i, j, m));
        }
        out[n] = v;
    }
    out
}

fn act_lower<F: Field>(f: &F, b: &DenseMatrix<F>, c: &F::Elem, ph: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); NTRIPLES];
    for (n, t) in triples().iter().enumerate() {
        let [i, j, k] = *t;
        let mut v = f.mul(&f.mul(c, &f.from_i64(x0_weight(t))), &ph[n]);
        for m in 0..DIM {
            v = f.mul_add(&v, &b[(m, i)], &coeff(f, ph, m, j, k));
            v = f.mul_add(&v, &b[(m, j)], &coeff(f, ph, i, m, k));
            v = f.mul_add(&v, &b[(m, k)], &coeff(f, ph, i, j, m));
        }
        out[n] = f.neg(&v);
    }
    out
}

fn wedge<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); NTRIPLES];
    for &(a, b, c, pos) in wedge_table() {
        if f.is_zero(&x[a]) || f.is_zero(&y[b]) {
            continue;
        }
        let p = f.mul(&x[a], &y[b]);
        out[c] = if pos { f.add(&out[c], &p) } else { f.sub(&out[c], &p) };
    }
    out
}

/// `[ω, φ]` for `ω` of degree 1 and `φ` of degree 2.
fn pair<F: Field>(f: &F, om: &[F::Elem], ph: &[F::Elem]) -> (DenseMatrix<F>, F::Elem) {
    let mut y = DenseMatrix::zeros(f.clone(), DIM, DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            let mut s = f.zero();
            for k in 0..DIM {
                for l in k + 1..DIM {
                    let a = coeff(f, om, i, k, l);
                    if !f.is_zero(&a) {
                        s = f.mul_add(&s, &a, &coeff(f, ph, j, k, l));
                    }
                }
            }
            y[(i, j)] = f.neg(&s);
        }
    }
    let tr = (0..DIM).fold(f.zero(), |a, i| f.add(&a, &y[(i, i)]));
    y[(DIM - 1, DIM - 1)] = f.sub(&y[(DIM - 1, DIM - 1)], &tr);
    let ip = om.iter().zip(ph).fold(f.zero(), |a, (x, z)| f.mul_add(&a, x, z));
    (y, ip)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedE8Element<F: Field> {
    pub field: F,
    b: DenseMatrix<F>,
    c: F::Elem,
    deg1: Vec<F::Elem>,
    deg2: Vec<F::Elem>,
}

impl<F: Field> GradedE8Element<F> {
    pub fn zero(field: F) -> Self {
        Self {
            b: DenseMatrix::zeros(field.clone(), DIM, DIM),
            c: field.zero(),
            deg1: vec![field.zero(); NTRIPLES],
            deg2: vec![field.zero(); NTRIPLES],
            field,
        }
    }

    /// Builds an element from a degree-0 pair `(B, c)` and the graded parts.
    ///
    /// Away from characteristic 3 `B` is read modulo scalars. In
    /// characteristic 3 `B` must be traceless.
    pub fn new(b: DenseMatrix<F>, c: F::Elem, deg1: Vec<F::Elem>, deg2: Vec<F::Elem>) -> Result<Self> {
        if b.rows() != DIM || b.cols() != DIM || deg1.len() != NTRIPLES || deg2.len() != NTRIPLES {
            return Err(Error::Dimension("graded element needs a 9x9 matrix and two 84-vectors".into()));
        }
        let f = b.field.clone();
        if f.characteristic() == 3 && !f.is_zero(&trace(&b)) {
            return Err(Error::Invalid("degree-0 matrix must be traceless in characteristic 3".into()));
        }
        Ok(Self { field: f, b, c, deg1, deg2 }.canonical())
    }

    pub fn from_deg0(b: DenseMatrix<F>) -> Result<Self> {
        let f = b.field.clone();
        Self::new(b, f.zero(), vec![f.zero(); NTRIPLES], vec![f.zero(); NTRIPLES])
    }

    pub fn from_trivector(t: &Trivector<F>) -> Self {
        let mut e = Self::zero(t.field.clone());
        e.deg1 = t.dense().to_vec();
        e
    }

    pub fn from_deg2(field: F, deg2: Vec<F::Elem>) -> Result<Self> {
        let z = field.zero();
        let deg1 = vec![field.zero(); NTRIPLES];
        Self::new(DenseMatrix::zeros(field, DIM, DIM), z, deg1, deg2)
    }

    pub fn random<R: Rng + ?Sized>(field: F, rng: &mut R) -> Self {
        let f = &field;
        let mut b = DenseMatrix::from_fn(f.clone(), DIM, DIM, |_, _| f.random_elem(rng));
        let tr = trace(&b);
        b[(DIM - 1, DIM - 1)] = f.sub(&b[(DIM - 1, DIM - 1)], &tr);
        let c = f.random_elem(rng);
        let deg1 = (0..NTRIPLES).map(|_| f.random_elem(rng)).collect();
        let deg2 = (0..NTRIPLES).map(|_| f.random_elem(rng)).collect();
        Self::new(b, c, deg1, deg2).unwrap()
    }

    fn canonical(mut self) -> Self {
        let f = self.field.clone();
        let n = DIM - 1;
        if f.characteristic() == 3 {
            let l = self.b[(n, n)].clone();
            for i in 0..DIM {
                self.b[(i, i)] = f.sub(&self.b[(i, i)], &l);
            }
        } else {
            let third = f.inv(&f.from_i64(3)).unwrap();
            let ninth = f.mul(&third, &third);
            let cx = f.mul(&self.c, &third);
            let shift = f.mul(&trace(&self.b), &ninth);
            for i in 0..DIM {
                let w = if i == n { f.mul(&cx, &f.from_i64(-8)) } else { cx.clone() };
                self.b[(i, i)] = f.add(&f.sub(&self.b[(i, i)], &shift), &w);
            }
            self.c = f.zero();
        }
        self
    }

    /// Representative of the degree-0 matrix class with `(9,9)` entry zero.
    /// In characteristic ≠ 3 the `X0` part is already folded in.
    pub fn deg0(&self) -> DenseMatrix<F> {
        let f = &self.field;
        let l = self.b[(DIM - 1, DIM - 1)].clone();
        let mut m = self.b.clone();
        for i in 0..DIM {
            m[(i, i)] = f.sub(&m[(i, i)], &l);
        }
        m
    }

    /// Coefficient of `X0`; always zero away from characteristic 3.
    pub fn x0(&self) -> &F::Elem {
        &self.c
    }

    pub fn deg1(&self) -> Trivector<F> {
        Trivector::from_dense(self.field.clone(), self.deg1.clone())
    }

    pub fn deg2(&self) -> &[F::Elem] {
        &self.deg2
    }

    pub fn is_zero(&self) -> bool {
        let f = &self.field;
        self.deg0().is_zero() && f.is_zero(&self.c) && self.deg1.iter().chain(&self.deg2).all(|x| f.is_zero(x))
    }

    /// Which of the three graded components are nonzero.
    pub fn support(&self) -> [bool; 3] {
        let f = &self.field;
        [
            !self.deg0().is_zero() || !f.is_zero(&self.c),
            self.deg1.iter().any(|x| !f.is_zero(x)),
            self.deg2.iter().any(|x| !f.is_zero(x)),
        ]
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        Self {
            field: f.clone(),
            b: self.b.add(&o.b),
            c: f.add(&self.c, &o.c),
            deg1: self.deg1.iter().zip(&o.deg1).map(|(a, b)| f.add(a, b)).collect(),
            deg2: self.deg2.iter().zip(&o.deg2).map(|(a, b)| f.add(a, b)).collect(),
        }
        .canonical()
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self {
            field: f.clone(),
            b: self.b.scale(s),
            c: f.mul(&self.c, s),
            deg1: self.deg1.iter().map(|a| f.mul(a, s)).collect(),
            deg2: self.deg2.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn bracket(&self, o: &Self) -> Result<Self> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let n = DIM - 1;
        // [deg0, deg0]; X0 scales E_ij by 3([j=9] - [i=9])
        let mut b = self.b.mul(&o.b).sub(&o.b.mul(&self.b));
        let weight = |i: usize, j: usize| f.from_i64(3 * ((j == n) as i64 - (i == n) as i64));
        for i in 0..DIM {
            for j in 0..DIM {
                let w = weight(i, j);
                if f.is_zero(&w) {
                    continue;
                }
                let d = f.sub(&f.mul(&self.c, &o.b[(i, j)]), &f.mul(&o.c, &self.b[(i, j)]));
                b[(i, j)] = f.mul_add(&b[(i, j)], &w, &d);
            }
        }
        let sub_vec = |x: Vec<F::Elem>, y: Vec<F::Elem>| -> Vec<F::Elem> { x.iter().zip(&y).map(|(a, b)| f.sub(a, b)).collect() };
        let add_vec = |x: Vec<F::Elem>, y: Vec<F::Elem>| -> Vec<F::Elem> { x.iter().zip(&y).map(|(a, b)| f.add(a, b)).collect() };

        let deg1 = add_vec(
            sub_vec(act_upper(f, &self.b, &self.c, &o.deg1), act_upper(f, &o.b, &o.c, &self.deg1)),
            wedge(f, &self.deg2, &o.deg2),
        );
        let deg2 = add_vec(
            sub_vec(act_lower(f, &self.b, &self.c, &o.deg2), act_lower(f, &o.b, &o.c, &self.deg2)),
            wedge(f, &self.deg1, &o.deg1),
        );
        let (p1, c1) = pair(f, &self.deg1, &o.deg2);
        let (p2, c2) = pair(f, &o.deg1, &self.deg2);
        let b = b.add(&p1).sub(&p2);
        let c = f.sub(&c1, &c2);
        Ok(Self { field: f.clone(), b, c, deg1, deg2 }.canonical())
    }

    /// Coordinates in the basis: off-diagonal `E_ij` (72, row-major), then
    /// diagonal classes, then `[ijk]` (84), then `e^{ijk}` (84). Diagonal
    /// classes are `E_ii - E_99` for `i ≤ 8` away from characteristic 3 and
    /// `E_ii - E_88` for `i ≤ 7` followed by `X0` in characteristic 3.
    pub fn coords(&self) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = Vec::with_capacity(E8_DIM);
        for i in 0..DIM {
            for j in 0..DIM {
                if i != j {
                    out.push(self.b[(i, j)].clone());
                }
            }
        }
        if f.characteristic() == 3 {
            let m = self.deg0();
            out.extend((0..7).map(|i| m[(i, i)].clone()));
            out.push(self.c.clone());
        } else {
            out.extend((0..8).map(|i| self.b[(i, i)].clone()));
        }
        out.extend(self.deg1.iter().cloned());
        out.extend(self.deg2.iter().cloned());
        out
    }

    pub fn from_coords(field: F, v: &[F::Elem]) -> Result<Self> {
        if v.len() != E8_DIM {
            return Err(Error::Dimension(format!("expected {E8_DIM} coordinates, got {}", v.len())));
        }
        let f = &field;
        let mut b = DenseMatrix::zeros(f.clone(), DIM, DIM);
        let mut it = v.iter();
        for i in 0..DIM {
            for j in 0..DIM {
                if i != j {
                    b[(i, j)] = it.next().unwrap().clone();
                }
            }
        }
        let mut c = f.zero();
        let (last, count) = if f.characteristic() == 3 { (7, 7) } else { (8, 8) };
        for i in 0..count {
            let d = it.next().unwrap();
            b[(i, i)] = f.add(&b[(i, i)], d);
            b[(last, last)] = f.sub(&b[(last, last)], d);
        }
        if f.characteristic() == 3 {
            c = it.next().unwrap().clone();
        }
        let deg1: Vec<_> = it.by_ref().take(NTRIPLES).cloned().collect();
        let deg2: Vec<_> = it.cloned().collect();
        Self::new(b, c, deg1, deg2)
    }

    /// Basis vector `k` of [`coords`](Self::coords).
    pub fn basis(field: F, k: usize) -> Self {
        let mut v = vec![field.zero(); E8_DIM];
        v[k] = field.one();
        Self::from_coords(field, &v).unwrap()
    }

    /// Matrix of `ad x` in the coordinate basis (columns are images).
    pub fn ad_matrix(&self) -> Result<DenseMatrix<F>> {
        let f = &self.field;
        let mut m = DenseMatrix::zeros(f.clone(), E8_DIM, E8_DIM);
        for k in 0..E8_DIM {
            let col = self.bracket(&Self::basis(f.clone(), k))?.coords();
            for (r, x) in col.into_iter().enumerate() {
                m[(r, k)] = x;
            }
        }
        Ok(m)
    }
}

fn trace<F: Field>(m: &DenseMatrix<F>) -> F::Elem {
    let f = &m.field;
    (0..m.rows()).fold(f.zero(), |a, i| f.add(&a, &m[(i, i)]))
}

/// `(ad t)³` applied to degree-1 basis vectors, as columns of an 84×84 matrix.
fn ad_cubed_on_deg1<F: Field>(t: &Trivector<F>) -> Result<Vec<Vec<F::Elem>>> {
    let f = &t.field;
    let g = GradedE8Element::from_trivector(t);
    let mut cols = Vec::with_capacity(NTRIPLES);
    for n in 0..NTRIPLES {
        let mut e = Trivector::zero(f.clone());
        e.dense_mut()[n] = f.one();
        let mut x = GradedE8Element::from_trivector(&e);
        for _ in 0..3 {
            x = g.bracket(&x)?;
        }
        cols.push(x.deg1);
    }
    Ok(cols)
}

/// The restricted cube `t^[3]` of a degree-1 element, as a pair
/// `(A, c)` with `A` normalized to `(9,9)` entry zero.
///
/// The pair is the unique degree-0 element acting on `∧³V` as `(ad t)³`.
pub fn restricted_cube<F: Field>(t: &Trivector<F>) -> Result<(DenseMatrix<F>, F::Elem)> {
    let f = &t.field;
    if f.characteristic() != 3 {
        return Err(Error::NotCharThree);
    }
    let d = ad_cubed_on_deg1(t)?;
    let tr = triples();
    let mut a = DenseMatrix::zeros(f.clone(), DIM, DIM);
    // off-diagonal entries: E_ab sends [b j k] to [a j k]
    for r in 0..DIM {
        for s in 0..DIM {
            if r == s {
                continue;
            }
            let others: Vec<usize> = (0..DIM).filter(|&x| x != r && x != s).take(2).collect();
            let (j, k) = (others[0], others[1]);
            let (src, sneg) = sort_triple([s, j, k]).unwrap();
            let (dst, dneg) = sort_triple([r, j, k]).unwrap();
            let mut v = d[triple_index(src[0], src[1], src[2])][triple_index(dst[0], dst[1], dst[2])].clone();
            if sneg != dneg {
                v = f.neg(&v);
            }
            a[(r, s)] = v;
        }
    }
    // diagonal entries and c: [ijk] is scaled by a_ii + a_jj + a_kk + c·w(ijk)
    let mut sys = DenseMatrix::zeros(f.clone(), NTRIPLES, DIM + 1);
    let mut rhs = Vec::with_capacity(NTRIPLES);
    for (n, t3) in tr.iter().enumerate() {
        for &i in t3 {
            sys[(n, i)] = f.one();
        }
        sys[(n, DIM)] = f.from_i64(x0_weight(t3));
        rhs.push(d[n][n].clone());
    }
    let sol = sys.solve(&rhs).ok_or(Error::NoSolution)?;
    for i in 0..DIM {
        a[(i, i)] = sol[i].clone();
    }
    let c = sol[DIM].clone();
    if !f.is_zero(&trace(&a)) {
        return Err(Error::NoSolution);
    }
    // the whole derivation action must agree with D
    for n in 0..NTRIPLES {
        let mut e = vec![f.zero(); NTRIPLES];
        e[n] = f.one();
        if act_upper(f, &a, &c, &e) != d[n] {
            return Err(Error::NoSolution);
        }
    }
    let l = a[(DIM - 1, DIM - 1)].clone();
    for i in 0..DIM {
        a[(i, i)] = f.sub(&a[(i, i)], &l);
    }
    Ok((a, c))
}

/// `t^[e]` for `e ∈ {3, 9, 27}`, as the 9×9 representative with `(9,9)`
/// entry zero.
pub fn restricted_power<F: Field>(t: &Trivector<F>, e: u32) -> Result<DenseMatrix<F>> {
    let k = match e {
        3 => 1,
        9 => 3,
        27 => 9,
        _ => return Err(Error::Invalid(format!("exponent must be 3, 9 or 27, got {e}"))),
    };
    let (a, c) = restricted_cube(t)?;
    if !t.field.is_zero(&c) {
        return Err(Error::Invalid("restricted cube has a nonzero X0 part".into()));
    }
    Ok(normalize_mod_scalars(&a.pow(k)))
}

/// Representative with `(9,9)` entry zero.
pub fn normalize_mod_scalars<F: Field>(m: &DenseMatrix<F>) -> DenseMatrix<F> {
    let f = &m.field;
    let n = m.rows() - 1;
    let l = m[(n, n)].clone();
    let mut out = m.clone();
    for i in 0..=n {
        out[(i, i)] = f.sub(&out[(i, i)], &l);
    }
    out
}

pub fn is_scalar<F: Field>(m: &DenseMatrix<F>) -> bool {
    normalize_mod_scalars(m).is_zero()
}

/// Checks `γ^[27] = c24·γ^[3] - c18·γ^[9]` modulo scalars.
pub fn weierstrass_cube_identity<F: Field>(c: &CurveCoeffs<F>) -> Result<bool> {
    let a = restricted_power(&build_gamma_c(c), 3)?;
    let a3 = a.pow(3);
    let a9 = a3.pow(3);
    let rhs = a.scale(&c.get(24)).sub(&a3.scale(&c.get(18)));
    Ok(is_scalar(&a9.sub(&rhs)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeRank {
    pub lie: u8,
    pub coeff: u8,
}

pub fn is_weierstrass<F: Field>(c: &CurveCoeffs<F>) -> bool {
    [3, 6, 9, 15].iter().all(|&k| c.field.is_zero(&c.get(k)))
}

/// 3-rank of the Jacobian of a smooth Weierstrass curve in characteristic 3,
/// read from semisimplicity of restricted powers and from the coefficients.
pub fn three_rank<F: Field>(c: &CurveCoeffs<F>) -> Result<ThreeRank> {
    let f = &c.field;
    if f.characteristic() != 3 {
        return Err(Error::NotCharThree);
    }
    if !is_weierstrass(c) {
        return Err(Error::Invalid("curve must have c3 = c6 = c9 = c15 = 0".into()));
    }
    if !curve_is_smooth(c, SMOOTHNESS_BOUND)? {
        return Err(Error::SingularCurve);
    }
    let a = restricted_power(&build_gamma_c(c), 3)?;
    let lie = if a.is_semisimple() {
        2
    } else if a.pow(3).is_semisimple() {
        1
    } else {
        0
    };
    let coeff = if !f.is_zero(&c.get(24)) {
        2
    } else if !f.is_zero(&c.get(18)) {
        1
    } else {
        0
    };
    if lie != coeff {
        return Err(Error::Disagreement(format!("lie side {lie}, coefficient side {coeff}")));
    }
    Ok(ThreeRank { lie, coeff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn jacobi<F: Field>(a: &GradedE8Element<F>, b: &GradedE8Element<F>, c: &GradedE8Element<F>) -> GradedE8Element<F> {
        let x = a.bracket(&b.bracket(c).unwrap()).unwrap();
        let y = b.bracket(&c.bracket(a).unwrap()).unwrap();
        let z = c.bracket(&a.bracket(b).unwrap()).unwrap();
        x.add(&y).add(&z)
    }

    fn check_jacobi<F: Field>(field: F, n: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n {
            let a = GradedE8Element::random(field.clone(), &mut rng);
            let b = GradedE8Element::random(field.clone(), &mut rng);
            let c = GradedE8Element::random(field.clone(), &mut rng);
            assert!(jacobi(&a, &b, &c).is_zero());
            assert!(a.bracket(&a).unwrap().is_zero());
            assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().scale(&field.from_i64(-1)));
        }
    }

    #[test]
    fn jacobi_f3() {
        check_jacobi(Gf::prime(3).unwrap(), 10, 1);
    }

    #[test]
    fn jacobi_f7_f11() {
        check_jacobi(Gf::prime(7).unwrap(), 5, 2);
        check_jacobi(Gf::prime(11).unwrap(), 5, 3);
    }

    #[test]
    fn jacobi_rationals() {
        check_jacobi(Rationals, 2, 4);
    }

    #[test]
    fn grading() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let parts = |x: &GradedE8Element<Gf>| -> Vec<GradedE8Element<Gf>> {
            let z = f.zero();
            let zv = vec![z; NTRIPLES];
            vec![
                GradedE8Element::new(x.b.clone(), x.c.clone(), zv.clone(), zv.clone()).unwrap(),
                GradedE8Element::new(DenseMatrix::zeros(f.clone(), 9, 9), f.zero(), x.deg1.clone(), zv.clone()).unwrap(),
                GradedE8Element::new(DenseMatrix::zeros(f.clone(), 9, 9), f.zero(), zv, x.deg2.clone()).unwrap(),
            ]
        };
        let a = parts(&GradedE8Element::random(f.clone(), &mut rng));
        let b = parts(&GradedE8Element::random(f.clone(), &mut rng));
        for i in 0..3 {
            for j in 0..3 {
                let s = a[i].bracket(&b[j]).unwrap().support();
                for (d, nonzero) in s.iter().enumerate() {
                    assert_eq!(*nonzero, d == (i + j) % 3, "degrees {i},{j}");
                }
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        for p in [3, 7] {
            let f = Gf::prime(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            let x = GradedE8Element::random(f.clone(), &mut rng);
            assert_eq!(GradedE8Element::from_coords(f, &x.coords()).unwrap(), x);
        }
    }

    #[test]
    fn deg1_action_is_faithful() {
        // every nonzero degree-0 basis vector acts nontrivially on ∧³
        let f = Gf::prime(3).unwrap();
        let mut rows = Vec::new();
        for k in 0..DEG0_DIM {
            let x = GradedE8Element::basis(f.clone(), k);
            let mut col = Vec::new();
            for n in 0..NTRIPLES {
                let mut e = vec![f.zero(); NTRIPLES];
                e[n] = f.one();
                col.extend(act_upper(&f, &x.b, &x.c, &e));
            }
            rows.push(col);
        }
        assert_eq!(DenseMatrix::from_rows(f, &rows).rank(), DEG0_DIM);
    }

    #[test]
    fn restricted_cube_matches_ad_cubed() {
        let f = Gf::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = CurveCoeffs::random(f.clone(), &mut rng);
        let g = build_gamma_c(&c);
        let (a, x0) = restricted_cube(&g).unwrap();
        assert!(f.is_zero(&x0));
        let gamma = GradedE8Element::from_trivector(&g);
        let cube = GradedE8Element::from_deg0(a).unwrap();
        let ad = gamma.ad_matrix().unwrap();
        let ad3 = ad.mul(&ad).mul(&ad);
        let adc = cube.ad_matrix().unwrap();
        for r in DEG0_DIM..E8_DIM {
            for s in DEG0_DIM..E8_DIM {
                assert_eq!(ad3[(r, s)], adc[(r, s)]);
            }
        }
    }

    #[test]
    fn ninth_power_matches_ad_ninth() {
        let f = Gf::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = CurveCoeffs::random(f.clone(), &mut rng);
        let g = build_gamma_c(&c);
        let a9 = restricted_power(&g, 9).unwrap();
        let gamma = GradedE8Element::from_trivector(&g);
        let x9 = GradedE8Element::from_deg0(a9).unwrap();
        for n in 0..NTRIPLES {
            let mut e = Trivector::zero(f.clone());
            e.dense_mut()[n] = f.one();
            let mut x = GradedE8Element::from_trivector(&e);
            for _ in 0..9 {
                x = gamma.bracket(&x).unwrap();
            }
            assert_eq!(x, x9.bracket(&GradedE8Element::from_trivector(&e)).unwrap());
        }
    }

    #[test]
    fn not_char_three() {
        let f = Gf::prime(7).unwrap();
        let g = build_gamma_c(&CurveCoeffs::zero(f));
        assert!(matches!(restricted_power(&g, 3), Err(Error::NotCharThree)));
    }

    #[test]
    fn gamma_zero_powers_span_two() {
        let f = Gf::prime(3).unwrap();
        let g = build_gamma_c(&CurveCoeffs::zero(f.clone()));
        let a = restricted_power(&g, 3).unwrap();
        let b = restricted_power(&g, 9).unwrap();
        let flat = |m: &DenseMatrix<Gf>| (0..81).map(|k| m[(k / 9, k % 9)]).collect::<Vec<_>>();
        assert_eq!(DenseMatrix::from_rows(f, &[flat(&a), flat(&b)]).rank(), 2);
    }

    fn weierstrass(f: &Gf, rng: &mut ChaCha8Rng) -> CurveCoeffs<Gf> {
        loop {
            let mut c = CurveCoeffs::random(f.clone(), rng);
            for k in [3, 6, 9, 15] {
                c.set(k, f.zero()).unwrap();
            }
            if curve_is_smooth(&c, SMOOTHNESS_BOUND).unwrap() {
                return c;
            }
        }
    }

    #[test]
    fn cube_identity_f3_f9() {
        for (p, k) in [(3, 1), (3, 2)] {
            let f = Gf::new(p, k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..3 {
                let c = weierstrass(&f, &mut rng);
                assert!(weierstrass_cube_identity(&c).unwrap());
            }
        }
    }

    #[test]
    fn three_rank_examples() {
        let f = Gf::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut seen = [false; 3];
        for _ in 0..40 {
            let mut c = weierstrass(&f, &mut rng);
            if rng.gen_bool(0.5) {
                c.set(24, f.zero()).unwrap();
            }
            if !curve_is_smooth(&c, SMOOTHNESS_BOUND).unwrap() {
                continue;
            }
            let r = three_rank(&c).unwrap();
            seen[r.lie as usize] = true;
        }
        assert!(seen[2] && seen[1]);

        let f9 = Gf::new(3, 2).unwrap();
        let c = CurveCoeffs::zero(f9.clone()).with(30, f9.one());
        assert!(curve_is_smooth(&c, SMOOTHNESS_BOUND).unwrap());
        assert_eq!(three_rank(&c).unwrap(), ThreeRank { lie: 0, coeff: 0 });
    }

    #[test]
    fn semisimplicity_ignores_scalars() {
        let f = Gf::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = weierstrass(&f, &mut rng);
        let a = restricted_power(&build_gamma_c(&c), 3).unwrap();
        for _ in 0..10 {
            let l = f.random_elem(&mut rng);
            let shifted = a.add(&DenseMatrix::identity(f.clone(), 9).scale(&l));
            assert_eq!(shifted.is_semisimple(), a.is_semisimple());
            assert_eq!(shifted.pow(3).is_semisimple(), a.pow(3).is_semisimple());
        }
    }
}
