use crate::field::{Field, Gf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<F: Field> {
    pub field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: F) -> Self {
        let c = vec![field.zero(), field.one()];
        Self::new(field, c)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(f.clone(), (0..n).map(|i| f.add(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(f.clone(), (0..n).map(|i| f.sub(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Self::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(&out[i + j], a, b);
            }
        }
        Self::new(f.clone(), out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let li = f.inv(&d.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(f.clone()), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(&r[top], &li);
            if f.is_zero(&c) {
                continue;
            }
            let shift = top - dd;
            for (i, di) in d.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, di));
            }
            q[shift] = c;
        }
        (Self::new(f.clone(), q), Self::new(f.clone(), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lead()) {
            Some(li) => self.scale(&li),
            None => self.clone(),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field.clone());
        }
        self.mul(o).divrem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self^e mod m`
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut r = Self::constant(self.field.clone(), self.field.one()).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem(m);
            }
        }
        r
    }
}

impl UniPoly<Gf> {
    /// All distinct roots in the coefficient field, sorted.
    pub fn roots(&self) -> Vec<u64> {
        let f = &self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let x = Self::x(f.clone());
        let xq = x.powmod(f.q(), self);
        let g = self.gcd(&xq.sub(&x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&g, &mut out, &mut rng);
        out.sort_unstable();
        out
    }
}

/// Splits a product of distinct monic linear factors.
fn split_linear(g: &UniPoly<Gf>, out: &mut Vec<u64>, rng: &mut ChaCha8Rng) {
    let f = &g.field;
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            let g = g.monic();
            out.push(f.neg(&g.coeff(0)));
            return;
        }
        _ => {}
    }
    let deg = g.degree().unwrap();
    loop {
        let a = f.random_elem(rng);
        let h = if f.p() == 2 {
            // trace map of a*x
            let ax = UniPoly::new(f.clone(), vec![0, a]).rem(g);
            let mut t = ax.clone();
            let mut cur = ax;
            for _ in 1..(f.degree()) {
                cur = cur.mul(&cur).rem(g);
                t = t.add(&cur);
            }
            t
        } else {
            let base = UniPoly::new(f.clone(), vec![a, 1]);
            base.powmod((f.q() - 1) / 2, g)
                .sub(&UniPoly::constant(f.clone(), 1))
        };
        let d = g.gcd(&h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            split_linear(&d, out, rng);
            split_linear(&g.divrem(&d).0, out, rng);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, k) in [(2, 1), (2, 3), (3, 2), (7, 1), (2, 4), (5, 2)] {
            let f = Gf::new(p, k).unwrap();
            for _ in 0..30 {
                let deg = rand::Rng::gen_range(&mut rng, 1..7);
                let c: Vec<u64> = (0..=deg).map(|_| f.random_elem(&mut rng)).collect();
                let poly = UniPoly::new(f.clone(), c);
                if poly.is_zero() {
                    continue;
                }
                let brute: Vec<u64> = (0..f.q()).filter(|a| poly.eval(a) == 0).collect();
                if poly.degree() == Some(0) {
                    assert!(brute.is_empty());
                }
                assert_eq!(poly.roots(), brute);
            }
        }
    }

    #[test]
    fn divrem_identity() {
        let f = Gf::prime(11).unwrap();
        let a = UniPoly::new(f.clone(), vec![3, 0, 5, 7, 1]);
        let b = UniPoly::new(f.clone(), vec![2, 9, 4]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }
}
