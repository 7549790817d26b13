use super::UniPoly;
use crate::field::Field;
use std::collections::BTreeMap;

/// Sparse multivariate polynomial keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<F: Field> {
    pub field: F,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Self { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let one = field.one();
        let mut p = Self::zero(field, nvars);
        p.add_term(e, one);
        p
    }

    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c * x^e`, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Vec<u32>, c: F::Elem) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if self.field.is_zero(&c) {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = f.add(v, &c);
                if f.is_zero(v) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.degree_in(i) > 0
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::from_terms(f.clone(), self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::from_terms(f.clone(), self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f.mul(c, s))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let mut r = Self::zero(f.clone(), self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, f.mul(c1, c2));
            }
        }
        r
    }

    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.field;
        let mut r = Self::zero(f.clone(), self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            r.add_term(e2, f.mul(c, &f.from_i64(e[i] as i64)));
        }
        r
    }

    pub fn eval(&self, x: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(xi, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Replaces variable `i` by the constant `v` (the variable count is kept).
    pub fn substitute(&self, i: usize, v: &F::Elem) -> Self {
        let f = &self.field;
        let mut r = Self::zero(f.clone(), self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] = 0;
            r.add_term(e2, f.mul(c, &f.pow(v, e[i] as u64)));
        }
        r
    }

    /// Coefficient-wise image under a ring map into another field.
    pub fn map_field<G: Field>(&self, g: &G, phi: impl Fn(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        MultiPoly::from_terms(g.clone(), self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), phi(c))))
    }

    /// View as a univariate polynomial in variable `i`; other variables must be absent.
    pub fn to_uni(&self, i: usize) -> Option<UniPoly<F>> {
        let f = &self.field;
        let mut c = vec![f.zero(); self.degree_in(i) as usize + 1];
        for (e, v) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            c[e[i] as usize] = v.clone();
        }
        Some(UniPoly::new(f.clone(), c))
    }

    /// Coefficients in variable `main` as univariate polynomials in variable `param`.
    /// Returns `None` if any third variable occurs.
    pub fn to_bivariate(&self, main: usize, param: usize) -> Option<Vec<UniPoly<F>>> {
        let f = &self.field;
        let dm = self.degree_in(main) as usize;
        let dp = self.degree_in(param) as usize;
        let mut grid = vec![vec![f.zero(); dp + 1]; dm + 1];
        for (e, v) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != main && j != param && k > 0) {
                return None;
            }
            grid[e[main] as usize][e[param] as usize] = v.clone();
        }
        Some(grid.into_iter().map(|row| UniPoly::new(f.clone(), row)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    #[test]
    fn derivative_product_rule() {
        let f = Gf::prime(13).unwrap();
        let x = MultiPoly::var(f.clone(), 2, 0);
        let z = MultiPoly::var(f.clone(), 2, 1);
        let a = x.mul(&x).add(&z.mul(&x).scale(&5));
        let b = z.mul(&z).mul(&z).add(&x);
        let lhs = a.mul(&b).derivative(0);
        let rhs = a.derivative(0).mul(&b).add(&a.mul(&b.derivative(0)));
        assert_eq!(lhs, rhs);
        assert_eq!(a.eval(&[2, 3]), (4 + 5 * 6) % 13);
    }
}
