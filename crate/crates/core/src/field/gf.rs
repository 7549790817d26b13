//! Finite fields `GF(p^k)` with elements packed as base-`p` integers.
//!
//! An element `a_0 + a_1 y + ... + a_{k-1} y^{k-1}` (with `y` a root of the
//! modulus) is stored as `a_0 + a_1 p + ... + a_{k-1} p^{k-1}`. Prime-field
//! elements therefore keep their usual integer value inside every extension.

use super::primes::{is_prime, mul_mod, pow_mod, prime_factors};
use super::{Field, FieldSpec, FiniteField};
use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

const TABLE_LIMIT: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u64 = 1 << 10;
const MAX_ORDER: u64 = 1 << 62;

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Option<Vec<u32>>,
}

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    pw: Vec<u64>,
    tables: Option<Tables>,
}

#[derive(Clone)]
pub struct Gf(Arc<Inner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

// ---- polynomials over F_p as coefficient vectors (low degree first) ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = pow_mod(f[df], p - 2, p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - df;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, fi, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_mulmod(&r, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_mulmod(&b, &b, f, p);
        }
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic `f` of degree `k` over `F_p`.
fn fp_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // x^{p^i} mod f for i = 0..=k
    let mut frob = vec![fp_rem(&x, f, p)];
    for i in 1..=k {
        let prev = frob[i - 1].clone();
        frob.push(fp_powmod(&prev, p, f, p));
    }
    let minus_x = |mut v: Vec<u64>| {
        v.resize(v.len().max(2), 0);
        v[1] = (v[1] + p - 1) % p;
        trim(&mut v);
        v
    };
    if !minus_x(frob[k].clone()).is_empty() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let h = minus_x(frob[k / r as usize].clone());
        if fp_gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The least monic irreducible of degree `k`, ordering candidates by the
/// integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` of their lower coefficients.
pub(crate) fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let q = p.pow(k);
    for n in 0..q {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut m = n;
        for _ in 0..k {
            f.push(m % p);
            m /= p;
        }
        f.push(1);
        if fp_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Gf {
    /// `GF(p^k)` with the default modulus.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::check_params(p, k)?;
        Self::build(p, k, default_modulus(p, k))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `GF(p^k)` with an explicit monic modulus `c_0, ..., c_k`.
    pub fn with_modulus(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        Self::check_params(p, k)?;
        if modulus.len() != k as usize + 1 || modulus[k as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {k}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if k > 1 && !fp_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let modulus = if k == 1 { vec![0, 1] } else { modulus };
        Self::build(p, k, modulus)
    }

    fn check_params(p: u64, k: u32) -> Result<()> {
        if !is_prime(p) || p >= 1 << 61 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        match p.checked_pow(k) {
            Some(q) if q < MAX_ORDER => Ok(()),
            _ => Err(Error::InvalidField(format!("GF({p}^{k}) is too large"))),
        }
    }

    fn build(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = p.pow(k);
        let pw = (0..=k).map(|i| p.pow(i)).collect();
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            pw,
            tables: None,
        };
        if k > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Gf(Arc::new(inner)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn digits(&self, a: u64) -> Vec<u64> {
        digits(&self.0, a)
    }

    pub fn from_digits(&self, d: &[u64]) -> u64 {
        d.iter()
            .zip(&self.0.pw)
            .map(|(&x, &w)| (x % self.0.p) * w)
            .sum()
    }

    /// `a^(p^times)`
    pub fn frobenius(&self, a: u64, times: u32) -> u64 {
        let mut r = a;
        for _ in 0..times {
            r = self.pow(&r, self.0.p);
        }
        r
    }

    /// Whether `a` lies in the subfield of order `p^e`.
    pub fn in_subfield(&self, a: u64, e: u32) -> bool {
        self.frobenius(a, e) == a
    }

    /// A primitive cube root of unity, if the field has one.
    pub fn cube_root_of_unity(&self) -> Option<u64> {
        if (self.0.q - 1) % 3 != 0 {
            return None;
        }
        (2..self.0.q)
            .map(|g| self.pow(&g, (self.0.q - 1) / 3))
            .find(|&z| z != 1)
    }

    /// `GF(q^d)` together with an embedding of `self`.
    pub fn extension(&self, d: u32) -> Result<(Gf, Embedding)> {
        let big = Gf::new(self.0.p, self.0.k * d)?;
        let emb = Embedding::new(self, &big)?;
        Ok((big, emb))
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.0;
        let da = digits(inner, a);
        let db = digits(inner, b);
        let r = fp_mulmod(&da, &db, &inner.modulus, inner.p);
        self.from_digits(&r)
    }
}

fn digits(inner: &Inner, mut a: u64) -> Vec<u64> {
    let mut d = Vec::with_capacity(inner.k as usize);
    for _ in 0..inner.k {
        d.push(a % inner.p);
        a /= inner.p;
    }
    d
}

fn build_tables(inner: &Inner) -> Tables {
    let p = inner.p;
    let q = inner.q;
    let slow = |a: u64, b: u64| -> u64 {
        let r = fp_mulmod(&digits(inner, a), &digits(inner, b), &inner.modulus, p);
        r.iter().zip(&inner.pw).map(|(&x, &w)| x * w).sum()
    };
    let slow_pow = |a: u64, mut e: u64| -> u64 {
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = slow(r, b);
            }
            b = slow(b, b);
            e >>= 1;
        }
        r
    };
    let n = q - 1;
    let factors = prime_factors(n);
    let gen = (2..q)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, n / r) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for i in 0..n as usize {
        exp[i] = x as u32;
        exp[i + n as usize] = x as u32;
        log[x as usize] = i as u32;
        x = slow(x, gen);
    }
    let add = if p != 2 && q <= ADD_TABLE_LIMIT {
        let mut t = vec![0u32; (q * q) as usize];
        for a in 0..q {
            let da = digits(inner, a);
            for b in 0..q {
                let db = digits(inner, b);
                let s: u64 = (0..inner.k as usize)
                    .map(|i| ((da[i] + db[i]) % p) * inner.pw[i])
                    .sum();
                t[(a * q + b) as usize] = s as u32;
            }
        }
        Some(t)
    } else {
        None
    };
    Tables { log, exp, add }
}

impl Field for Gf {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }

    #[inline]
    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        let p = self.0.p as i128;
        (((n as i128) % p + p) % p) as u64
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let inner = &*self.0;
        if inner.p == 2 {
            return a ^ b;
        }
        if inner.k == 1 {
            let s = a + b;
            return if s >= inner.p { s - inner.p } else { s };
        }
        if let Some(Tables { add: Some(t), .. }) = &inner.tables {
            return t[(a * inner.q + b) as usize] as u64;
        }
        let (mut x, mut y, mut r) = (*a, *b, 0u64);
        for i in 0..inner.k as usize {
            let s = (x % inner.p + y % inner.p) % inner.p;
            r += s * inner.pw[i];
            x /= inner.p;
            y /= inner.p;
        }
        r
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        let inner = &*self.0;
        if inner.p == 2 {
            return *a;
        }
        if inner.k == 1 {
            return if *a == 0 { 0 } else { inner.p - a };
        }
        let (mut x, mut r) = (*a, 0u64);
        for i in 0..inner.k as usize {
            let d = x % inner.p;
            if d != 0 {
                r += (inner.p - d) * inner.pw[i];
            }
            x /= inner.p;
        }
        r
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        let inner = &*self.0;
        if inner.k == 1 && inner.p != 2 {
            return if a >= b { a - b } else { a + inner.p - b };
        }
        self.add(a, &self.neg(b))
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        let inner = &*self.0;
        if *a == 0 || *b == 0 {
            return 0;
        }
        if inner.k == 1 {
            return mul_mod(*a, *b, inner.p);
        }
        if let Some(t) = &inner.tables {
            return t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize] as u64;
        }
        self.slow_mul(*a, *b)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let inner = &*self.0;
        if inner.k == 1 {
            return Some(pow_mod(*a, inner.p - 2, inner.p));
        }
        if let Some(t) = &inner.tables {
            let n = inner.q - 1;
            let l = t.log[*a as usize] as u64;
            return Some(t.exp[((n - l) % n) as usize] as u64);
        }
        Some(self.pow(a, inner.q - 2))
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn order(&self) -> Option<u64> {
        Some(self.0.q)
    }

    fn spec(&self) -> FieldSpec {
        if self.0.k == 1 {
            FieldSpec::Prime { p: self.0.p }
        } else {
            FieldSpec::Extension {
                p: self.0.p,
                k: self.0.k,
                modulus: Some(self.0.modulus.clone()),
            }
        }
    }

    fn format_elem(&self, a: &u64) -> String {
        if self.0.k == 1 {
            a.to_string()
        } else {
            self.digits(*a)
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid element {s:?} of {}", self.spec()));
        if s.contains(',') {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() > self.0.k as usize {
                return Err(bad());
            }
            let mut d = Vec::with_capacity(parts.len());
            for part in parts {
                let v: i64 = part.trim().parse().map_err(|_| bad())?;
                d.push(self.from_i64(v));
            }
            return Ok(self.from_digits(&d));
        }
        if let Some((n, m)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let m: i64 = m.trim().parse().map_err(|_| bad())?;
            return self.div(&self.from_i64(n), &self.from_i64(m));
        }
        let n: i128 = s.parse().map_err(|_| bad())?;
        let p = self.0.p as i128;
        Ok(((n % p + p) % p) as u64)
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0.q)
    }

    fn as_gf(&self) -> Option<&Gf> {
        Some(self)
    }
}

impl FiniteField for Gf {
    fn size(&self) -> u64 {
        self.0.q
    }

    #[inline]
    fn elem_at(&self, i: u64) -> u64 {
        i
    }

    #[inline]
    fn index_of(&self, a: &u64) -> u64 {
        *a
    }
}

/// A field embedding `GF(p^k) -> GF(p^{kd})`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Gf,
    pub target: Gf,
    images: Vec<u64>,
}

impl Embedding {
    pub fn identity(field: &Gf) -> Self {
        let images = (0..field.degree()).map(|i| field.pow(&field.p(), i as u64)).collect::<Vec<_>>();
        let images = if field.degree() == 1 { vec![1] } else { images };
        Self {
            source: field.clone(),
            target: field.clone(),
            images,
        }
    }

    pub fn new(source: &Gf, target: &Gf) -> Result<Self> {
        if source.p() != target.p() || target.degree() % source.degree() != 0 {
            return Err(Error::InvalidField(format!(
                "{} does not embed in {}",
                source.spec(),
                target.spec()
            )));
        }
        let k = source.degree() as usize;
        let images = if k == 1 {
            vec![1]
        } else {
            let m = crate::poly::UniPoly::new(
                target.clone(),
                source.modulus().iter().map(|&c| target.from_i64(c as i64)).collect(),
            );
            let beta = *m
                .roots()
                .first()
                .ok_or_else(|| Error::InvalidField("modulus has no root".into()))?;
            let mut v = Vec::with_capacity(k);
            let mut x = 1u64;
            for _ in 0..k {
                v.push(x);
                x = target.mul(&x, &beta);
            }
            v
        };
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn apply(&self, a: u64) -> u64 {
        if self.images.len() == 1 {
            return a;
        }
        let d = self.source.digits(a);
        let t = &self.target;
        d.iter()
            .zip(&self.images)
            .fold(0, |acc, (&c, img)| t.add(&acc, &t.mul(&c, img)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn axioms(f: &Gf) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a = f.random_elem(&mut rng);
            let b = f.random_elem(&mut rng);
            let c = f.random_elem(&mut rng);
            assert_eq!(f.sub(&f.add(&a, &b), &b), a);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            if a != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            assert_eq!(f.pow(&a, f.q()), a);
        }
    }

    #[test]
    fn field_axioms() {
        for (p, k) in [(2, 1), (7, 1), (2, 2), (2, 4), (3, 2), (5, 3), (2, 17), (3, 11), (1_000_003, 1), (101, 2)] {
            axioms(&Gf::new(p, k).unwrap());
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(Gf::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Gf::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Gf::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Gf::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(Gf::with_modulus(2, 2, vec![1, 0, 1]).is_err());
        assert!(Gf::with_modulus(2, 2, vec![1, 1, 1]).is_ok());
        assert!(Gf::new(4, 1).is_err());
    }

    #[test]
    fn table_and_slow_agree() {
        let f = Gf::new(3, 4).unwrap();
        for a in 0..f.q() {
            for b in (0..f.q()).step_by(7) {
                assert_eq!(f.mul(&a, &b), f.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn embedding_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, k, d) in [(2, 2, 3), (3, 2, 2), (2, 3, 2), (5, 1, 3)] {
            let f = Gf::new(p, k).unwrap();
            let (big, e) = f.extension(d).unwrap();
            assert_eq!(big.q(), f.q().pow(d));
            for _ in 0..300 {
                let a = f.random_elem(&mut rng);
                let b = f.random_elem(&mut rng);
                assert_eq!(e.apply(f.mul(&a, &b)), big.mul(&e.apply(a), &e.apply(b)));
                assert_eq!(e.apply(f.add(&a, &b)), big.add(&e.apply(a), &e.apply(b)));
                assert!(big.in_subfield(e.apply(a), k));
            }
        }
    }

    #[test]
    fn parse_format_round_trip() {
        let f = Gf::new(3, 2).unwrap();
        for a in 0..9 {
            assert_eq!(f.parse_elem(&f.format_elem(&a)).unwrap(), a);
        }
        assert_eq!(f.parse_elem("1").unwrap(), 1);
        assert_eq!(f.parse_elem("-1").unwrap(), 2);
        let g = Gf::prime(7).unwrap();
        assert_eq!(g.parse_elem("1/2").unwrap(), 4);
    }

    #[test]
    fn cube_roots() {
        assert!(Gf::prime(5).unwrap().cube_root_of_unity().is_none());
        let z = Gf::prime(7).unwrap().cube_root_of_unity().unwrap();
        assert!(z == 2 || z == 4);
    }
}
