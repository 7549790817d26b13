//! Exact fields: the rationals and finite fields `GF(p^k)`.

mod gf;
pub mod primes;
mod rational;
mod spec;

pub use gf::{Embedding, Gf};
pub use rational::Rationals;
pub use spec::{AnyField, FieldSpec};

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt::Debug;
use std::hash::Hash;

/// A field with canonical element representatives.
///
/// The field value is a cheap handle; elements carry no reference to it.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    fn spec(&self) -> FieldSpec;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// `a + b*c`
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(b, c))
    }

    /// The field as a finite field, if it is one.
    fn as_gf(&self) -> Option<&Gf> {
        None
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random_elem(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

/// A finite field whose elements can be enumerated by index.
pub trait FiniteField: Field {
    fn size(&self) -> u64;
    fn elem_at(&self, i: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;
}
