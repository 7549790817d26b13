//! Field descriptors and their textual grammar.

use super::primes::{checked_pow, is_prime};
use super::{Field, Gf, Rationals};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// `Q`, `GF(p)`, `GF(p^k)` or `GF(p^k;mod=c0,...,ck)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
    Extension { p: u64, k: u32, modulus: Option<Vec<u64>> },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
            FieldSpec::Extension { p, k, modulus: None } => write!(f, "GF({p}^{k})"),
            FieldSpec::Extension { p, k, modulus: Some(m) } => {
                let m: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                write!(f, "GF({p}^{k};mod={})", m.join(","))
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid field spec {s:?}"));
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let body = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (size, modulus) = match body.split_once(';') {
            Some((size, m)) => {
                let coeffs = m.trim().strip_prefix("mod=").ok_or_else(bad)?;
                let coeffs: std::result::Result<Vec<u64>, _> =
                    coeffs.split(',').map(|c| c.trim().parse::<u64>()).collect();
                (size, Some(coeffs.map_err(|_| bad())?))
            }
            None => (body, None),
        };
        let (p, k) = match size.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (size.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        if k == 1 && modulus.is_none() {
            // GF(q) for a prime power q means the default modulus
            if let Some((base, k)) = as_prime_power(p) {
                return Ok(FieldSpec::Extension { p: base, k, modulus: None });
            }
            Ok(FieldSpec::Prime { p })
        } else {
            Ok(FieldSpec::Extension { p, k, modulus })
        }
    }
}

/// `(r, k)` with `q = r^k`, `r` prime and `k ≥ 2`.
fn as_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 4 || is_prime(q) {
        return None;
    }
    (2..=q.ilog2()).find_map(|k| {
        let guess = (q as f64).powf(1.0 / k as f64).round() as u64;
        (guess.saturating_sub(1)..=guess + 1)
            .find(|&r| r >= 2 && checked_pow(r, k) == Some(q) && is_prime(r))
            .map(|r| (r, k))
    })
}

impl FieldSpec {
    pub fn build(&self) -> Result<AnyField> {
        Ok(match self {
            FieldSpec::Rationals => AnyField::Q(Rationals),
            FieldSpec::Prime { p } => AnyField::Gf(Gf::prime(*p)?),
            FieldSpec::Extension { p, k, modulus: None } => AnyField::Gf(Gf::new(*p, *k)?),
            FieldSpec::Extension { p, k, modulus: Some(m) } => {
                AnyField::Gf(Gf::with_modulus(*p, *k, m.clone())?)
            }
        })
    }

    /// The finite field of order `q`, with the default modulus.
    pub fn finite(q: u64) -> Result<Gf> {
        if is_prime(q) {
            return Gf::prime(q);
        }
        let (p, k) = as_prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Gf::new(p, k)
    }
}

/// A runtime-selected field.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Q(Rationals),
    Gf(Gf),
}

impl AnyField {
    pub fn parse(s: &str) -> Result<Self> {
        s.parse::<FieldSpec>()?.build()
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyField::Q(q) => q.spec(),
            AnyField::Gf(g) => g.spec(),
        }
    }

    pub fn as_finite(&self) -> Result<&Gf> {
        match self {
            AnyField::Gf(g) => Ok(g),
            AnyField::Q(_) => Err(Error::UnsupportedField("a finite field is required".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        for s in ["Q", "GF(7)", "GF(2^4)", "GF(3^2;mod=2,2,1)"] {
            let spec: FieldSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            spec.build().unwrap();
        }
        assert!("GF(6)".parse::<FieldSpec>().unwrap().build().is_err());
        assert!("GF(2^2;mod=1,0,1)".parse::<FieldSpec>().unwrap().build().is_err());
        assert!("F7".parse::<FieldSpec>().is_err());
        assert_eq!("GF(4)".parse::<FieldSpec>().unwrap().to_string(), "GF(2^2)");
    }

    #[test]
    fn finite_by_order() {
        let f = FieldSpec::finite(16).unwrap();
        assert_eq!((f.p(), f.degree()), (2, 4));
        assert!(FieldSpec::finite(12).is_err());
    }
}
