//! Top Chern class of the rank-31 bundle in the Borel presentation.
//!
//! Reduction uses the Gröbner basis `{h_k(x_k, …, x_9) : k = 1..9}` of the
//! ideal generated by positive-degree symmetric polynomials (lex order with
//! `x_1 > … > x_9`, leading terms `x_k^k`). Normal monomials have `a_k < k`.

use super::forbidden_monomials;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const N: usize = 9;

type Mono = [u8; N];
pub type Poly = BTreeMap<Mono, BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClass {
    pub coefficient: BigInt,
    pub exponents: [u32; N],
    pub degree: u32,
}

/// Monomials of `h_k(x_k, …, x_9)` other than `x_k^k`, for `k = 1..9`.
fn tails() -> &'static [Vec<Mono>] {
    static T: OnceLock<Vec<Vec<Mono>>> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = vec![Vec::new()];
        for k in 1..=N {
            let mut acc = Vec::new();
            let mut cur = [0u8; N];
            fill(&mut cur, k - 1, k as u8, &mut acc);
            acc.retain(|m| m[k - 1] != k as u8);
            out.push(acc);
        }
        out
    })
}

fn fill(cur: &mut Mono, pos: usize, left: u8, acc: &mut Vec<Mono>) {
    if pos == N - 1 {
        cur[pos] = left;
        acc.push(*cur);
        cur[pos] = 0;
        return;
    }
    for e in 0..=left {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, acc);
    }
    cur[pos] = 0;
}

/// Normal form modulo the symmetric ideal.
pub fn reduce_mod_symmetric(p: &Poly) -> Poly {
    let mut work = p.clone();
    let mut out = Poly::new();
    while let Some((m, c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        let Some(k) = (1..=N).find(|&k| m[k - 1] as usize >= k) else {
            out.insert(m, c);
            continue;
        };
        let mut rest = m;
        rest[k - 1] -= k as u8;
        for t in &tails()[k] {
            let mut nm = rest;
            for i in 0..N {
                nm[i] += t[i];
            }
            let e = work.entry(nm).or_insert_with(BigInt::zero);
            *e -= &c;
        }
    }
    out
}

fn mul_linear(p: &Poly, vars: &[usize]) -> Poly {
    let mut out = Poly::new();
    for (m, c) in p {
        for &v in vars {
            let mut nm = *m;
            nm[v] += 1;
            *out.entry(nm).or_insert_with(BigInt::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Product of `x_i + x_j + x_k` over the 31 forbidden monomials, reduced.
pub fn chern_product() -> Poly {
    let mut p = Poly::new();
    p.insert([0; N], BigInt::one());
    for m in forbidden_monomials() {
        p = reduce_mod_symmetric(&mul_linear(&p, &[m[0] - 1, m[1] - 1, m[2] - 1]));
    }
    p
}

/// The reduced top Chern class as a single term.
pub fn chern_top_class() -> ChernClass {
    let p = chern_product();
    assert_eq!(p.len(), 1, "top Chern class did not reduce to one monomial");
    let (m, c) = p.into_iter().next().unwrap();
    ChernClass {
        coefficient: c,
        exponents: m.map(u32::from),
        degree: m.iter().map(|&e| e as u32).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(m: Mono) -> Poly {
        let mut p = Poly::new();
        p.insert(m, BigInt::one());
        p
    }

    #[test]
    fn elementary_symmetric_reduces_to_zero() {
        let mut p = Poly::new();
        for i in 0..N {
            let mut m = [0; N];
            m[i] = 1;
            p.insert(m, BigInt::one());
        }
        assert!(reduce_mod_symmetric(&p).is_empty());
        // e2 as well
        let mut q = Poly::new();
        for i in 0..N {
            for j in i + 1..N {
                let mut m = [0; N];
                m[i] = 1;
                m[j] = 1;
                q.insert(m, BigInt::one());
            }
        }
        assert!(reduce_mod_symmetric(&q).is_empty());
    }

    #[test]
    fn normal_monomials_untouched() {
        let m = [0, 1, 2, 3, 4, 5, 6, 7, 8];
        assert_eq!(reduce_mod_symmetric(&single(m)), single(m));
        assert_eq!(tails()[1].len(), 8);
    }

    #[test]
    fn top_class_is_81() {
        let c = chern_top_class();
        assert_eq!(c.degree, 31);
        assert_eq!(c.coefficient, BigInt::from(81));
        assert_eq!(c.exponents, [0, 1, 1, 3, 3, 3, 6, 6, 8]);
    }
}
