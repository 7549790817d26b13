//! Common zeros of small polynomial systems over finite field extensions.

use super::{resultant, MultiPoly};
use crate::error::{Error, Result};
use crate::field::{Field, Gf};

/// Largest number of points a brute-force fallback may visit.
const BRUTE_LIMIT: u64 = 1 << 24;

/// A common zero, stored in the smallest extension `GF(q^degree)` containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSolution {
    pub degree: u32,
    pub field: Gf,
    pub coords: Vec<u64>,
}

/// All common zeros of `system` (at most 3 variables) over `GF(q^d)` for
/// every `d ≤ max_ext_degree`, each reported once in its minimal field.
pub fn singular_point_search<F: Field>(
    system: &[MultiPoly<F>],
    max_ext_degree: u32,
) -> Result<Vec<PointSolution>> {
    let Some(first) = system.first() else {
        return Err(Error::Invalid("empty system".into()));
    };
    let base = first
        .field
        .as_gf()
        .ok_or_else(|| Error::UnsupportedField("search over the rationals".into()))?
        .clone();
    let nvars = first.nvars();
    if nvars > 3 {
        return Err(Error::Invalid("at most 3 variables are supported".into()));
    }
    if max_ext_degree == 0 {
        return Err(Error::Invalid("max_ext_degree must be >= 1".into()));
    }
    let sys: Vec<MultiPoly<Gf>> = system
        .iter()
        .map(|p| p.map_field(&base, |c| base.parse_elem(&p.field.format_elem(c)).expect("same field")))
        .collect();
    let k = base.degree();
    let mut out = Vec::new();
    for d in 1..=max_ext_degree {
        let (big, emb) = base.extension(d)?;
        let lifted: Vec<MultiPoly<Gf>> = sys.iter().map(|p| p.map_field(&big, |c| emb.apply(*c))).collect();
        let free: Vec<usize> = (0..nvars).collect();
        for sol in solve(&big, lifted, &free)? {
            let mut coords = vec![0u64; nvars];
            for (i, v) in sol {
                coords[i] = v;
            }
            let minimal = (1..=d)
                .filter(|e| d % e == 0)
                .find(|&e| coords.iter().all(|&c| big.in_subfield(c, k * e)))
                .unwrap_or(d);
            if minimal == d {
                out.push(PointSolution { degree: d, field: big.clone(), coords });
            }
        }
    }
    Ok(out)
}

type Partial = Vec<(usize, u64)>;

fn solve(f: &Gf, polys: Vec<MultiPoly<Gf>>, free: &[usize]) -> Result<Vec<Partial>> {
    let mut live = Vec::new();
    for p in polys {
        match p.as_constant() {
            Some(c) if c == 0 => {}
            Some(_) => return Ok(Vec::new()),
            None => live.push(p),
        }
    }
    if free.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    if live.is_empty() {
        return enumerate_all(f, free);
    }
    if free.len() == 1 {
        let v = free[0];
        let g = live
            .iter()
            .map(|p| p.to_uni(v).expect("single free variable"))
            .reduce(|a, b| a.gcd(&b))
            .unwrap();
        return Ok(g.roots().into_iter().map(|r| vec![(v, r)]).collect());
    }
    let last = *free.last().unwrap();
    let rest = &free[..free.len() - 1];
    let candidates = eliminate(&live, free).map_or_else(|| brute_values(f), Ok)?;
    let mut out = Vec::new();
    for r in candidates {
        let sub: Vec<MultiPoly<Gf>> = live.iter().map(|p| p.substitute(last, &r)).collect();
        for mut s in solve(f, sub, rest)? {
            s.push((last, r));
            out.push(s);
        }
    }
    Ok(out)
}

/// Candidate values of the last free variable, by a univariate member of the
/// system or a nonzero resultant. `None` when elimination is degenerate.
fn eliminate(live: &[MultiPoly<Gf>], free: &[usize]) -> Option<Vec<u64>> {
    let last = *free.last().unwrap();
    if let Some(u) = live.iter().find_map(|p| p.to_uni(last)) {
        return Some(u.roots());
    }
    if free.len() != 2 {
        return None;
    }
    let main = free[0];
    let bivs: Vec<_> = live
        .iter()
        .filter(|p| p.involves(main))
        .filter_map(|p| p.to_bivariate(main, last))
        .collect();
    for i in 0..bivs.len() {
        for j in i + 1..bivs.len() {
            let r = resultant(&bivs[i], &bivs[j]);
            if !r.is_zero() {
                return Some(r.roots());
            }
        }
    }
    None
}

fn brute_values(f: &Gf) -> Result<Vec<u64>> {
    if f.q() > BRUTE_LIMIT {
        return Err(Error::BudgetExceeded(format!("brute force over {}", f.spec())));
    }
    Ok((0..f.q()).collect())
}

fn enumerate_all(f: &Gf, free: &[usize]) -> Result<Vec<Partial>> {
    let total = (f.q() as u128).pow(free.len() as u32);
    if total > BRUTE_LIMIT as u128 {
        return Err(Error::BudgetExceeded("positive-dimensional solution set".into()));
    }
    let mut out = vec![Vec::new()];
    for &v in free {
        let mut next = Vec::new();
        for s in &out {
            for a in 0..f.q() {
                let mut t: Partial = s.clone();
                t.push((v, a));
                next.push(t);
            }
        }
        out = next;
    }
    Ok(out)
}
