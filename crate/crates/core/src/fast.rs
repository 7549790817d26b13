//! Allocation-light linear algebra over `Gf` for enumeration hot paths.

use crate::field::{Field, Gf};

/// `Φ(x)` into a row-major 9×9 buffer.
#[inline]
pub fn phi_into(f: &Gf, sparse: &[(usize, usize, usize, u64)], x: &[u64], m: &mut [u64; 81]) {
    m.fill(0);
    for &(i, j, k, c) in sparse {
        for (a, b, v, neg) in [(j, k, i, false), (i, k, j, true), (i, j, k, false)] {
            if x[v] == 0 {
                continue;
            }
            let mut t = f.mul(&c, &x[v]);
            if neg {
                t = f.neg(&t);
            }
            m[a * 9 + b] = f.add(&m[a * 9 + b], &t);
            m[b * 9 + a] = f.sub(&m[b * 9 + a], &t);
        }
    }
}

/// In-place reduced row echelon form of a `rows × cols` buffer; returns the
/// pivot columns. Stops early once `max_rank` pivots exist beyond which the
/// caller is not interested (pass `usize::MAX` for a full reduction).
pub fn rref(f: &Gf, m: &mut [u64], rows: usize, cols: usize, max_rank: usize) -> Vec<usize> {
    let mut pivots = Vec::with_capacity(rows.min(cols));
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&m[r * cols + c]).unwrap();
        for j in c..cols {
            m[r * cols + j] = f.mul(&m[r * cols + j], &inv);
        }
        for i in 0..rows {
            let factor = m[i * cols + c];
            if i == r || factor == 0 {
                continue;
            }
            for j in c..cols {
                let t = f.mul(&factor, &m[r * cols + j]);
                m[i * cols + j] = f.sub(&m[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
        if pivots.len() > max_rank {
            break;
        }
    }
    pivots
}

/// Rank of a 9×9 matrix, exact when ≤ `cap`, otherwise some value > `cap`.
pub fn rank9(f: &Gf, m: &[u64; 81], cap: usize) -> usize {
    let mut w = *m;
    rref(f, &mut w, 9, 9, cap).len()
}

/// Kernel basis of a `rows × cols` matrix (consumes the buffer).
pub fn kernel(f: &Gf, mut m: Vec<u64>, rows: usize, cols: usize) -> Vec<Vec<u64>> {
    let pivots = rref(f, &mut m, rows, cols, usize::MAX);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&m[i * cols + free]);
        }
        out.push(v);
    }
    out
}

/// Solutions of `A y = b` as a particular solution plus a kernel basis.
pub fn solve_affine(f: &Gf, a: &[u64], b: &[u64], rows: usize, cols: usize) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let w = cols + 1;
    let mut aug = vec![0u64; rows * w];
    for i in 0..rows {
        aug[i * w..i * w + cols].copy_from_slice(&a[i * cols..(i + 1) * cols]);
        aug[i * w + cols] = b[i];
    }
    let pivots = rref(f, &mut aug, rows, w, usize::MAX);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut part = vec![0u64; cols];
    for (i, &p) in pivots.iter().enumerate() {
        part[p] = aug[i * w + cols];
    }
    let mut ker = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&aug[i * w + free]);
        }
        ker.push(v);
    }
    Some((part, ker))
}

/// `Σ c_i v_i`
pub fn combine(f: &Gf, coeffs: &[u64], vecs: &[Vec<u64>], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (c, v) in coeffs.iter().zip(vecs) {
        if *c == 0 {
            continue;
        }
        for i in 0..n {
            out[i] = f.mul_add(&out[i], c, &v[i]);
        }
    }
    out
}

pub fn mat_vec9(f: &Gf, m: &[u64; 81], v: &[u64]) -> [u64; 9] {
    let mut out = [0u64; 9];
    for a in 0..9 {
        let mut s = 0;
        for b in 0..9 {
            if m[a * 9 + b] != 0 && v[b] != 0 {
                s = f.mul_add(&s, &m[a * 9 + b], &v[b]);
            }
        }
        out[a] = s;
    }
    out
}

/// Iterates over all vectors of length `n` over the field, in index order,
/// writing each into `buf` (base-`q` counter, first coordinate fastest).
pub fn next_vector(buf: &mut [u64], q: u64) -> bool {
    for x in buf.iter_mut() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}
