//! Point counts of the genus-2 curve and its embedding into the pencil.

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::stability::{curve_is_smooth, SMOOTHNESS_BOUND};
use crate::trivector::{build_gamma_c, CurveCoeffs};

const AFFINE_BUDGET: u64 = 1 << 28;

/// Affine points of `C_c` over the field of `c`.
pub fn curve_affine_points(c: &CurveCoeffs<Gf>) -> Result<Vec<(u64, u64)>> {
    let f = &c.field;
    let q = f.q();
    if q.checked_mul(q).is_none_or(|n| n > AFFINE_BUDGET) {
        return Err(Error::BudgetExceeded(format!("affine plane over {}", f.spec())));
    }
    let poly = c.curve_poly();
    let mut out = Vec::new();
    for z in 0..q {
        // x² + b x + a with b, a depending on z
        let b = poly.substitute(1, &z);
        for x in 0..q {
            if b.eval(&[x, z]) == 0 {
                out.push((x, z));
            }
        }
    }
    Ok(out)
}

/// `N_d = #C(F_{q^d})` (including the point at infinity) for each `d`.
pub fn curve_point_counts(c: &CurveCoeffs<Gf>, degrees: &[u32]) -> Result<Vec<u64>> {
    if !curve_is_smooth(c, SMOOTHNESS_BOUND)? {
        return Err(Error::SingularCurve);
    }
    let f = &c.field;
    degrees
        .iter()
        .map(|&d| {
            let (big, emb) = f.extension(d)?;
            let lifted = CurveCoeffs { field: big.clone(), c: std::array::from_fn(|i| emb.apply(c.c[i])) };
            Ok(curve_affine_points(&lifted)?.len() as u64 + 1)
        })
        .collect()
}

/// `#J(F_q) = P(1)` from the first two point counts of a genus-2 curve.
pub fn jacobian_order_from_counts(n1: u64, n2: u64, q: u64) -> Result<u64> {
    let (n1, n2, q) = (n1 as i128, n2 as i128, q as i128);
    let e1 = q + 1 - n1;
    let p2 = q * q + 1 - n2;
    if e1 * e1 > 16 * q || p2.abs() > 4 * q || (e1 * e1 - p2) % 2 != 0 {
        return Err(Error::Invalid(format!("Weil bounds violated by N1={n1}, N2={n2}, q={q}")));
    }
    let e2 = (e1 * e1 - p2) / 2;
    let order = 1 - e1 + e2 - q * e1 + q * q;
    u64::try_from(order).map_err(|_| Error::Invalid("nonpositive Jacobian order".into()))
}

/// `f(x, z) = [0 : 0 : −1 : 0 : z : 0 : −z² : x : z³]`
pub fn embedding_point(f: &Gf, x: u64, z: u64) -> Vec<u64> {
    let z2 = f.mul(&z, &z);
    vec![0, 0, f.neg(&1), 0, z, 0, f.neg(&z2), x, f.mul(&z2, &z)]
}

/// The five vectors spanning the kernel of `Φ` at `f(x, z)`.
pub fn kernel_rows(c: &CurveCoeffs<Gf>, x: u64, z: u64) -> Vec<Vec<u64>> {
    let f = &c.field;
    let g = |k: u32| c.get(k);
    let z2 = f.mul(&z, &z);
    let neg = |a: u64| f.neg(&a);
    vec![
        vec![
            1,
            0,
            0,
            z2,
            x,
            neg(f.add(&f.mul(&g(12), &z), &g(18))),
            0,
            neg(f.add(&f.mul(&g(9), &x), &g(24))),
            0,
        ],
        vec![
            0,
            1,
            g(3),
            neg(z),
            0,
            neg(f.add(&z2, &f.mul(&g(6), &z))),
            neg(f.add(&x, &g(15))),
            neg(f.mul(&g(3), &x)),
            0,
        ],
        vec![0, 0, 1, 0, neg(z), 0, z2, neg(x), 0],
        vec![0, 0, 0, 0, 0, 1, 0, neg(z), 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 1],
    ]
}

#[derive(Clone, Debug)]
pub struct EmbeddingCertificate {
    pub points_checked: usize,
    pub weierstrass_rank: usize,
    /// First failing `(x, z, check)`; the check is `"rank"` or a row number.
    pub failure: Option<(u64, u64, String)>,
}

impl EmbeddingCertificate {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.weierstrass_rank <= 4
    }
}

/// Checks at every affine point that `Φ(f(x,z))` has rank ≤ 4 and kills
/// the five kernel rows; also reports the rank at `P′ = [0:…:0:1]`.
pub fn verify_curve_embedding(c: &CurveCoeffs<Gf>) -> Result<EmbeddingCertificate> {
    if !curve_is_smooth(c, SMOOTHNESS_BOUND)? {
        return Err(Error::SingularCurve);
    }
    let f = &c.field;
    let gamma = build_gamma_c(c);
    let pts = curve_affine_points(c)?;
    let mut failure = None;
    'points: for &(x, z) in &pts {
        let m = gamma.phi_at(&embedding_point(f, x, z));
        if m.rank() > 4 {
            failure = Some((x, z, "rank".to_string()));
            break;
        }
        for (i, row) in kernel_rows(c, x, z).iter().enumerate() {
            if m.mul_vec(row).iter().any(|v| *v != 0) {
                failure = Some((x, z, format!("row {}", i + 1)));
                break 'points;
            }
        }
    }
    let mut p = vec![0u64; 9];
    p[8] = 1;
    let weierstrass_rank = gamma.phi_at(&p).rank();
    Ok(EmbeddingCertificate { points_checked: pts.len(), weierstrass_rank, failure })
}
