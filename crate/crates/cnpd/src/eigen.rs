//! Eigenvalues of small real symmetric matrices at working precision:
//! Householder tridiagonalization followed by implicit-shift QL iteration.
//! Hermitian problems enter through the real embedding
//! `[[X, -Y], [Y, X]]`, which carries the same spectrum with doubled
//! multiplicities.

use thiserror::Error;

use crate::hp::{Complex, Ctx, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("QL iteration failed to converge")]
    NoConvergence,
}

/// All eigenvalues of a symmetric matrix, ascending. The input is consumed.
pub fn symmetric_eigenvalues(
    mut a: Vec<Vec<Real>>,
    ctx: &mut Ctx,
) -> Result<Vec<Real>, EigenError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(&mut a, ctx);
    ql_implicit(&mut d, &mut e, ctx)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Eigenvalues of a Hermitian matrix given row-major, ascending; each value
/// of the embedded real problem appears twice, so duplicates are collapsed
/// pairwise after sorting.
pub fn hermitian_eigenvalues(
    entries: &[Complex],
    size: usize,
    ctx: &mut Ctx,
) -> Result<Vec<Real>, EigenError> {
    if size == 0 {
        return Ok(Vec::new());
    }
    let mut embed = vec![vec![ctx.zero(); 2 * size]; 2 * size];
    for i in 0..size {
        for j in 0..size {
            let z = &entries[i * size + j];
            embed[i][j] = z.re.clone();
            embed[size + i][size + j] = z.re.clone();
            embed[i][size + j] = z.im.neg();
            embed[size + i][j] = z.im.clone();
        }
    }
    let doubled = symmetric_eigenvalues(embed, ctx)?;
    Ok(doubled.into_iter().step_by(2).collect())
}

/// Householder reduction to tridiagonal form; returns (diagonal,
/// subdiagonal) with the subdiagonal in `e[1..]`.
fn tridiagonalize(a: &mut [Vec<Real>], ctx: &Ctx) -> (Vec<Real>, Vec<Real>) {
    let n = a.len();
    let mut e = vec![ctx.zero(); n];
    for k in 0..n.saturating_sub(2) {
        // column x = a[k+1.., k]
        let m = n - k - 1;
        let x: Vec<Real> = (0..m).map(|i| a[k + 1 + i][k].clone()).collect();
        let mut norm_sq = ctx.zero();
        for v in &x {
            norm_sq = ctx.add(&norm_sq, &ctx.mul(v, v));
        }
        let norm = ctx.sqrt(&norm_sq);
        if norm.is_zero() {
            e[k + 1] = ctx.zero();
            continue;
        }
        // v = x + sign(x0) ||x|| e1 avoids cancellation
        let mut v = x.clone();
        let signed_norm = if x[0].is_negative() {
            norm.neg()
        } else {
            norm.clone()
        };
        v[0] = ctx.add(&v[0], &signed_norm);
        let mut vtv = ctx.zero();
        for t in &v {
            vtv = ctx.add(&vtv, &ctx.mul(t, t));
        }
        if vtv.is_zero() {
            e[k + 1] = ctx.zero();
            continue;
        }
        let beta = ctx.div(&ctx.from_u64(2), &vtv);
        // p = beta * A22 * v over the trailing block
        let mut p = vec![ctx.zero(); m];
        for i in 0..m {
            let mut acc = ctx.zero();
            for j in 0..m {
                acc = ctx.add(&acc, &ctx.mul(&a[k + 1 + i][k + 1 + j], &v[j]));
            }
            p[i] = ctx.mul(&beta, &acc);
        }
        let mut ptv = ctx.zero();
        for i in 0..m {
            ptv = ctx.add(&ptv, &ctx.mul(&p[i], &v[i]));
        }
        let half_beta_ptv = ctx.mul(&ctx.mul(&beta, &ptv), &ctx.from_f64(0.5));
        let w: Vec<Real> = (0..m)
            .map(|i| ctx.sub(&p[i], &ctx.mul(&half_beta_ptv, &v[i])))
            .collect();
        // A22 <- A22 - v w^T - w v^T
        for i in 0..m {
            for j in 0..m {
                let correction = ctx.add(&ctx.mul(&v[i], &w[j]), &ctx.mul(&w[i], &v[j]));
                a[k + 1 + i][k + 1 + j] = ctx.sub(&a[k + 1 + i][k + 1 + j], &correction);
            }
        }
        // transformed column: Hx = -sign(x0) ||x|| e1
        let sub = signed_norm.neg();
        a[k + 1][k] = sub.clone();
        a[k][k + 1] = sub.clone();
        for i in 1..m {
            a[k + 1 + i][k] = ctx.zero();
            a[k][k + 1 + i] = ctx.zero();
        }
        e[k + 1] = sub;
    }
    if n >= 2 {
        e[n - 1] = a[n - 1][n - 2].clone();
    }
    let d: Vec<Real> = (0..n).map(|i| a[i][i].clone()).collect();
    (d, e)
}

fn hypot(a: &Real, b: &Real, ctx: &Ctx) -> Real {
    ctx.sqrt(&ctx.add(&ctx.mul(a, a), &ctx.mul(b, b)))
}

/// Fortran-style SIGN(a, b): |a| with the sign of b.
fn transfer_sign(a: &Real, b: &Real) -> Real {
    if b.is_negative() {
        a.abs().neg()
    } else {
        a.abs()
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (diagonal `d`,
/// subdiagonal `e[1..]`); eigenvalues replace `d`.
fn ql_implicit(d: &mut [Real], e: &mut [Real], ctx: &mut Ctx) -> Result<(), EigenError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i].clone();
    }
    e[n - 1] = ctx.zero();
    // splitting threshold relative to neighboring diagonal magnitude
    let eps = {
        let bits = ctx.bits();
        let mut t = ctx.one();
        let half = ctx.from_f64(0.5);
        for _ in 0..bits.saturating_sub(6) {
            t = ctx.mul(&t, &half);
        }
        t
    };
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = ctx.add(&d[m].abs(), &d[m + 1].abs());
                if e[m].abs() <= ctx.mul(&eps, &dd) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 120 {
                return Err(EigenError::NoConvergence);
            }
            let two = ctx.from_u64(2);
            let mut g = ctx.div(&ctx.sub(&d[l + 1], &d[l]), &ctx.mul(&two, &e[l]));
            let mut r = hypot(&g, &ctx.one(), ctx);
            let denom = ctx.add(&g, &transfer_sign(&r, &g));
            g = ctx.add(&ctx.sub(&d[m], &d[l]), &ctx.div(&e[l], &denom));
            let mut s = ctx.one();
            let mut c = ctx.one();
            let mut p = ctx.zero();
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = ctx.mul(&s, &e[i]);
                let b = ctx.mul(&c, &e[i]);
                r = hypot(&f, &g, ctx);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    // rotation underflow: deflate and restart this block
                    d[i + 1] = ctx.sub(&d[i + 1], &p);
                    e[m] = ctx.zero();
                    underflow = true;
                    break;
                }
                s = ctx.div(&f, &r);
                c = ctx.div(&g, &r);
                g = ctx.sub(&d[i + 1], &p);
                r = ctx.add(
                    &ctx.mul(&ctx.sub(&d[i], &g), &s),
                    &ctx.mul(&ctx.mul(&two, &c), &b),
                );
                p = ctx.mul(&s, &r);
                d[i + 1] = ctx.add(&g, &p);
                g = ctx.sub(&ctx.mul(&c, &r), &b);
            }
            if underflow {
                continue;
            }
            d[l] = ctx.sub(&d[l], &p);
            e[l] = g;
            e[m] = ctx.zero();
        }
    }
    Ok(())
}
