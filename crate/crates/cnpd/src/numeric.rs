//! Floating-point verification layer: Gram matrices of kernel values,
//! positive-semidefiniteness checks via high-precision eigenvalues, and
//! reproducing-property residuals.

use num_traits::Zero;
use thiserror::Error;

use crate::dirichlet::DirichletCoefficients;
use crate::eigen::{hermitian_eigenvalues, EigenError};
use crate::hp::{integer_power_neg_s, to_f64, Complex, Ctx, Real};
use crate::kernelspec::{kernel_value_in_ctx, pair_sum_in_ctx, HalfPlanePoint, KernelSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("points must lie in the open right half-plane")]
    HalfPlane,
    #[error("points must be pairwise distinct")]
    DuplicatePoints,
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("series support exceeds the expansion limit {0}")]
    SupportExceedsLimit(u64),
    #[error("series has a coefficient at index {0} where the expansion weight is zero")]
    ZeroWeightOnSupport(u64),
}

/// Which kernel-derived matrix to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMode {
    /// Entries `K(s_i, s_j)`.
    Kernel,
    /// Entries `sum_j b_j n_j^{-s_i - conj(s_j)} = 1 - 1/K(s_i, s_j)`.
    OneMinusInverse,
}

/// Hermitian matrix of kernel values at a point set, row-major.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    size: usize,
    entries: Vec<Complex>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &Complex {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn from_entries(size: usize, entries: Vec<Complex>) -> Self {
        assert_eq!(entries.len(), size * size);
        GramMatrix { size, entries }
    }
}

/// Assembles the Gram matrix of the selected mode over pairwise distinct
/// half-plane points. The upper triangle is computed and mirrored, so the
/// result is Hermitian by construction.
pub fn gram_matrix(
    spec: &KernelSpec,
    points: &[HalfPlanePoint],
    mode: GramMode,
    bits: usize,
) -> Result<GramMatrix, NumericError> {
    if points.iter().any(|p| !p.in_open_half_plane()) {
        return Err(NumericError::HalfPlane);
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].re == points[j].re && points[i].im == points[j].im {
                return Err(NumericError::DuplicatePoints);
            }
        }
    }
    let mut ctx = Ctx::new(bits);
    let m = points.len();
    let mut entries = vec![Complex::zero(&ctx); m * m];
    for i in 0..m {
        for j in i..m {
            let s = points[i].to_complex();
            let u = points[j].to_complex();
            let value = match mode {
                GramMode::Kernel => kernel_value_in_ctx(spec, &s, &u, &mut ctx),
                GramMode::OneMinusInverse => pair_sum_in_ctx(spec, &s, &u, &mut ctx),
            };
            entries[j * m + i] = value.conj();
            entries[i * m + j] = value;
        }
    }
    Ok(GramMatrix { size: m, entries })
}

/// Outcome of a positive-semidefiniteness check.
#[derive(Debug, Clone)]
pub struct PsdReport {
    pub is_psd: bool,
    /// Smallest eigenvalue, `None` for the empty matrix.
    pub min_eigenvalue: Option<f64>,
    /// Same eigenvalue at full working precision.
    pub min_eigenvalue_hp: Option<Real>,
}

/// Checks positive semidefiniteness: validates Hermitian symmetry within
/// `1e-14` (scaled by the largest entry), then compares the smallest
/// eigenvalue against `-tol` scaled the same way.
pub fn psd_check(gram: &GramMatrix, tol: f64, bits: usize) -> Result<PsdReport, NumericError> {
    let mut ctx = Ctx::new(bits);
    let m = gram.size;
    if m == 0 {
        return Ok(PsdReport {
            is_psd: true,
            min_eigenvalue: None,
            min_eigenvalue_hp: None,
        });
    }
    let mut max_abs = ctx.zero();
    for e in &gram.entries {
        let a = e.abs(&ctx);
        if a > max_abs {
            max_abs = a;
        }
    }
    let scale = if max_abs.is_zero() {
        ctx.one()
    } else {
        max_abs
    };
    let hermitian_tol = ctx.mul(&ctx.from_f64(1e-14), &scale);
    for i in 0..m {
        for j in 0..m {
            let diff = gram
                .entry(i, j)
                .sub(&gram.entry(j, i).conj(), &ctx)
                .abs(&ctx);
            if diff > hermitian_tol {
                return Err(NumericError::NotHermitian);
            }
        }
    }
    let eigs = hermitian_eigenvalues(&gram.entries, m, &mut ctx)?;
    let min = eigs.first().cloned().expect("nonempty spectrum");
    let threshold = ctx.mul(&ctx.from_f64(tol), &scale).neg();
    Ok(PsdReport {
        is_psd: min >= threshold,
        min_eigenvalue: Some(to_f64(&min)),
        min_eigenvalue_hp: Some(min),
    })
}

/// Residual of the reproducing identity at `u`: the inner product of `f`
/// against the kernel section, minus the direct evaluation `f(u)`, both
/// computed from the weight expansion of the kernel spec truncated at `limit`.
/// Analytically zero; the return value is the floating-point defect.
pub fn reproducing_check(
    spec: &KernelSpec,
    f: &DirichletCoefficients,
    u: &HalfPlanePoint,
    limit: u64,
    bits: usize,
) -> Result<f64, NumericError> {
    if !u.in_open_half_plane() {
        return Err(NumericError::HalfPlane);
    }
    if f.support().any(|(n, _)| n > limit) {
        return Err(NumericError::SupportExceedsLimit(limit));
    }
    let weights = crate::kernelspec::weight_expansion(spec, limit);
    let mut ctx = Ctx::new(bits);
    let u_c = u.to_complex();
    // kernel section coefficients: w_n * conj(n^{-u}); inner product divides
    // the weights back out
    let mut inner = Complex::zero(&ctx);
    let mut direct = Complex::zero(&ctx);
    for (n, a) in f.support() {
        let wn = weights.coeff(n);
        if wn.is_zero() {
            return Err(NumericError::ZeroWeightOnSupport(n));
        }
        let a_hp = ctx.from_rational(a);
        let wn_hp = ctx.from_rational(&wn);
        let n_pow = integer_power_neg_s(n, &u_c, &mut ctx);
        let section_coeff = n_pow.conj().scale(&wn_hp, &ctx);
        let term = section_coeff.conj().scale(&a_hp, &ctx);
        inner = inner.add(
            &Complex::new(ctx.div(&term.re, &wn_hp), ctx.div(&term.im, &wn_hp)),
            &ctx,
        );
        direct = direct.add(&n_pow.scale(&a_hp, &ctx), &ctx);
    }
    Ok(to_f64(&inner.sub(&direct, &ctx).abs(&ctx)))
}
