//! Kernel data model: weight/frequency pairs `(b, n)`, validation of the
//! admissibility constraints, the normalization root, kernel weight
//! expansion, and high-precision evaluation of the feature map and the
//! kernel itself.

use num_traits::{One, Signed};
use thiserror::Error;

use crate::dirichlet::{invert, DirichletCoefficients};
use crate::exact::{format_rational, Rational};
use crate::hp::{integer_power_neg_s, Complex, Ctx, Real};

/// Weight/frequency data before the weight-sum constraint is imposed.
/// Weights must be positive and frequencies distinct integers >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSpec {
    pub b: Vec<Rational>,
    pub n: Vec<u64>,
}

/// Validated kernel data: positive rational weights summing to 1 exactly,
/// distinct integer frequencies >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSpec {
    b: Vec<Rational>,
    n: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("weight and frequency tuples have different lengths ({b} vs {n})")]
    LengthMismatch { b: usize, n: usize },
    #[error("spec must contain at least one frequency")]
    Empty,
    #[error("frequency {value} at position {position} is below 2")]
    FrequencyTooSmall { position: usize, value: u64 },
    #[error("frequency {value} appears more than once")]
    DuplicateFrequency { value: u64 },
    #[error("weight at position {position} is not positive")]
    NonpositiveWeight { position: usize },
    #[error(
        "weights sum to {} (deficit {}), expected exactly 1",
        format_rational(sum),
        format_rational(deficit)
    )]
    WeightSum { sum: Rational, deficit: Rational },
}

impl ValidationError {
    /// Stable clause name used in serialized error objects.
    pub fn clause(&self) -> &'static str {
        match self {
            ValidationError::LengthMismatch { .. } => "length_mismatch",
            ValidationError::Empty => "empty",
            ValidationError::FrequencyTooSmall { .. } => "frequency_min",
            ValidationError::DuplicateFrequency { .. } => "frequency_distinct",
            ValidationError::NonpositiveWeight { .. } => "weight_positive",
            ValidationError::WeightSum { .. } => "weights_sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("point must lie in the open right half-plane")]
    HalfPlane,
}

impl RawSpec {
    pub fn new(b: Vec<Rational>, n: Vec<u64>) -> Self {
        RawSpec { b, n }
    }

    /// Checks every constraint except the weight sum.
    pub fn check_basic(&self) -> Result<(), ValidationError> {
        if self.b.len() != self.n.len() {
            return Err(ValidationError::LengthMismatch {
                b: self.b.len(),
                n: self.n.len(),
            });
        }
        if self.n.is_empty() {
            return Err(ValidationError::Empty);
        }
        for (position, &value) in self.n.iter().enumerate() {
            if value < 2 {
                return Err(ValidationError::FrequencyTooSmall { position, value });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for &value in &self.n {
            if !seen.insert(value) {
                return Err(ValidationError::DuplicateFrequency { value });
            }
        }
        for (position, w) in self.b.iter().enumerate() {
            if !w.is_positive() {
                return Err(ValidationError::NonpositiveWeight { position });
            }
        }
        Ok(())
    }
}

impl KernelSpec {
    /// Validates raw data into a kernel spec, requiring the weights to sum
    /// to 1 exactly.
    pub fn validate(raw: RawSpec) -> Result<KernelSpec, ValidationError> {
        raw.check_basic()?;
        let sum: Rational = raw.b.iter().sum();
        if !sum.is_one() {
            let deficit = Rational::one() - &sum;
            return Err(ValidationError::WeightSum { sum, deficit });
        }
        Ok(KernelSpec { b: raw.b, n: raw.n })
    }

    pub fn dimension(&self) -> usize {
        self.n.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.b
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.n
    }

    pub fn as_raw(&self) -> RawSpec {
        RawSpec::new(self.b.clone(), self.n.clone())
    }

    /// Spec with weights and frequencies reordered as
    /// `(b[perm[i]], n[perm[i]])_i`. Permutations preserve validity.
    pub fn permuted(&self, perm: &[usize]) -> KernelSpec {
        assert_eq!(perm.len(), self.n.len());
        KernelSpec {
            b: perm.iter().map(|&i| self.b[i].clone()).collect(),
            n: perm.iter().map(|&i| self.n[i]).collect(),
        }
    }
}

/// Point of the open right half-plane (or its closure) at working precision.
#[derive(Debug, Clone)]
pub struct HalfPlanePoint {
    pub re: Real,
    pub im: Real,
}

impl HalfPlanePoint {
    pub fn from_f64(re: f64, im: f64, ctx: &Ctx) -> Self {
        HalfPlanePoint {
            re: ctx.from_f64(re),
            im: ctx.from_f64(im),
        }
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.clone())
    }

    pub fn in_open_half_plane(&self) -> bool {
        !self.re.is_negative() && !self.re.is_zero()
    }
}

/// Value of `g(sigma) = sum_j b_j n_j^{-sigma}` at a real argument.
fn weight_sum_at(raw: &RawSpec, sigma: &Real, ctx: &mut Ctx) -> Real {
    let mut acc = ctx.zero();
    for (b, &n) in raw.b.iter().zip(&raw.n) {
        let ln_n = ctx.ln(&ctx.from_u64(n));
        let term = ctx.exp(&ctx.mul(sigma, &ln_n).neg());
        let b_hp = ctx.from_rational(b);
        acc = ctx.add(&acc, &ctx.mul(&b_hp, &term));
    }
    acc
}

/// Solves `sum_j b_j n_j^{-rho} = 1` for the unique real root of the
/// strictly decreasing map `g`, by bracketing and bisection, stopping once
/// `|g(rho) - 1| < tol`.
pub fn solve_rho(raw: &RawSpec, tol: f64, bits: usize) -> Result<Real, EvalError> {
    if !(tol > 0.0) {
        return Err(EvalError::BadTolerance(tol));
    }
    let mut ctx = Ctx::new(bits);
    // exact shortcut: weights already sum to 1
    let sum: Rational = raw.b.iter().sum();
    if sum.is_one() {
        return Ok(ctx.zero());
    }
    let one = ctx.one();
    let tol_hp = ctx.from_f64(tol);
    // g(0) = sum(b); bracket on the side the root lies
    let (mut lo, mut hi);
    if sum > Rational::one() {
        // g decreasing with g(0) > 1: root is positive
        lo = ctx.zero();
        hi = ctx.one();
        while weight_sum_at(raw, &hi, &mut ctx) > one {
            lo = hi.clone();
            hi = ctx.mul(&hi, &ctx.from_u64(2));
        }
    } else {
        hi = ctx.zero();
        lo = ctx.one().neg();
        while weight_sum_at(raw, &lo, &mut ctx) < one {
            hi = lo.clone();
            lo = ctx.mul(&lo, &ctx.from_u64(2));
        }
    }
    let half = ctx.from_f64(0.5);
    for _ in 0..20_000 {
        let mid = ctx.mul(&ctx.add(&lo, &hi), &half);
        let g = weight_sum_at(raw, &mid, &mut ctx);
        if ctx.abs_diff(&g, &one) < tol_hp {
            return Ok(mid);
        }
        if g > one {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ctx.mul(&ctx.add(&lo, &hi), &half))
}

/// Normalized weights `b_j n_j^{-rho}` with `rho` from [`solve_rho`]; the
/// result sums to 1 within the tolerance.
pub fn normalize(raw: &RawSpec, tol: f64, bits: usize) -> Result<Vec<Real>, EvalError> {
    let rho = solve_rho(raw, tol, bits)?;
    let mut ctx = Ctx::new(bits);
    let mut out = Vec::with_capacity(raw.b.len());
    for (b, &n) in raw.b.iter().zip(&raw.n) {
        let ln_n = ctx.ln(&ctx.from_u64(n));
        let scale = ctx.exp(&ctx.mul(&rho, &ln_n).neg());
        let b_hp = ctx.from_rational(b);
        out.push(ctx.mul(&b_hp, &scale));
    }
    Ok(out)
}

/// Weight coefficients of the kernel: the reciprocal of the series with
/// coefficient 1 at index 1 and `-b_j` at index `n_j`, truncated at `limit`.
/// All coefficients are nonnegative.
pub fn weight_expansion(spec: &KernelSpec, limit: u64) -> DirichletCoefficients {
    let mut denom = DirichletCoefficients::new(limit);
    denom.set(1, Rational::one());
    for (b, &n) in spec.weights().iter().zip(spec.frequencies()) {
        if n <= limit {
            denom.set(n, -b.clone());
        }
    }
    invert(&denom, limit).expect("leading coefficient is 1")
}

/// The feature map into the unit ball: component `j` is
/// `sqrt(b_j) n_j^{-s}`. Requires `Re(s) > 0`.
pub fn feature_map(
    spec: &KernelSpec,
    s: &HalfPlanePoint,
    bits: usize,
) -> Result<Vec<Complex>, EvalError> {
    if !s.in_open_half_plane() {
        return Err(EvalError::HalfPlane);
    }
    let mut ctx = Ctx::new(bits);
    Ok(feature_map_in_ctx(spec, &s.to_complex(), &mut ctx))
}

pub(crate) fn feature_map_in_ctx(spec: &KernelSpec, s: &Complex, ctx: &mut Ctx) -> Vec<Complex> {
    spec.weights()
        .iter()
        .zip(spec.frequencies())
        .map(|(b, &n)| {
            let b_hp = ctx.from_rational(b);
            let root = ctx.sqrt(&b_hp);
            integer_power_neg_s(n, s, ctx).scale(&root, ctx)
        })
        .collect()
}

/// Kernel value `1 / (1 - sum_j b_j n_j^{-s - conj(u)})`.
/// Requires both points in the open right half-plane.
pub fn kernel_value(
    spec: &KernelSpec,
    s: &HalfPlanePoint,
    u: &HalfPlanePoint,
    bits: usize,
) -> Result<Complex, EvalError> {
    if !s.in_open_half_plane() || !u.in_open_half_plane() {
        return Err(EvalError::HalfPlane);
    }
    let mut ctx = Ctx::new(bits);
    Ok(kernel_value_in_ctx(
        spec,
        &s.to_complex(),
        &u.to_complex(),
        &mut ctx,
    ))
}

pub(crate) fn kernel_value_in_ctx(
    spec: &KernelSpec,
    s: &Complex,
    u: &Complex,
    ctx: &mut Ctx,
) -> Complex {
    let q = pair_sum_in_ctx(spec, s, u, ctx);
    let one = Complex::new(ctx.one(), ctx.zero());
    one.div(&one.sub(&q, ctx), ctx)
}

/// `sum_j b_j n_j^{-s - conj(u)}`, the inner product of feature vectors.
pub(crate) fn pair_sum_in_ctx(
    spec: &KernelSpec,
    s: &Complex,
    u: &Complex,
    ctx: &mut Ctx,
) -> Complex {
    let exponent = s.add(&u.conj(), ctx);
    let mut acc = Complex::zero(ctx);
    for (b, &n) in spec.weights().iter().zip(spec.frequencies()) {
        let b_hp = ctx.from_rational(b);
        let term = integer_power_neg_s(n, &exponent, ctx).scale(&b_hp, ctx);
        acc = acc.add(&term, ctx);
    }
    acc
}

/// Euclidean norm squared of a complex vector.
pub fn vector_norm_sq(v: &[Complex], ctx: &Ctx) -> Real {
    let mut acc = ctx.zero();
    for z in v {
        acc = ctx.add(&acc, &z.abs_sq(ctx));
    }
    acc
}
