//! Multiplier-variety presentations and membership testing.
//!
//! Each circuit of the frequency data contributes one binomial relation
//! `sqrt(Asq) * prod_right z^beta = sqrt(Bsq) * prod_left z^beta` inside the
//! unit ball, where `Asq = prod_left b^beta` and `Bsq = prod_right b^beta`.
//! Storing the squared coefficients keeps exact membership inside the
//! Gaussian rationals: the relation holds iff the two monomials have
//! matching scaled magnitudes and lie on the same ray.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::circuits::{enumerate_circuits, Circuit, CircuitError};
use crate::eigen::symmetric_eigenvalues;
use crate::exact::{rational_pow, Rational};
use crate::hp::{Complex, Ctx, Real};
use crate::kernelspec::{feature_map_in_ctx, KernelSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error("the zero point carries no parameter")]
    ZeroPoint,
    #[error("point dimension {got} does not match variety dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(Rational::one(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, exp: u64) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_complex(&self, ctx: &mut Ctx) -> Complex {
        Complex::new(ctx.from_rational(&self.re), ctx.from_rational(&self.im))
    }
}

/// Point of the ball with Gaussian-rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRationalPoint {
    pub coords: Vec<GaussianRational>,
}

impl GaussianRationalPoint {
    pub fn new(coords: Vec<GaussianRational>) -> Self {
        GaussianRationalPoint { coords }
    }

    pub fn origin(d: usize) -> Self {
        GaussianRationalPoint::new(vec![GaussianRational::zero(); d])
    }

    pub fn norm_sq(&self) -> Rational {
        self.coords.iter().map(|z| z.norm_sq()).sum()
    }
}

/// One defining relation, carrying the squared monomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRelation {
    pub circuit: Circuit,
    /// `prod_{i in left} b_i^{beta_i}`, the square of the coefficient on
    /// the right-side monomial.
    pub a_sq: Rational,
    /// `prod_{i in right} b_i^{beta_i}`, the square of the coefficient on
    /// the left-side monomial.
    pub b_sq: Rational,
}

impl PolyRelation {
    fn monomial(&self, z: &[GaussianRational], side: &[usize]) -> GaussianRational {
        let mut acc = GaussianRational::one();
        for &i in side {
            acc = acc.mul(&z[i].pow(self.circuit.beta_of(i).expect("side index in support")));
        }
        acc
    }

    fn monomial_hp(&self, z: &[Complex], side: &[usize], ctx: &mut Ctx) -> Complex {
        let mut acc = Complex::new(ctx.one(), ctx.zero());
        for &i in side {
            let exp = self.circuit.beta_of(i).expect("side index in support");
            for _ in 0..exp {
                acc = acc.mul(&z[i], ctx);
            }
        }
        acc
    }

    /// Exact test of `sqrt(a_sq) P2 = sqrt(b_sq) P1` for the monomials
    /// `P1 = prod_left z^beta`, `P2 = prod_right z^beta`: scaled squared
    /// magnitudes agree and `P1 conj(P2)` is real nonnegative.
    pub fn holds_exact(&self, z: &[GaussianRational]) -> bool {
        let p1 = self.monomial(z, &self.circuit.left);
        let p2 = self.monomial(z, &self.circuit.right);
        if &self.b_sq * p1.norm_sq() != &self.a_sq * p2.norm_sq() {
            return false;
        }
        let ray = p1.mul(&p2.conj());
        ray.im.is_zero() && !ray.re.is_negative()
    }

    /// Residual `|sqrt(a_sq) P2 - sqrt(b_sq) P1|` at working precision.
    pub fn residual(&self, z: &[Complex], ctx: &mut Ctx) -> Real {
        let p1 = self.monomial_hp(z, &self.circuit.left, ctx);
        let p2 = self.monomial_hp(z, &self.circuit.right, ctx);
        let a_sq = ctx.from_rational(&self.a_sq);
        let b_sq = ctx.from_rational(&self.b_sq);
        let a = ctx.sqrt(&a_sq);
        let b = ctx.sqrt(&b_sq);
        p2.scale(&a, ctx).sub(&p1.scale(&b, ctx), ctx).abs(ctx)
    }
}

/// Defining relations of the multiplier variety inside the unit ball; no
/// relations means the variety is the full ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyPresentation {
    dimension: usize,
    relations: Vec<PolyRelation>,
}

impl VarietyPresentation {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn relations(&self) -> &[PolyRelation] {
        &self.relations
    }

    pub fn is_full_ball(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Builds the variety presentation: one relation per circuit of the
/// frequency data.
pub fn build_variety(spec: &KernelSpec) -> Result<VarietyPresentation, CircuitError> {
    let circuits = enumerate_circuits(spec.frequencies())?;
    let b = spec.weights();
    let relations = circuits
        .into_iter()
        .map(|circuit| {
            let side_product = |side: &[usize]| -> Rational {
                side.iter()
                    .map(|&i| rational_pow(&b[i], circuit.beta_of(i).unwrap() as i32))
                    .product()
            };
            let a_sq = side_product(&circuit.left);
            let b_sq = side_product(&circuit.right);
            PolyRelation {
                circuit,
                a_sq,
                b_sq,
            }
        })
        .collect();
    Ok(VarietyPresentation {
        dimension: spec.dimension(),
        relations,
    })
}

/// Exact membership: strict rational ball test plus every relation.
pub fn member_exact(v: &VarietyPresentation, z: &GaussianRationalPoint) -> bool {
    assert_eq!(
        z.coords.len(),
        v.dimension,
        "point dimension must match the variety"
    );
    if z.norm_sq() >= Rational::one() {
        return false;
    }
    v.relations.iter().all(|rel| rel.holds_exact(&z.coords))
}

/// Numeric membership: `||z|| < 1` and every relation residual below `tol`.
pub fn member_numeric(
    v: &VarietyPresentation,
    z: &[Complex],
    tol: f64,
    bits: usize,
) -> Result<bool, PointError> {
    if !(tol > 0.0) {
        return Err(PointError::BadTolerance(tol));
    }
    if z.len() != v.dimension {
        return Err(PointError::DimensionMismatch {
            got: z.len(),
            expected: v.dimension,
        });
    }
    let mut ctx = Ctx::new(bits);
    let mut norm_sq = ctx.zero();
    for c in z {
        norm_sq = ctx.add(&norm_sq, &c.abs_sq(&ctx));
    }
    if norm_sq >= ctx.one() {
        return Ok(false);
    }
    let tol_hp = ctx.from_f64(tol);
    for rel in &v.relations {
        if rel.residual(z, &mut ctx) >= tol_hp {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recovers the half-plane parameter of a point on the feature-map orbit:
/// `s = -ln(z_1 / sqrt(b_1)) / ln(n_1)` on the principal branch, accepted
/// only when `Re(s) > 0` and the full feature vector matches within `tol`.
pub fn invert_point(
    spec: &KernelSpec,
    z: &[Complex],
    tol: f64,
    bits: usize,
) -> Result<Option<Complex>, PointError> {
    if !(tol > 0.0) {
        return Err(PointError::BadTolerance(tol));
    }
    if z.len() != spec.dimension() {
        return Err(PointError::DimensionMismatch {
            got: z.len(),
            expected: spec.dimension(),
        });
    }
    if z.iter().all(|c| c.is_zero()) {
        return Err(PointError::ZeroPoint);
    }
    if z[0].is_zero() {
        // the first coordinate anchors the logarithm; elsewhere-supported
        // points are either off the orbit or undecidable here
        return Ok(None);
    }
    let mut ctx = Ctx::new(bits);
    let sqrt_b1 = {
        let b = ctx.from_rational(&spec.weights()[0]);
        ctx.sqrt(&b)
    };
    let w = Complex::new(ctx.div(&z[0].re, &sqrt_b1), ctx.div(&z[0].im, &sqrt_b1));
    let ln_w = w.ln(&mut ctx);
    let ln_n1 = ctx.ln(&ctx.from_u64(spec.frequencies()[0]));
    let s = Complex::new(
        ctx.div(&ln_w.re, &ln_n1).neg(),
        ctx.div(&ln_w.im, &ln_n1).neg(),
    );
    if s.re.is_negative() || s.re.is_zero() {
        return Ok(None);
    }
    let image = feature_map_in_ctx(spec, &s, &mut ctx);
    let mut err_sq = ctx.zero();
    for (fz, target) in image.iter().zip(z) {
        err_sq = ctx.add(&err_sq, &fz.sub(target, &ctx).abs_sq(&ctx));
    }
    let tol_hp = ctx.from_f64(tol);
    if ctx.sqrt(&err_sq) < tol_hp {
        Ok(Some(s))
    } else {
        Ok(None)
    }
}

/// Numerical rank of the span of feature vectors at real sample points
/// `s = 1, 2, ..., sample_count`, together with the singular values in
/// descending order. Rank counts singular values above `1e-10` times the
/// largest.
pub fn affine_rank(spec: &KernelSpec, sample_count: usize, bits: usize) -> (usize, Vec<Real>) {
    assert!(
        sample_count >= spec.dimension(),
        "need at least d sample points"
    );
    let mut ctx = Ctx::new(bits);
    let d = spec.dimension();
    // real sample points give real feature rows
    let rows: Vec<Vec<Real>> = (1..=sample_count)
        .map(|k| {
            let s = Complex::new(ctx.from_u64(k as u64), ctx.zero());
            feature_map_in_ctx(spec, &s, &mut ctx)
                .into_iter()
                .map(|c| c.re)
                .collect()
        })
        .collect();
    // d x d Gram matrix of the columns
    let mut gram = vec![vec![ctx.zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let mut acc = ctx.zero();
            for row in &rows {
                acc = ctx.add(&acc, &ctx.mul(&row[i], &row[j]));
            }
            gram[i][j] = acc.clone();
            gram[j][i] = acc;
        }
    }
    let eigs = symmetric_eigenvalues(gram, &mut ctx).expect("small symmetric system");
    let mut singular: Vec<Real> = eigs
        .into_iter()
        .map(|l| {
            if l.is_negative() {
                ctx.zero()
            } else {
                ctx.sqrt(&l)
            }
        })
        .collect();
    singular.reverse();
    let max = singular.first().cloned().unwrap_or_else(|| ctx.zero());
    let threshold = ctx.mul(&ctx.from_f64(1e-10), &max);
    let rank = singular.iter().filter(|s| **s > threshold).count();
    (rank, singular)
}
