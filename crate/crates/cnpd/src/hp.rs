//! High-precision real and complex floating point, used wherever the exact
//! rational pipeline has to leave Q (powers with irrational exponents,
//! square roots of weights, eigenvalues).
//!
//! Precision is a per-computation parameter, default 128 bits. Everything
//! routes through a [`Ctx`] so constants (pi, ln 2) are cached per call
//! chain; contexts are cheap and never shared across threads.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exact::Rational;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

/// High-precision real number.
pub type Real = BigFloat;

/// Arithmetic context: precision plus cached transcendental constants.
pub struct Ctx {
    bits: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        let bits = bits.max(64);
        Ctx {
            bits,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(&self) -> Real {
        BigFloat::from_i8(0, self.bits)
    }

    pub fn one(&self) -> Real {
        BigFloat::from_i8(1, self.bits)
    }

    pub fn from_f64(&self, x: f64) -> Real {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn from_u64(&self, x: u64) -> Real {
        BigFloat::from_u64(x, self.bits)
    }

    pub fn from_i64(&self, x: i64) -> Real {
        BigFloat::from_i64(x, self.bits)
    }

    pub fn from_bigint(&mut self, x: &BigInt) -> Real {
        match x.to_i128() {
            Some(v) => BigFloat::from_i128(v, self.bits),
            None => BigFloat::parse(
                &x.to_string(),
                astro_float::Radix::Dec,
                self.bits,
                RM,
                &mut self.cc,
            ),
        }
    }

    pub fn from_rational(&mut self, x: &Rational) -> Real {
        let n = self.from_bigint(x.numer());
        let d = self.from_bigint(x.denom());
        self.div(&n, &d)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.bits, RM)
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        a.powi(n, self.bits, RM)
    }

    pub fn exp(&mut self, a: &Real) -> Real {
        a.exp(self.bits, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &Real) -> Real {
        a.ln(self.bits, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &Real) -> Real {
        a.sin(self.bits, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &Real) -> Real {
        a.cos(self.bits, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> Real {
        self.cc.pi(self.bits, RM)
    }

    /// Principal-value arctangent of `y/x` honoring quadrants.
    pub fn atan2(&mut self, y: &Real, x: &Real) -> Real {
        let pi = self.pi();
        if x.is_zero() {
            if y.is_zero() {
                return self.zero();
            }
            let half_pi = self.div(&pi, &self.from_u64(2));
            return if y.is_negative() {
                half_pi.neg()
            } else {
                half_pi
            };
        }
        let base = self.div(y, x).atan(self.bits, RM, &mut self.cc);
        if x.is_negative() {
            if y.is_negative() {
                self.sub(&base, &pi)
            } else {
                self.add(&base, &pi)
            }
        } else {
            base
        }
    }

    /// Absolute difference.
    pub fn abs_diff(&self, a: &Real, b: &Real) -> Real {
        self.sub(a, b).abs()
    }
}

/// Converts to f64 through the raw mantissa; saturates on overflow.
pub fn to_f64(x: &Real) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _n, sign, e, _) = x.as_raw_parts().expect("finite value");
    let top = *words.last().unwrap() as f64;
    let second = if words.len() > 1 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    // mantissa is a fraction in [0.5, 1): value = m * 2^e
    let m = top / 2f64.powi(64) + second / 2f64.powi(128);
    let v = if e >= 1100 {
        f64::INFINITY
    } else if e <= -1100 {
        0.0
    } else {
        m * 2f64.powi(e)
    };
    if sign.is_negative() {
        -v
    } else {
        v
    }
}

/// High-precision complex number.
#[derive(Debug, Clone)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Complex::new(ctx.zero(), ctx.zero())
    }

    pub fn from_f64(re: f64, im: f64, ctx: &Ctx) -> Self {
        Complex::new(ctx.from_f64(re), ctx.from_f64(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, other: &Self, ctx: &Ctx) -> Self {
        Complex::new(ctx.add(&self.re, &other.re), ctx.add(&self.im, &other.im))
    }

    pub fn sub(&self, other: &Self, ctx: &Ctx) -> Self {
        Complex::new(ctx.sub(&self.re, &other.re), ctx.sub(&self.im, &other.im))
    }

    pub fn mul(&self, other: &Self, ctx: &Ctx) -> Self {
        let re = ctx.sub(&ctx.mul(&self.re, &other.re), &ctx.mul(&self.im, &other.im));
        let im = ctx.add(&ctx.mul(&self.re, &other.im), &ctx.mul(&self.im, &other.re));
        Complex::new(re, im)
    }

    pub fn scale(&self, factor: &Real, ctx: &Ctx) -> Self {
        Complex::new(ctx.mul(&self.re, factor), ctx.mul(&self.im, factor))
    }

    pub fn div(&self, other: &Self, ctx: &Ctx) -> Self {
        let d = other.abs_sq(ctx);
        let num = self.mul(&other.conj(), ctx);
        Complex::new(ctx.div(&num.re, &d), ctx.div(&num.im, &d))
    }

    pub fn abs_sq(&self, ctx: &Ctx) -> Real {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &Ctx) -> Real {
        ctx.sqrt(&self.abs_sq(ctx))
    }

    /// Principal-branch complex logarithm.
    pub fn ln(&self, ctx: &mut Ctx) -> Self {
        let r2 = self.abs_sq(ctx);
        let half = ctx.from_f64(0.5);
        let ln_r2 = ctx.ln(&r2);
        let re = ctx.mul(&ln_r2, &half);
        let im = ctx.atan2(&self.im, &self.re);
        Complex::new(re, im)
    }
}

/// `base^(-s)` for a positive integer base and complex exponent `s`:
/// `exp(-s ln base)`.
pub fn integer_power_neg_s(base: u64, s: &Complex, ctx: &mut Ctx) -> Complex {
    let ln_base = ctx.ln(&ctx.from_u64(base));
    // -s * ln(base) = (-re*ln, -im*ln); exp(a+bi) = e^a (cos b + i sin b)
    let a = ctx.mul(&s.re, &ln_base).neg();
    let b = ctx.mul(&s.im, &ln_base).neg();
    let mag = ctx.exp(&a);
    let cos_b = ctx.cos(&b);
    let sin_b = ctx.sin(&b);
    Complex::new(ctx.mul(&mag, &cos_b), ctx.mul(&mag, &sin_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_roundtrips_and_functions() {
        let mut ctx = Ctx::new(128);
        assert_eq!(to_f64(&ctx.from_f64(-0.1234)), -0.1234);
        assert_eq!(to_f64(&ctx.zero()), 0.0);
        let l2 = ctx.ln(&ctx.from_u64(2));
        assert!((to_f64(&l2) - std::f64::consts::LN_2).abs() < 1e-15);
        let r = ctx.from_rational(&Rational::new(1.into(), 3.into()));
        assert!((to_f64(&r) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn atan2_quadrants() {
        let mut ctx = Ctx::new(128);
        let cases = [
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.5, 2.0),
        ];
        for (y, x) in cases {
            let got = to_f64(&ctx.atan2(&ctx.from_f64(y), &ctx.from_f64(x)));
            assert!(
                (got - y.atan2(x)).abs() < 1e-15,
                "atan2({y},{x}): {got} vs {}",
                y.atan2(x)
            );
        }
    }

    #[test]
    fn complex_power_matches_f64() {
        let mut ctx = Ctx::new(128);
        let s = Complex::from_f64(0.7, -2.3, &ctx);
        let z = integer_power_neg_s(3, &s, &mut ctx);
        // 3^{-s} via f64
        let ln3 = 3f64.ln();
        let mag = (-0.7 * ln3).exp();
        let (re, im) = (mag * (2.3 * ln3).cos(), mag * (2.3 * ln3).sin());
        assert!((to_f64(&z.re) - re).abs() < 1e-14);
        assert!((to_f64(&z.im) - im).abs() < 1e-14);
    }

    #[test]
    fn complex_ln_principal_branch() {
        let mut ctx = Ctx::new(128);
        let z = Complex::from_f64(-1.0, 0.5, &ctx);
        let l = z.ln(&mut ctx);
        let expected_re = (1.25f64).sqrt().ln();
        let expected_im = 0.5f64.atan2(-1.0);
        assert!((to_f64(&l.re) - expected_re).abs() < 1e-14);
        assert!((to_f64(&l.im) - expected_im).abs() < 1e-14);
    }
}
