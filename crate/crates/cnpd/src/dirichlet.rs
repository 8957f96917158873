//! Truncated Dirichlet-series arithmetic over the rationals: convolution
//! product, reciprocal series, the CNP sign test on inverse coefficients,
//! ordered-factorization counts, and the zeta-factor divisor condition.
//!
//! Truncation limits are always explicit; coefficients are stored sparsely
//! (kernel reciprocals are supported only on products of the frequency set).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{divisors, factorize, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirichletError {
    #[error("truncation limit {requested} exceeds operand limit {available}")]
    Truncation { requested: u64, available: u64 },
    #[error("series is not invertible: coefficient at index 1 is zero")]
    NotInvertible,
}

/// Finitely truncated Dirichlet series: coefficient map over indexes
/// `1..=limit`, absent entries meaning zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCoefficients {
    limit: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl DirichletCoefficients {
    pub fn new(limit: u64) -> Self {
        assert!(limit >= 1, "limit must be at least 1");
        DirichletCoefficients {
            limit,
            coeffs: BTreeMap::new(),
        }
    }

    /// The identity series: coefficient 1 at index 1.
    pub fn delta(limit: u64) -> Self {
        let mut s = DirichletCoefficients::new(limit);
        s.set(1, Rational::one());
        s
    }

    /// Constant-one coefficients up to `limit`.
    pub fn ones(limit: u64) -> Self {
        let mut s = DirichletCoefficients::new(limit);
        for n in 1..=limit {
            s.set(n, Rational::one());
        }
        s
    }

    pub fn from_entries(limit: u64, entries: &[(u64, Rational)]) -> Self {
        let mut s = DirichletCoefficients::new(limit);
        for (n, v) in entries {
            s.set(*n, v.clone());
        }
        s
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn set(&mut self, n: u64, value: Rational) {
        assert!(
            (1..=self.limit).contains(&n),
            "index {n} outside 1..={}",
            self.limit
        );
        if value.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, value);
        }
    }

    pub fn coeff(&self, n: u64) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in index order.
    pub fn support(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.coeffs.iter().map(|(&n, v)| (n, v))
    }

    pub fn is_delta(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(1).is_one()
    }

    /// Restriction to indexes `<= limit`.
    pub fn truncated(&self, limit: u64) -> Self {
        let mut s = DirichletCoefficients::new(limit);
        for (&n, v) in self.coeffs.range(1..=limit) {
            s.set(n, v.clone());
        }
        s
    }
}

/// Dirichlet convolution truncated at `limit`: coefficient of `n` is
/// `sum_{m|n} a_m b_{n/m}`.
pub fn multiply(
    a: &DirichletCoefficients,
    b: &DirichletCoefficients,
    limit: u64,
) -> Result<DirichletCoefficients, DirichletError> {
    let available = a.limit.min(b.limit);
    if limit > available {
        return Err(DirichletError::Truncation {
            requested: limit,
            available,
        });
    }
    let mut out = DirichletCoefficients::new(limit);
    for (m, am) in a.support() {
        if m > limit {
            break;
        }
        for (k, bk) in b.support() {
            let Some(n) = m.checked_mul(k) else { break };
            if n > limit {
                break;
            }
            let acc = out.coeff(n) + am * bk;
            out.set(n, acc);
        }
    }
    Ok(out)
}

/// Reciprocal series truncated at `limit`, via the divisor recursion
/// `c_1 = 1/a_1`, `c_n = -(1/a_1) sum_{m|n, m>1} a_m c_{n/m}`.
pub fn invert(
    a: &DirichletCoefficients,
    limit: u64,
) -> Result<DirichletCoefficients, DirichletError> {
    if limit > a.limit {
        return Err(DirichletError::Truncation {
            requested: limit,
            available: a.limit,
        });
    }
    let a1 = a.coeff(1);
    if a1.is_zero() {
        return Err(DirichletError::NotInvertible);
    }
    let inv_a1 = a1.recip();
    let mut c = DirichletCoefficients::new(limit);
    c.set(1, inv_a1.clone());
    for n in 2..=limit {
        let mut acc = Rational::zero();
        for m in divisors(n) {
            if m > 1 {
                let am = a.coeff(m);
                if !am.is_zero() {
                    acc += am * c.coeff(n / m);
                }
            }
        }
        if !acc.is_zero() {
            c.set(n, -(&inv_a1 * acc));
        }
    }
    Ok(c)
}

/// Outcome of the CNP sign test on a weight series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnpVerdict {
    pub is_cnp_up_to_limit: bool,
    /// Smallest index `n >= 2` where the inverse coefficient is positive.
    pub witness: Option<u64>,
}

/// Tests the CNP property of the kernel with weight series `w` up to
/// `limit`: the reciprocal coefficients must satisfy `c_n <= 0` for all
/// `2 <= n <= limit`.
pub fn cnp_check(w: &DirichletCoefficients, limit: u64) -> Result<CnpVerdict, DirichletError> {
    let c = invert(w, limit)?;
    for (n, v) in c.support() {
        if n >= 2 && v.is_positive() {
            return Ok(CnpVerdict {
                is_cnp_up_to_limit: false,
                witness: Some(n),
            });
        }
    }
    Ok(CnpVerdict {
        is_cnp_up_to_limit: true,
        witness: None,
    })
}

/// Number of ways of writing `n` as an ordered product of `m` factors.
///
/// Multiplicative in `n`; each prime power `p^e` contributes
/// `binomial(e + m - 1, m - 1)`.
pub fn ordered_factorization_count(m: u32, n: u64) -> u128 {
    assert!(m >= 1, "factor count must be at least 1");
    assert!(n >= 1, "argument must be at least 1");
    if n == 1 {
        return 1;
    }
    let mut total: u128 = 1;
    for (_, e) in factorize(n).expect("n >= 2").factors {
        total *= binomial(e as u128 + m as u128 - 1, m as u128 - 1);
    }
    total
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Outcome of the zeta-factor divisor-sum test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactorVerdict {
    pub holds_up_to_limit: bool,
    /// Smallest `n >= 2` where the divisor sum drops below 1.
    pub witness: Option<u64>,
}

/// Checks `sum_{m >= 2, m|n} b_{m-1} >= 1` for all `2 <= n <= limit`,
/// where `b` is indexed so that `b[j-1]` is the weight of frequency `j+1`
/// (frequency data an initial segment of the integers from 2). Weights
/// beyond the end of `b` count as zero.
pub fn zeta_factor_condition(b: &[Rational], limit: u64) -> ZetaFactorVerdict {
    for n in 2..=limit {
        let mut sum = Rational::zero();
        for m in divisors(n) {
            if m >= 2 && (m - 1) as usize <= b.len() {
                sum += &b[(m - 2) as usize];
            }
        }
        if sum < Rational::one() {
            return ZetaFactorVerdict {
                holds_up_to_limit: false,
                witness: Some(n),
            };
        }
    }
    ZetaFactorVerdict {
        holds_up_to_limit: true,
        witness: None,
    }
}

/// Squared norm `sum_n a_n^2 / w_n` of a series `f` against weights `w`;
/// `None` encodes an infinite norm (some `a_n != 0` where `w_n = 0`).
pub fn hk_norm_sq(f: &DirichletCoefficients, w: &DirichletCoefficients) -> Option<Rational> {
    let mut acc = Rational::zero();
    for (n, a) in f.support() {
        let wn = if n <= w.limit {
            w.coeff(n)
        } else {
            Rational::zero()
        };
        if wn.is_zero() {
            return None;
        }
        acc += a * a / wn;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Mobius function from the factorization, independent of `invert`.
    fn mobius(n: u64) -> i64 {
        if n == 1 {
            return 1;
        }
        let f = factorize(n).unwrap();
        if f.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn multiply_delta_is_identity() {
        let mut b = DirichletCoefficients::new(12);
        b.set(1, rat(3, 7));
        b.set(5, rat(-2, 3));
        b.set(9, rat(1, 4));
        let prod = multiply(&DirichletCoefficients::delta(12), &b, 10).unwrap();
        assert_eq!(prod, b.truncated(10));
    }

    #[test]
    fn multiply_single_terms() {
        let a = DirichletCoefficients::from_entries(6, &[(2, rat(1, 1))]);
        let b = DirichletCoefficients::from_entries(6, &[(3, rat(1, 1))]);
        let prod = multiply(&a, &b, 6).unwrap();
        assert_eq!(
            prod,
            DirichletCoefficients::from_entries(6, &[(6, rat(1, 1))])
        );
    }

    #[test]
    fn multiply_ones_gives_divisor_counts() {
        let ones = DirichletCoefficients::ones(6);
        let prod = multiply(&ones, &ones, 6).unwrap();
        let expected = [1, 2, 2, 3, 2, 4];
        for (n, d) in (1..=6).zip(expected) {
            assert_eq!(prod.coeff(n), rat(d, 1), "d_2({n})");
        }
    }

    #[test]
    fn multiply_rejects_over_truncation() {
        let a = DirichletCoefficients::ones(5);
        let b = DirichletCoefficients::ones(9);
        assert_eq!(
            multiply(&a, &b, 6),
            Err(DirichletError::Truncation {
                requested: 6,
                available: 5
            })
        );
    }

    #[test]
    fn invert_ones_is_mobius() {
        let inv = invert(&DirichletCoefficients::ones(10), 10).unwrap();
        for n in 1..=10 {
            assert_eq!(inv.coeff(n), rat(mobius(n), 1), "mu({n})");
        }
    }

    #[test]
    fn invert_delta_is_delta() {
        let d = DirichletCoefficients::delta(8);
        assert_eq!(invert(&d, 8).unwrap(), d);
    }

    /// Expansion of 1/(1 - sum_j b_j j^{-s}) by enumerating ordered factor
    /// chains, independent of both `multiply` and `invert`.
    fn geometric_expansion(weights: &[(u64, Rational)], n: u64) -> Rational {
        if n == 1 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for (f, b) in weights {
            if n % f == 0 {
                acc += b * geometric_expansion(weights, n / f);
            }
        }
        acc
    }

    #[test]
    fn invert_matches_geometric_expansion() {
        // 1 - (2^{-s} + 3^{-s})/2
        let a = DirichletCoefficients::from_entries(
            6,
            &[(1, rat(1, 1)), (2, rat(-1, 2)), (3, rat(-1, 2))],
        );
        let inv = invert(&a, 6).unwrap();
        let weights = [(2, rat(1, 2)), (3, rat(1, 2))];
        let expected = [
            rat(1, 1),
            rat(1, 2),
            rat(1, 2),
            rat(1, 4),
            rat(0, 1),
            rat(1, 2),
        ];
        for n in 1..=6 {
            assert_eq!(inv.coeff(n), expected[(n - 1) as usize], "index {n}");
            assert_eq!(
                inv.coeff(n),
                geometric_expansion(&weights, n),
                "oracle at {n}"
            );
        }
    }

    #[test]
    fn invert_requires_nonzero_leading_coefficient() {
        let a = DirichletCoefficients::from_entries(5, &[(2, rat(1, 1))]);
        assert_eq!(invert(&a, 5), Err(DirichletError::NotInvertible));
    }

    #[test]
    fn cnp_check_hardy_weights_fail_at_six() {
        let verdict = cnp_check(&DirichletCoefficients::ones(10), 10).unwrap();
        assert!(!verdict.is_cnp_up_to_limit);
        assert_eq!(verdict.witness, Some(6));
    }

    #[test]
    fn cnp_check_two_frequency_kernel_weights() {
        // weights of the kernel with b = (1/2, 1/2), n = (2, 3)
        let a = DirichletCoefficients::from_entries(
            50,
            &[(1, rat(1, 1)), (2, rat(-1, 2)), (3, rat(-1, 2))],
        );
        let w = invert(&a, 50).unwrap();
        let verdict = cnp_check(&w, 50).unwrap();
        assert!(verdict.is_cnp_up_to_limit, "witness {:?}", verdict.witness);
    }

    #[test]
    fn cnp_check_delta_is_vacuous() {
        let verdict = cnp_check(&DirichletCoefficients::delta(10), 10).unwrap();
        assert!(verdict.is_cnp_up_to_limit);
        assert_eq!(verdict.witness, None);
    }

    /// Ordered factorizations by direct recursion over the first factor.
    fn brute_force_ordered_count(m: u32, n: u64) -> u128 {
        if m == 1 {
            return 1;
        }
        divisors(n)
            .into_iter()
            .map(|k| brute_force_ordered_count(m - 1, n / k))
            .sum()
    }

    #[test]
    fn ordered_factorization_fixtures() {
        assert_eq!(ordered_factorization_count(2, 6), 4);
        assert_eq!(ordered_factorization_count(3, 4), 6);
        for n in [1u64, 2, 7, 12, 36, 60] {
            assert_eq!(ordered_factorization_count(1, n), 1);
        }
    }

    #[test]
    fn ordered_factorization_matches_brute_force() {
        for m in 1..=4u32 {
            for n in 1..=60u64 {
                assert_eq!(
                    ordered_factorization_count(m, n),
                    brute_force_ordered_count(m, n),
                    "d_{m}({n})"
                );
            }
        }
    }

    #[test]
    fn ordered_factorization_is_iterated_convolution() {
        let ones = DirichletCoefficients::ones(60);
        let mut power = DirichletCoefficients::delta(60);
        for m in 1..=4u32 {
            power = multiply(&power, &ones, 60).unwrap();
            for n in 1..=60 {
                let expected = Rational::from_integer(num_bigint::BigInt::from(
                    ordered_factorization_count(m, n),
                ));
                assert_eq!(power.coeff(n), expected, "d_{m}({n})");
            }
        }
    }

    #[test]
    fn zeta_factor_fixtures() {
        let ones: Vec<Rational> = (0..100).map(|_| rat(1, 1)).collect();
        assert!(zeta_factor_condition(&ones, 100).holds_up_to_limit);

        let d2: Vec<Rational> = (1..=100)
            .map(|j| rat(ordered_factorization_count(2, j + 1) as i64, 1))
            .collect();
        assert!(zeta_factor_condition(&d2, 100).holds_up_to_limit);

        let halves: Vec<Rational> = (0..10).map(|_| rat(1, 2)).collect();
        let verdict = zeta_factor_condition(&halves, 10);
        assert!(!verdict.holds_up_to_limit);
        assert_eq!(verdict.witness, Some(2));
    }

    #[test]
    fn hk_norm_fixtures() {
        let f = DirichletCoefficients::from_entries(5, &[(2, rat(1, 1)), (3, rat(2, 1))]);
        let w = DirichletCoefficients::from_entries(5, &[(2, rat(1, 2)), (3, rat(1, 1))]);
        assert_eq!(hk_norm_sq(&f, &w), Some(rat(6, 1)));

        let zero = DirichletCoefficients::new(5);
        assert_eq!(hk_norm_sq(&zero, &w), Some(rat(0, 1)));

        let w0 = DirichletCoefficients::from_entries(5, &[(3, rat(1, 1))]);
        let f2 = DirichletCoefficients::from_entries(5, &[(2, rat(1, 1))]);
        assert_eq!(hk_norm_sq(&f2, &w0), None);
    }

    fn random_series(rng: &mut ChaCha8Rng, limit: u64) -> DirichletCoefficients {
        let mut s = DirichletCoefficients::new(limit);
        // nonzero leading coefficient
        s.set(
            1,
            rat(
                *[1, -1, 2, 3, -2].get(rng.gen_range(0..5)).unwrap(),
                rng.gen_range(1..4),
            ),
        );
        let entries = rng.gen_range(3..20);
        for _ in 0..entries {
            let n = rng.gen_range(2..=limit);
            s.set(n, rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)));
        }
        s
    }

    #[test]
    fn invert_roundtrips_on_random_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let a = random_series(&mut rng, 200);
            let inv = invert(&a, 200).unwrap();
            assert!(multiply(&a, &inv, 200).unwrap().is_delta());
            assert_eq!(invert(&inv, 200).unwrap(), a.truncated(200));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiply_commutative_and_associative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let limit = 40;
            let a = random_series(&mut rng, limit);
            let b = random_series(&mut rng, limit);
            let c = random_series(&mut rng, limit);
            let ab = multiply(&a, &b, limit).unwrap();
            let ba = multiply(&b, &a, limit).unwrap();
            prop_assert_eq!(&ab, &ba);
            let ab_c = multiply(&ab, &c, limit).unwrap();
            let bc = multiply(&b, &c, limit).unwrap();
            let a_bc = multiply(&a, &bc, limit).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }
    }
}
