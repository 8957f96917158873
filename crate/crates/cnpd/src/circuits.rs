//! Rational-dependence structure of frequency data.
//!
//! Distinct integers `n_1, ..., n_d >= 2` have rationally dependent
//! logarithms exactly when their prime-exponent vectors are dependent over
//! Q. A *circuit* is a minimal dependent index set; it carries a unique
//! primitive positive exponent tuple `beta` and a unique partition of its
//! support into two sides with `prod_left n_i^{beta_i} = prod_right
//! n_i^{beta_i}`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{
    factorize, integer_kernel_basis, rational_rank, solve_row_combination, IntMatrix, Rational,
};

/// Largest supported tuple length for circuit enumeration.
pub const DEFAULT_DIMENSION_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("frequency {0} is below 2")]
    InvalidFrequency(u64),
    #[error("frequency {0} appears more than once")]
    DuplicateFrequency(u64),
    #[error("tuple length {d} exceeds enumeration bound {bound}")]
    DimensionBound { d: usize, bound: usize },
    #[error("index {0} is out of range or repeated")]
    BadIndex(usize),
    #[error("index set is linearly independent, not a circuit")]
    NotDependent,
    #[error("a proper subset is already dependent, not a circuit")]
    ProperSubsetDependent,
    #[error("basis rows are linearly dependent")]
    BasisDependent,
    #[error("frequency at index {0} is not in the rational span of the basis")]
    NotInSpan(usize),
}

/// Prime-exponent matrix of a frequency tuple: row `j` holds the exponents
/// of `n_j` over the sorted primes dividing any entry.
#[derive(Debug, Clone)]
pub struct ExponentMatrix {
    pub primes: Vec<u64>,
    pub matrix: IntMatrix,
}

impl ExponentMatrix {
    pub fn build(n: &[u64]) -> Result<Self, CircuitError> {
        let mut seen = std::collections::BTreeSet::new();
        for &x in n {
            if x < 2 {
                return Err(CircuitError::InvalidFrequency(x));
            }
            if !seen.insert(x) {
                return Err(CircuitError::DuplicateFrequency(x));
            }
        }
        let factorizations: Vec<_> = n
            .iter()
            .map(|&x| factorize(x).expect("validated above"))
            .collect();
        let mut primes: Vec<u64> = factorizations
            .iter()
            .flat_map(|f| f.factors.iter().map(|&(p, _)| p))
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let rows: Vec<Vec<i64>> = factorizations
            .iter()
            .map(|f| primes.iter().map(|&p| f.exponent_of(p) as i64).collect())
            .collect();
        Ok(ExponentMatrix {
            primes,
            matrix: IntMatrix::from_rows(&rows),
        })
    }
}

/// Minimal rationally dependent index set with its canonical decomposition.
///
/// Indices are 0-based and sorted; `beta` is parallel to `support`; `left`
/// is the side of the partition containing the smallest index. The product
/// identity `prod_left n_i^{beta_i} = prod_right n_i^{beta_i}` is verified
/// by big-integer multiplication on construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    pub support: Vec<usize>,
    pub beta: Vec<u64>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Circuit {
    pub fn beta_of(&self, index: usize) -> Option<u64> {
        self.support
            .iter()
            .position(|&i| i == index)
            .map(|pos| self.beta[pos])
    }

    fn bitmask(&self) -> u32 {
        self.support.iter().fold(0u32, |m, &i| m | (1 << i))
    }

    /// Applies an index relabeling `old -> map[old]`, renormalizing the
    /// canonical side labels.
    pub fn relabel(&self, map: &[usize]) -> Circuit {
        let mut items: Vec<(usize, u64, bool)> = self
            .support
            .iter()
            .zip(&self.beta)
            .map(|(&i, &b)| (map[i], b, self.left.contains(&i)))
            .collect();
        items.sort_unstable();
        let support: Vec<usize> = items.iter().map(|&(i, _, _)| i).collect();
        let beta: Vec<u64> = items.iter().map(|&(_, b, _)| b).collect();
        let mut left: Vec<usize> = items
            .iter()
            .filter(|&&(_, _, l)| l)
            .map(|&(i, _, _)| i)
            .collect();
        let mut right: Vec<usize> = items
            .iter()
            .filter(|&&(_, _, l)| !l)
            .map(|&(i, _, _)| i)
            .collect();
        if right.first() < left.first() {
            std::mem::swap(&mut left, &mut right);
        }
        Circuit {
            support,
            beta,
            left,
            right,
        }
    }
}

/// True when the logarithms of the frequencies are linearly independent
/// over Q, i.e. the exponent rows have full rank.
pub fn log_independent(n: &[u64]) -> Result<bool, CircuitError> {
    let em = ExponentMatrix::build(n)?;
    Ok(rational_rank(&em.matrix) == n.len())
}

/// Enumerates all circuits of the frequency tuple with the default
/// dimension bound.
pub fn enumerate_circuits(n: &[u64]) -> Result<Vec<Circuit>, CircuitError> {
    enumerate_circuits_with_bound(n, DEFAULT_DIMENSION_BOUND)
}

/// Enumerates all circuits: subsets are scanned by increasing size in
/// lexicographic order, supersets of found circuits are skipped, and
/// dependence is decided by exact rank. Circuits have at most `rank + 1`
/// elements, bounding the scan.
pub fn enumerate_circuits_with_bound(
    n: &[u64],
    bound: usize,
) -> Result<Vec<Circuit>, CircuitError> {
    let d = n.len();
    if d > bound || d > 32 {
        return Err(CircuitError::DimensionBound { d, bound });
    }
    let em = ExponentMatrix::build(n)?;
    let full_rank = rational_rank(&em.matrix);
    let mut found: Vec<Circuit> = Vec::new();
    let mut masks: Vec<u32> = Vec::new();
    let max_size = d.min(full_rank + 1);
    let mut subset = Vec::new();
    for size in 2..=max_size {
        combinations(d, size, &mut subset, &mut |sub| {
            let mask = sub.iter().fold(0u32, |m, &i| m | (1 << i));
            if masks.iter().any(|&c| c & mask == c) {
                return;
            }
            let rank = rational_rank(&em.matrix.select_rows(sub));
            if rank < sub.len() {
                let circuit =
                    decompose_known_circuit(n, &em, sub).expect("dependent with minimal support");
                masks.push(circuit.bitmask());
                found.push(circuit);
            }
        });
    }
    found.sort_by(|a, b| (a.support.len(), &a.support).cmp(&(b.support.len(), &b.support)));
    Ok(found)
}

fn combinations(d: usize, size: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        d: usize,
        size: usize,
        buf: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let remaining = size - buf.len();
        for i in start..=d.saturating_sub(remaining) {
            buf.push(i);
            rec(i + 1, d, size, buf, f);
            buf.pop();
        }
    }
    buf.clear();
    rec(0, d, size, buf, f);
}

/// Decomposes a circuit index set into its unique primitive relation:
/// `beta` from the magnitudes of the one-dimensional relation lattice
/// generator, sides from the signs (the side of the smallest index first).
pub fn circuit_decompose(n: &[u64], support: &[usize]) -> Result<Circuit, CircuitError> {
    let em = ExponentMatrix::build(n)?;
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != support.len() || sorted.iter().any(|&i| i >= n.len()) {
        return Err(CircuitError::BadIndex(*support.iter().max().unwrap_or(&0)));
    }
    if sorted.len() < 2 {
        return Err(CircuitError::NotDependent);
    }
    decompose_known_circuit(n, &em, &sorted)
}

fn decompose_known_circuit(
    n: &[u64],
    em: &ExponentMatrix,
    support: &[usize],
) -> Result<Circuit, CircuitError> {
    let sub = em.matrix.select_rows(support);
    let kernel = integer_kernel_basis(&sub);
    match kernel.len() {
        0 => return Err(CircuitError::NotDependent),
        1 => {}
        _ => return Err(CircuitError::ProperSubsetDependent),
    }
    let v = &kernel[0];
    if v.iter().any(|x| x.is_zero()) {
        // a relation missing an element lives on a proper subset
        return Err(CircuitError::ProperSubsetDependent);
    }
    // kernel vector is primitive with positive leading entry, so the side
    // of the smallest index is the positive one
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut beta = Vec::with_capacity(v.len());
    for (pos, coeff) in v.iter().enumerate() {
        let idx = support[pos];
        beta.push(coeff.abs().to_u64().expect("desk-scale exponent"));
        if coeff.is_positive() {
            left.push(idx);
        } else {
            right.push(idx);
        }
    }
    let circuit = Circuit {
        support: support.to_vec(),
        beta,
        left,
        right,
    };
    assert!(
        verify_product_identity(n, &circuit),
        "relation lattice generator must satisfy the product identity"
    );
    Ok(circuit)
}

/// Big-integer check of `prod_left n_i^{beta_i} == prod_right n_i^{beta_i}`.
pub fn verify_product_identity(n: &[u64], c: &Circuit) -> bool {
    let side = |idx: &[usize]| -> BigUint {
        idx.iter().fold(BigUint::from(1u32), |acc, &i| {
            acc * BigUint::from(n[i]).pow(c.beta_of(i).unwrap() as u32)
        })
    };
    side(&c.left) == side(&c.right)
}

/// Expresses `n_k` as an exact rational-exponent product of basis
/// frequencies: returns the nonzero exponents `r_i` with
/// `n_k = prod_i n_i^{r_i}`, verified by clearing denominators and
/// comparing big integers.
pub fn fundamental_relation(
    n: &[u64],
    basis: &[usize],
    k: usize,
) -> Result<BTreeMap<usize, Rational>, CircuitError> {
    let em = ExponentMatrix::build(n)?;
    if k >= n.len() {
        return Err(CircuitError::BadIndex(k));
    }
    let mut sorted = basis.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != basis.len() || sorted.iter().any(|&i| i >= n.len()) {
        return Err(CircuitError::BadIndex(*basis.iter().max().unwrap_or(&0)));
    }
    let basis_matrix = em.matrix.select_rows(&sorted);
    if rational_rank(&basis_matrix) != sorted.len() {
        return Err(CircuitError::BasisDependent);
    }
    let target: Vec<BigInt> = em.matrix.row(k).to_vec();
    let coeffs = solve_row_combination(&basis_matrix, &target).ok_or(CircuitError::NotInSpan(k))?;
    let mut relation = BTreeMap::new();
    for (pos, r) in coeffs.iter().enumerate() {
        if !r.is_zero() {
            relation.insert(sorted[pos], r.clone());
        }
    }
    assert!(
        verify_rational_power_identity(n, k, &relation),
        "solved exponents must reproduce the frequency exactly"
    );
    Ok(relation)
}

/// Checks `n_k == prod n_i^{r_i}` exactly by clearing denominators:
/// `n_k^L * prod_{r_i < 0} n_i^{|r_i| L} == prod_{r_i > 0} n_i^{r_i L}`.
pub fn verify_rational_power_identity(
    n: &[u64],
    k: usize,
    relation: &BTreeMap<usize, Rational>,
) -> bool {
    let mut lcm = BigInt::from(1);
    for r in relation.values() {
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    let l_u32 = |x: &BigInt| x.to_u32().expect("desk-scale exponent");
    let mut lhs = BigUint::from(n[k]).pow(l_u32(&lcm));
    let mut rhs = BigUint::from(1u32);
    for (&i, r) in relation {
        let exp = l_u32(&(r.numer() * &lcm / r.denom()).abs());
        let power = BigUint::from(n[i]).pow(exp);
        if r.is_positive() {
            rhs *= power;
        } else {
            lhs *= power;
        }
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circuit(support: &[usize], beta: &[u64], left: &[usize], right: &[usize]) -> Circuit {
        Circuit {
            support: support.to_vec(),
            beta: beta.to_vec(),
            left: left.to_vec(),
            right: right.to_vec(),
        }
    }

    #[test]
    fn log_independent_fixtures() {
        assert!(log_independent(&[2, 3, 5, 7]).unwrap());
        assert!(!log_independent(&[2, 3, 6]).unwrap());
        assert!(!log_independent(&[2, 4]).unwrap());
    }

    #[test]
    fn exponent_matrix_rejects_bad_input() {
        assert_eq!(
            ExponentMatrix::build(&[2, 1]).unwrap_err(),
            CircuitError::InvalidFrequency(1)
        );
        assert_eq!(
            ExponentMatrix::build(&[2, 3, 2]).unwrap_err(),
            CircuitError::DuplicateFrequency(2)
        );
    }

    #[test]
    fn enumerate_two_three_six() {
        let got = enumerate_circuits(&[2, 3, 6]).unwrap();
        assert_eq!(got, vec![circuit(&[0, 1, 2], &[1, 1, 1], &[0, 1], &[2])]);
    }

    #[test]
    fn enumerate_independent_is_empty() {
        assert!(enumerate_circuits(&[2, 3, 5, 7]).unwrap().is_empty());
    }

    #[test]
    fn enumerate_prime_square_pair() {
        let got = enumerate_circuits(&[2, 3, 4, 5]).unwrap();
        assert_eq!(got, vec![circuit(&[0, 2], &[2, 1], &[0], &[2])]);
    }

    #[test]
    fn padding_with_primes_preserves_the_circuit() {
        // extra prime frequencies never join a minimal dependent set
        let got = enumerate_circuits(&[2, 3, 6, 7, 11, 13]).unwrap();
        assert_eq!(got, vec![circuit(&[0, 1, 2], &[1, 1, 1], &[0, 1], &[2])]);
    }

    #[test]
    fn enumerate_five_tuple_family() {
        // 6*35 = 10*21, 6^2*10 = 360, and the two implied minimal relations
        // 6^3*35 = 21*360 and 10^3*21^2 = 35^2*360
        let n = [6, 10, 21, 35, 360];
        let got = enumerate_circuits(&n).unwrap();
        let expected = vec![
            circuit(&[0, 1, 4], &[2, 1, 1], &[0, 1], &[4]),
            circuit(&[0, 1, 2, 3], &[1, 1, 1, 1], &[0, 3], &[1, 2]),
            circuit(&[0, 2, 3, 4], &[3, 1, 1, 1], &[0, 3], &[2, 4]),
            circuit(&[1, 2, 3, 4], &[3, 2, 2, 1], &[1, 2], &[3, 4]),
        ];
        assert_eq!(got, expected);
        for c in &got {
            assert!(verify_product_identity(&n, c));
        }
    }

    #[test]
    fn decompose_fixtures() {
        let c = circuit_decompose(&[2, 3, 12], &[0, 1, 2]).unwrap();
        assert_eq!(c, circuit(&[0, 1, 2], &[2, 1, 1], &[0, 1], &[2]));

        let c = circuit_decompose(&[2, 4], &[0, 1]).unwrap();
        assert_eq!(c, circuit(&[0, 1], &[2, 1], &[0], &[1]));

        assert_eq!(
            circuit_decompose(&[2, 3, 6], &[0, 1]).unwrap_err(),
            CircuitError::NotDependent
        );
    }

    #[test]
    fn decompose_rejects_non_minimal() {
        // {2,4,8} is dependent but contains the dependent pair {2,4}
        assert_eq!(
            circuit_decompose(&[2, 4, 8], &[0, 1, 2]).unwrap_err(),
            CircuitError::ProperSubsetDependent
        );
    }

    #[test]
    fn fundamental_relation_fixtures() {
        let rel = fundamental_relation(&[2, 3, 12], &[0, 1], 2).unwrap();
        assert_eq!(rel[&0], Rational::from_integer(2.into()));
        assert_eq!(rel[&1], Rational::from_integer(1.into()));

        let rel = fundamental_relation(&[2, 3, 6], &[0, 1], 2).unwrap();
        assert_eq!(rel[&0], Rational::from_integer(1.into()));
        assert_eq!(rel[&1], Rational::from_integer(1.into()));

        let rel = fundamental_relation(&[2, 8], &[0], 1).unwrap();
        assert_eq!(rel[&0], Rational::from_integer(3.into()));
    }

    #[test]
    fn fundamental_relation_rational_exponents() {
        // 8 = 4^{3/2}
        let rel = fundamental_relation(&[4, 8], &[0], 1).unwrap();
        assert_eq!(rel[&0], Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn fundamental_relation_errors() {
        assert_eq!(
            fundamental_relation(&[2, 3, 5], &[0, 1], 2).unwrap_err(),
            CircuitError::NotInSpan(2)
        );
        assert_eq!(
            fundamental_relation(&[2, 4, 8], &[0, 1], 2).unwrap_err(),
            CircuitError::BasisDependent
        );
    }

    #[test]
    fn beta_perturbation_breaks_identity() {
        for n in [vec![2u64, 3, 6], vec![2, 3, 12], vec![6, 10, 21, 35, 360]] {
            for c in enumerate_circuits(&n).unwrap() {
                for pos in 0..c.support.len() {
                    for delta in [-1i64, 1] {
                        let mut perturbed = c.clone();
                        let b = perturbed.beta[pos] as i64 + delta;
                        if b < 0 {
                            continue;
                        }
                        perturbed.beta[pos] = b as u64;
                        assert!(
                            !verify_product_identity(&n, &perturbed),
                            "perturbed beta must fail: {n:?} {perturbed:?}"
                        );
                    }
                }
            }
        }
    }

    /// Brute-force circuit scan with plain rational elimination, independent
    /// of rank pruning and the kernel-basis decomposition path.
    fn brute_force_circuits(n: &[u64]) -> Vec<Vec<usize>> {
        let em = ExponentMatrix::build(n).unwrap();
        let d = n.len();
        let mut result: Vec<Vec<usize>> = Vec::new();
        for mask in 1u32..(1 << d) {
            let sub: Vec<usize> = (0..d).filter(|&i| mask & (1 << i) != 0).collect();
            if sub.len() < 2 {
                continue;
            }
            let dependent = rational_rank(&em.matrix.select_rows(&sub)) < sub.len();
            if !dependent {
                continue;
            }
            let minimal = sub.iter().all(|&skip| {
                let proper: Vec<usize> = sub.iter().copied().filter(|&i| i != skip).collect();
                rational_rank(&em.matrix.select_rows(&proper)) == proper.len()
            });
            if minimal {
                result.push(sub);
            }
        }
        result.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        result
    }

    #[test]
    fn enumeration_matches_brute_force_on_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let primes = [2u64, 3, 5, 7, 11, 13];
        for _ in 0..60 {
            let d = rng.gen_range(2..=7);
            let mut values = std::collections::BTreeSet::new();
            while values.len() < d {
                let mut v: u64 = 1;
                let count = rng.gen_range(1..=3);
                let picks: Vec<u64> = primes.choose_multiple(&mut rng, count).copied().collect();
                for p in picks {
                    v = v.saturating_mul(p.pow(rng.gen_range(1..=3)));
                }
                if (2..=10_000).contains(&v) {
                    values.insert(v);
                }
            }
            let n: Vec<u64> = values.into_iter().collect();
            let got: Vec<Vec<usize>> = enumerate_circuits(&n)
                .unwrap()
                .into_iter()
                .map(|c| c.support)
                .collect();
            assert_eq!(got, brute_force_circuits(&n), "tuple {n:?}");
        }
    }

    #[test]
    fn circuits_commute_with_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tuples = [
            vec![2u64, 3, 6, 5, 36],
            vec![6, 10, 21, 35, 360],
            vec![2, 4, 8, 3],
        ];
        for n in tuples {
            let base = enumerate_circuits(&n).unwrap();
            for _ in 0..5 {
                let mut perm: Vec<usize> = (0..n.len()).collect();
                perm.shuffle(&mut rng);
                // sigma(n)_i = n[perm[i]]; index i in sigma(n) holds old index perm[i]
                let permuted: Vec<u64> = perm.iter().map(|&i| n[i]).collect();
                let mut inverse = vec![0usize; perm.len()];
                for (new, &old) in perm.iter().enumerate() {
                    inverse[old] = new;
                }
                let mut expected: Vec<Circuit> = base.iter().map(|c| c.relabel(&inverse)).collect();
                expected.sort_by(|a, b| {
                    (a.support.len(), &a.support).cmp(&(b.support.len(), &b.support))
                });
                assert_eq!(enumerate_circuits(&permuted).unwrap(), expected);
            }
        }
    }

    #[test]
    fn circuits_invariant_under_frequency_squaring() {
        // n_j -> n_j^2 scales every exponent row by 2: same relation lattice
        for n in [vec![2u64, 3, 6], vec![2, 3, 12], vec![6, 10, 21, 35, 360]] {
            let squared: Vec<u64> = n.iter().map(|&x| x * x).collect();
            assert_eq!(
                enumerate_circuits(&n).unwrap(),
                enumerate_circuits(&squared).unwrap()
            );
        }
    }

    #[test]
    fn dimension_bound_enforced() {
        let n: Vec<u64> = (2..40).collect();
        assert!(matches!(
            enumerate_circuits(&n).unwrap_err(),
            CircuitError::DimensionBound { .. }
        ));
    }
}
