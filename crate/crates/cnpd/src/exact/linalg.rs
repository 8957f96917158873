//! Exact integer/rational linear algebra: rank over Q by fraction-free
//! (Bareiss) elimination, and primitive integer bases of row-relation
//! lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix::new(r, c, entries)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Submatrix keeping the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        IntMatrix::new(idx.len(), self.cols, entries)
    }
}

/// Rank of the row space over Q, computed exactly by fraction-free
/// Gaussian elimination (one-step Bareiss).
pub fn rational_rank(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // exact by the Bareiss minor identity
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Basis of the left kernel `{v : v^T m = 0}` as primitive integer vectors.
///
/// Each basis vector has gcd of entries 1 and first nonzero entry positive;
/// vectors are ordered by the index of their defining free coordinate.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    // left kernel of m = kernel of m^T
    let (r, c) = (m.rows, m.cols);
    let mut q: Vec<Vec<Rational>> = (0..c)
        .map(|j| {
            (0..r)
                .map(|i| BigRational::from_integer(m.get(i, j).clone()))
                .collect()
        })
        .collect();
    let pivots = rref_in_place(&mut q);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; r];
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for f in 0..r {
        if pivot_set[f].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); r];
        v[f] = BigRational::one();
        for (col, slot) in pivot_set.iter().enumerate() {
            if let Some(row) = slot {
                v[col] = -q[*row][f].clone();
            }
        }
        basis.push(to_primitive_integer(&v));
    }
    basis
}

/// Reduced row echelon form in place; returns pivot column indices per pivot row.
fn rref_in_place(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][c].recip();
        for j in c..cols {
            let scaled = &a[r][j] * &inv;
            a[r][j] = scaled;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..cols {
                    let sub = &a[i][j] - &factor * &a[r][j];
                    a[i][j] = sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scales a rational vector to integers with gcd 1 and first nonzero entry positive.
fn to_primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
    }
    ints
}

/// Expresses `target` as a rational combination of the rows of `m`, if possible.
///
/// Returns coefficients `x` with `sum_i x_i * row_i = target`, or `None` when
/// `target` lies outside the row span. Requires the rows of `m` to be linearly
/// independent so the coefficients are unique.
pub fn solve_row_combination(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<Rational>> {
    assert_eq!(
        target.len(),
        m.cols,
        "target length must match column count"
    );
    let (r, c) = (m.rows, m.cols);
    // augmented system over the transpose: columns are the rows of m
    let mut a: Vec<Vec<Rational>> = (0..c)
        .map(|j| {
            let mut row: Vec<Rational> = (0..r)
                .map(|i| BigRational::from_integer(m.get(i, j).clone()))
                .collect();
            row.push(BigRational::from_integer(target[j].clone()));
            row
        })
        .collect();
    let pivots = rref_in_place(&mut a);
    // inconsistent if the augmented column is a pivot
    if pivots.contains(&r) {
        return None;
    }
    let mut x = vec![BigRational::zero(); r];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = a[row][r].clone();
    }
    Some(x)
}
