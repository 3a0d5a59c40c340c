//! Dense matrices over the Gaussian rationals with exact echelon reduction.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix. Zero-row and zero-column shapes are legal and show
/// up routinely in Kronecker blocks.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl TryFrom<MatrixRepr> for ExactMatrix {
    type Error = String;
    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        if r.entries.len() != r.rows * r.cols {
            return Err(format!(
                "matrix {}x{} needs {} entries, got {}",
                r.rows,
                r.cols,
                r.rows * r.cols,
                r.entries.len()
            ));
        }
        Ok(ExactMatrix { rows: r.rows, cols: r.cols, entries: r.entries })
    }
}

impl From<ExactMatrix> for MatrixRepr {
    fn from(m: ExactMatrix) -> Self {
        MatrixRepr { rows: m.rows, cols: m.cols, entries: m.entries }
    }
}

/// Result of reduced row echelon reduction.
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    /// Integer-entry helper for tests and block constructors.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        ExactMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<Scalar>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), rows, "column length mismatch");
        }
        ExactMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose (adjoint) for the standard sesquilinear form.
    pub fn adjoint(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        ExactMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !rhs[(k, j)].is_zero() {
                    acc += (&self[(i, k)]).mul(&rhs[(k, j)]);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !v[k].is_zero() {
                        acc += (&self[(i, k)]).mul(&v[k]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| (&self[(i, j)]).add(&rhs[(i, j)]))
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| (&self[(i, j)]).sub(&rhs[(i, j)]))
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| (&self[(i, j)]).mul(c))
    }

    pub fn neg(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// `[self | rhs]` side by side.
    pub fn hstack(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        ExactMatrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self; rhs]` stacked.
    pub fn vstack(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        ExactMatrix::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(blocks: &[ExactMatrix]) -> ExactMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = ExactMatrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn row_slice(&self, from: usize, to: usize) -> ExactMatrix {
        assert!(from <= to && to <= self.rows);
        ExactMatrix::from_fn(to - from, self.cols, |i, j| self[(from + i, j)].clone())
    }

    /// Reduced row echelon form with pivot columns and rank.
    ///
    /// Elimination is fraction-free (cross-multiplication) on primitive
    /// Gaussian-integer rows — rational coefficients appear only when pivot
    /// rows are normalized to leading 1 at the very end. Without the
    /// primitive reduction after each step the entries grow exponentially on
    /// dense inputs; without the integer representation every operation pays
    /// for rational normalization it never needs.
    pub fn rref(&self) -> Rref {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One as _, Zero as _};
        type G = (BigInt, BigInt);

        fn g_is_zero(a: &G) -> bool {
            a.0.is_zero() && a.1.is_zero()
        }
        fn g_mul(a: &G, b: &G) -> G {
            (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
        }
        /// Divide out the integer content of a row.
        fn strip_content(row: &mut [G]) {
            let mut gcd = BigInt::zero();
            for g in row.iter() {
                gcd = gcd.gcd(&g.0);
                gcd = gcd.gcd(&g.1);
            }
            if gcd.is_zero() || gcd.magnitude().is_one() {
                return;
            }
            for g in row.iter_mut() {
                g.0 /= &gcd;
                g.1 /= &gcd;
            }
        }

        // Unit row scalings do not change the rref, so clear denominators and
        // strip content per row up front.
        let mut m: Vec<Vec<G>> = (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let mut lcm = num_traits::One::one();
                for s in row {
                    lcm = Integer::lcm(&lcm, s.re.denom());
                    lcm = Integer::lcm(&lcm, s.im.denom());
                }
                let mut out: Vec<G> = row
                    .iter()
                    .map(|s| {
                        (s.re.numer() * &lcm / s.re.denom(), s.im.numer() * &lcm / s.im.denom())
                    })
                    .collect();
                strip_content(&mut out);
                out
            })
            .collect();

        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&i| !g_is_zero(&m[i][col])) else {
                continue;
            };
            m.swap(row, pivot_row);
            let prow = m[row].clone();
            let pivot = prow[col].clone();
            for (i, mrow) in m.iter_mut().enumerate() {
                if i != row && !g_is_zero(&mrow[col]) {
                    let factor = mrow[col].clone();
                    // Row_i <- pivot*Row_i - factor*Row_pivot: stays integral
                    // and zeroes column `col` by design.
                    for j in 0..self.cols {
                        let scaled = g_mul(&pivot, &mrow[j]);
                        let delta = g_mul(&factor, &prow[j]);
                        mrow[j] = (scaled.0 - delta.0, scaled.1 - delta.1);
                    }
                    strip_content(mrow);
                }
            }
            pivots.push(col);
            row += 1;
        }

        let rank = pivots.len();
        let mut out = ExactMatrix::zero(self.rows, self.cols);
        for (i, &col) in pivots.iter().enumerate() {
            let to_scalar = |g: &G| {
                Scalar::new(
                    crate::scalar::Rational::from_integer(g.0.clone()),
                    crate::scalar::Rational::from_integer(g.1.clone()),
                )
            };
            let inv = to_scalar(&m[i][col]).inv().expect("pivot nonzero");
            for j in 0..self.cols {
                if !g_is_zero(&m[i][j]) {
                    out[(i, j)] = (&to_scalar(&m[i][j])).mul(&inv);
                }
            }
        }
        Rref { matrix: out, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, one column per free variable.
    /// `self * result == 0` exactly and `rank + result.cols == cols`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let Rref { matrix: r, pivots, rank } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -&r[(i, f)];
            }
            cols.push(v);
        }
        ExactMatrix::from_columns(self.cols, cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Exact inverse via Gauss-Jordan on `[self | I]`.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let aug = self.hstack(&ExactMatrix::identity(self.rows));
        let red = aug.rref();
        // Invertible iff every pivot lands in the left block, i.e. pivot i is
        // column i for all i.
        if red.pivots.iter().enumerate().any(|(i, &p)| p != i) || red.rank != self.rows {
            return Err(Error::SingularTransform);
        }
        Ok(ExactMatrix::from_fn(self.rows, self.cols, |i, j| {
            red.matrix[(i, self.cols + j)].clone()
        }))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
