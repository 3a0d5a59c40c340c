//! Univariate polynomials over the Gaussian rationals, polynomial matrices,
//! Smith normal form, and exact rational root extraction.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{Rational, Scalar};

/// Coefficients stored lowest degree first; no trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Poly(vec![Scalar::zero(), Scalar::one()])
    }

    /// `s - lambda`.
    pub fn s_minus(lambda: &Scalar) -> Self {
        Poly::new(vec![-lambda, Scalar::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree of the zero polynomial is reported as 0 by convention; use
    /// `is_zero` to distinguish.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.0.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc).mul(x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().inv().expect("leading coefficient nonzero");
        Poly(self.0.iter().map(|c| c.mul(&inv)).collect())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn divrem(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dr = rhs.0.len() - 1;
        if rem.len() <= dr {
            return (Poly::zero(), Poly::new(rem));
        }
        let lead_inv = rhs.leading().inv().expect("leading coefficient nonzero");
        let mut quot = vec![Scalar::zero(); rem.len() - dr];
        while rem.len() > dr && !rem.is_empty() {
            let k = rem.len() - 1 - dr;
            let factor = rem.last().unwrap().mul(&lead_inv);
            if !factor.is_zero() {
                for (i, c) in rhs.0.iter().enumerate() {
                    let delta = (&factor).mul(c);
                    rem[k + i] = (&rem[k + i]).sub(&delta);
                }
            }
            quot[k] = factor;
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Scalar::from_int(i as i64)))
                .collect(),
        )
    }

    /// Monic polynomial with the same roots, each simple: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    /// Real and imaginary coefficient parts as separate polynomials.
    fn split_re_im(&self) -> (Poly, Poly) {
        let re = Poly::new(self.0.iter().map(|c| Scalar::from_rational(c.re.clone())).collect());
        let im = Poly::new(self.0.iter().map(|c| Scalar::from_rational(c.im.clone())).collect());
        (re, im)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            let b = rhs.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            out.push((&a).add(&b));
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            let b = rhs.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            out.push((&a).sub(&b));
        }
        Poly::new(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a.mul(b);
            }
        }
        Poly::new(out)
    }
}

impl Poly {
    pub fn mul(&self, rhs: &Poly) -> Poly {
        Mul::mul(self, rhs)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        Add::add(self, rhs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        Sub::sub(self, rhs)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.0.iter().map(|a| a.mul(c)).collect())
    }
}

impl std::fmt::Display for Poly {
    /// Render-only form like `s^2-3s+2`; complex coefficients in parentheses.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = if c.is_real() {
                let r = &c.re;
                if first {
                    if r.abs() == Rational::one() && k > 0 {
                        if r.is_negative() { "-".to_string() } else { String::new() }
                    } else {
                        c.to_string()
                    }
                } else if r.is_negative() {
                    let abs = -c;
                    if abs.is_one() && k > 0 {
                        write!(f, "-")?;
                        String::new()
                    } else {
                        write!(f, "-")?;
                        abs.to_string()
                    }
                } else {
                    write!(f, "+")?;
                    if c.is_one() && k > 0 { String::new() } else { c.to_string() }
                }
            } else {
                if !first {
                    write!(f, "+")?;
                }
                format!("({})", c)
            };
            write!(f, "{}", body)?;
            match k {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{}", k)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<Scalar>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

/// Dense matrix of polynomials, row-major like `ExactMatrix`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyMatrixRepr", into = "PolyMatrixRepr")]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl TryFrom<PolyMatrixRepr> for PolyMatrix {
    type Error = String;
    fn try_from(r: PolyMatrixRepr) -> std::result::Result<Self, String> {
        if r.entries.len() != r.rows * r.cols {
            return Err(format!(
                "poly matrix {}x{} needs {} entries, got {}",
                r.rows,
                r.cols,
                r.rows * r.cols,
                r.entries.len()
            ));
        }
        Ok(PolyMatrix { rows: r.rows, cols: r.cols, entries: r.entries })
    }
}

impl From<PolyMatrix> for PolyMatrixRepr {
    fn from(m: PolyMatrix) -> Self {
        PolyMatrixRepr { rows: m.rows, cols: m.cols, entries: m.entries }
    }
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    /// The symbolic pencil `s E - F`.
    pub fn pencil(e: &ExactMatrix, f: &ExactMatrix) -> Self {
        assert_eq!((e.rows(), e.cols()), (f.rows(), f.cols()), "pencil shape mismatch");
        PolyMatrix::from_fn(e.rows(), e.cols(), |i, j| {
            Poly::new(vec![-&f[(i, j)], e[(i, j)].clone()])
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn eval(&self, x: &Scalar) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Subtract `q * row a` from row b, entries from column `from`.
    fn row_axpy(&mut self, b: usize, a: usize, q: &Poly, from: usize) {
        for j in from..self.cols {
            let delta = self[(a, j)].mul(q);
            self[(b, j)] = self[(b, j)].sub(&delta);
        }
    }

    fn col_axpy(&mut self, b: usize, a: usize, q: &Poly, from: usize) {
        for i in from..self.rows {
            let delta = self[(i, a)].mul(q);
            self[(i, b)] = self[(i, b)].sub(&delta);
        }
    }

    /// Rescale row `i` so every coefficient is a Gaussian integer with no
    /// common integer factor. Scaling by a nonzero constant is a unit
    /// operation over Q(i)[s], so elimination results are unaffected; without
    /// this the rational coefficients explode on dense inputs.
    fn primitive_row(&mut self, i: usize) {
        let factor = primitive_factor(&self.entries[i * self.cols..(i + 1) * self.cols]);
        if let Some(c) = factor {
            for e in &mut self.entries[i * self.cols..(i + 1) * self.cols] {
                *e = e.scale(&c);
            }
        }
    }

    fn primitive_col(&mut self, j: usize) {
        let col: Vec<Poly> = (0..self.rows).map(|i| self[(i, j)].clone()).collect();
        if let Some(c) = primitive_factor(&col) {
            for i in 0..self.rows {
                self[(i, j)] = self[(i, j)].scale(&c);
            }
        }
    }
}

/// The rational constant that makes all coefficients of `polys` primitive
/// Gaussian integers, or None when already primitive or all zero.
fn primitive_factor(polys: &[Poly]) -> Option<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    let mut lcm = BigInt::one();
    for p in polys {
        for c in p.coeffs() {
            lcm = lcm.lcm(c.re.denom());
            lcm = lcm.lcm(c.im.denom());
        }
    }
    let mut gcd = BigInt::zero();
    for p in polys {
        for c in p.coeffs() {
            gcd = gcd.gcd(&(c.re.numer() * &lcm / c.re.denom()));
            gcd = gcd.gcd(&(c.im.numer() * &lcm / c.im.denom()));
        }
    }
    if gcd.is_zero() || (lcm.is_one() && gcd.is_one()) {
        return None;
    }
    Some(Scalar::from_rational(crate::scalar::Rational::new(lcm, gcd)))
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form over Q(i)[s]: rectangular-diagonal with monic diagonal
/// entries d_1 | d_2 | ... | d_r followed by zeros. Returns the diagonal
/// matrix and the nonzero invariant factors.
///
/// Postconditions (verified internally): divisibility chain holds, and the
/// number of nonzero factors equals the rank of the input over the
/// rational-function field, checked by evaluating at a point avoiding all
/// factor roots.
pub fn smith_normal_form(p: &PolyMatrix) -> (PolyMatrix, Vec<Poly>) {
    let mut m = p.clone();
    for i in 0..m.rows {
        m.primitive_row(i);
    }
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        if find_min_degree_pivot(&m, t).is_none() {
            break;
        }
        // Eliminate row/column t; entries may regenerate, so loop until the
        // pivot divides everything it must. Re-selecting the globally
        // smallest pivot every pass keeps quotient degrees (and with them
        // coefficient sizes) from compounding.
        loop {
            let (pi, pj) = find_min_degree_pivot(&m, t).expect("pivot persists");
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            let mut progressed = false;
            for i in (t + 1)..m.rows {
                if !m[(i, t)].is_zero() {
                    let (q, r) = m[(i, t)].divrem(&m[(t, t)]);
                    m.row_axpy(i, t, &q, t);
                    debug_assert_eq!(m[(i, t)], r);
                    m.primitive_row(i);
                    progressed |= !r.is_zero();
                }
            }
            for j in (t + 1)..m.cols {
                if !m[(t, j)].is_zero() {
                    let (q, r) = m[(t, j)].divrem(&m[(t, t)]);
                    m.col_axpy(j, t, &q, t);
                    m.primitive_col(j);
                    progressed |= !r.is_zero();
                }
            }
            if progressed {
                continue;
            }
            // Pivot divides its row and column; it must also divide the whole
            // trailing block. If not, fold the offending row into row t and
            // keep reducing.
            let offender = ((t + 1)..m.rows)
                .flat_map(|i| ((t + 1)..m.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(t, t)].divides(&m[(i, j)]));
            match offender {
                Some((i, _)) => {
                    for j in t..m.cols {
                        let sum = m[(t, j)].add(&m[(i, j)]);
                        m[(t, j)] = sum;
                    }
                    m.primitive_row(t);
                }
                None => break,
            }
        }
        m[(t, t)] = m[(t, t)].monic();
        t += 1;
    }
    let factors: Vec<Poly> = (0..t).map(|k| m[(k, k)].clone()).collect();
    // Verify divisibility chain.
    for w in factors.windows(2) {
        assert!(w[0].divides(&w[1]), "invariant factor chain broken: {} ∤ {}", w[0], w[1]);
    }
    // Verify rank preservation: evaluate the original matrix at a rational
    // point that is not a root of any factor.
    let point = non_root_point(&factors);
    assert_eq!(
        p.eval(&point).rank(),
        factors.len(),
        "smith normal form lost rank over the function field"
    );
    let mut d = PolyMatrix::zero(p.rows, p.cols);
    for (k, f) in factors.iter().enumerate() {
        d[(k, k)] = f.clone();
    }
    (d, factors)
}

/// Determinant over Q(i)[s] by fraction-free (Bareiss) elimination: every
/// intermediate entry is a minor of the input, so coefficients stay bounded
/// where naive elimination would swell.
pub fn poly_det(m: &PolyMatrix) -> Poly {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.clone();
    let mut flip = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match ((k + 1)..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    flip = !flip;
                }
                None => return Poly::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a[(k, k)].mul(&a[(i, j)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = q;
            }
            a[(i, k)] = Poly::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    if flip {
        det.scale(&-&Scalar::one())
    } else {
        det
    }
}

/// Normal rank of a polynomial matrix: the rank over the rational-function
/// field. Specialization at a point never raises the rank and drops it only
/// at finitely many points (the roots of one nonzero maximal minor, at most
/// min(rows, cols) of them), so the maximum over min(rows, cols) + 1 distinct
/// evaluation points is exact.
pub fn normal_rank(p: &PolyMatrix) -> usize {
    let bound = p.rows.min(p.cols);
    let mut best = 0;
    for k in 0..=(bound as i64) {
        best = best.max(p.eval(&Scalar::from_int(k)).rank());
        if best == bound {
            break;
        }
    }
    best
}

/// Determinant of a constant matrix by fraction-free (Bareiss) elimination.
/// Gaussian-integer matrices run on plain big-integer arithmetic; anything
/// with denominators takes a rational path.
pub fn const_det(m: &ExactMatrix) -> Scalar {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Scalar::one();
    }
    let mut integral = true;
    'scan: for i in 0..n {
        for j in 0..n {
            let c = &m[(i, j)];
            if !c.re.denom().is_one() || !c.im.denom().is_one() {
                integral = false;
                break 'scan;
            }
        }
    }
    if integral {
        return gauss_int_det(m);
    }
    let mut a = ExactMatrix::from_fn(n, n, |i, j| m[(i, j)].clone());
    let mut flip = false;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match ((k + 1)..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    flip = !flip;
                }
                None => return Scalar::zero(),
            }
        }
        let inv = prev.inv().expect("previous pivot nonzero");
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&a[(k, k)]).mul(&a[(i, j)]) - &(&a[(i, k)]).mul(&a[(k, j)]);
                a[(i, j)] = (&num).mul(&inv);
            }
            a[(i, k)] = Scalar::zero();
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    if flip {
        -&det
    } else {
        det
    }
}

/// Bareiss determinant for Gaussian-integer matrices: the intermediate exact
/// divisions stay in BigInt arithmetic, skipping rational normalization.
fn gauss_int_det(m: &ExactMatrix) -> Scalar {
    type G = (BigInt, BigInt);
    fn mul(a: &G, b: &G) -> G {
        (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }
    fn sub(a: &G, b: &G) -> G {
        (&a.0 - &b.0, &a.1 - &b.1)
    }
    fn is_zero(a: &G) -> bool {
        a.0.is_zero() && a.1.is_zero()
    }
    /// Exact quotient a / b: multiply by the conjugate, divide by the norm.
    fn div_exact(a: &G, b: &G) -> G {
        let norm = &b.0 * &b.0 + &b.1 * &b.1;
        let t = mul(a, &(b.0.clone(), -&b.1));
        (t.0 / &norm, t.1 / norm)
    }

    let n = m.rows();
    let mut a: Vec<Vec<G>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = &m[(i, j)];
                    (c.re.numer().clone(), c.im.numer().clone())
                })
                .collect()
        })
        .collect();
    let mut flip = false;
    let mut prev: G = (BigInt::one(), BigInt::zero());
    for k in 0..n - 1 {
        if is_zero(&a[k][k]) {
            match ((k + 1)..n).find(|&i| !is_zero(&a[i][k])) {
                Some(i) => {
                    a.swap(k, i);
                    flip = !flip;
                }
                None => return Scalar::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = sub(&mul(&a[k][k], &a[i][j]), &mul(&a[i][k], &a[k][j]));
                a[i][j] = div_exact(&num, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let (re, im) = a[n - 1][n - 1].clone();
    let det = Scalar::new(Rational::from_integer(re), Rational::from_integer(im));
    if flip {
        -&det
    } else {
        det
    }
}

/// The unique polynomial of degree < points.len() through the given
/// (x, value) pairs, by Lagrange interpolation. The x-coordinates must be
/// pairwise distinct.
pub fn lagrange_interpolate(points: &[(Scalar, Scalar)]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = (xi - xj).inv().expect("distinct interpolation points");
            term = term.mul(&Poly::s_minus(xj)).scale(&denom);
        }
        acc = &acc + &term;
    }
    acc
}

/// A monic square-free polynomial whose roots include every root of the top
/// determinantal divisor D_r (the gcd of all r x r minors, r = normal rank),
/// hence every eigenvalue candidate. Computed as the gcd of square-free parts
/// of determinants of random full-rank r x r compressions, each of which is a
/// linear combination of r x r minors and so a multiple of D_r. Returns
/// Poly::one() when the normal rank is 0 (no finite spectrum data) and None
/// when random compression keeps producing singular squares.
pub fn determinantal_multiple(p: &PolyMatrix) -> Option<Poly> {
    use rand::SeedableRng;
    // Column scaling is multiplication by an invertible constant diagonal, a
    // strict equivalence, so the invariant factors (hence D_r) only move by a
    // unit. Primitive Gaussian-integer columns keep all the determinant
    // evaluations in integer arithmetic, where exact division is cheap.
    let mut q = p.clone();
    for j in 0..q.cols {
        q.primitive_col(j);
    }
    let p = &q;
    let r = normal_rank(p);
    if r == 0 {
        return Some(Poly::one());
    }
    // det(u p(s) v) has degree <= r * max entry degree, so evaluation at that
    // many points plus one and interpolation replaces polynomial elimination
    // with cheap constant determinants. Compressing the coefficient matrices
    // once per draw keeps the per-point work at a scale-and-add.
    let maxdeg = p.entries.iter().filter(|e| !e.is_zero()).map(Poly::degree).max().unwrap_or(0);
    let points: Vec<Scalar> = (0..=(r * maxdeg) as i64).map(Scalar::from_int).collect();
    let coeff_mats: Vec<ExactMatrix> = (0..=maxdeg)
        .map(|d| {
            ExactMatrix::from_fn(p.rows, p.cols, |i, j| {
                p[(i, j)].coeffs().get(d).cloned().unwrap_or_else(Scalar::zero)
            })
        })
        .collect();
    let square = r == p.rows && r == p.cols;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7265_6c70);
    let mut g: Option<Poly> = None;
    let mut found = 0;
    for _ in 0..40 {
        let compressed: Vec<ExactMatrix> = if square {
            coeff_mats.clone()
        } else {
            let u = crate::random::random_matrix(&mut rng, r, p.rows, -3, 3);
            let v = crate::random::random_matrix(&mut rng, p.cols, r, -3, 3);
            coeff_mats.iter().map(|c| u.matmul(c).matmul(&v)).collect()
        };
        let samples: Vec<(Scalar, Scalar)> = points
            .iter()
            .map(|x| {
                // q(x) = sum_d x^d * Q_d.
                let mut acc = ExactMatrix::zero(r, r);
                let mut xp = Scalar::one();
                for q in &compressed {
                    acc = acc.add(&q.scale(&xp));
                    xp = (&xp).mul(x);
                }
                (x.clone(), const_det(&acc))
            })
            .collect();
        let d = lagrange_interpolate(&samples);
        if d.is_zero() {
            continue;
        }
        // Only the root set matters to callers, so shed multiplicities right
        // away; the square-free parts stay small where the raw determinants
        // carry enormous repeated factors.
        let d = d.squarefree_part();
        g = Some(match g {
            None => d,
            Some(prev) => prev.gcd(&d),
        });
        found += 1;
        // A square full-normal-rank matrix has a single maximal minor, the
        // determinant itself, which is already D_r. Otherwise two independent
        // nonzero compressions agree on D_r with overwhelming probability,
        // and the caller treats any leftover slack exactly, so more draws
        // buy nothing.
        if found == 2 || square {
            break;
        }
    }
    g
}

fn find_min_degree_pivot(m: &PolyMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            if !m[(i, j)].is_zero() {
                let d = m[(i, j)].degree();
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// A rational point avoiding all roots of the given polynomials: try
/// successive integers; each poly has finitely many roots.
fn non_root_point(polys: &[Poly]) -> Scalar {
    let mut k: i64 = 1;
    loop {
        let x = Scalar::from_int(k);
        if polys.iter().all(|p| p.is_zero() || !p.eval(&x).is_zero()) {
            return x;
        }
        k += 1;
    }
}

/// All rational roots of `p` with multiplicity, plus the exact cofactor
/// `residual = p / prod (s - root)^mult`, which has no rational roots.
///
/// For complex-coefficient input, a rational root must annihilate both the
/// real-part and imaginary-part polynomials, so candidates are drawn from
/// their gcd.
pub fn rational_roots(p: &Poly) -> Result<(Vec<(Scalar, usize)>, Poly)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let candidates =
        rational_candidates(p, false).expect("unbounded candidate enumeration never gives up");
    Ok(extract_rational_roots(p, candidates))
}

/// Like `rational_roots`, but with a budget on the divisor enumeration behind
/// the rational root theorem: None when a leading or trailing coefficient
/// does not factor over small primes or has too many divisors, so a caller
/// holding a polynomial with bulky coefficients can fall back to a slower
/// path that keeps them small instead of stalling here.
pub fn rational_roots_bounded(p: &Poly) -> Option<(Vec<(Scalar, usize)>, Poly)> {
    if p.is_zero() {
        return None;
    }
    Some(extract_rational_roots(p, rational_candidates(p, true)?))
}

fn extract_rational_roots(p: &Poly, candidates: Vec<Rational>) -> (Vec<(Scalar, usize)>, Poly) {
    let mut roots = Vec::new();
    let mut residual = p.clone();
    for cand in candidates {
        let root = Scalar::from_rational(cand);
        if !p.eval(&root).is_zero() {
            continue;
        }
        let lin = Poly::s_minus(&root);
        let mut mult = 0;
        loop {
            let (q, r) = residual.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            residual = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((root, mult));
        }
    }
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    debug_assert!({
        let mut prod = residual.clone();
        for (r, m) in &roots {
            prod = prod.mul(&Poly::s_minus(r).pow(*m));
        }
        prod == *p
    });
    (roots, residual)
}

/// Candidate rational roots via the rational root theorem after clearing
/// denominators. A rational root must be a root of both the real and the
/// imaginary coefficient parts, so the candidates come from their gcd.
fn rational_candidates(p: &Poly, bounded: bool) -> Option<Vec<Rational>> {
    let (re, im) = p.split_re_im();
    let p = if im.is_zero() {
        re
    } else if re.is_zero() {
        im
    } else {
        re.gcd(&im)
    };
    if p.is_constant() {
        return Some(Vec::new());
    }
    // Clear denominators to integer coefficients, then strip the power of s
    // dividing the polynomial (root 0 is handled by a zero trailing coeff).
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (&c.re * &lcm).to_integer()).collect();
    let mut out = vec![Rational::zero()];
    let Some(first_nz) = ints.iter().position(|c| !c.is_zero()) else {
        return Some(out);
    };
    let trailing = ints[first_nz].abs();
    let leading = ints.last().unwrap().abs();
    let (ps, qs) = if bounded {
        (divisors_bounded(&trailing)?, divisors_bounded(&leading)?)
    } else {
        (divisors(&trailing), divisors(&leading))
    };
    for num in &ps {
        for den in &qs {
            let r = Rational::new(num.clone(), den.clone());
            if !out.contains(&r) {
                out.push(-r.clone());
                out.push(r);
            }
        }
    }
    Some(out)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// All divisors of n, or None when trial division up to a fixed bound cannot
/// finish the factorization (a cofactor above the bound squared may be
/// composite) or the divisor list would be unreasonably long.
fn divisors_bounded(n: &BigInt) -> Option<Vec<BigInt>> {
    const TRIAL_BOUND: u64 = 1 << 20;
    const MAX_DIVISORS: usize = 1 << 12;
    debug_assert!(n.is_positive());
    let bound = BigInt::from(TRIAL_BOUND);
    let mut rest = n.clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    loop {
        if &d * &d > rest {
            break;
        }
        if d > bound {
            // rest >= d^2 > bound^2 with no factor <= bound: primality unknown.
            return None;
        }
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1;
    }
    if rest > BigInt::one() {
        // No factor <= sqrt(rest), so rest is prime.
        factors.push((rest, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d0 in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d0 * &pk);
                pk *= &p;
            }
        }
        if next.len() > MAX_DIVISORS {
            return None;
        }
        out = next;
    }
    out.sort();
    Some(out)
}
