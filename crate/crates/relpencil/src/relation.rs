//! Linear relations in C^m as subspaces of C^{2m}, their algebra (inverse,
//! scaling, shift, sum, product, powers), root manifolds, and singular-chain
//! machinery.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{binomial, scalar_pow, Scalar};
use crate::subspace::Subspace;

/// A linear relation in C^m: a subspace of C^{2m} whose vectors are pairs
/// (x, y) with x in coordinates 0..m and y in coordinates m..2m.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RelationRepr", into = "RelationRepr")]
pub struct LinearRelation {
    m: usize,
    space: Subspace,
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    m: usize,
    basis: ExactMatrix,
}

impl TryFrom<RelationRepr> for LinearRelation {
    type Error = String;
    fn try_from(r: RelationRepr) -> std::result::Result<Self, String> {
        if r.basis.rows() != 2 * r.m {
            return Err(format!(
                "relation in C^{} needs a basis with {} rows, got {}",
                r.m,
                2 * r.m,
                r.basis.rows()
            ));
        }
        Ok(LinearRelation { m: r.m, space: Subspace::from_basis_matrix(r.basis) })
    }
}

impl From<LinearRelation> for RelationRepr {
    fn from(s: LinearRelation) -> Self {
        RelationRepr { m: s.m, basis: s.space.basis().clone() }
    }
}

/// A chain of linked pairs in some relation: the second entry of each pair
/// equals the first entry of the next. A singular chain additionally starts
/// and ends at zero.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Chain {
    pub m: usize,
    pub pairs: Vec<(Vec<Scalar>, Vec<Scalar>)>,
}

impl LinearRelation {
    pub fn from_subspace(m: usize, space: Subspace) -> Self {
        assert_eq!(space.ambient_dim(), 2 * m, "relation ambient must be 2m");
        LinearRelation { m, space }
    }

    /// The zero relation {(0,0)} in C^m.
    pub fn zero(m: usize) -> Self {
        LinearRelation { m, space: Subspace::zero(2 * m) }
    }

    /// The full relation C^m x C^m.
    pub fn full(m: usize) -> Self {
        LinearRelation { m, space: Subspace::full(2 * m) }
    }

    /// The identity relation {(x, x)}.
    pub fn identity(m: usize) -> Self {
        LinearRelation::from_graph(&ExactMatrix::identity(m)).expect("identity is square")
    }

    /// Graph of a square matrix: {(x, Ax)}.
    pub fn from_graph(a: &ExactMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let m = a.rows();
        let basis = ExactMatrix::identity(m).vstack(a);
        Ok(LinearRelation { m, space: Subspace::from_basis_matrix(basis) })
    }

    /// Kernel representation E^{-1}F: the kernel of the n x 2m block matrix
    /// [F, -E], i.e. all (x, y) with Fx = Ey.
    pub fn kernel_rep(e: &ExactMatrix, f: &ExactMatrix) -> Result<Self> {
        check_shape(e, f)?;
        let m = e.cols();
        let block = f.hstack(&e.neg());
        let basis = block.kernel_basis();
        Ok(LinearRelation { m, space: Subspace::from_basis_matrix(basis) })
    }

    /// Range representation FE^{-1}: all (Ex, Fx), a relation in C^n.
    pub fn range_rep(e: &ExactMatrix, f: &ExactMatrix) -> Result<Self> {
        check_shape(e, f)?;
        let n = e.rows();
        let basis = e.vstack(f);
        Ok(LinearRelation { m: n, space: Subspace::from_basis_matrix(basis) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// x-block (first m rows) of the canonical basis.
    fn x_part(&self) -> ExactMatrix {
        self.space.basis().row_slice(0, self.m)
    }

    /// y-block (last m rows) of the canonical basis.
    fn y_part(&self) -> ExactMatrix {
        self.space.basis().row_slice(self.m, 2 * self.m)
    }

    pub fn contains_pair(&self, x: &[Scalar], y: &[Scalar]) -> bool {
        assert_eq!(x.len(), self.m);
        assert_eq!(y.len(), self.m);
        let mut v = x.to_vec();
        v.extend_from_slice(y);
        self.space.contains_vector(&v)
    }

    /// S^{-1} = {(y, x) : (x, y) in S}.
    pub fn inverse(&self) -> Self {
        let basis = self.y_part().vstack(&self.x_part());
        LinearRelation { m: self.m, space: Subspace::from_basis_matrix(basis) }
    }

    /// lambda S = {(x, lambda y)}. For lambda = 0 this is dom S x {0} by the
    /// set-literal reading of the definition.
    pub fn scale(&self, lambda: &Scalar) -> Self {
        let basis = self.x_part().vstack(&self.y_part().scale(lambda));
        LinearRelation { m: self.m, space: Subspace::from_basis_matrix(basis) }
    }

    /// S - lambda = {(x, y - lambda x)}.
    pub fn shift(&self, lambda: &Scalar) -> Self {
        let x = self.x_part();
        let y = self.y_part();
        let basis = x.vstack(&y.sub(&x.scale(lambda)));
        LinearRelation { m: self.m, space: Subspace::from_basis_matrix(basis) }
    }

    /// Operator-like sum: {(x, y + z) : (x,y) in S1, (x,z) in S2}.
    pub fn op_sum(&self, other: &LinearRelation) -> Result<Self> {
        self.check_m(other)?;
        // Match x-parts: kernel of [X1 | -X2] yields coefficient pairs (a, b)
        // with X1 a = X2 b.
        let x1 = self.x_part();
        let y1 = self.y_part();
        let x2 = other.x_part();
        let y2 = other.y_part();
        let k = x1.hstack(&x2.neg()).kernel_basis();
        let a = k.row_slice(0, x1.cols());
        let b = k.row_slice(x1.cols(), k.rows());
        let xs = x1.matmul(&a);
        let ys = y1.matmul(&a).add(&y2.matmul(&b));
        Ok(LinearRelation {
            m: self.m,
            space: Subspace::from_basis_matrix(xs.vstack(&ys)),
        })
    }

    /// Product S1 S2 = {(x, z) : exists y with (x,y) in S2 and (y,z) in S1},
    /// where self plays S1 and `inner` plays S2.
    pub fn compose(&self, inner: &LinearRelation) -> Result<Self> {
        self.check_m(inner)?;
        // Link middle coordinates: kernel of [Y2 | -X1] yields (b, a) with
        // Y2 b = X1 a; project to (X2 b, Y1 a).
        let x1 = self.x_part();
        let y1 = self.y_part();
        let x2 = inner.x_part();
        let y2 = inner.y_part();
        let k = y2.hstack(&x1.neg()).kernel_basis();
        let b = k.row_slice(0, y2.cols());
        let a = k.row_slice(y2.cols(), k.rows());
        let xs = x2.matmul(&b);
        let zs = y1.matmul(&a);
        Ok(LinearRelation {
            m: self.m,
            space: Subspace::from_basis_matrix(xs.vstack(&zs)),
        })
    }

    /// S^k by repeated composition; S^0 is the identity relation.
    pub fn power(&self, k: usize) -> Self {
        Powers::new(self.clone()).get(k).clone()
    }

    /// S(U) = {y : (x, y) in S for some x in U}.
    pub fn image_of(&self, u: &Subspace) -> Subspace {
        assert_eq!(u.ambient_dim(), self.m, "ambient dimension mismatch");
        let k = self.x_part().hstack(&u.basis().neg()).kernel_basis();
        let a = k.row_slice(0, self.dim());
        Subspace::from_basis_matrix(self.y_part().matmul(&a))
    }

    /// S^{-1}(U) = {x : (x, y) in S for some y in U}.
    pub fn preimage_of(&self, u: &Subspace) -> Subspace {
        assert_eq!(u.ambient_dim(), self.m, "ambient dimension mismatch");
        let k = self.y_part().hstack(&u.basis().neg()).kernel_basis();
        let a = k.row_slice(0, self.dim());
        Subspace::from_basis_matrix(self.x_part().matmul(&a))
    }

    /// N(S) = {x : (x, 0) in S}.
    pub fn kernel(&self) -> Subspace {
        let coeffs = self.y_part().kernel_basis();
        Subspace::from_basis_matrix(self.x_part().matmul(&coeffs))
    }

    /// mul S = {y : (0, y) in S}.
    pub fn mul(&self) -> Subspace {
        let coeffs = self.x_part().kernel_basis();
        Subspace::from_basis_matrix(self.y_part().matmul(&coeffs))
    }

    pub fn dom(&self) -> Subspace {
        Subspace::from_basis_matrix(self.x_part())
    }

    pub fn ran(&self) -> Subspace {
        Subspace::from_basis_matrix(self.y_part())
    }

    /// Root manifold R_lambda(S): the union of N((S-lambda)^k), which is an
    /// increasing chain that stabilizes within 2m steps.
    pub fn root_manifold(&self, lambda: &Scalar) -> Subspace {
        let shifted = self.shift(lambda);
        let mut powers = Powers::new(shifted);
        let mut current = powers.get(1).kernel();
        for k in 2..=(2 * self.m + 1) {
            let next = powers.get(k).kernel();
            if next.dim() == current.dim() {
                break;
            }
            current = next;
        }
        current
    }

    /// R_infinity(S): union of mul(S^k).
    pub fn root_manifold_inf(&self) -> Subspace {
        let mut powers = Powers::new(self.clone());
        let mut current = powers.get(1).mul();
        for k in 2..=(2 * self.m + 1) {
            let next = powers.get(k).mul();
            if next.dim() == current.dim() {
                break;
            }
            current = next;
        }
        current
    }

    /// Singular chains subspace R_c(S) = R_0(S) n R_infinity(S).
    pub fn singular_chain_space(&self) -> Subspace {
        self.root_manifold(&Scalar::zero())
            .intersect(&self.root_manifold_inf())
            .expect("equal ambient dimensions")
    }

    /// Direct sum: embed into disjoint coordinate blocks of C^{m1+m2}.
    pub fn direct_sum(&self, other: &LinearRelation) -> Self {
        let m = self.m + other.m;
        let d1 = self.dim();
        let d2 = other.dim();
        let b1 = self.space.basis();
        let b2 = other.space.basis();
        let basis = ExactMatrix::from_fn(2 * m, d1 + d2, |i, j| {
            // Row layout: x1 (m1), x2 (m2), y1 (m1), y2 (m2).
            if j < d1 {
                if i < self.m {
                    b1[(i, j)].clone()
                } else if i >= m && i < m + self.m {
                    b1[(i - m + self.m, j)].clone()
                } else {
                    Scalar::zero()
                }
            } else {
                let j2 = j - d1;
                if i >= self.m && i < m {
                    b2[(i - self.m, j2)].clone()
                } else if i >= m + self.m {
                    b2[(i - m - self.m + other.m, j2)].clone()
                } else {
                    Scalar::zero()
                }
            }
        });
        LinearRelation { m, space: Subspace::from_basis_matrix(basis) }
    }

    /// Every pair of the chain belongs to S and consecutive pairs link.
    pub fn is_chain(&self, chain: &Chain) -> bool {
        if chain.m != self.m {
            return false;
        }
        for w in chain.pairs.windows(2) {
            if w[0].1 != w[1].0 {
                return false;
            }
        }
        chain
            .pairs
            .iter()
            .all(|(x, y)| x.len() == self.m && y.len() == self.m && self.contains_pair(x, y))
    }

    /// TST^{-1} as a relation: {(Tx, Ty) : (x, y) in S}.
    pub fn apply_equivalence(&self, t: &ExactMatrix) -> Result<Self> {
        if t.rows() != self.m || t.cols() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "transform is {}x{}, relation lives in C^{}",
                t.rows(),
                t.cols(),
                self.m
            )));
        }
        if !t.is_invertible() {
            return Err(Error::SingularTransform);
        }
        let basis = t.matmul(&self.x_part()).vstack(&t.matmul(&self.y_part()));
        Ok(LinearRelation { m: self.m, space: Subspace::from_basis_matrix(basis) })
    }

    fn check_m(&self, other: &LinearRelation) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "relations in C^{} and C^{}",
                self.m, other.m
            )));
        }
        Ok(())
    }
}

fn check_shape(e: &ExactMatrix, f: &ExactMatrix) -> Result<()> {
    if e.rows() != f.rows() || e.cols() != f.cols() {
        return Err(Error::ShapeMismatch(format!(
            "E is {}x{}, F is {}x{}",
            e.rows(),
            e.cols(),
            f.rows(),
            f.cols()
        )));
    }
    Ok(())
}

/// Memoized ladder of powers S^0, S^1, S^2, ... of a fixed relation, with
/// per-power caches for the kernel, multivalued part, and range subspaces
/// that the Weyr quotient formulas keep revisiting.
pub struct Powers {
    base: LinearRelation,
    ladder: Vec<LinearRelation>,
    kernels: Vec<Subspace>,
    muls: Vec<Subspace>,
    rans: Vec<Subspace>,
}

impl Powers {
    pub fn new(base: LinearRelation) -> Self {
        let identity = LinearRelation::identity(base.m);
        Powers {
            base,
            ladder: vec![identity],
            kernels: Vec::new(),
            muls: Vec::new(),
            rans: Vec::new(),
        }
    }

    pub fn get(&mut self, k: usize) -> &LinearRelation {
        while self.ladder.len() <= k {
            let next = self
                .base
                .compose(self.ladder.last().unwrap())
                .expect("equal ambient dimensions");
            self.ladder.push(next);
        }
        &self.ladder[k]
    }

    /// N(S^k), cached. A membership (x, 0) in S^k unfolds into a chain
    /// x -> y_1 -> ... -> 0, so the kernels are iterated preimages of {0} —
    /// far cheaper than composing relations.
    pub fn kernel(&mut self, k: usize) -> &Subspace {
        if self.kernels.is_empty() {
            self.kernels.push(Subspace::zero(self.base.m));
        }
        while self.kernels.len() <= k {
            let next = self.base.preimage_of(self.kernels.last().unwrap());
            self.kernels.push(next);
        }
        &self.kernels[k]
    }

    /// mul(S^k) = S^k({0}), cached: iterated images of {0}.
    pub fn mul(&mut self, k: usize) -> &Subspace {
        if self.muls.is_empty() {
            self.muls.push(Subspace::zero(self.base.m));
        }
        while self.muls.len() <= k {
            let next = self.base.image_of(self.muls.last().unwrap());
            self.muls.push(next);
        }
        &self.muls[k]
    }

    /// R(S^k) = S^k(C^m), cached: iterated images of the full space.
    pub fn ran(&mut self, k: usize) -> &Subspace {
        if self.rans.is_empty() {
            self.rans.push(Subspace::full(self.base.m));
        }
        while self.rans.len() <= k {
            let next = self.base.image_of(self.rans.last().unwrap());
            self.rans.push(next);
        }
        &self.rans[k]
    }

    /// Union of the increasing chain N(S^k): the root manifold at 0.
    pub fn root_manifold_zero(&mut self, cap: usize) -> Subspace {
        let mut current = self.kernel(1).clone();
        for k in 2..=cap {
            let next = self.kernel(k);
            if next.dim() == current.dim() {
                break;
            }
            current = next.clone();
        }
        current
    }

    /// Union of the increasing chain mul(S^k): the root manifold at infinity.
    pub fn root_manifold_inf(&mut self, cap: usize) -> Subspace {
        let mut current = self.mul(1).clone();
        for k in 2..=cap {
            let next = self.mul(k);
            if next.dim() == current.dim() {
                break;
            }
            current = next.clone();
        }
        current
    }
}

/// Transform a singular chain of S into a singular chain of S - lambda:
/// z_j = sum_{i=j..s} binom(i-1, j-1) lambda^{i-j} x_i. The middle links
/// follow from the Pascal identity binom(i-1,j-1) + binom(i-1,j) =
/// binom(i,j); the ends reduce to z_s = x_s and lambda z_1 in S z_1.
///
/// The input chain must be singular — pairs ((0, x_s), (x_s, x_{s-1}), ...,
/// (x_1, 0)) — and a chain in `s_rel`; the output is verified to be a
/// singular chain in `s_rel - lambda`.
pub fn transform_singular_chain(
    s_rel: &LinearRelation,
    chain: &Chain,
    lambda: &Scalar,
) -> Result<Chain> {
    if chain.pairs.is_empty() {
        return Err(Error::NotAChain("empty chain".into()));
    }
    let zero_vec = vec![Scalar::zero(); chain.m];
    if chain.pairs[0].0 != zero_vec || chain.pairs.last().unwrap().1 != zero_vec {
        return Err(Error::NotSingular);
    }
    if !s_rel.is_chain(chain) {
        return Err(Error::NotAChain("pair not in the relation or links broken".into()));
    }
    let s = chain.pairs.len() - 1;
    // x_i = first entry of pair s+1-i, for i = 1..s.
    let x = |i: usize| -> &Vec<Scalar> { &chain.pairs[s + 1 - i].0 };
    let mut z: Vec<Vec<Scalar>> = Vec::with_capacity(s + 1);
    z.push(zero_vec.clone()); // placeholder so z[j] is z_j
    for j in 1..=s {
        let mut acc = vec![Scalar::zero(); chain.m];
        for i in j..=s {
            let coeff = Scalar::from_rational(crate::scalar::Rational::from(binomial(
                i - 1,
                j - 1,
            )))
            .mul(scalar_pow(lambda, i - j));
            if coeff.is_zero() {
                continue;
            }
            for (slot, xi) in acc.iter_mut().zip(x(i).iter()) {
                *slot += (&coeff).mul(xi);
            }
        }
        z.push(acc);
    }
    let mut pairs = Vec::with_capacity(s + 1);
    pairs.push((zero_vec.clone(), z[s].clone()));
    for j in (1..s).rev() {
        pairs.push((z[j + 1].clone(), z[j].clone()));
    }
    pairs.push((z[1].clone(), zero_vec));
    let out = Chain { m: chain.m, pairs };
    let shifted = s_rel.shift(lambda);
    if !shifted.is_chain(&out) {
        return Err(Error::NotAChain(
            "transformed chain failed verification in the shifted relation".into(),
        ));
    }
    Ok(out)
}

impl std::fmt::Debug for LinearRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinearRelation(m={}, dim={}) {:?}", self.m, self.dim(), self.space.basis())
    }
}
