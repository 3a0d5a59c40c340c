//! Partitions and the four-part Weyr characteristic (W, A, B, C) of a linear
//! relation, plus proper-eigenvalue discovery and strict equivalence of
//! relations.

use serde::{ser::SerializeStruct, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    determinantal_multiple, rational_roots, rational_roots_bounded, smith_normal_form, Poly,
    PolyMatrix,
};
use crate::relation::{LinearRelation, Powers};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// A non-increasing sequence of positive naturals; the empty sequence is the
/// trivial partition.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl TryFrom<Vec<usize>> for Partition {
    type Error = String;
    fn try_from(parts: Vec<usize>) -> std::result::Result<Self, String> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err("partition parts must be non-increasing".into());
        }
        if parts.contains(&0) {
            return Err("partition parts must be positive".into());
        }
        Ok(Partition(parts))
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(parts: Vec<usize>) -> Self {
        Partition::try_from(parts).expect("valid partition")
    }

    /// Build from a sequence that may contain trailing zeros (dropped).
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Partition::new(counts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |p| = sum of the parts.
    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// First part, or 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// k-th part (1-based), or 0 beyond the length.
    pub fn part(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.0.get(k - 1).copied().unwrap_or(0)
        }
    }

    /// Young-diagram transpose: result_k = #{i : p_i >= k}. Involutive.
    pub fn conjugate(&self) -> Partition {
        let max = self.first();
        Partition((1..=max).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Entrywise sum with the tail of the longer sequence:
/// a + b = (a_1+b_1, ..., a_l+b_l, b_{l+1}, ..., b_k).
pub fn multi_index_add(a: &Partition, b: &Partition) -> Partition {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let parts = long
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + short.parts().get(i).copied().unwrap_or(0))
        .collect();
    Partition::new(parts)
}

/// The Weyr characteristic of a linear relation: W at each proper finite
/// eigenvalue, A at infinity, B for singular chains, C for multi-shifts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeyrCharacteristic {
    /// Proper finite eigenvalues with their Weyr sequences, sorted
    /// lexicographically on (re, im).
    pub w: Vec<(Scalar, Partition)>,
    pub a: Partition,
    pub b: Partition,
    pub c: Partition,
    /// Non-constant residual polynomials left by rational eigenvalue
    /// discovery; nonempty means the spectrum may be incomplete.
    pub unresolved: Vec<Poly>,
    /// True when R_c(S) is nontrivial, so every scalar is a degenerate
    /// eigenvalue.
    pub degenerate_spectrum: bool,
}

impl WeyrCharacteristic {
    pub fn w_at(&self, lambda: &Scalar) -> Partition {
        self.w
            .iter()
            .find(|(l, _)| l == lambda)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Partition::empty)
    }

    /// Total |W| over all eigenvalues.
    pub fn w_total(&self) -> usize {
        self.w.iter().map(|(_, p)| p.sum()).sum()
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }
}

impl Serialize for WeyrCharacteristic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Eig<'a> {
            lambda: String,
            parts: &'a Partition,
        }
        let w: Vec<Eig> = self
            .w
            .iter()
            .map(|(l, p)| Eig { lambda: l.to_string(), parts: p })
            .collect();
        let unresolved: Vec<String> = self.unresolved.iter().map(|p| p.to_string()).collect();
        let mut st = s.serialize_struct("WeyrCharacteristic", 6)?;
        st.serialize_field("W", &w)?;
        st.serialize_field("A", &self.a)?;
        st.serialize_field("B", &self.b)?;
        st.serialize_field("C", &self.c)?;
        st.serialize_field("unresolved", &unresolved)?;
        st.serialize_field("degenerate_spectrum", &self.degenerate_spectrum)?;
        st.end()
    }
}

/// Shared context for Weyr computations on one relation: one memoized power
/// ladder feeding the root manifolds, the singular-chain subspace, and every
/// quotient sequence that looks at powers of S itself.
struct WeyrContext {
    s: LinearRelation,
    rc: Subspace,
    r0: Subspace,
    cap: usize,
    powers: std::cell::RefCell<Powers>,
}

impl WeyrContext {
    fn new(s: &LinearRelation) -> Self {
        let cap = 2 * s.m() + 1;
        let mut powers = Powers::new(s.clone());
        let r0 = powers.root_manifold_zero(cap);
        let rinf = powers.root_manifold_inf(cap);
        let rc = r0.intersect(&rinf).expect("equal ambient dimensions");
        WeyrContext { s: s.clone(), rc, r0, cap, powers: std::cell::RefCell::new(powers) }
    }
}

/// W(lambda): W_k = dim (N((S-lambda)^k)+R_c) / (N((S-lambda)^{k-1})+R_c),
/// iterated until zero. Empty when lambda is not a proper eigenvalue.
pub fn weyr_at(s: &LinearRelation, lambda: &Scalar) -> Partition {
    weyr_at_with(&WeyrContext::new(s), lambda)
}

fn weyr_at_with(ctx: &WeyrContext, lambda: &Scalar) -> Partition {
    let shifted = ctx.s.shift(lambda);
    let mut powers = Powers::new(shifted);
    quotient_sequence(ctx, |k, ctx| {
        // dim(N + R_c) as a rank, skipping the canonical sum basis.
        powers.kernel(k).basis().hstack(ctx.rc.basis()).rank()
    })
}

/// A: A_k = dim (mul(S^k)+R_c) / (mul(S^{k-1})+R_c).
pub fn weyr_inf(s: &LinearRelation) -> Partition {
    weyr_inf_with(&WeyrContext::new(s))
}

fn weyr_inf_with(ctx: &WeyrContext) -> Partition {
    let mut powers = ctx.powers.borrow_mut();
    quotient_sequence(ctx, |k, ctx| {
        powers.mul(k).basis().hstack(ctx.rc.basis()).rank()
    })
}

/// B: B_k = dim (N(S^k) n R_c) / (N(S^{k-1}) n R_c).
pub fn weyr_singular(s: &LinearRelation) -> Partition {
    weyr_singular_with(&WeyrContext::new(s))
}

fn weyr_singular_with(ctx: &WeyrContext) -> Partition {
    let mut powers = ctx.powers.borrow_mut();
    quotient_sequence(ctx, |k, ctx| {
        // dim(N ∩ R_c) = dim N + dim R_c - dim(N + R_c), all via one rank.
        let n = powers.kernel(k);
        n.dim() + ctx.rc.dim() - n.basis().hstack(ctx.rc.basis()).rank()
    })
}

/// Increasing-chain quotient sequence: entry k is f(k) - f(k-1), collected
/// while positive. f(k) must be a monotone increasing dimension in k.
fn quotient_sequence(
    ctx: &WeyrContext,
    mut f: impl FnMut(usize, &WeyrContext) -> usize,
) -> Partition {
    let mut parts = Vec::new();
    let mut prev = f(0, ctx);
    for k in 1..=ctx.cap {
        let next = f(k, ctx);
        debug_assert!(next >= prev, "chain must be increasing");
        let d = next - prev;
        if d == 0 {
            break;
        }
        parts.push(d);
        prev = next;
    }
    debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]), "Weyr sequence must be non-increasing");
    Partition::from_counts(parts)
}

/// C: C_1 = dim (R(S)+dom S)/(R(S)+R_0) and, for k >= 2,
/// C_k = dim (R(S^k)+R_0)/(R(S^{k+1})+R_0), iterated until zero. The k >= 2
/// quotient follows the index convention the canonical-form computations use
/// consistently; it is the one the worked examples force.
pub fn weyr_multishift(s: &LinearRelation) -> Partition {
    weyr_multishift_with(&WeyrContext::new(s))
}

fn weyr_multishift_with(ctx: &WeyrContext) -> Partition {
    let r0 = &ctx.r0;
    let mut powers = ctx.powers.borrow_mut();
    // dim(R(S^k) + R_0) as a rank, skipping the canonical sum basis.
    let range_dim =
        |powers: &mut Powers, k: usize| powers.ran(k).basis().hstack(r0.basis()).rank();
    let num1 = powers.ran(1).basis().hstack(ctx.s.dom().basis()).rank();
    let den1 = range_dim(&mut powers, 1);
    debug_assert!(num1 >= den1, "R_0 lies inside dom S");
    let c1 = num1 - den1;
    if c1 == 0 {
        return Partition::empty();
    }
    let mut parts = vec![c1];
    let mut prev = range_dim(&mut powers, 2); // dim(R(S^2)+R_0)
    for k in 2..=ctx.cap {
        let next = range_dim(&mut powers, k + 1);
        debug_assert!(prev >= next, "ranges decrease");
        let d = prev - next;
        if d == 0 {
            break;
        }
        parts.push(d);
        prev = next;
    }
    debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]), "C must be non-increasing");
    Partition::from_counts(parts)
}

/// Candidate finite eigenvalues of S from the Smith invariant factors of the
/// pencil sX - Y, where [X; Y] is the basis matrix of S, filtered to the
/// proper ones (W_1(lambda) > 0). Returns the proper eigenvalues sorted
/// lexicographically and the non-constant residual polynomials that rational
/// root extraction could not resolve.
pub fn proper_finite_eigenvalues(
    s: &LinearRelation,
    extra: &[Scalar],
) -> (Vec<Scalar>, Vec<Poly>) {
    let ctx = WeyrContext::new(s);
    proper_finite_eigenvalues_with(&ctx, extra)
}

fn proper_finite_eigenvalues_with(ctx: &WeyrContext, extra: &[Scalar]) -> (Vec<Scalar>, Vec<Poly>) {
    let (candidates, unresolved) = candidate_eigenvalues_with(ctx, extra);
    let proper: Vec<Scalar> = candidates
        .into_iter()
        .filter(|lambda| {
            // W_1(lambda) > 0 iff N(S - lambda) is not inside R_c.
            ctx.s
                .shift(lambda)
                .kernel()
                .basis()
                .hstack(ctx.rc.basis())
                .rank()
                > ctx.rc.dim()
        })
        .collect();
    (proper, unresolved)
}

/// Rational eigenvalue candidates, lexicographically sorted, before the
/// properness filter.
fn candidate_eigenvalues_with(ctx: &WeyrContext, extra: &[Scalar]) -> (Vec<Scalar>, Vec<Poly>) {
    let s = &ctx.s;
    let m = s.m();
    let basis = s.space().basis();
    let x = basis.row_slice(0, m);
    let y = basis.row_slice(m, 2 * m);
    let mut candidates: Vec<Scalar> = Vec::new();
    let mut unresolved: Vec<Poly> = Vec::new();
    let pencil = PolyMatrix::pencil(&x, &y);
    // Fast path: the top determinantal divisor carries every invariant-factor
    // root, and a polynomial covering its roots comes from a handful of small
    // determinants. A constant residual after rational root extraction
    // certifies the spectrum is fully resolved; otherwise the slack could be
    // an artifact of the covering polynomial, so fall back to the exact Smith
    // form — likewise when its coefficients defeat the budgeted root search.
    let fast = determinantal_multiple(&pencil).and_then(|g| {
        let (roots, residual) = rational_roots_bounded(&g)?;
        residual.is_constant().then_some(roots)
    });
    match fast {
        Some(roots) => {
            for (r, _) in roots {
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
        None => {
            let (_, factors) = smith_normal_form(&pencil);
            for f in &factors {
                if f.is_constant() {
                    continue;
                }
                let (roots, residual) = rational_roots(f).expect("nonzero invariant factor");
                for (r, _) in roots {
                    if !candidates.contains(&r) {
                        candidates.push(r);
                    }
                }
                if !residual.is_constant() {
                    unresolved.push(residual.monic());
                }
            }
        }
    }
    for e in extra {
        if !candidates.contains(e) {
            candidates.push(e.clone());
        }
    }
    candidates.sort_by(|a, b| a.lex_cmp(b));
    unresolved.sort_by_key(|p| p.to_string());
    (candidates, unresolved)
}

/// The full Weyr characteristic (W, A, B, C) of a relation, discovering
/// proper eigenvalues automatically and accepting extra candidates for
/// eigenvalues outside the rational reach of discovery.
pub fn weyr_characteristic(s: &LinearRelation, extra_eigs: &[Scalar]) -> WeyrCharacteristic {
    let ctx = WeyrContext::new(s);
    // The full W sequence at a candidate starts with W_1, so an improper
    // candidate costs no more than the properness filter and falls out with
    // an empty sequence.
    let (candidates, unresolved) = candidate_eigenvalues_with(&ctx, extra_eigs);
    let w = candidates
        .into_iter()
        .filter_map(|lambda| {
            let p = weyr_at_with(&ctx, &lambda);
            (!p.is_empty()).then_some((lambda, p))
        })
        .collect();
    WeyrCharacteristic {
        w,
        a: weyr_inf_with(&ctx),
        b: weyr_singular_with(&ctx),
        c: weyr_multishift_with(&ctx),
        unresolved,
        degenerate_spectrum: !ctx.rc.is_zero(),
    }
}

/// Two relations are strictly equivalent iff their Weyr characteristics
/// coincide. Requires fully resolved eigenvalue discovery on both sides.
pub fn strictly_equivalent_relations(
    s1: &LinearRelation,
    s2: &LinearRelation,
) -> Result<bool> {
    if s1.m() != s2.m() {
        return Err(Error::DimensionMismatch(format!(
            "relations in C^{} and C^{}",
            s1.m(),
            s2.m()
        )));
    }
    let w1 = weyr_characteristic(s1, &[]);
    let w2 = weyr_characteristic(s2, &[]);
    if !w1.is_resolved() || !w2.is_resolved() {
        let list: Vec<String> = w1
            .unresolved
            .iter()
            .chain(w2.unresolved.iter())
            .map(|p| p.to_string())
            .collect();
        return Err(Error::UnresolvedEigenvalues(list.join(", ")));
    }
    Ok(w1.w == w2.w && w1.a == w2.a && w1.b == w2.b && w1.c == w2.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;

    fn jordan(k: usize, lambda: i64) -> ExactMatrix {
        ExactMatrix::from_fn(k, k, |i, j| {
            if i == j {
                Scalar::from_int(lambda)
            } else if j == i + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::new(vec![2, 1, 1]).conjugate(), Partition::new(vec![3, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(Partition::new(vec![3, 1]).conjugate(), Partition::new(vec![2, 1, 1]));
    }

    #[test]
    fn multi_index_add_examples() {
        let add = |a: Vec<usize>, b: Vec<usize>| {
            multi_index_add(&Partition::new(a), &Partition::new(b))
        };
        assert_eq!(add(vec![3, 1], vec![2]), Partition::new(vec![5, 1]));
        assert_eq!(add(vec![], vec![4, 2]), Partition::new(vec![4, 2]));
        assert_eq!(add(vec![2, 2], vec![2, 2]), Partition::new(vec![4, 4]));
    }

    #[test]
    fn eigenvalues_of_diagonal_graph() {
        let a = ExactMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        let s = LinearRelation::from_graph(&a).unwrap();
        let (eigs, unresolved) = proper_finite_eigenvalues(&s, &[]);
        assert_eq!(eigs, vec![Scalar::from_int(1), Scalar::from_int(2)]);
        assert!(unresolved.is_empty());
    }

    #[test]
    fn eigenvalues_swallowed_by_rc() {
        let e = ExactMatrix::from_i64(&[&[1, 0, 0, 0]]);
        let f = ExactMatrix::from_i64(&[&[0, 1, 0, 0]]);
        let s = LinearRelation::kernel_rep(&e, &f).unwrap();
        let (eigs, unresolved) = proper_finite_eigenvalues(&s, &[Scalar::from_int(1)]);
        assert!(eigs.is_empty());
        assert!(unresolved.is_empty());
    }

    #[test]
    fn eigenvalues_unresolved_companion() {
        // Companion matrix of s^2 + 1: no rational eigenvalues.
        let a = ExactMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let s = LinearRelation::from_graph(&a).unwrap();
        let (eigs, unresolved) = proper_finite_eigenvalues(&s, &[]);
        assert!(eigs.is_empty());
        assert_eq!(unresolved, vec![Poly::from_i64(&[1, 0, 1])]);
    }

    #[test]
    fn weyr_at_jordan() {
        let s = LinearRelation::from_graph(&jordan(3, 5)).unwrap();
        assert_eq!(weyr_at(&s, &Scalar::from_int(5)), Partition::new(vec![1, 1, 1]));
        assert_eq!(weyr_at(&s, &Scalar::zero()), Partition::empty());
        let id = LinearRelation::identity(4);
        assert_eq!(weyr_at(&id, &Scalar::one()), Partition::new(vec![4]));
    }

    #[test]
    fn weyr_inf_examples() {
        let s = LinearRelation::from_graph(&jordan(2, 0)).unwrap().inverse();
        assert_eq!(weyr_inf(&s), Partition::new(vec![1, 1]));
        let g = LinearRelation::from_graph(&jordan(2, 7)).unwrap();
        assert_eq!(weyr_inf(&g), Partition::empty());
    }

    #[test]
    fn weyr_singular_examples() {
        let e = ExactMatrix::from_i64(&[&[1, 0, 0, 0]]);
        let f = ExactMatrix::from_i64(&[&[0, 1, 0, 0]]);
        let s = LinearRelation::kernel_rep(&e, &f).unwrap();
        assert_eq!(weyr_singular(&s), Partition::new(vec![3, 1]));
        let r = LinearRelation::range_rep(&e, &f).unwrap();
        assert_eq!(weyr_singular(&r), Partition::new(vec![1]));
        let g = LinearRelation::from_graph(&jordan(3, 0)).unwrap();
        assert_eq!(weyr_singular(&g), Partition::empty());
    }

    #[test]
    fn weyr_multishift_examples() {
        let e = ExactMatrix::from_i64(&[&[1], &[0], &[0], &[0]]);
        let f = ExactMatrix::from_i64(&[&[0], &[1], &[0], &[0]]);
        let r = LinearRelation::range_rep(&e, &f).unwrap();
        assert_eq!(weyr_multishift(&r), Partition::new(vec![1]));
        let k = LinearRelation::kernel_rep(&e, &f).unwrap();
        assert_eq!(weyr_multishift(&k), Partition::empty());
    }

    #[test]
    fn full_characteristic_examples() {
        let e = ExactMatrix::from_i64(&[&[1, 0, 0, 0]]);
        let f = ExactMatrix::from_i64(&[&[0, 1, 0, 0]]);
        let s = LinearRelation::kernel_rep(&e, &f).unwrap();
        let wc = weyr_characteristic(&s, &[]);
        assert!(wc.w.is_empty());
        assert_eq!(wc.a, Partition::empty());
        assert_eq!(wc.b, Partition::new(vec![3, 1]));
        assert_eq!(wc.c, Partition::empty());
        assert!(wc.degenerate_spectrum);

        let a = ExactMatrix::block_diag(&[jordan(2, 0), jordan(1, 3)]);
        let g = LinearRelation::from_graph(&a).unwrap();
        let wc = weyr_characteristic(&g, &[]);
        assert_eq!(
            wc.w,
            vec![
                (Scalar::zero(), Partition::new(vec![1, 1])),
                (Scalar::from_int(3), Partition::new(vec![1])),
            ]
        );
        assert_eq!(wc.a, Partition::empty());
        assert_eq!(wc.b, Partition::empty());
        assert_eq!(wc.c, Partition::empty());
        assert!(!wc.degenerate_spectrum);
    }

    #[test]
    fn equivalence_decision() {
        let a = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let s = LinearRelation::from_graph(&a).unwrap();
        let t = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let s2 = s.apply_equivalence(&t).unwrap();
        assert!(strictly_equivalent_relations(&s, &s2).unwrap());
        let id = LinearRelation::identity(2);
        let z = LinearRelation::from_graph(&ExactMatrix::zero(2, 2)).unwrap();
        assert!(!strictly_equivalent_relations(&id, &z).unwrap());
    }

    #[test]
    fn serialization_shape() {
        let a = ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let s = LinearRelation::from_graph(&a).unwrap();
        let wc = weyr_characteristic(&s, &[]);
        let j = serde_json::to_string(&wc).unwrap();
        assert_eq!(
            j,
            r#"{"W":[{"lambda":"0","parts":[1,1]}],"A":[],"B":[],"C":[],"unresolved":[],"degenerate_spectrum":false}"#
        );
    }
}
