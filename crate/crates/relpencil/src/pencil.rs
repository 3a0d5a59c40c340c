//! Matrix pencils sE - F: Kronecker canonical blocks, the pencil Weyr
//! characteristic, reconstruction of Kronecker invariants through the kernel
//! and range representations, and strict equivalence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::poly::{rational_roots, smith_normal_form, Poly, PolyMatrix};
use crate::relation::LinearRelation;
use crate::scalar::Scalar;
use crate::weyr::{weyr_characteristic, Partition, WeyrCharacteristic};

/// The pencil sE - F with E, F of equal shape n x m.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PencilRepr", into = "PencilRepr")]
pub struct Pencil {
    pub n: usize,
    pub m: usize,
    pub e: ExactMatrix,
    pub f: ExactMatrix,
}

#[derive(Serialize, Deserialize)]
struct PencilRepr {
    n: usize,
    m: usize,
    #[serde(rename = "E")]
    e: ExactMatrix,
    #[serde(rename = "F")]
    f: ExactMatrix,
}

impl TryFrom<PencilRepr> for Pencil {
    type Error = String;
    fn try_from(r: PencilRepr) -> std::result::Result<Self, String> {
        if r.e.rows() != r.n || r.e.cols() != r.m || r.f.rows() != r.n || r.f.cols() != r.m {
            return Err(format!(
                "pencil declared {}x{} but E is {}x{} and F is {}x{}",
                r.n,
                r.m,
                r.e.rows(),
                r.e.cols(),
                r.f.rows(),
                r.f.cols()
            ));
        }
        Ok(Pencil { n: r.n, m: r.m, e: r.e, f: r.f })
    }
}

impl From<Pencil> for PencilRepr {
    fn from(p: Pencil) -> Self {
        PencilRepr { n: p.n, m: p.m, e: p.e, f: p.f }
    }
}

impl Pencil {
    pub fn new(e: ExactMatrix, f: ExactMatrix) -> Result<Self> {
        if e.rows() != f.rows() || e.cols() != f.cols() {
            return Err(Error::ShapeMismatch(format!(
                "E is {}x{}, F is {}x{}",
                e.rows(),
                e.cols(),
                f.rows(),
                f.cols()
            )));
        }
        Ok(Pencil { n: e.rows(), m: e.cols(), e, f })
    }

    pub fn kernel_rep(&self) -> LinearRelation {
        LinearRelation::kernel_rep(&self.e, &self.f).expect("shapes validated")
    }

    pub fn range_rep(&self) -> LinearRelation {
        LinearRelation::range_rep(&self.e, &self.f).expect("shapes validated")
    }

    pub fn poly_matrix(&self) -> PolyMatrix {
        PolyMatrix::pencil(&self.e, &self.f)
    }

    /// Monic Smith invariant factors of sE - F.
    pub fn invariant_factors(&self) -> Vec<Poly> {
        smith_normal_form(&self.poly_matrix()).1
    }
}

impl std::fmt::Debug for Pencil {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pencil({}x{}) E={:?} F={:?}", self.n, self.m, self.e, self.f)
    }
}

/// Kronecker invariants: Segre data per finite eigenvalue, degrees of the
/// infinite elementary divisors (alpha), and the minimal-index multi-indices
/// (beta for columns, gamma for rows).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "InvariantsRepr", into = "InvariantsRepr")]
pub struct KroneckerInvariants {
    /// (eigenvalue, Segre partition), sorted lexicographically on (re, im).
    pub finite: Vec<(Scalar, Partition)>,
    pub alpha: Partition,
    pub beta: Partition,
    pub gamma: Partition,
}

#[derive(Serialize, Deserialize)]
struct FiniteRepr {
    lambda: Scalar,
    segre: Partition,
}

#[derive(Serialize, Deserialize)]
struct InvariantsRepr {
    finite: Vec<FiniteRepr>,
    alpha: Partition,
    beta: Partition,
    gamma: Partition,
}

impl TryFrom<InvariantsRepr> for KroneckerInvariants {
    type Error = String;
    fn try_from(r: InvariantsRepr) -> std::result::Result<Self, String> {
        let mut finite: Vec<(Scalar, Partition)> =
            r.finite.into_iter().map(|f| (f.lambda, f.segre)).collect();
        for i in 1..finite.len() {
            if finite[..i].iter().any(|(l, _)| *l == finite[i].0) {
                return Err(format!("duplicate eigenvalue {}", finite[i].0));
            }
        }
        if finite.iter().any(|(_, p)| p.is_empty()) {
            return Err("empty Segre partition".into());
        }
        finite.sort_by(|a, b| a.0.lex_cmp(&b.0));
        Ok(KroneckerInvariants { finite, alpha: r.alpha, beta: r.beta, gamma: r.gamma })
    }
}

impl From<KroneckerInvariants> for InvariantsRepr {
    fn from(inv: KroneckerInvariants) -> Self {
        InvariantsRepr {
            finite: inv
                .finite
                .into_iter()
                .map(|(lambda, segre)| FiniteRepr { lambda, segre })
                .collect(),
            alpha: inv.alpha,
            beta: inv.beta,
            gamma: inv.gamma,
        }
    }
}

impl KroneckerInvariants {
    pub fn empty() -> Self {
        KroneckerInvariants {
            finite: Vec::new(),
            alpha: Partition::empty(),
            beta: Partition::empty(),
            gamma: Partition::empty(),
        }
    }

    pub fn normalized(mut self) -> Self {
        self.finite.sort_by(|a, b| a.0.lex_cmp(&b.0));
        self
    }
}

/// Weyr characteristic of a pencil: conjugates of the Kronecker multi-index
/// data.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PencilWeyrRepr", into = "PencilWeyrRepr")]
pub struct PencilWeyr {
    pub w: Vec<(Scalar, Partition)>,
    pub a: Partition,
    pub b: Partition,
    pub c: Partition,
}

#[derive(Serialize, Deserialize)]
struct WeyrEntryRepr {
    lambda: Scalar,
    parts: Partition,
}

#[derive(Serialize, Deserialize)]
struct PencilWeyrRepr {
    w: Vec<WeyrEntryRepr>,
    a: Partition,
    b: Partition,
    c: Partition,
}

impl TryFrom<PencilWeyrRepr> for PencilWeyr {
    type Error = String;
    fn try_from(r: PencilWeyrRepr) -> std::result::Result<Self, String> {
        let mut w: Vec<(Scalar, Partition)> =
            r.w.into_iter().map(|e| (e.lambda, e.parts)).collect();
        w.sort_by(|a, b| a.0.lex_cmp(&b.0));
        Ok(PencilWeyr { w, a: r.a, b: r.b, c: r.c })
    }
}

impl From<PencilWeyr> for PencilWeyrRepr {
    fn from(pw: PencilWeyr) -> Self {
        PencilWeyrRepr {
            w: pw
                .w
                .into_iter()
                .map(|(lambda, parts)| WeyrEntryRepr { lambda, parts })
                .collect(),
            a: pw.a,
            b: pw.b,
            c: pw.c,
        }
    }
}

impl PencilWeyr {
    pub fn w_total(&self) -> usize {
        self.w.iter().map(|(_, p)| p.sum()).sum()
    }
}

// ---------------------------------------------------------------------------
// Canonical block constructors.

/// Upper Jordan block J_k(lambda).
pub fn jordan_block(k: usize, lambda: &Scalar) -> ExactMatrix {
    ExactMatrix::from_fn(k, k, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// Nilpotent block N_k with ones on the subdiagonal.
pub fn nilpotent_block(k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(k, k, |i, j| {
        if i == j + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// K_k in C^{(k-1) x k}: ones on the main diagonal. K_1 is the empty 0 x 1
/// block, which realizes the zero-column convention under block_diag.
pub fn k_block(k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(k - 1, k, |i, j| {
        if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// L_k in C^{(k-1) x k}: ones on the superdiagonal.
pub fn l_block(k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(k - 1, k, |i, j| {
        if j == i + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// Assemble the Kronecker canonical pencil: blocks sI - J0 (finite),
/// sN_alpha - I, sK_beta - L_beta, sK_gamma^T - L_gamma^T, in that order.
pub fn build_kronecker(inv: &KroneckerInvariants) -> Pencil {
    let mut e_blocks: Vec<ExactMatrix> = Vec::new();
    let mut f_blocks: Vec<ExactMatrix> = Vec::new();
    for (lambda, segre) in &inv.finite {
        for &k in segre.parts() {
            e_blocks.push(ExactMatrix::identity(k));
            f_blocks.push(jordan_block(k, lambda));
        }
    }
    for &k in inv.alpha.parts() {
        e_blocks.push(nilpotent_block(k));
        f_blocks.push(ExactMatrix::identity(k));
    }
    for &k in inv.beta.parts() {
        e_blocks.push(k_block(k));
        f_blocks.push(l_block(k));
    }
    for &k in inv.gamma.parts() {
        e_blocks.push(k_block(k).transpose());
        f_blocks.push(l_block(k).transpose());
    }
    let e = ExactMatrix::block_diag(&e_blocks);
    let f = ExactMatrix::block_diag(&f_blocks);
    let p = Pencil::new(e, f).expect("blocks share shapes");
    debug_assert!({
        let pw = pencil_weyr_from_invariants(inv);
        let (n, m) = (p.n, p.m);
        n == pw.w_total() + pw.a.sum() + (pw.b.sum() - pw.b.first()) + pw.c.sum()
            && m == pw.w_total() + pw.a.sum() + pw.b.sum() + (pw.c.sum() - pw.c.first())
    });
    p
}

/// Conjugate all Segre/multi-index data into Weyr form.
pub fn pencil_weyr_from_invariants(inv: &KroneckerInvariants) -> PencilWeyr {
    PencilWeyr {
        w: inv
            .finite
            .iter()
            .map(|(lambda, segre)| (lambda.clone(), segre.conjugate()))
            .collect(),
        a: inv.alpha.conjugate(),
        b: inv.beta.conjugate(),
        c: inv.gamma.conjugate(),
    }
}

/// Conjugate back; round-trip inverse of `pencil_weyr_from_invariants`.
pub fn invariants_from_weyr(pw: &PencilWeyr) -> KroneckerInvariants {
    KroneckerInvariants {
        finite: pw
            .w
            .iter()
            .map(|(lambda, parts)| (lambda.clone(), parts.conjugate()))
            .collect(),
        alpha: pw.a.conjugate(),
        beta: pw.b.conjugate(),
        gamma: pw.c.conjugate(),
    }
    .normalized()
}

/// Finite rational eigenvalues of the pencil, whether infinity is an
/// eigenvalue, and the unresolved residual factors.
pub fn pencil_eigenvalues(p: &Pencil) -> (Vec<Scalar>, bool, Vec<Poly>) {
    let factors = p.invariant_factors();
    let normal_rank = factors.len();
    let mut eigs: Vec<Scalar> = Vec::new();
    let mut unresolved: Vec<Poly> = Vec::new();
    for f in &factors {
        if f.is_constant() {
            continue;
        }
        let (roots, residual) = rational_roots(f).expect("nonzero factor");
        for (r, _) in roots {
            if !eigs.contains(&r) {
                eigs.push(r);
            }
        }
        if !residual.is_constant() {
            unresolved.push(residual.monic());
        }
    }
    eigs.sort_by(|a, b| a.lex_cmp(b));
    unresolved.sort_by_key(|q| q.to_string());
    // Infinity is an eigenvalue iff 0 is an eigenvalue of the dual pencil
    // sF - E, i.e. rank E drops below the normal rank.
    let has_infinite = p.e.rank() < normal_rank;
    (eigs, has_infinite, unresolved)
}

fn require_resolved(wc: &WeyrCharacteristic) -> Result<()> {
    if !wc.is_resolved() {
        let list: Vec<String> = wc.unresolved.iter().map(|q| q.to_string()).collect();
        return Err(Error::UnresolvedEigenvalues(list.join(", ")));
    }
    Ok(())
}

/// Assemble a partition from explicit prefix entries plus an existing tail,
/// dropping trailing zeros and rejecting non-monotone results.
fn complete_partition(prefix: &[isize], tail: &Partition) -> Result<Partition> {
    let mut parts: Vec<isize> = prefix.to_vec();
    parts.extend(tail.parts().iter().map(|&p| p as isize));
    while parts.last() == Some(&0) {
        parts.pop();
    }
    if parts.iter().any(|&p| p <= 0) || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InconsistentInvariants(format!(
            "reconstructed sequence {:?} is not a partition",
            parts
        )));
    }
    Ok(Partition::new(parts.into_iter().map(|p| p as usize).collect()))
}

/// Pencil Weyr characteristic through the kernel representation: w = W,
/// a = A, b = B, and c = (n-m+B_1, m-|W|-|A|-|B|-|C|, C...).
pub fn pencil_weyr_via_kernel(p: &Pencil, extra_eigs: &[Scalar]) -> Result<PencilWeyr> {
    let wc = weyr_characteristic(&p.kernel_rep(), extra_eigs);
    require_resolved(&wc)?;
    let (n, m) = (p.n as isize, p.m as isize);
    let used =
        (wc.w_total() + wc.a.sum() + wc.b.sum() + wc.c.sum()) as isize;
    let c1 = n - m + wc.b.first() as isize;
    let c2 = m - used;
    let c = complete_partition(&[c1, c2], &wc.c)?;
    Ok(PencilWeyr { w: wc.w, a: wc.a, b: wc.b, c })
}

/// Pencil Weyr characteristic through the range representation: w = W,
/// a = A, b = (b_1, B...), c = (c_1, C...) where the prefixes come from the
/// two dimension identities n = |w|+|a|+(|b|-b_1)+|c| and
/// m = |w|+|a|+|b|+(|c|-c_1) solved jointly:
/// b_1 = m-|W|-|A|-|B|-|C| and c_1 = n-|W|-|A|-|B|-|C|.
pub fn pencil_weyr_via_range(p: &Pencil, extra_eigs: &[Scalar]) -> Result<PencilWeyr> {
    let wc = weyr_characteristic(&p.range_rep(), extra_eigs);
    require_resolved(&wc)?;
    let used =
        (wc.w_total() + wc.a.sum() + wc.b.sum() + wc.c.sum()) as isize;
    let b1 = p.m as isize - used;
    let c1 = p.n as isize - used;
    let b = complete_partition(&[b1], &wc.b)?;
    let c = complete_partition(&[c1], &wc.c)?;
    Ok(PencilWeyr { w: wc.w, a: wc.a, b, c })
}

/// Smallest number of rows n of a pencil whose kernel representation has the
/// given Weyr characteristic in C^m: n = 2m-|W|-|A|-|B|-B_1-|C|. Also returns
/// the completed multi-shift sequence c = (c_1, c_1, C...) with
/// c_1 = m-|W|-|A|-|B|-|C| realized by that minimal pencil.
pub fn minimal_rows_kernel(wc: &WeyrCharacteristic, m: usize) -> Result<(usize, Partition)> {
    let used = (wc.w_total() + wc.a.sum() + wc.b.sum() + wc.c.sum()) as isize;
    let n = 2 * m as isize - used - wc.b.first() as isize;
    if n < 1 {
        return Err(Error::Infeasible);
    }
    let c1 = m as isize - used;
    let c = complete_partition(&[c1, c1], &wc.c)
        .map_err(|_| Error::Infeasible)?;
    Ok((n as usize, c))
}

/// Smallest number of rows for a pencil whose range representation has the
/// given characteristic: n = |W|+|A|+|B|+|C|. The source derivation for this
/// count is stated without proof; only the formula as given is implemented.
pub fn minimal_rows_range(wc: &WeyrCharacteristic) -> Result<usize> {
    let n = wc.w_total() + wc.a.sum() + wc.b.sum() + wc.c.sum();
    if n < 1 {
        return Err(Error::Infeasible);
    }
    Ok(n)
}

/// Q(s) = U P(s) V for invertible U (n x n) and V (m x m).
pub fn apply_pencil_equivalence(
    p: &Pencil,
    u: &ExactMatrix,
    v: &ExactMatrix,
) -> Result<Pencil> {
    if u.rows() != p.n || u.cols() != p.n || v.rows() != p.m || v.cols() != p.m {
        return Err(Error::ShapeMismatch(format!(
            "U is {}x{}, V is {}x{}, pencil is {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols(),
            p.n,
            p.m
        )));
    }
    if !u.is_invertible() || !v.is_invertible() {
        return Err(Error::SingularTransform);
    }
    Pencil::new(u.matmul(&p.e).matmul(v), u.matmul(&p.f).matmul(v))
}

/// Eigenvalue-free invariant tuple deciding strict equivalence: monic Smith
/// invariant factors (capturing all finite elementary divisors exactly, with
/// no root extraction) plus the minimal-index/infinite data recovered from
/// the kernel representation. n_0 = sum of the factor degrees replaces |W|
/// in the multi-shift reconstruction so unresolved eigenvalues never matter.
#[derive(PartialEq, Eq, Debug)]
struct EquivalenceInvariants {
    factors: Vec<Poly>,
    a: Partition,
    b: Partition,
    c: Partition,
}

fn equivalence_invariants(p: &Pencil) -> Result<EquivalenceInvariants> {
    let factors = p.invariant_factors();
    let n0: usize = factors.iter().map(|f| f.degree()).sum();
    let s = p.kernel_rep();
    let a = crate::weyr::weyr_inf(&s);
    let b = crate::weyr::weyr_singular(&s);
    let c_tail = crate::weyr::weyr_multishift(&s);
    let (n, m) = (p.n as isize, p.m as isize);
    let used = (n0 + a.sum() + b.sum() + c_tail.sum()) as isize;
    let c1 = n - m + b.first() as isize;
    let c2 = m - used;
    let c = complete_partition(&[c1, c2], &c_tail)?;
    Ok(EquivalenceInvariants { factors, a, b, c })
}

/// Strict equivalence decision by invariant comparison. Works without
/// resolving eigenvalues: invariant factors are compared as exact
/// polynomials.
pub fn strictly_equivalent_pencils(p: &Pencil, q: &Pencil) -> Result<bool> {
    if p.n != q.n || p.m != q.m {
        return Ok(false);
    }
    let ip = equivalence_invariants(p)?;
    let iq = equivalence_invariants(q)?;
    Ok(ip == iq)
}
