//! Seeded random generators for invariants, matrices, and transforms, shared
//! by the perturbation trial runner and the property suites. All generation
//! is deterministic given the RNG state.

use rand::Rng;

use crate::matrix::ExactMatrix;
use crate::pencil::KroneckerInvariants;
use crate::scalar::Scalar;
use crate::weyr::Partition;

/// Random integer-entry matrix with entries in [lo, hi].
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| Scalar::from_int(rng.gen_range(lo..=hi)))
}

/// Random invertible matrix with entries in [lo, hi]; rejection-sampled.
pub fn random_invertible(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> ExactMatrix {
    loop {
        let m = random_matrix(rng, n, n, lo, hi);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random non-increasing partition with at most `max_parts` parts, each at
/// most `max_part`, total at most `budget`. May be empty.
pub fn random_partition(
    rng: &mut impl Rng,
    max_parts: usize,
    max_part: usize,
    budget: usize,
) -> Partition {
    let mut parts = Vec::new();
    let mut cap = max_part.min(budget);
    let count = rng.gen_range(0..=max_parts);
    for _ in 0..count {
        if cap == 0 {
            break;
        }
        let p = rng.gen_range(1..=cap);
        let remaining: usize = budget - parts.iter().sum::<usize>();
        if p > remaining {
            break;
        }
        parts.push(p);
        cap = cap.min(p).min(remaining - p.min(remaining));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts)
}

/// Bounded random Kronecker invariants: at most 3 finite eigenvalues drawn
/// from {0, 1, -1, 2, 3}, parts at most 4, total pencil size at most
/// `max_total`.
pub fn random_invariants(rng: &mut impl Rng, max_total: usize) -> KroneckerInvariants {
    let pool: [i64; 5] = [0, 1, -1, 2, 3];
    loop {
        let mut budget = max_total;
        let mut finite = Vec::new();
        let n_eigs = rng.gen_range(0..=3usize);
        let mut used: Vec<i64> = Vec::new();
        for _ in 0..n_eigs {
            let lam = pool[rng.gen_range(0..pool.len())];
            if used.contains(&lam) {
                continue;
            }
            let segre = random_partition(rng, 3, 4, budget.min(5));
            if segre.is_empty() {
                continue;
            }
            budget = budget.saturating_sub(segre.sum());
            used.push(lam);
            finite.push((Scalar::from_int(lam), segre));
        }
        finite.sort_by(|a, b| a.0.lex_cmp(&b.0));
        let alpha = random_partition(rng, 3, 4, budget.min(5));
        budget = budget.saturating_sub(alpha.sum());
        let beta = random_partition(rng, 3, 4, budget.min(6));
        budget = budget.saturating_sub(beta.sum());
        let gamma = random_partition(rng, 3, 4, budget.min(6));
        let inv = KroneckerInvariants { finite, alpha, beta, gamma };
        // Avoid the degenerate 0x0 pencil.
        if !(inv.finite.is_empty()
            && inv.alpha.is_empty()
            && inv.beta.is_empty()
            && inv.gamma.is_empty())
        {
            return inv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let inv = random_invariants(&mut rng, 14);
            let total: usize = inv.finite.iter().map(|(_, p)| p.sum()).sum::<usize>()
                + inv.alpha.sum()
                + inv.beta.sum()
                + inv.gamma.sum();
            assert!(total <= 14 && total > 0);
            let t = random_invertible(&mut rng, 3, -3, 3);
            assert!(t.is_invertible());
        }
    }
}
