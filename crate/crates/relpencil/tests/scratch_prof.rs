use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relpencil::pencil::{build_kronecker, Pencil};
use relpencil::perturb::{rank_one_pencil, PerturbationForm, RankOnePencil};
use relpencil::poly::{determinantal_multiple, normal_rank, smith_normal_form, PolyMatrix};
use relpencil::random::random_invariants;
use relpencil::scalar::Scalar;

fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect()
}

#[test]
fn profile_trial9() {
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    let mut pair = None;
    for _ in 0..10 {
        let inv = random_invariants(&mut rng, 12);
        let p = build_kronecker(&inv);
        let q = loop {
            let form = if rng.gen_bool(0.5) {
                PerturbationForm::Column
            } else {
                PerturbationForm::Row
            };
            let (ulen, wlen) = match form {
                PerturbationForm::Column => (p.m, p.n),
                PerturbationForm::Row => (p.n, p.m),
            };
            let r = RankOnePencil {
                form,
                u: random_vector(&mut rng, ulen),
                v: random_vector(&mut rng, ulen),
                w: random_vector(&mut rng, wlen),
            };
            let delta = match rank_one_pencil(&r) {
                Ok(d) => d,
                Err(_) => continue,
            };
            if delta.e.is_zero() && delta.f.is_zero() {
                continue;
            }
            break Pencil::new(p.e.add(&delta.e), p.f.add(&delta.f)).expect("same shape");
        };
        pair = Some((p, q));
    }
    let (p, q) = pair.unwrap();
    println!("trial 9 pencils: p {}x{}, q {}x{}", p.n, p.m, q.n, q.m);
    for (name, pen) in [("p", &p), ("q", &q)] {
        let t0 = Instant::now();
        let s = pen.kernel_rep();
        println!("{name}: kernel_rep {:?} (dim {})", t0.elapsed(), s.dim());
        let basis = s.space().basis();
        let m = s.m();
        let x = basis.row_slice(0, m);
        let y = basis.row_slice(m, 2 * m);
        let pencil = PolyMatrix::pencil(&x, &y);
        let t0 = Instant::now();
        let r = normal_rank(&pencil);
        println!("{name}: pencil {}x{} normal_rank {} in {:?}", pencil.rows(), pencil.cols(), r, t0.elapsed());
        let t0 = Instant::now();
        let g = determinantal_multiple(&pencil);
        println!(
            "{name}: determinantal_multiple deg {:?} in {:?}",
            g.as_ref().map(|g| g.degree()),
            t0.elapsed()
        );
        let t0 = Instant::now();
        let (_, factors) = smith_normal_form(&pencil);
        println!("{name}: smith ({} factors) in {:?}", factors.len(), t0.elapsed());
    }
}
