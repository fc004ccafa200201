//! Algebraic identities of polynomials and symmetric matrices, on random input.

mod common;

use common::q;
use itertools::Itertools;
use lorentzlab::inertia::{inertia, SymMatrix};
use lorentzlab::linalg::{det, mat_mul, transpose, Matrix};
use lorentzlab::{HomPoly, Monomial, VarSet, Q};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A form with signed coefficients on a random subset of monomials.
fn random_form(rng: &mut ChaCha8Rng, n: usize, d: u32) -> HomPoly {
    let mut terms: Vec<(Monomial, Q)> = Vec::new();
    for ix in (0..n).combinations_with_replacement(d as usize) {
        if rng.gen_bool(0.5) {
            let mut e = vec![0u32; n];
            for i in ix {
                e[i] += 1;
            }
            terms.push((Monomial::from_dense(&e), Q::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
        }
    }
    HomPoly::from_terms(VarSet::numbered(n), d, terms).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| q(rng.gen_range(-3..=3))).collect()).collect()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| Q::new(rng.gen_range(-7..=7), rng.gen_range(1..=4))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_identity(seed in any::<u64>(), n in 1usize..5, d in 1u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, d);
        let mut sum = HomPoly::zero(f.vars().clone(), d);
        for i in 0..n {
            sum = sum.add(&HomPoly::var(f.vars().clone(), i).mul(&f.partial(i)));
        }
        prop_assert_eq!(sum, f.scale(&q(d as i64)));
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), n in 1usize..5, d in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, d);
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let (ma, mb) = (Monomial::from_dense(&a), Monomial::from_dense(&b));
        prop_assert_eq!(f.mixed_partial(&ma).mixed_partial(&mb), f.mixed_partial(&mb).mixed_partial(&ma));
        prop_assert_eq!(f.mixed_partial(&ma).mixed_partial(&mb), f.mixed_partial(&ma.mul(&mb)));
    }

    #[test]
    fn directional_derivative_is_gradient_pairing(seed in any::<u64>(), n in 1usize..5, d in 0u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, d);
        let v = random_point(&mut rng, n);
        let mut expect = HomPoly::zero(f.vars().clone(), d.saturating_sub(1));
        for (i, vi) in v.iter().enumerate() {
            expect = expect.add(&f.partial(i).scale(vi));
        }
        prop_assert_eq!(f.dir_derivative(&v).unwrap(), expect);
    }

    #[test]
    fn substitution_composes(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..4, d in 0u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, d);
        let (a, b) = (random_matrix(&mut rng, n, m), random_matrix(&mut rng, m, k));
        let (vm, vk) = (VarSet::numbered(m), VarSet::numbered(k));
        let stepwise = f.substitute_linear(&a, &vm).unwrap().substitute_linear(&b, &vk).unwrap();
        let direct = f.substitute_linear(&mat_mul(&a, &b, k), &vk).unwrap();
        prop_assert_eq!(stepwise, direct);
    }

    #[test]
    fn lineality_directions_leave_values_unchanged(seed in any::<u64>(), n in 2usize..5, d in 1u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // forms in fewer effective variables have a nontrivial lineality space
        let r = rng.gen_range(1..n);
        let g = random_form(&mut rng, r, d);
        let f = g.substitute_linear(&random_matrix(&mut rng, r, n), &VarSet::numbered(n)).unwrap();
        let lin = f.lineality_space();
        prop_assert!(lin.dim() >= n - r);
        for l in lin.basis() {
            let x = random_point(&mut rng, n);
            let shifted: Vec<Q> = x.iter().zip(l).map(|(a, b)| a + b).collect();
            prop_assert_eq!(f.evaluate(&shifted).unwrap(), f.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn inertia_is_a_congruence_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = random_matrix(&mut rng, n, n);
        for i in 0..n {
            for j in 0..i {
                m[i][j] = m[j][i].clone();
            }
        }
        let a = loop {
            let a = random_matrix(&mut rng, n, n);
            if !det(&a).is_zero() {
                break a;
            }
        };
        let congruent = mat_mul(&mat_mul(&transpose(&a, n), &m, n), &a, n);
        let before = inertia(&SymMatrix::new(m).unwrap());
        let after = inertia(&SymMatrix::new(congruent).unwrap());
        prop_assert_eq!(before, after);
        prop_assert_eq!(before.pos + before.neg + before.zero, n);
    }
}
