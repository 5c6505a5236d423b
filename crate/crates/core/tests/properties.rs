use proptest::prelude::*;

use opineq::classes::{
    dk_ratio_minimize, dk_spectral_test, multiplier, phi, schur_rep_residual,
    schur_theorem_bound_check,
};
use opineq::conjecture::{build_conj_matrix, psd_check, sample_constrained, ConjectureInstance};
use opineq::cpr::{
    cor23_check, cor24_check, cpr_check, cpr_star_check, cpr_two_sided_check, final_cor_check,
    mos1_check, mos2_check, zhan_chain, zhan_chain_in, zhan_check, ZhanParams,
};
use opineq::heinz::{
    agm_check, heinz_check, heinz_expr, integral_mean_norm, kittaneh_chain, sym_product, Regime,
};
use opineq::matcore::{
    frac_power, ginibre, haar_unitary, herm_eigen, random_hermitian, random_invertible,
    random_posdef, random_selfadjoint_invertible, singular_values, svd, test_matrix, CMatrix,
    Complex,
};
use opineq::norms::{direct_sum_norm, norm};
use opineq::{NormKind, Rng};

const KINDS: [NormKind; 5] = [
    NormKind::Operator,
    NormKind::TRACE,
    NormKind::FROBENIUS,
    NormKind::KyFan(2),
    NormKind::Schatten(3.0),
];

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), n in 1usize..9) {
        let a = random_hermitian(n, &mut Rng::new(seed));
        let e = herm_eigen(&a).unwrap();
        prop_assert!(e.reconstruct().rel_diff(&a) <= 1e-10);
    }

    #[test]
    fn singular_values_match_gram_spectrum(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let a = ginibre(r, c, &mut Rng::new(seed));
        let s = singular_values(&a).unwrap();
        let gram = (a.adjoint() * &a).hermitian_part();
        let mut ev = herm_eigen(&gram).unwrap().eigenvalues;
        ev.reverse();
        for (i, si) in s.iter().enumerate() {
            prop_assert!(close(*si, ev[i].max(0.0).sqrt(), 1e-9));
        }
        prop_assert!(svd(&a).unwrap().reconstruct().rel_diff(&a) <= 1e-10);
    }

    #[test]
    fn fractional_power_semigroup(seed in any::<u64>(), n in 1usize..7, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let p = random_posdef(n, 100.0, &mut Rng::new(seed));
        let lhs = frac_power(p.matrix(), s).unwrap() * frac_power(p.matrix(), t).unwrap();
        prop_assert!(lhs.rel_diff(&frac_power(p.matrix(), s + t).unwrap()) <= 1e-9);
        let inv = frac_power(p.matrix(), 1.0).unwrap().inverse().unwrap();
        prop_assert!(inv.rel_diff(&frac_power(p.matrix(), -1.0).unwrap()) <= 1e-9);
    }

    #[test]
    fn samplers_are_deterministic(seed in any::<u64>(), n in 1usize..6, stream in 0u64..100) {
        let a = Rng::new(seed).substream(stream);
        let b = Rng::new(seed).substream(stream);
        prop_assert_eq!(haar_unitary(n, &mut a.clone()), haar_unitary(n, &mut b.clone()));
        prop_assert_eq!(
            random_posdef(n, 10.0, &mut a.clone()).matrix().clone(),
            random_posdef(n, 10.0, &mut b.clone()).matrix().clone()
        );
        prop_assert_eq!(
            random_selfadjoint_invertible(n, 10.0, &mut a.clone()).matrix,
            random_selfadjoint_invertible(n, 10.0, &mut b.clone()).matrix
        );
    }

    #[test]
    fn norm_axioms(seed in any::<u64>(), n in 1usize..6, c in -5.0f64..5.0) {
        let mut rng = Rng::new(seed);
        let a = ginibre(n, n, &mut rng);
        let b = ginibre(n, n, &mut rng);
        let u = haar_unitary(n, &mut rng);
        let v = haar_unitary(n, &mut rng);
        for kind in KINDS {
            let na = norm(&a, kind);
            prop_assert!((norm(&(&u * &a * &v), kind) - na).abs() <= 1e-9 * na.max(1.0));
            let sum = norm(&(&a + &b), kind);
            prop_assert!(sum <= (na + norm(&b, kind)) * (1.0 + 1e-10));
            prop_assert!(close(norm(&a.scale(c), kind), c.abs() * na, 1e-10));
        }
        prop_assert!(close(norm(&a, NormKind::FROBENIUS), a.frobenius_norm(), 1e-10));
    }

    #[test]
    fn direct_sum_identities(seed in any::<u64>(), n in 1usize..6, m in 1usize..6, p in 1.0f64..6.0) {
        let mut rng = Rng::new(seed);
        let a = ginibre(n, n, &mut rng);
        let b = ginibre(m, m, &mut rng);
        let op = direct_sum_norm(&a, &b, NormKind::Operator);
        let max = norm(&a, NormKind::Operator).max(norm(&b, NormKind::Operator));
        prop_assert!(close(op, max, 1e-12));
        let sp = NormKind::Schatten(p);
        let psum = (norm(&a, sp).powf(p) + norm(&b, sp).powf(p)).powf(1.0 / p);
        prop_assert!(close(direct_sum_norm(&a, &b, sp), psum, 1e-12));
    }

    #[test]
    fn heinz_symmetry_and_chains(seed in any::<u64>(), n in 2usize..6, alpha in 0.0f64..=1.0) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        let h = heinz_expr(&a, &b, &x, alpha).unwrap();
        let g = heinz_expr(&a, &b, &x, 1.0 - alpha).unwrap();
        prop_assert!(h.rel_diff(&g) <= 1e-12);
        for kind in KINDS {
            prop_assert!(heinz_check(&a, &b, &x, alpha, kind).unwrap().all_pass());
            let c = kittaneh_chain(&a, &b, &x, alpha, kind).unwrap();
            prop_assert!(c.all_pass(), "{} {:?}", kind, c.values);
        }
    }

    #[test]
    fn heinz_norm_is_symmetric_on_nodes(seed in any::<u64>(), n in 2usize..5, nu in 0.0f64..=1.0) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = ginibre(n, n, &mut rng);
        for kind in KINDS {
            let f = norm(&sym_product(&a, &b, &x, nu, 1.0 - nu).unwrap(), kind);
            let g = norm(&sym_product(&a, &b, &x, 1.0 - nu, nu).unwrap(), kind);
            prop_assert!(close(f, g, 1e-10));
        }
    }

    #[test]
    fn quadrature_resolution(seed in any::<u64>(), n in 2usize..5, lo in 0.0f64..0.5, len in 0.0f64..0.5) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = ginibre(n, n, &mut rng);
        let kind = NormKind::FROBENIUS;
        let m32 = integral_mean_norm(&a, &b, &x, lo, lo + len, kind, 32).unwrap();
        let m64 = integral_mean_norm(&a, &b, &x, lo, lo + len, kind, 64).unwrap();
        prop_assert!(close(m32, m64, 1e-8));
    }

    #[test]
    fn agm_holds(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = Rng::new(seed);
        let a = ginibre(n, n, &mut rng);
        let b = ginibre(n, n, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        for kind in KINDS {
            prop_assert!(agm_check(&a, &b, &x, kind).unwrap().all_pass());
        }
    }

    #[test]
    fn cpr_family(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = Rng::new(seed);
        let s = random_selfadjoint_invertible(n, 100.0, &mut rng).matrix;
        let t = random_selfadjoint_invertible(n, 100.0, &mut rng).matrix;
        let g = random_invertible(n, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        for kind in KINDS {
            prop_assert!(cpr_check(&s, &x, kind).unwrap().all_pass());
            prop_assert!(cpr_two_sided_check(&s, &t, &x, kind).unwrap().all_pass());
            prop_assert!(cpr_star_check(&g, &x, kind).unwrap().all_pass());
        }
    }

    #[test]
    fn zhan_chain_properties(
        seed in any::<u64>(),
        n in 2usize..5,
        t in -3.0f64..=2.0,
        r in 0.5f64..=1.5,
    ) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        let p = ZhanParams::new(t, r).unwrap();
        for kind in KINDS {
            let c = zhan_chain(&a, &b, &x, p, kind).unwrap();
            prop_assert!(c.all_pass(), "{} {:?}", kind, c.values);
            let z = zhan_check(&a, &b, &x, p, kind).unwrap();
            prop_assert_eq!(c.values[0], z.values[0]);
            prop_assert_eq!(c.values[7], z.values[1]);
        }
    }

    #[test]
    fn zhan_regime_continuity(seed in any::<u64>(), n in 2usize..5, t in -1.0f64..=2.0) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = ginibre(n, n, &mut rng);
        let p = ZhanParams::new(t, 1.0).unwrap();
        for kind in KINDS {
            let lo = zhan_chain_in(&a, &b, &x, p, kind, Regime::Lower).unwrap();
            let hi = zhan_chain_in(&a, &b, &x, p, kind, Regime::Upper).unwrap();
            for (u, v) in lo.values.iter().zip(&hi.values) {
                prop_assert!(close(*u, *v, 1e-10));
            }
        }
    }

    #[test]
    fn corollaries(seed in any::<u64>(), n in 1usize..5, t in -3.0f64..=2.0) {
        let mut rng = Rng::new(seed);
        let a = ginibre(n, n, &mut rng);
        let b = ginibre(n, n, &mut rng);
        let p = random_posdef(n, 100.0, &mut rng);
        let q = random_posdef(n, 100.0, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        for kind in KINDS {
            prop_assert!(cor23_check(&a, &b, &x, t, kind).unwrap().all_pass());
            prop_assert!(cor24_check(&p, &q, &x, t, kind).unwrap().all_pass());
        }
    }

    #[test]
    fn cor23_on_positive_pairs_is_half_zhan(seed in any::<u64>(), n in 1usize..5, t in -1.0f64..=2.0) {
        let mut rng = Rng::new(seed);
        let a = random_posdef(n, 100.0, &mut rng);
        let b = random_posdef(n, 100.0, &mut rng);
        let x = ginibre(n, n, &mut rng);
        let p = ZhanParams::new(t, 1.0).unwrap();
        for kind in KINDS {
            let c = cor23_check(a.matrix(), b.matrix(), &x, t, kind).unwrap();
            let z = zhan_check(&a, &b, &x, p, kind).unwrap();
            prop_assert!(close(2.0 * c.values[0], z.values[0], 1e-10));
            prop_assert!(close(2.0 * c.values[1], z.values[1], 1e-10));
        }
    }

    #[test]
    fn direct_sum_variants(seed in any::<u64>(), n in 2usize..6, p in 1.0f64..4.0) {
        let mut rng = Rng::new(seed);
        let s = random_invertible(n, &mut rng);
        let x = test_matrix(seed as usize, n, &mut rng);
        let y = ginibre(n, n, &mut rng);
        for kind in KINDS {
            prop_assert!(mos1_check(&s, &x, &y, kind).unwrap().all_pass());
            prop_assert!(mos2_check(&s, &x, &y, kind).unwrap().all_pass());
        }
        let f = final_cor_check(&s, &x, p).unwrap();
        prop_assert!(f.all_pass());
        let m = mos1_check(&s, &x, &x, NormKind::Operator).unwrap();
        prop_assert!(close(m.values[0], f.operator.values[0], 1e-12));
    }

    #[test]
    fn schur_structure(seed in any::<u64>(), n in 1usize..13, k in 0.0f64..=2.0) {
        let mut rng = Rng::new(seed);
        let s = random_selfadjoint_invertible(n, 100.0, &mut rng).matrix;
        let x = test_matrix(seed as usize, n, &mut rng);
        prop_assert!(schur_rep_residual(&s, k, &x).unwrap() <= 1e-10);
        let g = ginibre(n, n + 1, &mut rng);
        let gram = (&g * &g.adjoint()).hermitian_part();
        prop_assert!(schur_theorem_bound_check(&gram, &x).unwrap().all_pass());
    }

    #[test]
    fn spectral_failure_is_witnessed(l in -10.0f64..10.0, m in -10.0f64..10.0, k in 0.0f64..=2.0) {
        prop_assume!(l.abs() > 0.01 && m.abs() > 0.01);
        let test = dk_spectral_test(&[l, m], k).unwrap();
        prop_assume!(!test.ok);
        let s = CMatrix::from_diag_real(&[l, m]);
        let r = dk_ratio_minimize(&s, k, 0, 0, &Rng::new(0)).unwrap();
        prop_assert!(r.best_ratio < k + 2.0 - 1e-9);
    }

    #[test]
    fn posdef_multiples_lie_in_every_class(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = Rng::new(seed);
        let c = rng.complex_normal() + Complex::new(0.1, 0.0);
        let s = random_posdef(n, 100.0, &mut rng).matrix().scale_complex(c);
        let x = test_matrix(seed as usize, n, &mut rng);
        // passing at k must carry over to every smaller k
        let mut passed_above = false;
        for k in [2.0, 1.5, 1.0, 0.5, 0.0] {
            for kind in KINDS {
                let lhs = norm(&phi(&s, k, &x).unwrap(), kind);
                let rhs = (k + 2.0) * norm(&x, kind);
                let ok = lhs - rhs >= -1e-8 * lhs.max(rhs).max(1.0);
                prop_assert!(ok);
                prop_assert!(!passed_above || ok);
            }
            passed_above = true;
        }
    }

    #[test]
    fn conjecture_matrix_structure(seed in any::<u64>(), n in 1usize..8, k in 0.0f64..=2.0, c in 0.1f64..10.0) {
        let mut rng = Rng::new(seed);
        let (l, _) = sample_constrained(n, k, &mut rng).unwrap();
        let m = build_conj_matrix(&l, k).unwrap();
        for i in 0..n {
            prop_assert!((m[(i, i)].re - 1.0 / (2.0 + k)).abs() <= 1e-15);
        }
        let scaled: Vec<f64> = l.iter().map(|x| -c * x).collect();
        prop_assert!(build_conj_matrix(&scaled, k).unwrap().max_abs_diff(&m) <= 1e-12);
        let ones = m.hadamard(&multiplier(&l, k)).unwrap();
        prop_assert!(ones.as_slice().iter().all(|z| (z - Complex::new(1.0, 0.0)).norm() <= 1e-12));
        let inst = ConjectureInstance::evaluate(&l, k).unwrap();
        prop_assert_eq!(inst.min_eig.to_bits(), psd_check(&m).unwrap().0.to_bits());
    }

    #[test]
    fn two_by_two_conjecture_holds(seed in any::<u64>(), k in 0.0f64..=2.0) {
        let (l, _) = sample_constrained(2, k, &mut Rng::new(seed)).unwrap();
        prop_assert!(ConjectureInstance::evaluate(&l, k).unwrap().psd);
    }
}
