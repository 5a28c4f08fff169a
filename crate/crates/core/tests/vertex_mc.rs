mod common;

use chiral_core::catalog::{heisenberg, kac_moody_example, sl2, ExampleBundle, ExampleDatum, SL2_NAMES};
use chiral_core::datum::{GeneratorSpec, Parity};
use chiral_core::qls::extract_twisted_pair;
use chiral_core::scalar::{binomial, int, rat, Scalar};
use chiral_core::vertex::derivation::bilinear_state;
use chiral_core::vertex::{
    cdg_identity_check, hom_check, mc_check, mc_plain, mc_plain_tensor, Derivation, LieData, McMode, McSetup,
    ModeAlgebra, Side, State, TensorEngine,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sl2_bundle(level: i64) -> ExampleBundle {
    kac_moody_example(&sl2(int(level)).unwrap(), Some(&SL2_NAMES)).unwrap()
}

fn extracted_d(b: &ExampleBundle) -> Derivation {
    let ExampleDatum::Qls(q) = &b.datum else { panic!("not a QLS bundle") };
    let tp = extract_twisted_pair(q).unwrap();
    let e = &b.engines.as_ref().unwrap().dual;
    let images = tp.differential_table.iter().map(|m| bilinear_state(e, &m.terms())).collect();
    Derivation::new(e, images).unwrap()
}

fn t_pow(e: &ModeAlgebra, u: &State, k: u32) -> State {
    (0..k).fold(u.clone(), |s, _| e.translation(&s).unwrap())
}

#[test]
fn ce_differential_closed_form_on_derivatives() {
    let b = sl2_bundle(1);
    let e = &b.engines.as_ref().unwrap().dual;
    let ExampleDatum::Qls(_) = &b.datum else { panic!() };
    let lie = sl2(int(1)).unwrap();
    let d = extracted_d(&b);
    for a in 0..3 {
        for m in 0..=3u32 {
            // d(T^m c^a) = -1/2 sum f^a_{bc} sum_r C(m,r) (T^r c^b)(T^{m-r} c^c)
            let mut want = State::zero();
            for bb in 0..3 {
                for cc in 0..3 {
                    let f = lie.f(bb, cc, a);
                    if f.is_zero() {
                        continue;
                    }
                    for r in 0..=m {
                        let left = t_pow(e, &e.generator(bb), r);
                        let right = t_pow(e, &e.generator(cc), m - r);
                        let prod = e.nth_product(&left, -1, &right).unwrap();
                        want.add_scaled(&prod, &(f * binomial(m as i64, r) * rat(-1, 2)));
                    }
                }
            }
            let got = d.apply(e, &t_pow(e, &e.generator(a), m)).unwrap();
            assert_eq!(got, want, "a = {a}, m = {m}");
        }
    }
}

#[test]
fn cdg_identity_holds() {
    for level in [1, 0, -3] {
        let b = sl2_bundle(level);
        let e = b.engines.as_ref().unwrap().dual.clone().with_cutoff(3);
        let rep = cdg_identity_check(&e, &extracted_d(&b), b.expected_iota.as_ref().unwrap(), 3).unwrap();
        assert!(rep.passed, "level {level}: {:?}", rep.first_failure);
        assert!(rep.states_checked > 50);
        if level == 0 {
            assert!(b.expected_iota.as_ref().unwrap().is_zero());
        }
    }
    // d(ι) is a total derivative, not zero: T(1/6 sum κ([x_c,x_d],x_b) c^c c^d c^b)
    let b = sl2_bundle(1);
    let lie = sl2(int(1)).unwrap();
    let e = &b.engines.as_ref().unwrap().dual;
    let d_iota = extracted_d(&b).apply(e, b.expected_iota.as_ref().unwrap()).unwrap();
    assert!(!d_iota.is_zero());
    let mut cubic = State::zero();
    for c in 0..3 {
        for dd in 0..3 {
            for bb in 0..3 {
                let mut f = Scalar::zero();
                for a in 0..3 {
                    f += lie.kappa(a, bb) * lie.f(c, dd, a);
                }
                if !f.is_zero() {
                    cubic.add_scaled(&e.normal_order(&[(c, -1), (dd, -1), (bb, -1)]).unwrap(), &(f * rat(1, 6)));
                }
            }
        }
    }
    assert_eq!(e.translation(&cubic).unwrap(), d_iota);
    let pre = e.translation_preimage(&d_iota).unwrap().unwrap();
    assert_eq!(e.translation(&pre).unwrap(), d_iota);
    assert!(e.translation_preimage(&e.generator(0)).unwrap().is_none());

    // a curving that is not closed modulo T
    let e = e.clone().with_cutoff(3);
    let mut bad = b.expected_iota.clone().unwrap();
    bad.add_assign(&e.normal_order(&[(0, -2), (1, -1)]).unwrap());
    let rep = cdg_identity_check(&e, &extracted_d(&b), &bad, 3).unwrap();
    assert!(!rep.passed && !rep.d_iota_exact);
}

#[test]
fn normal_order_examples() {
    let b = sl2_bundle(1);
    let p = &b.engines.as_ref().unwrap().primal;
    let (e, h, f) = (0, 1, 2);
    assert_eq!(p.normal_order(&[(e, 0), (f, -1)]).unwrap(), p.generator(h));
    let lie = sl2(int(1)).unwrap();
    for a in 0..3 {
        for bb in 0..3 {
            let got = p.normal_order(&[(a, 1), (bb, -1)]).unwrap();
            assert_eq!(got, State::vacuum().scaled(lie.kappa(a, bb)));
        }
    }
    let ce = &b.engines.as_ref().unwrap().dual;
    assert!(ce.nth_product(&ce.generator(0), 0, &ce.generator(2)).unwrap().is_zero());
}

#[test]
fn normal_ordered_product_matches_mode_expansion() {
    let b = sl2_bundle(1);
    let p = &b.engines.as_ref().unwrap().primal;
    for a in 0..3 {
        for bb in 0..3 {
            for c in 0..3 {
                let u = p.normal_order(&[(a, -1), (bb, -1)]).unwrap();
                let got = p.nth_product(&u, 3, &p.generator(c)).unwrap();
                // (J_a(-1) J_b)(n) w = sum_j J_a(-1-j) J_b(n+j) w + J_b(n-1-j) J_a(j) w
                let n = 3;
                let w = p.generator(c);
                let mut want = State::zero();
                for j in 0..=4 {
                    let inner = p.apply_mode((bb, n + j), &w);
                    want.add_assign(&p.apply_mode((a, -1 - j), &inner));
                    let inner = p.apply_mode((a, j), &w);
                    want.add_assign(&p.apply_mode((bb, n - 1 - j), &inner));
                }
                assert_eq!(got, want, "{a} {bb} {c}");
            }
        }
    }
}

fn canonical_setup<'a>(b: &'a ExampleBundle) -> (TensorEngine<'a>, McSetup<'a>) {
    let e = b.engines.as_ref().unwrap();
    let pair = TensorEngine::new(&e.primal, &e.dual);
    let setup = McSetup {
        pair,
        dual_side: Side::Right,
        d: b.expected_d.as_ref().unwrap(),
        curving: b.expected_iota.as_ref().unwrap(),
    };
    (pair, setup)
}

#[test]
fn abelian_zero_level_terms_vanish() {
    let b = kac_moody_example(&heisenberg(int(0)).unwrap(), None).unwrap();
    let (pair, setup) = canonical_setup(&b);
    let i = pair.canonical_element().unwrap();
    assert!(b.expected_d.as_ref().unwrap().is_zero());
    assert!(b.expected_iota.as_ref().unwrap().is_zero());
    assert!(pair.nth_product(&i, 0, &i).unwrap().is_zero());
    let rep = mc_check(&setup, &i, None).unwrap();
    assert!(rep.passed && rep.residual_e1.is_zero());
    assert!(mc_plain_tensor(&pair, &i, McMode::Full).unwrap());
}

#[test]
fn kappa_perturbation_leaves_half_delta_kappa() {
    let b = sl2_bundle(1);
    let lie = sl2(int(1)).unwrap();
    let e = b.engines.as_ref().unwrap();
    let h = 1;
    let mut kappa = lie.kappa_matrix().clone();
    kappa[h][h] += int(1);
    let bad = LieData::new_unchecked(lie.structure_constants().clone(), kappa).unwrap();
    assert!(LieData::new(lie.structure_constants().clone(), bad.kappa_matrix().clone()).is_err());
    let primal = ModeAlgebra::affine(e.primal.generators().to_vec(), bad).unwrap();
    let pair = TensorEngine::new(&primal, &e.dual);
    let setup = McSetup {
        pair,
        dual_side: Side::Right,
        d: b.expected_d.as_ref().unwrap(),
        curving: b.expected_iota.as_ref().unwrap(),
    };
    let i = pair.canonical_element().unwrap();
    let rep = mc_check(&setup, &i, Some(4)).unwrap();
    assert!(!rep.passed);
    let dcc = e.dual.normal_order(&[(h, -2), (h, -1)]).unwrap();
    let want = TensorEngine::tensor(&State::vacuum(), &dcc).scaled(&rat(1, 2));
    assert_eq!(rep.residual_e1, want);
}

#[test]
fn mc_is_basis_independent() {
    let lie = sl2(int(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let a: Vec<Vec<Scalar>> = loop {
            let m: Vec<Vec<Scalar>> = (0..3)
                .map(|_| (0..3).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect())
                .collect();
            if chiral_core::vertex::lie::invert(&m).is_some() {
                break m;
            }
        };
        let changed = lie.change_basis(&a).unwrap();
        let b = kac_moody_example(&changed, None).unwrap();
        let (pair, setup) = canonical_setup(&b);
        let i = pair.canonical_element().unwrap();
        assert!(mc_check(&setup, &i, Some(3)).unwrap().passed);
    }
}

#[test]
fn fermion_derivative_is_weak_but_not_full_mc() {
    let e = ModeAlgebra::weyl_clifford(
        vec![GeneratorSpec::new("psi", -1, Parity::Even, rat(1, 2))],
        vec![vec![int(1)]],
    )
    .unwrap();
    let v = e.translation(&e.generator(0)).unwrap();
    assert!(mc_plain(&e, &v, McMode::Weak).unwrap());
    assert!(!mc_plain(&e, &v, McMode::Full).unwrap());
    assert_eq!(e.nth_product(&v, 2, &v).unwrap(), State::vacuum().scaled(&int(-2)));
    assert!(mc_plain(&e, &State::zero(), McMode::Full).unwrap());
    assert!(mc_plain(&e, &State::zero(), McMode::Weak).unwrap());
}

type Witness = Option<(i64, usize, usize)>;

/// Runs `hom_check` and the MC check of `sum_a c^a ⊗ y_a`.
fn hom_and_mc(b: &ExampleBundle, lie: &LieData, target: &ModeAlgebra, images: &[State]) -> (bool, bool, Witness, Witness) {
    let hom = hom_check(lie, target, images).unwrap();
    let e = b.engines.as_ref().unwrap();
    let pair = TensorEngine::new(&e.dual, target);
    let alpha = pair.element_from_images(images).unwrap();
    let setup = McSetup {
        pair,
        dual_side: Side::Left,
        d: b.expected_d.as_ref().unwrap(),
        curving: b.expected_iota.as_ref().unwrap(),
    };
    let mc = mc_check(&setup, &alpha, None).unwrap();
    let w = |x: Option<chiral_core::vertex::RelationWitness>| x.map(|w| (w.n, w.a, w.b));
    (hom.passed, mc.passed, w(hom.witness), w(mc.witness))
}

#[test]
fn hom_check_identity_and_heisenberg_family() {
    let b = sl2_bundle(1);
    let lie = sl2(int(1)).unwrap();
    let target = &b.engines.as_ref().unwrap().primal;
    let images: Vec<State> = (0..3).map(|a| target.generator(a)).collect();
    let (hom, mc, _, _) = hom_and_mc(&b, &lie, target, &images);
    assert!(hom && mc);

    let lie = heisenberg(int(1)).unwrap();
    let b = kac_moody_example(&lie, None).unwrap();
    let target = &b.engines.as_ref().unwrap().primal;
    for (num, den) in [(1, 1), (-1, 1), (0, 1), (2, 1), (1, 2), (-3, 2)] {
        let lambda = rat(num, den);
        let y = target.generator(0).scaled(&lambda);
        let (hom, mc, hw, mw) = hom_and_mc(&b, &lie, target, &[y]);
        let expect = &lambda * &lambda == Scalar::one();
        assert_eq!(hom, expect, "λ = {lambda}");
        assert_eq!(mc, expect, "λ = {lambda}");
        assert_eq!(hw, mw, "λ = {lambda}");
    }
}

#[test]
fn weight_one_perturbations_fail_with_matching_witness() {
    let b = sl2_bundle(1);
    let lie = sl2(int(1)).unwrap();
    let target = &b.engines.as_ref().unwrap().primal;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let mut images: Vec<State> = (0..3).map(|a| target.generator(a)).collect();
        let which = rng.gen_range(0..3);
        let mut delta = State::zero();
        while delta.is_zero() {
            for c in 0..3 {
                delta.add_scaled(&target.generator(c), &int(rng.gen_range(-2..=2)));
            }
        }
        images[which].add_assign(&delta);
        let (hom, mc, hw, mw) = hom_and_mc(&b, &lie, target, &images);
        assert!(!hom && !mc);
        assert!(hw.is_some());
        assert_eq!(hw, mw);
    }
}
