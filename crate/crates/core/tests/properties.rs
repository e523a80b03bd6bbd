use proptest::prelude::*;

use vfilt_core::crystal::{build_extension, build_kummer_crystal, sol_extension, DeltaElement, FModule, Mono, Section};
use vfilt_core::field::{
    make_field, primitive_root_of_unity, saturate_fixed_points, semilinear_fixed_points, FieldCtx, FieldElem, Mat,
    SemilinearOperator,
};
use vfilt_core::functors::{functor_f, functor_g, reps_isomorphic, splitting_field};
use vfilt_core::sample;
use vfilt_core::series::{frob_series, galois_act, standard_level};
use vfilt_core::vfilt::{check_specializing, check_super, standard_vfilt, Window};
use vfilt_core::LaurentSeries;

fn small_field() -> impl Strategy<Value = FieldCtx> {
    prop_oneof![
        Just((2u64, 3usize)),
        Just((3, 2)),
        Just((5, 1)),
        Just((5, 2)),
        Just((7, 1)),
        Just((7, 2)),
        Just((2, 5))
    ]
    .prop_map(|(p, m)| make_field(p, m).unwrap())
}

fn elem(ctx: &FieldCtx, idx: u64) -> FieldElem {
    let q = ctx.order().unwrap();
    ctx.from_index(idx as u128 % q).unwrap()
}

fn series(ctx: &FieldCtx, terms: &[(i64, u64)]) -> LaurentSeries {
    LaurentSeries::poly(ctx, terms.iter().map(|&(e, c)| (e, elem(ctx, c))))
}

fn terms() -> impl Strategy<Value = Vec<(i64, u64)>> {
    prop::collection::vec((-8i64..8, 0u64..1000), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_a_field_automorphism(ctx in small_field(), a in 0u64..10_000, b in 0u64..10_000) {
        let (x, y) = (elem(&ctx, a), elem(&ctx, b));
        prop_assert_eq!(ctx.frobenius(&ctx.add(&x, &y)), ctx.add(&ctx.frobenius(&x), &ctx.frobenius(&y)));
        prop_assert_eq!(ctx.frobenius(&ctx.mul(&x, &y)), ctx.mul(&ctx.frobenius(&x), &ctx.frobenius(&y)));
        prop_assert_eq!(ctx.frobenius_iter(&x, ctx.m()), x);
    }

    #[test]
    fn roots_of_unity_have_exact_order(ctx in small_field(), d in 1u64..13) {
        let q1 = (ctx.order().unwrap() - 1) as u64;
        prop_assume!(q1.is_multiple_of(d));
        let xi = primitive_root_of_unity(&ctx, d).unwrap();
        prop_assert_eq!(ctx.pow(&xi, d as u128), ctx.one());
        for k in 1..d {
            prop_assert_ne!(ctx.pow(&xi, k as u128), ctx.one());
        }
    }

    #[test]
    fn fixed_points_solve_and_match_enumeration(ctx in small_field(), n in 1usize..3, seed in 0u64..1000) {
        let q = ctx.order().unwrap();
        prop_assume!(q.pow(n as u32) <= 1 << 12);
        let mut s = seed;
        let rows: Vec<Vec<FieldElem>> = (0..n)
            .map(|_| (0..n).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); elem(&ctx, s >> 33) }).collect())
            .collect();
        let op = SemilinearOperator::new(&ctx, Mat::from_rows(rows, n)).unwrap();
        let fixed = semilinear_fixed_points(&ctx, &op);
        for v in &fixed.basis {
            prop_assert_eq!(&op.apply(&ctx, v), v);
        }
        let mut count = 0u128;
        for idx in 0..q.pow(n as u32) {
            let mut rest = idx;
            let v: Vec<FieldElem> = (0..n).map(|_| { let e = ctx.from_index(rest % q).unwrap(); rest /= q; e }).collect();
            if op.apply(&ctx, &v) == v {
                count += 1;
            }
        }
        prop_assert_eq!(count, (ctx.p() as u128).pow(fixed.dim() as u32));
    }

    #[test]
    fn saturation_profile_is_monotone(ctx in small_field(), a in 1u64..10_000) {
        let x = elem(&ctx, a);
        prop_assume!(!x.is_zero());
        let op = SemilinearOperator::new(&ctx, Mat::from_rows(vec![vec![x]], 1)).unwrap();
        let sat = saturate_fixed_points(&ctx, &op, 24).unwrap();
        prop_assert_eq!(*sat.profile.last().unwrap(), 1);
        prop_assert_eq!(sat.fixed.dim(), 1);
    }

    #[test]
    fn series_ring_axioms(ctx in small_field(), a in terms(), b in terms(), c in terms()) {
        let (x, y, z) = (series(&ctx, &a), series(&ctx, &b), series(&ctx, &c));
        prop_assert_eq!(x.mul(&ctx, &y.add(&ctx, &z)), x.mul(&ctx, &y).add(&ctx, &x.mul(&ctx, &z)));
        prop_assert_eq!(x.mul(&ctx, &y), y.mul(&ctx, &x));
        prop_assert!(x.sub(&ctx, &x).is_zero());
        prop_assert_eq!(frob_series(&ctx, &x.mul(&ctx, &y)), frob_series(&ctx, &x).mul(&ctx, &frob_series(&ctx, &y)));
    }

    #[test]
    fn galois_action_is_multiplicative_and_fixes_invariants(a in terms(), b in terms(), k in 0i64..6) {
        let ctx = make_field(7, 1).unwrap();
        let d = 6;
        let xi = primitive_root_of_unity(&ctx, d).unwrap();
        let (x, y) = (series(&ctx, &a), series(&ctx, &b));
        let act = |f: &LaurentSeries| galois_act(&ctx, k, f, &xi, d);
        prop_assert_eq!(act(&x.mul(&ctx, &y)), act(&x).mul(&ctx, &act(&y)));
        let fixed_by_all = (1..d as i64).all(|j| galois_act(&ctx, j, &x, &xi, d) == x);
        let divisible = x.support().all(|e| e % d as i64 == 0);
        prop_assert_eq!(fixed_by_all, divisible);
    }

    #[test]
    fn standard_level_scales_under_frobenius(ctx in small_field(), a in terms(), d in 1u64..7) {
        let x = series(&ctx, &a);
        prop_assume!(!x.is_zero());
        let l = standard_level(&x, d).unwrap();
        prop_assert_eq!(standard_level(&frob_series(&ctx, &x), d).unwrap(), l.scale(ctx.p() as i64));
    }

    #[test]
    fn extension_frobenius_respects_the_sequence(pole in 2i64..6, f in terms(), g in prop::collection::vec((1u64..8, 1u64..5), 0..4)) {
        let ctx = make_field(5, 1).unwrap();
        let c = LaurentSeries::monomial(&ctx, ctx.one(), -pole);
        let m = build_extension(&c, 64, &ctx).unwrap();
        let f = series(&ctx, &f);
        let g = DeltaElement::from_terms(&ctx, g.into_iter().map(|(k, v)| (k, ctx.from_u64(v))));
        let (f1, _) = m.apply_f(&f, &g).unwrap();
        let (f2, _) = m.apply_f(&f, &DeltaElement::zero()).unwrap();
        prop_assert_eq!(f1, f2);
        let (f0, g0) = m.apply_f(&LaurentSeries::zero(), &g).unwrap();
        prop_assert!(f0.is_zero());
        prop_assert_eq!(g0, g.frobenius(&ctx));
    }

    #[test]
    fn extension_solutions_resubstitute(p in prop_oneof![Just(5u64), Just(7)], c in prop::collection::vec((-12i64..0, 1u64..7), 1..4)) {
        let ctx = make_field(p, 1).unwrap();
        let c = LaurentSeries::poly(&ctx, c.into_iter().map(|(e, v)| (e, ctx.from_u64(v % p))));
        prop_assume!(!c.is_zero());
        let m = build_extension(&c, 64, &ctx).unwrap();
        let sol = sol_extension(&m, 64).unwrap();
        for (f, g) in &sol.basis {
            let (f2, g2) = m.apply_f(f, g).unwrap();
            prop_assert_eq!(&f2, f);
            prop_assert_eq!(&g2, g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kummer_crystals_satisfy_every_axiom(seed in 0u64..10_000, idx in 0usize..8) {
        let (p, d) = sample::grid()[idx];
        let mut rng = sample::rng(seed);
        let rep = sample::random_rep(&mut rng, p, d, 4).unwrap();
        let ctx = splitting_field(p, d).unwrap();
        let kc = build_kummer_crystal(&rep, &ctx).unwrap();
        let dims: usize = kc.dims().iter().sum();
        prop_assert_eq!(dims, rep.rank());
        prop_assert!(kc.weights.iter().all(|w| w.dim == 0 || w.frob.is_invertible(&ctx)));
        let spec = standard_vfilt(&kc, Window::symmetric(4));
        let module = FModule::Kummer(kc);
        for k in spec.family() {
            let x = spec.rule.basis_section(&ctx, &k);
            let l = spec.level(&ctx, &x).unwrap();
            prop_assert_eq!(spec.level(&ctx, &module.frobenius(&x)), Some(l.scale(p as i64)));
        }
        let report = check_specializing(&spec, &module, 0).merge(check_super(&spec, &module));
        prop_assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn g_after_f_is_identity(seed in 0u64..10_000, idx in 0usize..8) {
        let (p, d) = sample::grid()[idx];
        let mut rng = sample::rng(seed);
        let rep = sample::random_rep(&mut rng, p, d, 4).unwrap();
        let ctx = splitting_field(p, d).unwrap();
        let back = functor_g(&functor_f(&rep, &ctx).unwrap(), &ctx, 24).unwrap();
        prop_assert!(reps_isomorphic(&back, &rep).unwrap());
    }

    #[test]
    fn sections_add_termwise(a in prop::collection::vec((0u32..2, -5i64..5, 1u64..5), 0..6)) {
        let ctx = make_field(5, 1).unwrap();
        let x = Section::from_terms(&ctx, a.iter().map(|&(c, e, v)| (Mono::new(c, 0, e), ctx.from_u64(v))));
        prop_assert!(x.sub(&ctx, &x).is_zero());
        prop_assert_eq!(x.add(&ctx, &x), x.scale(&ctx, &ctx.from_u64(2)));
    }
}
