use vfilt_core::crystal::{build_extension, build_kummer_crystal, CyclicRep, FModule};
use vfilt_core::field::{make_field, FpMatrix, Mat, DEFAULT_SATURATION_CAP};
use vfilt_core::functors::*;
use vfilt_core::sample;
use vfilt_core::vfilt::{delta_vfilt, mc_vfilt, standard_vfilt, Window};
use vfilt_core::{Error, LaurentSeries};

const CAP: usize = DEFAULT_SATURATION_CAP;

#[test]
fn f_of_trivial_rep() {
    let ctx = make_field(5, 2).unwrap();
    let obj = functor_f(&CyclicRep::trivial(5, 3, 1).unwrap(), &ctx).unwrap();
    assert_eq!(obj.dims(), vec![1, 0, 0]);
    assert_eq!(obj.classes[0].c, Mat::identity(&ctx, 1));
    let back = functor_g(&obj, &ctx, CAP).unwrap();
    assert_eq!(back.mat().to_rows(), vec![vec![1]]);
}

#[test]
fn f_of_companion_rep() {
    let ctx = make_field(5, 2).unwrap();
    let rep = CyclicRep::companion(5, 3).unwrap();
    let obj = functor_f(&rep, &ctx).unwrap();
    assert_eq!(obj.dims(), vec![0, 1, 1]);
    assert!(obj.classes[1..].iter().all(|c| c.c.is_invertible(&ctx)));
    let back = functor_g(&obj, &ctx, CAP).unwrap();
    assert_eq!(eigenvalue_multiset(&back).unwrap(), vec![0, 1, 1]);
    assert!(reps_isomorphic(&back, &rep).unwrap());
}

#[test]
fn f_is_additive() {
    let ctx = make_field(7, 1).unwrap();
    let a = CyclicRep::trivial(7, 3, 1).unwrap();
    let b = CyclicRep::companion(7, 3).unwrap();
    let sum = functor_f(&a.direct_sum(&b).unwrap(), &ctx).unwrap();
    let (fa, fb) = (functor_f(&a, &ctx).unwrap(), functor_f(&b, &ctx).unwrap());
    let dims: Vec<usize> = fa.dims().iter().zip(fb.dims()).map(|(x, y)| x + y).collect();
    assert_eq!(sum.dims(), dims);
}

#[test]
fn g_needs_an_extension_for_a_generator() {
    let ctx = make_field(7, 2).unwrap();
    let gamma = ctx.generator().unwrap();
    let obj = CGObject::new(&ctx, 1, vec![Mat::from_rows(vec![vec![gamma]], 1)]).unwrap();
    let fd = fixed_data(&obj, &ctx, CAP).unwrap();
    assert_eq!(fd.rep.rank(), 1);
    assert_eq!(fd.rep.mat().to_rows(), vec![vec![1]]);
    assert!(fd.r > 1);
    let triv = functor_f(&CyclicRep::trivial(7, 1, 1).unwrap(), &ctx).unwrap();
    assert!(object_isomorphism(&obj, &triv, &ctx, CAP).unwrap().is_some());
}

#[test]
fn singular_objects_are_rejected() {
    let ctx = make_field(5, 1).unwrap();
    let zero = Mat::zeros(&ctx, 1, 1);
    assert!(matches!(CGObject::new(&ctx, 1, vec![zero]), Err(Error::Singular(_))));
}

#[test]
fn roundtrips_on_random_reps() {
    let mut rng = sample::rng(7);
    for (p, d) in sample::grid() {
        let ctx = splitting_field(p, d).unwrap();
        for _ in 0..5 {
            let rep = sample::random_rep(&mut rng, p, d, 4).unwrap();
            let obj = functor_f(&rep, &ctx).unwrap();
            assert!(reps_isomorphic(&functor_g(&obj, &ctx, CAP).unwrap(), &rep).unwrap());
            let twisted = sample::random_object(&mut rng, &rep, &ctx).unwrap();
            let back = functor_f(&functor_g(&twisted, &ctx, CAP).unwrap(), &ctx).unwrap();
            assert!(object_isomorphism(&twisted, &back, &ctx, CAP).unwrap().is_some());
        }
    }
}

#[test]
fn naturality_examples() {
    let ctx = make_field(7, 1).unwrap();
    let triv = CyclicRep::trivial(7, 3, 1).unwrap();
    let comp = CyclicRep::companion(7, 3).unwrap();
    let sum = triv.direct_sum(&comp).unwrap();
    let id = FpMatrix::identity(7, 3);
    assert!(naturality_rep_morphism(&ctx, &sum, &sum, &id).unwrap().pass);
    let proj = FpMatrix::from_rows(7, &[vec![1, 0, 0]]);
    assert!(naturality_rep_morphism(&ctx, &sum, &triv, &proj).unwrap().pass);
    let bad = FpMatrix::from_rows(7, &[vec![0, 1, 0]]);
    let rep = naturality_rep_morphism(&ctx, &sum, &triv, &bad).unwrap();
    assert!(!rep.pass && rep.witness.is_some());

    let x = functor_f(&sum, &ctx).unwrap();
    let idm = Mat::identity(&ctx, 3);
    assert!(naturality_object_morphism(&ctx, &x, &x, &idm, CAP).unwrap().pass);
}

#[test]
fn nearby_unipotent_examples() {
    let cases = [
        (CyclicRep::trivial(7, 3, 1).unwrap(), 1),
        (CyclicRep::companion(7, 3).unwrap(), 0),
        (CyclicRep::trivial(7, 3, 1).unwrap().direct_sum(&CyclicRep::companion(7, 3).unwrap()).unwrap(), 1),
    ];
    let ctx = make_field(7, 1).unwrap();
    for (rep, dim) in cases {
        let kc = build_kummer_crystal(&rep, &ctx).unwrap();
        let spec = standard_vfilt(&kc, Window::symmetric(3));
        let nu = nearby_unipotent(&spec, &FModule::Kummer(kc)).unwrap();
        assert_eq!(nu.dim, dim);
        if dim == 1 {
            assert_eq!(nu.frob, Mat::identity(&ctx, 1));
        }
    }
}

#[test]
fn nearby_full_matches_f() {
    let ctx = make_field(5, 2).unwrap();
    for rep in [
        CyclicRep::trivial(5, 3, 1).unwrap(),
        CyclicRep::companion(5, 3).unwrap(),
        CyclicRep::trivial(5, 3, 2).unwrap(),
        CyclicRep::regular(5, 3).unwrap(),
    ] {
        let kc = build_kummer_crystal(&rep, &ctx).unwrap();
        let spec = standard_vfilt(&kc, Window::symmetric(2));
        let obj = nearby_full(&spec, &FModule::Kummer(kc.clone())).unwrap();
        let f = functor_f(&rep, &ctx).unwrap();
        assert_eq!(obj, f);
        assert!(reps_isomorphic(&recover_rep(&kc, CAP).unwrap(), &rep).unwrap());
    }
}

#[test]
fn vanishing_examples() {
    let ctx = make_field(5, 1).unwrap();
    let kc = build_kummer_crystal(&CyclicRep::trivial(5, 2, 1).unwrap(), &ctx).unwrap();
    let spec = standard_vfilt(&kc, default_window(5));
    let v = vanishing(&spec, &FModule::Kummer(kc)).unwrap();
    assert_eq!(v.dim, 1);
    assert_eq!(v.to_nearby_source, Mat::identity(&ctx, 1));
    assert_eq!(v.to_nearby_target, Mat::identity(&ctx, 1));
    assert!(v.intertwines);

    let v = vanishing(&delta_vfilt(default_window(5)), &FModule::delta(&ctx)).unwrap();
    assert_eq!(v.dim, 1);
    assert_eq!(v.nearby.dim, 0);
    assert!(v.to_nearby_source.is_zero());
    assert!(v.intertwines);

    let c = LaurentSeries::parse(&ctx, "t^-2").unwrap();
    let m = build_extension(&c, 64, &ctx).unwrap();
    let spec = mc_vfilt(&m, default_window(5)).unwrap();
    let v = vanishing(&spec, &FModule::Extension(m)).unwrap();
    assert_eq!(v.dim, 1);
}

#[test]
fn gluing_examples() {
    let ctx = make_field(5, 1).unwrap();
    let rep = CyclicRep::trivial(5, 2, 1).unwrap();
    let kc = build_kummer_crystal(&rep, &ctx).unwrap();
    let g = gluing_data_kummer(&kc, &rep).unwrap();
    assert_eq!(g.pair.dim, 1);
    assert!(reconstruct(&g, &ctx).unwrap().1);

    let split = build_extension(&LaurentSeries::zero(), 64, &ctx).unwrap();
    let g = gluing_data_extension(&split).unwrap();
    assert_eq!(g.open, OpenPart::Structure);
    assert_eq!(g.pair.dim, 2);
    assert_eq!(g.delta_rank(&ctx), 1);
    assert!(reconstruct(&g, &ctx).unwrap().1);

    let c = LaurentSeries::parse(&ctx, "t^-2").unwrap();
    let m = build_extension(&c, 64, &ctx).unwrap();
    match gluing_data_extension(&m) {
        Err(Error::NotSplit(w)) => assert!(w.contains("t^-2"), "{w}"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn comparison_proxy_on_small_cases() {
    let mut rng = sample::rng(11);
    for (p, d) in sample::grid() {
        let ctx = splitting_field(p, d).unwrap();
        for _ in 0..3 {
            let rep = sample::random_rep(&mut rng, p, d, 4).unwrap();
            let kc = build_kummer_crystal(&rep, &ctx).unwrap();
            let spec = standard_vfilt(&kc, Window::symmetric(2));
            let nu = nearby_unipotent(&spec, &FModule::Kummer(kc)).unwrap();
            let invariants = rep.rank() - rep.mat().sub(&FpMatrix::identity(p, rep.rank())).rank();
            assert_eq!(nu.saturated_fixed_dim(&ctx, CAP).unwrap(), invariants);
        }
    }
}
