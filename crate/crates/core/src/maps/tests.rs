use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gen;
use crate::indep::{trdeg, TrdegOptions};
use crate::poly::kronecker;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn big(s: &str) -> BigUint {
    s.parse().unwrap()
}

fn zpoly(s: &str, field: FieldSpec, nvars: usize, vars: Vars) -> SparsePoly {
    SparsePoly::parse_with(s, field, nvars, vars).unwrap()
}

#[test]
fn phi_examples() {
    let f = fp(101);
    let m = PhiMap::new(3, vec![0], BigUint::from(5u32), 3, f.from_u64(2)).unwrap();
    assert_eq!(m.exponents(), vec![2, 1]);
    let x = |i| SparsePoly::var(f, 3, i);
    assert_eq!(m.apply(&x(0)).unwrap(), zpoly("z1", f, 1, Vars::Z1));
    assert_eq!(m.apply(&x(1)).unwrap(), SparsePoly::constant(f, 1, f.from_u64(4)));
    assert_eq!(m.apply(&x(2)).unwrap(), SparsePoly::constant(f, 1, f.from_u64(2)));
    assert_eq!(m.affine().point(&[f.from_u64(7)]), vec![f.from_u64(7), f.from_u64(4), f.from_u64(2)]);
}

#[test]
fn phi_validation() {
    let f = fp(101);
    assert!(PhiMap::new(3, vec![1, 0], BigUint::from(5u32), 3, f.one()).is_err());
    assert!(PhiMap::new(3, vec![3], BigUint::from(5u32), 3, f.one()).is_err());
    assert!(PhiMap::new(3, vec![0], BigUint::from(1u32), 3, f.one()).is_err());
    assert!(PhiMap::new(3, vec![0], BigUint::from(5u32), 0, f.one()).is_err());
}

#[test]
fn psi_images_follow_definition() {
    let f = fp(1_000_003);
    let (n, r, p) = (3, 2, 7);
    let c = f.from_u64(3);
    let (d1, d2) = (BigUint::from(64u32), BigUint::from(2u32));
    let m = PsiMap::new(n, r, d1.clone(), d2.clone(), p, c.clone()).unwrap();
    let images = m.affine().images();
    for i in 1..=n as u32 {
        // x_i -> c^{D1^i mod p} + c^{D2^i mod p} z0 + Σ_j c^{i (n+1)^j mod p} z_j, by big integers
        let e = |v: BigUint| c.pow((v % p).try_into().unwrap());
        let mut want = SparsePoly::constant(f, r + 1, e(d1.pow(i)));
        want.add_term(Monomial::var(r + 1, 0, 1), e(d2.pow(i)));
        for j in 1..=r as u32 {
            want.add_term(Monomial::var(r + 1, j as usize, 1), e(BigUint::from(i) * BigUint::from(n as u32 + 1).pow(j)));
        }
        assert_eq!(images[i as usize - 1], want, "x{i}");
    }
    let k = SparsePoly::constant(f, n, f.from_u64(9));
    assert_eq!(m.apply(&k).unwrap(), SparsePoly::constant(f, r + 1, f.from_u64(9)));
}

#[test]
fn psi_leading_z0_coefficient_is_a_constant() {
    let f = fp(1_000_003);
    let g = SparsePoly::parse("x1^2*x3 + 5*x2 - x3^3", f, 3).unwrap();
    let m = PsiMap::new(3, 1, BigUint::from(100u32), BigUint::from(2u32), 11, f.from_u64(2)).unwrap();
    let h = m.apply(&g).unwrap();
    assert!(!h.is_constant());
    let lead = h.coeffs_in(0).pop().unwrap();
    assert!(lead.is_constant() && !lead.is_zero());
    assert_eq!(h.degree_in(0), g.degree());
}

#[test]
fn schedule_examples() {
    let p = |n, d, r, delta, ell| ScheduleParams {
        n,
        d,
        r,
        delta,
        ell,
        ..Default::default()
    };
    let s = schedule(ScheduleKind::SparseInputs, &p(1, 1, 1, 1, 1)).unwrap();
    assert_eq!(s.d, vec![BigUint::from(4u32), BigUint::from(2u32)]);
    let s = schedule(ScheduleKind::ArbitraryChar, &p(1, 1, 1, 2, 1)).unwrap();
    assert_eq!(s.d, vec![BigUint::from(5u32)]);
    let s = schedule(
        ScheduleKind::Depth4,
        &ScheduleParams {
            n: 1,
            r: 1,
            delta: 1,
            k: 2,
            s: 1,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(s.d, vec![BigUint::from(4u32), BigUint::from(2u32)]);
    assert!(schedule(ScheduleKind::SparseInputs, &p(0, 1, 1, 1, 1)).is_err());
}

#[test]
fn schedule_values_match_frozen_big_integers() {
    // computed independently with arbitrary-precision integer arithmetic
    let s = schedule(
        ScheduleKind::SparseInputs,
        &ScheduleParams {
            n: 3,
            d: 4,
            r: 2,
            delta: 2,
            ell: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(s.d[0], big("1728"));
    assert_eq!(s.p_max, big("263390662657"));
    assert_eq!(s.h1, big("1053562650628"));
    assert_eq!(s.h2, big("5"));
    let s = schedule(
        ScheduleKind::ArbitraryChar,
        &ScheduleParams {
            n: 3,
            d: 4,
            r: 1,
            delta: 2,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(s.p_max, big("209547579288482666015626"));
    assert_eq!(s.h1, big("419095158576965332031252"));
}

#[test]
fn ceil_log2_matches_definition() {
    for (d, want) in [(1u32, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)] {
        assert_eq!(schedule::ceil_log2(&BigUint::from(d)), want, "D = {d}");
    }
}

#[test]
fn search_phi_examples() {
    let f = fp(1_000_003);
    let fs = vec![SparsePoly::var(f, 2, 0)];
    let c = search_phi(&fs, 1, &SearchOptions::default()).unwrap();
    assert_eq!(c.map.kept(), &[0]);
    assert_eq!((c.source.r, c.image.r), (1, 1));
    assert!(c.verify(&fs).unwrap());

    let fs = gen::tightness_family(f, 2, 2);
    let c = search_phi(&fs, 2, &SearchOptions::default()).unwrap();
    assert_eq!(c.map.kept(), &[0, 1]);
    assert_eq!(c.map.apply(&fs[1]).unwrap(), zpoly("z2 - z1^2", f, 2, Vars::Z1));
    assert_eq!(c.image.r, 2);

    let l = SparsePoly::parse("x1 + x2 + x3", f, 3).unwrap();
    let fs = vec![l.clone(), l.pow(2)];
    let c = search_phi(&fs, 1, &SearchOptions::default()).unwrap();
    assert_eq!(c.image.r, 1);
    assert_eq!(c.candidates, 1);
    assert!(c.verify(&fs).unwrap());
}

#[test]
fn search_phi_in_characteristic_two_uses_an_extension() {
    let f2 = fp(2);
    let fs = vec![
        SparsePoly::parse("x1^2 + x1*x2", f2, 3).unwrap(),
        SparsePoly::parse("x2 + x3^2", f2, 3).unwrap(),
    ];
    let c = search_phi(&fs, 2, &SearchOptions::default()).unwrap();
    assert_eq!(c.image.r, 2);
    assert!(c.map.field().contains(&f2));
    assert!(c.verify(&fs).unwrap());
}

#[test]
fn search_rejects_bad_r() {
    let f = fp(1_000_003);
    let fs = gen::tightness_family(f, 2, 2);
    assert!(matches!(search_phi(&fs, 1, &SearchOptions::default()), Err(Error::InvalidArgument(_))));
    assert!(matches!(search_psi(&fs, 3, &SearchOptions::default()), Err(Error::InvalidArgument(_))));
}

#[test]
fn search_psi_examples() {
    let f = fp(1_000_003);
    let fs: Vec<SparsePoly> = (0..2).map(|i| SparsePoly::var(f, 4, i)).collect();
    let c = search_psi(&fs, 2, &SearchOptions::default()).unwrap();
    assert_eq!(c.image.r, 2);
    // c = 1 collapses every coefficient, so the first candidate cannot work
    assert!(c.candidates > 1);
    let fs = gen::quadric_family(f, 4, 4);
    let c = search_psi(&fs, 3, &SearchOptions::default()).unwrap();
    assert_eq!((c.source.r, c.image.r), (3, 3));
    assert!(c.verify(&fs).unwrap());
    let g = SparsePoly::parse("x1*x2 - x3 + 2", f, 3).unwrap();
    let c = search_psi(&[g.clone(), g.pow(2)], 1, &SearchOptions::default()).unwrap();
    assert_eq!(c.image.r, 1);
}

#[test]
fn search_psi_characteristic_gate() {
    let f = fp(3);
    let fs = vec![SparsePoly::parse("x1^2", f, 2).unwrap(), SparsePoly::parse("x2^2", f, 2).unwrap()];
    assert!(matches!(
        search_psi(&fs, 2, &SearchOptions::default()),
        Err(Error::CharacteristicGate { characteristic: 3, .. })
    ));
}

#[test]
fn searches_are_order_deterministic() {
    let f = fp(1_000_003);
    let fs = gen::quadric_family(f, 4, 3);
    let seq = SearchOptions {
        parallelism: crate::exec::Parallelism::Sequential,
        ..Default::default()
    };
    let a = search_psi(&fs, 3, &seq).unwrap();
    let b = search_psi(&fs, 3, &SearchOptions::default()).unwrap();
    assert_eq!(a.map, b.map);
    assert_eq!(a.candidates, b.candidates);
}

#[test]
fn map_json_round_trip() {
    let f = fp(101);
    let phi = FaithfulMap::Phi(PhiMap::new(3, vec![0, 2], BigUint::from(9u32), 5, f.from_u64(3)).unwrap());
    let psi = FaithfulMap::Psi(PsiMap::new(3, 1, big("123456789012345678901234567890"), BigUint::from(2u32), 7, f.from_i64(-2)).unwrap());
    for m in [phi, psi] {
        let v = m.to_json();
        assert_eq!(FaithfulMap::from_json(&v).unwrap(), m);
    }
    let f9 = FieldSpec::extension(3, 2).unwrap();
    let ext = FaithfulMap::Phi(PhiMap::new(2, vec![1], BigUint::from(5u32), 2, f9.element(7)).unwrap());
    assert_eq!(FaithfulMap::from_json(&ext.to_json()).unwrap(), ext);
}

fn order(mode: SearchMode) -> Vec<(u64, u32, Vec<usize>)> {
    let space = CandidateSpace {
        mode,
        p_max: BigUint::from(5u32),
        c_count: Box::new(|p| BigUint::from(p / 2)),
        nonzero: None,
        subsets: Some((3, 2)),
    };
    space
        .iter()
        .map(|c| (c.p, c.c_index.try_into().unwrap(), c.subset))
        .collect()
}

fn with_subsets(pairs: &[(u64, u32)]) -> Vec<(u64, u32, Vec<usize>)> {
    pairs
        .iter()
        .flat_map(|&(p, c)| [vec![0, 1], vec![0, 2], vec![1, 2]].map(|s| (p, c, s)))
        .collect()
}

#[test]
fn paper_exact_order_is_p_then_c_then_subset() {
    let pairs: Vec<(u64, u32)> = (1..=5u64).flat_map(|p| (1..=(p / 2) as u32).map(move |c| (p, c))).collect();
    assert_eq!(order(SearchMode::PaperExact), with_subsets(&pairs));
}

#[test]
fn adaptive_order_interleaves_primes() {
    // counts: p=2 -> 1, p=3 -> 1, p=5 -> 2
    let pairs = [(2, 1), (3, 1), (5, 1), (5, 2)];
    assert_eq!(order(SearchMode::Adaptive), with_subsets(&pairs));
    let space = CandidateSpace {
        mode: SearchMode::Adaptive,
        p_max: BigUint::from(100u32),
        c_count: Box::new(|_| BigUint::from(1000u32)),
        nonzero: None,
        subsets: None,
    };
    let got: Vec<(u64, u32)> = space.iter().take(6).map(|c| (c.p, c.c_index.try_into().unwrap())).collect();
    assert_eq!(got, [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (5, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn maps_are_homomorphisms(seed in any::<u64>(), p in 1u64..30, c in 1u64..100) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_sparse_poly(&mut rng, f, 3, 4, 3);
        let b = gen::random_sparse_poly(&mut rng, f, 3, 4, 3);
        let phi = PhiMap::new(3, vec![1], BigUint::from(9u32), p, f.from_u64(c)).unwrap().affine();
        let psi = PsiMap::new(3, 2, BigUint::from(100u32), BigUint::from(3u32), p, f.from_u64(c)).unwrap().affine();
        for m in [phi, psi] {
            prop_assert_eq!(m.apply(&(&a + &b)).unwrap(), &m.apply(&a).unwrap() + &m.apply(&b).unwrap());
            prop_assert_eq!(m.apply(&(&a * &b)).unwrap(), &m.apply(&a).unwrap() * &m.apply(&b).unwrap());
        }
    }

    #[test]
    fn power_residue_matches_naive(a in 0u64..10_000, i in 0u64..40, p in 1u64..1000) {
        let naive = BigUint::from(a).pow(i as u32) % p;
        prop_assert_eq!(BigUint::from(power_residue(&BigUint::from(a), i, p)), naive);
    }

    #[test]
    fn image_points_agree_with_images(seed in any::<u64>(), p in 1u64..30, c in 1u64..100) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen::random_sparse_poly(&mut rng, f, 3, 4, 3);
        let m = PsiMap::new(3, 1, BigUint::from(64u32), BigUint::from(2u32), p, f.from_u64(c)).unwrap().affine();
        let a: Vec<Scalar> = (0..2).map(|_| f.random(&mut rng)).collect();
        prop_assert_eq!(g.eval(&m.point(&a)).unwrap(), m.apply(&g).unwrap().eval(&a).unwrap());
    }

    #[test]
    fn kronecker_leg_separates_low_degree(seed in any::<u64>(), delta in 1u32..3, r in 1u32..3) {
        // D1 >= δr + 1 keeps monomials of degree <= δr apart under x_i -> t^{D1^i}
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d1 = BigUint::from(delta * r + 1);
        let a = gen::random_sparse_poly(&mut rng, f, 3, 5, delta * r);
        let b = gen::random_sparse_poly(&mut rng, f, 3, 5, delta * r);
        let (ka, kb) = (kronecker(&a, &d1).unwrap(), kronecker(&b, &d1).unwrap());
        prop_assert_eq!(a == b, ka == kb);
    }

    #[test]
    fn certified_maps_preserve_trdeg(seed in any::<u64>()) {
        let f = fp(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = gen::random_low_trdeg_family(&mut rng, f, 3, 3, 2, 2, 3);
        let r = trdeg(&fs, &TrdegOptions::default()).unwrap().r.max(1);
        let phi = search_phi(&fs, r, &SearchOptions::default()).unwrap();
        prop_assert!(phi.verify(&fs).unwrap());
        let psi = search_psi(&fs, r, &SearchOptions::default()).unwrap();
        prop_assert!(psi.verify(&fs).unwrap());
    }
}
