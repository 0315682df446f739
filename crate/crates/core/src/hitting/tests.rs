use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::circuit::{Circuit, FnOracle, DEFAULT_EXPAND_BUDGET};
use crate::gen;
use crate::poly::{SparsePoly, SparseUnivariate, Vars};
use crate::primes::{bad_prime_census, bad_primes, primes_in};

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn outer(text: &str, field: FieldSpec, m: usize) -> Circuit {
    Circuit::from_poly(&SparsePoly::parse_with(text, field, m, Vars::X).unwrap())
}

fn composed(outer_text: &str, m: usize, inputs: &[&str], field: FieldSpec, n: usize) -> ComposedCircuit {
    let inputs = inputs.iter().map(|s| SparsePoly::parse(s, field, n).unwrap()).collect();
    ComposedCircuit::new(outer(outer_text, field, m), inputs).unwrap()
}

fn grid(field: FieldSpec, k: u64) -> Vec<Scalar> {
    (0..k).map(|i| field.from_u64(i)).collect()
}

#[test]
fn grid_examples() {
    let f = fp(101);
    let hs = sz_grid(grid(f, 2), 1, 1).unwrap();
    for (a, b) in [(1, 0), (0, 1), (5, 7), (100, 1)] {
        let g = SparsePoly::parse(&format!("{a}*x1 + {b}"), f, 1).unwrap();
        assert!(pit(&g, &hs, &PitOptions::default()).unwrap().is_nonzero());
    }
    let hs = sz_grid(grid(f, 3), 2, 2).unwrap();
    let g = SparsePoly::parse("x1*x2", f, 2).unwrap();
    let v = pit(&g, &hs, &PitOptions::default()).unwrap();
    assert_eq!(v.outcome, Outcome::Nonzero { witness: vec![f.one(), f.one()], value: f.one() });
    assert_eq!(v.points_exhausted, 5);
    assert!(sz_grid(grid(f, 2), 1, 2).is_err());
    assert!(sz_grid(vec![f.one(), f.one()], 1, 1).is_err());
}

#[test]
fn grid_hits_random_bivariates() {
    let f = fp(101);
    let hs = sz_grid(grid(f, 4), 2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let g = gen::random_sparse_poly(&mut rng, f, 2, 4, 3);
        // oracle: brute-force scan of the grid
        let hit = (0..4u64).flat_map(|a| (0..4u64).map(move |b| (a, b))).find(|&(a, b)| {
            !g.eval(&[f.from_u64(a), f.from_u64(b)]).unwrap().is_zero()
        });
        assert!(hit.is_some());
        assert!(pit(&g, &hs, &PitOptions::default()).unwrap().is_nonzero());
    }
}

#[test]
fn pit_trivial_oracles() {
    let f = fp(101);
    let hs = sparse_inputs(
        &ScheduleParams {
            n: 3,
            d: 2,
            r: 1,
            delta: 1,
            ell: 1,
            ..Default::default()
        },
        f,
        SearchMode::Adaptive,
    )
    .unwrap();
    let zero = FnOracle {
        field: f,
        arity: 3,
        degree: Some(0),
        f: |a: &[Scalar]| a[0].field().zero(),
    };
    let one = FnOracle {
        field: f,
        arity: 3,
        degree: Some(0),
        f: |a: &[Scalar]| a[0].field().one(),
    };
    let v = pit(&one, &hs, &PitOptions::default()).unwrap();
    assert!(v.is_nonzero());
    assert_eq!(v.points_exhausted, 1);
    let v = pit(&zero, &hs, &PitOptions { max_points: 1000, ..Default::default() }).unwrap();
    assert_eq!(v.outcome, Outcome::Inconclusive);
    assert_eq!(v.guarantee, Guarantee::Inconclusive);
    let g = sz_grid(grid(f, 2), 3, 1).unwrap();
    let v = pit(&zero, &g, &PitOptions::default()).unwrap();
    assert_eq!((v.outcome.clone(), v.points_exhausted, v.guarantee), (Outcome::Zero, 8, Guarantee::Certified));
}

#[test]
fn sparse_inputs_examples() {
    let f = fp(1_000_003);
    let opts = PitOptions::default();
    let search = SearchOptions::default();
    let c = composed("x2 - x1^2", 2, &["x1*x2 + 3*x3", "(x1*x2 + 3*x3)^2"], f, 3);
    let v = pit_composed(&c, ComposedKind::SparseInputs, None, &opts, &search).unwrap();
    assert_eq!((v.outcome, v.guarantee), (Outcome::Zero, Guarantee::Corpus));

    let c = composed("x1 + x2", 2, &["x1", "x2"], f, 2);
    let v = pit_composed(&c, ComposedKind::SparseInputs, None, &opts, &search).unwrap();
    assert!(v.is_nonzero() && v.verify(&c));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fs = gen::quadric_family(f, 4, 4);
    let out = gen::random_outer(&mut rng, f, 4, 3, 6);
    let c = ComposedCircuit::new(out, fs).unwrap();
    assert!(!c.expand(DEFAULT_EXPAND_BUDGET).unwrap().is_zero());
    let v = pit_composed(&c, ComposedKind::SparseInputs, None, &opts, &search).unwrap();
    assert!(v.is_nonzero() && v.verify(&c));
}

#[test]
fn sparse_inputs_gate() {
    let params = ScheduleParams {
        n: 2,
        d: 2,
        r: 2,
        delta: 2,
        ell: 2,
        ..Default::default()
    };
    assert!(matches!(
        sparse_inputs(&params, fp(3), SearchMode::Adaptive),
        Err(Error::CharacteristicGate { .. })
    ));
    assert!(sparse_inputs(&params, fp(5), SearchMode::Adaptive).is_ok());
}

#[test]
fn arbitrary_char_examples() {
    let opts = PitOptions::default();
    let search = SearchOptions::default();
    let f2 = fp(2);
    let c = composed("x1 + x2", 2, &["x1", "x1"], f2, 2);
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, None, &opts, &search).unwrap();
    assert_eq!(v.outcome, Outcome::Zero);

    let c = composed("x1 + x2", 2, &["x1", "x1 + 1"], f2, 2);
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, None, &opts, &search).unwrap();
    match &v.outcome {
        Outcome::Nonzero { value, .. } => assert!(value.is_one()),
        other => panic!("{other:?}"),
    }

    let f3 = fp(3);
    let c = composed("x1*x2 - x1", 2, &["x1^2 + x2", "x1^2 + x2 + 2"], f3, 2);
    assert!(!c.expand(DEFAULT_EXPAND_BUDGET).unwrap().is_zero());
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, None, &opts, &search).unwrap();
    assert!(v.is_nonzero() && v.verify(&c));
    // x^3 - x vanishes on F_3 but not as a polynomial
    let c = composed("x1^3 - x1", 1, &["x1 + x2^2"], f3, 2);
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, None, &opts, &search).unwrap();
    assert!(v.is_nonzero() && v.verify(&c));
    assert_ne!(v.field, f3);
}

#[test]
fn paper_exact_sets() {
    let f = fp(1_000_003);
    let params = ScheduleParams {
        n: 2,
        d: 2,
        r: 1,
        delta: 2,
        ell: 2,
        ..Default::default()
    };
    let hs = arbitrary_char(&params, f, SearchMode::PaperExact).unwrap();
    assert_eq!(hs.provenance(), "paper-exact:arbitrary-char");
    // p_max · |H1| · C(2,1) · 3^1
    let sched = schedule(ScheduleKind::ArbitraryChar, &params).unwrap();
    assert_eq!(hs.cardinality().unwrap(), &(&sched.p_max * &sched.h1 * 2u32 * 3u32));
    let first: Vec<Vec<Scalar>> = hs.points().take(4).collect();
    // p = 1, c = 1, I = {1}: x1 = a, x2 = c^0 = 1
    assert_eq!(first[0], vec![hs.field().element(0), hs.field().one()]);
    assert_eq!(first[1], vec![hs.field().element(1), hs.field().one()]);
    let c = composed("x1 - x2", 2, &["x1", "x2"], f, 2);
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, Some(2), &PitOptions::default(), &SearchOptions {
        mode: SearchMode::PaperExact,
        ..Default::default()
    })
    .unwrap();
    assert!(v.is_nonzero() && v.verify(&c));
    assert_eq!(v.mode, "paper-exact");
    let z = composed("x1 - x2", 2, &["x1", "x1"], f, 2);
    let v = pit_composed(&z, ComposedKind::SparseInputs, None, &PitOptions { max_points: 5000, ..Default::default() }, &SearchOptions {
        mode: SearchMode::PaperExact,
        ..Default::default()
    })
    .unwrap();
    assert_eq!((v.outcome, v.points_exhausted), (Outcome::Inconclusive, 5000));
}

#[test]
fn depth4_examples() {
    let f = fp(1_000_003);
    let opts = PitOptions::default();
    let search = SearchOptions::default();
    let id = crate::depth4::lift_identity(&gen::depth3_identity(f), 2).unwrap();
    let v = pit_depth4(&id, RankBound::Trivial, &opts, &search).unwrap();
    assert_eq!((v.outcome, v.guarantee), (Outcome::Zero, Guarantee::Corpus));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = gen::random_depth4(&mut rng, f, 4, 1, 3, 2, 3);
    let mut neg = t.rows()[0].clone();
    neg[0] = neg[0].scale(&f.from_i64(-1));
    let c = Depth4Circuit::new(f, 4, 2, vec![t.rows()[0].clone(), neg]).unwrap();
    assert_eq!(pit_depth4(&c, RankBound::Trivial, &opts, &search).unwrap().outcome, Outcome::Zero);

    for _ in 0..20 {
        let c = gen::random_depth4(&mut rng, f, 4, 2, 3, 2, 3);
        let want = !c.expand(DEFAULT_EXPAND_BUDGET).unwrap().is_zero();
        let v = pit_depth4(&c, RankBound::Trivial, &opts, &search).unwrap();
        assert_eq!(v.is_nonzero(), want);
        assert!(v.verify(&c));
    }
}

#[test]
fn depth4_paper_exact_and_gate() {
    let f = fp(1_000_003);
    let params = Depth4Params { n: 3, delta: 2, k: 2, s: 2 };
    let hs = depth4(params, RankBound::Trivial, f, SearchMode::PaperExact).unwrap();
    assert_eq!(hs.grid().len(), 5);
    assert_eq!(hs.points().next().unwrap().len(), 3);
    // k = 2 has no characteristic condition
    assert!(depth4(params, RankBound::Trivial, fp(2), SearchMode::Adaptive).is_ok());
    let k3 = Depth4Params { n: 3, delta: 2, k: 3, s: 2 };
    assert!(matches!(
        depth4(k3, RankBound::Trivial, fp(7), SearchMode::Adaptive),
        Err(Error::CharacteristicGate { .. })
    ));
    assert!(depth4(k3, RankBound::Given(2), fp(7), SearchMode::Adaptive).is_ok());
}

#[test]
fn verdict_json_round_trip() {
    let f = fp(101);
    let c = composed("x1 + x2", 2, &["x1", "x2"], f, 2);
    let v = pit_composed(&c, ComposedKind::ArbitraryChar, None, &PitOptions::default(), &SearchOptions::default()).unwrap();
    let back = PitVerdict::from_json(&v.to_json()).unwrap();
    assert_eq!(back, v);
    assert!(back.verify(&c));
    let mut forged = back.clone();
    if let Outcome::Nonzero { value, .. } = &mut forged.outcome {
        *value = &*value + &forged.field.one();
    }
    assert!(!forged.verify(&c));
}

#[test]
fn randomized_cross_check() {
    let f = fp(101);
    let g = SparsePoly::parse("x1^2 - x2", f, 2).unwrap();
    assert!(pit_randomized(&g, 10, 1).unwrap().is_nonzero());
    let z = SparsePoly::zero(f, 2);
    let v = pit_randomized(&z, 10, 1).unwrap();
    assert_eq!((v.outcome, v.guarantee), (Outcome::Zero, Guarantee::Inconclusive));
}

#[test]
fn prime_census_examples() {
    let f = fp(101);
    let t6 = SparseUnivariate::from_terms(f, [(BigUint::from(6u32), f.one()), (BigUint::from(0u32), f.from_i64(-1))]);
    assert_eq!(bad_prime_census(&t6, &primes_in(7).unwrap()), 2);
    assert_eq!(bad_primes(&t6).unwrap(), vec![2, 3]);
    let one = SparseUnivariate::from_terms(f, [(BigUint::from(0u32), f.one())]);
    assert_eq!(bad_prime_census(&one, &primes_in(100).unwrap()), 0);
    assert!(primes_in(26).unwrap().len() >= 5);
    assert_eq!(primes_in(26).unwrap().len(), 9);
}

#[test]
fn parallel_and_sequential_agree() {
    let f = fp(1_000_003);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = gen::random_depth4(&mut rng, f, 4, 2, 3, 2, 3);
    let hs = depth4_certified(&c, RankBound::Trivial, &SearchOptions::default()).unwrap();
    let a = pit(&c, &hs, &PitOptions { parallelism: Parallelism::Sequential, ..Default::default() }).unwrap();
    let b = pit(&c, &hs, &PitOptions::default()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_respects_sparse_bound(seed in any::<u64>()) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ell = rng.gen_range(1..=8usize);
        let d = rng.gen_range(2..=512u64);
        let mut g = SparseUnivariate::zero(f);
        g.add_term(BigUint::from(d), f.from_u64(rng.gen_range(1..101)));
        for _ in 1..ell {
            g.add_term(BigUint::from(rng.gen_range(0..d)), f.from_u64(rng.gen_range(1..101)));
        }
        let l = g.sparsity() as f64;
        let bound = (l * (d as f64).log2() - 1.0).floor().max(0.0) as usize;
        prop_assert!(bad_primes(&g).unwrap().len() <= bound);
    }

    #[test]
    fn grid_complete_small_cases(seed in any::<u64>(), r in 1usize..3, d in 0u32..4) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen::random_sparse_poly(&mut rng, f, r, 5, d);
        let hs = sz_grid(grid(f, d as u64 + 1), r, d).unwrap();
        prop_assert!(pit(&g, &hs, &PitOptions::default()).unwrap().is_nonzero());
    }

    #[test]
    fn points_have_n_coordinates_and_repeat(seed in any::<u64>()) {
        let f = fp(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..5usize);
        let r = rng.gen_range(1..=n) as u64;
        let params = ScheduleParams { n: n as u64, d: 2, r, delta: 2, ell: 2, ..Default::default() };
        let hs = arbitrary_char(&params, f, SearchMode::Adaptive).unwrap();
        let a: Vec<Vec<Scalar>> = hs.points().take(50).collect();
        let b: Vec<Vec<Scalar>> = hs.points().take(50).collect();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|p| p.len() == n && p.iter().all(|x| x.field() == hs.field())));
    }
}
