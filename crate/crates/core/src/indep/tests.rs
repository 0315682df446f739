use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gen;
use crate::poly::Vars;

fn q() -> FieldSpec {
    FieldSpec::rational()
}

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn polys(field: FieldSpec, n: usize, src: &[&str]) -> Vec<SparsePoly> {
    src.iter().map(|s| SparsePoly::parse(s, field, n).unwrap()).collect()
}

fn ypoly(s: &str, m: usize) -> SparsePoly {
    SparsePoly::parse_with(s, q(), m, Vars::Y).unwrap()
}

#[test]
fn jacobian_examples() {
    let j = jacobian(&polys(q(), 2, &["x1", "x2"])).unwrap();
    assert_eq!(j.rows(), &polys(q(), 2, &["1", "0", "0", "1"]).chunks(2).map(<[_]>::to_vec).collect::<Vec<_>>()[..]);
    let j = jacobian(&polys(q(), 2, &["x1", "x2 - x1^2", "x2^2"])).unwrap();
    let want = polys(q(), 2, &["1", "0", "-2*x1", "1", "0", "2*x2"]);
    assert_eq!(j.rows().concat(), want);
    let j = jacobian(&polys(q(), 3, &["5"])).unwrap();
    assert!(j.rows()[0].iter().all(SparsePoly::is_zero));
    assert_eq!((j.nrows(), j.ncols()), (1, 3));
}

#[test]
fn jacobian_rejects_mixed_rings() {
    let mut fs = polys(q(), 2, &["x1"]);
    fs.push(SparsePoly::parse("x1", fp(7), 2).unwrap());
    assert!(jacobian(&fs).is_err());
    assert!(jacobian(&[]).is_err());
}

#[test]
fn rank_examples() {
    let rank = |fs: &[SparsePoly]| jacobian_rank(&jacobian(fs).unwrap(), RankMethod::Symbolic, Parallelism::Sequential);
    assert_eq!(rank(&polys(q(), 2, &["x1", "x2 - x1^2", "x2^2"])), 2);
    let f = SparsePoly::parse("x1*x2 + x3^2 - 4", q(), 3).unwrap();
    assert_eq!(rank(&[f.clone(), f.pow(2)]), 1);
    assert_eq!(rank(&polys(q(), 2, &["3", "-1"])), 0);
}

#[test]
fn trdeg_examples() {
    let fs = gen::tightness_family(q(), 2, 2);
    for mode in [TrdegMode::Auto, TrdegMode::Jacobian, TrdegMode::BruteForce] {
        let c = trdeg(&fs, &TrdegOptions::with_mode(mode)).unwrap();
        assert_eq!(c.r, 2, "{mode:?}");
        assert!(c.is_exact());
        assert!(c.verify(&fs).unwrap());
    }
    let fs = gen::quadric_family(fp(1_000_003), 4, 4);
    let c = trdeg(&fs, &TrdegOptions::default()).unwrap();
    assert_eq!((c.r, c.mode), (3, CertificateMode::Jacobian));
    assert!(c.verify(&fs).unwrap());
}

#[test]
fn small_characteristic_falls_back_to_bruteforce() {
    // over F_3, d/dx1 (x1^3) = 0, so the Jacobian sees nothing
    let fs = polys(fp(3), 1, &["x1^3"]);
    let c = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::Jacobian)).unwrap();
    assert_eq!((c.r, c.mode), (0, CertificateMode::JacobianLowerBound));
    let c = trdeg(&fs, &TrdegOptions::default()).unwrap();
    assert_eq!((c.r, c.mode), (1, CertificateMode::BruteForce));
    assert!(c.verify(&fs).unwrap());
}

#[test]
fn budget_overflow_gives_flagged_lower_bound() {
    let fs = polys(fp(2), 3, &["x1^2", "x2^2", "x3^2"]);
    let opts = TrdegOptions {
        annihilator_budget: 3,
        ..Default::default()
    };
    let c = trdeg(&fs, &opts).unwrap();
    assert_eq!((c.r, c.mode), (0, CertificateMode::JacobianLowerBound));
    assert!(matches!(
        trdeg(&fs, &TrdegOptions { mode: TrdegMode::BruteForce, ..opts }),
        Err(Error::Budget { .. })
    ));
}

#[test]
fn annihilator_examples() {
    let f = SparsePoly::parse("x1 + x2^2", q(), 2).unwrap();
    let got = annihilator(&[f.clone(), f.pow(2)], 2, DEFAULT_ANNIHILATOR_BUDGET).unwrap().unwrap();
    assert_eq!(got, ypoly("y2 - y1^2", 2).normalize());
    assert_eq!(annihilator(&polys(q(), 2, &["x1", "x2"]), 3, DEFAULT_ANNIHILATOR_BUDGET).unwrap(), None);
    let fs = gen::tightness_family(q(), 2, 2);
    assert_eq!(annihilator(&fs, 3, DEFAULT_ANNIHILATOR_BUDGET).unwrap(), None);
    let got = annihilator(&fs, 4, DEFAULT_ANNIHILATOR_BUDGET).unwrap().unwrap();
    assert_eq!(got, ypoly("(y2 + y1^2)^2 - y3", 3).normalize());
    assert_eq!(annihilator_exact(&fs, 4, DEFAULT_ANNIHILATOR_BUDGET).unwrap(), Some(got));
}

#[test]
fn certificate_tampering_is_detected() {
    let fs = gen::tightness_family(q(), 2, 2);
    let mut c = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::BruteForce)).unwrap();
    c.r = 3;
    assert!(!c.verify(&fs).unwrap());
    let mut c = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::Jacobian)).unwrap();
    if let Witness::Minor { determinant, .. } = &mut c.witness {
        *determinant = determinant.scale(&q().from_u64(2));
    }
    assert!(!c.verify(&fs).unwrap());
}

#[test]
fn certificate_json_shape() {
    let fs = gen::tightness_family(q(), 2, 2);
    let c = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::BruteForce)).unwrap();
    let v = c.to_json();
    assert_eq!(v["r"], 2);
    assert_eq!(v["mode"], "bruteforce");
    assert_eq!(v["witness"]["independent"], serde_json::json!([0, 1]));
    assert_eq!(v["witness"]["relations"][0]["annihilator"], "y1^4 + 2*y1^2*y2 + y2^2 - y3");
    assert_eq!(TrdegCertificate::from_json(&v, q(), 2).unwrap(), c);
    let j = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::Jacobian)).unwrap();
    let back = TrdegCertificate::from_json(&j.to_json(), q(), 2).unwrap();
    assert_eq!(back, j);
    assert!(back.verify(&fs).unwrap());
    assert!(TrdegCertificate::from_json(&serde_json::json!({"r": 1}), q(), 2).is_err());
}

#[test]
fn jacobian_gate() {
    let fs = polys(fp(5), 2, &["x1^2", "x2^2"]);
    assert!(jacobian_is_exact(fp(5), &fs, 2));
    assert!(jacobian_is_exact(fp(5), &fs, 1) == (5 > 4));
    assert!(!jacobian_is_exact(fp(3), &polys(fp(3), 2, &["x1^2", "x2^2"]), 1));
}

fn random_family(seed: u64, field: FieldSpec) -> Vec<SparsePoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=4);
    let r = rng.gen_range(1..=n);
    let delta = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        gen::random_low_trdeg_family(&mut rng, field, n, m, r, delta, 3)
    } else {
        (0..m).map(|_| gen::random_sparse_poly(&mut rng, field, n, 3, delta)).collect()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobian_matches_bruteforce(seed in any::<u64>()) {
        let field = fp(1_000_003);
        let fs = random_family(seed, field);
        let j = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::Jacobian)).unwrap();
        let b = trdeg(&fs, &TrdegOptions::with_mode(TrdegMode::BruteForce)).unwrap();
        prop_assert_eq!(j.r, b.r);
        prop_assert!(b.verify(&fs).unwrap());
        prop_assert!(j.verify(&fs).unwrap());
    }

    #[test]
    fn randomized_rank_bounded_by_symbolic(seed in any::<u64>()) {
        let field = FieldSpec::default_prime();
        let fs = random_family(seed, field);
        let j = jacobian(&fs).unwrap();
        let sym = jacobian_rank(&j, RankMethod::Symbolic, Parallelism::Sequential);
        let rnd = jacobian_rank(&j, RankMethod::Randomized { seed, trials: 2 }, Parallelism::Parallel);
        prop_assert_eq!(rnd, sym);
        let small = fp(2);
        let js = jacobian(&random_family(seed, small)).unwrap();
        let rnd = jacobian_rank(&js, RankMethod::Randomized { seed, trials: 3 }, Parallelism::Sequential);
        let sym = jacobian_rank(&js, RankMethod::Symbolic, Parallelism::Sequential);
        prop_assert!(rnd <= sym);
    }

    #[test]
    fn annihilators_vanish(seed in any::<u64>()) {
        let fs = random_family(seed, q());
        if let Some(f) = annihilator(&fs, 3, DEFAULT_ANNIHILATOR_BUDGET).unwrap() {
            prop_assert!(f.substitute(&fs).unwrap().is_zero());
        }
        let e = annihilator_exact(&fs, 2, DEFAULT_ANNIHILATOR_BUDGET).unwrap();
        prop_assert_eq!(e.is_some(), annihilator(&fs, 2, DEFAULT_ANNIHILATOR_BUDGET).unwrap().is_some());
    }

    #[test]
    fn greedy_bases_have_equal_size(seed in any::<u64>(), rot in 0usize..4) {
        let fs = random_family(seed, q());
        let m = fs.len();
        let fwd: Vec<usize> = (0..m).collect();
        let rotated: Vec<usize> = (0..m).map(|i| (i + rot) % m).rev().collect();
        prop_assert_eq!(
            greedy_independent(&fs, &fwd).unwrap().len(),
            greedy_independent(&fs, &rotated).unwrap().len()
        );
    }

    #[test]
    fn trdeg_invariant_under_recombination(seed in any::<u64>(), c in 1i64..50) {
        let mut fs = random_family(seed, q());
        let before = trdeg(&fs, &TrdegOptions::default()).unwrap().r;
        if fs.len() >= 2 {
            fs[1] = &fs[1] + &fs[0].scale(&q().from_i64(c));
        }
        prop_assert_eq!(trdeg(&fs, &TrdegOptions::default()).unwrap().r, before);
    }
}
