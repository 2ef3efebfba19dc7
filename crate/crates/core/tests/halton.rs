use halton_subseq::halton::{
    digits, halton_points, radical_inverse, subsequence_points, verify_merge_identity, BaseTuple,
    Coord, Subsequence,
};
use halton_subseq::real::{BigInt, Precision, RealSpec};
use halton_subseq::Error;
use proptest::prelude::*;

/// Digit reversal by repeated division.
fn reverse_digits(n: u64, b: u64) -> Coord {
    let mut num = 0u64;
    let mut den = 1u64;
    let mut m = n;
    while m > 0 {
        num = num * b + m % b;
        den *= b;
        m /= b;
    }
    Coord::new(num, den)
}

#[test]
fn pi_panel_indices() {
    let p = Precision::default();
    let b = BaseTuple::new(vec![2, 3]).unwrap();
    let ps = subsequence_points(&RealSpec::pi(), &b, 5, &p).unwrap();
    assert_eq!(ps.indices(), [0, 3, 6, 9, 12]);
}

#[test]
fn beta_one_is_plain_halton() {
    let p = Precision::default();
    let b = BaseTuple::new(vec![2, 3]).unwrap();
    let sub = subsequence_points(&RealSpec::integer(1), &b, 500, &p).unwrap();
    let plain = halton_points(&b, 500, 0);
    assert_eq!(sub.points(), plain.points());
}

#[test]
fn integer_beta_picks_multiples() {
    let p = Precision::default();
    let b = BaseTuple::new(vec![2, 3]).unwrap();
    let sub = subsequence_points(&RealSpec::integer(5), &b, 200, &p).unwrap();
    for (n, pt) in sub.points().iter().enumerate() {
        let i = 5 * n as u64;
        assert_eq!(pt.coords, [radical_inverse(i, 2), radical_inverse(i, 3)]);
    }
}

#[test]
fn zero_and_negative_beta_are_rejected() {
    let p = Precision::default();
    let b = BaseTuple::new(vec![2]).unwrap();
    assert!(matches!(
        Subsequence::new(RealSpec::integer(0), b.clone(), p),
        Err(Error::ZeroBeta)
    ));
    assert!(matches!(
        Subsequence::new(RealSpec::integer(-2), b, p),
        Err(Error::NegativeBeta)
    ));
}

#[test]
fn merge_identity_holds_for_classic_betas() {
    let p = Precision::default();
    for beta in [
        RealSpec::sqrt(2).unwrap(),
        RealSpec::golden_ratio(),
        RealSpec::e(),
    ] {
        let r = verify_merge_identity(&beta, 20_000, &p).unwrap();
        assert!(r.passed(), "{beta}: {:?}", r.mismatch);
        assert_eq!(r.checked, 20_000);
    }
    assert!(verify_merge_identity(&RealSpec::rational(3, 2).unwrap(), 10, &p).is_err());
    assert!(verify_merge_identity(&RealSpec::quadratic(0, 1, 2, 2).unwrap(), 10, &p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn radical_inverse_reverses_digits(n in 0u64..u64::MAX / 64, b in 2u64..40) {
        prop_assert_eq!(radical_inverse(n, b), reverse_digits(n, b));
        let d = digits(n, b);
        let back = d.iter().rev().fold(0u128, |acc, &x| acc * b as u128 + x as u128);
        prop_assert_eq!(back, n as u128);
    }

    #[test]
    fn subsequence_indices_are_floors(a in 1i64..50, bb in 1i64..20, d in 2u64..60, c in 1i64..10) {
        let beta = RealSpec::quadratic(a, bb, d, c).unwrap();
        let p = Precision::default();
        let base = BaseTuple::new(vec![2, 5]).unwrap();
        let ps = subsequence_points(&beta, &base, 64, &p).unwrap();
        for (n, &i) in ps.indices().iter().enumerate() {
            prop_assert_eq!(BigInt::from(i), beta.floor_mul(n as u64, &p).unwrap());
            prop_assert_eq!(&ps.points()[n].coords, &vec![radical_inverse(i, 2), radical_inverse(i, 5)]);
        }
        let ok = ps.indices().windows(2).all(|w| w[0] <= w[1]);
        prop_assert!(ok);
    }
}
