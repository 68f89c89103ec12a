use cdg_core::process::{
    sample_digits, sample_trial, trial_rng, IncrementDistribution, ProcessParams,
};
use cdg_core::{Digit, SignedDigitString};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Horner evaluation, independent of the library's bit-split big path.
fn horner(s: &SignedDigitString) -> BigInt {
    s.digits()
        .iter()
        .fold(BigInt::from(0), |acc, d| acc * 2 + d.value())
}

fn digit() -> impl Strategy<Value = Digit> {
    prop_oneof![
        Just(Digit::MinusOne),
        Just(Digit::Zero),
        Just(Digit::PlusOne)
    ]
}

proptest! {
    #[test]
    fn value_paths_agree(d in prop::collection::vec(digit(), 0..=126)) {
        let s = SignedDigitString::new(d);
        let oracle = horner(&s);
        prop_assert_eq!(BigInt::from(s.value().unwrap()), oracle.clone());
        prop_assert_eq!(s.value_big(), oracle);
    }

    #[test]
    fn big_path_beyond_fixed_width(d in prop::collection::vec(digit(), 127..600)) {
        let s = SignedDigitString::new(d);
        prop_assert!(s.value().is_err());
        prop_assert_eq!(s.value_big(), horner(&s));
    }

    #[test]
    fn final_state_is_value_mod_p(p in (1u64..5000).prop_map(|k| 2 * k + 1), n in 0usize..300, seed: u64, trial in 0u64..8) {
        let params = ProcessParams::standard(p).unwrap();
        let t = sample_trial(&params, n, seed, trial);
        let v = t.digits.value_big();
        let expected = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
        prop_assert_eq!(BigInt::from(t.final_state), expected);
        prop_assert_eq!(t.digits.residue(p), t.final_state);
    }

    #[test]
    fn reproducible(seed: u64, trial: u64) {
        let params = ProcessParams::standard(101).unwrap();
        prop_assert_eq!(sample_trial(&params, 64, seed, trial), sample_trial(&params, 64, seed, trial));
    }
}

#[test]
fn empirical_law_of_ones() {
    let n = 1000;
    let trials = 200u64;
    for (dist, q) in [
        (IncrementDistribution::UNIFORM, 1.0 / 3.0),
        (IncrementDistribution::new(0.0, 0.6, 0.4).unwrap(), 0.4),
    ] {
        let mut ones = 0usize;
        for t in 0..trials {
            let s = sample_digits(&dist, n, &mut trial_rng(11, t));
            ones += s.digits().iter().filter(|&&d| d == Digit::PlusOne).count();
        }
        let frac = ones as f64 / (n as f64 * trials as f64);
        let tol = 4.0 * (q * (1.0 - q) / (n as f64 * trials as f64)).sqrt();
        assert!(
            (frac - q).abs() <= tol,
            "fraction {frac} vs {q} (tol {tol})"
        );
    }
}

#[test]
fn general_multiplier_follows_its_recursion() {
    let params = ProcessParams::new(97, 5, IncrementDistribution::UNIFORM).unwrap();
    let t = sample_trial(&params, 40, 3, 0);
    let expected = t
        .digits
        .digits()
        .iter()
        .fold(0i64, |x, d| (5 * x + d.value() as i64).rem_euclid(97));
    assert_eq!(t.final_state as i64, expected);
}
