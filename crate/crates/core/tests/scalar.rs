use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use padic::error::PadicError;
use padic::scalar::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

/// Base-p digits by repeated Euclidean division on machine integers.
fn euclid_digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

#[test]
fn prime_contexts() {
    assert!(PrimeContext::new(7).is_ok());
    assert_eq!(PrimeContext::new(9).unwrap_err(), PadicError::NotPrime(9));
    assert_eq!(PrimeContext::new(1).unwrap_err(), PadicError::NotPrime(1));
    assert!(PrimeContext::with_val_cap(2, 0).is_err());
    assert_eq!(ctx(2).val_cap(), 1 << 16);
}

#[test]
fn expansions() {
    assert_eq!(to_base_p(&BigUint::from(1742u32), &ctx(7)), vec![6, 3, 0, 5]);
    assert_eq!(to_base_p(&BigUint::zero(), &ctx(2)), Vec::<u64>::new());
    assert_eq!(to_base_p(&BigUint::from(13u32), &ctx(2)), vec![1, 0, 1, 1]);
    assert_eq!(to_base_p(&BigUint::from(13u32), &ctx(2)), euclid_digits(13, 2));
}

#[test]
fn expansions_round_trip_on_random_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2u64, 3, 5, 7] {
        let c = ctx(p);
        for _ in 0..10_000 {
            let n: u64 = rng.gen_range(0..=1 << 20);
            let digits = to_base_p(&BigUint::from(n), &c);
            assert_eq!(digits, euclid_digits(n, p));
            assert_eq!(from_base_p(&digits, &c), BigUint::from(n));
            assert!(digits.last().is_none_or(|&d| d != 0));
        }
    }
}

#[test]
fn valuations() {
    assert_eq!(valuation(&BigInt::from(48), &ctx(2)), Valuation::Finite(4));
    assert_eq!(valuation(&BigInt::zero(), &ctx(5)), Valuation::Infinite);
    assert_eq!(valuation(&BigInt::from(1742), &ctx(7)), Valuation::Finite(0));
    assert_eq!(valuation(&BigInt::from(-250), &ctx(5)), Valuation::Finite(3));
    let r = Rational::new(BigInt::from(9), BigInt::from(20));
    assert_eq!(rational_valuation(&r, &ctx(2)), Valuation::Finite(-2));
    assert_eq!(rational_valuation(&r, &ctx(3)), Valuation::Finite(2));
}

#[test]
fn legendre_formula() {
    assert_eq!(legendre_factorial_valuation(7, &ctx(7)), 1);
    assert_eq!(legendre_factorial_valuation(10, &ctx(2)), 8);
    assert_eq!(legendre_factorial_valuation(19, &ctx(2)), 16);
    for p in [2u64, 3, 5] {
        let c = ctx(p);
        for n in 0..=300u64 {
            let direct = valuation(&factorial(n), &c).finite().unwrap() as u64;
            assert_eq!(legendre_factorial_valuation(n, &c), direct, "p = {p}, n = {n}");
        }
    }
}

#[test]
fn valuation_is_additive_and_ultrametric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..10_000 {
        let p = [2u64, 3, 5][i % 3];
        let c = ctx(p);
        let a = BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)) * BigInt::from(p).pow(rng.gen_range(0..5));
        let b = BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)) * BigInt::from(p).pow(rng.gen_range(0..5));
        let (va, vb) = (valuation(&a, &c), valuation(&b, &c));
        assert_eq!(valuation(&(&a * &b), &c), va.add(vb));
        let vs = valuation(&(&a + &b), &c);
        assert!(vs >= va.min(vb));
        if va != vb {
            assert_eq!(vs, va.min(vb));
        }
    }
}

#[test]
fn rational_residues() {
    let c = ctx(3);
    let r = Rational::new(BigInt::from(909), BigInt::from(5));
    let res = rational_mod_pn(&r, &c, 5).unwrap();
    // 5 * res = 909 (mod 243)
    assert_eq!((BigInt::from(5) * &res - 909) % 243, BigInt::zero());
    assert!(res >= BigInt::zero() && res < BigInt::from(243));
    let bad = Rational::new(BigInt::one(), BigInt::from(3));
    assert!(rational_mod_pn(&bad, &c, 5).is_err());
    let sum = Rational::new(1.into(), 3.into()) + Rational::new(2.into(), 3.into());
    assert_eq!(sum, Rational::one());
    assert_eq!(Rational::new(6.into(), 4.into()), Rational::new(3.into(), 2.into()));
}

#[test]
fn canonical_forms() {
    let c = ctx(2);
    let x = PadicScalar::from_parts(&c, 0, BigInt::from(12), Precision::Finite(5));
    assert_eq!((x.v(), x.unit().clone(), x.abs_prec()), (2, BigInt::from(3), Some(5)));
    let z = PadicScalar::from_parts(&c, 1, BigInt::from(16), Precision::Finite(5));
    assert_eq!(z, PadicScalar::inexact_zero(&c, 5));
    assert_eq!((z.v(), z.unit().clone()), (5, BigInt::zero()));
    assert_ne!(PadicScalar::inexact_zero(&c, 5), PadicScalar::exact_zero(&c));
    // same subset, different triples
    let a = PadicScalar::from_parts(&c, 0, BigInt::from(3), Precision::Finite(4));
    let b = PadicScalar::from_parts(&c, 0, BigInt::from(19), Precision::Finite(4));
    let d = PadicScalar::from_parts(&c, 0, BigInt::from(-13), Precision::Finite(4));
    assert_eq!(a, b);
    assert_eq!(a, d);
    assert_eq!(a.rel_prec(), Some(4));
    let e = PadicScalar::exact(&c, -24);
    assert_eq!((e.v(), e.unit().clone()), (3, BigInt::from(-3)));
    assert!(PadicScalar::from_rational(&c, &Rational::new(1.into(), 3.into()), Precision::Exact).is_err());
    let third = PadicScalar::from_rational(&c, &Rational::new(1.into(), 3.into()), Precision::Finite(4)).unwrap();
    assert_eq!(third.unit(), &BigInt::from(11));
}

#[test]
fn printing() {
    let c = ctx(2);
    let x = PadicScalar::from_parts(&c, 10, BigInt::from(13), Precision::Finite(15));
    assert_eq!(print_scalar(&x, PrintStyle::Digits), "...01101 * 2^10");
    assert_eq!(print_scalar(&x, PrintStyle::Arithmetic), "13 * 2^10 + O(2^15)");
    assert_eq!(print_scalar(&PadicScalar::exact(&c, 314), PrintStyle::Digits), "100111010");
    let y = PadicScalar::with_precision(&c, 26, 10);
    assert_eq!(print_digits(&y), "...0000011010");
    assert_eq!(print_digits(&PadicScalar::inexact_zero(&c, 4)), "...0000");
    assert_eq!(print_arithmetic(&PadicScalar::inexact_zero(&c, 4)), "0 + O(2^4)");
    assert_eq!(print_arithmetic(&PadicScalar::exact(&c, -6)), "-3 * 2^1");
    assert_eq!(print_digits_width(&PadicScalar::exact(&c, -1), 6), "...111111");
    assert_eq!(print_digits(&PadicScalar::exact(&c, -1)), "...111111111");
    let frac = PadicScalar::from_parts(&c, -4, BigInt::from(3), Precision::Finite(2));
    assert_eq!(print_digits(&frac), "...00.0011");
    assert_eq!(print_digits(&PadicScalar::exact_shifted(&c, 3, -4)), "0.0011");
    let c7 = ctx(7);
    assert_eq!(print_digits(&PadicScalar::exact(&c7, 1742)), "5036");
    let c13 = ctx(13);
    assert_eq!(print_digits(&PadicScalar::with_precision(&c13, 12 * 13 + 5, 3)), "...0|12|5");
}

#[test]
fn parsing() {
    let c = ctx(2);
    let x = parse_scalar("1 + O(2^5)", &c).unwrap();
    assert_eq!((x.v(), x.unit().clone(), x.abs_prec()), (0, BigInt::one(), Some(5)));
    assert_eq!(parse_scalar("-6", &c).unwrap(), PadicScalar::exact(&c, -6));
    assert_eq!(parse_scalar("13 * 2^10 + O(2^15)", &c).unwrap().v(), 10);
    assert_eq!(parse_scalar("...01101 * 2^10", &c).unwrap(), parse_scalar("13*2^10+O(2^15)", &c).unwrap());
    assert_eq!(parse_scalar("...0000011010", &c).unwrap(), PadicScalar::with_precision(&c, 26, 10));
    assert_eq!(parse_digits("100111010", &c).unwrap(), PadicScalar::exact(&c, 314));
    assert_eq!(parse_scalar("0.0011", &c).unwrap(), PadicScalar::exact_shifted(&c, 3, -4));
    let c13 = ctx(13);
    assert_eq!(parse_scalar("...0|12|5", &c13).unwrap(), PadicScalar::with_precision(&c13, 161, 3));
    let err = parse_scalar("1 + O(3^5)", &c).unwrap_err();
    assert!(matches!(err, PadicError::Syntax { pos: 6, .. }), "{err:?}");
    assert!(matches!(parse_scalar("...0120", &c).unwrap_err(), PadicError::Syntax { pos: 5, .. }));
    assert!(matches!(parse_scalar("1 +", &c).unwrap_err(), PadicError::Syntax { .. }));
    assert!(matches!(parse_scalar("abc", &c).unwrap_err(), PadicError::Syntax { pos: 0, .. }));
}

/// `p^k` as a rational.
fn pow_rat(p: u64, k: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

fn arb_scalar() -> impl Strategy<Value = PadicScalar> {
    (0usize..4, -6i64..6, -5000i64..5000, prop::option::of(-4i64..14)).prop_map(|(pi, v, s, n)| {
        let c = ctx([2u64, 3, 5, 13][pi]);
        let n = match n {
            Some(n) => Precision::Finite(n),
            None => Precision::Exact,
        };
        PadicScalar::from_parts(&c, v, BigInt::from(s), n)
    })
}

proptest! {
    #[test]
    fn arithmetic_style_round_trips(x in arb_scalar()) {
        let c = ctx(x.p());
        let text = print_scalar(&x, PrintStyle::Arithmetic);
        prop_assert_eq!(parse_scalar(&text, &c).unwrap(), x);
    }

    #[test]
    fn digit_style_round_trips(x in arb_scalar()) {
        let c = ctx(x.p());
        let text = print_scalar(&x, PrintStyle::Digits);
        if x.is_negative_exact() {
            // a truncated infinite expansion: reads back as a ball around x
            let back = parse_digits(&text, &c).unwrap();
            prop_assert!(back.agrees_with(&x));
        } else {
            prop_assert_eq!(parse_digits(&text, &c).unwrap(), x);
        }
    }

    #[test]
    fn canonicalization_is_idempotent(x in arb_scalar()) {
        let c = ctx(x.p());
        let again = PadicScalar::from_parts(&c, x.v(), x.unit().clone(), x.precision());
        prop_assert_eq!(again, x);
    }

    #[test]
    fn canonical_forms_are_unique(x in arb_scalar(), k in 0u32..6) {
        // shifting the representative by a multiple of p^N gives the same subset
        if let Some(n) = x.abs_prec() {
            let c = ctx(x.p());
            let shifted = x.to_rational() + Rational::from_integer(BigInt::from(k)) * pow_rat(x.p(), n);
            let y = PadicScalar::from_rational(&c, &shifted, x.precision()).unwrap();
            prop_assert_eq!(y, x);
        }
    }
}
