use num_bigint::BigInt;
use padic::pfloat::*;
use padic::{PrimeContext, Rational};

fn system(p: u64, n: u32, e_min: i64, e_max: i64) -> PFloatSystem {
    PFloatSystem::new(&PrimeContext::new(p).unwrap(), n, e_min, e_max).unwrap()
}

fn f(e: i64, s: i64) -> PFloat {
    PFloat { e, s: BigInt::from(s) }
}

fn ipow(p: i128, k: u32) -> i128 {
    p.pow(k)
}

fn val(mut x: i128, p: i128) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// All normalized floats of a small system, specials included.
fn all_floats(sys: &PFloatSystem) -> Vec<PFloat> {
    let p = sys.p() as i64;
    let pn = p.pow(sys.digits());
    let mut out = vec![sys.zero(), sys.infinity(), sys.nan()];
    for e in sys.e_min()..=sys.e_max() {
        for s in -pn..=pn {
            if s % p != 0 && sys.balanced(&BigInt::from(s)) == BigInt::from(s) {
                out.push(f(e, s));
            }
        }
    }
    out
}

#[test]
fn balanced_range_has_one_unit_per_class() {
    for (p, n) in [(2u64, 3u32), (3, 1), (3, 2), (5, 2)] {
        let sys = system(p, n, -3, 3);
        let pn = (p as i64).pow(n);
        let units: Vec<i64> = (-pn..=pn)
            .filter(|s| s % p as i64 != 0 && sys.balanced(&BigInt::from(*s)) == BigInt::from(*s))
            .collect();
        let classes: std::collections::BTreeSet<i64> = units.iter().map(|s| s.rem_euclid(pn)).collect();
        assert_eq!(units.len(), classes.len());
        assert_eq!(classes.len() as i64, pn - pn / p as i64);
        for s in units {
            assert!(2 * s.abs() <= pn, "{s} outside the balanced range for p^N = {pn}");
        }
    }
}

#[test]
fn normalization() {
    let sys = system(2, 3, -10, 10);
    assert_eq!(sys.normalize(-13, &BigInt::from(5)), sys.infinity());
    assert_eq!(sys.normalize(-13, &BigInt::from(0)), sys.nan());
    assert_eq!(sys.normalize(0, &BigInt::from(0)), sys.zero());
    assert_eq!(sys.normalize(11, &BigInt::from(3)), sys.zero());
    assert_eq!(sys.normalize(0, &BigInt::from(12)), f(2, 3));
    assert_eq!(sys.normalize(9, &BigInt::from(12)), sys.zero());
    assert_eq!(sys.normalize(0, &BigInt::from(13)), f(0, -3));
    assert_eq!(sys.kind(&sys.zero()), FloatKind::Zero);
    assert_eq!(sys.zero(), f(10, 0));
    assert_eq!(sys.infinity(), f(-11, 1));
    assert_eq!(sys.nan(), f(-11, 0));
}

#[test]
fn normalization_is_idempotent_and_exact_in_range() {
    let sys = system(3, 2, -6, 6);
    for e in -9..=9 {
        for s in -200i64..=200 {
            let x = sys.normalize(e, &BigInt::from(s));
            assert_eq!(sys.normalize(x.e, &x.s), x);
            let vs = val(s as i128, 3).map(|v| v as i64);
            if let Some(vs) = vs {
                if e >= sys.e_min() && e <= sys.e_max() - vs {
                    // the value is preserved modulo the significand precision
                    let exact = Rational::from_integer(BigInt::from(s)) * pow_rat(3, e);
                    assert_eq!(sys.round(&exact), x);
                }
            }
        }
    }
}

fn pow_rat(p: u64, k: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(num_traits::Inv::inv(base), (-k) as usize)
    }
}

#[test]
fn rounding_examples() {
    let sys = system(2, 3, -5, 5);
    assert_eq!(sys.round(&Rational::from_integer(9.into())), f(0, 1));
    assert_eq!(sys.round(&pow_rat(2, -6)), sys.infinity());
    assert_eq!(sys.round(&pow_rat(2, 6)), sys.zero());
    assert_eq!(sys.round(&Rational::new(1.into(), 3.into())), f(0, 3));
}

/// Brute force over every float of the system: exactly one satisfies
/// `|x - y| <= |x| p^-N`, and it is the rounding of x.
#[test]
fn rounding_is_the_unique_nearest_float() {
    for p in [2u64, 3] {
        for n in 1..=4u32 {
            let sys = system(p, n, -6, 6);
            let floats: Vec<PFloat> = all_floats(&sys)
                .into_iter()
                .filter(|y| sys.kind(y) == FloatKind::Finite)
                .collect();
            let pi = p as i128;
            let u_max = pi.pow(6);
            for e in -6..=6i64 {
                for u in 1..=u_max {
                    if u % pi == 0 {
                        continue;
                    }
                    // everything scaled by p^12 to stay integral
                    let x = u * ipow(pi, (e + 12) as u32);
                    let target = e + 12 + n as i64;
                    let close: Vec<&PFloat> = floats
                        .iter()
                        .filter(|y| {
                            let s = i128::try_from(y.s.clone()).unwrap();
                            let yv = s * ipow(pi, (y.e + 12) as u32);
                            val(x - yv, pi).is_none_or(|v| v as i64 >= target)
                        })
                        .collect();
                    assert_eq!(close.len(), 1, "p={p} N={n} e={e} u={u}");
                    let exact = Rational::from_integer(BigInt::from(u)) * pow_rat(p, e);
                    assert_eq!(&sys.round(&exact), close[0]);
                }
            }
        }
    }
}

fn exact_op(op: char, a: &Rational, b: &Rational) -> Option<Rational> {
    match op {
        '+' => Some(a + b),
        '-' => Some(a - b),
        '*' => Some(a * b),
        _ => (!num_traits::Zero::is_zero(b)).then(|| a / b),
    }
}

#[test]
fn operations_commute_with_rounding() {
    let sys = system(2, 3, -4, 4);
    let floats = all_floats(&sys);
    let finite: Vec<&PFloat> = floats.iter().filter(|x| sys.kind(x) == FloatKind::Finite).collect();
    for x in &finite {
        for y in &finite {
            let (a, b) = (sys.to_rational(x).unwrap(), sys.to_rational(y).unwrap());
            for op in ['+', '-', '*', '/'] {
                let got = match op {
                    '+' => sys.add(x, y),
                    '-' => sys.sub(x, y),
                    '*' => sys.mul(x, y),
                    _ => sys.div(x, y),
                };
                let expected = sys.round(&exact_op(op, &a, &b).unwrap());
                assert_eq!(got, expected, "{x:?} {op} {y:?}");
            }
        }
    }
}

#[test]
fn special_value_table() {
    use FloatKind::*;
    let sys = system(2, 3, -4, 4);
    let sample = |k: FloatKind| match k {
        Finite => f(1, 3),
        Zero => sys.zero(),
        Infinity => sys.infinity(),
        NaN => sys.nan(),
    };
    let kinds = [Finite, Zero, Infinity, NaN];
    for &a in &kinds {
        for &b in &kinds {
            let (x, y) = (sample(a), sample(b));
            let add = if a == NaN || b == NaN {
                NaN
            } else if a == Infinity || b == Infinity {
                Infinity
            } else if a == Zero && b == Zero {
                Zero
            } else {
                Finite
            };
            assert_eq!(sys.kind(&sys.add(&x, &y)), add, "{a:?} + {b:?}");
            let sub = if a == Finite && b == Finite { Zero } else { add };
            assert_eq!(sys.kind(&sys.sub(&x, &y)), sub, "{a:?} - {b:?}");
            let mul = match (a, b) {
                (NaN, _) | (_, NaN) => NaN,
                (Zero, Infinity) | (Infinity, Zero) => NaN,
                (Infinity, _) | (_, Infinity) => Infinity,
                (Zero, _) | (_, Zero) => Zero,
                _ => Finite,
            };
            assert_eq!(sys.kind(&sys.mul(&x, &y)), mul, "{a:?} * {b:?}");
            let div = match (a, b) {
                (NaN, _) | (_, NaN) => NaN,
                (Zero, Zero) | (Infinity, Infinity) => NaN,
                (_, Zero) => Infinity,
                (_, Infinity) => Zero,
                (Infinity, _) => Infinity,
                (Zero, _) => Zero,
                _ => Finite,
            };
            assert_eq!(sys.kind(&sys.div(&x, &y)), div, "{a:?} / {b:?}");
        }
    }
}

#[test]
fn arithmetic_examples() {
    let sys = system(2, 4, -20, 20);
    assert_eq!(sys.add(&f(0, 3), &f(0, 5)), f(3, 1));
    assert_eq!(sys.add(&f(0, 1), &f(5, 1)), f(0, 1));
    assert_eq!(sys.add(&f(0, 1), &f(2, 1)), f(0, 5));
    assert_eq!(sys.add(&f(18, 1), &f(18, -1)), sys.zero());
    assert_eq!(sys.add(&f(18, 1), &f(18, 7)), sys.zero());
    assert_eq!(sys.mul(&f(12, 1), &f(12, 1)), sys.zero());
    assert_eq!(sys.mul(&f(-12, 1), &f(-12, 1)), sys.infinity());
    assert_eq!(sys.div(&f(-12, 1), &f(12, 1)), sys.infinity());
    assert_eq!(sys.div(&f(0, 1), &f(0, 3)), f(0, -5));
    assert_eq!(sys.print(&f(10, -5)), "...1011 * 2^10");
    assert_eq!(sys.print(&sys.nan()), "NaN");
    assert_eq!(sys.print(&sys.infinity()), "Infinity");
    let defaults = PFloatSystem::with_digits(&PrimeContext::new(2).unwrap(), PFloatSystem::DEFAULT_DIGITS).unwrap();
    assert_eq!(defaults.e_max(), 1 << 30);
    assert!(PFloatSystem::new(&PrimeContext::new(2).unwrap(), 0, -1, 1).is_err());
    assert!(PFloatSystem::new(&PrimeContext::new(2).unwrap(), 3, 1, 1).is_err());
}
