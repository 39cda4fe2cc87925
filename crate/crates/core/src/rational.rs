//! Exact rational scalars.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Serializes as `p` for integers and `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// taken from the continued-fraction convergents and semiconvergents.
pub fn best_approximation(x: f64, max_den: u64) -> Rational {
    assert!(max_den >= 1);
    if !x.is_finite() {
        return Rational::zero();
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    // convergents p/q
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut best = (v.round() as u64, 1u64);
    for _ in 0..64 {
        let a = v.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            // best semiconvergent within the cap
            let t = (max_den - q0) / q1.max(1);
            let (ps, qs) = (t * p1 + p0, t * q1 + q0);
            let cand = [(p1, q1), (ps, qs)];
            best = *cand
                .iter()
                .filter(|(_, q)| *q > 0)
                .min_by(|a, b| {
                    let ea = (a.0 as f64 / a.1 as f64 - x.abs()).abs();
                    let eb = (b.0 as f64 / b.1 as f64 - x.abs()).abs();
                    ea.partial_cmp(&eb).unwrap()
                })
                .unwrap();
            break;
        }
        let p2 = a * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        best = (p1, q1);
        let frac = v - a as f64;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    let r = Rational::new(BigInt::from(best.0), BigInt::from(best.1));
    if negative {
        -r
    } else {
        r
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
