//! Exact binomial coefficients.
//!
//! The upper argument may be any rational number: `binom(x, m)` is the
//! degree-`m` polynomial `x (x-1) ... (x-m+1) / m!`. Negative `m` yields zero.
//! For integer `0 <= x < m` the falling factorial hits a zero factor, so the
//! polynomial agrees with the counting definition everywhere on the naturals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact count of sets.
pub type BigCount = BigUint;

/// Exact rational value used for every bound and verdict.
pub type Exact = BigRational;

/// Largest ground set handled by the bitmask representation.
pub const MAX_N: usize = 30;

const fn pascal_table() -> [[u64; MAX_N + 2]; MAX_N + 2] {
    let mut t = [[0u64; MAX_N + 2]; MAX_N + 2];
    let mut n = 0;
    while n < MAX_N + 2 {
        t[n][0] = 1;
        let mut m = 1;
        while m <= n {
            t[n][m] = t[n - 1][m - 1] + t[n - 1][m];
            m += 1;
        }
        n += 1;
    }
    t
}

static PASCAL: [[u64; MAX_N + 2]; MAX_N + 2] = pascal_table();

/// Machine-word binomial for small ground sets; zero when `m > n`.
///
/// Panics if `n > 31`.
#[inline]
pub fn choose(n: usize, m: usize) -> u64 {
    if m > n {
        0
    } else {
        PASCAL[n][m]
    }
}

/// Binomial coefficient with a rational upper argument.
pub fn binom(x: &Exact, m: i64) -> Exact {
    if m < 0 {
        return Exact::zero();
    }
    let mut acc = Exact::one();
    let mut factor = x.clone();
    for i in 1..=m {
        acc *= &factor;
        acc /= Exact::from_integer(BigInt::from(i));
        factor -= Exact::one();
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Binomial coefficient with an integer (possibly negative) upper argument.
pub fn binom_int(x: i64, m: i64) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    if x >= 0 && m > x {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= BigInt::from(x - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Standard binomial on the naturals.
pub fn binom_count(n: u64, m: u64) -> BigCount {
    if m > n {
        return BigCount::zero();
    }
    let m = m.min(n - m);
    let mut acc = BigCount::one();
    for i in 0..m {
        acc *= BigCount::from(n - i);
        acc /= BigCount::from(i + 1);
    }
    acc
}

/// Integer as an exact value.
pub fn exact_int(v: impl Into<BigInt>) -> Exact {
    Exact::from_integer(v.into())
}

/// Canonical decimal rendering: integers as `"123"`, others as `"p/q"`.
pub fn exact_to_string(v: &Exact) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"7"`, `"-3"`, `"5/2"` or a finite decimal such as `"2.5"`.
pub fn parse_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Exact::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_val: BigInt = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            whole_abs.parse().ok()?
        };
        let frac_val: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut v = Exact::new(whole_val * &scale + frac_val, scale);
        if negative {
            v = -v;
        }
        return Some(v);
    }
    s.parse::<BigInt>().ok().map(Exact::from_integer)
}

/// Smallest integer `>= v`.
pub fn ceil_exact(v: &Exact) -> BigInt {
    v.ceil().to_integer()
}

/// `true` when the value is a non-negative integer.
pub fn is_natural(v: &Exact) -> bool {
    v.is_integer() && !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_oracle(n: usize) -> Vec<Vec<u64>> {
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u64; i + 1];
            for m in 1..i {
                row[m] = prev[m - 1] + prev[m];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn small_values() {
        assert_eq!(binom_int(6, 2), BigInt::from(15));
        assert_eq!(binom_int(3, 5), BigInt::zero());
        assert_eq!(binom(&exact_int(6), 2), exact_int(15));
        assert_eq!(binom(&exact_int(3), 5), Exact::zero());
        let x = parse_exact("4.5").unwrap();
        assert_eq!(binom(&x, 2), Exact::new(63.into(), 8.into()));
        assert_eq!(exact_to_string(&binom(&x, 2)), "63/8");
    }

    #[test]
    fn negative_lower_index_is_zero() {
        assert_eq!(binom_int(5, -1), BigInt::zero());
        assert_eq!(binom(&exact_int(5), -2), Exact::zero());
        assert_eq!(binom_count(5, 7), BigCount::zero());
    }

    #[test]
    fn polynomial_extension_at_negative_integers() {
        // (-1)(-2)/2 = 1
        assert_eq!(binom_int(-1, 2), BigInt::from(1));
        assert_eq!(binom(&exact_int(-1), 2), exact_int(1));
    }

    #[test]
    fn matches_pascal_oracle() {
        let rows = pascal_oracle(31);
        for (n, row) in rows.iter().enumerate() {
            for (m, &v) in row.iter().enumerate() {
                assert_eq!(choose(n, m), v);
                assert_eq!(binom_count(n as u64, m as u64), BigCount::from(v));
                assert_eq!(binom_int(n as i64, m as i64), BigInt::from(v));
            }
            assert_eq!(choose(n, n + 1), 0);
        }
    }

    #[test]
    fn pascal_rule_over_grid() {
        for x in 1..=60i64 {
            for m in 1..=x {
                assert_eq!(binom_int(x, m), binom_int(x - 1, m - 1) + binom_int(x - 1, m));
            }
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_exact("5/2"), Some(Exact::new(5.into(), 2.into())));
        assert_eq!(parse_exact("2.5"), Some(Exact::new(5.into(), 2.into())));
        assert_eq!(parse_exact("-0.25"), Some(Exact::new((-1).into(), 4.into())));
        assert_eq!(parse_exact("3"), Some(exact_int(3)));
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact("abc"), None);
        assert_eq!(parse_exact("1."), None);
    }

    #[test]
    fn ceil_of_rationals() {
        assert_eq!(ceil_exact(&parse_exact("7/2").unwrap()), BigInt::from(4));
        assert_eq!(ceil_exact(&exact_int(3)), BigInt::from(3));
    }
}
