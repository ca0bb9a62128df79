//! Exact arithmetic helpers: decimal-string parsing, half-to-even display
//! rounding, and big-integer combinatorics.
//!
//! All probabilities in this crate are `BigRational`. Floating point only
//! appears in the clearly labeled `*_f64` fast paths and in the Monte Carlo
//! oracle.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parse a number written as a decimal ("0.75", "-1.5", "2") or as a
/// fraction ("3/4") into an exact rational.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::domain("empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::domain(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::domain(format!("not a number: {s:?}")));
    }
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(Error::domain(format!("not a number: {s:?}")));
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part
            .parse()
            .map_err(|_| Error::domain(format!("not a number: {s:?}")))?
    };
    let mut denom = BigInt::one();
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Ok(Rational::new(numer * sign, denom))
}

/// Render a rational in full precision as `numer/denom` (or just the
/// integer when the denominator is 1). Round-trips through [`parse_exact`].
pub fn exact_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Round to four decimals with ties going to the even digit, the convention
/// used by every table this crate reproduces. Returns the scaled integer
/// value (the rounded number times 10^4).
fn round_half_even_scaled(r: &Rational) -> BigInt {
    let scaled = r * Rational::from_integer(BigInt::from(10_000));
    let floor = scaled.floor().to_integer();
    let frac = &scaled - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

/// Fixed four-decimal display string, half-to-even.
pub fn display_4dp(r: &Rational) -> String {
    let scaled = round_half_even_scaled(r);
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (int_part, frac_part) = abs.div_rem(&BigInt::from(10_000));
    let sign = if neg { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part:04}")
}

/// Inclusive arithmetic grid `start, start+step, ...` not exceeding `stop`,
/// in exact arithmetic so decimal steps never drift.
pub fn rational_grid(start: &Rational, stop: &Rational, step: &Rational) -> Result<Vec<Rational>> {
    if step <= &Rational::zero() {
        return Err(Error::domain("grid step must be positive"));
    }
    if stop < start {
        return Err(Error::domain("grid stop must not precede start"));
    }
    let mut out = Vec::new();
    let mut v = start.clone();
    while &v <= stop {
        out.push(v.clone());
        v += step;
    }
    Ok(out)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Multinomial coefficient n! / (c0! c1! ... ), with counts summing to n.
pub fn multinomial(counts: &[u32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut seen: u64 = 0;
    for &c in counts {
        seen += u64::from(c);
        acc *= binomial(seen, u64::from(c));
    }
    acc
}

pub fn rational_from_u32(v: u32) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion for plotting and reporting. Exact values stay rational;
/// call sites that use this are the labeled float fast path.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_and_fraction() {
        assert_eq!(parse_exact("0.75").unwrap(), ratio(3, 4));
        assert_eq!(parse_exact("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_exact("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_exact("2").unwrap(), ratio(2, 1));
        assert_eq!(parse_exact(".5").unwrap(), ratio(1, 2));
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("1/0").is_err());
    }

    #[test]
    fn half_even_display() {
        assert_eq!(display_4dp(&ratio(1, 2)), "0.5000");
        // 0.00005 -> ties to even: 0.0000
        assert_eq!(display_4dp(&ratio(5, 100_000)), "0.0000");
        // 0.00015 -> ties to even: 0.0002
        assert_eq!(display_4dp(&ratio(15, 100_000)), "0.0002");
        assert_eq!(display_4dp(&ratio(-1, 3)), "-0.3333");
        assert_eq!(display_4dp(&ratio(2, 3)), "0.6667");
        assert_eq!(display_4dp(&ratio(1, 1)), "1.0000");
    }

    #[test]
    fn grid_is_exact() {
        let g = rational_grid(
            &parse_exact("0.55").unwrap(),
            &parse_exact("0.95").unwrap(),
            &parse_exact("0.05").unwrap(),
        )
        .unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[8], ratio(19, 20));
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(multinomial(&[1, 1, 1, 0]), BigUint::from(6u32));
        assert_eq!(multinomial(&[3, 0, 0, 0]), BigUint::from(1u32));
        assert_eq!(multinomial(&[2, 2, 2, 1]), BigUint::from(630u32));
    }
}
