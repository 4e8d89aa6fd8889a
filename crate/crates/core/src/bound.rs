//! Lower bound on the decoder's success probability.
//!
//! `(1 - t q^(tλ(λ+1)/2 - m)) * prod_{i<tλ} (1 - q^(i-(n-k)))`, valid when
//! `tλ(λ+1)/2 < m` and `tλ < n-k+1`. Products of local rings multiply the
//! per-factor values.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lrpc::CodeParams;

/// `q^e` for a possibly negative exponent.
fn pow_signed<T: Num + FromPrimitive + Clone>(q: u64, e: i64) -> T {
    let base = T::from_u64(q).expect("representable base");
    let mut acc = T::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * base.clone();
    }
    if e < 0 {
        T::one() / acc
    } else {
        acc
    }
}

/// Success bound for a local ring with residue field size `q`, evaluated in `T`.
///
/// The formula turns negative for large `t`; such values are clamped to 0.
pub fn success_bound<T: Num + FromPrimitive + Clone + PartialOrd>(
    q: u64,
    params: CodeParams,
    m: usize,
    t: usize,
) -> Result<T> {
    if t == 0 {
        return Ok(T::one());
    }
    if !params.bound_applies(t, m) {
        return Err(Error::HypothesisViolated(format!(
            "t={t}, lambda={}, m={m}, n-k={} outside tλ(λ+1)/2 < m, tλ < n-k+1",
            params.lambda,
            params.redundancy()
        )));
    }
    let lambda = params.lambda as i64;
    let (t_i, m_i, r_i) = (t as i64, m as i64, params.redundancy() as i64);
    let t_t = T::from_u64(t as u64).expect("representable t");
    let mut acc = T::one() - t_t * pow_signed::<T>(q, t_i * lambda * (lambda + 1) / 2 - m_i);
    for i in 0..t_i * lambda {
        acc = acc * (T::one() - pow_signed::<T>(q, i - r_i));
    }
    Ok(if acc < T::zero() { T::zero() } else { acc })
}

pub fn success_bound_exact(q: u64, params: CodeParams, m: usize, t: usize) -> Result<BigRational> {
    success_bound(q, params, m, t)
}

/// Product over factors `(q_j, t_j)`.
pub fn product_success_bound(factors: &[(u64, usize)], params: CodeParams, m: usize) -> Result<BigRational> {
    factors
        .iter()
        .try_fold(BigRational::one(), |acc, &(q, t)| Ok(acc * success_bound_exact(q, params, m, t)?))
}

/// Decimal rendering with `digits` places, rounding half away from zero.
pub fn to_decimal(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let two = BigInt::from(2u32);
    let rounded = (scaled.numer().abs() * &two + scaled.denom()).div_floor(&(scaled.denom() * &two));
    let neg = x.is_negative() && !rounded.is_zero();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// `num / den` as an exact rational.
pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64`, for σ computations.
pub fn to_f64(x: &BigRational) -> f64 {
    // scale to keep 60 significant bits before the float division
    let n = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        let shift = BigUint::from(1u32) << 1000u32;
        let s = BigRational::from_integer(BigInt::from(shift));
        to_f64(&(x * &s)) / 2f64.powi(1000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_errors_always_succeed() {
        let p = CodeParams::new(20, 8, 2).unwrap();
        assert_eq!(success_bound_exact(2, p, 20, 0).unwrap(), BigRational::one());
    }

    #[test]
    fn float_and_rational_agree() {
        let p = CodeParams::new(20, 8, 2).unwrap();
        for t in 1..=5 {
            let exact = success_bound_exact(2, p, 20, t).unwrap();
            let f: f64 = success_bound(2, p, 20, t).unwrap();
            assert!((to_f64(&exact) - f).abs() < 1e-12);
        }
        assert!(matches!(success_bound_exact(2, p, 20, 7), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn vacuous_bound_is_zero() {
        let p = CodeParams::new(20, 8, 2).unwrap();
        assert_eq!(success_bound_exact(2, p, 20, 6).unwrap(), BigRational::zero());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&ratio(1, 8), 2), "0.13");
        assert_eq!(to_decimal(&ratio(1, 1), 3), "1.000");
        assert_eq!(to_decimal(&ratio(0, 1), 0), "0");
    }
}
