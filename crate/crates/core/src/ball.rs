//! Certified real and complex intervals in fixed-point form.
//!
//! A [`Real`] stores an integer midpoint and radius at scale `2^-prec`; every
//! operation rounds outward, so the true value is always inside the ball.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default precision of certified evaluation, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
const GUARD_BITS: u32 = 64;

/// Requested precision, honoring `SMLAB_PRECISION_BITS`.
pub fn precision_bits() -> u32 {
    std::env::var("SMLAB_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// Internal working precision for a requested output precision.
pub fn working_precision(bits: u32) -> u32 {
    bits + GUARD_BITS
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Real { mid: v << prec as usize, rad: BigInt::zero(), prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled = num << prec as usize;
        let (q, r) = scaled.div_mod_floor(&den);
        let rad = if r.is_zero() { BigInt::zero() } else { BigInt::one() };
        Real { mid: q, rad, prec }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Ball covering `[lo, hi]` given as scaled integers.
    fn from_endpoints(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let rad = &hi - &mid;
        Real { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn lo(&self) -> BigInt {
        &self.mid - &self.rad
    }

    fn hi(&self) -> BigInt {
        &self.mid + &self.rad
    }

    /// Upper bound on `|x|` in scaled units.
    fn abs_upper(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    pub fn add(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        Real { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn sub(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        Real { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn neg(&self) -> Real {
        Real { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        let p = self.prec as usize;
        let mid = (&self.mid * &o.mid) >> p;
        let spread = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let rad = (spread >> p) + BigInt::from(2);
        Real { mid, rad, prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real { mid: &self.mid * k, rad: &self.rad * k.unsigned_abs(), prec: self.prec }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Real {
        Real { mid: &self.mid * k, rad: &self.rad * k.abs(), prec: self.prec }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Real {
        assert!(k != 0, "division by zero");
        let kb = BigInt::from(k.unsigned_abs());
        let mid = self.mid.div_floor(&kb);
        let rad = self.rad.div_ceil(&kb) + BigInt::one();
        let out = Real { mid, rad, prec: self.prec };
        if k < 0 {
            out.neg()
        } else {
            out
        }
    }

    /// Square root of a ball that is certainly nonnegative somewhere; negative
    /// parts are clamped to zero.
    pub fn sqrt(&self) -> Real {
        let p = self.prec as usize;
        let hi = self.hi();
        assert!(!hi.is_negative(), "square root of a negative ball");
        let lo = self.lo().max(BigInt::zero());
        let s_lo = (lo << p).sqrt();
        let s_hi = (hi << p).sqrt() + BigInt::one();
        Real::from_endpoints(s_lo, s_hi, self.prec)
    }

    /// Reciprocal; `None` if the ball contains zero.
    pub fn recip(&self) -> Option<Real> {
        if self.contains_zero() {
            return None;
        }
        let negative = self.mid.is_negative();
        let (lo, hi) = if negative { (-self.hi(), -self.lo()) } else { (self.lo(), self.hi()) };
        let one = BigInt::one() << (2 * self.prec as usize);
        let r_lo = one.div_floor(&hi);
        let r_hi = one.div_ceil(&lo);
        let out = Real::from_endpoints(r_lo, r_hi, self.prec);
        Some(if negative { out.neg() } else { out })
    }

    pub fn contains_zero(&self) -> bool {
        self.lo() <= BigInt::zero() && self.hi() >= BigInt::zero()
    }

    pub fn is_positive(&self) -> bool {
        self.lo().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi().is_negative()
    }

    /// True when the two balls are certainly different.
    pub fn disjoint(&self, o: &Real) -> bool {
        self.hi() < o.lo() || o.hi() < self.lo()
    }

    /// `true` if the ball diameter is below `10^-digits`.
    pub fn width_below_pow10(&self, digits: u32) -> bool {
        let lhs = &self.rad * BigInt::from(2) * BigInt::from(10u32).pow(digits);
        lhs < (BigInt::one() << self.prec as usize)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.prec.saturating_sub(200);
        let m = (&self.mid >> shift as usize).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(-((self.prec - shift) as i32))
    }

    pub fn radius_f64(&self) -> f64 {
        let shift = self.prec.saturating_sub(200);
        let m = (&self.rad >> shift as usize).to_f64().unwrap_or(f64::INFINITY) + 1.0;
        m * 2f64.powi(-((self.prec - shift) as i32))
    }

    fn widen(&self, extra: &BigInt) -> Real {
        Real { mid: self.mid.clone(), rad: &self.rad + extra, prec: self.prec }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Complex { re: Real::from_i64(1, prec), im: Real::zero(prec) }
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.prec;
        Complex { re, im: Real::zero(prec) }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Complex { re, im }
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn mul_int(&self, k: i64) -> Complex {
        Complex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Complex {
        Complex { re: self.re.mul_bigint(k), im: self.im.mul_bigint(k) }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn width_below_pow10(&self, digits: u32) -> bool {
        self.re.width_below_pow10(digits) && self.im.width_below_pow10(digits)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Enclosure of pi by Machin's formula.
pub fn pi(prec: u32) -> Real {
    static CACHE: OnceLock<Mutex<HashMap<u32, Real>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let v = atan_inv(5, prec).mul_int(16).sub(&atan_inv(239, prec).mul_int(4));
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// atan(1/x) for integer x >= 2.
fn atan_inv(x: u64, prec: u32) -> Real {
    let one = BigInt::one() << prec as usize;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 0u64;
    loop {
        let term = &one / (&power * BigInt::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        terms += 1;
        power *= &x2;
        k += 1;
    }
    // one unit of truncation per term plus the first omitted term (< 1 unit)
    Real { mid: sum, rad: BigInt::from(terms + 1), prec }
}

/// exp(i * theta) by Taylor series with a rigorous tail bound.
pub fn exp_i(theta: &Real) -> Complex {
    let prec = theta.prec;
    let theta_units = {
        let one = BigInt::one() << prec as usize;
        (theta.abs_upper().div_ceil(&one)).to_i64().unwrap_or(i64::MAX)
    };
    let mut sum = Complex::one(prec);
    let mut term = Complex::one(prec);
    let mut n: i64 = 1;
    loop {
        // term *= i*theta / n
        let re = term.im.mul(theta).neg();
        let im = term.re.mul(theta);
        term = Complex { re: re.div_int(n), im: im.div_int(n) };
        sum = sum.add(&term);
        let bound = term.re.abs_upper() + term.im.abs_upper();
        if n + 1 >= 2 * theta_units.max(1) && bound <= BigInt::from(4) {
            let tail = bound * BigInt::from(2) + BigInt::one();
            sum = Complex { re: sum.re.widen(&tail), im: sum.im.widen(&tail) };
            return sum;
        }
        n += 1;
    }
}

/// Enclosure of exp(2 pi i j / n).
pub fn root_of_unity(n: u64, j: i64, prec: u32) -> Complex {
    let n_i = n as i64;
    let mut j = j.rem_euclid(n_i);
    if 2 * j > n_i {
        j -= n_i;
    }
    if j == 0 {
        return Complex::one(prec);
    }
    if 2 * j == n_i {
        return Complex::from_real(Real::from_i64(-1, prec));
    }
    if 4 * j == n_i {
        return Complex { re: Real::zero(prec), im: Real::from_i64(1, prec) };
    }
    if 4 * j == -n_i {
        return Complex { re: Real::zero(prec), im: Real::from_i64(-1, prec) };
    }
    let theta = pi(prec).mul_int(2 * j).div_int(n_i);
    exp_i(&theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 320;

    #[test]
    fn pi_digits() {
        let p = pi(P);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.width_below_pow10(80));
    }

    #[test]
    fn eighth_root_squared_is_i() {
        let z = root_of_unity(8, 1, P);
        let sq = z.mul(&z);
        assert!(sq.re.contains_zero());
        assert!(sq.im.sub(&Real::from_i64(1, P)).contains_zero());
        assert!(sq.re.width_below_pow10(60));
    }

    #[test]
    fn roots_match_f64() {
        for n in 1..40u64 {
            for j in 0..n as i64 {
                let z = root_of_unity(n, j, P);
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let (re, im) = z.to_f64();
                assert!((re - t.cos()).abs() < 1e-12 && (im - t.sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_and_recip() {
        let two = Real::from_i64(2, P);
        let s = two.sqrt();
        let back = s.mul(&s).sub(&two);
        assert!(back.contains_zero() && back.width_below_pow10(70));
        let inv = s.recip().unwrap();
        let one = inv.mul(&s).sub(&Real::from_i64(1, P));
        assert!(one.contains_zero() && one.width_below_pow10(70));
        assert!(Real::zero(P).recip().is_none());
    }

    #[test]
    fn from_ratio_encloses() {
        let third = Real::from_ratio(&BigInt::from(1), &BigInt::from(3), P);
        let back = third.mul_int(3).sub(&Real::from_i64(1, P));
        assert!(back.contains_zero());
    }
}
