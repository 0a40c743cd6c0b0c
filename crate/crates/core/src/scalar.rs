//! The entry ring Q(ζ_N)[U]/(U⁸ − (r−2)U⁴ + 1) and its monomials.
//!
//! For `r <= 4` the Potts parameter is a root of unity and is specialized into
//! the cyclotomic field, so the ring is a field and has a single slot.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ball::{self, Complex, Real};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::numtheory::{exact_isqrt, gcd, lcm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UParam {
    /// No Potts parameter in the ring.
    Absent,
    /// u = ζ_order^exp.
    Root { order: u64, exp: u64 },
    /// Formal U with U⁸ − (r−2)U⁴ + 1 = 0, embedded at the positive real root
    /// with u² = (√r + √(r−4))/2.
    Formal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub r: u64,
    pub u: UParam,
}

impl Ring {
    /// Ring without a Potts parameter; `r` is kept as a size label.
    pub fn plain(r: u64) -> Ring {
        Ring { r, u: UParam::Absent }
    }

    /// Potts ring with the default branch.
    pub fn potts(r: u64) -> Ring {
        let exp = match r {
            1 | 4 => 0,
            2 | 3 => 1,
            _ => 0,
        };
        Ring::potts_branch(r, exp).expect("default branch is valid")
    }

    /// Potts ring with `u = ζ^exp` in the root-of-unity regime. For `r > 4`
    /// only the positive real branch exists and `exp` must be 0.
    pub fn potts_branch(r: u64, exp: i64) -> Result<Ring> {
        let root = |order: u64| Ring { r, u: UParam::Root { order, exp: exp.rem_euclid(order as i64) as u64 } };
        match r {
            0 => Err(Error::BadParameters("r must be positive".into())),
            1 | 4 => Ok(root(4)),
            2 => {
                if exp.rem_euclid(2) == 1 {
                    Ok(root(16))
                } else {
                    Err(Error::BadParameters(format!("r = 2 needs u = ζ16^e with e odd, got e = {exp}")))
                }
            }
            3 => {
                if gcd(exp.rem_euclid(24) as u64, 24) == 1 {
                    Ok(root(24))
                } else {
                    Err(Error::BadParameters(format!("r = 3 needs u = ζ24^e with e a unit mod 24, got e = {exp}")))
                }
            }
            _ => {
                if exp != 0 {
                    return Err(Error::BadParameters(format!(
                        "r = {r} has only the positive real branch (exponent 0)"
                    )));
                }
                Ok(Ring { r, u: UParam::Formal })
            }
        }
    }

    /// Same arithmetic: equal u, and equal r when r enters the modulus.
    pub fn compatible(&self, o: &Ring) -> bool {
        self.u == o.u && (self.u != UParam::Formal || self.r == o.r)
    }

    /// Number of U-slots of a Scalar.
    pub fn degree(&self) -> usize {
        match self.u {
            UParam::Formal => 8,
            _ => 1,
        }
    }

    pub fn has_u(&self) -> bool {
        !matches!(self.u, UParam::Absent)
    }

    /// Order of u when it is a root of unity, 1 otherwise.
    pub fn u_order(&self) -> u64 {
        match self.u {
            UParam::Root { order, exp } => order / gcd(order, exp),
            _ => 1,
        }
    }

    /// Monic modulus `U⁸ − (r−2)U⁴ + 1`, lowest degree first.
    pub fn modulus(&self) -> Option<Vec<i64>> {
        match self.u {
            UParam::Formal => {
                let mut m = vec![0i64; 9];
                m[0] = 1;
                m[4] = -(self.r as i64 - 2);
                m[8] = 1;
                Some(m)
            }
            _ => None,
        }
    }

    /// Monic quartic `U⁴ − √r U² + 1` when r is a perfect square.
    pub fn quartic(&self) -> Option<Vec<i64>> {
        match self.u {
            UParam::Formal => exact_isqrt(self.r).map(|s| vec![1, 0, -(s as i64), 0, 1]),
            _ => None,
        }
    }

    pub fn branch_name(&self) -> String {
        match self.u {
            UParam::Absent => "none".into(),
            UParam::Root { order, exp } => format!("zeta{order}^{exp}"),
            UParam::Formal => "positive-real".into(),
        }
    }

    pub fn from_branch_name(r: u64, name: &str) -> Result<Ring> {
        if name == "none" {
            return Ok(Ring::plain(r));
        }
        if name == "positive-real" {
            return Ring::potts_branch(r, 0).and_then(|ring| {
                if ring.u == UParam::Formal {
                    Ok(ring)
                } else {
                    Err(Error::Format(format!("branch {name} is invalid for r = {r}")))
                }
            });
        }
        let rest = name.strip_prefix("zeta").ok_or_else(|| Error::Format(format!("unknown branch {name}")))?;
        let (order, exp) =
            rest.split_once('^').ok_or_else(|| Error::Format(format!("unknown branch {name}")))?;
        let order: u64 = order.parse().map_err(|_| Error::Format(format!("bad branch {name}")))?;
        let exp: i64 = exp.parse().map_err(|_| Error::Format(format!("bad branch {name}")))?;
        let ring = Ring::potts_branch(r, exp).map_err(|e| Error::Format(e.to_string()))?;
        match ring.u {
            UParam::Root { order: o, .. } if o == order => Ok(ring),
            _ => Err(Error::Format(format!("branch {name} is invalid for r = {r}"))),
        }
    }

    /// Certified enclosure of u.
    pub fn u_embed(&self, prec: u32) -> Option<Complex> {
        match self.u {
            UParam::Absent => None,
            UParam::Root { order, exp } => Some(ball::root_of_unity(order, exp as i64, prec)),
            UParam::Formal => Some(Complex::from_real(formal_u(self.r, prec))),
        }
    }

    /// Enclosure of u^k; u must be present or k zero.
    pub fn u_pow_embed(&self, k: i64, prec: u32) -> Complex {
        if k == 0 {
            return Complex::one(prec);
        }
        match self.u {
            UParam::Absent => panic!("u^{k} in a ring without u"),
            UParam::Root { order, exp } => {
                ball::root_of_unity(order, (exp as i64 * k).rem_euclid(order as i64), prec)
            }
            UParam::Formal => {
                let u = formal_u(self.r, prec);
                let base = if k < 0 { u.recip().expect("u is positive") } else { u };
                let mut acc = Real::from_i64(1, prec);
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                Complex::from_real(acc)
            }
        }
    }
}

fn formal_u(r: u64, prec: u32) -> Real {
    let sr = Real::from_i64(r as i64, prec).sqrt();
    let sr4 = Real::from_i64(r as i64 - 4, prec).sqrt();
    sr.add(&sr4).div_int(2).sqrt()
}

/// Coefficients of `U^k` modulo a monic modulus with constant term 1.
pub fn upow_coeffs(modulus: &[i64], k: i64) -> Arc<Vec<i128>> {
    type Key = (Vec<i64>, i64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<i128>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (modulus.to_vec(), k);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let d = modulus.len() - 1;
    assert_eq!(modulus[0], 1, "modulus must have constant term 1");
    let mut v = vec![0i128; d];
    v[0] = 1;
    if k >= 0 {
        for _ in 0..k {
            let top = v[d - 1];
            for i in (1..d).rev() {
                v[i] = v[i - 1];
            }
            v[0] = 0;
            for i in 0..d {
                v[i] = v[i].checked_sub(top * modulus[i] as i128).expect("U-power overflow");
            }
        }
    } else {
        // U⁻¹ = −(U^{d−1} + m_{d−1}U^{d−2} + … + m_1)
        for _ in 0..(-k) {
            let low = v[0];
            for i in 0..d - 1 {
                v[i] = v[i + 1];
            }
            v[d - 1] = 0;
            if low != 0 {
                v[d - 1] -= low;
                for i in 1..d {
                    v[i - 1] = v[i - 1].checked_sub(low * modulus[i] as i128).expect("U-power overflow");
                }
            }
        }
    }
    let out = Arc::new(v);
    cache.lock().unwrap().insert(key, out.clone());
    out
}

// ---------------------------------------------------------------------------

/// `q · ζ_N^zexp · U^upow`; the conductor N is carried by the owning matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EntryMonomial {
    pub q: Rational64,
    pub zexp: i64,
    pub upow: i32,
}

/// Value-canonical form of a monomial: `(|q|, z mod L, k)` with the sign and any
/// root-of-unity u absorbed into the ζ_L exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Packed {
    pub q: (i64, i64),
    pub z: u64,
    pub k: i32,
}

impl EntryMonomial {
    pub fn new(q: Rational64, zexp: i64, upow: i32) -> Self {
        EntryMonomial { q, zexp, upow }
    }

    pub fn unit(zexp: i64, upow: i32) -> Self {
        EntryMonomial { q: Rational64::one(), zexp, upow }
    }

    pub fn signed(sign: i64, zexp: i64, upow: i32) -> Self {
        EntryMonomial { q: Rational64::from_integer(sign), zexp, upow }
    }

    pub fn one() -> Self {
        Self::unit(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn normalized(self, n: u64) -> Self {
        EntryMonomial { zexp: self.zexp.rem_euclid(n as i64), ..self }
    }

    pub fn neg(self) -> Self {
        EntryMonomial { q: -self.q, ..self }
    }

    pub fn mul(self, o: EntryMonomial, n: u64) -> Self {
        EntryMonomial {
            q: self.q * o.q,
            zexp: (self.zexp + o.zexp).rem_euclid(n as i64),
            upow: self.upow + o.upow,
        }
    }

    pub fn inverse(self, n: u64) -> Result<Self> {
        if self.q.is_zero() {
            return Err(Error::ZeroEntry);
        }
        Ok(EntryMonomial { q: self.q.recip(), zexp: (-self.zexp).rem_euclid(n as i64), upow: -self.upow })
    }

    pub fn pow(self, e: i64, n: u64) -> Result<Self> {
        let base = if e < 0 { self.inverse(n)? } else { self };
        let k = e.unsigned_abs();
        let q = (0..k).fold(Rational64::one(), |acc, _| acc * base.q);
        Ok(EntryMonomial {
            q,
            zexp: (base.zexp as i128 * k as i128).rem_euclid(n as i128) as i64,
            upow: base.upow * k as i32,
        })
    }

    /// Rewrite over conductor `to`, a multiple of `from`.
    pub fn promote(self, from: u64, to: u64) -> Self {
        assert!(to % from == 0);
        EntryMonomial { zexp: self.zexp * (to / from) as i64, ..self }
    }

    pub fn expand(&self, ring: &Ring, n: u64) -> Result<Scalar> {
        let c = Cyclotomic::root_of_unity(n, self.zexp).scale(&big_ratio(self.q));
        Ok(Scalar::from_cyclo(*ring, c).mul(&Scalar::u_power(ring, self.upow as i64)?)?)
    }

    pub fn pack(&self, ring: &Ring, n: u64) -> Packed {
        let l = pack_modulus(ring, n);
        let mut z = (self.zexp as i128 * (l / n) as i128).rem_euclid(l as i128) as u64;
        let mut k = self.upow;
        if let UParam::Root { order, exp } = ring.u {
            let step = (exp * (l / order)) as i128;
            z = (z as i128 + step * k as i128).rem_euclid(l as i128) as u64;
            k = 0;
        }
        let mut q = self.q;
        if q.is_negative() {
            q = -q;
            z = (z + l / 2) % l;
        }
        Packed { q: (*q.numer(), *q.denom()), z, k }
    }

    /// Certified enclosure of the monomial's value.
    pub fn embed(&self, ring: &Ring, n: u64, prec: u32) -> Complex {
        let q = Real::from_ratio(&BigInt::from(*self.q.numer()), &BigInt::from(*self.q.denom()), prec);
        ball::root_of_unity(n, self.zexp, prec).mul(&ring.u_pow_embed(self.upow as i64, prec)).scale(&q)
    }
}

impl fmt::Display for EntryMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·ζ^{}·U^{}", self.q, self.zexp, self.upow)
    }
}

/// Conductor over which packed monomials of a matrix live.
pub fn pack_modulus(ring: &Ring, n: u64) -> u64 {
    let base = lcm(n, 2);
    match ring.u {
        UParam::Root { order, .. } => lcm(base, order),
        _ => base,
    }
}

pub fn big_ratio(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Monomial inverse, `(q ζ^e U^k)⁻¹ = q⁻¹ ζ^{−e} U^{−k}`.
pub fn monomial_inverse(x: EntryMonomial, n: u64) -> Result<EntryMonomial> {
    x.inverse(n)
}

// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: Ring,
    slots: Vec<Cyclotomic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
}

/// Outcome of a zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    /// Zero in the quotient ring.
    Exact,
    /// Nonzero in the ring, but its certified enclosure is a tiny ball around 0.
    Numeric,
    NonZero,
}

impl Scalar {
    pub fn zero(ring: Ring) -> Scalar {
        Scalar { ring, slots: vec![Cyclotomic::zero(); ring.degree()] }
    }

    pub fn one(ring: Ring) -> Scalar {
        Scalar::from_cyclo(ring, Cyclotomic::one())
    }

    pub fn from_int(ring: Ring, v: i64) -> Scalar {
        Scalar::from_cyclo(ring, Cyclotomic::from_int(v))
    }

    pub fn from_cyclo(ring: Ring, c: Cyclotomic) -> Scalar {
        let mut s = Scalar::zero(ring);
        s.slots[0] = c;
        s
    }

    /// Build from U-slot coefficients (length at most the ring degree).
    pub fn from_slots(ring: Ring, mut slots: Vec<Cyclotomic>) -> Result<Scalar> {
        if slots.len() > ring.degree() {
            return Err(Error::SizeMismatch(slots.len(), ring.degree()));
        }
        slots.resize(ring.degree(), Cyclotomic::zero());
        Ok(Scalar { ring, slots })
    }

    pub fn u_power(ring: &Ring, k: i64) -> Result<Scalar> {
        match ring.u {
            UParam::Absent if k == 0 => Ok(Scalar::one(*ring)),
            UParam::Absent => {
                Err(Error::ParameterMismatch(format!("U^{k} requested in a ring without a Potts parameter")))
            }
            UParam::Root { order, exp } => {
                Ok(Scalar::from_cyclo(*ring, Cyclotomic::root_of_unity(order, exp as i64 * k)))
            }
            UParam::Formal => {
                let m = ring.modulus().unwrap();
                let c = upow_coeffs(&m, k);
                let slots = c.iter().map(|&v| Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(v)))).collect();
                Ok(Scalar { ring: *ring, slots })
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn slots(&self) -> &[Cyclotomic] {
        &self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(Cyclotomic::is_zero)
    }

    fn check(&self, o: &Scalar) -> Result<()> {
        if !self.ring.compatible(&o.ring) {
            return Err(Error::ParameterMismatch(format!(
                "rings differ: r = {} ({}) vs r = {} ({})",
                self.ring.r,
                self.ring.branch_name(),
                o.ring.r,
                o.ring.branch_name()
            )));
        }
        Ok(())
    }

    pub fn arith(&self, o: &Scalar, op: ScalarOp) -> Result<Scalar> {
        match op {
            ScalarOp::Add => self.add(o),
            ScalarOp::Sub => self.sub(o),
            ScalarOp::Mul => self.mul(o),
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        let slots = self.slots.iter().zip(&o.slots).map(|(a, b)| a.add(b)).collect();
        Ok(Scalar { ring: self.ring, slots })
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar { ring: self.ring, slots: self.slots.iter().map(Cyclotomic::neg).collect() }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Scalar {
        Scalar { ring: self.ring, slots: self.slots.iter().map(|s| s.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        let d = self.ring.degree();
        if d == 1 {
            return Ok(Scalar { ring: self.ring, slots: vec![self.slots[0].mul(&o.slots[0])] });
        }
        let mut prod = vec![Cyclotomic::zero(); 2 * d - 1];
        for (i, a) in self.slots.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.slots.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = prod[i + j].add(&a.mul(b));
                }
            }
        }
        let m = self.ring.modulus().unwrap();
        reduce_slots(&mut prod, &m);
        prod.truncate(d);
        Ok(Scalar { ring: self.ring, slots: prod })
    }

    pub fn pow(&self, e: u64) -> Result<Scalar> {
        let mut acc = Scalar::one(self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `Some(c)` when the scalar lies in the cyclotomic subring.
    pub fn as_cyclotomic(&self) -> Option<&Cyclotomic> {
        self.slots[1..].iter().all(Cyclotomic::is_zero).then(|| &self.slots[0])
    }

    /// Collapse back to `q ζ_N^e U^k` if the scalar is a monomial.
    pub fn to_monomial(&self, n: u64) -> Option<EntryMonomial> {
        if self.is_zero() {
            return None;
        }
        match self.ring.u {
            UParam::Formal => {
                for k in -24i64..=24 {
                    let t = self.mul(&Scalar::u_power(&self.ring, -k).ok()?).ok()?;
                    if let Some(c) = t.as_cyclotomic() {
                        return cyclo_to_monomial(c, n).map(|m| EntryMonomial { upow: k as i32, ..m });
                    }
                }
                None
            }
            _ => cyclo_to_monomial(&self.slots[0], n),
        }
    }

    /// Certified enclosure at ζ_N ↦ exp(2πi/N) and U ↦ the ring's branch.
    pub fn embed(&self, prec: u32) -> Complex {
        let mut acc = Complex::zero(prec);
        for (k, c) in self.slots.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c.embed(prec);
            acc = acc.add(&if k == 0 { term } else { term.mul(&self.ring.u_pow_embed(k as i64, prec)) });
        }
        acc
    }

    /// Ring zero, then the quartic factor for square r, then certified numerics.
    pub fn zero_status(&self, prec: u32) -> ZeroStatus {
        if self.is_zero() {
            return ZeroStatus::Exact;
        }
        if let Some(quartic) = self.ring.quartic() {
            let mut v = self.slots.clone();
            reduce_slots(&mut v, &quartic);
            if v[..4].iter().all(Cyclotomic::is_zero) {
                return ZeroStatus::Exact;
            }
        }
        if !self.ring.has_u() || matches!(self.ring.u, UParam::Root { .. }) {
            return ZeroStatus::NonZero;
        }
        numeric_status(&self.embed(prec))
    }
}

/// Verdict of a certified enclosure of a value whose exact status is unknown.
pub fn numeric_status(z: &Complex) -> ZeroStatus {
    if z.contains_zero() && z.width_below_pow10(30) {
        ZeroStatus::Numeric
    } else {
        ZeroStatus::NonZero
    }
}

fn reduce_slots(v: &mut [Cyclotomic], modulus: &[i64]) {
    let d = modulus.len() - 1;
    for j in (d..v.len()).rev() {
        if v[j].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[j], Cyclotomic::zero());
        for (t, &mc) in modulus[..d].iter().enumerate() {
            if mc != 0 {
                v[j - d + t] = v[j - d + t].sub(&c.scale(&BigRational::from_integer(BigInt::from(mc))));
            }
        }
    }
    for s in v.iter_mut().skip(d) {
        *s = Cyclotomic::zero();
    }
}

fn cyclo_to_monomial(c: &Cyclotomic, n: u64) -> Option<EntryMonomial> {
    // q² = c·c̄ must be a rational square
    let conj = c.galois(-1).ok()?;
    let norm = c.mul(&conj);
    let q2 = norm.as_rational()?.clone();
    let (num, den) = (q2.numer().clone(), q2.denom().clone());
    let (sn, sd) = (num.sqrt(), den.sqrt());
    if &sn * &sn != num || &sd * &sd != den {
        return None;
    }
    let q = BigRational::new(sn, sd);
    let unit = c.scale(&q.recip());
    let (l, j) = unit.as_root_of_unity()?;
    let qi = Rational64::new(i64::try_from(q.numer()).ok()?, i64::try_from(q.denom()).ok()?);
    // reduce to a primitive o-th root, o | lcm(2, n) is required
    let o = l / gcd(l, j);
    let jp = j / (l / o);
    if n % o == 0 {
        Some(EntryMonomial::new(qi, (jp * (n / o)) as i64, 0))
    } else if o % 4 == 2 && n % (o / 2) == 0 {
        // ζ_{2k}^j = −ζ_k^{j(k+1)/2} for odd k and odd j
        let k = o / 2;
        let e = jp * ((k + 1) / 2) % k;
        Some(EntryMonomial::new(-qi, (e * (n / k)) as i64, 0))
    } else {
        None
    }
}

/// D_u: u² for r = 1 and −u² − u⁻² otherwise.
pub fn potts_d(ring: &Ring) -> Result<Scalar> {
    let u2 = Scalar::u_power(ring, 2)?;
    if ring.r == 1 {
        return Ok(u2);
    }
    Ok(u2.add(&Scalar::u_power(ring, -2)?)?.neg())
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.slots.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·U^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
