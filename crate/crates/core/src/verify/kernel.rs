//! Sums of packed monomials reduced to a canonical coefficient vector.
//!
//! A sum `Σ q ζ_L^z U^k` is bucketed by `(k, z)`, each k-block is rewritten in
//! the power basis of Q(ζ_L), and the U-powers are folded through the ring's
//! modulus (the quartic factor when r is a square). The result is canonical,
//! so vector equality is value equality.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::cyclo::{power_rows, Cyclotomic};
use crate::matrix::SpinMatrix;
use crate::numtheory::euler_phi;
use crate::scalar::{big_ratio, upow_coeffs, EntryMonomial, Ring, Scalar, UParam, ZeroStatus};

/// `q ζ_L^z U^k` with `q > 0`; the sign lives in `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub q: Rational64,
    pub z: u64,
    pub k: i32,
}

impl Term {
    pub fn one() -> Term {
        Term { q: Rational64::one(), z: 0, k: 0 }
    }

    #[inline]
    pub fn mul(self, o: Term, l: u64) -> Term {
        let q = if self.q.is_one() {
            o.q
        } else if o.q.is_one() {
            self.q
        } else {
            self.q * o.q
        };
        let z = self.z + o.z;
        Term { q, z: if z >= l { z - l } else { z }, k: self.k + o.k }
    }

    #[inline]
    pub fn inv(self, l: u64) -> Term {
        let q = if self.q.is_one() { self.q } else { self.q.recip() };
        Term { q, z: (l - self.z) % l, k: -self.k }
    }

    pub fn neg(self, l: u64) -> Term {
        Term { z: (self.z + l / 2) % l, ..self }
    }

    pub fn pow(self, e: i64, l: u64) -> Term {
        let base = if e < 0 { self.inv(l) } else { self };
        (0..e.unsigned_abs()).fold(Term::one(), |acc, _| acc.mul(base, l))
    }
}

trait Coef: Clone + Zero + AddAssign {
    fn from_q(q: Rational64) -> Self;
    fn scaled(&self, c: i128) -> Self;
    fn to_big(&self) -> BigRational;
}

impl Coef for i128 {
    fn from_q(q: Rational64) -> Self {
        debug_assert!(q.is_integer());
        *q.numer() as i128
    }

    fn scaled(&self, c: i128) -> Self {
        self * c
    }

    fn to_big(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Coef for BigRational {
    fn from_q(q: Rational64) -> Self {
        big_ratio(q)
    }

    fn scaled(&self, c: i128) -> Self {
        self * BigRational::from_integer(BigInt::from(c))
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// Canonical coefficients, laid out slot-major: `[s · φ(L) + p]` is the
/// coefficient of `ζ_L^p U^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canon {
    Int(Vec<i128>),
    Rat(Vec<BigRational>),
}

impl Canon {
    pub fn is_zero(&self) -> bool {
        match self {
            Canon::Int(v) => v.iter().all(|c| *c == 0),
            Canon::Rat(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn sub(&self, o: &Canon) -> Canon {
        match (self, o) {
            (Canon::Int(a), Canon::Int(b)) => Canon::Int(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            _ => {
                let (a, b) = (self.to_big(), o.to_big());
                Canon::Rat(a.iter().zip(&b).map(|(x, y)| x - y).collect())
            }
        }
    }

    pub fn scale(&self, c: i64) -> Canon {
        match self {
            Canon::Int(v) => Canon::Int(v.iter().map(|x| x * c as i128).collect()),
            Canon::Rat(v) => Canon::Rat(v.iter().map(|x| x.scaled(c as i128)).collect()),
        }
    }

    fn to_big(&self) -> Vec<BigRational> {
        match self {
            Canon::Int(v) => v.iter().map(Coef::to_big).collect(),
            Canon::Rat(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub ring: Ring,
    pub l: u64,
    phi: usize,
    red: Option<Vec<i64>>,
    deg: usize,
    fast: bool,
}

impl Kernel {
    /// `fast` requires every term coefficient to be 1.
    pub fn new(ring: Ring, l: u64, fast: bool) -> Kernel {
        let red = ring.quartic().or_else(|| ring.modulus());
        let deg = red.as_ref().map_or(1, |m| m.len() - 1);
        Kernel { ring, l, phi: euler_phi(l) as usize, red, deg, fast }
    }

    pub fn is_fast(&self) -> bool {
        self.fast
    }

    pub fn sum(&self, terms: impl IntoIterator<Item = Term>) -> Canon {
        if self.fast {
            Canon::Int(self.sum_as::<i128>(terms))
        } else {
            Canon::Rat(self.sum_as::<BigRational>(terms))
        }
    }

    fn sum_as<T: Coef>(&self, terms: impl IntoIterator<Item = Term>) -> Vec<T> {
        let l = self.l as usize;
        let mut kmin = 0i32;
        let mut blocks: Vec<Vec<T>> = Vec::new();
        for t in terms {
            if blocks.is_empty() {
                kmin = t.k;
                blocks.push(vec![T::zero(); l]);
            }
            while t.k < kmin {
                blocks.insert(0, vec![T::zero(); l]);
                kmin -= 1;
            }
            while t.k >= kmin + blocks.len() as i32 {
                blocks.push(vec![T::zero(); l]);
            }
            blocks[(t.k - kmin) as usize][t.z as usize] += T::from_q(t.q);
        }
        self.reduce(kmin, &blocks)
    }

    fn reduce<T: Coef>(&self, kmin: i32, blocks: &[Vec<T>]) -> Vec<T> {
        let rows = power_rows(self.l);
        let phi = self.phi;
        let mut out = vec![T::zero(); self.deg * phi];
        for (b, block) in blocks.iter().enumerate() {
            let k = kmin + b as i32;
            let ucoef: Vec<i128> = match &self.red {
                Some(m) => upow_coeffs(m, k as i64).to_vec(),
                None => {
                    if k != 0 && block.iter().any(|c| !c.is_zero()) {
                        panic!("U^{k} in a ring without a formal U");
                    }
                    vec![1]
                }
            };
            for (z, c) in block.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (p, &rv) in rows[z].iter().enumerate() {
                    if rv == 0 {
                        continue;
                    }
                    let cz = c.scaled(rv as i128);
                    for (s, &uc) in ucoef.iter().enumerate() {
                        if uc != 0 {
                            out[s * phi + p] += cz.scaled(uc);
                        }
                    }
                }
            }
        }
        out
    }

    /// The integer `c`.
    pub fn constant(&self, c: i64) -> Canon {
        let mut v = vec![0i128; self.deg * self.phi];
        v[0] = c as i128;
        if self.fast {
            Canon::Int(v)
        } else {
            Canon::Rat(v.iter().map(Coef::to_big).collect())
        }
    }

    pub fn to_scalar(&self, c: &Canon) -> Scalar {
        let v = c.to_big();
        let slots = (0..self.deg)
            .map(|s| Cyclotomic::from_coeffs(self.l, v[s * self.phi..(s + 1) * self.phi].to_vec()))
            .collect();
        Scalar::from_slots(self.ring, slots).expect("slot count fits the ring")
    }

    pub fn status(&self, diff: &Canon, prec: u32) -> ZeroStatus {
        if diff.is_zero() {
            return ZeroStatus::Exact;
        }
        if self.ring.u != UParam::Formal {
            return ZeroStatus::NonZero;
        }
        self.to_scalar(diff).zero_status(prec)
    }

    /// Pack a monomial written over conductor `n`.
    pub fn term(&self, e: EntryMonomial, n: u64) -> Term {
        let p = e.promote(n, self.l).pack(&self.ring, self.l);
        Term { q: Rational64::new(p.q.0, p.q.1), z: p.z, k: p.k }
    }
}

/// Packed entries and their inverses, row-major.
#[derive(Clone, Debug)]
pub struct Table {
    pub n: usize,
    p: Vec<Term>,
    inv: Vec<Term>,
}

impl Table {
    pub fn new(w: &SpinMatrix, k: &Kernel) -> Table {
        let p: Vec<Term> = w.entries().iter().map(|&e| k.term(e, w.conductor())).collect();
        let inv = p.iter().map(|t| t.inv(k.l)).collect();
        Table { n: w.n(), p, inv }
    }

    pub fn all_unit(&self) -> bool {
        self.p.iter().all(|t| t.q.is_one())
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Term {
        self.p[i * self.n + j]
    }

    #[inline]
    pub fn inv_at(&self, i: usize, j: usize) -> Term {
        self.inv[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_sum_to_zero() {
        let k = Kernel::new(Ring::plain(1), 12, true);
        let s = k.sum((0..12).map(|z| Term { q: Rational64::one(), z, k: 0 }));
        assert!(s.is_zero());
        let s = k.sum([Term::one(), Term::one()]);
        assert_eq!(s, k.constant(2));
    }

    #[test]
    fn formal_relation() {
        // U⁴ + U⁻⁴ = r − 2
        let ring = Ring::potts(8);
        let k = Kernel::new(ring, 2, true);
        let t = |k| Term { q: Rational64::one(), z: 0, k };
        assert_eq!(k.sum([t(4), t(-4)]), k.constant(6));
        let s = k.to_scalar(&k.sum([t(3), t(-1)]));
        let direct = Scalar::u_power(&ring, 3).unwrap().add(&Scalar::u_power(&ring, -1).unwrap()).unwrap();
        assert_eq!(s, direct);
    }

    #[test]
    fn rational_path() {
        let k = Kernel::new(Ring::plain(1), 4, false);
        let half = Term { q: Rational64::new(1, 2), z: 0, k: 0 };
        assert_eq!(k.sum([half, half]), k.constant(1));
        assert_eq!(k.to_scalar(&k.sum([half])), Scalar::from_cyclo(Ring::plain(1), Cyclotomic::from_rational(BigRational::new(1.into(), 2.into()))));
    }
}
