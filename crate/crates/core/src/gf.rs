//! Small finite fields GF(p^k) as lookup tables.

use crate::error::{Error, Result};
use crate::numtheory::prime_power;

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: usize,
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl GaloisField {
    /// Elements are `0..q`, read as base-p digit vectors of polynomials in x.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::BadParameters(format!("{q} is not a prime power")))?;
        let (p, k, q) = (p as usize, k as usize, q as usize);
        let modulus = irreducible(p, k);
        let digits = |mut a: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let pack = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = pack(&s);
                let mut prod = vec![0usize; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for t in (k..2 * k).rev() {
                    let c = prod[t];
                    if c != 0 {
                        prod[t] = 0;
                        for (s, &mc) in modulus[..k].iter().enumerate() {
                            prod[t - k + s] = (prod[t - k + s] + p * p - c * mc % p) % p;
                        }
                    }
                }
                mul[a * q + b] = pack(&prod[..k]);
            }
        }
        Ok(GaloisField { p, q, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// Quadratic character: 0 at 0, 1 on nonzero squares, −1 otherwise.
    pub fn chi(&self, a: usize) -> i64 {
        if a == 0 {
            0
        } else if (1..self.q).any(|b| self.mul(b, b) == a) {
            1
        } else {
            -1
        }
    }
}

/// Monic irreducible polynomial of degree k over GF(p), lowest degree first.
fn irreducible(p: usize, k: usize) -> Vec<usize> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k as u32);
    for tail in 0..count {
        let mut f: Vec<usize> = (0..k).map(|i| tail / p.pow(i as u32) % p).collect();
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        let reducible = (1..=k / 2).any(|d| {
            (0..p.pow(d as u32)).any(|t| {
                let mut g: Vec<usize> = (0..d).map(|i| t / p.pow(i as u32) % p).collect();
                g.push(1);
                divides(&g, &f, p)
            })
        });
        if !reducible {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn divides(g: &[usize], f: &[usize], p: usize) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    for t in (dg..r.len()).rev() {
        let c = r[t];
        if c != 0 {
            for (s, &gc) in g.iter().enumerate() {
                r[t - dg + s] = (r[t - dg + s] + p * p - c * gc % p) % p;
            }
        }
    }
    r.iter().all(|&c| c == 0)
}
