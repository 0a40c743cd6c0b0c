//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored on the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced modulo
//! the N-th cyclotomic polynomial, always at their minimal conductor. With that
//! normalization structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::{self, Complex, Real};
use crate::error::{Error, Result};
use crate::numtheory::{euler_phi, gcd, lcm, legendre, prime_factors};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

/// Multiplicative order of a nonzero field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Div,
}

// ---------------------------------------------------------------------------
// cached integer data per conductor

/// Coefficients of Φ_n, lowest degree first; monic of degree φ(n).
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in crate::numtheory::divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = div_exact_monic(&num, &div);
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem: Vec<i64> = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (t, &d) in den.iter().enumerate() {
                rem[i + t] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Nonzero terms `(degree, coefficient)` of Φ_n below the leading term.
pub fn cyclotomic_poly_sparse(n: u64) -> Arc<Vec<(usize, i64)>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<(usize, i64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let sparse: Vec<(usize, i64)> =
        phi[..deg].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
    let out = Arc::new(sparse);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

/// Row `j` is the reduction of `x^j` modulo Φ_n, for `0 <= j < n`.
pub fn power_rows(n: u64) -> Arc<Vec<Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Vec<i64>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut rows = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; deg];
    if deg > 0 {
        cur[0] = 1;
    }
    for _ in 0..n {
        rows.push(cur.clone());
        // multiply by x
        let top = cur[deg - 1];
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..deg {
                cur[i] -= top * phi[i];
            }
        }
    }
    let out = Arc::new(rows);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

/// Reduce an integer vector indexed by powers of ζ_n (length <= n) modulo Φ_n
/// in place; on return the first φ(n) slots hold the canonical coefficients.
pub fn reduce_int_in_place(v: &mut [i128], n: u64) {
    let sparse = cyclotomic_poly_sparse(n);
    let deg = euler_phi(n) as usize;
    for j in (deg..v.len()).rev() {
        let c = v[j];
        if c != 0 {
            v[j] = 0;
            let base = j - deg;
            for &(t, pc) in sparse.iter() {
                v[base + t] -= c * pc as i128;
            }
        }
    }
}

fn reduce_rational(mut v: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for j in (deg..v.len()).rev() {
            if v[j].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[j], BigRational::zero());
            let base = j - deg;
            for (t, &pc) in phi[..deg].iter().enumerate() {
                if pc != 0 {
                    v[base + t] -= &c * BigRational::from_integer(BigInt::from(pc));
                }
            }
        }
    }
    v.resize(deg, BigRational::zero());
    v
}

/// Left inverse of the embedding Q(ζ_d) → Q(ζ_n) for `n = d p` with `p ∤ d`.
struct Descent {
    embed: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    inverse: Vec<Vec<BigRational>>,
}

fn descent_data(n: u64, p: u64) -> Arc<Descent> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<Descent>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&(n, p)) {
        return d.clone();
    }
    let d = n / p;
    let fd = euler_phi(d) as usize;
    let fnn = euler_phi(n) as usize;
    let rows = power_rows(n);
    // embed[t][i] = coefficient t of ζ_n^{p i}
    let mut embed = vec![vec![0i64; fd]; fnn];
    for i in 0..fd {
        let row = &rows[(p as usize * i) % n as usize];
        for t in 0..fnn {
            embed[t][i] = row[t];
        }
    }
    // pivot rows via elimination on the transpose
    let mut work: Vec<Vec<BigRational>> = (0..fd)
        .map(|i| (0..fnn).map(|t| BigRational::from_integer(embed[t][i].into())).collect())
        .collect();
    let mut pivots = Vec::with_capacity(fd);
    let mut rank = 0;
    for col in 0..fnn {
        if rank == fd {
            break;
        }
        let Some(piv) = (rank..fd).find(|&r| !work[r][col].is_zero()) else { continue };
        work.swap(rank, piv);
        let lead = work[rank][col].clone();
        for r in 0..fd {
            if r != rank && !work[r][col].is_zero() {
                let f = &work[r][col] / &lead;
                for c in col..fnn {
                    let delta = &f * &work[rank][c];
                    work[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    assert_eq!(rank, fd, "embedding of subfield must be injective");
    // invert the square submatrix embed[pivots][..]
    let mut a: Vec<Vec<BigRational>> = pivots
        .iter()
        .map(|&t| embed[t].iter().map(|&c| BigRational::from_integer(c.into())).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..fd)
        .map(|i| (0..fd).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..fd {
        let piv = (col..fd).find(|&r| !a[r][col].is_zero()).expect("singular pivot block");
        a.swap(col, piv);
        inv.swap(col, piv);
        let lead = a[col][col].clone();
        for c in 0..fd {
            a[col][c] = &a[col][c] / &lead;
            inv[col][c] = &inv[col][c] / &lead;
        }
        for r in 0..fd {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..fd {
                    let da = &f * &a[col][c];
                    a[r][c] -= da;
                    let di = &f * &inv[col][c];
                    inv[r][c] -= di;
                }
            }
        }
    }
    let out = Arc::new(Descent { embed, pivots, inverse: inv });
    cache.lock().unwrap().insert((n, p), out.clone());
    out
}

// ---------------------------------------------------------------------------

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q] }
    }

    /// Build from a coefficient vector on powers of ζ_n (any length).
    pub fn from_coeffs(n: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let coeffs = reduce_rational(coeffs, n);
        Cyclotomic { conductor: n, coeffs }.reduce_conductor()
    }

    /// `Σ counts[j] ζ_n^j`.
    pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Self {
        let rows = power_rows(n);
        let deg = euler_phi(n) as usize;
        let mut acc = vec![0i128; deg];
        for (j, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &v) in acc.iter_mut().zip(rows[j % n as usize].iter()) {
                    *a += c as i128 * v as i128;
                }
            }
        }
        let coeffs = acc.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect();
        Cyclotomic { conductor: n, coeffs }.reduce_conductor()
    }

    /// ζ_n^e in canonical form.
    pub fn root_of_unity(n: u64, e: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let e = e.rem_euclid(n as i64) as u64;
        let g = gcd(n, e);
        let (mut n, mut e) = (n / g, e / g);
        let mut sign = 1i64;
        if n % 4 == 2 {
            // e is odd here and ζ_{2k} = -ζ_k^{(k+1)/2} for odd k
            let k = n / 2;
            e = (e * ((k + 1) / 2)) % k;
            sign = -1;
            n = k;
        }
        let rows = power_rows(n);
        let coeffs = rows[e as usize % n as usize]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c * sign)))
            .collect();
        Cyclotomic { conductor: n, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    /// `Some(q)` if the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// Coefficient vector after promotion to Q(ζ_m), `conductor | m`.
    pub fn promote(&self, m: u64) -> Vec<BigRational> {
        assert!(m % self.conductor == 0, "conductor {} does not divide {m}", self.conductor);
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let t = (m / self.conductor) as usize;
        let len = t * (self.coeffs.len().saturating_sub(1)) + 1;
        let mut v = vec![BigRational::zero(); len.max(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[t * j] = c.clone();
        }
        reduce_rational(v, m)
    }

    fn try_descend(&self, p: u64) -> Option<Cyclotomic> {
        let n = self.conductor;
        let d = n / p;
        if d % p == 0 {
            if self.coeffs.iter().enumerate().any(|(j, c)| j as u64 % p != 0 && !c.is_zero()) {
                return None;
            }
            let coeffs = self.coeffs.iter().step_by(p as usize).cloned().collect();
            return Some(Cyclotomic { conductor: d, coeffs });
        }
        let data = descent_data(n, p);
        let fd = data.pivots.len();
        let c: Vec<BigRational> = (0..fd)
            .map(|i| {
                data.inverse[i]
                    .iter()
                    .zip(data.pivots.iter())
                    .fold(BigRational::zero(), |acc, (w, &t)| acc + w * &self.coeffs[t])
            })
            .collect();
        for (t, row) in data.embed.iter().enumerate() {
            let v = row
                .iter()
                .zip(c.iter())
                .filter(|(&e, _)| e != 0)
                .fold(BigRational::zero(), |acc, (&e, ci)| acc + ci * BigRational::from_integer(e.into()));
            if v != self.coeffs[t] {
                return None;
            }
        }
        Some(Cyclotomic { conductor: d, coeffs: c })
    }

    /// Move to the smallest conductor whose field contains the element.
    pub fn reduce_conductor(mut self) -> Self {
        if self.is_zero() {
            return Cyclotomic::zero();
        }
        'outer: while self.conductor > 1 {
            for p in prime_factors(self.conductor) {
                if let Some(y) = self.try_descend(p) {
                    self = y;
                    continue 'outer;
                }
            }
            break;
        }
        self
    }

    fn aligned(&self, o: &Cyclotomic) -> (u64, Vec<BigRational>, Vec<BigRational>) {
        let m = lcm(self.conductor, o.conductor);
        (m, self.promote(m), o.promote(m))
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        let (m, mut a, b) = self.aligned(o);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyclotomic { conductor: m, coeffs: a }.reduce_conductor()
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(q) = self.as_rational() {
            return o.scale(q);
        }
        if let Some(q) = o.as_rational() {
            return self.scale(q);
        }
        let (m, a, b) = self.aligned(o);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_coeffs(m, prod)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        if q.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(q.recip()));
        }
        let n = self.conductor;
        let phi: Vec<BigRational> =
            cyclotomic_poly(n).iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let s = poly_inverse_mod(&self.coeffs, &phi);
        Ok(Cyclotomic::from_coeffs(n, s))
    }

    pub fn div(&self, o: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn arith(&self, o: &Cyclotomic, op: CycOp) -> Result<Cyclotomic> {
        Ok(match op {
            CycOp::Add => self.add(o),
            CycOp::Sub => self.sub(o),
            CycOp::Mul => self.mul(o),
            CycOp::Div => self.div(o)?,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Cyclotomic> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclotomic::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Galois automorphism ζ ↦ ζ^k, `gcd(k, conductor) = 1`.
    pub fn galois(&self, k: i64) -> Result<Cyclotomic> {
        let n = self.conductor;
        let k = k.rem_euclid(n as i64) as u64;
        if gcd(k.max(1), n) != 1 && n > 1 {
            return Err(Error::BadParameters(format!("{k} is not a unit modulo {n}")));
        }
        let mut v = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[(j as u64 * k % n) as usize] += c;
        }
        Ok(Cyclotomic::from_coeffs(n, v))
    }

    /// `Some((L, j))` with the element equal to ζ_L^j and `L = lcm(2, conductor)`.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        if self.coeffs.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let n = self.conductor;
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.to_integer()).collect();
        let rows = power_rows(n);
        let matches = |row: &Vec<i64>, sign: i64| ints.iter().zip(row).all(|(a, &b)| *a == BigInt::from(b * sign));
        if n % 2 == 0 {
            (0..n).find(|&j| matches(&rows[j as usize], 1)).map(|j| (n, j))
        } else {
            let l = 2 * n;
            for e in 0..n {
                if matches(&rows[e as usize], 1) {
                    return Some((l, (2 * e) % l));
                }
                if matches(&rows[e as usize], -1) {
                    return Some((l, (2 * e + n) % l));
                }
            }
            None
        }
    }

    pub fn order_of(&self) -> Result<Order> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(match self.as_root_of_unity() {
            Some((l, j)) => Order::Finite(l / gcd(l, j)),
            None => Order::Infinite,
        })
    }

    /// Certified complex enclosure at ζ_N = exp(2πi/N).
    pub fn embed(&self, prec: u32) -> Complex {
        let mut acc = Complex::zero(prec);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = ball::root_of_unity(self.conductor, j as i64, prec);
            let q = Real::from_rational(c, prec);
            acc = acc.add(&z.scale(&q));
        }
        acc
    }

    /// Positive real square root of a positive integer, built from quadratic
    /// Gauss sums.
    pub fn sqrt_of_integer(k: u64) -> Result<Cyclotomic> {
        if k == 0 {
            return Ok(Cyclotomic::zero());
        }
        let mut square = 1u64;
        let mut free = 1u64;
        let mut t = k;
        for p in prime_factors(k) {
            let mut e = 0;
            while t % p == 0 {
                t /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        let mut acc = Cyclotomic::from_int(square as i64);
        for p in prime_factors(free) {
            let root = if p == 2 {
                Cyclotomic::root_of_unity(8, 1).add(&Cyclotomic::root_of_unity(8, -1))
            } else {
                let mut counts = vec![0i64; p as usize];
                for a in 1..p {
                    counts[a as usize] = legendre(a as i64, p) as i64;
                }
                let g = Cyclotomic::from_exponent_counts(p, &counts);
                if p % 4 == 1 {
                    g
                } else {
                    g.mul(&Cyclotomic::root_of_unity(4, -1))
                }
            };
            acc = acc.mul(&root);
        }
        let check = acc.mul(&acc);
        if check != Cyclotomic::from_int(k as i64) {
            return Err(Error::ConstructionInvariantViolated(format!("square root of {k} failed")));
        }
        let prec = ball::working_precision(64);
        let e = acc.embed(prec);
        if e.re.is_negative() {
            acc = acc.neg();
        } else if !e.re.is_positive() {
            return Err(Error::ConstructionInvariantViolated(format!("sign of sqrt({k}) undetermined")));
        }
        Ok(acc)
    }
}

/// `Σ_{x=0}^{m²-1} ξ^{-x(x-m)}` for a primitive 2m²-th root of unity ξ.
pub fn gauss_sum(m: u64, xi: &Cyclotomic) -> Result<Cyclotomic> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::BadParameters(format!("m = {m} must be even and positive")));
    }
    let l = 2 * m * m;
    let order = xi.order_of()?;
    if order != Order::Finite(l) {
        return Err(Error::NotPrimitiveRoot { expected: l, found: order.to_string() });
    }
    let (big_l, j) = xi.as_root_of_unity().expect("finite order implies a root of unity");
    debug_assert_eq!(big_l % l, 0);
    let s = (j / (big_l / l)) as i64;
    let mut counts = vec![0i64; l as usize];
    let mi = m as i64;
    for x in 0..(m * m) as i64 {
        let e = (-s * x * (x - mi)).rem_euclid(l as i64);
        counts[e as usize] += 1;
    }
    Ok(Cyclotomic::from_exponent_counts(l, &counts))
}

/// Inverse of `a` modulo the monic polynomial `m` over Q.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    // extended Euclid on (m, a), tracking the coefficient of a
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut t0: Vec<BigRational> = vec![BigRational::zero()];
    let mut t1: Vec<BigRational> = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is a nonzero constant since m is irreducible
    assert_eq!(r0.len(), 1, "element shares a factor with the modulus");
    let c = r0[0].clone();
    let (_, rem) = poly_divmod(&t0, &trim(m.to_vec()));
    rem.into_iter().map(|x| x / &c).collect()
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (t, bc) in b.iter().enumerate() {
                let d = &c * bc;
                r[i + t] -= d;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{j}", self.conductor)?,
                (_, false) => write!(f, "{mag}*z{}^{j}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, e: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, e)
    }

    #[test]
    fn small_identities() {
        assert_eq!(z(4, 1).mul(&z(4, 1)), Cyclotomic::from_int(-1));
        assert!(z(8, 1).add(&z(8, 1).neg()).is_zero());
        assert!(z(3, 1).mul(&z(3, 1)).mul(&z(3, 1)).is_one());
        assert!(z(1, 0).is_one());
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        let q = z(8, 2);
        assert_eq!(q.conductor(), 4);
        assert_eq!(q, z(4, 1));
    }

    #[test]
    fn phi_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // 105 is the first conductor with a coefficient -2
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn odd_twice_conductor() {
        // ζ_6 = -ζ_3^2
        assert_eq!(z(6, 1), z(3, 2).neg());
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(30, 7).mul(&z(30, 23)), Cyclotomic::one());
    }

    #[test]
    fn orders() {
        assert_eq!(Cyclotomic::one().order_of().unwrap(), Order::Finite(1));
        assert_eq!(z(8, 1).neg().order_of().unwrap(), Order::Finite(8));
        assert_eq!(Cyclotomic::from_int(2).order_of().unwrap(), Order::Infinite);
        assert_eq!(Cyclotomic::zero().order_of(), Err(Error::ZeroInput));
        assert_eq!(z(3, 1).neg().order_of().unwrap(), Order::Finite(6));
        let s2 = Cyclotomic::sqrt_of_integer(2).unwrap();
        assert_eq!(s2.order_of().unwrap(), Order::Infinite);
    }

    #[test]
    fn division_and_inverse() {
        let x = z(12, 1).add(&Cyclotomic::from_int(3));
        let y = z(12, 5).sub(&z(4, 1));
        let q = x.div(&y).unwrap();
        assert_eq!(q.mul(&y), x);
        assert_eq!(x.div(&Cyclotomic::zero()), Err(Error::DivisionByZero));
        assert_eq!(x.pow(-3).unwrap().mul(&x.pow(3).unwrap()), Cyclotomic::one());
    }

    #[test]
    fn descent_to_subfield() {
        // ζ_5 + ζ_5^4 lives in Q(√5), built at conductor 15
        let x = z(15, 3).add(&z(15, 12));
        assert_eq!(x.conductor(), 5);
        // ζ_3 written through conductor 21
        let y = z(21, 7).add(&z(21, 1)).sub(&z(21, 1));
        assert_eq!(y, z(3, 1));
        let s5 = Cyclotomic::sqrt_of_integer(5).unwrap();
        assert_eq!(s5.conductor(), 5);
        assert_eq!(s5.mul(&s5), Cyclotomic::from_int(5));
    }

    #[test]
    fn square_roots_positive() {
        for k in [2u64, 3, 6, 7, 8, 12, 21, 100] {
            let s = Cyclotomic::sqrt_of_integer(k).unwrap();
            assert_eq!(s.mul(&s), Cyclotomic::from_int(k as i64));
            let (re, im) = s.embed(128).to_f64();
            assert!((re - (k as f64).sqrt()).abs() < 1e-12, "k = {k}");
            assert!(im.abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_sums_small() {
        assert_eq!(gauss_sum(2, &z(8, 1)).unwrap(), Cyclotomic::from_int(2));
        assert_eq!(gauss_sum(4, &z(32, 1)).unwrap(), Cyclotomic::from_int(4));
        assert_eq!(gauss_sum(2, &z(8, 3)).unwrap(), Cyclotomic::from_int(2));
        assert!(matches!(gauss_sum(2, &z(4, 1)), Err(Error::NotPrimitiveRoot { .. })));
        assert!(matches!(gauss_sum(3, &z(18, 1)), Err(Error::BadParameters(_))));
    }

    #[test]
    fn gauss_sum_by_direct_powers() {
        // m = 2, ξ = ζ_8^3: add ξ^{-x(x-2)} one term at a time
        let xi = z(8, 3);
        let mut acc = Cyclotomic::zero();
        for x in 0..4i64 {
            acc = acc.add(&xi.pow(-x * (x - 2)).unwrap());
        }
        assert_eq!(acc, Cyclotomic::from_int(2));
    }

    #[test]
    fn galois_action() {
        let x = z(8, 1).add(&z(8, 7));
        assert_eq!(x.galois(3).unwrap(), x.neg());
        assert!(x.galois(2).is_err());
    }

    #[test]
    fn embedding_close_to_exp() {
        let x = z(7, 3);
        let (re, im) = x.embed(128).to_f64();
        let t = 2.0 * std::f64::consts::PI * 3.0 / 7.0;
        assert!((re - t.cos()).abs() < 1e-14 && (im - t.sin()).abs() < 1e-14);
    }
}
