//! Spin models on finite abelian groups and the cyclic model on Z_{m²}.

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::{plain_ring, SpinMatrix};
use crate::numtheory::{gcd, lcm};
use crate::scalar::EntryMonomial;

/// U = Z_{n₁} ⊕ … ⊕ Z_{n_h} with η_i = ζ_{2n_i}^{eta_exps[i]} and
/// χ_{a_i}(a_i) = ζ_{n_i}^{char_exps[i]}; the character is the product one,
/// so the cross terms vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianParams {
    pub orders: Vec<u64>,
    pub eta_exps: Vec<i64>,
    pub char_exps: Vec<i64>,
    /// Sign of D = ±√|U|.
    pub d_sign: i8,
    /// Which square root of t₀² is used.
    pub t0_sign: i8,
}

impl AbelianParams {
    pub fn new(orders: Vec<u64>) -> Self {
        let eta_exps = orders.iter().map(|&n| if n % 2 == 0 { 1 } else { 0 }).collect();
        let char_exps = vec![1; orders.len()];
        AbelianParams { orders, eta_exps, char_exps, d_sign: 1, t0_sign: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct AbelianModel {
    pub matrix: SpinMatrix,
    /// t₀ = ζ_N^{t0_exp} over the matrix conductor N.
    pub t0_exp: i64,
    /// θ_x = ζ_N^{theta_exps[x]} in mixed-radix order.
    pub theta_exps: Vec<i64>,
    pub d: Cyclotomic,
}

pub fn group_size(orders: &[u64]) -> usize {
    orders.iter().product::<u64>() as usize
}

/// Digits of `idx` in mixed radix, first factor slowest.
pub fn digits(idx: usize, orders: &[u64]) -> Vec<u64> {
    let mut out = vec![0; orders.len()];
    let mut t = idx as u64;
    for (k, &n) in orders.iter().enumerate().rev() {
        out[k] = t % n;
        t /= n;
    }
    out
}

pub fn build_abelian_model(p: &AbelianParams) -> Result<AbelianModel> {
    let h = p.orders.len();
    if h == 0 || p.eta_exps.len() != h || p.char_exps.len() != h {
        return Err(Error::BadParameters("group orders, η and character exponents must have equal length".into()));
    }
    for (k, &n) in p.orders.iter().enumerate() {
        if n < 1 {
            return Err(Error::BadParameters("cyclic factors need positive order".into()));
        }
        if gcd(p.char_exps[k].rem_euclid(n as i64) as u64, n) != 1 {
            return Err(Error::BadParameters(format!("character exponent of factor {k} is not a unit mod {n}")));
        }
        // η^n = χ(a,a)^{−n(n−1)/2}, compared as exponents of ζ_{2n}
        let lhs = (p.eta_exps[k] * n as i64).rem_euclid(2 * n as i64);
        let rhs = (-p.char_exps[k] * 2 * (n as i64 * (n as i64 - 1) / 2)).rem_euclid(2 * n as i64);
        if lhs != rhs {
            return Err(Error::BadEtaChoice { factor: k });
        }
    }
    if p.d_sign.abs() != 1 || p.t0_sign.abs() != 1 {
        return Err(Error::BadParameters("signs must be ±1".into()));
    }
    let size = group_size(&p.orders);
    let base = p.orders.iter().fold(2u64, |acc, &n| lcm(acc, 2 * n));
    // θ_x as exponents of ζ_base
    let thetas: Vec<i64> = (0..size)
        .map(|idx| {
            let x = digits(idx, &p.orders);
            let mut e = 0i64;
            for (k, &n) in p.orders.iter().enumerate() {
                let xi = x[k] as i64;
                let step2n = (base / (2 * n)) as i64;
                let stepn = (base / n) as i64;
                e += p.eta_exps[k] * xi * step2n + p.char_exps[k] * (xi * (xi - 1) / 2) * stepn;
            }
            e.rem_euclid(base as i64)
        })
        .collect();
    for (idx, &t) in thetas.iter().enumerate() {
        if (t as u64 * 2 * size as u64) % base != 0 {
            return Err(Error::ConstructionInvariantViolated(format!("θ^(2|U|) ≠ 1 at element {idx}")));
        }
    }
    let mut counts = vec![0i64; base as usize];
    for &t in &thetas {
        counts[((base as i64 - t) % base as i64) as usize] += 1;
    }
    let sum = Cyclotomic::from_exponent_counts(base, &counts);
    let d = Cyclotomic::sqrt_of_integer(size as u64)?.scale(&num_rational::BigRational::from_integer(p.d_sign.into()));
    let t0_sq = sum.div(&d)?;
    let (l, j) = t0_sq.as_root_of_unity().ok_or(Error::TZeroBranchUnresolved)?;
    // t₀ = ±ζ_{2l}^j
    let conductor = lcm(base, 2 * l);
    let mut t0 = (j * (conductor / (2 * l))) as i64;
    if p.t0_sign < 0 {
        t0 += (conductor / 2) as i64;
    }
    let t0 = t0.rem_euclid(conductor as i64);
    let scale = (conductor / base) as i64;
    let theta_exps: Vec<i64> = thetas.iter().map(|&t| t * scale).collect();
    let orders = p.orders.clone();
    let matrix = SpinMatrix::from_fn(plain_ring(1), conductor, size, |a, b| {
        let (da, db) = (digits(a, &orders), digits(b, &orders));
        let diff: usize = orders
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &n)| acc * n + (db[k] + n - da[k]) % n) as usize;
        EntryMonomial::unit(t0 + theta_exps[diff], 0)
    })?
    .with_family("abelian");
    Ok(AbelianModel { matrix, t0_exp: t0, theta_exps, d })
}

/// W(α, β) = a^{(β−α)(β−α−m)} on Z_{m²}, a = ζ_{2m²}^{a_exp}.
pub fn build_cyclic_bb_model(m: usize, a_exp: i64) -> Result<SpinMatrix> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::BadParameters(format!("m = {m} must be even and positive")));
    }
    let n = m * m;
    let big = 2 * n as u64;
    if gcd(a_exp.rem_euclid(big as i64) as u64, big) != 1 {
        return Err(Error::BadParameters(format!("a = ζ{big}^{a_exp} is not primitive")));
    }
    let mi = m as i64;
    SpinMatrix::from_fn(plain_ring(1), big, n, |a, b| {
        let d = ((b + n - a) % n) as i64;
        EntryMonomial::unit(a_exp * d * (d - mi), 0)
    })
    .map(|w| w.with_family("cyclic-bb"))
}

/// Abelian parameters on Z_{m²} that reproduce the cyclic model.
pub fn cyclic_bb_params(m: usize, a_exp: i64) -> AbelianParams {
    AbelianParams {
        orders: vec![(m * m) as u64],
        eta_exps: vec![a_exp * (1 - m as i64)],
        char_exps: vec![a_exp],
        d_sign: 1,
        t0_sign: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_entries() {
        let w = build_cyclic_bb_model(2, 1).unwrap();
        assert_eq!(w.n(), 4);
        assert_eq!(w.get(0, 1), EntryMonomial::unit(7, 0));
        for i in 0..4 {
            assert_eq!(w.get(i, i), EntryMonomial::one());
        }
    }

    #[test]
    fn cyclic_is_abelian_instance() {
        for m in [2usize, 4] {
            let w = build_cyclic_bb_model(m, 1).unwrap();
            let a = build_abelian_model(&cyclic_bb_params(m, 1)).unwrap();
            assert_eq!(a.t0_exp, 0);
            assert!(w.values_equal(&a.matrix), "m = {m}");
        }
    }

    #[test]
    fn eta_constraint() {
        let mut p = AbelianParams::new(vec![4]);
        p.eta_exps = vec![0];
        assert_eq!(build_abelian_model(&p).unwrap_err(), Error::BadEtaChoice { factor: 0 });
    }

    #[test]
    fn theta_orders() {
        for orders in [vec![2u64], vec![4], vec![2, 2], vec![8], vec![3], vec![2, 3]] {
            let model = build_abelian_model(&AbelianParams::new(orders.clone())).unwrap();
            let n = model.matrix.conductor() as i64;
            let size = group_size(&orders) as i64;
            for &t in &model.theta_exps {
                assert_eq!((t * 2 * size).rem_euclid(n), 0);
            }
        }
    }
}
