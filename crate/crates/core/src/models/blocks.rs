//! Potts models and the block-tensor families W_{H,u,a} and W′_{H,u,b}.

use crate::error::{Error, Result};
use crate::matrix::{Labels, SpinMatrix};
use crate::numtheory::gcd;
use crate::scalar::{EntryMonomial, Ring};

use super::hadamard::signs;

/// A_u = u³I − u⁻¹(J − I).
pub fn potts(ring: Ring) -> Result<SpinMatrix> {
    if !ring.has_u() {
        return Err(Error::BadParameters("Potts model needs a ring with u".into()));
    }
    let r = ring.r as usize;
    SpinMatrix::from_fn(ring, 1, r, |x, y| potts_entry(x, y)).map(|w| w.with_family("potts"))
}

fn potts_entry(x: usize, y: usize) -> EntryMonomial {
    if x == y {
        EntryMonomial::unit(0, 3)
    } else {
        EntryMonomial::signed(-1, 0, -1)
    }
}

/// ε(i, j) = (i−j)² + m(i−j) on representatives in {0..m−1}.
pub fn epsilon(i: usize, j: usize, m: usize) -> i64 {
    let d = i as i64 - j as i64;
    d * d + m as i64 * d
}

/// δ(i, j) = (i−j)².
pub fn delta(i: usize, j: usize) -> i64 {
    let d = i as i64 - j as i64;
    d * d
}

/// Which of A_u, H, Hᵀ sits in block (i, j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VKind {
    Potts,
    H,
    HT,
}

pub fn v_kind(i: usize, j: usize) -> VKind {
    match (i % 2, j % 2) {
        (a, b) if a == b => VKind::Potts,
        (0, 1) => VKind::H,
        _ => VKind::HT,
    }
}

fn v_entry(kind: VKind, h: &[Vec<i8>], x: usize, y: usize) -> EntryMonomial {
    match kind {
        VKind::Potts => potts_entry(x, y),
        VKind::H => EntryMonomial::signed(h[x][y] as i64, 0, 0),
        VKind::HT => EntryMonomial::signed(h[y][x] as i64, 0, 0),
    }
}

fn check_common(m: usize, h: &SpinMatrix, ring: &Ring) -> Result<Vec<Vec<i8>>> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::BadParameters(format!("m = {m} must be even and positive")));
    }
    if !ring.has_u() {
        return Err(Error::BadParameters("the Potts blocks need a ring with u".into()));
    }
    if ring.r as usize != h.n() {
        return Err(Error::BadParameters(format!("Potts size r = {} differs from Hadamard order {}", ring.r, h.n())));
    }
    signs(h)
}

/// W_{H,u,a} with a = ζ_{2m²}^{a_exp}.
pub fn build_index_m_model(m: usize, h: &SpinMatrix, ring: Ring, a_exp: i64) -> Result<SpinMatrix> {
    let hs = check_common(m, h, &ring)?;
    let big = 2 * (m * m) as u64;
    if gcd(a_exp.rem_euclid(big as i64) as u64, big) != 1 {
        return Err(Error::BadParameters(format!("a = ζ{big}^{a_exp} is not primitive")));
    }
    let r = h.n();
    let labels = Labels { m, r };
    let mi = m as i64;
    let w = SpinMatrix::from_fn(ring, big, labels.size(), |row, col| {
        let (i, l, x) = labels.split(row);
        let (j, lp, y) = labels.split(col);
        let e = 2 * mi * (l as i64 - lp as i64) * (i as i64 - j as i64) + epsilon(i, j, m);
        let v = v_entry(v_kind(i, j), &hs, x, y);
        EntryMonomial { zexp: a_exp * e + v.zexp, ..v }
    })?;
    Ok(w.with_labels(labels)?.with_family("whua"))
}

/// W′_{H,u,b} with η = ζ_m^{eta_exp} primitive and b = ζ_{m²}^{b_exp}.
pub fn build_symmetric_model(m: usize, h: &SpinMatrix, ring: Ring, eta_exp: i64, b_exp: i64) -> Result<SpinMatrix> {
    let hs = check_common(m, h, &ring)?;
    if gcd(eta_exp.rem_euclid(m as i64) as u64, m as u64) != 1 {
        return Err(Error::BadParameters(format!("η = ζ{m}^{eta_exp} is not primitive")));
    }
    let big = (m * m) as u64;
    let r = h.n();
    let labels = Labels { m, r };
    let mi = m as i64;
    let w = SpinMatrix::from_fn(ring, big, labels.size(), |row, col| {
        let (i, l, x) = labels.split(row);
        let (j, lp, y) = labels.split(col);
        let e = eta_exp * mi * (l as i64 - lp as i64) * (i as i64 - j as i64) + b_exp * delta(i, j);
        let v = v_entry(v_kind(i, j), &hs, x, y);
        EntryMonomial { zexp: e + v.zexp, ..v }
    })?;
    Ok(w.with_labels(labels)?.with_family("wprime"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::hadamard::{hadamard, HadamardSource};

    #[test]
    fn potts_shapes() {
        let a = potts(Ring::potts(1)).unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.get(0, 0), EntryMonomial::unit(0, 3));
        let a = potts(Ring::potts(2)).unwrap();
        assert_eq!(a.get(0, 1), EntryMonomial::signed(-1, 0, -1));
    }

    #[test]
    fn representatives_are_integers() {
        assert_eq!(epsilon(0, 1, 2), -1);
        assert_eq!(epsilon(1, 0, 2), 3);
        assert_eq!(delta(0, 3), 9);
    }

    #[test]
    fn m2_r1_entries() {
        let h = hadamard(&HadamardSource::Sylvester(0)).unwrap();
        let w = build_index_m_model(2, &h, Ring::potts(1), 1).unwrap();
        assert_eq!(w.n(), 4);
        let labels = w.labels().unwrap();
        for row in 0..4 {
            for col in 0..4 {
                let (i, l, _) = labels.split(row);
                let (j, lp, _) = labels.split(col);
                let e = w.get(row, col);
                let sign = if (l + lp) % 2 == 1 && (i + j) % 2 == 1 { -1 } else { 1 };
                let upow = if i == j { 3 } else { 0 };
                let expect = EntryMonomial::signed(sign, epsilon(i, j, 2), upow);
                let expect = SpinMatrix::from_fn(Ring::potts(1), 8, 1, |_, _| expect).unwrap();
                let got = SpinMatrix::from_fn(Ring::potts(1), 8, 1, |_, _| e).unwrap();
                assert!(got.values_equal(&expect), "({row}, {col})");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let h = hadamard(&HadamardSource::Sylvester(1)).unwrap();
        assert!(build_index_m_model(3, &h, Ring::potts(2), 1).is_err());
        assert!(build_index_m_model(2, &h, Ring::potts(2), 2).is_err());
        assert!(build_index_m_model(2, &h, Ring::potts(4), 1).is_err());
        assert!(build_symmetric_model(4, &h, Ring::potts(2), 2, 1).is_err());
    }
}
