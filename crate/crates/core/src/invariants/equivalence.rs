//! Explicit equivalences between the block models.

use crate::error::{Error, Result};
use crate::matrix::{tensor, Labels, PermutationSpec, SpinMatrix};
use crate::models::{build_cyclic_bb_model, build_index_m_model, build_symmetric_model, HadamardOp};
use crate::numtheory::lcm;
use crate::scalar::{EntryMonomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivKind {
    /// H₂(x, π(y)) = H₁(x, y); acts on odd i.
    ColPerm(Vec<usize>),
    /// H₂(π(x), y) = H₁(x, y); acts on even i.
    RowPerm(Vec<usize>),
    /// Column y₁ of H negated; shifts ℓ by m/2 on odd i.
    ColNegate(usize),
    /// Row x₁ of H negated; shifts ℓ by m/2 on even i.
    RowNegate(usize),
}

pub fn kind_for_op(op: &HadamardOp, r: usize) -> EquivKind {
    match op {
        HadamardOp::NegateRow(x) => EquivKind::RowNegate(*x),
        HadamardOp::NegateCol(y) => EquivKind::ColNegate(*y),
        _ => match op.as_permutation(r).expect("permutation move") {
            (true, p) => EquivKind::RowPerm(p),
            (false, p) => EquivKind::ColPerm(p),
        },
    }
}

/// Permutation σ of X = Z_m × Z_m × Y with W_{H₂}^σ = W_{H₁}.
pub fn equivalence_map(kind: &EquivKind, m: usize, r: usize) -> Result<PermutationSpec> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::BadParameters(format!("m = {m} must be even")));
    }
    let labels = Labels { m, r };
    let parity = match kind {
        EquivKind::ColPerm(_) | EquivKind::ColNegate(_) => 1,
        EquivKind::RowPerm(_) | EquivKind::RowNegate(_) => 0,
    };
    match kind {
        EquivKind::ColPerm(p) | EquivKind::RowPerm(p) => {
            if p.len() != r {
                return Err(Error::BadParameters(format!("π has length {}, expected {r}", p.len())));
            }
            PermutationSpec::from_images(p.clone())?;
        }
        EquivKind::ColNegate(k) | EquivKind::RowNegate(k) => {
            if *k >= r {
                return Err(Error::BadParameters(format!("index {k} out of range for r = {r}")));
            }
        }
    }
    let images = (0..labels.size())
        .map(|idx| {
            let (i, l, x) = labels.split(idx);
            if i % 2 != parity {
                return idx;
            }
            match kind {
                EquivKind::ColPerm(p) | EquivKind::RowPerm(p) => labels.index(i, l, p[x]),
                EquivKind::ColNegate(k) | EquivKind::RowNegate(k) => {
                    let l = if x == *k { (l + m / 2) % m } else { l };
                    labels.index(i, l, x)
                }
            }
        })
        .collect();
    PermutationSpec::from_images(images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCheck {
    pub permutation: PermutationSpec,
    /// First (row, col) where W₂^σ and W₁ differ.
    pub first_difference: Option<(usize, usize)>,
}

impl EquivCheck {
    pub fn holds(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// Check W₂^σ = W₁ entrywise, where W₂ is built from the transformed Hadamard matrix.
pub fn check_hadamard_equivalence(w1: &SpinMatrix, w2: &SpinMatrix, kind: &EquivKind) -> Result<EquivCheck> {
    let labels = w1.labels().ok_or_else(|| Error::BadParameters("W₁ carries no (i, ℓ, x) labels".into()))?;
    if w2.labels() != Some(labels) {
        return Err(Error::ParameterMismatch("W₁ and W₂ have different labels".into()));
    }
    let permutation = equivalence_map(kind, labels.m, labels.r)?;
    let first_difference = w2.permuted(&permutation.images)?.first_difference(w1)?;
    Ok(EquivCheck { permutation, first_difference })
}

fn trivial_hadamard() -> SpinMatrix {
    SpinMatrix::from_fn(Ring::plain(1), 1, 1, |_, _| EntryMonomial::one()).expect("1×1")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiReport {
    pub m: usize,
    pub t: i64,
    /// ψ(i, ℓ) indexed by i·m + ℓ.
    pub psi: Vec<usize>,
    pub bijective: bool,
    /// Exponent of a′ = a^{1 + 8k²t} over ζ_{2m²}.
    pub a_prime_exp: i64,
    pub first_difference: Option<(usize, usize)>,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.first_difference.is_none()
    }
}

/// ψ(i, ℓ) = (4k²t + 1)i + 4kℓ mod m².
pub fn psi(m: usize, t: i64, i: usize, l: usize) -> usize {
    let k = (m / 4) as i64;
    let n = (m * m) as i64;
    ((4 * k * k * t + 1) * i as i64 + 4 * k * l as i64).rem_euclid(n) as usize
}

/// The cyclic model pulled back along ψ equals W_{(1),1,a′}.
pub fn psi_equivalence(m: usize, t: i64, a_exp: i64) -> Result<PsiReport> {
    if m == 0 || m % 4 != 0 {
        return Err(Error::BadParameters(format!("m = {m} must be a multiple of 4")));
    }
    let k = (m / 4) as i64;
    let big = 2 * (m * m) as i64;
    let a_prime_exp = (a_exp * (1 + 8 * k * k * t)).rem_euclid(big);
    let map: Vec<usize> = (0..m * m).map(|idx| psi(m, t, idx / m, idx % m)).collect();
    let mut seen = vec![false; m * m];
    map.iter().for_each(|&v| seen[v] = true);
    let bijective = seen.iter().all(|&s| s);
    let w1 = build_index_m_model(m, &trivial_hadamard(), Ring::potts_branch(1, 0)?, a_prime_exp)?.specialized();
    let cyc = build_cyclic_bb_model(m, a_exp)?;
    let first_difference = if bijective { cyc.permuted(&map)?.first_difference(&w1)? } else { None };
    Ok(PsiReport { m, t, psi: map, bijective, a_prime_exp, first_difference })
}

/// Both sides of the congruence behind ψ, reduced mod 2m².
pub fn psi_congruence(m: usize, t: i64, (i, l): (usize, usize), (j, lp): (usize, usize)) -> (i64, i64) {
    let k = (m / 4) as i64;
    let modulus = 32 * k * k;
    let d = psi(m, t, j, lp) as i64 - psi(m, t, i, l) as i64;
    let lhs = d * (d - m as i64);
    let (di, dl) = (i as i64 - j as i64, l as i64 - lp as i64);
    let rhs = (8 * k * k * t + 1) * (8 * k * dl * di + di * di + 4 * k * di);
    (lhs.rem_euclid(modulus), rhs.rem_euclid(modulus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallUReport {
    pub u_exp: i64,
    /// u·W_{(1),1,au³} = W_{(1),u,a}.
    pub literal: bool,
    /// u³·W_{(1),1,au} = W_{(1),u,a}.
    pub corrected: bool,
    /// W_{(1),−1,a} = −W_{(1),1,−a}, only for u = −1.
    pub negation: Option<bool>,
    /// W_{(1),1,au³} and W_{(1),1,au} are both ψ-pullbacks of the cyclic model.
    pub via_cyclic: bool,
}

/// W_{(1),u,a} against the scalar identities relating it to u = 1, for u = ζ₄^u_exp.
///
/// For u = ±i the diagonal of W_{(1),u,a} is u³ while that of u·W_{(1),1,au³}
/// is u, so `literal` fails there and `corrected` is the identity that holds.
pub fn small_u_equivalence(m: usize, u_exp: i64, a_exp: i64) -> Result<SmallUReport> {
    if m == 0 || m % 4 != 0 {
        return Err(Error::BadParameters(format!("m = {m} must be a multiple of 4")));
    }
    let e = u_exp.rem_euclid(4);
    let big = 2 * (m * m) as i64;
    let h = trivial_hadamard();
    let model = |ue: i64, ae: i64| -> Result<SpinMatrix> {
        Ok(build_index_m_model(m, &h, Ring::potts_branch(1, ue)?, ae)?.specialized())
    };
    let lhs = model(e, a_exp)?;
    let l = lcm(lhs.conductor(), 4);
    let quarter = big / 4;
    let zeta4 = |k: i64| EntryMonomial::unit(k.rem_euclid(4) * (l / 4) as i64, 0);
    let literal = model(0, a_exp + 3 * e * quarter)?.promote(l).scale(zeta4(e)).values_equal(&lhs);
    let corrected = model(0, a_exp + e * quarter)?.promote(l).scale(zeta4(3 * e)).values_equal(&lhs);
    let negation = if e == 2 {
        let rhs = model(0, a_exp + big / 2)?.scale(EntryMonomial::signed(-1, 0, 0));
        Some(rhs.values_equal(&lhs))
    } else {
        None
    };
    // a^{8k²t} = ζ₄^{a_exp·t}
    let pulls_back = |power: i64| -> Result<bool> {
        let t = (power * e * a_exp).rem_euclid(4);
        let rep = psi_equivalence(m, t, a_exp)?;
        Ok(rep.holds() && rep.a_prime_exp == (a_exp + power * e * quarter).rem_euclid(big))
    };
    let via_cyclic = pulls_back(3)? && pulls_back(1)?;
    Ok(SmallUReport { u_exp: e, literal, corrected, negation, via_cyclic })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R4Param {
    A { a_exp: i64 },
    B { eta_exp: i64, b_exp: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R4Report {
    /// A_u = u³H.
    pub potts_is_u3h: bool,
    /// W = W_(1) ⊗ H with x the fast index.
    pub literal: bool,
    /// K^P = W for K = H ⊗ W_(1).
    pub relabeled: bool,
    pub relabel: PermutationSpec,
}

impl R4Report {
    pub fn holds(&self) -> bool {
        self.potts_is_u3h && self.literal && self.relabeled
    }
}

/// The order-4 Hadamard matrix 2I − J.
pub fn normalized_h4() -> SpinMatrix {
    SpinMatrix::from_fn(Ring::plain(4), 1, 4, |x, y| EntryMonomial::signed(if x == y { 1 } else { -1 }, 0, 0))
        .expect("4×4")
        .with_family("hadamard")
}

/// For r = 4 the block model splits off H.
pub fn r4_decomposition(m: usize, u_exp: i64, param: R4Param) -> Result<R4Report> {
    let h = normalized_h4();
    let ring = Ring::potts_branch(4, u_exp)?;
    let ring1 = Ring::potts_branch(1, u_exp)?;
    let one = trivial_hadamard();
    let (w, w1) = match param {
        R4Param::A { a_exp } => {
            (build_index_m_model(m, &h, ring, a_exp)?, build_index_m_model(m, &one, ring1, a_exp)?)
        }
        R4Param::B { eta_exp, b_exp } => (
            build_symmetric_model(m, &h, ring, eta_exp, b_exp)?,
            build_symmetric_model(m, &one, ring1, eta_exp, b_exp)?,
        ),
    };
    let w = w.specialized();
    let w1 = w1.specialized();

    let potts = crate::models::potts(ring)?.specialized();
    let u3 = EntryMonomial::unit(3 * u_exp.rem_euclid(4) * (potts.conductor() / 4) as i64, 0);
    let potts_is_u3h = h.promote(potts.conductor()).scale(u3).values_equal(&potts);

    let literal = tensor(&w1, &h)?.values_equal(&w);
    let r = 4;
    let mm = m * m;
    let relabel = PermutationSpec::from_images((0..mm * r).map(|idx| (idx % r) * mm + idx / r).collect())?;
    let relabeled = tensor(&h, &w1)?.permuted(&relabel.images)?.values_equal(&w);
    Ok(R4Report { potts_is_u3h, literal, relabeled, relabel })
}
