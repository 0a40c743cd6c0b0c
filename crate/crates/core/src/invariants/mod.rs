//! E(W), μ(W), explicit equivalence maps and decomposability obstructions.

mod equivalence;
mod obstruction;
mod table;

use std::fmt;

use num_rational::Rational64;
use num_traits::One;

use crate::ball::Real;
use crate::error::{Error, Result};
use crate::matrix::{tensor, PermutationSpec, SpinMatrix};
use crate::numtheory::{gcd, lcm};
use crate::scalar::{pack_modulus, Packed, Ring, UParam};
use crate::verify::compute_index;

pub use equivalence::{
    check_hadamard_equivalence, equivalence_map, kind_for_op, psi, psi_congruence, psi_equivalence, r4_decomposition,
    normalized_h4, small_u_equivalence, EquivCheck, EquivKind, PsiReport, R4Param, R4Report, SmallUReport,
};
pub use obstruction::{decomposability_obstructions, ObstructionReport, Rule, ShapeVerdict};
pub use table::{render_table1, table1, table1_row, MuClaim, Table1Row};

/// `scale · |u|^uexp`, a positive real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbsValue {
    pub scale: Rational64,
    pub uexp: i32,
}

impl AbsValue {
    pub fn one() -> Self {
        AbsValue { scale: Rational64::one(), uexp: 0 }
    }

    pub fn mul(self, o: AbsValue) -> AbsValue {
        AbsValue { scale: self.scale * o.scale, uexp: self.uexp + o.uexp }
    }

    /// Certified enclosure; |u| comes from the ring's branch.
    pub fn enclosure(&self, ring: &Ring, prec: u32) -> Real {
        let q = Real::from_ratio(&(*self.scale.numer()).into(), &(*self.scale.denom()).into(), prec);
        if self.uexp == 0 || ring.u != UParam::Formal {
            return q;
        }
        q.mul(&ring.u_pow_embed(self.uexp as i64, prec).re)
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.scale.is_one(), self.uexp) {
            (true, 0) => write!(f, "1"),
            (true, k) => write!(f, "|u|^{k}"),
            (false, 0) => write!(f, "{}", self.scale),
            (false, k) => write!(f, "{}·|u|^{k}", self.scale),
        }
    }
}

/// E(W) = { |W(x,y)| / |W(x,x)| }.
///
/// Values are compared exactly as `(scale, k)` pairs: for r > 4 no nonzero
/// power of |u| is rational, so distinct pairs are distinct reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsValueSet {
    pub ring: Ring,
    pub values: Vec<AbsValue>,
}

impl AbsValueSet {
    fn from_values(ring: Ring, mut values: Vec<AbsValue>) -> Self {
        values.sort();
        values.dedup();
        AbsValueSet { ring, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: &AbsValue) -> bool {
        self.values.binary_search(v).is_ok()
    }

    /// E(A)E(B), element-wise products.
    pub fn product(&self, o: &AbsValueSet) -> AbsValueSet {
        let vals = self.values.iter().flat_map(|a| o.values.iter().map(move |b| a.mul(*b))).collect();
        AbsValueSet::from_values(self.ring, vals)
    }

    /// The set as sorted f64 values.
    pub fn numeric(&self, prec: u32) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().map(|a| a.enclosure(&self.ring, prec).to_f64()).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl fmt::Display for AbsValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn abs_part(p: &Packed, ring: &Ring) -> AbsValue {
    let uexp = if ring.u == UParam::Formal { p.k } else { 0 };
    AbsValue { scale: Rational64::new(p.q.0, p.q.1), uexp }
}

pub fn compute_e(w: &SpinMatrix) -> AbsValueSet {
    let n = w.n();
    let p = w.packed();
    let ring = *w.ring();
    let mut vals = Vec::new();
    for x in 0..n {
        let d = abs_part(&p[x * n + x], &ring);
        for y in 0..n {
            let v = abs_part(&p[x * n + y], &ring);
            vals.push(AbsValue { scale: v.scale / d.scale, uexp: v.uexp - d.uexp });
        }
    }
    AbsValueSet::from_values(ring, vals)
}

/// μ(W): lcm of the finite orders; `value` is `None` when no entry has finite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuValue {
    pub value: Option<u64>,
    /// First entry whose own order equals μ.
    pub attained_by: Option<(usize, usize)>,
}

impl fmt::Display for MuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "infinite"),
        }
    }
}

/// Order of each entry, `None` for entries that are not roots of unity.
pub fn entry_orders(w: &SpinMatrix) -> Vec<Option<u64>> {
    let l = pack_modulus(w.ring(), w.conductor());
    w.packed()
        .iter()
        .map(|p| (p.q == (1, 1) && (p.k == 0 || w.ring().u != UParam::Formal)).then(|| l / gcd(p.z, l)))
        .collect()
}

pub fn compute_mu(w: &SpinMatrix) -> MuValue {
    let orders = entry_orders(w);
    let value = orders.iter().flatten().copied().reduce(lcm);
    let n = w.n();
    let attained_by = value.and_then(|v| orders.iter().position(|o| *o == Some(v)).map(|k| (k / n, k % n)));
    MuValue { value, attained_by }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuTensorBound {
    pub mu_a: u64,
    pub mu_b: u64,
    pub mu_product: u64,
    pub divides: bool,
}

/// μ(A ⊗ B) | lcm(μ(A), μ(B)) when every entry of A is a root of unity and
/// μ(B) is finite.
pub fn mu_tensor_bound(a: &SpinMatrix, b: &SpinMatrix) -> Result<MuTensorBound> {
    if entry_orders(a).iter().any(Option::is_none) {
        return Err(Error::HypothesisUnmet("A has an entry that is not a root of unity".into()));
    }
    let mu_a = compute_mu(a).value.expect("all entries have finite order");
    let mu_b = compute_mu(b).value.ok_or_else(|| Error::HypothesisUnmet("μ(B) is infinite".into()))?;
    let mu_product = compute_mu(&tensor(a, b)?)
        .value
        .ok_or_else(|| Error::ConstructionInvariantViolated("μ(A⊗B) is infinite".into()))?;
    Ok(MuTensorBound { mu_a, mu_b, mu_product, divides: lcm(mu_a, mu_b) % mu_product == 0 })
}

/// Invariants of the equivalence cW^σ (c⁴ = 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub size: usize,
    pub index: Option<u64>,
    pub e: Vec<AbsValue>,
    pub mu: Option<u64>,
    /// Sorted packed entries, minimized over the four scalings by c.
    pub entries: Vec<Packed>,
}

fn plain(w: &SpinMatrix) -> SpinMatrix {
    w.specialized()
}

fn scaled_multiset(w: &SpinMatrix, c: i64) -> Vec<Packed> {
    // c = ζ_4^c over a conductor divisible by 4
    let l = lcm(w.conductor(), 4);
    let w = w.promote(l);
    let cm = crate::scalar::EntryMonomial::unit(c * (l / 4) as i64, 0);
    let mut v = w.scale(cm).packed();
    v.sort();
    v
}

pub fn signature(w: &SpinMatrix) -> Result<Signature> {
    let w = plain(w);
    let index = compute_index(&w).ok().and_then(|r| r.index);
    let entries = (0..4).map(|c| scaled_multiset(&w, c)).min().expect("four scalings");
    let mu = compute_mu(&w);
    Ok(Signature { size: w.n(), index, e: compute_e(&w).values, mu: mu.value, entries })
}

/// `false` means the two matrices are certainly not equivalent.
pub fn invariants_agree(a: &SpinMatrix, b: &SpinMatrix) -> Result<bool> {
    if a.ring().u == UParam::Formal || b.ring().u == UParam::Formal {
        if !a.ring().compatible(b.ring()) {
            return Ok(false);
        }
    }
    Ok(signature(a)? == signature(b)?)
}

/// Exhaustive search for c, σ with c·A^σ = B; only for n ≤ 8.
pub fn find_equivalence(a: &SpinMatrix, b: &SpinMatrix) -> Result<Option<(i64, PermutationSpec)>> {
    const LIMIT: usize = 8;
    if a.n() != b.n() {
        return Ok(None);
    }
    if a.n() > LIMIT {
        return Err(Error::BudgetExceeded { n: a.n(), budget: LIMIT });
    }
    let (a, b) = (plain(a), plain(b));
    if a.ring().u == UParam::Formal && !a.ring().compatible(b.ring()) {
        return Ok(None);
    }
    let l = lcm(lcm(a.conductor(), b.conductor()), 4);
    let (a, b) = (a.promote(l), b.promote(l));
    let target = b.packed();
    let n = a.n();
    for c in 0..4i64 {
        let ac = a.scale(crate::scalar::EntryMonomial::unit(c * (l / 4) as i64, 0));
        let pa = ac.packed();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        if search(&pa, &target, n, 0, &mut perm, &mut used) {
            return Ok(Some((c, PermutationSpec::from_images(perm)?)));
        }
    }
    Ok(None)
}

/// Assign σ(0..k) so that A(σα, σβ) = B(α, β) on the assigned block.
fn search(pa: &[Packed], pb: &[Packed], n: usize, k: usize, perm: &mut [usize], used: &mut [bool]) -> bool {
    if k == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        perm[k] = cand;
        let ok = (0..=k).all(|j| {
            pa[cand * n + perm[j]] == pb[k * n + j] && pa[perm[j] * n + cand] == pb[j * n + k]
        });
        if ok {
            used[cand] = true;
            if search(pa, pb, n, k + 1, perm, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_index_m_model, hadamard, potts, HadamardSource};
    use crate::scalar::EntryMonomial;

    fn sylvester(k: u32) -> SpinMatrix {
        hadamard(&HadamardSource::Sylvester(k)).unwrap()
    }

    #[test]
    fn e_sets() {
        let w = build_index_m_model(2, &sylvester(1), Ring::potts(2), 1).unwrap();
        assert_eq!(compute_e(&w).values, vec![AbsValue::one()]);
        let w = build_index_m_model(2, &sylvester(3), Ring::potts(8), 1).unwrap();
        let e = compute_e(&w);
        let want: Vec<AbsValue> = [-4, -3, 0].iter().map(|&k| AbsValue { scale: Rational64::one(), uexp: k }).collect();
        assert_eq!(e.values, want);
        let num = e.numeric(128);
        let u = (1.0f64 + 2f64.sqrt()).sqrt();
        assert!((u - 1.553774).abs() < 1e-6);
        assert!((num[0] - u.powi(-4)).abs() < 1e-12 && (num[1] - u.powi(-3)).abs() < 1e-12);
    }

    #[test]
    fn mu_values() {
        let w = build_index_m_model(4, &sylvester(2), Ring::potts(4), 1).unwrap();
        assert_eq!(compute_mu(&w).value, Some(32));
        let w = build_index_m_model(2, &sylvester(1), Ring::potts(2), 1).unwrap();
        let mu = compute_mu(&w);
        assert_eq!(mu.value, Some(16));
        assert!(mu.attained_by.is_some());
        let id = SpinMatrix::from_fn(Ring::plain(3), 1, 3, |_, _| EntryMonomial::one()).unwrap();
        assert_eq!(compute_mu(&id).value, Some(1));
        let a = potts(Ring::potts(5)).unwrap();
        assert_eq!(compute_mu(&a).value, None);
    }

    #[test]
    fn tensor_bound_identity() {
        let i = SpinMatrix::from_fn(Ring::plain(2), 1, 2, |_, _| EntryMonomial::one()).unwrap();
        let b = build_index_m_model(2, &sylvester(1), Ring::potts(2), 1).unwrap();
        let t = mu_tensor_bound(&i, &b).unwrap();
        assert_eq!(t.mu_product, t.mu_b);
        assert!(t.divides);
        assert!(mu_tensor_bound(&potts(Ring::potts(5)).unwrap(), &b).is_err());
    }

    #[test]
    fn exhaustive_search() {
        let a = potts(Ring::potts(3)).unwrap();
        let sigma = [2usize, 0, 1];
        let b = a.permuted(&sigma).unwrap().scale(EntryMonomial::signed(-1, 0, 0));
        let (c, p) = find_equivalence(&a, &b).unwrap().unwrap();
        let back = a.permuted(&p.images).unwrap().promote(lcm(a.conductor(), 4));
        let cm = EntryMonomial::unit(c * (back.conductor() / 4) as i64, 0);
        assert!(back.scale(cm).values_equal(&b));
        assert!(invariants_agree(&a, &b).unwrap());
        let h = sylvester(1);
        assert!(find_equivalence(&a, &h).unwrap().is_none());
    }
}
