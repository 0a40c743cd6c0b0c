//! Mechanical replay of the tensor-decomposition obstruction for W_{H,u,a}
//! with r > 4 and m = 2^s.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{compute_e, compute_mu, AbsValue, AbsValueSet, MuValue};
use crate::ball::Real;
use crate::error::{Error, Result};
use crate::matrix::SpinMatrix;
use crate::models::jaeger_model;
use crate::scalar::UParam;

/// The fact each verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Shapes of |E(A)|, |E(B)| when |E(A)E(B)| = 3.
    ProductSetShapes,
    /// E of the block models: {1} for r ≤ 4, three values otherwise.
    AbsoluteValueSet,
    /// The block model with r > 4 contains a primitive 2m²-th root.
    RootOfUnityOrders,
    /// μ(A ⊗ B) divides lcm(μ(A), μ(B)).
    TensorOrderBound,
    /// The summary of sizes, indices, μ and E per family.
    SummaryTable,
    /// u⁴ > 0 for real-branch Potts parameters.
    PottsSign,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::ProductSetShapes => "product-set-shapes",
            Rule::AbsoluteValueSet => "absolute-value-set",
            Rule::RootOfUnityOrders => "root-of-unity-orders",
            Rule::TensorOrderBound => "tensor-order-bound",
            Rule::SummaryTable => "summary-table",
            Rule::PottsSign => "potts-sign",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeVerdict {
    pub shape: String,
    pub rule: Rule,
    pub excluded: bool,
    pub detail: String,
}

/// One admissible (s′, n₁) of the single-factor case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub s_prime: u32,
    pub n1: u32,
    /// Exponents of the four divisibility bounds.
    pub exps: [u32; 4],
    pub max: u32,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub target: String,
    pub m: usize,
    pub r: u64,
    pub s: u32,
    pub mu: Option<u64>,
    pub e: Vec<String>,
    pub shapes: Vec<ShapeVerdict>,
    pub bounds: Vec<BoundRow>,
    pub contradiction: bool,
    pub trace: Vec<String>,
}

const PREC: u32 = 256;

fn enclose(v: &AbsValue, e: &AbsValueSet) -> Real {
    v.enclosure(&e.ring, PREC)
}

/// Certainly different: exact pairs differ and the enclosures are disjoint.
fn distinct(a: &AbsValue, b: &AbsValue, e: &AbsValueSet) -> bool {
    a != b && enclose(a, e).disjoint(&enclose(b, e))
}

/// Is E of the form {1, β, β²} or {1, β, β⁻¹}?
fn two_factor_form(e: &AbsValueSet) -> (bool, bool) {
    let rest: Vec<&AbsValue> = e.values.iter().filter(|v| **v != AbsValue::one()).collect();
    if rest.len() != 2 {
        return (false, false);
    }
    let (b, c) = (rest[0], rest[1]);
    let geometric = !distinct(&b.mul(*b), c, e) || !distinct(&c.mul(*c), b, e);
    let symmetric = !distinct(&b.mul(*c), &AbsValue::one(), e);
    (geometric, symmetric)
}

/// E sets over possibly different rings, compared by certified enclosure.
fn sets_distinct(a: &AbsValueSet, b: &AbsValueSet) -> bool {
    let ea: Vec<Real> = a.values.iter().map(|v| enclose(v, a)).collect();
    let eb: Vec<Real> = b.values.iter().map(|v| enclose(v, b)).collect();
    ea.iter().any(|x| eb.iter().all(|y| x.disjoint(y))) || eb.iter().any(|y| ea.iter().all(|x| x.disjoint(y)))
}

pub fn decomposability_obstructions(w: &SpinMatrix) -> Result<ObstructionReport> {
    let labels = w.labels().ok_or_else(|| Error::NotApplicable("model carries no (i, ℓ, x) labels".into()))?;
    if w.family() != Some("whua") {
        return Err(Error::NotApplicable(format!("family {} is not the index-m block family", w.family().unwrap_or("?"))));
    }
    let r = w.ring().r;
    if r <= 4 || w.ring().u != UParam::Formal {
        return Err(Error::NotApplicable(format!("r = {r} ≤ 4")));
    }
    let m = labels.m;
    if !m.is_power_of_two() || m < 2 {
        return Err(Error::NotApplicable(format!("m = {m} is not a power of 2")));
    }
    let s = m.trailing_zeros();
    let e = compute_e(w);
    let mu: MuValue = compute_mu(w);
    let mut trace = Vec::new();
    let mut shapes = Vec::new();
    trace.push(format!("E(W) = {e}, |E(W)| = {}", e.len()));
    trace.push(format!("μ(W) = {mu}"));

    let target_mu = 1u64 << (2 * s + 1);
    let mu_ok = mu.value == Some(target_mu);
    shapes.push(ShapeVerdict {
        shape: "W itself".into(),
        rule: Rule::RootOfUnityOrders,
        excluded: false,
        detail: format!("μ(W) = {mu}, expected 2m² = 2^{} = {target_mu}: {}", 2 * s + 1, if mu_ok { "ok" } else { "MISMATCH" }),
    });

    let three = e.len() == 3;
    shapes.push(ShapeVerdict {
        shape: "(|E(W_i)|) other than (1,…,1,2,2) or (1,…,1,3)".into(),
        rule: Rule::ProductSetShapes,
        excluded: three,
        detail: format!("|E(W)| = {} so only (2,2) or (3) remain beside ones", e.len()),
    });

    let (geometric, symmetric) = two_factor_form(&e);
    shapes.push(ShapeVerdict {
        shape: "W₁ ⊗ W₂ ⊗ W₃, E(W₁) = {1}, |E(W₂)| = |E(W₃)| = 2".into(),
        rule: Rule::ProductSetShapes,
        excluded: three && !geometric && !symmetric,
        detail: format!(
            "E(W) {} of the form {{1,β,β²}}; {} of the form {{1,β,β⁻¹}}",
            if geometric { "is" } else { "is not" },
            if symmetric { "is" } else { "is not" }
        ),
    });

    let ej = compute_e(&jaeger_model()?);
    let not_jaeger = sets_distinct(&e, &ej);
    shapes.push(ShapeVerdict {
        shape: "W₁ ⊗ W_J, E(W₁) = {1}".into(),
        rule: Rule::SummaryTable,
        excluded: not_jaeger,
        detail: format!("E(W_J) = {ej} (τ-ring) vs E(W) = {e}"),
    });

    shapes.push(ShapeVerdict {
        shape: "W₁ ⊗ W₂, W₂ a block model with r′ ≤ 4".into(),
        rule: Rule::AbsoluteValueSet,
        excluded: three,
        detail: "block models with r′ ≤ 4 have |u′| = 1, so |E(W₂)| = 1 ≠ 3".into(),
    });

    // |u′| = |u| with u′⁴ > 0 forces r′ = u⁴ + u⁻⁴ + 2 = r.
    let u4 = w.ring().u_pow_embed(4, PREC).re;
    let u4i = w.ring().u_pow_embed(-4, PREC).re;
    let r_back = u4.add(&u4i).add(&Real::from_i64(2, PREC));
    let r_fixed = u4.is_positive() && !r_back.disjoint(&Real::from_i64(r as i64, PREC));
    shapes.push(ShapeVerdict {
        shape: "W₁ ⊗ W₂, W₂ a block model with r′ > 4, r′ ≠ r".into(),
        rule: Rule::PottsSign,
        excluded: r_fixed,
        detail: format!("u⁴ > 0 and u⁴ + u⁻⁴ + 2 ∋ {r}, so r′ = r"),
    });

    let pairs: Vec<(u32, u32)> =
        (1..s).flat_map(|sp| (0..=2 * (s - sp)).map(move |n1| (sp, n1))).collect();
    let bounds: Vec<BoundRow> = pairs
        .par_iter()
        .map(|&(sp, n1)| {
            let exps = [n1 + 1, 4, 2 * (s - sp) - n1 + 1, 2 * sp + 1];
            let max = *exps.iter().max().expect("four bounds");
            BoundRow { s_prime: sp, n1, exps, max, within: max <= 2 * s }
        })
        .collect();
    let all_within = bounds.iter().all(|b| b.within);
    let mu_not_dividing = mu.value.is_some_and(|v| (1u64 << (2 * s)) % v != 0);
    for b in &bounds {
        trace.push(format!(
            "s′ = {}, n₁ = {}: μ(W) | lcm(2^{}, 2^{}, 2^{}, 2^{}) = 2^{} {} 2^{}",
            b.s_prime,
            b.n1,
            b.exps[0],
            b.exps[1],
            b.exps[2],
            b.exps[3],
            b.max,
            if b.within { "≤" } else { ">" },
            2 * s
        ));
    }
    let detail = if bounds.is_empty() {
        format!("no s′ with 0 < s′ < s = {s}")
    } else {
        format!("every bound divides 2^{} = {}, but μ(W) = {mu}", 2 * s, 1u64 << (2 * s))
    };
    shapes.push(ShapeVerdict {
        shape: "W₁ ⊗ W₂, W₂ a block model with r′ = r, size 2^{2s′}r".into(),
        rule: Rule::TensorOrderBound,
        excluded: all_within && mu_not_dividing,
        detail,
    });

    let contradiction = mu_ok && shapes.iter().skip(1).all(|v| v.excluded);
    if contradiction {
        trace.push(format!("μ(W) | 2^{} contradicts μ(W) = 2^{}", 2 * s, 2 * s + 1));
    }
    Ok(ObstructionReport {
        target: format!("whua m={m} r={r}"),
        m,
        r,
        s,
        mu: mu.value,
        e: e.values.iter().map(|v| v.to_string()).collect(),
        shapes,
        bounds,
        contradiction,
        trace,
    })
}

impl ObstructionReport {
    pub fn render(&self) -> String {
        let mut out = format!("{}: s = {}, μ(W) = {}, E(W) = {{{}}}\n", self.target, self.s, self.mu.map_or("infinite".into(), |v| v.to_string()), self.e.join(", "));
        for v in &self.shapes {
            out += &format!("  [{}] {} :: {} ({})\n", if v.excluded { "excluded" } else { "open" }, v.shape, v.rule, v.detail);
        }
        for line in &self.trace {
            out += &format!("  {line}\n");
        }
        out += &format!("  contradiction: {}\n", self.contradiction);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_index_m_model, build_symmetric_model, hadamard, HadamardSource};
    use crate::scalar::Ring;

    #[test]
    fn r8_m4() {
        let h = hadamard(&HadamardSource::Sylvester(3)).unwrap();
        let w = build_index_m_model(4, &h, Ring::potts(8), 1).unwrap();
        let rep = decomposability_obstructions(&w).unwrap();
        assert_eq!(rep.mu, Some(32));
        assert!(rep.contradiction, "{}", rep.render());
        assert_eq!(rep.bounds.len(), 3);
    }

    #[test]
    fn not_applicable() {
        let h = hadamard(&HadamardSource::Sylvester(2)).unwrap();
        let w = build_index_m_model(4, &h, Ring::potts(4), 1).unwrap();
        assert!(matches!(decomposability_obstructions(&w), Err(Error::NotApplicable(_))));
        let h = hadamard(&HadamardSource::Sylvester(3)).unwrap();
        let w = build_symmetric_model(4, &h, Ring::potts(8), 1, 1).unwrap();
        assert!(matches!(decomposability_obstructions(&w), Err(Error::NotApplicable(_))));
    }
}
