//! Summary rows (index, size, μ, E) recomputed per instance.

use serde::Serialize;

use super::{compute_e, compute_mu, AbsValue};
use crate::error::Result;
use crate::models::{build_index_m_model, build_symmetric_model, hadamard, Family, HadamardSource};
use crate::numtheory::lcm;
use crate::scalar::Ring;
use crate::verify::compute_index;

/// What the summary states about μ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuClaim {
    Equals(u64),
    Divides(u64),
}

impl MuClaim {
    pub fn holds(&self, mu: Option<u64>) -> bool {
        match (*self, mu) {
            (MuClaim::Equals(v), Some(mu)) => mu == v,
            (MuClaim::Divides(v), Some(mu)) => v % mu == 0,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub family: String,
    pub m: usize,
    pub r: u64,
    pub index: Option<u64>,
    pub size: usize,
    pub mu: Option<u64>,
    pub e: Vec<String>,
    pub e_numeric: Vec<f64>,
    pub expected_index: u64,
    pub mu_claim: MuClaim,
    pub expected_e: Vec<String>,
    pub matches: bool,
}

fn expected_e(r: u64) -> Vec<AbsValue> {
    let one = num_rational::Rational64::from_integer(1);
    if r > 4 {
        [-4, -3, 0].iter().map(|&k| AbsValue { scale: one, uexp: k }).collect()
    } else {
        vec![AbsValue::one()]
    }
}

/// One row with a = ζ_{2m²}, η = ζ_m, b = ζ_{m²} and the default u and H.
pub fn table1_row(family: Family, m: usize, r: u64) -> Result<Table1Row> {
    let h = hadamard(&HadamardSource::default_for(r)?)?;
    let ring = Ring::potts(r);
    let mm = (m * m) as u64;
    let (w, expected_index, mu_claim) = match family {
        Family::Whua => {
            let claim = if r == 2 { MuClaim::Equals(lcm(2 * mm, 16)) } else { MuClaim::Equals(2 * mm) };
            (build_index_m_model(m, &h, ring, 1)?, m as u64, claim)
        }
        _ => {
            let claim = if r == 2 { MuClaim::Divides(lcm(mm, 16)) } else { MuClaim::Divides(mm) };
            (build_symmetric_model(m, &h, ring, 1, 1)?, 1, claim)
        }
    };
    let index = compute_index(&w)?.index;
    let mu = compute_mu(&w).value;
    let e = compute_e(&w);
    let want = expected_e(r);
    let matches = index == Some(expected_index) && mu_claim.holds(mu) && e.values == want;
    Ok(Table1Row {
        family: family.name().into(),
        m,
        r,
        index,
        size: w.n(),
        mu,
        e: e.values.iter().map(|v| v.to_string()).collect(),
        e_numeric: e.numeric(128),
        expected_index,
        mu_claim,
        expected_e: want.iter().map(|v| v.to_string()).collect(),
        matches,
    })
}

pub fn table1(ms: &[usize], rs: &[u64]) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for family in [Family::Whua, Family::Wprime] {
        for &r in rs {
            for &m in ms {
                rows.push(table1_row(family, m, r)?);
            }
        }
    }
    Ok(rows)
}

pub fn render_table1(rows: &[Table1Row]) -> String {
    let mut out = format!("{:<8} {:>3} {:>5} {:>6} {:>4} {:>8}  {:<28} {}\n", "W", "m", "index", "size", "r", "μ(W)", "E(W)", "match");
    for row in rows {
        let claim = match row.mu_claim {
            MuClaim::Equals(v) => format!("= {v}"),
            MuClaim::Divides(v) => format!("| {v}"),
        };
        out += &format!(
            "{:<8} {:>3} {:>5} {:>6} {:>4} {:>8}  {:<28} {} (μ {claim})\n",
            row.family,
            row.m,
            row.index.map_or("-".into(), |v| v.to_string()),
            row.size,
            row.r,
            row.mu.map_or("inf".into(), |v| v.to_string()),
            format!("{{{}}}", row.e.join(", ")),
            if row.matches { "yes" } else { "NO" },
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        for row in table1(&[2], &[1, 2, 4]).unwrap() {
            assert!(row.matches, "{row:?}");
        }
    }
}
