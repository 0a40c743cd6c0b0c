//! Constructors for every spin-model family.

pub mod abelian;
pub mod blocks;
pub mod hadamard;
pub mod higman_sims;

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::SpinMatrix;
use crate::scalar::Ring;

pub use abelian::{build_abelian_model, build_cyclic_bb_model, cyclic_bb_params, AbelianModel, AbelianParams};
pub use blocks::{build_index_m_model, build_symmetric_model, potts};
pub use hadamard::{hadamard, hadamard_transform, HadamardOp, HadamardSource};
pub use higman_sims::{higman_sims_graph, jaeger_model, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Potts,
    Hadamard,
    /// W_{H,u,a}, index m.
    Whua,
    /// W′_{H,u,b}, symmetric.
    Wprime,
    Abelian,
    CyclicBb,
    HigmanSims,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Potts => "potts",
            Family::Hadamard => "hadamard",
            Family::Whua => "whua",
            Family::Wprime => "wprime",
            Family::Abelian => "abelian",
            Family::CyclicBb => "cyclic-bb",
            Family::HigmanSims => "higman-sims",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "potts" => Family::Potts,
            "hadamard" => Family::Hadamard,
            "whua" | "index-m" => Family::Whua,
            "wprime" | "symmetric" => Family::Wprime,
            "abelian" => Family::Abelian,
            "cyclic-bb" => Family::CyclicBb,
            "higman-sims" => Family::HigmanSims,
            _ => return Err(Error::BadParameters(format!("unknown family '{s}'"))),
        })
    }
}

/// Everything needed to build one model; unused fields are ignored per family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub family: Family,
    pub m: Option<usize>,
    pub r: Option<u64>,
    pub hadamard: Option<HadamardSource>,
    pub a_exp: i64,
    pub b_exp: i64,
    pub eta_exp: i64,
    /// Exponent selecting u for r ≤ 4; `None` takes the default branch.
    pub u_exp: Option<i64>,
    pub group: Vec<u64>,
    pub group_eta: Option<Vec<i64>>,
    pub group_chars: Option<Vec<i64>>,
    pub d_sign: i8,
    pub t0_sign: i8,
}

impl ModelSpec {
    pub fn new(family: Family) -> Self {
        ModelSpec {
            family,
            m: None,
            r: None,
            hadamard: None,
            a_exp: 1,
            b_exp: 1,
            eta_exp: 1,
            u_exp: None,
            group: Vec::new(),
            group_eta: None,
            group_chars: None,
            d_sign: 1,
            t0_sign: 1,
        }
    }

    fn need_m(&self) -> Result<usize> {
        self.m.ok_or_else(|| Error::BadParameters(format!("family {} needs m", self.family.name())))
    }

    fn need_r(&self) -> Result<u64> {
        if let Some(r) = self.r {
            return Ok(r);
        }
        if let Some(h) = &self.hadamard {
            return Ok(h.order()? as u64);
        }
        Err(Error::BadParameters(format!("family {} needs r", self.family.name())))
    }

    pub fn ring(&self) -> Result<Ring> {
        let r = self.need_r()?;
        match self.u_exp {
            Some(e) => Ring::potts_branch(r, e),
            None => Ok(Ring::potts(r)),
        }
    }

    fn hadamard_matrix(&self) -> Result<SpinMatrix> {
        let r = self.need_r()?;
        let src = match &self.hadamard {
            Some(s) => s.clone(),
            None => HadamardSource::default_for(r)?,
        };
        let h = hadamard(&src)?;
        if h.n() as u64 != r {
            return Err(Error::BadParameters(format!("Hadamard source {src} has order {}, expected {r}", h.n())));
        }
        Ok(h)
    }

    /// Number of rows of the model this spec builds.
    pub fn size(&self) -> Result<usize> {
        Ok(match self.family {
            Family::Potts | Family::Hadamard => self.need_r()? as usize,
            Family::Whua | Family::Wprime => {
                let m = self.need_m()?;
                m * m * self.need_r()? as usize
            }
            Family::Abelian => abelian::group_size(&self.group),
            Family::CyclicBb => {
                let m = self.need_m()?;
                m * m
            }
            Family::HigmanSims => 100,
        })
    }

    pub fn build(&self) -> Result<SpinMatrix> {
        match self.family {
            Family::Potts => potts(self.ring()?),
            Family::Hadamard => Ok(self.hadamard_matrix()?.with_family("hadamard")),
            Family::Whua => build_index_m_model(self.need_m()?, &self.hadamard_matrix()?, self.ring()?, self.a_exp),
            Family::Wprime => {
                build_symmetric_model(self.need_m()?, &self.hadamard_matrix()?, self.ring()?, self.eta_exp, self.b_exp)
            }
            Family::Abelian => {
                if self.group.is_empty() {
                    return Err(Error::BadParameters("family abelian needs a group".into()));
                }
                let mut p = AbelianParams::new(self.group.clone());
                if let Some(e) = &self.group_eta {
                    p.eta_exps = e.clone();
                }
                if let Some(c) = &self.group_chars {
                    p.char_exps = c.clone();
                }
                p.d_sign = self.d_sign;
                p.t0_sign = self.t0_sign;
                Ok(build_abelian_model(&p)?.matrix)
            }
            Family::CyclicBb => build_cyclic_bb_model(self.need_m()?, self.a_exp),
            Family::HigmanSims => jaeger_model(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_sizes() {
        let mut s = ModelSpec::new(Family::Whua);
        s.m = Some(4);
        s.r = Some(2);
        s.hadamard = Some("sylvester:1".parse().unwrap());
        assert_eq!(s.build().unwrap().n(), 32);
        assert_eq!(s.size().unwrap(), 32);
        let mut p = ModelSpec::new(Family::Potts);
        p.r = Some(1);
        assert_eq!(p.build().unwrap().n(), 1);
        s.r = Some(4);
        assert!(s.build().is_err());
    }
}
