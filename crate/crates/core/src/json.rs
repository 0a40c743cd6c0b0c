//! Versioned JSON for matrices, cyclotomic values and reports, plus a
//! floating-point CSV export.

use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use crate::ball::working_precision;
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::{Labels, SpinMatrix};
use crate::scalar::{EntryMonomial, Ring, Scalar};
use crate::verify::VerificationReport;

pub const FORMAT: &str = "smlab/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub n: usize,
    #[serde(rename = "N")]
    pub conductor: u64,
    pub r: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    pub branch: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub q: [i64; 2],
    pub zexp: i64,
    pub upow: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub fmt: String,
    pub header: Header,
    /// Row-major.
    pub entries: Vec<EntryRecord>,
}

impl MatrixFile {
    pub fn from_matrix(w: &SpinMatrix) -> Self {
        let header = Header {
            n: w.n(),
            conductor: w.conductor(),
            r: w.ring().r,
            m: w.labels().map(|l| l.m),
            family: w.family().map(String::from),
            branch: w.ring().branch_name(),
        };
        let entries = w
            .entries()
            .iter()
            .map(|e| EntryRecord { q: [*e.q.numer(), *e.q.denom()], zexp: e.zexp, upow: e.upow })
            .collect();
        MatrixFile { fmt: FORMAT.into(), header, entries }
    }

    pub fn to_matrix(&self) -> Result<SpinMatrix> {
        if self.fmt != FORMAT {
            return Err(Error::Format(format!("unsupported format '{}'", self.fmt)));
        }
        let h = &self.header;
        if h.conductor == 0 {
            return Err(Error::Format("N must be positive".into()));
        }
        let ring = Ring::from_branch_name(h.r, &h.branch)?;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                if e.q[1] == 0 {
                    return Err(Error::Format("zero denominator".into()));
                }
                Ok(EntryMonomial::new(Rational64::new(e.q[0], e.q[1]), e.zexp, e.upow))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut w = SpinMatrix::new(ring, h.conductor, h.n, entries).map_err(|e| Error::Format(e.to_string()))?;
        if let Some(m) = h.m {
            if m == 0 || h.n % (m * m) != 0 {
                return Err(Error::Format(format!("m = {m} does not divide the size {}", h.n)));
            }
            w = w.with_labels(Labels { m, r: h.n / (m * m) }).map_err(|e| Error::Format(e.to_string()))?;
        }
        if let Some(f) = &h.family {
            w = w.with_family(f.clone());
        }
        Ok(w)
    }
}

pub fn matrix_to_json(w: &SpinMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(w)).expect("plain data serializes")
}

pub fn matrix_from_json(text: &str) -> Result<SpinMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_matrix()
}

/// `{"N": n, "coeffs": ["p/q", ...]}` on the power basis of ζ_N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloRecord {
    #[serde(rename = "N")]
    pub conductor: u64,
    pub coeffs: Vec<String>,
}

impl CycloRecord {
    pub fn from_cyclo(c: &Cyclotomic) -> Self {
        CycloRecord { conductor: c.conductor(), coeffs: c.coeffs().iter().map(|q| q.to_string()).collect() }
    }

    pub fn to_cyclo(&self) -> Result<Cyclotomic> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|_| Error::Format(format!("bad coefficient '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        if self.conductor == 0 {
            return Err(Error::Format("N must be positive".into()));
        }
        Ok(Cyclotomic::from_coeffs(self.conductor, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarRecord {
    pub branch: String,
    /// Coefficient of U^k in slot k.
    pub slots: Vec<CycloRecord>,
    pub approx: [String; 2],
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl ScalarRecord {
    pub fn from_scalar(s: &Scalar) -> Self {
        let (re, im) = s.embed(working_precision(64)).to_f64();
        ScalarRecord {
            branch: s.ring().branch_name(),
            slots: s.slots().iter().map(CycloRecord::from_cyclo).collect(),
            approx: [fmt_f64(re), fmt_f64(im)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub tuple: Vec<usize>,
    pub residual: ScalarRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRecord {
    pub check: String,
    pub verdict: String,
    pub witness: Option<WitnessRecord>,
    #[serde(rename = "D")]
    pub d: Option<ScalarRecord>,
    pub index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportRecord {
    pub fn from_report(r: &VerificationReport) -> Self {
        ReportRecord {
            check: r.check.clone(),
            verdict: r.verdict.as_str().into(),
            witness: r
                .witness
                .as_ref()
                .map(|w| WitnessRecord { tuple: w.tuple.clone(), residual: ScalarRecord::from_scalar(&w.residual) }),
            d: r.d.as_ref().map(ScalarRecord::from_scalar),
            index: r.index,
            note: r.note.clone(),
        }
    }
}

pub fn report_to_json(r: &VerificationReport) -> String {
    serde_json::to_string(&ReportRecord::from_report(r)).expect("plain data serializes")
}

/// One line per row, `re,im` pairs separated by commas.
pub fn matrix_to_csv_complex(w: &SpinMatrix) -> String {
    let prec = working_precision(64);
    let n = w.n();
    let mut out = String::new();
    for row in 0..n {
        let cells: Vec<String> = (0..n)
            .map(|col| {
                let (re, im) = w.get(row, col).embed(w.ring(), w.conductor(), prec).to_f64();
                format!("{},{}", fmt_f64(re), fmt_f64(im))
            })
            .collect();
        out += &cells.join(",");
        out.push('\n');
    }
    out
}
