//! Hadamard matrices (HHᵀ = rI, entries ±1) and their equivalence moves.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::matrix::{plain_ring, SpinMatrix};
use crate::numtheory::prime_power;
use crate::scalar::EntryMonomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HadamardSource {
    /// Order 2^k.
    Sylvester(u32),
    /// Order q + 1 for a prime power q ≡ 3 mod 4.
    Paley1(u64),
    File(PathBuf),
    Explicit(Vec<Vec<i8>>),
}

impl HadamardSource {
    pub fn order(&self) -> Result<usize> {
        Ok(match self {
            HadamardSource::Sylvester(k) => 1usize << k,
            HadamardSource::Paley1(q) => *q as usize + 1,
            HadamardSource::File(p) => read_rows(p)?.len(),
            HadamardSource::Explicit(rows) => rows.len(),
        })
    }

    /// A source of the given order, Sylvester when possible, then Paley I.
    pub fn default_for(r: u64) -> Result<HadamardSource> {
        if r.is_power_of_two() {
            return Ok(HadamardSource::Sylvester(r.trailing_zeros()));
        }
        if r >= 4 && (r - 1) % 4 == 3 && prime_power(r - 1).is_some() {
            return Ok(HadamardSource::Paley1(r - 1));
        }
        Err(Error::BadParameters(format!("no built-in Hadamard matrix of order {r}; use file: or an explicit matrix")))
    }
}

impl FromStr for HadamardSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let bad = || Error::BadParameters(format!("bad Hadamard source '{s}'"));
        match kind {
            "sylvester" => Ok(HadamardSource::Sylvester(arg.parse().map_err(|_| bad())?)),
            "paley1" => Ok(HadamardSource::Paley1(arg.parse().map_err(|_| bad())?)),
            "file" if !arg.is_empty() => Ok(HadamardSource::File(PathBuf::from(arg))),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for HadamardSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HadamardSource::Sylvester(k) => write!(f, "sylvester:{k}"),
            HadamardSource::Paley1(q) => write!(f, "paley1:{q}"),
            HadamardSource::File(p) => write!(f, "file:{}", p.display()),
            HadamardSource::Explicit(rows) => write!(f, "explicit:{}", rows.len()),
        }
    }
}

/// Build and validate the matrix.
pub fn hadamard(src: &HadamardSource) -> Result<SpinMatrix> {
    let rows = match src {
        HadamardSource::Sylvester(k) => sylvester_rows(*k),
        HadamardSource::Paley1(q) => paley1_rows(*q)?,
        HadamardSource::File(p) => read_rows(p)?,
        HadamardSource::Explicit(rows) => rows.clone(),
    };
    from_rows(&rows)
}

pub fn from_rows(rows: &[Vec<i8>]) -> Result<SpinMatrix> {
    let r = rows.len();
    if r == 0 {
        return Err(Error::BadParameters("empty Hadamard matrix".into()));
    }
    for row in rows {
        if row.len() != r {
            return Err(Error::SizeMismatch(row.len(), r));
        }
        if row.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::BadParameters("Hadamard entries must be ±1".into()));
        }
    }
    check_orthogonal(rows)?;
    SpinMatrix::from_fn(plain_ring(r as u64), 1, r, |i, j| EntryMonomial::signed(rows[i][j] as i64, 0, 0))
}

fn check_orthogonal(rows: &[Vec<i8>]) -> Result<()> {
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let dot: i64 = rows[i].iter().zip(&rows[j]).map(|(&a, &b)| (a * b) as i64).sum();
            if dot != 0 {
                return Err(Error::NotHadamard(i, j));
            }
        }
    }
    Ok(())
}

/// Signs of a Hadamard SpinMatrix.
pub fn signs(h: &SpinMatrix) -> Result<Vec<Vec<i8>>> {
    let r = h.n();
    let packed = h.packed();
    let l = crate::scalar::pack_modulus(h.ring(), h.conductor()) as u64;
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let p = packed[i * r + j];
                    match (p.q, p.z, p.k) {
                        ((1, 1), 0, 0) => Ok(1),
                        ((1, 1), z, 0) if z == l / 2 => Ok(-1),
                        _ => Err(Error::BadParameters(format!("entry ({i}, {j}) is not ±1"))),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn sylvester_rows(k: u32) -> Vec<Vec<i8>> {
    let r = 1usize << k;
    (0..r).map(|i| (0..r).map(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 }).collect()).collect()
}

/// Paley I construction, normalized so the first row and column are all +1.
pub fn paley1_rows(q: u64) -> Result<Vec<Vec<i8>>> {
    if prime_power(q).is_none() || q % 4 != 3 {
        return Err(Error::BadParameters(format!("Paley I needs a prime power q ≡ 3 mod 4, got {q}")));
    }
    let f = GaloisField::new(q)?;
    let q = q as usize;
    let n = q + 1;
    let mut h = vec![vec![0i8; n]; n];
    for j in 1..n {
        h[0][j] = 1;
        h[j][0] = -1;
    }
    for x in 0..q {
        for y in 0..q {
            h[x + 1][y + 1] = f.chi(f.sub(y, x)) as i8;
        }
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[i] += 1;
    }
    for row in h.iter_mut().skip(1) {
        for v in row.iter_mut() {
            *v = -*v;
        }
    }
    check_orthogonal(&h).map_err(|e| Error::ConstructionInvariantViolated(e.to_string()))?;
    Ok(h)
}

/// Text format: one row per line, entries `+`/`-`, optionally separated by spaces.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<i8>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            line.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(Error::Format(format!("unexpected character '{c}' in Hadamard file"))),
                })
                .collect()
        })
        .collect()
}

fn read_rows(p: &Path) -> Result<Vec<Vec<i8>>> {
    let text = std::fs::read_to_string(p).map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
    parse_rows(&text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HadamardOp {
    NegateRow(usize),
    NegateCol(usize),
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    /// H₂(π(x), y) = H₁(x, y).
    PermuteRows(Vec<usize>),
    /// H₂(x, π(y)) = H₁(x, y).
    PermuteCols(Vec<usize>),
}

impl HadamardOp {
    /// The row and column permutations this move induces, for the equivalence maps.
    pub fn as_permutation(&self, r: usize) -> Option<(bool, Vec<usize>)> {
        let swap = |a: usize, b: usize| {
            let mut p: Vec<usize> = (0..r).collect();
            p.swap(a, b);
            p
        };
        match self {
            HadamardOp::SwapRows(a, b) => Some((true, swap(*a, *b))),
            HadamardOp::SwapCols(a, b) => Some((false, swap(*a, *b))),
            HadamardOp::PermuteRows(p) => Some((true, p.clone())),
            HadamardOp::PermuteCols(p) => Some((false, p.clone())),
            _ => None,
        }
    }
}

pub fn hadamard_transform(h: &SpinMatrix, op: &HadamardOp) -> Result<SpinMatrix> {
    let rows = signs(h)?;
    let r = rows.len();
    let check = |k: usize| if k < r { Ok(()) } else { Err(Error::BadParameters(format!("index {k} out of range"))) };
    let perm_ok = |p: &[usize]| -> Result<()> {
        crate::matrix::PermutationSpec::from_images(p.to_vec())?;
        if p.len() != r {
            return Err(Error::SizeMismatch(p.len(), r));
        }
        Ok(())
    };
    let mut out = rows.clone();
    match op {
        HadamardOp::NegateRow(x) => {
            check(*x)?;
            out[*x].iter_mut().for_each(|v| *v = -*v);
        }
        HadamardOp::NegateCol(y) => {
            check(*y)?;
            out.iter_mut().for_each(|row| row[*y] = -row[*y]);
        }
        _ => {
            let (is_row, p) = op.as_permutation(r).unwrap();
            perm_ok(&p)?;
            for x in 0..r {
                for y in 0..r {
                    if is_row {
                        out[p[x]][y] = rows[x][y];
                    } else {
                        out[x][p[y]] = rows[x][y];
                    }
                }
            }
        }
    }
    from_rows(&out)
}
