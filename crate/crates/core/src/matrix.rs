//! Dense square matrices of monomial entries and the structural operations
//! the verifiers need.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::lcm;
use crate::scalar::{monomial_inverse, EntryMonomial, Packed, Ring, Scalar, UParam, ZeroStatus};

/// Index decomposition X = Z_m × Z_m × {1..r}; flat index `(i·m + ℓ)·r + (x−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Labels {
    pub m: usize,
    pub r: usize,
}

impl Labels {
    pub fn size(&self) -> usize {
        self.m * self.m * self.r
    }

    /// `x` is 0-based here.
    pub fn index(&self, i: usize, l: usize, x: usize) -> usize {
        (i % self.m * self.m + l % self.m) * self.r + x
    }

    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let x = idx % self.r;
        let il = idx / self.r;
        (il / self.m, il % self.m, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinMatrix {
    n: usize,
    conductor: u64,
    ring: Ring,
    entries: Vec<EntryMonomial>,
    labels: Option<Labels>,
    family: Option<String>,
}

impl SpinMatrix {
    pub fn new(ring: Ring, conductor: u64, n: usize, entries: Vec<EntryMonomial>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::SizeMismatch(entries.len(), n * n));
        }
        if entries.iter().any(EntryMonomial::is_zero) {
            return Err(Error::ZeroEntry);
        }
        if !ring.has_u() && entries.iter().any(|e| e.upow != 0) {
            return Err(Error::ParameterMismatch("U-power in a ring without a Potts parameter".into()));
        }
        let entries = entries.into_iter().map(|e| e.normalized(conductor)).collect();
        Ok(SpinMatrix { n, conductor, ring, entries, labels: None, family: None })
    }

    pub fn from_fn(
        ring: Ring,
        conductor: u64,
        n: usize,
        f: impl Fn(usize, usize) -> EntryMonomial,
    ) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SpinMatrix::new(ring, conductor, n, entries)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self> {
        if labels.size() != self.n {
            return Err(Error::SizeMismatch(labels.size(), self.n));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = Some(family.into());
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn labels(&self) -> Option<Labels> {
        self.labels
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn entries(&self) -> &[EntryMonomial] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> EntryMonomial {
        self.entries[i * self.n + j]
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, e: EntryMonomial) -> Result<Self> {
        if e.is_zero() {
            return Err(Error::ZeroEntry);
        }
        let mut out = self.clone();
        out.entries[i * self.n + j] = e.normalized(self.conductor);
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n]).collect();
        SpinMatrix { entries, labels: self.labels, ..self.clone() }
    }

    /// W⁻(x, y) = W(y, x)⁻¹.
    pub fn entrywise_minus(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| monomial_inverse(self.entries[(k % n) * n + k / n], self.conductor).expect("entries are nonzero"))
            .collect();
        SpinMatrix { entries, ..self.clone() }
    }

    /// Rewrite over a larger conductor.
    pub fn promote(&self, to: u64) -> Self {
        let entries = self.entries.iter().map(|e| e.promote(self.conductor, to).normalized(to)).collect();
        SpinMatrix { entries, conductor: to, ..self.clone() }
    }

    /// Multiply every entry by a monomial over this matrix's conductor.
    pub fn scale(&self, c: EntryMonomial) -> Self {
        let entries = self.entries.iter().map(|e| e.mul(c, self.conductor)).collect();
        SpinMatrix { entries, ..self.clone() }
    }

    /// W^σ(α, β) = W(σα, σβ).
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        PermutationSpec::from_images(sigma.to_vec())?;
        if sigma.len() != self.n {
            return Err(Error::SizeMismatch(sigma.len(), self.n));
        }
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(sigma[k / n], sigma[k % n])).collect();
        Ok(SpinMatrix { entries, ..self.clone() })
    }

    /// Fold a root-of-unity u into ζ, giving a matrix over a ring without u.
    /// Other rings are returned unchanged.
    pub fn specialized(&self) -> Self {
        let UParam::Root { order, exp } = self.ring.u else { return self.clone() };
        let l = lcm(self.conductor, order);
        let step = (exp * (l / order)) as i64;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let p = e.promote(self.conductor, l);
                EntryMonomial { zexp: (p.zexp + step * p.upow as i64).rem_euclid(l as i64), upow: 0, ..p }
            })
            .collect();
        SpinMatrix { entries, conductor: l, ring: Ring::plain(self.ring.r), ..self.clone() }
    }

    pub fn packed(&self) -> Vec<Packed> {
        self.entries.iter().map(|e| e.pack(&self.ring, self.conductor)).collect()
    }

    /// First position where the values differ, comparing at a common conductor.
    pub fn first_difference(&self, o: &SpinMatrix) -> Result<Option<(usize, usize)>> {
        if self.n != o.n {
            return Err(Error::SizeMismatch(self.n, o.n));
        }
        if self.ring.u != o.ring.u {
            return Err(Error::ParameterMismatch(format!(
                "branches differ: {} vs {}",
                self.ring.branch_name(),
                o.ring.branch_name()
            )));
        }
        let l = lcm(self.conductor, o.conductor);
        let (a, b) = (self.promote(l), o.promote(l));
        let pa = a.packed();
        let pb = b.packed();
        Ok(pa.iter().zip(&pb).position(|(x, y)| x != y).map(|k| (k / self.n, k % self.n)))
    }

    pub fn values_equal(&self, o: &SpinMatrix) -> bool {
        matches!(self.first_difference(o), Ok(None))
    }

    pub fn is_symmetric(&self) -> bool {
        let p = self.packed();
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| p[i * n + j] == p[j * n + i]))
    }

    pub fn to_scalar_matrix(&self) -> ScalarMatrix {
        let entries = self
            .entries
            .par_iter()
            .map(|e| e.expand(&self.ring, self.conductor).expect("ring checked at construction"))
            .collect();
        ScalarMatrix { n: self.n, ring: self.ring, entries }
    }
}

fn tensor_ring(a: &Ring, b: &Ring) -> Result<Ring> {
    match (a.has_u(), b.has_u()) {
        (true, true) if a.compatible(b) => Ok(*a),
        (true, true) => Err(Error::ParameterMismatch(format!(
            "cannot combine r = {} ({}) with r = {} ({})",
            a.r,
            a.branch_name(),
            b.r,
            b.branch_name()
        ))),
        (true, false) => Ok(*a),
        (false, true) => Ok(*b),
        (false, false) => Ok(Ring::plain(a.r * b.r)),
    }
}

/// Kronecker product; the left factor is the slow index.
pub fn tensor(a: &SpinMatrix, b: &SpinMatrix) -> Result<SpinMatrix> {
    let ring = tensor_ring(&a.ring, &b.ring)?;
    let l = lcm(a.conductor, b.conductor);
    let (pa, pb) = (a.promote(l), b.promote(l));
    let n = a.n * b.n;
    let nb = b.n;
    let entries = (0..n * n)
        .map(|k| {
            let (row, col) = (k / n, k % n);
            pa.get(row / nb, col / nb).mul(pb.get(row % nb, col % nb), l)
        })
        .collect();
    SpinMatrix::new(ring, l, n, entries)
}

// ---------------------------------------------------------------------------

/// Dense matrix of general ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    pub n: usize,
    pub ring: Ring,
    pub entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn identity(ring: Ring, n: usize) -> Self {
        let entries =
            (0..n * n).map(|k| if k / n == k % n { Scalar::one(ring) } else { Scalar::zero(ring) }).collect();
        ScalarMatrix { n, ring, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.mul(c)).collect::<Result<_>>()?;
        Ok(ScalarMatrix { entries, ..self.clone() })
    }

    pub fn mul(&self, o: &ScalarMatrix) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::SizeMismatch(self.n, o.n));
        }
        let n = self.n;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).try_fold(Scalar::zero(self.ring), |acc, t| acc.add(&self.get(i, t).mul(o.get(t, j))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScalarMatrix { n, ring: self.ring, entries })
    }
}

/// Exact product of two monomial matrices.
pub fn mat_mul(a: &SpinMatrix, b: &SpinMatrix) -> Result<ScalarMatrix> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    let ring = if a.ring.compatible(&b.ring) { a.ring } else { tensor_ring(&a.ring, &b.ring)? };
    let l = lcm(a.conductor, b.conductor);
    let (a, b) = (a.promote(l), b.promote(l));
    let a = SpinMatrix { ring, ..a }.to_scalar_matrix();
    let b = SpinMatrix { ring, ..b }.to_scalar_matrix();
    a.mul(&b)
}

// ---------------------------------------------------------------------------

/// A permutation of `0..n` with its multiplicative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationSpec {
    pub images: Vec<usize>,
    pub order: u64,
}

impl PermutationSpec {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (row, &col) in images.iter().enumerate() {
            if col >= n || seen[col] {
                return Err(Error::NotPermutation { row, col, reason: "images do not form a bijection".into() });
            }
            seen[col] = true;
        }
        let mut order = 1u64;
        let mut visited = vec![false; n];
        for s in 0..n {
            if visited[s] {
                continue;
            }
            let mut len = 0u64;
            let mut t = s;
            while !visited[t] {
                visited[t] = true;
                t = images[t];
                len += 1;
            }
            order = lcm(order, len);
        }
        Ok(PermutationSpec { images, order })
    }

    pub fn identity(n: usize) -> Self {
        PermutationSpec { images: (0..n).collect(), order: 1 }
    }

    /// Cyclic shift z_m with a one in position (ℓ, ℓ−1).
    pub fn shift(m: usize) -> Self {
        PermutationSpec::from_images((0..m).map(|l| (l + m - 1) % m).collect()).unwrap()
    }

    /// Permutation of the Kronecker product of the two permutation matrices.
    pub fn tensor(&self, o: &PermutationSpec) -> Self {
        let nb = o.images.len();
        let images = (0..self.images.len() * nb).map(|k| self.images[k / nb] * nb + o.images[k % nb]).collect();
        PermutationSpec::from_images(images).unwrap()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn to_matrix(&self, ring: Ring) -> ScalarMatrix {
        let n = self.images.len();
        let entries = (0..n * n)
            .map(|k| if self.images[k / n] == k % n { Scalar::one(ring) } else { Scalar::zero(ring) })
            .collect();
        ScalarMatrix { n, ring, entries }
    }
}

/// Read a 0/1 matrix as a permutation, with the numeric fallback for zero tests.
pub fn as_permutation(m: &ScalarMatrix) -> Result<PermutationSpec> {
    let n = m.n;
    let prec = crate::ball::precision_bits();
    let one = Scalar::one(m.ring);
    let mut images = vec![usize::MAX; n];
    for row in 0..n {
        for col in 0..n {
            let e = m.get(row, col);
            if e.zero_status(prec) != ZeroStatus::NonZero {
                continue;
            }
            if e.sub(&one)?.zero_status(prec) == ZeroStatus::NonZero {
                return Err(Error::NotPermutation { row, col, reason: "entry is neither 0 nor 1".into() });
            }
            if images[row] != usize::MAX {
                return Err(Error::NotPermutation { row, col, reason: "second 1 in row".into() });
            }
            images[row] = col;
        }
        if images[row] == usize::MAX {
            return Err(Error::NotPermutation { row, col: 0, reason: "row has no 1".into() });
        }
    }
    PermutationSpec::from_images(images)
}

/// Ring for entries that are plain signs or roots of unity.
pub fn plain_ring(r: u64) -> Ring {
    Ring { r, u: UParam::Absent }
}
