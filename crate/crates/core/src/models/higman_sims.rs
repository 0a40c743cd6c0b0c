//! The Higman–Sims graph from the Steiner system S(3,6,22) over PG(2,4), and
//! Jaeger's spin model on it.

use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::matrix::SpinMatrix;
use crate::scalar::{EntryMonomial, Ring};

/// Adjacency structure on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    /// `Some((k, λ, μ))` if the graph is strongly regular.
    pub fn srg_parameters(&self) -> Option<(usize, usize, usize)> {
        let k = self.degree(0);
        let (mut lambda, mut mu) = (None, None);
        for v in 0..self.n {
            if self.degree(v) != k {
                return None;
            }
            for w in v + 1..self.n {
                let common = (0..self.n).filter(|&x| self.adj[v][x] && self.adj[w][x]).count();
                let slot = if self.adj[v][w] { &mut lambda } else { &mut mu };
                match slot {
                    None => *slot = Some(common),
                    Some(c) if *c != common => return None,
                    _ => {}
                }
            }
        }
        Some((k, lambda.unwrap_or(0), mu.unwrap_or(0)))
    }
}

/// Points of PG(2,4) as normalized coordinate triples over GF(4).
fn projective_points(f: &GaloisField) -> Vec<[usize; 3]> {
    let q = f.order();
    let mut pts = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                let lead = v.iter().find(|&&t| t != 0);
                if lead == Some(&1) {
                    pts.push(v);
                }
            }
        }
    }
    pts
}

fn dot(f: &GaloisField, a: &[usize; 3], b: &[usize; 3]) -> usize {
    f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
}

/// Blocks of S(3,6,22) on points `0..22`, point 21 being the extra point ∞.
pub fn steiner_blocks() -> Result<Vec<Vec<usize>>> {
    let f = GaloisField::new(4)?;
    let pts = projective_points(&f);
    let np = pts.len();
    let lines: Vec<Vec<usize>> =
        pts.iter().map(|l| (0..np).filter(|&p| dot(&f, l, &pts[p]) == 0).collect()).collect();
    let mut collinear = vec![vec![vec![false; np]; np]; np];
    for line in &lines {
        for &a in line {
            for &b in line {
                for &c in line {
                    collinear[a][b][c] = true;
                }
            }
        }
    }
    // conic y² = xz plus its nucleus (0:1:0)
    let index = |v: [usize; 3]| pts.iter().position(|p| *p == v).unwrap();
    let mut o0: Vec<usize> = (0..4).map(|t| index([1, t, f.mul(t, t)])).collect();
    o0.push(index([0, 0, 1]));
    o0.push(index([0, 1, 0]));
    o0.sort();
    let mut hyperovals = Vec::new();
    let mut cur = Vec::with_capacity(6);
    search_arcs(np, &collinear, 0, &mut cur, &mut hyperovals);
    let class: Vec<Vec<usize>> = hyperovals
        .into_iter()
        .filter(|o| o.iter().filter(|p| o0.contains(p)).count() % 2 == 0)
        .collect();
    if class.len() != 56 {
        return Err(Error::ConstructionInvariantViolated(format!("found {} hyperovals in the class", class.len())));
    }
    let mut blocks: Vec<Vec<usize>> = lines
        .into_iter()
        .map(|mut l| {
            l.push(np);
            l
        })
        .collect();
    blocks.extend(class);
    for b in blocks.iter_mut() {
        b.sort();
    }
    Ok(blocks)
}

fn search_arcs(np: usize, col: &[Vec<Vec<bool>>], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == 6 {
        out.push(cur.clone());
        return;
    }
    for p in start..np {
        let ok = cur.iter().enumerate().all(|(i, &a)| cur[i + 1..].iter().all(|&b| !col[a][b][p]));
        if ok {
            cur.push(p);
            search_arcs(np, col, p + 1, cur, out);
            cur.pop();
        }
    }
}

/// Every 3-subset of the 22 points lies in exactly one block.
pub fn check_steiner(blocks: &[Vec<usize>]) -> Result<()> {
    let mut member = vec![[false; 22]; blocks.len()];
    for (k, b) in blocks.iter().enumerate() {
        if b.len() != 6 {
            return Err(Error::ConstructionInvariantViolated(format!("block {k} has {} points", b.len())));
        }
        for &p in b {
            member[k][p] = true;
        }
    }
    for a in 0..22 {
        for b in a + 1..22 {
            for c in b + 1..22 {
                let count = member.iter().filter(|m| m[a] && m[b] && m[c]).count();
                if count != 1 {
                    return Err(Error::ConstructionInvariantViolated(format!(
                        "triple ({a}, {b}, {c}) lies in {count} blocks"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Vertex 0 is ∗, vertices 1..=22 are points, 23..=99 are blocks.
pub fn higman_sims_graph() -> Result<Graph> {
    let blocks = steiner_blocks()?;
    check_steiner(&blocks)?;
    let n = 1 + 22 + blocks.len();
    let mut adj = vec![vec![false; n]; n];
    let mut link = |a: usize, b: usize| {
        adj[a][b] = true;
        adj[b][a] = true;
    };
    for p in 0..22 {
        link(0, 1 + p);
    }
    for (k, b) in blocks.iter().enumerate() {
        for &p in b {
            link(1 + p, 23 + k);
        }
        for (k2, b2) in blocks.iter().enumerate().skip(k + 1) {
            if b.iter().all(|p| !b2.contains(p)) {
                link(23 + k, 23 + k2);
            }
        }
    }
    let g = Graph { n, adj };
    if g.srg_parameters() != Some((22, 0, 6)) || n != 100 {
        return Err(Error::ConstructionInvariantViolated("graph is not SRG(100,22,0,6)".into()));
    }
    Ok(g)
}

/// W_J = −τ⁵I − τA + τ⁻¹(J − A − I) with τ² + τ⁻² = 3.
pub fn jaeger_model() -> Result<SpinMatrix> {
    let g = higman_sims_graph()?;
    let ring = Ring::potts(9);
    SpinMatrix::from_fn(ring, 1, g.n, |a, b| {
        if a == b {
            EntryMonomial::signed(-1, 0, 5)
        } else if g.adj[a][b] {
            EntryMonomial::signed(-1, 0, 1)
        } else {
            EntryMonomial::unit(0, -1)
        }
    })
    .map(|w| w.with_family("higman-sims"))
}
