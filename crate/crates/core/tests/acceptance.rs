use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smlab::cyclo::gauss_sum;
use smlab::invariants::{
    check_hadamard_equivalence, decomposability_obstructions, kind_for_op, psi_equivalence,
    r4_decomposition, small_u_equivalence, table1, MuClaim, R4Param,
};
use smlab::models::{
    build_abelian_model, build_cyclic_bb_model, build_index_m_model, build_symmetric_model, cyclic_bb_params,
    hadamard, hadamard_transform, higman_sims_graph, jaeger_model, potts, AbelianParams, HadamardOp, HadamardSource,
};
use smlab::numtheory::{gcd, lcm};
use smlab::scalar::potts_d;
use smlab::verify::{check_jn_identities, check_jn_identities_with, check_type_ii, check_type_iii, compute_index, Mode, Verdict};
use smlab::{Cyclotomic, EntryMonomial, Error, Ring, Scalar, SpinMatrix};

struct Outcome {
    pass: bool,
    detail: String,
    /// Failing sub-checks that are known to be unattainable.
    known: Vec<String>,
    /// Failing sub-checks that are not.
    unexpected: Vec<String>,
}

#[derive(Default)]
struct Checks {
    ok: usize,
    failed: Vec<String>,
    known: Vec<String>,
}

impl Checks {
    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if cond {
            self.ok += 1;
        } else {
            self.failed.push(what());
        }
    }

    fn known_fail(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if cond {
            self.ok += 1;
        } else {
            self.known.push(what());
        }
    }

    fn finish(self, started: Instant, budget: Duration) -> Outcome {
        let elapsed = started.elapsed();
        let mut unexpected = self.failed;
        if elapsed > budget {
            unexpected.push(format!("took {elapsed:.1?}, budget {budget:?}"));
        }
        let pass = unexpected.is_empty() && self.known.is_empty();
        let detail = format!("{} sub-checks ok in {:.2?}", self.ok, elapsed);
        Outcome { pass, detail, known: self.known, unexpected }
    }
}

fn sylvester_for(r: u64) -> SpinMatrix {
    hadamard(&HadamardSource::Sylvester(r.trailing_zeros())).unwrap()
}

fn exact(v: Verdict) -> bool {
    v == Verdict::ExactPass
}

fn scalar_eq(a: &Scalar, b: &Scalar) -> bool {
    a.sub(b).map(|d| d.is_zero()).unwrap_or(false)
}

fn c1() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for m in [2usize, 4, 6] {
        let big = 2 * (m * m) as i64;
        for r in [1u64, 2, 4] {
            let ring = Ring::potts(r);
            let h = sylvester_for(r);
            let mdu = potts_d(&ring).unwrap().scale(&Cyclotomic::from_int(m as i64));
            for a in [1, big - 1] {
                let w = build_index_m_model(m, &h, ring, a).unwrap();
                let tag = format!("m={m} r={r} a=ζ{big}^{a}");
                c.check(exact(check_type_ii(&w).verdict), || format!("{tag}: type II"));
                let block = check_type_iii(&w, Mode::Blockwise).unwrap();
                c.check(exact(block.verdict), || format!("{tag}: blockwise type III {:?}", block.verdict));
                c.check(block.d.as_ref().is_some_and(|d| scalar_eq(d, &mdu)), || format!("{tag}: D ≠ m·D_u"));
                let idx = compute_index(&w).unwrap();
                c.check(idx.passed() && idx.index == Some(m as u64), || format!("{tag}: index {:?}", idx.index));
                if w.n() <= 36 {
                    let full = check_type_iii(&w, Mode::Full).unwrap();
                    c.check(full.verdict == block.verdict && full.d == block.d, || format!("{tag}: full and blockwise disagree"));
                }
            }
        }
    }
    c.finish(t, Duration::from_secs(60))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for m in [2usize, 4, 6] {
        let mm = (m * m) as i64;
        for r in [1u64, 2, 4] {
            let ring = Ring::potts(r);
            let h = sylvester_for(r);
            for b in [1, 2, mm - 1] {
                let w = build_symmetric_model(m, &h, ring, 1, b).unwrap();
                let tag = format!("m={m} r={r} b=ζ{mm}^{b}");
                c.check(w.is_symmetric(), || format!("{tag}: not symmetric"));
                c.check(exact(check_type_ii(&w).verdict), || format!("{tag}: type II"));
                c.check(exact(check_type_iii(&w, Mode::Blockwise).unwrap().verdict), || format!("{tag}: type III"));
                let idx = compute_index(&w).unwrap();
                c.check(idx.passed() && idx.index == Some(1), || format!("{tag}: index {:?}", idx.index));
            }
        }
    }
    c.finish(t, Duration::from_secs(60))
}

/// The m = 2 block matrices written out directly. The flat index is (i·2 + ℓ)·r + x,
/// which is exactly the displayed nesting, so no relabeling is needed.
fn displayed_m2(ring: Ring, h: &SpinMatrix, conductor: u64, c_exp: i64, lower_minus: bool) -> SpinMatrix {
    let r = h.n();
    let hs = smlab::models::hadamard::signs(h).unwrap();
    SpinMatrix::from_fn(ring, conductor, 4 * r, |row, col| {
        let (i, l, x) = (row / (2 * r), (row / r) % 2, row % r);
        let (j, lp, y) = (col / (2 * r), (col / r) % 2, col % r);
        if i == j {
            return if x == y { EntryMonomial::unit(0, 3) } else { EntryMonomial::signed(-1, 0, -1) };
        }
        let mut sign = if l == lp { 1 } else { -1 };
        if i == 1 && lower_minus {
            sign = -sign;
        }
        let hv = if i == 0 { hs[x][y] } else { hs[y][x] };
        EntryMonomial::signed(sign * hv as i64, c_exp, 0)
    })
    .unwrap()
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for r in [1u64, 2, 4] {
        let ring = Ring::potts(r);
        let h = sylvester_for(r);
        for a in [1i64, 3, 5, 7] {
            let w = build_index_m_model(2, &h, ring, a).unwrap();
            // ξ = a^{ε(0,1)} = a⁻¹
            let disp = displayed_m2(ring, &h, 8, -a, true);
            c.check(w.first_difference(&disp).unwrap().is_none(), || format!("r={r} a=ζ8^{a}: W differs"));
        }
        for b in 0..4i64 {
            let w = build_symmetric_model(2, &h, ring, 1, b).unwrap();
            let disp = displayed_m2(ring, &h, 4, b, false);
            c.check(w.first_difference(&disp).unwrap().is_none(), || format!("r={r} b=ζ4^{b}: W′ differs"));
        }
    }
    c.finish(t, Duration::from_secs(60))
}

fn c4() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for r in [1u64, 2, 4, 8, 12] {
        let rep = check_jn_identities(r).unwrap();
        c.check(exact(rep.verdict), || format!("r={r}: {:?} {:?}", rep.verdict, rep.witness.map(|w| w.tuple)));
    }
    for q in [3u64, 7, 11] {
        let h = hadamard(&HadamardSource::Paley1(q)).unwrap();
        let rep = check_jn_identities_with(Ring::potts(q + 1), &h).unwrap();
        c.check(exact(rep.verdict), || format!("Paley q={q}: {:?}", rep.verdict));
    }
    c.finish(t, Duration::from_secs(10))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for m in [2u64, 4, 6, 8] {
        let big = 2 * m * m;
        for j in (1..big as i64).filter(|&j| gcd(j as u64, big) == 1) {
            let g = gauss_sum(m, &Cyclotomic::root_of_unity(big, j)).unwrap();
            c.check(g == Cyclotomic::from_int(m as i64), || format!("m={m} ξ=ζ{big}^{j}: {g}"));
        }
    }
    c.finish(t, Duration::from_secs(10))
}

fn c6() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    let rows = table1(&[2, 4], &[1, 2, 4, 8]).unwrap();
    c.check(rows.len() == 16, || format!("{} rows", rows.len()));
    for row in &rows {
        let tag = format!("{} m={} r={}", row.family, row.m, row.r);
        c.check(row.matches, || format!("{tag}: μ={:?} E={:?} index={:?}", row.mu, row.e, row.index));
        let m2 = 2 * (row.m * row.m) as u64;
        if row.family == "whua" {
            let want = if row.r == 2 { lcm(m2, 16) } else { m2 };
            c.check(row.mu == Some(want) && row.mu_claim == MuClaim::Equals(want), || format!("{tag}: μ {:?}", row.mu));
            let e_len = if row.r == 8 { 3 } else { 1 };
            c.check(row.e.len() == e_len, || format!("{tag}: E {:?}", row.e));
            if row.r == 8 {
                let mut v = row.e_numeric.clone();
                v.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
                c.check(v.len() == 3, || format!("{tag}: E not distinct {:?}", row.e_numeric));
            }
        } else {
            c.check(matches!(row.mu_claim, MuClaim::Divides(_)), || format!("{tag}: claim {:?}", row.mu_claim));
        }
    }
    c.finish(t, Duration::from_secs(60))
}

fn c7() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for r in [2u64, 4] {
        let h1 = sylvester_for(r);
        let n = r as usize;
        let mut ops = vec![HadamardOp::NegateRow(n - 1), HadamardOp::NegateCol(0), HadamardOp::SwapRows(0, n - 1), HadamardOp::SwapCols(0, 1)];
        if r == 4 {
            ops.push(HadamardOp::PermuteRows(vec![1, 2, 3, 0]));
            ops.push(HadamardOp::PermuteCols(vec![3, 0, 2, 1]));
        }
        let ring = Ring::potts(r);
        for m in [2usize, 4] {
            for op in &ops {
                let h2 = hadamard_transform(&h1, op).unwrap();
                let kind = kind_for_op(op, n);
                let pairs = [
                    (build_index_m_model(m, &h1, ring, 1).unwrap(), build_index_m_model(m, &h2, ring, 1).unwrap()),
                    (build_symmetric_model(m, &h1, ring, 1, 1).unwrap(), build_symmetric_model(m, &h2, ring, 1, 1).unwrap()),
                ];
                for (w1, w2) in pairs {
                    let chk = check_hadamard_equivalence(&w1, &w2, &kind).unwrap();
                    c.check(chk.holds(), || format!("{} r={r} m={m} {op:?}: differs at {:?}", w1.family().unwrap(), chk.first_difference));
                }
            }
        }
    }
    c.finish(t, Duration::from_secs(60))
}

fn c8() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for m in [2usize, 4] {
        for e in 0..4 {
            for p in [R4Param::A { a_exp: 1 }, R4Param::B { eta_exp: 1, b_exp: 1 }] {
                let rep = r4_decomposition(m, e, p).unwrap();
                c.check(rep.holds(), || format!("r=4 m={m} u=ζ4^{e} {p:?}: {rep:?}"));
            }
        }
    }
    for m in [4usize, 8] {
        let big = 2 * (m * m) as i64;
        for a in [1, 3, big - 1] {
            for tt in 0..4 {
                let rep = psi_equivalence(m, tt, a).unwrap();
                c.check(rep.holds(), || format!("ψ m={m} t={tt} a={a}: {:?}", rep.first_difference));
            }
        }
    }
    for e in [2i64, 1, 3] {
        let rep = small_u_equivalence(4, e, 1).unwrap();
        let u = ["1", "i", "−1", "−i"][e as usize];
        c.known_fail(rep.literal, || format!("u={u}: u·W(1),1,au³ = W(1),u,a is false (diagonal u vs u³)"));
        c.check(rep.corrected, || format!("u={u}: u³·W(1),1,au = W(1),u,a"));
        c.check(rep.negation != Some(false), || format!("u={u}: W(1),−1,a = −W(1),1,−a"));
        c.check(rep.via_cyclic, || format!("u={u}: equivalence via the cyclic model"));
    }
    c.finish(t, Duration::from_secs(60))
}

fn c9() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for (r, src) in [(8u64, HadamardSource::Sylvester(3)), (12, HadamardSource::Paley1(11))] {
        let h = hadamard(&src).unwrap();
        let w = build_index_m_model(4, &h, Ring::potts(r), 1).unwrap();
        let rep = decomposability_obstructions(&w).unwrap();
        c.check(rep.contradiction, || format!("r={r}: no contradiction\n{}", rep.render()));
        c.check(rep.mu == Some(32), || format!("r={r}: μ = {:?}", rep.mu));
        c.check(!rep.bounds.is_empty() && rep.bounds.iter().all(|b| b.within), || format!("r={r}: bound rows"));
    }
    let w = build_index_m_model(4, &sylvester_for(4), Ring::potts(4), 1).unwrap();
    let got = decomposability_obstructions(&w);
    c.check(matches!(got, Err(Error::NotApplicable(_))), || format!("r=4: {:?}", got.map(|r| r.contradiction)));
    c.finish(t, Duration::from_secs(60))
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    let g = higman_sims_graph().unwrap();
    c.check(g.n == 100, || format!("{} vertices", g.n));
    let mut pairs = 0;
    for a in 0..g.n {
        c.check(g.degree(a) == 22, || format!("vertex {a} has degree {}", g.degree(a)));
        for b in a + 1..g.n {
            pairs += 1;
            let common = (0..g.n).filter(|&x| g.adj[a][x] && g.adj[b][x]).count();
            let want = if g.adj[a][b] { 0 } else { 6 };
            c.check(common == want, || format!("pair ({a}, {b}) has {common} common neighbours"));
        }
    }
    c.check(pairs == 4950, || format!("{pairs} pairs"));
    let w = jaeger_model().unwrap();
    c.check(exact(check_type_ii(&w).verdict), || "W_J type II".into());
    let full = check_type_iii(&w, Mode::Full).unwrap();
    c.check(exact(full.verdict), || format!("W_J type III {:?}", full.verdict));
    c.check(
        full.d.as_ref().is_some_and(|d| scalar_eq(&d.mul(d).unwrap(), &Scalar::from_int(*w.ring(), 100))),
        || "D² ≠ 100".into(),
    );
    c.check(matches!(check_type_iii(&w, Mode::Blockwise), Err(Error::ModeUnavailable(_))), || "blockwise should be unavailable".into());
    c.finish(t, Duration::from_secs(30 * 60))
}

fn c11() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    for orders in [vec![2u64], vec![4], vec![2, 2], vec![8]] {
        let size = orders.iter().product::<u64>() as i64;
        let model = build_abelian_model(&AbelianParams::new(orders.clone())).unwrap();
        let w = &model.matrix;
        let big = w.conductor() as i64;
        c.check(exact(check_type_ii(w).verdict), || format!("{orders:?}: type II"));
        c.check(exact(check_type_iii(w, Mode::Full).unwrap().verdict), || format!("{orders:?}: type III"));
        c.check(model.theta_exps.iter().all(|&th| (th * 2 * size).rem_euclid(big) == 0), || format!("{orders:?}: θ order"));
    }
    for m in [2usize, 4] {
        let big = 2 * (m * m) as i64;
        for a in (1..big).filter(|&a| gcd(a as u64, big as u64) == 1) {
            let cyc = build_cyclic_bb_model(m, a).unwrap();
            let ab = build_abelian_model(&cyclic_bb_params(m, a)).unwrap().matrix;
            c.check(ab.values_equal(&cyc), || format!("m={m} a={a}: cyclic model differs"));
        }
    }
    c.finish(t, Duration::from_secs(60))
}

/// Σ_x W(a,x)/W(b,x) − nδ_ab computed entry by entry.
fn type_ii_residual(w: &SpinMatrix, a: usize, b: usize) -> Scalar {
    let (ring, n) = (*w.ring(), w.n());
    let mut acc = Scalar::from_int(ring, if a == b { -(n as i64) } else { 0 });
    for x in 0..n {
        let q = w.get(a, x).mul(w.get(b, x).inverse(w.conductor()).unwrap(), w.conductor());
        acc = acc.add(&q.expand(&ring, w.conductor()).unwrap()).unwrap();
    }
    acc
}

fn mutate(rng: &mut ChaCha8Rng, w: &SpinMatrix) -> (usize, usize, SpinMatrix) {
    let n = w.n();
    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
    let e = w.get(i, j);
    let big = w.conductor() as i64;
    let new = match rng.gen_range(0..3) {
        0 => e.neg(),
        1 if big > 1 => EntryMonomial { zexp: e.zexp + rng.gen_range(1..big), ..e },
        _ => EntryMonomial { q: e.q * 2, ..e },
    };
    (i, j, w.with_entry(i, j, new).unwrap())
}

fn c12() -> Outcome {
    let t = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let models = vec![
        build_index_m_model(2, &sylvester_for(2), Ring::potts(2), 1).unwrap(),
        build_index_m_model(4, &sylvester_for(1), Ring::potts(1), 3).unwrap(),
        build_symmetric_model(2, &sylvester_for(4), Ring::potts(4), 1, 3).unwrap(),
        build_index_m_model(2, &sylvester_for(8), Ring::potts(8), 1).unwrap(),
        potts(Ring::potts(5)).unwrap(),
        build_cyclic_bb_model(4, 5).unwrap(),
        build_abelian_model(&AbelianParams::new(vec![2, 2])).unwrap().matrix,
        jaeger_model().unwrap(),
    ];
    for w in &models {
        let name = w.family().unwrap_or("?");
        c.check(check_type_ii(w).passed(), || format!("{name}: unmutated model fails"));
        for _ in 0..20 {
            let (i, j, bad) = mutate(&mut rng, w);
            let rep = check_type_ii(&bad);
            let Some(wit) = rep.witness.filter(|_| rep.verdict == Verdict::Fail) else {
                c.check(false, || format!("{name}: mutation at ({i}, {j}) not caught"));
                continue;
            };
            let (a, b) = (wit.tuple[0], wit.tuple[1]);
            c.check(a == i || b == i, || format!("{name}: witness {:?} misses row {i}", wit.tuple));
            let mine = type_ii_residual(&bad, a, b);
            c.check(mine.zero_status(256) == smlab::scalar::ZeroStatus::NonZero, || format!("{name}: residual at {:?} vanishes", wit.tuple));
            let diff = wit.residual.sub(&mine).unwrap();
            c.check(diff.zero_status(256) != smlab::scalar::ZeroStatus::NonZero, || format!("{name}: residual at {:?} is wrong", wit.tuple));
        }
    }
    c.finish(t, Duration::from_secs(120))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("index-m models: type II, blockwise type III, D = m·D_u, index m", c1),
        ("symmetric models: symmetric, type II/III, index 1", c2),
        ("m = 2 instances equal the displayed block matrices", c3),
        ("Potts/Hadamard identities for r in {1,2,4,8,12}", c4),
        ("quadratic Gauss sums equal m", c5),
        ("summary table: index, size, μ, E", c6),
        ("Hadamard moves give explicit equivalences", c7),
        ("r = 4 decomposition, ψ-equivalence, small-u identities", c8),
        ("decomposability obstructions at r = 8, 12", c9),
        ("Higman-Sims graph and model", c10),
        ("abelian group models", c11),
        ("single-entry mutations are caught with a witness", c12),
    ];
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        println!("criterion {:>2}: {} - {name} ({})", k + 1, if out.pass { "PASS" } else { "FAIL" }, out.detail);
        for s in &out.known {
            println!("    known failure: {s}");
        }
        for s in &out.unexpected {
            println!("    failure: {s}");
        }
        unexpected += out.unexpected.len();
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failures");
        std::process::exit(1);
    }
}
