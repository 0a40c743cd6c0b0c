use num_rational::Rational64;
use proptest::prelude::*;

use smlab::invariants::{
    check_hadamard_equivalence, compute_e, compute_mu, kind_for_op, mu_tensor_bound, psi_congruence,
};
use smlab::matrix::tensor;
use smlab::models::{build_index_m_model, build_symmetric_model, hadamard, hadamard_transform, HadamardOp, HadamardSource};
use smlab::numtheory::{gcd, lcm};
use smlab::verify::{check_type_ii, check_type_iii, compute_index, lambda_g, GFn, Mode, Verdict};
use smlab::{EntryMonomial, PermutationSpec, Ring, Scalar, SpinMatrix};

fn random_matrix(ring: Ring, conductor: u64, max_n: usize, upow: i32) -> impl Strategy<Value = SpinMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        let entry = (-3i64..=3, 1i64..=3, 0..conductor as i64, -upow..=upow).prop_filter_map("nonzero", |(p, q, z, k)| {
            (p != 0).then(|| EntryMonomial::new(Rational64::new(p, q), z, k))
        });
        prop::collection::vec(entry, n * n).prop_map(move |e| SpinMatrix::new(ring, conductor, n, e).unwrap())
    })
}

fn signed_roots(conductor: u64, max_n: usize) -> impl Strategy<Value = SpinMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((any::<bool>(), 0..conductor as i64), n * n).prop_map(move |e| {
            let e = e.into_iter().map(|(s, z)| EntryMonomial::signed(if s { -1 } else { 1 }, z, 0)).collect();
            SpinMatrix::new(Ring::plain(1), conductor, n, e).unwrap()
        })
    })
}

#[derive(Clone, Debug)]
struct Params {
    symmetric: bool,
    m: usize,
    r: u64,
    exp: i64,
}

impl Params {
    /// A unit exponent for a = ζ_{2m²}^e.
    fn a_exp(&self) -> i64 {
        let big = 2 * (self.m * self.m) as u64;
        (0..).map(|k| 2 * (self.exp + k) + 1).find(|&e| gcd(e as u64, big) == 1).unwrap()
    }

    fn build(&self) -> SpinMatrix {
        let h = hadamard(&HadamardSource::Sylvester(self.r.trailing_zeros())).unwrap();
        let ring = Ring::potts(self.r);
        if self.symmetric {
            build_symmetric_model(self.m, &h, ring, 1, self.exp).unwrap()
        } else {
            build_index_m_model(self.m, &h, ring, self.a_exp()).unwrap()
        }
    }
}

/// Block models with n = m²r ≤ max_n.
fn block_model(max_n: usize) -> impl Strategy<Value = Params> {
    (any::<bool>(), prop::sample::select(vec![2usize, 4, 6]), prop::sample::select(vec![1u64, 2, 4, 8]), 0i64..64)
        .prop_filter("size", move |(_, m, r, _)| m * m * *r as usize <= max_n)
        .prop_map(|(symmetric, m, r, exp)| Params { symmetric, m, r, exp })
}

fn d_squared_is_n(w: &SpinMatrix, d: &Scalar) -> bool {
    d.mul(d).unwrap().sub(&Scalar::from_int(*w.ring(), w.n() as i64)).unwrap().zero_status(256)
        != smlab::scalar::ZeroStatus::NonZero
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(
        a in random_matrix(Ring::potts(6), 8, 3, 2),
        b in random_matrix(Ring::potts(6), 4, 2, 2),
        c in random_matrix(Ring::potts(6), 6, 2, 2),
    ) {
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert!(left.values_equal(&right));
    }

    #[test]
    fn transpose_commutes_with_tensor(a in random_matrix(Ring::plain(1), 12, 3, 0), b in random_matrix(Ring::plain(1), 8, 3, 0)) {
        let lhs = tensor(&a, &b).unwrap().transpose();
        prop_assert!(lhs.values_equal(&tensor(&a.transpose(), &b.transpose()).unwrap()));
    }

    #[test]
    fn entrywise_minus_is_an_involution(a in random_matrix(Ring::potts(5), 10, 4, 3)) {
        prop_assert!(a.entrywise_minus().entrywise_minus().values_equal(&a));
    }

    #[test]
    fn e_is_multiplicative(a in random_matrix(Ring::potts(6), 4, 3, 3), b in random_matrix(Ring::potts(6), 6, 3, 3)) {
        let ab = compute_e(&tensor(&a, &b).unwrap());
        prop_assert_eq!(ab.values, compute_e(&a).product(&compute_e(&b)).values);
    }

    #[test]
    fn mu_tensor_bound_holds(a in signed_roots(8, 3), b in signed_roots(8, 3)) {
        let bound = mu_tensor_bound(&a, &b).unwrap();
        prop_assert!(bound.divides);
        prop_assert_eq!(Some(bound.mu_product), compute_mu(&tensor(&a, &b).unwrap()).value);
        prop_assert_eq!(bound.mu_a, compute_mu(&a).value.unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn lambda_vanishes_on_the_fourth_index(half in 1i64..=8, i1 in 0i64..16, i2 in 0i64..16, i3 in 0i64..16) {
        let m = 2 * half;
        let (i1, i2, i3) = (i1 % m, i2 % m, i3 % m);
        let i0 = (i1 + i2 - i3).rem_euclid(m);
        prop_assert_eq!(lambda_g(GFn::Delta, i1, i2, i3, i0, m).rem_euclid(m * m), 0);
        prop_assert_eq!(lambda_g(GFn::Epsilon, i1, i2, i3, i0, m).rem_euclid(2 * m * m), 0);
    }

    #[test]
    fn lambda_closed_form(m in 1i64..=12, i in prop::array::uniform4(-20i64..20)) {
        let s = i[0] + i[1] - i[2] - i[3];
        prop_assert_eq!(lambda_g(GFn::Delta, i[0], i[1], i[2], i[3], m), s * s);
        prop_assert_eq!(lambda_g(GFn::Epsilon, i[0], i[1], i[2], i[3], m), s * (s + m));
    }

    #[test]
    fn psi_congruence_holds(k in 1usize..=4, t in -8i64..8, i in 0usize..16, l in 0usize..16, j in 0usize..16, lp in 0usize..16) {
        let m = 4 * k;
        let (lhs, rhs) = psi_congruence(m, t, (i % m, l % m), (j % m, lp % m));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hadamard_moves_are_equivalences(
        p in block_model(128),
        op_kind in 0usize..6,
        x in 0usize..8,
        y in 0usize..8,
        perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let r = p.r as usize;
        let (x, y) = (x % r, y % r);
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v < r).collect();
        let op = match op_kind {
            0 => HadamardOp::NegateRow(x),
            1 => HadamardOp::NegateCol(y),
            2 => HadamardOp::SwapRows(x, y),
            3 => HadamardOp::SwapCols(x, y),
            4 => HadamardOp::PermuteRows(perm),
            _ => HadamardOp::PermuteCols(perm),
        };
        let w1 = p.build();
        let h1 = hadamard(&HadamardSource::Sylvester(p.r.trailing_zeros())).unwrap();
        let h2 = hadamard_transform(&h1, &op).unwrap();
        let w2 = if p.symmetric {
            build_symmetric_model(p.m, &h2, Ring::potts(p.r), 1, p.exp).unwrap()
        } else {
            build_index_m_model(p.m, &h2, Ring::potts(p.r), p.a_exp()).unwrap()
        };
        let chk = check_hadamard_equivalence(&w1, &w2, &kind_for_op(&op, r)).unwrap();
        prop_assert!(chk.holds(), "{:?} {:?}: {:?}", p, op, chk.first_difference);
    }

    #[test]
    fn full_and_blockwise_agree(p in block_model(36)) {
        let w = p.build();
        let full = check_type_iii(&w, Mode::Full).unwrap();
        let block = check_type_iii(&w, Mode::Blockwise).unwrap();
        prop_assert_eq!(full.verdict, Verdict::ExactPass);
        prop_assert_eq!(block.verdict, full.verdict);
        prop_assert_eq!(&block.d, &full.d);
        prop_assert!(d_squared_is_n(&w, full.d.as_ref().unwrap()));
    }

    #[test]
    fn scaled_models_stay_spin_models(p in block_model(64), c in 1usize..4) {
        let w = p.build();
        let l = lcm(w.conductor(), 4);
        let scaled = w.promote(l).scale(EntryMonomial::unit(c as i64 * (l / 4) as i64, 0));
        prop_assert_eq!(check_type_ii(&scaled).verdict, Verdict::ExactPass);
        let rep = check_type_iii(&scaled, Mode::Blockwise).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::ExactPass, "{:?} c={}", p, c);
        prop_assert!(d_squared_is_n(&scaled, rep.d.as_ref().unwrap()));
    }

    #[test]
    fn index_permutation_is_the_shift(p in block_model(128)) {
        let w = p.build();
        let rep = compute_index(&w).unwrap();
        let want = PermutationSpec::identity(p.m)
            .tensor(&PermutationSpec::shift(p.m))
            .tensor(&PermutationSpec::identity(p.r as usize));
        if p.symmetric {
            prop_assert_eq!(rep.index, Some(1));
        } else {
            prop_assert_eq!(rep.permutation.unwrap(), want.images);
            prop_assert_eq!(rep.index, Some(p.m as u64));
        }
    }

    #[test]
    fn block_structure(p in block_model(128)) {
        let w = p.build();
        let labels = w.labels().unwrap();
        let m = p.m;
        let (big, ring, n) = (w.conductor(), *w.ring(), w.n());
        let e = compute_e(&w);
        prop_assert!(!e.is_empty());
        for row in 0..n {
            let (i, l, x) = labels.split(row);
            for col in 0..n {
                let (j, _, _) = labels.split(col);
                let v = w.get(row, col).pack(&ring, big);
                if (i + j) % 2 == 1 {
                    prop_assert!(v.q == (1, 1) && v.k == 0);
                }
                // half-period sign of S_ij
                let shifted = w.get(labels.index(i, (l + m / 2) % m, x), col);
                let sign = if (i + m - j) % 2 == 1 { -1 } else { 1 };
                prop_assert_eq!(v, shifted.mul(EntryMonomial::signed(sign, 0, 0), big).pack(&ring, big));
            }
        }
    }

    #[test]
    fn t_blocks_are_twisted_transposes(p in block_model(128)) {
        prop_assume!(!p.symmetric);
        let w = p.build();
        let labels = w.labels().unwrap();
        let (m, r, big, ring) = (p.m, p.r as usize, w.conductor(), *w.ring());
        // η = a^{2m}
        let eta = EntryMonomial::unit(p.a_exp() * 2 * m as i64, 0);
        for i in 0..m {
            for j in 0..m {
                let twist = eta.pow(i as i64 - j as i64, big).unwrap();
                for x in 0..r {
                    for y in 0..r {
                        let tij = w.get(labels.index(i, 0, x), labels.index(j, 0, y));
                        let tji = w.get(labels.index(j, 0, y), labels.index(i, 0, x));
                        prop_assert_eq!(tij.pack(&ring, big), twist.mul(tji, big).pack(&ring, big));
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_models_are_symmetric(p in block_model(128)) {
        prop_assume!(p.symmetric);
        prop_assert!(p.build().is_symmetric());
    }
}
