use std::collections::HashMap;

use proptest::prelude::*;
use satake_core::checkers::Caps;
use satake_core::cohomology::{group_cohomology_report, kostant_report, left_adjoint_report};
use satake_core::intlin::{self, mat_mul, mat_vec};
use satake_core::levi::{build_levi, xi_and_hm};
use satake_core::weights::{freudenthal, restrict_mod_p, weyl_dim};
use satake_core::weyl::{
    dot_single, enumerate_weyl, minimal_coset_reps, weak_order_leq, WeylElement,
};
use satake_core::{Preset, RootDatum, UnderlineWeight};

const TYPES: [(&str, Preset); 9] = [
    ("A1", Preset::SimplyConnected),
    ("A1", Preset::GLStyle),
    ("A2", Preset::SimplyConnected),
    ("A2", Preset::GLStyle),
    ("A2", Preset::Adjoint),
    ("B2", Preset::SimplyConnected),
    ("B2", Preset::Adjoint),
    ("G2", Preset::SimplyConnected),
    ("A3", Preset::GLStyle),
];

fn datum(k: usize) -> RootDatum {
    let (t, p) = TYPES[k % TYPES.len()];
    RootDatum::build(t.parse().unwrap(), p).unwrap()
}

fn subset(d: &RootDatum, mask: u32) -> Vec<usize> {
    (0..d.rank()).filter(|i| mask >> i & 1 == 1).collect()
}

fn compose(a: &WeylElement, b: &WeylElement, d: usize) -> Vec<i64> {
    let to_m = |v: &[i64]| v.chunks(d).map(<[i64]>::to_vec).collect::<Vec<_>>();
    mat_mul(&to_m(&a.action), &to_m(&b.action)).concat()
}

/// A dominant weight with small pairings against the simple coroots.
fn dominant(d: &RootDatum, seed: &[i64]) -> Vec<i64> {
    // Solve <lambda, alpha_i^vee> = seed_i when the lattice allows it; else
    // fall back to a multiple of 2 rho, which is always dominant.
    let target: Vec<i64> = (0..d.rank()).map(|i| seed[i % seed.len()]).collect();
    let coroots = d.simple_coroots.clone();
    intlin::solve(&coroots, &target, d.lattice_rank)
        .unwrap_or_else(|| d.two_rho().iter().map(|x| x * seed[0]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coset_factorization(k in 0usize..9, mask in 0u32..8) {
        let d = datum(k);
        let j = subset(&d, mask);
        let w = enumerate_weyl(&d, 10_000).unwrap();
        let reps = minimal_coset_reps(&d, &j, 10_000).unwrap();
        let wj: Vec<&WeylElement> = w.elements.iter().filter(|e| e.word.iter().all(|s| j.contains(s))).collect();
        prop_assert_eq!(wj.len() * reps.len(), w.len());
        let mut hits: HashMap<Vec<i64>, usize> = HashMap::new();
        for u in &wj {
            for v in &reps.elements {
                let prod = compose(u, v, d.lattice_rank);
                let target = w.find_by_action(&prod).unwrap();
                prop_assert_eq!(target.length(), u.length() + v.length());
                *hits.entry(prod).or_default() += 1;
            }
        }
        prop_assert_eq!(hits.len(), w.len());
        prop_assert!(hits.values().all(|&c| c == 1));
    }

    #[test]
    fn dot_action_is_a_group_action(k in 0usize..9, a in 0usize..1000, b in 0usize..1000, x in prop::collection::vec(-6i64..6, 4)) {
        let d = datum(k);
        let w = enumerate_weyl(&d, 10_000).unwrap();
        let (u, v) = (&w.elements[a % w.len()], &w.elements[b % w.len()]);
        let x = &x[..d.lattice_rank];
        let uv = w.find_by_action(&compose(u, v, d.lattice_rank)).unwrap();
        let lhs = dot_single(&d, uv, x).unwrap();
        let rhs = dot_single(&d, u, &dot_single(&d, v, x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(dot_single(&d, &WeylElement::identity(d.lattice_rank), x).unwrap(), x.to_vec());
    }

    #[test]
    fn weak_order_matches_length_additivity(k in 0usize..9, a in 0usize..1000, b in 0usize..1000) {
        let d = datum(k);
        let w = enumerate_weyl(&d, 10_000).unwrap();
        let (y, z) = (&w.elements[a % w.len()], &w.elements[b % w.len()]);
        // y^{-1} has the transposed-inverse action; find it by its word reversed.
        let mut inv = WeylElement::identity(d.lattice_rank);
        for &s in y.word.iter().rev() {
            let r = d.reflection_matrix(s);
            let m: Vec<Vec<i64>> = inv.action.chunks(d.lattice_rank).map(<[i64]>::to_vec).collect();
            inv.action = mat_mul(&m, &r).concat();
        }
        let yinv_z = w.find_by_action(&compose(&inv, z, d.lattice_rank)).unwrap();
        let additive = y.length() + yinv_z.length() == z.length();
        prop_assert_eq!(weak_order_leq(y, z), additive);
    }

    #[test]
    fn restriction_is_additive(k in 0usize..9, mask in 0u32..8, p in prop::sample::select(vec![5u64, 7, 11, 13]),
                               f in 1usize..3, a in prop::collection::vec(-20i64..20, 8), b in prop::collection::vec(-20i64..20, 8)) {
        let d = datum(k);
        let n = d.lattice_rank;
        let j = subset(&d, mask);
        let basis = build_levi(&d, &j, f).unwrap().central_basis;
        let la = UnderlineWeight::new(a.chunks(4).take(f).map(|c| c[..n].to_vec()).collect());
        let lb = UnderlineWeight::new(b.chunks(4).take(f).map(|c| c[..n].to_vec()).collect());
        let ca = restrict_mod_p(&la, &basis, p, f).unwrap();
        let cb = restrict_mod_p(&lb, &basis, p, f).unwrap();
        let cs = restrict_mod_p(&la.add(&lb), &basis, p, f).unwrap();
        for ((x, y), s) in ca.exponents.iter().zip(&cb.exponents).zip(&cs.exponents) {
            prop_assert_eq!((x + y) % ca.modulus, *s);
        }
        prop_assert!(restrict_mod_p(&la.add(&la.neg()), &basis, p, f).unwrap().exponents.iter().all(|&e| e == 0));
    }

    #[test]
    fn freudenthal_total_is_weyl_dimension(k in 0usize..9, seed in prop::collection::vec(0i64..3, 3)) {
        let d = datum(k);
        let lambda = dominant(&d, &seed);
        prop_assume!(d.is_dominant(&lambda));
        let all: Vec<usize> = (0..d.rank()).collect();
        let dim = weyl_dim(&d, &all, &UnderlineWeight::new(vec![lambda.clone()])).unwrap();
        prop_assume!(dim <= 2_000);
        let t = freudenthal(&d, &lambda, 10_000).unwrap();
        prop_assert_eq!(t.total(), dim);
        // Multiplicities are W-invariant.
        let w = enumerate_weyl(&d, 10_000).unwrap();
        for (mu, m) in &t.entries {
            for e in &w.elements {
                prop_assert_eq!(t.get(&e.apply(mu)), *m);
            }
        }
    }

    #[test]
    fn kostant_euler_characteristic_and_duality(k in 0usize..9, mask in 0u32..8, seed in prop::collection::vec(0i64..2, 3), f in 1usize..3) {
        let d = datum(k);
        let j = subset(&d, mask);
        prop_assume!(j.len() < d.rank());
        let lambda = dominant(&d, &seed);
        prop_assume!(d.is_dominant(&lambda));
        let p = 31;
        let lw = UnderlineWeight::repeat(&lambda, f);
        let caps = Caps::default();
        let r = kostant_report(&d, &j, &lw, p, f, &caps).unwrap();
        // Sum of (-1)^i dim H^i vanishes when the nilradical is nonzero.
        let euler: i128 = r.dims().iter().map(|&(i, dim)| if i % 2 == 0 { dim as i128 } else { -(dim as i128) }).sum();
        prop_assert_eq!(euler, 0);
        // Constituent counts are symmetric about dim N_0 / 2.
        let top = build_levi(&d, &j, f).unwrap().dim_n0 as i64;
        for deg in &r.degrees {
            prop_assert_eq!(r.degree(deg.degree).len(), r.degree(top - deg.degree).len());
        }
        // The group report lists the same graded pieces.
        let g = group_cohomology_report(&d, &j, &lw, p, f, &caps).unwrap();
        prop_assert_eq!(g.dims(), r.dims());
    }

    #[test]
    fn left_adjoint_degrees_are_nonpositive(k in 0usize..9, mask in 0u32..8) {
        let d = datum(k);
        let j = subset(&d, mask);
        let zero = UnderlineWeight::zero(d.lattice_rank, 1);
        let r = left_adjoint_report(&d, &j, &zero, 31, 1, &Caps::default()).unwrap();
        let top = build_levi(&d, &j, 1).unwrap().dim_n0 as i64;
        prop_assert_eq!(r.degrees.first().map(|x| x.degree), Some(-top));
        prop_assert_eq!(r.degrees.last().map(|x| x.degree), Some(0));
        // The top-degree constituent is the trivial one.
        prop_assert!(r.degree(0).iter().all(|c| c.weight.is_zero()));
    }

    #[test]
    fn xi_sign_constraints(k in 0usize..9, mask in 0u32..8) {
        let d = datum(k);
        let j = subset(&d, mask);
        let x = xi_and_hm(&d, &j).unwrap();
        for c in &x.components {
            let Some(xi) = &c.xi else {
                prop_assert!(d.components[c.component].iter().all(|i| j.contains(i)));
                continue;
            };
            for &i in &d.components[c.component] {
                let v = intlin::dot(&d.simple_roots[i], xi);
                if j.contains(&i) {
                    prop_assert_eq!(v, 0);
                } else {
                    prop_assert!(v >= 1);
                }
            }
            prop_assert!(c.pairing_with_highest.unwrap() <= x.h_m);
        }
    }

    #[test]
    fn smith_and_kernel(m in prop::collection::vec(prop::collection::vec(-5i64..6, 4), 1..4)) {
        let s = intlin::smith(&m);
        let prod = mat_mul(&mat_mul(&s.left, &m), &s.right);
        for (r, row) in prod.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let want = if r == c { s.invariants.get(r).copied().unwrap_or(0) } else { 0 };
                prop_assert_eq!(v, want);
            }
        }
        for w in s.invariants.windows(2) {
            prop_assert!(w[1] == 0 || w[0] != 0 && w[1] % w[0] == 0);
        }
        for k in intlin::kernel_basis(&m, 4) {
            prop_assert!(mat_vec(&m, &k).iter().all(|&x| x == 0));
        }
    }
}
