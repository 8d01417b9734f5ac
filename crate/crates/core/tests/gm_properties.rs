use asf_core::gm_calculus::{
    descent_rhs, generic_directions, lattice_count_formula, OrthogonalSet, SymbolicFamily, Verdict,
};
use asf_core::rational::{q, Q};
use asf_core::typea_roots::{enumerate_levis, Levi};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random integral submodular function on subsets of `{0..n}`: a modular part plus
/// nonnegative multiples of truncated cardinalities `min(|S ∩ T|, k)`.
fn random_submodular(n: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
    let terms: Vec<(u32, i64, i64)> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(1..(1u32 << n)), rng.gen_range(1..=n as i64), rng.gen_range(0..=3)))
        .collect();
    (0..(1u32 << n))
        .map(|s| {
            let modular: i64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| w[i]).sum();
            let concave: i64 =
                terms.iter().map(|&(t, k, c)| c * ((s & t).count_ones() as i64).min(k)).sum();
            modular + concave
        })
        .collect()
}

fn random_set(m: &Levi, seed: u64) -> OrthogonalSet {
    let z = random_submodular(m.n(), seed);
    OrthogonalSet::from_submodular(m, |s| q(z[s as usize]))
}

/// Lattice points of a lattice polygon by Pick's theorem, with its own hull.
fn pick_count(pts: &[(i64, i64)]) -> (Q, i64) {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() == 1 {
        return (Q::zero(), 1);
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    // gift wrapping, keeping only extreme vertices
    let start = p[0];
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = if p[0] == cur { p[1] } else { p[0] };
        for &c in &p {
            if c == cur {
                continue;
            }
            let x = cross(cur, next, c);
            let farther = (c.0 - cur.0).abs() + (c.1 - cur.1).abs()
                > (next.0 - cur.0).abs() + (next.1 - cur.1).abs();
            if x < 0 || (x == 0 && farther) {
                next = c;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
    }
    let k = hull.len();
    let mut twice = 0i64;
    let mut boundary = 0i64;
    for i in 0..k {
        let (a, b) = (hull[i], hull[(i + 1) % k]);
        twice += a.0 * b.1 - b.0 * a.1;
        boundary += (b.0 - a.0).gcd(&(b.1 - a.1));
    }
    let area = Q::new(twice.abs().into(), 2.into());
    // I + B = A + B/2 + 1
    (area.clone(), ((twice.abs() + boundary) / 2) + 1)
}

fn chi_xy(v: &[Q]) -> (i64, i64) {
    let x = v[0].to_integer();
    let y = v[1].to_integer();
    (x.try_into().unwrap(), y.try_into().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn gl3_torus_sets_match_pick(seed in any::<u64>()) {
        let a = Levi::torus(3);
        let h = random_set(&a, seed);
        prop_assert_eq!(h.validate(), Verdict::Positive);
        let pts: Vec<(i64, i64)> = h.points().values().map(|v| chi_xy(v)).collect();
        let (area, count) = pick_count(&pts);
        let mu = &generic_directions(3, 1, seed)[0];
        prop_assert_eq!(h.hull_volume_direct().unwrap().rational, area.clone());
        prop_assert_eq!(SymbolicFamily::exponential(&h).volume(mu).unwrap(), area);
        prop_assert_eq!(h.lattice_count_enumerated().unwrap() as i64, count);
        prop_assert_eq!(lattice_count_formula(&h, mu).unwrap(), q(count));
    }

    #[test]
    fn count_and_volume_agree_on_all_levis(seed in any::<u64>(), n in 2usize..=3) {
        let mus = generic_directions(n, 3, seed ^ 0x5eed);
        for m in enumerate_levis(n) {
            let h = random_set(&m, seed);
            prop_assert_eq!(h.validate(), Verdict::Positive);
            let direct = h.hull_volume_direct().unwrap().rational;
            let count = q(h.lattice_count_enumerated().unwrap() as i64);
            for mu in &mus {
                prop_assert_eq!(SymbolicFamily::exponential(&h).volume(mu).unwrap(), direct.clone());
                prop_assert_eq!(lattice_count_formula(&h, mu).unwrap(), count.clone());
            }
        }
    }

    #[test]
    fn translation_invariance(seed in any::<u64>(), shift in prop::collection::vec(-5i64..=5, 3)) {
        let a = Levi::torus(3);
        let h = random_set(&a, seed);
        let by: Vec<Q> = shift.iter().map(|&x| q(x)).collect();
        let t = h.translate(&by);
        prop_assert_eq!(t.lattice_count_enumerated().unwrap(), h.lattice_count_enumerated().unwrap());
        let frac: Vec<Q> = shift.iter().map(|&x| Q::new(x.into(), 7.into())).collect();
        let mu = &generic_directions(3, 1, seed)[0];
        prop_assert_eq!(
            SymbolicFamily::exponential(&h.translate(&frac)).volume(mu).unwrap(),
            h.hull_volume_direct().unwrap().rational
        );
    }

    #[test]
    fn sum_with_point_is_translation(seed in any::<u64>(), pt in prop::collection::vec(-3i64..=3, 3)) {
        let a = Levi::torus(3);
        let c = random_set(&a, seed);
        let p: Vec<Q> = pt.iter().map(|&x| q(x)).collect();
        let d = OrthogonalSet::point(&a, &p);
        let s = c.sum(&d);
        prop_assert_eq!(s, c.translate(&p));
    }

    #[test]
    fn descent_formula(seed in any::<u64>()) {
        let a = Levi::torus(3);
        let h = random_set(&a, seed);
        let f = SymbolicFamily::exponential(&h);
        let mu = &generic_directions(3, 1, seed)[0];
        for xi in generic_directions(3, 3, seed.wrapping_add(1)) {
            let xi = a.project(&xi);
            for l in enumerate_levis(3) {
                let lhs = f.projected_volume(&l, mu).unwrap();
                let rhs = descent_rhs(&f, &l, &xi, mu).unwrap();
                prop_assert_eq!(lhs, rhs, "L = {}", l);
            }
        }
    }
}

#[test]
fn e_inverse_facets_in_gl3_are_independent_of_q() {
    let mu = &generic_directions(3, 1, 11)[0];
    for m in enumerate_levis(3) {
        let f = SymbolicFamily::e_inverse(&m);
        for l in m.levis_above() {
            let vals: Vec<Q> =
                l.parabolics().iter().map(|qp| f.facet_volume(qp, mu).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[0] == w[1]), "M={m} L={l}: {vals:?}");
        }
    }
    // The facet keeps the roots outside L, so it differs from the intrinsic family of L.
    let a = Levi::torus(3);
    let l = Levi::parse(3, "1|23").unwrap();
    let qp = l.standard_parabolic();
    assert_eq!(SymbolicFamily::e_inverse(&a).facet_volume(&qp, mu).unwrap(), Q::new((-1).into(), 2.into()));
    assert_eq!(SymbolicFamily::e_inverse_in(&a, &l).facet_volume(&qp, mu).unwrap(), q(-1));
}

#[test]
fn e_inverse_facets_in_gl4_depend_on_q() {
    let mu = &generic_directions(4, 1, 11)[0];
    let a = Levi::torus(4);
    let l = Levi::parse(4, "1|2|34").unwrap();
    let f = SymbolicFamily::e_inverse(&a);
    let vals: Vec<Q> = l.parabolics().iter().map(|qp| f.facet_volume(qp, mu).unwrap()).collect();
    assert!(vals.windows(2).any(|w| w[0] != w[1]));
    // the intrinsic family of L is the GL2 value on the block {3,4}
    let intrinsic = SymbolicFamily::e_inverse_in(&a, &l);
    for qp in l.parabolics() {
        assert_eq!(intrinsic.facet_volume(&qp, mu).unwrap(), q(-1));
    }
}

#[test]
fn e_family_projections_are_one() {
    for n in 2..=4 {
        let mu = &generic_directions(n, 1, 12)[0];
        let a = Levi::torus(n);
        let e = SymbolicFamily::e_family(&a);
        for l in enumerate_levis(n) {
            assert_eq!(e.projected_volume(&l, mu).unwrap(), q(1));
        }
    }
}

#[test]
fn gl2_inverse_e_signs() {
    // (e^{-1})_M^L = (-1)^{dim a_M^L} for GL2.
    let mu = &generic_directions(2, 1, 13)[0];
    let a = Levi::torus(2);
    let g = Levi::whole(2);
    let f = SymbolicFamily::e_inverse(&a);
    assert_eq!(f.facet_volume(&g.standard_parabolic(), mu).unwrap(), q(-1));
    for b in a.parabolics() {
        assert_eq!(f.facet_volume(&b, mu).unwrap(), q(1));
    }
    assert!(q(-1).is_negative());
}

#[test]
fn gl4_volume_is_the_leading_ehrhart_coefficient() {
    use asf_core::series::QPolynomial;
    let a = Levi::torus(4);
    let mut nonzero = 0;
    for seed in 0..3u64 {
        let z: Vec<i64> = random_submodular(4, 900 + seed)
            .iter()
            .enumerate()
            .map(|(s, v)| {
                let k = (s as u32).count_ones() as i64;
                v + k * (4 - k)
            })
            .collect();
        let counts: Vec<(Q, Q)> = (0..5i64)
            .map(|t| {
                let h = OrthogonalSet::from_submodular(&a, |s| q(t * z[s as usize]));
                (q(t), q(h.lattice_count_enumerated().unwrap() as i64))
            })
            .collect();
        let ehrhart = QPolynomial::lagrange(&counts[..4]);
        assert_eq!(ehrhart.eval(&counts[4].0), counts[4].1);
        let h = OrthogonalSet::from_submodular(&a, |s| q(z[s as usize]));
        let vol = h.hull_volume().unwrap().rational;
        assert_eq!(ehrhart.coeffs.get(3).cloned().unwrap_or_else(Q::zero), vol, "seed {seed}");
        nonzero += usize::from(!vol.is_zero());
    }
    assert!(nonzero > 0);
}
