use asf_core::gm_calculus::generic_directions;
use asf_core::rational::{q, qf};
use asf_core::transition::*;
use asf_core::typea_roots::{enumerate_levis, Levi};
use asf_core::valuation::{default_precision, make_gamma};
use asf_core::asf_engine::{auto_window, widen, Springer};

fn instance(n: &[u32], p: u32) -> TransitionInstance {
    build_instance(&make_gamma(n, p, default_precision(n)).unwrap()).unwrap()
}

#[test]
fn gl2_both_formulas_hold() {
    for p in [2u32, 3, 5] {
        for n in 0..=3u32 {
            let inst = instance(&[n], p);
            let f = inst.predict_count();
            assert!(f.holds, "n={n} q={p}: {f:?}");
            let w = inst.orbitals_from_counts();
            assert!(w.holds, "n={n} q={p}: {w:?}");
            assert!(inst.round_trip());
        }
    }
}

#[test]
fn gl2_zero_datum_has_a_single_surviving_term() {
    let f = instance(&[0], 3).predict_count();
    assert_eq!((f.lhs.as_str(), f.rhs.as_str()), ("1", "1"));
    let nonzero: Vec<_> = f.summands.iter().filter(|s| s.value != "0").collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!((nonzero[0].m.as_str(), nonzero[0].l.as_str()), ("1|2", "1|2"));
}

#[test]
fn gl3_count_formula_holds() {
    for (n, p) in [(vec![1u32, 0], 2u32), (vec![1, 0], 3), (vec![1, 1], 3), (vec![1, 2], 3)] {
        let f = instance(&n, p).predict_count();
        assert!(f.holds, "n={n:?} q={p}: {f:?}");
    }
}

#[test]
fn gl3_inverse_e_constants() {
    let inst = instance(&[1, 0], 3);
    let (a, g) = (Levi::torus(3), Levi::whole(3));
    assert_eq!(inst.e_inv[&(a.clone(), g.clone())], qf(1, 2));
    assert_eq!(inst.e_inv_incidence[&(a.clone(), g.clone())], q(2));
    for l in a.levis_above().into_iter().filter(|l| l.num_blocks() == 2) {
        assert_eq!(inst.e_inv[&(a.clone(), l.clone())], q(-1));
        assert_eq!(inst.e_inv_incidence[&(a.clone(), l)], q(-1));
    }
    for l in &enumerate_levis(3) {
        assert_eq!(inst.e[l], q(1));
    }
}

#[test]
fn gl3_counts_give_orbitals_through_the_incidence_inverse() {
    for (n, p) in [(vec![1u32, 0], 2u32), (vec![1, 1], 3)] {
        let inst = instance(&n, p);
        let w = inst.orbitals_from_counts_incidence();
        assert!(w.holds, "n={n:?} q={p}: {w:?}");
        assert!(inst.round_trip_incidence());
    }
}

#[test]
fn constants_do_not_depend_on_q() {
    let a = instance(&[1, 0], 2);
    let b = instance(&[1, 0], 3);
    assert_eq!(a.e, b.e);
    assert_eq!(a.e_inv, b.e_inv);
    assert_eq!(a.e_inv_incidence, b.e_inv_incidence);
}

#[test]
fn levi_reduction_matches_direct_weighted_orbitals() {
    let g = make_gamma(&[1, 1], 3, default_precision(&[1, 1])).unwrap();
    let w = auto_window(&g).unwrap();
    let s = Springer::new(&widen(&g, w).unwrap(), w).unwrap();
    let a = Levi::torus(3);
    for xi in generic_directions(3, 3, 11) {
        let xi = a.project(&xi);
        for m in enumerate_levis(3) {
            let (r, used) = reduce_weighted(&g, &m, &xi).unwrap();
            assert_eq!(r, s.weighted_orbital(&m).unwrap(), "M={m}");
            if m.is_whole() {
                assert_eq!(used.len(), 1);
            }
        }
    }
}
