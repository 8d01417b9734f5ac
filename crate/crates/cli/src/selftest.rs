//! Quick invariant suites behind `asf-lab selftest`.

use std::time::Instant;

use asf_core::gm_calculus::{generic_directions, lattice_count_formula, OrthogonalSet, SymbolicFamily, Verdict};
use asf_core::rational::q;
use asf_core::transition::build_instance;
use asf_core::typea_roots::Levi;
use asf_core::valuation::{default_precision, make_gamma, minimal_form, root_valuation};
use serde::Serialize;

#[derive(Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub pass: bool,
    pub cases: usize,
    pub detail: String,
}

fn suite(name: &'static str, f: impl FnOnce() -> Result<usize, String>) -> Suite {
    let t = Instant::now();
    let (pass, cases, detail) = match f() {
        Ok(c) => (true, c, String::new()),
        Err(e) => (false, 0, e),
    };
    eprintln!("selftest: {name} took {} ms", t.elapsed().as_millis());
    Suite { name, pass, cases, detail }
}

fn random_sets() -> Result<usize, String> {
    let mut cases = 0;
    for n in 2..=3 {
        let levi = Levi::torus(n);
        for seed in 0..10u64 {
            let h = OrthogonalSet::random_positive(&levi, seed);
            if h.validate() != Verdict::Positive {
                return Err(format!("GL{n} seed {seed}: random set is not positive"));
            }
            let fam = SymbolicFamily::exponential(&h);
            for mu in generic_directions(n, 2, seed) {
                if !fam.check_family_condition(&mu, 6) {
                    return Err(format!("GL{n} seed {seed}: family condition fails"));
                }
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn lattice_counts() -> Result<usize, String> {
    let mut cases = 0;
    let levi = Levi::torus(3);
    for seed in 0..6u64 {
        let h = OrthogonalSet::random_positive(&levi, seed);
        if !h.is_integral() {
            continue;
        }
        let direct = h.lattice_count_enumerated().map_err(|e| e.to_string())?;
        for mu in generic_directions(3, 2, seed + 100) {
            let f = lattice_count_formula(&h, &mu).map_err(|e| e.to_string())?;
            if f != q(direct as i64) {
                return Err(format!("seed {seed}: formula {f}, enumeration {direct}"));
            }
        }
        cases += 1;
    }
    Ok(cases)
}

fn minimal_forms() -> Result<usize, String> {
    let mut cases = 0;
    for n in [vec![0u32], vec![3], vec![1, 2], vec![2, 1], vec![1, 1, 0]] {
        let g = make_gamma(&n, 5, default_precision(&n)).map_err(|e| e.to_string())?;
        let r = root_valuation(&g).map_err(|e| e.to_string())?;
        let d = minimal_form(&r).map_err(|e| e.to_string())?;
        if !d.satisfies_min_rule(&r) {
            return Err(format!("n={n:?}: minimal form violates the min rule"));
        }
        cases += 1;
    }
    Ok(cases)
}

fn gl2_transitions() -> Result<usize, String> {
    let mut cases = 0;
    for p in [2u32, 3] {
        for n in 0..=2u32 {
            let g = make_gamma(&[n], p, default_precision(&[n])).map_err(|e| e.to_string())?;
            let inst = build_instance(&g).map_err(|e| e.to_string())?;
            if !inst.predict_count().holds || !inst.orbitals_from_counts().holds || !inst.round_trip() {
                return Err(format!("n={n} q={p}: transition identity fails"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

pub fn run() -> Vec<Suite> {
    vec![
        suite("random positive sets", random_sets),
        suite("lattice point counts", lattice_counts),
        suite("minimal forms", minimal_forms),
        suite("GL2 transitions", gl2_transitions),
    ]
}
