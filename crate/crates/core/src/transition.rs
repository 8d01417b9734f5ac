//! Exact transition between fundamental-domain counts and weighted orbital integrals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::asf_engine::{auto_window, levi_data, q_pow, widen, Springer};
use crate::gm_calculus::{generic_directions, SymbolicFamily, View};
use crate::rational::{fmt_q, q, Q};
use crate::typea_roots::{enumerate_levis, sign, theta_coefficient, Levi, Parabolic};
use crate::valuation::GammaSpec;
use crate::Error;

/// Everything both transition formulas need for one `γ` at one prime.
#[derive(Clone, Debug)]
pub struct TransitionInstance {
    pub n: usize,
    pub q: u32,
    pub x0: String,
    /// `|F^M_γ(F_q)|`, `J_A^M(γ, 1_{𝔪∩𝔨})` and `Σ_{α ∈ Φ^+(M)} val α(γ)` per Levi.
    pub count: BTreeMap<Levi, Q>,
    pub orbital: BTreeMap<Levi, Q>,
    pub disc: BTreeMap<Levi, u64>,
    /// `v_M^L(Ec(x₀))`: volume of the `Q`-facet of `Ec_M(x₀)`, `Q ∈ 𝒫(L)`.
    pub v_facet: BTreeMap<(Levi, Levi), Q>,
    /// `e_L`.
    pub e: BTreeMap<Levi, Q>,
    /// `(e^{-1})^L_M`: the `(L,A)`-family `1/e^L` projected to `M`.
    pub e_inv: BTreeMap<(Levi, Levi), Q>,
    /// Inverse of `(M, L) ↦ e^L_M` in the incidence algebra of `𝓛(A)`.
    pub e_inv_incidence: BTreeMap<(Levi, Levi), Q>,
    /// `Ec(x₀)_L`: volume of `π_L(Ec_A(x₀))`.
    pub ec_proj: BTreeMap<Levi, Q>,
}

/// One summand of a transition formula.
#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    pub m: String,
    pub l: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub summands: Vec<Summand>,
}

fn facet_parabolic(l: &Levi) -> Parabolic {
    l.standard_parabolic()
}

/// Collects counts, orbital integrals and `(G,M)`-constants for `γ`.
pub fn build_instance(gamma: &GammaSpec) -> Result<TransitionInstance, Error> {
    let n = gamma.n();
    let g = Levi::whole(n);
    let a = Levi::torus(n);
    let w = auto_window(gamma)?;
    let s = Springer::new(&widen(gamma, w)?, w)?;
    let (x0, _) = s.base_points()?;
    let levis = enumerate_levis(n);
    let mu = &generic_directions(n, 1, 0x7a11)[0];

    let mut count = BTreeMap::new();
    let mut orbital = BTreeMap::new();
    let mut disc = BTreeMap::new();
    for m in &levis {
        let (c, j, d) = if m == &g {
            let c = q(s.fundamental_domain_count(&x0)? as i64);
            (c, s.weighted_orbital(&a)?, s.disc_exp())
        } else {
            levi_data(gamma, m)?
        };
        count.insert(m.clone(), c);
        orbital.insert(m.clone(), j);
        disc.insert(m.clone(), d);
    }

    let mut v_facet = BTreeMap::new();
    let mut e_inv = BTreeMap::new();
    for m in &levis {
        let ec_m = s.ec(&x0, m);
        for l in m.levis_above() {
            let qp = facet_parabolic(&l);
            v_facet.insert((m.clone(), l.clone()), ec_m.facet(&qp)?.hull_volume()?.rational);
            let view = View { outer: qp, inner: m.clone() };
            e_inv.insert(
                (m.clone(), l.clone()),
                SymbolicFamily::e_inverse_in(&a, &l).volume_in(&view, mu, None)?,
            );
        }
    }
    let e_inv_incidence = incidence_inverse_e(&levis, &a, mu)?;
    let ec_a = s.ec(&x0, &a);
    let e_a = SymbolicFamily::e_family(&a);
    let mut e = BTreeMap::new();
    let mut ec_proj = BTreeMap::new();
    for l in &levis {
        e.insert(l.clone(), e_a.projected_volume(l, mu)?);
        ec_proj.insert(l.clone(), ec_a.project(l)?.hull_volume()?.rational);
    }
    Ok(TransitionInstance {
        n,
        q: gamma.q(),
        x0: x0.fingerprint(),
        count,
        orbital,
        disc,
        v_facet,
        e,
        e_inv,
        e_inv_incidence,
        ec_proj,
    })
}

/// `c(M, M) = 1`, `c(M, L) = -Σ_{M ⊆ K ⊊ L} c(M, K) e^L_K`.
fn incidence_inverse_e(levis: &[Levi], a: &Levi, mu: &[Q]) -> Result<BTreeMap<(Levi, Levi), Q>, Error> {
    let mut e_rel = BTreeMap::new();
    for l in levis {
        let fam = SymbolicFamily::e_family_in(a, l);
        for k in levis.iter().filter(|k| k.is_contained_in(l)) {
            let view = View { outer: l.standard_parabolic(), inner: k.clone() };
            e_rel.insert((k.clone(), l.clone()), fam.volume_in(&view, mu, None)?);
        }
    }
    let mut by_rank: Vec<&Levi> = levis.iter().collect();
    by_rank.sort_by_key(|l| std::cmp::Reverse(l.num_blocks()));
    let mut c: BTreeMap<(Levi, Levi), Q> = BTreeMap::new();
    for m in levis {
        for l in by_rank.iter().filter(|l| m.is_contained_in(l)) {
            let v = if *l == m {
                Q::one()
            } else {
                let mut acc = Q::zero();
                for k in levis.iter().filter(|k| m.is_contained_in(k) && k.is_contained_in(l) && k != l) {
                    acc -= &c[&(m.clone(), k.clone())] * &e_rel[&(k.clone(), (*l).clone())];
                }
                acc
            };
            c.insert((m.clone(), (*l).clone()), v);
        }
    }
    Ok(c)
}

impl TransitionInstance {
    fn g(&self) -> Levi {
        Levi::whole(self.n)
    }

    fn a(&self) -> Levi {
        Levi::torus(self.n)
    }

    /// `q^{δ} Σ_{M ⊆ L} (-1)^{dim a_A^M} J_A^M v_M^L(Ec(x₀)) e_L`, to be compared with `|F_γ|`.
    pub fn predict_count(&self) -> Report {
        let a = self.a();
        let mut summands = Vec::new();
        let mut total = Q::zero();
        for ((m, l), v) in &self.v_facet {
            let term = sign(a.rank_in(m)) * &self.orbital[m] * v * &self.e[l];
            summands.push(Summand { m: m.key(), l: l.key(), value: fmt_q(&term) });
            total += term;
        }
        let g = self.g();
        let rhs = total * q_pow(self.q, self.disc[&g]);
        let lhs = self.count[&g].clone();
        Report { holds: lhs == rhs, lhs: fmt_q(&lhs), rhs: fmt_q(&rhs), summands }
    }

    /// `Σ_{M ⊆ L} (-1)^{dim a_A^L} |D^M|^{1/2} |F^M| (e^{-1})^L_M Ec(x₀)_L`, to be compared with
    /// `J_A(γ, 1_𝔨)`.
    pub fn orbitals_from_counts(&self) -> Report {
        self.orbitals_with(&self.e_inv)
    }

    /// Same sum with `(e^{-1})^L_M` replaced by the incidence inverse of the `e`-constants.
    pub fn orbitals_from_counts_incidence(&self) -> Report {
        self.orbitals_with(&self.e_inv_incidence)
    }

    fn orbitals_with(&self, e_inv: &BTreeMap<(Levi, Levi), Q>) -> Report {
        let a = self.a();
        let mut summands = Vec::new();
        let mut total = Q::zero();
        for ((m, l), einv) in e_inv {
            let term = sign(a.rank_in(l)) * &self.count[m] / q_pow(self.q, self.disc[m])
                * einv
                * &self.ec_proj[l];
            summands.push(Summand { m: m.key(), l: l.key(), value: fmt_q(&term) });
            total += term;
        }
        let lhs = self.orbital[&self.g()].clone();
        Report { holds: lhs == total, lhs: fmt_q(&lhs), rhs: fmt_q(&total), summands }
    }

    /// Replaces `J_A(γ, 1_𝔨)` by the value the counts give through the second formula and
    /// returns whether the first formula then reproduces `|F_γ|`.
    pub fn round_trip(&self) -> bool {
        self.round_trip_with(&self.e_inv)
    }

    pub fn round_trip_incidence(&self) -> bool {
        self.round_trip_with(&self.e_inv_incidence)
    }

    fn round_trip_with(&self, e_inv: &BTreeMap<(Levi, Levi), Q>) -> bool {
        let mut inst = self.clone();
        match crate::rational::parse_q(&self.orbitals_with(e_inv).rhs) {
            Some(j) => inst.orbital.insert(self.g(), j),
            None => return false,
        };
        inst.predict_count().holds
    }
}

/// `J_M(γ, 1_𝔨)` as `Σ_L θ_A^G(M, L) J_A^L(γ, 1_{𝔩∩𝔨})`, with the parabolic `Q_L^ξ` of each
/// term reported alongside.
pub fn reduce_weighted(gamma: &GammaSpec, m: &Levi, xi: &[Q]) -> Result<(Q, Vec<(String, String)>), Error> {
    let a = Levi::torus(gamma.n());
    let mut total = Q::zero();
    let mut used = Vec::new();
    for l in a.levis_above() {
        let th = theta_coefficient(&a, m, &l);
        if th.is_zero() {
            continue;
        }
        let qp = if m.is_whole() {
            l.standard_parabolic()
        } else {
            crate::gm_calculus::descent_parabolic(m, &l, xi)?
        };
        let j = if l.is_whole() {
            let w = auto_window(gamma)?;
            Springer::new(&widen(gamma, w)?, w)?.weighted_orbital(&a)?
        } else if l.is_torus() {
            Q::one()
        } else {
            levi_data(gamma, &l)?.1
        };
        used.push((l.key(), qp.key()));
        total += th * j;
    }
    Ok((total, used))
}
