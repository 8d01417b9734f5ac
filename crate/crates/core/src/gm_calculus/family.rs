//! `(G,M)`-families with exponential-polynomial members and the limit formula for their volumes.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::laurent::LaurentSeries;
use super::orthogonal::{OrthogonalSet, Volume};
use crate::rational::{self, q, Q};
use crate::typea_roots::{self as roots, Levi, Parabolic};
use crate::Error;

/// Guard terms carried beyond the pole order.
pub const GUARD_TERMS: usize = 4;

#[derive(Clone, Debug)]
pub enum Kind {
    Constant(Q),
    /// `P ↦ exp(λ(h_P))` for a `(G,M)`-orthogonal set `h`.
    Exponential(OrthogonalSet),
    /// `e_P(λ) = Π_{α∈Δ_P} λ(α^∨) / (1 - exp(-λ(α^∨)))`.
    E,
    /// `1/e_P`.
    EInverse,
    /// `e_P` with `Δ_P` replaced by the simple roots of `P ∩ L`.
    ERelative(Levi),
    /// `1/e_P` with `Δ_P` replaced by the simple roots of `P ∩ L`.
    EInverseRelative(Levi),
    Product(Vec<Kind>),
}

#[derive(Clone, Debug)]
pub struct SymbolicFamily {
    levi: Levi,
    kind: Kind,
}

/// Which family derived from `r` is being integrated: the `(L,K)`-family obtained by taking
/// the `Q`-facet (`Q ∈ 𝒫(L)`) and projecting to `K` with `M ⊆ K ⊆ L`.
#[derive(Clone, Debug)]
pub struct View {
    pub outer: Parabolic,
    pub inner: Levi,
}

impl View {
    pub fn full(m: &Levi) -> Self {
        View { outer: Levi::whole(m.n()).standard_parabolic(), inner: m.clone() }
    }

    pub fn facet(m: &Levi, q: &Parabolic) -> Self {
        View { outer: q.clone(), inner: m.clone() }
    }

    pub fn projection(l: &Levi) -> Self {
        View { outer: Levi::whole(l.n()).standard_parabolic(), inner: l.clone() }
    }
}

impl SymbolicFamily {
    pub fn new(levi: Levi, kind: Kind) -> Self {
        SymbolicFamily { levi, kind }
    }

    pub fn exponential(h: &OrthogonalSet) -> Self {
        assert!(h.ambient().is_whole(), "exponential families need a (G,M)-orthogonal set");
        SymbolicFamily { levi: h.levi().clone(), kind: Kind::Exponential(h.clone()) }
    }

    pub fn e_family(m: &Levi) -> Self {
        SymbolicFamily { levi: m.clone(), kind: Kind::E }
    }

    pub fn e_inverse(m: &Levi) -> Self {
        SymbolicFamily { levi: m.clone(), kind: Kind::EInverse }
    }

    /// The `(L,M)`-family `e^L` built from the roots of `L` only, viewed as a `(G,M)`-family.
    pub fn e_family_in(m: &Levi, l: &Levi) -> Self {
        SymbolicFamily { levi: m.clone(), kind: Kind::ERelative(l.clone()) }
    }

    /// The `(L,M)`-family `1/e^L`.
    pub fn e_inverse_in(m: &Levi, l: &Levi) -> Self {
        SymbolicFamily { levi: m.clone(), kind: Kind::EInverseRelative(l.clone()) }
    }

    pub fn constant(m: &Levi, c: Q) -> Self {
        SymbolicFamily { levi: m.clone(), kind: Kind::Constant(c) }
    }

    pub fn product(&self, other: &SymbolicFamily) -> Self {
        assert_eq!(self.levi, other.levi);
        SymbolicFamily {
            levi: self.levi.clone(),
            kind: Kind::Product(vec![self.kind.clone(), other.kind.clone()]),
        }
    }

    pub fn levi(&self) -> &Levi {
        &self.levi
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// `r_P(t·dir)` as a power series known to order `prec`.
    pub fn member(&self, p: &Parabolic, dir: &[Q], prec: usize) -> LaurentSeries {
        eval_kind(&self.kind, p, dir, prec)
    }

    /// Volume of the family seen through `view`, along `λ = t·μ`.
    pub fn volume_in(&self, view: &View, mu: &[Q], order: Option<usize>) -> Result<Q, Error> {
        let m = &self.levi;
        let l = view.outer.levi();
        let k_levi = &view.inner;
        if !m.is_contained_in(k_levi) || !k_levi.is_contained_in(&l) {
            return Err(Error::Invalid(format!(
                "view ({}, {}) does not contain {}",
                view.outer, k_levi, m
            )));
        }
        let k = k_levi.rank_in(&l);
        let prec = match order {
            Some(o) if o <= k => {
                return Err(Error::Compute(format!(
                    "working order {o} too small, at least {} required",
                    k + 1
                )))
            }
            Some(o) => o,
            None => k + 1 + GUARD_TERMS,
        };
        let dir: Vec<Q> =
            k_levi.project(mu).iter().zip(l.project(mu)).map(|(a, b)| a - b).collect();
        let mut total = LaurentSeries::constant(Q::zero(), prec);
        for r in k_levi.parabolics_below(&view.outer) {
            let mut denom = Q::one();
            for c in r.simple_coroots_in(&l) {
                let x = rational::dot(&dir, &c);
                if x.is_zero() {
                    return Err(Error::Compute(format!(
                        "direction is not generic: a coroot of {r} pairs to zero"
                    )));
                }
                denom *= x;
            }
            let p = m.parabolics_below(&r).swap_remove(0);
            let f = self.member(&p, &dir, prec);
            total = &total + &f.scale(&denom.recip());
        }
        for e in 0..k as i64 {
            if !total.coeff(e).expect("within precision").is_zero() {
                return Err(Error::Invariant(format!(
                    "principal part does not cancel at t^{}",
                    e - k as i64
                )));
            }
        }
        Ok(total.coeff(k as i64).expect("within precision"))
    }

    /// `r_M`.
    pub fn volume(&self, mu: &[Q]) -> Result<Q, Error> {
        self.volume_in(&View::full(&self.levi), mu, None)
    }

    /// `r_M^Q`, the volume of the `Q`-facet.
    pub fn facet_volume(&self, q: &Parabolic, mu: &[Q]) -> Result<Q, Error> {
        self.volume_in(&View::facet(&self.levi, q), mu, None)
    }

    /// `r_L`, the volume of `π_L(r)`.
    pub fn projected_volume(&self, l: &Levi, mu: &[Q]) -> Result<Q, Error> {
        self.volume_in(&View::projection(l), mu, None)
    }

    /// Checks the compatibility condition on walls: for adjacent `P, P'` and `μ` orthogonal
    /// to `β^∨_{P,P'}`, the members agree to order `prec`.
    pub fn check_family_condition(&self, mu: &[Q], prec: usize) -> bool {
        let ps = self.levi.parabolics();
        for p in &ps {
            for p2 in &ps {
                let Some(beta) = roots::adjacency(p, p2) else { continue };
                // Move μ onto the wall ⟨μ,β^∨⟩ = 0.
                let mu_m = self.levi.project(mu);
                let s = rational::dot(&mu_m, &beta) / rational::dot(&beta, &beta);
                let w: Vec<Q> = mu_m.iter().zip(&beta).map(|(a, b)| a - &s * b).collect();
                if self.member(p, &w, prec) != self.member(p2, &w, prec) {
                    return false;
                }
            }
        }
        true
    }
}

fn eval_kind(kind: &Kind, p: &Parabolic, dir: &[Q], prec: usize) -> LaurentSeries {
    match kind {
        Kind::Constant(c) => LaurentSeries::constant(c.clone(), prec),
        Kind::Exponential(h) => {
            let v = h.get(p).expect("parabolic in the index of the set");
            LaurentSeries::exp_linear(&rational::dot(dir, v), prec)
        }
        Kind::E | Kind::EInverse | Kind::ERelative(_) | Kind::EInverseRelative(_) => {
            let coroots = match kind {
                Kind::ERelative(l) | Kind::EInverseRelative(l) => p.simple_coroots_in(l),
                _ => p.simple_coroots(),
            };
            let mut acc = LaurentSeries::one(prec);
            for c in coroots {
                let x = rational::dot(dir, &c);
                let f = if matches!(kind, Kind::E | Kind::ERelative(_)) {
                    LaurentSeries::x_over_one_minus_exp(&x, prec)
                } else {
                    LaurentSeries::one_minus_exp_over_x(&x, prec)
                };
                acc = &acc * &f;
            }
            acc
        }
        Kind::Product(parts) => parts.iter().fold(LaurentSeries::one(prec), |acc, k| {
            &acc * &eval_kind(k, p, dir, prec)
        }),
    }
}

/// `|E(h) ∩ Λ_M|` from the lattice-point generating function
/// `Σ_P e^{λ(h_P)} Π_{α∈Δ_P} (1 - e^{-λ(α^∨)})^{-1}` at `λ → 0`.
pub fn lattice_count_formula(h: &OrthogonalSet, mu: &[Q]) -> Result<Q, Error> {
    if !h.is_integral() {
        return Err(Error::Invalid("lattice count formula needs an integral set".into()));
    }
    let m = h.levi();
    let l = h.ambient();
    let k = h.dim();
    let prec = k + 1 + GUARD_TERMS;
    let dir: Vec<Q> = m.project(mu).iter().zip(l.project(mu)).map(|(a, b)| a - b).collect();
    let mut total = LaurentSeries::constant(Q::zero(), prec);
    for (p, v) in h.points() {
        let mut term = LaurentSeries::exp_linear(&rational::dot(&dir, v), prec + k);
        for c in p.simple_coroots_in(&l) {
            let x = rational::dot(&dir, &c);
            if x.is_zero() {
                return Err(Error::Compute(format!(
                    "direction is not generic: a coroot of {p} pairs to zero"
                )));
            }
            term = &term * &LaurentSeries::inv_one_minus_exp(&x, prec + k)?;
        }
        total = &total + &term;
    }
    for e in -(k as i64)..0 {
        if !total.coeff(e).expect("within precision").is_zero() {
            return Err(Error::Invariant(format!("principal part does not cancel at t^{e}")));
        }
    }
    Ok(total.coeff(0).expect("within precision"))
}

/// Whether `v` separates all averages over disjoint nonempty index subsets; such a direction
/// pairs nontrivially with every coroot of every Levi.
impl OrthogonalSet {
    /// Volume of `E(h)`: from the vertices up to dimension 2, through the exponential family
    /// beyond.
    pub fn hull_volume(&self) -> Result<Volume, Error> {
        if self.dim() <= 2 {
            return self.hull_volume_direct();
        }
        let fam = SymbolicFamily { levi: self.levi().clone(), kind: Kind::Exponential(self.clone()) };
        let mu = &generic_directions(self.levi().n(), 1, 0x5eed)[0];
        let view = View { outer: self.outer().clone(), inner: self.levi().clone() };
        let rational = fam.volume_in(&view, mu, None)?;
        Ok(Volume { rational, norm_sq: self.levi().covolume_sq_in(&self.ambient()) })
    }
}

pub fn is_generic(v: &[Q]) -> bool {
    let n = v.len();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let (mut sa, mut ca, mut sb, mut cb) = (Q::zero(), 0i64, Q::zero(), 0i64);
        let mut c = code;
        for x in v {
            match c % 3 {
                1 => {
                    sa += x;
                    ca += 1;
                }
                2 => {
                    sb += x;
                    cb += 1;
                }
                _ => {}
            }
            c /= 3;
        }
        if ca > 0 && cb > 0 && sa * q(cb) == sb * q(ca) {
            return false;
        }
    }
    true
}

/// Deterministic sequence of generic directions in `R^n`.
pub fn generic_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Q> = (0..n)
            .map(|_| rational::qf(rng.gen_range(-1000..=1000), rng.gen_range(1..=97)))
            .collect();
        if is_generic(&v) {
            out.push(v);
        }
    }
    out
}

/// The parabolic `Q ∈ 𝒫(L')` singled out by a generic `ξ ∈ a_M^G` in the descent formula:
/// `ξ + a_L` meets `a_{L'}^G` in one point `b`, and `b ∈ a_Q^+`.
pub fn descent_parabolic(l: &Levi, l2: &Levi, xi: &[Q]) -> Result<Parabolic, Error> {
    let n = xi.len();
    let (nl, nl2) = (l.num_blocks(), l2.num_blocks());
    // unknowns: β (one per L' block), γ (one per L block); β_{L'(i)} - γ_{L(i)} = ξ_i, Σ β = 0.
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for (i, x) in xi.iter().enumerate() {
        let mut row = vec![Q::zero(); nl2 + nl];
        row[l2.block_of(i)] = Q::one();
        row[nl2 + l.block_of(i)] = -Q::one();
        rows.push(row);
        rhs.push(x.clone());
    }
    let mut row = vec![Q::zero(); nl2 + nl];
    for (k, b) in l2.blocks().iter().enumerate() {
        row[k] = q(b.len() as i64);
    }
    rows.push(row);
    rhs.push(Q::zero());
    let sol = rational::solve(&rows, &rhs)
        .ok_or_else(|| Error::Compute(format!("a_{l}^G and a_{l2}^G are not complementary")))?;
    let mut order: Vec<usize> = (0..nl2).collect();
    order.sort_by(|&a, &b| sol[b].cmp(&sol[a]));
    if order.windows(2).any(|w| sol[w[0]] == sol[w[1]]) {
        return Err(Error::Compute("ξ is not generic for the descent formula".into()));
    }
    Parabolic::new(n, order.iter().map(|&k| l2.blocks()[k].clone()).collect())
}

/// Right-hand side of the descent formula `r_L = Σ_{L'} θ(L,L') r_M^{Q_{L'}}`.
pub fn descent_rhs(f: &SymbolicFamily, l: &Levi, xi: &[Q], mu: &[Q]) -> Result<Q, Error> {
    let m = f.levi();
    let g = Levi::whole(m.n());
    let mut acc = Q::zero();
    for l2 in m.levis_above() {
        let th = roots::theta_coefficient(m, l, &l2);
        if th.is_zero() {
            continue;
        }
        let qp = if l == &g {
            l2.standard_parabolic()
        } else {
            descent_parabolic(l, &l2, xi)?
        };
        acc += th * f.facet_volume(&qp, mu)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm_calculus::orthogonal::Volume;

    fn gl2(b: [i64; 2], bm: [i64; 2]) -> OrthogonalSet {
        OrthogonalSet::from_fn(&Levi::torus(2), |p| {
            let v = if p.order() == vec![0, 1] { b } else { bm };
            v.iter().map(|&x| q(x)).collect()
        })
    }

    #[test]
    fn e_family_constants() {
        let mu = &generic_directions(2, 1, 1)[0];
        let a = Levi::torus(2);
        let g = Levi::whole(2);
        assert_eq!(SymbolicFamily::e_family(&a).volume(mu).unwrap(), q(1));
        assert_eq!(SymbolicFamily::e_family(&g).volume(mu).unwrap(), q(1));
        assert_eq!(SymbolicFamily::e_inverse(&a).volume(mu).unwrap(), q(-1));
        assert_eq!(SymbolicFamily::e_inverse(&g).volume(mu).unwrap(), q(1));
        let prod = SymbolicFamily::e_family(&a).product(&SymbolicFamily::e_inverse(&a));
        assert_eq!(prod.volume(mu).unwrap(), q(0));
    }

    #[test]
    fn constant_and_point_families_vanish() {
        let mu = &generic_directions(3, 1, 2)[0];
        let a = Levi::torus(3);
        assert_eq!(SymbolicFamily::constant(&a, q(5)).volume(mu).unwrap(), q(0));
        let pt = OrthogonalSet::point(&a, &[q(1), q(2), q(-3)]);
        assert_eq!(SymbolicFamily::exponential(&pt).volume(mu).unwrap(), q(0));
    }

    #[test]
    fn segment_volume_matches_direct() {
        let s = gl2([1, 0], [0, 1]);
        let mu = &generic_directions(2, 1, 3)[0];
        let v = SymbolicFamily::exponential(&s).volume(mu).unwrap();
        assert_eq!(s.hull_volume_direct().unwrap(), Volume { rational: v, norm_sq: q(2) });
        assert_eq!(lattice_count_formula(&s, mu).unwrap(), q(2));
    }

    #[test]
    fn order_and_genericity_errors() {
        let a = Levi::torus(3);
        let f = SymbolicFamily::e_family(&a);
        let mu = &generic_directions(3, 1, 4)[0];
        assert!(matches!(f.volume_in(&View::full(&a), mu, Some(2)), Err(Error::Compute(_))));
        assert!(f.volume_in(&View::full(&a), mu, Some(3)).is_ok());
        assert!(matches!(f.volume(&[q(1), q(1), q(0)]), Err(Error::Compute(_))));
        assert!(!is_generic(&[q(1), q(2), q(3)]));
    }

    #[test]
    fn e_family_on_walls() {
        let a = Levi::torus(3);
        let mu = &generic_directions(3, 1, 5)[0];
        assert!(SymbolicFamily::e_family(&a).check_family_condition(mu, 6));
        assert!(SymbolicFamily::e_inverse(&a).check_family_condition(mu, 6));
    }
}
