//! Orthogonal sets, their hulls `E(h)`, direct volumes and lattice-point enumeration.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rational::{self, fmt_q, parse_q, Q};
use crate::typea_roots::{self as roots, Levi, Parabolic};
use crate::Error;

/// An `(L,M)`-orthogonal set: points of `a_M` indexed by the parabolics `P ∈ 𝒫(M)` lying in
/// a fixed `Q ∈ 𝒫(L)`. With `L = G` this is a `(G,M)`-orthogonal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalSet {
    levi: Levi,
    outer: Parabolic,
    points: BTreeMap<Parabolic, Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    /// Adjacent pair with a negative coefficient.
    OrthogonalNotPositive { p: String, p2: String, c: Q },
    Invalid(String),
}

/// A volume `rational · sqrt(norm_sq)`: `rational` is measured against the coroot lattice
/// (covolume 1), `norm_sq` is the squared Euclidean covolume of that lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    pub rational: Q,
    pub norm_sq: Q,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    n: usize,
    levi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outer: Option<String>,
    points: BTreeMap<String, Vec<String>>,
}

impl OrthogonalSet {
    /// A `(G,M)`-orthogonal set. Points must cover `𝒫(M)`; checked by [`validate`](Self::validate).
    pub fn new(levi: Levi, points: BTreeMap<Parabolic, Vec<Q>>) -> Self {
        let outer = Levi::whole(levi.n()).standard_parabolic();
        OrthogonalSet { levi, outer, points }
    }

    /// Builds a set by evaluating `f` on every `P ∈ 𝒫(M)`.
    pub fn from_fn(levi: &Levi, mut f: impl FnMut(&Parabolic) -> Vec<Q>) -> Self {
        let points = levi.parabolics().into_iter().map(|p| {
            let v = f(&p);
            (p, v)
        });
        Self::new(levi.clone(), points.collect())
    }

    /// The vertex set of the base polytope `{a : Σ_{i∈S} a_i ≤ z(S), Σ_i a_i = z(all)}` where
    /// `z` is given on unions of blocks of `M` as a function of the index bitmask. For
    /// submodular `z` the result is a positive orthogonal set.
    pub fn from_submodular(levi: &Levi, z: impl Fn(u32) -> Q) -> Self {
        Self::from_fn(levi, |p| {
            let mut v = vec![Q::zero(); levi.n()];
            let mut mask = 0u32;
            let mut prev = z(0);
            for b in p.blocks() {
                for &i in b {
                    mask |= 1 << i;
                }
                let cur = z(mask);
                let each = (&cur - &prev) / rational::q(b.len() as i64);
                for &i in b {
                    v[i] = each.clone();
                }
                prev = cur;
            }
            v
        })
    }

    /// The point set `{λ}` for every parabolic.
    /// A random positive integral set: `from_submodular` on a modular part plus nonnegative
    /// multiples of truncated cardinalities `min(|S ∩ T|, k)`.
    pub fn random_positive(levi: &Levi, seed: u64) -> Self {
        let n = levi.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let terms: Vec<(u32, i64, i64)> = (0..rng.gen_range(1..=3))
            .map(|_| (rng.gen_range(1..(1u32 << n)), rng.gen_range(1..=n as i64), rng.gen_range(0..=3)))
            .collect();
        Self::from_submodular(levi, |s| {
            let modular: i64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| w[i]).sum();
            let concave: i64 = terms.iter().map(|&(t, k, c)| c * ((s & t).count_ones() as i64).min(k)).sum();
            rational::q(modular + concave)
        })
    }

    pub fn point(levi: &Levi, at: &[Q]) -> Self {
        Self::from_fn(levi, |_| at.to_vec())
    }

    pub fn levi(&self) -> &Levi {
        &self.levi
    }

    /// The Levi `L` of the ambient parabolic.
    pub fn ambient(&self) -> Levi {
        self.outer.levi()
    }

    pub fn outer(&self) -> &Parabolic {
        &self.outer
    }

    /// `dim a_M^L`.
    pub fn dim(&self) -> usize {
        self.levi.rank_in(&self.ambient())
    }

    pub fn points(&self) -> &BTreeMap<Parabolic, Vec<Q>> {
        &self.points
    }

    pub fn get(&self, p: &Parabolic) -> Option<&Vec<Q>> {
        self.points.get(p)
    }

    /// The index set `𝒫^L(M)`.
    pub fn index(&self) -> Vec<Parabolic> {
        self.levi.parabolics_below(&self.outer)
    }

    pub fn parse_json(s: &str) -> Result<Self, Error> {
        let w: Wire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let levi = Levi::parse(w.n, &w.levi)?;
        let outer = match &w.outer {
            Some(k) => Parabolic::parse(w.n, k)?,
            None => Levi::whole(w.n).standard_parabolic(),
        };
        let mut points = BTreeMap::new();
        for (k, v) in &w.points {
            let p = Parabolic::parse(w.n, k)?;
            let coords = v
                .iter()
                .map(|s| parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != w.n {
                return Err(Error::Parse(format!("point {k} has {} coordinates", coords.len())));
            }
            points.insert(p, coords);
        }
        Ok(OrthogonalSet { levi, outer, points })
    }

    pub fn to_json(&self) -> String {
        let n = self.levi.n();
        let w = Wire {
            n,
            levi: self.levi.key(),
            outer: (!self.outer.levi().is_whole()).then(|| self.outer.key()),
            points: self
                .points
                .iter()
                .map(|(p, v)| (p.key(), v.iter().map(fmt_q).collect()))
                .collect(),
        };
        serde_json::to_string(&w).expect("serializable")
    }

    /// Checks the orthogonality relations `h_P - h_P' = c β^∨_{P,P'}` and the sign of `c`.
    pub fn validate(&self) -> Verdict {
        let index = self.index();
        for p in &index {
            let Some(v) = self.points.get(p) else {
                return Verdict::Invalid(format!("missing parabolic {p}"));
            };
            if !roots::is_block_constant(&self.levi, v) {
                return Verdict::Invalid(format!("point for {p} is not constant on blocks"));
            }
        }
        if let Some(extra) = self.points.keys().find(|k| !index.contains(k)) {
            return Verdict::Invalid(format!("unexpected parabolic {extra}"));
        }
        let l = self.ambient();
        let base = l.project(&self.points[&index[0]]);
        for p in &index {
            if l.project(&self.points[p]) != base {
                return Verdict::Invalid(format!("point for {p} has a different a_L component"));
            }
        }
        let mut witness = None;
        for p in &index {
            for k in 0..p.blocks().len().saturating_sub(1) {
                let (b1, b2) = (&p.blocks()[k], &p.blocks()[k + 1]);
                if l.block_of(b1[0]) != l.block_of(b2[0]) {
                    continue;
                }
                let mut blocks = p.blocks().to_vec();
                blocks.swap(k, k + 1);
                let p2 = Parabolic::new(p.n(), blocks).expect("permuted blocks");
                let beta = roots::block_coroot(p.n(), b1, b2);
                let diff: Vec<Q> =
                    self.points[p].iter().zip(&self.points[&p2]).map(|(a, b)| a - b).collect();
                let c = &diff[b1[0]] / &beta[b1[0]];
                if diff.iter().zip(&beta).any(|(d, b)| *d != &c * b) {
                    return Verdict::Invalid(format!(
                        "h_{p} - h_{p2} is not a multiple of the coroot"
                    ));
                }
                if c.is_negative() && witness.is_none() {
                    witness = Some(Verdict::OrthogonalNotPositive {
                        p: p.key(),
                        p2: p2.key(),
                        c,
                    });
                }
            }
        }
        witness.unwrap_or(Verdict::Positive)
    }

    /// Every point lies in `Λ_M`.
    pub fn is_integral(&self) -> bool {
        self.points.values().all(|v| roots::in_lattice(&self.levi, v))
    }

    pub fn translate(&self, by: &[Q]) -> Self {
        let points = self
            .points
            .iter()
            .map(|(p, v)| (p.clone(), v.iter().zip(by).map(|(a, b)| a + b).collect()))
            .collect();
        OrthogonalSet { levi: self.levi.clone(), outer: self.outer.clone(), points }
    }

    /// Pointwise sum `c + d` of two sets on the same index.
    pub fn sum(&self, other: &OrthogonalSet) -> Self {
        let points = self
            .points
            .iter()
            .map(|(p, v)| (p.clone(), v.iter().zip(&other.points[p]).map(|(a, b)| a + b).collect()))
            .collect();
        OrthogonalSet { levi: self.levi.clone(), outer: self.outer.clone(), points }
    }

    /// The `Q`-facet: the `(L,M)`-set `{h_P : P ⊆ Q}` for `Q ∈ 𝓕(M)` containing `outer`.
    pub fn facet(&self, q: &Parabolic) -> Result<Self, Error> {
        if !q.is_contained_in(&self.outer) || !self.levi.is_contained_in(&q.levi()) {
            return Err(Error::Invalid(format!("{q} is not a facet of this set")));
        }
        let points = self
            .levi
            .parabolics_below(q)
            .into_iter()
            .map(|p| {
                let v = self.points[&p].clone();
                (p, v)
            })
            .collect();
        Ok(OrthogonalSet { levi: self.levi.clone(), outer: q.clone(), points })
    }

    /// `π_L(h)`: the `(G,L)`-set `Q ↦ π_L(h_P)` for any `P ⊆ Q`.
    pub fn project(&self, l: &Levi) -> Result<Self, Error> {
        if !self.levi.is_contained_in(l) || !l.is_contained_in(&self.ambient()) {
            return Err(Error::Invalid(format!("{l} does not lie between M and the ambient Levi")));
        }
        let points = l
            .parabolics_below(&self.outer)
            .into_iter()
            .map(|q| {
                let p = self.levi.parabolics_below(&q).swap_remove(0);
                (q, l.project(&self.points[&p]))
            })
            .collect();
        Ok(OrthogonalSet { levi: l.clone(), outer: self.outer.clone(), points })
    }

    /// Integer coordinates of `v - w` (both in the slice) in the coroot basis of `a_M^L`.
    fn coords(&self, v: &[Q], w: &[Q]) -> Vec<Q> {
        let diff: Vec<Q> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        let chi = roots::chi_coords(&self.levi, &diff);
        let mut out = Vec::with_capacity(self.dim());
        for group in self.levi.blocks_inside(&self.ambient()) {
            let mut acc = Q::zero();
            for b in group.iter().take(group.len().saturating_sub(1)) {
                let k = self.levi.block_of(b[0]);
                acc += &chi[k];
                out.push(acc.clone());
            }
        }
        out
    }

    fn from_coords(&self, base: &[Q], z: &[Q]) -> Vec<Q> {
        let basis = self.levi.coroot_basis_in(&self.ambient());
        let mut v = base.to_vec();
        for (c, b) in z.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }

    /// `a ∈ E(h)`: `h_P - a ∈ cone(Δ_P^{L,∨})` for every `P`.
    pub fn contains(&self, a: &[Q]) -> bool {
        let l = self.ambient();
        self.points.iter().all(|(p, h)| {
            let diff: Vec<Q> = h.iter().zip(a).map(|(x, y)| x - y).collect();
            if !roots::is_block_constant(&self.levi, &diff) {
                return false;
            }
            let mut sums: BTreeMap<usize, Q> = BTreeMap::new();
            for b in p.blocks() {
                let s = sums.entry(l.block_of(b[0])).or_insert_with(Q::zero);
                *s += &diff[b[0]] * rational::q(b.len() as i64);
                if s.is_negative() {
                    return false;
                }
            }
            sums.values().all(Zero::is_zero)
        })
    }

    /// `E(other) ⊆ E(self)`, tested on the vertices of `other`.
    pub fn contains_set(&self, other: &OrthogonalSet) -> bool {
        other.points.values().all(|v| self.contains(v))
    }

    fn base(&self) -> &Vec<Q> {
        self.points.values().next().expect("nonempty set")
    }

    /// Volume of `E(h)` computed from its vertices (dimension ≤ 2).
    pub fn hull_volume_direct(&self) -> Result<Volume, Error> {
        let norm_sq = self.levi.covolume_sq_in(&self.ambient());
        let base = self.base().clone();
        let pts: Vec<Vec<Q>> = self.points.values().map(|v| self.coords(v, &base)).collect();
        let rational = match self.dim() {
            0 => Q::from_integer(1.into()),
            1 => {
                let xs: Vec<&Q> = pts.iter().map(|p| &p[0]).collect();
                let max = xs.iter().copied().max().unwrap();
                let min = xs.iter().copied().min().unwrap();
                max - min
            }
            2 => polygon_area(&pts),
            k => {
                return Err(Error::Invalid(format!(
                    "direct hull volume supports dimension ≤ 2, got {k}"
                )))
            }
        };
        Ok(Volume { rational, norm_sq })
    }

    /// Lattice points of `E(h)` in `Λ_M` (the slice through the points), by enumeration.
    pub fn lattice_points(&self) -> Result<Vec<Vec<Q>>, Error> {
        if !self.is_integral() {
            return Err(Error::Invalid("lattice enumeration needs an integral set".into()));
        }
        let base = self.base().clone();
        let k = self.dim();
        let pts: Vec<Vec<Q>> = self.points.values().map(|v| self.coords(v, &base)).collect();
        let mut lo = Vec::with_capacity(k);
        let mut hi = Vec::with_capacity(k);
        for i in 0..k {
            let col = pts.iter().map(|p| rational::to_i64(&p[i]).expect("integral coordinates"));
            lo.push(col.clone().min().unwrap());
            hi.push(col.max().unwrap());
        }
        let mut out = Vec::new();
        let mut z = lo.clone();
        loop {
            let zq: Vec<Q> = z.iter().map(|&x| rational::q(x)).collect();
            let a = self.from_coords(&base, &zq);
            if self.contains(&a) {
                out.push(a);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(out);
                }
                if z[i] < hi[i] {
                    z[i] += 1;
                    break;
                }
                z[i] = lo[i];
                i += 1;
            }
        }
    }

    pub fn lattice_count_enumerated(&self) -> Result<u64, Error> {
        Ok(self.lattice_points()?.len() as u64)
    }
}

/// Area of the convex hull of rational points in the plane.
fn polygon_area(pts: &[Vec<Q>]) -> Q {
    let hull = convex_hull(pts);
    let n = hull.len();
    if n < 3 {
        return Q::zero();
    }
    let mut twice = Q::zero();
    for i in 0..n {
        let (a, b) = (&hull[i], &hull[(i + 1) % n]);
        twice += &a.0 * &b.1 - &b.0 * &a.1;
    }
    (twice / rational::q(2)).abs()
}

fn convex_hull(pts: &[Vec<Q>]) -> Vec<(Q, Q)> {
    let mut p: Vec<(Q, Q)> = pts.iter().map(|v| (v[0].clone(), v[1].clone())).collect();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)| {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let mut lower: Vec<(Q, Q)> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], x).is_positive() {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<(Q, Q)> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], x).is_positive() {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
