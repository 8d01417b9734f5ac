//! Affine Springer fibers of split regular `γ`: enumeration of `γ`-stable lattices,
//! retraction vectors, regular base points, fundamental domains and weighted orbital integrals.

pub mod enumerate;
pub mod fpoly;
pub mod lattice;

pub use fpoly::LPoly;
pub use lattice::LatticeRep;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fq::Fq;
use crate::gm_calculus::{OrthogonalSet, Verdict};
use crate::rational::{q, Q};
use crate::typea_roots::Levi;
use crate::valuation::{minimal_form, root_valuation, GammaSpec};
use crate::Error;

pub const ENGINE_VERSION: &str = concat!("asf-core/", env!("CARGO_PKG_VERSION"), "/e1");

/// Extra windows tried beyond the automatic one before giving up on saturation.
pub const SATURATION_RETRIES: i64 = 3;

/// The `γ`-stable lattices of `H_{B_0} = 0`, one for each orbit of `Λ = A(F)/A(O)` on
/// `X_γ`, computed inside the window `c_ij ∈ ε^{-N} O`.
#[derive(Clone, Debug)]
pub struct Springer {
    gamma: GammaSpec,
    field: Fq,
    polys: Vec<LPoly>,
    disc_exp: u64,
    window: i64,
    slice: Vec<LatticeRep>,
}

impl Springer {
    pub fn new(gamma: &GammaSpec, window: i64) -> Result<Self, Error> {
        Self::with_level(gamma, 0, window)
    }

    /// Lattices with `Ad(g)^{-1} γ ∈ ε^level 𝔤(O)`.
    pub fn with_level(gamma: &GammaSpec, level: u32, window: i64) -> Result<Self, Error> {
        let field = gamma.field();
        if window < 0 {
            return Err(Error::Invalid("window must be nonnegative".into()));
        }
        if (gamma.precision() as i64) < 2 * window + 2 {
            return Err(Error::Compute(format!(
                "precision {} below 2N+2 = {} for window {window}",
                gamma.precision(),
                2 * window + 2
            )));
        }
        let disc_exp = root_valuation(gamma)?.positive_sum();
        let n = gamma.n();
        let level = level as usize;
        let integral = gamma.entries().iter().all(|e| e[..level.min(e.len())].iter().all(|&c| c == 0));
        let polys: Vec<LPoly> = gamma
            .entries()
            .iter()
            .map(|e| LPoly::from_coeffs(-(level as i64), e.clone()))
            .collect();
        let slice = if integral {
            enumerate::enumerate_stable(&polys, field, &vec![0; n], &vec![-window; n])
        } else {
            Vec::new()
        };
        Ok(Springer { gamma: gamma.clone(), field, polys, disc_exp, window, slice })
    }

    pub fn gamma(&self) -> &GammaSpec {
        &self.gamma
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn slice(&self) -> &[LatticeRep] {
        &self.slice
    }

    /// `Σ_{α>0} val α(γ)`, so that `|D(γ)|^{1/2} = q^{-disc_exp}`.
    pub fn disc_exp(&self) -> u64 {
        self.disc_exp
    }

    pub fn is_regular(&self, x: &LatticeRep) -> bool {
        x.is_regular(&self.polys, self.field)
    }

    /// The first and last regular points of the slice in canonical order.
    pub fn base_points(&self) -> Result<(LatticeRep, LatticeRep), Error> {
        let first = self.slice.iter().find(|x| self.is_regular(x));
        let last = self.slice.iter().rev().find(|x| self.is_regular(x));
        match (first, last) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(Error::Compute(format!(
                "no regular point in window {}; enlarge the window",
                self.window
            ))),
        }
    }

    pub fn ec(&self, x: &LatticeRep, m: &Levi) -> OrthogonalSet {
        x.ec(m, self.field)
    }

    /// `|{λ ∈ Λ : λ + Ec(x) ⊆ Ec(x₀)}|`, counted by translations and as the number of lattice
    /// points of `E(λ(x, x₀))`; the two must agree.
    pub fn v_gamma(&self, x: &LatticeRep, x0: &LatticeRep) -> Result<u64, Error> {
        let a = Levi::torus(self.gamma.n());
        let e0 = self.ec(x0, &a);
        let ex = self.ec(x, &a);
        let by_translation = translation_count(&e0, &ex)?;
        let diff = OrthogonalSet::from_fn(&a, |p| {
            e0.get(p).unwrap().iter().zip(ex.get(p).unwrap()).map(|(u, v)| u - v).collect()
        });
        let by_polytope = match diff.validate() {
            Verdict::Positive => diff.lattice_count_enumerated()?,
            other => {
                if by_translation == 0 {
                    return Ok(0);
                }
                return Err(Error::Invariant(format!(
                    "λ(x, x0) is not positive ({other:?}) at {}",
                    x.fingerprint()
                )));
            }
        };
        if by_polytope != by_translation {
            return Err(Error::Invariant(format!(
                "translation count {by_translation} != lattice count {by_polytope} at {}",
                x.fingerprint()
            )));
        }
        Ok(by_translation)
    }

    /// `|F_γ(F_q)| = Σ_{x ∈ Λ\X_γ} v_γ(x)`.
    pub fn fundamental_domain_count(&self, x0: &LatticeRep) -> Result<u64, Error> {
        self.slice
            .par_iter()
            .map(|x| self.v_gamma(x, x0))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }

    /// `|F_γ(F_q)|` by listing the lattices of `X_γ` themselves: every pivot vector in
    /// `E(x₀)`, then the containment `Ec(x) ⊆ Ec(x₀)`.
    pub fn fundamental_domain_direct(&self, x0: &LatticeRep) -> Result<u64, Error> {
        let a = Levi::torus(self.gamma.n());
        let e0 = self.ec(x0, &a);
        let mut total = 0u64;
        for p in e0.lattice_points()? {
            let k: Vec<i64> = p.iter().map(|x| crate::rational::to_i64(x).unwrap()).collect();
            let lo: Vec<i64> = k.iter().map(|&x| x - self.window).collect();
            for y in enumerate::enumerate_stable(&self.polys, self.field, &k, &lo) {
                if e0.contains_set(&self.ec(&y, &a)) {
                    total += 1;
                }
            }
        }
        Ok(total)
    }

    /// `Σ_{x ∈ Λ\X_γ} v_M(x)` with `v_M(x)` the volume of `Ec_M(x)` (lattice normalisation).
    pub fn weight_sum(&self, m: &Levi) -> Result<Q, Error> {
        self.slice
            .par_iter()
            .map(|x| Ok(self.ec(x, m).hull_volume()?.rational))
            .try_reduce(Q::zero, |a, b| Ok(a + b))
    }

    /// `J_M(γ, 1_{ε^level 𝔨}) = |D(γ)|^{1/2} Σ_{x ∈ Λ\X_γ} v_M(x)`.
    pub fn weighted_orbital(&self, m: &Levi) -> Result<Q, Error> {
        Ok(self.weight_sum(m)? / q_pow(self.field.p(), self.disc_exp))
    }
}

fn translation_count(e0: &OrthogonalSet, ex: &OrthogonalSet) -> Result<u64, Error> {
    let n = e0.levi().n();
    let b0 = crate::typea_roots::Parabolic::borel(&(0..n).collect::<Vec<_>>());
    let hb = ex.get(&b0).expect("standard Borel");
    let mut count = 0;
    for p in e0.lattice_points()? {
        let shift: Vec<Q> = p.iter().zip(hb).map(|(a, b)| a - b).collect();
        if e0.contains_set(&ex.translate(&shift)) {
            count += 1;
        }
    }
    Ok(count)
}

/// `q^e` as a rational.
pub fn q_pow(p: u32, e: u64) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= q(p as i64);
    }
    acc
}

/// `Σ n_i + 2` for the datum of `γ`.
pub fn auto_window(gamma: &GammaSpec) -> Result<i64, Error> {
    let datum = minimal_form(&root_valuation(gamma)?)?;
    Ok(datum.n.iter().map(|&x| x as i64).sum::<i64>() + 2)
}

/// A persisted fundamental-domain count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub d: usize,
    pub n: Vec<u32>,
    pub q: u32,
    pub variant: usize,
    pub window: i64,
    pub component: i64,
    pub count: u64,
    pub slice_size: u64,
    pub x0: String,
    pub engine_version: String,
}

/// Fundamental-domain count at the smallest saturated window `≥ N_auto` (or `≥ window`).
pub fn fundamental_domain_record(
    gamma: &GammaSpec,
    datum: &[u32],
    variant: usize,
    window: Option<i64>,
) -> Result<CountRecord, Error> {
    let start = match window {
        Some(w) => w,
        None => auto_window(gamma)?,
    };
    let mut prev: Option<(i64, u64, u64, String)> = None;
    for w in start..=start + SATURATION_RETRIES + 1 {
        let g = widen(gamma, w + 1)?;
        let s = Springer::new(&g, w)?;
        let (x0, _) = s.base_points()?;
        let count = s.fundamental_domain_count(&x0)?;
        let cur = (w, count, s.slice().len() as u64, x0.fingerprint());
        if let Some(p) = &prev {
            if p.1 == cur.1 && p.2 == cur.2 {
                return Ok(CountRecord {
                    d: gamma.n() - 1,
                    n: datum.to_vec(),
                    q: gamma.q(),
                    variant,
                    window: p.0,
                    component: x0.det_val(),
                    count: p.1,
                    slice_size: p.2,
                    x0: p.3.clone(),
                    engine_version: ENGINE_VERSION.to_string(),
                });
            }
        }
        prev = Some(cur);
    }
    Err(Error::Compute(format!(
        "window did not saturate between {start} and {}",
        start + SATURATION_RETRIES + 1
    )))
}

/// Pads the precision of an exactly known `γ` to cover window `w`.
pub fn widen(gamma: &GammaSpec, w: i64) -> Result<GammaSpec, Error> {
    let k = gamma.precision().max(2 * w as usize + 2);
    GammaSpec::new(gamma.q(), k, gamma.entries().to_vec())
}

/// Per-block data of `γ` for a Levi `M`: `(|F^M|, J_A^M, Σ_{Φ^+(M)} val)`, multiplied over
/// the blocks of `M`.
pub fn levi_data(gamma: &GammaSpec, m: &Levi) -> Result<(Q, Q, u64), Error> {
    let mut count = Q::one();
    let mut orbital = Q::one();
    let mut disc = 0;
    for b in m.blocks() {
        if b.len() == 1 {
            continue;
        }
        let g = gamma.restrict(b);
        let w = auto_window(&g)?;
        let s = Springer::new(&widen(&g, w)?, w)?;
        let (x0, _) = s.base_points()?;
        count *= q(s.fundamental_domain_count(&x0)? as i64);
        orbital *= s.weighted_orbital(&Levi::torus(b.len()))?;
        disc += s.disc_exp();
    }
    Ok((count, orbital, disc))
}
