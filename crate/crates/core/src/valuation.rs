//! Root valuation data of split regular elements `γ = diag(a_1, …, a_n)` with `a_i ∈ F_q[[ε]]`:
//! root valuations, minimal form, the root filtration and construction of `γ` from a datum.

use serde::{Deserialize, Serialize};

use crate::fq::Fq;
use crate::typea_roots::{permutations, Levi};
use crate::Error;

/// A diagonal integral element; `entries[i][e]` is the coefficient of `ε^e` in `a_i`, known
/// for `e < precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaSpec {
    q: u32,
    precision: usize,
    entries: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct GammaWire {
    q: u32,
    #[serde(rename = "K")]
    precision: usize,
    entries: Vec<Vec<(usize, u32)>>,
}

impl GammaSpec {
    pub fn new(q: u32, precision: usize, entries: Vec<Vec<u32>>) -> Result<Self, Error> {
        let f = Fq::new(q)?;
        let entries = entries
            .into_iter()
            .map(|mut e| {
                if e.len() > precision {
                    return Err(Error::Invalid("entry exceeds the declared precision".into()));
                }
                e.resize(precision, 0);
                Ok(e.into_iter().map(|c| f.reduce(c as i64)).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GammaSpec { q, precision, entries })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn field(&self) -> Fq {
        Fq::new(self.q).expect("checked at construction")
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    /// `ε·γ`, with precision raised by one.
    pub fn times_eps(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| std::iter::once(0).chain(e.iter().copied()).collect())
            .collect();
        GammaSpec { q: self.q, precision: self.precision + 1, entries }
    }

    /// `γ + c·Id` for a constant `c ∈ F_q`.
    pub fn plus_scalar(&self, c: u32) -> Self {
        let f = self.field();
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e[0] = f.add(e[0], c % self.q);
                e
            })
            .collect();
        GammaSpec { q: self.q, precision: self.precision, entries }
    }

    /// The diagonal entries indexed by `block`, as an element of the Levi block.
    pub fn restrict(&self, block: &[usize]) -> Self {
        GammaSpec {
            q: self.q,
            precision: self.precision,
            entries: block.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let w = GammaWire {
            q: self.q,
            precision: self.precision,
            entries: self
                .entries
                .iter()
                .map(|e| e.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect())
                .collect(),
        };
        serde_json::to_string(&w).expect("serializable")
    }

    pub fn parse_json(s: &str) -> Result<Self, Error> {
        let w: GammaWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = Vec::with_capacity(w.entries.len());
        for terms in &w.entries {
            let mut e = vec![0u32; w.precision];
            for &(k, c) in terms {
                if k >= w.precision {
                    return Err(Error::Parse(format!("exponent {k} beyond precision")));
                }
                e[k] = c;
            }
            entries.push(e);
        }
        GammaSpec::new(w.q, w.precision, entries)
    }
}

/// `R_γ(e_i - e_j) = val(a_i - a_j)`, stored as a symmetric matrix (diagonal unused).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuationMap {
    vals: Vec<Vec<u32>>,
}

impl ValuationMap {
    pub fn from_matrix(vals: Vec<Vec<u32>>) -> Result<Self, Error> {
        let n = vals.len();
        for i in 0..n {
            if vals[i].len() != n {
                return Err(Error::Invalid("valuation matrix is not square".into()));
            }
            for j in 0..n {
                if i != j && vals[i][j] != vals[j][i] {
                    return Err(Error::Invalid(format!("valuation of ({i},{j}) not symmetric")));
                }
            }
        }
        Ok(ValuationMap { vals })
    }

    /// The map attached to a datum `n` in the ordering `w`.
    pub fn from_datum(datum: &RootValuationDatum) -> Self {
        let n = datum.w.len();
        let mut vals = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let v = *datum.n[a..b].iter().min().unwrap();
                vals[datum.w[a]][datum.w[b]] = v;
                vals[datum.w[b]][datum.w[a]] = v;
            }
        }
        ValuationMap { vals }
    }

    pub fn n(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        assert_ne!(i, j);
        self.vals[i][j]
    }

    /// `val(α+β) ≥ min(val α, val β)` whenever `α+β` is a root.
    pub fn is_ultrametric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    i == j || j == k || i == k
                        || self.vals[i][k] >= self.vals[i][j].min(self.vals[j][k])
                })
            })
        })
    }

    /// `Σ_{α>0} val α(γ)`.
    pub fn positive_sum(&self) -> u64 {
        let n = self.n();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.vals[i][j] as u64).sum()
    }

    /// Sum over the positive roots inside the blocks of `m`.
    pub fn positive_sum_in(&self, m: &Levi) -> u64 {
        m.blocks()
            .iter()
            .flat_map(|b| {
                b.iter().enumerate().flat_map(move |(x, &i)| b[x + 1..].iter().map(move |&j| (i, j)))
            })
            .map(|(i, j)| self.vals[i][j] as u64)
            .sum()
    }
}

pub fn root_valuation(g: &GammaSpec) -> Result<ValuationMap, Error> {
    let n = g.n();
    let mut vals = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = (0..g.precision)
                .find(|&e| g.entries[i][e] != g.entries[j][e])
                .ok_or_else(|| {
                    Error::Compute(format!(
                        "a_{} - a_{} vanishes to precision {}",
                        i + 1,
                        j + 1,
                        g.precision
                    ))
                })?;
            vals[i][j] = v as u32;
            vals[j][i] = v as u32;
        }
    }
    Ok(ValuationMap { vals })
}

/// Datum `n` (valuations of the simple roots `e_{w_l} - e_{w_{l+1}}`) and ordering `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootValuationDatum {
    pub n: Vec<u32>,
    pub w: Vec<usize>,
}

impl RootValuationDatum {
    /// Whether every root value is the minimum over its simple constituents.
    pub fn satisfies_min_rule(&self, r: &ValuationMap) -> bool {
        let k = self.w.len();
        (0..k).all(|a| {
            (a + 1..k).all(|b| r.get(self.w[a], self.w[b]) == *self.n[a..b].iter().min().unwrap())
        })
    }

    pub fn datum_string(&self) -> String {
        self.n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// The lexicographically least ordering in which `r` is in minimal form.
pub fn minimal_form(r: &ValuationMap) -> Result<RootValuationDatum, Error> {
    let n = r.n();
    for w in permutations(n) {
        let datum = RootValuationDatum {
            n: (0..n.saturating_sub(1)).map(|l| r.get(w[l], w[l + 1])).collect(),
            w,
        };
        if datum.satisfies_min_rule(r) {
            return Ok(datum);
        }
    }
    Err(Error::Invalid("valuation map admits no minimal form".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFiltration {
    pub breaks: Vec<u32>,
    pub levis: Vec<Levi>,
}

/// Breaking points `m_1 < … < m_l` and the Levis `M_i` whose roots have valuation `≥ m_i`.
pub fn filtration(datum: &RootValuationDatum) -> RootFiltration {
    let r = ValuationMap::from_datum(datum);
    let n = r.n();
    let mut breaks: Vec<u32> = datum.n.clone();
    breaks.sort_unstable();
    breaks.dedup();
    if breaks.is_empty() {
        breaks.push(0);
    }
    let levis = breaks
        .iter()
        .map(|&m| {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for i in 0..n {
                match blocks.iter_mut().find(|b| r.get(b[0], i) >= m) {
                    Some(b) => b.push(i),
                    None => blocks.push(vec![i]),
                }
            }
            Levi::new(n, blocks).expect("equivalence classes partition the indices")
        })
        .collect();
    RootFiltration { breaks, levis }
}

/// Default precision `2·max(n) + 2`.
pub fn default_precision(n: &[u32]) -> usize {
    2 * n.iter().copied().max().unwrap_or(0) as usize + 2
}

/// Whether the increments `c_l ε^{n_l}` realise `n`: on every interval the leading
/// coefficients at the minimal level do not cancel.
fn units_realize(f: Fq, n: &[u32], c: &[u32]) -> bool {
    let d = n.len();
    (0..d).all(|a| {
        (a + 1..=d).all(|b| {
            let m = *n[a..b].iter().min().unwrap();
            let s = (a..b).filter(|&l| n[l] == m).fold(0, |acc, l| f.add(acc, c[l]));
            s != 0
        })
    })
}

/// `γ = diag(a_1, …, a_{d+1})` with `a_1 = 0`, `a_{l+1} = a_l + c_l ε^{n_l} + t_l ε^{n_l+1}`.
/// `variant` indexes the admissible `(c, t)` in lexicographic order, `c` before `t`;
/// variant 0 is `c = (1,…,1)`, `t = 0` when admissible.
pub fn make_gamma_variant(n: &[u32], q: u32, precision: usize, variant: usize) -> Result<GammaSpec, Error> {
    let f = Fq::new(q)?;
    let d = n.len();
    let max = n.iter().copied().max().unwrap_or(0) as usize;
    if precision < max + 2 {
        return Err(Error::Invalid(format!(
            "precision {precision} too small for datum, need at least {}",
            max + 2
        )));
    }
    let units: Vec<Vec<u32>> = tuples(d, q - 1)
        .into_iter()
        .map(|t| t.into_iter().map(|x| x + 1).collect::<Vec<_>>())
        .filter(|c| units_realize(f, n, c))
        .collect();
    if units.is_empty() {
        return Err(Error::Invalid(format!(
            "no element over F_{q} realises the datum ({}); use a larger prime",
            n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )));
    }
    let tails = tuples(d, q);
    let total = units.len() * tails.len();
    if variant >= total {
        return Err(Error::Invalid(format!("only {total} variants exist for this datum over F_{q}")));
    }
    let (c, t) = (&units[variant / tails.len()], &tails[variant % tails.len()]);
    let mut entries = vec![vec![0u32; precision]; d + 1];
    for l in 0..d {
        let mut next = entries[l].clone();
        let e = n[l] as usize;
        next[e] = f.add(next[e], c[l]);
        next[e + 1] = f.add(next[e + 1], t[l]);
        entries[l + 1] = next;
    }
    GammaSpec::new(q, precision, entries)
}

/// `count` variant indices, distinct unit tuples `c` (with `t = 0`) first, then nonzero tails.
pub fn spread_variants(n: &[u32], q: u32, count: usize) -> Result<Vec<usize>, Error> {
    let f = Fq::new(q)?;
    let d = n.len();
    let units = tuples(d, q - 1)
        .into_iter()
        .filter(|t| units_realize(f, n, &t.iter().map(|x| x + 1).collect::<Vec<_>>()))
        .count();
    let tails = (q as usize).pow(d as u32);
    let mut out: Vec<usize> = (0..units).map(|k| k * tails).take(count).collect();
    out.extend((0..units * tails).filter(|v| v % tails != 0).take(count - out.len()));
    if out.len() < count {
        return Err(Error::Invalid(format!("only {} variants exist for this datum over F_{q}", out.len())));
    }
    Ok(out)
}

pub fn make_gamma(n: &[u32], q: u32, precision: usize) -> Result<GammaSpec, Error> {
    make_gamma_variant(n, q, precision, 0)
}

/// All tuples in `{0..q}^d`, lexicographically.
fn tuples(d: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                (0..q).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}
