//! Grids of counts and orbital integrals over root valuation data, exact interpolation in `q`
//! and exact rational fits of generating series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::asf_engine::{auto_window, fundamental_domain_record, widen, Springer};
use crate::rational::{fmt_q, q, solve, Q};
use crate::typea_roots::Levi;
use crate::valuation::{default_precision, make_gamma_variant};
use crate::Error;

/// A polynomial in `q` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    pub coeffs: Vec<Q>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn lagrange(points: &[(Q, Q)]) -> Self {
        let mut acc = vec![Q::zero(); points.len()];
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = vec![Q::one()];
            let mut denom = Q::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Q::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * xj;
                }
                basis = next;
                denom *= xi - xj;
            }
            let scale = yi / denom;
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * &scale;
            }
        }
        QPolynomial::new(acc)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "q".to_string(),
                    _ => format!("q^{k}"),
                };
                match (k, fmt_q(c).as_str()) {
                    (0, s) => s.to_string(),
                    (_, "1") => mono,
                    (_, "-1") => format!("-{mono}"),
                    (_, s) => format!("{s}*{mono}"),
                }
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// An accepted interpolation and the points it was checked against.
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub poly: QPolynomial,
    pub fitted: Vec<u32>,
    pub consistency: Vec<u32>,
}

/// Lowest-degree polynomial of degree `≤ cap` through `(q, value)` pairs, accepted only when at
/// least one further point lies on it.
pub fn interpolate_q(points: &[(u32, Q)], cap: usize) -> Result<Interpolation, Error> {
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| p.0);
    pts.dedup_by_key(|p| p.0);
    if pts.len() < cap + 2 {
        return Err(Error::Invalid(format!("degree cap {cap} needs {} primes, got {}", cap + 2, pts.len())));
    }
    for deg in 0..=cap {
        let head: Vec<(Q, Q)> = pts[..=deg].iter().map(|(p, v)| (q(*p as i64), v.clone())).collect();
        let poly = QPolynomial::lagrange(&head);
        if pts[deg + 1..].iter().all(|(p, v)| &poly.eval(&q(*p as i64)) == v) {
            return Ok(Interpolation {
                poly,
                fitted: pts[..=deg].iter().map(|p| p.0).collect(),
                consistency: pts[deg + 1..].iter().map(|p| p.0).collect(),
            });
        }
    }
    Err(Error::Compute(format!("no polynomial of degree ≤ {cap} fits {} points", pts.len())))
}

/// Coefficients of a multivariate series, indexed by exponent vectors.
pub type SeriesData = BTreeMap<Vec<u32>, Q>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FitVerdict {
    Certified,
    ValidationFailed { at: Vec<u32>, predicted: String, actual: String },
    Inconclusive { reason: String },
}

/// `numerator / denominator`, with the training and validation exponents it answers to.
#[derive(Clone, Debug)]
pub struct RationalFit {
    pub vars: usize,
    pub numerator: BTreeMap<Vec<u32>, Q>,
    pub denominator: BTreeMap<Vec<u32>, Q>,
    pub num_degree: usize,
    pub den_degree: usize,
    pub train: Vec<Vec<u32>>,
    pub validate: Vec<Vec<u32>>,
    pub verdict: FitVerdict,
}

#[derive(Serialize)]
struct FitCertificate<'a> {
    numerator: String,
    denominator: String,
    num_degree: usize,
    den_degree: usize,
    train: &'a [Vec<u32>],
    validate: &'a [Vec<u32>],
    #[serde(flatten)]
    verdict: &'a FitVerdict,
}

impl RationalFit {
    pub fn is_certified(&self) -> bool {
        self.verdict == FitVerdict::Certified
    }

    /// Series coefficient of `numerator / denominator` at `m`.
    pub fn predict(&self, m: &[u32]) -> Q {
        let mut memo = BTreeMap::new();
        expand(&self.numerator, &self.denominator, m, &mut memo)
    }

    pub fn to_json(&self) -> String {
        let cert = FitCertificate {
            numerator: format_multi(&self.numerator, self.vars),
            denominator: format_multi(&self.denominator, self.vars),
            num_degree: self.num_degree,
            den_degree: self.den_degree,
            train: &self.train,
            validate: &self.validate,
            verdict: &self.verdict,
        };
        serde_json::to_string_pretty(&cert).expect("serializable")
    }
}

fn expand(
    num: &BTreeMap<Vec<u32>, Q>,
    den: &BTreeMap<Vec<u32>, Q>,
    m: &[u32],
    memo: &mut BTreeMap<Vec<u32>, Q>,
) -> Q {
    if let Some(v) = memo.get(m) {
        return v.clone();
    }
    let mut v = num.get(m).cloned().unwrap_or_else(Q::zero);
    for (k, c) in den {
        if k.iter().all(|&e| e == 0) {
            continue;
        }
        if let Some(rest) = sub_exp(m, k) {
            v -= c * expand(num, den, &rest, memo);
        }
    }
    memo.insert(m.to_vec(), v.clone());
    v
}

fn sub_exp(m: &[u32], k: &[u32]) -> Option<Vec<u32>> {
    m.iter().zip(k).map(|(a, b)| a.checked_sub(*b)).collect()
}

/// Exponent vectors in `vars` variables of total degree `≤ deg`.
pub fn monomials(vars: usize, deg: usize) -> Vec<Vec<u32>> {
    fn rec(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == vars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, deg as u32, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    out
}

fn format_multi(poly: &BTreeMap<Vec<u32>, Q>, vars: usize) -> String {
    let mut terms: Vec<(&Vec<u32>, &Q)> = poly.iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by_key(|(m, _)| (m.iter().sum::<u32>(), (*m).clone()));
    if terms.is_empty() {
        return "0".to_string();
    }
    let var = |i: usize| if vars == 1 { "t".to_string() } else { format!("t{}", i + 1) };
    terms
        .iter()
        .map(|(m, c)| {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { var(i) } else { format!("{}^{e}", var(i)) })
                .collect();
            match (mono.is_empty(), fmt_q(c).as_str()) {
                (true, s) => s.to_string(),
                (false, "1") => mono.join("*"),
                (false, "-1") => format!("-{}", mono.join("*")),
                (false, s) => format!("{s}*{}", mono.join("*")),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
        .replace("+ -", "- ")
}

fn is_down_closed(set: &[Vec<u32>]) -> bool {
    set.iter().all(|m| {
        (0..m.len()).all(|i| {
            if m[i] == 0 {
                return true;
            }
            let mut lower = m.clone();
            lower[i] -= 1;
            set.contains(&lower)
        })
    })
}

/// Smallest exact fit `P/Q`, `Q(0) = 1`, of the series on `train`, searched by total degree of
/// `Q` then of `P`; the first fit whose linear system is strictly overdetermined and
/// consistent is checked on `validate`.
pub fn fit_rational(
    data: &SeriesData,
    train: &[Vec<u32>],
    validate: &[Vec<u32>],
    max_den: usize,
    max_num: usize,
) -> Result<RationalFit, Error> {
    let vars = train.first().map(|m| m.len()).unwrap_or(0);
    if vars == 0 || train.iter().chain(validate).any(|m| m.len() != vars) {
        return Err(Error::Invalid("exponent vectors of mixed or zero length".into()));
    }
    if !is_down_closed(train) {
        return Err(Error::Invalid("training exponents are not closed downwards".into()));
    }
    if let Some(m) = train.iter().chain(validate).find(|m| !data.contains_key(*m)) {
        return Err(Error::Invalid(format!("no series coefficient at {m:?}")));
    }
    for dq in 0..=max_den {
        let den_monos: Vec<Vec<u32>> =
            monomials(vars, dq).into_iter().filter(|m| m.iter().any(|&e| e > 0)).collect();
        for dp in 0..=max_num {
            let num_monos: Vec<Vec<u32>> =
                monomials(vars, dp).into_iter().filter(|m| train.contains(m)).collect();
            let unknowns = den_monos.len() + num_monos.len();
            if unknowns >= train.len() {
                continue;
            }
            // Row m: Σ_k Q_k F(m-k) - P_m = -F(m).
            let mut rows = Vec::with_capacity(train.len());
            let mut rhs = Vec::with_capacity(train.len());
            for m in train {
                let mut row = Vec::with_capacity(unknowns);
                for k in &den_monos {
                    row.push(sub_exp(m, k).map(|r| data[&r].clone()).unwrap_or_else(Q::zero));
                }
                for p in &num_monos {
                    row.push(if p == m { -Q::one() } else { Q::zero() });
                }
                rows.push(row);
                rhs.push(-data[m].clone());
            }
            let Some(sol) = solve(&rows, &rhs) else { continue };
            let mut denominator = BTreeMap::new();
            denominator.insert(vec![0; vars], Q::one());
            for (k, c) in den_monos.iter().zip(&sol) {
                if !c.is_zero() {
                    denominator.insert(k.clone(), c.clone());
                }
            }
            let mut numerator = BTreeMap::new();
            for (p, c) in num_monos.iter().zip(&sol[den_monos.len()..]) {
                if !c.is_zero() {
                    numerator.insert(p.clone(), c.clone());
                }
            }
            let mut fit = RationalFit {
                vars,
                numerator,
                denominator,
                num_degree: dp,
                den_degree: dq,
                train: train.to_vec(),
                validate: validate.to_vec(),
                verdict: FitVerdict::Certified,
            };
            if validate.is_empty() {
                fit.verdict = FitVerdict::Inconclusive { reason: "no validation points".into() };
            }
            for m in validate {
                let predicted = fit.predict(m);
                if predicted != data[m] {
                    fit.verdict = FitVerdict::ValidationFailed {
                        at: m.clone(),
                        predicted: fmt_q(&predicted),
                        actual: fmt_q(&data[m]),
                    };
                    break;
                }
            }
            return Ok(fit);
        }
    }
    Ok(RationalFit {
        vars,
        numerator: BTreeMap::new(),
        denominator: BTreeMap::new(),
        num_degree: max_num,
        den_degree: max_den,
        train: train.to_vec(),
        validate: validate.to_vec(),
        verdict: FitVerdict::Inconclusive {
            reason: format!("no exact fit with denominator degree ≤ {max_den}, numerator ≤ {max_num}"),
        },
    })
}

/// All data `n ∈ [0, max]^d`.
pub fn data_box(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                (0..=max).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out
}

/// `|F_γ(F_q)|` for the default `γ` of each datum.
pub fn count_grid(data: &[Vec<u32>], prime: u32) -> Result<SeriesData, Error> {
    data.par_iter()
        .map(|n| {
            let g = make_gamma_variant(n, prime, default_precision(n), 0)?;
            let rec = fundamental_domain_record(&g, n, 0, None)?;
            Ok((n.clone(), q(rec.count as i64)))
        })
        .collect()
}

/// `J_A(γ, 1_𝔨)` for the default `γ` of each datum.
pub fn orbital_grid(data: &[Vec<u32>], prime: u32) -> Result<SeriesData, Error> {
    data.par_iter()
        .map(|n| Ok((n.clone(), orbital_value(n, prime, 0)?)))
        .collect()
}

fn orbital_value(n: &[u32], prime: u32, variant: usize) -> Result<Q, Error> {
    let g = make_gamma_variant(n, prime, default_precision(n), variant)?;
    let w = auto_window(&g)?;
    Springer::new(&widen(&g, w)?, w)?.weighted_orbital(&Levi::torus(n.len() + 1))
}

/// CSV rows `n_1, …, n_d, q, value`.
pub fn to_csv(d: usize, rows: &[(Vec<u32>, u32, Q)]) -> String {
    let mut out = String::new();
    let head: Vec<String> = (1..=d).map(|i| format!("n{i}")).collect();
    out.push_str(&format!("{},q,value\n", head.join(",")));
    for (n, p, v) in rows {
        let ns: Vec<String> = n.iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("{},{p},{}\n", ns.join(","), fmt_q(v)));
    }
    out
}

/// Counts and orbital integrals of one datum across `γ`-variants.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub n: Vec<u32>,
    pub q: u32,
    pub variants: Vec<usize>,
    pub counts: Vec<u64>,
    pub orbitals: Vec<String>,
    pub holds: bool,
}

pub fn datum_independence_check(n: &[u32], prime: u32, variants: &[usize]) -> Result<IndependenceReport, Error> {
    if variants.len() < 2 {
        return Err(Error::Invalid("at least two variants are needed".into()));
    }
    let rows: Vec<(u64, Q)> = variants
        .par_iter()
        .map(|&v| {
            let g = make_gamma_variant(n, prime, default_precision(n), v)?;
            let rec = fundamental_domain_record(&g, n, v, None)?;
            Ok((rec.count, orbital_value(n, prime, v)?))
        })
        .collect::<Result<_, Error>>()?;
    let holds = rows.windows(2).all(|w| w[0] == w[1]);
    Ok(IndependenceReport {
        n: n.to_vec(),
        q: prime,
        variants: variants.to_vec(),
        counts: rows.iter().map(|r| r.0).collect(),
        orbitals: rows.iter().map(|r| fmt_q(&r.1)).collect(),
        holds,
    })
}
