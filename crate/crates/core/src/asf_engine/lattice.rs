//! `O`-lattices in `F^n` in column Hermite form and their invariants.

use std::fmt::Write as _;

use super::fpoly::LPoly;
use crate::fq::{self, Fq};
use crate::gm_calculus::OrthogonalSet;
use crate::rational::q;
use crate::typea_roots::{Levi, Parabolic};

/// The lattice spanned by the columns `b_j = ε^{k_j} e_j + Σ_{i<j} c_ij e_i`, with every `c_ij`
/// reduced to exponents `< k_i`. This form is unique for each lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeRep {
    k: Vec<i64>,
    /// `c[j][i]` for `i < j`.
    c: Vec<Vec<LPoly>>,
}

impl LatticeRep {
    pub fn new(k: Vec<i64>, c: Vec<Vec<LPoly>>) -> Self {
        debug_assert!(c.iter().enumerate().all(|(j, col)| col.len() == j));
        debug_assert!(c
            .iter()
            .all(|col| col.iter().enumerate().all(|(i, p)| p.is_zero() || p.top() <= k[i])));
        LatticeRep { k, c }
    }

    /// The span of the first `c.len()` columns only; used while building a basis.
    pub(super) fn partial(k: Vec<i64>, c: Vec<Vec<LPoly>>) -> Self {
        LatticeRep { k, c }
    }

    /// `diag(ε^{k_1}, …, ε^{k_n}) O^n`.
    pub fn diagonal(k: Vec<i64>) -> Self {
        let c = (0..k.len()).map(|j| vec![LPoly::zero(); j]).collect();
        LatticeRep { k, c }
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    pub fn pivots(&self) -> &[i64] {
        &self.k
    }

    /// Kottwitz component: valuation of the determinant.
    pub fn det_val(&self) -> i64 {
        self.k.iter().sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> LPoly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.c[j][i].clone(),
            Equal => LPoly::monomial(1, self.k[i]),
            Greater => LPoly::zero(),
        }
    }

    /// Coefficients `u` with `x = Σ_{l<upto} u_l b_l`, by back-substitution; the components of
    /// `x` at indices `≥ upto` must vanish. `x ∈ L` iff every `u_l` is integral.
    pub fn coordinates(&self, x: &[LPoly], upto: usize, f: Fq) -> Vec<LPoly> {
        let mut u = vec![LPoly::zero(); upto];
        for i in (0..upto).rev() {
            let mut r = x[i].clone();
            for (l, ul) in u.iter().enumerate().skip(i + 1) {
                if !ul.is_zero() && !self.c[l][i].is_zero() {
                    r = r.sub(&ul.mul(&self.c[l][i], f), f);
                }
            }
            u[i] = r.shift(-self.k[i]);
        }
        u
    }

    pub fn contains(&self, x: &[LPoly], f: Fq) -> bool {
        let n = self.n();
        let top = (0..n).rev().find(|&i| !x[i].is_zero()).map_or(0, |i| i + 1);
        self.coordinates(x, top, f).iter().all(LPoly::is_integral)
    }

    /// `val det` of `L ∩ span(e_i : i ∈ mask)` for every `mask`, from the minors of the basis:
    /// `det_val - min val of maximal minors on the complementary rows`.
    pub fn sub_det_vals(&self, f: Fq) -> Vec<i64> {
        let n = self.n();
        let full = (1u32 << n) - 1;
        let dv = self.det_val();
        let mut min_minor = vec![0i64; 1 << n];
        for rows in 1..=full {
            let r: Vec<usize> = (0..n).filter(|i| rows >> i & 1 == 1).collect();
            let mut best: Option<i64> = None;
            for cols in 1..=full {
                if cols.count_ones() != rows.count_ones() {
                    continue;
                }
                let cl: Vec<usize> = (0..n).filter(|i| cols >> i & 1 == 1).collect();
                let m: Vec<Vec<LPoly>> =
                    r.iter().map(|&i| cl.iter().map(|&j| self.entry(i, j)).collect()).collect();
                if let Some(v) = det_poly(&m, f).val() {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
            min_minor[rows as usize] = best.expect("basis has full rank");
        }
        (0..=full).map(|s| dv - min_minor[(full & !s) as usize]).collect()
    }

    /// `H_P(L)` (valuation convention, no sign flip).
    pub fn hp_vector(&self, p: &Parabolic, f: Fq) -> Vec<crate::rational::Q> {
        let vd = self.sub_det_vals(f);
        let m = p.levi();
        OrthogonalSet::from_submodular(&m, |s| q(vd[s as usize]))
            .get(p)
            .expect("parabolic of its own Levi")
            .clone()
    }

    /// `Ec_M(L) = (H_P(L))_{P ∈ 𝒫(M)}`.
    pub fn ec(&self, m: &Levi, f: Fq) -> OrthogonalSet {
        let vd = self.sub_det_vals(f);
        OrthogonalSet::from_submodular(m, |s| q(vd[s as usize]))
    }

    /// `g^{-1} γ g mod ε` for the basis matrix `g` of a `γ`-stable lattice.
    pub fn residual_matrix(&self, gamma: &[LPoly], f: Fq) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut a = vec![vec![0u32; n]; n];
        for j in 0..n {
            let x: Vec<LPoly> = (0..n).map(|i| gamma[i].mul(&self.entry(i, j), f)).collect();
            let u = self.coordinates(&x, j + 1, f);
            for i in 0..=j {
                a[i][j] = u[i].coeff(0);
            }
        }
        a
    }

    /// Whether the residual endomorphism is regular (centraliser of dimension `n`).
    pub fn is_regular(&self, gamma: &[LPoly], f: Fq) -> bool {
        let a = self.residual_matrix(gamma, f);
        let n = self.n();
        // (AX - XA)_{rs} = Σ_t A_rt X_ts - X_rt A_ts, unknown X_ts at index t*n+s
        let mut rows = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                let mut row = vec![0u32; n * n];
                for t in 0..n {
                    row[t * n + s] = f.add(row[t * n + s], a[r][t]);
                    row[r * n + t] = f.sub(row[r * n + t], a[t][s]);
                }
                rows.push(row);
            }
        }
        fq::kernel(f, rows, n * n).len() == n
    }

    /// Stable textual form, e.g. `k=0,0;c12=[-1:1]`.
    pub fn fingerprint(&self) -> String {
        let mut s = String::from("k=");
        s.push_str(&self.k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        for (j, col) in self.c.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let _ = write!(s, ";c{}{}=[", i + 1, j + 1);
                let terms: Vec<String> = p.terms().map(|(e, c)| format!("{e}:{c}")).collect();
                s.push_str(&terms.join(","));
                s.push(']');
            }
        }
        s
    }
}

/// Determinant of a small square matrix of Laurent polynomials by Laplace expansion.
pub fn det_poly(m: &[Vec<LPoly>], f: Fq) -> LPoly {
    let n = m.len();
    match n {
        0 => LPoly::monomial(1, 0),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = LPoly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det_poly(&minor, f), f);
                acc = if j % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Q;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    #[test]
    fn standard_and_diagonal_lattices() {
        let f = f3();
        let l0 = LatticeRep::diagonal(vec![0, 0, 0]);
        for p in Levi::torus(3).parabolics_containing() {
            assert!(l0.hp_vector(&p, f).iter().all(|x| *x == Q::from_integer(0.into())));
        }
        let d = LatticeRep::diagonal(vec![2, -1, 5]);
        for perm in crate::typea_roots::permutations(3) {
            let b = Parabolic::borel(&perm);
            assert_eq!(d.hp_vector(&b, f), vec![q(2), q(-1), q(5)]);
        }
        assert_eq!(d.det_val(), 6);
    }

    #[test]
    fn gl2_off_diagonal() {
        let f = f3();
        let l = LatticeRep::new(vec![0, 0], vec![vec![], vec![LPoly::monomial(2, -1)]]);
        let ec = l.ec(&Levi::torus(2), f);
        assert_eq!(ec.get(&Parabolic::borel(&[0, 1])).unwrap(), &vec![q(0), q(0)]);
        assert_eq!(ec.get(&Parabolic::borel(&[1, 0])).unwrap(), &vec![q(-1), q(1)]);
        assert_eq!(ec.validate(), crate::gm_calculus::Verdict::Positive);
        assert!(l.contains(&[LPoly::monomial(1, 0), LPoly::zero()], f));
        assert!(!l.contains(&[LPoly::monomial(1, -1), LPoly::zero()], f));
        assert!(l.contains(&[LPoly::monomial(2, -1), LPoly::monomial(1, 0)], f));
    }

    #[test]
    fn regularity_of_residual() {
        let f = f3();
        // γ = diag(0, ε): the standard lattice has residual 0, not regular.
        let gamma = vec![LPoly::zero(), LPoly::monomial(1, 1)];
        assert!(!LatticeRep::diagonal(vec![0, 0]).is_regular(&gamma, f));
        let l = LatticeRep::new(vec![0, 0], vec![vec![], vec![LPoly::monomial(1, -1)]]);
        assert!(l.is_regular(&gamma, f));
        // γ = diag(0, 1): everything regular semisimple at the standard lattice.
        let gamma = vec![LPoly::zero(), LPoly::monomial(1, 0)];
        assert!(LatticeRep::diagonal(vec![0, 0]).is_regular(&gamma, f));
    }
}
