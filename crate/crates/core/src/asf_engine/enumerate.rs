//! Enumeration of `γ`-stable lattices with prescribed pivots.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::fpoly::LPoly;
use super::lattice::LatticeRep;
use crate::fq::{self, Fq};

/// All lattices `L` in Hermite form with pivots `k`, entries `c_ij` supported in
/// `[lo_i, k_i)`, and `γ L ⊆ L`, in canonical order.
///
/// Column `j` gives `γ b_j = a_j b_j + Σ_{i<j} (a_i - a_j) c_ij e_i`, so given the earlier
/// columns the admissible `c_{·j}` form an `F_q`-subspace.
pub fn enumerate_stable(gamma: &[LPoly], f: Fq, k: &[i64], lo: &[i64]) -> Vec<LatticeRep> {
    let n = k.len();
    if n == 0 {
        return vec![LatticeRep::diagonal(vec![])];
    }
    let first = vec![Vec::<LPoly>::new()];
    if n == 1 {
        return vec![LatticeRep::diagonal(k.to_vec())];
    }
    // Split on the second column for parallelism; the merge keeps canonical order.
    let seconds = column_choices(gamma, f, k, lo, &first);
    seconds
        .into_par_iter()
        .flat_map_iter(|col| {
            let mut cols = first.clone();
            cols.push(col);
            let mut out = Vec::new();
            extend(gamma, f, k, lo, &mut cols, &mut out);
            out
        })
        .collect()
}

fn extend(gamma: &[LPoly], f: Fq, k: &[i64], lo: &[i64], cols: &mut Vec<Vec<LPoly>>, out: &mut Vec<LatticeRep>) {
    if cols.len() == k.len() {
        out.push(LatticeRep::new(k.to_vec(), cols.clone()));
        return;
    }
    for col in column_choices(gamma, f, k, lo, cols) {
        cols.push(col);
        extend(gamma, f, k, lo, cols, out);
        cols.pop();
    }
}

/// Admissible entries of column `j = cols.len()` given columns `< j`.
fn column_choices(gamma: &[LPoly], f: Fq, k: &[i64], lo: &[i64], cols: &[Vec<LPoly>]) -> Vec<Vec<LPoly>> {
    let j = cols.len();
    let partial = LatticeRep::partial(k.to_vec(), cols.to_vec());
    let unknowns: Vec<(usize, i64)> =
        (0..j).flat_map(|i| (lo[i]..k[i]).map(move |e| (i, e))).collect();
    let mut row_of: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, u32)>> = Vec::with_capacity(unknowns.len());
    for &(i, e) in &unknowns {
        let mut x = vec![LPoly::zero(); j];
        x[i] = gamma[i].sub(&gamma[j], f).shift(e);
        let u = partial.coordinates(&x, j, f);
        let mut entries = Vec::new();
        for (l, ul) in u.iter().enumerate() {
            for (ex, c) in ul.below(0).terms() {
                let next = row_of.len();
                let r = *row_of.entry((l, ex)).or_insert(next);
                entries.push((r, c));
            }
        }
        columns.push(entries);
    }
    let mut matrix = vec![vec![0u32; unknowns.len()]; row_of.len()];
    for (c, entries) in columns.iter().enumerate() {
        for &(r, v) in entries {
            matrix[r][c] = v;
        }
    }
    let basis = fq::kernel(f, matrix, unknowns.len());
    let q = f.p();
    let dim = basis.len();
    let total = (q as usize).pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut coeffs = vec![0u32; dim];
    for _ in 0..total {
        let mut v = vec![0u32; unknowns.len()];
        for (t, b) in coeffs.iter().zip(&basis) {
            if *t == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*t, *y));
            }
        }
        let mut col = Vec::with_capacity(j);
        for i in 0..j {
            let terms: Vec<u32> = unknowns
                .iter()
                .zip(&v)
                .filter(|((ii, _), _)| *ii == i)
                .map(|(_, &c)| c)
                .collect();
            col.push(LPoly::from_coeffs(lo[i], terms));
        }
        out.push(col);
        // next coefficient tuple, last index fastest
        for d in (0..dim).rev() {
            coeffs[d] += 1;
            if coeffs[d] < q {
                break;
            }
            coeffs[d] = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_gl2(n: i64) -> Vec<LPoly> {
        vec![LPoly::zero(), LPoly::monomial(1, n)]
    }

    #[test]
    fn gl2_slice_has_q_to_the_n_points() {
        for q in [2u32, 3, 5] {
            let f = Fq::new(q).unwrap();
            for n in 0..4 {
                let s = enumerate_stable(&gamma_gl2(n), f, &[0, 0], &[-(n + 3), -(n + 3)]);
                assert_eq!(s.len(), (q as usize).pow(n as u32));
                assert!(s.iter().all(|l| {
                    let x: Vec<LPoly> =
                        (0..2).map(|i| gamma_gl2(n)[i].mul(&l.entry(i, 1), f)).collect();
                    l.contains(&x, f)
                }));
            }
        }
    }

    #[test]
    fn regular_semisimple_gamma_fixes_only_diagonal_lattices() {
        let f = Fq::new(5).unwrap();
        let gamma = vec![LPoly::zero(), LPoly::monomial(1, 0), LPoly::monomial(2, 0)];
        let s = enumerate_stable(&gamma, f, &[0, 0, 0], &[-3, -3, -3]);
        assert_eq!(s, vec![LatticeRep::diagonal(vec![0, 0, 0])]);
    }
}
