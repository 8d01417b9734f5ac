//! Type-A root datum of `GL(n)`: roots, Levi subgroups containing the diagonal torus
//! (set partitions), parabolic subgroups (ordered set partitions), the spaces `a_M`
//! and their coroot lattices.
//!
//! Indices are 0-based internally; textual keys are 1-based (`"13|2"`).

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, q, qf, Q};
use crate::Error;

/// The root `e_i - e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "a root needs two distinct indices");
        Root { i, j }
    }

    pub fn neg(self) -> Self {
        Root { i: self.j, j: self.i }
    }

    pub fn is_positive(self) -> bool {
        self.i < self.j
    }
}

/// All roots of `GL(n)`, `n(n-1)` of them.
pub fn all_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Root { i, j });
            }
        }
    }
    out
}

pub fn positive_roots(n: usize) -> Vec<Root> {
    all_roots(n).into_iter().filter(|r| r.is_positive()).collect()
}

fn key_of_blocks(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("|")
}

fn parse_blocks(key: &str) -> Result<Vec<Vec<usize>>, Error> {
    let mut blocks = Vec::new();
    for part in key.split('|') {
        let mut b = Vec::new();
        for ch in part.trim().chars() {
            let d = ch
                .to_digit(10)
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::Parse(format!("bad block key {key:?}")))?;
            b.push(d as usize - 1);
        }
        if b.is_empty() {
            return Err(Error::Parse(format!("empty block in key {key:?}")));
        }
        blocks.push(b);
    }
    Ok(blocks)
}

fn check_partition(n: usize, blocks: &[Vec<usize>]) -> Result<(), Error> {
    let mut seen = vec![false; n];
    for b in blocks {
        for &i in b {
            if i >= n || seen[i] {
                return Err(Error::Parse(format!(
                    "blocks {} do not partition 1..{n}",
                    key_of_blocks(blocks)
                )));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Parse(format!(
            "blocks {} do not cover 1..{n}",
            key_of_blocks(blocks)
        )));
    }
    Ok(())
}

/// A Levi subgroup `M ⊇ A`, i.e. a set partition of `{0..n}`.
///
/// Blocks are kept sorted internally and ordered by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Levi {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Levi {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        check_partition(n, &blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        Ok(Levi { n, blocks })
    }

    /// The diagonal torus `A`.
    pub fn torus(n: usize) -> Self {
        Levi { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// The whole group `G`.
    pub fn whole(n: usize) -> Self {
        Levi { n, blocks: vec![(0..n).collect()] }
    }

    pub fn parse(n: usize, key: &str) -> Result<Self, Error> {
        Levi::new(n, parse_blocks(key)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn key(&self) -> String {
        key_of_blocks(&self.blocks)
    }

    pub fn is_torus(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_whole(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `dim a_M^G`.
    pub fn rank_in_g(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `dim a_self^big` for `self ⊆ big`.
    pub fn rank_in(&self, big: &Levi) -> usize {
        self.blocks.len() - big.blocks.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("index in range")
    }

    /// `self ⊆ other` as groups: every block of `self` lies inside a block of `other`.
    pub fn is_contained_in(&self, other: &Levi) -> bool {
        self.n == other.n
            && self
                .blocks
                .iter()
                .all(|b| other.blocks.iter().any(|o| b.iter().all(|i| o.contains(i))))
    }

    /// Blocks of `self` grouped by the block of `big` containing them.
    pub fn blocks_inside(&self, big: &Levi) -> Vec<Vec<Vec<usize>>> {
        big.blocks
            .iter()
            .map(|o| self.blocks.iter().filter(|b| o.contains(&b[0])).cloned().collect())
            .collect()
    }

    /// Whether the root `e_i - e_j` is a root of this Levi.
    pub fn contains_root(&self, r: Root) -> bool {
        self.block_of(r.i) == self.block_of(r.j)
    }

    /// `𝓛(M)`: all Levis containing `self`, in canonical order.
    pub fn levis_above(&self) -> Vec<Levi> {
        let m = self.blocks.len();
        let mut out: Vec<Levi> = set_partitions(m)
            .into_iter()
            .map(|parts| {
                let blocks = parts
                    .iter()
                    .map(|p| p.iter().flat_map(|&k| self.blocks[k].iter().copied()).collect())
                    .collect();
                Levi::new(self.n, blocks).expect("coarsening is a partition")
            })
            .collect();
        out.sort();
        out
    }

    /// `𝒫(M)`: all orderings of the blocks.
    pub fn parabolics(&self) -> Vec<Parabolic> {
        permutations(self.blocks.len())
            .into_iter()
            .map(|perm| Parabolic {
                n: self.n,
                blocks: perm.iter().map(|&k| self.blocks[k].clone()).collect(),
            })
            .collect()
    }

    /// `𝓕(M)`: parabolics containing `self`.
    pub fn parabolics_containing(&self) -> Vec<Parabolic> {
        self.levis_above().iter().flat_map(|l| l.parabolics()).collect()
    }

    /// The standard parabolic in `𝒫(M)`: blocks in canonical order.
    pub fn standard_parabolic(&self) -> Parabolic {
        Parabolic { n: self.n, blocks: self.blocks.clone() }
    }

    /// Elements of `𝒫^L(M)` realised as the parabolics `P ∈ 𝒫(M)` with `P ⊆ Q`.
    pub fn parabolics_below(&self, q: &Parabolic) -> Vec<Parabolic> {
        assert!(self.is_contained_in(&q.levi()), "M must lie in the Levi of Q");
        let groups: Vec<Vec<Vec<usize>>> = q
            .blocks
            .iter()
            .map(|qb| self.blocks.iter().filter(|b| qb.contains(&b[0])).cloned().collect())
            .collect();
        let mut out = vec![Vec::<Vec<usize>>::new()];
        for g in &groups {
            let mut next = Vec::new();
            for prefix in &out {
                for perm in permutations(g.len()) {
                    let mut p = prefix.clone();
                    p.extend(perm.iter().map(|&k| g[k].clone()));
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(|blocks| Parabolic { n: self.n, blocks }).collect()
    }

    /// Orthogonal projection `R^n → a_M`: averages over blocks.
    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for b in &self.blocks {
            let avg = b.iter().fold(Q::zero(), |a, &i| a + &v[i]) / q(b.len() as i64);
            for &i in b {
                out[i] = avg.clone();
            }
        }
        out
    }

    /// Lattice basis of the coroot lattice of `a_self^big` (projected coroots of adjacent
    /// blocks inside each block of `big`).
    pub fn coroot_basis_in(&self, big: &Levi) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for group in self.blocks_inside(big) {
            for w in group.windows(2) {
                out.push(block_coroot(self.n, &w[0], &w[1]));
            }
        }
        out
    }

    /// Squared Euclidean covolume of the coroot lattice of `a_self^big`.
    pub fn covolume_sq_in(&self, big: &Levi) -> Q {
        let basis = self.coroot_basis_in(big);
        let gram: Vec<Vec<Q>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| rational::dot(u, v)).collect())
            .collect();
        rational::det(gram)
    }
}

impl fmt::Display for Levi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Coroot attached to the ordered pair of blocks `(b1, b2)`: the projection of `e_i - e_j`
/// (`i ∈ b1`, `j ∈ b2`) onto `a_M`.
pub fn block_coroot(n: usize, b1: &[usize], b2: &[usize]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &i in b1 {
        v[i] = qf(1, b1.len() as i64);
    }
    for &j in b2 {
        v[j] = qf(-1, b2.len() as i64);
    }
    v
}

/// A parabolic subgroup containing `A`: an ordered set partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parabolic {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Parabolic {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        check_partition(n, &blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(Parabolic { n, blocks })
    }

    pub fn parse(n: usize, key: &str) -> Result<Self, Error> {
        Parabolic::new(n, parse_blocks(key)?)
    }

    /// The Borel subgroup for the flag ordering `order`.
    pub fn borel(order: &[usize]) -> Self {
        Parabolic { n: order.len(), blocks: order.iter().map(|&i| vec![i]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn key(&self) -> String {
        key_of_blocks(&self.blocks)
    }

    pub fn levi(&self) -> Levi {
        Levi::new(self.n, self.blocks.clone()).expect("blocks form a partition")
    }

    pub fn is_borel(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// For a Borel, the flag ordering of coordinates.
    pub fn order(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.iter().copied()).collect()
    }

    /// `self ⊆ other`: the ordered blocks of `self` refine those of `other` in order.
    pub fn is_contained_in(&self, other: &Parabolic) -> bool {
        let mut k = 0;
        for ob in &other.blocks {
            let mut covered = 0;
            while covered < ob.len() {
                let Some(b) = self.blocks.get(k) else { return false };
                if !b.iter().all(|i| ob.contains(i)) {
                    return false;
                }
                covered += b.len();
                k += 1;
            }
        }
        k == self.blocks.len()
    }

    /// Any Borel contained in `self` (blocks sorted ascending inside).
    pub fn some_borel(&self) -> Parabolic {
        Parabolic::borel(&self.order())
    }

    /// The parabolic of `𝒫(L)` containing `self`, for `L ⊇ M_self`.
    pub fn coarsen_to(&self, l: &Levi) -> Parabolic {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for b in &self.blocks {
            let lb = l.block_of(b[0]);
            if !blocks.iter().any(|x| l.block_of(x[0]) == lb) {
                blocks.push(l.blocks()[lb].clone());
            }
        }
        Parabolic { n: self.n, blocks }
    }

    /// The opposite parabolic.
    pub fn opposite(&self) -> Parabolic {
        let mut blocks = self.blocks.clone();
        blocks.reverse();
        Parabolic { n: self.n, blocks }
    }

    /// Simple roots as index pairs of adjacent blocks `(k, k+1)`.
    pub fn simple_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.blocks.len().saturating_sub(1)).map(|k| (k, k + 1)).collect()
    }

    /// Simple coroots `Δ_P^∨` as vectors in `a_{M_P}`.
    pub fn simple_coroots(&self) -> Vec<Vec<Q>> {
        self.blocks.windows(2).map(|w| block_coroot(self.n, &w[0], &w[1])).collect()
    }

    /// Simple coroots of `P ∩ L`: adjacent block pairs lying in the same block of `l`.
    pub fn simple_coroots_in(&self, l: &Levi) -> Vec<Vec<Q>> {
        self.blocks
            .windows(2)
            .filter(|w| l.block_of(w[0][0]) == l.block_of(w[1][0]))
            .map(|w| block_coroot(self.n, &w[0], &w[1]))
            .collect()
    }

    pub fn simple_data(&self) -> SimpleData {
        let coroots = self.simple_coroots();
        let gram: Vec<Vec<Q>> = coroots
            .iter()
            .map(|u| coroots.iter().map(|v| rational::dot(u, v)).collect())
            .collect();
        SimpleData {
            roots: self
                .blocks
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect(),
            covolume_sq: rational::det(gram),
            coroots,
        }
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Simple roots `Δ_P` (as pairs of adjacent blocks), coroots, and the squared covolume
/// `vol(a_M^G / Z Δ_P^∨)^2` for the standard inner product.
#[derive(Clone, Debug)]
pub struct SimpleData {
    pub roots: Vec<(Vec<usize>, Vec<usize>)>,
    pub coroots: Vec<Vec<Q>>,
    pub covolume_sq: Q,
}

/// `β^∨_{P,P'}` when `P, P'` are adjacent in `𝒫(M)`, i.e. differ by swapping two
/// neighbouring blocks.
pub fn adjacency(p: &Parabolic, p2: &Parabolic) -> Option<Vec<Q>> {
    if p.n != p2.n || p.blocks.len() != p2.blocks.len() {
        return None;
    }
    let diff: Vec<usize> = (0..p.blocks.len()).filter(|&k| p.blocks[k] != p2.blocks[k]).collect();
    match diff.as_slice() {
        [k, k1]
            if *k1 == k + 1
                && p.blocks[*k] == p2.blocks[*k1]
                && p.blocks[*k1] == p2.blocks[*k] =>
        {
            Some(block_coroot(p.n, &p.blocks[*k], &p.blocks[*k1]))
        }
        _ => None,
    }
}

/// `θ_M^G(L, L')` for the lattice-normalised measures: the index of
/// `Λ_M^L ⊕ Λ_M^{L'}` in `Λ_M^G`, or 0 when the sum is not direct and spanning.
pub fn theta_coefficient(m: &Levi, l: &Levi, l2: &Levi) -> Q {
    assert!(m.is_contained_in(l) && m.is_contained_in(l2));
    let rank = m.num_blocks() - 1;
    if m.rank_in(l) + m.rank_in(l2) != rank {
        return Q::zero();
    }
    if rank == 0 {
        return Q::one();
    }
    // Coordinates w.r.t. the basis e_k - e_{k+1} of Z^m_0 are partial sums.
    let to_coords = |v: &[Q]| -> Vec<Q> {
        let chi = chi_coords(m, v);
        let mut acc = Q::zero();
        let mut out = Vec::with_capacity(rank);
        for c in chi.iter().take(rank) {
            acc += c;
            out.push(acc.clone());
        }
        out
    };
    let rows: Vec<Vec<Q>> = m
        .coroot_basis_in(l)
        .iter()
        .chain(m.coroot_basis_in(l2).iter())
        .map(|v| to_coords(v))
        .collect();
    rational::det(rows).abs()
}

/// Lattice coordinates of a block-constant vector: `|B| · value` per block of `m`.
pub fn chi_coords(m: &Levi, v: &[Q]) -> Vec<Q> {
    m.blocks().iter().map(|b| &v[b[0]] * q(b.len() as i64)).collect()
}

/// Inverse of [`chi_coords`].
pub fn from_chi(m: &Levi, chi: &[Q]) -> Vec<Q> {
    let mut v = vec![Q::zero(); m.n()];
    for (b, c) in m.blocks().iter().zip(chi) {
        for &i in b {
            v[i] = c / q(b.len() as i64);
        }
    }
    v
}

/// Whether `v` is constant on the blocks of `m`.
pub fn is_block_constant(m: &Levi, v: &[Q]) -> bool {
    v.len() == m.n() && m.blocks().iter().all(|b| b.iter().all(|&i| v[i] == v[b[0]]))
}

/// Membership in `Λ_M`: block-constant with `|B| · value ∈ Z` on every block.
pub fn in_lattice(m: &Levi, v: &[Q]) -> bool {
    is_block_constant(m, v) && chi_coords(m, v).iter().all(rational::is_integer)
}

/// All set partitions of `{0..n}` as lists of blocks, in restricted-growth order.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let nb = rgs.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nb];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(blocks);
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_prefix = rgs[..i].iter().max().copied().unwrap();
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `𝓛(A)` for `GL(n)` in canonical order.
pub fn enumerate_levis(n: usize) -> Vec<Levi> {
    Levi::torus(n).levis_above()
}

/// `(𝒫(M), 𝓛(M), 𝓕(M))`.
pub fn parabolic_sets(m: &Levi) -> (Vec<Parabolic>, Vec<Levi>, Vec<Parabolic>) {
    (m.parabolics(), m.levis_above(), m.parabolics_containing())
}

/// Sign `(-1)^k`.
pub fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        // Bell triangle.
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn levi_counts_are_bell_numbers() {
        assert_eq!(enumerate_levis(2).len(), 2);
        assert_eq!(enumerate_levis(3).len(), 5);
        assert_eq!(enumerate_levis(4).len(), 15);
        for n in 1..=6 {
            let levis = enumerate_levis(n);
            assert_eq!(levis.len(), bell(n));
            let mut dedup = levis.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), levis.len());
        }
        let keys: Vec<String> = enumerate_levis(2).iter().map(|l| l.key()).collect();
        assert_eq!(keys, vec!["1|2", "12"]);
    }

    #[test]
    fn parabolic_set_sizes() {
        let (p, _, f) = parabolic_sets(&Levi::torus(2));
        assert_eq!((p.len(), f.len()), (2, 3));
        let (p, _, f) = parabolic_sets(&Levi::torus(3));
        assert_eq!((p.len(), f.len()), (6, 13));
        let m = Levi::parse(3, "12|3").unwrap();
        let (p, l, _) = parabolic_sets(&m);
        assert_eq!(p.len(), 2);
        let lk: Vec<String> = l.iter().map(|x| x.key()).collect();
        assert_eq!(lk, vec!["12|3", "123"]);
    }

    #[test]
    fn simple_data_examples() {
        let b = Parabolic::borel(&[0, 1]);
        let sd = b.simple_data();
        assert_eq!(sd.coroots, vec![vec![q(1), q(-1)]]);
        assert_eq!(sd.covolume_sq, q(2));

        let p = Parabolic::parse(3, "12|3").unwrap();
        let sd = p.simple_data();
        assert_eq!(sd.coroots, vec![vec![qf(1, 2), qf(1, 2), q(-1)]]);
        // |(1/2,1/2,-1)|^2 = 3/2
        assert_eq!(sd.covolume_sq, qf(3, 2));

        let b3 = Parabolic::borel(&[0, 1, 2]);
        let sd = b3.simple_data();
        assert_eq!(sd.coroots, vec![vec![q(1), q(-1), q(0)], vec![q(0), q(1), q(-1)]]);
        assert_eq!(sd.covolume_sq, q(3));
    }

    #[test]
    fn adjacency_examples() {
        let b = Parabolic::borel(&[0, 1]);
        assert_eq!(adjacency(&b, &b.opposite()), Some(vec![q(1), q(-1)]));
        let b123 = Parabolic::borel(&[0, 1, 2]);
        let b213 = Parabolic::borel(&[1, 0, 2]);
        let b321 = Parabolic::borel(&[2, 1, 0]);
        assert_eq!(adjacency(&b123, &b213), Some(vec![q(1), q(-1), q(0)]));
        assert_eq!(adjacency(&b123, &b321), None);
    }

    #[test]
    fn theta_examples() {
        let a = Levi::torus(3);
        let g = Levi::whole(3);
        for l2 in a.levis_above() {
            let t = theta_coefficient(&a, &g, &l2);
            if l2 == a {
                assert_eq!(t, q(1));
            } else {
                assert_eq!(t, q(0));
            }
        }
        let l = Levi::parse(3, "12|3").unwrap();
        let l2 = Levi::parse(3, "13|2").unwrap();
        assert_eq!(theta_coefficient(&a, &l, &l), q(0));
        // Λ^L = Z(1,-1,0), Λ^{L'} = Z(1,0,-1): together a basis of the root lattice.
        assert_eq!(theta_coefficient(&a, &l, &l2), q(1));
        assert_eq!(theta_coefficient(&a, &l2, &l), q(1));
    }

    #[test]
    fn theta_index_in_gl4() {
        // L = {12|34}, L' = {13|24}: Z(1,-1,0,0)+Z(0,0,1,-1)+Z(1,0,-1,0)+Z(0,1,0,-1) has index 2.
        let a = Levi::torus(4);
        let l = Levi::parse(4, "12|34").unwrap();
        let l2 = Levi::parse(4, "13|24").unwrap();
        assert_eq!(theta_coefficient(&a, &l, &l2), q(0));
        let l3 = Levi::parse(4, "1|2|34").unwrap();
        let l4 = Levi::parse(4, "123|4").unwrap();
        assert_eq!(theta_coefficient(&a, &l3, &l4), q(1));
    }

    #[test]
    fn borel_coroot_sum() {
        // Sum of simple coroots of any Borel is a permutation of (1,0,...,0,-1) for the
        // chain; the half-sum of positive coroots is (d, d-2, ..., -d)/2 up to order.
        for n in 2..=4 {
            for perm in permutations(n) {
                let b = Parabolic::borel(&perm);
                let pos: Vec<Vec<Q>> = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |c| (a, c)))
                    .map(|(a, c)| block_coroot(n, &[perm[a]], &[perm[c]]))
                    .collect();
                let mut sum = vec![Q::zero(); n];
                for v in &pos {
                    for i in 0..n {
                        sum[i] += &v[i];
                    }
                }
                let mut vals: Vec<Q> = perm.iter().map(|&i| sum[i].clone()).collect();
                let expect: Vec<Q> = (0..n).map(|k| q(n as i64 - 1 - 2 * k as i64)).collect();
                vals.sort();
                let mut e = expect.clone();
                e.sort();
                assert_eq!(vals, e);
                assert_eq!(b.simple_coroots().len(), n - 1);
            }
        }
    }

    #[test]
    fn keys_roundtrip() {
        let p = Parabolic::parse(3, "3|12").unwrap();
        assert_eq!(p.key(), "3|12");
        assert_eq!(p.levi().key(), "12|3");
        assert!(Levi::parse(3, "12").is_err());
        assert!(Levi::parse(3, "12|23").is_err());
    }

    #[test]
    fn parabolics_below_and_containment() {
        let a = Levi::torus(3);
        let q12 = Parabolic::parse(3, "12|3").unwrap();
        let below = a.parabolics_below(&q12);
        let keys: Vec<String> = below.iter().map(|p| p.key()).collect();
        assert_eq!(keys, vec!["1|2|3", "2|1|3"]);
        for p in &below {
            assert!(p.is_contained_in(&q12));
            assert_eq!(p.coarsen_to(&q12.levi()), q12);
        }
        assert!(!Parabolic::borel(&[0, 2, 1]).is_contained_in(&q12));
    }

    #[test]
    fn f_is_union_of_p() {
        for m in enumerate_levis(4) {
            let f = m.parabolics_containing();
            let total: usize = m.levis_above().iter().map(|l| l.parabolics().len()).sum();
            assert_eq!(f.len(), total);
            let fact: usize = (1..=m.num_blocks()).product();
            assert_eq!(m.parabolics().len(), fact);
        }
    }

    #[test]
    fn projection_lattice_compatibility() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let a = Levi::torus(n);
            let fact: i64 = (1..=n as i64).product();
            for l in enumerate_levis(n) {
                for _ in 0..20 {
                    let v: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-5..=5))).collect();
                    assert!(in_lattice(&a, &v));
                    let p = l.project(&v);
                    assert!(in_lattice(&l, &p));
                    let scaled: Vec<Q> = p.iter().map(|x| x * q(fact)).collect();
                    assert!(in_lattice(&l, &scaled));
                }
            }
        }
    }
}
