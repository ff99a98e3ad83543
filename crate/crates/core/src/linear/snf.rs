//! Smith normal form.
//!
//! Two routes produce the same invariants. With transforms requested, a dense
//! elimination tracks unimodular `U`, `V` with `U·A·V = diag(d1, …, dr, 0, …)`;
//! its pivot is the entry of least absolute value, ties broken by `(row, col)`.
//! Without transforms, a sparse pass first removes every ±1 pivot it can find
//! (Markowitz order) and only the residual lattice goes through the dense
//! reduction. Bar-resolution boundaries are overwhelmingly unit-pivot, so the
//! residual stays small.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;

use super::sparse::axpy_sub_with;
use super::{Int, IntMatrix, SparseIntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfTransforms {
    /// Row transform, `rows × rows`.
    pub u: IntMatrix,
    /// Column transform, `cols × cols`.
    pub v: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries `d1 | d2 | … | dr`, all positive.
    pub invariants: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<SnfTransforms>,
}

impl SnfResult {
    /// Invariants greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.invariants.iter().filter(|d| **d > BigInt::from(1))
    }
}

pub fn smith_normal_form(a: &SparseIntMatrix, keep_transforms: bool) -> SnfResult {
    if keep_transforms {
        let mut d = a.to_dense();
        let mut u = IntMatrix::identity(a.rows());
        let mut v = IntMatrix::identity(a.cols());
        let diag = dense_snf(d.data_mut(), Some(u.data_mut()), Some(v.data_mut()));
        SnfResult {
            rank: diag.len(),
            invariants: diag.iter().map(Int::to_bigint).collect(),
            transforms: Some(SnfTransforms { u, v }),
        }
    } else {
        let diag = sparse_invariants(a);
        SnfResult {
            rank: diag.len(),
            invariants: diag.iter().map(Int::to_bigint).collect(),
            transforms: None,
        }
    }
}

/// Dense Smith reduction in place. Returns the nonzero diagonal.
pub(crate) fn dense_snf(
    a: &mut [Vec<Int>],
    mut u: Option<&mut Vec<Vec<Int>>>,
    mut v: Option<&mut Vec<Vec<Int>>>,
) -> Vec<Int> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_entry(a, t..m, t..n) else {
            break;
        };
        move_pivot(a, &mut u, &mut v, t, pi, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_round(&a[t][t]);
                row_sub(a, &mut u, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_round(&a[t][t]);
                col_sub(a, &mut v, j, t, &q);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // A remainder survived: it is smaller than the pivot.
                let (pi, pj) = cross_min(a, t, m, n);
                move_pivot(a, &mut u, &mut v, t, pi, pj);
                continue;
            }
            let pivot = a[t][t].clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_divisible_by(&pivot));
            match offender {
                Some((i, _)) => {
                    // row_t += row_i brings the offending entry into row t.
                    row_sub(a, &mut u, t, i, &Int::from(-1));
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    diag
}

fn min_abs_entry(
    a: &[Vec<Int>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &a[i][j];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].cmp_abs(x) != Ordering::Greater => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`.
fn cross_min(a: &[Vec<Int>], t: usize, m: usize, n: usize) -> (usize, usize) {
    let col = (t..m).map(|i| (i, t));
    let row = (t + 1..n).map(|j| (t, j));
    col.chain(row)
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].cmp_abs(&a[k][l]).then((i, j).cmp(&(k, l))))
        .expect("dirty cross has a nonzero entry")
}

fn move_pivot(
    a: &mut [Vec<Int>],
    u: &mut Option<&mut Vec<Vec<Int>>>,
    v: &mut Option<&mut Vec<Vec<Int>>>,
    t: usize,
    pi: usize,
    pj: usize,
) {
    if pi != t {
        a.swap(pi, t);
        if let Some(u) = u.as_deref_mut() {
            u.swap(pi, t);
        }
    }
    if pj != t {
        for row in a.iter_mut() {
            row.swap(pj, t);
        }
        if let Some(v) = v.as_deref_mut() {
            for row in v.iter_mut() {
                row.swap(pj, t);
            }
        }
    }
}

/// row_i -= q * row_k, mirrored into `u`.
fn row_sub(a: &mut [Vec<Int>], u: &mut Option<&mut Vec<Vec<Int>>>, i: usize, k: usize, q: &Int) {
    fn apply(m: &mut [Vec<Int>], i: usize, k: usize, q: &Int) {
        let (src, dst) = if k < i {
            let (lo, hi) = m.split_at_mut(i);
            (&lo[k], &mut hi[0])
        } else {
            let (lo, hi) = m.split_at_mut(k);
            (&hi[0], &mut lo[i])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d = &*d - &(q * s);
            }
        }
    }
    apply(a, i, k, q);
    if let Some(u) = u.as_deref_mut() {
        apply(u, i, k, q);
    }
}

/// col_j -= q * col_k, mirrored into `v`.
fn col_sub(a: &mut [Vec<Int>], v: &mut Option<&mut Vec<Vec<Int>>>, j: usize, k: usize, q: &Int) {
    fn apply(m: &mut [Vec<Int>], j: usize, k: usize, q: &Int) {
        for row in m.iter_mut() {
            if !row[k].is_zero() {
                row[j] = &row[j] - &(q * &row[k]);
            }
        }
    }
    apply(a, j, k, q);
    if let Some(v) = v.as_deref_mut() {
        apply(v, j, k, q);
    }
}

/// Invariant factors without transforms: unit-pivot sparse elimination, then
/// dense reduction of what remains.
pub(crate) fn sparse_invariants(a: &SparseIntMatrix) -> Vec<Int> {
    let rows = a.rows();
    let mut cols = a.clone().into_columns();
    let units = eliminate_unit_pivots(rows, &mut cols);

    let mut live_rows: Vec<u32> = cols.iter().flatten().map(|(r, _)| *r).collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let mut diag = vec![Int::ONE; units];
    if live_rows.is_empty() {
        return diag;
    }
    let dim = live_rows.len();
    let remap = |r: u32| live_rows.binary_search(&r).expect("live row") as u32;

    let mut seen: HashSet<Vec<(u32, Int)>> = HashSet::new();
    let mut lattice = EchelonLattice::new(dim);
    for col in cols.into_iter().filter(|c| !c.is_empty()) {
        let mut v: Vec<(u32, Int)> = col.into_iter().map(|(r, x)| (remap(r), x)).collect();
        if v[0].1.is_negative() {
            for (_, x) in v.iter_mut() {
                *x = -&*x;
            }
        }
        if seen.insert(v.clone()) {
            lattice.insert(v);
        }
    }
    let mut basis = lattice.into_rows();
    // Basis vectors are rows here; SNF of the transpose has the same invariants.
    diag.extend(dense_snf(&mut basis, None, None));
    diag
}

/// Repeatedly picks a ±1 entry in the sparsest live row (shortest column
/// among that row's unit entries), clears the row by column operations and
/// drops the pivot row and column. Returns the number of pivots taken.
fn eliminate_unit_pivots(rows: usize, cols: &mut [Vec<(u32, Int)>]) -> usize {
    let mut occ: Vec<Vec<u32>> = vec![Vec::new(); rows];
    for (c, col) in cols.iter().enumerate() {
        for (r, _) in col {
            occ[*r as usize].push(c as u32);
        }
    }
    let mut row_dead = vec![false; rows];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = occ
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.is_empty())
        .map(|(r, o)| Reverse((o.len(), r as u32)))
        .collect();
    let mut units = 0;
    let mut deferred: Vec<u32> = Vec::new();

    loop {
        let mut progress = false;
        while let Some(Reverse((count, r))) = heap.pop() {
            let ri = r as usize;
            if row_dead[ri] {
                continue;
            }
            compact_occupancy(&mut occ[ri], r, cols);
            let len = occ[ri].len();
            if len == 0 {
                continue;
            }
            if len != count {
                heap.push(Reverse((len, r)));
                continue;
            }
            let pivot_col = occ[ri]
                .iter()
                .filter(|&&c| entry(&cols[c as usize], r).is_some_and(Int::is_unit))
                .min_by_key(|&&c| (cols[c as usize].len(), c))
                .copied();
            let Some(pc) = pivot_col else {
                deferred.push(r);
                continue;
            };
            let pivot = std::mem::take(&mut cols[pc as usize]);
            let sign = entry(&pivot, r).expect("pivot present").clone();
            let others = std::mem::take(&mut occ[ri]);
            for &j in &others {
                if j == pc {
                    continue;
                }
                let col = &cols[j as usize];
                let Some(a) = entry(col, r) else { continue };
                let factor = a * &sign;
                let updated = axpy_sub_with(col, &factor, &pivot, |x| occ[x as usize].push(j));
                cols[j as usize] = updated;
            }
            row_dead[ri] = true;
            for (x, _) in &pivot {
                let xi = *x as usize;
                if !row_dead[xi] {
                    heap.push(Reverse((occ[xi].len(), *x)));
                }
            }
            units += 1;
            progress = true;
        }
        if !progress || deferred.is_empty() {
            break;
        }
        for r in deferred.drain(..) {
            if !row_dead[r as usize] {
                compact_occupancy(&mut occ[r as usize], r, cols);
                heap.push(Reverse((occ[r as usize].len(), r)));
            }
        }
    }
    units
}

fn entry(col: &[(u32, Int)], r: u32) -> Option<&Int> {
    col.binary_search_by_key(&r, |(x, _)| *x)
        .ok()
        .map(|i| &col[i].1)
}

fn compact_occupancy(occ: &mut Vec<u32>, r: u32, cols: &[Vec<(u32, Int)>]) {
    occ.sort_unstable();
    occ.dedup();
    occ.retain(|&c| entry(&cols[c as usize], r).is_some());
}

/// Lattice basis in row-echelon form over the integers (dense rows).
struct EchelonLattice {
    dim: usize,
    by_lead: Vec<Option<Vec<Int>>>,
}

impl EchelonLattice {
    fn new(dim: usize) -> Self {
        EchelonLattice {
            dim,
            by_lead: vec![None; dim],
        }
    }

    fn insert(&mut self, sparse: Vec<(u32, Int)>) {
        let mut v = vec![Int::ZERO; self.dim];
        for (i, x) in sparse {
            v[i as usize] = x;
        }
        let mut i = 0;
        while i < self.dim {
            if v[i].is_zero() {
                i += 1;
                continue;
            }
            let Some(b) = self.by_lead[i].as_mut() else {
                if v[i].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.by_lead[i] = Some(v);
                return;
            };
            if v[i].is_divisible_by(&b[i]) {
                let q = v[i].div_mod_floor(&b[i]).0;
                for k in i..self.dim {
                    if !b[k].is_zero() {
                        v[k] = &v[k] - &(&q * &b[k]);
                    }
                }
                i += 1;
                continue;
            }
            // Replace the basis vector by a gcd combination and keep reducing
            // the complementary combination, whose entry at i vanishes.
            let (g, x, y) = Int::extended_gcd(&b[i], &v[i]);
            let bi = b[i].div_mod_floor(&g).0;
            let vi = v[i].div_mod_floor(&g).0;
            let mut nb = vec![Int::ZERO; self.dim];
            let mut nv = vec![Int::ZERO; self.dim];
            for k in i..self.dim {
                nb[k] = &(&x * &b[k]) + &(&y * &v[k]);
                nv[k] = &(&vi * &b[k]) - &(&bi * &v[k]);
            }
            *b = nb;
            v = nv;
            i += 1;
        }
    }

    fn into_rows(self) -> Vec<Vec<Int>> {
        self.by_lead.into_iter().flatten().collect()
    }
}
