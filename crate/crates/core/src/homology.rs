//! `M(G) = H_2(G; Z)` from the normalized bar resolution.
//!
//! Basis elements of `C_k` are `k`-tuples of non-identity elements. With
//! `q = |G| - 1`, element `g ≠ 1` is symbol `g - 1` and a tuple is encoded in
//! mixed radix, first component most significant.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::AbelianInvariants;
use num_traits::ToPrimitive;

use crate::group::{
    are_isomorphic, generating_sequence, make_group, Elem, Fingerprint, FiniteGroup,
};
use crate::linear::{self, smith_normal_form, Int, LinearError, SparseIntMatrix};

/// Default largest group order the bar complex is built for.
pub const DEFAULT_HOMOLOGY_BUDGET: usize = 32;
/// No override may go beyond this: `C_3` has `(|G|-1)^3` columns.
pub const HOMOLOGY_HARD_CAP: usize = 81;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("group of order {order} exceeds the homology budget {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("budget {0} is above the hard cap {HOMOLOGY_HARD_CAP}")]
    AboveHardCap(usize),
    #[error("internal error: second homology has free rank {0}")]
    InternalFreeRank(usize),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("multiplier cache: {0}")]
    Cache(String),
}

fn check_budget(order: usize, budget: usize) -> Result<(), HomologyError> {
    if budget > HOMOLOGY_HARD_CAP {
        return Err(HomologyError::AboveHardCap(budget));
    }
    if order > budget {
        return Err(HomologyError::BudgetExceeded { order, budget });
    }
    Ok(())
}

/// Position of a tuple of non-identity elements in the bar basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarBasisIndex {
    q: usize,
}

impl BarBasisIndex {
    pub fn for_group(g: &FiniteGroup) -> BarBasisIndex {
        BarBasisIndex { q: g.order() - 1 }
    }

    /// `None` when a component is the identity (the term is dropped).
    pub fn encode(&self, tuple: &[Elem]) -> Option<usize> {
        tuple
            .iter()
            .try_fold(0, |acc, &x| (x != 0).then(|| acc * self.q + (x - 1)))
    }

    pub fn decode(&self, mut index: usize, arity: usize) -> Vec<Elem> {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = index % self.q + 1;
            index /= self.q;
        }
        out
    }

    pub fn dim(&self, arity: u32) -> usize {
        self.q.pow(arity)
    }
}

/// `d2: C_2 -> C_1` and `d3: C_3 -> C_2` with trivial coefficients, for
/// `|G| <= budget`.
pub fn bar_boundaries(
    g: &FiniteGroup,
    budget: usize,
) -> Result<(SparseIntMatrix, SparseIntMatrix), HomologyError> {
    check_budget(g.order(), budget)?;
    let idx = BarBasisIndex::for_group(g);
    let q = idx.q;
    let push = |col: &mut Vec<(u32, Int)>, tuple: &[Elem], sign: i64| {
        if let Some(i) = idx.encode(tuple) {
            col.push((i as u32, Int::from(sign)));
        }
    };

    let mut d3 = Vec::with_capacity(q * q * q);
    for a in 1..=q {
        for b in 1..=q {
            let ab = g.mul(a, b);
            for c in 1..=q {
                let mut col = Vec::with_capacity(4);
                push(&mut col, &[b, c], 1);
                push(&mut col, &[ab, c], -1);
                push(&mut col, &[a, g.mul(b, c)], 1);
                push(&mut col, &[a, b], -1);
                d3.push(col);
            }
        }
    }
    Ok((boundary_d2(g), SparseIntMatrix::from_columns(q * q, d3)))
}

fn boundary_d2(g: &FiniteGroup) -> SparseIntMatrix {
    let q = g.order() - 1;
    let mut cols = Vec::with_capacity(q * q);
    for a in 1..=q {
        for b in 1..=q {
            let mut col = vec![(b as u32 - 1, Int::ONE), (a as u32 - 1, Int::ONE)];
            let ab = g.mul(a, b);
            if ab != 0 {
                col.push((ab as u32 - 1, -Int::ONE));
            }
            cols.push(col);
        }
    }
    SparseIntMatrix::from_columns(q, cols)
}

/// Checks `d2 · d3 = 0` column by column without materializing `d3`.
fn check_chain_condition(g: &FiniteGroup) -> Result<(), HomologyError> {
    let q = g.order() - 1;
    let mut acc = vec![0i64; q + 1];
    let d2_term = |acc: &mut [i64], x: Elem, y: Elem, sign: i64| {
        if x != 0 && y != 0 {
            acc[y] += sign;
            acc[g.mul(x, y)] -= sign;
            acc[x] += sign;
        }
    };
    let mut column = 0;
    for a in 1..=q {
        for b in 1..=q {
            let ab = g.mul(a, b);
            for c in 1..=q {
                d2_term(&mut acc, b, c, 1);
                d2_term(&mut acc, ab, c, -1);
                d2_term(&mut acc, a, g.mul(b, c), 1);
                d2_term(&mut acc, a, b, -1);
                // Slot 0 collects identity terms, which the normalized complex drops.
                if acc[1..].iter().any(|&v| v != 0) {
                    return Err(LinearError::NotAComplex { column }.into());
                }
                acc.iter_mut().for_each(|v| *v = 0);
                column += 1;
            }
        }
    }
    Ok(())
}

/// A smaller presentation of `C_2 / im d3`.
///
/// Fix generators `s_1..s_d` and a spanning tree of the Cayley graph, so each
/// `b ≠ 1` is `b' s_j` for its tree parent `b'`. The boundary of `[a|b'|s_j]`
/// gives `[a|b] ≡ [a|b'] + [ab'|s_j] - [b'|s_j]`, so the cosets of the
/// `[x|s_j]` generate. Applying `d3 d4 = 0` to `[a|b|c'|s_j]` shows that
/// `im d3` is spanned by boundaries of triples ending in a generator. The
/// result has `(|G|-1)·d` rows and `(|G|-1)^2·d` columns, and its cokernel
/// is isomorphic to `C_2 / im d3`.
fn reduced_relations(g: &FiniteGroup) -> SparseIntMatrix {
    let q = g.order() - 1;
    let gens = generating_sequence(g);
    let d = gens.len();
    // parent[b] = (b', j) with b = b' * gens[j]
    let mut parent = vec![(0, 0); g.order()];
    let mut bfs = vec![0];
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut i = 0;
    while i < bfs.len() {
        let x = bfs[i];
        for (j, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                parent[y] = (x, j);
                bfs.push(y);
            }
        }
        i += 1;
    }
    debug_assert_eq!(bfs.len(), g.order());

    let unit = |x: Elem, j: usize| (x != 0).then(|| ((x - 1) * d + j) as u32);
    // rewrite[a][b]: image of [a|b] in the span of the [x|s_j].
    let mut rewrite: Vec<Vec<Vec<(u32, i64)>>> = vec![vec![Vec::new(); g.order()]; g.order()];
    for a in 1..=q {
        for &b in &bfs[1..] {
            let (bp, j) = parent[b];
            let mut v = rewrite[a][bp].clone();
            v.extend(unit(g.mul(a, bp), j).map(|r| (r, 1)));
            v.extend(unit(bp, j).map(|r| (r, -1)));
            rewrite[a][b] = v;
        }
    }

    let mut cols = Vec::with_capacity(q * q * d);
    for a in 1..=q {
        for b in 1..=q {
            let ab = g.mul(a, b);
            for (j, &s) in gens.iter().enumerate() {
                // d3[a|b|s] = [b|s] - [ab|s] + [a|bs] - [a|b]
                let mut col: Vec<(u32, Int)> = Vec::new();
                col.extend(unit(b, j).map(|r| (r, Int::ONE)));
                col.extend(unit(ab, j).map(|r| (r, -Int::ONE)));
                col.extend(
                    rewrite[a][g.mul(b, s)]
                        .iter()
                        .map(|&(r, v)| (r, Int::from(v))),
                );
                col.extend(rewrite[a][b].iter().map(|&(r, v)| (r, Int::from(-v))));
                cols.push(col);
            }
        }
    }
    SparseIntMatrix::from_columns(q * d, cols)
}

/// The Schur multiplier of `G`, computed from scratch.
///
/// Torsion and rank are read off [`reduced_relations`]; the free rank of
/// `H_2` must come out as zero, which is checked against the rank of `d2`.
pub fn schur_multiplier(
    g: &FiniteGroup,
    budget: usize,
) -> Result<AbelianInvariants, HomologyError> {
    check_budget(g.order(), budget)?;
    if g.order() == 1 {
        return Ok(AbelianInvariants::trivial());
    }
    check_chain_condition(g)?;
    let relations = reduced_relations(g);
    let snf = smith_normal_form(&relations, false);
    let rank_d2 = smith_normal_form(&boundary_d2(g), false).rank;
    let free_rank = relations.rows() - snf.rank - rank_d2;
    if free_rank != 0 {
        return Err(HomologyError::InternalFreeRank(free_rank));
    }
    let mut orders = Vec::new();
    for t in snf.torsion() {
        orders.push(
            t.to_u64()
                .ok_or_else(|| LinearError::Overflow(t.to_string()))?,
        );
    }
    Ok(AbelianInvariants::from_cyclic_orders(&orders))
}

/// `ker d2 / im d3` straight from the full bar complex. Much slower than
/// [`schur_multiplier`]; kept as an independent route for cross-checks.
pub fn schur_multiplier_full_complex(
    g: &FiniteGroup,
    budget: usize,
) -> Result<AbelianInvariants, HomologyError> {
    let (d2, d3) = bar_boundaries(g, budget)?;
    let h = linear::homology(&d2, &d3)?;
    if h.free_rank != 0 {
        return Err(HomologyError::InternalFreeRank(h.free_rank));
    }
    Ok(h.torsion)
}

/// Memo table for multipliers. Entries are grouped by fingerprint and
/// matched by an explicit isomorphism test, so two groups only share a result
/// when they really are isomorphic.
///
/// Lookups and inserts take a lock; the multiplier itself is computed
/// outside it, so two threads may compute the same value. Both results are
/// equal, and the later insert is simply skipped.
#[derive(Default)]
pub struct MultiplierCache {
    entries: Mutex<HashMap<String, Vec<(FiniteGroup, AbelianInvariants)>>>,
}

#[derive(Serialize, Deserialize)]
struct StoredEntry {
    table: Vec<Vec<usize>>,
    multiplier: AbelianInvariants,
}

impl MultiplierCache {
    pub fn new() -> MultiplierCache {
        MultiplierCache::default()
    }

    pub fn len(&self) -> usize {
        self.entries
            .lock()
            .expect("cache lock")
            .values()
            .map(Vec::len)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, g: &FiniteGroup) -> Option<AbelianInvariants> {
        self.lookup_keyed(&Fingerprint::of(g).key(), g)
    }

    fn lookup_keyed(&self, key: &str, g: &FiniteGroup) -> Option<AbelianInvariants> {
        let entries = self.entries.lock().expect("cache lock");
        entries
            .get(key)?
            .iter()
            .find(|(rep, _)| are_isomorphic(rep, g).is_some())
            .map(|(_, m)| m.clone())
    }

    /// `M(G)`, from the table when an isomorphic group was seen before.
    pub fn multiplier(
        &self,
        g: &FiniteGroup,
        budget: usize,
    ) -> Result<AbelianInvariants, HomologyError> {
        let key = Fingerprint::of(g).key();
        if let Some(m) = self.lookup_keyed(&key, g) {
            return Ok(m);
        }
        let m = schur_multiplier(g, budget)?;
        let mut entries = self.entries.lock().expect("cache lock");
        let bucket = entries.entry(key).or_default();
        if !bucket
            .iter()
            .any(|(rep, _)| are_isomorphic(rep, g).is_some())
        {
            bucket.push((g.clone(), m.clone()));
        }
        Ok(m)
    }

    /// Loads a cache file written by [`MultiplierCache::save`]. Every stored
    /// table is re-validated and re-fingerprinted.
    pub fn load(path: &Path) -> Result<MultiplierCache, HomologyError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| HomologyError::Cache(e.to_string()))?;
        let stored: std::collections::BTreeMap<String, Vec<StoredEntry>> =
            serde_json::from_str(&text).map_err(|e| HomologyError::Cache(e.to_string()))?;
        let cache = MultiplierCache::new();
        {
            let mut entries = cache.entries.lock().expect("cache lock");
            for e in stored.into_values().flatten() {
                let g =
                    make_group(&e.table).map_err(|err| HomologyError::Cache(err.to_string()))?;
                entries
                    .entry(Fingerprint::of(&g).key())
                    .or_default()
                    .push((g, e.multiplier));
            }
        }
        Ok(cache)
    }

    /// Writes the cache as JSON, keys sorted, for reproducible files.
    pub fn save(&self, path: &Path) -> Result<(), HomologyError> {
        let entries = self.entries.lock().expect("cache lock");
        let stored: std::collections::BTreeMap<&String, Vec<StoredEntry>> = entries
            .iter()
            .map(|(k, v)| {
                let list = v
                    .iter()
                    .map(|(g, m)| StoredEntry {
                        table: g.rows(),
                        multiplier: m.clone(),
                    })
                    .collect();
                (k, list)
            })
            .collect();
        let text =
            serde_json::to_string(&stored).map_err(|e| HomologyError::Cache(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| HomologyError::Cache(e.to_string()))
    }
}
