//! Explicit finite groups given by Cayley tables.
//!
//! Every [`FiniteGroup`] is validated on construction and relabeled so that
//! element `0` is the identity. Elements are plain indices; subgroups are
//! sorted index sets tied to their parent by convention.

mod construct;
mod hom;
mod iso;
mod subgroup;

pub use construct::{direct_product, semidirect_product, Action, Product};
pub use hom::GroupHom;
pub(crate) use iso::generating_sequence;
pub use iso::{
    are_isomorphic, automorphisms, automorphisms_within, Fingerprint, DEFAULT_AUTOMORPHISM_BUDGET,
};
pub use subgroup::{
    abelianization, find_complement, is_extraspecial_pair, min_generators, pair_center,
    pair_commutator, pair_upper_center, quotient, subgroup_generated, Subgroup,
};

use serde::Deserialize;
use thiserror::Error;

use crate::abelian::{factorize, log_base, AbelianInvariants};

/// Element index inside a group.
pub type Elem = usize;

/// Cayley tables beyond this size are refused outright.
pub const MAX_GROUP_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed table{}: {reason}", cell_suffix(.cell))]
    MalformedTable {
        cell: Option<(usize, usize)>,
        reason: String,
    },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: Elem },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Elem, b: Elem, c: Elem },
    #[error("subgroup is not normal: conjugating {element} by {by} leaves it")]
    NotNormal { element: Elem, by: Elem },
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },
    #[error("action is not a homomorphism at ({k1}, {k2})")]
    ActionNotHomomorphism { k1: Elem, k2: Elem },
    #[error("action of {k} is not an automorphism ({reason})")]
    NotAutomorphism { k: Elem, reason: String },
    #[error("map is not a homomorphism at ({a}, {b})")]
    NotHomomorphism { a: Elem, b: Elem },
    #[error("group of order {order} exceeds the budget {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("element {element} is outside a group of order {order}")]
    ElementOutOfRange { element: Elem, order: usize },
    #[error("elements do not form a subgroup ({0})")]
    NotASubgroup(String),
}

fn cell_suffix(cell: &Option<(usize, usize)>) -> String {
    match cell {
        Some((r, c)) => format!(" at row {r}, column {c}"),
        None => String::new(),
    }
}

fn malformed(cell: Option<(usize, usize)>, reason: impl Into<String>) -> GroupError {
    GroupError::MalformedTable {
        cell,
        reason: reason.into(),
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inverses: Vec<Elem>,
    label: Option<String>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Validates a Cayley table and returns the group it defines. The identity is
/// discovered and moved to index 0; inverses are computed.
pub fn make_group(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(malformed(None, "empty table"));
    }
    if n > MAX_GROUP_ORDER {
        return Err(malformed(
            None,
            format!("order {n} exceeds the supported maximum {MAX_GROUP_ORDER}"),
        ));
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(malformed(
                Some((r, row.len().min(n))),
                format!("row {r} has {} entries, expected {n}", row.len()),
            ));
        }
        if let Some(c) = row.iter().position(|&x| x >= n) {
            return Err(malformed(
                Some((r, c)),
                format!("entry {} is not an element index below {n}", row[c]),
            ));
        }
    }
    let at = |a: usize, b: usize| table[a][b];
    let identity = (0..n)
        .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
        .ok_or(GroupError::NoIdentity)?;
    let mut inverses = vec![0; n];
    for a in 0..n {
        inverses[a] = (0..n)
            .find(|&b| at(a, b) == identity && at(b, a) == identity)
            .ok_or(GroupError::MissingInverse { element: a })?;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    // Relabel so the identity is element 0 (swap it with whatever was there).
    let relabel = |x: usize| {
        if x == identity {
            0
        } else if x == 0 {
            identity
        } else {
            x
        }
    };
    let mut flat = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            flat[relabel(a) * n + relabel(b)] = relabel(at(a, b));
        }
    }
    let mut inv = vec![0; n];
    for a in 0..n {
        inv[relabel(a)] = relabel(inverses[a]);
    }
    Ok(FiniteGroup {
        order: n,
        table: flat,
        inverses: inv,
        label: None,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CayleyFile {
    order: i64,
    table: Vec<Vec<i64>>,
}

impl FiniteGroup {
    /// Builds from a flat table already known to satisfy the group axioms
    /// with identity 0. Used by constructions whose output is a group by
    /// construction; debug builds still re-validate.
    pub(crate) fn from_trusted(order: usize, table: Vec<Elem>) -> FiniteGroup {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverses[a] = row.iter().position(|&x| x == 0).expect("latin row");
        }
        let g = FiniteGroup {
            order,
            table,
            inverses,
            label: None,
        };
        debug_assert!(g.check_axioms().is_ok(), "trusted table failed validation");
        g
    }

    /// Parses a Cayley-table JSON file: `{"order": n, "table": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<FiniteGroup, GroupError> {
        let file: CayleyFile = serde_json::from_str(text).map_err(|e| {
            malformed(
                None,
                format!("line {} column {}: {e}", e.line(), e.column()),
            )
        })?;
        if file.order < 1 || file.order as usize > MAX_GROUP_ORDER {
            return Err(malformed(
                None,
                format!("order {} outside 1..={MAX_GROUP_ORDER}", file.order),
            ));
        }
        let n = file.order as usize;
        if file.table.len() != n {
            return Err(malformed(
                Some((file.table.len().min(n), 0)),
                format!("declared order {n} but table has {} rows", file.table.len()),
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for (r, row) in file.table.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (c, &x) in row.iter().enumerate() {
                if x < 0 || x as usize >= n {
                    return Err(malformed(
                        Some((r, c)),
                        format!("entry {x} is not an element index below {n}"),
                    ));
                }
                out.push(x as usize);
            }
            rows.push(out);
        }
        make_group(&rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "order": self.order, "table": self.rows() }).to_string()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.table
            .chunks(self.order)
            .map(<[Elem]>::to_vec)
            .collect()
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|a| self.element_order(a)).collect()
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().into_iter().fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subgroup {
        let elems = self
            .elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect();
        Subgroup::from_sorted_unchecked(self.order, elems)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        pair_commutator(self, &self.whole()).expect("the whole group is normal")
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order, self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order, vec![0])
    }

    /// Conjugacy-class size for every element.
    pub fn class_sizes(&self) -> Vec<usize> {
        self.elements()
            .map(|x| {
                let centralizer = self
                    .elements()
                    .filter(|&g| self.mul(x, g) == self.mul(g, x))
                    .count();
                self.order / centralizer
            })
            .collect()
    }

    /// `Some((p, k))` when the order is `p^k` with `k >= 1`; `None` for the
    /// trivial group and for orders with two or more prime divisors.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match factorize(self.order as u64).as_slice() {
            [(p, k)] => Some((*p, *k)),
            _ => None,
        }
    }

    /// `log_p |G|`, treating the trivial group as `p^0`.
    pub fn log_order(&self, p: u64) -> Option<u32> {
        log_base(self.order as u128, p as u128)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.log_order(p).is_some()
    }

    /// Invariant factors when the group is abelian.
    pub fn abelian_invariants(&self) -> Option<AbelianInvariants> {
        self.is_abelian().then(|| abelian_invariants_of(self))
    }

    /// The four group axioms, re-checked from scratch.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in self.elements() {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(GroupError::MissingInverse { element: a });
            }
        }
        if self.table.iter().any(|&x| x >= n) {
            return Err(malformed(None, "entry out of range"));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns a copy with elements renamed by the permutation `perm`
    /// (element `x` becomes `perm[x]`). `perm[0]` must be 0.
    pub fn relabeled(&self, perm: &[Elem]) -> FiniteGroup {
        assert_eq!(perm.len(), self.order);
        assert_eq!(perm[0], 0, "identity must stay at index 0");
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        let mut g = FiniteGroup::from_trusted(n, table);
        g.label = self.label.clone();
        g
    }
}

/// Invariant factors of an abelian group from its `q^k`-torsion counts.
pub(crate) fn abelian_invariants_of(g: &FiniteGroup) -> AbelianInvariants {
    let mut divs = std::collections::BTreeMap::new();
    for (q, e) in factorize(g.order() as u64) {
        // omega[k] = log_q #{x : x^(q^k) = 1}
        let omega: Vec<u32> = (0..=e)
            .map(|k| {
                let qk = q.pow(k);
                let count = g.elements().filter(|&x| g.pow(x, qk) == 0).count();
                log_base(count as u128, q as u128).expect("torsion subgroup has q-power order")
            })
            .collect();
        // number of cyclic factors of order >= q^k is omega[k] - omega[k-1]
        let at_least: Vec<u32> = (1..=e as usize).map(|k| omega[k] - omega[k - 1]).collect();
        let mut exps = Vec::new();
        for k in 1..=e as usize {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(k as u32, exactly as usize));
        }
        divs.insert(q, exps);
    }
    AbelianInvariants::from_elementary_divisors(&divs)
}
