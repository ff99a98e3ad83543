use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::subgroup::frattini;
use super::{subgroup_generated, Elem, FiniteGroup, GroupError, GroupHom};

/// Order bound for [`automorphisms`] unless a caller supplies its own.
pub const DEFAULT_AUTOMORPHISM_BUDGET: usize = 32;

/// Isomorphism invariants cheap enough to compute for every group we meet.
/// Equal fingerprints are necessary, not sufficient, for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: usize,
    pub center_order: usize,
    pub derived_order: usize,
    /// `(element order, class size) -> count`, which also encodes the plain
    /// element-order histogram and the multiset of class sizes.
    pub profile: Vec<(usize, usize, usize)>,
}

impl Fingerprint {
    pub fn of(g: &FiniteGroup) -> Fingerprint {
        let orders = g.element_orders();
        let classes = g.class_sizes();
        let mut profile = BTreeMap::new();
        for (&o, &c) in orders.iter().zip(&classes) {
            *profile.entry((o, c)).or_insert(0usize) += 1;
        }
        Fingerprint {
            order: g.order(),
            exponent: orders.iter().copied().fold(1, num_integer::lcm),
            center_order: g.center().order(),
            derived_order: g.derived_subgroup().order(),
            profile: profile.into_iter().map(|((o, c), n)| (o, c, n)).collect(),
        }
    }

    /// Compact, stable text form (used as a cache key).
    pub fn key(&self) -> String {
        let mut s = format!(
            "{}:{}:{}:{}",
            self.order, self.exponent, self.center_order, self.derived_order
        );
        for (o, c, n) in &self.profile {
            s.push_str(&format!(";{o},{c},{n}"));
        }
        s
    }
}

/// A short generating sequence: for `p`-groups a Burnside basis (elements
/// independent modulo the Frattini subgroup), otherwise greedy growth.
/// Sorted by ascending element order.
pub(crate) fn generating_sequence(g: &FiniteGroup) -> Vec<Elem> {
    let mut gens = Vec::new();
    if g.order() == 1 {
        return gens;
    }
    if let Some((p, _)) = g.prime_power() {
        let phi = frattini(g, p);
        let mut span = phi.elements().to_vec();
        let mut current = subgroup_generated(g, &span);
        while current.order() < g.order() {
            // Prefer large element orders: fewer candidates to try as images.
            let x = g
                .elements()
                .filter(|&x| !current.contains(x))
                .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
                .expect("proper subgroup");
            gens.push(x);
            span.push(x);
            current = subgroup_generated(g, &span);
        }
    } else {
        let mut current = g.trivial_subgroup();
        while current.order() < g.order() {
            let x = g
                .elements()
                .filter(|&x| !current.contains(x))
                .max_by_key(|&x| {
                    let mut next = gens.clone();
                    next.push(x);
                    (subgroup_generated(g, &next).order(), std::cmp::Reverse(x))
                })
                .expect("proper subgroup");
            gens.push(x);
            current = subgroup_generated(g, &gens);
        }
    }
    gens.sort_by_key(|&x| (g.element_order(x), x));
    gens
}

/// Backtracking search for injective homomorphisms `A -> B` determined by
/// generator images. `visit` returns `false` to stop the search.
struct Search<'a> {
    a: &'a FiniteGroup,
    b: &'a FiniteGroup,
    gens: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    images: Vec<Elem>,
    map: Vec<Elem>,
    used: Vec<bool>,
    defined: Vec<Elem>,
}

const UNSET: Elem = usize::MAX;

impl<'a> Search<'a> {
    fn new(a: &'a FiniteGroup, b: &'a FiniteGroup) -> Search<'a> {
        let gens = generating_sequence(a);
        let (a_orders, a_classes) = (a.element_orders(), a.class_sizes());
        let (b_orders, b_classes) = (b.element_orders(), b.class_sizes());
        let candidates = gens
            .iter()
            .map(|&x| {
                b.elements()
                    .filter(|&y| b_orders[y] == a_orders[x] && b_classes[y] == a_classes[x])
                    .collect()
            })
            .collect();
        let mut map = vec![UNSET; a.order()];
        let mut used = vec![false; b.order()];
        map[0] = 0;
        used[0] = true;
        Search {
            a,
            b,
            gens,
            candidates,
            images: Vec::new(),
            map,
            used,
            defined: vec![0],
        }
    }

    /// Extends the map to the subgroup generated by the current images,
    /// checking `f(x s) = f(x) f(s)` on the way. On failure the map is
    /// restored and `false` returned.
    fn extend(&mut self) -> bool {
        let mark = self.defined.len();
        let mut i = 0;
        while i < self.defined.len() {
            let x = self.defined[i];
            let fx = self.map[x];
            for (j, &s) in self.gens[..self.images.len()].iter().enumerate() {
                let y = self.a.mul(x, s);
                let fy = self.b.mul(fx, self.images[j]);
                if self.map[y] == UNSET {
                    if self.used[fy] {
                        self.undo(mark);
                        return false;
                    }
                    self.map[y] = fy;
                    self.used[fy] = true;
                    self.defined.push(y);
                } else if self.map[y] != fy {
                    self.undo(mark);
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for &x in &self.defined[mark..] {
            self.used[self.map[x]] = false;
            self.map[x] = UNSET;
        }
        self.defined.truncate(mark);
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Elem]) -> bool) -> bool {
        let level = self.images.len();
        if level == self.gens.len() {
            return visit(&self.map);
        }
        // A generator already reached by earlier ones has a forced image.
        let forced = self.map[self.gens[level]];
        for ci in 0..self.candidates[level].len() {
            let y = self.candidates[level][ci];
            if forced != UNSET {
                if y != forced {
                    continue;
                }
            } else if self.used[y] {
                continue;
            }
            let mark = self.defined.len();
            self.images.push(y);
            if self.extend() {
                let keep_going = self.run(visit);
                self.undo(mark);
                if !keep_going {
                    self.images.pop();
                    return false;
                }
            }
            self.images.pop();
        }
        true
    }
}

/// An isomorphism `A -> B`, or `None`.
pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Option<GroupHom> {
    if a.order() != b.order() || Fingerprint::of(a) != Fingerprint::of(b) {
        return None;
    }
    let mut found = None;
    let mut search = Search::new(a, b);
    search.run(&mut |map| {
        found = Some(map.to_vec());
        false
    });
    let iso = GroupHom::new_unchecked(a.order(), b.order(), found?);
    debug_assert!(iso.is_bijective() && iso.verify(a, b).is_ok());
    Some(iso)
}

/// Every automorphism of `G`, provided `|G|` is within the default budget.
pub fn automorphisms(g: &FiniteGroup) -> Result<Vec<GroupHom>, GroupError> {
    automorphisms_within(g, DEFAULT_AUTOMORPHISM_BUDGET)
}

/// Every automorphism of `G`, provided `|G| <= budget`. The identity comes
/// first; the rest follow the search order, which is deterministic.
pub fn automorphisms_within(g: &FiniteGroup, budget: usize) -> Result<Vec<GroupHom>, GroupError> {
    if g.order() > budget {
        return Err(GroupError::BudgetExceeded {
            order: g.order(),
            budget,
        });
    }
    let mut out = Vec::new();
    let mut search = Search::new(g, g);
    search.run(&mut |map| {
        out.push(GroupHom::new_unchecked(g.order(), g.order(), map.to_vec()));
        true
    });
    out.sort_by(|x, y| x.images().cmp(y.images()));
    Ok(out)
}
