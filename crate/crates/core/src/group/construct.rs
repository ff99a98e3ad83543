use std::collections::{BTreeMap, VecDeque};

use super::{Elem, FiniteGroup, GroupError, Subgroup};

/// A product group together with the embedded copies of its two factors.
///
/// For `direct_product(a, b)` and `semidirect_product(n, k, _)` the pair
/// `(x, y)` is stored as element `x * |right| + y`.
#[derive(Clone, Debug)]
pub struct Product {
    pub group: FiniteGroup,
    pub left: Subgroup,
    pub right: Subgroup,
}

/// An action of `K` on `N` by automorphisms: `maps[k][x]` is the image of
/// `x ∈ N` under `k`. Composition follows `maps[k1 k2] = maps[k1] ∘ maps[k2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    maps: Vec<Vec<Elem>>,
}

impl Action {
    pub fn trivial(n: &FiniteGroup, k: &FiniteGroup) -> Action {
        Action {
            maps: vec![n.elements().collect(); k.order()],
        }
    }

    /// Validates a full table of maps, one per element of `K`.
    pub fn new(
        n: &FiniteGroup,
        k: &FiniteGroup,
        maps: Vec<Vec<Elem>>,
    ) -> Result<Action, GroupError> {
        if maps.len() != k.order() {
            return Err(GroupError::NotAutomorphism {
                k: maps.len().min(k.order()),
                reason: format!(
                    "{} maps given for a group of order {}",
                    maps.len(),
                    k.order()
                ),
            });
        }
        for (ki, m) in maps.iter().enumerate() {
            check_automorphism(n, ki, m)?;
        }
        let action = Action { maps };
        action.check_homomorphism(k)?;
        Ok(action)
    }

    /// Extends images of some elements of `K` (usually generators) to the
    /// whole of `K` and validates the result. Elements of `K` not reached from
    /// the given ones are reported as a failure of the identity map.
    pub fn from_generator_images(
        n: &FiniteGroup,
        k: &FiniteGroup,
        images: &BTreeMap<Elem, Vec<Elem>>,
    ) -> Result<Action, GroupError> {
        for (&ki, m) in images {
            if ki >= k.order() {
                return Err(GroupError::ElementOutOfRange {
                    element: ki,
                    order: k.order(),
                });
            }
            check_automorphism(n, ki, m)?;
        }
        let mut maps: Vec<Option<Vec<Elem>>> = vec![None; k.order()];
        maps[0] = Some(n.elements().collect());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (&s, ms) in images {
                let y = k.mul(x, s);
                if maps[y].is_none() {
                    let mx = maps[x].as_ref().expect("queued");
                    maps[y] = Some(compose(mx, ms));
                    queue.push_back(y);
                }
            }
        }
        if let Some(missing) = maps.iter().position(Option::is_none) {
            return Err(GroupError::NotAutomorphism {
                k: missing,
                reason: "not generated by the elements with given images".into(),
            });
        }
        let action = Action {
            maps: maps.into_iter().map(Option::unwrap).collect(),
        };
        action.check_homomorphism(k)?;
        Ok(action)
    }

    pub fn map(&self, k: Elem) -> &[Elem] {
        &self.maps[k]
    }

    pub fn maps(&self) -> &[Vec<Elem>] {
        &self.maps
    }

    pub fn is_trivial(&self) -> bool {
        self.maps
            .iter()
            .all(|m| m.iter().enumerate().all(|(i, &x)| i == x))
    }

    fn check_homomorphism(&self, k: &FiniteGroup) -> Result<(), GroupError> {
        if self.maps[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(GroupError::ActionNotHomomorphism { k1: 0, k2: 0 });
        }
        for k1 in k.elements() {
            for k2 in k.elements() {
                let lhs = &self.maps[k.mul(k1, k2)];
                let m1 = &self.maps[k1];
                if self.maps[k2].iter().zip(lhs).any(|(&x, &y)| m1[x] != y) {
                    return Err(GroupError::ActionNotHomomorphism { k1, k2 });
                }
            }
        }
        Ok(())
    }
}

/// `(outer ∘ inner)[x] = outer[inner[x]]`.
fn compose(outer: &[Elem], inner: &[Elem]) -> Vec<Elem> {
    inner.iter().map(|&x| outer[x]).collect()
}

fn check_automorphism(n: &FiniteGroup, k: Elem, m: &[Elem]) -> Result<(), GroupError> {
    let fail = |reason: String| GroupError::NotAutomorphism { k, reason };
    if m.len() != n.order() {
        return Err(fail(format!(
            "map has {} entries, expected {}",
            m.len(),
            n.order()
        )));
    }
    let mut hit = vec![false; n.order()];
    for &x in m {
        if x >= n.order() {
            return Err(fail(format!("image {x} out of range")));
        }
        if std::mem::replace(&mut hit[x], true) {
            return Err(fail(format!("image {x} repeated")));
        }
    }
    for a in n.elements() {
        for b in n.elements() {
            if m[n.mul(a, b)] != n.mul(m[a], m[b]) {
                return Err(fail(format!("not multiplicative at ({a}, {b})")));
            }
        }
    }
    Ok(())
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Product {
    let trivial = Action::trivial(a, b);
    build(a, b, &trivial)
}

/// `N ⋊ K` with `(n1, k1)(n2, k2) = (n1 · k1(n2), k1 k2)`.
pub fn semidirect_product(
    n: &FiniteGroup,
    k: &FiniteGroup,
    action: &Action,
) -> Result<Product, GroupError> {
    // Re-validate: an Action may have been built for different groups.
    Action::new(n, k, action.maps.clone())?;
    Ok(build(n, k, action))
}

fn build(n: &FiniteGroup, k: &FiniteGroup, action: &Action) -> Product {
    let (a, b) = (n.order(), k.order());
    let order = a * b;
    let mut table = vec![0; order * order];
    for n1 in 0..a {
        for k1 in 0..b {
            let row = (n1 * b + k1) * order;
            let m = &action.maps[k1];
            for n2 in 0..a {
                let nn = n.mul(n1, m[n2]) * b;
                for k2 in 0..b {
                    table[row + n2 * b + k2] = nn + k.mul(k1, k2);
                }
            }
        }
    }
    let group = FiniteGroup::from_trusted(order, table);
    let left = Subgroup::from_sorted_unchecked(order, (0..a).map(|x| x * b).collect());
    let right = Subgroup::from_sorted_unchecked(order, (0..b).collect());
    Product { group, left, right }
}
