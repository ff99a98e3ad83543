use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::build::build_group;
use super::{CatalogError, GroupSpec};
use crate::abelian::is_prime;
use crate::group::{
    are_isomorphic, automorphisms_within, direct_product, generating_sequence, semidirect_product,
    Action, Elem, Fingerprint, FiniteGroup, Product,
};
use crate::pair::{PairContext, PairError};

/// A named group: the spec it was built from and the built table.
#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub spec: GroupSpec,
    pub group: FiniteGroup,
}

impl CatalogGroup {
    pub fn from_spec(spec: GroupSpec) -> Result<CatalogGroup, CatalogError> {
        let group = build_group(&spec)?;
        Ok(CatalogGroup { spec, group })
    }

    pub fn name(&self) -> String {
        self.spec.to_string()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

fn named(spec: GroupSpec) -> CatalogGroup {
    CatalogGroup::from_spec(spec).expect("catalog specs are valid")
}

fn check_prime(p: u64) -> Result<(), CatalogError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CatalogError::Semantic(format!("{p} is not prime")))
    }
}

/// Every group of order `p^k` for `k <= 3`, up to isomorphism: the abelian
/// ones by partition, then `D8, Q8` (p = 2) or `E1(p), E2(p)` (odd p).
pub fn groups_of_order(p: u64, k: u32) -> Result<Vec<CatalogGroup>, CatalogError> {
    check_prime(p)?;
    if !(1..=3).contains(&k) {
        return Err(CatalogError::UnsupportedOrder { p, k });
    }
    let mut out = abelian_groups(p, k)?;
    if k == 3 {
        let extra = if p == 2 {
            [GroupSpec::D8, GroupSpec::Q8]
        } else {
            [GroupSpec::E1(p), GroupSpec::E2(p)]
        };
        out.extend(extra.into_iter().map(named));
    }
    Ok(out)
}

/// Partitions of `k` into non-increasing parts, largest first.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            prefix.push(part);
            go(k - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// The spec `Z_{p^e1} x Z_{p^e2} x ...` for exponents in the given order.
pub fn abelian_spec(p: u64, exponents: &[u32]) -> GroupSpec {
    GroupSpec::product_of(exponents.iter().map(|&e| GroupSpec::Cyclic(p.pow(e))))
}

/// The abelian groups of order `p^k`, one per partition of `k`.
pub fn abelian_groups(p: u64, k: u32) -> Result<Vec<CatalogGroup>, CatalogError> {
    check_prime(p)?;
    if k == 0 {
        return Ok(vec![named(GroupSpec::Trivial)]);
    }
    let order = (p as u128).checked_pow(k);
    if order.is_none_or(|o| o > crate::group::MAX_GROUP_ORDER as u128) {
        return Err(CatalogError::UnsupportedOrder { p, k });
    }
    Ok(partitions(k)
        .iter()
        .map(|parts| named(abelian_spec(p, parts)))
        .collect())
}

/// Largest `e` with `p^e <= budget`.
pub fn max_exponent(p: u64, budget: usize) -> u32 {
    let mut e = 0;
    while (p as u128).pow(e + 1) <= budget as u128 {
        e += 1;
    }
    e
}

/// Appends `g` unless an isomorphic group is already present.
fn push_new(list: &mut Vec<(Fingerprint, CatalogGroup)>, g: CatalogGroup) {
    let f = Fingerprint::of(&g.group);
    if list
        .iter()
        .any(|(h, other)| *h == f && are_isomorphic(&g.group, &other.group).is_some())
    {
        return;
    }
    list.push((f, g));
}

/// The catalog closure: the trivial group, every group of order `p`, `p^2`,
/// `p^3`, every abelian `p`-group, and every direct product of two of these,
/// all up to isomorphism and within `budget`. Sorted by order, then by the
/// order of discovery.
pub fn catalog_closure(p: u64, budget: usize) -> Result<Vec<CatalogGroup>, CatalogError> {
    check_prime(p)?;
    let top = max_exponent(p, budget);
    let mut base = Vec::new();
    for k in 1..=top.min(3) {
        for g in groups_of_order(p, k)? {
            push_new(&mut base, g);
        }
    }
    for k in 4..=top {
        for g in abelian_groups(p, k)? {
            push_new(&mut base, g);
        }
    }
    let mut all = vec![(
        Fingerprint::of(&named(GroupSpec::Trivial).group),
        named(GroupSpec::Trivial),
    )];
    all.extend(base.iter().cloned());
    for (i, (_, a)) in base.iter().enumerate() {
        for (_, b) in &base[i..] {
            if a.order() * b.order() > budget {
                continue;
            }
            // Name the larger factor first, as in `D8 x Z2`.
            let (a, b) = if b.order() > a.order() {
                (b, a)
            } else {
                (a, b)
            };
            let spec = GroupSpec::product(a.spec.clone(), b.spec.clone());
            let group = direct_product(&a.group, &b.group)
                .group
                .with_label(spec.to_string());
            push_new(&mut all, CatalogGroup { spec, group });
        }
    }
    let mut out: Vec<CatalogGroup> = all.into_iter().map(|(_, g)| g).collect();
    out.sort_by_key(CatalogGroup::order);
    Ok(out)
}

/// A pair `(N ⋊ K, N)` drawn from the catalog. `action` is `None` for the
/// direct product; otherwise it carries a 1-based index among the
/// non-conjugate actions of `K` on `N` together with the action itself.
#[derive(Clone, Debug)]
pub struct CatalogPair {
    pub normal: CatalogGroup,
    pub complement: CatalogGroup,
    pub action: Option<(usize, Action)>,
}

/// How a pair is reported: factor names, and for a semidirect product the
/// action index and the images of the generators of `K`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PairLabel {
    #[serde(rename = "N")]
    pub normal: String,
    #[serde(rename = "K")]
    pub complement: String,
    pub action: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action_images: Option<BTreeMap<Elem, Vec<Elem>>>,
}

impl CatalogPair {
    pub fn direct(normal: CatalogGroup, complement: CatalogGroup) -> CatalogPair {
        CatalogPair {
            normal,
            complement,
            action: None,
        }
    }

    pub fn order(&self) -> usize {
        self.normal.order() * self.complement.order()
    }

    pub fn product(&self) -> Result<Product, CatalogError> {
        Ok(match &self.action {
            None => direct_product(&self.normal.group, &self.complement.group),
            Some((_, a)) => semidirect_product(&self.normal.group, &self.complement.group, a)?,
        })
    }

    pub fn context(&self, p: u64) -> Result<PairContext, PairError> {
        let product = self.product().map_err(|e| match e {
            CatalogError::Group(g) => PairError::Group(g),
            other => PairError::InvalidContext(other.to_string()),
        })?;
        PairContext::from_product(product, p)
    }

    pub fn label(&self) -> PairLabel {
        let action_images = self.action.as_ref().map(|(_, a)| {
            generating_sequence(&self.complement.group)
                .into_iter()
                .map(|s| (s, a.map(s).to_vec()))
                .collect()
        });
        PairLabel {
            normal: self.normal.name(),
            complement: self.complement.name(),
            action: self.action.as_ref().map(|(i, _)| *i),
            action_images,
        }
    }
}

impl std::fmt::Display for CatalogPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.action {
            None => write!(
                f,
                "N = {}, K = {}",
                self.normal.name(),
                self.complement.name()
            ),
            Some((i, _)) => write!(
                f,
                "N = {}, K = {}, action #{i}",
                self.normal.name(),
                self.complement.name()
            ),
        }
    }
}

/// Nontrivial actions of `K` on `N` by automorphisms, one per orbit under
/// conjugation by `Aut(N)`. Deterministic: orbits are listed by their
/// smallest generator-image tuple in search order.
pub fn nontrivial_actions(n: &FiniteGroup, k: &FiniteGroup) -> Result<Vec<Action>, CatalogError> {
    if k.order() == 1 || n.order() <= 2 {
        return Ok(Vec::new());
    }
    let auts: Vec<Vec<Elem>> = automorphisms_within(n, crate::homology::HOMOLOGY_HARD_CAP)?
        .into_iter()
        .map(|a| a.images().to_vec())
        .collect();
    let inverses: Vec<Vec<Elem>> = auts.iter().map(|a| invert(a)).collect();
    let gens = generating_sequence(k);
    // Images for generator s must satisfy a^ord(s) = 1.
    let options: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = k.element_order(s);
            (0..auts.len())
                .filter(|&i| power_is_identity(&auts[i], o))
                .collect()
        })
        .collect();
    let identity: Vec<Elem> = n.elements().collect();
    let mut seen: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let tuple: Vec<Vec<Elem>> = choice
            .iter()
            .zip(&options)
            .map(|(&c, opts)| auts[opts[c]].clone())
            .collect();
        let trivial = tuple.iter().all(|m| *m == identity);
        if !trivial && !seen.contains(&tuple) {
            let images: BTreeMap<Elem, Vec<Elem>> =
                gens.iter().copied().zip(tuple.iter().cloned()).collect();
            if let Ok(action) = Action::from_generator_images(n, k, &images) {
                for (b, b_inv) in auts.iter().zip(&inverses) {
                    let conj: Vec<Vec<Elem>> = tuple
                        .iter()
                        .map(|a| b_inv.iter().map(|&x| b[a[x]]).collect())
                        .collect();
                    seen.insert(conj);
                }
                out.push(action);
            }
        }
        // Odometer over the option lists.
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn invert(a: &[Elem]) -> Vec<Elem> {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn power_is_identity(a: &[Elem], exp: usize) -> bool {
    (0..a.len()).all(|x| {
        let mut y = x;
        for _ in 0..exp {
            y = a[y];
        }
        y == x
    })
}

/// Which pairs a sweep enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepScope {
    pub direct: bool,
    pub semidirect: bool,
}

impl SweepScope {
    pub const ALL: SweepScope = SweepScope {
        direct: true,
        semidirect: true,
    };
    pub const DIRECT: SweepScope = SweepScope {
        direct: true,
        semidirect: false,
    };
}

/// The pairs of the catalog closure with `|N||K| <= budget`.
///
/// Direct pairs take `N` and `K` anywhere in the closure. Semidirect pairs
/// take both factors among the groups of order `p`, `p^2`, `p^3` and use
/// every nontrivial action up to conjugation in `Aut(N)`.
pub fn catalog_pairs(
    p: u64,
    budget: usize,
    scope: SweepScope,
) -> Result<Vec<CatalogPair>, CatalogError> {
    let closure = catalog_closure(p, budget)?;
    let mut out = Vec::new();
    if scope.direct {
        for n in &closure {
            for k in &closure {
                if n.order() * k.order() <= budget {
                    out.push(CatalogPair::direct(n.clone(), k.clone()));
                }
            }
        }
    }
    if scope.semidirect {
        let small: Vec<CatalogGroup> = (1..=max_exponent(p, budget).min(3))
            .map(|k| groups_of_order(p, k))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect();
        for n in &small {
            for k in &small {
                if n.order() * k.order() > budget {
                    continue;
                }
                for (i, action) in nontrivial_actions(&n.group, &k.group)?
                    .into_iter()
                    .enumerate()
                {
                    out.push(CatalogPair {
                        normal: n.clone(),
                        complement: k.clone(),
                        action: Some((i + 1, action)),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[CatalogGroup]) -> Vec<String> {
        list.iter().map(CatalogGroup::name).collect()
    }

    #[test]
    fn small_orders() {
        assert_eq!(names(&groups_of_order(3, 1).unwrap()), ["Z3"]);
        assert_eq!(names(&groups_of_order(3, 2).unwrap()), ["Z9", "Z3 x Z3"]);
        let eight = groups_of_order(2, 3).unwrap();
        assert_eq!(names(&eight), ["Z8", "Z4 x Z2", "Z2 x Z2 x Z2", "D8", "Q8"]);
        assert_eq!(eight.iter().filter(|g| !g.group.is_abelian()).count(), 2);
        for p in [2, 3] {
            for k in 1..=3 {
                let list = groups_of_order(p, k).unwrap();
                assert_eq!(list.len(), [1, 2, 5][k as usize - 1]);
                for (i, a) in list.iter().enumerate() {
                    assert_eq!(a.order() as u64, p.pow(k));
                    for b in &list[i + 1..] {
                        assert!(
                            are_isomorphic(&a.group, &b.group).is_none(),
                            "{} ~ {}",
                            a.name(),
                            b.name()
                        );
                    }
                }
            }
        }
        assert!(matches!(
            groups_of_order(2, 4),
            Err(CatalogError::UnsupportedOrder { k: 4, .. })
        ));
        assert!(matches!(
            groups_of_order(4, 1),
            Err(CatalogError::Semantic(_))
        ));
    }

    #[test]
    fn abelian_counts_follow_partitions() {
        let counts: Vec<usize> = (1..=6)
            .map(|k| abelian_groups(2, k).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11]);
        assert_eq!(abelian_groups(3, 4).unwrap()[1].name(), "Z27 x Z3");
    }

    #[test]
    fn closure_contents() {
        let c = catalog_closure(2, 16).unwrap();
        let n = names(&c);
        assert_eq!(n[0], "1");
        for want in ["D8 x Z2", "Q8 x Z2", "Z16", "Z2 x Z2 x Z2 x Z2"] {
            assert!(n.contains(&want.to_string()), "{want} missing from {n:?}");
        }
        // 1 + 1 + 2 + 5 + (5 abelian + D8xZ2 + Q8xZ2) of order 16.
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn action_orbits() {
        let z2 = named(GroupSpec::Cyclic(2));
        let z4 = named(GroupSpec::Cyclic(4));
        assert_eq!(nontrivial_actions(&z4.group, &z2.group).unwrap().len(), 1);
        let klein = named(GroupSpec::ElemAb(2, 2));
        // Aut(Z2^2) = S3: the involutions are conjugate, and so are the two
        // 3-cycles.
        assert_eq!(
            nontrivial_actions(&klein.group, &z2.group).unwrap().len(),
            1
        );
        assert_eq!(
            nontrivial_actions(&klein.group, &named(GroupSpec::Cyclic(3)).group)
                .unwrap()
                .len(),
            1
        );
        assert!(nontrivial_actions(&z2.group, &z4.group).unwrap().is_empty());
        // Z3 has no nontrivial 3-automorphism; Z9 has two generator choices.
        let z3 = named(GroupSpec::Cyclic(3));
        assert!(nontrivial_actions(&z3.group, &z3.group).unwrap().is_empty());
        assert_eq!(
            nontrivial_actions(&named(GroupSpec::Cyclic(9)).group, &z3.group)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn pair_counts_are_stable() {
        let direct = catalog_pairs(2, 8, SweepScope::DIRECT).unwrap();
        // By |N|: 1 (nine K), 2 (four K), 4 (two K each), 8 (K = 1).
        assert_eq!(direct.len(), 9 + 4 + 2 * 2 + 5);
        let all = catalog_pairs(2, 8, SweepScope::ALL).unwrap();
        let semi: Vec<String> = all[direct.len()..].iter().map(|p| p.to_string()).collect();
        assert_eq!(
            semi,
            [
                "N = Z4, K = Z2, action #1",
                "N = Z2 x Z2, K = Z2, action #1"
            ]
        );
        for pair in &all {
            let ctx = pair.context(2).unwrap();
            assert_eq!(ctx.is_direct(), pair.action.is_none());
        }
    }
}
