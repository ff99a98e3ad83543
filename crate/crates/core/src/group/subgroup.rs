use std::collections::{HashSet, VecDeque};

use super::{abelian_invariants_of, Elem, FiniteGroup, GroupError, GroupHom};
use crate::abelian::{factorize, AbelianInvariants};

/// A subgroup of some parent group: the sorted set of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<Elem>,
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(parent_order: usize, elements: Vec<Elem>) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(elements.first(), Some(&0));
        debug_assert_eq!(parent_order % elements.len(), 0, "Lagrange");
        Subgroup {
            parent_order,
            elements,
        }
    }

    /// Checks closure and returns the subgroup formed by `elements`.
    pub fn new(g: &FiniteGroup, mut elements: Vec<Elem>) -> Result<Subgroup, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
            return Err(GroupError::ElementOutOfRange {
                element: x,
                order: g.order(),
            });
        }
        if elements.first() != Some(&0) {
            return Err(GroupError::NotASubgroup("missing the identity".into()));
        }
        let member = membership(g.order(), &elements);
        for &a in &elements {
            if !member[g.inv(a)] {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &elements {
                if !member[g.mul(a, b)] {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(Subgroup::from_sorted_unchecked(g.order(), elements))
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elems = self
            .elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup::from_sorted_unchecked(self.parent_order, elems)
    }

    /// First witness `(x, g)` with `g^-1 x g` outside the subgroup.
    pub fn normality_witness(&self, g: &FiniteGroup) -> Option<(Elem, Elem)> {
        let member = membership(g.order(), &self.elements);
        for &x in &self.elements {
            for y in g.elements() {
                if !member[g.conjugate(x, y)] {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        self.normality_witness(g).is_none()
    }

    pub(crate) fn require_normal(&self, g: &FiniteGroup) -> Result<(), GroupError> {
        match self.normality_witness(g) {
            Some((element, by)) => Err(GroupError::NotNormal { element, by }),
            None => Ok(()),
        }
    }

    /// The subgroup as a group in its own right, with its elements numbered
    /// in ascending parent order. Returns the group and the embedding
    /// (`embedding[i]` is the parent index of local element `i`).
    pub fn to_group(&self, g: &FiniteGroup) -> (FiniteGroup, Vec<Elem>) {
        let n = self.elements.len();
        let local = |x: Elem| self.elements.binary_search(&x).expect("closed subgroup");
        let mut table = vec![0; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = local(g.mul(a, b));
            }
        }
        (FiniteGroup::from_trusted(n, table), self.elements.clone())
    }
}

fn membership(order: usize, elements: &[Elem]) -> Vec<bool> {
    let mut m = vec![false; order];
    for &x in elements {
        m[x] = true;
    }
    m
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_generated(g: &FiniteGroup, gens: &[Elem]) -> Subgroup {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut elems = vec![0];
    let mut queue = VecDeque::from([0]);
    let gens: Vec<Elem> = gens.iter().copied().filter(|&x| x != 0).collect();
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                elems.push(y);
                queue.push_back(y);
            }
        }
    }
    elems.sort_unstable();
    Subgroup::from_sorted_unchecked(g.order(), elems)
}

/// Coset group `G/H` with the canonical projection. Cosets are numbered by
/// ascending minimal representative, so the identity coset is 0.
pub fn quotient(g: &FiniteGroup, h: &Subgroup) -> Result<(FiniteGroup, GroupHom), GroupError> {
    h.require_normal(g)?;
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &y in h.elements() {
            coset_of[g.mul(x, y)] = id;
        }
    }
    let m = reps.len();
    let mut table = vec![0; m * m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * m + j] = coset_of[g.mul(a, b)];
        }
    }
    let q = FiniteGroup::from_trusted(m, table);
    let proj = GroupHom::new_unchecked(n, m, coset_of);
    debug_assert!(proj.verify(g, &q).is_ok());
    Ok((q, proj))
}

/// `Z(N, G) = Z(G) ∩ N`.
pub fn pair_center(g: &FiniteGroup, n: &Subgroup) -> Result<Subgroup, GroupError> {
    n.require_normal(g)?;
    Ok(g.center().intersect(n))
}

/// `[N, G]`, generated by `n^-1 g^-1 n g` for `n ∈ N`, `g ∈ G`.
pub fn pair_commutator(g: &FiniteGroup, n: &Subgroup) -> Result<Subgroup, GroupError> {
    n.require_normal(g)?;
    let mut gens: Vec<Elem> = n
        .elements()
        .iter()
        .flat_map(|&x| g.elements().map(move |y| (x, y)))
        .map(|(x, y)| g.commutator(x, y))
        .collect();
    gens.sort_unstable();
    gens.dedup();
    Ok(subgroup_generated(g, &gens))
}

/// `Z_2(N, G)`: the preimage in `N` of `Z(N/Z(N,G), G/Z(N,G))`.
pub fn pair_upper_center(g: &FiniteGroup, n: &Subgroup) -> Result<Subgroup, GroupError> {
    let z = pair_center(g, n)?;
    let (q, proj) = quotient(g, &z)?;
    let q_center = q.center();
    let elems = n
        .elements()
        .iter()
        .copied()
        .filter(|&x| q_center.contains(proj.image(x)))
        .collect();
    Ok(Subgroup::from_sorted_unchecked(g.order(), elems))
}

/// Invariant factors of `G/[G,G]`, with the projection onto the quotient.
pub fn abelianization(g: &FiniteGroup) -> (AbelianInvariants, FiniteGroup, GroupHom) {
    let (q, proj) = quotient(g, &g.derived_subgroup()).expect("derived subgroup is normal");
    (abelian_invariants_of(&q), q, proj)
}

/// Frattini subgroup of a `p`-group: `[G,G]·G^p`.
pub(crate) fn frattini(g: &FiniteGroup, p: u64) -> Subgroup {
    let mut gens: Vec<Elem> = g.derived_subgroup().elements().to_vec();
    gens.extend(g.elements().map(|x| g.pow(x, p)));
    gens.sort_unstable();
    gens.dedup();
    subgroup_generated(g, &gens)
}

/// `d(G)`: the rank of `G/Φ(G)` over `F_p`.
pub fn min_generators(g: &FiniteGroup, p: u64) -> Result<u32, GroupError> {
    let k = g.log_order(p).ok_or(GroupError::NotPGroup {
        order: g.order(),
        p,
    })?;
    let phi = frattini(g, p);
    let phi_log = crate::abelian::log_base(phi.order() as u128, p as u128).expect("p-subgroup");
    Ok(k - phi_log)
}

/// A subgroup `K` with `N ∩ K = 1` and `|N||K| = |G|`, or `None`.
///
/// The search extends generator sets one element at a time, keeping only
/// subgroups that meet `N` trivially and whose order divides the index; a
/// group of order `m` needs at most `Ω(m)` generators (prime factors with
/// multiplicity), which bounds the depth.
pub fn find_complement(g: &FiniteGroup, n: &Subgroup) -> Result<Option<Subgroup>, GroupError> {
    n.require_normal(g)?;
    let index = n.index();
    if index == 1 {
        return Ok(Some(g.trivial_subgroup()));
    }
    if n.is_trivial() {
        return Ok(Some(g.whole()));
    }
    let max_depth: u32 = factorize(index as u64).iter().map(|(_, e)| e).sum();
    let candidates: Vec<Elem> = g
        .elements()
        .filter(|&x| x != 0 && !n.contains(x) && index.is_multiple_of(g.element_order(x)))
        .filter(|&x| subgroup_generated(g, &[x]).intersect(n).is_trivial())
        .collect();
    let mut seen = HashSet::new();
    Ok(complement_search(
        g,
        n,
        index,
        &candidates,
        &[],
        max_depth,
        &mut seen,
    ))
}

fn complement_search(
    g: &FiniteGroup,
    n: &Subgroup,
    index: usize,
    candidates: &[Elem],
    gens: &[Elem],
    depth_left: u32,
    seen: &mut HashSet<Vec<Elem>>,
) -> Option<Subgroup> {
    if depth_left == 0 {
        return None;
    }
    let current = subgroup_generated(g, gens);
    for &x in candidates {
        if current.contains(x) {
            continue;
        }
        let mut next_gens = gens.to_vec();
        next_gens.push(x);
        let h = subgroup_generated(g, &next_gens);
        if !index.is_multiple_of(h.order()) || !h.intersect(n).is_trivial() {
            continue;
        }
        if !seen.insert(h.elements().to_vec()) {
            continue;
        }
        if h.order() == index {
            return Some(h);
        }
        if let Some(k) =
            complement_search(g, n, index, candidates, &next_gens, depth_left - 1, seen)
        {
            return Some(k);
        }
    }
    None
}

/// `Z(N,G) = [N,G]`, both of order exactly `p`.
pub fn is_extraspecial_pair(g: &FiniteGroup, n: &Subgroup, p: u64) -> Result<bool, GroupError> {
    if !g.is_p_group(p) {
        return Err(GroupError::NotPGroup {
            order: g.order(),
            p,
        });
    }
    let z = pair_center(g, n)?;
    let c = pair_commutator(g, n)?;
    Ok(z == c && z.order() as u64 == p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, make_group};

    fn cyclic(n: usize) -> FiniteGroup {
        let t: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        make_group(&t).unwrap()
    }

    /// D8 as symmetries of a square: element r^i s^j stored as i + 4j.
    fn d8() -> FiniteGroup {
        let enc = |i: usize, j: usize| i % 4 + 4 * j;
        let mut t = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (i1, j1) = (a % 4, a / 4);
                let (i2, j2) = (b % 4, b / 4);
                // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
                let i = if j1 == 0 { i1 + i2 } else { i1 + 4 - i2 };
                t[a][b] = enc(i, (j1 + j2) % 2);
            }
        }
        make_group(&t).unwrap()
    }

    fn q8() -> FiniteGroup {
        // ±1, ±i, ±j, ±k as (sign, unit) with unit 0=1, 1=i, 2=j, 3=k.
        let mul_unit = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mut t = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (sa, ua) = (a / 4 == 1, a % 4);
                let (sb, ub) = (b / 4 == 1, b % 4);
                let (s, u) = mul_unit(ua, ub);
                let neg = sa ^ sb ^ s;
                t[a][b] = u + if neg { 4 } else { 0 };
            }
        }
        make_group(&t).unwrap()
    }

    #[test]
    fn generated_subgroups() {
        let z6 = cyclic(6);
        assert!(subgroup_generated(&z6, &[]).is_trivial());
        assert_eq!(subgroup_generated(&z6, &[3]).order(), 2);
        let d = d8();
        // s and rs generate D8; s and r^2 s generate the Klein subgroup.
        assert_eq!(subgroup_generated(&d, &[4, 5]).order(), 8);
        assert_eq!(subgroup_generated(&d, &[4, 6]).order(), 4);
    }

    #[test]
    fn quotient_examples() {
        let q = q8();
        let (quot, proj) = quotient(&q, &q.whole()).unwrap();
        assert_eq!(quot.order(), 1);
        assert!(proj.verify(&q, &quot).is_ok());
        let (same, _) = quotient(&q, &q.trivial_subgroup()).unwrap();
        assert!(crate::group::are_isomorphic(&same, &q).is_some());
        let (klein, _) = quotient(&q, &q.center()).unwrap();
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.exponent(), 2);
        let d = d8();
        let reflection = subgroup_generated(&d, &[4]);
        assert!(matches!(
            quotient(&d, &reflection),
            Err(GroupError::NotNormal { .. })
        ));
    }

    #[test]
    fn pair_subgroups_in_d8() {
        let d = d8();
        let rot = subgroup_generated(&d, &[1]);
        assert_eq!(pair_center(&d, &rot).unwrap().order(), 2);
        assert_eq!(pair_commutator(&d, &d.whole()).unwrap().order(), 2);
        assert_eq!(pair_upper_center(&d, &d.whole()).unwrap().order(), 8);
        let t = d.trivial_subgroup();
        assert!(pair_center(&d, &t).unwrap().is_trivial());
        assert!(pair_upper_center(&d, &t).unwrap().is_trivial());
        assert!(is_extraspecial_pair(&d, &d.whole(), 2).unwrap());
    }

    #[test]
    fn abelian_pairs() {
        let g = direct_product(&cyclic(4), &cyclic(2)).group;
        let n = subgroup_generated(&g, &[2]);
        assert_eq!(pair_center(&g, &n).unwrap(), n);
        assert!(pair_commutator(&g, &n).unwrap().is_trivial());
        assert_eq!(pair_upper_center(&g, &n).unwrap(), n);
        assert!(!is_extraspecial_pair(&g, &g.whole(), 2).unwrap());
    }

    #[test]
    fn abelianization_examples() {
        let (inv, quot, proj) = abelianization(&q8());
        assert_eq!(inv.factors(), &[2, 2]);
        assert!(proj.verify(&q8(), &quot).is_ok());
        let g = direct_product(&cyclic(4), &cyclic(2)).group;
        assert_eq!(abelianization(&g).0.factors(), &[4, 2]);
    }

    #[test]
    fn generator_counts() {
        let e = direct_product(&direct_product(&cyclic(2), &cyclic(2)).group, &cyclic(2)).group;
        assert_eq!(min_generators(&e, 2).unwrap(), 3);
        assert_eq!(min_generators(&cyclic(9), 3).unwrap(), 1);
        assert_eq!(min_generators(&d8(), 2).unwrap(), 2);
        assert_eq!(min_generators(&cyclic(1), 2).unwrap(), 0);
        assert!(matches!(
            min_generators(&cyclic(6), 2),
            Err(GroupError::NotPGroup { .. })
        ));
    }

    #[test]
    fn complements() {
        let z4 = cyclic(4);
        let n = subgroup_generated(&z4, &[2]);
        assert_eq!(find_complement(&z4, &n).unwrap(), None);
        let d = d8();
        let rot = subgroup_generated(&d, &[1]);
        let k = find_complement(&d, &rot)
            .unwrap()
            .expect("a reflection complements");
        assert_eq!(k.order(), 2);
        assert!(k.intersect(&rot).is_trivial());
        let p = direct_product(&cyclic(3), &cyclic(3));
        let k = find_complement(&p.group, &p.left).unwrap().unwrap();
        assert_eq!(k.order(), 3);
        assert!(k.intersect(&p.left).is_trivial());
    }

    #[test]
    fn subgroup_validation() {
        let z4 = cyclic(4);
        assert!(Subgroup::new(&z4, vec![0, 2]).is_ok());
        assert!(Subgroup::new(&z4, vec![0, 1]).is_err());
        assert!(Subgroup::new(&z4, vec![1, 3]).is_err());
        assert!(Subgroup::new(&z4, vec![0, 7]).is_err());
    }
}
