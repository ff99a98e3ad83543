use super::{Elem, FiniteGroup, GroupError, Subgroup};

/// A homomorphism between two groups, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    domain_order: usize,
    codomain_order: usize,
    images: Vec<Elem>,
}

impl GroupHom {
    pub fn new(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        images: Vec<Elem>,
    ) -> Result<GroupHom, GroupError> {
        if images.len() != domain.order() {
            return Err(GroupError::NotHomomorphism {
                a: images.len(),
                b: 0,
            });
        }
        if let Some(&x) = images.iter().find(|&&x| x >= codomain.order()) {
            return Err(GroupError::ElementOutOfRange {
                element: x,
                order: codomain.order(),
            });
        }
        let h = GroupHom::new_unchecked(domain.order(), codomain.order(), images);
        h.verify(domain, codomain)?;
        Ok(h)
    }

    pub(crate) fn new_unchecked(
        domain_order: usize,
        codomain_order: usize,
        images: Vec<Elem>,
    ) -> Self {
        GroupHom {
            domain_order,
            codomain_order,
            images,
        }
    }

    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom::new_unchecked(g.order(), g.order(), g.elements().collect())
    }

    /// Re-checks `f(ab) = f(a)f(b)` for every pair.
    pub fn verify(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<(), GroupError> {
        if self.images.first() != Some(&0) {
            return Err(GroupError::NotHomomorphism { a: 0, b: 0 });
        }
        for a in domain.elements() {
            for b in domain.elements() {
                let lhs = self.images[domain.mul(a, b)];
                let rhs = codomain.mul(self.images[a], self.images[b]);
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn image(&self, a: Elem) -> Elem {
        self.images[a]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn domain_order(&self) -> usize {
        self.domain_order
    }

    pub fn codomain_order(&self) -> usize {
        self.codomain_order
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain_order != self.codomain_order {
            return false;
        }
        let mut hit = vec![false; self.codomain_order];
        for &x in &self.images {
            if std::mem::replace(&mut hit[x], true) {
                return false;
            }
        }
        true
    }

    pub fn kernel(&self) -> Subgroup {
        let elems = (0..self.domain_order)
            .filter(|&a| self.images[a] == 0)
            .collect();
        Subgroup::from_sorted_unchecked(self.domain_order, elems)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.codomain_order, self.domain_order);
        GroupHom::new_unchecked(
            first.domain_order,
            self.codomain_order,
            first.images.iter().map(|&x| self.images[x]).collect(),
        )
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.domain_order];
        for (a, &x) in self.images.iter().enumerate() {
            inv[x] = a;
        }
        Some(GroupHom::new_unchecked(
            self.codomain_order,
            self.domain_order,
            inv,
        ))
    }
}
