//! Unordered sequences over a ring and the set of their weighted subproducts.

use std::collections::BTreeMap;

use crate::automorphism::{RingAutomorphism, WeightGroup};
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};

/// A multiset of ring elements; the empty multiset is the empty sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceMultiset {
    ring_id: u64,
    counts: BTreeMap<Elem, u32>,
}

impl SequenceMultiset {
    pub fn empty(ring: &FiniteRing) -> Self {
        SequenceMultiset { ring_id: ring.id(), counts: BTreeMap::new() }
    }

    pub fn from_terms(ring: &FiniteRing, terms: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::empty(ring);
        for t in terms {
            s.push(t, 1);
        }
        s
    }

    pub fn push(&mut self, e: Elem, times: u32) {
        if times > 0 {
            *self.counts.entry(e).or_default() += times;
        }
    }

    pub fn ring_id(&self) -> u64 {
        self.ring_id
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, e: Elem) -> u32 {
        self.counts.get(&e).copied().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs in increasing element order.
    pub fn counts(&self) -> impl Iterator<Item = (Elem, u32)> + '_ {
        self.counts.iter().map(|(&e, &c)| (e, c))
    }

    /// Terms in non-decreasing index order, repeated by multiplicity.
    pub fn terms(&self) -> Vec<Elem> {
        self.counts.iter().flat_map(|(&e, &c)| std::iter::repeat_n(e, c as usize)).collect()
    }

    pub fn is_subsequence_of(&self, other: &SequenceMultiset) -> bool {
        self.counts.iter().all(|(e, &c)| other.multiplicity(*e) >= c)
    }

    pub fn concat(&self, other: &SequenceMultiset) -> SequenceMultiset {
        let mut out = self.clone();
        for (e, c) in other.counts() {
            out.push(e, c);
        }
        out
    }

    /// Applies `psi` to every term.
    pub fn map(&self, psi: &RingAutomorphism) -> SequenceMultiset {
        let mut out = SequenceMultiset { ring_id: self.ring_id, counts: BTreeMap::new() };
        for (e, c) in self.counts() {
            out.push(psi.apply(e), c);
        }
        out
    }

    pub fn render(&self, ring: &FiniteRing) -> Vec<String> {
        self.terms().into_iter().map(|e| ring.render(e)).collect()
    }
}

/// All values `Π ψ_i(a_i)` over nonempty subsequences and weight choices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AchievableSet(pub ElemSet);

impl AchievableSet {
    pub fn contains(&self, e: Elem) -> bool {
        self.0.contains(e.index())
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.0.iter().map(|i| Elem(i as u32)).collect()
    }
}

/// One fold step: `S ∪ Ψa ∪ S·Ψa`.
pub(crate) fn extend(ring: &FiniteRing, set: &ElemSet, images: &[Elem]) -> ElemSet {
    let mut out = set.clone();
    for &b in images {
        out.insert(b.index());
        for s in set.iter() {
            out.insert(ring.mul(Elem(s as u32), b).index());
        }
    }
    out
}

fn check(ring: &FiniteRing, seq: &SequenceMultiset, psi: &WeightGroup) -> Result<()> {
    if seq.ring_id != ring.id() || psi.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// Folds the terms one at a time; the result does not depend on term order.
pub fn achievable_products(ring: &FiniteRing, seq: &SequenceMultiset, psi: &WeightGroup) -> Result<AchievableSet> {
    check(ring, seq, psi)?;
    let mut set = ElemSet::new(ring.order());
    for (a, c) in seq.counts() {
        let images = psi.orbit_of(a);
        for _ in 0..c {
            set = extend(ring, &set, &images);
        }
    }
    Ok(AchievableSet(set))
}

pub fn is_idempotent_product_free(ring: &FiniteRing, seq: &SequenceMultiset, psi: &WeightGroup) -> Result<bool> {
    Ok(achievable_products(ring, seq, psi)?.0.is_disjoint(ring.idempotent_set()))
}

/// Values `Π ψ_i(a_i)` using every term of `seq` exactly once.
pub fn full_products(ring: &FiniteRing, seq: &SequenceMultiset, psi: &WeightGroup) -> Result<ElemSet> {
    check(ring, seq, psi)?;
    let mut set = ElemSet::from_indices(ring.order(), [ring.one().index()]);
    for a in seq.terms() {
        let images = psi.orbit_of(a);
        let mut next = ElemSet::new(ring.order());
        for s in set.iter() {
            for &b in &images {
                next.insert(ring.mul(Elem(s as u32), b).index());
            }
        }
        set = next;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::swap_factors;

    #[test]
    fn examples() {
        let r = FiniteRing::from_spec("Z/4").unwrap();
        let id = WeightGroup::trivial(&r);
        let eps = SequenceMultiset::empty(&r);
        assert!(achievable_products(&r, &eps, &id).unwrap().0.is_empty());
        assert!(is_idempotent_product_free(&r, &eps, &id).unwrap());
        let s = SequenceMultiset::from_terms(&r, [r.residue(3), r.residue(3)]);
        assert_eq!(achievable_products(&r, &s, &id).unwrap().elements(), vec![r.residue(1), r.residue(3)]);
        assert!(!is_idempotent_product_free(&r, &s, &id).unwrap());
        let s = SequenceMultiset::from_terms(&r, [r.residue(2), r.residue(3)]);
        assert!(is_idempotent_product_free(&r, &s, &id).unwrap());

        let r = FiniteRing::from_spec("Z/4 x Z/4").unwrap();
        let g = WeightGroup::generate(&r, &[swap_factors(&r, 0, 1).unwrap()]).unwrap();
        let s = SequenceMultiset::from_terms(&r, [r.element(&[3, 1]).unwrap()]);
        let got = achievable_products(&r, &s, &g).unwrap().elements();
        assert_eq!(got, vec![r.element(&[1, 3]).unwrap(), r.element(&[3, 1]).unwrap()]);
    }

    #[test]
    fn full_products_use_all_terms() {
        let r = FiniteRing::from_spec("Z/8").unwrap();
        let id = WeightGroup::trivial(&r);
        let s = SequenceMultiset::from_terms(&r, [r.residue(2), r.residue(3)]);
        assert_eq!(full_products(&r, &s, &id).unwrap().iter().collect::<Vec<_>>(), vec![r.residue(6).index()]);
    }
}
