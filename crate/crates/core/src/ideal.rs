//! Ideals as membership bitmaps, and the prime spectrum of a product of chain rings.

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};

/// An ideal of a specific ring; the invariant (contains 0, closed under `+` and
/// under multiplication by ring elements) is checked when it is created.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    ring_id: u64,
    members: ElemSet,
}

impl Ideal {
    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e.index())
    }

    pub fn size(&self) -> usize {
        self.members.count()
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members.iter().map(|i| Elem(i as u32)).collect()
    }

    pub fn ring_id(&self) -> u64 {
        self.ring_id
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A maximal ideal together with its index `Ind(P)` and cached powers.
#[derive(Clone, Debug)]
pub struct PrimeInfo {
    /// Stable label; equals the position of the local factor it comes from.
    pub id: usize,
    pub ideal: Ideal,
    /// Least `t > 0` with `P^t = P^{t+1}`.
    pub index: u32,
    /// `P^0 = R, P^1, …, P^{index+1}`.
    powers: Vec<Ideal>,
}

impl PrimeInfo {
    /// `P^t`; powers beyond the index are all equal to `P^{Ind(P)}`.
    pub fn power(&self, t: u32) -> &Ideal {
        &self.powers[(t as usize).min(self.powers.len() - 1)]
    }

    pub fn power_at_index(&self) -> &Ideal {
        &self.powers[self.index as usize]
    }
}

impl FiniteRing {
    fn check_same(&self, i: &Ideal) -> Result<()> {
        if i.ring_id != self.id() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Additive subgroup generated by `gens`, grown one cyclic subgroup at a time.
    pub fn additive_closure(&self, gens: impl IntoIterator<Item = Elem>) -> ElemSet {
        let mut closure = ElemSet::from_indices(self.order(), [0]);
        let mut members = vec![self.zero()];
        for g in gens {
            if closure.contains(g.index()) {
                continue;
            }
            let base = members.clone();
            let base_set = closure.clone();
            let mut shift = g;
            while !base_set.contains(shift.index()) {
                for &c in &base {
                    let s = self.add(c, shift);
                    if closure.insert(s.index()) {
                        members.push(s);
                    }
                }
                shift = self.add(shift, g);
            }
        }
        closure
    }

    /// Wraps `members` as an ideal after an exhaustive closure check.
    pub fn ideal_from_set(&self, members: ElemSet) -> Result<Ideal> {
        if members.universe() != self.order() {
            return Err(Error::RingMismatch);
        }
        if !members.contains(0) {
            return Err(Error::NotAnIdeal("does not contain 0".into()));
        }
        let elems: Vec<Elem> = members.iter().map(|i| Elem(i as u32)).collect();
        for &a in &elems {
            for &b in &elems {
                if !members.contains(self.add(a, b).index()) {
                    return Err(Error::NotAnIdeal(format!("not closed under addition at ({}, {})", a.0, b.0)));
                }
            }
            for r in self.elements() {
                if !members.contains(self.mul(r, a).index()) {
                    return Err(Error::NotAnIdeal(format!("not absorbing at ({}, {})", r.0, a.0)));
                }
            }
        }
        Ok(Ideal { ring_id: self.id(), members })
    }

    pub(crate) fn ideal_unchecked(&self, members: ElemSet) -> Ideal {
        Ideal { ring_id: self.id(), members }
    }

    pub fn zero_ideal(&self) -> Ideal {
        self.ideal_unchecked(ElemSet::from_indices(self.order(), [0]))
    }

    pub fn unit_ideal(&self) -> Ideal {
        self.ideal_unchecked(ElemSet::full(self.order()))
    }

    /// `(c) = {r·c : r ∈ R}`.
    pub fn principal_ideal(&self, c: Elem) -> Ideal {
        let set = ElemSet::from_indices(self.order(), self.elements().map(|r| self.mul(r, c).index()));
        self.ideal_unchecked(set)
    }

    /// Ideal generated by an arbitrary set: additive closure of all multiples.
    pub fn ideal_generated(&self, gens: &[Elem]) -> Ideal {
        let mut multiples = ElemSet::new(self.order());
        for &g in gens {
            for r in self.elements() {
                multiples.insert(self.mul(r, g).index());
            }
        }
        let set = self.additive_closure(multiples.iter().map(|i| Elem(i as u32)));
        self.ideal_unchecked(set)
    }

    /// Greedy small generating set (minimum indices first), for reporting.
    pub fn ideal_generators(&self, i: &Ideal) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut current = self.zero_ideal();
        for e in i.elements() {
            if current == *i {
                break;
            }
            if !current.contains(e) {
                gens.push(e);
                current = self.ideal_generated(&gens);
            }
        }
        gens
    }

    pub fn ideal_sum(&self, i: &Ideal, j: &Ideal) -> Result<Ideal> {
        self.check_same(i)?;
        self.check_same(j)?;
        let gens = i.elements().into_iter().chain(j.elements());
        Ok(self.ideal_unchecked(self.additive_closure(gens)))
    }

    /// Additive closure of all pairwise products.
    pub fn ideal_product(&self, i: &Ideal, j: &Ideal) -> Result<Ideal> {
        self.check_same(i)?;
        self.check_same(j)?;
        let mut products = ElemSet::new(self.order());
        let je = j.elements();
        for a in i.elements() {
            for &b in &je {
                products.insert(self.mul(a, b).index());
            }
        }
        Ok(self.ideal_unchecked(self.additive_closure(products.iter().map(|x| Elem(x as u32)))))
    }

    /// `I^k` with `I^0 = R`.
    pub fn ideal_power(&self, i: &Ideal, k: u32) -> Result<Ideal> {
        self.check_same(i)?;
        let mut acc = self.unit_ideal();
        for _ in 0..k {
            acc = self.ideal_product(&acc, i)?;
        }
        Ok(acc)
    }

    /// Exhaustive primality scan: proper, and `a, b ∉ P ⇒ ab ∉ P`.
    pub fn is_prime_ideal(&self, p: &Ideal) -> bool {
        if p.ring_id != self.id() || p.size() == self.order() {
            return false;
        }
        let outside: Vec<Elem> = self.elements().filter(|&e| !p.contains(e)).collect();
        outside.iter().all(|&a| outside.iter().all(|&b| !p.contains(self.mul(a, b))))
    }

    /// Least `t >= 1` with `P^t = P^{t+1}`.
    pub fn ideal_index(&self, p: &Ideal) -> Result<u32> {
        self.check_same(p)?;
        if !self.is_prime_ideal(p) {
            return Err(Error::NotPrimeIdeal);
        }
        let (index, _) = self.power_chain(p);
        Ok(index)
    }

    fn power_chain(&self, p: &Ideal) -> (u32, Vec<Ideal>) {
        let mut powers = vec![self.unit_ideal(), p.clone()];
        loop {
            let last = powers.last().unwrap();
            let next = self.ideal_product(last, p).expect("same ring");
            if next == *last {
                powers.push(next);
                return ((powers.len() - 2) as u32, powers);
            }
            powers.push(next);
        }
    }

    /// One prime per local factor: `P_i` is the set of elements whose `i`-th
    /// component is a non-unit. Each is cross-checked by the primality scan.
    pub fn prime_ideals(&self) -> Result<Vec<PrimeInfo>> {
        let mut out = Vec::new();
        for (i, f) in self.factors().iter().enumerate() {
            let members =
                ElemSet::from_indices(self.order(), self.elements().filter(|&e| !f.is_unit(self.decode(e)[i])).map(|e| e.index()));
            let ideal = self.ideal_from_set(members)?;
            if !self.is_prime_ideal(&ideal) {
                return Err(Error::Contradiction(format!("structural prime {i} failed the primality scan")));
            }
            let (index, powers) = self.power_chain(&ideal);
            out.push(PrimeInfo { id: i, ideal, index, powers });
        }
        Ok(out)
    }
}
