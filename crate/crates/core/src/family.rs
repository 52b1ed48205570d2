//! Enumeration of supported rings and the default sweep family.

use crate::arith::is_prime;
use crate::automorphism::{cyclic_subgroups, full_aut, WeightGroup};
use crate::error::Result;
use crate::psi::{Generator, PsiSpec};
use crate::ring::{FactorDescriptor, FiniteRing};

/// Every chain-ring factor of order at most `max_order`, by increasing order.
pub fn chain_factors(max_order: u64) -> Vec<FactorDescriptor> {
    let mut out = Vec::new();
    for p in (2..=max_order).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut e = 1u32;
        while q <= max_order {
            out.push(FactorDescriptor::integer_chain(p as u32, e).expect("prime power"));
            if e >= 2 {
                out.push(FactorDescriptor::galois_field(q).expect("prime power"));
            }
            let mut k = 2;
            while q.checked_pow(k).is_some_and(|o| o <= max_order) {
                out.push(FactorDescriptor::truncated_poly(q, k).expect("valid truncated ring"));
                k += 1;
            }
            q *= p;
            e += 1;
        }
    }
    out.sort_by(|a, b| (a.order(), a).cmp(&(b.order(), b)));
    out
}

/// Every product of chain factors (as a non-decreasing factor list) of total
/// order at most `max_order`.
pub fn supported_rings(max_order: u64) -> Vec<Vec<FactorDescriptor>> {
    fn go(factors: &[FactorDescriptor], start: usize, budget: u64, acc: &mut Vec<FactorDescriptor>, out: &mut Vec<Vec<FactorDescriptor>>) {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        for i in start..factors.len() {
            let o = factors[i].order();
            if o > budget {
                break;
            }
            acc.push(factors[i].clone());
            go(factors, i, budget / o, acc, out);
            acc.pop();
        }
    }
    let factors = chain_factors(max_order);
    let mut out = Vec::new();
    go(&factors, 0, max_order, &mut Vec::new(), &mut out);
    out.sort_by_key(|r| (r.iter().map(|f| f.order()).product::<u64>(), r.clone()));
    out
}

/// One instance of the sweep: a ring with a named weight group.
pub struct FamilyMember {
    pub ring: FiniteRing,
    pub psi: PsiSpec,
    pub group: WeightGroup,
}

/// Distinct weight groups `{id}`, `Aut(R)` and every cyclic subgroup of `Aut(R)`,
/// labelled by descriptors that resolve back to them.
pub fn weight_choices(ring: &FiniteRing) -> Result<Vec<(PsiSpec, WeightGroup)>> {
    let full = full_aut(ring)?;
    let mut out: Vec<(PsiSpec, WeightGroup)> = vec![(PsiSpec::Identity, WeightGroup::trivial(ring))];
    if full.len() > 1 {
        out.push((PsiSpec::Full, full.clone()));
    }
    for (k, g) in cyclic_subgroups(ring, &full)? {
        if out.iter().any(|(_, h)| h.len() == g.len() && g.is_subgroup_of(h)) {
            continue;
        }
        out.push((PsiSpec::Generated(vec![Generator::Aut(k)]), g));
    }
    Ok(out)
}

/// All supported rings of order at most `max_order` crossed with their weight
/// choices.
pub fn default_family(max_order: u64) -> Result<Vec<FamilyMember>> {
    let mut out = Vec::new();
    for descs in supported_rings(max_order) {
        let ring = FiniteRing::build(&descs)?;
        for (psi, group) in weight_choices(&ring)? {
            out.push(FamilyMember { ring: ring.clone(), psi, group });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let names =
            |n| supported_rings(n).iter().map(|r| r.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" x ")).collect::<Vec<_>>();
        assert_eq!(names(4), vec!["Z/2", "Z/3", "Z/2 x Z/2", "Z/4", "GF(4)", "GF(2)[x]/x^2"]);
        assert_eq!(supported_rings(8).len(), 16);
    }

    #[test]
    fn weight_choices_are_distinct() {
        let r = FiniteRing::from_spec("GF(4) x GF(4)").unwrap();
        let w = weight_choices(&r).unwrap();
        // id, full, 5 involutions, one cyclic group of order 4
        assert_eq!(w.len(), 8);
        for (psi, g) in &w {
            assert_eq!(psi.resolve(&r).unwrap().len(), g.len());
        }
    }
}
