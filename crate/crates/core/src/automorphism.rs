//! Ring automorphisms as element permutations, weight groups generated by them,
//! and the induced action on the prime spectrum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use std::collections::{BTreeMap, VecDeque};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::ideal::{Ideal, PrimeInfo};
use crate::ring::{Elem, Factor, FactorDescriptor, FiniteRing};

const EXHAUSTIVE_LIMIT: usize = 256;
const RANDOM_PAIRS: usize = 20_000;
/// Largest automorphism group `full_aut` will materialize.
pub const FULL_AUT_CAP: u128 = 50_000;

/// A ring automorphism stored as a permutation table over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingAutomorphism {
    table: Vec<u32>,
    label: String,
}

/// Checks that `table` is a bijection fixing `1` and respecting `+` and `·`:
/// all pairs for rings of order at most 256, a fixed-seed random sample above.
fn check_table(order: usize, table: &[u32], one: u32, add: impl Fn(u32, u32) -> u32, mul: impl Fn(u32, u32) -> u32) -> Result<()> {
    if table.len() != order {
        return Err(Error::NotAutomorphism(format!("table has {} entries, ring has {order}", table.len())));
    }
    let mut seen = vec![false; order];
    for &v in table {
        if v as usize >= order || std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::NotAutomorphism("not a bijection".into()));
        }
    }
    if table[one as usize] != one {
        return Err(Error::NotAutomorphism("does not fix the identity".into()));
    }
    let check = |a: u32, b: u32| -> Result<()> {
        let (ta, tb) = (table[a as usize], table[b as usize]);
        if table[add(a, b) as usize] != add(ta, tb) {
            return Err(Error::NotAutomorphism(format!("not additive at ({a}, {b})")));
        }
        if table[mul(a, b) as usize] != mul(ta, tb) {
            return Err(Error::NotAutomorphism(format!("not multiplicative at ({a}, {b})")));
        }
        Ok(())
    };
    if order <= EXHAUSTIVE_LIMIT {
        for a in 0..order as u32 {
            for b in a..order as u32 {
                check(a, b)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa17);
        for _ in 0..RANDOM_PAIRS {
            check(rng.gen_range(0..order as u32), rng.gen_range(0..order as u32))?;
        }
    }
    Ok(())
}

impl RingAutomorphism {
    pub fn identity(ring: &FiniteRing) -> Self {
        RingAutomorphism { table: (0..ring.order() as u32).collect(), label: "id".into() }
    }

    /// Verifies the table against the ring structure before accepting it.
    pub fn from_table(ring: &FiniteRing, table: Vec<u32>, label: impl Into<String>) -> Result<Self> {
        check_table(ring.order(), &table, ring.one().0, |a, b| ring.add(Elem(a), Elem(b)).0, |a, b| ring.mul(Elem(a), Elem(b)).0)?;
        Ok(RingAutomorphism { table, label: label.into() })
    }

    #[inline]
    pub fn apply(&self, e: Elem) -> Elem {
        Elem(self.table[e.index()])
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RingAutomorphism) -> RingAutomorphism {
        RingAutomorphism {
            table: other.table.iter().map(|&x| self.table[x as usize]).collect(),
            label: format!("{}∘{}", self.label, other.label),
        }
    }

    pub fn inverse(&self) -> RingAutomorphism {
        let mut table = vec![0; self.table.len()];
        for (i, &v) in self.table.iter().enumerate() {
            table[v as usize] = i as u32;
        }
        RingAutomorphism { table, label: format!("({})⁻¹", self.label) }
    }

    pub fn apply_set(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(s.universe(), s.iter().map(|i| self.table[i] as usize))
    }
}

/// Automorphisms of a single chain-ring factor, as factor-local tables with labels.
pub fn factor_automorphisms(f: &Factor) -> Result<Vec<(Vec<u32>, String)>> {
    let order = f.order();
    let identity: Vec<u32> = (0..order).collect();
    let mut out = Vec::new();
    match f.descriptor() {
        FactorDescriptor::IntegerChain { .. } => out.push((identity, "id".to_string())),
        FactorDescriptor::GaloisField { e, .. } => {
            let gf = f.coefficient_field().expect("field factor");
            for i in 0..*e {
                let table: Vec<u32> = (0..order).map(|a| gf.frobenius(a, i)).collect();
                let label = if i == 0 { "id".to_string() } else { format!("frob^{i}") };
                out.push((table, label));
            }
        }
        FactorDescriptor::TruncatedPoly { e, k, .. } => {
            let gf = f.coefficient_field().expect("field factor");
            let k = *k as usize;
            let images: Vec<u32> = (0..order)
                .filter(|&u| {
                    let c = f.coeffs(u);
                    c[0] == 0 && c[1] != 0
                })
                .collect();
            for i in 0..*e {
                for &u in &images {
                    let mut powers = vec![1u32; k];
                    for j in 1..k {
                        powers[j] = f.mul(powers[j - 1], u);
                    }
                    let table: Vec<u32> = (0..order)
                        .map(|a| {
                            f.coeffs(a).iter().enumerate().fold(0u32, |acc, (j, &c)| {
                                let coeff = gf.frobenius(c, i);
                                f.add(acc, f.mul(f.pack_coeffs(&scalar(coeff, k)), powers[j]))
                            })
                        })
                        .collect();
                    let label = match (i, u == gf.order()) {
                        (0, true) => "id".to_string(),
                        (0, false) => format!("x->{}", f.render(u)),
                        (i, true) => format!("frob^{i}"),
                        (i, false) => format!("frob^{i},x->{}", f.render(u)),
                    };
                    out.push((table, label));
                }
            }
        }
    }
    for (table, _) in &out {
        check_table(order as usize, table, 1, |a, b| f.add(a, b), |a, b| f.mul(a, b))?;
    }
    Ok(out)
}

fn scalar(c: u32, k: usize) -> Vec<u32> {
    let mut v = vec![0; k];
    v[0] = c;
    v
}

/// A subgroup `Ψ ≤ Aut(R)`: elements in canonical (table-lexicographic) order with
/// the identity first, plus the composition table.
#[derive(Clone, Debug)]
pub struct WeightGroup {
    ring_id: u64,
    elements: Vec<RingAutomorphism>,
    index: FxHashMap<Vec<u32>, usize>,
    /// `compose[i * n + j]` is the index of `elements[i] ∘ elements[j]`.
    compose: Vec<u32>,
}

impl WeightGroup {
    fn from_elements(ring: &FiniteRing, mut elements: Vec<RingAutomorphism>) -> Result<Self> {
        elements.sort_by(|a, b| a.table.cmp(&b.table));
        elements.dedup_by(|a, b| a.table == b.table);
        let index: FxHashMap<Vec<u32>, usize> = elements.iter().enumerate().map(|(i, a)| (a.table.clone(), i)).collect();
        let n = elements.len();
        let mut compose = Vec::with_capacity(n * n);
        let mut scratch = vec![0u32; ring.order()];
        for a in &elements {
            for b in &elements {
                for (s, &x) in scratch.iter_mut().zip(&b.table) {
                    *s = a.table[x as usize];
                }
                let j = *index.get(&scratch).ok_or_else(|| Error::InvalidPsi("element set is not closed under composition".into()))?;
                compose.push(j as u32);
            }
        }
        if !elements.first().is_some_and(|e| e.is_identity()) {
            return Err(Error::InvalidPsi("weight group lacks the identity".into()));
        }
        Ok(WeightGroup { ring_id: ring.id(), elements, index, compose })
    }

    /// `{id}`.
    pub fn trivial(ring: &FiniteRing) -> Self {
        Self::from_elements(ring, vec![RingAutomorphism::identity(ring)]).expect("identity group")
    }

    /// Closure of `gens` under composition. Each generator must already be a
    /// verified automorphism of `ring`.
    pub fn generate(ring: &FiniteRing, gens: &[RingAutomorphism]) -> Result<Self> {
        for g in gens {
            check_table(ring.order(), &g.table, ring.one().0, |a, b| ring.add(Elem(a), Elem(b)).0, |a, b| ring.mul(Elem(a), Elem(b)).0)?;
        }
        let id = RingAutomorphism::identity(ring);
        let mut seen: FxHashMap<Vec<u32>, ()> = FxHashMap::default();
        seen.insert(id.table.clone(), ());
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.compose(&x);
                if seen.insert(y.table.clone(), ()).is_none() {
                    let y = RingAutomorphism { label: compact_label(&g.label, &x.label), ..y };
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Self::from_elements(ring, elements)
    }

    pub fn ring_id(&self) -> u64 {
        self.ring_id
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[RingAutomorphism] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &RingAutomorphism {
        &self.elements[i]
    }

    pub fn position(&self, a: &RingAutomorphism) -> Option<usize> {
        self.index.get(&a.table).copied()
    }

    pub fn compose_index(&self, i: usize, j: usize) -> usize {
        self.compose[i * self.elements.len() + j] as usize
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        (0..self.len()).find(|&j| self.compose_index(i, j) == 0).expect("group elements are invertible")
    }

    pub fn is_subgroup_of(&self, other: &WeightGroup) -> bool {
        self.elements.iter().all(|a| other.position(a).is_some())
    }

    /// Distinct images `{ψ(a) : ψ ∈ Ψ}` in increasing index order.
    pub fn orbit_of(&self, a: Elem) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.elements.iter().map(|g| g.apply(a)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Checks the group axioms directly on the stored tables.
    pub fn verify_group_axioms(&self) -> bool {
        let n = self.len();
        let closed = (0..n).all(|i| (0..n).all(|j| self.compose_index(i, j) < n));
        let inverses = (0..n).all(|i| (0..n).any(|j| self.compose_index(i, j) == 0));
        closed && inverses && self.elements[0].is_identity()
    }
}

fn compact_label(g: &str, x: &str) -> String {
    if x == "id" {
        g.to_string()
    } else {
        format!("{g}∘{x}")
    }
}

/// The full automorphism group: per-factor automorphisms combined with every
/// permutation of factors that carry equal descriptors.
pub fn full_aut(ring: &FiniteRing) -> Result<WeightGroup> {
    let factors = ring.factors();
    let per_factor: Vec<Vec<(Vec<u32>, String)>> = factors.iter().map(factor_automorphisms).collect::<Result<_>>()?;
    let mut classes: BTreeMap<&FactorDescriptor, Vec<usize>> = BTreeMap::new();
    for (i, f) in factors.iter().enumerate() {
        classes.entry(f.descriptor()).or_default().push(i);
    }
    let mut size: u128 = per_factor.iter().map(|v| v.len() as u128).product();
    for members in classes.values() {
        size = size.saturating_mul((1..=members.len() as u128).product());
    }
    if size > FULL_AUT_CAP {
        return Err(Error::InvalidPsi(format!("full automorphism group has {size} elements, above the cap {FULL_AUT_CAP}")));
    }
    let perms = factor_permutations(factors.len(), &classes.values().cloned().collect::<Vec<_>>());
    let mut elements = Vec::new();
    let n = factors.len();
    let mut choice = vec![0usize; n];
    let decoded: Vec<Vec<u32>> = ring.elements().map(|e| ring.decode(e)).collect();
    for perm in &perms {
        choice.iter_mut().for_each(|c| *c = 0);
        loop {
            let table: Vec<u32> = decoded
                .iter()
                .map(|parts| {
                    let mut out = vec![0u32; n];
                    for i in 0..n {
                        out[perm[i]] = per_factor[i][choice[i]].0[parts[i] as usize];
                    }
                    ring.encode(&out).0
                })
                .collect();
            let mut parts: Vec<String> =
                (0..n).filter(|&i| per_factor[i][choice[i]].1 != "id").map(|i| format!("{}[{i}]", per_factor[i][choice[i]].1)).collect();
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                parts.push(format!("perm{perm:?}"));
            }
            let label = if parts.is_empty() { "id".to_string() } else { parts.join(";") };
            elements.push(RingAutomorphism::from_table(ring, table, label)?);
            // odometer over per-factor choices
            let mut i = 0;
            while i < n {
                choice[i] += 1;
                if choice[i] < per_factor[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    WeightGroup::from_elements(ring, elements)
}

/// All maps `i -> perm[i]` that permute positions within each class.
fn factor_permutations(n: usize, classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect::<Vec<_>>()];
    for class in classes {
        let mut next = Vec::new();
        for base in &out {
            for arrangement in permutations(class) {
                let mut p = base.clone();
                for (src, dst) in class.iter().zip(&arrangement) {
                    p[*src] = *dst;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Automorphism exchanging factors `i` and `j` (which must carry equal descriptors).
pub fn swap_factors(ring: &FiniteRing, i: usize, j: usize) -> Result<RingAutomorphism> {
    let f = ring.factors();
    if i >= f.len() || j >= f.len() {
        return Err(Error::InvalidPsi(format!("swap({i},{j}): ring has {} factors", f.len())));
    }
    if f[i].descriptor() != f[j].descriptor() {
        return Err(Error::InvalidPsi(format!("swap({i},{j}): factors {} and {} are not identical", f[i].descriptor(), f[j].descriptor())));
    }
    let table = ring
        .elements()
        .map(|e| {
            let mut parts = ring.decode(e);
            parts.swap(i, j);
            ring.encode(&parts).0
        })
        .collect();
    RingAutomorphism::from_table(ring, table, format!("swap({i},{j})"))
}

/// Frobenius on the coefficients of factor `i` (identity on `Z/p^k` factors).
pub fn frobenius_on_factor(ring: &FiniteRing, i: usize) -> Result<RingAutomorphism> {
    let f = ring.factors().get(i).ok_or_else(|| Error::InvalidPsi(format!("frobenius({i}): no such factor")))?;
    let local: Vec<u32> = match f.coefficient_field() {
        None => (0..f.order()).collect(),
        Some(gf) => (0..f.order())
            .map(|a| {
                let c: Vec<u32> = f.coeffs(a).iter().map(|&c| gf.frobenius(c, 1)).collect();
                f.pack_coeffs(&c)
            })
            .collect(),
    };
    let table = ring
        .elements()
        .map(|e| {
            let mut parts = ring.decode(e);
            parts[i] = local[parts[i] as usize];
            ring.encode(&parts).0
        })
        .collect();
    RingAutomorphism::from_table(ring, table, format!("frobenius({i})"))
}

/// Distinct cyclic subgroups `⟨g⟩` of `group`, each tagged with the smallest
/// element index generating it, in order of that index. The trivial subgroup is
/// included (generator 0).
pub fn cyclic_subgroups(ring: &FiniteRing, group: &WeightGroup) -> Result<Vec<(usize, WeightGroup)>> {
    let mut seen = FxHashMap::default();
    let mut out = Vec::new();
    for (k, g) in group.elements().iter().enumerate() {
        let mut members = vec![0usize];
        let mut x = k;
        while x != 0 {
            members.push(x);
            x = group.compose_index(k, x);
        }
        members.sort_unstable();
        if seen.insert(members, ()).is_none() {
            out.push((k, WeightGroup::generate(ring, std::slice::from_ref(g))?));
        }
    }
    Ok(out)
}

/// `ψ(I)`.
pub fn act_on_ideal(ring: &FiniteRing, psi: &RingAutomorphism, i: &Ideal) -> Result<Ideal> {
    if i.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    Ok(ring.ideal_unchecked(psi.apply_set(i.members())))
}

/// An orbit of `Ψ` on the prime spectrum.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Orbit {
    /// Prime labels in increasing order; position `t` in this list is the orbit
    /// position `t + 1`.
    pub primes: Vec<usize>,
    pub stabilizer_size: usize,
    /// `h = |Ψ| / |St(P)|`.
    pub size: usize,
}

/// `action[g][p]` is the label of `ψ_g(P_p)`.
pub fn prime_action(ring: &FiniteRing, psi: &WeightGroup, primes: &[PrimeInfo]) -> Result<Vec<Vec<usize>>> {
    let by_members: FxHashMap<&ElemSet, usize> = primes.iter().map(|p| (p.ideal.members(), p.id)).collect();
    psi.elements()
        .iter()
        .map(|g| {
            primes
                .iter()
                .map(|p| {
                    let image = act_on_ideal(ring, g, &p.ideal)?;
                    by_members
                        .get(image.members())
                        .copied()
                        .ok_or_else(|| Error::Contradiction(format!("image of prime {} is not a prime", p.id)))
                })
                .collect()
        })
        .collect()
}

/// Partition of the primes into `Ψ`-orbits, ordered by smallest label.
pub fn orbits(ring: &FiniteRing, psi: &WeightGroup, primes: &[PrimeInfo]) -> Result<Vec<Orbit>> {
    if psi.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    let action = prime_action(ring, psi, primes)?;
    let pos: FxHashMap<usize, usize> = primes.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
    let mut assigned = vec![false; primes.len()];
    let mut out = Vec::new();
    for (i, p) in primes.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<usize> = action.iter().map(|row| row[i]).collect();
        members.sort_unstable();
        members.dedup();
        for m in &members {
            assigned[pos[m]] = true;
        }
        let stabilizer_size = action.iter().filter(|row| row[i] == p.id).count();
        if members.len() * stabilizer_size != psi.len() {
            return Err(Error::Contradiction("orbit-stabilizer relation fails".into()));
        }
        out.push(Orbit { size: members.len(), primes: members, stabilizer_size });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_spec(s).unwrap()
    }

    #[test]
    fn factor_groups() {
        let r = ring("Z/9");
        assert_eq!(factor_automorphisms(&r.factors()[0]).unwrap().len(), 1);
        let r = ring("GF(4)");
        let auts = factor_automorphisms(&r.factors()[0]).unwrap();
        assert_eq!(auts.len(), 2);
        // Frobenius swaps x and x+1
        assert_eq!(auts[1].0, vec![0, 1, 3, 2]);
        let r = ring("GF(2)[x]/x^2");
        assert_eq!(factor_automorphisms(&r.factors()[0]).unwrap().len(), 1);
        let r = ring("GF(2)[x]/x^3");
        assert_eq!(factor_automorphisms(&r.factors()[0]).unwrap().len(), 2);
        let r = ring("GF(4)[x]/x^2");
        assert_eq!(factor_automorphisms(&r.factors()[0]).unwrap().len(), 6);
    }

    #[test]
    fn full_groups() {
        assert_eq!(full_aut(&ring("Z/12")).unwrap().len(), 1);
        let g = full_aut(&ring("Z/4 x Z/4")).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.verify_group_axioms());
        assert_eq!(full_aut(&ring("GF(4) x GF(4)")).unwrap().len(), 8);
        assert_eq!(full_aut(&ring("Z/2 x Z/2 x Z/2")).unwrap().len(), 6);
    }

    #[test]
    fn generated_groups() {
        let r = ring("GF(8)");
        assert!(WeightGroup::generate(&r, &[]).unwrap().is_trivial());
        let g = WeightGroup::generate(&r, &[frobenius_on_factor(&r, 0).unwrap()]).unwrap();
        assert_eq!(g.len(), 3);
        let r = ring("Z/4 x Z/4");
        let g = WeightGroup::generate(&r, &[swap_factors(&r, 0, 1).unwrap()]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(swap_factors(&ring("Z/4 x Z/2"), 0, 1).is_err());
        let bogus = RingAutomorphism { table: vec![0, 3, 2, 1], label: "neg".into() };
        assert!(matches!(WeightGroup::generate(&ring("Z/4"), &[bogus]), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn swap_orbit() {
        let r = ring("Z/4 x Z/4");
        let primes = r.prime_ideals().unwrap();
        let swap = swap_factors(&r, 0, 1).unwrap();
        assert_eq!(act_on_ideal(&r, &swap, &primes[0].ideal).unwrap(), primes[1].ideal);
        let back = act_on_ideal(&r, &swap.inverse(), &act_on_ideal(&r, &swap, &primes[0].ideal).unwrap()).unwrap();
        assert_eq!(back, primes[0].ideal);
        let g = WeightGroup::generate(&r, &[swap]).unwrap();
        let o = orbits(&r, &g, &primes).unwrap();
        assert_eq!(o, vec![Orbit { primes: vec![0, 1], stabilizer_size: 1, size: 2 }]);
        let o = orbits(&r, &WeightGroup::trivial(&r), &primes).unwrap();
        assert_eq!(o.len(), 2);
        assert!(o.iter().all(|x| x.size == 1 && x.stabilizer_size == 1));
    }

    #[test]
    fn cyclic_subgroup_listing() {
        let r = ring("GF(4) x GF(4)");
        let full = full_aut(&r).unwrap();
        let cyc = cyclic_subgroups(&r, &full).unwrap();
        // D4 of order 8 has 1 trivial, 5 of order 2, 1 of order 4
        assert_eq!(cyc.len(), 7);
        assert_eq!(cyc[0].0, 0);
        assert!(cyc.iter().all(|(_, g)| g.is_subgroup_of(&full)));
    }
}
