//! The explicit lower-bound sequence: good generators `G_P`, the sets `H_{O;X}`,
//! one block `B_O` per orbit of `Ψ` on the maximal ideals, and a longest
//! product-one-free unit sequence `V`.

use serde::Serialize;

use crate::automorphism::{orbits, Orbit, WeightGroup};
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::ideal::PrimeInfo;
use crate::ring::{Elem, FiniteRing};
use crate::search::{longest_free_sequence, SearchConfig, Target};
use crate::sequence::{is_idempotent_product_free, SequenceMultiset};
use crate::tfunc::{positive_profile, t_function};

/// `G_P = {c ∈ P : (c) + P^{Ind(P)} = P}` by a scan over `P`.
pub fn gp_set(ring: &FiniteRing, p: &PrimeInfo) -> Result<ElemSet> {
    let top = p.power_at_index();
    let mut out = ElemSet::new(ring.order());
    for c in p.ideal.elements() {
        let sum = ring.ideal_sum(&ring.principal_ideal(c), top)?;
        if sum == p.ideal {
            out.insert(c.index());
        }
    }
    if out.is_empty() {
        return Err(Error::Contradiction(format!("G_P is empty for prime {}", p.id)));
    }
    Ok(out)
}

/// Whether `a ≡ b` modulo `P^{Ind(P)}`.
fn congruent_at_index(ring: &FiniteRing, p: &PrimeInfo, a: Elem, b: Elem) -> bool {
    p.power_at_index().contains(ring.sub(a, b))
}

/// The maximal ideals with their `G_P` sets and the `Ψ`-orbits on them.
#[derive(Clone, Debug)]
pub struct Structure {
    pub primes: Vec<PrimeInfo>,
    /// `gp[i]` is `G_P` for `primes[i]`.
    pub gp: Vec<ElemSet>,
    pub orbits: Vec<Orbit>,
}

impl Structure {
    pub fn new(ring: &FiniteRing, psi: &WeightGroup) -> Result<Structure> {
        let primes = ring.prime_ideals()?;
        let gp = primes.iter().map(|p| gp_set(ring, p)).collect::<Result<Vec<_>>>()?;
        let orbits = orbits(ring, psi, &primes)?;
        Ok(Structure { primes, gp, orbits })
    }

    fn position(&self, id: usize) -> usize {
        self.primes.iter().position(|p| p.id == id).expect("prime label")
    }

    /// `H_{O;X}` by a literal scan; `x` holds orbit positions `1..=h`.
    pub fn h_set(&self, ring: &FiniteRing, orbit: &Orbit, x: &[usize]) -> Result<ElemSet> {
        if x.is_empty() || x.iter().any(|&i| i == 0 || i > orbit.size) {
            return Err(Error::InvalidPsi(format!("X = {x:?} is not a nonempty subset of 1..={}", orbit.size)));
        }
        let chosen: Vec<usize> = x.iter().map(|&i| self.position(orbit.primes[i - 1])).collect();
        let mut out = ElemSet::new(ring.order());
        'scan: for a in ring.elements() {
            for (q, prime) in self.primes.iter().enumerate() {
                let ok = if chosen.contains(&q) { self.gp[q].contains(a.index()) } else { congruent_at_index(ring, prime, a, ring.one()) };
                if !ok {
                    continue 'scan;
                }
            }
            out.insert(a.index());
        }
        Ok(out)
    }

    /// `𝓗_{O;t}` for `t = 1..=h` (index `t - 1`). An element is in at most one
    /// `H_{O;X}`, namely for `X` the orbit positions `i` with `a ∈ G_{P_i}`.
    pub fn h_layers(&self, ring: &FiniteRing, orbit: &Orbit) -> Vec<ElemSet> {
        let in_orbit: Vec<Option<usize>> = self.primes.iter().map(|p| orbit.primes.iter().position(|&id| id == p.id)).collect();
        let mut layers = vec![ElemSet::new(ring.order()); orbit.size];
        'scan: for a in ring.elements() {
            let mut t = 0;
            for (q, prime) in self.primes.iter().enumerate() {
                if in_orbit[q].is_some() && self.gp[q].contains(a.index()) {
                    t += 1;
                } else if !congruent_at_index(ring, prime, a, ring.one()) {
                    continue 'scan;
                }
            }
            if t > 0 {
                layers[t - 1].insert(a.index());
            }
        }
        layers
    }

    /// An element of `H_{O;X}` built from the Chinese remainder theorem: `c_i`
    /// (the least element of `G_{P_i}`) at the chosen primes and `1` elsewhere.
    pub fn crt_element(&self, ring: &FiniteRing, orbit: &Orbit, x: &[usize]) -> Result<Elem> {
        let chosen: Vec<usize> = x.iter().map(|&i| self.position(orbit.primes[i - 1])).collect();
        let mut acc = ring.zero();
        for (j, prime) in self.primes.iter().enumerate() {
            // z in the product of the other P^Ind with z ≡ 1 mod P_j^Ind
            let mut others = ring.unit_ideal();
            for (k, q) in self.primes.iter().enumerate() {
                if k != j {
                    others = ring.ideal_product(&others, q.power_at_index())?;
                }
            }
            let z = others
                .elements()
                .into_iter()
                .find(|&z| congruent_at_index(ring, prime, z, ring.one()))
                .ok_or_else(|| Error::Contradiction(format!("powers of prime {} are not coprime to the rest", prime.id)))?;
            let residue = if chosen.contains(&j) { Elem(self.gp[j].first().expect("G_P is nonempty") as u32) } else { ring.one() };
            acc = ring.add(acc, ring.mul(residue, z));
        }
        Ok(acc)
    }
}

/// The block `B_O = b_1^{d_1} ⋯ b_h^{d_h}` of one orbit.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitBlock {
    pub orbit: Orbit,
    /// `Ind(P_1)`.
    pub index: u32,
    /// Multiplicities `d_1..d_h` from the recurrence profile.
    pub profile: Vec<u32>,
    /// A profile with every `d_t >= 1` and the same sum, if one exists.
    pub positive_profile: Option<Vec<u32>>,
    /// `b_t` for each `t` with `d_t > 0`.
    #[serde(skip)]
    pub picks: Vec<(usize, Elem)>,
    #[serde(skip)]
    pub sequence: SequenceMultiset,
}

pub fn build_orbit_block(ring: &FiniteRing, s: &Structure, orbit: &Orbit) -> Result<OrbitBlock> {
    let first = &s.primes[s.position(orbit.primes[0])];
    let h = orbit.size as u32;
    let tp = t_function(first.index, h);
    let layers = s.h_layers(ring, orbit);
    let mut picks = Vec::new();
    let mut sequence = SequenceMultiset::empty(ring);
    for (t, &d) in tp.profile.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let b = layers[t].first().ok_or_else(|| Error::Contradiction(format!("H(O;{}) is empty for orbit {:?}", t + 1, orbit.primes)))?;
        picks.push((t + 1, Elem(b as u32)));
        sequence.push(Elem(b as u32), d);
    }
    Ok(OrbitBlock {
        orbit: orbit.clone(),
        index: first.index,
        positive_profile: positive_profile(first.index, h),
        profile: tp.profile,
        picks,
        sequence,
    })
}

/// `T = B_{O_1} ⋯ B_{O_k} · V`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub structure: Structure,
    pub blocks: Vec<OrbitBlock>,
    pub units: SequenceMultiset,
    pub sequence: SequenceMultiset,
    /// `D_Ψ(U(R))`.
    pub davenport: usize,
    /// `Σ_O T(Ind(P_O); h_O)`.
    pub sigma: usize,
    /// Whether `T` is `Ψ`-idempotent-product free.
    pub free: bool,
}

impl Witness {
    /// `|T| + 1`.
    pub fn bound(&self) -> usize {
        self.sequence.len() + 1
    }
}

pub fn build_witness(ring: &FiniteRing, psi: &WeightGroup) -> Result<Witness> {
    build_witness_with(ring, psi, &SearchConfig::davenport())
}

pub fn build_witness_with(ring: &FiniteRing, psi: &WeightGroup, cfg: &SearchConfig) -> Result<Witness> {
    let structure = Structure::new(ring, psi)?;
    let blocks = structure.orbits.iter().map(|o| build_orbit_block(ring, &structure, o)).collect::<Result<Vec<_>>>()?;
    let v = longest_free_sequence(ring, psi, Target::One, cfg)?;
    if !v.complete {
        return Err(Error::SearchIncomplete { best: v.length + 1 });
    }
    let mut sequence = SequenceMultiset::empty(ring);
    for b in &blocks {
        sequence = sequence.concat(&b.sequence);
    }
    sequence = sequence.concat(&v.witness);
    let free = is_idempotent_product_free(ring, &sequence, psi)?;
    let sigma = blocks.iter().map(|b| b.sequence.len()).sum();
    Ok(Witness { structure, blocks, units: v.witness, sequence, davenport: v.length + 1, sigma, free })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::swap_factors;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::from_spec(s).unwrap()
    }

    fn rendered(r: &FiniteRing, s: &ElemSet) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|i| r.render(Elem(i as u32))).collect();
        v.sort();
        v
    }

    #[test]
    fn good_generators() {
        let r = ring("Z/4");
        let p = &r.prime_ideals().unwrap()[0];
        assert_eq!(rendered(&r, &gp_set(&r, p).unwrap()), ["2"]);
        let r = ring("Z/6");
        let primes = r.prime_ideals().unwrap();
        let two = primes.iter().find(|p| p.ideal.contains(r.residue(2))).unwrap();
        assert_eq!(rendered(&r, &gp_set(&r, two).unwrap()), ["0", "2", "4"]);
        let r = ring("GF(2)[x]/x^3");
        let p = &r.prime_ideals().unwrap()[0];
        let g: Vec<u32> = gp_set(&r, p).unwrap().iter().map(|i| i as u32).collect();
        // x and x + x^2
        assert_eq!(g, [2, 6]);
    }

    #[test]
    fn h_sets_z4_squared() {
        let r = ring("Z/4 x Z/4");
        let psi = WeightGroup::generate(&r, &[swap_factors(&r, 0, 1).unwrap()]).unwrap();
        let s = Structure::new(&r, &psi).unwrap();
        assert_eq!(s.orbits.len(), 1);
        let o = &s.orbits[0];
        let at = |a, b| r.encode(&[a, b]).index();
        assert_eq!(s.h_set(&r, o, &[1]).unwrap().iter().collect::<Vec<_>>(), [at(2, 1)]);
        assert_eq!(s.h_set(&r, o, &[1, 2]).unwrap().iter().collect::<Vec<_>>(), [at(2, 2)]);
        let layers = s.h_layers(&r, o);
        let mut one = vec![at(2, 1), at(1, 2)];
        one.sort();
        assert_eq!(layers[0].iter().collect::<Vec<_>>(), one);
        assert!(s.h_set(&r, o, &[]).is_err());
        assert!(s.h_set(&r, o, &[3]).is_err());
        for x in [&[1][..], &[2], &[1, 2]] {
            let c = s.crt_element(&r, o, x).unwrap();
            assert!(s.h_set(&r, o, x).unwrap().contains(c.index()));
        }
    }

    #[test]
    fn h_set_z6() {
        let r = ring("Z/6");
        let psi = WeightGroup::trivial(&r);
        let s = Structure::new(&r, &psi).unwrap();
        let o = s.orbits.iter().find(|o| s.primes[s.position(o.primes[0])].ideal.contains(r.residue(2))).unwrap();
        assert_eq!(rendered(&r, &s.h_set(&r, o, &[1]).unwrap()), ["4"]);
    }

    #[test]
    fn blocks_and_witnesses() {
        let r = ring("Z/4");
        let w = build_witness(&r, &WeightGroup::trivial(&r)).unwrap();
        assert_eq!(w.sequence.render(&r), ["2", "3"]);
        assert!(w.free);
        assert_eq!(w.bound(), 3);

        let r = ring("GF(3)");
        let w = build_witness(&r, &WeightGroup::trivial(&r)).unwrap();
        assert!(w.blocks[0].sequence.is_empty());
        assert_eq!(w.sequence.render(&r), ["2"]);

        let r = ring("Z/4 x Z/4");
        let psi = WeightGroup::generate(&r, &[swap_factors(&r, 0, 1).unwrap()]).unwrap();
        let w = build_witness(&r, &psi).unwrap();
        assert_eq!(w.blocks[0].profile, [1, 1]);
        assert_eq!(w.sigma, 2);
        assert_eq!(w.bound(), w.davenport + 2);
        assert!(w.free);
    }

    #[test]
    fn zero_multiplicities_are_reported() {
        let r = ring("Z/4 x Z/4 x Z/4");
        let full = crate::automorphism::full_aut(&r).unwrap();
        let w = build_witness(&r, &full).unwrap();
        let b = &w.blocks[0];
        assert_eq!(b.profile, [1, 1, 0]);
        assert_eq!(b.positive_profile, None);
        assert_eq!(b.picks.len(), 2);
        assert!(w.free);
    }
}
