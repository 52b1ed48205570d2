//! Exact search for the longest weighted-product-free multiset.
//!
//! Elements are first merged into classes: in a chain ring every element is
//! `π^v·u`, and whether a product is idempotent depends on each factor only
//! through the valuation and, where that valuation is zero, the unit itself.
//! Elements agreeing on this data are interchangeable (the relation is a
//! multiplicative congruence preserved by ring automorphisms), so the search
//! runs on class representatives.
//!
//! The state of a partial multiset is its achievable set `A`: the achievable set
//! after appending `W` is `A ∪ ach(W) ∪ A·ach(W)`, so the best extension length
//! `f(A)` depends on `A` alone. The search memoizes lower and upper bounds on
//! `f(A)` keyed by the bitmap and prunes with:
//!
//! * growth bound: every appended term strictly enlarges `A` (otherwise some power
//!   of the term would already be achievable, and powers reach an idempotent), so
//!   `f(A) <= |universe \ target| - |A|`;
//! * blocked bound: an extension `W` is itself free, so it grows its own
//!   achievable set by at least one per term, and that set avoids every `x` with
//!   `x·a` in the target for some `a ∈ A`; hence `f(A)` is at most the number of
//!   elements outside the target not blocked by `A`;
//! * antitonicity: `A ⊆ B ⇒ f(A) >= f(B)`, so children whose state contains a
//!   sibling's state are dropped;
//! * transposition: equal states reached along different paths are solved once;
//! * symmetry: states are memoized up to automorphisms of the class
//!   multiplication table that fix the target and respect the weight orbits.

use std::hash::Hash;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::automorphism::WeightGroup;
use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};
use crate::sequence::SequenceMultiset;
use crate::symmetry::table_automorphisms;

/// Most symmetries used to merge states; more cost time per state than they save.
const SYMMETRY_LIMIT: usize = 4096;

/// Which products end the search: idempotents over the whole ring (Erdős–Burgess)
/// or the identity over the unit group (Davenport).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Idempotents,
    One,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest universe (ring order, or unit count for [`Target::One`]) accepted.
    pub universe_cap: usize,
    /// Number of expanded states after which the search gives up.
    pub max_states: usize,
    /// Merge interchangeable elements and symmetric states (on by default; off
    /// gives a plainer search for cross-checking).
    pub reductions: bool,
}

impl SearchConfig {
    pub fn burgess() -> Self {
        SearchConfig { universe_cap: 64, max_states: 4_000_000, reductions: true }
    }

    pub fn davenport() -> Self {
        SearchConfig { universe_cap: 256, max_states: 4_000_000, reductions: true }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Length of the longest free multiset found.
    pub length: usize,
    /// Lexicographically smallest maximum-length free multiset (when complete).
    pub witness: SequenceMultiset,
    /// False when the state budget ran out; `length` is then only a lower bound.
    pub complete: bool,
    pub states: usize,
}

/// Inline bitmap over at most `64 * K` class indices.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits<const K: usize>([u64; K]);

impl<const K: usize> Bits<K> {
    const EMPTY: Self = Bits([0; K]);

    #[inline]
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    fn union_with(&mut self, o: &Self) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    fn intersects(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }

    fn is_subset(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    w * 64 + b
                })
            })
        })
    }
}

/// Class key of an element: per factor, the valuation and, for units of that
/// factor, the value.
fn class_key(ring: &FiniteRing, e: Elem) -> Vec<(u32, u32)> {
    ring.factors()
        .iter()
        .zip(ring.decode(e))
        .map(|(f, x)| {
            let v = f.valuation(x);
            (v, if v == 0 { x } else { 0 })
        })
        .collect()
}

/// Least representative of each class within `universe`, in increasing order,
/// and the class of every ring element (`u16::MAX` outside the universe).
fn classes(ring: &FiniteRing, universe: &[Elem], merge: bool) -> (Vec<Elem>, Vec<u16>) {
    if !merge {
        let mut class = vec![u16::MAX; ring.order()];
        for (i, e) in universe.iter().enumerate() {
            class[e.index()] = i as u16;
        }
        return (universe.to_vec(), class);
    }
    let mut seen: FxHashMap<Vec<(u32, u32)>, u16> = FxHashMap::default();
    let mut reps = Vec::new();
    let mut class = vec![u16::MAX; ring.order()];
    for &e in universe {
        let id = *seen.entry(class_key(ring, e)).or_insert_with(|| {
            reps.push(e);
            (reps.len() - 1) as u16
        });
        class[e.index()] = id;
    }
    (reps, class)
}

#[derive(Copy, Clone)]
struct Bounds {
    lb: u16,
    ub: u16,
}

struct Search<const K: usize> {
    n: usize,
    reps: Vec<Elem>,
    mul: Vec<u16>,
    images: Vec<Vec<u16>>,
    target: Bits<K>,
    /// `blocks[a] = {x : x·a ∈ target}`.
    blocks: Vec<Bits<K>>,
    candidates: Vec<u16>,
    budget: usize,
    memo: FxHashMap<Bits<K>, Bounds>,
    /// Non-identity symmetries of the class table.
    symmetries: Vec<Vec<u16>>,
    states: usize,
    max_states: usize,
    aborted: bool,
}

impl<const K: usize> Search<K> {
    fn new(ring: &FiniteRing, psi: &WeightGroup, target: Target, cfg: &SearchConfig) -> Self {
        let universe: Vec<Elem> = match target {
            Target::Idempotents => ring.elements().collect(),
            Target::One => ring.units(),
        };
        let (reps, class) = classes(ring, &universe, cfg.reductions);
        let n = reps.len();
        debug_assert!(n <= 64 * K);
        let mut mul = vec![0u16; n * n];
        for i in 0..n {
            for j in i..n {
                let p = class[ring.mul(reps[i], reps[j]).index()];
                mul[i * n + j] = p;
                mul[j * n + i] = p;
            }
        }
        let images: Vec<Vec<u16>> = reps
            .iter()
            .map(|&e| {
                let mut v: Vec<u16> = psi.orbit_of(e).into_iter().map(|x| class[x.index()]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let mut target_set = Bits::EMPTY;
        for (i, &e) in reps.iter().enumerate() {
            let hit = match target {
                Target::Idempotents => ring.is_idempotent(e),
                Target::One => e == ring.one(),
            };
            if hit {
                target_set.insert(i);
            }
        }
        let candidates = (0..n as u16).filter(|&a| images[a as usize].iter().all(|&b| !target_set.contains(b as usize))).collect();
        let budget = n - target_set.count();
        let blocks = (0..n)
            .map(|a| {
                let mut b = Bits::EMPTY;
                for x in 0..n {
                    if target_set.contains(mul[x * n + a] as usize) {
                        b.insert(x);
                    }
                }
                b
            })
            .collect();
        let in_target: Vec<bool> = (0..n).map(|i| target_set.contains(i)).collect();
        let mut symmetries = if cfg.reductions { table_automorphisms(n, &mul, &in_target, &images, SYMMETRY_LIMIT) } else { Vec::new() };
        if !symmetries.is_empty() {
            symmetries.remove(0);
        }
        Search {
            symmetries,
            n,
            reps,
            mul,
            images,
            target: target_set,
            blocks,
            candidates,
            budget,
            memo: FxHashMap::default(),
            states: 0,
            max_states: cfg.max_states,
            aborted: false,
        }
    }

    /// `A ∪ Ψa ∪ A·Ψa`, or `None` when it meets the target.
    fn step(&self, set: &Bits<K>, a: u16) -> Option<Bits<K>> {
        let mut out = *set;
        for &b in &self.images[a as usize] {
            out.insert(b as usize);
            let row = &self.mul[b as usize * self.n..(b as usize + 1) * self.n];
            for s in set.ones() {
                out.insert(row[s] as usize);
            }
        }
        (!out.intersects(&self.target)).then_some(out)
    }

    fn children(&self, set: &Bits<K>) -> Vec<Bits<K>> {
        let mut kids: Vec<Bits<K>> = self.candidates.iter().filter_map(|&a| self.step(set, a)).collect();
        kids.sort_by_key(|k| k.count());
        let mut kept: Vec<Bits<K>> = Vec::with_capacity(kids.len());
        for k in kids {
            if !kept.iter().any(|s| s.is_subset(&k)) {
                kept.push(k);
            }
        }
        kept
    }

    /// Least image of `set` under the known symmetries.
    fn canonical(&self, set: &Bits<K>) -> Bits<K> {
        let mut best = *set;
        for sigma in &self.symmetries {
            let mut img = Bits::EMPTY;
            for x in set.ones() {
                img.insert(sigma[x] as usize);
            }
            best = best.min(img);
        }
        best
    }

    fn bounds(&self, set: &Bits<K>) -> Bounds {
        let mut blocked = self.target;
        for a in set.ones() {
            blocked.union_with(&self.blocks[a]);
        }
        let trivial = (self.budget - set.count()).min(self.n - blocked.count()) as u16;
        match self.memo.get(set) {
            Some(b) => Bounds { lb: b.lb, ub: b.ub.min(trivial) },
            None => Bounds { lb: 0, ub: trivial },
        }
    }

    /// Finds an extension of length at least `need`, returning its length, or
    /// proves `f(set) < need`.
    fn reach(&mut self, set: &Bits<K>, need: u16) -> Option<u16> {
        let key = self.canonical(set);
        let b = self.bounds(&key);
        if b.lb >= need {
            return Some(b.lb);
        }
        if b.ub < need || self.aborted {
            return None;
        }
        self.states += 1;
        if self.states > self.max_states {
            self.aborted = true;
            return None;
        }
        for child in self.children(set) {
            if let Some(len) = self.reach(&child, need - 1) {
                let entry = self.memo.entry(key).or_insert(b);
                entry.lb = entry.lb.max(len + 1);
                return Some(len + 1);
            }
            if self.aborted {
                return None;
            }
        }
        self.memo.entry(key).or_insert(b).ub = need - 1;
        None
    }

    fn greedy(&self) -> u16 {
        let mut set = Bits::EMPTY;
        let mut len = 0;
        while let Some(next) = self.children(&set).into_iter().next() {
            set = next;
            len += 1;
        }
        len
    }

    /// Lexicographically smallest multiset of length `len`; each pick is the
    /// smallest class that still leaves an extension of the right length.
    fn witness(&mut self, len: u16) -> Vec<u16> {
        let mut set = Bits::EMPTY;
        let mut picks = Vec::new();
        let mut last = 0;
        for remaining in (1..=len).rev() {
            let cands: Vec<u16> = self.candidates.iter().copied().filter(|&a| a >= last).collect();
            let mut chosen = None;
            for a in cands {
                if let Some(next) = self.step(&set, a) {
                    if remaining == 1 || self.reach(&next, remaining - 1).is_some() {
                        chosen = Some((a, next));
                        break;
                    }
                }
            }
            let (a, next) = chosen.expect("a maximum-length extension exists");
            picks.push(a);
            last = a;
            set = next;
        }
        picks
    }

    fn run(mut self, ring: &FiniteRing, floor: usize) -> SearchOutcome {
        let root = Bits::EMPTY;
        let mut best = self.greedy().max(floor as u16);
        while let Some(found) = self.reach(&root, best + 1) {
            best = found;
        }
        let complete = !self.aborted;
        let witness = if complete {
            let picks = self.witness(best);
            SequenceMultiset::from_terms(ring, picks.into_iter().map(|a| self.reps[a as usize]))
        } else {
            SequenceMultiset::empty(ring)
        };
        SearchOutcome { length: best as usize, witness, complete, states: self.states }
    }
}

/// Longest multiset over the universe (`R`, or `U(R)` for [`Target::One`]) none of
/// whose nonempty weighted subproducts lies in the target set.
pub fn longest_free_sequence(ring: &FiniteRing, psi: &WeightGroup, target: Target, cfg: &SearchConfig) -> Result<SearchOutcome> {
    longest_free_sequence_from(ring, psi, target, cfg, 0)
}

/// As [`longest_free_sequence`], given that a free multiset of length `floor`
/// is already known to exist (for example an explicit witness).
pub fn longest_free_sequence_from(
    ring: &FiniteRing,
    psi: &WeightGroup,
    target: Target,
    cfg: &SearchConfig,
    floor: usize,
) -> Result<SearchOutcome> {
    if psi.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    let universe = match target {
        Target::Idempotents => ring.order(),
        Target::One => ring.unit_set().count(),
    };
    if universe > cfg.universe_cap || universe > 256 {
        return Err(Error::OrderCapExceeded { order: universe as u64, cap: cfg.universe_cap.min(256) as u64 });
    }
    Ok(if universe <= 64 {
        Search::<1>::new(ring, psi, target, cfg).run(ring, floor)
    } else {
        Search::<4>::new(ring, psi, target, cfg).run(ring, floor)
    })
}

fn constant(ring: &FiniteRing, psi: &WeightGroup, target: Target, cfg: &SearchConfig) -> Result<usize> {
    let out = longest_free_sequence(ring, psi, target, cfg)?;
    if !out.complete {
        return Err(Error::SearchIncomplete { best: out.length + 1 });
    }
    Ok(out.length + 1)
}

/// `D_Ψ(U(R))`: one more than the longest `Ψ`-product-one-free unit multiset.
pub fn weighted_davenport(ring: &FiniteRing, psi: &WeightGroup) -> Result<usize> {
    constant(ring, psi, Target::One, &SearchConfig::davenport())
}

/// `I_Ψ(R)`: one more than the longest `Ψ`-idempotent-product-free multiset.
pub fn weighted_burgess(ring: &FiniteRing, psi: &WeightGroup) -> Result<usize> {
    constant(ring, psi, Target::Idempotents, &SearchConfig::burgess())
}

pub fn weighted_davenport_with(ring: &FiniteRing, psi: &WeightGroup, cfg: &SearchConfig) -> Result<usize> {
    constant(ring, psi, Target::One, cfg)
}

pub fn weighted_burgess_with(ring: &FiniteRing, psi: &WeightGroup, cfg: &SearchConfig) -> Result<usize> {
    constant(ring, psi, Target::Idempotents, cfg)
}
