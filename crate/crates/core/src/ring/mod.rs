//! Finite commutative unitary rings realized as products of chain rings.
//!
//! Elements are encoded by a mixed-radix index over the factor orders with the
//! first factor as the most significant digit, so index order on `Z/4 x Z/4` is
//! lexicographic order on pairs. Index `0` is always the zero element.

mod factor;

pub use factor::{Factor, FactorDescriptor};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::arith::crt;
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::syntax::{parse_ring_spec, FactorNode, RingSpecAst};

pub const DEFAULT_ORDER_CAP: u64 = 4096;
const TABLE_LIMIT: usize = 1024;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

/// Canonical element index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// How a run of factors is shown to the user. A `Z/n` written by the user keeps
/// displaying residues mod `n` even though it is stored as its CRT factors.
#[derive(Clone, Debug)]
enum DisplayGroup {
    Residue { n: u64, first: usize, moduli: Vec<u64> },
    Factor { index: usize },
}

#[derive(Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

/// A finite commutative unitary ring, immutable after construction.
#[derive(Clone)]
pub struct FiniteRing {
    id: u64,
    factors: Vec<Factor>,
    stride: Vec<u32>,
    order: usize,
    one: Elem,
    tables: Option<Tables>,
    idempotents: ElemSet,
    units: ElemSet,
    display: Vec<DisplayGroup>,
    label: String,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing").field("label", &self.label).field("order", &self.order).finish()
    }
}

impl FiniteRing {
    /// Builds the product ring of `factors` with the default order cap.
    pub fn build(factors: &[FactorDescriptor]) -> Result<FiniteRing> {
        Self::build_with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(factors: &[FactorDescriptor], cap: u64) -> Result<FiniteRing> {
        let display = (0..factors.len()).map(|index| DisplayGroup::Factor { index }).collect();
        Self::assemble(factors, display, cap)
    }

    /// Parses a ring spec such as `"Z/12 x GF(4)"` and builds it.
    pub fn from_spec(text: &str) -> Result<FiniteRing> {
        Self::from_spec_with_cap(text, DEFAULT_ORDER_CAP)
    }

    pub fn from_spec_with_cap(text: &str, cap: u64) -> Result<FiniteRing> {
        Self::from_ast(&parse_ring_spec(text)?, cap)
    }

    pub fn from_ast(ast: &RingSpecAst, cap: u64) -> Result<FiniteRing> {
        let mut descs = Vec::new();
        let mut display = Vec::new();
        for node in &ast.factors {
            let normalized = node.normalize()?;
            match node {
                FactorNode::Zn { n, .. } if normalized.len() > 1 => {
                    display.push(DisplayGroup::Residue {
                        n: *n,
                        first: descs.len(),
                        moduli: normalized.iter().map(|d| d.order()).collect(),
                    });
                }
                _ => display.push(DisplayGroup::Factor { index: descs.len() }),
            }
            descs.extend(normalized);
        }
        Self::assemble(&descs, display, cap)
    }

    fn assemble(descs: &[FactorDescriptor], display: Vec<DisplayGroup>, cap: u64) -> Result<FiniteRing> {
        if descs.is_empty() {
            return Err(Error::InvalidFactor("a ring needs at least one factor".into()));
        }
        for d in descs {
            d.validate()?;
        }
        let order: u128 = descs.iter().map(|d| d.order() as u128).product();
        if order > cap as u128 {
            return Err(Error::OrderCapExceeded { order: order.min(u64::MAX as u128) as u64, cap });
        }
        let factors: Vec<Factor> = descs.iter().cloned().map(Factor::new).collect::<Result<_>>()?;
        let order = order as usize;
        let mut stride = vec![1u32; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * factors[i + 1].order();
        }
        let one = Elem(stride.iter().sum());
        let label = Self::render_label(descs, &display);
        let mut ring = FiniteRing {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            factors,
            stride,
            order,
            one,
            tables: None,
            idempotents: ElemSet::new(order),
            units: ElemSet::new(order),
            display,
            label,
        };
        if order <= TABLE_LIMIT {
            let mut add = vec![0u16; order * order];
            let mut mul = vec![0u16; order * order];
            for a in 0..order {
                for b in a..order {
                    let s = ring.add_slow(Elem(a as u32), Elem(b as u32)).0 as u16;
                    let m = ring.mul_slow(Elem(a as u32), Elem(b as u32)).0 as u16;
                    add[a * order + b] = s;
                    add[b * order + a] = s;
                    mul[a * order + b] = m;
                    mul[b * order + a] = m;
                }
            }
            ring.tables = Some(Tables { add, mul });
        }
        for e in ring.elements() {
            if ring.mul(e, e) == e {
                ring.idempotents.insert(e.index());
            }
            if ring.decode(e).iter().zip(&ring.factors).all(|(&v, f)| f.is_unit(v)) {
                ring.units.insert(e.index());
            }
        }
        ring.spot_check()?;
        Ok(ring)
    }

    fn render_label(descs: &[FactorDescriptor], display: &[DisplayGroup]) -> String {
        display
            .iter()
            .map(|g| match g {
                DisplayGroup::Residue { n, .. } => format!("Z/{n}"),
                DisplayGroup::Factor { index } => descs[*index].to_string(),
            })
            .collect::<Vec<_>>()
            .join(" x ")
    }

    fn spot_check(&self) -> Result<()> {
        if self.order > DEFAULT_ORDER_CAP as usize {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..512 {
            let a = Elem(rng.gen_range(0..self.order as u32));
            let b = Elem(rng.gen_range(0..self.order as u32));
            let c = Elem(rng.gen_range(0..self.order as u32));
            let ok = self.mul(a, b) == self.mul(b, a)
                && self.add(a, b) == self.add(b, a)
                && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.add(self.add(a, b), c) == self.add(a, self.add(b, c));
            if !ok {
                return Err(Error::Contradiction(format!("ring axioms fail on ({}, {}, {})", a.0, b.0, c.0)));
            }
        }
        Ok(())
    }

    /// Unique identity of this ring instance, used to detect mixed-ring operands.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn descriptors(&self) -> Vec<FactorDescriptor> {
        self.factors.iter().map(|f| f.descriptor().clone()).collect()
    }

    /// The ring spec as the user wrote it (after whitespace normalization).
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Canonical spec of the normalized factor list, e.g. `Z/4 x Z/3` for `Z/12`.
    pub fn canonical_spec(&self) -> String {
        self.factors.iter().map(|f| f.descriptor().to_string()).collect::<Vec<_>>().join(" x ")
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u32).map(Elem)
    }

    pub fn decode(&self, e: Elem) -> Vec<u32> {
        self.factors.iter().zip(&self.stride).map(|(f, &s)| (e.0 / s) % f.order()).collect()
    }

    pub fn encode(&self, parts: &[u32]) -> Elem {
        debug_assert_eq!(parts.len(), self.factors.len());
        Elem(parts.iter().zip(&self.stride).map(|(&v, &s)| v * s).sum())
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.add[a.index() * self.order + b.index()] as u32),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.mul[a.index() * self.order + b.index()] as u32),
            None => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let parts: Vec<u32> = self.decode(a).iter().zip(&self.factors).map(|(&v, f)| f.neg(v)).collect();
        self.encode(&parts)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.decode(a), self.decode(b));
        let parts: Vec<u32> = self.factors.iter().enumerate().map(|(i, f)| f.add(da[i], db[i])).collect();
        self.encode(&parts)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.decode(a), self.decode(b));
        let parts: Vec<u32> = self.factors.iter().enumerate().map(|(i, f)| f.mul(da[i], db[i])).collect();
        self.encode(&parts)
    }

    pub fn pow(&self, a: Elem, k: u32) -> Elem {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.idempotents.contains(a.index())
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.units.contains(a.index())
    }

    /// Bitmap of all `e` with `e·e = e`.
    pub fn idempotent_set(&self) -> &ElemSet {
        &self.idempotents
    }

    pub fn unit_set(&self) -> &ElemSet {
        &self.units
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.idempotents.iter().map(|i| Elem(i as u32)).collect()
    }

    pub fn units(&self) -> Vec<Elem> {
        self.units.iter().map(|i| Elem(i as u32)).collect()
    }

    /// Maps one value per display group (a residue for a user-written `Z/n`, the
    /// factor-local index otherwise) to the element index.
    pub fn element(&self, values: &[u64]) -> Option<Elem> {
        if values.len() != self.display.len() {
            return None;
        }
        let mut parts = vec![0u32; self.factors.len()];
        for (g, &v) in self.display.iter().zip(values) {
            match g {
                DisplayGroup::Residue { n, first, moduli } => {
                    let r = v % n;
                    for (j, m) in moduli.iter().enumerate() {
                        parts[first + j] = (r % m) as u32;
                    }
                }
                DisplayGroup::Factor { index } => {
                    if v >= self.factors[*index].order() as u64 {
                        return None;
                    }
                    parts[*index] = v as u32;
                }
            }
        }
        Some(self.encode(&parts))
    }

    /// Shorthand for single-group rings such as `Z/6`: the element with residue `v`.
    pub fn residue(&self, v: u64) -> Elem {
        self.element(&[v]).expect("single display group")
    }

    /// Inverse of [`FiniteRing::element`].
    pub fn display_values(&self, e: Elem) -> Vec<u64> {
        let parts = self.decode(e);
        self.display
            .iter()
            .map(|g| match g {
                DisplayGroup::Residue { first, moduli, .. } => {
                    let pairs: Vec<(u64, u64)> = moduli.iter().enumerate().map(|(j, &m)| (parts[first + j] as u64, m)).collect();
                    crt(&pairs).expect("factor moduli of Z/n are coprime")
                }
                DisplayGroup::Factor { index } => parts[*index] as u64,
            })
            .collect()
    }

    /// Human-readable form: residues for `Z/n` groups, polynomials for field-based
    /// factors, parenthesized tuples for products.
    pub fn render(&self, e: Elem) -> String {
        let parts = self.decode(e);
        let values = self.display_values(e);
        let shown: Vec<String> = self
            .display
            .iter()
            .zip(&values)
            .map(|(g, v)| match g {
                DisplayGroup::Residue { .. } => v.to_string(),
                DisplayGroup::Factor { index } => self.factors[*index].render(parts[*index]),
            })
            .collect();
        if shown.len() == 1 {
            shown.into_iter().next().unwrap()
        } else {
            format!("({})", shown.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_normalizes_to_crt_factors() {
        let r = FiniteRing::from_spec("Z/6").unwrap();
        assert_eq!(r.order(), 6);
        assert_eq!(r.canonical_spec(), "Z/2 x Z/3");
        assert_eq!(r.label(), "Z/6");
        assert_eq!(r.mul(r.residue(3), r.residue(4)), r.zero());
        assert_eq!(r.one(), r.residue(1));
        for v in 0..6 {
            assert_eq!(r.display_values(r.residue(v)), vec![v]);
        }
    }

    #[test]
    fn gf4_multiplication() {
        let r = FiniteRing::from_spec("GF(4)").unwrap();
        // x has index 2, x+1 index 3
        assert_eq!(r.mul(Elem(2), Elem(2)), Elem(3));
        assert_eq!(r.render(Elem(3)), "1+x");
        assert_eq!(r.idempotents(), vec![Elem(0), Elem(1)]);
    }

    #[test]
    fn truncated_poly_nilpotent() {
        let r = FiniteRing::from_spec("GF(2)[x]/x^3").unwrap();
        let x = Elem(2);
        assert_eq!(r.render(x), "x");
        assert_eq!(r.render(r.mul(x, x)), "x^2");
        assert_eq!(r.pow(x, 3), r.zero());
        assert_eq!(r.units().len(), 4);
        let r = FiniteRing::from_spec("GF(4)[x]/x^2").unwrap();
        assert_eq!(r.order(), 16);
        assert_eq!(r.units().len(), 12);
    }

    #[test]
    fn order_cap_and_validation() {
        assert!(matches!(FiniteRing::from_spec("Z/64 x Z/128"), Err(Error::OrderCapExceeded { .. })));
        assert!(FiniteRing::from_spec_with_cap("Z/64 x Z/128", 1 << 13).is_ok());
        assert!(matches!(FactorDescriptor::integer_chain(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FactorDescriptor::galois_field_with(2, 2, vec![1, 0, 1]), Err(Error::ReduciblePolynomial { .. })));
        assert!(FactorDescriptor::galois_field_with(2, 2, vec![1, 1, 1]).is_ok());
        assert!(FactorDescriptor::truncated_poly(2, 1).is_err());
    }

    #[test]
    fn large_ring_without_tables() {
        let r = FiniteRing::from_spec("Z/2048 x Z/2").unwrap();
        assert!(r.tables.is_none());
        let a = r.element(&[2047, 1]).unwrap();
        assert_eq!(r.mul(a, a), r.one());
        assert_eq!(r.add(a, r.one()), r.element(&[0, 0]).unwrap());
    }
}
