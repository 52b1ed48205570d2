//! Local chain-ring factors: `Z/p^k`, `GF(p^e)` and `GF(p^e)[x]/(x^k)`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{is_prime, prime_power};
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Normalized description of one local factor.
///
/// `GF(p)` is always stored as `IntegerChain { p, k: 1 }` so that isomorphic factors
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorDescriptor {
    IntegerChain { p: u32, k: u32 },
    GaloisField { p: u32, e: u32, modulus: Poly },
    TruncatedPoly { p: u32, e: u32, k: u32, modulus: Poly },
}

impl FactorDescriptor {
    pub fn integer_chain(p: u32, k: u32) -> Result<Self> {
        let d = FactorDescriptor::IntegerChain { p, k };
        d.validate()?;
        Ok(d)
    }

    /// `GF(q)` with the canonical (smallest) reduction polynomial.
    pub fn galois_field(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidFactor(format!("GF({q}): {q} is not a prime power")))?;
        Self::galois_field_with(p as u32, e, poly::smallest_irreducible(p as u32, e))
    }

    pub fn galois_field_with(p: u32, e: u32, modulus: Poly) -> Result<Self> {
        if e == 1 && is_prime(p as u64) {
            return Self::integer_chain(p, 1);
        }
        let d = FactorDescriptor::GaloisField { p, e, modulus };
        d.validate()?;
        Ok(d)
    }

    /// `GF(q)[x]/(x^k)` with `k >= 2`.
    pub fn truncated_poly(q: u64, k: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidFactor(format!("GF({q}): {q} is not a prime power")))?;
        let p = p as u32;
        let modulus = if e == 1 { vec![0, 1] } else { poly::smallest_irreducible(p, e) };
        let d = FactorDescriptor::TruncatedPoly { p, e, k, modulus };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.characteristic_prime();
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        match self {
            FactorDescriptor::IntegerChain { k, .. } => {
                if *k == 0 {
                    return Err(Error::InvalidFactor("exponent must be at least 1".into()));
                }
            }
            FactorDescriptor::GaloisField { p, e, modulus } | FactorDescriptor::TruncatedPoly { p, e, modulus, .. } => {
                if *e == 0 {
                    return Err(Error::InvalidFactor("extension degree must be at least 1".into()));
                }
                if poly::degree(modulus) != Some(*e as usize) || modulus.last() != Some(&1) {
                    return Err(Error::InvalidFactor(format!("reduction polynomial must be monic of degree {e}")));
                }
                if modulus.iter().any(|&c| c >= *p) {
                    return Err(Error::InvalidFactor("coefficients must be reduced mod p".into()));
                }
                if !poly::is_irreducible(*p, modulus) {
                    return Err(Error::ReduciblePolynomial { p: *p, poly: poly::render(modulus, "x") });
                }
                if let FactorDescriptor::TruncatedPoly { k, .. } = self {
                    if *k < 2 {
                        return Err(Error::InvalidFactor("truncated polynomial rings need k >= 2".into()));
                    }
                }
                if matches!(self, FactorDescriptor::GaloisField { .. }) && *e == 1 {
                    return Err(Error::InvalidFactor("GF(p) is normalized to Z/p".into()));
                }
            }
        }
        let order = self.order_u128();
        if order > u32::MAX as u128 {
            return Err(Error::OrderCapExceeded { order: u64::MAX, cap: u32::MAX as u64 });
        }
        Ok(())
    }

    pub fn characteristic_prime(&self) -> u32 {
        match self {
            FactorDescriptor::IntegerChain { p, .. }
            | FactorDescriptor::GaloisField { p, .. }
            | FactorDescriptor::TruncatedPoly { p, .. } => *p,
        }
    }

    fn order_u128(&self) -> u128 {
        match *self {
            FactorDescriptor::IntegerChain { p, k } => (p as u128).pow(k),
            FactorDescriptor::GaloisField { p, e, .. } => (p as u128).pow(e),
            FactorDescriptor::TruncatedPoly { p, e, k, .. } => (p as u128).pow(e * k),
        }
    }

    pub fn order(&self) -> u64 {
        self.order_u128() as u64
    }

    /// Nilpotency length of the maximal ideal.
    pub fn chain_length(&self) -> u32 {
        match *self {
            FactorDescriptor::IntegerChain { k, .. } => k,
            FactorDescriptor::GaloisField { .. } => 1,
            FactorDescriptor::TruncatedPoly { k, .. } => k,
        }
    }
}

impl fmt::Display for FactorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FactorDescriptor::IntegerChain { p, k } => write!(f, "Z/{}", (p as u64).pow(k)),
            FactorDescriptor::GaloisField { p, e, .. } => write!(f, "GF({})", (p as u64).pow(e)),
            FactorDescriptor::TruncatedPoly { p, e, k, .. } => write!(f, "GF({})[x]/x^{}", (p as u64).pow(e), k),
        }
    }
}

/// Arithmetic in `GF(p^e)` through log/antilog tables.
#[derive(Clone, Debug)]
pub(crate) struct Gf {
    p: u32,
    e: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf {
    pub(crate) fn new(p: u32, e: u32, modulus: &[u32]) -> Gf {
        let q = p.pow(e);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let pa = poly::from_index(p, a as u64, e as usize);
            let pb = poly::from_index(p, b as u64, e as usize);
            poly::to_index(p, &poly::rem(p, &poly::mul(p, &pa, &pb), modulus)) as u32
        };
        let mut exp = Vec::new();
        for g in 1..q {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = slow_mul(x, g);
                if x == 1 || exp.len() > q as usize {
                    break;
                }
            }
            if exp.len() == (q - 1) as usize {
                break;
            }
        }
        debug_assert_eq!(exp.len(), (q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        Gf { p, e, q, exp, log }
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    /// `a^(p^i)`.
    pub(crate) fn frobenius(&self, a: u32, i: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let mut power = 1u64;
        for _ in 0..i {
            power = power * self.p as u64 % n.max(1);
        }
        self.exp[((self.log[a as usize] as u64 * power) % n.max(1)) as usize]
    }

    pub(crate) fn order(&self) -> u32 {
        self.q
    }

    pub(crate) fn render(&self, a: u32, var: &str) -> String {
        poly::render(&poly::from_index(self.p, a as u64, self.e as usize), var)
    }
}

#[derive(Clone, Debug)]
enum Arith {
    Integer { n: u32 },
    Field(Gf),
    Truncated { gf: Gf, k: u32 },
}

/// A factor descriptor together with its arithmetic. Elements are integers in
/// `[0, order)`; `0` is zero and `1` is the identity for every kind.
#[derive(Clone, Debug)]
pub struct Factor {
    desc: FactorDescriptor,
    order: u32,
    arith: Arith,
}

impl Factor {
    pub fn new(desc: FactorDescriptor) -> Result<Factor> {
        desc.validate()?;
        let order = desc.order() as u32;
        let arith = match &desc {
            FactorDescriptor::IntegerChain { .. } => Arith::Integer { n: order },
            FactorDescriptor::GaloisField { p, e, modulus } => Arith::Field(Gf::new(*p, *e, modulus)),
            FactorDescriptor::TruncatedPoly { p, e, k, modulus } => Arith::Truncated { gf: Gf::new(*p, *e, modulus), k: *k },
        };
        Ok(Factor { desc, order, arith })
    }

    pub fn descriptor(&self) -> &FactorDescriptor {
        &self.desc
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn coeffs(&self, a: u32) -> Vec<u32> {
        match &self.arith {
            Arith::Truncated { gf, k } => {
                let q = gf.order();
                let mut a = a;
                (0..*k)
                    .map(|_| {
                        let c = a % q;
                        a /= q;
                        c
                    })
                    .collect()
            }
            _ => vec![a],
        }
    }

    pub(crate) fn pack_coeffs(&self, c: &[u32]) -> u32 {
        match &self.arith {
            Arith::Truncated { gf, .. } => c.iter().rev().fold(0, |acc, &x| acc * gf.order() + x),
            _ => c[0],
        }
    }

    pub(crate) fn coefficient_field(&self) -> Option<&Gf> {
        match &self.arith {
            Arith::Integer { .. } => None,
            Arith::Field(gf) | Arith::Truncated { gf, .. } => Some(gf),
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Integer { n } => ((a as u64 + b as u64) % *n as u64) as u32,
            Arith::Field(gf) => gf.add(a, b),
            Arith::Truncated { gf, .. } => {
                let (ca, cb) = (self.coeffs(a), self.coeffs(b));
                let c: Vec<u32> = ca.iter().zip(&cb).map(|(&x, &y)| gf.add(x, y)).collect();
                self.pack_coeffs(&c)
            }
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match &self.arith {
            Arith::Integer { n } => (n - a) % n,
            Arith::Field(gf) => gf.neg(a),
            Arith::Truncated { gf, .. } => {
                let c: Vec<u32> = self.coeffs(a).into_iter().map(|x| gf.neg(x)).collect();
                self.pack_coeffs(&c)
            }
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Integer { n } => ((a as u64 * b as u64) % *n as u64) as u32,
            Arith::Field(gf) => gf.mul(a, b),
            Arith::Truncated { gf, k } => {
                let (ca, cb) = (self.coeffs(a), self.coeffs(b));
                let k = *k as usize;
                let mut c = vec![0u32; k];
                for i in 0..k {
                    if ca[i] == 0 {
                        continue;
                    }
                    for j in 0..k - i {
                        c[i + j] = gf.add(c[i + j], gf.mul(ca[i], cb[j]));
                    }
                }
                self.pack_coeffs(&c)
            }
        }
    }

    pub fn is_unit(&self, a: u32) -> bool {
        match &self.arith {
            Arith::Integer { .. } => !a.is_multiple_of(self.desc.characteristic_prime()),
            Arith::Field(_) => a != 0,
            Arith::Truncated { gf, .. } => !a.is_multiple_of(gf.order()),
        }
    }

    /// Exponent `v` with `a ∈ m^v \ m^{v+1}`; the chain length for zero.
    pub fn valuation(&self, a: u32) -> u32 {
        if a == 0 {
            return self.desc.chain_length();
        }
        match &self.arith {
            Arith::Integer { .. } => {
                let p = self.desc.characteristic_prime();
                let (mut a, mut v) = (a, 0);
                while a % p == 0 {
                    a /= p;
                    v += 1;
                }
                v
            }
            Arith::Field(_) => 0,
            Arith::Truncated { .. } => self.coeffs(a).iter().position(|&c| c != 0).unwrap_or(0) as u32,
        }
    }

    pub fn render(&self, a: u32) -> String {
        match &self.arith {
            Arith::Integer { .. } => a.to_string(),
            Arith::Field(gf) => gf.render(a, "x"),
            Arith::Truncated { gf, .. } => {
                let terms: Vec<String> = self
                    .coeffs(a)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| {
                        let coeff = if gf.e > 1 { format!("({})", gf.render(c, "a")) } else { c.to_string() };
                        match (i, coeff.as_str()) {
                            (0, _) => coeff,
                            (1, "1") => "x".into(),
                            (i, "1") => format!("x^{i}"),
                            (1, _) => format!("{coeff}x"),
                            (i, _) => format!("{coeff}x^{i}"),
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}
