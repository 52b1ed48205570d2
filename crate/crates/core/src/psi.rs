//! Weight-group descriptors:
//!
//! ```text
//! psi := "id" | "full" | gen ("+" gen)*
//! gen := "swap(" i "," j ")" | "frobenius(" i ")" | "aut(" k ")"
//! ```
//!
//! Factor positions refer to the normalized factor list (so `Z/12` has factors
//! `0 = Z/4` and `1 = Z/3`); `aut(k)` is the `k`-th element of the full
//! automorphism group in canonical order. Explicit permutation tables are
//! accepted through [`PsiSpec::Tables`].

use std::fmt;

use crate::automorphism::{frobenius_on_factor, full_aut, swap_factors, RingAutomorphism, WeightGroup};
use crate::error::{Error, Result};
use crate::ring::FiniteRing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Swap(usize, usize),
    Frobenius(usize),
    Aut(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiSpec {
    Identity,
    Full,
    Generated(Vec<Generator>),
    /// Permutation tables supplied directly, with a label for reports.
    Tables {
        label: String,
        tables: Vec<Vec<u32>>,
    },
}

impl PsiSpec {
    pub fn parse(text: &str) -> Result<PsiSpec> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "id" | "trivial" => return Ok(PsiSpec::Identity),
            "full" => return Ok(PsiSpec::Full),
            "" => return Err(Error::InvalidPsi("empty descriptor".into())),
            _ => {}
        }
        let gens = compact.split('+').map(parse_generator).collect::<Result<Vec<_>>>()?;
        Ok(PsiSpec::Generated(gens))
    }

    pub fn resolve(&self, ring: &FiniteRing) -> Result<WeightGroup> {
        match self {
            PsiSpec::Identity => Ok(WeightGroup::trivial(ring)),
            PsiSpec::Full => full_aut(ring),
            PsiSpec::Generated(gens) => {
                let mut autos = Vec::new();
                let mut full = None;
                for g in gens {
                    autos.push(match *g {
                        Generator::Swap(i, j) => swap_factors(ring, i, j)?,
                        Generator::Frobenius(i) => frobenius_on_factor(ring, i)?,
                        Generator::Aut(k) => {
                            let group = match &full {
                                Some(g) => g,
                                None => full.insert(full_aut(ring)?),
                            };
                            if k >= group.len() {
                                return Err(Error::InvalidPsi(format!("aut({k}): Aut(R) has {} elements", group.len())));
                            }
                            group.get(k).clone()
                        }
                    });
                }
                WeightGroup::generate(ring, &autos)
            }
            PsiSpec::Tables { label, tables } => {
                let autos = tables
                    .iter()
                    .enumerate()
                    .map(|(i, t)| RingAutomorphism::from_table(ring, t.clone(), format!("{label}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                WeightGroup::generate(ring, &autos)
            }
        }
    }
}

fn parse_generator(s: &str) -> Result<Generator> {
    let bad = || Error::InvalidPsi(format!("cannot parse generator `{s}`"));
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let nums = args.split(',').map(|a| a.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    match (name, nums.as_slice()) {
        ("swap", [i, j]) => Ok(Generator::Swap(*i, *j)),
        ("frobenius", [i]) => Ok(Generator::Frobenius(*i)),
        ("aut", [k]) => Ok(Generator::Aut(*k)),
        _ => Err(bad()),
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Swap(i, j) => write!(f, "swap({i},{j})"),
            Generator::Frobenius(i) => write!(f, "frobenius({i})"),
            Generator::Aut(k) => write!(f, "aut({k})"),
        }
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::Identity => f.write_str("id"),
            PsiSpec::Full => f.write_str("full"),
            PsiSpec::Generated(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                f.write_str(&parts.join("+"))
            }
            PsiSpec::Tables { label, .. } => f.write_str(label),
        }
    }
}
