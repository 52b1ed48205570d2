//! Serializable summaries of a witness construction.

use serde::Serialize;

use crate::automorphism::WeightGroup;
use crate::claims::{predicted_equality, sigma_term, verify_claims, verify_theorem_with, ClaimReport, EqualityCase};
use crate::error::Result;
use crate::ring::FiniteRing;
use crate::search::SearchConfig;
use crate::witness::{build_witness_with, OrbitBlock, Witness};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BlockReport {
    /// Labels of the maximal ideals in the orbit.
    pub primes: Vec<usize>,
    pub h: usize,
    pub index: u32,
    /// Multiplicities used.
    pub d_profile: Vec<u32>,
    /// An all-positive profile with the same sum; `null` when none exists.
    pub positive_profile: Option<Vec<u32>>,
    /// `(t, b_t)` for every `t` with `d_t > 0`.
    pub picks: Vec<(usize, String)>,
}

impl BlockReport {
    fn new(ring: &FiniteRing, b: &OrbitBlock) -> Self {
        BlockReport {
            primes: b.orbit.primes.clone(),
            h: b.orbit.size,
            index: b.index,
            d_profile: b.profile.clone(),
            positive_profile: b.positive_profile.clone(),
            picks: b.picks.iter().map(|&(t, e)| (t, ring.render(e))).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct WitnessReport {
    pub ring_spec: String,
    pub psi_descriptor: String,
    pub psi_order: usize,
    /// The sequence `T`, rendered term by term.
    pub witness: Vec<String>,
    /// `|T| + 1`.
    pub bound: usize,
    pub davenport: usize,
    pub sigma_term: usize,
    pub burgess: Option<usize>,
    pub blocks: Vec<BlockReport>,
    pub claims: ClaimReport,
    /// `null` when the exact constant was not computed.
    pub equality: Option<bool>,
    pub predicted_equality: Option<EqualityCase>,
}

/// Builds the witness, runs every claim check and, when `exact` is set, compares
/// against the exact constant.
pub fn witness_report(ring: &FiniteRing, psi: &WeightGroup, descriptor: &str, exact: bool) -> Result<WitnessReport> {
    let w = build_witness_with(ring, psi, &SearchConfig::davenport())?;
    report_for(ring, psi, descriptor, &w, exact)
}

pub fn report_for(ring: &FiniteRing, psi: &WeightGroup, descriptor: &str, w: &Witness, exact: bool) -> Result<WitnessReport> {
    let claims = verify_claims(ring, psi, w)?;
    let theorem = if exact { Some(verify_theorem_with(ring, psi, w, &SearchConfig::burgess())?) } else { None };
    Ok(WitnessReport {
        ring_spec: ring.canonical_spec(),
        psi_descriptor: descriptor.to_string(),
        psi_order: psi.len(),
        witness: w.sequence.render(ring),
        bound: w.bound(),
        davenport: w.davenport,
        sigma_term: sigma_term(w),
        burgess: theorem.as_ref().map(|t| t.burgess),
        blocks: w.blocks.iter().map(|b| BlockReport::new(ring, b)).collect(),
        claims,
        equality: theorem.as_ref().map(|t| t.equality),
        predicted_equality: predicted_equality(ring, psi, w)?,
    })
}
