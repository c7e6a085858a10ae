//! Canonical classes, orbit invariants and component certificates.
//!
//! Classes are separated into `Diff(M)`-orbits only through invariants of the
//! full automorphism group of the intersection lattice. `Diff(M)` acts on
//! `H²` through a subgroup of that group, so differing invariants prove
//! distinct orbits. Equal invariants prove nothing, and no function here
//! claims two classes lie in the same orbit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{gc_admissible_chern, modulo_conjugation, ChernData, ChernRecord, SearchWindow};
use crate::enumeration::Completeness;
use crate::error::{Error, Result};
use crate::json::bigint;
use crate::lattice::{CohClass, IntersectionLattice};
use crate::manifold::FourManifoldModel;

/// First Chern class of the canonical bundle `K_𝒥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalClass {
    #[serde(rename = "c1K")]
    pub c1k: CohClass,
}

/// `c₁(K) = c₁(𝕋M) / 2`.
///
/// Fails with [`Error::Inconsistent`] when a coordinate of `c₁(𝕋M)` is odd,
/// which no generalized complex structure produces.
pub fn canonical_from_chtm(d: &ChernData) -> Result<CanonicalClass> {
    let c1k = d
        .c1
        .halve()
        .ok_or_else(|| Error::Inconsistent(format!("c1(TM) = {} has an odd coordinate", d.c1)))?;
    Ok(CanonicalClass { c1k })
}

/// Canonical class after `k` multiplicity-one logarithmic transforms on
/// regular fibers: the type-change locus represents `k·[F]` and
/// `c₁(K) = −PD[Σ] = −k·PD[F]`. `k = 0` is the symplectic structure.
pub fn log_transform_canonical(m: &FourManifoldModel, k: u64) -> Result<CanonicalClass> {
    let fiber = m
        .fiber
        .as_ref()
        .ok_or_else(|| Error::MissingFiber(m.name.clone()))?;
    m.lattice.check_class(fiber)?;
    let k = i64::try_from(k).map_err(|_| Error::Overflow("transform count"))?;
    let c1k = fiber.checked_scale(k)?.checked_neg()?;
    Ok(CanonicalClass { c1k })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitInvariants {
    #[serde(with = "bigint")]
    pub square: BigInt,
    /// gcd of the pairings with all lattice vectors.
    #[serde(with = "bigint")]
    pub divisibility: BigInt,
    pub characteristic: bool,
    /// Coordinate content equal to 1.
    pub primitive: bool,
}

pub fn orbit_invariants(l: &IntersectionLattice, x: &CohClass) -> Result<OrbitInvariants> {
    Ok(OrbitInvariants {
        square: l.square(x)?,
        divisibility: l.divisibility(x)?,
        characteristic: l.is_characteristic(x)?,
        primitive: x.content() == 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitVerdict {
    DistinctOrbits,
    Inconclusive,
}

pub fn distinguish(l: &IntersectionLattice, x: &CohClass, y: &CohClass) -> Result<OrbitVerdict> {
    if orbit_invariants(l, x)? != orbit_invariants(l, y)? {
        Ok(OrbitVerdict::DistinctOrbits)
    } else {
        Ok(OrbitVerdict::Inconclusive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub k: u64,
    #[serde(rename = "c1K")]
    pub c1k: CohClass,
    #[serde(with = "bigint")]
    pub square: BigInt,
    #[serde(with = "bigint")]
    pub divisibility: BigInt,
    pub characteristic: bool,
    pub primitive: bool,
}

impl CertificateEntry {
    pub fn invariants(&self) -> OrbitInvariants {
        OrbitInvariants {
            square: self.square.clone(),
            divisibility: self.divisibility.clone(),
            characteristic: self.characteristic,
            primitive: self.primitive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteVerdict {
    Verified,
    Unverified,
}

/// Witness that `Ch` takes at least `kmax + 1` values in distinct
/// `Diff(M)`-orbits: one canonical class per number of logarithmic
/// transforms, with pairwise different orbit invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfiniteCertificate {
    pub manifold: String,
    pub entries: Vec<CertificateEntry>,
    pub verdict: InfiniteVerdict,
}

fn pairwise_distinct(entries: &[CertificateEntry]) -> bool {
    let set: BTreeSet<OrbitInvariants> = entries.iter().map(|e| e.invariants()).collect();
    set.len() == entries.len()
}

pub fn infinite_components_certificate(
    m: &FourManifoldModel,
    kmax: u64,
) -> Result<InfiniteCertificate> {
    if kmax < 2 {
        return Err(Error::InvalidParameter(format!(
            "kmax must be at least 2, got {kmax}"
        )));
    }
    let fiber = m
        .fiber
        .as_ref()
        .ok_or_else(|| Error::MissingFiber(m.name.clone()))?;
    if fiber.is_zero() {
        return Err(Error::DegenerateFiber("fiber class is zero".into()));
    }
    let sq = m.lattice.square(fiber)?;
    if !sq.is_zero() {
        return Err(Error::DegenerateFiber(format!("fiber has square {sq}")));
    }
    let mut entries = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        let c1k = log_transform_canonical(m, k)?.c1k;
        let kf = fiber.checked_scale(k as i64)?;
        let inv = orbit_invariants(&m.lattice, &kf)?;
        entries.push(CertificateEntry {
            k,
            c1k,
            square: inv.square,
            divisibility: inv.divisibility,
            characteristic: inv.characteristic,
            primitive: inv.primitive,
        });
    }
    let verdict = if pairwise_distinct(&entries) {
        InfiniteVerdict::Verified
    } else {
        InfiniteVerdict::Unverified
    };
    Ok(InfiniteCertificate {
        manifold: m.name.clone(),
        entries,
        verdict,
    })
}

/// Parses a certificate and checks its internal consistency: entries are
/// `k = 0, 1, …` in order, each `c₁(K)` has the same length, and the verdict
/// matches the invariant columns.
pub fn parse_infinite_certificate(text: &str) -> Result<InfiniteCertificate> {
    let cert: InfiniteCertificate =
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
    for (i, e) in cert.entries.iter().enumerate() {
        if e.k != i as u64 {
            return Err(Error::Certificate(format!("entry {i} has k = {}", e.k)));
        }
        if e.c1k.len() != cert.entries[0].c1k.len() {
            return Err(Error::Certificate(format!(
                "entry {i} has a class of the wrong length"
            )));
        }
    }
    let expected = if pairwise_distinct(&cert.entries) {
        InfiniteVerdict::Verified
    } else {
        InfiniteVerdict::Unverified
    };
    if cert.verdict != expected {
        return Err(Error::Certificate(format!(
            "verdict {:?} does not match the invariant columns",
            cert.verdict
        )));
    }
    Ok(cert)
}

/// Re-derives every entry of a certificate from the manifold model.
pub fn check_infinite_certificate(cert: &InfiniteCertificate, m: &FourManifoldModel) -> Result<()> {
    let kmax = cert
        .entries
        .last()
        .map(|e| e.k)
        .ok_or_else(|| Error::Certificate("no entries".into()))?;
    let fresh = infinite_components_certificate(m, kmax)?;
    if fresh.entries != cert.entries || fresh.verdict != cert.verdict {
        return Err(Error::Certificate(format!(
            "certificate does not match manifold `{}`",
            m.name
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteVerdict {
    Finite,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessCertificate {
    pub manifold: String,
    pub verdict: FiniteVerdict,
    pub completeness: Completeness,
    pub count: usize,
    /// Number of values up to `c₁ ↦ −c₁`.
    pub modulo_conjugation: usize,
    pub chern: Vec<ChernRecord>,
}

/// For definite forms every admissible `Ch(𝕋M)` is listed and the image is
/// finite. Indefinite forms get the windowed list and no verdict.
pub fn finiteness_certificate(
    m: &FourManifoldModel,
    window: impl Into<SearchWindow>,
) -> Result<FinitenessCertificate> {
    let list = gc_admissible_chern(m, window)?;
    let verdict = if m.lattice.is_definite() {
        FiniteVerdict::Finite
    } else {
        FiniteVerdict::NotApplicable
    };
    Ok(FinitenessCertificate {
        manifold: m.name.clone(),
        verdict,
        completeness: list.completeness,
        count: list.data.len(),
        modulo_conjugation: modulo_conjugation(&list.data)?.len(),
        chern: list.data.iter().map(|d| d.to_record(&m.lattice)).collect(),
    })
}

impl FinitenessCertificate {
    pub fn chern_data(&self) -> Vec<ChernData> {
        self.chern.iter().cloned().map(ChernData::from).collect()
    }
}

impl OrbitInvariants {
    /// True iff `divisibility | square` (with `0 | 0`).
    pub fn divisibility_divides_square(&self) -> bool {
        if self.divisibility.is_zero() {
            self.square.is_zero()
        } else {
            (&self.square % &self.divisibility).is_zero()
        }
    }

    pub fn is_unit_divisible(&self) -> bool {
        self.divisibility.is_one()
    }
}
