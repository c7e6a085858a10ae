//! Chern polynomials truncated to a 4-manifold.
//!
//! Only `c₁ ∈ H²` and `c₂ ∈ H⁴ ≅ ℤ` survive, so a total Chern class is the
//! triple `(rank, c₁, ⟨c₂, [M]⟩)`. Products of degree-2 classes are evaluated
//! with the intersection form.
//!
//! Dual bundles use `c₁(E*) = −c₁(E)`, `c₂(E*) = c₂(E)`. With this convention
//! the complex structure on ℂP² with `c₁(T^{1,0}) = 3a` has
//! `Ch(𝕋M) = Ch(T^{*1,0})² = (1 − 3a + 3a²)² = 1 − 6a + 15a²`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate_solutions, Completeness, EnumerationProblem, InfinitudeHint};
use crate::error::{Error, Result};
use crate::json::bigint;
use crate::lattice::{CohClass, IntersectionLattice};
use crate::manifold::FourManifoldModel;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChernData {
    /// Complex rank of the bundle.
    pub rank: u32,
    pub c1: CohClass,
    /// `c₂` evaluated on the fundamental class.
    pub c2: BigInt,
}

impl ChernData {
    pub fn new(rank: u32, c1: CohClass, c2: impl Into<BigInt>) -> Self {
        ChernData {
            rank,
            c1,
            c2: c2.into(),
        }
    }

    /// The trivial rank-0 bundle, unit of the Whitney product.
    pub fn unit(lattice_rank: usize) -> Self {
        ChernData::new(0, CohClass::zero(lattice_rank), 0)
    }

    pub fn to_record(&self, lattice: &IntersectionLattice) -> ChernRecord {
        ChernRecord {
            rank: self.rank,
            c1: self.c1.clone(),
            c2: self.c2.clone(),
            pretty: pretty(lattice, self),
        }
    }
}

/// JSON form of [`ChernData`]: `{rank, c1, c2, pretty}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernRecord {
    pub rank: u32,
    pub c1: CohClass,
    #[serde(with = "bigint")]
    pub c2: BigInt,
    pub pretty: String,
}

impl From<ChernRecord> for ChernData {
    fn from(r: ChernRecord) -> Self {
        ChernData::new(r.rank, r.c1, r.c2)
    }
}

/// `c(E ⊕ F) = c(E) ∪ c(F)`, truncated above degree 4.
pub fn whitney_product(l: &IntersectionLattice, a: &ChernData, b: &ChernData) -> Result<ChernData> {
    let cross = l.pair(&a.c1, &b.c1)?;
    Ok(ChernData {
        rank: a
            .rank
            .checked_add(b.rank)
            .ok_or(Error::Overflow("bundle rank"))?,
        c1: a.c1.checked_add(&b.c1)?,
        c2: &a.c2 + &b.c2 + cross,
    })
}

/// Chern data of the conjugate bundle.
pub fn conjugate(d: &ChernData) -> Result<ChernData> {
    Ok(ChernData {
        rank: d.rank,
        c1: d.c1.checked_neg()?,
        c2: d.c2.clone(),
    })
}

/// `Ch(𝕋M) = Ch(T^{*1,0}M)²` for a complex structure, given
/// `c₁(T^{*1,0}M)` (the canonical class).
pub fn complex_structure_chtm(
    l: &IntersectionLattice,
    c1_holo: &CohClass,
    chi: i64,
) -> Result<ChernData> {
    l.check_class(c1_holo)?;
    let dual = ChernData::new(2, c1_holo.clone(), chi);
    whitney_product(l, &dual, &dual)
}

/// `Ch(𝕋M) = Ch(T^{1,0}M) ∪ Ch(T^{0,1}M)` for a symplectic structure with
/// compatible almost complex structure of first Chern class `c1_ac`.
pub fn symplectic_chtm(l: &IntersectionLattice, c1_ac: &CohClass, chi: i64) -> Result<ChernData> {
    l.check_class(c1_ac)?;
    let t10 = ChernData::new(2, c1_ac.clone(), chi);
    whitney_product(l, &t10, &conjugate(&t10)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GcPairing {
    /// `𝕋^{1,0}_{J₁} ≅ T₊^{1,0} ⊕ T₋^{1,0}`
    J1,
    /// `𝕋^{1,0}_{J₂} ≅ T₊^{1,0} ⊕ T₋^{0,1}`
    J2,
}

/// Chern data of `𝕋M` for the generalized almost complex structure built
/// from the pair of almost complex structures `I₊`, `I₋`.
pub fn gc_chtm_from_pair(
    l: &IntersectionLattice,
    plus: &ChernData,
    minus: &ChernData,
    which: GcPairing,
) -> Result<ChernData> {
    for d in [plus, minus] {
        if d.rank != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                found: d.rank,
            });
        }
    }
    match which {
        GcPairing::J1 => whitney_product(l, plus, minus),
        GcPairing::J2 => whitney_product(l, plus, &conjugate(minus)?),
    }
}

/// True iff `d` is the Chern data of an almost complex structure as far as
/// the numerical constraints go: rank 2, `c₂ = χ`, `c₁² = 3σ + 2χ`,
/// `c₁ ≡ w₂ (mod 2)`.
pub fn satisfies_ac_relations(m: &FourManifoldModel, d: &ChernData) -> Result<bool> {
    Ok(d.rank == 2
        && d.c2 == BigInt::from(m.euler)
        && m.lattice.square(&d.c1)? == m.ac_target()
        && d.c1.congruent_mod2(&m.w2))
}

/// Coordinate window and optional solution cap for searches on indefinite
/// forms. Definite forms ignore both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchWindow {
    pub window: u64,
    pub limit: Option<usize>,
}

impl SearchWindow {
    pub fn new(window: u64) -> Self {
        SearchWindow {
            window,
            limit: None,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }
}

impl From<u64> for SearchWindow {
    fn from(window: u64) -> Self {
        SearchWindow::new(window)
    }
}

/// A list of Chern data together with how complete it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernList {
    pub data: Vec<ChernData>,
    pub completeness: Completeness,
    pub limit_reached: bool,
    pub infinitude_hint: Option<InfinitudeHint>,
}

/// Admissible Chern data `(2, c₁, χ)` of almost complex structures.
///
/// "Admissible" means the numerical constraints hold. That every such class
/// is realised by an almost complex structure is a classical theorem (Wu)
/// and is assumed, not checked.
pub fn admissible_ac_chern(
    m: &FourManifoldModel,
    window: impl Into<SearchWindow>,
) -> Result<ChernList> {
    let window = window.into();
    let mut problem = EnumerationProblem::new(
        m.lattice.clone(),
        m.ac_target(),
        m.w2.clone(),
        window.window,
    )?;
    if let Some(limit) = window.limit {
        problem = problem.with_limit(limit);
    }
    let result = enumerate_solutions(&problem)?;
    let completeness = result.completeness();
    let limit_reached = result.limit_reached();
    let infinitude_hint = result.infinitude_hint().cloned();
    let data = result
        .into_solutions()
        .into_iter()
        .map(|c1| ChernData::new(2, c1, m.euler))
        .collect();
    Ok(ChernList {
        data,
        completeness,
        limit_reached,
        infinitude_hint,
    })
}

/// All distinct `Ch(𝕋M)` values `c(T₊) ∪ c(T₋)` over ordered pairs of
/// admissible almost complex Chern data, sorted.
pub fn gc_admissible_chern(
    m: &FourManifoldModel,
    window: impl Into<SearchWindow>,
) -> Result<ChernList> {
    let window = window.into();
    let ac = admissible_ac_chern(m, window)?;
    let mut seen = BTreeSet::new();
    let mut limit_reached = ac.limit_reached;
    'outer: for plus in &ac.data {
        for minus in &ac.data {
            seen.insert(gc_chtm_from_pair(&m.lattice, plus, minus, GcPairing::J1)?);
            if window.limit.is_some_and(|l| seen.len() >= l) {
                limit_reached = true;
                break 'outer;
            }
        }
    }
    Ok(ChernList {
        data: seen.into_iter().collect(),
        completeness: ac.completeness,
        limit_reached,
        infinitude_hint: ac.infinitude_hint,
    })
}

/// Representatives of `data` modulo `c₁ ↦ −c₁`, sorted.
pub fn modulo_conjugation(data: &[ChernData]) -> Result<Vec<ChernData>> {
    let mut reps = BTreeSet::new();
    for d in data {
        let c = conjugate(d)?;
        reps.insert(if c < *d { c } else { d.clone() });
    }
    Ok(reps.into_iter().collect())
}

fn push_term(out: &mut String, coeff: &BigInt, name: &str) {
    if coeff.is_zero() {
        return;
    }
    let abs = coeff.abs();
    let body = if abs == BigInt::from(1) && !name.is_empty() {
        name.to_string()
    } else {
        format!("{abs}{name}")
    };
    if out.is_empty() {
        if coeff.is_negative() {
            out.push('-');
        }
        out.push_str(&body);
    } else {
        let sign = if coeff.is_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {body}");
    }
}

/// Renders a degree-2 class in the generators `a`, `b` for lattices of rank
/// 1 or 2, and as a coordinate vector otherwise.
pub fn pretty_class(l: &IntersectionLattice, x: &CohClass) -> String {
    match l.rank() {
        1 | 2 => {
            let mut out = String::new();
            for (i, name) in ["a", "b"].iter().take(l.rank()).enumerate() {
                push_term(&mut out, &BigInt::from(x[i]), name);
            }
            if out.is_empty() {
                out.push('0');
            }
            out
        }
        _ => x.to_string(),
    }
}

/// Renders the total Chern class.
///
/// Rank-1 lattices use the generator `a` and write the top class as a
/// multiple of `a²` when `a² = ±[M]`; rank-2 lattices use generators `a`,
/// `b`; larger lattices print `c₁` as a coordinate vector. The top class is
/// otherwise written as a multiple of `[M]`.
pub fn pretty(l: &IntersectionLattice, d: &ChernData) -> String {
    let mut out = String::from("1");
    let rank = l.rank();
    match rank {
        1 | 2 => {
            for (i, name) in ["a", "b"].iter().take(rank).enumerate() {
                push_term(&mut out, &BigInt::from(d.c1[i]), name);
            }
        }
        _ => {
            if !d.c1.is_zero() {
                let _ = write!(out, " + {}", d.c1);
            }
        }
    }
    if rank == 1 && l.entry(0, 0).abs() == 1 {
        // a² = g·[M] with g = ±1, so c₂[M] = c₂·g·a²
        push_term(&mut out, &(&d.c2 * l.entry(0, 0)), "a^2");
    } else {
        push_term(&mut out, &d.c2, "[M]");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::preset;

    fn cp2() -> IntersectionLattice {
        IntersectionLattice::diagonal(&[1])
    }

    fn a(k: i64) -> CohClass {
        CohClass::new(vec![k])
    }

    #[test]
    fn symplectic_cp2_product() {
        let l = cp2();
        let p = whitney_product(
            &l,
            &ChernData::new(2, a(3), 3),
            &ChernData::new(2, a(-3), 3),
        )
        .unwrap();
        assert_eq!(p, ChernData::new(4, a(0), -3));
        assert_eq!(pretty(&l, &p), "1 - 3a^2");
    }

    #[test]
    fn unit_is_neutral() {
        let l = cp2();
        let x = ChernData::new(2, a(3), 3);
        assert_eq!(whitney_product(&l, &x, &ChernData::unit(1)).unwrap(), x);
    }

    #[test]
    fn square_of_tangent_bundle() {
        let l = cp2();
        let x = ChernData::new(2, a(3), 3);
        assert_eq!(
            whitney_product(&l, &x, &x).unwrap(),
            ChernData::new(4, a(6), 15)
        );
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(
            conjugate(&ChernData::new(2, a(3), 3)).unwrap(),
            ChernData::new(2, a(-3), 3)
        );
        let k3 = ChernData::new(2, CohClass::zero(22), 24);
        assert_eq!(conjugate(&k3).unwrap(), k3);
    }

    #[test]
    fn complex_constructor() {
        let l = cp2();
        let d = complex_structure_chtm(&l, &a(-3), 3).unwrap();
        assert_eq!(d, ChernData::new(4, a(-6), 15));
        assert_eq!(pretty(&l, &d), "1 - 6a + 15a^2");
        let k3 = preset("K3").unwrap();
        let d = complex_structure_chtm(&k3.lattice, &CohClass::zero(22), 24).unwrap();
        assert_eq!(d, ChernData::new(4, CohClass::zero(22), 48));
    }

    #[test]
    fn symplectic_constructor() {
        let l = cp2();
        assert_eq!(
            symplectic_chtm(&l, &a(3), 3).unwrap(),
            ChernData::new(4, a(0), -3)
        );
        assert_eq!(
            symplectic_chtm(&l, &a(0), 5).unwrap(),
            ChernData::new(4, a(0), 10)
        );
        let k3 = preset("K3").unwrap();
        let d = symplectic_chtm(&k3.lattice, &CohClass::zero(22), 24).unwrap();
        assert_eq!(d.c2, BigInt::from(48));
    }

    #[test]
    fn gc_pair_examples() {
        let l = cp2();
        let plus = ChernData::new(2, a(3), 3);
        let minus = ChernData::new(2, a(-3), 3);
        let j1 = gc_chtm_from_pair(&l, &plus, &minus, GcPairing::J1).unwrap();
        assert_eq!(pretty(&l, &j1), "1 - 3a^2");
        let same = gc_chtm_from_pair(&l, &plus, &plus, GcPairing::J1).unwrap();
        assert_eq!(pretty(&l, &same), "1 + 6a + 15a^2");
        let zero = ChernData::new(2, a(0), 3);
        assert_eq!(
            gc_chtm_from_pair(&l, &plus, &zero, GcPairing::J2).unwrap(),
            gc_chtm_from_pair(&l, &plus, &zero, GcPairing::J1).unwrap()
        );
    }

    #[test]
    fn gc_pair_rejects_wrong_rank() {
        let l = cp2();
        let bad = ChernData::new(4, a(0), 0);
        let ok = ChernData::new(2, a(3), 3);
        assert_eq!(
            gc_chtm_from_pair(&l, &bad, &ok, GcPairing::J1),
            Err(Error::RankMismatch {
                expected: 2,
                found: 4
            })
        );
    }

    #[test]
    fn lattice_mismatch_rejected() {
        let l = cp2();
        let x = ChernData::new(2, CohClass::new(vec![1, 1]), 3);
        assert!(matches!(
            whitney_product(&l, &x, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn admissible_cp2() {
        let m = preset("CP2").unwrap();
        let list = admissible_ac_chern(&m, 8).unwrap();
        assert_eq!(
            list.data,
            vec![ChernData::new(2, a(-3), 3), ChernData::new(2, a(3), 3)]
        );
        assert_eq!(list.completeness, Completeness::Complete);
        let rendered: Vec<_> = list.data.iter().map(|d| pretty(&m.lattice, d)).collect();
        assert_eq!(rendered, ["1 - 3a + 3a^2", "1 + 3a + 3a^2"]);
    }

    #[test]
    fn admissible_s2xs2() {
        let m = preset("S2xS2").unwrap();
        let list = admissible_ac_chern(&m, 8).unwrap();
        assert_eq!(
            list.data,
            vec![
                ChernData::new(2, CohClass::new(vec![-2, -2]), 4),
                ChernData::new(2, CohClass::new(vec![2, 2]), 4)
            ]
        );
        assert_eq!(list.completeness, Completeness::WindowTruncated);
    }

    #[test]
    fn admissible_k3_contains_zero() {
        let m = preset("K3").unwrap();
        let list = admissible_ac_chern(&m, SearchWindow::new(2).with_limit(50)).unwrap();
        assert!(list
            .data
            .contains(&ChernData::new(2, CohClass::zero(22), 24)));
        assert!(list.limit_reached);
    }

    #[test]
    fn gc_admissible_cp2() {
        let m = preset("CP2").unwrap();
        let list = gc_admissible_chern(&m, 8).unwrap();
        let rendered: Vec<_> = list.data.iter().map(|d| pretty(&m.lattice, d)).collect();
        assert_eq!(rendered, ["1 - 6a + 15a^2", "1 - 3a^2", "1 + 6a + 15a^2"]);
        assert_eq!(modulo_conjugation(&list.data).unwrap().len(), 2);
    }

    #[test]
    fn gc_admissible_k3_window_zero() {
        let m = preset("K3").unwrap();
        let list = gc_admissible_chern(&m, 0).unwrap();
        assert_eq!(list.data, vec![ChernData::new(4, CohClass::zero(22), 48)]);
    }

    #[test]
    fn pretty_variants() {
        let bar = IntersectionLattice::diagonal(&[-1]);
        assert_eq!(pretty(&bar, &ChernData::new(2, a(1), 3)), "1 + a - 3a^2");
        let u = IntersectionLattice::hyperbolic();
        assert_eq!(
            pretty(&u, &ChernData::new(2, CohClass::new(vec![2, -1]), 4)),
            "1 + 2a - b + 4[M]"
        );
        let big = IntersectionLattice::diagonal(&[1, -1, -1]);
        assert_eq!(
            pretty(&big, &ChernData::new(2, CohClass::new(vec![3, -1, 1]), 5)),
            "1 + (3, -1, 1) + 5[M]"
        );
        assert_eq!(pretty(&big, &ChernData::unit(3)), "1");
        let l = IntersectionLattice::diagonal(&[1]);
        assert_eq!(pretty_class(&l, &a(-3)), "-3a");
        assert_eq!(pretty_class(&l, &a(0)), "0");
        assert_eq!(pretty_class(&u, &CohClass::new(vec![-1, 2])), "-a + 2b");
        assert_eq!(
            pretty_class(&big, &CohClass::new(vec![1, 2, 3])),
            "(1, 2, 3)"
        );
    }
}
