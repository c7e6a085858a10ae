//! Topological models of closed oriented 4-manifolds.
//!
//! A model records what the Chern-class computations need: the intersection
//! lattice on `H²(M;ℤ)/Tor`, the Euler characteristic, the signature, an
//! integral lift of `w₂` and, for elliptic surfaces, the class of a regular
//! fiber. Torsion in `H²` is not modelled.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CohClass, IntersectionLattice};

/// Largest lattice rank accepted from presets and manifold-spec files.
pub const MAX_RANK: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourManifoldModel {
    pub name: String,
    pub lattice: IntersectionLattice,
    pub euler: i64,
    pub sigma: i64,
    /// Integral lift of `w₂`; only its reduction mod 2 matters.
    pub w2: CohClass,
    /// Poincaré dual of a regular fiber, for elliptic surfaces.
    pub fiber: Option<CohClass>,
    /// `c₁` of a reference complex structure.
    pub complex_c1: Option<CohClass>,
    /// Presets are simply connected, so `χ = 2 + b₂`. Models read from files
    /// only need `χ ≤ 2 + b₂` with the same parity.
    pub simply_connected: bool,
}

impl FourManifoldModel {
    /// Builds a model, computing `σ` from the lattice.
    pub fn new(
        name: impl Into<String>,
        lattice: IntersectionLattice,
        euler: i64,
        w2: CohClass,
    ) -> Result<Self> {
        lattice.check_class(&w2)?;
        let sigma = lattice.signature()?.sigma();
        Ok(FourManifoldModel {
            name: name.into(),
            lattice,
            euler,
            sigma,
            w2,
            fiber: None,
            complex_c1: None,
            simply_connected: false,
        })
    }

    pub fn with_fiber(mut self, fiber: CohClass) -> Self {
        self.fiber = Some(fiber);
        self
    }

    pub fn with_complex_c1(mut self, c1: CohClass) -> Self {
        self.complex_c1 = Some(c1);
        self
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// `3σ + 2χ`, the value `c₁²[M]` of every almost complex structure.
    pub fn ac_target(&self) -> BigInt {
        BigInt::from(self.sigma) * 3 + BigInt::from(self.euler) * 2
    }

    /// Fails with [`Error::InvalidModel`] unless every required check passes.
    pub fn checked(self) -> Result<Self> {
        let report = validate(&self);
        if report.is_valid() {
            Ok(self)
        } else {
            let failures = report
                .failures()
                .map(|c| c.name.as_str())
                .collect::<Vec<_>>()
                .join(", ");
            Err(Error::InvalidModel {
                name: self.name,
                failures,
            })
        }
    }
}

/// Named manifolds with explicit models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Cp2,
    Cp2Bar,
    S2xS2,
    K3,
    /// The simply-connected elliptic surface `E(n)`, `n ≥ 1`.
    Elliptic(u32),
    /// `m ℂP² # n ℂP²-bar`, `m + n ≥ 1`.
    Blowups {
        m: u32,
        n: u32,
    },
}

impl Preset {
    pub fn model(self) -> Result<FourManifoldModel> {
        let model = match self {
            Preset::Cp2 => blowups("CP2", 1, 0)?,
            Preset::Cp2Bar => blowups("CP2bar", 0, 1)?,
            Preset::S2xS2 => {
                let mut m = FourManifoldModel::new(
                    "S2xS2",
                    IntersectionLattice::hyperbolic(),
                    4,
                    CohClass::zero(2),
                )?
                .with_complex_c1(CohClass::new(vec![2, 2]));
                m.simply_connected = true;
                m
            }
            Preset::K3 => {
                let mut m = elliptic(2)?;
                m.name = "K3".into();
                m
            }
            Preset::Elliptic(n) => elliptic(n)?,
            Preset::Blowups { m, n } => {
                let name = match (m, n) {
                    (m, 0) => format!("{m}CP2"),
                    (0, n) => format!("{n}CP2bar"),
                    (m, n) => format!("{m}CP2#{n}CP2bar"),
                };
                blowups(&name, m, n)?
            }
        };
        Ok(model)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Cp2 => write!(f, "CP2"),
            Preset::Cp2Bar => write!(f, "CP2bar"),
            Preset::S2xS2 => write!(f, "S2xS2"),
            Preset::K3 => write!(f, "K3"),
            Preset::Elliptic(n) => write!(f, "E({n})"),
            Preset::Blowups { m, n } => write!(f, "mCP2_nCP2bar({m},{n})"),
        }
    }
}

/// Parses a single preset atom: `CP2`, `CP2bar`, `S2xS2`, `K3`, `E(n)`,
/// `En`, `mCP2_nCP2bar(m,n)`, `<m>CP2` or `<n>CP2bar`.
impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownPreset(s.to_string());
        match s {
            "CP2" => return Ok(Preset::Cp2),
            "CP2bar" => return Ok(Preset::Cp2Bar),
            "S2xS2" => return Ok(Preset::S2xS2),
            "K3" => return Ok(Preset::K3),
            _ => {}
        }
        if let Some(args) = s
            .strip_prefix("mCP2_nCP2bar(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let (m, n) = args.split_once(',').ok_or_else(unknown)?;
            let m = parse_count(m.trim(), s)?;
            let n = parse_count(n.trim(), s)?;
            return blowups_preset(m, n);
        }
        if let Some(rest) = s.strip_prefix('E') {
            let digits = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            let n = parse_count(digits, s)?;
            if n == 0 {
                return Err(Error::InvalidParameter("E(n) needs n >= 1".into()));
            }
            if elliptic_rank(n) > MAX_RANK {
                return Err(Error::InvalidParameter(format!(
                    "E({n}) exceeds the maximum rank {MAX_RANK}"
                )));
            }
            return Ok(Preset::Elliptic(n));
        }
        if let Some(count) = s.strip_suffix("CP2bar") {
            return blowups_preset(0, parse_count(count, s)?);
        }
        if let Some(count) = s.strip_suffix("CP2") {
            return blowups_preset(parse_count(count, s)?, 0);
        }
        Err(unknown())
    }
}

fn parse_count(digits: &str, whole: &str) -> Result<u32> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 6 {
        return Err(Error::UnknownPreset(whole.to_string()));
    }
    digits
        .parse()
        .map_err(|_| Error::UnknownPreset(whole.to_string()))
}

fn blowups_preset(m: u32, n: u32) -> Result<Preset> {
    if m + n == 0 {
        return Err(Error::InvalidParameter(
            "mCP2_nCP2bar needs m + n >= 1".into(),
        ));
    }
    if (m + n) as usize > MAX_RANK {
        return Err(Error::InvalidParameter(format!(
            "rank {} exceeds the maximum rank {MAX_RANK}",
            m + n
        )));
    }
    Ok(match (m, n) {
        (1, 0) => Preset::Cp2,
        (0, 1) => Preset::Cp2Bar,
        _ => Preset::Blowups { m, n },
    })
}

fn elliptic_rank(n: u32) -> usize {
    12 * n as usize - 2
}

/// Resolves a manifold name: a preset atom or a `#`-separated connected sum
/// of atoms (`CP2#CP2bar`, `#2CP2`, `3CP2#5CP2bar`, ...).
pub fn preset(name: &str) -> Result<FourManifoldModel> {
    let name = name.trim();
    if !name.contains('#') {
        return name.parse::<Preset>()?.model();
    }
    let parts: Vec<&str> = name.split('#').collect();
    let parts: Vec<&str> = match parts.split_first() {
        // leading '#' as in "#2CP2"
        Some((&"", rest)) => rest.to_vec(),
        _ => parts,
    };
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(Error::UnknownPreset(name.to_string()));
    }
    let mut rank = 0usize;
    let mut models = Vec::with_capacity(parts.len());
    for part in parts {
        let model = part.parse::<Preset>()?.model()?;
        rank += model.rank();
        if rank > MAX_RANK {
            return Err(Error::InvalidParameter(format!(
                "connected sum exceeds the maximum rank {MAX_RANK}"
            )));
        }
        models.push(model);
    }
    let mut iter = models.into_iter();
    let first = iter.next().expect("at least one part");
    let mut sum = iter.fold(first, |acc, m| connected_sum(&acc, &m));
    sum.name = name.to_string();
    Ok(sum)
}

/// `m⟨1⟩ ⊕ n⟨−1⟩`, odd, with the all-ones characteristic vector.
fn blowups(name: &str, m: u32, n: u32) -> Result<FourManifoldModel> {
    let mut diag = vec![1i64; m as usize];
    diag.extend(std::iter::repeat_n(-1, n as usize));
    let rank = diag.len();
    let mut model = FourManifoldModel::new(
        name,
        IntersectionLattice::diagonal(&diag),
        2 + rank as i64,
        CohClass::new(vec![1; rank]),
    )?;
    model.simply_connected = true;
    if (m, n) == (1, 0) {
        model.complex_c1 = Some(CohClass::new(vec![3]));
    }
    Ok(model)
}

/// `E(n)` with `χ = 12n`, `σ = −8n`.
///
/// Odd `n`: `(2n−1)⟨1⟩ ⊕ (10n−1)⟨−1⟩`. The fiber is
/// `3h₁ + … + 3h_n + h_{n+1} + … + h_{2n−1} − e₁ − … − e_{10n−1}`: its square
/// is `9n + (n−1) − (10n−1) = 0`, all coordinates are odd (the fiber of
/// `E(n)` is characteristic for odd `n`) and it is primitive. For `n = 1` it
/// is `3h − e₁ − … − e₉`.
///
/// Even `n`: `(2n−1)U ⊕ n(−E8)` with the hyperbolic summands first; the
/// fiber is the isotropic generator `(1, 0)` of the first `U`.
///
/// In both cases `c₁ = −K = (2 − n)·F`.
fn elliptic(n: u32) -> Result<FourManifoldModel> {
    if n == 0 {
        return Err(Error::InvalidParameter("E(n) needs n >= 1".into()));
    }
    if elliptic_rank(n) > MAX_RANK {
        return Err(Error::InvalidParameter(format!(
            "E({n}) exceeds the maximum rank {MAX_RANK}"
        )));
    }
    let n_us = n as usize;
    let (lattice, w2, fiber) = if n % 2 == 1 {
        let (pos, neg) = (2 * n_us - 1, 10 * n_us - 1);
        let mut diag = vec![1i64; pos];
        diag.extend(std::iter::repeat_n(-1, neg));
        let mut f = vec![3i64; n_us];
        f.extend(std::iter::repeat_n(1, n_us - 1));
        f.extend(std::iter::repeat_n(-1, neg));
        (
            IntersectionLattice::diagonal(&diag),
            CohClass::new(vec![1; pos + neg]),
            CohClass::new(f),
        )
    } else {
        let u = IntersectionLattice::hyperbolic();
        let minus_e8 = IntersectionLattice::e8().negated();
        let mut lattice = u.clone();
        for _ in 1..(2 * n_us - 1) {
            lattice = lattice.direct_sum(&u);
        }
        for _ in 0..n_us {
            lattice = lattice.direct_sum(&minus_e8);
        }
        let rank = lattice.rank();
        (lattice, CohClass::zero(rank), CohClass::basis(rank, 0))
    };
    let complex_c1 = fiber.checked_scale(2 - n as i64)?;
    let mut model = FourManifoldModel::new(format!("E({n})"), lattice, 12 * n as i64, w2)?
        .with_fiber(fiber)
        .with_complex_c1(complex_c1);
    model.simply_connected = true;
    Ok(model)
}

/// Connected sum: lattices add, `χ = χ_A + χ_B − 2`, `w₂` concatenates.
/// Fiber and reference complex structure are dropped.
pub fn connected_sum(a: &FourManifoldModel, b: &FourManifoldModel) -> FourManifoldModel {
    let mut w2 = a.w2.coords().to_vec();
    w2.extend_from_slice(b.w2.coords());
    FourManifoldModel {
        name: format!("{}#{}", a.name, b.name),
        lattice: a.lattice.direct_sum(&b.lattice),
        euler: a.euler + b.euler - 2,
        sigma: a.sigma + b.sigma,
        w2: CohClass::new(w2),
        fiber: None,
        complex_c1: None,
        simply_connected: a.simply_connected && b.simply_connected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// Part of the model's definition; a failure makes the model invalid.
    Required,
    /// Reported for information only.
    Advisory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub severity: Severity,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub manifold: String,
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Failed required checks.
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| !c.passed && c.severity == Severity::Required)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.push_with(name, passed, Severity::Required, detail);
    }

    fn push_with(&mut self, name: &str, passed: bool, severity: Severity, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            severity,
            detail,
        });
    }
}

/// Runs every model invariant and reports each one.
pub fn validate(m: &FourManifoldModel) -> Diagnostics {
    let mut d = Diagnostics {
        manifold: m.name.clone(),
        checks: Vec::new(),
    };
    let l = &m.lattice;
    let rank = l.rank();

    let nondegenerate = l.is_nondegenerate();
    d.push(
        "nondegenerate",
        nondegenerate,
        format!("determinant {}", l.determinant()),
    );
    let unimodular = l.is_unimodular();
    d.push(
        "unimodular",
        unimodular,
        format!("determinant {}", l.determinant()),
    );

    match l.signature() {
        Ok(sig) => d.push(
            "signature",
            sig.sigma() == m.sigma,
            format!(
                "recomputed sigma {} (b+ = {}, b- = {}), model says {}",
                sig.sigma(),
                sig.positive,
                sig.negative,
                m.sigma
            ),
        ),
        Err(_) => d.push("signature", false, "form is degenerate".into()),
    }

    let euler_ok = if m.simply_connected {
        m.euler == 2 + rank as i64
    } else {
        m.euler <= 2 + rank as i64 && (m.euler - rank as i64).is_even()
    };
    d.push(
        "euler",
        euler_ok,
        if m.simply_connected {
            format!("chi = {}, expected 2 + b2 = {}", m.euler, 2 + rank)
        } else {
            format!(
                "chi = {}, needs chi <= 2 + b2 = {} with chi = b2 (mod 2)",
                m.euler,
                2 + rank
            )
        },
    );

    let w2_char = l.is_characteristic(&m.w2);
    d.push(
        "w2-characteristic",
        matches!(w2_char, Ok(true)),
        match &w2_char {
            Ok(_) => format!("w2 = {}", m.w2),
            Err(e) => e.to_string(),
        },
    );

    if unimodular && matches!(w2_char, Ok(true)) {
        let w2sq = l.square(&m.w2).expect("length checked");
        let ok = (&w2sq - BigInt::from(m.sigma))
            .mod_floor(&BigInt::from(8))
            .is_zero();
        d.push(
            "van-der-blij",
            ok,
            format!(
                "w2.w2 = {w2sq}, sigma = {}, need w2.w2 = sigma (mod 8)",
                m.sigma
            ),
        );
    }

    let target = m.ac_target();
    let ac_ok = (&target - BigInt::from(m.sigma))
        .mod_floor(&BigInt::from(8))
        .is_zero();
    d.push_with(
        "ac-congruence",
        ac_ok,
        Severity::Advisory,
        format!(
            "3sigma + 2chi = {target}; a characteristic c1 with this square needs 3sigma + 2chi = sigma (mod 8)"
        ),
    );

    if let Some(f) = &m.fiber {
        match l.square(f) {
            Ok(sq) => d.push(
                "fiber",
                sq.is_zero() && !f.is_zero(),
                format!("F = {f}, F.F = {sq}"),
            ),
            Err(e) => d.push("fiber", false, e.to_string()),
        }
    }

    if let Some(c1) = &m.complex_c1 {
        let detail;
        let ok = match (l.square(c1), l.is_characteristic(c1)) {
            (Ok(sq), Ok(ch)) => {
                detail = format!(
                    "c1 = {c1}, c1^2 = {sq}, 3sigma + 2chi = {target}, characteristic {ch}"
                );
                sq == target && ch && c1.congruent_mod2(&m.w2)
            }
            (Err(e), _) | (_, Err(e)) => {
                detail = e.to_string();
                false
            }
        };
        d.push("complex-c1", ok, detail);
    }

    d
}
