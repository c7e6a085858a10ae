//! Integer solutions of `pair(c, c) = N` with `c ≡ w (mod 2)`.
//!
//! Definite forms have finitely many solutions and are enumerated completely
//! with a fraction-free Fincke–Pohst search. Indefinite forms generally have
//! infinitely many; they are searched inside the box `|c_i| ≤ window` and the
//! result is flagged as window-truncated.
//!
//! In both searches the parity constraint is built in by writing
//! `c = w + 2y` coordinatewise, so only the right coset is visited.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{pair_i128, pair_unchecked, CohClass, IntersectionLattice};

/// Largest lattice rank accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_RANK: usize = 6;
/// Largest window accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_WINDOW: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationProblem {
    lattice: IntersectionLattice,
    target: BigInt,
    parity: CohClass,
    window: u64,
    limit: Option<usize>,
}

impl EnumerationProblem {
    pub fn new(
        lattice: IntersectionLattice,
        target: impl Into<BigInt>,
        parity: CohClass,
        window: u64,
    ) -> Result<Self> {
        lattice.check_class(&parity)?;
        Ok(EnumerationProblem {
            lattice,
            target: target.into(),
            parity,
            window,
            limit: None,
        })
    }

    /// Caps the number of solutions collected by the windowed search on
    /// indefinite forms. Definite forms are always enumerated completely.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn target(&self) -> &BigInt {
        &self.target
    }

    pub fn parity(&self) -> &CohClass {
        &self.parity
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn limit(&self) -> Option<usize> {
        self.limit
    }

    /// True iff `c` satisfies both constraints.
    pub fn is_solution(&self, c: &CohClass) -> bool {
        c.len() == self.lattice.rank()
            && c.congruent_mod2(&self.parity)
            && pair_unchecked(self.lattice.gram(), c.coords(), c.coords()) == self.target
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// Every solution is listed.
    Complete,
    /// Only solutions inside the coordinate window are listed.
    WindowTruncated,
}

/// A family `base + 2t·direction` (t ∈ ℤ) of solutions found inside the
/// window. Evidence that the windowed list is not exhaustive; not a proof of
/// anything about almost complex structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinitudeHint {
    pub base: CohClass,
    pub direction: CohClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    solutions: Vec<CohClass>,
    completeness: Completeness,
    infinitude_hint: Option<InfinitudeHint>,
    limit_reached: bool,
}

impl EnumerationResult {
    fn new(
        problem: &EnumerationProblem,
        mut solutions: Vec<CohClass>,
        completeness: Completeness,
        limit_reached: bool,
    ) -> Self {
        for c in &solutions {
            assert!(
                problem.is_solution(c),
                "enumeration produced a non-solution {c}"
            );
        }
        solutions.sort();
        solutions.dedup();
        let infinitude_hint = match completeness {
            Completeness::Complete => None,
            Completeness::WindowTruncated => find_isotropic_family(problem, &solutions),
        };
        EnumerationResult {
            solutions,
            completeness,
            infinitude_hint,
            limit_reached,
        }
    }

    /// Solutions in lexicographic order.
    pub fn solutions(&self) -> &[CohClass] {
        &self.solutions
    }

    pub fn into_solutions(self) -> Vec<CohClass> {
        self.solutions
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn infinitude_hint(&self) -> Option<&InfinitudeHint> {
        self.infinitude_hint.as_ref()
    }

    /// True when the windowed search stopped at the problem's solution limit.
    pub fn limit_reached(&self) -> bool {
        self.limit_reached
    }
}

pub fn enumerate_solutions(p: &EnumerationProblem) -> Result<EnumerationResult> {
    let lattice = &p.lattice;
    if !lattice.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if lattice.is_definite() {
        let solutions = fincke_pohst(p)?;
        Ok(EnumerationResult::new(
            p,
            solutions,
            Completeness::Complete,
            false,
        ))
    } else {
        let (solutions, limit_reached) = windowed(p)?;
        Ok(EnumerationResult::new(
            p,
            solutions,
            Completeness::WindowTruncated,
            limit_reached,
        ))
    }
}

/// Per-coordinate bound on the solutions of a definite problem.
///
/// For diagonal forms this is `⌊√|N|⌋`: every diagonal entry has absolute
/// value at least 1, so `γ_i² ≤ Σ|d_j|γ_j² = |N|`. For other definite forms
/// the bound is `max_i ⌊√(|N|·(G⁻¹)_ii)⌋`, the extent of the ellipsoid
/// `xᵀGx ≤ |N|` along each axis (with `G` sign-normalised to be positive).
pub fn ball_bound(p: &EnumerationProblem) -> Result<u64> {
    let lattice = &p.lattice;
    if !lattice.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    if !lattice.is_definite() {
        return Err(Error::UnsupportedForm);
    }
    let n_abs = p.target.abs();
    let bound = if lattice.is_diagonal() {
        n_abs.sqrt()
    } else {
        let positive = if lattice.is_positive_definite() {
            lattice.clone()
        } else {
            lattice.negated()
        };
        let det = positive.determinant().clone();
        (0..positive.rank())
            .map(|i| {
                (&n_abs * positive.principal_minor_without(i))
                    .div_floor(&det)
                    .sqrt()
            })
            .max()
            .unwrap_or_else(BigInt::zero)
    };
    bound.to_u64().ok_or(Error::Overflow("ball bound"))
}

/// Exhaustive scan of `[-window, window]^rank`. Test oracle only.
pub fn brute_force_oracle(p: &EnumerationProblem) -> Result<Vec<CohClass>> {
    let m = p.lattice.rank();
    if m > ORACLE_MAX_RANK || p.window > ORACLE_MAX_WINDOW {
        return Err(Error::OracleRefused {
            rank: m,
            window: p.window,
            max_rank: ORACLE_MAX_RANK,
            max_window: ORACLE_MAX_WINDOW,
        });
    }
    let w = p.window as i64;
    // Points of the wrong parity are skipped: each coordinate runs over
    // [-w, w] in steps of 2 from its smallest admissible value.
    let start: Vec<i64> = p
        .parity
        .iter()
        .map(|&b| {
            if (b - w).rem_euclid(2) == 0 {
                -w
            } else {
                -w + 1
            }
        })
        .collect();
    if start.iter().any(|&s| s > w) {
        return Ok(Vec::new());
    }
    let target = p.target.to_i128();
    let gram = p.lattice.gram();
    let mut x = start.clone();
    let mut out = Vec::new();
    loop {
        let hit = match (target, pair_i128(gram, &x, &x)) {
            (Some(t), Some(v)) => t == v,
            _ => pair_unchecked(gram, &x, &x) == p.target,
        };
        if hit {
            out.push(CohClass::new(x.clone()));
        }
        // odometer, last coordinate fastest: yields lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] + 2 <= w {
                x[i] += 2;
                break;
            }
            x[i] = start[i];
        }
    }
}

// Fincke–Pohst on definite forms.
//
// Fraction-free elimination of the positive form G gives an upper-triangular
// integer matrix U with U_kk = D_k, the k-th leading principal minor, and
//
//     xᵀGx = Σ_k (Ux)_k² / (D_{k-1}·D_k),   D_0 = 1.
//
// Coordinates are fixed from the last one down; (Ux)_k only involves x_k..x_m,
// so each level gets an exact integer interval for x_k. Scaling by
// M = lcm_k(D_{k-1}·D_k) keeps the remaining budget integral.
fn fincke_pohst(p: &EnumerationProblem) -> Result<Vec<CohClass>> {
    let m = p.lattice.rank();
    let (gram, target): (Vec<Vec<BigInt>>, BigInt) = if p.lattice.is_positive_definite() {
        (to_big(p.lattice.gram()), p.target.clone())
    } else {
        (to_big(p.lattice.negated().gram()), -&p.target)
    };
    if target.is_negative() {
        return Ok(Vec::new());
    }
    if m == 0 {
        return Ok(if target.is_zero() {
            vec![CohClass::zero(0)]
        } else {
            Vec::new()
        });
    }

    let u = bareiss_upper(gram);
    let mut weights = Vec::with_capacity(m);
    let mut scale = BigInt::one();
    for k in 0..m {
        let prev = if k == 0 {
            BigInt::one()
        } else {
            u[k - 1][k - 1].clone()
        };
        let denom = prev * &u[k][k];
        scale = scale.lcm(&denom);
        weights.push(denom);
    }
    let weights: Vec<BigInt> = weights.iter().map(|d| &scale / d).collect();

    let search = FinckePohst {
        u: &u,
        weights: &weights,
        parity: p.parity.mod2(),
    };
    let mut x = vec![BigInt::zero(); m];
    let mut out = Vec::new();
    search.descend(m, scale * target, &mut x, &mut out)?;
    Ok(out)
}

struct FinckePohst<'a> {
    u: &'a [Vec<BigInt>],
    weights: &'a [BigInt],
    parity: Vec<u8>,
}

impl FinckePohst<'_> {
    /// Fixes coordinate `level - 1` given coordinates `level..m`.
    fn descend(
        &self,
        level: usize,
        budget: BigInt,
        x: &mut Vec<BigInt>,
        out: &mut Vec<CohClass>,
    ) -> Result<()> {
        if level == 0 {
            if budget.is_zero() {
                let coords = x
                    .iter()
                    .map(|v| v.to_i64().ok_or(Error::Overflow("solution coordinate")))
                    .collect::<Result<Vec<_>>>()?;
                out.push(CohClass::new(coords));
            }
            return Ok(());
        }
        let k = level - 1;
        let row = &self.u[k];
        let shift: BigInt = ((k + 1)..x.len()).map(|i| &row[i] * &x[i]).sum();
        let radius = (&budget / &self.weights[k]).sqrt();
        // -radius <= U_kk·x_k + shift <= radius, with x_k = w_k + 2y
        let lo = ceil_div(&(-&radius - &shift), &row[k]);
        let hi = (&radius - &shift).div_floor(&row[k]);
        let w = BigInt::from(self.parity[k]);
        let y_lo = ceil_div(&(lo - &w), &BigInt::from(2));
        let y_hi = (hi - &w).div_floor(&BigInt::from(2));
        let mut y = y_lo;
        while y <= y_hi {
            let xk = &w + BigInt::from(2) * &y;
            let level_value = &row[k] * &xk + &shift;
            let rest = &budget - &self.weights[k] * &level_value * &level_value;
            x[k] = xk;
            self.descend(k, rest, x, out)?;
            y += 1;
        }
        x[k] = BigInt::zero();
        Ok(())
    }
}

fn to_big(gram: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    gram.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Fraction-free (Bareiss) elimination without pivoting. Requires all
/// leading principal minors to be nonzero, which holds for definite forms.
fn bareiss_upper(mut a: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        debug_assert!(!a[k][k].is_zero());
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    a
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

// Windowed search on indefinite forms.
//
// Solutions are collected shell by shell (max |c_i| = 0, 1, ..., window), so
// a solution limit keeps the smallest classes. Inside a shell a depth-first
// search over coordinates prunes with interval bounds on the part of the
// form still to be fixed.

/// Integer type the windowed search runs in: `i128` when an a-priori bound
/// on every intermediate value fits, [`BigInt`] otherwise.
trait SearchInt: Clone + Ord + Integer + Signed + ToPrimitive + From<i64> {}
impl<T: Clone + Ord + Integer + Signed + ToPrimitive + From<i64>> SearchInt for T {}

fn windowed(p: &EnumerationProblem) -> Result<(Vec<CohClass>, bool)> {
    let abs_sum: BigInt = p
        .lattice
        .gram()
        .iter()
        .flatten()
        .map(|&g| BigInt::from(g).abs())
        .sum();
    let w = BigInt::from(p.window);
    let bound = (abs_sum + 1u32) * &w * &w * 8u32 + p.target.abs();
    let fits_i128 = bound.bits() < 120;
    let window = i64::try_from(p.window).map_err(|_| Error::Overflow("window"))?;
    if fits_i128 {
        let target = p.target.to_i128().expect("bounded by the i128 check");
        WindowSearch::<i128>::new(p, target, window).run()
    } else {
        WindowSearch::<BigInt>::new(p, p.target.clone(), window).run()
    }
}

struct WindowSearch<T> {
    gram: Vec<Vec<T>>,
    parity: Vec<i64>,
    target: T,
    window: i64,
    limit: Option<usize>,
    /// Σ_{k ≤ i < j} 2|g_ij| for each k.
    cross_abs: Vec<T>,
    /// Whether some coordinate in k.. has the parity of the current shell.
    can_hit: Vec<bool>,
    shell: i64,
    out: Vec<CohClass>,
}

impl<T: SearchInt> WindowSearch<T> {
    fn new(p: &EnumerationProblem, target: T, window: i64) -> Self {
        let raw = p.lattice.gram();
        let m = raw.len();
        let gram: Vec<Vec<T>> = raw
            .iter()
            .map(|r| r.iter().map(|&g| T::from(g)).collect())
            .collect();
        let mut cross_abs = vec![T::zero(); m + 1];
        for k in (0..m).rev() {
            let mut row = T::zero();
            for j in (k + 1)..m {
                row = row + gram[k][j].abs();
            }
            cross_abs[k] = cross_abs[k + 1].clone() + row.clone() + row;
        }
        WindowSearch {
            gram,
            parity: p.parity.iter().map(|c| c.rem_euclid(2)).collect(),
            target,
            window,
            limit: p.limit,
            cross_abs,
            can_hit: vec![false; m + 1],
            shell: 0,
            out: Vec::new(),
        }
    }

    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn run(mut self) -> Result<(Vec<CohClass>, bool)> {
        let m = self.gram.len();
        for shell in 0..=self.window {
            if self.full() {
                break;
            }
            self.shell = shell;
            for k in (0..m).rev() {
                self.can_hit[k] = self.can_hit[k + 1] || self.parity[k] == shell.rem_euclid(2);
            }
            let mut x = vec![0i64; m];
            let mut linear = vec![T::zero(); m];
            self.descend(0, T::zero(), shell == 0, &mut x, &mut linear)?;
        }
        let limit_reached = self.full();
        if let Some(l) = self.limit {
            self.out.truncate(l);
        }
        Ok((self.out, limit_reached))
    }

    /// Smallest and largest values of `a·v² + 2b·v` over the allowed values
    /// of a coordinate with the given parity in the current shell.
    fn coordinate_range(&self, a: &T, b: &T, parity: i64) -> Option<(T, T)> {
        let s = self.shell;
        let top = if s.rem_euclid(2) == parity { s } else { s - 1 };
        if top < 0 {
            return None;
        }
        let f = |v: i64| -> T {
            let v = T::from(v);
            a.clone() * v.clone() * v.clone() + (b.clone() + b.clone()) * v
        };
        let mut candidates = vec![-top, top];
        if !a.is_zero() {
            // allowed values bracketing the vertex -b/a
            let vertex = (-b.clone()).div_floor(a);
            let clamp = T::from(top);
            let v = vertex.max(-clamp.clone()).min(clamp);
            let v = v.to_i64().expect("clamped to the window");
            let below = if (v - parity).rem_euclid(2) == 0 {
                v
            } else {
                v - 1
            };
            for c in [below, below + 2] {
                if (-top..=top).contains(&c) {
                    candidates.push(c);
                }
            }
        }
        let values: Vec<T> = candidates.into_iter().map(f).collect();
        let lo = values.iter().min().cloned()?;
        let hi = values.iter().max().cloned()?;
        Some((lo, hi))
    }

    fn descend(
        &mut self,
        k: usize,
        partial: T,
        hit: bool,
        x: &mut Vec<i64>,
        linear: &mut Vec<T>,
    ) -> Result<()> {
        if self.full() {
            return Ok(());
        }
        let m = self.gram.len();
        if k == m {
            if hit && partial == self.target {
                self.out.push(CohClass::new(x.clone()));
            }
            return Ok(());
        }
        if !hit && !self.can_hit[k] {
            return Ok(());
        }

        // interval bound for the coordinates k..m
        let s2 = T::from(self.shell) * T::from(self.shell);
        let mut lo = -(self.cross_abs[k].clone() * s2.clone());
        let mut hi = self.cross_abs[k].clone() * s2;
        for i in k..m {
            match self.coordinate_range(&self.gram[i][i], &linear[i], self.parity[i]) {
                Some((a, b)) => {
                    lo = lo + a;
                    hi = hi + b;
                }
                None => return Ok(()),
            }
        }
        let need = self.target.clone() - partial.clone();
        if need < lo || need > hi {
            return Ok(());
        }

        let s = self.shell;
        let par = self.parity[k];
        let start = if (-s - par).rem_euclid(2) == 0 {
            -s
        } else {
            -s + 1
        };
        let last = k + 1 == m;
        let mut v = start;
        while v <= s {
            if last && !hit && v.abs() != s {
                v += 2;
                continue;
            }
            let tv = T::from(v);
            let gkk = self.gram[k][k].clone();
            let step = gkk * tv.clone() * tv.clone()
                + (linear[k].clone() + linear[k].clone()) * tv.clone();
            for i in (k + 1)..m {
                linear[i] = linear[i].clone() + self.gram[i][k].clone() * tv.clone();
            }
            x[k] = v;
            self.descend(
                k + 1,
                partial.clone() + step,
                hit || v.abs() == s,
                x,
                linear,
            )?;
            for i in (k + 1)..m {
                linear[i] = linear[i].clone() - self.gram[i][k].clone() * tv.clone();
            }
            if self.full() {
                break;
            }
            v += 2;
        }
        x[k] = 0;
        Ok(())
    }
}

/// Looks for a family `base + 2t·d` of solutions with `d` isotropic.
///
/// For `N = 0` every nonzero solution `c` gives one (`(2t+1)·c`). Otherwise
/// two solutions `a`, `b` whose difference `d` has square 0 work, since then
/// `pair(a, d) = 0` as well.
fn find_isotropic_family(p: &EnumerationProblem, solutions: &[CohClass]) -> Option<InfinitudeHint> {
    const PAIR_SCAN: usize = 64;
    if p.target.is_zero() {
        return solutions
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| InfinitudeHint {
                base: c.clone(),
                direction: c.clone(),
            });
    }
    let head = &solutions[..solutions.len().min(PAIR_SCAN)];
    for (i, a) in head.iter().enumerate() {
        for b in &head[i + 1..] {
            let Ok(d) = b.checked_sub(a) else { continue };
            if pair_unchecked(p.lattice.gram(), d.coords(), d.coords()).is_zero() {
                return Some(InfinitudeHint {
                    base: a.clone(),
                    direction: d,
                });
            }
        }
    }
    None
}
