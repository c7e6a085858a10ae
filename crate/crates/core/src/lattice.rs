//! Integral symmetric bilinear forms and degree-2 cohomology classes.
//!
//! A lattice is stored as a dense Gram matrix with `i64` entries. Every value
//! derived from it (pairings, pivots, determinants) is computed exactly:
//! pairings take an `i128` fast path and fall back to [`BigInt`] when a
//! checked operation would overflow, and the inertia computation runs over
//! [`BigRational`].

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coordinate vector of a class in `H²(M;ℤ)/Tor` with respect to a
/// fixed lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohClass(Vec<i64>);

impl CohClass {
    pub fn new(coords: Vec<i64>) -> Self {
        CohClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        CohClass(vec![0; rank])
    }

    /// The `i`-th standard basis vector of a rank-`rank` lattice.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        CohClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }

    fn check_len(&self, other: &CohClass) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CohClass) -> Result<CohClass> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("class addition")))
            .collect::<Result<Vec<_>>>()
            .map(CohClass)
    }

    pub fn checked_sub(&self, other: &CohClass) -> Result<CohClass> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<CohClass> {
        self.checked_scale(-1)
    }

    pub fn checked_scale(&self, k: i64) -> Result<CohClass> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("class scaling")))
            .collect::<Result<Vec<_>>>()
            .map(CohClass)
    }

    /// Coordinatewise halving; `None` if some coordinate is odd.
    pub fn halve(&self) -> Option<CohClass> {
        if self.0.iter().any(|c| c % 2 != 0) {
            return None;
        }
        Some(CohClass(self.0.iter().map(|c| c / 2).collect()))
    }

    /// gcd of the coordinates (0 for the zero class).
    pub fn content(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |g, &c| num_integer::gcd(g, c.unsigned_abs()))
    }

    /// Coordinates reduced into `{0, 1}`.
    pub fn mod2(&self) -> Vec<u8> {
        self.0.iter().map(|c| (c.rem_euclid(2)) as u8).collect()
    }

    /// True iff `self ≡ other (mod 2)` coordinatewise.
    pub fn congruent_mod2(&self, other: &CohClass) -> bool {
        self.len() == other.len() && self.mod2() == other.mod2()
    }
}

impl Index<usize> for CohClass {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for CohClass {
    fn from(v: Vec<i64>) -> Self {
        CohClass(v)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Counts of positive and negative eigenvalues of a nondegenerate form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureData {
    pub positive: usize,
    pub negative: usize,
}

impl SignatureData {
    pub fn sigma(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    pub fn is_definite(&self) -> bool {
        self.positive == 0 || self.negative == 0
    }
}

/// Sign counts and determinant of a (possibly degenerate) symmetric form.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Inertia {
    positive: usize,
    negative: usize,
    zero: usize,
    determinant: BigInt,
}

/// A symmetric integral bilinear form on `ℤ^rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<i64>>,
    inertia: Inertia,
}

impl IntersectionLattice {
    /// Builds a lattice from a Gram matrix. The matrix must be square and
    /// symmetric; degeneracy is detected but only reported by the operations
    /// that need a nondegenerate form.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let rank = gram.len();
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    rank,
                });
            }
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let inertia = inertia(&gram);
        Ok(IntersectionLattice { gram, inertia })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut gram = vec![vec![0; n]; n];
        for (i, &d) in entries.iter().enumerate() {
            gram[i][i] = d;
        }
        Self::new(gram).expect("diagonal matrices are symmetric")
    }

    /// The hyperbolic plane `U = [[0,1],[1,0]]`.
    pub fn hyperbolic() -> Self {
        Self::new(vec![vec![0, 1], vec![1, 0]]).expect("U is symmetric")
    }

    /// The E8 lattice (Cartan matrix of the E8 root system).
    pub fn e8() -> Self {
        // Bourbaki labelling: chain 1-3-4-5-6-7-8 with node 2 attached to 4.
        const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut gram = vec![vec![0; 8]; 8];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &EDGES {
            gram[a][b] = -1;
            gram[b][a] = -1;
        }
        Self::new(gram).expect("E8 Cartan matrix is symmetric")
    }

    /// The form with every entry negated.
    pub fn negated(&self) -> Self {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| -x).collect())
            .collect();
        Self::new(gram).expect("negation preserves symmetry")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn determinant(&self) -> &BigInt {
        &self.inertia.determinant
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.inertia.zero == 0
    }

    pub fn is_unimodular(&self) -> bool {
        self.inertia.determinant.abs().is_one()
    }

    /// True for nondegenerate forms with all eigenvalues of one sign
    /// (including the rank-0 form).
    pub fn is_definite(&self) -> bool {
        self.is_nondegenerate() && (self.inertia.positive == 0 || self.inertia.negative == 0)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.is_nondegenerate() && self.inertia.negative == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.is_nondegenerate() && self.inertia.positive == 0
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| i == j || self.gram[i][j] == 0))
    }

    /// True iff every diagonal entry is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub(crate) fn check_class(&self, x: &CohClass) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `xᵀ · gram · y`, exact.
    pub fn pair(&self, x: &CohClass, y: &CohClass) -> Result<BigInt> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(pair_unchecked(&self.gram, x.coords(), y.coords()))
    }

    pub fn square(&self, x: &CohClass) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// Eigenvalue sign counts via exact symmetric elimination (Sylvester's
    /// law of inertia).
    pub fn signature(&self) -> Result<SignatureData> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(SignatureData {
            positive: self.inertia.positive,
            negative: self.inertia.negative,
        })
    }

    /// True iff `pair(w, y) ≡ pair(y, y) (mod 2)` for every `y`.
    ///
    /// Both sides are additive mod 2 in `y` (the cross term `2·pair(y, z)`
    /// vanishes), so checking the basis vectors is enough: the condition
    /// reduces to `Σ_j gram[i][j]·w_j ≡ gram[i][i] (mod 2)` for each `i`.
    pub fn is_characteristic(&self, w: &CohClass) -> Result<bool> {
        self.check_class(w)?;
        Ok((0..self.rank()).all(|i| {
            let row_parity = self.gram[i]
                .iter()
                .zip(w.iter())
                .fold(0i64, |acc, (g, x)| (acc + (g & 1) * (x & 1)) & 1);
            row_parity == (self.gram[i][i] & 1)
        }))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntersectionLattice) -> IntersectionLattice {
        let (m, n) = (self.rank(), other.rank());
        let mut gram = vec![vec![0; m + n]; m + n];
        for i in 0..m {
            gram[i][..m].copy_from_slice(&self.gram[i]);
        }
        for i in 0..n {
            gram[m + i][m..].copy_from_slice(&other.gram[i]);
        }
        IntersectionLattice::new(gram).expect("block sum of symmetric matrices is symmetric")
    }

    /// `gcd{pair(x, e_i)}` over the basis; 0 for classes orthogonal to
    /// everything.
    pub fn divisibility(&self, x: &CohClass) -> Result<BigInt> {
        self.check_class(x)?;
        let mut g = BigInt::zero();
        for i in 0..self.rank() {
            let p = pair_unchecked(
                &self.gram,
                x.coords(),
                CohClass::basis(self.rank(), i).coords(),
            );
            g = num_integer::Integer::gcd(&g, &p);
        }
        Ok(g)
    }

    /// `Tᵀ · gram · T` for a square integer matrix `T`.
    pub fn transform(&self, t: &[Vec<i64>]) -> Result<IntersectionLattice> {
        let n = self.rank();
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.len(),
            });
        }
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            let col_i: Vec<i64> = (0..n).map(|r| t[r][i]).collect();
            for j in i..n {
                let col_j: Vec<i64> = (0..n).map(|r| t[r][j]).collect();
                let v = pair_unchecked(&self.gram, &col_i, &col_j)
                    .to_i64()
                    .ok_or(Error::Overflow("basis change"))?;
                gram[i][j] = v;
                gram[j][i] = v;
            }
        }
        IntersectionLattice::new(gram)
    }

    /// Determinant of the principal minor obtained by deleting row and
    /// column `i`.
    pub(crate) fn principal_minor_without(&self, i: usize) -> BigInt {
        let m: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != i)
                    .map(|(_, &x)| BigInt::from(x))
                    .collect()
            })
            .collect();
        bareiss_determinant(m)
    }
}

pub(crate) fn pair_unchecked(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> BigInt {
    match pair_i128(gram, x, y) {
        Some(v) => BigInt::from(v),
        None => pair_big(gram, x, y),
    }
}

pub(crate) fn pair_i128(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (i, row) in gram.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let mut inner: i128 = 0;
        for (j, &g) in row.iter().enumerate() {
            if g != 0 && y[j] != 0 {
                inner = inner.checked_add(g as i128 * y[j] as i128)?;
            }
        }
        acc = acc.checked_add(inner.checked_mul(x[i] as i128)?)?;
    }
    Some(acc)
}

fn pair_big(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, row) in gram.iter().enumerate() {
        let mut inner = BigInt::zero();
        for (j, &g) in row.iter().enumerate() {
            inner += BigInt::from(g) * BigInt::from(y[j]);
        }
        acc += inner * BigInt::from(x[i]);
    }
    acc
}

/// Symmetric Gaussian elimination by congruences over ℚ.
///
/// Each step either swaps a nonzero diagonal entry into pivot position or,
/// when the remaining diagonal is zero, adds row/column `j` to row/column `i`
/// to create the pivot `2·a_ij`. Both operations have determinant ±1, so the
/// product of the pivots is the determinant.
fn inertia(gram: &[Vec<i64>]) -> Inertia {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let (mut positive, mut negative) = (0, 0);
    let mut det = BigRational::one();

    for k in 0..n {
        if let Some(p) = (k..n).find(|&p| !a[p][p].is_zero()) {
            sym_swap(&mut a, p, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            sym_swap(&mut a, i, k);
        } else {
            return Inertia {
                positive,
                negative,
                zero: n - k,
                determinant: BigInt::zero(),
            };
        }

        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            positive += 1;
        } else {
            negative += 1;
        }
        det *= &pivot;
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in (k + 1)..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        for i in (k + 1)..n {
            a[i][k] = BigRational::zero();
            a[k][i] = BigRational::zero();
        }
    }
    debug_assert!(det.is_integer());
    Inertia {
        positive,
        negative,
        zero: 0,
        determinant: det.to_integer(),
    }
}

fn sym_swap<T>(a: &mut [Vec<T>], p: usize, k: usize) {
    if p == k {
        return;
    }
    a.swap(p, k);
    for row in a.iter_mut() {
        row.swap(p, k);
    }
}

/// Fraction-free determinant.
pub(crate) fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
