#![allow(dead_code)]

use gcchern::manifold::preset;
use gcchern::{CohClass, FourManifoldModel, IntersectionLattice};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Product of `steps` random elementary matrices (row additions, swaps and
/// sign changes), hence determinant ±1.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut t: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n < 2 {
        if rng.gen_bool(0.5) {
            t[0][0] = -1;
        }
        return t;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => t.swap(i, j),
            1 => t[i].iter_mut().for_each(|v| *v = -*v),
            _ => {
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                let row_j = t[j].clone();
                for (a, b) in t[i].iter_mut().zip(row_j) {
                    *a += s * b;
                }
            }
        }
    }
    t
}

/// Every symmetric `rank × rank` matrix with entries in `lo..=hi`.
pub fn all_gram_matrices(rank: usize, lo: i64, hi: i64) -> Vec<Vec<Vec<i64>>> {
    let slots: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| (i..rank).map(move |j| (i, j)))
        .collect();
    let width = (hi - lo + 1) as u64;
    let total = width.pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut g = vec![vec![0; rank]; rank];
            for &(i, j) in &slots {
                let v = lo + (code % width) as i64;
                code /= width;
                g[i][j] = v;
                g[j][i] = v;
            }
            g
        })
        .collect()
}

/// Symmetric matrix with the given upper triangle, listed row by row.
pub fn symmetric(rank: usize, upper: &[i64]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; rank]; rank];
    let slots = (0..rank).flat_map(|i| (i..rank).map(move |j| (i, j)));
    for ((i, j), &v) in slots.zip(upper) {
        g[i][j] = v;
        g[j][i] = v;
    }
    g
}

/// All classes with coordinates in `{0, 1}`.
pub fn parity_classes(rank: usize) -> Vec<CohClass> {
    (0..1u32 << rank)
        .map(|bits| CohClass::new((0..rank).map(|i| i64::from(bits >> i & 1)).collect()))
        .collect()
}

/// A characteristic vector with coordinates in `{0, 1}`, found by scanning
/// all of them. Unimodular lattices always have one.
pub fn characteristic_vector(l: &IntersectionLattice) -> Option<CohClass> {
    parity_classes(l.rank()).into_iter().find(|w| {
        (0..l.rank()).all(|i| {
            let e = CohClass::basis(l.rank(), i);
            let p = l.pair(w, &e).unwrap() - l.square(&e).unwrap();
            p % 2 == 0.into()
        })
    })
}

/// Simply connected models with `b₂ ≤ 4`.
pub fn small_presets() -> Vec<FourManifoldModel> {
    let mut names = vec![
        "CP2".to_string(),
        "CP2bar".to_string(),
        "S2xS2".to_string(),
        "S2xS2#CP2".to_string(),
        "S2xS2#2CP2bar".to_string(),
    ];
    for m in 0..=4u32 {
        for n in 0..=(4 - m) {
            if m + n >= 1 {
                names.push(format!("mCP2_nCP2bar({m},{n})"));
            }
        }
    }
    names.iter().map(|n| preset(n).unwrap()).collect()
}

/// `model` rewritten in the basis given by the columns of a random
/// unimodular matrix; `w₂` is recomputed, fiber and complex class dropped.
pub fn scrambled(model: &FourManifoldModel, rng: &mut impl Rng) -> FourManifoldModel {
    let t = random_unimodular(rng, model.rank(), 6);
    let lattice = model.lattice.transform(&t).unwrap();
    let w2 = characteristic_vector(&lattice).expect("unimodular");
    FourManifoldModel::new(format!("{}'", model.name), lattice, model.euler, w2).unwrap()
}
