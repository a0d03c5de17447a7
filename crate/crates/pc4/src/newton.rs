//! Numeric idempotent census by Newton iteration on `F(w) = w·w − w`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraTable, Element};
use crate::error::{Error, Result};
use crate::sampling;

/// If more distinct roots than this survive deduplication, the set is
/// treated as a continuum. Discrete idempotent sets of the constructed
/// algebras have at most three elements per plane.
const CURVE_THRESHOLD: usize = 50;

const MAX_NEWTON_ITER: usize = 80;
const RANDOM_SEEDS: usize = 200;
/// Half-width of the grid seed box. Idempotents scale like `1/(2λ)`; for
/// very small `|λ|` they leave this box and Newton must reach them from the
/// random seeds, which are drawn from a wider box.
const GRID_HALF_WIDTH: f64 = 3.0;
const RANDOM_HALF_WIDTH: f64 = 5.0;
const SEED_RNG: u64 = 0xC0FFEE;

/// Result of the numeric idempotent census.
#[derive(Debug, Clone, Serialize)]
pub struct IdempotentCensus {
    /// Distinct non-zero idempotents found (deduplicated).
    pub idempotents: Vec<Vec<f64>>,
    /// Set when the root set looks like a continuum rather than a finite set.
    pub curve_flag: bool,
}

impl IdempotentCensus {
    pub fn points(&self) -> Vec<Element> {
        self.idempotents
            .iter()
            .map(|v| DVector::from_column_slice(v))
            .collect()
    }
}

fn newton_root(table: &AlgebraTable, seed: &Element, tol: f64) -> Option<Element> {
    let n = table.dim();
    let identity = DMatrix::<f64>::identity(n, n);
    let residual = |w: &Element| Some((table.square(w).ok()? - w).norm());
    let mut w = seed.clone();
    let mut best = (w.clone(), residual(&w)?);
    for _ in 0..MAX_NEWTON_ITER {
        if best.1 < 1e-15 {
            break;
        }
        let f = table.square(&w).ok()? - &w;
        // d(w·w)[h] = w·h + h·w
        let jac = table.left_mult_matrix(&w).ok()? + table.right_mult_matrix(&w).ok()? - &identity;
        let step = jac.lu().solve(&f)?;
        if !step.iter().all(|x| x.is_finite()) {
            break;
        }
        // try the plain step and the doubled step; the latter restores
        // quadratic convergence at multiplicity-two roots, where the plain
        // iteration crawls and stalls near sqrt(tol) accuracy
        let w1 = &w - &step;
        let w2 = &w - &step * 2.0;
        let r1 = residual(&w1)?;
        let r2 = residual(&w2)?;
        let (next, r) = if r2 < r1 { (w2, r2) } else { (w1, r1) };
        w = next;
        if w.norm() > 1e6 {
            return None;
        }
        if r < best.1 {
            best = (w.clone(), r);
        }
    }
    if best.1 < tol {
        Some(best.0)
    } else {
        None
    }
}

impl AlgebraTable {
    /// Census of non-zero idempotents by Newton iteration from a grid of
    /// seeds in `[-3, 3]^dim` plus 200 random seeds from a wider box.
    ///
    /// Converged roots with residual below `tol` are deduplicated within
    /// `dedupe_radius`; roots within `dedupe_radius` of the origin are
    /// discarded (they are the zero idempotent). Non-converged seeds are
    /// dropped silently. The census is deterministic: it uses a fixed
    /// internal seed for the random seeds and sorts roots before
    /// deduplication, so the parallel and sequential paths agree.
    pub fn find_idempotents_newton(
        &self,
        grid_density: usize,
        tol: f64,
        dedupe_radius: f64,
    ) -> Result<IdempotentCensus> {
        if grid_density < 2 {
            return Err(Error::invalid("grid_density must be at least 2"));
        }
        let n = self.dim();
        let mut seeds: Vec<Element> = Vec::new();
        let mut index = vec![0usize; n];
        loop {
            let v = DVector::from_fn(n, |k, _| {
                -GRID_HALF_WIDTH
                    + 2.0 * GRID_HALF_WIDTH * index[k] as f64 / (grid_density - 1) as f64
            });
            seeds.push(v);
            let mut axis = 0;
            loop {
                if axis == n {
                    break;
                }
                index[axis] += 1;
                if index[axis] < grid_density {
                    break;
                }
                index[axis] = 0;
                axis += 1;
            }
            if axis == n {
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED_RNG);
        for _ in 0..RANDOM_SEEDS {
            seeds.push(DVector::from_fn(n, |_, _| {
                rng.gen_range(-RANDOM_HALF_WIDTH..RANDOM_HALF_WIDTH)
            }));
        }

        let roots: Vec<Option<Element>> =
            sampling::map_collect(&seeds, |s| newton_root(self, s, tol));
        let mut converged: Vec<Element> = roots
            .into_iter()
            .flatten()
            .filter(|w| w.norm() > dedupe_radius)
            .collect();
        converged.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
                .find(|o| *o != std::cmp::Ordering::Equal)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut distinct: Vec<Element> = Vec::new();
        for w in converged {
            if distinct.iter().all(|d| (d - &w).norm() > dedupe_radius) {
                distinct.push(w);
            }
        }
        let curve_flag = distinct.len() > CURVE_THRESHOLD;
        Ok(IdempotentCensus {
            idempotents: distinct.iter().map(|v| v.as_slice().to_vec()).collect(),
            curve_flag,
        })
    }
}
