//! Seeded sample generation and the map/reduce kernels behind the
//! statistical checks.
//!
//! Samples are always drawn sequentially from a [`ChaCha8Rng`] so that a
//! fixed seed yields a fixed sample list. The reductions over the samples
//! (max or min of a residual, with the achieving index) are associative
//! and tie-break on the smaller index, so the parallel and sequential
//! paths return bit-identical results.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Draw `n` uniformly distributed unit vectors in dimension `dim`.
pub fn sample_unit_vectors(dim: usize, n: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: DVector<f64> = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        let norm = v.norm();
        if norm > 1e-6 {
            out.push(v / norm);
        }
    }
    out
}

/// Draw `n` pairs of independent unit vectors.
pub fn sample_unit_pairs(dim: usize, n: usize, seed: u64) -> Vec<(DVector<f64>, DVector<f64>)> {
    let all = sample_unit_vectors(dim, 2 * n, seed);
    let mut it = all.into_iter();
    let mut out = Vec::with_capacity(n);
    while let (Some(a), Some(b)) = (it.next(), it.next()) {
        out.push((a, b));
    }
    out
}

fn pick_max(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

fn pick_min(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Maximum of `f` over `items`, with the index achieving it. Sequential path.
pub fn max_indexed_seq<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    F: Fn(&T) -> f64,
{
    items
        .iter()
        .enumerate()
        .map(|(i, t)| (i, f(t)))
        .reduce(pick_max)
}

/// Minimum of `f` over `items`, with the index achieving it. Sequential path.
pub fn min_indexed_seq<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    F: Fn(&T) -> f64,
{
    items
        .iter()
        .enumerate()
        .map(|(i, t)| (i, f(t)))
        .reduce(pick_min)
}

#[cfg(feature = "parallel")]
pub fn max_indexed_par<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    items
        .par_iter()
        .enumerate()
        .map(|(i, t)| (i, f(t)))
        .reduce_with(pick_max)
}

#[cfg(feature = "parallel")]
pub fn min_indexed_par<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    items
        .par_iter()
        .enumerate()
        .map(|(i, t)| (i, f(t)))
        .reduce_with(pick_min)
}

/// Maximum of `f` over `items`; parallel when the `parallel` feature is on.
pub fn max_indexed<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        max_indexed_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        max_indexed_seq(items, f)
    }
}

/// Minimum of `f` over `items`; parallel when the `parallel` feature is on.
pub fn min_indexed<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        min_indexed_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        min_indexed_seq(items, f)
    }
}

/// Map `f` over `items`, preserving order; parallel when available.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_samples_are_reproducible() {
        let a = sample_unit_vectors(4, 10, 42);
        let b = sample_unit_vectors(4, 10, 42);
        assert_eq!(a, b);
        let c = sample_unit_vectors(4, 10, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_are_unit() {
        for v in sample_unit_vectors(4, 100, 0) {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn par_and_seq_reductions_agree() {
        let items: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 65536) as f64).collect();
        let f = |x: &f64| (x * 0.001).sin();
        assert_eq!(max_indexed(&items, f), max_indexed_seq(&items, f));
        assert_eq!(min_indexed(&items, f), min_indexed_seq(&items, f));
    }
}
