//! Analytic idempotent theory of planar isotopes.
//!
//! In a plane `span{1, v}` with `v² = −1` and `s = σ(v)`, the non-identity
//! idempotents `α·1 + β·v` are the solutions with `β ≠ 0` of
//!
//! ```text
//! (†)  α = (α + sβ)² − (λβ)²
//! (‡)  β = 2λβ(α + sβ)
//! ```
//!
//! which reduce to the quadratic `(λβ − Ls)² = (s² + 1)L² − L` with
//! `L = 1/(2λ)` and `α = L − sβ`. The global census integrates the plane
//! solver over imaginary directions and cross-validates against the Newton
//! census of [`crate::newton`].

use nalgebra::{DVector, Vector3};
use serde::Serialize;

use crate::algebra::Element;
use crate::construct::KTuple;
use crate::error::{Error, Result};
use crate::newton::IdempotentCensus;

/// How the extra solutions of the plane equation arose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    /// Negative discriminant, or a double root at `β = 0`.
    NoExtra,
    SimplePair,
    DoubleRoot,
}

/// Non-identity idempotents of one plane `span{1, v}`.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneIdempotentResult {
    pub s: f64,
    /// Pairs `(α, β)` with `β ≠ 0`; at most two.
    pub extra_solutions: Vec<(f64, f64)>,
    pub multiplicity: Multiplicity,
}

/// `S = max{σ(x) | x² = −1}`. In the `F̃`-parametrization the set
/// `{x | x² = −1}` is the unit sphere of the imaginary space, so the
/// maximum is the dual norm `‖z‖`.
pub fn sigma_sup(z: &Vector3<f64>) -> f64 {
    z.norm()
}

/// Solve the plane idempotent equation for given `s = σ(v)` and `λ`.
pub fn solve_plane_idempotents(s: f64, lambda: f64) -> Result<PlaneIdempotentResult> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::invalid("lambda is zero"));
    }
    let l = 1.0 / (2.0 * lambda);
    let disc = (s * s + 1.0) * l * l - l;
    let disc_tol = 1e-12 * (1.0f64).max(l * l);
    let beta_tol = 1e-12 * (1.0f64).max(l.abs());
    let (betas, multiplicity) = if disc < -disc_tol {
        (vec![], Multiplicity::NoExtra)
    } else if disc.abs() <= disc_tol {
        (vec![l * s / lambda], Multiplicity::DoubleRoot)
    } else {
        let r = disc.sqrt();
        (
            vec![(l * s - r) / lambda, (l * s + r) / lambda],
            Multiplicity::SimplePair,
        )
    };
    let extra: Vec<(f64, f64)> = betas
        .into_iter()
        .filter(|b| b.abs() > beta_tol)
        .map(|b| (l - s * b, b))
        .collect();
    let multiplicity = if extra.is_empty() {
        Multiplicity::NoExtra
    } else {
        multiplicity
    };
    Ok(PlaneIdempotentResult {
        s,
        extra_solutions: extra,
        multiplicity,
    })
}

/// Residuals of the defining system (†), (‡) at a candidate `(α, β)`.
pub fn plane_equation_residual(s: f64, lambda: f64, alpha: f64, beta: f64) -> f64 {
    let dagger = alpha - ((alpha + s * beta).powi(2) - (lambda * beta).powi(2));
    let ddagger = beta - 2.0 * lambda * beta * (alpha + s * beta);
    dagger.abs().max(ddagger.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UniquenessBranch {
    StrictInequality,
    BoundaryS0,
    NotUnique,
}

/// Verdict of the unique-idempotent criterion: unique iff
/// `λ > (S² + 1)/2`, or `S = 0` and `λ = 1/2`.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessVerdict {
    pub s_sup: f64,
    pub lambda: f64,
    pub unique: bool,
    pub branch: UniquenessBranch,
}

/// Decide whether the algebra of `(z, λ)` has a unique non-zero idempotent.
/// Boundary clauses are decided with an equality tolerance of `1e-12`.
pub fn has_unique_idempotent(z: &Vector3<f64>, lambda: f64) -> UniquenessVerdict {
    let s = sigma_sup(z);
    let threshold = (s * s + 1.0) / 2.0;
    let branch = if lambda - threshold > 1e-12 {
        UniquenessBranch::StrictInequality
    } else if s <= 1e-12 && (lambda - 0.5).abs() <= 1e-12 {
        UniquenessBranch::BoundaryS0
    } else {
        UniquenessBranch::NotUnique
    };
    UniquenessVerdict {
        s_sup: s,
        lambda,
        unique: branch != UniquenessBranch::NotUnique,
        branch,
    }
}

/// Joint report of the analytic and numeric idempotent censuses.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    /// Idempotents from the plane solver, `e` included. Truncated to the
    /// deduplication output; a continuum produces many points.
    pub analytic_points: Vec<Vec<f64>>,
    pub analytic_curve_flag: bool,
    pub newton: IdempotentCensus,
    /// Either census detected a continuum. On the Newton side more than
    /// three distinct roots already certify one: a finite idempotent set
    /// has at most three elements per plane and extras off the boundary
    /// plane come in continua.
    pub continuum: bool,
    pub verdict: UniquenessVerdict,
    /// Worst residual of the plane system (†),(‡) over the Newton roots.
    pub max_newton_eq_residual: f64,
    /// In the finite case, the worst distance from a point of one census to
    /// the other census (symmetric); meaningless for continua.
    pub max_point_mismatch: f64,
    pub agree: bool,
}

const CURVE_THRESHOLD: usize = 50;

fn fibonacci_half_sphere(n: usize, z: &Vector3<f64>) -> Vec<Vector3<f64>> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        let phi = 2.0 * std::f64::consts::PI * (i as f64) / golden;
        let cos_theta = 1.0 - 2.0 * t;
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        let mut v = Vector3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta);
        // half-sphere convention: choose the sign with σ(v) ≥ 0
        if z.dot(&v) < 0.0 {
            v = -v;
        }
        out.push(v);
    }
    // the boundary plane s = S is met only at v = z/‖z‖; include it exactly
    let zn = z.norm();
    if zn > 0.0 {
        out.push(z / zn);
    }
    out
}

/// Analytic census of the idempotents of the algebra named by `κ`,
/// cross-validated against the Newton census of the built table.
pub fn global_idempotent_census(
    kappa: &KTuple,
    sphere_grid: usize,
    tol: f64,
) -> Result<CensusReport> {
    kappa.validate()?;
    let lambda = kappa.lambda;
    let dedupe = 1e-6;
    let mut analytic: Vec<Element> = vec![DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0])];
    let mut planes_with_extra = 0usize;
    for v in fibonacci_half_sphere(sphere_grid, &kappa.z) {
        let s = kappa.z.dot(&v);
        let plane = solve_plane_idempotents(s, lambda)?;
        if !plane.extra_solutions.is_empty() {
            planes_with_extra += 1;
        }
        for (alpha, beta) in plane.extra_solutions {
            let p = DVector::from_column_slice(&[alpha, beta * v[0], beta * v[1], beta * v[2]]);
            if analytic.iter().all(|q| (q - &p).norm() > dedupe) {
                analytic.push(p);
            }
        }
    }
    let analytic_curve = planes_with_extra > CURVE_THRESHOLD;

    let table = kappa.build_pc_algebra()?;
    let newton = table.find_idempotents_newton(7, tol.min(1e-9), 1e-4)?;

    // Every Newton root must satisfy the analytic plane system.
    let mut max_eq_residual = 0.0f64;
    for w in newton.points() {
        let alpha = w[0];
        let im = Vector3::new(w[1], w[2], w[3]);
        let beta = im.norm();
        let (s, beta) = if beta > 1e-9 {
            let v = im / beta;
            (kappa.z.dot(&v), beta)
        } else {
            (0.0, 0.0)
        };
        max_eq_residual = max_eq_residual.max(plane_equation_residual(s, lambda, alpha, beta));
    }

    let verdict = has_unique_idempotent(&kappa.z, lambda);
    let newton_curve = newton.curve_flag || newton.idempotents.len() > 3;
    let agree;
    let mut max_point_mismatch = 0.0f64;
    if analytic_curve || newton_curve {
        // a continuum on either side: both must flag it, and the Newton
        // roots must lie on the analytic variety
        agree = analytic_curve == newton_curve && max_eq_residual < 1e-7;
    } else {
        let newton_points = newton.points();
        for p in &newton_points {
            let d = analytic
                .iter()
                .map(|q| (q - p).norm())
                .fold(f64::INFINITY, f64::min);
            max_point_mismatch = max_point_mismatch.max(d);
        }
        for q in &analytic {
            let d = newton_points
                .iter()
                .map(|p| (q - p).norm())
                .fold(f64::INFINITY, f64::min);
            max_point_mismatch = max_point_mismatch.max(d);
        }
        agree = analytic.len() == newton_points.len() && max_point_mismatch < 1e-7;
    }

    Ok(CensusReport {
        analytic_points: analytic.iter().map(|v| v.as_slice().to_vec()).collect(),
        analytic_curve_flag: analytic_curve,
        continuum: analytic_curve || newton_curve,
        newton,
        verdict,
        max_newton_eq_residual: max_eq_residual,
        max_point_mismatch,
        agree,
    })
}
