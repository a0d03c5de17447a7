//! Sampled verification of algebra identities.
//!
//! These are statistical reports, not proofs: each check evaluates a
//! residual over a seeded sample of (pairs of) unit vectors and records the
//! worst case. Identical seeds give identical reports, with or without the
//! `parallel` feature.

use nalgebra::DVector;
use serde::Serialize;

use crate::algebra::{AlgebraTable, Element};
use crate::error::{Error, Result};
use crate::sampling;

/// Outcome of a residual-style check: `passed` iff `max_residual < tol`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub max_residual: f64,
    pub samples_used: usize,
    pub worst_witness: Vec<Vec<f64>>,
    pub passed: bool,
}

impl CheckReport {
    fn new(max_residual: f64, samples_used: usize, witness: Vec<&Element>, tol: f64) -> Self {
        CheckReport {
            max_residual,
            samples_used,
            worst_witness: witness.into_iter().map(|v| v.as_slice().to_vec()).collect(),
            passed: max_residual < tol,
        }
    }
}

/// Outcome of the sampled division check: `passed` iff `min_abs_det > tol`.
#[derive(Debug, Clone, Serialize)]
pub struct DivisionReport {
    pub min_abs_det: f64,
    pub samples_used: usize,
    pub worst_witness: Vec<Vec<f64>>,
    pub passed: bool,
}

impl AlgebraTable {
    /// Max residual of third-power associativity, `‖x(x²) − (x²)x‖`, over
    /// sampled unit vectors.
    pub fn check_third_power_assoc(&self, n_samples: usize, tol: f64, seed: u64) -> Result<CheckReport> {
        if n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        let xs = sampling::sample_unit_vectors(self.dim(), n_samples, seed);
        let (idx, worst) = sampling::max_indexed(&xs, |x| {
            let sq = self.square(x).expect("dim checked");
            let lhs = self.multiply(x, &sq).expect("dim checked");
            let rhs = self.multiply(&sq, x).expect("dim checked");
            (lhs - rhs).norm()
        })
        .expect("nonempty sample");
        Ok(CheckReport::new(worst, n_samples, vec![&xs[idx]], tol))
    }

    /// Max residual of the polarized identity `[x•y, y] = [x, y²]` over
    /// sampled pairs.
    pub fn check_polarized_identity(&self, n_samples: usize, tol: f64, seed: u64) -> Result<CheckReport> {
        if n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        let pairs = sampling::sample_unit_pairs(self.dim(), n_samples, seed);
        let (idx, worst) = sampling::max_indexed(&pairs, |(x, y)| {
            let lhs = self
                .commutator(&self.bullet(x, y).expect("dim"), y)
                .expect("dim");
            let rhs = self.commutator(x, &self.square(y).expect("dim")).expect("dim");
            (lhs - rhs).norm()
        })
        .expect("nonempty sample");
        let (x, y) = &pairs[idx];
        Ok(CheckReport::new(worst, n_samples, vec![x, y], tol))
    }

    /// Max residual of the idempotent specialization `[e, e•x − x] = 0` over
    /// sampled x. Fails fast if `e` is not an idempotent within `tol`.
    pub fn check_idempotent_commutation(
        &self,
        e: &Element,
        n_samples: usize,
        tol: f64,
        seed: u64,
    ) -> Result<CheckReport> {
        if self.idempotent_residual(e)? >= tol {
            return Err(Error::invalid("e is not an idempotent"));
        }
        let xs = sampling::sample_unit_vectors(self.dim(), n_samples, seed);
        let (idx, worst) = sampling::max_indexed(&xs, |x| {
            let inner = self.bullet(e, x).expect("dim") - x;
            self.commutator(e, &inner).expect("dim").norm()
        })
        .expect("nonempty sample");
        Ok(CheckReport::new(worst, n_samples, vec![&xs[idx]], tol))
    }

    /// Minimum of `min(|det L_a|, |det R_a|)` over sampled unit `a`. Evidence
    /// for the division property, not a proof.
    pub fn check_division_sampled(&self, n_samples: usize, tol: f64, seed: u64) -> Result<DivisionReport> {
        if n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        let xs = sampling::sample_unit_vectors(self.dim(), n_samples, seed);
        let (idx, min_det) = sampling::min_indexed(&xs, |a| {
            let dl = self.left_mult_matrix(a).expect("dim").determinant().abs();
            let dr = self.right_mult_matrix(a).expect("dim").determinant().abs();
            dl.min(dr)
        })
        .expect("nonempty sample");
        Ok(DivisionReport {
            min_abs_det: min_det,
            samples_used: n_samples,
            worst_witness: vec![xs[idx].as_slice().to_vec()],
            passed: min_det > tol,
        })
    }

    /// Residual of `L_e`-invariance of the centraliser `C(e)`: the component
    /// of `L_e c` orthogonal to `C(e)`, maximized over a basis of `C(e)`.
    pub fn check_centralizer_invariance(&self, e: &Element, tol: f64) -> Result<CheckReport> {
        if self.idempotent_residual(e)? >= tol.max(1e-8) {
            return Err(Error::invalid("e is not an idempotent"));
        }
        let cent = self.centralizer(e, 1e-8)?;
        let mut worst = 0.0f64;
        let mut witness = e.clone();
        for c in &cent.basis.vectors {
            let image = self.multiply(e, c)?;
            let res = cent.basis.orthogonal_component(&image).norm();
            if res > worst {
                worst = res;
                witness = c.clone();
            }
        }
        Ok(CheckReport::new(worst, cent.basis.rank, vec![&witness], tol))
    }
}

/// Verdict of the exceptional-idempotent test: `e` is exceptional iff its
/// centraliser is three-dimensional and closed under squaring.
#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalReport {
    pub is_exceptional: bool,
    pub centralizer_rank: usize,
    pub max_square_residual: f64,
    pub witness: Vec<f64>,
}

impl AlgebraTable {
    /// Test whether an idempotent of a four-dimensional algebra is
    /// exceptional. Squares of a spanning sample of `C(e)` are projected off
    /// `C(e)`; closure holds when every residual stays below `tol`.
    pub fn is_exceptional_idempotent(
        &self,
        e: &Element,
        tol: f64,
        seed: u64,
    ) -> Result<ExceptionalReport> {
        if self.dim() != 4 {
            return Err(Error::invalid(
                "exceptional idempotents are defined for dimension 4",
            ));
        }
        if self.idempotent_residual(e)? >= tol.max(1e-8) {
            return Err(Error::invalid("e is not an idempotent"));
        }
        let cent = self.centralizer(e, 1e-8)?;
        let rank = cent.basis.rank;
        let mut worst = 0.0f64;
        let mut witness = e.clone();
        if rank == 3 {
            // Basis vectors alone do not span the quadratic behaviour of the
            // squaring map; add random combinations.
            let mut probes: Vec<Element> = cent.basis.vectors.clone();
            for w in sampling::sample_unit_vectors(rank, 24, seed) {
                let mut v = DVector::zeros(self.dim());
                for (ci, c) in cent.basis.vectors.iter().enumerate() {
                    v += c * w[ci];
                }
                probes.push(v);
            }
            for p in &probes {
                let res = cent.basis.orthogonal_component(&self.square(p)?).norm();
                if res > worst {
                    worst = res;
                    witness = p.clone();
                }
            }
        }
        Ok(ExceptionalReport {
            is_exceptional: rank == 3 && worst < tol,
            centralizer_rank: rank,
            max_square_residual: worst,
            witness: witness.as_slice().to_vec(),
        })
    }
}
