//! Construction of quadratic division algebras from dissident data and of
//! four-dimensional power-commutative division algebras from K-tuples.
//!
//! A K-tuple `(x, y, z, d, λ)` names one algebra: `x` feeds the form `ξ_x`,
//! `(y, d)` the dissident map `η_{yd}`, `z` is the Riesz vector of the
//! linear form `σ_z` and `λ` the imaginary scaling of the planar map. Two
//! independent code paths produce the same structure tensor: the explicit
//! product formula ([`KTuple::build_pc_algebra`]) and the isotope route
//! through [`DissidentParams::build_quadratic_algebra`] and
//! [`PlanarMapParams::matrix`].

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::algebra::{basis_vector, AlgebraTable, Element, SubspaceBasis};
use crate::checks::CheckReport;
use crate::error::{Error, Result};
use crate::sampling;

/// Classification parameter `(x, y, z, d, λ)` for a four-dimensional
/// power-commutative real division algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KTuple {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub z: Vector3<f64>,
    pub d: Vector3<f64>,
    pub lambda: f64,
}

impl KTuple {
    pub fn new(
        x: Vector3<f64>,
        y: Vector3<f64>,
        z: Vector3<f64>,
        d: Vector3<f64>,
        lambda: f64,
    ) -> Result<Self> {
        let kappa = KTuple { x, y, z, d, lambda };
        kappa.validate()?;
        Ok(kappa)
    }

    /// `κ₀ = (0, 0, 0, (1,1,1), 1)`, the parameters of the quaternions.
    pub fn quaternion() -> Self {
        KTuple {
            x: Vector3::zeros(),
            y: Vector3::zeros(),
            z: Vector3::zeros(),
            d: Vector3::new(1.0, 1.0, 1.0),
            lambda: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in [&self.x, &self.y, &self.z, &self.d] {
            if v.iter().any(|t| !t.is_finite()) {
                return Err(Error::invalid("K-tuple entries must be finite"));
            }
        }
        if !self.lambda.is_finite() || self.lambda == 0.0 {
            return Err(Error::invalid("lambda is zero"));
        }
        if self.d[0] <= 0.0 {
            return Err(Error::invalid("d not positive: requires 0 < d1"));
        }
        if self.d[0] > self.d[1] || self.d[1] > self.d[2] {
            return Err(Error::invalid("d not sorted: requires d1 <= d2 <= d3"));
        }
        Ok(())
    }

    /// Replace the triple `(x, y, z)` by `(g x, g y, g z)`.
    pub fn act(&self, g: &Matrix3<f64>) -> KTuple {
        KTuple {
            x: g * self.x,
            y: g * self.y,
            z: g * self.z,
            d: self.d,
            lambda: self.lambda,
        }
    }

    pub fn sigma(&self, v: &Vector3<f64>) -> f64 {
        self.z.dot(v)
    }
}

/// Data `(σ, λ)` of a planar map on a unital algebra: `T(1) = 1` and
/// `T(v) = σ(v)·1 + λv` on the imaginary space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarMapParams {
    pub sigma_vector: Vec<f64>,
    pub lambda: f64,
}

impl PlanarMapParams {
    pub fn new(sigma_vector: Vec<f64>, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::invalid("lambda is zero"));
        }
        Ok(PlanarMapParams {
            sigma_vector,
            lambda,
        })
    }

    /// Matrix of the planar map in a basis `(1, v_2, …, v_n)`: first row
    /// `(1, σ₂, …, σ_n)`, imaginary block `λ·I`.
    pub fn matrix(&self, n: usize) -> Result<DMatrix<f64>> {
        if self.sigma_vector.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: self.sigma_vector.len(),
            });
        }
        let mut m = DMatrix::zeros(n, n);
        m[(0, 0)] = 1.0;
        for (j, s) in self.sigma_vector.iter().enumerate() {
            m[(0, j + 1)] = *s;
            m[(j + 1, j + 1)] = self.lambda;
        }
        Ok(m)
    }
}

/// Parameters `(x, y, d)` of the dissident triple `(ℝ³, ξ_x, η_{yd})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissidentParams {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub d: Vector3<f64>,
}

/// The skew matrix `ε_x`, acting as `ε_x u = x × u`.
pub fn eps_matrix(x: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -x[2], x[1], //
        x[2], 0.0, -x[0], //
        -x[1], x[0], 0.0,
    )
}

/// The diagonal matrix `δ_d = diag(d₁, d₂, d₃)`.
pub fn delta_matrix(d: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::from_diagonal(d)
}

/// The form `ξ_x(u ∧ v) = ⟨ε_x u, v⟩`.
pub fn xi(x: &Vector3<f64>, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    (eps_matrix(x) * u).dot(v)
}

/// The map `η_{yd}(u ∧ v) = (ε_y + δ_d)(u × v)`.
pub fn eta(y: &Vector3<f64>, d: &Vector3<f64>, u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    (eps_matrix(y) + delta_matrix(d)) * u.cross(v)
}

/// Report of the sampled dissidence check: `passed` iff the minimal
/// normalized determinant `|det[u v η(u∧v)]| / ‖η‖` over orthonormal pairs
/// exceeds `tol`.
#[derive(Debug, Clone, Serialize)]
pub struct DissidentReport {
    pub min_normalized_det: f64,
    pub samples_used: usize,
    pub worst_witness: Vec<Vec<f64>>,
    pub passed: bool,
}

/// Sampled check that `η_{yd}` is dissident: `u, v, η(u∧v)` linearly
/// independent for independent `u, v`. The sample contains the three axis
/// pairs plus seeded random orthonormal pairs.
pub fn check_dissident(
    y: &Vector3<f64>,
    d: &Vector3<f64>,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<DissidentReport> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    let mut pairs: Vec<(Vector3<f64>, Vector3<f64>)> = vec![
        (Vector3::x(), Vector3::y()),
        (Vector3::y(), Vector3::z()),
        (Vector3::z(), Vector3::x()),
    ];
    for (u, v) in sampling::sample_unit_pairs(3, n_samples, seed) {
        let u = Vector3::new(u[0], u[1], u[2]);
        let v = Vector3::new(v[0], v[1], v[2]);
        // orthonormalize the pair; dissidence only depends on the plane
        let w = v - u * u.dot(&v);
        let n = w.norm();
        if n > 1e-8 {
            pairs.push((u, w / n));
        }
    }
    let n_used = pairs.len();
    let (idx, min_det) = sampling::min_indexed(&pairs, |(u, v)| {
        let h = eta(y, d, u, v);
        let hn = h.norm();
        if hn <= 1e-300 {
            return 0.0;
        }
        Matrix3::from_columns(&[*u, *v, h]).determinant().abs() / hn
    })
    .expect("nonempty sample");
    let (u, v) = &pairs[idx];
    Ok(DissidentReport {
        min_normalized_det: min_det,
        samples_used: n_used,
        worst_witness: vec![u.as_slice().to_vec(), v.as_slice().to_vec()],
        passed: min_det > tol,
    })
}

fn in_t(d: &Vector3<f64>) -> bool {
    d[0] > 0.0 && d[0] <= d[1] && d[1] <= d[2]
}

fn split(a: &Element) -> (f64, Vector3<f64>) {
    (a[0], Vector3::new(a[1], a[2], a[3]))
}

fn join(alpha: f64, u: &Vector3<f64>) -> Element {
    DVector::from_column_slice(&[alpha, u[0], u[1], u[2]])
}

fn default_labels() -> Vec<String> {
    vec!["e".into(), "v1".into(), "v2".into(), "v3".into()]
}

impl DissidentParams {
    pub fn new(x: Vector3<f64>, y: Vector3<f64>, d: Vector3<f64>) -> Result<Self> {
        if !in_t(&d) {
            return Err(Error::invalid("d not in T: requires 0 < d1 <= d2 <= d3"));
        }
        Ok(DissidentParams { x, y, d })
    }

    /// The quadratic division algebra `F̃(ℝ³, ξ_x, η_{yd})` on `ℝ × ℝ³`:
    ///
    /// `(α, u)(β, v) = (αβ − ⟨u,v⟩ + ξ(u∧v), αv + βu + η(u∧v))`.
    pub fn build_quadratic_algebra(&self) -> Result<AlgebraTable> {
        if !in_t(&self.d) {
            return Err(Error::invalid("d not in T: requires 0 < d1 <= d2 <= d3"));
        }
        AlgebraTable::from_products(4, Some(default_labels()), |i, j| {
            let (alpha, u) = split(&basis_vector(4, i));
            let (beta, v) = split(&basis_vector(4, j));
            let re = alpha * beta - u.dot(&v) + xi(&self.x, &u, &v);
            let im = v * alpha + u * beta + eta(&self.y, &self.d, &u, &v);
            join(re, &im)
        })
    }
}

impl KTuple {
    /// Product of two elements of the algebra named by this K-tuple,
    /// directly from the explicit multiplication formula.
    pub fn pc_product(&self, a: &Element, b: &Element) -> Element {
        let (alpha, u) = split(a);
        let (beta, v) = split(b);
        let su = self.sigma(&u);
        let sv = self.sigma(&v);
        let l = self.lambda;
        let re = alpha * beta
            + alpha * sv
            + beta * su
            + su * sv
            + l * l * xi(&self.x, &u, &v)
            - l * l * u.dot(&v);
        let im = v * (l * (alpha + su)) + u * (l * (beta + sv)) + eta(&self.y, &self.d, &u, &v) * (l * l);
        join(re, &im)
    }

    /// Structure tensor of the power-commutative division algebra named by
    /// this K-tuple, via the explicit product formula.
    pub fn build_pc_algebra(&self) -> Result<AlgebraTable> {
        self.validate()?;
        AlgebraTable::from_products(4, Some(default_labels()), |i, j| {
            self.pc_product(&basis_vector(4, i), &basis_vector(4, j))
        })
    }

    /// The same algebra through the independent isotope route:
    /// `B_T` for `B = F̃(G̃(x, y, d))` and `T` the planar map of `(z, λ)`.
    pub fn build_pc_algebra_isotope_route(&self) -> Result<AlgebraTable> {
        self.validate()?;
        let quad = DissidentParams::new(self.x, self.y, self.d)?.build_quadratic_algebra()?;
        let t = PlanarMapParams::new(self.z.as_slice().to_vec(), self.lambda)?.matrix(4)?;
        quad.isotope(&t, &t)
    }

    /// The planar map parameters `(z, λ)` of this tuple.
    pub fn planar_params(&self) -> PlanarMapParams {
        PlanarMapParams {
            sigma_vector: self.z.as_slice().to_vec(),
            lambda: self.lambda,
        }
    }
}

/// Hand-coded quaternion structure tensor, basis `(1, i, j, k)`. Kept
/// independent of the construction formulas so it can serve as an oracle.
pub fn quaternion_table() -> AlgebraTable {
    let table: [[[f64; 4]; 4]; 4] = {
        let mut t = [[[0.0; 4]; 4]; 4];
        // products as coordinate vectors: t[i][j] = e_i * e_j
        let prod = |i: usize, j: usize| -> (usize, f64) {
            match (i, j) {
                (0, j) => (j, 1.0),
                (i, 0) => (i, 1.0),
                (1, 1) | (2, 2) | (3, 3) => (0, -1.0),
                (1, 2) => (3, 1.0),
                (2, 1) => (3, -1.0),
                (2, 3) => (1, 1.0),
                (3, 2) => (1, -1.0),
                (3, 1) => (2, 1.0),
                (1, 3) => (2, -1.0),
                _ => unreachable!(),
            }
        };
        for i in 0..4 {
            for j in 0..4 {
                let (k, s) = prod(i, j);
                t[i][j][k] = s;
            }
        }
        t
    };
    AlgebraTable::from_products(
        4,
        Some(vec!["1".into(), "i".into(), "j".into(), "k".into()]),
        |i, j| DVector::from_column_slice(&table[i][j]),
    )
    .expect("static table")
}

impl AlgebraTable {
    /// Sampled planarity check for a map `T` on a unital algebra: `T(1)=1`,
    /// `T` invertible and `rank{1, x, Tx} ≤ 2` for sampled `x`.
    pub fn is_planar(&self, t: &DMatrix<f64>, tol: f64) -> Result<bool> {
        let e = self.identity_element(1e-8)?;
        if (t * &e - &e).norm() >= tol {
            return Ok(false);
        }
        if t.determinant().abs() <= 1e-12 {
            return Ok(false);
        }
        let mut probes: Vec<Element> = (0..self.dim()).map(|i| basis_vector(self.dim(), i)).collect();
        probes.extend(sampling::sample_unit_vectors(self.dim(), 64, 11));
        for x in &probes {
            let tx = t * x;
            let m = DMatrix::from_columns(&[e.clone(), x.clone(), tx]);
            let sv = m.svd(false, false).singular_values;
            let smax = sv.max();
            if smax > 0.0 && sv[2] >= tol.max(1e-10) * smax {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Max component of `x·x` orthogonal to `span{e, x}`, over sampled unit
    /// `x`. Passes when `e` is an omnipresent idempotent.
    pub fn check_omnipresent(
        &self,
        e: &Element,
        n_samples: usize,
        tol: f64,
        seed: u64,
    ) -> Result<CheckReport> {
        if self.idempotent_residual(e)? >= tol.max(1e-8) {
            return Err(Error::invalid("e is not an idempotent"));
        }
        let xs = sampling::sample_unit_vectors(self.dim(), n_samples, seed);
        let (idx, worst) = sampling::max_indexed(&xs, |x| {
            let plane = SubspaceBasis::from_span(self.dim(), &[e.clone(), x.clone()], 1e-12);
            plane
                .orthogonal_component(&self.square(x).expect("dim"))
                .norm()
        })
        .expect("nonempty sample");
        Ok(CheckReport {
            max_residual: worst,
            samples_used: n_samples,
            worst_witness: vec![xs[idx].as_slice().to_vec()],
            passed: worst < tol,
        })
    }
}

/// Read planar-map data off a matrix acting in a basis `(1, v₂, …, v_n)`
/// whose identity is the first basis vector: requires the first column to be
/// `e₁` and the imaginary block to be `λ·I` with `λ ≠ 0`, all within `tol`.
/// This is an exact-form check, complete in such a basis, unlike the sampled
/// [`AlgebraTable::is_planar`].
pub fn exact_planar_params(t: &DMatrix<f64>, tol: f64) -> Option<PlanarMapParams> {
    let n = t.nrows();
    if t.ncols() != n || n < 2 {
        return None;
    }
    if (t[(0, 0)] - 1.0).abs() >= tol {
        return None;
    }
    for i in 1..n {
        if t[(i, 0)].abs() >= tol {
            return None;
        }
    }
    let lambda = t[(1, 1)];
    if lambda.abs() <= 1e-12 {
        return None;
    }
    for i in 1..n {
        for j in 1..n {
            let expect = if i == j { lambda } else { 0.0 };
            if (t[(i, j)] - expect).abs() >= tol {
                return None;
            }
        }
    }
    let sigma = (1..n).map(|j| t[(0, j)]).collect();
    Some(PlanarMapParams {
        sigma_vector: sigma,
        lambda,
    })
}
