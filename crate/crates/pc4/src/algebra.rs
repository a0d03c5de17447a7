//! Structure-constant engine for finite-dimensional real algebras.
//!
//! An algebra is stored as its rank-3 structure tensor: `c[k][i][j]` is the
//! `k`-th coordinate of the product of basis vectors `i` and `j`. Every
//! operation here works on arbitrary dimension; the constructions in
//! [`crate::construct`] only ever produce dimensions 1, 2 and 4.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element is a coordinate vector with respect to the table's basis.
pub type Element = DVector<f64>;

/// A finite-dimensional real algebra given by structure constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraTable {
    dim: usize,
    /// Flattened tensor, indexed `[k * dim * dim + i * dim + j]`.
    c: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl AlgebraTable {
    /// Build a table from a function giving the product of basis vectors.
    pub fn from_products<F>(dim: usize, labels: Option<Vec<String>>, prod: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Element,
    {
        if dim == 0 {
            return Err(Error::invalid("algebra dimension must be at least 1"));
        }
        let mut c = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let p = prod(i, j);
                if p.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: p.len(),
                    });
                }
                for k in 0..dim {
                    c[k * dim * dim + i * dim + j] = p[k];
                }
            }
        }
        let table = AlgebraTable { dim, c, labels };
        table.validate()?;
        Ok(table)
    }

    /// Build a table from a flat tensor, indexed `[k][i][j]`.
    pub fn from_tensor(dim: usize, c: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        let table = AlgebraTable { dim, c, labels };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        if self.c.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("structure tensor contains non-finite entries"));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.dim {
                return Err(Error::invalid("label count does not match dimension"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Structure constant `c[k][i][j]`.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[k * self.dim * self.dim + i * self.dim + j]
    }

    /// Product of the `i`-th and `j`-th basis vectors.
    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        DVector::from_fn(self.dim, |k, _| self.constant(k, i, j))
    }

    /// Largest entrywise difference between two tables of equal dimension.
    pub fn max_entry_distance(&self, other: &AlgebraTable) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_element(&self, a: &Element) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: a.len(),
            });
        }
        Ok(())
    }

    /// Bilinear product `a · b`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = ai * b[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.constant(k, i, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of left multiplication by `a`: `L_a x = a x`.
    pub fn left_mult_matrix(&self, a: &Element) -> Result<DMatrix<f64>> {
        self.check_element(a)?;
        let n = self.dim;
        Ok(DMatrix::from_fn(n, n, |k, j| {
            (0..n).map(|i| a[i] * self.constant(k, i, j)).sum()
        }))
    }

    /// Matrix of right multiplication by `a`: `R_a x = x a`.
    pub fn right_mult_matrix(&self, a: &Element) -> Result<DMatrix<f64>> {
        self.check_element(a)?;
        let n = self.dim;
        Ok(DMatrix::from_fn(n, n, |k, i| {
            (0..n).map(|j| a[j] * self.constant(k, i, j)).sum()
        }))
    }

    /// Commutator `[a, b] = ab - ba`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.multiply(a, b)? - self.multiply(b, a)?)
    }

    /// Anticommutator `a • b = ab + ba`.
    pub fn bullet(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(self.multiply(a, b)? + self.multiply(b, a)?)
    }

    /// Square `a · a`.
    pub fn square(&self, a: &Element) -> Result<Element> {
        self.multiply(a, a)
    }

    /// Residual of the idempotent equation, `‖a·a − a‖`.
    pub fn idempotent_residual(&self, a: &Element) -> Result<f64> {
        Ok((self.square(a)? - a).norm())
    }

    /// The isotope `(A, ∘)` with `x ∘ y = (Sx)(Ty)`.
    pub fn isotope(&self, s: &DMatrix<f64>, t: &DMatrix<f64>) -> Result<AlgebraTable> {
        let n = self.dim;
        if s.nrows() != n || s.ncols() != n || t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.nrows().max(t.nrows()),
            });
        }
        if s.determinant().abs() <= 1e-12 || t.determinant().abs() <= 1e-12 {
            return Err(Error::invalid("isotope maps must be invertible"));
        }
        AlgebraTable::from_products(n, self.labels.clone(), |i, j| {
            let si = s.column(i).into_owned();
            let tj = t.column(j).into_owned();
            self.multiply(&si, &tj).expect("dimensions checked")
        })
    }

    /// Pass to the unital isotope `A_{L_e⁻¹}` at a central idempotent `e`.
    ///
    /// Fails unless `e` is idempotent and commutes with all basis vectors
    /// within `tol`.
    pub fn unitalize(&self, e: &Element, tol: f64) -> Result<AlgebraTable> {
        self.check_element(e)?;
        if self.idempotent_residual(e)? >= tol {
            return Err(Error::invalid("unitalize requires an idempotent"));
        }
        for i in 0..self.dim {
            let b = basis_vector(self.dim, i);
            if self.commutator(e, &b)?.norm() >= tol {
                return Err(Error::invalid("unitalize requires a central idempotent"));
            }
        }
        let le = self.left_mult_matrix(e)?;
        let le_inv = le
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::invalid("left multiplication by e is singular"))?;
        let unital = self.isotope(&le_inv, &le_inv)?;
        // e must come out as a two-sided identity.
        for i in 0..self.dim {
            let b = basis_vector(self.dim, i);
            let l = unital.multiply(e, &b)?;
            let r = unital.multiply(&b, e)?;
            if (l.clone() - &b).norm() >= tol || (r - &b).norm() >= tol {
                return Err(Error::Defect(
                    "unitalization did not produce an identity element".into(),
                ));
            }
        }
        Ok(unital)
    }

    /// Locate the identity element, if the algebra is unital within `tol`.
    ///
    /// Solves the linear system `e · b_j = b_j` for all `j` in the least
    /// squares sense and checks the residual on both sides.
    pub fn identity_element(&self, tol: f64) -> Result<Element> {
        let n = self.dim;
        // Unknown e with sum_i e_i c[k][i][j] = delta_{kj}.
        let mut m = DMatrix::zeros(n * n, n);
        let mut rhs = DVector::zeros(n * n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    m[(j * n + k, i)] = self.constant(k, i, j);
                }
                rhs[j * n + k] = if k == j { 1.0 } else { 0.0 };
            }
        }
        let svd = m.svd(true, true);
        let e = svd
            .solve(&rhs, 1e-12)
            .map_err(|_| Error::invalid("algebra is not unital"))?;
        for j in 0..n {
            let b = basis_vector(n, j);
            if (self.multiply(&e, &b)? - &b).norm() >= tol
                || (self.multiply(&b, &e)? - &b).norm() >= tol
            {
                return Err(Error::invalid("algebra is not unital"));
            }
        }
        Ok(e)
    }
}

/// The `i`-th standard basis vector in dimension `dim`.
pub fn basis_vector(dim: usize, i: usize) -> Element {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// An orthonormal basis of a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    pub vectors: Vec<Element>,
    pub rank: usize,
}

impl SubspaceBasis {
    /// Orthonormal basis of the column span of `vectors`.
    ///
    /// Rank is decided by singular-value thresholding at `tol · σ_max`.
    pub fn from_span(dim: usize, vectors: &[Element], tol: f64) -> Self {
        if vectors.is_empty() {
            return SubspaceBasis {
                vectors: Vec::new(),
                rank: 0,
            };
        }
        let m = DMatrix::from_columns(vectors);
        let svd = m.svd(true, false);
        let sigma_max = svd.singular_values.max();
        if sigma_max <= 0.0 {
            return SubspaceBasis {
                vectors: Vec::new(),
                rank: 0,
            };
        }
        let u = svd.u.expect("requested U");
        let mut out = Vec::new();
        for (idx, s) in svd.singular_values.iter().enumerate() {
            if *s > tol * sigma_max {
                out.push(u.column(idx).into_owned());
            }
        }
        let rank = out.len();
        debug_assert!(out.iter().all(|v| v.len() == dim));
        SubspaceBasis { vectors: out, rank }
    }

    /// Component of `x` orthogonal to the subspace.
    pub fn orthogonal_component(&self, x: &Element) -> Element {
        let mut r = x.clone();
        for v in &self.vectors {
            let c = v.dot(x);
            r -= v * c;
        }
        r
    }

    /// Numerical rank of `{basis, extra...}` minus the basis rank is zero
    /// iff `extra` lies in the subspace; this returns the distance instead.
    pub fn distance_to_span(&self, x: &Element) -> f64 {
        self.orthogonal_component(x).norm()
    }
}

/// Null space of a matrix, via SVD thresholding at `tol · σ_max`.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<Element> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.max();
    let mut out = Vec::new();
    for j in 0..n {
        let s = if j < svd.singular_values.len() {
            svd.singular_values[j]
        } else {
            0.0
        };
        if sigma_max <= 0.0 || s <= tol * sigma_max {
            out.push(v_t.row(j).transpose());
        }
    }
    out
}

/// Centraliser of an element, with a degeneracy flag for `a = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct Centralizer {
    pub basis: SubspaceBasis,
    /// Set when the input was (numerically) zero, in which case the full
    /// space is returned.
    pub degenerate_input: bool,
}

impl AlgebraTable {
    /// Centraliser `C(a) = {y | [a, y] = 0}` as an orthonormal basis of the
    /// null space of `y ↦ [a, y]`.
    pub fn centralizer(&self, a: &Element, tol: f64) -> Result<Centralizer> {
        self.check_element(a)?;
        let n = self.dim;
        if a.norm() <= tol {
            let full = (0..n).map(|i| basis_vector(n, i)).collect::<Vec<_>>();
            return Ok(Centralizer {
                basis: SubspaceBasis {
                    vectors: full,
                    rank: n,
                },
                degenerate_input: true,
            });
        }
        let ad = self.left_mult_matrix(a)? - self.right_mult_matrix(a)?;
        let vectors = null_space(&ad, tol);
        let rank = vectors.len();
        Ok(Centralizer {
            basis: SubspaceBasis { vectors, rank },
            degenerate_input: false,
        })
    }

    /// Subalgebra generated by `x`: the closure of `span{x}` under
    /// multiplication, adjoining products until the rank stabilizes.
    pub fn generated_subalgebra(
        &self,
        x: &Element,
        tol: f64,
        max_iter: usize,
    ) -> Result<SubspaceBasis> {
        self.check_element(x)?;
        let norm = x.norm();
        if norm <= tol {
            return Err(Error::invalid("generated_subalgebra requires x != 0"));
        }
        let mut basis = SubspaceBasis::from_span(self.dim, &[x / norm], tol);
        for _ in 0..max_iter {
            let mut span = basis.vectors.clone();
            for a in &basis.vectors {
                for b in &basis.vectors {
                    span.push(self.multiply(a, b)?);
                }
            }
            let next = SubspaceBasis::from_span(self.dim, &span, tol);
            if next.rank == basis.rank {
                return Ok(next);
            }
            basis = next;
        }
        Err(Error::NoConvergence {
            max_iter,
            last_rank: basis.rank,
        })
    }

    /// Check `φ(xy) = φ(x)φ(y)` on all basis pairs; returns the verdict and
    /// the maximal residual.
    pub fn is_algebra_morphism(
        &self,
        target: &AlgebraTable,
        phi: &DMatrix<f64>,
        tol: f64,
    ) -> Result<(bool, f64)> {
        if phi.ncols() != self.dim || phi.nrows() != target.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: phi.ncols(),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = phi * self.basis_product(i, j);
                let rhs = target.multiply(
                    &phi.column(i).into_owned(),
                    &phi.column(j).into_owned(),
                )?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok((worst < tol, worst))
    }

    /// Morphism criterion for isotopes of quadratic division algebras of
    /// dimension at least four: `φ ∈ Mor(A_S, B_T)` iff `φ ∈ Mor(A, B)` and
    /// `φS = Tφ`. Both routes are evaluated and must agree.
    pub fn check_isotopy_morphism_criterion(
        &self,
        target: &AlgebraTable,
        s: &DMatrix<f64>,
        t: &DMatrix<f64>,
        phi: &DMatrix<f64>,
        tol: f64,
    ) -> Result<bool> {
        if self.dim < 4 || target.dim < 4 {
            return Err(Error::invalid(
                "morphism criterion requires dimension at least 4",
            ));
        }
        let (base_morphism, _) = self.is_algebra_morphism(target, phi, tol)?;
        let intertwines = (phi * s - t * phi).norm() < tol;
        let lhs = base_morphism && intertwines;
        let a_s = self.isotope(s, s)?;
        let b_t = target.isotope(t, t)?;
        let (rhs, _) = a_s.is_algebra_morphism(&b_t, phi, tol)?;
        if lhs != rhs {
            return Err(Error::Defect(format!(
                "morphism criterion routes disagree: direct={lhs}, isotope={rhs}"
            )));
        }
        Ok(lhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::quaternion_table;
    use approx::assert_abs_diff_eq;

    fn elem(v: &[f64]) -> Element {
        DVector::from_column_slice(v)
    }

    #[test]
    fn quaternion_products() {
        let q = quaternion_table();
        let i = elem(&[0.0, 1.0, 0.0, 0.0]);
        let j = elem(&[0.0, 0.0, 1.0, 0.0]);
        let k = elem(&[0.0, 0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(q.multiply(&i, &j).unwrap(), k, epsilon = 1e-14);
        assert_abs_diff_eq!(q.multiply(&j, &i).unwrap(), -k.clone(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            q.multiply(&i, &i).unwrap(),
            -elem(&[1.0, 0.0, 0.0, 0.0]),
            epsilon = 1e-14
        );
    }

    #[test]
    fn commutator_and_bullet_identities() {
        let q = quaternion_table();
        let i = elem(&[0.0, 1.0, 0.0, 0.0]);
        let j = elem(&[0.0, 0.0, 1.0, 0.0]);
        let k2 = elem(&[0.0, 0.0, 0.0, 2.0]);
        assert_abs_diff_eq!(q.commutator(&i, &j).unwrap(), k2, epsilon = 1e-14);
        assert_abs_diff_eq!(
            q.commutator(&i, &i).unwrap(),
            DVector::zeros(4),
            epsilon = 1e-14
        );
        // bullet + commutator = 2 * product
        let lhs = q.bullet(&i, &j).unwrap() + q.commutator(&i, &j).unwrap();
        let rhs = q.multiply(&i, &j).unwrap() * 2.0;
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
    }

    #[test]
    fn quaternion_left_mult_determinant_is_norm_fourth() {
        let q = quaternion_table();
        for v in crate::sampling::sample_unit_vectors(4, 20, 7) {
            let a = v * 1.7;
            let det = q.left_mult_matrix(&a).unwrap().determinant();
            assert_abs_diff_eq!(det, a.norm().powi(4), epsilon = 1e-9);
        }
    }

    #[test]
    fn centralizer_of_identity_is_full_space() {
        let q = quaternion_table();
        let one = elem(&[1.0, 0.0, 0.0, 0.0]);
        let c = q.centralizer(&one, 1e-8).unwrap();
        assert_eq!(c.basis.rank, 4);
        assert!(!c.degenerate_input);
    }

    #[test]
    fn centralizer_of_i_is_complex_plane() {
        let q = quaternion_table();
        let i = elem(&[0.0, 1.0, 0.0, 0.0]);
        let c = q.centralizer(&i, 1e-8).unwrap();
        assert_eq!(c.basis.rank, 2);
        // span{1, i}
        let one = elem(&[1.0, 0.0, 0.0, 0.0]);
        assert!(c.basis.distance_to_span(&one) < 1e-10);
        assert!(c.basis.distance_to_span(&i) < 1e-10);
    }

    #[test]
    fn centralizer_of_zero_is_degenerate() {
        let q = quaternion_table();
        let c = q.centralizer(&DVector::zeros(4), 1e-8).unwrap();
        assert!(c.degenerate_input);
        assert_eq!(c.basis.rank, 4);
    }

    #[test]
    fn generated_subalgebra_ranks() {
        let q = quaternion_table();
        let one = elem(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(q.generated_subalgebra(&one, 1e-10, 10).unwrap().rank, 1);
        let x = elem(&[0.3, -1.2, 0.5, 0.9]);
        let sub = q.generated_subalgebra(&x, 1e-10, 10).unwrap();
        assert_eq!(sub.rank, 2);
        assert!(sub.distance_to_span(&one) < 1e-9);
    }

    #[test]
    fn isotope_round_trip() {
        let q = quaternion_table();
        let t = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.4, -0.2, 0.1, //
                0.0, 2.0, 0.0, 0.0, //
                0.0, 0.0, 2.0, 0.0, //
                0.0, 0.0, 0.0, 2.0,
            ],
        );
        let t_inv = t.clone().try_inverse().unwrap();
        let round = q.isotope(&t, &t).unwrap().isotope(&t_inv, &t_inv).unwrap();
        assert!(q.max_entry_distance(&round).unwrap() < 1e-10);

        let id = DMatrix::identity(4, 4);
        assert!(q.isotope(&id, &id).unwrap().max_entry_distance(&q).unwrap() < 1e-14);
    }

    #[test]
    fn isotope_rejects_singular_maps() {
        let q = quaternion_table();
        let singular = DMatrix::zeros(4, 4);
        assert!(q.isotope(&singular, &DMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn unitalize_quaternions_is_identity_operation() {
        let q = quaternion_table();
        let one = elem(&[1.0, 0.0, 0.0, 0.0]);
        let u = q.unitalize(&one, 1e-10).unwrap();
        assert!(u.max_entry_distance(&q).unwrap() < 1e-12);
    }

    #[test]
    fn identity_element_of_quaternions() {
        let q = quaternion_table();
        let e = q.identity_element(1e-10).unwrap();
        assert_abs_diff_eq!(e, elem(&[1.0, 0.0, 0.0, 0.0]), epsilon = 1e-10);
    }

    #[test]
    fn identity_map_is_morphism() {
        let q = quaternion_table();
        let id = DMatrix::identity(4, 4);
        let (ok, res) = q.is_algebra_morphism(&q, &id, 1e-10).unwrap();
        assert!(ok);
        assert!(res < 1e-14);
    }
}
