//! Canonical forms for K-tuples under the isotropy action.
//!
//! The diagonal parameter `d` falls into one of four strata, each with its
//! isotropy group inside SO(3):
//!
//! * `T1` (`d1 = d2 = d3`): all of SO(3);
//! * `T2` (`d1 = d2 < d3`): rotations in coordinates (1,2), extended by the
//!   flip `diag(1,-1,-1)`;
//! * `T3` (`d1 < d2 = d3`): rotations in coordinates (2,3), extended by the
//!   flip `diag(-1,-1,1)`;
//! * `T4` (`d1 < d2 < d3`): the four diagonal sign matrices of determinant
//!   one.
//!
//! Canonicalization moves the triple `(x, y, z)` to a unique representative
//! of its orbit, leaving `(d, λ)` untouched. Triples are identified with
//! 3×3 matrices whose columns are `x`, `y`, `z`.

use nalgebra::{DMatrix, Matrix3, Rotation3, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::algebra::AlgebraTable;
use crate::construct::KTuple;
use crate::error::{Error, Result};

/// Relative tolerance for stratum boundary snapping and branch decisions.
const BRANCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StratumTag {
    T1,
    T2,
    T3,
    T4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupDescriptor {
    FullSo3,
    Rot12PlusFlip,
    Rot23PlusFlip,
    FourGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub tag: StratumTag,
    pub group_descriptor: GroupDescriptor,
}

/// Decide the stratum of `d`. Entries within `tol·max(1, ‖d‖)` of a
/// boundary snap to the higher-symmetry stratum.
pub fn stratum(d: &Vector3<f64>, tol: f64) -> Result<Stratum> {
    let t = tol * (1.0f64).max(d.norm());
    if d[0] <= 0.0 {
        return Err(Error::invalid("d not positive: requires 0 < d1"));
    }
    if d[0] > d[1] + t || d[1] > d[2] + t {
        return Err(Error::invalid("d not sorted: requires d1 <= d2 <= d3"));
    }
    let eq12 = (d[1] - d[0]).abs() <= t;
    let eq23 = (d[2] - d[1]).abs() <= t;
    let (tag, group_descriptor) = match (eq12, eq23) {
        (true, true) => (StratumTag::T1, GroupDescriptor::FullSo3),
        (true, false) => (StratumTag::T2, GroupDescriptor::Rot12PlusFlip),
        (false, true) => (StratumTag::T3, GroupDescriptor::Rot23PlusFlip),
        (false, false) => (StratumTag::T4, GroupDescriptor::FourGroup),
    };
    Ok(Stratum {
        tag,
        group_descriptor,
    })
}

/// Rotation about the third axis: acts on coordinates (1,2).
pub fn rot12(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Rotation about the first axis: acts on coordinates (2,3).
pub fn rot23(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// The four diagonal sign matrices of determinant one.
pub fn four_group() -> [Matrix3<f64>; 4] {
    [
        Matrix3::identity(),
        Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0)),
        Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, -1.0)),
        Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)),
    ]
}

const FLIP_T2: Matrix3<f64> = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
/// `diag(-1,1,-1)` is the product of the generators `diag(-1,-1,1)` and the
/// half turn about the first axis, so it lies in the T3 isotropy group; it is
/// the element that fixes the positive pivot direction in the (2,3)-plane.
const FLIP_T3: Matrix3<f64> = Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);

/// Membership test for the isotropy group of `δ_d`: `g` orthogonal with
/// determinant one and `g δ_d g⁻¹ = δ_d`.
pub fn isotropy_contains(d: &Vector3<f64>, g: &Matrix3<f64>, tol: f64) -> Result<bool> {
    let ortho = (g.transpose() * g - Matrix3::identity()).norm();
    if ortho >= tol.max(1e-8) || (g.determinant() - 1.0).abs() >= tol.max(1e-8) {
        return Err(Error::invalid("g is not a rotation"));
    }
    let delta = Matrix3::from_diagonal(d);
    Ok((g * delta * g.transpose() - delta).norm() < tol)
}

/// Haar-random rotation from a seeded RNG.
fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let q = nalgebra::Quaternion::new(
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
    );
    nalgebra::UnitQuaternion::from_quaternion(q)
        .to_rotation_matrix()
        .into_inner()
}

/// Uniform random element of the isotropy group of `δ_d`.
pub fn isotropy_sample(d: &Vector3<f64>, seed: u64) -> Result<Matrix3<f64>> {
    let st = stratum(d, BRANCH_TOL)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match st.tag {
        StratumTag::T1 => random_rotation(&mut rng),
        StratumTag::T2 => {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rot12(theta);
            if rng.gen_bool(0.5) {
                FLIP_T2 * r
            } else {
                r
            }
        }
        StratumTag::T3 => {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rot23(theta);
            if rng.gen_bool(0.5) {
                FLIP_T3 * r
            } else {
                r
            }
        }
        StratumTag::T4 => four_group()[rng.gen_range(0..4usize)],
    };
    Ok(g)
}

/// A K-tuple moved to the cross-section, with the group element used.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalForm {
    pub kappa: KTuple,
    pub pattern_id: String,
    pub witness: Matrix3<f64>,
}

fn triple_scale(k: &KTuple) -> f64 {
    (1.0f64).max(k.x.norm()).max(k.y.norm()).max(k.z.norm())
}

/// Largest per-vector distance between the triples of two K-tuples.
pub fn triple_distance(a: &KTuple, b: &KTuple) -> f64 {
    (a.x - b.x)
        .norm()
        .max((a.y - b.y).norm())
        .max((a.z - b.z).norm())
}

/// Rotation taking `v` to `‖v‖ e₁`.
fn align_to_e1(v: &Vector3<f64>) -> Matrix3<f64> {
    let n = v.norm();
    if n == 0.0 {
        return Matrix3::identity();
    }
    let vhat = v / n;
    let axis = vhat.cross(&Vector3::x());
    let axis_norm = axis.norm();
    if axis_norm < 1e-12 {
        if vhat[0] > 0.0 {
            Matrix3::identity()
        } else {
            // half turn about e2 sends -e1 to e1
            Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, -1.0))
        }
    } else {
        let angle = vhat[0].clamp(-1.0, 1.0).acos();
        Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner()
    }
}

struct AxisSpec {
    /// Indices of the plane the rotation acts on.
    plane: (usize, usize),
    flip: Matrix3<f64>,
    /// Components negated by the flip, in sign-scan order.
    flip_components: (usize, usize),
    rot: fn(f64) -> Matrix3<f64>,
    /// Angle of the flip-rotation fixing plane direction `ψ`.
    rotoflip_theta: fn(f64) -> f64,
    label: &'static str,
}

const T2_SPEC: AxisSpec = AxisSpec {
    plane: (0, 1),
    flip: FLIP_T2,
    flip_components: (1, 2),
    rot: rot12,
    rotoflip_theta: |psi| -2.0 * psi,
    label: "C2",
};

const T3_SPEC: AxisSpec = AxisSpec {
    plane: (1, 2),
    flip: FLIP_T3,
    flip_components: (0, 2),
    rot: rot23,
    rotoflip_theta: |psi| -2.0 * psi,
    label: "C3",
};

fn plane_part(v: &Vector3<f64>, plane: (usize, usize)) -> (f64, f64) {
    (v[plane.0], v[plane.1])
}

fn canon_t1(k: &KTuple, ztol: f64) -> (Matrix3<f64>, String) {
    let names = ["x", "y", "z"];
    let vectors = [k.x, k.y, k.z];
    let Some(i0) = vectors.iter().position(|v| v.norm() > ztol) else {
        return (Matrix3::identity(), "C1-zero".into());
    };
    let g1 = align_to_e1(&vectors[i0]);
    let rotated: Vec<Vector3<f64>> = vectors.iter().map(|v| g1 * v).collect();
    // residual freedom: rotations about e1; spend it on the first later
    // vector with a transverse part
    let j1 = (i0 + 1..3).find(|&j| rotated[j].fixed_rows::<2>(1).norm() > ztol);
    match j1 {
        Some(j) => {
            let theta = rotated[j][2].atan2(rotated[j][1]);
            let g2 = rot23(-theta);
            (
                g2 * g1,
                format!("C1-{}-{}", names[i0], names[j]),
            )
        }
        None => (g1, format!("C1-{}-axial", names[i0])),
    }
}

fn canon_axis(k: &KTuple, spec: &AxisSpec, ztol: f64) -> (Matrix3<f64>, String) {
    let names = ["x", "y", "z"];
    let vectors = [k.x, k.y, k.z];
    let pivot = vectors.iter().position(|v| {
        let (a, b) = plane_part(v, spec.plane);
        (a * a + b * b).sqrt() > ztol
    });
    let (g1, pattern) = match pivot {
        Some(i) => {
            let (a, b) = plane_part(&vectors[i], spec.plane);
            let theta = -b.atan2(a);
            ((spec.rot)(theta), format!("{}-pivot-{}", spec.label, names[i]))
        }
        None => (Matrix3::identity(), format!("{}-axial", spec.label)),
    };
    let rotated: Vec<Vector3<f64>> = vectors.iter().map(|v| g1 * v).collect();
    // sign freedom: the flip negates two components of every vector; make
    // the first non-negligible flip-sensitive entry positive
    let mut apply_flip = false;
    'scan: for v in &rotated {
        for comp in [spec.flip_components.0, spec.flip_components.1] {
            let e = v[comp];
            if e.abs() > ztol {
                apply_flip = e < 0.0;
                break 'scan;
            }
        }
    }
    let witness = if apply_flip { spec.flip * g1 } else { g1 };
    (witness, pattern)
}

fn flatten_triple(x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> [f64; 9] {
    [x[0], x[1], x[2], y[0], y[1], y[2], z[0], z[1], z[2]]
}

fn canon_t4(k: &KTuple, ztol: f64) -> (Matrix3<f64>, String) {
    let mut best: Option<(Matrix3<f64>, [f64; 9])> = None;
    for g in four_group() {
        let flat = flatten_triple(&(g * k.x), &(g * k.y), &(g * k.z));
        match &best {
            None => best = Some((g, flat)),
            Some((_, current)) => {
                // tolerance-aware lexicographic comparison
                for (a, b) in flat.iter().zip(current.iter()) {
                    if (a - b).abs() <= ztol {
                        continue;
                    }
                    if a > b {
                        best = Some((g, flat));
                    }
                    break;
                }
            }
        }
    }
    let (g, _) = best.expect("four candidates");
    (g, "C4-lexmax".into())
}

/// Move `κ` to the cross-section. Returns the canonical tuple, a pattern
/// identifier and the isotropy element `g` with `g·(x,y,z)` equal to the
/// canonical triple; `(d, λ)` are unchanged.
pub fn canonicalize(kappa: &KTuple, tol: f64) -> Result<CanonicalForm> {
    kappa.validate()?;
    let st = stratum(&kappa.d, BRANCH_TOL)?;
    let ztol = tol.max(1e-12) * triple_scale(kappa);
    let (witness, pattern_id) = match st.tag {
        StratumTag::T1 => canon_t1(kappa, ztol),
        StratumTag::T2 => canon_axis(kappa, &T2_SPEC, ztol),
        StratumTag::T3 => canon_axis(kappa, &T3_SPEC, ztol),
        StratumTag::T4 => canon_t4(kappa, ztol),
    };
    if !isotropy_contains(&kappa.d, &witness, 1e-10)? {
        return Err(Error::Defect(
            "canonicalization witness leaves the isotropy group".into(),
        ));
    }
    Ok(CanonicalForm {
        kappa: kappa.act(&witness),
        pattern_id,
        witness,
    })
}

/// Whether `κ` already lies in the cross-section, and under which pattern.
pub fn in_cross_section(kappa: &KTuple, tol: f64) -> Result<(bool, String)> {
    let canonical = canonicalize(kappa, BRANCH_TOL)?;
    let dist = triple_distance(kappa, &canonical.kappa);
    Ok((dist <= tol * triple_scale(kappa), canonical.pattern_id))
}

/// Isomorphism test: returns the rotation carrying the triple of `κ` to the
/// triple of `κ'`, when the two tuples name isomorphic algebras.
pub fn are_isomorphic(a: &KTuple, b: &KTuple, tol: f64) -> Result<Option<Matrix3<f64>>> {
    a.validate()?;
    b.validate()?;
    if (a.lambda - b.lambda).abs() > 1e-12 {
        return Ok(None);
    }
    // a morphism conjugating diagonal matrices in T forces d = d'
    if (a.d - b.d).norm() > tol * (1.0f64).max(a.d.norm()) {
        return Ok(None);
    }
    let st = stratum(&a.d, BRANCH_TOL)?;
    let scaled = tol * triple_scale(a).max(triple_scale(b));
    if st.tag == StratumTag::T4 {
        for g in four_group() {
            if triple_distance(&a.act(&g), b) <= scaled {
                return Ok(Some(g));
            }
        }
        return Ok(None);
    }
    let ca = canonicalize(a, BRANCH_TOL)?;
    let cb = canonicalize(b, BRANCH_TOL)?;
    if triple_distance(&ca.kappa, &cb.kappa) <= scaled {
        Ok(Some(cb.witness.transpose() * ca.witness))
    } else {
        Ok(None)
    }
}

/// The automorphism group of the named algebra, as the stabilizer of
/// `(x, y, z)` in the isotropy group of `δ_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AutType {
    FullRotationGroup,
    CircleGroup,
    Finite { order: usize },
    Trivial,
}

fn axis_aut(k: &KTuple, spec: &AxisSpec, ztol: f64) -> AutType {
    let vectors = [k.x, k.y, k.z];
    let pivot = vectors.iter().position(|v| {
        let (a, b) = plane_part(v, spec.plane);
        (a * a + b * b).sqrt() > ztol
    });
    let Some(i) = pivot else {
        // every rotation of the plane fixes the triple
        return AutType::CircleGroup;
    };
    // rotations other than the identity move the pivot; the only other
    // candidate is the flip-rotation mirroring across the pivot direction
    let (a, b) = plane_part(&vectors[i], spec.plane);
    let psi = b.atan2(a);
    let candidate = spec.flip * (spec.rot)((spec.rotoflip_theta)(psi));
    let fixes_all = vectors.iter().all(|v| (candidate * v - v).norm() <= ztol);
    if fixes_all {
        AutType::Finite { order: 2 }
    } else {
        AutType::Trivial
    }
}

pub fn aut_classification(kappa: &KTuple) -> Result<AutType> {
    kappa.validate()?;
    let st = stratum(&kappa.d, BRANCH_TOL)?;
    let ztol = BRANCH_TOL * triple_scale(kappa);
    let aut = match st.tag {
        StratumTag::T1 => {
            let m = Matrix3::from_columns(&[kappa.x, kappa.y, kappa.z]);
            if m.norm() <= ztol {
                AutType::FullRotationGroup
            } else {
                let rank = m
                    .svd(false, false)
                    .singular_values
                    .iter()
                    .filter(|s| **s > ztol)
                    .count();
                if rank <= 1 {
                    AutType::CircleGroup
                } else {
                    AutType::Trivial
                }
            }
        }
        StratumTag::T2 => axis_aut(kappa, &T2_SPEC, ztol),
        StratumTag::T3 => axis_aut(kappa, &T3_SPEC, ztol),
        StratumTag::T4 => {
            let order = four_group()
                .iter()
                .filter(|g| {
                    [kappa.x, kappa.y, kappa.z]
                        .iter()
                        .all(|v| (*g * v - v).norm() <= ztol)
                })
                .count();
            if order <= 1 {
                AutType::Trivial
            } else {
                AutType::Finite { order }
            }
        }
    };
    Ok(aut)
}

/// A canonical form together with the canonical algebra table.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub canonical: CanonicalForm,
    pub table: AlgebraTable,
}

/// Classify `κ`: compute its canonical form, build the canonical table, and
/// verify that the witness induces an algebra isomorphism onto it.
pub fn classify_algebra(kappa: &KTuple) -> Result<Classification> {
    let canonical = canonicalize(kappa, BRANCH_TOL)?;
    let source = kappa.build_pc_algebra()?;
    let table = canonical.kappa.build_pc_algebra()?;
    let mut phi = DMatrix::identity(4, 4);
    for i in 0..3 {
        for j in 0..3 {
            phi[(i + 1, j + 1)] = canonical.witness[(i, j)];
        }
    }
    let (ok, residual) = source.is_algebra_morphism(&table, &phi, 1e-9)?;
    if !ok {
        return Err(Error::Defect(format!(
            "canonical witness is not an algebra morphism (residual {residual:.3e})"
        )));
    }
    Ok(Classification { canonical, table })
}
