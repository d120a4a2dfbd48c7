//! Triangle shape space.
//!
//! A [`Configuration`] holds three labelled landmarks `A`, `B`, `C` in
//! `p`-dimensional feature space, stored as a `3 x p` matrix (one row per
//! landmark). Removing location, scale and orientation maps every
//! non-degenerate configuration to a point of the closed unit disk: the
//! origin is the equilateral triangle and the boundary circle holds the
//! collinear triangles.
//!
//! The map goes `X -> E = X'T -> M = E Delta' -> (r, phi)`, where `T` is the
//! pairwise difference matrix and `Delta` the `2 x 3` Helmert submatrix.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use nalgebra::{DMatrix, Matrix2, Matrix2x3, Matrix3};
use serde::Serialize;

use crate::error::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Tolerance used when checking that a point lies inside the closed disk.
pub const DISK_TOLERANCE: f64 = 1e-9;

/// Below this gap between the normalized singular values the polar angle is
/// numerically meaningless.
pub const ANGLE_DEGENERACY_GAP: f64 = 1e-10;

/// Polar angle of the `B`-midpoint triangle.
pub const MIDPOINT_ANGLE: f64 = FRAC_PI_3;

/// Landmark (or group) label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Group {
    A,
    B,
    C,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::A, Group::B, Group::C];

    pub fn index(self) -> usize {
        match self {
            Group::A => 0,
            Group::B => 1,
            Group::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Group> {
        Group::ALL.get(i).copied()
    }
}

/// The `2 x 3` Helmert submatrix. Its rows are orthonormal contrasts.
pub fn helmert() -> Matrix2x3<f64> {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6.0_f64.sqrt();
    Matrix2x3::new(s2, -s2, 0.0, s6, s6, -2.0 * s6)
}

/// Pairwise difference matrix `T`; `X'T` yields the edge vectors.
pub fn pairwise_difference() -> Matrix3<f64> {
    Matrix3::new(1.0, -1.0, 0.0, 0.0, 1.0, -1.0, -1.0, 0.0, 1.0)
}

/// Three landmarks in `p`-space.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    landmarks: DMatrix<f64>,
}

impl Configuration {
    /// Builds a configuration from the three landmark coordinate vectors.
    ///
    /// One-dimensional input is embedded in the plane by appending a zero
    /// coordinate, which keeps every pairwise distance.
    pub fn new(a: &[f64], b: &[f64], c: &[f64]) -> Result<Self> {
        let p = a.len();
        if p == 0 {
            return Err(Error::InvalidConfiguration(
                "landmarks must have at least one coordinate".into(),
            ));
        }
        for other in [b, c] {
            if other.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: other.len(),
                });
            }
        }
        let rows = [a, b, c];
        let m = DMatrix::from_fn(3, p, |i, j| rows[i][j]);
        Self::from_matrix(m)
    }

    /// Builds a configuration from a `3 x p` matrix whose rows are `A`, `B`, `C`.
    pub fn from_matrix(landmarks: DMatrix<f64>) -> Result<Self> {
        if landmarks.nrows() != 3 {
            return Err(Error::InvalidConfiguration(format!(
                "expected 3 landmarks, found {}",
                landmarks.nrows()
            )));
        }
        if landmarks.ncols() == 0 {
            return Err(Error::InvalidConfiguration(
                "landmarks must have at least one coordinate".into(),
            ));
        }
        if landmarks.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfiguration(
                "coordinates must be finite".into(),
            ));
        }
        let landmarks = if landmarks.ncols() == 1 {
            landmarks.insert_column(1, 0.0)
        } else {
            landmarks
        };
        Ok(Configuration { landmarks })
    }

    /// Ambient dimension `p` (at least 2 after embedding).
    pub fn dim(&self) -> usize {
        self.landmarks.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.landmarks
    }

    pub fn landmark(&self, g: Group) -> Vec<f64> {
        self.landmarks.row(g.index()).iter().copied().collect()
    }

    /// Frobenius norm of the centered configuration.
    pub fn centroid_size(&self) -> f64 {
        center(self).landmarks.norm()
    }

    /// True when all three landmarks coincide up to a relative tolerance.
    pub fn is_degenerate(&self) -> bool {
        let magnitude = self.landmarks.amax();
        self.centroid_size() < 1e-12 * (1.0 + magnitude)
    }

    fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateConfiguration)
        } else {
            Ok(())
        }
    }

    fn squared_distance(&self, i: Group, j: Group) -> f64 {
        (self.landmarks.row(i.index()) - self.landmarks.row(j.index())).norm_squared()
    }
}

/// Edge vectors as the columns of a `p x 3` matrix.
///
/// Columns are `A - C`, `B - A`, `C - B`, i.e. `E = X'T` for the `3 x p`
/// configuration matrix `X`. The columns always sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMatrix(DMatrix<f64>);

impl EdgeMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Unit-norm Helmertized configuration (`2 x p`).
#[derive(Debug, Clone, PartialEq)]
pub struct PreShape(DMatrix<f64>);

impl PreShape {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.ncols()
    }
}

/// A point of the unit disk representing a triangle shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapePoint {
    r: f64,
    phi: f64,
    u: f64,
    v: f64,
    angle_degenerate: bool,
}

impl ShapePoint {
    /// From polar coordinates. The angle is reduced into `[0, 2pi)`.
    pub fn from_polar(r: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && phi.is_finite()) || !(0.0..=1.0 + DISK_TOLERANCE).contains(&r) {
            return Err(Error::OutOfDisk {
                u: r * phi.cos(),
                v: r * phi.sin(),
            });
        }
        let r = r.min(1.0);
        let phi = reduce_angle(phi);
        Ok(ShapePoint {
            r,
            phi,
            u: r * phi.cos(),
            v: r * phi.sin(),
            angle_degenerate: r < ANGLE_DEGENERACY_GAP,
        })
    }

    /// From rectangular coordinates.
    pub fn from_rect(u: f64, v: f64) -> Result<Self> {
        let r = u.hypot(v);
        if !r.is_finite() || r > 1.0 + DISK_TOLERANCE {
            return Err(Error::OutOfDisk { u, v });
        }
        let (u, v, r) = if r > 1.0 { (u / r, v / r, 1.0) } else { (u, v, r) };
        let angle_degenerate = r < ANGLE_DEGENERACY_GAP;
        let phi = if angle_degenerate { 0.0 } else { reduce_angle(v.atan2(u)) };
        Ok(ShapePoint {
            r,
            phi,
            u,
            v,
            angle_degenerate,
        })
    }

    /// The `B`-midpoint triangle, `(r, phi) = (1, pi/3)`.
    pub fn midpoint() -> Self {
        ShapePoint {
            r: 1.0,
            phi: MIDPOINT_ANGLE,
            u: 0.5,
            v: SQRT_3 / 2.0,
            angle_degenerate: false,
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Set when the angle carries no information (equilateral or nearly so).
    pub fn angle_degenerate(&self) -> bool {
        self.angle_degenerate
    }
}

/// Squared side lengths normalized to sum to one.
///
/// `a` is opposite landmark `A` (segment `BC`), `b` is opposite `B`
/// (segment `AC`), `c` is opposite `C` (segment `AB`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideLengths {
    a2: f64,
    b2: f64,
    c2: f64,
}

impl SideLengths {
    /// Normalizes nonnegative squared lengths by their sum.
    pub fn from_squared(a2: f64, b2: f64, c2: f64) -> Result<Self> {
        let total = a2 + b2 + c2;
        if [a2, b2, c2].iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::DomainError(
                "squared side lengths must be finite and nonnegative".into(),
            ));
        }
        if total <= 0.0 {
            return Err(Error::DegenerateConfiguration);
        }
        Ok(SideLengths {
            a2: a2 / total,
            b2: b2 / total,
            c2: c2 / total,
        })
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a2, self.b2, self.c2]
    }
}

/// Kendall's spherical coordinates on the hemisphere of radius 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KendallSpherical {
    pub theta: f64,
    pub psi: f64,
}

impl KendallSpherical {
    /// Cartesian point on the hemisphere.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        [
            0.5 * st * self.psi.cos(),
            0.5 * st * self.psi.sin(),
            0.5 * ct,
        ]
    }

    /// Disk point via `r = sin(theta)`, `phi = 2pi/3 - psi`.
    pub fn to_shape_point(&self) -> Result<ShapePoint> {
        ShapePoint::from_polar(self.theta.sin(), 2.0 * FRAC_PI_3 - self.psi)
    }
}

/// Singular values and right rotation of the normalized transformation
/// matrix `M / |M|`, so that `d1^2 + d2^2 = 1` and `d1 >= d2 >= 0`.
///
/// The right singular vectors are `(cos(phi/2), sin(phi/2))` and its
/// clockwise quarter turn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSvd {
    pub d1: f64,
    pub d2: f64,
    pub half_angle: f64,
}

fn reduce_angle(phi: f64) -> f64 {
    let a = phi.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Subtracts the landmark mean.
pub fn center(config: &Configuration) -> Configuration {
    let mut m = config.landmarks.clone();
    for j in 0..m.ncols() {
        let mean = m.column(j).mean();
        m.column_mut(j).add_scalar_mut(-mean);
    }
    Configuration { landmarks: m }
}

pub fn edge_matrix(config: &Configuration) -> EdgeMatrix {
    let t = pairwise_difference();
    let t = DMatrix::from_fn(3, 3, |i, j| t[(i, j)]);
    EdgeMatrix(config.landmarks.transpose() * t)
}

/// Raw `p x 2` transformation matrix `M = E Delta'`.
pub fn transformation_matrix(config: &Configuration) -> DMatrix<f64> {
    let d = helmert();
    let dt = DMatrix::from_fn(3, 2, |i, j| d[(j, i)]);
    edge_matrix(config).0 * dt
}

/// Closed-form singular structure of `M`, computed from the `2 x 2` Gram
/// matrix `M'M`.
pub fn shape_svd(config: &Configuration) -> Result<ShapeSvd> {
    let (u, v) = normalized_gram_coordinates(config)?;
    let r = u.hypot(v).min(1.0);
    Ok(ShapeSvd {
        d1: ((1.0 + r) / 2.0).sqrt(),
        d2: ((1.0 - r) / 2.0).max(0.0).sqrt(),
        half_angle: 0.5 * reduce_angle(v.atan2(u)),
    })
}

/// `M` with its left singular vectors discarded and scale removed: the
/// `2 x 2` matrix `D V'` with rows `d1 (cos, sin)(phi/2)` and
/// `d2 (sin, -cos)(phi/2)`.
pub fn canonical_transformation(config: &Configuration) -> Result<Matrix2<f64>> {
    let svd = shape_svd(config)?;
    let (s, c) = svd.half_angle.sin_cos();
    Ok(Matrix2::new(svd.d1 * c, svd.d1 * s, svd.d2 * s, -svd.d2 * c))
}

// (u, v) read directly off the normalized Gram matrix G = M'M / tr(M'M):
// u = g11 - g22, v = 2 g12.
fn normalized_gram_coordinates(config: &Configuration) -> Result<(f64, f64)> {
    config.ensure_nondegenerate()?;
    let m = transformation_matrix(config);
    let g = m.transpose() * &m;
    let trace = g[(0, 0)] + g[(1, 1)];
    if trace <= 0.0 || !trace.is_finite() {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(((g[(0, 0)] - g[(1, 1)]) / trace, 2.0 * g[(0, 1)] / trace))
}

/// Polar and rectangular shape coordinates of a configuration.
pub fn shape_point(config: &Configuration) -> Result<ShapePoint> {
    let (u, v) = normalized_gram_coordinates(config)?;
    let r = u.hypot(v);
    let (u, v, r) = if r > 1.0 { (u / r, v / r, 1.0) } else { (u, v, r) };
    // d1 - d2 = r / (d1 + d2) with d1^2 + d2^2 = 1
    let d1 = ((1.0 + r) / 2.0).sqrt();
    let d2 = ((1.0 - r) / 2.0).max(0.0).sqrt();
    let angle_degenerate = r == 0.0 || d1 - d2 < ANGLE_DEGENERACY_GAP;
    let phi = if r == 0.0 { 0.0 } else { reduce_angle(v.atan2(u)) };
    Ok(ShapePoint {
        r,
        phi,
        u,
        v,
        angle_degenerate,
    })
}

pub fn side_lengths(config: &Configuration) -> Result<SideLengths> {
    config.ensure_nondegenerate()?;
    SideLengths::from_squared(
        config.squared_distance(Group::B, Group::C),
        config.squared_distance(Group::A, Group::C),
        config.squared_distance(Group::A, Group::B),
    )
}

/// Maps a disk point to normalized squared side lengths.
///
/// `b^2 = (1 + u/2 + sqrt(3) v/2) / 3`, `a^2 = (1 - u) / 3`,
/// `c^2 = (1 + u/2 - sqrt(3) v/2) / 3`.
pub fn sides_from_shape(sp: &ShapePoint) -> Result<SideLengths> {
    let (u, v) = (sp.u, sp.v);
    if u * u + v * v > 1.0 + DISK_TOLERANCE {
        return Err(Error::OutOfDisk { u, v });
    }
    let half_root3_v = 0.5 * SQRT_3 * v;
    let a2 = ((1.0 - u) / 3.0).max(0.0);
    let b2 = ((1.0 + 0.5 * u + half_root3_v) / 3.0).max(0.0);
    let c2 = ((1.0 + 0.5 * u - half_root3_v) / 3.0).max(0.0);
    SideLengths::from_squared(a2, b2, c2)
}

/// `Z = Delta X / |Delta X|`.
pub fn preshape(config: &Configuration) -> Result<PreShape> {
    config.ensure_nondegenerate()?;
    let d = helmert();
    let d = DMatrix::from_fn(2, 3, |i, j| d[(i, j)]);
    let hx = d * &config.landmarks;
    let norm = hx.norm();
    if norm <= 0.0 {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(PreShape(hx / norm))
}

/// Riemannian shape distance `arccos(sum of singular values of Z1'Z2)`.
pub fn riemannian_distance_preshape(z1: &PreShape, z2: &PreShape) -> Result<f64> {
    if z1.dim() != z2.dim() {
        return Err(Error::DimensionMismatch {
            expected: z1.dim(),
            found: z2.dim(),
        });
    }
    let inner = z1.0.transpose() * &z2.0;
    let total: f64 = inner.singular_values().iter().sum();
    Ok(total.clamp(-1.0, 1.0).acos())
}

fn ensure_in_disk(s: &ShapePoint) -> Result<()> {
    if s.r > 1.0 + DISK_TOLERANCE || !s.r.is_finite() {
        Err(Error::OutOfDisk { u: s.u, v: s.v })
    } else {
        Ok(())
    }
}

/// Riemannian shape distance between two disk points.
pub fn riemannian_distance_disk(s1: &ShapePoint, s2: &ShapePoint) -> Result<f64> {
    ensure_in_disk(s1)?;
    ensure_in_disk(s2)?;
    let height = ((1.0 - s1.r * s1.r).max(0.0) * (1.0 - s2.r * s2.r).max(0.0)).sqrt();
    let c = s1.u * s2.u + s1.v * s2.v + height;
    Ok(0.5 * c.clamp(-1.0, 1.0).acos())
}

/// Riemannian distance to the `B`-midpoint triangle, `acos(r cos(phi - pi/3)) / 2`.
pub fn distance_to_midpoint(s: &ShapePoint) -> f64 {
    let c = 0.5 * s.u + 0.5 * SQRT_3 * s.v;
    0.5 * c.clamp(-1.0, 1.0).acos()
}

/// Kendall's spherical coordinates, from the Helmertized landmarks.
///
/// With Helmert rows `h1`, `h2` read as complex numbers `z1`, `z2`, the
/// Kendall point is `(-(|z1|^2 - |z2|^2)/2, Re(z2 conj z1), |Im(z2 conj z1)|)`
/// divided by `|z1|^2 + |z2|^2`. Any `p` works because only inner products
/// of `h1`, `h2` enter.
pub fn kendall_spherical(config: &Configuration) -> Result<KendallSpherical> {
    config.ensure_nondegenerate()?;
    let d = helmert();
    let d = DMatrix::from_fn(2, 3, |i, j| d[(i, j)]);
    let hx = d * &config.landmarks;
    let h1 = hx.row(0);
    let h2 = hx.row(1);
    let n1 = h1.norm_squared();
    let n2 = h2.norm_squared();
    let dot = h1.dot(&h2);
    let cross = (n1 * n2 - dot * dot).max(0.0).sqrt();
    let total = n1 + n2;
    let x = -(n1 - n2) / (2.0 * total);
    let y = dot / total;
    let z = cross / total;
    let theta = x.hypot(y).atan2(z);
    let psi = if x == 0.0 && y == 0.0 {
        0.0
    } else {
        reduce_angle(y.atan2(x))
    };
    Ok(KendallSpherical {
        theta: theta.clamp(0.0, PI / 2.0),
        psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Configuration {
        Configuration::new(&a, &b, &c).unwrap()
    }

    fn equilateral() -> Configuration {
        cfg([0.0, 0.0], [1.0, 0.0], [0.5, SQRT_3 / 2.0])
    }

    fn midpoint_triangle() -> Configuration {
        cfg([0.0, 0.0], [1.0, 0.0], [2.0, 0.0])
    }

    fn iris_sepal() -> Configuration {
        cfg([5.006, 3.428], [5.936, 2.770], [6.588, 2.974])
    }

    #[test]
    fn helmert_rows_are_orthonormal() {
        let d = helmert();
        let prod = d * d.transpose();
        assert_abs_diff_eq!(prod, Matrix2::identity(), epsilon = 1e-15);
    }

    #[test]
    fn centering_subtracts_mean() {
        let c = center(&cfg([0.0, 0.0], [2.0, 0.0], [1.0, 3.0]));
        let expected = [[-1.0, -1.0], [1.0, -1.0], [0.0, 2.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_abs_diff_eq!(c.matrix()[(i, j)], *x, epsilon = 1e-15);
            }
        }
        assert_eq!(center(&c), c);
    }

    #[test]
    fn centering_iris_sepal() {
        let x = cfg([5.01, 3.43], [5.94, 2.77], [6.59, 2.97]);
        let c = center(&x);
        let mean = [(5.01 + 5.94 + 6.59) / 3.0, (3.43 + 2.77 + 2.97) / 3.0];
        for g in Group::ALL {
            let orig = x.landmark(g);
            let cent = c.landmark(g);
            for j in 0..2 {
                assert_abs_diff_eq!(cent[j], orig[j] - mean[j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn edge_matrix_of_iris_sepal() {
        let e = edge_matrix(&cfg([5.01, 3.43], [5.94, 2.77], [6.59, 2.97]));
        let m = e.matrix();
        let expected = [[-1.58, 0.93, 0.65], [0.46, -0.66, 0.20]];
        for i in 0..2 {
            for j in 0..3 {
                assert_abs_diff_eq!(m[(i, j)], expected[i][j], epsilon = 1e-12);
            }
            assert_abs_diff_eq!(m.row(i).sum(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn edge_matrix_special_cases() {
        let e = edge_matrix(&equilateral());
        for j in 0..3 {
            assert_abs_diff_eq!(e.matrix().column(j).norm(), 1.0, epsilon = 1e-12);
        }
        let e = edge_matrix(&cfg([1.0, 2.0], [1.0, 2.0], [1.0, 2.0]));
        assert!(e.matrix().iter().all(|x| *x == 0.0));
        assert!(transformation_matrix(&cfg([1.0, 2.0], [1.0, 2.0], [1.0, 2.0]))
            .iter()
            .all(|x| *x == 0.0));
    }

    #[test]
    fn transformation_matrix_recovers_edges() {
        let x = cfg([0.3, -1.2], [2.2, 0.7], [-0.4, 1.9]);
        let m = transformation_matrix(&x);
        let d = helmert();
        let d = DMatrix::from_fn(2, 3, |i, j| d[(i, j)]);
        let e = m * d;
        assert_abs_diff_eq!(e, edge_matrix(&x).0, epsilon = 1e-12);
    }

    #[test]
    fn iris_canonical_transformation_matches_worked_example() {
        let m = canonical_transformation(&iris_sepal()).unwrap();
        let expected = Matrix2::new(0.915, 0.319, 0.081, -0.233);
        assert_abs_diff_eq!(m, expected, epsilon = 0.002);
        let svd = shape_svd(&iris_sepal()).unwrap();
        assert_abs_diff_eq!(svd.d1, 0.969, epsilon = 0.002);
        assert_abs_diff_eq!(svd.d2, 0.247, epsilon = 0.002);
    }

    #[test]
    fn iris_polar_coordinates() {
        let sp = shape_point(&iris_sepal()).unwrap();
        assert_abs_diff_eq!(sp.r(), 0.877, epsilon = 0.002);
        assert_abs_diff_eq!(sp.phi(), 0.214 * PI, epsilon = 0.002 * PI);
    }

    #[test]
    fn midpoint_triangle_coordinates() {
        let sp = shape_point(&midpoint_triangle()).unwrap();
        assert_abs_diff_eq!(sp.r(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.phi(), FRAC_PI_3, epsilon = 1e-12);
        let s = side_lengths(&midpoint_triangle()).unwrap();
        assert_abs_diff_eq!(s.a2(), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b2(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.c2(), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn equilateral_is_origin_with_flag() {
        let sp = shape_point(&equilateral()).unwrap();
        assert!(sp.r() < 1e-12);
        assert!(sp.angle_degenerate());
        let s = side_lengths(&equilateral()).unwrap();
        for x in s.as_array() {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coincident_landmarks_are_rejected() {
        let x = cfg([1.0, 1.0], [1.0, 1.0], [1.0, 1.0]);
        assert_eq!(shape_point(&x), Err(Error::DegenerateConfiguration));
        assert_eq!(side_lengths(&x), Err(Error::DegenerateConfiguration));
        assert_eq!(preshape(&x), Err(Error::DegenerateConfiguration));
        assert_eq!(kendall_spherical(&x), Err(Error::DegenerateConfiguration));
    }

    #[test]
    fn invalid_configurations() {
        assert!(matches!(
            Configuration::new(&[0.0, 1.0], &[0.0], &[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Configuration::new(&[], &[], &[]).is_err());
        assert!(Configuration::new(&[f64::NAN, 0.0], &[0.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn one_dimensional_input_is_embedded() {
        let x = Configuration::new(&[0.0], &[1.0], &[2.0]).unwrap();
        assert_eq!(x.dim(), 2);
        let sp = shape_point(&x).unwrap();
        assert_abs_diff_eq!(sp.phi(), FRAC_PI_3, epsilon = 1e-12);
    }

    #[test]
    fn three_four_five_sides() {
        let s = side_lengths(&cfg([0.0, 0.0], [3.0, 0.0], [0.0, 4.0])).unwrap();
        assert_abs_diff_eq!(s.a2(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b2(), 0.32, epsilon = 1e-15);
        assert_abs_diff_eq!(s.c2(), 0.18, epsilon = 1e-15);
        let via_disk =
            sides_from_shape(&shape_point(&cfg([0.0, 0.0], [3.0, 0.0], [0.0, 4.0])).unwrap())
                .unwrap();
        assert_abs_diff_eq!(via_disk.a2(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(via_disk.c2(), 0.18, epsilon = 1e-12);
    }

    #[test]
    fn sides_from_shape_examples() {
        let s = sides_from_shape(&ShapePoint::from_rect(0.0, 0.0).unwrap()).unwrap();
        for x in s.as_array() {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
        }
        let s = sides_from_shape(&ShapePoint::from_rect(0.5, SQRT_3 / 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(s.a2(), 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.b2(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.c2(), 1.0 / 6.0, epsilon = 1e-12);
        assert!(matches!(
            ShapePoint::from_rect(1.0, 0.1),
            Err(Error::OutOfDisk { .. })
        ));
    }

    #[test]
    fn preshape_is_unit_and_scale_free() {
        let x = cfg([0.3, -1.2], [2.2, 0.7], [-0.4, 1.9]);
        let z = preshape(&x).unwrap();
        assert_abs_diff_eq!(z.matrix().norm(), 1.0, epsilon = 1e-12);
        let moved = Configuration::from_matrix(x.matrix().map(|t| 5.0 * t).add_scalar(3.5)).unwrap();
        assert_abs_diff_eq!(*preshape(&moved).unwrap().matrix(), *z.matrix(), epsilon = 1e-12);
    }

    #[test]
    fn preshape_singular_values() {
        let z = preshape(&equilateral()).unwrap();
        let s = z.matrix().singular_values();
        for x in s.iter() {
            assert_abs_diff_eq!(*x, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        }
        let z = preshape(&midpoint_triangle()).unwrap();
        assert_eq!(z.matrix().rank(1e-12), 1);
    }

    #[test]
    fn preshape_distance_examples() {
        let z = preshape(&cfg([0.3, -1.2], [2.2, 0.7], [-0.4, 1.9])).unwrap();
        assert_abs_diff_eq!(riemannian_distance_preshape(&z, &z).unwrap(), 0.0, epsilon = 1e-7);
        let eq = preshape(&equilateral()).unwrap();
        let deg = preshape(&cfg([0.0, 0.0], [3.0, 0.0], [1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(
            riemannian_distance_preshape(&eq, &deg).unwrap(),
            PI / 4.0,
            epsilon = 1e-12
        );
        let three = preshape(&Configuration::new(&[0.0; 3], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap())
            .unwrap();
        assert!(matches!(
            riemannian_distance_preshape(&eq, &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn disk_distance_examples() {
        let s = ShapePoint::from_polar(0.4, 1.0).unwrap();
        assert_eq!(riemannian_distance_disk(&s, &s).unwrap(), 0.0);
        let a = ShapePoint::from_polar(1.0, FRAC_PI_3).unwrap();
        let b = ShapePoint::from_polar(1.0, FRAC_PI_3 + PI).unwrap();
        assert_abs_diff_eq!(riemannian_distance_disk(&a, &b).unwrap(), PI / 2.0, epsilon = 1e-7);
        let s1 = ShapePoint::from_polar(0.3, 2.0).unwrap();
        let s2 = ShapePoint::from_polar(1.0, 0.7).unwrap();
        let euclid = s1.u() * s2.u() + s1.v() * s2.v();
        assert_abs_diff_eq!(
            riemannian_distance_disk(&s1, &s2).unwrap(),
            0.5 * euclid.acos(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn midpoint_distance_examples() {
        assert_abs_diff_eq!(distance_to_midpoint(&ShapePoint::midpoint()), 0.0, epsilon = 1e-7);
        let origin = ShapePoint::from_rect(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(distance_to_midpoint(&origin), PI / 4.0, epsilon = 1e-15);
        let antipode = ShapePoint::from_polar(1.0, FRAC_PI_3 - PI).unwrap();
        assert_abs_diff_eq!(distance_to_midpoint(&antipode), PI / 2.0, epsilon = 1e-7);
        // The "-pi/2 + pi/3" boundary point is a right angle away, not the antipode.
        let quarter = ShapePoint::from_polar(1.0, FRAC_PI_3 - PI / 2.0).unwrap();
        assert_abs_diff_eq!(distance_to_midpoint(&quarter), PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn a_equal_c_is_the_antipode_of_the_midpoint() {
        let sp = shape_point(&cfg([0.0, 0.0], [1.0, 0.0], [0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(sp.r(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.phi(), FRAC_PI_3 + PI, epsilon = 1e-12);
    }

    #[test]
    fn kendall_examples() {
        let k = kendall_spherical(&equilateral()).unwrap();
        assert_abs_diff_eq!(k.theta, 0.0, epsilon = 1e-8);
        let k = kendall_spherical(&midpoint_triangle()).unwrap();
        assert_abs_diff_eq!(k.theta, PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(k.psi, FRAC_PI_3, epsilon = 1e-12);
        let back = k.to_shape_point().unwrap();
        assert_abs_diff_eq!(back.phi(), FRAC_PI_3, epsilon = 1e-12);
        let c = k.to_cartesian();
        assert_abs_diff_eq!(c.iter().map(|x| x * x).sum::<f64>(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn kendall_handles_coincident_a_and_b() {
        let k = kendall_spherical(&cfg([1.0, 1.0], [1.0, 1.0], [4.0, 0.0])).unwrap();
        let sp = shape_point(&cfg([1.0, 1.0], [1.0, 1.0], [4.0, 0.0])).unwrap();
        assert_abs_diff_eq!(k.theta.sin(), sp.r(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            (2.0 * FRAC_PI_3 - k.psi).rem_euclid(TAU),
            sp.phi(),
            epsilon = 1e-12
        );
    }
}
