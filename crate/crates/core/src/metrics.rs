//! In-betweenness indices and closed-form null shape densities.
//!
//! Both indices measure how close landmark `B` is to sitting between `A`
//! and `C`. `gamma` is the cosine of the exterior angle at `B`; `tau` is
//! `cos(2 rho)` for the Riemannian distance `rho` to the `B`-midpoint
//! triangle, which simplifies to `3 b^2 - 1`.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::shape::{self, Configuration, ShapePoint, SideLengths, DISK_TOLERANCE};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Observed pair of indices. `gamma` is `None` when side `a` or `c` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IbiPair {
    pub gamma: Option<f64>,
    pub tau: f64,
}

/// Parameters of the null and offset-normal shape densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullDensityParams {
    p: usize,
    kappa: f64,
}

impl NullDensityParams {
    pub fn new(p: usize, kappa: f64) -> Result<Self> {
        check_dim(p)?;
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::DomainError(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(NullDensityParams { p, kappa })
    }

    /// `kappa = S^2 / (4 sigma^2)` for centroid size `S` of the mean configuration.
    pub fn from_centroid_size(p: usize, centroid_size: f64, sigma2: f64) -> Result<Self> {
        if sigma2.is_nan() || sigma2 <= 0.0 {
            return Err(Error::DomainError("sigma2 must be positive".into()));
        }
        Self::new(p, centroid_size * centroid_size / (4.0 * sigma2))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Every shape statistic of one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeStatistics {
    pub tau: f64,
    pub gamma: Option<f64>,
    pub r: f64,
    pub phi: f64,
    pub u: f64,
    pub v: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
}

impl ShapeStatistics {
    pub fn from_configuration(config: &Configuration) -> Result<Self> {
        let sp = shape::shape_point(config)?;
        let sides = shape::side_lengths(config)?;
        Ok(Self::from_parts(&sp, &sides))
    }

    /// Statistics of a disk point; side lengths follow from the linear map.
    pub fn from_shape_point(sp: &ShapePoint) -> Result<Self> {
        let sides = shape::sides_from_shape(sp)?;
        Ok(Self::from_parts(sp, &sides))
    }

    fn from_parts(sp: &ShapePoint, sides: &SideLengths) -> Self {
        ShapeStatistics {
            tau: tau_ibi(sp),
            gamma: cosine_ibi(sides).ok(),
            r: sp.r(),
            phi: sp.phi(),
            u: sp.u(),
            v: sp.v(),
            a2: sides.a2(),
            b2: sides.b2(),
            c2: sides.c2(),
        }
    }

    pub fn ibi(&self) -> IbiPair {
        IbiPair {
            gamma: self.gamma,
            tau: self.tau,
        }
    }

    pub fn shape_point(&self) -> ShapePoint {
        // u, v came from a valid ShapePoint, so this cannot leave the disk.
        ShapePoint::from_rect(self.u, self.v).expect("stored point lies in the disk")
    }
}

fn check_dim(p: usize) -> Result<()> {
    if p < 2 {
        Err(Error::DomainError(format!("dimension p must be >= 2, got {p}")))
    } else {
        Ok(())
    }
}

/// `gamma = cos(pi - B) = (2 b^2 - 1) / (2 a c)`.
pub fn cosine_ibi(sides: &SideLengths) -> Result<f64> {
    if sides.a2() <= 0.0 || sides.c2() <= 0.0 {
        return Err(Error::UndefinedCosineIbi);
    }
    let g = (2.0 * sides.b2() - 1.0) / (2.0 * (sides.a2() * sides.c2()).sqrt());
    Ok(g.clamp(-1.0, 1.0))
}

/// `tau = u/2 + sqrt(3) v / 2`, equivalently `r cos(phi - pi/3)` or `3 b^2 - 1`.
pub fn tau_ibi(sp: &ShapePoint) -> f64 {
    (0.5 * sp.u() + 0.5 * SQRT_3 * sp.v()).clamp(-1.0, 1.0)
}

/// `tau` from side lengths.
pub fn tau_from_sides(sides: &SideLengths) -> f64 {
    3.0 * sides.b2() - 1.0
}

/// Radial null density `(p - 1) r (1 - r^2)^((p - 3) / 2)` for iid normal landmarks.
pub fn null_density_polar(r: f64, p: usize) -> Result<f64> {
    check_dim(p)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::DomainError(format!("radius {r} outside [0, 1]")));
    }
    let pf = p as f64;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok((pf - 1.0) * r * (1.0 - r * r).powf((pf - 3.0) / 2.0))
}

/// Distribution function of the radius: `1 - (1 - r^2)^((p - 1) / 2)`.
pub fn null_cdf_polar(r: f64, p: usize) -> Result<f64> {
    check_dim(p)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::DomainError(format!("radius {r} outside [0, 1]")));
    }
    Ok(1.0 - (1.0 - r * r).powf((p as f64 - 1.0) / 2.0))
}

/// Joint null density of `(u, v)`: `((p - 1) / 2 pi) (1 - u^2 - v^2)^((p - 3) / 2)`.
pub fn null_density_uv(u: f64, v: f64, p: usize) -> Result<f64> {
    check_dim(p)?;
    let s = u * u + v * v;
    if !s.is_finite() || s > 1.0 + DISK_TOLERANCE {
        return Err(Error::DomainError(format!("({u}, {v}) outside the unit disk")));
    }
    let pf = p as f64;
    Ok((pf - 1.0) / (2.0 * PI) * (1.0 - s).max(0.0).powf((pf - 3.0) / 2.0))
}

fn sides_discriminant(sides: &SideLengths) -> Result<f64> {
    let (a, b, c) = (sides.a2(), sides.b2(), sides.c2());
    let q = -0.25 + a * b + a * c + b * c;
    if q < -1e-12 {
        return Err(Error::DomainError(format!(
            "side lengths ({a}, {b}, {c}) violate the triangle inequality"
        )));
    }
    Ok(q.max(0.0))
}

/// Joint null density of the squared side lengths in the printed form
/// `(3 (p - 1) / 2 pi) (-1/4 + a^2 b^2 + a^2 c^2 + b^2 c^2)^((p - 3) / 2)`.
///
/// The discriminant equals `(1 - r^2) / 12`, so this is proportional to
/// [`null_density_uv`] with ratio `3 * 12^((3 - p) / 2)`; it is a density
/// only for `p = 3`. [`null_density_sides_chart`] is the normalized version.
pub fn null_density_sides(sides: &SideLengths, p: usize) -> Result<f64> {
    check_dim(p)?;
    let q = sides_discriminant(sides)?;
    let pf = p as f64;
    Ok(3.0 * (pf - 1.0) / (2.0 * PI) * q.powf((pf - 3.0) / 2.0))
}

/// Null density of `(a^2, b^2)` with respect to Lebesgue measure, `c^2`
/// being determined by the other two. Integrates to one over the region of
/// valid triangles.
pub fn null_density_sides_chart(sides: &SideLengths, p: usize) -> Result<f64> {
    check_dim(p)?;
    let q = sides_discriminant(sides)?;
    let pf = p as f64;
    // |d(u, v) / d(a^2, b^2)| = 18 / sqrt(3) = 6 sqrt(3)
    Ok(6.0 * SQRT_3 * (pf - 1.0) / (2.0 * PI) * (12.0 * q).powf((pf - 3.0) / 2.0))
}

/// Null density of `tau`: `Gamma((p + 1)/2) / (sqrt(pi) Gamma(p/2)) (1 - t^2)^((p - 2)/2)`.
pub fn tau_null_density(t: f64, p: usize) -> Result<f64> {
    check_dim(p)?;
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::DomainError(format!("tau {t} outside [-1, 1]")));
    }
    let pf = p as f64;
    let log_c = ln_gamma((pf + 1.0) / 2.0) - 0.5 * PI.ln() - ln_gamma(pf / 2.0);
    Ok(log_c.exp() * (1.0 - t * t).powf((pf - 2.0) / 2.0))
}

/// Distribution function of `tau`, using `(tau + 1) / 2 ~ Beta(p/2, p/2)`.
pub fn tau_null_cdf(t: f64, p: usize) -> Result<f64> {
    check_dim(p)?;
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::DomainError(format!("tau {t} outside [-1, 1]")));
    }
    let half = p as f64 / 2.0;
    let beta = Beta::new(half, half).map_err(|e| Error::DomainError(e.to_string()))?;
    Ok(beta.cdf((t + 1.0) / 2.0))
}

/// Unnormalized offset-normal shape kernel for isotropic landmarks,
/// `{1 + kappa (1 + cos 2 rho)} exp{-kappa (1 - cos 2 rho)}`.
///
/// The normalizing constant is not supplied; compare values only for a
/// fixed `kappa`.
pub fn offset_normal_density(rho: f64, kappa: f64) -> Result<f64> {
    if !(0.0..=PI / 2.0).contains(&rho) {
        return Err(Error::DomainError(format!("rho {rho} outside [0, pi/2]")));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::DomainError(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    let c = (2.0 * rho).cos();
    Ok((1.0 + kappa * (1.0 + c)) * (-kappa * (1.0 - c)).exp())
}
