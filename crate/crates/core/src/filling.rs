//! Volume bounds under Dehn filling and enumeration of short slopes.
//!
//! If every slope on a cusp has length `l > 2π`, filling drops the volume by
//! at most the factor `(1 - (2π/l)²)^{3/2}`. Inverting this gives the
//! longest slope that can still produce a filling below a target volume,
//! and the slopes shorter than that form a finite lattice search.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

/// Default upward fudge applied to the slope-length bound.
pub const DEFAULT_FUDGE: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FillingError {
    #[error("minimal slope length {0} must exceed 2*pi")]
    SlopeTooShort(f64),
    #[error("parent volume must be positive and finite, got {0}")]
    BadParentVolume(f64),
    #[error("target volume {target} must lie strictly between 0 and the parent volume {parent}")]
    BadTarget { parent: f64, target: f64 },
    #[error("meridian and longitude are not linearly independent over R")]
    Collinear,
    #[error("cusp translations must be finite")]
    NonFinite,
    #[error("fudge must be finite and nonnegative, got {0}")]
    BadFudge(f64),
}

pub type Result<T> = std::result::Result<T, FillingError>;

/// Lower bound on the volume of a filling along slopes of length at least `l_min`.
pub fn fkp_lower_bound(vol_parent: f64, l_min: f64) -> Result<f64> {
    if !(vol_parent > 0.0 && vol_parent.is_finite()) {
        return Err(FillingError::BadParentVolume(vol_parent));
    }
    if !(l_min > 2.0 * PI) {
        return Err(FillingError::SlopeTooShort(l_min));
    }
    let r = 2.0 * PI / l_min;
    Ok((1.0 - r * r).powf(1.5) * vol_parent)
}

/// Longest slope whose filling could have volume at most `vol_target`.
pub fn slope_length_bound(vol_parent: f64, vol_target: f64) -> Result<f64> {
    if !(vol_parent > 0.0 && vol_parent.is_finite()) {
        return Err(FillingError::BadParentVolume(vol_parent));
    }
    if !(vol_target > 0.0 && vol_target < vol_parent) {
        return Err(FillingError::BadTarget { parent: vol_parent, target: vol_target });
    }
    let ratio = (vol_target / vol_parent).powf(2.0 / 3.0);
    Ok(2.0 * PI / (1.0 - ratio).sqrt())
}

/// Cusp translations of the meridian and longitude, plus the unfilled volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspData {
    meridian: Complex64,
    longitude: Complex64,
    parent_volume: f64,
}

impl CuspData {
    pub fn new(meridian: Complex64, longitude: Complex64, parent_volume: f64) -> Result<Self> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(meridian) || !finite(longitude) {
            return Err(FillingError::NonFinite);
        }
        if !(parent_volume > 0.0 && parent_volume.is_finite()) {
            return Err(FillingError::BadParentVolume(parent_volume));
        }
        let cusp = CuspData { meridian, longitude, parent_volume };
        if !(cusp.covolume() > 0.0) {
            return Err(FillingError::Collinear);
        }
        Ok(cusp)
    }

    pub fn meridian(&self) -> Complex64 {
        self.meridian
    }

    pub fn longitude(&self) -> Complex64 {
        self.longitude
    }

    pub fn parent_volume(&self) -> f64 {
        self.parent_volume
    }

    /// Area of the fundamental parallelogram, `|Im(l conj(m))|`.
    fn covolume(&self) -> f64 {
        (self.longitude * self.meridian.conj()).im.abs()
    }
}

/// Length of the slope `p m + q l`.
pub fn slope_length(p: i64, q: i64, cusp: &CuspData) -> f64 {
    (cusp.meridian * p as f64 + cusp.longitude * q as f64).norm()
}

/// A filling slope with its length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeList {
    pub bound_used: f64,
    pub fudge: f64,
    /// Sorted lexicographically by `(p, q)`.
    pub pairs: Vec<Slope>,
}

impl SlopeList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn coefficients(&self) -> Vec<(i64, i64)> {
        self.pairs.iter().map(|s| (s.p, s.q)).collect()
    }
}

/// Representative of `±(p, q)` with `q > 0`, or `q = 0` and `p > 0`.
pub fn is_normalized(p: i64, q: i64) -> bool {
    q > 0 || (q == 0 && p > 0)
}

/// The inclusion predicate shared by the enumeration and its oracles.
pub fn admits(p: i64, q: i64, cusp: &CuspData, limit: f64) -> bool {
    is_normalized(p, q) && p.gcd(&q) == 1 && slope_length(p, q, cusp) <= limit
}

/// Every normalized coprime slope of length at most
/// `slope_length_bound(parent, target) * (1 + fudge)`.
///
/// Exhaustive: writing `v = p m + q l`, `|q| |Im(l conj m)| = |Im(v conj m)|
/// <= |v| |m|`, and symmetrically for `p`, so the finite box below contains
/// the whole disk.
pub fn enumerate_slopes(cusp: &CuspData, vol_target: f64, fudge: f64) -> Result<SlopeList> {
    if !(fudge >= 0.0 && fudge.is_finite()) {
        return Err(FillingError::BadFudge(fudge));
    }
    let bound = slope_length_bound(cusp.parent_volume, vol_target)?;
    let limit = bound * (1.0 + fudge);
    let area = cusp.covolume();
    let q_max = (limit * cusp.meridian.norm() / area).floor() as i64 + 1;
    let p_max = (limit * cusp.longitude.norm() / area).floor() as i64 + 1;
    let mut pairs = Vec::new();
    for p in -p_max..=p_max {
        for q in 0..=q_max {
            if admits(p, q, cusp, limit) {
                pairs.push(Slope { p, q, length: slope_length(p, q, cusp) });
            }
        }
    }
    Ok(SlopeList { bound_used: bound, fudge, pairs })
}
