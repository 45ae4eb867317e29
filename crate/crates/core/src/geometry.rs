//! Dihedral angles, orientation checks and certified volumes of ideal
//! triangulations.

use num_complex::Complex64;
use thiserror::Error;

use crate::jet::{ComplexJet, Interval, Jet, JetError};
use crate::lobachevsky::{lobachevsky, LobachevskyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("shape {0} is not finite")]
    NonFinite(usize),
    #[error("delta must be finite and nonnegative, got {0}")]
    BadDelta(f64),
    #[error("shape {0} lies within delta of 0 or 1")]
    Degenerate(usize),
    #[error("tetrahedron {0} is not provably positively oriented")]
    NotPositivelyOriented(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Lobachevsky(#[from] LobachevskyError),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Approximate shapes together with a bound `delta` on the distance in `C^n`
/// to an exact solution.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeAssignment {
    shapes: Vec<Complex64>,
    delta: f64,
}

impl ShapeAssignment {
    pub fn new(shapes: Vec<Complex64>, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(GeometryError::BadDelta(delta));
        }
        for (j, z) in shapes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(GeometryError::NonFinite(j));
            }
            if z.norm() <= delta || (Complex64::new(1.0, 0.0) - z).norm() <= delta {
                return Err(GeometryError::Degenerate(j));
            }
        }
        Ok(ShapeAssignment { shapes, delta })
    }

    pub fn shapes(&self) -> &[Complex64] {
        &self.shapes
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// One complex jet per tetrahedron over `2n` variables; shape `j` uses
    /// variables `2j` (real part) and `2j + 1` (imaginary part), each with
    /// radius `delta`. This covers the `C^n` ball of radius `delta`.
    pub fn jets(&self) -> Result<Vec<ComplexJet>> {
        let dim = 2 * self.shapes.len();
        self.shapes
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let re = Jet::variable(z.re, 2 * j, self.delta, dim)?;
                let im = Jet::variable(z.im, 2 * j + 1, self.delta, dim)?;
                Ok(ComplexJet::new(re, im)?)
            })
            .collect()
    }
}

/// The three dihedral angles `arg z`, `arg 1/(1-z)`, `arg (z-1)/z`.
///
/// The quotients are replaced by conjugate products with the same argument,
/// so no division is needed.
pub fn dihedral_angles(z: &ComplexJet) -> Result<[Jet; 3]> {
    if !z.prove_nonzero() {
        return Err(GeometryError::Jet(JetError::DivisionByZero));
    }
    let w = z.one_minus()?;
    if !w.prove_nonzero() {
        return Err(GeometryError::Jet(JetError::DivisionByZero));
    }
    let t1 = z.arg()?;
    let t2 = w.conj().arg()?;
    let t3 = w.neg().mul(&z.conj())?.arg()?;
    Ok([t1, t2, t3])
}

/// True only if every point within `delta` of every shape has positive
/// imaginary part.
pub fn check_positive_orientation(s: &ShapeAssignment) -> bool {
    first_misoriented(s).is_none()
}

fn first_misoriented(s: &ShapeAssignment) -> Option<usize> {
    match s.jets() {
        Ok(jets) => jets.iter().position(|z| !z.im.prove_positive()),
        Err(_) => Some(0),
    }
}

/// Interval containing the volume `Σ Λ(θ)` of every shape vector within
/// `delta` of the approximate shapes.
pub fn certified_volume(s: &ShapeAssignment, tol: f64) -> Result<Interval> {
    if let Some(j) = first_misoriented(s) {
        return Err(GeometryError::NotPositivelyOriented(j));
    }
    let jets = s.jets()?;
    let mut total = Jet::constant(0.0, 2 * s.len())?;
    for z in &jets {
        for angle in dihedral_angles(z)? {
            total = total.add(&lobachevsky(&angle, tol)?)?;
        }
    }
    Ok(total.bounds())
}

/// Truncation tolerance used by the volume predicates.
pub const VOLUME_TOL: f64 = 1e-14;

/// The certified volume lies strictly above `threshold`. False when
/// inconclusive.
pub fn prove_volume_gt(s: &ShapeAssignment, threshold: f64) -> bool {
    matches!(certified_volume(s, VOLUME_TOL), Ok(iv) if iv.lo > threshold)
}

/// The certified volume lies at or below `threshold`. False when
/// inconclusive.
pub fn prove_volume_le(s: &ShapeAssignment, threshold: f64) -> bool {
    matches!(certified_volume(s, VOLUME_TOL), Ok(iv) if iv.hi <= threshold)
}
