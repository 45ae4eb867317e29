//! Rigorous Lobachevsky function.
//!
//! For `|θ| < π`,
//!
//! ```text
//! Λ(θ) = θ (1 - log|2θ| + Σ_{n≥1} l_n θ^{2n}),   l_n = |B_{2n}| 2^{2n} / (2n (2n+1)!)
//! ```
//!
//! Consecutive coefficients satisfy `l_n / l_{n+1} > π²`, so once `θ² < π²/2`
//! every term is less than half the previous one and the tail from index `k`
//! is below `2 l_k θ^{2k}`. Arguments are first moved into `(-π/2, π/2]`
//! using π-periodicity, then into `(0, π/2]` using oddness.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::jet::{consts, Interval, Jet, JetError};

/// Default number of series coefficients.
pub const DEFAULT_TERMS: usize = 32;
/// Largest supported number of series coefficients.
pub const MAX_TERMS: usize = 64;
/// Default truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-15;

/// A rational strictly above π², used by the exact ratio check.
fn pi_squared_upper() -> BigRational {
    BigRational::new(BigInt::from(98_696_044_010_893_587_i64), BigInt::from(10_i64).pow(16))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LobachevskyError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("term count {0} outside 1..={MAX_TERMS}")]
    TermCount(usize),
    #[error("coefficient ratio l_{0}/l_{{{0}+1}} is not above pi^2")]
    RatioCheck(usize),
    #[error("range reduction failed: |theta0| < pi/sqrt(2) not provable")]
    ReductionFailed,
    #[error("argument straddles zero")]
    StraddlesZero,
    #[error("tail bound inapplicable: theta0^2 < pi^2/2 not provable")]
    TailInapplicable,
}

pub type Result<T> = std::result::Result<T, LobachevskyError>;

/// Bernoulli numbers `B_0 ..= B_n` from `Σ_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // binomial C(m+1, k), built incrementally
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Exact series coefficient `l_n` for `n ≥ 1`, given `B_{2n}`.
fn coefficient(n: usize, b2n: &BigRational) -> BigRational {
    let mut fact = BigInt::one();
    for i in 2..=(2 * n + 1) {
        fact *= BigInt::from(i);
    }
    let num = b2n.abs() * BigRational::from_integer(BigInt::one() << (2 * n));
    num / BigRational::from_integer(fact * BigInt::from(2 * n))
}

/// Tightest binary64 pair bracketing an exact rational.
pub fn rational_enclosure(q: &BigRational) -> Interval {
    let approx = q.to_f64().unwrap_or(0.0);
    let exact = |f: f64| BigRational::from_float(f).expect("finite");
    let mut lo = approx;
    while exact(lo) > *q {
        lo = lo.next_down();
    }
    let mut hi = approx;
    while exact(hi) < *q {
        hi = hi.next_up();
    }
    Interval::new(lo, hi)
}

/// Exact coefficients `l_1 ..= l_K` and their binary64 enclosures.
#[derive(Clone, Debug)]
pub struct SeriesCoeffs {
    exact: Vec<BigRational>,
    enclosures: Vec<Interval>,
}

impl SeriesCoeffs {
    pub fn terms(&self) -> usize {
        self.exact.len()
    }

    /// Exact `l_n`, 1-based.
    pub fn exact(&self, n: usize) -> &BigRational {
        &self.exact[n - 1]
    }

    /// Enclosure of `l_n`, 1-based.
    pub fn enclosure(&self, n: usize) -> Interval {
        self.enclosures[n - 1]
    }
}

/// Build `l_1 ..= l_K`, verifying `l_n / l_{n+1} > π²` exactly.
pub fn series_coeffs(terms: usize) -> Result<SeriesCoeffs> {
    if !(1..=MAX_TERMS).contains(&terms) {
        return Err(LobachevskyError::TermCount(terms));
    }
    // one extra coefficient so the ratio check also covers the last term
    let b = bernoulli_numbers(2 * (terms + 1));
    let all: Vec<BigRational> = (1..=terms + 1).map(|n| coefficient(n, &b[2 * n])).collect();
    let bound = pi_squared_upper();
    for n in 1..=terms {
        if &all[n - 1] / &all[n] <= bound {
            return Err(LobachevskyError::RatioCheck(n));
        }
    }
    let exact: Vec<BigRational> = all.into_iter().take(terms).collect();
    let enclosures = exact.iter().map(rational_enclosure).collect();
    Ok(SeriesCoeffs { exact, enclosures })
}

/// Shared default coefficient table.
pub fn default_coeffs() -> &'static SeriesCoeffs {
    static TABLE: OnceLock<SeriesCoeffs> = OnceLock::new();
    TABLE.get_or_init(|| series_coeffs(DEFAULT_TERMS).expect("coefficient table verifies"))
}

/// Subtract the nearest multiple of π. Returns the reduced jet and whether
/// its representative lies on the negative side (so oddness applies).
pub fn range_reduce(theta: &Jet) -> Result<(Jet, bool)> {
    let k = (theta.center() / std::f64::consts::PI).round();
    let reduced = if k == 0.0 { theta.clone() } else { theta.sub(&Jet::pi(theta.dim()).scale(k)?)? };
    if !(reduced.sup_abs() < consts::PI_OVER_SQRT_2.lo) {
        return Err(LobachevskyError::ReductionFailed);
    }
    let flipped = reduced.prove_negative();
    Ok((reduced, flipped))
}

/// `Λ(θ)` with the default coefficient table.
pub fn lobachevsky(theta: &Jet, tol: f64) -> Result<Jet> {
    lobachevsky_with(default_coeffs(), theta, tol)
}

pub fn lobachevsky_with(coeffs: &SeriesCoeffs, theta: &Jet, tol: f64) -> Result<Jet> {
    let dim = theta.dim();
    if theta.is_exact_zero() {
        return Ok(Jet::constant(0.0, dim)?);
    }
    let (reduced, flipped) = range_reduce(theta)?;
    if reduced.is_exact_zero() {
        return Ok(Jet::constant(0.0, dim)?);
    }
    let t = if flipped {
        reduced.neg()
    } else if reduced.prove_positive() {
        reduced
    } else {
        return Err(LobachevskyError::StraddlesZero);
    };

    let u = t.square()?;
    let sup_u = u.bounds().hi;
    if !(sup_u < consts::HALF_PI_SQUARED.lo) {
        return Err(LobachevskyError::TailInapplicable);
    }

    // first k with l_k S^k < tol, or the last available index
    let terms = coeffs.terms();
    let mut k = terms;
    let mut power = 1.0_f64;
    let mut tail = 0.0;
    for n in 1..=terms {
        power = (power * sup_u).next_up();
        let term = (coeffs.enclosure(n).hi * power).next_up();
        if term < tol || n == terms {
            k = n;
            tail = (2.0 * term).next_up();
            break;
        }
    }

    // Σ_{n<k} l_n u^n by Horner
    let mut poly = Jet::constant(0.0, dim)?;
    for n in (1..k).rev() {
        let c = Jet::enclosing(coeffs.enclosure(n), dim)?;
        poly = c.add(&u.mul(&poly)?)?;
    }
    let mut series = u.mul(&poly)?;
    series = Jet::from_parts(series.center(), series.coeffs().to_vec(), (series.err() + tail).next_up())?;

    let log_term = t.scale(2.0)?.ln()?;
    let bracket = series.sub(&log_term)?.add_scalar(1.0)?;
    let value = t.mul(&bracket)?;
    Ok(if flipped { value.neg() } else { value })
}
