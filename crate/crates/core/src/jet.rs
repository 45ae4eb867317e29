//! Affine 1-jets with rigorous rounding-error accounting.
//!
//! A [`Jet`] `(j0; j1, .., jn; e)` stands for every real function `f` on the
//! cube `[-1, 1]^n` with `sup |f(x) - (j0 + sum ji xi)| <= e`. Every operation
//! returns a jet whose represented set contains the pointwise result of the
//! operation applied to any members of the input sets. Floating-point
//! rounding is absorbed into the error term: each primitive operation with
//! result `r` contributes at most `2^-53 |r|` (plus an underflow floor), and
//! the error bookkeeping itself is rounded upward with `next_up`.

use std::fmt;

use thiserror::Error;

/// Unit roundoff for round-to-nearest binary64.
const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Absolute error floor charged per primitive operation (covers underflow).
const UNDERFLOW_FLOOR: f64 = f64::MIN_POSITIVE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("non-finite input or result")]
    NonFinite,
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("divisor is not provably nonzero")]
    DivisionByZero,
    #[error("logarithm argument is not provably positive")]
    NotPositive,
    #[error("argument of a complex jet is ambiguous (origin or branch cut not excluded)")]
    AmbiguousArgument,
    #[error("jet range too wide for a finite remainder bound")]
    RangeTooWide,
}

pub type Result<T> = std::result::Result<T, JetError>;

/// Threshold below which products and quotients are never treated as exact
/// (the FMA residual test is unreliable near the subnormal range).
const TINY: f64 = 1e-290;

fn add_exact(a: f64, b: f64, s: f64) -> bool {
    // TwoSum error term
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    e == 0.0 && s.is_finite()
}

fn mul_exact(a: f64, b: f64, p: f64) -> bool {
    a == 0.0 || b == 0.0 || (p.abs() >= TINY && a.mul_add(b, -p) == 0.0)
}

fn div_exact(a: f64, b: f64, q: f64) -> bool {
    a == 0.0 || (q.abs() >= TINY && a.abs() >= TINY && q.mul_add(b, -a) == 0.0)
}

/// Upper bound on `a + b` for nonnegative operands.
fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if add_exact(a, b, s) {
        s
    } else {
        s.next_up()
    }
}

/// Upper bound on `a * b` for nonnegative operands.
fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if mul_exact(a, b, p) {
        p
    } else {
        p.next_up().max(f64::MIN_POSITIVE)
    }
}

/// Upper bound on `a / b` for nonnegative operands.
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if div_exact(a, b, q) {
        q
    } else {
        q.next_up().max(f64::MIN_POSITIVE)
    }
}

/// Accumulates the rounding-error budget of a sequence of primitive
/// operations whose inputs are exact floats. Exact results cost nothing.
#[derive(Default)]
struct Roundoff {
    magnitude: f64,
    ops: u32,
}

impl Roundoff {
    fn charge(&mut self, r: f64, floor: bool) {
        self.magnitude = add_up(self.magnitude, r.abs());
        if floor {
            self.ops += 1;
        }
    }

    fn add(&mut self, a: f64, b: f64) -> f64 {
        let s = a + b;
        if !add_exact(a, b, s) {
            // sums never lose bits to underflow, so no floor term
            self.charge(s, false);
        }
        s
    }

    fn mul(&mut self, a: f64, b: f64) -> f64 {
        let p = a * b;
        if !mul_exact(a, b, p) {
            self.charge(p, true);
        }
        p
    }

    fn div(&mut self, a: f64, b: f64) -> f64 {
        let q = a / b;
        if !div_exact(a, b, q) {
            self.charge(q, true);
        }
        q
    }

    fn bound(&self) -> f64 {
        let rel = if self.magnitude == 0.0 { 0.0 } else { mul_up(self.magnitude, UNIT_ROUNDOFF) };
        if self.ops == 0 {
            rel
        } else {
            add_up(rel, mul_up(f64::from(self.ops), UNDERFLOW_FLOOR))
        }
    }
}

/// A closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Certified binary64 enclosures of irrational constants.
#[allow(clippy::approx_constant)]
pub mod consts {
    use super::Interval;

    pub const PI: Interval = Interval { lo: 3.141592653589793, hi: 3.1415926535897936 };
    pub const FRAC_PI_2: Interval = Interval { lo: 1.5707963267948966, hi: 1.5707963267948968 };
    pub const LN_2: Interval = Interval { lo: 0.6931471805599453, hi: 0.6931471805599454 };
    /// pi / sqrt(2)
    pub const PI_OVER_SQRT_2: Interval = Interval { lo: 2.221441469079183, hi: 2.2214414690791835 };
    /// pi^2 / 2
    pub const HALF_PI_SQUARED: Interval = Interval { lo: 4.934802200544679, hi: 4.93480220054468 };
    pub const PI_SQUARED: Interval = Interval { lo: 9.869604401089358, hi: 9.86960440108936 };

    /// `atan(k / 8)` for `k = 0..=8`.
    pub(crate) const ATAN_EIGHTHS: [Interval; 9] = [
        Interval { lo: 0.0, hi: 0.0 },
        Interval { lo: 0.12435499454676142, hi: 0.12435499454676144 },
        Interval { lo: 0.24497866312686414, hi: 0.24497866312686417 },
        Interval { lo: 0.3587706702705722, hi: 0.35877067027057225 },
        Interval { lo: 0.4636476090008061, hi: 0.46364760900080615 },
        Interval { lo: 0.5585993153435623, hi: 0.5585993153435624 },
        Interval { lo: 0.6435011087932844, hi: 0.6435011087932845 },
        Interval { lo: 0.7188299996216244, hi: 0.7188299996216245 },
        Interval { lo: 0.7853981633974483, hi: 0.7853981633974484 },
    ];
}

/// Real affine 1-jet over `dim` formal variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    center: f64,
    coeffs: Vec<f64>,
    err: f64,
}

impl Jet {
    pub fn constant(c: f64, dim: usize) -> Result<Jet> {
        if !c.is_finite() {
            return Err(JetError::NonFinite);
        }
        Ok(Jet { center: c, coeffs: vec![0.0; dim], err: 0.0 })
    }

    /// `c + r * x_i`: contains every constant in `[c - r, c + r]`.
    pub fn variable(c: f64, index: usize, radius: f64, dim: usize) -> Result<Jet> {
        if index >= dim {
            return Err(JetError::IndexOutOfRange { index, dim });
        }
        if !c.is_finite() || !radius.is_finite() {
            return Err(JetError::NonFinite);
        }
        if radius < 0.0 {
            return Err(JetError::NegativeRadius(radius));
        }
        let mut coeffs = vec![0.0; dim];
        coeffs[index] = radius;
        Ok(Jet { center: c, coeffs, err: 0.0 })
    }

    pub fn from_parts(center: f64, coeffs: Vec<f64>, err: f64) -> Result<Jet> {
        if !center.is_finite() || !err.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(JetError::NonFinite);
        }
        if err < 0.0 {
            return Err(JetError::NegativeRadius(err));
        }
        Ok(Jet { center, coeffs, err })
    }

    /// Constant jet containing the whole interval `iv`.
    pub fn enclosing(iv: Interval, dim: usize) -> Result<Jet> {
        if !iv.lo.is_finite() || !iv.hi.is_finite() || iv.lo > iv.hi {
            return Err(JetError::NonFinite);
        }
        let center = iv.mid();
        let err = (iv.hi - center).max(center - iv.lo).next_up();
        let err = if iv.lo == iv.hi && center == iv.lo { 0.0 } else { err };
        Ok(Jet { center, coeffs: vec![0.0; dim], err })
    }

    pub fn pi(dim: usize) -> Jet {
        Jet::enclosing(consts::PI, dim).expect("finite constant")
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    /// True when the jet represents exactly the zero function.
    pub fn is_exact_zero(&self) -> bool {
        self.center == 0.0 && self.err == 0.0 && self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Upper bound on `sup |f(x) - j0|` over the represented set.
    pub fn radius(&self) -> f64 {
        let lin = self.coeffs.iter().fold(0.0, |acc, c| add_up(acc, c.abs()));
        if lin == 0.0 && self.err == 0.0 {
            0.0
        } else {
            add_up(lin, self.err)
        }
    }

    /// Value of the linear part at a point of the cube.
    pub fn linear_at(&self, x: &[f64]) -> f64 {
        self.center + self.coeffs.iter().zip(x).map(|(c, xi)| c * xi).sum::<f64>()
    }

    /// Outward-rounded range of every represented function.
    pub fn bounds(&self) -> Interval {
        let r = self.radius();
        if r == 0.0 {
            return Interval::new(self.center, self.center);
        }
        Interval::new((self.center - r).next_down(), (self.center + r).next_up())
    }

    pub fn sup_abs(&self) -> f64 {
        let r = self.radius();
        if r == 0.0 {
            self.center.abs()
        } else {
            add_up(self.center.abs(), r)
        }
    }

    pub fn prove_positive(&self) -> bool {
        self.bounds().lo > 0.0
    }

    pub fn prove_negative(&self) -> bool {
        self.bounds().hi < 0.0
    }

    pub fn prove_nonzero(&self) -> bool {
        self.prove_positive() || self.prove_negative()
    }

    /// Every represented function is everywhere `< c`.
    pub fn prove_lt(&self, c: f64) -> bool {
        self.bounds().hi < c
    }

    /// Every represented function is everywhere `> c`.
    pub fn prove_gt(&self, c: f64) -> bool {
        self.bounds().lo > c
    }

    fn check_dim(&self, other: &Jet) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(JetError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    fn finish(center: f64, coeffs: Vec<f64>, err: f64) -> Result<Jet> {
        Jet::from_parts(center, coeffs, err).map_err(|_| JetError::NonFinite)
    }

    /// Same function viewed over `dim` variables; only extends dimension-0
    /// jets or returns a copy when the dimension already matches.
    pub fn lift(&self, dim: usize) -> Result<Jet> {
        if self.dim() == dim {
            return Ok(self.clone());
        }
        if self.dim() != 0 {
            return Err(JetError::DimensionMismatch(self.dim(), dim));
        }
        Ok(Jet { center: self.center, coeffs: vec![0.0; dim], err: self.err })
    }

    pub fn neg(&self) -> Jet {
        Jet { center: -self.center, coeffs: self.coeffs.iter().map(|c| -c).collect(), err: self.err }
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_dim(other)?;
        let mut ro = Roundoff::default();
        let center = ro.add(self.center, other.center);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ro.add(*a, *b)).collect();
        let err = add_up(add_up(self.err, other.err), ro.bound());
        Jet::finish(center, coeffs, err)
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.add(&other.neg())
    }

    pub fn add_scalar(&self, c: f64) -> Result<Jet> {
        if !c.is_finite() {
            return Err(JetError::NonFinite);
        }
        let mut ro = Roundoff::default();
        let center = ro.add(self.center, c);
        let err = add_up(self.err, ro.bound());
        Jet::finish(center, self.coeffs.clone(), err)
    }

    pub fn scale(&self, s: f64) -> Result<Jet> {
        if !s.is_finite() {
            return Err(JetError::NonFinite);
        }
        let mut ro = Roundoff::default();
        let center = ro.mul(s, self.center);
        let coeffs = self.coeffs.iter().map(|a| ro.mul(s, *a)).collect();
        let err = if self.err == 0.0 { ro.bound() } else { add_up(mul_up(s.abs(), self.err), ro.bound()) };
        Jet::finish(center, coeffs, err)
    }

    /// Product; the quadratic cross term is folded entirely into the error.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_dim(other)?;
        let (a0, b0) = (self.center, other.center);
        let mut ro = Roundoff::default();
        let center = ro.mul(a0, b0);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(ai, bi)| {
                let x = ro.mul(a0, *bi);
                let y = ro.mul(b0, *ai);
                ro.add(x, y)
            })
            .collect();
        let lin_a = self.coeffs.iter().fold(0.0, |acc, c| add_up(acc, c.abs()));
        let lin_b = other.coeffs.iter().fold(0.0, |acc, c| add_up(acc, c.abs()));
        let mut err = 0.0;
        if lin_a != 0.0 && lin_b != 0.0 {
            err = mul_up(lin_a, lin_b);
        }
        if self.err != 0.0 {
            let sup_b = add_up(add_up(b0.abs(), lin_b), other.err);
            err = add_up(err, mul_up(self.err, sup_b));
        }
        if other.err != 0.0 {
            let sup_a = add_up(a0.abs(), lin_a);
            err = add_up(err, mul_up(other.err, sup_a));
        }
        let rb = ro.bound();
        if rb != 0.0 {
            err = add_up(err, rb);
        }
        Jet::finish(center, coeffs, err)
    }

    pub fn square(&self) -> Result<Jet> {
        self.mul(self)
    }

    /// Reciprocal. The linear part is the tangent of `1/g` at the center;
    /// the error is `sup |1 - g L| / inf |g|`, evaluated rigorously.
    pub fn recip(&self) -> Result<Jet> {
        let range = self.bounds();
        let min_abs = if range.lo > 0.0 {
            range.lo
        } else if range.hi < 0.0 {
            -range.hi
        } else {
            return Err(JetError::DivisionByZero);
        };
        let c0 = 1.0 / self.center;
        let c0_sq = c0 * c0;
        let coeffs: Vec<f64> = self.coeffs.iter().map(|b| -b * c0_sq).collect();
        let linear = Jet::finish(c0, coeffs, 0.0)?;
        let product = self.mul(&linear)?;
        let defect = product.add_scalar(-1.0)?.sup_abs();
        let err = if defect == 0.0 { 0.0 } else { div_up(defect, min_abs) };
        Jet::finish(linear.center, linear.coeffs, err)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.check_dim(other)?;
        if self.dim() == 0 || (self.coeffs.iter().all(|&c| c == 0.0) && self.err == 0.0) {
            // Constant numerator: one rounding instead of two.
            if other.coeffs.iter().all(|&c| c == 0.0) && other.err == 0.0 {
                if other.center == 0.0 {
                    return Err(JetError::DivisionByZero);
                }
                let mut ro = Roundoff::default();
                let q = ro.div(self.center, other.center);
                return Jet::finish(q, vec![0.0; self.dim()], ro.bound());
            }
        }
        self.mul(&other.recip()?)
    }

    /// Natural logarithm via a degree-4 Taylor expansion about the center.
    pub fn ln(&self) -> Result<Jet> {
        let range = self.bounds();
        if !(range.lo > 0.0) {
            return Err(JetError::NotPositive);
        }
        let dim = self.dim();
        let x0 = self.center;
        let f0 = ln_enclosure(x0)?.lift(dim)?;
        let inv = Jet::constant(1.0, 0)?.div(&Jet::constant(x0, 0)?)?;
        let inv2 = inv.square()?;
        let inv3 = inv2.mul(&inv)?;
        let c1 = inv.lift(dim)?;
        let c2 = inv2.scale(-0.5)?.lift(dim)?;
        let c3 = inv3.div(&Jet::constant(3.0, 0)?)?.lift(dim)?;
        let t = self.add_scalar(-x0)?;
        let r = t.radius();
        // |f''''| = 6 / xi^4 <= 6 / lo^4, remainder (R / lo)^4 / 4
        let rem = if r == 0.0 {
            0.0
        } else {
            let q = div_up(r, range.lo);
            mul_up(mul_up(mul_up(q, q), mul_up(q, q)), 0.25)
        };
        if !rem.is_finite() {
            return Err(JetError::RangeTooWide);
        }
        taylor3(&f0, [&c1, &c2, &c3], &t, rem)
    }

    /// Arctangent via a degree-4 Taylor expansion about the center.
    pub fn atan(&self) -> Result<Jet> {
        let dim = self.dim();
        let x0 = self.center;
        let f0 = atan_enclosure(x0)?.lift(dim)?;
        let one = Jet::constant(1.0, 0)?;
        let x0j = Jet::constant(x0, 0)?;
        let s = one.add(&x0j.square()?)?; // 1 + x0^2
        let inv_s = one.div(&s)?;
        let inv_s2 = inv_s.square()?;
        let c1 = inv_s.clone();
        // f''/2 = -x0 / (1 + x0^2)^2
        let c2 = x0j.neg().mul(&inv_s2)?;
        // f'''/6 = (3 x0^2 - 1) / (3 (1 + x0^2)^3)
        let num = x0j.square()?.scale(3.0)?.add_scalar(-1.0)?;
        let c3 = num.mul(&inv_s2)?.mul(&inv_s)?.div(&Jet::constant(3.0, 0)?)?;
        let t = self.add_scalar(-x0)?;
        let r = t.radius();
        // |f''''| <= 3! everywhere, remainder R^4 / 4
        let rem = if r == 0.0 { 0.0 } else { mul_up(mul_up(mul_up(r, r), mul_up(r, r)), 0.25) };
        if !rem.is_finite() {
            return Err(JetError::RangeTooWide);
        }
        taylor3(&f0, [&c1.lift(dim)?, &c2.lift(dim)?, &c3.lift(dim)?], &t, rem)
    }
}

/// `f0 + c1 t + c2 t^2 + c3 t^3`, plus `rem` added to the error.
fn taylor3(f0: &Jet, c: [&Jet; 3], t: &Jet, rem: f64) -> Result<Jet> {
    if t.is_exact_zero() {
        return Ok(f0.clone());
    }
    let mut acc = c[2].clone();
    acc = c[1].add(&t.mul(&acc)?)?;
    acc = c[0].add(&t.mul(&acc)?)?;
    let mut out = f0.add(&t.mul(&acc)?)?;
    out.err = add_up(out.err, rem);
    if !out.err.is_finite() {
        return Err(JetError::RangeTooWide);
    }
    Ok(out)
}

/// Dimension-0 jet containing `ln(x)`, computed from the `atanh` series of
/// the reduced mantissa; no reliance on the platform `ln`.
fn ln_enclosure(x: f64) -> Result<Jet> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(JetError::NotPositive);
    }
    let (mut m, mut e) = frexp(x);
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    let s = Jet::constant(m - 1.0, 0)?.div(&Jet::constant(m + 1.0, 0)?)?;
    let u = s.square()?;
    const TERMS: usize = 14;
    let mut acc = Jet::constant(0.0, 0)?;
    for k in (0..TERMS).rev() {
        let coef = Jet::constant(1.0, 0)?.div(&Jet::constant((2 * k + 1) as f64, 0)?)?;
        acc = coef.add(&u.mul(&acc)?)?;
    }
    let mut log_m = s.mul(&acc)?.scale(2.0)?;
    let s_abs = s.sup_abs();
    if s_abs != 0.0 {
        // 2 sum_{k >= TERMS} |s|^(2k+1) / (2k+1) <= 2 |s|^(2 TERMS + 1) / ((2 TERMS + 1)(1 - s^2))
        let mut p = s_abs;
        for _ in 0..2 * TERMS {
            p = mul_up(p, s_abs);
        }
        let denom = ((2 * TERMS + 1) as f64 * (1.0 - mul_up(s_abs, s_abs))).next_down();
        log_m.err = add_up(log_m.err, div_up(mul_up(2.0, p), denom));
    }
    if e == 0 {
        return Ok(log_m);
    }
    let ln2 = Jet::enclosing(consts::LN_2, 0)?;
    log_m.add(&ln2.scale(f64::from(e))?)
}

/// Dimension-0 jet containing `atan(x)`.
fn atan_enclosure(x: f64) -> Result<Jet> {
    if !x.is_finite() {
        return Err(JetError::NonFinite);
    }
    if x == 0.0 {
        return Jet::constant(0.0, 0);
    }
    let ax = x.abs();
    let r = if ax <= 1.0 {
        atan_unit(&Jet::constant(ax, 0)?)?
    } else {
        let inv = Jet::constant(1.0, 0)?.div(&Jet::constant(ax, 0)?)?;
        Jet::enclosing(consts::FRAC_PI_2, 0)?.sub(&atan_unit(&inv)?)?
    };
    Ok(if x < 0.0 { r.neg() } else { r })
}

/// `atan(y)` for a dimension-0 jet with `0 <= y <= 1` (up to rounding), by
/// shifting to the nearest table point `k/8` and summing the Taylor series
/// of `atan((y - c) / (1 + c y))`.
fn atan_unit(y: &Jet) -> Result<Jet> {
    let k = (8.0 * y.center()).round().clamp(0.0, 8.0) as usize;
    let c = k as f64 / 8.0;
    let base = Jet::enclosing(consts::ATAN_EIGHTHS[k], 0)?;
    let u = if k == 0 {
        y.clone()
    } else {
        let num = y.add_scalar(-c)?;
        let den = y.scale(c)?.add_scalar(1.0)?;
        num.div(&den)?
    };
    if u.is_exact_zero() {
        return Ok(base);
    }
    let v = u.square()?;
    const TERMS: usize = 12;
    let mut acc = Jet::constant(0.0, 0)?;
    for j in (0..TERMS).rev() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let coef = Jet::constant(sign, 0)?.div(&Jet::constant((2 * j + 1) as f64, 0)?)?;
        acc = coef.add(&v.mul(&acc)?)?;
    }
    let mut series = u.mul(&acc)?;
    let u_abs = u.sup_abs();
    // alternating tail bounded by its first omitted term
    let mut p = u_abs;
    for _ in 0..2 * TERMS {
        p = mul_up(p, u_abs);
    }
    series.err = add_up(series.err, div_up(p, (2 * TERMS + 1) as f64));
    if !series.err.is_finite() {
        return Err(JetError::RangeTooWide);
    }
    base.add(&series)
}

/// Split a positive finite float into `m * 2^e` with `m` in `[1, 2)`.
fn frexp(x: f64) -> (f64, i32) {
    let (x, bias) = if x < f64::MIN_POSITIVE { (x * 2f64.powi(54), -54) } else { (x, 0) };
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1023;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    (m, exp + bias)
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e};", self.center)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {c:e}")?;
        }
        write!(f, "; {:e})", self.err)
    }
}

/// Complex affine 1-jet: real and imaginary parts over a shared variable space.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexJet {
    pub re: Jet,
    pub im: Jet,
}

impl ComplexJet {
    pub fn new(re: Jet, im: Jet) -> Result<ComplexJet> {
        re.check_dim(&im)?;
        Ok(ComplexJet { re, im })
    }

    pub fn constant(re: f64, im: f64, dim: usize) -> Result<ComplexJet> {
        Ok(ComplexJet { re: Jet::constant(re, dim)?, im: Jet::constant(im, dim)? })
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn add(&self, o: &ComplexJet) -> Result<ComplexJet> {
        Ok(ComplexJet { re: self.re.add(&o.re)?, im: self.im.add(&o.im)? })
    }

    pub fn sub(&self, o: &ComplexJet) -> Result<ComplexJet> {
        Ok(ComplexJet { re: self.re.sub(&o.re)?, im: self.im.sub(&o.im)? })
    }

    pub fn neg(&self) -> ComplexJet {
        ComplexJet { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> ComplexJet {
        ComplexJet { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &ComplexJet) -> Result<ComplexJet> {
        let re = self.re.mul(&o.re)?.sub(&self.im.mul(&o.im)?)?;
        let im = self.re.mul(&o.im)?.add(&self.im.mul(&o.re)?)?;
        Ok(ComplexJet { re, im })
    }

    /// Multiply by an exact complex scalar.
    pub fn scale(&self, re: f64, im: f64) -> Result<ComplexJet> {
        let r = self.re.scale(re)?.sub(&self.im.scale(im)?)?;
        let i = self.re.scale(im)?.add(&self.im.scale(re)?)?;
        Ok(ComplexJet { re: r, im: i })
    }

    /// `1 - z`
    pub fn one_minus(&self) -> Result<ComplexJet> {
        Ok(ComplexJet { re: self.re.neg().add_scalar(1.0)?, im: self.im.neg() })
    }

    pub fn norm_sqr(&self) -> Result<Jet> {
        self.re.square()?.add(&self.im.square()?)
    }

    pub fn prove_nonzero(&self) -> bool {
        self.re.prove_nonzero() || self.im.prove_nonzero()
    }

    pub fn recip(&self) -> Result<ComplexJet> {
        if !self.prove_nonzero() {
            return Err(JetError::DivisionByZero);
        }
        let inv = self.norm_sqr()?.recip()?;
        Ok(ComplexJet { re: self.re.mul(&inv)?, im: self.im.neg().mul(&inv)? })
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Result<Jet> {
        arg_complex(self)
    }

    /// Principal logarithm `ln|z| + i arg z`.
    pub fn ln(&self) -> Result<ComplexJet> {
        let arg = self.arg()?;
        let re = self.norm_sqr()?.ln()?.scale(0.5)?;
        Ok(ComplexJet { re, im: arg })
    }
}

/// Principal argument of every complex value represented by `z`.
///
/// The branch is fixed by whichever of `re > 0`, `im > 0`, `im < 0` can be
/// proved (preferring the better-conditioned quotient). A jet that reaches
/// the negative real axis without a provable imaginary sign is rejected,
/// since the principal argument is discontinuous there.
pub fn arg_complex(z: &ComplexJet) -> Result<Jet> {
    let re_pos = z.re.prove_positive();
    let im_pos = z.im.prove_positive();
    let im_neg = z.im.prove_negative();
    let use_re = re_pos && (!(im_pos || im_neg) || z.re.center().abs() >= z.im.center().abs());
    if use_re {
        return z.im.div(&z.re)?.atan();
    }
    if im_pos || im_neg {
        let t = z.re.div(&z.im)?.atan()?;
        let half_pi = Jet::enclosing(consts::FRAC_PI_2, z.dim())?;
        return if im_pos { half_pi.sub(&t) } else { half_pi.neg().sub(&t) };
    }
    Err(JetError::AmbiguousArgument)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulp(x: f64) -> f64 {
        let a = x.abs();
        a.next_up() - a
    }

    #[test]
    fn constant_and_variable() {
        let z = Jet::constant(0.0, 3).unwrap();
        assert_eq!(z.center(), 0.0);
        assert_eq!(z.coeffs(), &[0.0, 0.0, 0.0]);
        assert_eq!(z.err(), 0.0);
        let one = Jet::constant(1.0, 1).unwrap();
        assert_eq!((one.center(), one.coeffs(), one.err()), (1.0, &[0.0][..], 0.0));
        let t = Jet::constant(2.848, 0).unwrap();
        assert_eq!(t.center(), 2.848);
        assert_eq!(t.dim(), 0);

        let v = Jet::variable(0.5, 0, 0.001, 2).unwrap();
        assert_eq!(v.coeffs(), &[0.001, 0.0]);
        assert_eq!(v.err(), 0.0);
        assert_eq!(Jet::variable(1.0, 0, 0.0, 1).unwrap(), Jet::constant(1.0, 1).unwrap());
        assert!(v.bounds().contains(0.499) && v.bounds().contains(0.501));

        assert!(matches!(Jet::variable(0.0, 2, 1.0, 2), Err(JetError::IndexOutOfRange { .. })));
        assert!(matches!(Jet::constant(f64::NAN, 1), Err(JetError::NonFinite)));
        assert!(matches!(Jet::constant(f64::INFINITY, 1), Err(JetError::NonFinite)));
    }

    #[test]
    fn add_and_mul_examples() {
        let a = Jet::from_parts(1.0, vec![1.0], 0.0).unwrap();
        let b = Jet::from_parts(1.0, vec![-1.0], 0.0).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.center(), 2.0);
        assert_eq!(s.coeffs(), &[0.0]);
        assert!(s.bounds().contains(2.0));

        // 1 - x^2 on [-1, 1] has range [0, 1]
        let p = a.mul(&b).unwrap();
        let r = p.bounds();
        assert!(r.lo <= 0.0 && r.hi >= 1.0, "{r}");
    }

    #[test]
    fn division_by_three_is_tight() {
        let q = Jet::constant(1.0, 0).unwrap().div(&Jet::constant(3.0, 0).unwrap()).unwrap();
        let third = 1.0_f64 / 3.0;
        assert!(q.err() <= 4.0 * ulp(third), "err {}", q.err());
        // 1/3 lies strictly between the binary64 neighbours of its rounding
        assert!(q.bounds().lo < third && third < q.bounds().hi);
    }

    #[test]
    fn division_requires_nonzero() {
        let a = Jet::constant(1.0, 1).unwrap();
        let b = Jet::from_parts(0.5, vec![1.0], 0.0).unwrap();
        assert_eq!(a.div(&b), Err(JetError::DivisionByZero));
        assert_eq!(a.div(&Jet::constant(0.0, 1).unwrap()), Err(JetError::DivisionByZero));
    }

    #[test]
    fn recip_contains_samples() {
        let g = Jet::from_parts(2.0, vec![0.3, -0.2], 0.05).unwrap();
        let r = g.recip().unwrap();
        for &(x, y) in &[(-1.0, -1.0), (1.0, 1.0), (0.3, -0.7), (-1.0, 1.0)] {
            for e in [-0.05, 0.05] {
                let v = 2.0 + 0.3 * x - 0.2 * y + e;
                let lin = r.linear_at(&[x, y]);
                assert!((1.0 / v - lin).abs() <= r.err(), "x={x} y={y}");
            }
        }
    }

    #[test]
    fn sup_abs_examples() {
        let a = Jet::from_parts(1.0, vec![0.5], 0.1).unwrap();
        assert!(a.sup_abs() >= 1.6);
        assert_eq!(Jet::constant(0.0, 1).unwrap().sup_abs(), 0.0);
        let x = Jet::from_parts(0.0, vec![1.0], 0.0).unwrap();
        assert!(x.mul(&x).unwrap().sup_abs() >= 1.0);
    }

    #[test]
    fn sign_proofs() {
        let a = Jet::from_parts(1.0, vec![0.5], 0.1).unwrap();
        assert!(a.prove_positive());
        assert!(!a.prove_negative());
        let b = Jet::from_parts(1.0, vec![1.0], 0.1).unwrap();
        assert!(!b.prove_positive());
        assert!(!b.prove_nonzero());
        assert!(a.neg().prove_negative());
        assert!(a.prove_lt(1.7) && !a.prove_lt(1.5));
    }

    #[test]
    fn log_examples() {
        let l1 = Jet::constant(1.0, 0).unwrap().ln().unwrap();
        assert!(l1.bounds().contains(0.0));
        assert!(l1.bounds().width() <= 1e-15);
        let l2 = Jet::constant(2.0, 0).unwrap().ln().unwrap();
        assert!(l2.bounds().contains(std::f64::consts::LN_2));
        assert!(Jet::constant(-1.0, 0).unwrap().ln().is_err());
        let wide = Jet::from_parts(1.0, vec![1.5], 0.0).unwrap();
        assert_eq!(wide.ln(), Err(JetError::NotPositive));
    }

    #[test]
    fn frexp_splits() {
        for &x in &[1.0, 1.5, 0.75, 1e-310, 3.0e300, 2.0] {
            let (m, e) = frexp(x);
            assert!((1.0..2.0).contains(&m));
            assert_eq!(m * 2f64.powi(e), x);
        }
    }

    #[test]
    fn atan_examples() {
        let a0 = Jet::constant(0.0, 0).unwrap().atan().unwrap();
        assert!(a0.bounds().contains(0.0) && a0.bounds().width() <= 1e-15);
        let a1 = Jet::constant(1.0, 0).unwrap().atan().unwrap();
        assert!(a1.bounds().contains(std::f64::consts::FRAC_PI_4));
        let big = Jet::constant(-1e6, 0).unwrap().atan().unwrap();
        assert!(big.bounds().hi < -1.57);
    }

    #[test]
    fn arg_examples() {
        let i = ComplexJet::constant(0.0, 1.0, 0).unwrap();
        assert!(i.arg().unwrap().bounds().contains(std::f64::consts::FRAC_PI_2));
        let d = ComplexJet::constant(1.0, 1.0, 0).unwrap();
        assert!(d.arg().unwrap().bounds().contains(std::f64::consts::FRAC_PI_4));
        let neg_im = ComplexJet::constant(-1.0, -1.0, 0).unwrap();
        assert!(neg_im.arg().unwrap().bounds().contains(-3.0 * std::f64::consts::FRAC_PI_4));
        let origin = ComplexJet::constant(0.0, 0.0, 0).unwrap();
        assert_eq!(origin.arg(), Err(JetError::AmbiguousArgument));
        let cut =
            ComplexJet::new(Jet::constant(-1.0, 1).unwrap(), Jet::from_parts(0.0, vec![0.1], 0.0).unwrap()).unwrap();
        assert_eq!(cut.arg(), Err(JetError::AmbiguousArgument));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Jet::constant(1.0, 1).unwrap();
        let b = Jet::constant(1.0, 2).unwrap();
        assert_eq!(a.add(&b), Err(JetError::DimensionMismatch(1, 2)));
        assert_eq!(a.mul(&b), Err(JetError::DimensionMismatch(1, 2)));
    }
}
