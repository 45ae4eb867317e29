//! High-precision oracles shared by the integration tests. Nothing here
//! calls into the crate's own series or transcendental code.
#![allow(dead_code)]

pub mod fuzz;

use astro_float::{BigFloat, Consts, RoundingMode};
use hypcert::Interval;

/// Working precision in bits (about 57 decimal digits).
pub const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Oracle { cc: Consts::new().expect("constants cache") }
    }

    /// Exact conversion.
    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, astro_float::Radix::Dec, PREC, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(PREC, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    pub fn atan(&mut self, x: &BigFloat) -> BigFloat {
        x.atan(PREC, RM, &mut self.cc)
    }

    pub fn sin(&mut self, x: &BigFloat) -> BigFloat {
        x.sin(PREC, RM, &mut self.cc)
    }

    pub fn cos(&mut self, x: &BigFloat) -> BigFloat {
        x.cos(PREC, RM, &mut self.cc)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(PREC, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PREC, RM, &mut self.cc)
    }

    pub fn f64_of(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(astro_float::Radix::Dec, RM, &mut self.cc).expect("format");
        s.parse().expect("decimal")
    }

    /// `Λ(θ) = -∫_0^θ log|2 sin t| dt` for `0 < θ <= π/2`, by tanh-sinh
    /// quadrature. The substitution `t = θ / (1 + e^{-2x})`,
    /// `x = (π/2) sinh u`, clusters nodes at the logarithmic singularity.
    pub fn lobachevsky(&mut self, theta: f64) -> BigFloat {
        assert!(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12);
        let th = self.num(theta);
        self.quadrature(&th)
    }

    /// `Λ(x)` for any real `x`, reduced to `(0, π/2]` by periodicity and
    /// oddness in full precision.
    pub fn lobachevsky_any(&mut self, x: &BigFloat) -> BigFloat {
        let pi = self.pi();
        let k = self.f64_of(&x.div(&pi, PREC, RM)).round();
        let mut t = x.sub(&pi.mul(&self.num(k), PREC, RM), PREC, RM);
        if t.is_zero() {
            return t;
        }
        let negative = t.is_negative();
        if negative {
            t = t.neg();
        }
        let v = self.quadrature(&t);
        if negative {
            v.neg()
        } else {
            v
        }
    }

    fn quadrature(&mut self, th: &BigFloat) -> BigFloat {
        let th = th.clone();
        let half_pi = self.pi().div(&self.num(2.0), PREC, RM);
        let one = self.num(1.0);
        let two = self.num(2.0);
        let h = self.num(1.0 / 16.0);
        let mut sum = self.num(0.0);
        for k in -72i32..=72 {
            let u = self.num(k as f64).mul(&h, PREC, RM);
            let eu = self.exp(&u);
            let emu = one.div(&eu, PREC, RM);
            let sinh = eu.sub(&emu, PREC, RM).div(&two, PREC, RM);
            let cosh = eu.add(&emu, PREC, RM).div(&two, PREC, RM);
            let x = half_pi.mul(&sinh, PREC, RM);
            let e = self.exp(&x.mul(&two, PREC, RM).neg());
            let denom = one.add(&e, PREC, RM);
            let t = th.div(&denom, PREC, RM);
            // dt/du = 2θ e / (1 + e)^2 * (π/2) cosh u
            let w = th
                .mul(&two, PREC, RM)
                .mul(&e, PREC, RM)
                .div(&denom.mul(&denom, PREC, RM), PREC, RM)
                .mul(&half_pi, PREC, RM)
                .mul(&cosh, PREC, RM);
            if w.is_zero() || t.is_zero() {
                continue;
            }
            let s = self.sin(&t).mul(&two, PREC, RM);
            let f = self.ln(&s).neg();
            sum = sum.add(&f.mul(&w, PREC, RM), PREC, RM);
        }
        sum.mul(&h, PREC, RM)
    }
}

/// `lo <= x <= hi`, compared exactly.
pub fn contains(iv: Interval, x: &BigFloat) -> bool {
    let lo = BigFloat::from_f64(iv.lo, PREC);
    let hi = BigFloat::from_f64(iv.hi, PREC);
    matches!(lo.cmp(x), Some(c) if c <= 0) && matches!(x.cmp(&hi), Some(c) if c <= 0)
}

/// Thirty-digit reference values.
pub const LAMBDA_PI_6: &str = "0.507470803204826812510601277137";
pub const LAMBDA_PI_3: &str = "0.338313868803217875007067518092";
pub const REGULAR_VOLUME: &str = "1.01494160640965362502120255427";
pub const FIGURE_EIGHT_VOLUME: &str = "2.02988321281930725004240510855";
