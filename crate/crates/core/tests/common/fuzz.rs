//! Random expressions evaluated both in jet arithmetic and, at sample
//! points of the jet's domain, in 192-bit arithmetic.

use astro_float::{BigFloat, RoundingMode};
use hypcert::Jet;
use rand::Rng;

use super::{Oracle, PREC};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Square(Box<Expr>),
    Neg(Box<Expr>),
    Scale(Box<Expr>, f64),
    Shift(Box<Expr>, f64),
    Ln(Box<Expr>),
    Atan(Box<Expr>),
}

fn random_scalar<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-4..=4) as f64,
        1 => rng.gen_range(-1.0..1.0),
        2 => rng.gen_range(-1e3..1e3),
        _ => rng.gen_range(-1.0f64..1.0) * 2f64.powi(rng.gen_range(-30..30)),
    }
}

pub fn random_expr<R: Rng>(rng: &mut R, vars: usize, depth: usize) -> Expr {
    use Expr::*;
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.75) { Var(rng.gen_range(0..vars)) } else { Const(random_scalar(rng)) };
    }
    let mut sub = || Box::new(random_expr(rng, vars, depth - 1));
    let (a, b) = (sub(), sub());
    match rng.gen_range(0..11) {
        0 => Add(a, b),
        1 => Sub(a, b),
        2 | 3 => Mul(a, b),
        4 => Div(a, b),
        5 => Square(a),
        6 => Neg(a),
        7 => Scale(a, random_scalar(rng)),
        8 => Shift(a, random_scalar(rng)),
        9 => Ln(a),
        _ => Atan(a),
    }
}

pub fn eval_jet(e: &Expr, vars: &[Jet]) -> Option<Jet> {
    use Expr::*;
    let dim = vars[0].dim();
    let r = match e {
        Var(i) => Ok(vars[*i].clone()),
        Const(c) => Jet::constant(*c, dim),
        Add(a, b) => eval_jet(a, vars)?.add(&eval_jet(b, vars)?),
        Sub(a, b) => eval_jet(a, vars)?.sub(&eval_jet(b, vars)?),
        Mul(a, b) => eval_jet(a, vars)?.mul(&eval_jet(b, vars)?),
        Div(a, b) => eval_jet(a, vars)?.div(&eval_jet(b, vars)?),
        Square(a) => eval_jet(a, vars)?.square(),
        Neg(a) => Ok(eval_jet(a, vars)?.neg()),
        Scale(a, s) => eval_jet(a, vars)?.scale(*s),
        Shift(a, s) => eval_jet(a, vars)?.add_scalar(*s),
        Ln(a) => eval_jet(a, vars)?.ln(),
        Atan(a) => eval_jet(a, vars)?.atan(),
    };
    r.ok()
}

pub fn eval_big(o: &mut Oracle, e: &Expr, x: &[BigFloat]) -> BigFloat {
    use Expr::*;
    match e {
        Var(i) => x[*i].clone(),
        Const(c) => o.num(*c),
        Add(a, b) => eval_big(o, a, x).add(&eval_big(o, b, x), PREC, RM),
        Sub(a, b) => eval_big(o, a, x).sub(&eval_big(o, b, x), PREC, RM),
        Mul(a, b) => eval_big(o, a, x).mul(&eval_big(o, b, x), PREC, RM),
        Div(a, b) => eval_big(o, a, x).div(&eval_big(o, b, x), PREC, RM),
        Square(a) => {
            let v = eval_big(o, a, x);
            v.mul(&v, PREC, RM)
        }
        Neg(a) => eval_big(o, a, x).neg(),
        Scale(a, s) => eval_big(o, a, x).mul(&o.num(*s), PREC, RM),
        Shift(a, s) => eval_big(o, a, x).add(&o.num(*s), PREC, RM),
        Ln(a) => {
            let v = eval_big(o, a, x);
            o.ln(&v)
        }
        Atan(a) => {
            let v = eval_big(o, a, x);
            o.atan(&v)
        }
    }
}

/// Outcome counts of a fuzz run.
#[derive(Debug, Default, Clone, Copy)]
pub struct FuzzStats {
    pub trials: usize,
    pub evaluated: usize,
    pub violations: usize,
}

/// One trial: random variables, a random expression and a random point of
/// the domain. A violation is `|f(x) - L(e)| > err` where `L` is the jet's
/// affine part, evaluated exactly.
pub fn trial<R: Rng>(o: &mut Oracle, rng: &mut R, stats: &mut FuzzStats) {
    stats.trials += 1;
    let n = rng.gen_range(1..=3);
    let mut vars = Vec::with_capacity(n);
    let mut centers = Vec::with_capacity(n);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let c = random_scalar(rng);
        let r = rng.gen_range(0.0..1.0) * 2f64.powi(rng.gen_range(-40..0));
        vars.push(Jet::variable(c, i, r, n).unwrap());
        centers.push(c);
        radii.push(r);
    }
    let depth = rng.gen_range(1..=5);
    let expr = random_expr(rng, n, depth);
    let Some(jet) = eval_jet(&expr, &vars) else { return };
    if !jet.err().is_finite() || !jet.center().is_finite() {
        return;
    }
    stats.evaluated += 1;
    for _ in 0..2 {
        let e: Vec<f64> = (0..n)
            .map(|_| match rng.gen_range(0..4) {
                0 => -1.0,
                1 => 1.0,
                _ => rng.gen_range(-1.0..=1.0),
            })
            .collect();
        let x: Vec<BigFloat> =
            (0..n).map(|i| o.num(centers[i]).add(&o.num(radii[i]).mul(&o.num(e[i]), PREC, RM), PREC, RM)).collect();
        let truth = eval_big(o, &expr, &x);
        let mut lin = o.num(jet.center());
        for (c, ei) in jet.coeffs().iter().zip(&e) {
            lin = lin.add(&o.num(*c).mul(&o.num(*ei), PREC, RM), PREC, RM);
        }
        let dev = truth.sub(&lin, PREC, RM).abs();
        let ok = !truth.is_nan() && matches!(dev.cmp(&o.num(jet.err())), Some(c) if c <= 0);
        if !ok {
            stats.violations += 1;
            eprintln!("violation: {expr:?} at e={e:?}: jet {jet:?}");
        }
    }
}
