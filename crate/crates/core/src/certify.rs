//! Gluing equations and certified existence of nearby exact solutions.
//!
//! Each equation reads `Σ_j a_j log z_j + b_j log(1 - z_j) - c π i = 0` with
//! principal logarithms. Existence of an exact solution near the
//! approximate shapes is certified with the Krawczyk interval-Newton test
//! on a square subsystem, evaluated in jet arithmetic so that every
//! rounding error is accounted for.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::jet::{consts, ComplexJet, Jet, JetError};

/// Residuals at the stored shapes must be below this in magnitude.
pub const BRANCH_TOLERANCE: f64 = 0.5;
/// Number of plain Newton steps taken before the Krawczyk test.
pub const NEWTON_STEPS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("system has no shapes")]
    Empty,
    #[error("equation {equation} has {found} coefficients, expected {expected}")]
    CoefficientCount { equation: usize, found: usize, expected: usize },
    #[error("{equations} equations for {shapes} shapes; need at least as many equations as shapes")]
    Underdetermined { equations: usize, shapes: usize },
    #[error("shape {0} is not finite or sits at a singular point (0 or 1)")]
    SingularPoint(usize),
    #[error("residual of equation {equation} has magnitude {magnitude:.3e}; branch constants are inconsistent")]
    BranchInconsistent { equation: usize, magnitude: f64 },
    #[error("no nonsingular square subsystem")]
    RankDeficient,
    #[error("approximate Jacobian is numerically singular")]
    SingularJacobian,
    #[error("certification inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

pub type Result<T> = std::result::Result<T, CertifyError>;

/// One logarithmic gluing equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GluingSystem {
    equations: Vec<Equation>,
    shapes: Vec<Complex64>,
}

impl GluingSystem {
    pub fn new(equations: Vec<Equation>, shapes: Vec<Complex64>) -> Result<Self> {
        let n = shapes.len();
        if n == 0 {
            return Err(CertifyError::Empty);
        }
        for (i, eq) in equations.iter().enumerate() {
            for len in [eq.a.len(), eq.b.len()] {
                if len != n {
                    return Err(CertifyError::CoefficientCount { equation: i, found: len, expected: n });
                }
            }
        }
        if equations.len() < n {
            return Err(CertifyError::Underdetermined { equations: equations.len(), shapes: n });
        }
        let sys = GluingSystem { equations, shapes };
        let res = residual(&sys, &sys.shapes)?;
        if let Some((i, r)) = res.iter().enumerate().find(|(_, r)| !(r.norm() < BRANCH_TOLERANCE)) {
            return Err(CertifyError::BranchInconsistent { equation: i, magnitude: r.norm() });
        }
        Ok(sys)
    }

    /// Same equations with different approximate shapes (revalidated).
    pub fn with_shapes(&self, shapes: Vec<Complex64>) -> Result<Self> {
        GluingSystem::new(self.equations.clone(), shapes)
    }

    pub fn n(&self) -> usize {
        self.shapes.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn shapes(&self) -> &[Complex64] {
        &self.shapes
    }
}

fn check_shapes(n: usize, shapes: &[Complex64]) -> Result<()> {
    if shapes.len() != n {
        return Err(CertifyError::CoefficientCount { equation: 0, found: shapes.len(), expected: n });
    }
    for (j, z) in shapes.iter().enumerate() {
        let bad =
            !z.re.is_finite() || !z.im.is_finite() || *z == Complex64::new(0.0, 0.0) || *z == Complex64::new(1.0, 0.0);
        if bad {
            return Err(CertifyError::SingularPoint(j));
        }
    }
    Ok(())
}

fn eval_equation(eq: &Equation, logs: &[(Complex64, Complex64)]) -> Complex64 {
    let mut acc = Complex64::new(0.0, -(eq.c as f64) * PI);
    for (j, (lz, lw)) in logs.iter().enumerate() {
        acc += lz * eq.a[j] as f64 + lw * eq.b[j] as f64;
    }
    acc
}

fn logs(shapes: &[Complex64]) -> Vec<(Complex64, Complex64)> {
    shapes.iter().map(|z| (z.ln(), (Complex64::new(1.0, 0.0) - z).ln())).collect()
}

/// Floating-point residual of every equation.
pub fn residual(sys: &GluingSystem, shapes: &[Complex64]) -> Result<Vec<Complex64>> {
    check_shapes(sys.n(), shapes)?;
    let l = logs(shapes);
    Ok(sys.equations.iter().map(|eq| eval_equation(eq, &l)).collect())
}

/// `m x n` matrix with entries `a_ij / z_j - b_ij / (1 - z_j)`.
pub fn jacobian(sys: &GluingSystem, shapes: &[Complex64]) -> Result<DMatrix<Complex64>> {
    check_shapes(sys.n(), shapes)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(DMatrix::from_fn(sys.equations.len(), sys.n(), |i, j| {
        let eq = &sys.equations[i];
        let z = shapes[j];
        eq.a[j] as f64 / z - eq.b[j] as f64 / (one - z)
    }))
}

/// Pick `n` equations by greedy complete pivoting on the Jacobian at the
/// stored shapes. Returned indices are sorted.
pub fn select_square_subsystem(sys: &GluingSystem) -> Result<Vec<usize>> {
    let mut a = jacobian(sys, &sys.shapes)?;
    let (m, n) = a.shape();
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if !scale.is_finite() || scale == 0.0 {
        return Err(CertifyError::RankDeficient);
    }
    let tol = 1e-12 * scale;
    let mut rows_left: Vec<usize> = (0..m).collect();
    let mut cols_left: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = (0usize, 0usize, -1.0f64);
        for (ri, &r) in rows_left.iter().enumerate() {
            for (ci, &c) in cols_left.iter().enumerate() {
                let v = a[(r, c)].norm();
                if v > best.2 {
                    best = (ri, ci, v);
                }
            }
        }
        let (ri, ci, mag) = best;
        if !(mag > tol) {
            return Err(CertifyError::RankDeficient);
        }
        let (pr, pc) = (rows_left.remove(ri), cols_left.remove(ci));
        let pivot = a[(pr, pc)];
        for &r in &rows_left {
            let f = a[(r, pc)] / pivot;
            for c in 0..n {
                let sub = f * a[(pr, c)];
                a[(r, c)] -= sub;
            }
        }
        chosen.push(pr);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// A verified existence record.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// Bound on the `C^n` distance from the input shapes to an exact solution.
    pub delta: f64,
    /// Per complex coordinate distance from `refined_center` to that solution.
    pub box_radius: f64,
    /// Equations forming the certified square subsystem.
    pub selected: Vec<usize>,
    pub refined_center: Vec<Complex64>,
    /// Real half-width of the Krawczyk box that passed.
    pub krawczyk_radius: f64,
    /// `(index, |residual|)` of unselected equations at `refined_center`.
    pub unselected_residuals: Vec<(usize, f64)>,
}

/// Tuning knobs for [`krawczyk_certify_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    /// Initial box half-width; defaults to `1e-10 max(1, ||shapes||_inf)`.
    pub r0: Option<f64>,
    pub newton_steps: usize,
    /// Largest accepted Newton displacement (sup norm); defaults to
    /// `1e-4 max(1, ||shapes||_inf)`.
    pub max_displacement: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { r0: None, newton_steps: NEWTON_STEPS, max_displacement: None }
    }
}

pub fn krawczyk_certify(sys: &GluingSystem, r0: Option<f64>) -> Result<Certificate> {
    krawczyk_certify_with(sys, CertifyOptions { r0, ..CertifyOptions::default() })
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max)
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Plain Newton on the selected rows; a step is kept only if the residual
/// norm decreases.
pub fn newton_refine(
    sys: &GluingSystem,
    selected: &[usize],
    start: &[Complex64],
    steps: usize,
) -> Result<Vec<Complex64>> {
    let sub = subsystem(sys, selected);
    let mut x = start.to_vec();
    let mut res_norm = l2_norm(&residual(&sub, &x)?);
    for _ in 0..steps {
        if res_norm == 0.0 {
            break;
        }
        let f = DVector::from_vec(residual(&sub, &x)?);
        let j = jacobian(&sub, &x)?;
        let Some(dx) = j.lu().solve(&(-f)) else {
            return Err(CertifyError::SingularJacobian);
        };
        let cand: Vec<Complex64> = x.iter().zip(dx.iter()).map(|(a, d)| a + d).collect();
        let Ok(r) = residual(&sub, &cand) else { break };
        let n = l2_norm(&r);
        if !(n < res_norm) {
            break;
        }
        x = cand;
        res_norm = n;
    }
    Ok(x)
}

/// Restriction to the given equation indices, skipping validation.
fn subsystem(sys: &GluingSystem, selected: &[usize]) -> GluingSystem {
    GluingSystem { equations: selected.iter().map(|&i| sys.equations[i].clone()).collect(), shapes: sys.shapes.clone() }
}

pub fn krawczyk_certify_with(sys: &GluingSystem, opts: CertifyOptions) -> Result<Certificate> {
    let selected = select_square_subsystem(sys)?;
    let scale = sup_norm(&sys.shapes).max(1.0);
    let r0 = opts.r0.unwrap_or(1e-10 * scale);
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(CertifyError::Inconclusive(format!("invalid initial radius {r0}")));
    }
    let refined = newton_refine(sys, &selected, &sys.shapes, opts.newton_steps)?;
    let displacement: Vec<Complex64> = refined.iter().zip(&sys.shapes).map(|(a, b)| a - b).collect();
    let cap = opts.max_displacement.unwrap_or(1e-4 * scale);
    if sup_norm(&displacement) > cap {
        return Err(CertifyError::Inconclusive(format!(
            "Newton refinement moved the shapes by {:.3e}, beyond {cap:.1e}",
            sup_norm(&displacement)
        )));
    }
    let sub = subsystem(sys, &selected);
    let mut last = String::from("contraction failed");
    for r in [r0, 10.0 * r0, 100.0 * r0] {
        match krawczyk_test(&sub, &refined, r) {
            Ok(s) => {
                let n = sys.n() as f64;
                let box_radius = up(s * std::f64::consts::SQRT_2);
                let delta = up(up(l2_norm(&displacement)) + up(box_radius * n.sqrt()));
                let res = residual(sys, &refined)?;
                let unselected_residuals =
                    (0..sys.equations.len()).filter(|i| !selected.contains(i)).map(|i| (i, res[i].norm())).collect();
                return Ok(Certificate {
                    delta: delta.max(box_radius),
                    box_radius,
                    selected,
                    refined_center: refined,
                    krawczyk_radius: r,
                    unselected_residuals,
                });
            }
            Err(e) => last = e,
        }
    }
    Err(CertifyError::Inconclusive(last))
}

/// Generous upward rounding for a handful of float operations.
fn up(x: f64) -> f64 {
    (x * (1.0 + 4.0 * f64::EPSILON)).next_up()
}

/// Krawczyk test on a square system at center `x` with real half-width `r`.
/// On success returns `s < r` such that the unique zero in the box lies
/// within `s` of `x` in every real coordinate.
fn krawczyk_test(sys: &GluingSystem, x: &[Complex64], r: f64) -> std::result::Result<f64, String> {
    let n = sys.n();
    let m = 2 * n;
    let fail = |e: JetError| format!("jet evaluation failed: {e}");

    // rigorous F at the center, as dimension-0 jets
    let mut f_center = Vec::with_capacity(m);
    let pi = Jet::enclosing(consts::PI, 0).map_err(fail)?;
    let point_logs: Vec<(ComplexJet, ComplexJet)> = x
        .iter()
        .map(|z| {
            let zj = ComplexJet::constant(z.re, z.im, 0)?;
            Ok((zj.ln()?, zj.one_minus()?.ln()?))
        })
        .collect::<std::result::Result<_, JetError>>()
        .map_err(fail)?;
    for eq in &sys.equations {
        let mut re = Jet::constant(0.0, 0).map_err(fail)?;
        let mut im = pi.scale(-(eq.c as f64)).map_err(fail)?;
        for (j, (lz, lw)) in point_logs.iter().enumerate() {
            let (a, b) = (eq.a[j] as f64, eq.b[j] as f64);
            re = re
                .add(&lz.re.scale(a).map_err(fail)?)
                .map_err(fail)?
                .add(&lw.re.scale(b).map_err(fail)?)
                .map_err(fail)?;
            im = im
                .add(&lz.im.scale(a).map_err(fail)?)
                .map_err(fail)?
                .add(&lw.im.scale(b).map_err(fail)?)
                .map_err(fail)?;
        }
        f_center.push(re);
        f_center.push(im);
    }

    // interval enclosure of the real Jacobian over the box
    let mut inv_z = Vec::with_capacity(n);
    let mut inv_w = Vec::with_capacity(n);
    for (j, z) in x.iter().enumerate() {
        let re = Jet::variable(z.re, 2 * j, r, m).map_err(fail)?;
        let im = Jet::variable(z.im, 2 * j + 1, r, m).map_err(fail)?;
        let zb = ComplexJet::new(re, im).map_err(fail)?;
        let wb = zb.one_minus().map_err(fail)?;
        // both logarithms must be analytic on the box
        zb.arg().map_err(|_| format!("box around shape {j} meets the branch cut of log z"))?;
        wb.arg().map_err(|_| format!("box around shape {j} meets the branch cut of log(1-z)"))?;
        inv_z.push(zb.recip().map_err(fail)?);
        inv_w.push(wb.recip().map_err(fail)?);
    }
    let mut jac = vec![vec![Jet::constant(0.0, 0).map_err(fail)?; m]; m];
    for (i, eq) in sys.equations.iter().enumerate() {
        for j in 0..n {
            let (a, b) = (eq.a[j] as f64, eq.b[j] as f64);
            let p = inv_z[j].re.scale(a).map_err(fail)?.sub(&inv_w[j].re.scale(b).map_err(fail)?).map_err(fail)?;
            let q = inv_z[j].im.scale(a).map_err(fail)?.sub(&inv_w[j].im.scale(b).map_err(fail)?).map_err(fail)?;
            let p = Jet::enclosing(p.bounds(), 0).map_err(fail)?;
            let q = Jet::enclosing(q.bounds(), 0).map_err(fail)?;
            jac[2 * i][2 * j] = p.clone();
            jac[2 * i][2 * j + 1] = q.neg();
            jac[2 * i + 1][2 * j] = q;
            jac[2 * i + 1][2 * j + 1] = p;
        }
    }

    // approximate inverse of the midpoint Jacobian
    let mid = DMatrix::from_fn(m, m, |k, l| jac[k][l].center());
    let y = mid.try_inverse().ok_or_else(|| "midpoint Jacobian is singular".to_string())?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err("approximate inverse is not finite".into());
    }

    let mut worst = 0.0f64;
    for k in 0..m {
        // -Y F(x)
        let mut d = Jet::constant(0.0, 0).map_err(fail)?;
        for s in 0..m {
            d = d.add(&f_center[s].scale(-y[(k, s)]).map_err(fail)?).map_err(fail)?;
        }
        let mut d = d.lift(m).map_err(fail)?;
        // + (I - Y J(X)) (X - x)
        for l in 0..m {
            let mut c = Jet::constant(if k == l { 1.0 } else { 0.0 }, 0).map_err(fail)?;
            for s in 0..m {
                c = c.sub(&jac[s][l].scale(y[(k, s)]).map_err(fail)?).map_err(fail)?;
            }
            let dx = Jet::variable(0.0, l, r, m).map_err(fail)?;
            d = d.add(&c.lift(m).map_err(fail)?.mul(&dx).map_err(fail)?).map_err(fail)?;
        }
        let s = d.sup_abs();
        if !(s < r) {
            return Err(format!("Krawczyk image leaves the box of radius {r:.1e} in coordinate {k}"));
        }
        worst = worst.max(s);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn eq(a: &[i64], b: &[i64], c: i64) -> Equation {
        Equation { a: a.to_vec(), b: b.to_vec(), c }
    }

    fn regular() -> Complex64 {
        Complex64::from_polar(1.0, FRAC_PI_3)
    }

    /// Figure-eight knot complement: two edge equations and the meridian.
    fn figure_eight(shapes: Vec<Complex64>) -> Result<GluingSystem> {
        GluingSystem::new(vec![eq(&[2, 2], &[-1, -1], 2), eq(&[-2, -2], &[1, 1], -2), eq(&[1, 0], &[0, 1], 0)], shapes)
    }

    #[test]
    fn one_dimensional_root() {
        let sys = GluingSystem::new(vec![eq(&[3], &[0], 1)], vec![regular()]).unwrap();
        assert!(residual(&sys, &[regular()]).unwrap()[0].norm() < 1e-15);
        let unit = GluingSystem::new(vec![eq(&[1], &[0], 0)], vec![regular()]);
        assert!(matches!(unit, Err(CertifyError::BranchInconsistent { .. })));
    }

    #[test]
    fn jacobian_examples() {
        let sys = GluingSystem::new(vec![eq(&[3], &[0], 1)], vec![regular()]).unwrap();
        let single = GluingSystem { equations: vec![eq(&[1], &[0], 0)], shapes: vec![regular()] };
        let j = jacobian(&single, &[regular()]).unwrap();
        assert!((j[(0, 0)] - Complex64::from_polar(1.0, -FRAC_PI_3)).norm() < 1e-15);
        assert_eq!(jacobian(&sys, &[regular()]).unwrap().shape(), (1, 1));
        let b_only = GluingSystem { equations: vec![eq(&[0], &[1], 0)], shapes: vec![Complex64::new(0.5, 0.0)] };
        let j = jacobian(&b_only, &[Complex64::new(0.5, 0.0)]).unwrap();
        assert!((j[(0, 0)] - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn figure_eight_residuals() {
        let sys = figure_eight(vec![regular(), regular()]).unwrap();
        assert!(residual(&sys, &[regular(), regular()]).unwrap().iter().all(|r| r.norm() < 1e-12));
        let off = Complex64::new(0.5, 0.9);
        assert!(residual(&sys, &[off, off]).unwrap().iter().any(|r| r.norm() > 1e-3));
    }

    #[test]
    fn singular_points() {
        let sys = figure_eight(vec![regular(), regular()]).unwrap();
        let bad = [Complex64::new(1.0, 0.0), regular()];
        assert_eq!(residual(&sys, &bad), Err(CertifyError::SingularPoint(0)));
    }

    #[test]
    fn selection() {
        let sq =
            GluingSystem::new(vec![eq(&[2, 2], &[-1, -1], 2), eq(&[1, 0], &[0, 1], 0)], vec![regular(), regular()])
                .unwrap();
        assert_eq!(select_square_subsystem(&sq).unwrap(), vec![0, 1]);
        let dup = GluingSystem::new(
            vec![eq(&[2, 2], &[-1, -1], 2), eq(&[1, 0], &[0, 1], 0), eq(&[1, 0], &[0, 1], 0)],
            vec![regular(), regular()],
        )
        .unwrap();
        let s = select_square_subsystem(&dup).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&0));
        let fig = figure_eight(vec![regular(), regular()]).unwrap();
        let s = select_square_subsystem(&fig).unwrap();
        assert!(s.contains(&2) && s.len() == 2);
        let rank1 =
            GluingSystem::new(vec![eq(&[2, 2], &[-1, -1], 2), eq(&[-2, -2], &[1, 1], -2)], vec![regular(), regular()])
                .unwrap();
        assert_eq!(select_square_subsystem(&rank1), Err(CertifyError::RankDeficient));
    }

    #[test]
    fn certify_one_dimensional() {
        let z = regular() + Complex64::new(1e-10, 0.0);
        let sys = GluingSystem::new(vec![eq(&[3], &[0], 1)], vec![z]).unwrap();
        let cert = krawczyk_certify(&sys, None).unwrap();
        assert!(cert.delta <= 1e-8);
        assert!(cert.delta >= cert.box_radius);
        assert!((cert.refined_center[0] - regular()).norm() <= cert.box_radius);
        assert!((z - regular()).norm() <= cert.delta);
    }

    #[test]
    fn certify_figure_eight() {
        let round = |x: f64| (x * 1e9).round() / 1e9;
        let z = Complex64::new(round(0.5), round(0.75f64.sqrt()));
        let sys = figure_eight(vec![z, z]).unwrap();
        let cert = krawczyk_certify(&sys, None).unwrap();
        assert!(cert.delta < 1e-8, "{}", cert.delta);
        assert_eq!(cert.selected.len(), 2);
        assert_eq!(cert.unselected_residuals.len(), 1);
        assert!(cert.unselected_residuals[0].1 < 1e-12);
    }

    #[test]
    fn perturbed_inputs_are_not_certified() {
        let far = regular() + Complex64::new(0.5, 0.0);
        assert!(matches!(figure_eight(vec![far, far]), Err(CertifyError::BranchInconsistent { .. })));
        let near = regular() + Complex64::new(0.01, 0.0);
        let sys = figure_eight(vec![near, near]).unwrap();
        assert!(matches!(krawczyk_certify(&sys, None), Err(CertifyError::Inconclusive(_))));
    }
}
