//! Embedded fixture suite.

use std::f64::consts::PI;

use hypcert::certify::krawczyk_certify;
use hypcert::filling::{enumerate_slopes, slope_length_bound, CuspData, DEFAULT_FUDGE};
use hypcert::formats::{GluingData, FIGURE_EIGHT, REGULAR_TETRAHEDRON};
use hypcert::geometry::{certified_volume, prove_volume_gt, prove_volume_le, ShapeAssignment, VOLUME_TOL};
use hypcert::grouptool::{corpus::CORPUS, detect, one_relator, verify_script, Reason, Verdict};
use hypcert::lobachevsky::{lobachevsky, DEFAULT_TOL};
use hypcert::{Interval, Jet};
use num_complex::Complex64;

use crate::report::{Item, Report, Status};

type Check = Result<String, String>;
type CheckFn = fn() -> Check;

fn pass_if(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bound() -> Check {
    let b = slope_length_bound(5.33349, 2.848).map_err(|e| e.to_string())?;
    pass_if((10.74..=10.76).contains(&b), format!("bound {b:.6}"))
}

fn s776() -> Check {
    let cusp = CuspData::new(Complex64::new(0.5, 7f64.sqrt() / 2.0), Complex64::new(2.0, 0.0), 5.33349)
        .map_err(|e| e.to_string())?;
    let list = enumerate_slopes(&cusp, 2.848, DEFAULT_FUDGE).map_err(|e| e.to_string())?;
    pass_if(list.len() == 46, format!("{} slopes", list.len()))
}

fn lobachevsky_pi_6() -> Check {
    let th = Jet::enclosing(Interval::new(PI / 6.0, PI / 6.0), 1).map_err(|e| e.to_string())?;
    let v = lobachevsky(&th, DEFAULT_TOL).map_err(|e| e.to_string())?.bounds();
    // 0.50747080320482681...; the f64 neighbours bracket the true value
    let truth = Interval::new(0.507_470_803_204_826_7, 0.507_470_803_204_826_9);
    pass_if(v.overlaps(&truth) && v.width() < 1e-9, format!("interval {v}"))
}

/// `truth` is a decimal value good to about 16 digits; the certified
/// interval must meet a 1e-15 neighbourhood of it.
fn volume(text: &str, truth: f64, gt: f64, le: f64) -> Check {
    let data = GluingData::parse(text).map_err(|e| e.to_string())?;
    let sys = data.system().map_err(|e| e.to_string())?;
    let cert = krawczyk_certify(&sys, None).map_err(|e| e.to_string())?;
    let s = ShapeAssignment::new(data.shapes, cert.delta).map_err(|e| e.to_string())?;
    let v = certified_volume(&s, VOLUME_TOL).map_err(|e| e.to_string())?;
    let near = Interval::new(truth - 1e-15, truth + 1e-15);
    let ok = cert.delta < 1e-8
        && v.overlaps(&near)
        && v.width() < 1e-6
        && prove_volume_gt(&s, gt)
        && prove_volume_le(&s, le);
    pass_if(ok, format!("delta {:.2e}, volume {v}", cert.delta))
}

fn worked_examples() -> Check {
    let a = one_relator("a3b2").map(|p| detect(&p)).map_err(|e| e.to_string())?;
    let b = one_relator("a2b2a-1b2").map(|p| detect(&p)).map_err(|e| e.to_string())?;
    let ok = a == Verdict::NonHyperbolic { reason: Reason::PowerRelator { n: 3, m: 2 } }
        && b == Verdict::NonHyperbolic { reason: Reason::PowerExchange { n: 2, m: 2, k: 1 } };
    pass_if(ok, "a3b2 and a2b2a-1b2 detected".into())
}

fn corpus() -> Check {
    let failed: Vec<&str> = CORPUS
        .iter()
        .filter(|e| !matches!(e.script(), Ok(s) if verify_script(&e.presentation(), &s).is_nonhyperbolic()))
        .map(|e| e.name)
        .collect();
    pass_if(failed.is_empty(), format!("{} scripts, failed: [{}]", CORPUS.len(), failed.join(" ")))
}

pub fn run() -> Report {
    let checks: [(&str, CheckFn); 7] = [
        ("slope-length-bound", bound),
        ("s776-enumeration", s776),
        ("lobachevsky-pi-6", lobachevsky_pi_6),
        ("figure-eight", || volume(FIGURE_EIGHT, 2.029_883_212_819_307_3, 0.943, 2.848)),
        ("regular-tetrahedron", || volume(REGULAR_TETRAHEDRON, 1.014_941_606_409_653_6, 0.943, 2.848)),
        ("worked-examples", worked_examples),
        ("proof-corpus", corpus),
    ];
    let mut r = Report::new("selftest");
    let mut status = Status::Verified;
    for (name, f) in checks {
        let mut item = Item::new();
        item.put("check", name);
        match f() {
            Ok(d) => item.put("status", "pass").put("detail", d),
            Err(d) => {
                status = Status::Inconclusive;
                item.put("status", "fail").put("detail", d)
            }
        };
        r.items.push(item);
    }
    let verdict = if status == Status::Verified { "pass" } else { "fail" };
    r.finish(verdict, status)
}
