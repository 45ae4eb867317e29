//! Command implementations. Each returns a report on success; an `Err` means
//! the input itself was malformed.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use hypcert::certify::{krawczyk_certify, CertifyError};
use hypcert::filling::{enumerate_slopes, slope_length_bound, CuspData};
use hypcert::formats::GluingData;
use hypcert::geometry::{certified_volume, check_positive_orientation, ShapeAssignment};
use hypcert::grouptool::{
    abelian_invariants, corpus, detect, detection_script, one_relator, parse_presentation, verify_script_report,
    Presentation, ProofScript, Verdict,
};
use num_complex::Complex64;

use crate::report::{Item, Report, Status};

pub fn bound(parent: f64, target: f64) -> Result<Report> {
    let b = slope_length_bound(parent, target)?;
    let mut r = Report::new(format!("bound --parent {parent:?} --target {target:?}"));
    let mut item = Item::new();
    item.put("parent", parent).put("target", target).put("bound", b).put("floor", TAU);
    r.items.push(item);
    Ok(r.finish("ok", Status::Verified))
}

/// `re,im`, or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().with_context(|| format!("bad number '{t}'"))?;
        if !v.is_finite() {
            bail!("non-finite number '{t}'");
        }
        Ok(v)
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

pub fn enumerate(meridian: &str, longitude: &str, parent: f64, target: f64, fudge: f64) -> Result<Report> {
    let m = parse_complex(meridian).context("--meridian")?;
    let l = parse_complex(longitude).context("--longitude")?;
    let cusp = CuspData::new(m, l, parent)?;
    let list = enumerate_slopes(&cusp, target, fudge)?;
    let mut r = Report::new(format!(
        "enumerate --meridian {meridian} --longitude {longitude} --parent {parent:?} --target {target:?} --fudge {fudge:?}"
    ));
    let mut summary = Item::new();
    summary.put("bound", list.bound_used).put("fudge", list.fudge).put("pairs", list.len());
    r.items.push(summary);
    if !list.is_empty() {
        let mut slopes = Item::new();
        for s in &list.pairs {
            slopes.put("slope", format!("{} {} {:.6}", s.p, s.q, s.length));
        }
        r.items.push(slopes);
    }
    Ok(r.finish("ok", Status::Verified))
}

pub struct VolumeArgs {
    pub delta: Option<f64>,
    pub tol: f64,
    pub gt: Option<f64>,
    pub le: Option<f64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Runs `f` on every file concurrently, keeping input order.
fn per_file<T: Send>(files: &[PathBuf], f: impl Fn(&Path) -> Result<T> + Sync) -> Result<Vec<T>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(|| f(p))).collect();
        handles.into_iter().map(|h| h.join().map_err(|_| anyhow!("worker panicked"))?).collect()
    })
}

fn is_input_error(e: &CertifyError) -> bool {
    matches!(
        e,
        CertifyError::Empty
            | CertifyError::CoefficientCount { .. }
            | CertifyError::Underdetermined { .. }
            | CertifyError::SingularPoint(_)
    )
}

/// Certifies one file and, when that succeeds, encloses its volume and
/// checks the requested claims.
fn volume_item(path: &Path, args: &VolumeArgs) -> Result<(Item, Status)> {
    let data = GluingData::parse(&read(path)?).with_context(|| path.display().to_string())?;
    let mut item = Item::new();
    item.put("file", path.display()).put("tets", data.shapes.len());
    let no = |mut item: Item, why: String| {
        item.put("certified", "no").put("reason", why);
        Ok((item, Status::Inconclusive))
    };
    let delta = match args.delta {
        Some(d) => {
            item.put("certified", "given");
            d
        }
        None => {
            let sys = data.system().with_context(|| path.display().to_string())?;
            if data.shapes.iter().any(|z| z.im <= 0.0) {
                return no(item, "shapes not positively oriented".into());
            }
            match krawczyk_certify(&sys, None) {
                Ok(c) => {
                    item.put("certified", "yes");
                    item.put("equations", c.selected.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" "));
                    c.delta
                }
                Err(e) if is_input_error(&e) => return Err(e).context(path.display().to_string()),
                Err(e) => return no(item, e.to_string()),
            }
        }
    };
    item.put("delta", format!("{delta:.3e}"));
    let shapes = match ShapeAssignment::new(data.shapes.clone(), delta) {
        Ok(s) => s,
        Err(e) => {
            item.put("volume", "unavailable").put("reason", e);
            return Ok((item, Status::Inconclusive));
        }
    };
    if !check_positive_orientation(&shapes) {
        item.put("orientation", "unproven");
        return Ok((item, Status::Inconclusive));
    }
    let v = match certified_volume(&shapes, args.tol) {
        Ok(v) => v,
        Err(e) => {
            item.put("volume", "unavailable").put("reason", e);
            return Ok((item, Status::Inconclusive));
        }
    };
    item.put("volume_lo", format!("{:?}", v.lo)).put("volume_hi", format!("{:?}", v.hi));
    let mut status = Status::Verified;
    if let Some(t) = args.gt {
        let ok = v.lo > t;
        item.put(&format!("volume_gt_{t:?}"), if ok { "proven" } else { "inconclusive" });
        status = status.and(if ok { Status::Verified } else { Status::Inconclusive });
    }
    if let Some(t) = args.le {
        let ok = v.hi <= t;
        item.put(&format!("volume_le_{t:?}"), if ok { "proven" } else { "inconclusive" });
        status = status.and(if ok { Status::Verified } else { Status::Inconclusive });
    }
    Ok((item, status))
}

fn file_list(files: &[PathBuf]) -> String {
    files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(" ")
}

pub fn certify(files: &[PathBuf], tol: f64) -> Result<Report> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be positive");
    }
    let args = VolumeArgs { delta: None, tol, gt: None, le: None };
    let results = per_file(files, |p| volume_item(p, &args))?;
    let mut r = Report::new(format!("certify {}", file_list(files)));
    let mut status = Status::Verified;
    for (item, s) in results {
        let s = if item.get("certified") == Some("yes") { s } else { Status::Inconclusive };
        status = status.and(s);
        r.items.push(item);
    }
    let verdict = if status == Status::Verified { "certified" } else { "inconclusive" };
    Ok(r.finish(verdict, status))
}

pub fn volume(files: &[PathBuf], args: &VolumeArgs) -> Result<Report> {
    if let Some(d) = args.delta {
        if !(d >= 0.0 && d.is_finite()) {
            bail!("--delta must be finite and nonnegative");
        }
    }
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        bail!("--tol must be positive");
    }
    let results = per_file(files, |p| volume_item(p, args))?;
    let mut cmd = format!("volume {}", file_list(files));
    if let Some(d) = args.delta {
        cmd += &format!(" --delta {d:?}");
    }
    cmd += &format!(" --tol {:?}", args.tol);
    if let Some(t) = args.gt {
        cmd += &format!(" --gt {t:?}");
    }
    if let Some(t) = args.le {
        cmd += &format!(" --le {t:?}");
    }
    let mut r = Report::new(cmd);
    let mut status = Status::Verified;
    for (item, s) in results {
        status = status.and(s);
        r.items.push(item);
    }
    let verdict = if status == Status::Verified { "proven" } else { "inconclusive" };
    Ok(r.finish(verdict, status))
}

/// Where the group and, optionally, its proof come from.
pub enum GroupSource {
    Relator(String),
    File(PathBuf),
    Corpus(String),
}

fn load_script(path: &Path) -> Result<ProofScript> {
    ProofScript::parse(&read(path)?).map_err(|e| anyhow!("{}: line {}: {}", path.display(), e.line, e.message))
}

/// A presentation file holds `<gens | relators>`; `#` comments are
/// ignored.
fn load_presentation(path: &Path) -> Result<Presentation> {
    let text: String = read(path)?.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
    parse_presentation(text.trim()).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn nonhyp(source: Option<GroupSource>, script: Option<&Path>) -> Result<Report> {
    let mut cmd = String::from("nonhyp");
    let mut script = match script {
        Some(p) => {
            cmd += &format!(" --script {}", p.display());
            Some(load_script(p)?)
        }
        None => None,
    };
    let p = match source {
        Some(GroupSource::Relator(rel)) => {
            cmd += &format!(" --rel {rel}");
            one_relator(&rel).map_err(|e| anyhow!("--rel: {e}"))?
        }
        Some(GroupSource::File(path)) => {
            cmd += &format!(" {}", path.display());
            load_presentation(&path)?
        }
        Some(GroupSource::Corpus(name)) => {
            cmd += &format!(" --corpus {name}");
            let entry = corpus::find(&name).ok_or_else(|| anyhow!("no shipped script named '{name}'"))?;
            if script.is_none() {
                script = Some(entry.script().map_err(|e| anyhow!("{name}: line {}: {}", e.line, e.message))?);
            }
            entry.presentation()
        }
        None => {
            let header = script.as_ref().and_then(|s| s.group.clone());
            let header = header.ok_or_else(|| {
                anyhow!("no group given: use --rel, a presentation file or a script with a 'group' line")
            })?;
            parse_presentation(&header).map_err(|e| anyhow!("script header: {e}"))?
        }
    };
    let mut r = Report::new(cmd);
    let mut item = Item::new();
    item.put("presentation", &p).put("abelianization", abelian_invariants(&p));
    let verdict = match &script {
        Some(s) => {
            let report = verify_script_report(&p, s);
            item.put("method", "script").put("steps", s.steps.len()).put("facts", report.facts);
            report.verdict
        }
        None => {
            let v = detect(&p);
            item.put("method", "pattern");
            if let (Some((_, s)), true) = (detection_script(&p), v.is_nonhyperbolic()) {
                item.put("steps", s.steps.len());
            }
            v
        }
    };
    let status = match &verdict {
        Verdict::NonHyperbolic { reason } => {
            item.put("reason", reason.tag()).put("detail", reason);
            Status::Verified
        }
        Verdict::Inconclusive { step, message } => {
            if let Some(s) = step {
                item.put("failed_step", s);
            }
            item.put("message", message);
            Status::Inconclusive
        }
    };
    r.items.push(item);
    let word = if status == Status::Verified { "nonhyperbolic" } else { "inconclusive" };
    Ok(r.finish(word, status))
}
