//! Text format for gluing data.
//!
//! ```text
//! # comment
//! tets 2
//! shape 0 0.5 0.866025404
//! shape 1 0.5 0.866025404
//! eq 2 2 ; -1 -1 ; 2
//! ```
//!
//! Shape indices are 0-based and each must appear once. An equation lists
//! the `log z` coefficients, the `log(1 - z)` coefficients and the integer
//! multiple of `πi`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::certify::{CertifyError, Equation, GluingSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing 'tets' line")]
    MissingCount,
    #[error("shape {0} is missing")]
    MissingShape(usize),
    #[error("no equations")]
    NoEquations,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GluingData {
    pub shapes: Vec<Complex64>,
    pub equations: Vec<Equation>,
}

impl GluingData {
    pub fn parse(text: &str) -> Result<GluingData, FormatError> {
        let mut count: Option<usize> = None;
        let mut shapes: Vec<Option<Complex64>> = Vec::new();
        let mut equations = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| FormatError::Line { line: i + 1, message };
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "tets" => {
                    if count.is_some() {
                        return Err(err("duplicate 'tets' line".into()));
                    }
                    let n: usize = rest.trim().parse().map_err(|_| err(format!("bad count '{}'", rest.trim())))?;
                    if n == 0 {
                        return Err(err("need at least one tetrahedron".into()));
                    }
                    count = Some(n);
                    shapes = vec![None; n];
                }
                "shape" => {
                    let n = count.ok_or_else(|| err("'shape' before 'tets'".into()))?;
                    let f: Vec<&str> = rest.split_whitespace().collect();
                    if f.len() != 3 {
                        return Err(err("usage: shape <idx> <re> <im>".into()));
                    }
                    let idx: usize = f[0].parse().map_err(|_| err(format!("bad index '{}'", f[0])))?;
                    if idx >= n {
                        return Err(err(format!("index {idx} out of range for {n} tetrahedra")));
                    }
                    if shapes[idx].is_some() {
                        return Err(err(format!("shape {idx} given twice")));
                    }
                    let num = |s: &str| -> Result<f64, FormatError> {
                        match s.parse::<f64>() {
                            Ok(v) if v.is_finite() => Ok(v),
                            _ => Err(err(format!("bad number '{s}'"))),
                        }
                    };
                    shapes[idx] = Some(Complex64::new(num(f[1])?, num(f[2])?));
                }
                "eq" => {
                    let n = count.ok_or_else(|| err("'eq' before 'tets'".into()))?;
                    let parts: Vec<&str> = rest.split(';').collect();
                    if parts.len() != 3 {
                        return Err(err("usage: eq a_1 .. a_n ; b_1 .. b_n ; c".into()));
                    }
                    let ints = |s: &str| -> Result<Vec<i64>, FormatError> {
                        s.split_whitespace().map(|t| t.parse().map_err(|_| err(format!("bad integer '{t}'")))).collect()
                    };
                    let (a, b, c) = (ints(parts[0])?, ints(parts[1])?, ints(parts[2])?);
                    if a.len() != n || b.len() != n || c.len() != 1 {
                        return Err(err(format!("expected {n} + {n} coefficients and one constant")));
                    }
                    equations.push(Equation { a, b, c: c[0] });
                }
                other => return Err(err(format!("unknown keyword '{other}'"))),
            }
        }
        count.ok_or(FormatError::MissingCount)?;
        let shapes = shapes
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or(FormatError::MissingShape(i)))
            .collect::<Result<Vec<_>, _>>()?;
        if equations.is_empty() {
            return Err(FormatError::NoEquations);
        }
        Ok(GluingData { shapes, equations })
    }

    pub fn system(&self) -> Result<GluingSystem, CertifyError> {
        GluingSystem::new(self.equations.clone(), self.shapes.clone())
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

/// Serializes with shortest round-trip float formatting.
impl fmt::Display for GluingData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tets {}", self.shapes.len())?;
        for (i, z) in self.shapes.iter().enumerate() {
            writeln!(f, "shape {i} {:?} {:?}", z.re, z.im)?;
        }
        for e in &self.equations {
            writeln!(f, "eq {} ; {} ; {}", join(&e.a), join(&e.b), e.c)?;
        }
        Ok(())
    }
}

/// Figure-eight knot complement: two regular tetrahedra, shapes rounded to
/// nine decimals.
pub const FIGURE_EIGHT: &str = include_str!("../fixtures/figure8.glu");
/// One regular ideal tetrahedron with `3 log z = πi`.
pub const REGULAR_TETRAHEDRON: &str = include_str!("../fixtures/regular.glu");
