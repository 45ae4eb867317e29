//! Automatic recognition of two one-relator families.
//!
//! `<a,b | a^n b^m>`: `a^n` commutes with `b^m = a^-n`, so by the power rule
//! `a` and `b` commute.
//!
//! `<a,b | a^n b^m a^-k b^m>`: in any group this gives `[a^(n+k), b^m] = 1`,
//! and again `a` and `b` commute when `n + k != 0`.
//!
//! Either way the group is abelian. The generated script is checked by the
//! same verifier as hand-written ones.

use super::presentation::Presentation;
use super::script::{verify_script, ProofScript, Reason, Step, Verdict};

/// A proof script for a recognised one-relator presentation, together with
/// the family it belongs to.
pub fn detection_script(p: &Presentation) -> Option<(Reason, ProofScript)> {
    if p.generators().len() != 2 || p.relators().len() != 1 {
        return None;
    }
    let names = p.generators();
    let s = p.relators()[0].cyclic_syllables();
    let abelian = Step::ConcludeAbelian;
    match s.len() {
        2 => {
            let ((g, n), (h, m)) = (s[0], s[1]);
            let (x, y) = (names[g].clone(), names[h].clone());
            let steps = vec![
                Step::Assert { word: format!("[{x}{n},{y}{m}]"), depth: Some(2) },
                Step::Power { x, n, y, m },
                abelian,
            ];
            Some((Reason::PowerRelator { n, m }, ProofScript { group: None, steps }))
        }
        4 => {
            let start = if s[1].1 == s[3].1 {
                0
            } else if s[0].1 == s[2].1 {
                1
            } else {
                return None;
            };
            let (g, n) = s[start];
            let (h, m) = s[start + 1];
            let k = -s[(start + 2) % 4].1;
            if n + k == 0 {
                return None;
            }
            let (x, y) = (names[g].clone(), names[h].clone());
            let steps = vec![
                Step::GroupLem { x: x.clone(), y: y.clone(), n, m, k },
                Step::Power { x, n: n + k, y, m },
                abelian,
            ];
            Some((Reason::PowerExchange { n, m, k }, ProofScript { group: None, steps }))
        }
        _ => None,
    }
}

/// Recognise and verify; anything unrecognised is inconclusive.
pub fn detect(p: &Presentation) -> Verdict {
    let Some((reason, script)) = detection_script(p) else {
        return Verdict::inconclusive("not a recognised one-relator family");
    };
    match verify_script(p, &script) {
        Verdict::NonHyperbolic { .. } => Verdict::NonHyperbolic { reason },
        other => other,
    }
}
