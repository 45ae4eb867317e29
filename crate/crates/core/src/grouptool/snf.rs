//! Smith normal form and abelianization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::presentation::Presentation;
use super::word::Word;

/// Diagonal of the Smith normal form of an integer matrix: `d_1 | d_2 | ...`,
/// nonnegative, of length `min(rows, cols)`.
pub fn smith_diagonal(matrix: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let Some((pi, pj)) = smallest_nonzero(&a, t, cols) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            // clear column t
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                let (pi, pj) = smallest_nonzero_in_cross(&a, t, cols);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // divisibility: the pivot must divide every remaining entry
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag.resize(rows.min(cols), BigInt::zero());
    diag
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().take(cols).skip(t) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_nonzero_in_cross(a: &[Vec<BigInt>], t: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut consider = |i: usize, j: usize| {
        let v = &a[i][j];
        let b = &a[best.0][best.1];
        if !v.is_zero() && (b.is_zero() || v.abs() < b.abs()) {
            best = (i, j);
        }
    };
    for i in t..a.len() {
        consider(i, t);
    }
    for j in t..cols {
        consider(t, j);
    }
    best
}

/// Exponent-sum matrix, one row per relator.
pub fn relation_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    let n = p.generators().len();
    p.relators().iter().map(|r| r.exponent_sums(n)).collect()
}

/// Invariant factors of the abelianization, one per generator: the SNF
/// diagonal padded with zeros. `0` stands for a free `Z` summand and `1`
/// for a trivial one.
pub fn abelianization(p: &Presentation) -> Vec<BigInt> {
    let n = p.generators().len();
    let mut d = smith_diagonal(&relation_matrix(p), n);
    d.resize(n, BigInt::zero());
    d
}

/// Isomorphism invariant of the abelianization: sorted torsion
/// coefficients above 1, and the free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub rank: usize,
}

/// `Z^2 + Z/3`, or `0` for the trivial group.
impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = match self.rank {
            0 => vec![],
            1 => vec!["Z".into()],
            r => vec![format!("Z^{r}")],
        };
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let d = abelianization(p);
    let rank = d.iter().filter(|x| x.is_zero()).count();
    let mut torsion: Vec<BigInt> = d.into_iter().filter(|x| *x > BigInt::from(1)).collect();
    torsion.sort();
    AbelianInvariants { torsion, rank }
}

/// Sufficient test that `w` is nontrivial in the group: its image in
/// `H_1 ⊗ Q` is nonzero, i.e. its exponent-sum vector is outside the
/// rational row space of the relation matrix.
pub fn has_infinite_order_image(p: &Presentation, w: &Word) -> bool {
    let n = p.generators().len();
    if w.generator_bound() > n {
        return false;
    }
    let rows = relation_matrix(p);
    rank_q(&rows, n) < rank_q(&[rows.clone(), vec![w.exponent_sums(n)]].concat(), n)
}

fn rank_q(rows: &[Vec<i64>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let v = &f * &m[rank][j];
                    m[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
