//! Words in a free group.
//!
//! A letter is a nonzero `i32`: `g + 1` for generator `g` and `-(g + 1)` for
//! its inverse. Words are always stored freely reduced.

use std::fmt;

pub type Letter = i32;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Freely reduce the given letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l != 0, "zero is not a letter");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![letter(g, false)])
    }

    /// `g^e`
    pub fn power_of(g: usize, e: i64) -> Word {
        let l = letter(g, e < 0);
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `x y x^-1 y^-1`
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// `c self c^-1`
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.concat(self).concat(&c.inverse())
    }

    /// Strip inverse pairs from the two ends.
    pub fn cyclic_reduce(&self) -> Word {
        let (_, core) = self.cyclic_split();
        core
    }

    /// `self = u core u^-1` with `core` cyclically reduced; returns `(|u|, core)`.
    pub fn cyclic_split(&self) -> (usize, Word) {
        let w = &self.0;
        let mut p = 0;
        while 2 * p + 1 < w.len() && w[p] == -w[w.len() - 1 - p] {
            p += 1;
        }
        (p, Word(w[p..w.len() - p].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// Left rotation by `k` (meaningful for cyclically reduced words).
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len().max(1)).map(move |k| self.rotate(k))
    }

    /// Least rotation of the cyclic reduction: equal for conjugate words.
    pub fn cyclic_canonical(&self) -> Word {
        let c = self.cyclic_reduce();
        c.rotations().min().unwrap_or_default()
    }

    /// Canonical form of the cyclic word up to rotation and inversion.
    pub fn cyclic_class(&self) -> Word {
        let a = self.cyclic_canonical();
        let b = self.inverse().cyclic_canonical();
        a.min(b)
    }

    /// True when the two words are conjugate up to inversion.
    pub fn same_cyclic_class(&self, other: &Word) -> bool {
        self.cyclic_class() == other.cyclic_class()
    }

    /// Run-length form `(generator, exponent)`.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &l in &self.0 {
            let g = generator_of(l);
            let e = if l > 0 { 1 } else { -1 };
            match out.last_mut() {
                Some((h, f)) if *h == g => *f += e,
                _ => out.push((g, e)),
            }
        }
        out
    }

    /// Syllables of a cyclic word, merging the first and last if they share
    /// a generator.
    pub fn cyclic_syllables(&self) -> Vec<(usize, i64)> {
        let mut s = self.cyclic_reduce().syllables();
        if s.len() > 1 && s[0].0 == s[s.len() - 1].0 {
            let (_, e) = s.pop().unwrap();
            s[0].1 += e;
        }
        s
    }

    pub fn from_syllables(s: &[(usize, i64)]) -> Word {
        Word::new(s.iter().flat_map(|&(g, e)| Word::power_of(g, e).0))
    }

    /// Exponent sum of each of `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &l in &self.0 {
            v[generator_of(l)] += if l > 0 { 1 } else { -1 };
        }
        v
    }

    /// Number of occurrences of generator `g` (either sign).
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|&&l| generator_of(l) == g).count()
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|&l| generator_of(l) + 1).max().unwrap_or(0)
    }

    /// Replace each generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &l in &self.0 {
            let img = &images[generator_of(l)];
            out = out.concat(&if l > 0 { img.clone() } else { img.inverse() });
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Formats a word in the compact `ab-1a-2b-1ab2` syntax.
pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (g, e) in self.word.syllables() {
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = 1;
    const B: Letter = 2;

    #[test]
    fn reduction() {
        assert_eq!(Word::new([A, -A, B]), Word::new([B]));
        assert_eq!(Word::new([-B, A, B]).cyclic_reduce(), Word::new([A]));
        assert_eq!(Word::commutator(&Word::new([A]), &Word::new([B])).letters(), &[A, B, -A, -B]);
        assert!(Word::new([A, B, -B, -A]).is_empty());
    }

    #[test]
    fn cyclic_split_recovers_word() {
        let w = Word::new([B, A, A, B, -B, -B]);
        let (p, core) = w.cyclic_split();
        let u = Word::new(w.letters()[..p].to_vec());
        assert_eq!(core.conjugate_by(&u), w);
        assert!(core.is_cyclically_reduced());
    }

    #[test]
    fn classes() {
        let r = Word::new([A, B, B, -A, B]);
        assert!(r.same_cyclic_class(&r.rotate(2)));
        assert!(r.same_cyclic_class(&r.inverse().rotate(1)));
        assert!(!r.same_cyclic_class(&Word::new([A, B])));
    }

    #[test]
    fn syllable_forms() {
        let w = Word::new([A, A, -B, A, B, B]);
        assert_eq!(w.syllables(), vec![(0, 2), (1, -1), (0, 1), (1, 2)]);
        assert_eq!(Word::from_syllables(&w.syllables()), w);
        let c = Word::new([B, A, A, B]);
        assert_eq!(c.cyclic_syllables(), vec![(1, 2), (0, 2)]);
        assert_eq!(w.exponent_sums(2), vec![3, 1]);
    }

    #[test]
    fn display() {
        let names = vec!["a".to_string(), "b".to_string()];
        let w = Word::new([A, -B, -A, -A, -B, A, B, B]);
        assert_eq!(w.display(&names).to_string(), "ab-1a-2b-1ab2");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
    }

    #[test]
    fn substitution() {
        // a -> ab, b -> b^-1
        let images = vec![Word::new([A, B]), Word::new([-B])];
        assert_eq!(Word::new([A, B]).substitute(&images), Word::new([A]));
    }
}
