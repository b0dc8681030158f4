//! Elements of the Hecke group Γ_w as 2×2 matrices, words in the generators
//! γ_n = S T_w^n, displacement lengths and cyclic-word conjugacy classes.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const OVERFLOW_LIMIT: f64 = 1e300;

/// A 2×2 real matrix of determinant one, taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusElement {
    pub const IDENTITY: Self = Self {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// γ_n = S T_w^n = [[0, −1], [1, nw]].
    pub fn gamma(n: i64, w: f64) -> Self {
        Self::new(0.0, -1.0, 1.0, n as f64 * w)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// |a + d|, independent of the sign representative.
    pub fn trace_abs(&self) -> f64 {
        (self.a + self.d).abs()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Right multiplication by γ_n without forming the generator.
    pub fn mul_gamma(&self, n: i64, w: f64) -> Self {
        let nw = n as f64 * w;
        Self::new(self.b, -self.a + self.b * nw, self.d, -self.c + self.d * nw)
    }

    fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace_abs() > 2.0
    }
}

/// A word γ_{n₁}⋯γ_{n_N} with nonzero letters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupWord {
    letters: Vec<i64>,
    w: f64,
}

impl GroupWord {
    pub fn new(letters: Vec<i64>, w: f64) -> Result<Self> {
        if letters.is_empty() {
            return domain("a word needs at least one letter");
        }
        if letters.contains(&0) {
            return domain("word letters must be nonzero");
        }
        check_width(w)?;
        Ok(Self { letters, w })
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter_sum(&self) -> i64 {
        self.letters.iter().sum()
    }

    /// The word rotated left by `shift` letters.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut letters = self.letters.clone();
        let n = letters.len();
        letters.rotate_left(shift % n);
        Self { letters, w: self.w }
    }
}

pub(crate) fn check_width(w: f64) -> Result<()> {
    if w.is_finite() && w > 2.0 {
        Ok(())
    } else {
        domain(format!("w must exceed 2 (got {w})"))
    }
}

/// Matrix product γ_{n₁}⋯γ_{n_N}, composed left to right.
pub fn word_matrix(word: &GroupWord) -> Result<MoebiusElement> {
    letters_matrix(word.letters(), word.w())
}

pub(crate) fn letters_matrix(letters: &[i64], w: f64) -> Result<MoebiusElement> {
    let mut m = MoebiusElement::IDENTITY;
    for (i, &n) in letters.iter().enumerate() {
        m = m.mul_gamma(n, w);
        if !(m.max_abs_entry() <= OVERFLOW_LIMIT) {
            return Err(Error::Overflow { word_length: i + 1 });
        }
    }
    Ok(m)
}

/// ℓ = 2 arccosh(|tr|/2).
pub fn displacement_length(g: &MoebiusElement) -> Result<f64> {
    length_from_trace(g.trace_abs())
}

pub fn length_from_trace(trace_abs: f64) -> Result<f64> {
    if !(trace_abs > 2.0) {
        return Err(Error::NotHyperbolic { trace: trace_abs });
    }
    Ok(2.0 * (trace_abs / 2.0).acosh())
}

/// All (2M)^N words with letters in {−M,…,−1,1,…,M}, in lexicographic order.
pub fn enumerate_words(n: usize, m: u32, w: f64) -> Result<WordIter> {
    check_width(w)?;
    if n == 0 || m == 0 {
        return domain("enumerate_words needs N ≥ 1 and M ≥ 1");
    }
    Ok(WordIter {
        current: Some(vec![-(m as i64); n]),
        m: m as i64,
        w,
    })
}

pub struct WordIter {
    current: Option<Vec<i64>>,
    m: i64,
    w: f64,
}

impl Iterator for WordIter {
    type Item = GroupWord;

    fn next(&mut self) -> Option<GroupWord> {
        let word = self.current.take()?;
        let mut next = word.clone();
        let mut pos = next.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if next[pos] == self.m {
                next[pos] = -self.m;
                continue;
            }
            next[pos] = if next[pos] == -1 { 1 } else { next[pos] + 1 };
            advanced = true;
            break;
        }
        if advanced {
            self.current = Some(next);
        }
        Some(GroupWord { letters: word, w: self.w })
    }
}

/// Lexicographically least cyclic rotation.
pub fn canonical_rotation(letters: &[i64]) -> Vec<i64> {
    let n = letters.len();
    (0..n)
        .map(|r| {
            let mut v = letters.to_vec();
            v.rotate_left(r);
            v
        })
        .min()
        .unwrap_or_default()
}

/// Length of the shortest p with letters = (letters[..p])^(N/p).
pub fn primitive_period(letters: &[i64]) -> usize {
    let n = letters.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| letters[i] == letters[i - p]))
        .unwrap_or(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClassRecord {
    pub canonical: Vec<i64>,
    pub length: f64,
    pub word_length: usize,
    pub primitive: bool,
    pub multiplicity: usize,
    /// Number of distinct cyclic rotations, N/m.
    pub representatives: usize,
}

impl ConjugacyClassRecord {
    pub fn letter_sum(&self) -> i64 {
        self.canonical.iter().sum()
    }

    pub fn max_letter(&self) -> i64 {
        self.canonical.iter().map(|n| n.abs()).max().unwrap_or(0)
    }
}

/// One record per cyclic word of length ≤ `n_max` over letters |n| ≤ M.
pub fn conjugacy_classes(n_max: usize, m: u32, w: f64) -> Result<Vec<ConjugacyClassRecord>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for word in enumerate_words(n, m, w)? {
            let letters = word.letters();
            if canonical_rotation(letters) != letters {
                continue;
            }
            let period = primitive_period(letters);
            let length = displacement_length(&word_matrix(&word)?)?;
            out.push(ConjugacyClassRecord {
                canonical: letters.to_vec(),
                length,
                word_length: n,
                primitive: period == n,
                multiplicity: n / period,
                representatives: period,
            });
        }
    }
    Ok(out)
}
