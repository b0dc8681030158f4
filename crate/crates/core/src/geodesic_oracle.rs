//! Traces of powers of the transfer operator computed from closed geodesics
//! rather than from the matrix model:
//!
//! tr L^N = Σ_{words of length N} χ(word) e^{−sℓ}/(1 − e^{−ℓ}),
//!
//! together with the determinant reconstructed from those traces and the
//! truncated Euler product over primitive classes.
//!
//! Sums over letters |n| ≤ M have a tail of order M^{1−2s}. When the
//! character does not oscillate in the letters the tail is smooth in M, and
//! the sums at M, M/2, M/4, … are extrapolated to M = ∞. Raw truncated values
//! are always reported alongside.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hyperbolic::{check_width, conjugacy_classes, word_matrix, GroupWord, MoebiusElement};
use crate::linalg::solve_complex;
use crate::transfer::{build_matrix, determinant, Sign};

/// Pruning of the word sums. A subtree is dropped, and its estimated mass
/// recorded, when its weight bound Π(|nᵢ|w)^{−2σ} falls below
/// max(relative · S^N, absolute), S being the one-letter sum. Words of
/// length ≤ 2 are always summed in full, since their cost is only (2M)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pruning {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Pruning {
    fn default() -> Self {
        Self {
            relative: 1e-10,
            absolute: 1e-18,
        }
    }
}

impl Pruning {
    pub fn none() -> Self {
        Self {
            relative: 0.0,
            absolute: 0.0,
        }
    }
}

/// χ(word) = (±1)^N e^{2πiθ Σ nᵢ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Character {
    /// `Minus` attaches (−1) to every S letter, matching det(1 + A).
    pub sign: Sign,
    pub theta: f64,
}

impl Character {
    pub fn trivial() -> Self {
        Self {
            sign: Sign::Plus,
            theta: 0.0,
        }
    }

    pub fn new(sign: Sign, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return domain(format!("θ must lie in [0, 1), got {theta}"));
        }
        Ok(Self { sign, theta })
    }

    pub fn value(&self, word_length: usize, letter_sum: i64) -> Complex64 {
        let sign = if self.sign == Sign::Minus && word_length % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        if self.theta == 0.0 {
            return Complex64::new(sign, 0.0);
        }
        let frac = (self.theta * letter_sum as f64).rem_euclid(1.0);
        Complex64::from_polar(sign, 2.0 * PI * frac)
    }

    /// Tails in M are smooth (non-oscillating) only without a twist.
    fn smooth_tail(&self) -> bool {
        self.theta == 0.0
    }
}

/// e^{−sℓ}/(1 − e^{−ℓ}) from |tr|, using e^{ℓ/2} = (|tr| + √(tr² − 4))/2.
fn trace_term(trace_abs: f64, s: Complex64) -> Result<Complex64> {
    if !(trace_abs > 2.0) {
        return Err(Error::NotHyperbolic { trace: trace_abs });
    }
    let lambda = 0.5 * (trace_abs + ((trace_abs - 2.0) * (trace_abs + 2.0)).sqrt());
    let log_lambda = lambda.ln();
    let q = 1.0 / (lambda * lambda);
    Ok((-2.0 * s * log_lambda).exp() / (1.0 - q))
}

/// χ · e^{−sℓ}/(1 − e^{−ℓ}) for a single word.
pub fn composition_trace(word: &GroupWord, s: Complex64, chi_phase: Complex64) -> Result<Complex64> {
    if (chi_phase.norm() - 1.0).abs() > 1e-12 {
        return domain("character value must have modulus one");
    }
    let g = word_matrix(word)?;
    Ok(chi_phase * trace_term(g.trace_abs(), s)?)
}

/// Fits T(M) = T∞ + Σ_j c_j M^{−p_j} through the given points and returns T∞.
pub fn extrapolate(ms: &[f64], values: &[Complex64], exponents: &[Complex64]) -> Option<Complex64> {
    let n = exponents.len() + 1;
    if ms.len() != n || values.len() != n {
        return None;
    }
    let mut a = Vec::with_capacity(n * n);
    for &m in ms {
        a.push(Complex64::new(1.0, 0.0));
        for &p in exponents {
            a.push((-p * m.ln()).exp());
        }
    }
    solve_complex(a, values.to_vec()).map(|x| x[0])
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: Complex64,
    carry: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

#[derive(Clone)]
struct Accumulator {
    buckets: Vec<Kahan>,
    pruned: f64,
    words: u64,
}

impl Accumulator {
    fn new(levels: usize) -> Self {
        Self {
            buckets: vec![Kahan::default(); levels],
            pruned: 0.0,
            words: 0,
        }
    }

    fn merge(&mut self, o: &Accumulator) {
        for (b, ob) in self.buckets.iter_mut().zip(&o.buckets) {
            b.add(ob.sum);
            b.add(-ob.carry);
        }
        self.pruned += o.pruned;
        self.words += o.words;
    }
}

/// Truncation levels M, ⌊M/2⌋, ⌊M/4⌋, … and the bucket index for a word
/// whose largest letter is `max_letter`: the deepest level still containing it.
struct Levels {
    ms: Vec<i64>,
}

impl Levels {
    fn new(m: u32, count: usize) -> Self {
        Self {
            ms: (0..count).map(|l| (m as i64) >> l).collect(),
        }
    }

    fn bucket(&self, max_letter: i64) -> usize {
        let mut b = 0;
        while b + 1 < self.ms.len() && self.ms[b + 1] >= max_letter {
            b += 1;
        }
        b
    }

    /// T(M_L) = Σ_{b ≥ L} bucket_b.
    fn level_values(&self, buckets: &[Kahan]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.ms.len()];
        let mut acc = Complex64::new(0.0, 0.0);
        for l in (0..self.ms.len()).rev() {
            acc += buckets[l].sum;
            out[l] = acc;
        }
        out
    }
}

struct Walk<'a> {
    n: usize,
    w: f64,
    s: Complex64,
    chi: Character,
    /// (|n| w)^{−2σ} indexed by |n|.
    weights: &'a [f64],
    /// Σ_{m=|n|}^{M} weights[m], indexed by |n|.
    tails: &'a [f64],
    total: f64,
    prune: f64,
    levels: &'a Levels,
}

impl Walk<'_> {
    fn descend(&self, prefix: MoebiusElement, depth: usize, weight: f64, sum: i64, max_letter: i64, acc: &mut Accumulator) -> Result<()> {
        let after = self.n - depth - 1;
        let rest = self.total.powi(after as i32);
        let m = self.weights.len() - 1;
        for a in 1..=m {
            let wa = weight * self.weights[a];
            if wa * rest < self.prune {
                acc.pruned += weight * rest * 2.0 * self.tails[a];
                break;
            }
            let ml = max_letter.max(a as i64);
            for n in [a as i64, -(a as i64)] {
                let p = prefix.mul_gamma(n, self.w);
                if after == 0 {
                    let term = self.chi.value(self.n, sum + n) * trace_term(p.trace_abs(), self.s)?;
                    acc.buckets[self.levels.bucket(ml)].add(term);
                    acc.words += 1;
                } else {
                    self.descend(p, depth + 1, wa, sum + n, ml, acc)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSum {
    pub n: usize,
    pub m: u32,
    /// Extrapolated value when available, otherwise the raw sum at M.
    pub value: Complex64,
    /// Plain sum over words with |nᵢ| ≤ M.
    pub raw: Complex64,
    pub extrapolated: bool,
    /// Estimated contribution of the words with some |nᵢ| > M.
    pub tail_estimate: f64,
    /// Estimated weight of subtrees skipped by pruning.
    pub pruned_mass: f64,
    pub words: u64,
}

/// Σ_{|n|>M} (|n|w)^{−2σ}, from the Euler–Maclaurin leading terms.
fn letter_tail(m: u32, w: f64, sigma: f64) -> f64 {
    let mf = m as f64;
    let p = 2.0 * sigma;
    2.0 * w.powf(-p) * (mf.powf(1.0 - p) / (p - 1.0) - 0.5 * mf.powf(-p))
}

fn tail_exponents(n: usize, s: Complex64) -> Vec<Complex64> {
    let first = 2.0 * s - 1.0;
    let mut out = vec![first];
    let second = 2.0 * first;
    if n >= 2 && (second - 2.0 * s).norm() >= 0.15 {
        out.push(second);
    }
    out.push(2.0 * s);
    out
}

/// Smallest level M_J for which extrapolation is attempted.
const MIN_EXTRAPOLATION_LEVEL: i64 = 8;

/// tr L^N with the default pruning threshold.
pub fn operator_trace(n: usize, m: u32, s: Complex64, w: f64, theta: f64) -> Result<TraceSum> {
    let chi = Character::new(Sign::Plus, theta)?;
    operator_trace_with(n, m, s, w, chi, Pruning::default())
}

pub fn operator_trace_with(n: usize, m: u32, s: Complex64, w: f64, chi: Character, pruning: Pruning) -> Result<TraceSum> {
    check_width(w)?;
    if !(s.re > 0.5) {
        return domain(format!("operator_trace requires Re(s) > 1/2, got {s}"));
    }
    if n == 0 || m == 0 {
        return domain("operator_trace needs N ≥ 1 and M ≥ 1");
    }
    let exponents = tail_exponents(n, s);
    let want_levels = exponents.len() + 1;
    let can_extrapolate = chi.smooth_tail() && ((m as i64) >> (want_levels - 1)) >= MIN_EXTRAPOLATION_LEVEL;
    let levels = Levels::new(m, if can_extrapolate { want_levels } else { 1 });

    let sigma = s.re;
    let weights: Vec<f64> = (0..=m as usize)
        .map(|a| if a == 0 { 0.0 } else { (a as f64 * w).powf(-2.0 * sigma) })
        .collect();
    let mut tails = vec![0.0; m as usize + 2];
    for a in (1..=m as usize).rev() {
        tails[a] = tails[a + 1] + weights[a];
    }
    let total = 2.0 * tails[1];
    let prune = if n <= 2 {
        0.0
    } else {
        (pruning.relative * total.powi(n as i32)).max(pruning.absolute)
    };
    let walk = Walk {
        n,
        w,
        s,
        chi,
        weights: &weights,
        tails: &tails,
        total,
        prune,
        levels: &levels,
    };

    // First letter split out for parallel evaluation.
    let rest = total.powi(n as i32 - 1);
    let mut first_cut = m as usize;
    let mut pruned_first = 0.0;
    for a in 1..=m as usize {
        if weights[a] * rest < prune {
            first_cut = a - 1;
            pruned_first = rest * 2.0 * tails[a];
            break;
        }
    }
    let starts: Vec<i64> = (1..=first_cut as i64).flat_map(|a| [a, -a]).collect();
    let parts: Vec<Result<Accumulator>> = starts
        .par_iter()
        .map(|&first| {
            let mut acc = Accumulator::new(levels.ms.len());
            let p = MoebiusElement::IDENTITY.mul_gamma(first, w);
            let a = first.abs();
            if n == 1 {
                let term = chi.value(1, first) * trace_term(p.trace_abs(), s)?;
                acc.buckets[levels.bucket(a)].add(term);
                acc.words += 1;
            } else {
                walk.descend(p, 1, weights[a as usize], first, a, &mut acc)?;
            }
            Ok(acc)
        })
        .collect();
    let mut acc = Accumulator::new(levels.ms.len());
    acc.pruned = pruned_first;
    for part in parts {
        acc.merge(&part?);
    }

    let values = levels.level_values(&acc.buckets);
    let raw = values[0];
    let (value, extrapolated) = if can_extrapolate {
        let ms: Vec<f64> = levels.ms.iter().map(|&x| x as f64).collect();
        match extrapolate(&ms, &values, &exponents) {
            Some(v) => (v, true),
            None => (raw, false),
        }
    } else {
        (raw, false)
    };
    let tail_estimate = n as f64 * total.powi(n as i32 - 1) * letter_tail(m, w, sigma);
    Ok(TraceSum {
        n,
        m,
        value,
        raw,
        extrapolated,
        tail_estimate,
        pruned_mass: acc.pruned,
        words: acc.words,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDetReport {
    /// exp(−Σ_{N ≤ N_max} tr L^N / N).
    pub value: Complex64,
    /// Same with raw (unextrapolated) traces.
    pub raw_value: Complex64,
    pub traces: Vec<TraceSum>,
    /// |tr L^{N_max}| / |tr L^{N_max − 1}|.
    pub ratio: f64,
    /// |tr L^{N_max}| / (N_max (1 − r)).
    pub remainder_estimate: f64,
}

/// det(1 − L) reconstructed from geodesic traces.
pub fn log_det_reconstruction(s: Complex64, w: f64, chi: Character, n_max: usize, m: u32) -> Result<LogDetReport> {
    if n_max < 2 {
        return domain("log_det_reconstruction needs N_max ≥ 2 to estimate the remainder");
    }
    let mut traces = Vec::with_capacity(n_max);
    let mut log = Complex64::new(0.0, 0.0);
    let mut raw_log = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let t = operator_trace_with(n, m, s, w, chi, Pruning::default())?;
        log -= t.value / n as f64;
        raw_log -= t.raw / n as f64;
        traces.push(t);
    }
    // Fully pruned high orders still carry their pruned mass as a size bound.
    let size = |t: &TraceSum| t.value.norm() + t.pruned_mass;
    let last = size(&traces[n_max - 1]);
    let prev = size(&traces[n_max - 2]);
    let ratio = last / prev;
    if !(ratio < 1.0) {
        return Err(Error::Convergence(format!("trace ratio {ratio} does not decay")));
    }
    Ok(LogDetReport {
        value: log.exp(),
        raw_value: raw_log.exp(),
        traces,
        ratio,
        remainder_estimate: last / (n_max as f64 * (1.0 - ratio)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerProductReport {
    pub value: Complex64,
    pub raw_value: Complex64,
    pub extrapolated: bool,
    pub classes: usize,
}

/// log(1 − z) without cancellation for small z.
fn log_one_minus(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let mut term = z;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..12 {
            acc -= term / k as f64;
            term *= z;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) - z).ln()
    }
}

/// Σ_k log(1 − χ e^{−(s+k)ℓ}), truncated once the omitted part is < 1e-12.
fn class_log_factor(chi: Complex64, s: Complex64, length: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let q = (-length).exp();
    let mut k = 0.0;
    loop {
        let z = chi * (-(s + k) * length).exp();
        acc += log_one_minus(z);
        k += 1.0;
        let omitted = (-(s.re + k) * length).exp() / (1.0 - q);
        if omitted < 1e-12 {
            return acc;
        }
    }
}

fn classes_extrapolated(
    s: Complex64,
    w: f64,
    n_max: usize,
    m: u32,
    smooth: bool,
    l_max: f64,
    log_factor: impl Fn(&crate::hyperbolic::ConjugacyClassRecord) -> Complex64,
) -> Result<EulerProductReport> {
    check_width(w)?;
    if !(s.re > 0.5) {
        return domain(format!("euler_product requires Re(s) > 1/2, got {s}"));
    }
    let exponents = vec![2.0 * s - 1.0, 2.0 * s];
    let can_extrapolate = smooth && ((m as i64) >> exponents.len()) >= MIN_EXTRAPOLATION_LEVEL;
    let levels = Levels::new(m, if can_extrapolate { exponents.len() + 1 } else { 1 });
    let classes = conjugacy_classes(n_max, m, w)?;
    let mut buckets = vec![Kahan::default(); levels.ms.len()];
    let mut count = 0;
    for c in classes.iter().filter(|c| c.primitive && c.length <= l_max) {
        buckets[levels.bucket(c.max_letter())].add(log_factor(c));
        count += 1;
    }
    let values = levels.level_values(&buckets);
    let raw = values[0];
    let (log, extrapolated) = if can_extrapolate {
        let ms: Vec<f64> = levels.ms.iter().map(|&x| x as f64).collect();
        match extrapolate(&ms, &values, &exponents) {
            Some(v) => (v, true),
            None => (raw, false),
        }
    } else {
        (raw, false)
    };
    Ok(EulerProductReport {
        value: log.exp(),
        raw_value: raw.exp(),
        extrapolated,
        classes: count,
    })
}

/// Π over primitive classes with word length ≤ `n_max`, letters ≤ M and
/// ℓ ≤ `l_max` of Π_k (1 − χ(γ) e^{−(s+k)ℓ(γ)}).
pub fn euler_product(s: Complex64, w: f64, chi: Character, l_max: f64, n_max: usize, m: u32) -> Result<EulerProductReport> {
    classes_extrapolated(s, w, n_max, m, chi.smooth_tail(), l_max, |c| {
        class_log_factor(chi.value(c.word_length, c.letter_sum()), s, c.length)
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Order of the image of a class in the abelian quotient (ℤ/2) × (ℤ/n)
/// recorded by (N mod 2, Σ nᵢ mod n).
fn cover_order(word_length: usize, letter_sum: i64, n_cover: u32) -> u32 {
    let n = n_cover as i64;
    let sum_order = n / gcd(letter_sum.rem_euclid(n), n);
    let parity_order = if word_length % 2 == 1 { 2 } else { 1 };
    let g = gcd(sum_order, parity_order);
    (sum_order * parity_order / g) as u32
}

/// Selberg zeta function of the index-2n cover: a class of Γ_w whose image
/// in the quotient has order d lifts to 2n/d primitive classes of length dℓ.
pub fn cover_euler_product(s: Complex64, w: f64, n_cover: u32, n_max: usize, m: u32) -> Result<EulerProductReport> {
    if n_cover == 0 {
        return domain("cover degree must be positive");
    }
    classes_extrapolated(s, w, n_max, m, true, f64::INFINITY, |c| {
        let d = cover_order(c.word_length, c.letter_sum(), n_cover);
        let copies = 2.0 * n_cover as f64 / d as f64;
        class_log_factor(Complex64::new(1.0, 0.0), s, d as f64 * c.length) * copies
    })
}

/// Π_{a<n} det(1 − A_k^{(a/n)}) det(1 + A_k^{(a/n)}).
pub fn factorized_cover_determinant(s: Complex64, w: f64, n_cover: u32, k: usize) -> Result<Complex64> {
    let mut prod = Complex64::new(1.0, 0.0);
    for a in 0..n_cover {
        let m = build_matrix(k, s, w, a as f64 / n_cover as f64)?;
        prod *= determinant(&m, Sign::Plus)?.value;
        prod *= determinant(&m, Sign::Minus)?.value;
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{displacement_length, enumerate_words};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_word_traces() {
        let w = GroupWord::new(vec![1], 10.0).unwrap();
        let l = 2.0 * 5f64.acosh();
        let v = composition_trace(&w, re(1.0), re(1.0)).unwrap();
        assert!((v.re - (-l).exp() / (1.0 - (-l).exp())).abs() < 1e-15);
        let v = composition_trace(&w, re(0.0), re(1.0)).unwrap();
        assert!((v.re - 1.0 / (1.0 - (-l).exp())).abs() < 1e-14);
        let w3 = GroupWord::new(vec![1], 3.0).unwrap();
        let w33 = GroupWord::new(vec![1, 1], 3.0).unwrap();
        let l1 = displacement_length(&word_matrix(&w3).unwrap()).unwrap();
        let l2 = displacement_length(&word_matrix(&w33).unwrap()).unwrap();
        assert!((l2 - 2.0 * l1).abs() < 1e-12);
        assert!(composition_trace(&w, re(1.0), re(2.0)).is_err());
    }

    #[test]
    fn enumerated_sum_matches_walk() {
        let (s, w) = (re(0.8), 4.0);
        for n in 1..=3 {
            let mut direct = Complex64::new(0.0, 0.0);
            for word in enumerate_words(n, 3, w).unwrap() {
                let chi = Character::trivial().value(n, word.letter_sum());
                direct += composition_trace(&word, s, chi).unwrap();
            }
            let t = operator_trace_with(n, 3, s, w, Character::trivial(), Pruning::none()).unwrap();
            assert!((t.raw - direct).norm() < 1e-14, "{n}");
            assert_eq!(t.words, 6u64.pow(n as u32));
            assert!(!t.extrapolated);
        }
    }

    #[test]
    fn character_signs() {
        let chi = Character::new(Sign::Plus, 0.5).unwrap();
        assert!((chi.value(1, 3) - re(-1.0)).norm() < 1e-15);
        assert!((chi.value(1, 2) - re(1.0)).norm() < 1e-15);
        let rho = Character::new(Sign::Minus, 0.0).unwrap();
        assert_eq!(rho.value(3, 5), re(-1.0));
        assert_eq!(rho.value(2, 5), re(1.0));
        let t = operator_trace(2, 1, re(0.8), 5.0, 0.0).unwrap();
        assert_eq!(t.words, 4);
    }

    #[test]
    fn cyclic_rotation_does_not_change_traces() {
        let (s, w) = (re(0.9), 3.0);
        for n in 2..=4 {
            let mut base = Complex64::new(0.0, 0.0);
            let mut rotated = Complex64::new(0.0, 0.0);
            for word in enumerate_words(n, 2, w).unwrap() {
                base += composition_trace(&word, s, re(1.0)).unwrap();
                rotated += composition_trace(&word.rotated(1), s, re(1.0)).unwrap();
            }
            assert!((base - rotated).norm() <= 1e-13 * base.norm());
        }
    }

    #[test]
    fn multiplicity_bookkeeping() {
        let (s, w) = (0.8, 3.0);
        let classes = conjugacy_classes(3, 3, w).unwrap();
        for n in 1..=3 {
            let words: f64 = enumerate_words(n, 3, w)
                .unwrap()
                .map(|wd| (-s * displacement_length(&word_matrix(&wd).unwrap()).unwrap()).exp())
                .sum();
            let via_classes: f64 = classes
                .iter()
                .filter(|c| c.word_length == n)
                .map(|c| (n / c.multiplicity) as f64 * (-s * c.length).exp())
                .sum();
            assert!((words - via_classes).abs() < 1e-13 * words);
        }
    }

    #[test]
    fn extrapolation_recovers_power_law() {
        let p = [re(0.6), re(1.6)];
        let f = |m: f64| re(2.0) + re(3.0) * m.powf(-0.6) - re(0.7) * m.powf(-1.6);
        let ms = [400.0, 200.0, 100.0];
        let vals: Vec<_> = ms.iter().map(|&m| f(m)).collect();
        let v = extrapolate(&ms, &vals, &p).unwrap();
        assert!((v - re(2.0)).norm() < 1e-12);
    }

    #[test]
    fn euler_product_conventions() {
        let r = euler_product(re(0.9), 20.0, Character::trivial(), 0.1, 3, 5).unwrap();
        assert_eq!(r.classes, 0);
        assert_eq!(r.value, re(1.0));
        // single class: keeping only the factors k = 0, 1
        let l = 2.0 * 1.5f64.acosh();
        let full = class_log_factor(re(1.0), re(0.9), l).exp();
        let two = (1.0 - (-0.9 * l).exp()) * (1.0 - (-1.9 * l).exp());
        assert!(((full.re - two) / two).abs() < (-2.0 * l).exp());
    }

    #[test]
    fn cover_orders() {
        assert_eq!(cover_order(2, 4, 1), 1);
        assert_eq!(cover_order(1, 4, 1), 2);
        assert_eq!(cover_order(1, 1, 4), 4);
        assert_eq!(cover_order(2, 2, 4), 2);
        assert_eq!(cover_order(1, 2, 4), 2);
        assert_eq!(cover_order(1, 0, 3), 2);
        assert_eq!(cover_order(1, 1, 3), 6);
    }

    #[test]
    fn cover_product_matches_character_product() {
        // the cover Euler product factors over the 2n characters class by class
        let (s, w, n) = (re(0.9), 6.0, 3u32);
        let cover = cover_euler_product(s, w, n, 2, 4).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for a in 0..n {
            for sign in [Sign::Plus, Sign::Minus] {
                let chi = Character::new(sign, a as f64 / n as f64).unwrap();
                prod *= euler_product(s, w, chi, f64::INFINITY, 2, 4).unwrap().raw_value;
            }
        }
        assert!((cover.raw_value - prod).norm() < 1e-12);
    }
}
