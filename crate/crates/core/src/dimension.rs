//! Real zeros of the truncated determinants: s_k(w) for the untwisted
//! determinant, the ladder k ↦ s_k(w) converging to δ(w), and zero scans of
//! the twisted factors that make up the zeta functions of abelian covers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hyperbolic::check_width;
use crate::linalg::solve_real;
use crate::transfer::{build_matrix, determinant, Sign};

/// Default scan window for the zero search.
pub const SCAN_LO: f64 = 0.501;
pub const SCAN_HI: f64 = 1.1;

/// Lower end of the untwisted scan. δ(w) − 1/2 shrinks like 1/w, so the
/// floor moves in once w exceeds 250.
pub fn scan_lo(w: f64) -> f64 {
    0.5 + (0.25 / w).min(SCAN_LO - 0.5)
}
const GRID_STEP: f64 = 1e-2;
const BRACKET_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub w: f64,
    pub k: usize,
    pub theta: f64,
    pub sign: Sign,
    pub s_k: f64,
    pub bracket: (f64, f64),
    /// |D_k(s_k)|
    pub residual: f64,
    pub iterations: usize,
    /// Set when the scan saw more than one sign change; `s_k` is then the
    /// largest root.
    pub multiple_roots: bool,
}

/// k = max(15, ⌈30 / log₂(w/2)⌉), so that (w/2)^{−k} ≤ 2^{−30}.
pub fn k_default(w: f64) -> usize {
    let k = (30.0 / (w / 2.0).log2()).ceil();
    if k.is_finite() {
        (k as usize).max(15)
    } else {
        15
    }
}

/// Re det(1 − sign·A_k(s, w, θ)) at real s.
pub fn real_determinant(k: usize, s: f64, w: f64, theta: f64, sign: Sign) -> Result<f64> {
    let m = build_matrix(k, Complex64::new(s, 0.0), w, theta)?;
    Ok(determinant(&m, sign)?.value.re)
}

/// Sign-change brackets of f on a uniform grid over [lo, hi].
fn grid_brackets(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64, f64, f64)>> {
    let cells = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a)?;
    for i in 1..=cells {
        let b = if i == cells { hi } else { lo + (hi - lo) * i as f64 / cells as f64 };
        let fb = f(b)?;
        if fa == 0.0 || fa.signum() != fb.signum() {
            out.push((a, b, fa, fb));
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// Illinois-modified regula falsi with a bisection step whenever the
/// bracket fails to halve. Returns (root, bracket, iterations).
fn refine(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<(f64, (f64, f64), usize)> {
    if fa == 0.0 {
        return Ok((a, (a, a), 0));
    }
    let mut iterations = 0;
    let mut side = 0i8;
    while b - a > BRACKET_WIDTH {
        iterations += 1;
        if iterations > 400 {
            return Err(Error::Convergence("root refinement did not terminate".into()));
        }
        let width = b - a;
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok((c, (c, c), iterations));
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            iterations += 1;
            if fm == 0.0 {
                return Ok((m, (m, m), iterations));
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
    }
    let root = if fa.abs() < fb.abs() { a } else { b };
    Ok((root, (a, b), iterations))
}

/// All real zeros of det(1 − sign·A_k^{(θ)}) on [lo, hi] that the grid
/// brackets, in increasing order. The grid is refined tenfold once if the
/// coarse pass sees no sign change.
pub fn find_zeros(k: usize, w: f64, theta: f64, sign: Sign, interval: (f64, f64)) -> Result<Vec<DimensionResult>> {
    let (lo, hi) = interval;
    if !(lo > 0.5) {
        return domain(format!("zero search needs lo > 1/2, got {lo}"));
    }
    if !(hi > lo) {
        return domain("empty search interval");
    }
    check_width(w)?;
    let f = |s: f64| real_determinant(k, s, w, theta, sign);
    let mut brackets = grid_brackets(&f, lo, hi, GRID_STEP)?;
    if brackets.is_empty() {
        brackets = grid_brackets(&f, lo, hi, GRID_STEP / 10.0)?;
    }
    let multiple = brackets.len() > 1;
    let mut out = Vec::with_capacity(brackets.len());
    for (a, b, fa, fb) in brackets {
        let (s_k, bracket, iterations) = refine(&f, a, b, fa, fb)?;
        out.push(DimensionResult {
            w,
            k,
            theta,
            sign,
            s_k,
            bracket,
            residual: f(s_k)?.abs(),
            iterations,
            multiple_roots: multiple,
        });
    }
    Ok(out)
}

/// The largest bracketed zero, if any.
pub fn find_zero(k: usize, w: f64, theta: f64, sign: Sign, interval: (f64, f64)) -> Result<Option<DimensionResult>> {
    Ok(find_zeros(k, w, theta, sign, interval)?.pop())
}

/// s_k(w) for the untwisted determinant on the default window.
pub fn s_k(k: usize, w: f64) -> Result<DimensionResult> {
    let lo = scan_lo(w);
    find_zero(k, w, 0.0, Sign::Plus, (lo, SCAN_HI))?
        .ok_or_else(|| Error::Ladder(format!("D_{k}(s, {w}) has no sign change on ({lo}, {SCAN_HI})")))
}

/// Even-index block of A_k(s, w) as a dense real matrix, for indices < `size`.
fn even_block(size: usize, s: f64, w: f64) -> Result<(Vec<f64>, usize)> {
    let m = build_matrix(size.max(1), Complex64::new(s, 0.0), w, 0.0)?;
    let idx: Vec<usize> = (0..size).step_by(2).collect();
    let n = idx.len();
    let mut b = Vec::with_capacity(n * n);
    for &i in &idx {
        for &j in &idx {
            b.push(m.get(i, j).re);
        }
    }
    Ok((b, n))
}

fn mat_vec(b: &[f64], n: usize, x: &[f64], transpose: bool) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| if transpose { b[j * n + i] } else { b[i * n + j] } * x[j]).sum())
        .collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Perron eigenvalue and eigenvector of a positive matrix by power iteration.
fn perron(b: &[f64], n: usize, transpose: bool) -> Result<(f64, Vec<f64>)> {
    let mut x = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let y = mat_vec(b, n, &x, transpose);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
        let new_lambda = dot(&next, &mat_vec(b, n, &next, transpose));
        let change = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if change < 1e-15 && (new_lambda - lambda).abs() <= 1e-15 * new_lambda.abs() {
            return Ok((new_lambda, x));
        }
        lambda = new_lambda;
    }
    Err(Error::Convergence("power iteration for the Perron vector did not settle".into()))
}

/// s_{k+1}(w) − s_k(w) by first-order perturbation of the Perron eigenvalue.
///
/// A_k is block diagonal in even and odd indices and s_k is where the even
/// block has Perron eigenvalue 1. Appending an odd index leaves that block
/// alone, so the increment is exactly zero. Appending an even index q borders
/// the block B with column c, row r and corner d; the eigenvalue moves by
/// the root ε of ε(λ + ε − d − r·z) = (r·x)(y·c)/(y·x), with x, y the right
/// and left Perron vectors and z the reduced resolvent applied to c. Then
/// Δs = −ε/λ′(s_k). Unlike a difference of two root solves, this keeps full
/// relative accuracy when the increment is far below the double-precision
/// spacing of s_k.
pub fn ladder_increment(k: usize, s: f64, w: f64) -> Result<f64> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let (full, nf) = even_block(k + 1, s, w)?;
    let n = nf - 1;
    let at = |i: usize, j: usize| full[i * nf + j];
    let b: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| at(i, j)).collect();
    let c: Vec<f64> = (0..n).map(|i| at(i, n)).collect();
    let r: Vec<f64> = (0..n).map(|j| at(n, j)).collect();
    let d = at(n, n);

    let (lambda, x) = perron(&b, n, false)?;
    let (_, y) = perron(&b, n, true)?;
    let yx = dot(&y, &x);

    // z = (λ − B + P)^{-1}(1 − P)c, P = x yᵀ/(yᵀx)
    let yc = dot(&y, &c);
    let rhs: Vec<f64> = (0..n).map(|i| c[i] - x[i] * yc / yx).collect();
    let mut system = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { lambda } else { 0.0 };
            system[i * n + j] = id - b[i * n + j] + x[i] * y[j] / yx;
        }
    }
    let z = solve_real(system, rhs).ok_or_else(|| Error::Convergence("singular reduced resolvent".into()))?;

    let p = dot(&r, &x) * yc / yx;
    let bq = lambda - d - dot(&r, &z);
    let eps = 2.0 * p / (bq + (bq * bq + 4.0 * p).sqrt());

    let h = 1e-5;
    let (bp, _) = even_block(k, s + h, w)?;
    let (bm, _) = even_block(k, s - h, w)?;
    let slope = (perron(&bp, n, false)?.0 - perron(&bm, n, false)?.0) / (2.0 * h);
    if !(slope < 0.0) {
        return Err(Error::Convergence("Perron eigenvalue is not decreasing in s".into()));
    }
    Ok(-eps / slope)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderIncrement {
    pub k: usize,
    /// s_{k+1} − s_k
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub w: f64,
    pub rungs: Vec<DimensionResult>,
    /// Increments for k = k_min, …, k_max.
    pub increments: Vec<LadderIncrement>,
    pub estimate: f64,
    pub error_estimate: f64,
}

impl Ladder {
    pub fn final_rung(&self) -> &DimensionResult {
        self.rungs.last().expect("ladder has at least one rung")
    }

    /// Nonzero increments in order of k.
    pub fn nonzero_increments(&self) -> Vec<&LadderIncrement> {
        self.increments.iter().filter(|i| i.delta != 0.0).collect()
    }
}

/// s_k(w) for k = k_min..=k_max, with perturbative increments.
///
/// The error estimate is |Δ|·(w/2)/((w/2) − 1) with Δ the nonzero one of
/// s_{k_max} − s_{k_max−1} and s_{k_max+1} − s_{k_max}; one of the two always
/// vanishes by parity.
pub fn dimension_ladder(w: f64, k_min: usize, k_max: usize) -> Result<Ladder> {
    check_width(w)?;
    if k_min < 2 || k_max < k_min {
        return domain(format!("ladder needs 2 ≤ k_min ≤ k_max, got {k_min}..{k_max}"));
    }
    let rungs: Vec<DimensionResult> = (k_min..=k_max).into_par_iter().map(|k| s_k(k, w)).collect::<Result<_>>()?;
    let increments: Vec<LadderIncrement> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            Ok(LadderIncrement {
                k,
                delta: ladder_increment(k, rungs[k - k_min].s_k, w)?,
            })
        })
        .collect::<Result<_>>()?;

    let nonzero: Vec<f64> = increments.iter().map(|i| i.delta.abs()).filter(|&d| d != 0.0).collect();
    for win in nonzero.windows(3) {
        if win[1] > win[0] && win[2] > win[1] {
            return Err(Error::Ladder(format!("increments grow twice in a row at w = {w}: {win:?}")));
        }
    }
    let last = increments.last().map(|i| i.delta.abs()).unwrap_or(0.0);
    let prev = if increments.len() >= 2 {
        increments[increments.len() - 2].delta.abs()
    } else {
        0.0
    };
    let step = if last != 0.0 { last } else { prev };
    let half = w / 2.0;
    let estimate = rungs.last().map(|r| r.s_k).unwrap_or(f64::NAN);
    Ok(Ladder {
        w,
        rungs,
        increments,
        estimate,
        error_estimate: step * half / (half - 1.0),
    })
}

/// δ(w) ≈ s_k(w) at the default k.
pub fn delta_estimate(w: f64) -> Result<f64> {
    Ok(s_k(k_default(w), w)?.s_k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorZeros {
    pub a: u32,
    pub sign: Sign,
    pub theta: f64,
    pub zeros: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverZeroReport {
    pub w: f64,
    pub n: u32,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub factors: Vec<FactorZeros>,
    /// Zeros of all factors in (δ − ε, δ].
    pub count_in_window: usize,
}

/// Zeros of det(1 ∓ A_k^{(a/n)}) for a = 0..n−1 and both signs, on
/// (1/2 + 10⁻³, 1.1).
pub fn cover_zero_scan(w: f64, n: u32, epsilon: f64, k: usize) -> Result<CoverZeroReport> {
    check_width(w)?;
    if n == 0 {
        return domain("cover degree n must be positive");
    }
    if !(epsilon > 0.0) {
        return domain("epsilon must be positive");
    }
    let delta = s_k(k, w)?.s_k;
    let jobs: Vec<(u32, Sign)> = (0..n).flat_map(|a| [(a, Sign::Plus), (a, Sign::Minus)]).collect();
    let factors: Vec<FactorZeros> = jobs
        .par_iter()
        .map(|&(a, sign)| {
            let theta = a as f64 / n as f64;
            let zeros = find_zeros(k, w, theta, sign, (SCAN_LO, SCAN_HI))?
                .into_iter()
                .map(|r| r.s_k)
                .collect();
            Ok(FactorZeros { a, sign, theta, zeros })
        })
        .collect::<Result<_>>()?;
    let top = delta + 1e-12;
    let count_in_window = factors
        .iter()
        .flat_map(|f| f.zeros.iter())
        .filter(|&&z| z > delta - epsilon && z <= top)
        .count();
    Ok(CoverZeroReport {
        w,
        n,
        k,
        epsilon,
        delta,
        factors,
        count_in_window,
    })
}
