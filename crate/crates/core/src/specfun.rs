//! Special functions used by the transfer-operator matrices and the
//! asymptotic expansion: ζ(s) for Re(s) > 1, the periodic zeta function
//! (polylogarithm on the unit circle), binomial coefficients with complex
//! upper argument, and the Stieltjes constants γ₀…γ₄.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type ComplexValue = Complex64;

/// B₂, B₄, …, B₁₂. The last one only sizes the truncation point.
const BERNOULLI_EVEN: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
const FACTORIAL_EVEN: [f64; 6] = [2.0, 24.0, 720.0, 40320.0, 3628800.0, 479001600.0];

const ZETA_RELATIVE_CUTOFF: f64 = 1e-15;
const MAX_EM_TERMS: usize = 1 << 24;

/// γ₀…γ₄ (OEIS A001620, A082633, A086279, A086280, A086281).
pub const STIELTJES: [f64; 5] = [
    0.577_215_664_901_532_9,
    -0.072_815_845_483_676_72,
    -0.009_690_363_192_872_318,
    0.002_053_834_420_303_346,
    0.002_325_370_065_467_3,
];

fn ensure_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Convergence(format!("{what} produced a non-finite value")))
    }
}

/// One Euler–Maclaurin evaluation with `n` base terms. Returns the value and
/// the magnitude of the first omitted (B₁₂) correction.
fn euler_maclaurin(s: Complex64, n: usize) -> (Complex64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let mut head = Complex64::new(0.0, 0.0);
    for m in 1..n {
        head += (-s * (m as f64).ln()).exp();
    }
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    let mut tail = n_pow * nf / (s - one) + n_pow * 0.5;

    let mut rising = s;
    let mut npow = n_pow / nf;
    for j in 0..5 {
        tail += rising * npow * (BERNOULLI_EVEN[j] / FACTORIAL_EVEN[j]);
        let a = 2.0 * j as f64 + 1.0;
        rising *= (s + a) * (s + a + 1.0);
        npow /= nf * nf;
    }
    let omitted = (BERNOULLI_EVEN[5] / FACTORIAL_EVEN[5]).abs() * rising.norm() * npow.norm();
    (head + tail, omitted)
}

/// ζ(s) by Euler–Maclaurin summation, valid for every s ≠ 1 with
/// Re(s) > −9. The number of base terms doubles until the first omitted
/// Bernoulli correction drops below `ZETA_RELATIVE_CUTOFF` times the result.
pub(crate) fn zeta_continued(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() == 0.0 {
        return domain("ζ has a pole at s = 1");
    }
    if !(s.re.is_finite() && s.im.is_finite()) || s.re <= -9.0 {
        return domain(format!("ζ evaluation outside supported region: s = {s}"));
    }
    let mut n = 8usize.max(s.norm().ceil() as usize);
    loop {
        let (value, omitted) = euler_maclaurin(s, n);
        if omitted <= ZETA_RELATIVE_CUTOFF * value.norm() || omitted == 0.0 {
            return ensure_finite(value, "riemann_zeta");
        }
        if n >= MAX_EM_TERMS {
            return Err(Error::Convergence(format!(
                "Euler–Maclaurin for ζ({s}) did not reach the cutoff with {n} terms"
            )));
        }
        n *= 2;
    }
}

/// Riemann zeta function for Re(s) > 1.
pub fn riemann_zeta(s: ComplexValue) -> Result<ComplexValue> {
    if !(s.re > 1.0) {
        return domain(format!("riemann_zeta requires Re(s) > 1, got {s}"));
    }
    zeta_continued(s)
}

/// Convenience wrapper for real arguments.
pub fn riemann_zeta_real(x: f64) -> Result<f64> {
    riemann_zeta(Complex64::new(x, 0.0)).map(|z| z.re)
}

/// Compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: Complex64,
    carry: Complex64,
}

impl KahanSum {
    fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn unit_phase(theta: f64, n: f64) -> f64 {
    2.0 * PI * (theta * n).rem_euclid(1.0)
}

/// Periodic zeta function F(θ, s) = Σ_{n≥1} e^{2πiθn} n^{-s} = Li_s(e^{2πiθ})
/// for Re(s) > 1 and θ ∈ [0, 1).
///
/// For θ ≠ 0 the head of the series is summed directly and the tail
/// Σ_{n≥N} z^n n^{-s} is replaced by its Boole expansion
/// z^N Σ_k g_k f^{(k)}(N), where Σ g_k t^k = 1/(1 − z e^t) and f(x) = x^{-s}.
/// That expansion converges geometrically once 2π·dist(θ, ℤ)·N exceeds
/// |s| plus the number of retained terms.
pub fn periodic_zeta(s: ComplexValue, theta: f64) -> Result<ComplexValue> {
    if !(s.re > 1.0) {
        return domain(format!("periodic_zeta requires Re(s) > 1, got {s}"));
    }
    if !(0.0..1.0).contains(&theta) {
        return domain(format!("periodic_zeta requires θ ∈ [0, 1), got {theta}"));
    }
    if theta == 0.0 {
        return riemann_zeta(s);
    }
    const TAIL_TERMS: usize = 30;
    const MAX_HEAD: f64 = 5.0e7;

    let dist = theta.min(1.0 - theta);
    let needed = (2.0 * (s.norm() + TAIL_TERMS as f64) / (PI * dist)).ceil().max(16.0);
    if needed > MAX_HEAD {
        return Err(Error::Convergence(format!(
            "periodic_zeta: θ = {theta} too close to an integer ({needed} head terms needed)"
        )));
    }
    let n = needed as usize;

    let mut head = KahanSum::default();
    for m in 1..n {
        let lm = (m as f64).ln();
        let modulus = (-s.re * lm).exp();
        let phase = unit_phase(theta, m as f64) - s.im * lm;
        head.add(Complex64::from_polar(modulus, phase));
    }

    let z = Complex64::from_polar(1.0, 2.0 * PI * theta);
    let inv_one_minus_z = 1.0 / (Complex64::new(1.0, 0.0) - z);
    let nf = n as f64;
    let mut g = Vec::with_capacity(TAIL_TERMS);
    g.push(inv_one_minus_z);

    // f^{(k)}(N) = (-1)^k (s)_k N^{-s-k}
    let mut deriv = (-s * nf.ln()).exp();
    let mut tail = g[0] * deriv;
    let mut previous_small = false;
    for k in 1..TAIL_TERMS {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut inv_fact = 1.0;
        for m in 1..=k {
            inv_fact /= m as f64;
            acc += g[k - m] * inv_fact;
        }
        g.push(z * inv_one_minus_z * acc);
        deriv *= -(s + (k as f64 - 1.0)) / nf;
        let term = g[k] * deriv;
        tail += term;
        // g_k can vanish identically (θ = 1/2), so require two small terms.
        let small = term.norm() < 1e-17 * head.sum.norm();
        if small && previous_small {
            break;
        }
        previous_small = small;
    }
    let zn = Complex64::from_polar(1.0, unit_phase(theta, nf));
    ensure_finite(head.sum + zn * tail, "periodic_zeta")
}

/// Generalized binomial coefficient r(r−1)⋯(r−k+1)/k!.
pub fn complex_binomial(r: ComplexValue, k: u32) -> ComplexValue {
    let mut acc = Complex64::new(1.0, 0.0);
    for m in 0..k {
        acc *= (r - m as f64) / (m as f64 + 1.0);
    }
    acc
}

/// γ₀…γ₄, the coefficients in ζ(1+x) = 1/x + Σ (−1)ⁿ γₙ/n! xⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StieltjesTable {
    pub gamma: [f64; 5],
}

impl StieltjesTable {
    /// (−1)ⁿ γₙ / n!, the Taylor coefficients of ζ(1+x) − 1/x.
    pub fn laurent_coefficients(&self) -> [f64; 5] {
        let mut out = [0.0; 5];
        let mut fact = 1.0;
        for (n, c) in out.iter_mut().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *c = sign * self.gamma[n] / fact;
        }
        out
    }

    /// Compares the shipped literals with Taylor coefficients of
    /// ζ(1+x) − 1/x fitted from ζ itself. Every coefficient must agree to
    /// eight significant digits.
    pub fn validate(&self) -> Result<[f64; 5]> {
        let fitted = fit_laurent_coefficients()?;
        let expected = self.laurent_coefficients();
        for n in 0..5 {
            let rel = (fitted[n] - expected[n]).abs() / expected[n].abs();
            if !(rel <= 1e-8) {
                return Err(Error::Convergence(format!(
                    "Stieltjes γ{n}: literal {} disagrees with ζ fit {} (rel {rel:e})",
                    expected[n], fitted[n]
                )));
            }
        }
        Ok(fitted)
    }
}

pub fn stieltjes_constants() -> StieltjesTable {
    StieltjesTable { gamma: STIELTJES }
}

/// The shipped table, validated against ζ on first use.
pub fn validated_stieltjes() -> Result<&'static StieltjesTable> {
    static CHECKED: OnceLock<Result<StieltjesTable>> = OnceLock::new();
    CHECKED
        .get_or_init(|| {
            let table = stieltjes_constants();
            table.validate().map(|_| table)
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// Taylor coefficients c₀…c₄ of the entire function g(x) = ζ(1+x) − 1/x,
/// from the trapezoidal rule for Cauchy's integral on |x| = 1/2.
/// The circle crosses Re(1+x) < 1, so this uses the continued ζ.
pub fn fit_laurent_coefficients() -> Result<[f64; 5]> {
    const NODES: usize = 64;
    const RADIUS: f64 = 0.5;
    let mut acc = [Complex64::new(0.0, 0.0); 5];
    for j in 0..NODES {
        let phi = 2.0 * PI * j as f64 / NODES as f64;
        let x = Complex64::from_polar(RADIUS, phi);
        let g = zeta_continued(x + 1.0)? - 1.0 / x;
        for (n, a) in acc.iter_mut().enumerate() {
            *a += g * Complex64::from_polar(RADIUS.powi(-(n as i32)), -(n as f64) * phi);
        }
    }
    let mut out = [0.0; 5];
    for n in 0..5 {
        out[n] = acc[n].re / NODES as f64;
    }
    Ok(out)
}
