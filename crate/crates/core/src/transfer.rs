//! The finite matrix A_k(s, w, θ) of the transfer operator in the monomial
//! basis, and the determinants det(1 ∓ A_k).
//!
//! Entry (i, j) maps the input coefficient of z^j to the output coefficient
//! of z^i:
//!
//! a_{i,j} = [(−1)^{i+j} Li_r(e^{2πiθ}) + Li_r(e^{−2πiθ})] · w^{−r} · C(r − 1, i),
//! r = 2s + i + j.
//!
//! At θ = 0 both polylogarithms are ζ(r) and odd i + j entries vanish.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hyperbolic::check_width;
use crate::linalg::{det_complex, solve_real};
use crate::specfun::{complex_binomial, periodic_zeta, riemann_zeta};

/// Which factor det(1 − sign·A) to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// det(1 − A)
    Plus,
    /// det(1 + A)
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        domain(format!("θ must lie in [0, 1), got {theta}"))
    }
}

/// (Li_r(e^{2πiθ}), Li_r(e^{−2πiθ})).
fn polylog_pair(r: Complex64, theta: f64) -> Result<(Complex64, Complex64)> {
    if theta == 0.0 {
        let z = riemann_zeta(r)?;
        Ok((z, z))
    } else {
        Ok((periodic_zeta(r, theta)?, periodic_zeta(r, 1.0 - theta)?))
    }
}

/// Factors of a_{i,j} that depend on i + j only.
#[derive(Clone, Copy)]
struct Diagonal {
    forward: Complex64,
    backward: Complex64,
    w_power: Complex64,
}

fn diagonal_terms(m: usize, s: Complex64, w: f64, theta: f64) -> Result<Diagonal> {
    let r = 2.0 * s + m as f64;
    if !(r.re > 1.0) {
        return domain(format!("entry needs Re(2s + i + j) > 1, got {r}"));
    }
    let (forward, backward) = polylog_pair(r, theta)?;
    Ok(Diagonal {
        forward,
        backward,
        w_power: (-r * w.ln()).exp(),
    })
}

fn assemble(i: usize, j: usize, s: Complex64, t: &Diagonal) -> Complex64 {
    let r = 2.0 * s + (i + j) as f64;
    let parity = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let bracket = if parity > 0.0 && t.forward == t.backward {
        2.0 * t.forward
    } else {
        t.forward * parity + t.backward
    };
    bracket * t.w_power * complex_binomial(r - 1.0, i as u32)
}

/// One matrix entry a_{i,j}(s, w, θ).
pub fn entry(i: usize, j: usize, s: Complex64, w: f64, theta: f64) -> Result<Complex64> {
    check_width(w)?;
    check_theta(theta)?;
    if theta == 0.0 && (i + j) % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = diagonal_terms(i + j, s, w, theta)?;
    Ok(assemble(i, j, s, &t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub k: usize,
    pub s: Complex64,
    pub w: f64,
    pub theta: f64,
    /// Row-major k×k.
    pub entries: Vec<Complex64>,
}

impl TransferMatrix {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.k + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.k).map(|i| self.get(i, i)).sum()
    }

    /// tr(A²) = Σ_{i,j} a_{ij} a_{ji}.
    pub fn trace_of_square(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.k {
            for j in 0..self.k {
                acc += self.get(i, j) * self.get(j, i);
            }
        }
        acc
    }

    /// The leading k′×k′ block, which is A_{k′} itself.
    pub fn truncate(&self, k: usize) -> TransferMatrix {
        assert!(k <= self.k);
        let entries = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        TransferMatrix {
            k,
            s: self.s,
            w: self.w,
            theta: self.theta,
            entries,
        }
    }
}

/// A_k(s, w, θ). The polylogarithm values are computed once per i + j.
pub fn build_matrix(k: usize, s: Complex64, w: f64, theta: f64) -> Result<TransferMatrix> {
    check_width(w)?;
    check_theta(theta)?;
    if k == 0 {
        return domain("matrix dimension must be at least 1");
    }
    if !(s.re > 0.5) {
        return domain(format!("build_matrix requires Re(s) > 1/2, got {s}"));
    }
    let mut diag = Vec::with_capacity(2 * k - 1);
    for m in 0..2 * k - 1 {
        if theta == 0.0 && m % 2 == 1 {
            diag.push(None);
        } else {
            diag.push(Some(diagonal_terms(m, s, w, theta)?));
        }
    }
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            entries.push(match &diag[i + j] {
                Some(t) => assemble(i, j, s, t),
                None => Complex64::new(0.0, 0.0),
            });
        }
    }
    if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Convergence("non-finite transfer matrix entry".into()));
    }
    Ok(TransferMatrix { k, s, w, theta, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantValue {
    pub value: Complex64,
    pub k: usize,
    pub s: Complex64,
    pub w: f64,
    pub theta: f64,
    pub sign: Sign,
}

/// Bound on the imaginary residue of a determinant that must be real.
pub const REALITY_TOLERANCE: f64 = 1e-10;

/// det(1 − sign·A) by LU. For real s the result is real in exact
/// arithmetic; a larger imaginary residue than `REALITY_TOLERANCE`·(1+|value|)
/// is reported as an error.
pub fn determinant(m: &TransferMatrix, sign: Sign) -> Result<DeterminantValue> {
    let k = m.k;
    let sg = sign.value();
    let mut a = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let id = if i == j { 1.0 } else { 0.0 };
            a.push(Complex64::new(id, 0.0) - m.get(i, j) * sg);
        }
    }
    let value = det_complex(a, k);
    if m.s.im == 0.0 && value.im.abs() > REALITY_TOLERANCE * (1.0 + value.norm()) {
        return Err(Error::Convergence(format!(
            "determinant at real s has imaginary residue {:e}",
            value.im
        )));
    }
    Ok(DeterminantValue {
        value,
        k,
        s: m.s,
        w: m.w,
        theta: m.theta,
        sign,
    })
}

/// D_k(s, w) = det(1 − A_k(s, w)) for real s, θ = 0.
pub fn d_k(k: usize, s: f64, w: f64) -> Result<f64> {
    let m = build_matrix(k, Complex64::new(s, 0.0), w, 0.0)?;
    Ok(determinant(&m, Sign::Plus)?.value.re)
}

/// D_k(s, w) − D_K(s, w) for k < K at real s, θ = 0, to full relative
/// accuracy even when the difference is far below the spacing of D_k.
///
/// With A_K split at k, D_K = D_k · det(1 − E) for the Schur complement
/// E = A₂₂ + A₂₁(1 − A₁₁)⁻¹A₁₂, and log det(1 − E) = −Σ_n tr(Eⁿ)/n.
pub fn truncation_gap(k: usize, big_k: usize, s: f64, w: f64) -> Result<f64> {
    if k == 0 || big_k <= k {
        return domain(format!("truncation_gap needs 1 ≤ k < K, got k = {k}, K = {big_k}"));
    }
    let m = build_matrix(big_k, Complex64::new(s, 0.0), w, 0.0)?;
    let a = |i: usize, j: usize| m.get(i, j).re;
    let tail = big_k - k;
    let p: Vec<f64> = (0..k * k)
        .map(|ij| if ij / k == ij % k { 1.0 } else { 0.0 } - a(ij / k, ij % k))
        .collect();
    let d_small = det_complex(p.iter().map(|&v| Complex64::new(v, 0.0)).collect(), k).re;

    // X = (1 − A₁₁)⁻¹ A₁₂, column by column
    let mut x = vec![0.0; k * tail];
    for c in 0..tail {
        let col = solve_real(p.clone(), (0..k).map(|i| a(i, k + c)).collect())
            .ok_or_else(|| Error::Convergence(format!("1 − A_{k} is singular at s = {s}")))?;
        for i in 0..k {
            x[i * tail + c] = col[i];
        }
    }
    let mut e = vec![0.0; tail * tail];
    for i in 0..tail {
        for j in 0..tail {
            e[i * tail + j] = a(k + i, k + j) + (0..k).map(|l| a(k + i, l) * x[l * tail + j]).sum::<f64>();
        }
    }

    let mut log_det = 0.0;
    let mut power = e.clone();
    for n in 1..=400 {
        let tr: f64 = (0..tail).map(|i| power[i * tail + i]).sum();
        let term = tr / n as f64;
        log_det -= term;
        if term.abs() <= 1e-18 * log_det.abs() || term == 0.0 {
            return Ok(-d_small * log_det.exp_m1());
        }
        let mut next = vec![0.0; tail * tail];
        for i in 0..tail {
            for l in 0..tail {
                let v = power[i * tail + l];
                if v != 0.0 {
                    for j in 0..tail {
                        next[i * tail + j] += v * e[l * tail + j];
                    }
                }
            }
        }
        power = next;
    }
    Err(Error::Convergence(format!(
        "log det(1 − E) series did not settle at s = {s}, w = {w}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::riemann_zeta_real;
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// a_{i,j} at θ = 0 written straight from the real-variable formula.
    fn untwisted_formula(i: usize, j: usize, s: f64, w: f64) -> f64 {
        if (i + j) % 2 == 1 {
            return 0.0;
        }
        let r = 2.0 * s + (i + j) as f64;
        let mut binom = 1.0;
        for m in 0..i {
            binom *= (r - 1.0 - m as f64) / (m as f64 + 1.0);
        }
        2.0 * riemann_zeta_real(r).unwrap() / w.powf(r) * binom
    }

    #[test]
    fn entry_examples() {
        let v = entry(0, 0, re(1.0), 4.0, 0.0).unwrap();
        assert!((v.re - PI * PI / 48.0).abs() < 1e-14);
        assert_eq!(entry(0, 1, re(1.0), 4.0, 0.0).unwrap(), re(0.0));
        let v = entry(1, 1, re(1.0), 4.0, 0.0).unwrap();
        assert!((v.re - 6.0 * PI.powi(4) / 90.0 / 256.0).abs() < 1e-15);
        assert!((v.re - 0.0253669).abs() < 1e-7);
    }

    #[test]
    fn entry_domain() {
        assert!(entry(0, 0, re(0.5), 4.0, 0.0).is_err());
        assert!(entry(0, 0, re(0.8), 2.0, 0.0).is_err());
        assert!(build_matrix(3, re(0.5), 4.0, 0.0).is_err());
        assert!(build_matrix(3, re(0.8), 4.0, 1.0).is_err());
    }

    #[test]
    fn parity_and_reality() {
        let m = build_matrix(25, re(0.73), 3.0, 0.0).unwrap();
        for i in 0..25 {
            for j in 0..25 {
                let v = m.get(i, j);
                assert_eq!(v.im, 0.0);
                if (i + j) % 2 == 1 {
                    assert_eq!(v, re(0.0));
                }
            }
        }
    }

    #[test]
    fn reduction_matches_direct_formula() {
        for &(s, w) in &[(0.6, 2.5), (0.75, 3.0), (1.3, 10.0)] {
            let m = build_matrix(12, re(s), w, 0.0).unwrap();
            for i in 0..12 {
                for j in 0..12 {
                    let expected = untwisted_formula(i, j, s, w);
                    let got = m.get(i, j).re;
                    assert!((got - expected).abs() <= 1e-13 * expected.abs(), "{i} {j}");
                }
            }
        }
    }

    /// Taylor coefficients of (L f)(z) = Σ_{n≠0} e^{2πiθn} ((z+nw)²)^{−s} f(−1/(z+nw))
    /// for f(z) = z^j, by summing the operator over |n| ≤ N on a circle and
    /// applying the discrete Cauchy formula.
    fn operator_coefficient(i: usize, j: usize, s: f64, w: f64, theta: f64) -> Complex64 {
        const NODES: usize = 24;
        const RADIUS: f64 = 0.5;
        const N: i64 = 100_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for q in 0..NODES {
            let phi = 2.0 * PI * q as f64 / NODES as f64;
            let z = Complex64::from_polar(RADIUS, phi);
            let mut sum = Complex64::new(0.0, 0.0);
            for n in (-N..=N).filter(|&n| n != 0) {
                let u = z + n as f64 * w;
                // ((z+nw)²)^{−s} on the branch continuous from the real axis
                let base = if n > 0 { u } else { -u };
                let jac = (-2.0 * s * base.ln()).exp();
                let f = (-1.0 / u).powi(j as i32);
                let chi = Complex64::from_polar(1.0, 2.0 * PI * (theta * n as f64).rem_euclid(1.0));
                sum += chi * jac * f;
            }
            acc += sum * Complex64::from_polar(RADIUS.powi(-(i as i32)), -(i as f64) * phi);
        }
        acc / NODES as f64
    }

    #[test]
    fn entries_match_operator_application() {
        let (s, w) = (1.0, 4.0);
        for &theta in &[0.0, 0.25, 1.0 / 3.0] {
            for &(i, j) in &[(1usize, 1usize), (2, 1), (0, 2)] {
                let oracle = operator_coefficient(i, j, s, w, theta);
                let got = entry(i, j, re(s), w, theta).unwrap();
                assert!(
                    (got - oracle).norm() <= 1e-9 * got.norm().max(1e-3),
                    "θ={theta} ({i},{j}): {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn determinant_examples() {
        let s = 0.8;
        let w = 5.0;
        let m = build_matrix(1, re(s), w, 0.0).unwrap();
        let d = determinant(&m, Sign::Plus).unwrap().value.re;
        let expected = 1.0 - 2.0 * riemann_zeta_real(2.0 * s).unwrap() / w.powf(2.0 * s);
        assert!((d - expected).abs() < 1e-14);
        let zero = TransferMatrix {
            k: 3,
            s: re(s),
            w,
            theta: 0.0,
            entries: vec![re(0.0); 9],
        };
        assert_eq!(determinant(&zero, Sign::Plus).unwrap().value, re(1.0));
        assert!(d_k(15, 0.752, 3.0).unwrap().abs() < 1e-3);
    }

    #[test]
    fn twisted_reality_and_conjugate_symmetry() {
        for &theta in &[0.125, 0.25, 1.0 / 3.0, 0.5] {
            for &sign in &[Sign::Plus, Sign::Minus] {
                let m = build_matrix(12, re(0.7), 5.0, theta).unwrap();
                let d = determinant(&m, sign).unwrap().value;
                assert!(d.im.abs() <= 1e-10 * (1.0 + d.norm()));
                let mc = build_matrix(12, re(0.7), 5.0, 1.0 - theta).unwrap();
                let dc = determinant(&mc, sign).unwrap().value;
                assert!((d - dc).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn trace_helpers() {
        let m = build_matrix(4, re(0.9), 6.0, 0.0).unwrap();
        let t: Complex64 = (0..4).map(|i| m.get(i, i)).sum();
        assert_eq!(m.trace(), t);
        let sub = m.truncate(2);
        assert_eq!(sub.get(1, 1), m.get(1, 1));
        let direct = build_matrix(2, re(0.9), 6.0, 0.0).unwrap();
        assert_eq!(sub.entries, direct.entries);
    }

    #[test]
    fn truncation_gap_matches_direct_difference() {
        for &(k, big_k, s, w) in &[(2, 4, 0.8, 3.0), (3, 6, 0.75, 3.0), (4, 8, 0.9, 2.5), (1, 5, 0.7, 4.0)] {
            let direct = d_k(k, s, w).unwrap() - d_k(big_k, s, w).unwrap();
            let gap = truncation_gap(k, big_k, s, w).unwrap();
            assert!((gap - direct).abs() <= 1e-9 * direct.abs() + 1e-15, "k={k}: {gap} vs {direct}");
        }
    }

    #[test]
    fn truncation_gap_decays_like_w_over_two() {
        for &w in &[4.0f64, 10.0] {
            for &s in &[0.7, 1.0] {
                for k in 8..=16 {
                    let g0 = truncation_gap(k, 2 * k, s, w).unwrap().abs();
                    let g2 = truncation_gap(k + 2, 2 * k, s, w).unwrap().abs();
                    assert!(g0 / g2 >= (w / 2.0).powf(1.5), "w={w} s={s} k={k}: {g0:e} / {g2:e}");
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn twisted_determinant_is_real(s in 0.55f64..1.2, w in 2.5f64..20.0, theta in 0.0f64..0.999, k in 1usize..10) {
            let m = build_matrix(k, re(s), w, theta).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let d = determinant(&m, sign).unwrap().value;
                proptest::prop_assert!(d.im.abs() <= 1e-10 * (1.0 + d.norm()));
            }
        }
    }
}
