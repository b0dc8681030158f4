//! Large-w expansion of δ(w).
//!
//! Writing 2δ = 1 + x, the one-term equation 1 = 2ζ(1+x)/w^{1+x} becomes
//!
//! x = 2u + Σ_{m≥1} Q_m(t)·2u·x^m,  u = 1/w, t = log w,
//!
//! where Q_{n+1}(t) is the coefficient of x^n in ζ(1+x)e^{−xt} with the pole
//! removed. Substituting x into itself fixes one more power of u per pass and
//! yields x = 2u + Σ_j 2P_j(t)u^{j+1}, so δ(w) = 1/2 + 1/w + Σ_j P_j(log w)/w^{j+1}.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::validated_stieltjes;

pub const U_MAX: usize = 5;
pub const T_MAX: usize = 5;

/// Σ c[a][b] u^a t^b with a ≤ U_MAX, b ≤ T_MAX.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedBivariatePoly {
    pub c: [[f64; T_MAX + 1]; U_MAX + 1],
}

impl Default for TruncatedBivariatePoly {
    fn default() -> Self {
        Self {
            c: [[0.0; T_MAX + 1]; U_MAX + 1],
        }
    }
}

impl TruncatedBivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: f64) -> Self {
        let mut p = Self::zero();
        p.c[0][0] = v;
        p
    }

    /// u^a · q(t), with q given by ascending coefficients.
    pub fn monomial_u(a: usize, q: &[f64]) -> Self {
        let mut p = Self::zero();
        if a <= U_MAX {
            for (b, &v) in q.iter().enumerate().take(T_MAX + 1) {
                p.c[a][b] = v;
            }
        }
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = *self;
        for a in 0..=U_MAX {
            for b in 0..=T_MAX {
                p.c[a][b] += o.c[a][b];
            }
        }
        p
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut p = *self;
        p.c.iter_mut().flatten().for_each(|v| *v *= k);
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for a1 in 0..=U_MAX {
            for b1 in 0..=T_MAX {
                let x = self.c[a1][b1];
                if x == 0.0 {
                    continue;
                }
                for a2 in 0..=U_MAX - a1 {
                    for b2 in 0..=T_MAX - b1 {
                        p.c[a1 + a2][b1 + b2] += x * o.c[a2][b2];
                    }
                }
            }
        }
        p
    }

    pub fn eval(&self, u: f64, t: f64) -> f64 {
        let mut acc = 0.0;
        for a in (0..=U_MAX).rev() {
            let mut row = 0.0;
            for b in (0..=T_MAX).rev() {
                row = row * t + self.c[a][b];
            }
            acc = acc * u + row;
        }
        acc
    }

    /// The t-polynomial multiplying u^a.
    pub fn u_coefficient(&self, a: usize) -> Vec<f64> {
        self.c[a].to_vec()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.c
            .iter()
            .flatten()
            .zip(o.c.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

fn eval_poly(q: &[f64], t: f64) -> f64 {
    q.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn trim(mut q: Vec<f64>) -> Vec<f64> {
    while q.len() > 1 && q.last() == Some(&0.0) {
        q.pop();
    }
    q
}

/// Q_1, …, Q_order as ascending coefficient vectors in t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPolySequence {
    pub q: Vec<Vec<f64>>,
}

impl QPolySequence {
    pub fn eval(&self, m: usize, t: f64) -> f64 {
        eval_poly(&self.q[m - 1], t)
    }
}

/// Q_{n+1}(t) = (−t)^{n+1}/(n+1)! + Σ_{a≤n} [(−1)^a γ_a/a!]·(−t)^{n−a}/(n−a)!.
pub fn q_polynomials(order: usize) -> Result<QPolySequence> {
    if order == 0 || order > 5 {
        return domain(format!("q_polynomials supports orders 1..=5, got {order}"));
    }
    let laurent = validated_stieltjes()?.laurent_coefficients();
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let neg_t_pow = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 } / fact(n);
    let mut q = Vec::with_capacity(order);
    for n in 0..order {
        let mut coeffs = vec![0.0; n + 2];
        coeffs[n + 1] = neg_t_pow(n + 1);
        for a in 0..=n {
            coeffs[n - a] += laurent[a] * neg_t_pow(n - a);
        }
        q.push(trim(coeffs));
    }
    Ok(QPolySequence { q })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    /// x(u, t) after the final pass.
    pub x: TruncatedBivariatePoly,
    pub passes: usize,
    /// Largest coefficient change in the final pass.
    pub last_change: f64,
}

/// Iterates x ← 2u + Σ_{m=1}^{5} Q_m(t)·2u·x^m from x = 2u until the
/// retained coefficients stop changing.
pub fn substitute() -> Result<Substitution> {
    let q = q_polynomials(5)?;
    let two_u = TruncatedBivariatePoly::monomial_u(1, &[2.0]);
    let series: Vec<TruncatedBivariatePoly> = q.q.iter().map(|qm| TruncatedBivariatePoly::monomial_u(1, qm).scale(2.0)).collect();
    let step = |x: &TruncatedBivariatePoly| {
        let mut next = two_u;
        let mut power = *x;
        for term in &series {
            next = next.add(&term.mul(&power));
            power = power.mul(x);
        }
        next
    };
    let mut x = two_u;
    let mut passes = 0;
    let mut change = f64::INFINITY;
    while passes < 5 || change > 1e-12 {
        if passes >= 12 {
            return Err(Error::Convergence(format!(
                "substitution still moving by {change:e} after {passes} passes"
            )));
        }
        let next = step(&x);
        change = next.max_abs_diff(&x);
        x = next;
        passes += 1;
    }
    Ok(Substitution {
        x,
        passes,
        last_change: change,
    })
}

/// P_1, …, P_order from x = 2u + Σ_j 2P_j(t)u^{j+1}.
pub fn p_polynomials(order: usize) -> Result<Vec<Vec<f64>>> {
    if order == 0 || order > 4 {
        return domain(format!("p_polynomials supports orders 1..=4, got {order}"));
    }
    let x = substitute()?.x;
    Ok((1..=order)
        .map(|j| trim(x.u_coefficient(j + 1).iter().map(|v| v / 2.0).collect()))
        .collect())
}

fn cached_p() -> Result<&'static Vec<Vec<f64>>> {
    static P: OnceLock<Result<Vec<Vec<f64>>>> = OnceLock::new();
    P.get_or_init(|| p_polynomials(4)).as_ref().map_err(Clone::clone)
}

/// 1/2 + 1/w + Σ_{j=1}^{4} P_j(log w)/w^{j+1}, for w ≥ 10.
pub fn delta_expansion(w: f64) -> Result<f64> {
    if !(w >= 10.0) {
        return domain(format!("delta_expansion is valid for w ≥ 10, got {w}"));
    }
    let p = cached_p()?;
    let t = w.ln();
    let mut acc = 0.5 + 1.0 / w;
    for (j, pj) in p.iter().enumerate() {
        acc += eval_poly(pj, t) / w.powi(j as i32 + 2);
    }
    Ok(acc)
}

/// Individual terms of the expansion, for reporting.
pub fn expansion_terms(w: f64) -> Result<Vec<f64>> {
    if !(w >= 10.0) {
        return domain(format!("delta_expansion is valid for w ≥ 10, got {w}"));
    }
    let p = cached_p()?;
    let t = w.ln();
    let mut out = vec![0.5, 1.0 / w];
    out.extend(p.iter().enumerate().map(|(j, pj)| eval_poly(pj, t) / w.powi(j as i32 + 2)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{riemann_zeta_real, zeta_continued, STIELTJES};
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn q1_and_q2() {
        let q = q_polynomials(5).unwrap();
        assert_eq!(q.q[0], vec![STIELTJES[0], -1.0]);
        let g = STIELTJES;
        let q2 = &q.q[1];
        assert!((q2[0] + g[1]).abs() < 1e-16);
        assert!((q2[1] + g[0]).abs() < 1e-16);
        assert!((q2[2] - 0.5).abs() < 1e-16);
        for (m, qm) in q.q.iter().enumerate() {
            assert!(qm.len() <= m + 2);
        }
    }

    #[test]
    fn q2_matches_stencil() {
        let t = 50f64.ln();
        let g = |x: f64| {
            let z = zeta_continued(Complex64::new(1.0 + x, 0.0)).unwrap().re;
            z * (-x * t).exp() - 1.0 / x
        };
        let central = |h: f64| (g(h) - g(-h)) / (2.0 * h);
        let h = 1e-3;
        let est = (4.0 * central(h) - central(2.0 * h)) / 3.0;
        let q = q_polynomials(2).unwrap();
        let g0 = STIELTJES;
        let closed = t * t / 2.0 - g0[0] * t - g0[1];
        assert!((q.eval(2, t) - closed).abs() < 1e-14);
        // ζ(1±h) ≈ ±1000 carries ~1e-10 absolute rounding, amplified by 1/(2h)
        assert!((est - closed).abs() < 5e-7, "{est} vs {closed}");
    }

    #[test]
    fn q_truncation_order() {
        let w: f64 = 50.0;
        let t = w.ln();
        let q = q_polynomials(5).unwrap();
        let residual = |x: f64| {
            let lhs = 2.0 * riemann_zeta_real(1.0 + x).unwrap() / w.powf(1.0 + x) - 2.0 / (x * w);
            let series: f64 = (0..5).map(|n| q.eval(n + 1, t) * x.powi(n as i32)).sum();
            lhs - 2.0 / w * series
        };
        let (xa, xb) = (0.08, 0.04);
        let ratio = residual(xa) / residual(xb);
        // O(x⁵): halving x divides the residual by about 32
        assert!(ratio > 24.0 && ratio < 40.0, "{ratio}");
    }

    #[test]
    fn p_polynomials_shape() {
        let p = p_polynomials(4).unwrap();
        assert_eq!(p[0], vec![2.0 * STIELTJES[0], -2.0]);
        for (j, pj) in p.iter().enumerate() {
            assert!(pj.len() <= j + 2, "deg P_{} = {}", j + 1, pj.len() - 1);
        }
        assert!((p[1][2] - 6.0).abs() < 1e-12);
        assert!((p[1][1] + 6.926587978818).abs() < 1e-9);
        assert!((p[1][0] - 1.623975077166).abs() < 1e-9);
        assert!((p[3][0] - 4.090343237239).abs() < 1e-9);
    }

    #[test]
    fn substitution_is_a_fixed_point() {
        let sub = substitute().unwrap();
        assert!(sub.last_change <= 1e-12);
        let q = q_polynomials(5).unwrap();
        // one more pass by hand
        let mut next = TruncatedBivariatePoly::monomial_u(1, &[2.0]);
        let mut power = sub.x;
        for qm in &q.q {
            next = next.add(&TruncatedBivariatePoly::monomial_u(1, qm).scale(2.0).mul(&power));
            power = power.mul(&sub.x);
        }
        assert!(next.max_abs_diff(&sub.x) <= 1e-14);
    }

    #[test]
    fn expansion_values() {
        let v = delta_expansion(100.0).unwrap();
        assert!((v - 0.509279417381).abs() < 1e-4);
        let terms = expansion_terms(100.0).unwrap();
        assert_eq!(terms[0] + terms[1], 0.51);
        let p1 = (-2.0 * 100f64.ln() + 2.0 * STIELTJES[0]) / 1e4;
        assert!((terms[2] - p1).abs() < 1e-16);
        assert!((terms[2] + 0.00080559).abs() < 1e-8);
        assert!(delta_expansion(9.9).is_err());
    }

    // Dyadic coefficients keep every product and sum exact in double precision.
    fn arb_poly() -> impl Strategy<Value = TruncatedBivariatePoly> {
        proptest::collection::vec(-64i32..=64, (U_MAX + 1) * (T_MAX + 1)).prop_map(|v| {
            let mut p = TruncatedBivariatePoly::zero();
            for a in 0..=U_MAX {
                for b in 0..=T_MAX {
                    p.c[a][b] = v[a * (T_MAX + 1) + b] as f64 / 16.0;
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn bivariate_ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert!(p.mul(&q).max_abs_diff(&q.mul(&p)) <= 1e-15);
            let lhs = p.mul(&q).mul(&r);
            let rhs = p.mul(&q.mul(&r));
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-15);
            prop_assert!(p.add(&q).max_abs_diff(&q.add(&p)) <= 1e-15);
        }
    }
}
