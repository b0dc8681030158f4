//! Dense LU determinants and the small linear solves used elsewhere.

use num_complex::Complex64;

/// Determinant of a row-major n×n complex matrix by LU with partial pivoting.
pub fn det_complex(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap();
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for i in col + 1..n {
            let f = a[i * n + col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let v = a[col * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    det
}

/// Solves A x = b for a row-major real matrix; returns None if singular.
pub fn solve_real(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[pivot * n + col] == 0.0 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            b.swap(pivot, col);
        }
        let p = a[col * n + col];
        for i in col + 1..n {
            let f = a[i * n + col] / p;
            for j in col..n {
                a[i * n + j] -= f * a[col * n + j];
            }
            b[i] -= f * b[col];
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
    Some(b)
}

/// Solves A x = b for a row-major complex matrix; returns None if singular.
pub fn solve_complex(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))?;
        if a[pivot * n + col].norm() == 0.0 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            b.swap(pivot, col);
        }
        let p = a[col * n + col];
        for i in col + 1..n {
            let f = a[i * n + col] / p;
            for j in col..n {
                let v = a[col * n + j];
                a[i * n + j] -= f * v;
            }
            let v = b[col];
            b[i] -= f * v;
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_complex(vec![c(3.0)], 1), c(3.0));
        let m = vec![c(0.0), c(2.0), c(3.0), c(4.0)];
        assert!((det_complex(m, 2) - c(-6.0)).norm() < 1e-15);
        let m = vec![c(1.0), c(2.0), c(3.0), c(4.0), c(5.0), c(6.0), c(7.0), c(8.0), c(10.0)];
        assert!((det_complex(m, 3) - c(-3.0)).norm() < 1e-13);
        let i = Complex64::i();
        assert!((det_complex(vec![i, c(0.0), c(0.0), i], 2) - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a: Vec<Complex64> = (0..16)
            .map(|k| Complex64::new(((k * 7) % 5) as f64 - 2.0, ((k * 3) % 4) as f64 * 0.5))
            .collect();
        fn cof(a: &[Complex64], n: usize) -> Complex64 {
            if n == 1 {
                return a[0];
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let minor: Vec<_> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
                    .map(|(r, c)| a[r * n + c])
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += a[j] * cof(&minor, n - 1) * sign;
            }
            acc
        }
        let expected = cof(&a, 4);
        assert!((det_complex(a, 4) - expected).norm() < 1e-12 * expected.norm().max(1.0));
    }

    #[test]
    fn solves() {
        let x = solve_real(vec![2.0, 1.0, 1.0, 3.0], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        assert!(solve_real(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0]).is_none());
        let x = solve_complex(vec![c(2.0), c(1.0), c(1.0), c(3.0)], vec![c(3.0), c(5.0)]).unwrap();
        assert!((x[0] - c(0.8)).norm() < 1e-15);
    }
}
