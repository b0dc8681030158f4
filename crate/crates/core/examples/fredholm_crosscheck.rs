//! The truncated determinant against two independent geodesic routes:
//! exp(−Σ tr L^N / N) and the Euler product over primitive classes.
//!
//!     cargo run --release --example fredholm_crosscheck -- 20 0.9

use hecke::geodesic_oracle::{euler_product, log_det_reconstruction, Character};
use hecke::transfer::{build_matrix, determinant, Sign};
use num_complex::Complex64;

fn main() -> hecke::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let w = args.first().copied().unwrap_or(20.0);
    let s = Complex64::new(args.get(1).copied().unwrap_or(0.9), 0.0);

    let det = determinant(&build_matrix(30, s, w, 0.0)?, Sign::Plus)?.value;
    let log_det = log_det_reconstruction(s, w, Character::trivial(), 8, 200)?;
    let euler = euler_product(s, w, Character::trivial(), f64::INFINITY, 3, 50)?;

    println!("w = {w}, s = {}", s.re);
    println!("det(1 - A_30)        {:.12}", det.re);
    println!("trace reconstruction {:.12}  (raw {:.12})", log_det.value.re, log_det.raw_value.re);
    for t in &log_det.traces {
        println!("    tr L^{} = {:+.6e}  from {} words", t.n, t.value.re, t.words);
    }
    println!(
        "euler product        {:.12}  (raw {:.12}, {} classes)",
        euler.value.re, euler.raw_value.re, euler.classes
    );
    println!(
        "|det - trace| = {:.2e}, |det - euler| = {:.2e}",
        (det - log_det.value).norm(),
        (det - euler.value).norm()
    );
    Ok(())
}
