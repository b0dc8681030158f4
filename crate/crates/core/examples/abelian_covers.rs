//! Real zeros of the twisted factors det(1 ∓ A^{(a/n)}) near δ(w), and the
//! factorization of the cover's Selberg zeta function at n = 1.
//!
//!     cargo run --release --example abelian_covers -- 5 8

use hecke::dimension::cover_zero_scan;
use hecke::geodesic_oracle::{cover_euler_product, factorized_cover_determinant};
use num_complex::Complex64;

fn main() -> hecke::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w: f64 = args.first().map(|a| a.parse().expect("w")).unwrap_or(5.0);
    let n_max: u32 = args.get(1).map(|a| a.parse().expect("n")).unwrap_or(8);

    for n in 1..=n_max {
        let scan = cover_zero_scan(w, n, 0.05, 8)?;
        let zeros: Vec<String> = scan
            .factors
            .iter()
            .flat_map(|f| f.zeros.iter().map(move |z| format!("{}{}:{z:.5}", f.sign.symbol(), f.a)))
            .collect();
        println!("n = {n}: {} in window  [{}]", scan.count_in_window, zeros.join(" "));
    }

    let s = Complex64::new(0.9, 0.0);
    let fac = factorized_cover_determinant(s, 20.0, 1, 30)?;
    let euler = cover_euler_product(s, 20.0, 1, 3, 50)?;
    println!(
        "w = 20, s = 0.9, n = 1: factors {:.10}, cover Euler product {:.10}",
        fac.re, euler.value.re
    );
    Ok(())
}
