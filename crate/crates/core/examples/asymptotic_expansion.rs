//! The large-w expansion of δ(w) against the transfer-operator value.
//!
//!     cargo run --release --example asymptotic_expansion

use hecke::asymptotics::{delta_expansion, p_polynomials};
use hecke::dimension::delta_estimate;

fn main() -> hecke::Result<()> {
    for (j, p) in p_polynomials(4)?.iter().enumerate() {
        let coeffs: Vec<String> = p.iter().map(|c| format!("{c:.12}")).collect();
        println!("P{}: [{}]", j + 1, coeffs.join(", "));
    }
    println!();
    println!("{:>6} {:>18} {:>18} {:>12} {:>10}", "w", "expansion", "s_k", "difference", "scaled");
    for w in [10.0f64, 20.0, 50.0, 100.0, 200.0, 400.0, 1000.0] {
        let e = delta_expansion(w)?;
        let d = delta_estimate(w)?;
        // the remainder behaves like (log w)^5 / w^6
        let scaled = (d - e).abs() * w.powi(6) / w.ln().powi(5);
        println!("{w:>6} {e:>18.14} {d:>18.14} {:>12.3e} {scaled:>10.1}", d - e);
    }
    Ok(())
}
