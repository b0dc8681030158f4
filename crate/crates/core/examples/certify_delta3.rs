//! Certified brackets for δ(w), w ≥ 3. At w = 3 the lower end exceeds 3/4.
//!
//!     cargo run --release --example certify_delta3

use hecke::certify::{certify_default, certify_interval, error_bound_parts, f_value};

fn main() -> hecke::Result<()> {
    let parts = error_bound_parts(3.0, 0.7)?;
    println!(
        "w = 3, prior 0.7: E1 = {:.3e}, E2 term = {:.3e}, bound = {:.6}",
        parts.e1, parts.e2_term, parts.total
    );
    println!(
        "F(0.75065) = {:+.6}, F(0.75322) = {:+.6}",
        f_value(0.75065, 3.0)?,
        f_value(0.75322, 3.0)?
    );

    let b = certify_interval(3.0, 0.7)?;
    println!("prior 0.7:        {:.6} < δ(3) < {:.6}", b.lower, b.upper);
    for w in [3.0, 4.0, 5.0, 10.0, 20.0] {
        let b = certify_default(w)?;
        println!(
            "w = {w:>4}: {:.10} < δ < {:.10}  width {:.2e}  (s_k = {:.10})",
            b.lower,
            b.upper,
            b.width(),
            b.delta_ladder
        );
    }
    Ok(())
}
