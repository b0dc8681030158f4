//! s_k(w) across the comparison table, with the ladder error estimate.
//!
//!     cargo run --release --example dimension_table

use hecke::cli::REFERENCE_TABLE;
use hecke::dimension::{dimension_ladder, k_default};

fn main() -> hecke::Result<()> {
    println!("{:>6} {:>4} {:>20} {:>12} {:>16}", "w", "k", "s_k(w)", "error", "printed");
    for r in REFERENCE_TABLE {
        let k = k_default(r.w);
        let ladder = dimension_ladder(r.w, k - 3, k)?;
        println!(
            "{:>6} {:>4} {:>20.15} {:>12.2e} {:>16}",
            r.w, k, ladder.estimate, ladder.error_estimate, r.printed
        );
    }
    Ok(())
}
