//! Conjugacy classes of short words and their displacement lengths.
//!
//!     cargo run --release --example geodesic_words -- 5 3 2

use hecke::hyperbolic::conjugacy_classes;

fn main() -> hecke::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w: f64 = args.first().map(|a| a.parse().expect("w")).unwrap_or(5.0);
    let n_max: usize = args.get(1).map(|a| a.parse().expect("N")).unwrap_or(3);
    let m: u32 = args.get(2).map(|a| a.parse().expect("M")).unwrap_or(2);

    let mut classes = conjugacy_classes(n_max, m, w)?;
    classes.sort_by(|a, b| a.length.total_cmp(&b.length));
    println!("{} classes for w = {w}, N ≤ {n_max}, |n_i| ≤ {m}", classes.len());
    for c in classes.iter().take(20) {
        println!(
            "{:>24}  ℓ = {:>9.5}  {}  reps = {}",
            format!("{:?}", c.canonical),
            c.length,
            if c.primitive { "primitive" } else { "power    " },
            c.representatives
        );
    }
    Ok(())
}
