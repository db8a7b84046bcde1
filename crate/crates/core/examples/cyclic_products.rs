//! `B(w)`, the product of binary values over all rotations, is maximized by
//! the balanced orbit.
//!
//!     cargo run --example cyclic_products [q_max]

use num_integer::Integer;
use sturmian_lab::cyclic_products::{orbit_product, verify_product_maximizer};

fn main() -> sturmian_lab::Result<()> {
    for word in ["10100", "11000"] {
        let r = orbit_product(&word.parse()?)?;
        let factors: Vec<String> = r.factors.iter().map(|f| f.to_string()).collect();
        println!("B({word}) = {} = {}", factors.join(" * "), r.product);
    }

    let q_max: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(12);
    println!("\n p/q  orbits  max B          argmax");
    for q in 2..=q_max {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            let r = verify_product_maximizer(p, q)?;
            println!(
                "{p:>2}/{q:<2} {:>6}  {:<14} {}{}",
                r.reports.len(),
                r.max_product,
                r.argmax[0].representative(),
                if r.passed() {
                    ""
                } else {
                    "  NOT the balanced orbit"
                }
            );
        }
    }
    Ok(())
}
