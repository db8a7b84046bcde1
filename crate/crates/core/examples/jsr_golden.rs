//! Joint spectral radius of `{A_0, alpha A_1}`: product bounds and the
//! optimal 1-ratio as alpha varies.
//!
//!     cargo run --release --example jsr_golden

use sturmian_lab::jsr::{jsr_bounds, scaled_pair, MatrixNorm, RatioScanner};

fn main() -> sturmian_lab::Result<()> {
    let b = jsr_bounds(&scaled_pair(1.0)?, 10, MatrixNorm::Spectral)?;
    println!(" n  lower             upper");
    for l in &b.per_length {
        println!("{:>2}  {:.15}  {:.15}", l.n, l.lower, l.upper);
    }
    println!("golden ratio     {:.15}", (1.0 + 5f64.sqrt()) / 2.0);

    let scanner = RatioScanner::new(16)?;
    println!("\n alpha   ratio  necklace");
    for i in 0..=20 {
        let s = scanner.scan(i as f64 / 20.0)?;
        println!("{:>6.3}  {:.4}  {}", s.alpha, s.ratio, s.necklace);
    }
    Ok(())
}
