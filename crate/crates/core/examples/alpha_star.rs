//! The constant `alpha_*` from Fibonacci-case traces, and `alpha^{-1}` at a
//! few other slopes.
//!
//!     cargo run --release --example alpha_star

use sturmian_lab::jsr::{
    alpha_inverse, alpha_star_tau, fibonacci_traces, standard_matrices, ALPHA_STAR_REFERENCE,
};
use sturmian_lab::precision::PrecisionContext;
use sturmian_lab::words::ContinuedFraction;

fn main() -> sturmian_lab::Result<()> {
    let tau: Vec<String> = fibonacci_traces(8).iter().map(|t| t.to_string()).collect();
    println!("τ: {}", tau.join(", "));

    let mut ctx = PrecisionContext::new(256)?;
    for terms in [4, 6, 8, 10, 12] {
        let est = alpha_star_tau(terms, &mut ctx)?;
        println!(
            "{terms:>2} terms  {}  ({} digits)",
            est.decimal(&mut ctx, 45),
            est.digits_matched(&mut ctx)
        );
    }
    println!("published {ALPHA_STAR_REFERENCE}");

    println!("\nα at other slopes (directive quotients held constant):");
    for a in 1..=4 {
        let cf = ContinuedFraction::new(vec![a; 14])?;
        let est = alpha_inverse(&cf, 12, &mut ctx)?;
        println!("  [{a}, {a}, ...]  α = {}", est.decimal(&mut ctx, 25));
    }

    let seq = standard_matrices(
        &ContinuedFraction::fibonacci(8)?,
        &"3/4".parse::<num_rational::BigRational>().unwrap(),
    )?;
    println!("\nspectral radii of B_n at α = 3/4:");
    for (n, rho) in seq.rhos().iter().enumerate() {
        println!("  n = {:>2}  ρ = {rho:.12e}", n as isize - 1);
    }
    Ok(())
}
