//! Ground states of electrons on a ring for convex potentials, and what goes
//! wrong for a concave one.
//!
//!     cargo run --release --example wigner_ground_states

use sturmian_lab::wigner::{ground_state, Potential};

fn main() -> sturmian_lab::Result<()> {
    for v in Potential::default_family() {
        let g = ground_state(3, 7, &v)?;
        println!("{}:", v.name());
        for row in &g.rows {
            let mark = if row.is_argmin {
                "  <- ground state"
            } else {
                ""
            };
            println!("  {}  {:.10}{mark}", row.representative, row.energy_f64);
        }
    }

    let anti = Potential::anti_fixture();
    let g = ground_state(3, 7, &anti)?;
    println!(
        "\n{} prefers {} (balanced: {})",
        anti.name(),
        g.argmin[0],
        g.balanced
    );

    let screened: Potential = "screened:0.3".parse()?;
    let mut balanced = 0;
    let mut total = 0;
    for q in 2..=12 {
        for p in 1..q {
            if num_integer::gcd(p, q) == 1 {
                total += 1;
                balanced += usize::from(ground_state(p, q, &screened)?.balanced);
            }
        }
    }
    println!(
        "{}: balanced ground state at {balanced} of {total} densities",
        screened.name()
    );
    Ok(())
}
