//! Multimodularity checks and the minimality of mechanical words for window
//! averages of multimodular functions.
//!
//!     cargo run --release --example multimodular

use sturmian_lab::multimodular_queue::{
    check_multimodular, multimodular_fixtures, verify_mechanical_minimality, window_average,
    LatticeBox, LatticeFunction, SymbolSource,
};
use sturmian_lab::words::MechanicalSpec;

fn main() -> sturmian_lab::Result<()> {
    let mut functions = multimodular_fixtures();
    functions.push(LatticeFunction::total("neg-product", 2, |u| {
        -(u[0] * u[1]) as f64
    }));
    functions.push(LatticeFunction::total("max", 2, |u| u[0].max(u[1]) as f64));
    for j in &functions {
        let verdict = check_multimodular(j, &LatticeBox::cube(j.arity(), -1, 2)?)?;
        println!(
            "{:<22} {:>6} inequalities, {:>3} violated",
            j.name(),
            verdict.checked,
            verdict.violations.len()
        );
    }

    let j = &multimodular_fixtures()[1];
    println!("\nwindow average of {} at slope 3/8:", j.name());
    let mech = SymbolSource::Mechanical(MechanicalSpec::ratio(3, 8)?);
    let other = SymbolSource::Periodic("11100000".parse()?);
    println!("  mechanical {:.6}", window_average(j, &mech, 8000)?);
    println!("  11100000   {:.6}", window_average(j, &other, 8000)?);

    println!("\nmechanical word vs exact minimum over all words with its 1-count:");
    for (p, q) in [(1, 3), (2, 5), (3, 7), (3, 8)] {
        let r = verify_mechanical_minimality(j, p, q, 4 * q as usize)?;
        println!(
            "  {p}/{q}: {:.6} vs {:.6}  attains {}",
            r.mechanical_average, r.minimum_average, r.attains
        );
    }
    Ok(())
}
