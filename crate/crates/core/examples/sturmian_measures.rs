//! Orbit measures of the doubling map, the convex order, and maximizing
//! measures of a one-parameter family.
//!
//!     cargo run --release --example sturmian_measures

use sturmian_lab::rational::format_ratio;
use sturmian_lab::sturmian_measures::{
    convex_order_leq, orbit_measure, sturmian_measure, tent_family, theta_experiment,
    verify_least_element,
};

fn main() -> sturmian_lab::Result<()> {
    let s = sturmian_measure(2, 5)?;
    let support: Vec<String> = s.measure().support().iter().map(format_ratio).collect();
    println!("S_2/5 sits on {} with equal weights", support.join(", "));
    println!("barycenter {}", format_ratio(&s.barycenter()));

    // same barycenter, more spread out
    let rival = orbit_measure(&"0000011111".parse()?)?;
    println!(
        "S_1/2 vs orbit of 0000011111: barycenters {} and {}",
        format_ratio(&sturmian_measure(1, 2)?.barycenter()),
        format_ratio(&rival.barycenter())
    );
    let verdict = convex_order_leq(&sturmian_measure(1, 2)?, &rival)?;
    println!("S_1/2 below it in convex order: {}", verdict.holds);
    let back = convex_order_leq(&rival, &sturmian_measure(1, 2)?)?;
    println!(
        "and the reverse fails at t = {}",
        back.witness.as_ref().map(format_ratio).unwrap_or_default()
    );

    let report = verify_least_element(8, 20, 1)?;
    println!(
        "\nleast-element check to q = 8: {} comparisons, {} counterexamples",
        report.comparisons(),
        report.counterexamples.len()
    );

    println!("\nmaximizing orbit of the tent family, period <= 10:");
    let thetas: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    for row in theta_experiment(tent_family, &thetas, 10)? {
        println!(
            "  θ = {:.1}  {:<10} {:.6}  balanced {}",
            row.theta, row.best_word, row.value, row.is_balanced
        );
    }
    Ok(())
}
