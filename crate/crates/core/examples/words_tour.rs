//! Mechanical words, balance, orbits and standard words.
//!
//!     cargo run --example words_tour

use sturmian_lab::rational::ratio;
use sturmian_lab::words::{
    balance_witness, balanced_orbit, enumerate_orbits, mechanical_word, standard_words,
    ContinuedFraction, MechanicalSpec,
};
use sturmian_lab::Word;

fn main() -> sturmian_lab::Result<()> {
    let two_fifths = MechanicalSpec::ratio(2, 5)?;
    println!("slope 2/5:        {}", mechanical_word(&two_fifths, 20)?);
    let shifted = two_fifths.with_delta(ratio(1, 2))?;
    println!("slope 2/5, δ=1/2: {}", mechanical_word(&shifted, 20)?);

    let fib = mechanical_word(&MechanicalSpec::golden(128, ratio(0, 1))?, 40)?;
    println!("golden slope:     {fib}");
    let counts: Vec<usize> = (1..=8)
        .map(|n| fib.complexity(n))
        .collect::<Result<_, _>>()?;
    println!("factor counts for n = 1..8: {counts:?}");

    let lumpy: Word = "0110001".parse()?;
    match balance_witness(&lumpy) {
        Some(w) => println!("{lumpy} is unbalanced: {} vs {}", w.heavy, w.light),
        None => println!("{lumpy} is balanced"),
    }

    println!("\norbits of W(3, 8):");
    let balanced = balanced_orbit(3, 8)?;
    for orbit in enumerate_orbits(3, 8)? {
        let mark = if orbit == balanced {
            "  <- balanced"
        } else {
            ""
        };
        println!("  {}{mark}", orbit.representative());
    }

    // [0; 3, 1, 2] in classical notation
    let cf = ContinuedFraction::from_classical(&[3, 1, 2])?;
    println!("\nstandard words of {:?}:", cf.quotients());
    for (n, s) in standard_words(&cf).iter().enumerate() {
        let (p, q) = cf.convergent(n as isize - 1);
        println!("  s_{:<2} = {s:<10} {p}/{q}", n as isize - 1);
    }
    Ok(())
}
