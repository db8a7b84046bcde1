//! Two-piece heaps: exhaustive schedule search against the best balanced
//! periodic schedule.
//!
//!     cargo run --release --example heap_schedules [model.toml]

use sturmian_lab::heaps::{certify_balanced_schedule, cycle_rate, heap_height, scan, HeapModel};

fn main() -> sturmian_lab::Result<()> {
    let model = match std::env::args().nth(1) {
        Some(path) => HeapModel::from_path(path)?,
        None => HeapModel::default_model(),
    };
    for word in ["0", "1", "01", "001", "011", "0010"] {
        let w = word.parse()?;
        println!(
            "{word:<5} height after one pass {}  rate {}",
            heap_height(&w, &model),
            cycle_rate(&w, &model)?
        );
    }

    println!("\n n  min h/n  argmin");
    for row in scan(&model, 12)? {
        println!("{:>2}  {:<7}  {}", row.n, row.min_rate, row.argmin_words);
    }

    let cert = certify_balanced_schedule(&model, 8, 14)?;
    println!(
        "\nbest balanced schedule {} at ratio {}/{}: rate {}",
        cert.schedule.word, cert.schedule.p, cert.schedule.q, cert.schedule.rate
    );
    for (n, r) in &cert.periodic_minima {
        println!("  period {n:>2}: exhaustive minimum {r}");
    }
    println!("certified: {}", cert.certified());
    Ok(())
}
