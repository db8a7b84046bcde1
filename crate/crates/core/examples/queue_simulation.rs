//! Admission control for a single-server queue: mechanical admission against
//! random sequences with the same ratio.
//!
//!     cargo run --release --example queue_simulation [config.toml]

use sturmian_lab::multimodular_queue::{queue_competition, simulate_queue, QueueConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/queue.toml").to_string()
    });
    let cfg = QueueConfig::from_path(&path)?;
    let own = simulate_queue(&cfg)?;
    println!(
        "mechanical γ={:.4}: mean queue {:.4}, max {}, admitted {:.4}",
        own.gamma, own.mean_cost, own.max_queue, own.admitted_fraction
    );

    let report = queue_competition(&cfg, 20, cfg.seed + 1)?;
    let mut costs: Vec<f64> = report.competitors.iter().map(|c| c.mean_cost).collect();
    costs.sort_by(f64::total_cmp);
    println!(
        "20 random competitors: best {:.4}, median {:.4}, worst {:.4}",
        costs[0],
        costs[costs.len() / 2],
        costs[costs.len() - 1]
    );
    println!("mechanical admission dominates: {}", report.dominated);

    for gamma in ["1/4", "1/3", "2/5", "1/2"] {
        let mut c = cfg.clone();
        c.admission = sturmian_lab::multimodular_queue::AdmissionSource::mechanical(gamma);
        c.horizon = 20_000;
        println!(
            "  γ = {gamma:<4} mean queue {:.4}",
            simulate_queue(&c)?.mean_cost
        );
    }
    Ok(())
}
