//! One line per acceptance criterion, then a nonzero exit if any failed.
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use sturmian_lab::cyclic_products::{orbit_product, verify_product_maximizer};
use sturmian_lab::heaps::{
    best_balanced_schedule, min_cycle_rate_exhaustive, min_rate_exhaustive, HeapModel,
};
use sturmian_lab::jsr::{
    alpha_inverse, alpha_star_tau, jsr_bounds, scaled_pair, standard_matrices, MatrixNorm,
    RatioScanner, ALPHA_STAR_REFERENCE,
};
use sturmian_lab::multimodular_queue::{queue_competition, AdmissionSource, QueueConfig};
use sturmian_lab::precision::PrecisionContext;
use sturmian_lab::rational::ratio;
use sturmian_lab::sturmian_measures::{sturmian_measure, verify_least_element};
use sturmian_lab::wigner::{ground_state, Potential};
use sturmian_lab::words::{
    is_balanced, is_balanced_naive, mechanical_word, ContinuedFraction, MechanicalSpec, Word,
};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn coprime_pairs(q_max: usize) -> Vec<(usize, usize)> {
    (2..=q_max)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cyclic_products() -> Verdict {
    let b = |s: &str| {
        orbit_product(&s.parse().unwrap())
            .map(|r| r.product)
            .map_err(err)
    };
    ensure(
        b("10100")? == BigUint::from(162000u32),
        "B(10100) != 162000",
    )?;
    ensure(b("11000")? == BigUint::from(88128u32), "B(11000) != 88128")?;
    let pairs = coprime_pairs(14);
    for &(p, q) in &pairs {
        let r = verify_product_maximizer(p, q).map_err(err)?;
        ensure(
            r.argmax.len() == 1,
            format!("{p}/{q}: {} maximizers", r.argmax.len()),
        )?;
        ensure(
            is_balanced(r.argmax[0].representative()),
            format!("{p}/{q}: maximizer not balanced"),
        )?;
    }
    Ok(format!(
        "exact worked example; {} coprime pairs with q <= 14",
        pairs.len()
    ))
}

fn sturmian_measure_two_fifths() -> Verdict {
    let m = sturmian_measure(2, 5).map_err(err)?;
    let atoms: Vec<(BigRational, BigRational)> = m
        .measure()
        .atoms()
        .map(|(x, w)| (x.clone(), w.clone()))
        .collect();
    let mut expected: Vec<(BigRational, BigRational)> = [5, 10, 20, 9, 18]
        .iter()
        .map(|&k| (ratio(k, 31), ratio(1, 5)))
        .collect();
    expected.sort();
    ensure(atoms == expected, format!("atoms {atoms:?}"))?;
    ensure(m.barycenter() == ratio(2, 5), "barycenter != 2/5")?;
    Ok("support {5,10,20,9,18}/31, weights 1/5, barycenter 2/5".into())
}

fn convex_order() -> Verdict {
    let report = verify_least_element(10, 100, 7).map_err(err)?;
    ensure(report.comparisons() > 0, "no comparisons made")?;
    ensure(
        report.counterexamples.is_empty(),
        format!(
            "counterexamples {:?}",
            &report.counterexamples[..report.counterexamples.len().min(3)]
        ),
    )?;
    Ok(format!(
        "{} comparisons, q <= 10, 0 counterexamples",
        report.comparisons()
    ))
}

fn jsr_golden() -> Verdict {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let b = jsr_bounds(&scaled_pair(1.0).map_err(err)?, 8, MatrixNorm::Spectral).map_err(err)?;
    ensure(
        (b.lower - golden).abs() < 1e-12,
        format!("lower {} vs {golden}", b.lower),
    )?;
    ensure(b.upper >= b.lower, "upper < lower")?;
    ensure(b.per_length.len() == 8, "missing lengths")?;
    for w in b.per_length.windows(2) {
        ensure(
            w[1].upper <= w[0].upper,
            format!("upper increases at n={}", w[1].n),
        )?;
    }
    Ok(format!("lower {:.15}, upper {:.15}", b.lower, b.upper))
}

fn alpha_star() -> Verdict {
    let mut ctx = PrecisionContext::new(256).map_err(err)?;
    let star = alpha_star_tau(12, &mut ctx).map_err(err)?;
    let text = star.decimal(&mut ctx, 50);
    let matched = text
        .chars()
        .zip(ALPHA_STAR_REFERENCE.chars())
        .take_while(|(a, b)| a == b)
        .filter(|(c, _)| c.is_ascii_digit())
        .count()
        - 1; // leading zero
    ensure(matched >= 30, format!("only {matched} digits: {text}"))?;
    let mut classical = vec![1u64; 12];
    classical[0] = 2;
    let gamma_star = ContinuedFraction::from_classical(&classical).map_err(err)?;
    let inv = alpha_inverse(&gamma_star, 12, &mut ctx).map_err(err)?;
    let diff = ctx.sub(&star.value, &inv.value).abs();
    let gap = ctx.to_f64(&diff);
    ensure(gap < 1e-25, format!("alpha_inverse differs by {gap:e}"))?;
    Ok(format!(
        "{matched} digits, |tau form - inverse form| = {gap:.2e}"
    ))
}

fn trace_recurrence() -> Verdict {
    let seq = standard_matrices(
        &ContinuedFraction::fibonacci(15).map_err(err)?,
        &BigRational::one(),
    )
    .map_err(err)?;
    let traces: Vec<BigRational> = (-1..=15).map(|n| seq.trace(n)).collect();
    ensure(traces.iter().all(|t| t.is_integer()), "non-integer trace")?;
    // some fixed shift must make the recurrence hold on every later index
    let holds = |shift: usize| {
        (shift + 3..traces.len())
            .all(|k| traces[k] == &traces[k - 1] * &traces[k - 2] - &traces[k - 3])
    };
    let shift = (0..3)
        .find(|&s| holds(s))
        .ok_or("recurrence fails for every shift")?;
    ensure(!traces[16].is_zero(), "zero trace")?;
    Ok(format!(
        "exact for n <= 15 from index {}",
        shift as isize - 1
    ))
}

fn ratio_scan() -> Verdict {
    let scanner = RatioScanner::new(14).map_err(err)?;
    let grid: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
    let scans = grid
        .iter()
        .map(|&a| scanner.scan(a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    for w in scans.windows(2) {
        ensure(
            w[0].ratio <= w[1].ratio,
            format!("ratio drops at alpha={}", w[1].alpha),
        )?;
    }
    ensure(
        scans.iter().all(|s| (0.0..=0.5).contains(&s.ratio)),
        "ratio outside [0, 1/2]",
    )?;
    let top = scans.last().unwrap();
    ensure(top.alpha == 1.0, "grid does not end at 1")?;
    let alternating: Word = "01".repeat(7).parse().unwrap();
    ensure(
        top.necklace.canonical_rotation() == alternating.canonical_rotation(),
        format!("argmax at 1 is {}", top.necklace),
    )?;
    Ok(format!(
        "50-point grid, ratio 0 -> {}, argmax (01)^7",
        top.ratio
    ))
}

fn heaps() -> Verdict {
    let model = HeapModel::default_model();
    for n in 1..=14 {
        let m = min_rate_exhaustive(&model, n).map_err(err)?;
        ensure(
            m.argmin.iter().any(is_balanced),
            format!("n={n}: no balanced argmin"),
        )?;
    }
    let best = best_balanced_schedule(&model, 8).map_err(err)?;
    let mut compatible = 0;
    for n in (best.q..=14).step_by(best.q) {
        let m = min_cycle_rate_exhaustive(&model, n).map_err(err)?;
        let gap = (m.min_rate - best.rate).to_f64().unwrap_or(f64::NAN).abs();
        ensure(
            gap <= 1e-12,
            format!(
                "n={n}: periodic min {} vs balanced {}",
                m.min_rate, best.rate
            ),
        )?;
        compatible += 1;
    }
    ensure(compatible > 0, "no compatible period")?;
    Ok(format!(
        "balanced argmin for n <= 14; rate {} matches {compatible} periodic minima",
        best.rate
    ))
}

fn wigner() -> Verdict {
    let pairs = coprime_pairs(14);
    for v in Potential::default_family() {
        for &(p, q) in &pairs {
            let g = ground_state(p, q, &v).map_err(err)?;
            ensure(
                g.argmin.iter().all(|o| o.is_balanced()),
                format!("{} at {p}/{q}", v.name()),
            )?;
        }
    }
    let anti = Potential::anti_fixture();
    let mut clustered = None;
    for &(p, q) in &pairs {
        let g = ground_state(p, q, &anti).map_err(err)?;
        if g.argmin.iter().any(|o| !o.is_balanced()) {
            clustered = Some(format!("{p}/{q}"));
            break;
        }
    }
    let at = clustered.ok_or("anti-potential always balanced")?;
    Ok(format!(
        "{} pairs x 3 potentials balanced; anti-potential unbalanced at {at}",
        pairs.len()
    ))
}

fn words_core() -> Verdict {
    let mut count = 0;
    for q in 1..=20i64 {
        for p in 0..=q {
            for d in [ratio(0, 1), ratio(1, 4), ratio(2, 3), ratio(p, q + 1)] {
                let spec = MechanicalSpec::new(ratio(p, q), d).map_err(err)?;
                for n in 1..=64 {
                    let w = mechanical_word(&spec, n).map_err(err)?;
                    ensure(is_balanced(&w), format!("{p}/{q} n={n}: {w}"))?;
                    count += 1;
                }
            }
        }
    }
    for d in [0.0, 0.3, 0.9] {
        let spec = MechanicalSpec::from_f64(std::f64::consts::PI - 3.0, d).map_err(err)?;
        ensure(
            is_balanced(&mechanical_word(&spec, 64).map_err(err)?),
            "pi slope",
        )?;
    }
    for len in 0..=12 {
        for mask in 0..(1u64 << len) {
            let w = Word::from_mask(mask, len);
            ensure(
                is_balanced(&w) == is_balanced_naive(&w),
                format!("oracle disagrees on {w}"),
            )?;
        }
    }
    let fib = mechanical_word(
        &MechanicalSpec::golden(256, ratio(0, 1)).map_err(err)?,
        2000,
    )
    .map_err(err)?;
    for n in 1..=200 {
        let c = fib.complexity(n).map_err(err)?;
        ensure(c == n + 1, format!("complexity({n}) = {c}"))?;
    }
    Ok(format!(
        "{count} mechanical prefixes balanced; oracle to length 12; complexity n+1 to 200"
    ))
}

fn queue() -> Verdict {
    let cfg = QueueConfig {
        mean_interarrival: 1.0,
        service_time: 2.0,
        horizon: 100_000,
        seed: 11,
        admission: AdmissionSource::mechanical("1/3"),
    };
    let report = queue_competition(&cfg, 50, 1000).map_err(err)?;
    ensure(report.competitors.len() == 50, "wrong competitor count")?;
    for (i, c) in report.competitors.iter().enumerate() {
        ensure(
            report.reference.mean_cost <= c.mean_cost,
            format!(
                "competitor {i}: {} < {}",
                c.mean_cost, report.reference.mean_cost
            ),
        )?;
    }
    Ok(format!(
        "mechanical {:.6} <= min random {:.6}",
        report.reference.mean_cost,
        report.best_competitor_cost()
    ))
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Verdict, u64); 11] = [
        (1, "cyclic products", cyclic_products, 60),
        (2, "sturmian measure", sturmian_measure_two_fifths, 60),
        (3, "convex order", convex_order, 120),
        (4, "jsr golden ratio", jsr_golden, 60),
        (5, "alpha star digits", alpha_star, 5),
        (6, "trace recurrence", trace_recurrence, 60),
        (7, "optimal ratio monotone", ratio_scan, 600),
        (8, "heaps", heaps, 600),
        (9, "wigner", wigner, 60),
        (10, "words core", words_core, 600),
        (11, "queue admission", queue, 600),
    ];
    let mut failed = 0;
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(budget) => Err(format!(
                "{detail}; took {:.1}s, budget {budget}s",
                elapsed.as_secs_f64()
            )),
            other => other,
        };
        match result {
            Ok(detail) => println!(
                "PASS criterion {n:>2} {name} ({:.2}s): {detail}",
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {n:>2} {name} ({:.2}s): {detail}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
