use num_integer::Integer;
use proptest::prelude::*;

use sturmian_lab::cyclic_products::orbit_product;
use sturmian_lab::multimodular_queue::{
    check_multimodular, multimodular_fixtures, streaming_window_average,
    verify_mechanical_minimality, window_average, LatticeBox, LatticeFunction, SymbolSource,
};
use sturmian_lab::rational::ratio;
use sturmian_lab::sturmian_measures::sturmian_measure;
use sturmian_lab::wigner::{ring_energy, Potential};
use sturmian_lab::words::{
    is_balanced, is_balanced_naive, mechanical_word, standard_words, ContinuedFraction,
    MechanicalSpec, Word,
};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..=1, 1..=max_len).prop_map(|bits| Word::new(bits).unwrap())
}

fn slope() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (1i64..=64).prop_flat_map(|q| (0..=q, Just(q), 0i64..97, Just(97)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mechanical_words_are_balanced((p, q, d, e) in slope(), n in 1usize..=128) {
        let spec = MechanicalSpec::new(ratio(p, q), ratio(d, e)).unwrap();
        prop_assert!(is_balanced(&mechanical_word(&spec, n).unwrap()));
    }

    #[test]
    fn one_length_over_a_period((p, q, _, _) in slope(), reps in 1usize..4) {
        let spec = MechanicalSpec::ratio(p as u64, q as u64).unwrap();
        let w = mechanical_word(&spec, reps * q as usize).unwrap();
        prop_assert_eq!(w.one_length(), reps * p as usize);
    }

    #[test]
    fn balance_agrees_with_oracle(w in word(20)) {
        prop_assert_eq!(is_balanced(&w), is_balanced_naive(&w));
    }

    #[test]
    fn balance_is_closed_under_symmetries(w in word(24)) {
        let b = is_balanced(&w);
        prop_assert_eq!(is_balanced(&w.reversed()), b);
        prop_assert_eq!(is_balanced(&w.complement()), b);
    }

    #[test]
    fn metallic_slopes_have_sturmian_complexity(a in 1u32..=4, delta in 0.0f64..1.0, len in 300usize..600) {
        // gamma = [0; a, a, a, ...]; bounded quotients make every factor appear early
        let a = f64::from(a);
        let gamma = ((a * a + 4.0).sqrt() - a) / 2.0;
        let spec = MechanicalSpec::from_f64(gamma, delta).unwrap();
        let w = mechanical_word(&spec, len).unwrap();
        for n in 1..=10 {
            prop_assert_eq!(w.complexity(n).unwrap(), n + 1);
        }
    }

    #[test]
    fn balanced_prefixes_have_at_most_n_plus_one_factors(num in 1u64..10_000, len in 20usize..300) {
        let gamma = (num as f64 * std::f64::consts::SQRT_2).fract();
        let w = mechanical_word(&MechanicalSpec::from_f64(gamma, 0.0).unwrap(), len).unwrap();
        for n in 1..=len.min(30) {
            prop_assert!(w.complexity(n).unwrap() <= n + 1);
        }
    }

    #[test]
    fn standard_words_track_convergents(cf in prop::collection::vec(1u64..4, 1..8)) {
        let cf = ContinuedFraction::new(cf).unwrap();
        for (n, s) in standard_words(&cf).iter().enumerate() {
            let (p, q) = cf.convergent(n as isize - 1);
            prop_assert_eq!(s.len(), q.to_string().parse::<usize>().unwrap());
            prop_assert_eq!(s.one_length(), p.to_string().parse::<usize>().unwrap());
            prop_assert!(is_balanced(s));
        }
    }

    #[test]
    fn window_averages_agree(w in word(12), n in 1usize..200, which in 0usize..4) {
        let j = &multimodular_fixtures()[which];
        let x = SymbolSource::Periodic(w);
        let a = window_average(j, &x, n).unwrap();
        let b = streaming_window_average(j, &x, n).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn affine_functions_are_multimodular(c in prop::collection::vec(-5i32..=5, 1..=3), b in -3i32..=3) {
        let m = c.len();
        let j = LatticeFunction::affine(c.into_iter().map(f64::from).collect(), f64::from(b));
        let verdict = check_multimodular(&j, &LatticeBox::cube(m, -1, 2).unwrap()).unwrap();
        prop_assert!(verdict.holds);
    }

    #[test]
    fn orbit_product_is_rotation_invariant(w in word(40), k in 0usize..40) {
        prop_assert_eq!(orbit_product(&w).unwrap().product, orbit_product(&w.rotate(k)).unwrap().product);
    }

    #[test]
    fn sturmian_measure_is_a_probability((p, q, _, _) in slope()) {
        prop_assume!(p > 0 && p < q && p.gcd(&q) == 1 && q <= 40);
        let m = sturmian_measure(p as usize, q as usize).unwrap();
        prop_assert_eq!(m.measure().total_mass(), ratio(1, 1));
        prop_assert_eq!(m.barycenter(), ratio(p, q));
    }
}

#[test]
fn ring_energy_is_invariant_under_rotation_and_reflection() {
    let potentials = [
        Potential::Coulomb,
        Potential::Power { s: 3.0 },
        Potential::Exponential { lambda: 1.0 },
    ];
    for len in 1..=10usize {
        for mask in 0..(1u64 << len) {
            let w = Word::from_mask(mask, len);
            for v in &potentials {
                let e = ring_energy(&w, v).unwrap();
                for other in [w.rotate(1), w.reversed()] {
                    let f = ring_energy(&other, v).unwrap();
                    assert!(e.compare(&f).is_eq(), "{w} vs {other}: {e} != {f}");
                }
            }
        }
    }
}

#[test]
fn mechanical_words_minimize_cyclic_window_sums() {
    for j in multimodular_fixtures() {
        for q in 1..=8u64 {
            for p in 0..=q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let r = verify_mechanical_minimality(&j, p, q, 4 * q as usize).unwrap();
                assert!(
                    r.attains,
                    "{} at {p}/{q}: {} > {} ({})",
                    r.function, r.mechanical_average, r.minimum_average, r.minimizer
                );
            }
        }
    }
}
