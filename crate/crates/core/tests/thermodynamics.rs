//! Entropy, pressure, potentials and measures checked against closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symdyn::linalg::is_primitive;
use symdyn::measures::{weighted_gibbs_markov, CylinderMeasure};
use symdyn::*;

fn primitive_sft() -> impl Strategy<Value = ShiftModel> {
    (2usize..=3)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u8..=1, k), k))
        .prop_filter("primitive", |m| is_primitive(m))
        .prop_map(|m| ShiftModel::sft(m).unwrap())
}

fn first_symbol_potential(k: usize) -> impl Strategy<Value = Potential<f64>> {
    prop::collection::vec(-1.0f64..1.0, k).prop_map(|v| Potential::by_first_symbol(&v).unwrap())
}

fn geometric() -> Potential<f64> {
    Potential::Series(Series::geometric(0.5, 40, vec![-0.7, 0.4, 1.0]).unwrap())
}

/// `Σ_{|w|=n} μ[w] = 1` and `μ[w] = Σ_a μ[wa] = Σ_a μ[aw]`.
fn assert_consistent<M: CylinderMeasure<f64>>(mu: &M, lang: &Language, depth: usize, tol: f64) {
    for n in 0..depth {
        let mut total = 0.0;
        lang.for_each_word(n, |w| {
            total += mu.mass(w);
            let right: f64 = (0..mu.alphabet_size() as u8).map(|a| mu.mass(&[w, &[a]].concat())).sum();
            let left: f64 = (0..mu.alphabet_size() as u8).map(|a| mu.mass(&[&[a], w].concat())).sum();
            assert!((right - mu.mass(w)).abs() < tol, "additivity at {w:?}");
            assert!((left - mu.mass(w)).abs() < tol, "invariance at {w:?}");
        });
        assert!((total - 1.0).abs() < tol, "normalization at n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fekete_bound_never_undercuts_the_entropy(model in primitive_sft()) {
        let lang = enumerate_language(&model, 14).unwrap();
        let est = entropy_estimate::<f64>(&lang, Window::new(1, 14).unwrap()).unwrap();
        let h = parry_measure::<f64>(model.as_sft().unwrap()).unwrap().entropy();
        prop_assert!(est.fekete_certified);
        prop_assert!(est.fekete_bound >= h - 1e-12);
        prop_assert!(est.rows.iter().all(|r| r.point_estimate >= est.fekete_bound));
    }

    #[test]
    fn pressure_is_monotone_in_the_collection(model in primitive_sft(), vals in prop::collection::vec(-1.0f64..1.0, 3)) {
        let k = model.alphabet_size();
        let phi = Potential::by_first_symbol(&vals[..k]).unwrap();
        let lang = enumerate_language(&model, 10).unwrap();
        let small = OrbitCollection::new(&lang, WordPredicate::new("no 00", |w| !w.windows(2).any(|p| p == [0, 0])));
        let big = OrbitCollection::full(&lang);
        let a = partition_sum(&small, &phi, 10).unwrap();
        let b = partition_sum(&big, &phi, 10).unwrap();
        for n in 1..=10 {
            prop_assert!(a.log_upper[n] <= b.log_upper[n] + 1e-12);
            prop_assert!(a.log_lower[n] <= b.log_lower[n] + 1e-12);
        }
    }

    #[test]
    fn constant_shift_scales_partition_sums(phi in first_symbol_potential(2), c in -2.0f64..2.0) {
        let lang = enumerate_language(&ShiftModel::golden_mean(), 12).unwrap();
        let g = OrbitCollection::full(&lang);
        let a = partition_sum(&g, &phi, 12).unwrap();
        let b = partition_sum(&g, &phi.shifted(c), 12).unwrap();
        for n in 1..=12 {
            prop_assert!((b.log_upper[n] - a.log_upper[n] - c * n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn birkhoff_brackets_are_cocycles(word in prop::collection::vec(0u8..3, 2..14), cut in 1usize..13) {
        let cut = cut.min(word.len() - 1);
        let phi = geometric();
        let whole = birkhoff_bracket(&phi, &word).unwrap();
        let head = birkhoff_bracket(&phi, &word[..cut]).unwrap();
        let tail = birkhoff_bracket(&phi, &word[cut..]).unwrap();
        let sum = head.add(&tail);
        prop_assert!(sum.contains_bracket(&whole, 1e-12));
    }

    #[test]
    fn locally_constant_variation_vanishes_past_the_window(vals in prop::collection::vec(-1.0f64..1.0, 8)) {
        let table = (0..8u8).map(|i| (Word::new(vec![i >> 2 & 1, i >> 1 & 1, i & 1]), vals[i as usize]));
        let phi = Potential::LocallyConstant(LocallyConstant::new(3, table).unwrap());
        for n in 3..10 {
            prop_assert_eq!(phi.variation(n), 0.0);
        }
        // Exhaustive pair check on cylinders of length 3.
        let lang = enumerate_language(&ShiftModel::full_shift(2).unwrap(), 3).unwrap();
        lang.for_each_word(3, |w| assert_eq!(phi.term(w).unwrap().width(), 0.0));
    }

    #[test]
    fn bowen_check_ignores_constant_shifts(c in -3.0f64..3.0) {
        let lang = enumerate_language(&ShiftModel::full_shift(3).unwrap(), 8).unwrap();
        let g = OrbitCollection::full(&lang);
        let a = bowen_check(&geometric(), &g, 8).unwrap();
        let b = bowen_check(&geometric().shifted(c), &g, 8).unwrap();
        prop_assert_eq!(a.pass, b.pass);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            prop_assert!((x.max_width - y.max_width).abs() < 1e-9);
        }
    }

    #[test]
    fn markov_measures_are_consistent(model in primitive_sft(), vals in prop::collection::vec(-1.0f64..1.0, 9)) {
        let sft = model.as_sft().unwrap();
        let lang = enumerate_language(&model, 6).unwrap();
        assert_consistent(&parry_measure::<f64>(sft).unwrap(), &lang, 6, 1e-12);
        let k = sft.alphabet_size();
        let table = (0..k * k).map(|i| (Word::new(vec![(i / k) as u8, (i % k) as u8]), vals[i]));
        let phi = LocallyConstant::new(2, table).unwrap();
        let (mu, _) = weighted_gibbs_markov(sft, &phi).unwrap();
        assert_consistent(&mu, &lang, 6, 1e-12);
    }

    #[test]
    fn parry_constant_does_not_grow(model in primitive_sft()) {
        let mu = parry_measure::<f64>(model.as_sft().unwrap()).unwrap();
        let lang = enumerate_language(&model, 16).unwrap();
        let shallow = gibbs_check(&mu, mu.entropy(), None, &lang, 8, None, None).unwrap();
        let deep = gibbs_check(&mu, mu.entropy(), None, &lang, 16, None, None).unwrap();
        prop_assert_eq!(deep.verdict, Verdict::Pass);
        prop_assert!((deep.k() - shallow.k()).abs() < 1e-9 * shallow.k());
        let wrong = gibbs_check(&mu, mu.entropy() + 0.5, None, &lang, 16, None, None).unwrap();
        prop_assert_eq!(wrong.verdict, Verdict::Fail);
    }
}

#[test]
fn counting_bounds_hold_on_certified_shifts() {
    let golden = ShiftModel::golden_mean();
    let cases: Vec<(ShiftModel, Box<dyn Fn(&[u64], usize) -> Verdict>)> = vec![
        (golden, Box::new(|c, t| counting_bounds_check(c, &QuadSurd::golden(), t).verdict)),
        (ShiftModel::full_shift(2).unwrap(), Box::new(|c, t| counting_bounds_check(c, &BigRational::from_integer(2.into()), t).verdict)),
        (ShiftModel::full_shift(3).unwrap(), Box::new(|c, t| counting_bounds_check(c, &BigRational::from_integer(3.into()), t).verdict)),
    ];
    for (model, check) in &cases {
        let lang = enumerate_language(model, 12).unwrap();
        let spec = check_specification(&OrbitCollection::full(&lang), Some(model), &SpecOptions::new(3, 8)).unwrap();
        let tau = spec.tau().expect("certified");
        assert_eq!(check(&lang.counts(), tau), Verdict::Pass, "{}", model.kind());
    }
}

#[test]
fn empirical_measure_is_exact_and_nearly_invariant() {
    let lang = enumerate_language(&ShiftModel::golden_mean(), 20).unwrap();
    let mut last = None;
    for n in [6, 10, 16] {
        let mu = empirical_mme(&lang, n, 4).unwrap();
        for j in 0..4 {
            let total = mu.listing(j).fold(<BigRational as Zero>::zero(), |acc, (_, m)| acc + m);
            assert!(One::is_one(&total), "n = {n}, j = {j}");
            for (w, m) in mu.listing(j) {
                let ext = (0..2u8).fold(<BigRational as Zero>::zero(), |acc, a| acc + mu.exact_mass(&[w.symbols(), &[a]].concat()));
                assert_eq!(&ext, m);
            }
        }
        let defect = mu.invariance_defect(3);
        assert!(defect <= BigRational::new(BigInt::from(4), BigInt::from(n as u64)), "n = {n}");
        if let Some(prev) = last {
            assert!(defect < prev);
        }
        last = Some(defect);
    }
}

#[test]
fn sampled_orbits_follow_shannon_mcmillan_breiman() {
    // Parry measure has -log μ[x_{[1,n]}] = n h + O(1), so use a weighted measure whose
    // information function actually fluctuates.
    let model = ShiftModel::sft(vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
    let phi = LocallyConstant::by_first_symbol(&[0.6f64, -0.4, 0.1]).unwrap();
    let (mu, _) = weighted_gibbs_markov(model.as_sft().unwrap(), &phi).unwrap();
    assert_eq!(mu.block(), 1);
    let (pi, p) = (mu.stationary(), mu.transition());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10_000;
    let samples: Vec<f64> = (0..40)
        .map(|_| {
            let x = mu.sample(n, &mut rng);
            let log_mass = pi[x[0] as usize].ln() + x.windows(2).map(|s| p[s[0] as usize][s[1] as usize].ln()).sum::<f64>();
            -log_mass / n as f64
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    let se = (var / samples.len() as f64).sqrt();
    assert!(se > 0.0);
    assert!((mean - mu.entropy()).abs() <= 3.0 * se, "mean {mean}, h {}, se {se}", mu.entropy());
}

#[test]
fn periodic_counts_sit_between_exponential_bounds() {
    for model in [ShiftModel::golden_mean(), ShiftModel::full_shift(2).unwrap()] {
        let lang = enumerate_language(&model, 14).unwrap();
        let opts = SpecOptions::new(3, 6).variant(SpecVariant::PeriodicStrong);
        assert!(check_specification(&OrbitCollection::full(&lang), Some(&model), &opts).unwrap().tau().is_some());
        let h = parry_measure::<f64>(model.as_sft().unwrap()).unwrap().entropy();
        let table = periodic_counts(&model, &lang, 14).unwrap();
        let c = table.two_sided_constant(h);
        assert!(c.is_finite() && c < 2.0, "{c}");
    }
}

#[test]
fn transfer_and_enumeration_agree() {
    let model = ShiftModel::golden_mean();
    let phi = LocallyConstant::by_first_symbol(&[0.3f64, -0.5]).unwrap();
    let lang = enumerate_language(&model, 14).unwrap();
    let w = Window::new(7, 14).unwrap();
    let a = pressure_estimate(&OrbitCollection::full(&lang), &Potential::LocallyConstant(phi.clone()), w).unwrap();
    let b = transfer_pressure_estimate(&model, &phi, w).unwrap();
    assert!((a.upper.regression - b.upper.regression).abs() < 1e-9);
    let (_, log_rho) = weighted_gibbs_markov(model.as_sft().unwrap(), &phi).unwrap();
    assert!((b.upper.regression - log_rho).abs() < 1e-3);
}
