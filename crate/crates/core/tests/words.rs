use proptest::prelude::*;

use symdyn::substitution::{broken_line, perron, AbelianizationMatrix, Substitution};
use symdyn::word::{complexity, factor_counts, factors, Alphabet, FiniteWord, LazyWord, StabilizationPolicy, Symbol};

fn periodic(size: usize, raw: &[u8]) -> LazyWord {
    let alphabet = Alphabet::new(size).unwrap();
    let symbols = raw.iter().map(|&s| Symbol(s % size as u8)).collect();
    LazyWord::periodic(FiniteWord::new(alphabet, symbols).unwrap())
}

/// A prolongable substitution: letter 1 maps to a word of length at least 2
/// starting with 1.
fn prolongable() -> impl Strategy<Value = Substitution> {
    (1usize..=4).prop_flat_map(|k| {
        let first = prop::collection::vec(0..k as u8, 1..=3);
        let rest = prop::collection::vec(prop::collection::vec(0..k as u8, 1..=4), k - 1);
        (Just(k), first, rest).prop_map(|(k, first, rest)| {
            let mut images = vec![std::iter::once(Symbol(0)).chain(first.into_iter().map(Symbol)).collect::<Vec<_>>()];
            images.extend(rest.into_iter().map(|img| img.into_iter().map(Symbol).collect()));
            Substitution::new(Alphabet::new(k).unwrap(), images).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complexity_is_monotone_and_bounded(raw in prop::collection::vec(0u8..4, 1..=24), size in 1usize..=4) {
        let w = periodic(size, &raw);
        let r = complexity(&w, 12, StabilizationPolicy::with_cap(1 << 14)).unwrap();
        prop_assert!(r.entries[0].p <= size);
        for pair in r.entries.windows(2) {
            prop_assert!(pair[1].p >= pair[0].p);
            prop_assert!(pair[1].p <= pair[0].p * size);
        }
        prop_assert!(r.all_stabilized());
    }

    #[test]
    fn windows_are_nested(raw in prop::collection::vec(0u8..3, 1..=40), n in 1usize..=6, l in 6usize..=100, extra in 0usize..=100) {
        let w = periodic(3, &raw);
        let small = factors(&w, n, l).unwrap();
        let large = factors(&w, n, l + extra).unwrap();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn right_extensions_account_for_counts(raw in prop::collection::vec(0u8..3, 1..=30), n in 1usize..=5, l in 10usize..=300) {
        let w = periodic(3, &raw);
        let counts = factor_counts(&w, n, l).unwrap();
        let longer = factor_counts(&w, n + 1, l).unwrap();
        for (u, &c) in &counts {
            let extended: u64 = longer.iter().filter(|(v, _)| v.symbols()[..n] == *u.symbols()).map(|(_, &c)| c).sum();
            prop_assert!(c - extended <= 1);
        }
    }

    #[test]
    fn fixed_points_are_stable(s in prolongable()) {
        let w = s.fixed_point(Symbol(0)).unwrap();
        let prefix = w.take(200);
        let image = s.apply(&prefix).unwrap();
        prop_assert_eq!(image.clone(), w.take(image.len()));
    }

    #[test]
    fn abelianization_counts_images(s in prolongable()) {
        let m = s.abelianization();
        let lens: Vec<u64> = s.images().iter().map(|i| i.len() as u64).collect();
        prop_assert_eq!(m.column_sums(), lens);
        prop_assert_eq!(s.compose(&s).unwrap().abelianization(), m.mul(&m));
    }

    #[test]
    fn broken_line_ends_at_letter_counts(s in prolongable(), steps in 0usize..500) {
        let w = s.fixed_point(Symbol(0)).unwrap();
        let line = broken_line(&w, steps).unwrap();
        let counts: Vec<i64> = w.take(steps).abelianization().into_iter().map(|c| c as i64).collect();
        prop_assert_eq!(line.vertices.last().unwrap(), &counts);
        for j in 0..steps {
            let diff: Vec<i64> = line.vertices[j + 1].iter().zip(&line.vertices[j]).map(|(a, b)| a - b).collect();
            let mut unit = vec![0; s.alphabet().size()];
            unit[line.step_types[j].index()] = 1;
            prop_assert_eq!(diff, unit);
        }
    }

    #[test]
    fn perron_data_of_positive_matrices(entries in prop::collection::vec(1u64..6, 9)) {
        let m = AbelianizationMatrix::from_entries(3, entries);
        let p = perron(&m, 1e-10).unwrap();
        prop_assert!(p.residual < 1e-10);
        prop_assert!(p.right.iter().chain(&p.left).all(|&x| x > 0.0));
        prop_assert!((p.right.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.dominant_eigenvalue > 1.0);
    }
}

#[test]
fn k_bonacci_clouds_have_one_step_vector_per_letter() {
    for k in 2..=5 {
        let s = Substitution::k_bonacci(k).unwrap();
        let cloud = symdyn::substitution::fractal_cloud(&s, 5_000, 1e-12).unwrap();
        let labels: std::collections::BTreeSet<_> = cloud.labels.iter().collect();
        assert_eq!(labels.len(), k);
        let steps = cloud.step_vectors();
        assert_eq!(steps.len(), k);
        for j in 0..cloud.points.len() - 1 {
            let step = &steps[cloud.labels[j].index()];
            for ((a, b), d) in cloud.points[j + 1].iter().zip(&cloud.points[j]).zip(step) {
                assert!((a - b - d).abs() < 1e-9);
            }
        }
        let killed = cloud.projection.coordinates(&cloud.projection.right);
        assert!(killed.iter().all(|x| x.abs() < 1e-12), "k = {k}: {killed:?}");
        assert!(cloud.points.iter().all(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt() <= cloud.radius));
    }
}

#[test]
fn single_point_cloud_is_the_origin() {
    let cloud = symdyn::substitution::fractal_cloud(&Substitution::k_bonacci(3).unwrap(), 1, 1e-12).unwrap();
    assert_eq!(cloud.points, vec![vec![0.0, 0.0]]);
}
