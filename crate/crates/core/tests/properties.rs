//! Randomized invariants of the measures and comparison statistics.

use cenmcc_core::comparison::{
    bootstrap_mean_ci, degrees, enumerate_fixed_row_sums, fixed_row_sum_count, pearson_correlation,
};
use cenmcc_core::metrics::{cen, mcc, tmcc};
use cenmcc_core::ConfusionMatrix;
use proptest::prelude::*;

fn matrix(max_n: usize, max_entry: u64) -> impl Strategy<Value = ConfusionMatrix> {
    (2..=max_n)
        .prop_flat_map(move |n| prop::collection::vec(0..=max_entry, n * n).prop_map(move |e| (n, e)))
        .prop_filter_map("zero total", |(n, e)| ConfusionMatrix::from_row_major(n, e).ok())
}

fn mcc_triple_sum(c: &ConfusionMatrix) -> f64 {
    let n = c.n();
    let e = |i, j| c.get(i, j) as f64;
    let mut num = 0.0;
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                num += e(k, k) * e(m, l) - e(l, k) * e(k, m);
            }
        }
    }
    let total: f64 = c.entries().iter().map(|&x| x as f64).sum();
    let (mut d1, mut d2) = (0.0, 0.0);
    for k in 0..n {
        let col: f64 = (0..n).map(|l| e(l, k)).sum();
        let row: f64 = (0..n).map(|l| e(k, l)).sum();
        d1 += col * (total - col);
        d2 += row * (total - row);
    }
    if d1 == 0.0 || d2 == 0.0 {
        0.0
    } else {
        num / (d1.sqrt() * d2.sqrt())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn scaling_invariance(c in matrix(8, 50), m in 1u64..1000) {
        let s = c.scale(m).unwrap();
        prop_assert_eq!(s.total(), m * c.total());
        prop_assert!((mcc(&s) - mcc(&c)).abs() < 1e-12);
        prop_assert!((cen(&s) - cen(&c)).abs() < 1e-12);
        let (a, b) = (c.marginals(), s.marginals());
        for (x, y) in a.row_sums.iter().zip(&b.row_sums) {
            prop_assert_eq!(x * m, *y);
        }
    }

    #[test]
    fn ranges(c in matrix(10, 30)) {
        let v = mcc(&c);
        prop_assert!((-1.0..=1.0).contains(&v));
        prop_assert!(cen(&c) >= 0.0);
        prop_assert!(cen(&c).is_finite());
        prop_assert_eq!(cen(&c) == 0.0, c.is_diagonal());
        if c.n() >= 3 {
            prop_assert!(tmcc(&c).unwrap() >= 0.0);
        }
    }

    #[test]
    fn marginal_form_matches_triple_sum(c in matrix(7, 20)) {
        prop_assert!((mcc(&c) - mcc_triple_sum(&c)).abs() < 1e-9);
    }

    #[test]
    fn single_column_gives_zero_mcc(n in 2usize..8, col in 0usize..8, vals in prop::collection::vec(0u64..9, 8)) {
        let col = col % n;
        let mut e = vec![0u64; n * n];
        for i in 0..n {
            e[i * n + col] = vals[i];
        }
        if let Ok(c) = ConfusionMatrix::from_row_major(n, e) {
            prop_assert_eq!(mcc(&c), 0.0);
        }
    }

    #[test]
    fn label_pairs_row_sums(pairs in prop::collection::vec((0usize..5, 0usize..5), 1..60)) {
        let (t, p): (Vec<_>, Vec<_>) = pairs.iter().copied().unzip();
        let c = ConfusionMatrix::from_label_pairs(&t, &p, 5).unwrap();
        let rows = c.marginals().row_sums;
        for (class, &sum) in rows.iter().enumerate() {
            prop_assert_eq!(sum, t.iter().filter(|&&x| x == class).count() as u64);
        }
    }

    #[test]
    fn degrees_swap_symmetry(f in prop::collection::vec(0u8..6, 2..40), g in prop::collection::vec(0u8..6, 40)) {
        let f: Vec<f64> = f.iter().map(|&x| x as f64).collect();
        let g: Vec<f64> = g[..f.len()].iter().map(|&x| x as f64).collect();
        let fg = degrees(&f, &g, 1e-12).unwrap();
        let gf = degrees(&g, &f, 1e-12).unwrap();
        prop_assert_eq!((fg.p_count, fg.q_count), (gf.q_count, gf.p_count));
        prop_assert_eq!(fg.consistency, gf.consistency);
    }

    #[test]
    fn pearson_affine_invariance(
        xs in prop::collection::vec(-100.0f64..100.0, 3..50),
        ys in prop::collection::vec(-100.0f64..100.0, 50),
        a in 0.1f64..10.0, b in -50.0f64..50.0,
    ) {
        let ys = &ys[..xs.len()];
        if let Ok(r) = pearson_correlation(&xs, ys) {
            let zs: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            let r2 = pearson_correlation(&zs, ys).unwrap();
            prop_assert!((r - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_size(rows in prop::collection::vec(0u64..4, 2..4)) {
        prop_assume!(rows.iter().any(|&k| k > 0));
        let count = enumerate_fixed_row_sums(&rows).unwrap().count() as u128;
        prop_assert_eq!(Some(count), fixed_row_sum_count(&rows));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bootstrap_contains_mean(values in prop::collection::vec(-10.0f64..10.0, 5..60), seed in any::<u64>()) {
        if let Ok(ci) = bootstrap_mean_ci(&values, 300, 0.95, seed) {
            prop_assert!(ci.lo <= ci.mean && ci.mean <= ci.hi, "{:?}", ci);
        }
    }
}

#[test]
fn perfect_misclassification_family_has_unit_cen() {
    for n in 3..=12 {
        for f in [1u64, 3, 250] {
            let e = (0..n * n).map(|k| if k / n == k % n { 0 } else { f }).collect();
            let c = ConfusionMatrix::from_row_major(n, e).unwrap();
            assert!((cen(&c) - 1.0).abs() < 1e-12, "n={n} f={f}");
        }
    }
}

#[test]
fn binary_symmetric_pathology() {
    let sym = |t: u64, f: u64| cen(&ConfusionMatrix::from_row_major(2, vec![t, f, f, t]).unwrap());
    for f in 2..40u64 {
        for t in 1..f {
            assert!(sym(t, f) > 1.0, "t={t} f={f}");
        }
        let interior = (1..f).map(|t| sym(t, f)).fold(f64::MIN, f64::max);
        assert!(interior > sym(0, f) && interior > sym(f, f));
    }
    assert!((sym(0, 5) - 1.0).abs() < 1e-12);
}

#[test]
fn single_column_cen_takes_many_values() {
    let mut seen: Vec<f64> = Vec::new();
    for a in 1..5u64 {
        for b in 0..5u64 {
            let c = ConfusionMatrix::from_row_major(3, vec![a, 0, 0, b, 0, 0, 1, 0, 0]).unwrap();
            assert_eq!(mcc(&c), 0.0);
            let v = cen(&c);
            if !seen.iter().any(|s| (s - v).abs() < 1e-12) {
                seen.push(v);
            }
        }
    }
    assert!(seen.len() > 5);
}
