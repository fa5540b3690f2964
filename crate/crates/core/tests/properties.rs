//! Property suites over the accumulation operators, the model algebra and
//! the error metrics.

use greycast::metrics;
use greycast::models::{fit, fit_with, FitOptions, LinearParams, ModelKind};
use greycast::series::{background, nipago, nipiago, RawSeries};
use proptest::prelude::*;

fn positive_series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..1e4, 4..16)
}

/// Series with mild multiplicative growth, the regime grey models target.
fn growing_series() -> impl Strategy<Value = Vec<f64>> {
    (
        50.0f64..500.0,
        0.01f64..0.25,
        prop::collection::vec(-0.04f64..0.04, 7..12),
    )
        .prop_map(|(start, rate, noise)| {
            let mut v = start;
            noise
                .into_iter()
                .map(|eps| {
                    let out = v * (1.0 + eps);
                    v *= 1.0 + rate;
                    out
                })
                .collect()
        })
}

proptest! {
    #[test]
    fn accumulation_round_trip(values in positive_series(), lambda in 0.0f64..=1.0) {
        let acc = nipago(&values, lambda).unwrap();
        let back = nipiago(&acc);
        for (orig, rec) in values.iter().zip(&back) {
            prop_assert!((orig - rec).abs() <= 1e-10 * orig.abs().max(1.0));
        }
    }

    #[test]
    fn accumulation_difference_identity(values in positive_series(), lambda in 0.0f64..=1.0) {
        let acc = nipago(&values, lambda).unwrap();
        let s1 = acc.values();
        for k in 1..values.len() {
            let lhs = s1[k] - lambda * s1[k - 1];
            prop_assert!((lhs - values[k]).abs() <= 1e-10 * values[k].abs().max(1.0));
        }
    }

    #[test]
    fn accumulation_monotone_in_lambda(values in positive_series(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let acc_lo = nipago(&values, lo).unwrap();
        let acc_hi = nipago(&values, hi).unwrap();
        for (x, y) in acc_lo.values().iter().zip(acc_hi.values()) {
            prop_assert!(x <= &(y + 1e-9 * y.abs()));
        }
    }

    #[test]
    fn background_between_neighbors(values in positive_series(), lambda in 0.0f64..=1.0) {
        let acc = nipago(&values, lambda).unwrap();
        let bg = background(&acc).unwrap();
        let s1 = acc.values();
        for (k, h) in bg.values().iter().enumerate() {
            let (lo, hi) = (s1[k].min(s1[k + 1]), s1[k].max(s1[k + 1]));
            prop_assert!(*h >= lo - 1e-12 * hi.abs() && *h <= hi + 1e-12 * hi.abs());
        }
    }

    #[test]
    fn metrics_sum_of_squares_partition(
        ape_tail in prop::collection::vec(0.0f64..50.0, 3..12),
        split in 0usize..10,
    ) {
        let mut ape = vec![0.0];
        ape.extend(ape_tail);
        let m = ape.len();
        let l = 2 + split % (m - 1).max(1);
        prop_assume!(l >= 2 && l < m);
        let (pr, po, whole) = metrics::rmse_windows(&ape, l).unwrap();
        let po = po.unwrap();
        let lhs = whole * whole * (m - 1) as f64;
        let rhs = pr * pr * (l - 1) as f64 + po * po * (m - l) as f64;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn metrics_monotone_in_each_ape(
        ape_tail in prop::collection::vec(0.0f64..50.0, 3..12),
        split in 0usize..10,
        bump_at in 0usize..12,
        bump in 0.01f64..20.0,
    ) {
        let mut ape = vec![0.0];
        ape.extend(ape_tail);
        let m = ape.len();
        let l = 2 + split % (m - 1).max(1);
        prop_assume!(l >= 2 && l < m);
        let idx = 1 + bump_at % (m - 1);
        let before = metrics::rmse_windows(&ape, l).unwrap();
        ape[idx] += bump;
        let after = metrics::rmse_windows(&ape, l).unwrap();
        prop_assert!(after.0 >= before.0 - 1e-12);
        prop_assert!(after.1.unwrap() >= before.1.unwrap() - 1e-12);
        prop_assert!(after.2 >= before.2 - 1e-12);
        // The window the bumped entry belongs to strictly increases.
        if idx < l {
            prop_assert!(after.0 > before.0);
        } else {
            prop_assert!(after.1.unwrap() > before.1.unwrap());
        }
        prop_assert!(after.2 > before.2);
    }

    #[test]
    fn closed_form_matches_composition(values in growing_series(), lambda in 0.05f64..=1.0, alpha in 0.01f64..2.0) {
        let len = values.len();
        let raw = RawSeries::from_values(values, len).unwrap();
        let Ok(f) = fit(ModelKind::Nipgm { lambda, alpha }, &raw) else {
            // Degenerate draws may produce rank-deficient or singular fits.
            return Ok(());
        };
        let (Ok(composed), Ok(direct)) = (f.restore(3), f.restore_direct(3)) else {
            return Ok(());
        };
        for (x, y) in composed.iter().zip(&direct) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn lambda_one_nipgm_equals_gm_talpha(values in growing_series(), alpha in 0.01f64..2.5) {
        let len = values.len();
        let raw = RawSeries::from_values(values, len).unwrap();
        let a = fit(ModelKind::Nipgm { lambda: 1.0, alpha }, &raw);
        let b = fit(ModelKind::GmTalpha { alpha }, &raw);
        match (a, b) {
            (Ok(fa), Ok(fb)) => {
                prop_assert_eq!(fa.params().as_vec(), fb.params().as_vec());
                let (ra, rb) = (fa.restore(2).unwrap(), fb.restore(2).unwrap());
                for (x, y) in ra.iter().zip(&rb) {
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "one kind failed where the other fit: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn unit_invariance_of_fit(
        a in -0.15f64..-0.02,
        b in 5.0f64..60.0,
        c in 50.0f64..400.0,
        lambda in 0.6f64..1.0,
        alpha in 0.3f64..1.5,
        scale in 0.5f64..200.0,
    ) {
        // Scaling the observations by a constant scales b, c and the
        // predictions by that constant and leaves a unchanged. Exercised on
        // recurrence-generated series; tolerances sit ~20x above the worst
        // SVD rounding observed over this domain (the accumulated column
        // dwarfs the power/constant columns, so the effective condition
        // number caps the attainable agreement near 1e-5).
        let mut s1 = vec![100.0_f64];
        for k in 2..=9 {
            let kf = k as f64;
            let mid = (kf.powf(1.0 + alpha) - (kf - 1.0).powf(1.0 + alpha)) / (1.0 + alpha);
            let prev = *s1.last().unwrap();
            s1.push((prev * (1.0 - a / 2.0) + b * mid + c) / (1.0 + a / 2.0));
        }
        let mut values = vec![100.0];
        for k in 1..9 {
            values.push(s1[k] - lambda * s1[k - 1]);
        }
        prop_assume!(values.iter().all(|v| *v > 0.0));
        let vmax = values.iter().cloned().fold(0.0, f64::max);
        let raw = RawSeries::from_values(values.clone(), 9).unwrap();
        let scaled = RawSeries::from_values(values.iter().map(|v| v * scale).collect(), 9).unwrap();
        let kind = ModelKind::Nipgm { lambda, alpha };
        let (Ok(f1), Ok(f2)) = (fit(kind, &raw), fit(kind, &scaled)) else {
            return Ok(());
        };
        let (LinearParams::ThreeTerm { a: a1, b: b1, c: c1 },
             LinearParams::ThreeTerm { a: a2, b: b2, c: c2 }) = (f1.params(), f2.params()) else {
            return Ok(());
        };
        prop_assert!((a1 - a2).abs() <= 1e-4 * (1.0 + a1.abs()));
        prop_assert!((b1 * scale - b2).abs() <= 1e-5 * scale * vmax);
        prop_assert!((c1 * scale - c2).abs() <= 1e-5 * scale * vmax);
        let (p1, p2) = (f1.restore(2).unwrap(), f2.restore(2).unwrap());
        for (x, y) in p1.iter().zip(&p2) {
            prop_assert!((x * scale - y).abs() <= 1e-5 * y.abs().max(scale * vmax));
        }
    }

    #[test]
    fn least_squares_rhs_linearity(scale in 0.1f64..50.0) {
        use greycast::linalg::{solve_least_squares, DesignSystem};
        let rows = vec![
            vec![1.0, 0.5, 1.0],
            vec![2.0, -0.5, 1.0],
            vec![3.0, 1.5, 1.0],
            vec![4.0, 2.0, 1.0],
            vec![5.0, -1.0, 1.0],
        ];
        let rhs = vec![2.0, 3.5, 4.1, 6.3, 7.7];
        let sys1 = DesignSystem::new(rows.clone(), rhs.clone()).unwrap();
        let sys2 = DesignSystem::new(
            rows,
            rhs.iter().map(|v| v * scale).collect(),
        ).unwrap();
        let r1 = solve_least_squares(&sys1).unwrap();
        let r2 = solve_least_squares(&sys2).unwrap();
        for (x, y) in r1.iter().zip(&r2) {
            prop_assert!((x * scale - y).abs() <= 1e-9 * y.abs().max(1e-9));
        }
    }
}

#[test]
fn quadrature_restore_agrees_with_composition_for_ngm() {
    // The quadrature route must satisfy the composition identity too.
    let d = greycast::data::bundled_dataset("wind_europe").unwrap();
    let f = fit_with(
        ModelKind::NgmKc,
        d.raw(),
        FitOptions {
            restore: greycast::models::RestorePath::Quadrature,
            ..FitOptions::default()
        },
    )
    .unwrap();
    let composed = f.restore(3).unwrap();
    let s1: Vec<f64> = (1..=composed.len())
        .map(|k| f.time_response(k).unwrap())
        .collect();
    let direct = greycast::series::nipiago_with(&s1, 1.0);
    for (k, (x, y)) in composed.iter().zip(&direct).enumerate().skip(1) {
        assert!(
            (x - y).abs() <= 1e-9 * x.abs().max(1.0),
            "k={k}: {x} vs {y}"
        );
    }
}
