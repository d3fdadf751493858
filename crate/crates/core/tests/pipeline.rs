use proptest::prelude::*;
use ringmimo::analytic::{circle_rate, rate_bounds, BoundOrdering};
use ringmimo::average::{average_bound_b1, average_bound_b2, average_report};
use ringmimo::montecarlo::{ergodic_rate, population_around, McConfig};
use ringmimo::optimizer::{solve_radius, stationarity_residual};
use ringmimo::SystemParams;

#[test]
fn user_rate_pipeline_is_reproducible_and_near_the_asymptote() {
    let p = SystemParams::reference();
    let tagged = p.geometry.user(300.0, 0.4).unwrap();
    let users = population_around(&p, tagged, 11).unwrap();
    let est = |workers| {
        let cfg = McConfig {
            trials: 600,
            master_seed: 11,
            workers,
        };
        ergodic_rate(&p, &users, &cfg, 0).unwrap()
    };
    let a = est(Some(1));
    let b = est(Some(3));
    assert_eq!(a, b);
    let asy = circle_rate(&p, 300.0).unwrap().rate_bits;
    assert!((a.mean_rate_bits - asy).abs() < 0.05 * asy);
    assert_eq!(a.trials_used, 600);
}

#[test]
fn exact_cell_average_sits_between_closed_form_averages() {
    for v in [3.0, 3.6, 5.0] {
        let p = SystemParams::reference()
            .with_exponent(v)
            .unwrap()
            .with_power_db(20.0)
            .unwrap();
        let rep = average_report(&p).unwrap();
        let (lo, hi) = (
            rep.bar_b1_bits.min(rep.bar_b2_bits),
            rep.bar_b1_bits.max(rep.bar_b2_bits),
        );
        assert!(
            rep.quadrature_bits > lo - 0.05 && rep.quadrature_bits < hi + 0.05,
            "v={v}"
        );
    }
}

proptest! {
    #[test]
    fn asymptote_is_sandwiched(v in 2.0f64..6.0, r_u in 0.0f64..1000.0) {
        prop_assume!((r_u - 500.0).abs() > 1.0);
        let p = SystemParams::reference().with_exponent(v).unwrap();
        let rate = circle_rate(&p, r_u).unwrap().rate_bits;
        let b = rate_bounds(&p, r_u).unwrap();
        prop_assert!(rate >= b.lower() - 1e-9 && rate <= b.upper() + 1e-9);
        if b.ordering == BoundOrdering::B1Upper {
            prop_assert!(b.b1_bits >= b.b2_bits);
        }
        prop_assert!(b.upper() - b.lower() <= 0.6);
    }

    #[test]
    fn optimum_is_stationary_and_maximal(v in 2.05f64..6.0, big_r in 100.0f64..5000.0) {
        let s = solve_radius(v, big_r).unwrap();
        prop_assert!(stationarity_residual(s.r_opt_m, big_r, v).abs() <= 1e-9);
        prop_assert!((0.70..=0.78).contains(&s.ratio));
        let base = SystemParams::reference().with_exponent(v).unwrap();
        let geometry = ringmimo::geometry::CellGeometry::new(big_r, s.r_opt_m).unwrap();
        let p = SystemParams { geometry, ..base };
        let at = |r: f64| average_bound_b1(&p.with_ring_radius(r).unwrap()).unwrap();
        let best = at(s.r_opt_m);
        prop_assert!(best >= at(0.98 * s.r_opt_m) && best >= at((1.02 * s.r_opt_m).min(0.999 * big_r)));
        prop_assert!((average_bound_b2(&p).unwrap() - best).abs() < 0.6);
    }
}
