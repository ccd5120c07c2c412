use interleaving::interleave::{interval_distance_closed_form, ActionKind};
use interleaving::matching::bottleneck;
use interleaving::metricgh::{codistortion, distortion, FiniteMetricSpace};
use interleaving::pmod::{Barcode, IntervalModule};
use interleaving::poset::MonotoneMap;
use interleaving::twocat::{
    action_groupoid_interleaving, audit_lawvere_2_weight, default_instances, indiscrete, lawvere_symmetrized,
    Finite1Category, WeightedGroupAction,
};
use interleaving::weight::{audit_monoidal_weight, audit_pseudometric, Sampling};
use interleaving::{Weight, DEFAULT_TOL};

fn interval(a: f64, b: f64) -> IntervalModule {
    IntervalModule::new(a, b).unwrap()
}

#[test]
fn additive_and_log_weights_pass_audit() {
    let add = audit_monoidal_weight(|t: &f64| Weight::of(*t), &0.0, &[0.0, 1.0, 2.5], |a, b| a + b, DEFAULT_TOL);
    assert!(add.is_empty());
    let log = audit_monoidal_weight(
        |t: &f64| Weight::of(t.ln().abs()),
        &1.0,
        &[0.5, 1.0, 2.0],
        |a, b| a * b,
        DEFAULT_TOL,
    );
    assert!(log.is_empty());
}

#[test]
fn squared_weight_breaks_subadditivity() {
    let report = audit_monoidal_weight(|t: &f64| Weight::of(t * t), &0.0, &[1.0, 1.0], |a, b| a + b, DEFAULT_TOL);
    assert_eq!(report.count("SUBADDITIVE"), 4);
    assert_eq!(report.violations[0].lhs, "4");
    assert_eq!(report.violations[0].rhs, "2");
}

#[test]
fn asymmetric_distance_is_reported() {
    let d = |a: &usize, b: &usize| match (*a, *b) {
        (0, 1) => Weight::of(1.0),
        (1, 0) => Weight::of(2.0),
        _ => Weight::ZERO,
    };
    let report = audit_pseudometric(d, &[0usize, 1], DEFAULT_TOL, Sampling::default());
    assert!(report.count("SYMMETRY") > 0);
}

#[test]
fn pullbacks_of_intervals() {
    let shifted = interval(1.0, 3.0).pullback(&MonotoneMap::Shift(1.0)).unwrap();
    assert_eq!(shifted, interval(0.0, 2.0));
    let scaled = interval(1.0, 4.0).pullback(&MonotoneMap::Scale(2.0)).unwrap();
    assert_eq!(scaled, interval(0.5, 2.0));
    let same = interval(1.0, 3.0).pullback(&MonotoneMap::Shift(0.0)).unwrap();
    assert_eq!(same, interval(1.0, 3.0));
}

#[test]
fn scaling_distance_to_zero_shrinks_with_position() {
    let values: Vec<f64> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&a| {
            interval_distance_closed_form(&interval(a, a + 1.0), &IntervalModule::empty(), ActionKind::Multiplicative)
                .unwrap()
                .value()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(values[2] < 0.01);
}

#[test]
fn bottleneck_prefers_direct_match() {
    let a = Barcode::new(&[(0.0, 4.0)]).unwrap();
    let b = Barcode::new(&[(1.0, 4.0)]).unwrap();
    assert_eq!(bottleneck(&a, &b), Weight::of(1.0));
    assert_eq!(bottleneck(&a, &Barcode::default()), Weight::of(2.0));
}

#[test]
fn lawvere_distance_takes_worse_direction() {
    let base = Finite1Category::codiscrete(2);
    let w1 = base
        .mor
        .iter()
        .map(|m| match m.name.as_str() {
            "0>1" => Weight::of(3.0),
            "1>0" => Weight::of(5.0),
            _ => Weight::ZERO,
        })
        .collect();
    let (c, w) = indiscrete(&base, w1, |_, _| Weight::ZERO).unwrap();
    assert_eq!(lawvere_symmetrized(&c, &w, 0, 1), Weight::of(5.0));
    assert_eq!(lawvere_symmetrized(&c, &w, 0, 0), Weight::ZERO);
}

#[test]
fn swap_action_distance_is_swap_weight() {
    let swap = vec![vec![0, 1], vec![1, 0]];
    let action = WeightedGroupAction::new(swap.clone(), vec![Weight::ZERO, Weight::of(1.5)], swap).unwrap();
    assert_eq!(action_groupoid_interleaving(&action, 0, 1), Weight::of(1.5));
    assert_eq!(action_groupoid_interleaving(&action, 1, 1), Weight::ZERO);
}

#[test]
fn distortion_of_simple_maps() {
    let pair = FiniteMetricSpace::pair(3.0).unwrap();
    let point = FiniteMetricSpace::point();
    assert_eq!(distortion(&[0, 0], &pair, &pair), 3.0);
    assert_eq!(distortion(&[0, 1], &pair, &pair), 0.0);
    assert_eq!(distortion(&[1, 0], &pair, &pair), 0.0);
    assert_eq!(codistortion(&[0], &[0, 0], &point, &pair), 3.0);
    assert_eq!(codistortion(&[1, 0], &[1, 0], &pair, &pair), 0.0);
}

#[test]
fn identity_weight_must_vanish() {
    for (name, c, mut w) in default_instances() {
        assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty(), "{name}");
        w.w1[c.id1[0]] = Weight::of(0.5);
        let report = audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap();
        assert_eq!(report.count("ZERO_ON_IDENTITY_1"), 1, "{name}");
    }
}
