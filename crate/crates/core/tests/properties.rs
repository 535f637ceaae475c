use proptest::prelude::*;
use symrig_core::analysis::{qs_ratio, CircleHomeo, ConjugacyLift, Reflected};
use symrig_core::{
    enumerate_level, interval_of_word, word_of_point, CircleMap, Conjugacy, HomeoSpec, Limits, MapSpec, Word,
};

/// Sorted cuts with every branch at least 0.02 long.
fn cuts() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=3)
        .prop_flat_map(|k| prop::collection::vec(0.02f64..1.0, k + 1))
        .prop_map(|raw| {
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let free = 1.0 - 0.02 * weights.len() as f64;
            let mut acc = 0.0;
            let mut cuts = Vec::new();
            for w in &weights[..weights.len() - 1] {
                acc += 0.02 + free * w;
                cuts.push(acc);
            }
            cuts
        })
}

fn any_map() -> impl Strategy<Value = MapSpec> {
    prop_oneof![
        cuts().prop_map(|cuts| MapSpec::PiecewiseLinear { cuts }),
        (2u32..=4).prop_map(|degree| MapSpec::Linear { degree }),
        (2u32..=3, -0.9f64..0.9).prop_map(|(degree, epsilon)| MapSpec::SmoothSine { degree, epsilon }),
        (-0.6f64..0.6).prop_map(|c| MapSpec::Conjugated {
            base: Box::new(MapSpec::Linear { degree: 2 }),
            homeo: HomeoSpec::SineHomeo { c },
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_is_periodic(spec in any_map(), x in -3.0f64..3.0) {
        let map = CircleMap::new(spec).unwrap();
        let d = map.degree() as f64;
        prop_assert!((map.eval_lift(x + 1.0) - map.eval_lift(x) - d).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn branch_inverse_round_trip(spec in any_map(), y in 0.0f64..=1.0, dy in 0.0f64..0.5) {
        let map = CircleMap::new(spec).unwrap();
        for i in 0..map.degree() {
            let x = map.inverse_branch(i, y).unwrap();
            prop_assert!((map.eval_lift(x) - (i as f64 + y)).abs() <= 1e-12);
            let c = map.cuts();
            prop_assert!(c[i as usize] <= x && x <= c[i as usize + 1]);
            let y2 = (y + dy).min(1.0);
            prop_assert!(map.inverse_branch(i, y2).unwrap() >= x);
        }
    }

    #[test]
    fn global_inverse_round_trip(spec in any_map(), y in -2.0f64..2.0, n in 1usize..6) {
        let map = CircleMap::new(spec).unwrap();
        let mut x = map.global_inverse_lift(y, n, &Limits::default()).unwrap();
        for _ in 0..n {
            x = map.eval_lift(x);
        }
        prop_assert!((x - y).abs() <= map.round_trip_bound(n) + 1e-12);
    }

    #[test]
    fn partition_refines_and_tiles(spec in any_map(), n in 1usize..5) {
        let map = CircleMap::new(spec).unwrap();
        let limits = Limits::default();
        let d = map.degree() as usize;
        let parents = enumerate_level(&map, n - 1, &limits).unwrap();
        let children = enumerate_level(&map, n, &limits).unwrap();
        prop_assert_eq!(children.len(), d * parents.len());
        prop_assert!((children.iter().map(|c| c.length()).sum::<f64>() - 1.0).abs() <= 1e-12);
        for (j, c) in children.iter().enumerate() {
            let p = &parents[j / d];
            prop_assert!(p.left <= c.left && c.right <= p.right);
            prop_assert!(c.length() > 0.0);
            prop_assert_eq!(&word_of_point(&map, c.midpoint(), n, &limits).unwrap(), &c.word);
        }
    }

    #[test]
    fn cylinders_map_onto_shifted_cylinders(spec in any_map(), index in 0usize..256, n in 2usize..5) {
        let map = CircleMap::new(spec).unwrap();
        let limits = Limits::default();
        let d = map.degree();
        let w = Word::from_index(index % (d as usize).pow(n as u32), d, n);
        let c = interval_of_word(&map, &w, &limits).unwrap();
        let s = interval_of_word(&map, &w.left_shift().unwrap(), &limits).unwrap();
        let i = w.symbols()[0] as f64;
        prop_assert!((map.eval_lift(c.left) - i - s.left).abs() <= 1e-10);
        prop_assert!((map.eval_lift(c.right) - i - s.right).abs() <= 1e-10);
    }

    #[test]
    fn conjugacy_is_monotone_and_word_equivariant(
        f_cuts in cuts(),
        g_cuts in cuts(),
        x in 0.0f64..1.0,
        dx in 0.0f64..0.3,
    ) {
        prop_assume!(f_cuts.len() == g_cuts.len());
        let f = CircleMap::new(MapSpec::PiecewiseLinear { cuts: f_cuts }).unwrap();
        let g = CircleMap::new(MapSpec::PiecewiseLinear { cuts: g_cuts }).unwrap();
        let limits = Limits::default();
        let h = Conjugacy::new(&f, &g, &limits).unwrap();
        let y = (x + dx).min(1.0);
        let (a, b) = (h.eval(x, 1e-9).unwrap(), h.eval(y, 1e-9).unwrap());
        prop_assert!(a.lo <= b.hi);
        // h(x) lies in the g-cylinder carrying the f-word of x
        let w = word_of_point(&f, x, 6, &limits).unwrap();
        let gc = interval_of_word(&g, &w, &limits).unwrap();
        prop_assert!(gc.left - 1e-12 <= a.midpoint() && a.midpoint() <= gc.right + 1e-12);
    }

    #[test]
    fn reflection_inverts_quasisymmetry_ratio(c in -0.8f64..0.8, x in -1.0f64..1.0, t in 0.001f64..0.5) {
        let h = HomeoSpec::SineHomeo { c };
        let r = qs_ratio(&h, x, t).unwrap();
        let reflected = qs_ratio(&Reflected(&h), -x, t).unwrap();
        prop_assert!((r * reflected - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn conjugacy_lift_is_periodic() {
    let f = CircleMap::new(MapSpec::falpha(0.6)).unwrap();
    let g = CircleMap::new(MapSpec::Linear { degree: 2 }).unwrap();
    let h = ConjugacyLift {
        conjugacy: Conjugacy::new(&f, &g, &Limits::default()).unwrap(),
        tol: 1e-10,
    };
    for x in [0.1, 0.37, 0.6, 0.93] {
        let a = h.value(x).unwrap();
        assert!((h.value(x + 1.0).unwrap() - a - 1.0).abs() <= 1e-10);
        assert!((h.value(x - 2.0).unwrap() - a + 2.0).abs() <= 1e-10);
    }
}
