use lplab::functions::io::{parse_grid_function, write_grid_function};
use lplab::functions::{
    alpha_mean, fit_lp_out_grid, lift_membership, lift_volume, scale_fn, sup_conv_p, GridFunction, LiftedBody,
    MeanSpec, SParam,
};
use lplab::numerics::{Bounds, Grid, RandomSource};
use lplab::sets::io::{parse_points_csv, parse_points_json, points_to_csv, points_to_json};
use lplab::sets::DiscreteSet;
use proptest::prelude::*;
use rand::Rng;

fn tent(c: f64, w: f64, nodes: usize) -> GridFunction {
    let g = Grid::uniform(Bounds::interval(c - w, c + w).unwrap(), nodes).unwrap();
    GridFunction::from_fn(g, |x| (1.0 - ((x[0] - c) / w).abs()).max(0.0)).unwrap()
}

#[test]
fn lift_of_a_scaled_function_is_the_scaled_lift() {
    let s = SParam::new(2.0).unwrap();
    let f = GridFunction::from_fn(Grid::uniform(Bounds::interval(-1.0, 1.0).unwrap(), 33).unwrap(), |x| {
        (1.0 - x[0] * x[0]).powi(2)
    })
    .unwrap();
    // lambda = 4, p = 2: the factor lambda^{1/p} = 2 keeps every coordinate exact.
    let scaled = scale_fn(&f, 4.0, 2.0, s).unwrap();
    let (kf, ks) = (LiftedBody::new(f, s).unwrap(), LiftedBody::new(scaled, s).unwrap());
    let mut rng = RandomSource::new(8).rng();
    for _ in 0..20_000 {
        let z: Vec<f64> = (0..3).map(|_| rng.random_range(-2.5..2.5)).collect();
        let back: Vec<f64> = z.iter().map(|v| v / 2.0).collect();
        assert_eq!(lift_membership(&ks, &z).unwrap(), lift_membership(&kf, &back).unwrap(), "{z:?}");
    }
    let (vf, vs) = (
        lift_volume(&kf, 400_000, RandomSource::new(1)).unwrap(),
        lift_volume(&ks, 400_000, RandomSource::new(2)).unwrap(),
    );
    // Volume scales by lambda^{(n+s)/p} = 4^{3/2} = 8.
    let diff = vs.estimate - 8.0 * vf.estimate;
    let sigma = (vs.stderr.powi(2) + (8.0 * vf.stderr).powi(2)).sqrt();
    assert!(diff.abs() <= 3.0 * sigma, "{vs:?} vs 8 x {vf:?}");
}

#[test]
fn scaling_multiplies_the_integral() {
    let f = tent(0.3, 0.9, 41);
    for (lambda, p, s) in [(2.0, 2.0, 1.0), (0.5, 3.0, 1.0), (3.0, 1.5, 0.5)] {
        let g = scale_fn(&f, lambda, p, SParam::new(s).unwrap()).unwrap();
        let want = lambda.powf((1.0 + s) / p) * f.integral();
        assert!((g.integral() - want).abs() <= 1e-13 * want, "{lambda} {p} {s}");
    }
}

#[test]
fn lp_sup_convolution_dominates_both_embeddings() {
    let (f, g) = (tent(0.0, 1.0, 33), tent(0.5, 0.5, 17));
    let s = SParam::new(1.0).unwrap();
    let out = fit_lp_out_grid(&f, &g, 2.0, 65).unwrap();
    let h = sup_conv_p(&f, &g, 2.0, s, 65, &out).unwrap();
    for i in 0..out.len() {
        let z = out.node(i);
        let v = h.values()[i];
        assert!(v >= f.eval(&z) - 1e-12 && v >= g.eval(&z) - 1e-12, "node {i}");
    }
}

#[test]
fn refining_the_coefficient_grid_never_lowers_values() {
    let (f, g) = (tent(0.0, 1.0, 33), tent(0.2, 0.7, 29));
    let s = SParam::new(0.5).unwrap();
    let out = fit_lp_out_grid(&f, &g, 3.0, 49).unwrap();
    let mut prev = sup_conv_p(&f, &g, 3.0, s, 5, &out).unwrap();
    for res in [9, 17, 33] {
        let next = sup_conv_p(&f, &g, 3.0, s, res, &out).unwrap();
        for (a, b) in prev.values().iter().zip(next.values()) {
            assert!(b >= a, "resolution {res}: {b} < {a}");
        }
        prev = next;
    }
}

#[test]
fn equal_arguments_give_the_argument() {
    for a in [0.1, 1.0, 7.5] {
        for spec in [MeanSpec::Max, MeanSpec::Min] {
            assert_eq!(alpha_mean(a, a, 0.3, spec).unwrap(), a);
        }
        for alpha in [-2.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
            let m = alpha_mean(a, a, 0.3, MeanSpec::from_alpha(alpha).unwrap()).unwrap();
            assert!((m - a).abs() <= 1e-12 * a);
        }
    }
}

proptest! {
    #[test]
    fn grid_function_files_round_trip(
        values in prop::collection::vec(0.0f64..1e6, 12),
        lo in -5.0f64..0.0,
        width in 0.1f64..5.0,
        s in prop::option::of(0.1f64..4.0),
    ) {
        let g = Grid::new(Bounds::new(vec![lo, lo], vec![lo + width, lo + 2.0 * width]).unwrap(), vec![3, 4]).unwrap();
        let f = GridFunction::new(g, values).unwrap();
        let back = parse_grid_function(&write_grid_function(&f, s), "rt").unwrap();
        prop_assert_eq!(back.function, f);
        prop_assert_eq!(back.s, s);
    }

    #[test]
    fn point_files_round_trip(coords in prop::collection::vec(-1e3f64..1e3, 3..30)) {
        let n = coords.len() / 3 * 3;
        let set = DiscreteSet::new(3, coords[..n].to_vec()).unwrap();
        prop_assert_eq!(&parse_points_csv(&points_to_csv(&set), "rt").unwrap(), &set);
        prop_assert_eq!(&parse_points_json(&points_to_json(&set), "rt").unwrap(), &set);
    }
}
