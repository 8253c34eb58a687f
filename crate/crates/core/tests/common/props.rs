//! Invariant properties, runnable from a proptest target or from the
//! acceptance harness.

use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, RngAlgorithm, TestRunner};

use mls::density::{
    kde_corrected, kde_uncorrected, m0, evaluate_field, sup_error, Bandwidth, DensityField,
    Estimator,
};

use mls::geometry::{AmbientPoint, EvaluationGrid, Euclidean, GridSpec, ManifoldSpec, PointMetric, Spd2};
use mls::samplers::sample;
use mls::setops::{
    distance_in_measure, grid_geodesic, hausdorff, hausdorff_ambient, level_set, r_convex_hull,
    FinitePointSet, GridSubset,
};
use mls::truth::{true_level_set, TargetLaw};

use super::volume_error;

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

pub const PROPERTIES: [(&str, Property); 13] = [
    ("hausdorff_axioms", hausdorff_axioms),
    ("hausdorff_geodesic_axioms", hausdorff_geodesic_axioms),
    ("measure_distance_axioms", measure_distance_axioms),
    ("level_set_nesting", level_set_nesting),
    ("hull_idempotent", hull_idempotent),
    ("hull_monotone_in_set", hull_monotone_in_set),
    ("kde_identity", kde_identity),
    ("kde_permutation_invariance", kde_permutation_invariance),
    ("kernel_mass", kernel_mass),
    ("grid_volumes", grid_volumes),
    ("spd_metric_axioms", spd_metric_axioms),
    ("sup_error_shift", sup_error_shift),
    ("level_set_extremes", level_set_extremes),
];

pub fn runner(cases: u32, deterministic: bool) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

pub fn run(name: &str, cases: u32, deterministic: bool) -> Result<(), String> {
    let (_, prop) = PROPERTIES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| format!("no property {name}"))?;
    prop(&mut runner(cases, deterministic))
}

fn unit_vector() -> impl Strategy<Value = AmbientPoint> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(|v| {
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        })
}

fn cloud() -> impl Strategy<Value = Vec<AmbientPoint>> {
    vec(prop::array::uniform3(-2.0..2.0f64), 1..16)
}

fn sphere_lattice() -> &'static EvaluationGrid {
    static G: OnceLock<EvaluationGrid> = OnceLock::new();
    G.get_or_init(|| {
        EvaluationGrid::build(&ManifoldSpec::Sphere, &GridSpec::Lattice { resolution: [32, 16] })
            .unwrap()
    })
}

fn sphere_fibonacci() -> &'static EvaluationGrid {
    static G: OnceLock<EvaluationGrid> = OnceLock::new();
    G.get_or_init(|| {
        EvaluationGrid::build(&ManifoldSpec::Sphere, &GridSpec::Fibonacci { points: 300 }).unwrap()
    })
}

fn small_torus() -> &'static EvaluationGrid {
    static G: OnceLock<EvaluationGrid> = OnceLock::new();
    G.get_or_init(|| {
        let t = ManifoldSpec::torus(1.0, 0.5).unwrap();
        EvaluationGrid::build(&t, &GridSpec::Lattice { resolution: [24, 16] }).unwrap()
    })
}

fn hausdorff_axioms(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(cloud(), cloud(), cloud()), |(a, b, c)| {
            let (a, b, c) = (FinitePointSet::new(a), FinitePointSet::new(b), FinitePointSet::new(c));
            let ab = hausdorff_ambient(&a, &b).unwrap();
            let ba = hausdorff_ambient(&b, &a).unwrap();
            let bc = hausdorff_ambient(&b, &c).unwrap();
            let ac = hausdorff_ambient(&a, &c).unwrap();
            prop_assert_eq!(hausdorff_ambient(&a, &a).unwrap(), 0.0);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
            let brute = hausdorff(&a, &b, &Euclidean).unwrap();
            prop_assert!((brute - ab).abs() <= 1e-12, "{} vs {}", brute, ab);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn hausdorff_geodesic_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let set = || vec(unit_vector(), 1..10);
    runner
        .run(&(set(), set(), set()), |(a, b, c)| {
            let m = ManifoldSpec::Sphere;
            let (a, b, c) = (FinitePointSet::new(a), FinitePointSet::new(b), FinitePointSet::new(c));
            let ab = hausdorff(&a, &b, &m).unwrap();
            prop_assert_eq!(hausdorff(&a, &a, &m).unwrap(), 0.0);
            prop_assert_eq!(ab, hausdorff(&b, &a, &m).unwrap());
            let ac = hausdorff(&a, &c, &m).unwrap();
            let bc = hausdorff(&b, &c, &m).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert!(ab <= PI + 1e-12);
            // chords never exceed arcs
            prop_assert!(hausdorff_ambient(&a, &b).unwrap() <= ab + 1e-12);
            for x in &a.points {
                for y in &b.points {
                    let d = m.distance(x, y).unwrap();
                    prop_assert!((d - super::arc(x, y)).abs() < 1e-7);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn measure_distance_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let g = sphere_lattice();
    let mask = || vec(any::<bool>(), g.len());
    runner
        .run(&(mask(), mask(), mask()), |(a, b, c)| {
            let a = GridSubset::from_mask(g, a).unwrap();
            let b = GridSubset::from_mask(g, b).unwrap();
            let c = GridSubset::from_mask(g, c).unwrap();
            let d = |x: &GridSubset, y: &GridSubset| distance_in_measure(x, y, g).unwrap();
            let vol = |x: &GridSubset| x.indices().map(|i| g.weights()[i]).sum::<f64>();
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
            let both = GridSubset::from_mask(
                g,
                a.mask().iter().zip(b.mask()).map(|(x, y)| *x && *y).collect(),
            )
            .unwrap();
            let expected = vol(&a) + vol(&b) - 2.0 * vol(&both);
            prop_assert!((d(&a, &b) - expected).abs() < 1e-9);
            prop_assert!((d(&a, &a.complement()) - g.total_volume()).abs() < 1e-9);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn level_set_nesting(runner: &mut TestRunner) -> Result<(), String> {
    let g = sphere_lattice();
    runner
        .run(
            &(vec(0.0..2.0f64, g.len()), 0.01..2.0f64, 0.01..2.0f64),
            |(values, l1, l2)| {
                let f = DensityField::truth(g, values).unwrap();
                let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
                let small = level_set(&f, hi).unwrap();
                let large = level_set(&f, lo).unwrap();
                prop_assert!(small.is_subset_of(&large));
                for i in 0..g.len() {
                    prop_assert_eq!(large.contains(i), f.values()[i] >= lo);
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

/// Random subsets of a grid given as index lists, on the sphere or torus.
fn hull_case() -> impl Strategy<Value = (bool, Vec<usize>, Vec<usize>)> {
    (any::<bool>(), vec(0usize..10_000, 1..40), vec(0usize..10_000, 0..20))
}

fn hull_setup(torus: bool) -> (&'static EvaluationGrid, f64) {
    if torus {
        (small_torus(), 0.9)
    } else {
        (sphere_fibonacci(), 0.7)
    }
}

fn points_of(g: &EvaluationGrid, idx: &[usize]) -> FinitePointSet {
    FinitePointSet::new(idx.iter().map(|&i| *g.point(i % g.len())).collect())
}

fn hull_idempotent(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&hull_case(), |(torus, a, _)| {
            let (g, r) = hull_setup(torus);
            let metric = grid_geodesic(g, 8).unwrap();
            let once = r_convex_hull(&points_of(g, &a), metric.as_ref(), r).unwrap();
            let twice = r_convex_hull(&once.points(g).unwrap(), metric.as_ref(), r).unwrap();
            prop_assert_eq!(once, twice);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn hull_monotone_in_set(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&hull_case(), |(torus, a, extra)| {
            let (g, r) = hull_setup(torus);
            let metric = grid_geodesic(g, 8).unwrap();
            let mut b = a.clone();
            b.extend(extra);
            let ha = r_convex_hull(&points_of(g, &a), metric.as_ref(), r).unwrap();
            let hb = r_convex_hull(&points_of(g, &b), metric.as_ref(), r).unwrap();
            prop_assert!(ha.is_subset_of(&hb));
            for i in &a {
                prop_assert!(ha.contains(i % g.len()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn hemisphere_point() -> impl Strategy<Value = AmbientPoint> {
    (0.0..(2.0 * PI), 0.0..(PI / 2.0)).prop_map(|(t, p)| {
        [p.sin() * t.cos(), p.sin() * t.sin(), p.cos()]
    })
}

fn kde_identity(runner: &mut TestRunner) -> Result<(), String> {
    let cap = ManifoldSpec::hemisphere(PI / 2.0).unwrap();
    runner
        .run(
            &(any::<u64>(), 0.05..0.5f64, vec(hemisphere_point(), 1..8)),
            |(seed, h, xs)| {
                let law = TargetLaw::UniformCap { cap_angle: PI / 2.0 };
                let s = sample(&law, &cap, 60, seed).unwrap();
                let h = Bandwidth::new(h).unwrap();
                for x in &xs {
                    let c = kde_corrected(x, s.points(), h, &cap).unwrap();
                    let u = kde_uncorrected(x, s.points(), h, &cap).unwrap();
                    let b = PI / 2.0 - x[2].clamp(-1.0, 1.0).acos();
                    let expected = 0.5 * (1.0 + statrs::function::erf::erf(b / h.get())) * c;
                    prop_assert!((u - expected).abs() <= 1e-12 * u.abs().max(1e-300));
                    prop_assert!((u - m0(b, h) * c).abs() <= 1e-12 * u.abs().max(1e-300));
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

fn kde_permutation_invariance(runner: &mut TestRunner) -> Result<(), String> {
    let g = sphere_lattice();
    runner
        .run(
            &(vec(unit_vector(), 2..40), any::<prop::sample::Index>(), 0.1..0.6f64),
            |(pts, pivot, h)| {
                let h = Bandwidth::new(h).unwrap();
                let mut rotated = pts.clone();
                rotated.rotate_left(pivot.index(pts.len()));
                let a = evaluate_field(&pts, h, g, Estimator::Corrected).unwrap();
                let b = evaluate_field(&rotated, h, g, Estimator::Corrected).unwrap();
                for (x, y) in a.values().iter().zip(b.values()) {
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-12));
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

fn fine_grids() -> &'static [(ManifoldSpec, EvaluationGrid)] {
    static G: OnceLock<Vec<(ManifoldSpec, EvaluationGrid)>> = OnceLock::new();
    G.get_or_init(|| {
        let torus = ManifoldSpec::torus(1.0, 0.5).unwrap();
        let cap = ManifoldSpec::hemisphere(PI / 2.0).unwrap();
        vec![
            (
                ManifoldSpec::Sphere,
                EvaluationGrid::build(&ManifoldSpec::Sphere, &GridSpec::Lattice { resolution: [512, 256] })
                    .unwrap(),
            ),
            (
                torus,
                EvaluationGrid::build(&torus, &GridSpec::Lattice { resolution: [512, 256] }).unwrap(),
            ),
            (
                cap,
                EvaluationGrid::build(&cap, &GridSpec::Lattice { resolution: [512, 128] }).unwrap(),
            ),
        ]
    })
}

/// `int K_h(x - y) dy / h^d'` by grid quadrature, with the boundary mass
/// divided out on the cap.
fn kernel_mass(runner: &mut TestRunner) -> Result<(), String> {
    let grids = fine_grids();
    runner
        .run(
            &(0usize..3, 0.0..(2.0 * PI), 0.0..1.0f64, 0.08..0.15f64),
            |(which, t, s, h)| {
                let (m, g) = &grids[which];
                let x = match *m {
                    ManifoldSpec::Torus { .. } => m.embed(&[t, s * 2.0 * PI]).unwrap(),
                    ManifoldSpec::Hemisphere { cap_angle } => m.embed(&[t, s * cap_angle]).unwrap(),
                    _ => m.embed(&[t, s * PI]).unwrap(),
                };
                let bw = Bandwidth::new(h).unwrap();
                let mass: f64 = g
                    .points()
                    .iter()
                    .zip(g.weights())
                    .map(|(y, w)| {
                        let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2);
                        w * (-d2 / (h * h)).exp() / PI
                    })
                    .sum::<f64>()
                    / (h * h * m0(m.boundary_distance(&x).unwrap(), bw));
                prop_assert!((0.98..=1.02).contains(&mass), "{} mass {} at {:?}, h {}", m.name(), mass, x, h);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

fn grid_volumes(_: &mut TestRunner) -> Result<(), String> {
    let torus = ManifoldSpec::torus(1.0, 0.5).unwrap();
    let cap = ManifoldSpec::hemisphere(PI / 2.0).unwrap();
    let wide = ManifoldSpec::hemisphere(2.0 * PI / 3.0).unwrap();
    let cases: Vec<(&str, ManifoldSpec, GridSpec, f64)> = vec![
        ("sphere lattice", ManifoldSpec::Sphere, GridSpec::Lattice { resolution: [64, 32] }, 4.0 * PI),
        ("sphere fibonacci", ManifoldSpec::Sphere, GridSpec::Fibonacci { points: 5000 }, 4.0 * PI),
        ("torus", torus, GridSpec::Lattice { resolution: [64, 32] }, 4.0 * PI * PI * 0.5),
        ("hemisphere", cap, GridSpec::Lattice { resolution: [64, 32] }, 2.0 * PI),
        ("wide cap", wide, GridSpec::Lattice { resolution: [64, 32] }, 2.0 * PI * 1.5),
        // {a, c in [0, 4], ac > b^2} has volume (8/9) (4 * 4)^(3/2)
        (
            "spd box",
            ManifoldSpec::SpdCone,
            GridSpec::SpdBox {
                resolution: [64, 64, 64],
                a: [0.0, 4.0],
                b: [-4.0, 4.0],
                c: [0.0, 4.0],
            },
            8.0 / 9.0 * 64.0,
        ),
    ];
    for (name, m, spec, exact) in cases {
        let g = EvaluationGrid::build(&m, &spec).map_err(|e| e.to_string())?;
        let err = volume_error(&g, exact);
        if err > 0.01 {
            return Err(format!("{name}: volume {} vs {exact} ({err:.4})", g.total_volume()));
        }
    }
    Ok(())
}

fn spd() -> impl Strategy<Value = Spd2> {
    (0.2..3.0f64, -2.0..2.0f64, 0.2..3.0f64)
        .prop_map(|(l11, l21, l22)| Spd2::new(l11 * l11, l11 * l21, l21 * l21 + l22 * l22).unwrap())
}

fn spd_metric_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let invertible = prop::array::uniform4(-2.0..2.0f64)
        .prop_filter("invertible", |p| (p[0] * p[3] - p[1] * p[2]).abs() > 0.1);
    runner
        .run(&(spd(), spd(), spd(), invertible), |(a, b, c, p)| {
            let d = |x: &Spd2, y: &Spd2| x.affine_invariant_distance(y).unwrap();
            let ab = d(&a, &b);
            prop_assert!(d(&a, &a).abs() < 1e-12);
            prop_assert!((ab - d(&b, &a)).abs() < 1e-9 * (1.0 + ab));
            prop_assert!(d(&a, &c) <= ab + d(&b, &c) + 1e-9);
            let oracle = super::spd_distance(&a.coords(), &b.coords());
            prop_assert!((ab - oracle).abs() < 1e-8 * (1.0 + ab), "{} vs {}", ab, oracle);
            let m = [[p[0], p[1]], [p[2], p[3]]];
            let moved = d(&a.congruence(m), &b.congruence(m));
            prop_assert!((moved - ab).abs() < 1e-7 * (1.0 + ab), "{} vs {}", moved, ab);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn sup_error_shift(runner: &mut TestRunner) -> Result<(), String> {
    let g = sphere_lattice();
    runner
        .run(&(vec(0.0..5.0f64, g.len()), 0.0..3.0f64), |(values, c)| {
            let truth = DensityField::truth(g, values.clone()).unwrap();
            let same = DensityField::truth(g, values.clone()).unwrap();
            let full = GridSubset::full(g);
            prop_assert_eq!(sup_error(&same, &truth, &full).unwrap(), 0.0);
            let shifted = DensityField::truth(g, values.iter().map(|v| v + c).collect()).unwrap();
            prop_assert!((sup_error(&shifted, &truth, &full).unwrap() - c).abs() < 1e-12);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn level_set_extremes(runner: &mut TestRunner) -> Result<(), String> {
    let g = sphere_lattice();
    runner
        .run(&vec(0.01..5.0f64, g.len()), |values| {
            let f = DensityField::truth(g, values).unwrap();
            prop_assert!(true_level_set(&f, f.max() * 1.0001).unwrap().is_empty());
            prop_assert_eq!(true_level_set(&f, 1e-9).unwrap().count(), g.len());
            prop_assert!(true_level_set(&f, f.max()).unwrap().contains(f.argmax()));
            Ok(())
        })
        .map_err(|e| e.to_string())
}
