//! Shipped experiment settings.

use std::f64::consts::PI;

use super::config::{DistanceConvention, ExperimentConfig, DEFAULT_REPLICATIONS};
use crate::density::Estimator;
use crate::geometry::{GridSpec, ManifoldSpec, StereographicProjection, DEFAULT_NEIGHBORS};
use crate::truth::TargetLaw;

pub const PRESET_NAMES: [&str; 9] = [
    "wishart-table1-1000",
    "wishart-table1-5000",
    "wishart-table1-10000",
    "wishart-table1-20000",
    "wishart-table1-caption",
    "wishart-figure",
    "torus-unimodal",
    "torus-mixture",
    "sphere-mixture",
];

pub const TORUS_MAJOR: f64 = 1.0;
pub const TORUS_MINOR: f64 = 0.5;

/// One-line description of a preset.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "wishart-table1-1000" => "Wishart on the SPD cone, n=1000, h=0.20, region d_H",
        "wishart-table1-5000" => "Wishart on the SPD cone, n=5000, h=0.15, region d_H",
        "wishart-table1-10000" => "Wishart on the SPD cone, n=10000, h=0.10, region d_H",
        "wishart-table1-20000" => "Wishart on the SPD cone, n=20000, h=0.05, region d_H",
        "wishart-table1-caption" => "Wishart, Sigma=I/2, n=10000, lambda=0.5, h=0.3; the true level set is empty",
        "wishart-figure" => "Wishart, Sigma=I/4, n=10000, lambda=0.06, h=0.1, plot data only",
        "torus-unimodal" => "sine-model von Mises on the torus, n=2000, boundary d_H",
        "torus-mixture" => "two-component sine-model mixture on the torus, n=2000, boundary d_H",
        "sphere-mixture" => "vMF mixture on the sphere, n=500, projected boundary d_H",
        _ => return None,
    })
}

fn wishart_grid() -> GridSpec {
    GridSpec::SpdBox {
        resolution: [32, 32, 32],
        a: [0.0, 8.0],
        b: [-4.0, 4.0],
        c: [0.0, 8.0],
    }
}

fn wishart(name: &str, n: usize, h: f64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        manifold: ManifoldSpec::SpdCone,
        law: TargetLaw::Wishart {
            scale: [0.25, 0.0, 0.25],
            dof: 10,
        },
        n,
        bandwidth: Some(h),
        level: 0.06,
        hull_radius: None,
        grid: wishart_grid(),
        replications: DEFAULT_REPLICATIONS,
        seed: 20_240_601,
        distance: DistanceConvention::Regions,
        projection: None,
        estimator: Estimator::Corrected,
        graph_neighbors: DEFAULT_NEIGHBORS,
        output: None,
    }
}

fn mvm(mean: [f64; 2]) -> TargetLaw {
    TargetLaw::MultivariateVonMises {
        mean,
        concentration: [20.0, 20.0],
        coupling: 1.0,
    }
}

fn torus(name: &str, law: TargetLaw) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        manifold: ManifoldSpec::Torus {
            major_radius: TORUS_MAJOR,
            minor_radius: TORUS_MINOR,
        },
        law,
        n: 2000,
        bandwidth: Some(0.2),
        level: 0.8,
        hull_radius: Some(0.3),
        grid: GridSpec::Lattice {
            resolution: [128, 128],
        },
        replications: DEFAULT_REPLICATIONS,
        seed: 20_240_602,
        distance: DistanceConvention::Boundaries,
        projection: None,
        estimator: Estimator::Corrected,
        graph_neighbors: DEFAULT_NEIGHBORS,
        output: None,
    }
}

/// Two vMF components mirrored in the plane x2 = 0; means are normalised when
/// the law is used.
pub fn sphere_mixture_law() -> TargetLaw {
    TargetLaw::Mixture {
        weights: vec![0.5, 0.5],
        components: vec![
            TargetLaw::VonMisesFisher {
                mean: [-1.0, -0.25, 0.0],
                concentration: 40.0,
            },
            TargetLaw::VonMisesFisher {
                mean: [-1.0, 0.25, 0.0],
                concentration: 40.0,
            },
        ],
    }
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    Some(match name {
        "wishart-table1-1000" => wishart(name, 1000, 0.20),
        "wishart-table1-5000" => wishart(name, 5000, 0.15),
        "wishart-table1-10000" => wishart(name, 10000, 0.10),
        "wishart-table1-20000" => wishart(name, 20000, 0.05),
        "wishart-table1-caption" => ExperimentConfig {
            law: TargetLaw::Wishart {
                scale: [0.5, 0.0, 0.5],
                dof: 10,
            },
            level: 0.5,
            ..wishart(name, 10000, 0.3)
        },
        "wishart-figure" => wishart(name, 10000, 0.1),
        "torus-unimodal" => torus(name, mvm([PI / 2.0, 0.0])),
        "torus-mixture" => torus(
            name,
            TargetLaw::Mixture {
                weights: vec![0.4, 0.6],
                components: vec![mvm([PI / 2.0, 0.0]), mvm([PI / 2.0, PI / 4.0])],
            },
        ),
        "sphere-mixture" => ExperimentConfig {
            name: name.to_string(),
            manifold: ManifoldSpec::Sphere,
            law: sphere_mixture_law(),
            n: 500,
            bandwidth: Some(0.1),
            level: 1.0,
            hull_radius: None,
            grid: GridSpec::Fibonacci { points: 100_000 },
            replications: DEFAULT_REPLICATIONS,
            seed: 20_240_603,
            distance: DistanceConvention::Boundaries,
            projection: Some(StereographicProjection {
                pole: [1.0, 0.0, 0.0],
            }),
            estimator: Estimator::Corrected,
            graph_neighbors: DEFAULT_NEIGHBORS,
            output: None,
        },
        _ => return None,
    })
}

/// `(name, description)` for every shipped preset.
pub fn list_presets() -> Vec<(&'static str, &'static str)> {
    PRESET_NAMES
        .iter()
        .map(|n| (*n, describe(n).unwrap_or("")))
        .collect()
}
