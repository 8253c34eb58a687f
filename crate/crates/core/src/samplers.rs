//! Seeded samplers for the target laws.
//!
//! Every stream is a ChaCha20 generator seeded with `seed_from_u64`, drawn
//! sequentially, so a `(law, n, seed)` triple gives bitwise identical output
//! on any machine and any thread count.

use std::f64::consts::TAU;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dot, normalize, sphere_point, torus_point, AmbientPoint, ManifoldSpec, Spd2};
use crate::truth::TargetLaw;

/// Proposals per acceptance-rate check of the rejection sampler.
pub const REJECTION_BATCH: u64 = 1 << 20;
/// Acceptance rates below this abort the rejection sampler.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

/// Seed of replication `index` derived from a base seed.
pub fn replication_seed(base: u64, index: u64) -> u64 {
    base ^ index
}

/// An iid sample with the law and seed that produced it.
#[derive(Debug, Clone)]
pub struct SamplePointSet {
    points: Vec<AmbientPoint>,
    law: TargetLaw,
    manifold: ManifoldSpec,
    seed: u64,
}

#[derive(Serialize)]
struct SampleMetadata<'a> {
    law: &'a TargetLaw,
    manifold: &'a ManifoldSpec,
    n: usize,
    seed: u64,
}

impl SamplePointSet {
    pub fn points(&self) -> &[AmbientPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<AmbientPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn law(&self) -> &TargetLaw {
        &self.law
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Ambient coordinates, plus chart angles on the sphere, cap and torus.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let angles = !matches!(self.manifold, ManifoldSpec::SpdCone);
        if angles {
            w.write_record(["x1", "x2", "x3", "theta", "phi"])?;
        } else {
            w.write_record(["x1", "x2", "x3"])?;
        }
        for x in &self.points {
            let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            if angles {
                row.extend(self.manifold.intrinsic_coords(x).iter().map(|v| v.to_string()));
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn write_metadata_json(&self, path: &Path) -> Result<()> {
        let meta = SampleMetadata {
            law: &self.law,
            manifold: &self.manifold,
            n: self.points.len(),
            seed: self.seed,
        };
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(file, &meta)?;
        Ok(())
    }
}

enum Draw {
    Wishart {
        chol: [f64; 3],
        dof: u32,
    },
    Mvm {
        mean: [f64; 2],
        kappa: [f64; 2],
        coupling: f64,
        radii: (f64, f64),
        proposals: u64,
        accepted: u64,
    },
    Vmf {
        mean: AmbientPoint,
        kappa: f64,
    },
    Mixture {
        cumulative: Vec<f64>,
        components: Vec<Draw>,
    },
    UniformCap {
        cos_cap: f64,
    },
}

impl Draw {
    fn new(law: &TargetLaw, manifold: &ManifoldSpec) -> Result<Self> {
        Ok(match law {
            TargetLaw::Wishart { scale, dof } => Draw::Wishart {
                chol: Spd2::from_coords(*scale)?.cholesky(),
                dof: *dof,
            },
            TargetLaw::MultivariateVonMises {
                mean,
                concentration,
                coupling,
            } => {
                let ManifoldSpec::Torus {
                    major_radius,
                    minor_radius,
                } = *manifold
                else {
                    return Err(Error::domain("sine-model law needs a torus"));
                };
                Draw::Mvm {
                    mean: *mean,
                    kappa: *concentration,
                    coupling: *coupling,
                    radii: (major_radius, minor_radius),
                    proposals: 0,
                    accepted: 0,
                }
            }
            TargetLaw::VonMisesFisher {
                mean,
                concentration,
            } => Draw::Vmf {
                mean: normalize(mean)?,
                kappa: *concentration,
            },
            TargetLaw::Mixture {
                weights,
                components,
            } => {
                let mut acc = 0.0;
                let cumulative = weights
                    .iter()
                    .map(|w| {
                        acc += w;
                        acc
                    })
                    .collect();
                Draw::Mixture {
                    cumulative,
                    components: components
                        .iter()
                        .map(|c| Draw::new(c, manifold))
                        .collect::<Result<_>>()?,
                }
            }
            TargetLaw::UniformCap { cap_angle } => Draw::UniformCap {
                cos_cap: cap_angle.cos(),
            },
        })
    }

    fn draw(&mut self, rng: &mut ChaCha20Rng) -> Result<AmbientPoint> {
        match self {
            Draw::Wishart { chol, dof } => loop {
                let [l11, l21, l22] = *chol;
                let mut s = [0.0; 3];
                for _ in 0..*dof {
                    let z1: f64 = rng.sample(StandardNormal);
                    let z2: f64 = rng.sample(StandardNormal);
                    let x1 = l11 * z1;
                    let x2 = l21 * z1 + l22 * z2;
                    s[0] += x1 * x1;
                    s[1] += x1 * x2;
                    s[2] += x2 * x2;
                }
                // a.s. positive definite; guard against rounding
                if s[0] > 0.0 && s[0] * s[2] - s[1] * s[1] > 0.0 {
                    return Ok(s);
                }
            },
            Draw::Mvm {
                mean,
                kappa,
                coupling,
                radii,
                proposals,
                accepted,
            } => {
                let envelope = kappa[0] + kappa[1] + coupling.abs();
                loop {
                    let t0 = rng.gen::<f64>() * TAU;
                    let t1 = rng.gen::<f64>() * TAU;
                    let u: f64 = rng.gen();
                    *proposals += 1;
                    let (s0, c0) = (t0 - mean[0]).sin_cos();
                    let (s1, c1) = (t1 - mean[1]).sin_cos();
                    let exponent = kappa[0] * c0 + kappa[1] * c1 + *coupling * s0 * s1;
                    if u < (exponent - envelope).exp() {
                        *accepted += 1;
                        return Ok(torus_point(radii.0, radii.1, t0, t1));
                    }
                    if *proposals % REJECTION_BATCH == 0 {
                        let rate = *accepted as f64 / *proposals as f64;
                        if rate < MIN_ACCEPTANCE {
                            return Err(Error::LowAcceptance { rate });
                        }
                    }
                }
            }
            Draw::Vmf { mean, kappa } => {
                let u: f64 = rng.gen();
                let psi = rng.gen::<f64>() * TAU;
                let w = if *kappa == 0.0 {
                    2.0 * u - 1.0
                } else {
                    (1.0 + (u + (1.0 - u) * (-2.0 * *kappa).exp()).ln() / *kappa).clamp(-1.0, 1.0)
                };
                let rho = ((1.0 - w) * (1.0 + w)).sqrt();
                let local = [rho * psi.cos(), rho * psi.sin(), w];
                normalize(&householder_from_north(mean, &local))
            }
            Draw::Mixture {
                cumulative,
                components,
            } => {
                let u: f64 = rng.gen::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                let k = cumulative
                    .iter()
                    .position(|c| u < *c)
                    .unwrap_or(components.len() - 1);
                components[k].draw(rng)
            }
            Draw::UniformCap { cos_cap } => {
                let z = *cos_cap + (1.0 - *cos_cap) * rng.gen::<f64>();
                let psi = rng.gen::<f64>() * TAU;
                Ok(sphere_point(psi, z.clamp(-1.0, 1.0).acos()))
            }
        }
    }
}

/// Applies the reflection that swaps the north pole and `mean`.
fn householder_from_north(mean: &AmbientPoint, x: &AmbientPoint) -> AmbientPoint {
    let v = [-mean[0], -mean[1], 1.0 - mean[2]];
    let vv = dot(&v, &v);
    if vv < 1e-30 {
        return *x;
    }
    let f = 2.0 * dot(&v, x) / vv;
    [x[0] - f * v[0], x[1] - f * v[1], x[2] - f * v[2]]
}

/// Draws `n` iid points from `law` on `manifold`.
pub fn sample(law: &TargetLaw, manifold: &ManifoldSpec, n: usize, seed: u64) -> Result<SamplePointSet> {
    manifold.validate()?;
    let problems = law.diagnostics(manifold, "law");
    if !problems.is_empty() {
        return Err(Error::Config(problems.join("; ")));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut draw = Draw::new(law, manifold)?;
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let x = draw.draw(&mut rng)?;
        manifold.check_on_manifold(&x)?;
        points.push(x);
    }
    Ok(SamplePointSet {
        points,
        law: law.clone(),
        manifold: *manifold,
        seed,
    })
}

/// Wishart `W_2(Sigma, m)` matrices as `(a, b, c)`.
pub fn sample_wishart(scale: [f64; 3], dof: u32, n: usize, seed: u64) -> Result<SamplePointSet> {
    sample(&TargetLaw::Wishart { scale, dof }, &ManifoldSpec::SpdCone, n, seed)
}

/// Sine-model von Mises by uniform-proposal rejection, embedded in the torus.
pub fn sample_mvm(
    mean: [f64; 2],
    concentration: [f64; 2],
    coupling: f64,
    torus: &ManifoldSpec,
    n: usize,
    seed: u64,
) -> Result<SamplePointSet> {
    let law = TargetLaw::MultivariateVonMises {
        mean,
        concentration,
        coupling,
    };
    sample(&law, torus, n, seed)
}

/// Von Mises-Fisher on the unit sphere by inversion of the `mu^T x` marginal.
pub fn sample_vmf(mean: [f64; 3], concentration: f64, n: usize, seed: u64) -> Result<SamplePointSet> {
    let law = TargetLaw::VonMisesFisher {
        mean,
        concentration,
    };
    sample(&law, &ManifoldSpec::Sphere, n, seed)
}

/// Mixture: a categorical component draw followed by that component's sampler.
pub fn sample_mixture(
    weights: Vec<f64>,
    components: Vec<TargetLaw>,
    manifold: &ManifoldSpec,
    n: usize,
    seed: u64,
) -> Result<SamplePointSet> {
    sample(&TargetLaw::Mixture { weights, components }, manifold, n, seed)
}
