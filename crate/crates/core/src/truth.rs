//! Closed-form target laws and their level sets.
//!
//! Densities on embedded surfaces are taken with respect to surface area, the
//! measure the kernel estimator targets. On the torus this divides the
//! angular sine-model density by the area element `r (R + r cos phi)`. The
//! Wishart density is with respect to Lebesgue measure on `(a, b, c)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::density::DensityField;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, AmbientPoint, EvaluationGrid, ManifoldSpec, Spd2};
use crate::setops::GridSubset;

/// Starting resolution per angle of the sine-model normaliser quadrature.
pub const MVM_MIN_RESOLUTION: usize = 128;
/// Largest resolution tried before giving up.
pub const MVM_MAX_RESOLUTION: usize = 4096;
/// Relative change between successive doublings accepted as converged.
pub const MVM_TOLERANCE: f64 = 1e-6;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A target law. Parameters are given as in the configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetLaw {
    /// `W_2(Sigma, m)` with `Sigma = [[a, b], [b, c]]` given as `scale = [a, b, c]`.
    Wishart { scale: [f64; 3], dof: u32 },
    /// Sine-model von Mises on the torus; `mean = (theta, phi)` where `theta`
    /// is the major and `phi` the minor angle. `coupling` is the off-diagonal
    /// entry of the symmetric, zero-diagonal coupling matrix.
    MultivariateVonMises {
        mean: [f64; 2],
        concentration: [f64; 2],
        coupling: f64,
    },
    /// Von Mises-Fisher on the sphere. The mean is normalised before use.
    VonMisesFisher { mean: [f64; 3], concentration: f64 },
    Mixture {
        weights: Vec<f64>,
        components: Vec<TargetLaw>,
    },
    /// Uniform law on a polar cap.
    UniformCap { cap_angle: f64 },
}

impl TargetLaw {
    pub fn name(&self) -> &'static str {
        match self {
            TargetLaw::Wishart { .. } => "wishart",
            TargetLaw::MultivariateVonMises { .. } => "multivariate_von_mises",
            TargetLaw::VonMisesFisher { .. } => "von_mises_fisher",
            TargetLaw::Mixture { .. } => "mixture",
            TargetLaw::UniformCap { .. } => "uniform_cap",
        }
    }

    /// Parameter problems, each prefixed with its field path under `path`.
    pub fn diagnostics(&self, manifold: &ManifoldSpec, path: &str) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_diagnostics(manifold, path, &mut out);
        out
    }

    fn collect_diagnostics(&self, manifold: &ManifoldSpec, path: &str, out: &mut Vec<String>) {
        let wrong_manifold = |out: &mut Vec<String>, expected: &str| {
            out.push(format!(
                "{path}: law {} needs a {expected} manifold, got {}",
                self.name(),
                manifold.name()
            ))
        };
        match self {
            TargetLaw::Wishart { scale, dof } => {
                if !matches!(manifold, ManifoldSpec::SpdCone) {
                    wrong_manifold(out, "spd_cone");
                }
                if Spd2::from_coords(*scale).is_err() {
                    out.push(format!("{path}.scale: {scale:?} is not symmetric positive definite"));
                }
                if *dof < 2 {
                    out.push(format!("{path}.dof: need at least 2 degrees of freedom, got {dof}"));
                }
            }
            TargetLaw::MultivariateVonMises {
                mean,
                concentration,
                coupling,
            } => {
                if !matches!(manifold, ManifoldSpec::Torus { .. }) {
                    wrong_manifold(out, "torus");
                }
                if !mean.iter().all(|m| m.is_finite()) {
                    out.push(format!("{path}.mean: angles must be finite"));
                }
                if !concentration.iter().all(|k| k.is_finite() && *k >= 0.0) {
                    out.push(format!(
                        "{path}.concentration: entries must be finite and nonnegative, got {concentration:?}"
                    ));
                }
                if !coupling.is_finite() {
                    out.push(format!("{path}.coupling: must be finite"));
                }
            }
            TargetLaw::VonMisesFisher {
                mean,
                concentration,
            } => {
                if !matches!(manifold, ManifoldSpec::Sphere) {
                    wrong_manifold(out, "sphere");
                }
                let n = norm(mean);
                if !(n.is_finite() && n > 0.0) {
                    out.push(format!("{path}.mean: must be a nonzero finite vector"));
                }
                if !(concentration.is_finite() && *concentration >= 0.0) {
                    out.push(format!(
                        "{path}.concentration: must be finite and nonnegative, got {concentration}"
                    ));
                }
            }
            TargetLaw::Mixture {
                weights,
                components,
            } => {
                if components.is_empty() {
                    out.push(format!("{path}.components: mixture has no components"));
                }
                if weights.len() != components.len() {
                    out.push(format!(
                        "{path}.weights: {} weights for {} components",
                        weights.len(),
                        components.len()
                    ));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    out.push(format!("{path}.weights: weights must be nonnegative"));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    out.push(format!("{path}.weights: weights sum to {total}, not 1"));
                }
                for (i, c) in components.iter().enumerate() {
                    c.collect_diagnostics(manifold, &format!("{path}.components[{i}]"), out);
                }
            }
            TargetLaw::UniformCap { cap_angle } => match *manifold {
                ManifoldSpec::Hemisphere { cap_angle: m } if m == *cap_angle => {}
                ManifoldSpec::Hemisphere { cap_angle: m } => out.push(format!(
                    "{path}.cap_angle: {cap_angle} differs from the manifold's cap angle {m}"
                )),
                _ => wrong_manifold(out, "hemisphere"),
            },
        }
    }

    /// Notes about parameters adjusted before use (non-unit vMF means).
    pub fn normalization_notes(&self, path: &str) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            TargetLaw::VonMisesFisher { mean, .. } => {
                let n = norm(mean);
                if n > 0.0 && (n - 1.0).abs() > 1e-12 {
                    out.push(format!(
                        "{path}.mean: {mean:?} has norm {n}; normalised to {:?}",
                        mean.map(|v| v / n)
                    ));
                }
            }
            TargetLaw::Mixture { components, .. } => {
                for (i, c) in components.iter().enumerate() {
                    out.extend(c.normalization_notes(&format!("{path}.components[{i}]")));
                }
            }
            _ => {}
        }
        out
    }
}

/// Normalising constant `C(kappa) = kappa / (4 pi sinh kappa)` on the log scale.
pub fn vmf_log_normalizer(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return -(4.0 * PI).ln();
    }
    // ln sinh k = k + ln(1 - e^{-2k}) - ln 2
    let ln_sinh = kappa + (-(-2.0 * kappa).exp()).ln_1p() - std::f64::consts::LN_2;
    kappa.ln() - (4.0 * PI).ln() - ln_sinh
}

/// Von Mises-Fisher density on the unit sphere. `mean` must be a unit vector.
pub fn vmf_density(x: &AmbientPoint, mean: &AmbientPoint, kappa: f64) -> Result<f64> {
    ManifoldSpec::Sphere.check_on_manifold(x)?;
    if (norm(mean) - 1.0).abs() > 1e-9 {
        return Err(Error::domain("vMF mean must be a unit vector"));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::domain(format!("vMF concentration must be nonnegative, got {kappa}")));
    }
    Ok((vmf_log_normalizer(kappa) + kappa * dot(mean, x)).exp())
}

/// Exponent of the sine-model integrand at centred angles `d = theta - mu`.
#[inline]
fn mvm_exponent(d: [f64; 2], kappa: [f64; 2], coupling: f64) -> f64 {
    let (s0, c0) = d[0].sin_cos();
    let (s1, c1) = d[1].sin_cos();
    // s^T Delta s / 2 with zero diagonal
    kappa[0] * c0 + kappa[1] * c1 + coupling * s0 * s1
}

fn mvm_log_trapezoid(kappa: [f64; 2], coupling: f64, n: usize) -> f64 {
    let step = TAU / n as f64;
    let shift = kappa[0] + kappa[1] + coupling.abs();
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let t0 = i as f64 * step;
            let mut row = 0.0;
            for j in 0..n {
                row += (mvm_exponent([t0, j as f64 * step], kappa, coupling) - shift).exp();
            }
            row
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    shift + (sum * step * step).ln()
}

/// `ln Z(kappa, Delta)` by the periodic trapezoidal rule, doubling the
/// per-angle resolution from `resolution` until the relative change drops
/// below [`MVM_TOLERANCE`].
pub fn mvm_log_normalizer(kappa: [f64; 2], coupling: f64, resolution: usize) -> Result<f64> {
    if !kappa.iter().all(|k| k.is_finite() && *k >= 0.0) || !coupling.is_finite() {
        return Err(Error::domain("sine-model parameters must be finite with kappa >= 0"));
    }
    let mut n = resolution.max(MVM_MIN_RESOLUTION);
    let mut prev = mvm_log_trapezoid(kappa, coupling, n);
    let mut change = f64::INFINITY;
    while n * 2 <= MVM_MAX_RESOLUTION {
        n *= 2;
        let next = mvm_log_trapezoid(kappa, coupling, n);
        // relative change of Z, not of ln Z
        change = (next - prev).exp_m1().abs();
        if change < MVM_TOLERANCE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        resolution: n,
        change,
    })
}

pub fn mvm_normalizer(kappa: [f64; 2], coupling: f64, resolution: usize) -> Result<f64> {
    Ok(mvm_log_normalizer(kappa, coupling, resolution)?.exp())
}

/// Sine-model density in angle coordinates, given `ln Z`.
pub fn mvm_density(theta: [f64; 2], mean: [f64; 2], kappa: [f64; 2], coupling: f64, log_z: f64) -> f64 {
    let d = [theta[0] - mean[0], theta[1] - mean[1]];
    (mvm_exponent(d, kappa, coupling) - log_z).exp()
}

fn wishart_log_constant(scale: &Spd2, dof: u32) -> f64 {
    let m = dof as f64;
    // 2^m det(Sigma)^{m/2} Gamma_2(m/2), Gamma_2(u) = sqrt(pi) Gamma(u) Gamma(u - 1/2)
    m * std::f64::consts::LN_2
        + 0.5 * m * scale.det().ln()
        + 0.5 * PI.ln()
        + ln_gamma(0.5 * m)
        + ln_gamma(0.5 * m - 0.5)
}

fn wishart_eval(s: [f64; 3], sigma_inv: &Spd2, dof: u32, log_const: f64) -> Result<f64> {
    let [a, b, c] = s;
    if !s.iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite matrix entry"));
    }
    let det = a * c - b * b;
    if det < 0.0 || a < 0.0 || c < 0.0 {
        return Err(Error::domain(format!("{s:?} is not positive semidefinite")));
    }
    if det == 0.0 {
        return Ok(0.0);
    }
    // tr(Sigma^{-1} S)
    let tr = sigma_inv.a * a + 2.0 * sigma_inv.b * b + sigma_inv.c * c;
    let m = dof as f64;
    Ok((0.5 * (m - 3.0) * det.ln() - 0.5 * tr - log_const).exp())
}

/// Wishart `W_2(Sigma, m)` density at `S = [[a, b], [b, c]]` given as `(a, b, c)`.
pub fn wishart_density(s: [f64; 3], scale: [f64; 3], dof: u32) -> Result<f64> {
    let sigma = Spd2::from_coords(scale)?;
    if dof < 2 {
        return Err(Error::domain(format!("need m > 1 degrees of freedom, got {dof}")));
    }
    wishart_eval(s, &sigma.inverse(), dof, wishart_log_constant(&sigma, dof))
}

#[derive(Debug, Clone)]
enum Compiled {
    Wishart {
        sigma_inv: Spd2,
        dof: u32,
        log_const: f64,
    },
    Mvm {
        mean: [f64; 2],
        kappa: [f64; 2],
        coupling: f64,
        log_z: f64,
    },
    Vmf {
        mean: AmbientPoint,
        kappa: f64,
        log_c: f64,
    },
    Mixture(Vec<(f64, Compiled)>),
    UniformCap {
        value: f64,
    },
}

impl Compiled {
    fn new(law: &TargetLaw) -> Result<Self> {
        Ok(match law {
            TargetLaw::Wishart { scale, dof } => {
                let sigma = Spd2::from_coords(*scale)?;
                Compiled::Wishart {
                    sigma_inv: sigma.inverse(),
                    dof: *dof,
                    log_const: wishart_log_constant(&sigma, *dof),
                }
            }
            TargetLaw::MultivariateVonMises {
                mean,
                concentration,
                coupling,
            } => Compiled::Mvm {
                mean: *mean,
                kappa: *concentration,
                coupling: *coupling,
                log_z: mvm_log_normalizer(*concentration, *coupling, MVM_MIN_RESOLUTION)?,
            },
            TargetLaw::VonMisesFisher {
                mean,
                concentration,
            } => Compiled::Vmf {
                mean: crate::geometry::normalize(mean)?,
                kappa: *concentration,
                log_c: vmf_log_normalizer(*concentration),
            },
            TargetLaw::Mixture {
                weights,
                components,
            } => Compiled::Mixture(
                weights
                    .iter()
                    .zip(components)
                    .map(|(w, c)| Ok((*w, Compiled::new(c)?)))
                    .collect::<Result<_>>()?,
            ),
            TargetLaw::UniformCap { cap_angle } => Compiled::UniformCap {
                value: 1.0 / (TAU * (1.0 - cap_angle.cos())),
            },
        })
    }

    fn eval(&self, x: &AmbientPoint, manifold: &ManifoldSpec) -> Result<f64> {
        match self {
            Compiled::Wishart {
                sigma_inv,
                dof,
                log_const,
            } => wishart_eval(*x, sigma_inv, *dof, *log_const),
            Compiled::Mvm {
                mean,
                kappa,
                coupling,
                log_z,
            } => {
                let ManifoldSpec::Torus {
                    major_radius,
                    minor_radius,
                } = *manifold
                else {
                    return Err(Error::domain("sine-model law needs a torus"));
                };
                let u = manifold.intrinsic_coords(x);
                let jacobian = minor_radius * (major_radius + minor_radius * u[1].cos());
                Ok(mvm_density([u[0], u[1]], *mean, *kappa, *coupling, *log_z) / jacobian)
            }
            Compiled::Vmf { mean, kappa, log_c } => {
                Ok((log_c + kappa * dot(mean, x) / norm(x)).exp())
            }
            Compiled::Mixture(parts) => {
                let mut total = 0.0;
                for (w, c) in parts {
                    total += w * c.eval(x, manifold)?;
                }
                Ok(total)
            }
            Compiled::UniformCap { value } => Ok(*value),
        }
    }
}

/// A validated law bound to its manifold, with normalising constants cached.
#[derive(Debug, Clone)]
pub struct TargetDensity {
    law: TargetLaw,
    manifold: ManifoldSpec,
    compiled: Compiled,
}

impl TargetDensity {
    pub fn new(law: &TargetLaw, manifold: &ManifoldSpec) -> Result<Self> {
        manifold.validate()?;
        let problems = law.diagnostics(manifold, "law");
        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }
        Ok(TargetDensity {
            law: law.clone(),
            manifold: *manifold,
            compiled: Compiled::new(law)?,
        })
    }

    pub fn law(&self) -> &TargetLaw {
        &self.law
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    /// Density at an on-manifold point.
    pub fn pdf(&self, x: &AmbientPoint) -> Result<f64> {
        self.manifold.check_on_manifold(x)?;
        self.compiled.eval(x, &self.manifold)
    }

    /// The density on every grid point.
    pub fn field(&self, grid: &EvaluationGrid) -> Result<DensityField> {
        if grid.manifold() != &self.manifold {
            return Err(Error::GridMismatch);
        }
        let values = grid
            .points()
            .par_iter()
            .map(|x| self.compiled.eval(x, &self.manifold))
            .collect::<Result<Vec<_>>>()?;
        DensityField::truth(grid, values)
    }
}

/// Grid points where the field is at least `level`. May be empty.
pub fn true_level_set(field: &DensityField, level: f64) -> Result<GridSubset> {
    crate::setops::level_set(field, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GridSpec;

    fn symmetric_mixture() -> TargetLaw {
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

    #[test]
    fn vmf_values() {
        let mu = [0.0, 0.0, 1.0];
        let u = vmf_density(&[1.0, 0.0, 0.0], &mu, 0.0).unwrap();
        assert!((u - 1.0 / (4.0 * PI)).abs() < 1e-15);
        let at_mean = vmf_density(&mu, &mu, 1.0).unwrap();
        let expected = 1f64.exp() / (4.0 * PI * 1f64.sinh());
        assert!((at_mean - expected).abs() < 1e-14);
        assert!((at_mean - 0.184065).abs() < 1e-6);
        let perp = vmf_density(&[1.0, 0.0, 0.0], &mu, 40.0).unwrap();
        let expected = 40.0 / (4.0 * PI * 40f64.sinh());
        assert!((perp / expected - 1.0).abs() < 1e-12);
        assert!(vmf_density(&[2.0, 0.0, 0.0], &mu, 1.0).is_err());
    }

    #[test]
    fn vmf_integrates_to_one() {
        let g = EvaluationGrid::build(&ManifoldSpec::Sphere, &GridSpec::Lattice { resolution: [256, 256] })
            .unwrap();
        for law in [
            TargetLaw::VonMisesFisher {
                mean: [0.3, -0.2, 0.9],
                concentration: 1.0,
            },
            symmetric_mixture(),
        ] {
            let t = TargetDensity::new(&law, &ManifoldSpec::Sphere).unwrap();
            let mass = t.field(&g).unwrap().mass(&g).unwrap();
            assert!((mass - 1.0).abs() < 5e-3, "{mass}");
        }
    }

    #[test]
    fn mixture_symmetry_and_contrast() {
        let t = TargetDensity::new(&symmetric_mixture(), &ManifoldSpec::Sphere).unwrap();
        let c = TargetDensity::new(
            &TargetLaw::VonMisesFisher {
                mean: [-1.0, 0.25, 0.0],
                concentration: 40.0,
            },
            &ManifoldSpec::Sphere,
        )
        .unwrap();
        let x = [-0.6, 0.0, 0.8];
        assert!((t.pdf(&x).unwrap() - c.pdf(&x).unwrap()).abs() < 1e-15);
        let n = (1.0f64 + 1.0 / 16.0).sqrt();
        let peak = t.pdf(&[-1.0 / n, -0.25 / n, 0.0]).unwrap();
        let far = t.pdf(&[1.0, 0.0, 0.0]).unwrap();
        assert!(peak > 1e10 * far);
    }

    #[test]
    fn vmf_depends_only_on_inner_product() {
        let law = TargetLaw::VonMisesFisher {
            mean: [0.0, 0.0, 1.0],
            concentration: 7.0,
        };
        let t = TargetDensity::new(&law, &ManifoldSpec::Sphere).unwrap();
        let phi = 0.8f64;
        let base = t.pdf(&[phi.sin(), 0.0, phi.cos()]).unwrap();
        for k in 1..12 {
            let th = k as f64 * 0.5;
            let v = t.pdf(&[phi.sin() * th.cos(), phi.sin() * th.sin(), phi.cos()]).unwrap();
            assert!((v - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn mvm_normalizer_cases() {
        let z = mvm_normalizer([0.0, 0.0], 0.0, 128).unwrap();
        assert!((z - 4.0 * PI * PI).abs() < 1e-10);
        // independent product of Bessel integrals when uncoupled
        let z = mvm_normalizer([2.0, 3.0], 0.0, 128).unwrap();
        let i0 = |k: f64| {
            let n = 20000;
            (0..n).map(|i| (k * (TAU * i as f64 / n as f64).cos()).exp()).sum::<f64>() * TAU / n as f64
        };
        assert!((z / (i0(2.0) * i0(3.0)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mvm_density_properties() {
        let (kappa, coupling, mean) = ([20.0, 20.0], 1.0, [1.0, 2.0]);
        let log_z = mvm_log_normalizer(kappa, coupling, 128).unwrap();
        let at_mean = mvm_density(mean, mean, kappa, coupling, log_z);
        assert!((at_mean - (40.0 - log_z).exp()).abs() <= 1e-12 * at_mean);
        let th = [0.3, 5.1];
        let a = mvm_density(th, mean, kappa, coupling, log_z);
        let b = mvm_density([th[0] + TAU, th[1] + TAU], mean, kappa, coupling, log_z);
        assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn torus_truth_integrates_to_one() {
        let t = ManifoldSpec::torus(1.0, 0.5).unwrap();
        let law = TargetLaw::MultivariateVonMises {
            mean: [PI / 2.0, 0.0],
            concentration: [20.0, 20.0],
            coupling: 1.0,
        };
        let g = EvaluationGrid::build(&t, &GridSpec::Lattice { resolution: [256, 256] }).unwrap();
        let f = TargetDensity::new(&law, &t).unwrap().field(&g).unwrap();
        let mass = f.mass(&g).unwrap();
        assert!((mass - 1.0).abs() < 5e-3, "{mass}");
    }

    #[test]
    fn wishart_values() {
        let scale = [0.5, 0.0, 0.5];
        assert_eq!(wishart_density([1.0, 1.0, 1.0], scale, 10).unwrap(), 0.0);
        assert!(wishart_density([1.0, 2.0, 1.0], scale, 10).is_err());
        let p = wishart_density([5.0, 0.0, 5.0], scale, 10).unwrap();
        assert!(p > 0.0);
        // same det and trace, rotated coordinates
        let (s, c) = 0.4f64.sin_cos();
        let rot = Spd2::new(5.0, 0.0, 5.0).unwrap().congruence([[c, -s], [s, c]]);
        let q = wishart_density(rot.coords(), scale, 10).unwrap();
        assert!((p - q).abs() <= 1e-12 * p);
    }

    #[test]
    fn level_set_edge_cases() {
        let g = EvaluationGrid::build(&ManifoldSpec::Sphere, &GridSpec::Fibonacci { points: 2000 }).unwrap();
        let law = TargetLaw::VonMisesFisher {
            mean: [0.0, 1.0, 0.0],
            concentration: 40.0,
        };
        let f = TargetDensity::new(&law, &ManifoldSpec::Sphere).unwrap().field(&g).unwrap();
        assert!(true_level_set(&f, 2.0 * f.max()).unwrap().is_empty());
        assert_eq!(true_level_set(&f, 1e-300).unwrap().count(), g.len());
        let disk = true_level_set(&f, 0.8 * f.max()).unwrap();
        assert!(disk.contains(f.argmax()));
    }

    #[test]
    fn diagnostics_report_paths() {
        let bad = TargetLaw::Mixture {
            weights: vec![0.5, 0.6],
            components: vec![
                TargetLaw::VonMisesFisher {
                    mean: [0.0; 3],
                    concentration: -1.0,
                },
                TargetLaw::UniformCap { cap_angle: 1.0 },
            ],
        };
        let d = bad.diagnostics(&ManifoldSpec::Sphere, "law");
        assert!(d.iter().any(|m| m.starts_with("law.weights")));
        assert!(d.iter().any(|m| m.starts_with("law.components[0].mean")));
        assert!(d.iter().any(|m| m.starts_with("law.components[0].concentration")));
        assert!(d.iter().any(|m| m.starts_with("law.components[1]")));
        assert!(symmetric_mixture().diagnostics(&ManifoldSpec::Sphere, "law").is_empty());
        assert_eq!(symmetric_mixture().normalization_notes("law").len(), 2);
    }
}
