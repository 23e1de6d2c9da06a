//! Curvilinear ambient coordinate systems and numerical checks of the
//! ambient apparatus: covariant/contravariant bases, metrics, Kronecker
//! relations, and the vanishing covariant derivative of the metric objects.
//!
//! Everywhere else in the crate the ambient space is handled in Cartesian
//! components, where covariant and partial derivatives coincide; this module
//! exists to exercise the curvilinear machinery on its own.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::surface::{Axis, Domain, METRIC_CONDITION_LIMIT};
use crate::tensor::{Matrix, Vector};

type MapFn = dyn Fn(&[f64]) -> Vector + Send + Sync;
type Jet1Fn = dyn Fn(&[f64]) -> [Vector; 3] + Send + Sync;

/// A three-dimensional curvilinear chart: coordinates Z ↦ Cartesian position,
/// with an analytic first-derivative jet. Domains stay clear of coordinate
/// singularities (axes, poles) by a 1e−3 margin.
#[derive(Clone)]
pub struct AmbientChart {
    name: String,
    map: Arc<MapFn>,
    jet1: Arc<Jet1Fn>,
    domain: Domain,
}

/// Basis, metric and Christoffel data of a chart at one point.
#[derive(Clone, Debug)]
pub struct AmbientFrame {
    /// Covariant basis Z_i = ∂R/∂Zⁱ.
    pub basis: [Vector; 3],
    /// Contravariant basis Zⁱ with Zⁱ · Z_j = δⁱ_j.
    pub dual_basis: [Vector; 3],
    /// Covariant metric Z_ij.
    pub metric: Matrix,
    /// Contravariant metric Z^{ij}.
    pub metric_inv: Matrix,
    /// Christoffel symbols Γᵏ_{ij}; entry `[k]` is the matrix over (i, j).
    pub christoffel: [Matrix; 3],
}

/// Residuals of the metrinilic property at one point, both at the level of
/// finite-difference truncation.
#[derive(Clone, Copy, Debug)]
pub struct MetrinilicResidual {
    /// max |∂_k Z_ij − Γᵐ_{ki} Z_mj − Γᵐ_{kj} Z_im|
    pub metric: f64,
    /// max Cartesian component of |∂_k Z_i − Γᵐ_{ki} Z_m|
    pub basis: f64,
}

impl AmbientChart {
    pub fn new(
        name: impl Into<String>,
        map: Arc<MapFn>,
        jet1: Arc<Jet1Fn>,
        domain: Domain,
    ) -> Self {
        Self { name: name.into(), map, jet1, domain }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        3
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn position(&self, z: &[f64]) -> Result<Vector> {
        self.check_domain(z)?;
        Ok((self.map)(z))
    }

    fn check_domain(&self, z: &[f64]) -> Result<()> {
        if !self.domain.contains(z) {
            return Err(GeomError::OutsideDomain { name: self.name.clone(), point: z.to_vec() });
        }
        Ok(())
    }

    fn basis_unchecked(&self, z: &[f64]) -> [Vector; 3] {
        (self.jet1)(z)
    }

    fn metric_from_basis(basis: &[Vector; 3]) -> Matrix {
        let mut metric = Matrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                metric[(i, j)] = basis[i].dot(&basis[j]);
            }
        }
        metric
    }

    /// Central finite difference of the covariant basis along coordinate k.
    fn fd_basis_derivative(&self, z: &[f64], k: usize, h: f64) -> [Vector; 3] {
        let mut plus = z.to_vec();
        plus[k] += h;
        let mut minus = z.to_vec();
        minus[k] -= h;
        let (bp, bm) = (self.basis_unchecked(&plus), self.basis_unchecked(&minus));
        let mut out = [Vector::zeros(3); 3];
        for i in 0..3 {
            out[i] = (bp[i] - bm[i]) * (1.0 / (2.0 * h));
        }
        out
    }

    /// Full frame at a point: bases, metrics, and Christoffel symbols
    /// Γᵏ_{ij} = Zᵏ · ∂Z_i/∂Zʲ, the partial taken by central finite
    /// difference of the analytic first jet.
    pub fn frame_at(&self, z: &[f64], fd_step: f64) -> Result<AmbientFrame> {
        self.check_domain(z)?;
        let basis = self.basis_unchecked(z);
        for v in &basis {
            if !v.is_finite() {
                return Err(GeomError::NonFinite(format!("chart '{}' basis at {z:?}", self.name)));
            }
        }
        let metric = Self::metric_from_basis(&basis);
        let condition = metric.condition_estimate();
        let det = metric.det();
        if det <= 0.0 || det.is_nan() || condition > METRIC_CONDITION_LIMIT {
            return Err(GeomError::SingularMetric { point: z.to_vec(), condition });
        }
        let metric_inv = metric.inverse()?;
        let mut dual_basis = [Vector::zeros(3); 3];
        for i in 0..3 {
            let mut v = Vector::zeros(3);
            for j in 0..3 {
                v = v + basis[j] * metric_inv[(i, j)];
            }
            dual_basis[i] = v;
        }
        let mut christoffel = [Matrix::zeros(3); 3];
        for j in 0..3 {
            let db = self.fd_basis_derivative(z, j, fd_step);
            for k in 0..3 {
                for i in 0..3 {
                    christoffel[k][(i, j)] = dual_basis[k].dot(&db[i]);
                }
            }
        }
        Ok(AmbientFrame { basis, dual_basis, metric, metric_inv, christoffel })
    }

    /// Christoffel symbols by the independent metric-derivative route
    /// Γᵏ_{ij} = ½ Z^{km} (∂_i Z_mj + ∂_j Z_im − ∂_m Z_ij), all metric
    /// partials by central finite difference.
    fn christoffel_from_metric(&self, z: &[f64], h: f64) -> Result<[Matrix; 3]> {
        let metric_at = |p: &[f64]| Self::metric_from_basis(&self.basis_unchecked(p));
        let mut partials = [Matrix::zeros(3); 3];
        for (k, slot) in partials.iter_mut().enumerate() {
            let mut plus = z.to_vec();
            plus[k] += h;
            let mut minus = z.to_vec();
            minus[k] -= h;
            let (mp, mm) = (metric_at(&plus), metric_at(&minus));
            for i in 0..3 {
                for j in 0..3 {
                    (*slot)[(i, j)] = (mp[(i, j)] - mm[(i, j)]) / (2.0 * h);
                }
            }
        }
        let metric_inv = Self::metric_from_basis(&self.basis_unchecked(z)).inverse()?;
        let mut gamma = [Matrix::zeros(3); 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for m in 0..3 {
                        acc += 0.5
                            * metric_inv[(k, m)]
                            * (partials[i][(m, j)] + partials[j][(i, m)] - partials[m][(i, j)]);
                    }
                    gamma[k][(i, j)] = acc;
                }
            }
        }
        Ok(gamma)
    }

    /// Residuals of ∇_k Z_ij = 0 and ∇_k Z_i = 0.
    ///
    /// Each residual pits two independent numerical routes against each
    /// other: the metric residual uses the projection-route Christoffels of
    /// [`AmbientChart::frame_at`] against finite differences of the metric,
    /// while the basis residual uses metric-route Christoffels against
    /// finite differences of the basis. (Pairing each side with its own
    /// route would cancel algebraically and measure nothing but roundoff.)
    pub fn metrinilic_residual(&self, z: &[f64], fd_step: f64) -> Result<MetrinilicResidual> {
        let frame = self.frame_at(z, fd_step)?;
        let gamma_metric = self.christoffel_from_metric(z, fd_step)?;
        let metric_at = |p: &[f64]| Self::metric_from_basis(&self.basis_unchecked(p));

        let mut metric_residual: f64 = 0.0;
        for k in 0..3 {
            let mut plus = z.to_vec();
            plus[k] += fd_step;
            let mut minus = z.to_vec();
            minus[k] -= fd_step;
            let (mp, mm) = (metric_at(&plus), metric_at(&minus));
            for i in 0..3 {
                for j in 0..3 {
                    let partial = (mp[(i, j)] - mm[(i, j)]) / (2.0 * fd_step);
                    let mut connection = 0.0;
                    for m in 0..3 {
                        connection += frame.christoffel[m][(i, k)] * frame.metric[(m, j)];
                        connection += frame.christoffel[m][(j, k)] * frame.metric[(i, m)];
                    }
                    metric_residual = metric_residual.max((partial - connection).abs());
                }
            }
        }

        let mut basis_residual: f64 = 0.0;
        for k in 0..3 {
            let db = self.fd_basis_derivative(z, k, fd_step);
            for i in 0..3 {
                let mut predicted = Vector::zeros(3);
                for m in 0..3 {
                    predicted = predicted + frame.basis[m] * gamma_metric[m][(i, k)];
                }
                basis_residual = basis_residual.max((db[i] - predicted).norm_inf());
            }
        }

        Ok(MetrinilicResidual { metric: metric_residual, basis: basis_residual })
    }
}

/// Cartesian chart: the identity map, with vanishing Christoffel symbols.
pub fn cartesian() -> AmbientChart {
    let map: Arc<MapFn> = Arc::new(|z: &[f64]| Vector::new3(z[0], z[1], z[2]));
    let jet1: Arc<Jet1Fn> = Arc::new(|_z: &[f64]| {
        [Vector::basis(3, 0), Vector::basis(3, 1), Vector::basis(3, 2)]
    });
    let domain = Domain::new(vec![
        Axis::new(-1e6, 1e6, false),
        Axis::new(-1e6, 1e6, false),
        Axis::new(-1e6, 1e6, false),
    ]);
    AmbientChart::new("cartesian", map, jet1, domain)
}

/// Spherical chart (r, θ, φ) with metric diag(1, r², r² sin²θ).
pub fn spherical() -> AmbientChart {
    let map: Arc<MapFn> = Arc::new(|z: &[f64]| {
        let (r, theta, phi) = (z[0], z[1], z[2]);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vector::new3(r * st * cp, r * st * sp, r * ct)
    });
    let jet1: Arc<Jet1Fn> = Arc::new(|z: &[f64]| {
        let (r, theta, phi) = (z[0], z[1], z[2]);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        [
            Vector::new3(st * cp, st * sp, ct),
            Vector::new3(r * ct * cp, r * ct * sp, -r * st),
            Vector::new3(-r * st * sp, r * st * cp, 0.0),
        ]
    });
    let margin = 1e-3;
    let domain = Domain::new(vec![
        Axis::new(margin, 100.0, false),
        Axis::new(margin, PI - margin, false),
        Axis::new(0.0, 2.0 * PI, true),
    ]);
    AmbientChart::new("spherical", map, jet1, domain)
}

/// Cylindrical chart (ρ, φ, z) with metric diag(1, ρ², 1).
pub fn cylindrical() -> AmbientChart {
    let map: Arc<MapFn> = Arc::new(|z: &[f64]| {
        let (rho, phi, height) = (z[0], z[1], z[2]);
        let (sp, cp) = phi.sin_cos();
        Vector::new3(rho * cp, rho * sp, height)
    });
    let jet1: Arc<Jet1Fn> = Arc::new(|z: &[f64]| {
        let (rho, phi) = (z[0], z[1]);
        let (sp, cp) = phi.sin_cos();
        [
            Vector::new3(cp, sp, 0.0),
            Vector::new3(-rho * sp, rho * cp, 0.0),
            Vector::new3(0.0, 0.0, 1.0),
        ]
    });
    let margin = 1e-3;
    let domain = Domain::new(vec![
        Axis::new(margin, 100.0, false),
        Axis::new(0.0, 2.0 * PI, true),
        Axis::new(-100.0, 100.0, false),
    ]);
    AmbientChart::new("cylindrical", map, jet1, domain)
}

/// The built-in charts.
pub fn builtin_charts() -> Vec<AmbientChart> {
    vec![cartesian(), spherical(), cylindrical()]
}

/// Chart by name, for the CLI.
pub fn chart_by_name(name: &str) -> Result<AmbientChart> {
    match name {
        "cartesian" => Ok(cartesian()),
        "spherical" => Ok(spherical()),
        "cylindrical" => Ok(cylindrical()),
        other => Err(GeomError::InvalidParameter(format!(
            "unknown chart '{other}'; valid charts: cartesian, spherical, cylindrical"
        ))),
    }
}

/// A random point comfortably inside a chart domain, with room for FD
/// stencils.
pub fn random_chart_point(chart: &AmbientChart, rng: &mut impl rand::Rng) -> Vec<f64> {
    (0..3)
        .map(|i| {
            let axis = chart.domain().axis(i);
            // Stay well inside the box; the built-in domains are generous.
            let (lo, hi) = if axis.periodic {
                (axis.start, axis.end)
            } else if axis.span() > 50.0 {
                (axis.start.max(-8.0) + 0.5, axis.end.min(8.0) - 0.5)
            } else {
                let pad = 0.05 * axis.span();
                (axis.start + pad, axis.end - pad)
            };
            rng.gen_range(lo..hi)
        })
        .collect()
}
