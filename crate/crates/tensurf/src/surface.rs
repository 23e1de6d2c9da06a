//! Pointwise geometry of an embedded parametric hypersurface: bases, metric,
//! unit normal, curvature tensor and invariants, plus residuals of the
//! Weingarten, Codazzi and Gauss equations.
//!
//! Surfaces supply analytic jets to order 2 (position, first and second
//! parameter derivatives, all in Cartesian ambient components). Third-order
//! data needed by the Codazzi check comes from central finite differences of
//! the computed curvature field.

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::tensor::{
    delta_system, det2_via_delta, generalized_cross, raise_first_index, Matrix,
    PermutationSymbols, Vector, MAX_SURFACE_DIM,
};

/// Condition-number ceiling beyond which a metric is declared singular.
pub const METRIC_CONDITION_LIMIT: f64 = 1e12;

/// Default margin (in parameter units) that keeps sampling away from
/// parametrization degeneracies such as sphere poles.
pub const DEGENERACY_MARGIN: f64 = 1e-3;

/// Default step for finite differences of analytic fields (normal field,
/// chart bases).
pub const FD_STEP_ANALYTIC: f64 = 1e-5;

/// Default step for finite differences of computed fields (the curvature
/// tensor in the Codazzi check).
pub const FD_STEP_COMPUTED: f64 = 1e-4;

/// One parameter axis of a surface domain.
#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn new(start: f64, end: f64, periodic: bool) -> Self {
        Self { start, end, periodic }
    }

    pub fn span(&self) -> f64 {
        self.end - self.start
    }
}

/// Parameter rectangle with per-axis periodicity flags.
#[derive(Clone, Debug)]
pub struct Domain {
    axes: Vec<Axis>,
}

impl Domain {
    pub fn new(axes: Vec<Axis>) -> Self {
        assert!(!axes.is_empty() && axes.len() <= MAX_SURFACE_DIM);
        Self { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    /// True when `point` lies inside the rectangle. Periodic axes accept any
    /// value; non-periodic axes allow a tiny tolerance at the ends.
    pub fn contains(&self, point: &[f64]) -> bool {
        if point.len() != self.axes.len() {
            return false;
        }
        self.axes.iter().zip(point).all(|(axis, &x)| {
            if axis.periodic {
                x.is_finite()
            } else {
                let tol = 1e-12 * axis.span().abs().max(1.0);
                x >= axis.start - tol && x <= axis.end + tol
            }
        })
    }
}

/// Position and derivatives of the embedding map at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct Jet2 {
    pub position: Vector,
    /// First parameter derivatives ∂R/∂uᵅ, α < d.
    pub first: [Vector; MAX_SURFACE_DIM],
    /// Second parameter derivatives ∂²R/∂uᵅ∂uᵝ, symmetric in (α, β).
    pub second: [[Vector; MAX_SURFACE_DIM]; MAX_SURFACE_DIM],
}

impl Jet2 {
    pub fn zeros(ambient_dim: usize) -> Self {
        let z = Vector::zeros(ambient_dim);
        Self { position: z, first: [z; MAX_SURFACE_DIM], second: [[z; MAX_SURFACE_DIM]; MAX_SURFACE_DIM] }
    }
}

/// Shared jet evaluator of a surface: parameter point ↦ order-2 jet.
pub type SurfaceJets = Arc<dyn Fn(&[f64]) -> Jet2 + Send + Sync>;

/// Analytic map from a parameter rectangle into Euclidean space with
/// derivative jets to order 2. Immutable after construction; evaluation is
/// pure and thread-safe.
#[derive(Clone)]
pub struct ParametricSurface {
    name: String,
    ambient_dim: usize,
    domain: Domain,
    closed: bool,
    volume_hint: Option<f64>,
    area_hint: Option<f64>,
    jets: SurfaceJets,
    orientation: f64,
}

impl std::fmt::Debug for ParametricSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametricSurface")
            .field("name", &self.name)
            .field("ambient_dim", &self.ambient_dim)
            .field("closed", &self.closed)
            .finish()
    }
}

impl ParametricSurface {
    /// Builds a surface from its jet evaluator.
    ///
    /// For closed surfaces the normal orientation is fixed to be exterior:
    /// the sign of the raw cross-product normal is probed at the point
    /// farthest from the surface centroid, where outward and away-from-
    /// centroid provably agree, and that single sign is applied globally
    /// (the parametrization is continuous, so the raw normal cannot change
    /// sides). Patches keep the orientation the authored jet order defines.
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        domain: Domain,
        closed: bool,
        jets: SurfaceJets,
    ) -> Result<Self> {
        let name = name.into();
        if !(3..=4).contains(&ambient_dim) {
            return Err(GeomError::InvalidParameter(format!(
                "ambient dimension {ambient_dim} not supported (expected 3 or 4)"
            )));
        }
        if domain.dim() != ambient_dim - 1 {
            return Err(GeomError::DimensionMismatch(format!(
                "surface '{name}': domain dimension {} with ambient dimension {ambient_dim}",
                domain.dim()
            )));
        }
        let mut surface = Self {
            name,
            ambient_dim,
            domain,
            closed,
            volume_hint: None,
            area_hint: None,
            jets,
            orientation: 1.0,
        };
        if closed {
            surface.orientation = surface.exterior_orientation_sign()?;
        }
        Ok(surface)
    }

    pub fn with_volume_hint(mut self, volume: f64) -> Self {
        self.volume_hint = Some(volume);
        self
    }

    pub fn with_area_hint(mut self, area: f64) -> Self {
        self.area_hint = Some(area);
        self
    }

    /// Drops the analytic volume so that [`crate::quadrature::enclosed_volume`]
    /// falls back to the Monte Carlo estimator.
    pub fn without_volume_hint(mut self) -> Self {
        self.volume_hint = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn param_dim(&self) -> usize {
        self.ambient_dim - 1
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn volume_hint(&self) -> Option<f64> {
        self.volume_hint
    }

    pub fn area_hint(&self) -> Option<f64> {
        self.area_hint
    }

    /// The surface translated by a constant ambient vector. Jets are
    /// unchanged, so the geometry (metric, curvatures, normal) is identical;
    /// only the position field moves.
    pub fn translated(&self, shift: Vector) -> Result<ParametricSurface> {
        if shift.dim() != self.ambient_dim {
            return Err(GeomError::DimensionMismatch(format!(
                "translation vector of dimension {} for surface in dimension {}",
                shift.dim(),
                self.ambient_dim
            )));
        }
        let inner = Arc::clone(&self.jets);
        let jets: SurfaceJets = Arc::new(move |p: &[f64]| {
            let mut jet = inner(p);
            jet.position = jet.position + shift;
            jet
        });
        Ok(ParametricSurface {
            name: format!("{}+shift", self.name),
            jets,
            // Translation preserves orientation; keep the computed sign.
            ..self.clone()
        })
    }

    /// Raw jet evaluation without a domain check; used internally for finite
    /// difference stencils that may step marginally outside the rectangle.
    pub(crate) fn jet_unchecked(&self, point: &[f64]) -> Jet2 {
        (self.jets)(point)
    }

    pub fn jet2(&self, point: &[f64]) -> Result<Jet2> {
        if !self.domain.contains(point) {
            return Err(GeomError::OutsideDomain { name: self.name.clone(), point: point.to_vec() });
        }
        Ok(self.jet_unchecked(point))
    }

    fn exterior_orientation_sign(&self) -> Result<f64> {
        let d = self.param_dim();
        let probe = 17usize;
        let mut points = Vec::new();
        let mut centroid = Vector::zeros(self.ambient_dim);
        let mut index = vec![0usize; d];
        loop {
            let p: Vec<f64> = (0..d)
                .map(|i| {
                    let axis = self.domain.axis(i);
                    let frac = (index[i] as f64 + 0.5) / probe as f64;
                    axis.start + frac * axis.span()
                })
                .collect();
            let jet = self.jet_unchecked(&p);
            centroid = centroid + jet.position;
            points.push((p, jet.position));
            let mut carry = true;
            for slot in index.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot == probe {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        centroid = centroid * (1.0 / points.len() as f64);
        let farthest = points
            .iter()
            .max_by(|a, b| {
                let da = (a.1 - centroid).norm();
                let db = (b.1 - centroid).norm();
                da.partial_cmp(&db).expect("finite distances")
            })
            .expect("non-empty probe grid");
        let jet = self.jet_unchecked(&farthest.0);
        let raw = generalized_cross(&jet.first[..self.param_dim()])?;
        let outward = jet.position - centroid;
        let dot = raw.dot(&outward);
        if !(dot.is_finite() && dot.abs() > 1e-12 * raw.norm() * outward.norm()) {
            return Err(GeomError::InvalidParameter(format!(
                "cannot fix exterior orientation of '{}'",
                self.name
            )));
        }
        Ok(dot.signum())
    }

    /// Full geometric bundle at one parameter point.
    pub fn sample(&self, point: &[f64]) -> Result<GeometrySample> {
        let jet = self.jet2(point)?;
        self.sample_from_jet(point, &jet)
    }

    fn sample_from_jet(&self, point: &[f64], jet: &Jet2) -> Result<GeometrySample> {
        let d = self.param_dim();
        let n = self.ambient_dim;
        if !jet.position.is_finite() {
            return Err(GeomError::NonFinite(format!("position of '{}' at {point:?}", self.name)));
        }
        let mut metric = Matrix::zeros(d);
        for a in 0..d {
            if !jet.first[a].is_finite() {
                return Err(GeomError::NonFinite(format!(
                    "first derivatives of '{}' at {point:?}",
                    self.name
                )));
            }
            for b in 0..d {
                metric[(a, b)] = jet.first[a].dot(&jet.first[b]);
            }
        }
        let det = metric.det();
        let condition = metric.condition_estimate();
        if det <= 0.0 || det.is_nan() || condition > METRIC_CONDITION_LIMIT {
            return Err(GeomError::SingularMetric { point: point.to_vec(), condition });
        }
        let metric_inv = metric.inverse()?;
        let area_element = det.sqrt();

        let mut dual = [Vector::zeros(n); MAX_SURFACE_DIM];
        for a in 0..d {
            let mut v = Vector::zeros(n);
            for b in 0..d {
                v = v + jet.first[b] * metric_inv[(a, b)];
            }
            dual[a] = v;
        }

        let raw_normal = generalized_cross(&jet.first[..d])?;
        let normal = raw_normal.normalized()? * self.orientation;

        let mut second_form = Matrix::zeros(d);
        for a in 0..d {
            for b in 0..d {
                second_form[(a, b)] = normal.dot(&jet.second[a][b]);
            }
        }
        let shape_operator = raise_first_index(&second_form, &metric_inv)?;
        let mean_curvature = shape_operator.trace();
        let gaussian_curvature =
            if d == 2 { Some(det2_via_delta(&shape_operator)?) } else { None };
        let scalar_curvature =
            mean_curvature * mean_curvature - shape_operator.matmul(&shape_operator).trace();

        Ok(GeometrySample {
            point: point.to_vec(),
            position: jet.position,
            basis: jet.first,
            dual_basis: dual,
            metric,
            metric_inv,
            area_element,
            normal,
            second_form,
            shape_operator,
            mean_curvature,
            gaussian_curvature,
            scalar_curvature,
            param_dim: d,
            ambient_dim: n,
        })
    }

    /// Surface Christoffel symbols Γᵞ_{αβ} = Sᵞ · ∂²R/∂uᵅ∂uᵝ, exactly
    /// symmetric in α, β because the authored second jet is. Entry `[g]`
    /// holds the d×d matrix for upper index γ = g.
    pub fn christoffel_symbols(&self, point: &[f64]) -> Result<[Matrix; MAX_SURFACE_DIM]> {
        let sample = self.sample(point)?;
        let jet = self.jet_unchecked(point);
        let d = self.param_dim();
        let mut gamma = [Matrix::zeros(d.max(1)); MAX_SURFACE_DIM];
        for g in 0..d {
            let mut m = Matrix::zeros(d);
            for a in 0..d {
                for b in 0..d {
                    m[(a, b)] = sample.dual_basis[g].dot(&jet.second[a][b]);
                }
            }
            gamma[g] = m;
        }
        Ok(gamma)
    }

    /// Residual of the Weingarten equation: max Cartesian component of
    /// ∂ᵅN + Bᵅᵝ S_β, with ∂ᵅN a central finite difference of the normal
    /// field in ambient Cartesian components.
    pub fn weingarten_residual(&self, point: &[f64], fd_step: f64) -> Result<f64> {
        let sample = self.sample(point)?;
        let d = self.param_dim();
        let mut residual: f64 = 0.0;
        for a in 0..d {
            let dn = self.fd_normal_derivative(point, a, fd_step)?;
            let mut predicted = Vector::zeros(self.ambient_dim);
            for b in 0..d {
                // B_α^β = B^β_α by symmetry of the raised tensor.
                predicted = predicted + sample.basis[b] * sample.shape_operator[(b, a)];
            }
            residual = residual.max((dn + predicted).norm_inf());
        }
        Ok(residual)
    }

    fn fd_normal_derivative(&self, point: &[f64], axis: usize, h: f64) -> Result<Vector> {
        let eval = |offset: f64| -> Result<Vector> {
            let mut p = point.to_vec();
            p[axis] += offset;
            let jet = self.jet_unchecked(&p);
            let raw = generalized_cross(&jet.first[..self.param_dim()])?;
            Ok(raw.normalized()? * self.orientation)
        };
        Ok((eval(h)? - eval(-h)?) * (1.0 / (2.0 * h)))
    }

    fn second_form_at(&self, point: &[f64]) -> Result<Matrix> {
        let jet = self.jet_unchecked(point);
        let d = self.param_dim();
        let mut metric = Matrix::zeros(d);
        for a in 0..d {
            for b in 0..d {
                metric[(a, b)] = jet.first[a].dot(&jet.first[b]);
            }
        }
        let det = metric.det();
        if det <= 0.0 || det.is_nan() {
            return Err(GeomError::SingularMetric {
                point: point.to_vec(),
                condition: metric.condition_estimate(),
            });
        }
        let raw = generalized_cross(&jet.first[..d])?;
        let normal = raw.normalized()? * self.orientation;
        let mut second_form = Matrix::zeros(d);
        for a in 0..d {
            for b in 0..d {
                second_form[(a, b)] = normal.dot(&jet.second[a][b]);
            }
        }
        Ok(second_form)
    }

    /// Residual of the Codazzi equations: max over index triples of
    /// |∇_α B_βγ − ∇_β B_αγ|, with ∂_α B_βγ from central finite differences
    /// of the curvature field and exact Christoffel symbols.
    pub fn codazzi_residual(&self, point: &[f64], fd_step: f64, richardson: bool) -> Result<f64> {
        let d = self.param_dim();
        let gamma = self.christoffel_symbols(point)?;
        let b0 = self.second_form_at(point)?;

        let fd_b = |axis: usize, h: f64| -> Result<Matrix> {
            let mut plus = point.to_vec();
            plus[axis] += h;
            let mut minus = point.to_vec();
            minus[axis] -= h;
            let bp = self.second_form_at(&plus)?;
            let bm = self.second_form_at(&minus)?;
            let mut out = Matrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    out[(i, j)] = (bp[(i, j)] - bm[(i, j)]) / (2.0 * h);
                }
            }
            Ok(out)
        };

        let mut partials = Vec::with_capacity(d);
        for axis in 0..d {
            let coarse = fd_b(axis, fd_step)?;
            let partial = if richardson {
                let fine = fd_b(axis, fd_step / 2.0)?;
                let mut out = Matrix::zeros(d);
                for i in 0..d {
                    for j in 0..d {
                        out[(i, j)] = (4.0 * fine[(i, j)] - coarse[(i, j)]) / 3.0;
                    }
                }
                out
            } else {
                coarse
            };
            partials.push(partial);
        }

        // ∇_α B_βγ = ∂_α B_βγ − Γ^μ_{αβ} B_μγ − Γ^μ_{αγ} B_βμ
        let nabla = |a: usize, b: usize, c: usize| -> f64 {
            let mut value = partials[a][(b, c)];
            for m in 0..d {
                value -= gamma[m][(a, b)] * b0[(m, c)];
                value -= gamma[m][(a, c)] * b0[(b, m)];
            }
            value
        };

        let mut residual: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    residual = residual.max((nabla(a, b, c) - nabla(b, a, c)).abs());
                }
            }
        }
        Ok(residual)
    }

    /// Residual of the Gauss equations in two dimensions: max entry of
    /// Bᵅ_γ Bᵝ_δ − Bᵅ_δ Bᵝ_γ − K δ^{αβ}_{γδ}. Analytically zero because K
    /// is the determinant of the shape operator; this certifies internal
    /// consistency of the kernels.
    pub fn gauss_residual(&self, point: &[f64]) -> Result<f64> {
        if self.param_dim() != 2 {
            return Err(GeomError::UnsupportedDimension { required: 2, actual: self.param_dim() });
        }
        let sample = self.sample(point)?;
        let b = &sample.shape_operator;
        let k = sample.gaussian_curvature.expect("d = 2 sample carries K");
        let mut residual: f64 = 0.0;
        for alpha in 0..2 {
            for beta in 0..2 {
                for gamma in 0..2 {
                    for delta in 0..2 {
                        let lhs = b[(alpha, gamma)] * b[(beta, delta)]
                            - b[(alpha, delta)] * b[(beta, gamma)];
                        let rhs = k * delta_system(alpha, beta, gamma, delta)?;
                        residual = residual.max((lhs - rhs).abs());
                    }
                }
            }
        }
        Ok(residual)
    }

    /// Regular grid of `per_axis` points per axis, clear of domain ends by
    /// `margin` (absolute, in parameter units) on non-periodic axes.
    pub fn interior_grid(&self, per_axis: usize, margin: f64) -> Vec<Vec<f64>> {
        let d = self.param_dim();
        let mut points = Vec::new();
        let mut index = vec![0usize; d];
        loop {
            let p: Vec<f64> = (0..d)
                .map(|i| {
                    let axis = self.domain.axis(i);
                    let (lo, hi) = if axis.periodic {
                        (axis.start, axis.end - axis.span() / per_axis as f64)
                    } else {
                        (axis.start + margin, axis.end - margin)
                    };
                    if per_axis == 1 {
                        0.5 * (lo + hi)
                    } else {
                        lo + (hi - lo) * index[i] as f64 / (per_axis - 1) as f64
                    }
                })
                .collect();
            points.push(p);
            let mut carry = true;
            for slot in index.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot == per_axis {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        points
    }

    /// Uniform random interior point, respecting the degeneracy margin.
    pub fn random_interior(&self, rng: &mut impl rand::Rng, margin: f64) -> Vec<f64> {
        (0..self.param_dim())
            .map(|i| {
                let axis = self.domain.axis(i);
                let (lo, hi) = if axis.periodic {
                    (axis.start, axis.end)
                } else {
                    (axis.start + margin, axis.end - margin)
                };
                rng.gen_range(lo..hi)
            })
            .collect()
    }
}

/// Per-point geometric bundle of a parametric surface.
#[derive(Clone, Debug)]
pub struct GeometrySample {
    /// Parameter point the bundle was evaluated at.
    pub point: Vec<f64>,
    /// Position R in Cartesian ambient components.
    pub position: Vector,
    /// Covariant basis S_α (first `param_dim` entries).
    pub basis: [Vector; MAX_SURFACE_DIM],
    /// Contravariant basis Sᵅ.
    pub dual_basis: [Vector; MAX_SURFACE_DIM],
    /// Covariant metric S_αβ.
    pub metric: Matrix,
    /// Contravariant metric S^{αβ}.
    pub metric_inv: Matrix,
    /// √det(S_αβ), the area element.
    pub area_element: f64,
    /// Unit normal, exterior for closed surfaces.
    pub normal: Vector,
    /// Curvature tensor B_αβ = N · ∂²R/∂uᵅ∂uᵝ.
    pub second_form: Matrix,
    /// Mixed curvature tensor Bᵅ_β (row = upper index).
    pub shape_operator: Matrix,
    /// Mean curvature H = Bᵅ_α (trace, not divided by dimension).
    pub mean_curvature: f64,
    /// Gaussian curvature K = det Bᵅ_β; only defined for d = 2.
    pub gaussian_curvature: Option<f64>,
    /// Scalar curvature R = H² − tr(B²); equals 2K for d = 2.
    pub scalar_curvature: f64,
    pub param_dim: usize,
    pub ambient_dim: usize,
}

impl GeometrySample {
    /// Levi-Civita symbols scaled with this sample's metric.
    pub fn permutation_symbols(&self) -> Result<PermutationSymbols> {
        PermutationSymbols::new(self.param_dim, self.area_element)
    }
}

/// Shared curve evaluator of a boundary segment: t ↦ (parameter point,
/// parameter-space velocity).
pub type CurvePath = Arc<dyn Fn(f64) -> (Vec<f64>, Vec<f64>) + Send + Sync>;

/// One smooth piece of a patch boundary: t ↦ parameter point with its
/// parameter-space velocity.
#[derive(Clone)]
pub struct BoundarySegment {
    pub t_start: f64,
    pub t_end: f64,
    /// Closed loop on its own (integrated with the periodic trapezoid rule).
    pub periodic: bool,
    /// Maps to a single ambient point (zero length); skipped by quadrature.
    pub degenerate: bool,
    curve: CurvePath,
}

impl BoundarySegment {
    pub fn new(t_start: f64, t_end: f64, periodic: bool, curve: CurvePath) -> Self {
        Self { t_start, t_end, periodic, degenerate: false, curve }
    }

    pub fn degenerate(mut self) -> Self {
        self.degenerate = true;
        self
    }

    pub fn at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        (self.curve)(t)
    }
}

/// Closed boundary of a surface patch, possibly in several smooth segments.
/// The traversal sense of each authored segment is normalized internally so
/// the in-surface boundary normal points out of the patch.
#[derive(Clone)]
pub struct BoundaryCurve {
    parent: ParametricSurface,
    segments: Vec<BoundarySegment>,
}

/// Frame of a boundary point: unit tangent, exterior in-surface normal,
/// its covariant surface components, and the arc-length factor.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    pub tangent: Vector,
    pub in_surface_normal: Vector,
    /// Covariant components n_α of the in-surface normal.
    pub normal_cov: [f64; MAX_SURFACE_DIM],
    pub speed: f64,
    pub sample: GeometrySample,
}

impl BoundaryCurve {
    pub fn new(parent: ParametricSurface, segments: Vec<BoundarySegment>) -> Self {
        Self { parent, segments }
    }

    pub fn parent(&self) -> &ParametricSurface {
        &self.parent
    }

    pub fn segments(&self) -> &[BoundarySegment] {
        &self.segments
    }

    /// Boundary frame at local coordinate `t` of segment `segment`.
    ///
    /// The tangent is dR/dt normalized; n_α = ε_{αβ} Tᵝ. If that normal
    /// points into the parameter domain, the traversal is reversed (both n
    /// and T flip), so the returned frame always satisfies n_α ε^{αβ} = Tᵝ
    /// with exterior n.
    pub fn frame(&self, segment: usize, t: f64) -> Result<BoundaryFrame> {
        let seg = self.segments.get(segment).ok_or_else(|| {
            GeomError::IndexOutOfRange(format!("boundary segment {segment}"))
        })?;
        let (point, velocity) = seg.at(t);
        let sample = self.parent.sample(&point)?;
        let d = sample.param_dim;
        if d != 2 {
            return Err(GeomError::UnsupportedDimension { required: 2, actual: d });
        }

        let mut dr = Vector::zeros(sample.ambient_dim);
        for a in 0..d {
            dr = dr + sample.basis[a] * velocity[a];
        }
        let speed = dr.norm();
        let scale = self
            .parent
            .domain()
            .axis(0)
            .span()
            .abs()
            .max(self.parent.domain().axis(1).span().abs());
        if speed < 1e-12 * scale.max(1.0) {
            return Err(GeomError::ZeroSpeed { segment, t });
        }
        let tangent = dr * (1.0 / speed);

        // Surface components of the tangent and the rotated covector.
        let eps = sample.permutation_symbols()?;
        let t_contra = [velocity[0] / speed, velocity[1] / speed];
        let mut n_cov = [0.0f64; MAX_SURFACE_DIM];
        for a in 0..d {
            for b in 0..d {
                n_cov[a] += eps.lower(&[a, b]) * t_contra[b];
            }
        }
        // Contravariant components, for the outward test in parameter space.
        let mut n_contra = [0.0f64; MAX_SURFACE_DIM];
        for a in 0..d {
            for b in 0..d {
                n_contra[a] += sample.metric_inv[(a, b)] * n_cov[b];
            }
        }

        let outward = self.points_outward(&point, &n_contra)?;
        let sign = if outward { 1.0 } else { -1.0 };

        let mut in_surface_normal = Vector::zeros(sample.ambient_dim);
        for a in 0..d {
            in_surface_normal = in_surface_normal + sample.dual_basis[a] * (sign * n_cov[a]);
        }
        for item in n_cov.iter_mut() {
            *item *= sign;
        }

        Ok(BoundaryFrame {
            tangent: tangent * sign,
            in_surface_normal,
            normal_cov: n_cov,
            speed,
            sample,
        })
    }

    /// Whether stepping from `point` along the parameter direction `dir`
    /// exits the (non-periodic part of the) domain rectangle.
    fn points_outward(&self, point: &[f64], dir: &[f64; MAX_SURFACE_DIM]) -> Result<bool> {
        let domain = self.parent.domain();
        let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(GeomError::NonFinite("boundary normal direction".into()));
        }
        for exp in 0..8 {
            let h = 1e-6 * 10f64.powi(exp);
            let mut decided_out = false;
            let mut decided_in = true;
            for (i, &delta) in dir.iter().take(domain.dim()).enumerate() {
                let axis = domain.axis(i);
                if axis.periodic {
                    continue;
                }
                let step = h * axis.span() * delta / norm;
                let moved = point[i] + step;
                let tol = 1e-14 * axis.span().abs().max(1.0);
                if moved > axis.end + tol || moved < axis.start - tol {
                    decided_out = true;
                }
                if (moved - point[i]).abs() > tol {
                    decided_in = false;
                }
            }
            if decided_out {
                return Ok(true);
            }
            if !decided_in {
                return Ok(false);
            }
        }
        Err(GeomError::InvalidParameter(
            "boundary normal direction has no component across the domain edge".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn plane_patch() -> ParametricSurface {
        let jets: SurfaceJets = Arc::new(|p: &[f64]| {
            let mut jet = Jet2::zeros(3);
            jet.position = Vector::new3(p[0], p[1], 0.0);
            jet.first[0] = Vector::new3(1.0, 0.0, 0.0);
            jet.first[1] = Vector::new3(0.0, 1.0, 0.0);
            jet
        });
        let domain = Domain::new(vec![Axis::new(-1.0, 1.0, false), Axis::new(-1.0, 1.0, false)]);
        ParametricSurface::new("plane", 3, domain, false, jets).unwrap()
    }

    #[test]
    fn unit_sphere_sample_closed_forms() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let s = sphere.sample(&[FRAC_PI_3, 0.7]).unwrap();
        assert!((s.mean_curvature + 2.0).abs() < 1e-12);
        assert!((s.gaussian_curvature.unwrap() - 1.0).abs() < 1e-12);
        assert!((s.scalar_curvature - 2.0).abs() < 1e-12);
        assert!((s.normal.norm() - 1.0).abs() < 1e-13);
        // Exterior normal of the unit sphere is the position itself.
        assert!((s.normal - s.position).norm_inf() < 1e-12);
        // Shape operator is −δ.
        let dev = (s.shape_operator - Matrix::identity(2) * -1.0).max_abs();
        assert!(dev < 1e-12, "shape operator deviation {dev}");
    }

    #[test]
    fn sphere_scaling_of_curvatures() {
        for radius in [0.5, 2.0] {
            let sphere = zoo::make_sphere(radius).unwrap().surface;
            let s = sphere.sample(&[1.1, 2.2]).unwrap();
            assert!((s.mean_curvature + 2.0 / radius).abs() < 1e-12);
            assert!((s.gaussian_curvature.unwrap() - 1.0 / (radius * radius)).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_scaling_of_curvatures() {
        // Scaling the whole surface by λ divides H by λ and K by λ².
        let base = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let point = [0.8, 1.9];
        let reference = base.sample(&point).unwrap();
        for lambda in [0.5, 2.0] {
            let scaled = zoo::make_torus(2.0 * lambda, 0.5 * lambda).unwrap().surface;
            let s = scaled.sample(&point).unwrap();
            assert!((s.mean_curvature - reference.mean_curvature / lambda).abs() < 1e-12);
            assert!(
                (s.gaussian_curvature.unwrap()
                    - reference.gaussian_curvature.unwrap() / (lambda * lambda))
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn hypersphere_sample() {
        let hs = zoo::make_hypersphere3(1.0).unwrap().surface;
        let s = hs.sample(&[1.0, 1.3, 0.4]).unwrap();
        assert!((s.mean_curvature + 3.0).abs() < 1e-12);
        assert!((s.scalar_curvature - 6.0).abs() < 1e-11);
        assert!(s.gaussian_curvature.is_none());
        assert!((s.normal - s.position).norm_inf() < 1e-12);
    }

    #[test]
    fn sample_invariants_on_zoo_surfaces() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let surfaces = [
            zoo::make_sphere(1.0).unwrap().surface,
            zoo::make_ellipsoid(1.0, 1.3, 0.7).unwrap().surface,
            zoo::make_torus(2.0, 0.5).unwrap().surface,
            zoo::make_catenoid(1.0, (-1.0, 1.0)).unwrap().surface,
        ];
        for surface in &surfaces {
            for _ in 0..50 {
                let p = surface.random_interior(&mut rng, DEGENERACY_MARGIN);
                let s = surface.sample(&p).unwrap();
                assert!((s.normal.norm() - 1.0).abs() < 1e-13);
                for a in 0..s.param_dim {
                    assert!(s.normal.dot(&s.basis[a]).abs() < 1e-12 * s.basis[a].norm().max(1.0));
                    for b in 0..s.param_dim {
                        let expected = if a == b { 1.0 } else { 0.0 };
                        assert!((s.dual_basis[a].dot(&s.basis[b]) - expected).abs() < 1e-12);
                    }
                }
                assert!(s.second_form.symmetry_deviation() < 1e-12);
                // Two contraction routes for H agree.
                let mut h_alt = 0.0;
                for a in 0..s.param_dim {
                    for b in 0..s.param_dim {
                        h_alt += s.metric_inv[(a, b)] * s.second_form[(a, b)];
                    }
                }
                assert!((h_alt - s.mean_curvature).abs() < 1e-12);
                // R = 2K in two dimensions.
                let k = s.gaussian_curvature.unwrap();
                assert!((s.scalar_curvature - 2.0 * k).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn christoffel_plane_and_sphere() {
        let plane = plane_patch();
        let gamma = plane.christoffel_symbols(&[0.2, -0.3]).unwrap();
        for g in 0..2 {
            assert_eq!(gamma[g].max_abs(), 0.0);
        }

        // Unit sphere: Γ^θ_{φφ} = −sinθ cosθ with coordinates (θ, φ).
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let theta = FRAC_PI_3;
        let gamma = sphere.christoffel_symbols(&[theta, 0.9]).unwrap();
        let expected = -theta.sin() * theta.cos();
        assert!((gamma[0][(1, 1)] - expected).abs() < 1e-13);
    }

    /// Independent oracle: Christoffel symbols from the metric-derivative
    /// formula Γᵞ_{αβ} = ½ S^{γμ}(∂_α S_μβ + ∂_β S_μα − ∂_μ S_αβ) with
    /// central finite differences of the metric.
    fn christoffel_from_metric_fd(
        surface: &ParametricSurface,
        point: &[f64],
        h: f64,
    ) -> [Matrix; MAX_SURFACE_DIM] {
        let d = surface.param_dim();
        let metric_at = |p: &[f64]| -> Matrix {
            let jet = surface.jet_unchecked(p);
            let mut m = Matrix::zeros(d);
            for a in 0..d {
                for b in 0..d {
                    m[(a, b)] = jet.first[a].dot(&jet.first[b]);
                }
            }
            m
        };
        let mut partials = Vec::new();
        for axis in 0..d {
            let mut plus = point.to_vec();
            plus[axis] += h;
            let mut minus = point.to_vec();
            minus[axis] -= h;
            let (mp, mm) = (metric_at(&plus), metric_at(&minus));
            let mut dm = Matrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    dm[(i, j)] = (mp[(i, j)] - mm[(i, j)]) / (2.0 * h);
                }
            }
            partials.push(dm);
        }
        let inv = metric_at(point).inverse().unwrap();
        let mut gamma = [Matrix::zeros(d); MAX_SURFACE_DIM];
        for g in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut acc = 0.0;
                    for m in 0..d {
                        acc += 0.5
                            * inv[(g, m)]
                            * (partials[a][(m, b)] + partials[b][(m, a)] - partials[m][(a, b)]);
                    }
                    gamma[g][(a, b)] = acc;
                }
            }
        }
        gamma
    }

    #[test]
    fn christoffel_matches_metric_fd_oracle_on_torus() {
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let point = [FRAC_PI_2, 1.1];
        let exact = torus.christoffel_symbols(&point).unwrap();
        let oracle = christoffel_from_metric_fd(&torus, &point, 1e-5);
        for g in 0..2 {
            let dev = (exact[g] - oracle[g]).max_abs();
            assert!(dev < 1e-8, "upper index {g}: deviation {dev}");
        }
    }

    #[test]
    fn weingarten_residuals() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let r = sphere.weingarten_residual(&[1.0, 2.0], 1e-5).unwrap();
        assert!(r < 1e-9, "sphere residual {r}");

        let plane = plane_patch();
        let r = plane.weingarten_residual(&[0.1, 0.2], 1e-5).unwrap();
        assert!(r < 1e-13, "plane residual {r}");

        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        for _ in 0..20 {
            let p = torus.random_interior(&mut rng, DEGENERACY_MARGIN);
            let r = torus.weingarten_residual(&p, 1e-5).unwrap();
            assert!(r < 1e-8, "torus residual {r} at {p:?}");
        }
    }

    #[test]
    fn codazzi_residuals() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let r = sphere.codazzi_residual(&[1.0, 2.0], 1e-4, false).unwrap();
        assert!(r < 1e-8, "sphere residual {r}");

        let plane = plane_patch();
        let r = plane.codazzi_residual(&[0.1, 0.2], 1e-4, false).unwrap();
        assert!(r < 1e-13, "plane residual {r}");

        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let ellipsoid = zoo::make_ellipsoid(1.0, 1.3, 0.7).unwrap().surface;
        for _ in 0..20 {
            let p = ellipsoid.random_interior(&mut rng, DEGENERACY_MARGIN);
            let r = ellipsoid.codazzi_residual(&p, 1e-4, false).unwrap();
            assert!(r < 1e-6, "ellipsoid residual {r} at {p:?}");
        }
    }

    #[test]
    fn residuals_converge_at_second_order() {
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let point = [0.9, 2.3];
        for (coarse, fine) in [
            (
                torus.weingarten_residual(&point, 1e-3).unwrap(),
                torus.weingarten_residual(&point, 5e-4).unwrap(),
            ),
            (
                torus.codazzi_residual(&point, 1e-3, false).unwrap(),
                torus.codazzi_residual(&point, 5e-4, false).unwrap(),
            ),
        ] {
            let order = (coarse / fine).log2();
            assert!(order >= 1.7, "observed order {order} (coarse {coarse}, fine {fine})");
        }
    }

    #[test]
    fn richardson_tightens_codazzi() {
        let ellipsoid = zoo::make_ellipsoid(1.0, 1.3, 0.7).unwrap().surface;
        let point = [1.2, 0.8];
        let plain = ellipsoid.codazzi_residual(&point, 1e-3, false).unwrap();
        let refined = ellipsoid.codazzi_residual(&point, 1e-3, true).unwrap();
        assert!(refined < plain, "richardson {refined} vs plain {plain}");
    }

    #[test]
    fn gauss_residuals() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        assert!(sphere.gauss_residual(&[0.8, 0.3]).unwrap() < 1e-14);
        for entry in [zoo::make_torus(2.0, 0.5).unwrap(), zoo::make_ellipsoid(1.0, 1.3, 0.7).unwrap()] {
            for _ in 0..20 {
                let p = entry.surface.random_interior(&mut rng, DEGENERACY_MARGIN);
                let r = entry.surface.gauss_residual(&p).unwrap();
                assert!(r < 1e-13, "{} gauss residual {r}", entry.surface.name());
            }
        }
        let hs = zoo::make_hypersphere3(1.0).unwrap().surface;
        assert!(matches!(
            hs.gauss_residual(&[1.0, 1.0, 1.0]),
            Err(GeomError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn degenerate_point_is_reported() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let err = sphere.sample(&[0.0, 0.3]).unwrap_err();
        assert!(matches!(err, GeomError::SingularMetric { .. }), "got {err:?}");
    }

    #[test]
    fn hemisphere_boundary_frame() {
        let patch = zoo::make_hemisphere(1.0).unwrap();
        let frame = patch.boundary.frame(0, 1.2).unwrap();
        // Exterior in-surface normal on the equator points along −z.
        assert!((frame.in_surface_normal - Vector::new3(0.0, 0.0, -1.0)).norm_inf() < 1e-12);
        assert!(frame.tangent.dot(&frame.in_surface_normal).abs() < 1e-12);
        assert!(frame.tangent.dot(&frame.sample.normal).abs() < 1e-12);
        assert!((frame.in_surface_normal.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_boundary_frame_is_radial() {
        let patch = zoo::make_disk(1.0).unwrap();
        for t in [0.0, 1.0, 2.5, 4.0] {
            let frame = patch.boundary.frame(0, t).unwrap();
            let radial = Vector::new3(t.cos(), t.sin(), 0.0);
            assert!((frame.in_surface_normal - radial).norm_inf() < 1e-12);
        }
    }

    #[test]
    fn boundary_tangent_reproduced_by_levi_civita_rotation() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let patch = zoo::make_spherical_cap(1.0, FRAC_PI_2 / 2.0).unwrap();
        for _ in 0..20 {
            let t = rng.gen_range(0.0..2.0 * PI);
            let frame = patch.boundary.frame(0, t).unwrap();
            // n_α ε^{αβ} must reproduce the surface components of T.
            let eps = frame.sample.permutation_symbols().unwrap();
            for b in 0..2 {
                let mut t_b = 0.0;
                for a in 0..2 {
                    t_b += frame.normal_cov[a] * eps.upper(&[a, b]);
                }
                let t_ambient_b = frame.tangent.dot(&frame.sample.dual_basis[b]);
                assert!((t_b - t_ambient_b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_speed_boundary_point_errors() {
        let patch = zoo::make_disk(1.0).unwrap();
        let stuck: CurvePath = Arc::new(|_t| (vec![1.0, 0.0], vec![0.0, 0.0]));
        let curve = BoundaryCurve::new(
            patch.surface.clone(),
            vec![BoundarySegment::new(0.0, 1.0, false, stuck)],
        );
        assert!(matches!(curve.frame(0, 0.5), Err(GeomError::ZeroSpeed { .. })));
    }

    #[test]
    fn surfaces_and_curves_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ParametricSurface>();
        assert_send_sync::<BoundaryCurve>();
        assert_send_sync::<GeometrySample>();
    }

    #[test]
    fn translated_surface_moves_position_only() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let shifted = sphere.translated(Vector::new3(10.0, -2.0, 0.5)).unwrap();
        let p = [1.0, 0.5];
        let (a, b) = (sphere.sample(&p).unwrap(), shifted.sample(&p).unwrap());
        assert!((b.position - a.position - Vector::new3(10.0, -2.0, 0.5)).norm_inf() < 1e-14);
        assert!((b.mean_curvature - a.mean_curvature).abs() < 1e-14);
        assert!((b.normal - a.normal).norm_inf() < 1e-14);
    }
}
