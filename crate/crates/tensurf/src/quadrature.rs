//! High-order numerical integration over parameter rectangles (surface
//! integrals weighted by the metric area element) and over boundary curves
//! (line integrals weighted by arc length), plus the enclosed-volume oracle.
//!
//! Axis kinds are chosen from the surface's periodicity flags: open axes use
//! Gauss-Legendre nodes (strictly interior, so parametrization degeneracies
//! at the ends are never touched), periodic axes use the equispaced
//! trapezoid rule, which is spectrally accurate for smooth periodic
//! integrands. Sums are reduced with a fixed-shape pairwise tree so repeated
//! runs produce bit-identical values.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::surface::{BoundaryCurve, BoundaryFrame, GeometrySample, ParametricSurface};
use crate::tensor::{Matrix, Vector};

/// Integration rule for one parameter axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisKind {
    GaussLegendre,
    PeriodicTrapezoid,
}

/// Nodes and weights on one axis, already mapped to the axis interval.
#[derive(Clone, Debug)]
pub struct AxisRule {
    pub kind: AxisKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    pub fn gauss_legendre(n: usize, start: f64, end: f64) -> Result<Self> {
        if n < 2 {
            return Err(GeomError::InvalidParameter(format!(
                "Gauss-Legendre rule needs at least 2 nodes, got {n}"
            )));
        }
        let (ref_nodes, ref_weights) = gauss_legendre_reference(n);
        let half = 0.5 * (end - start);
        let mid = 0.5 * (end + start);
        let nodes = ref_nodes.iter().map(|x| mid + half * x).collect();
        let weights = ref_weights.iter().map(|w| half * w).collect();
        Ok(Self { kind: AxisKind::GaussLegendre, nodes, weights })
    }

    pub fn periodic_trapezoid(n: usize, start: f64, end: f64) -> Result<Self> {
        if n < 2 {
            return Err(GeomError::InvalidParameter(format!(
                "trapezoid rule needs at least 2 nodes, got {n}"
            )));
        }
        let h = (end - start) / n as f64;
        let nodes = (0..n).map(|i| start + i as f64 * h).collect();
        let weights = vec![h; n];
        Ok(Self { kind: AxisKind::PeriodicTrapezoid, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P'_n(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let delta = p1 / dp;
            x -= delta;
            if delta.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Tensor-product rule over a parameter rectangle.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    axes: Vec<AxisRule>,
}

impl QuadratureRule {
    pub fn new(axes: Vec<AxisRule>) -> Self {
        Self { axes }
    }

    /// Rule matched to the surface domain: trapezoid on periodic axes,
    /// Gauss-Legendre otherwise. `nodes_per_axis` is recycled if shorter
    /// than the parameter dimension.
    pub fn for_surface(surface: &ParametricSurface, nodes_per_axis: &[usize]) -> Result<Self> {
        if nodes_per_axis.is_empty() {
            return Err(GeomError::InvalidParameter("empty resolution list".into()));
        }
        let d = surface.param_dim();
        let mut axes = Vec::with_capacity(d);
        for i in 0..d {
            let n = nodes_per_axis[i.min(nodes_per_axis.len() - 1)];
            let axis = surface.domain().axis(i);
            let rule = if axis.periodic {
                AxisRule::periodic_trapezoid(n, axis.start, axis.end)?
            } else {
                AxisRule::gauss_legendre(n, axis.start, axis.end)?
            };
            axes.push(rule);
        }
        Ok(Self::new(axes))
    }

    pub fn axes(&self) -> &[AxisRule] {
        &self.axes
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(AxisRule::len).product()
    }

    /// Human-readable resolution label, e.g. "64x64".
    pub fn resolution_label(&self) -> String {
        self.axes.iter().map(|a| a.len().to_string()).collect::<Vec<_>>().join("x")
    }
}

/// Values a field can take under quadrature: scalars or ambient vectors.
pub trait IntegrandValue: Copy {
    fn accumulate_zero(&self) -> Self;
    fn combine(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    fn finite(&self) -> bool;
}

impl IntegrandValue for f64 {
    fn accumulate_zero(&self) -> Self {
        0.0
    }
    fn combine(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl IntegrandValue for Vector {
    fn accumulate_zero(&self) -> Self {
        Vector::zeros(self.dim())
    }
    fn combine(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

/// Fixed-shape pairwise tree reduction; the shape depends only on the length.
pub fn pairwise_sum<T: IntegrandValue>(items: &[T]) -> T {
    match items.len() {
        0 => panic!("pairwise_sum of empty slice"),
        1 => items[0],
        2 => items[0].combine(items[1]),
        n => {
            let mid = n / 2;
            pairwise_sum(&items[..mid]).combine(pairwise_sum(&items[mid..]))
        }
    }
}

/// Result of one quadrature evaluation.
#[derive(Clone, Debug)]
pub struct IntegralValue<T> {
    pub value: T,
    pub resolution: String,
    pub element_count: usize,
}

/// Geometry samples and weights of a surface rule, materialized once so a
/// whole family of integrands can reuse them.
pub struct SurfaceGrid {
    samples: Vec<GeometrySample>,
    weights: Vec<f64>,
    resolution: String,
}

impl SurfaceGrid {
    pub fn build(surface: &ParametricSurface, rule: &QuadratureRule) -> Result<Self> {
        let d = surface.param_dim();
        if rule.axes.len() != d {
            return Err(GeomError::DimensionMismatch(format!(
                "rule with {} axes on a surface with {} parameters",
                rule.axes.len(),
                d
            )));
        }
        let count = rule.node_count();
        let mut samples = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        let mut index = vec![0usize; d];
        loop {
            let mut point = Vec::with_capacity(d);
            let mut weight = 1.0;
            for (i, idx) in index.iter().enumerate() {
                point.push(rule.axes[i].nodes[*idx]);
                weight *= rule.axes[i].weights[*idx];
            }
            samples.push(surface.sample(&point)?);
            weights.push(weight);
            let mut carry = true;
            for (i, slot) in index.iter_mut().enumerate() {
                if carry {
                    *slot += 1;
                    if *slot == rule.axes[i].len() {
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
        Ok(Self { samples, weights, resolution: rule.resolution_label() })
    }

    pub fn samples(&self) -> &[GeometrySample] {
        &self.samples
    }

    pub fn resolution(&self) -> &str {
        &self.resolution
    }

    pub fn element_count(&self) -> usize {
        self.samples.len()
    }

    /// Σ w · field(sample) · √det S over the grid.
    pub fn integrate<T, F>(&self, field: F) -> Result<IntegralValue<T>>
    where
        T: IntegrandValue,
        F: Fn(&GeometrySample) -> T,
    {
        let mut terms = Vec::with_capacity(self.samples.len());
        for (sample, &w) in self.samples.iter().zip(&self.weights) {
            let value = field(sample);
            if !value.finite() {
                return Err(GeomError::NonFiniteField { point: sample.point.clone() });
            }
            terms.push(value.scale(w * sample.area_element));
        }
        Ok(IntegralValue {
            value: pairwise_sum(&terms),
            resolution: self.resolution.clone(),
            element_count: terms.len(),
        })
    }
}

/// Surface integral of a scalar or ambient-vector field.
pub fn integrate_surface<T, F>(
    surface: &ParametricSurface,
    rule: &QuadratureRule,
    field: F,
) -> Result<IntegralValue<T>>
where
    T: IntegrandValue,
    F: Fn(&GeometrySample) -> T,
{
    SurfaceGrid::build(surface, rule)?.integrate(field)
}

/// Boundary frames and weights of a line rule over every curve segment.
pub struct BoundaryGrid {
    frames: Vec<BoundaryFrame>,
    weights: Vec<f64>,
    resolution: String,
}

impl BoundaryGrid {
    /// `nodes_per_segment` line-quadrature nodes on each non-degenerate
    /// segment: trapezoid on closed loops, Gauss-Legendre otherwise (whose
    /// interior nodes never touch degenerate segment endpoints).
    pub fn build(curve: &BoundaryCurve, nodes_per_segment: usize) -> Result<Self> {
        let mut frames = Vec::new();
        let mut weights = Vec::new();
        for (index, segment) in curve.segments().iter().enumerate() {
            if segment.degenerate {
                continue;
            }
            let rule = if segment.periodic {
                AxisRule::periodic_trapezoid(nodes_per_segment, segment.t_start, segment.t_end)?
            } else {
                AxisRule::gauss_legendre(nodes_per_segment, segment.t_start, segment.t_end)?
            };
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                frames.push(curve.frame(index, t)?);
                weights.push(w);
            }
        }
        if frames.is_empty() {
            return Err(GeomError::InvalidParameter(
                "boundary curve has no non-degenerate segments".into(),
            ));
        }
        Ok(Self { frames, weights, resolution: format!("{nodes_per_segment}/segment") })
    }

    pub fn frames(&self) -> &[BoundaryFrame] {
        &self.frames
    }

    pub fn resolution(&self) -> &str {
        &self.resolution
    }

    /// Σ w · field(frame) · |dR/dt| over the boundary.
    pub fn integrate<T, F>(&self, field: F) -> Result<IntegralValue<T>>
    where
        T: IntegrandValue,
        F: Fn(&BoundaryFrame) -> T,
    {
        let mut terms = Vec::with_capacity(self.frames.len());
        for (frame, &w) in self.frames.iter().zip(&self.weights) {
            let value = field(frame);
            if !value.finite() {
                return Err(GeomError::NonFiniteField { point: frame.sample.point.clone() });
            }
            terms.push(value.scale(w * frame.speed));
        }
        Ok(IntegralValue {
            value: pairwise_sum(&terms),
            resolution: self.resolution.clone(),
            element_count: terms.len(),
        })
    }
}

/// Line integral of a field over a patch boundary.
pub fn integrate_boundary<T, F>(
    curve: &BoundaryCurve,
    nodes_per_segment: usize,
    field: F,
) -> Result<IntegralValue<T>>
where
    T: IntegrandValue,
    F: Fn(&BoundaryFrame) -> T,
{
    BoundaryGrid::build(curve, nodes_per_segment)?.integrate(field)
}

/// Enclosed volume of a closed surface with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct VolumeEstimate {
    pub value: f64,
    /// 1σ standard error; `None` for analytic hints.
    pub std_error: Option<f64>,
}

/// Monte Carlo controls for the hint-free volume path.
#[derive(Clone, Copy, Debug)]
pub struct McVolumeOptions {
    pub samples: usize,
    pub seed: u64,
    /// Parameter-space cells per axis used to bracket ray crossings.
    pub cells_per_axis: usize,
}

impl Default for McVolumeOptions {
    fn default() -> Self {
        Self { samples: 20_000, seed: 42, cells_per_axis: 48 }
    }
}

/// Volume of the domain a closed surface encloses.
///
/// An analytic hint wins when present; otherwise the volume is estimated by
/// seeded Monte Carlo point-in-solid sampling, where each point is classified
/// by the crossing parity of a skew ray against the parametrized surface.
pub fn enclosed_volume(
    surface: &ParametricSurface,
    options: &McVolumeOptions,
) -> Result<VolumeEstimate> {
    if !surface.is_closed() {
        return Err(GeomError::NotClosed(surface.name().to_string()));
    }
    if let Some(volume) = surface.volume_hint() {
        return Ok(VolumeEstimate { value: volume, std_error: None });
    }
    monte_carlo_volume(surface, options)
}

fn monte_carlo_volume(
    surface: &ParametricSurface,
    options: &McVolumeOptions,
) -> Result<VolumeEstimate> {
    let n = surface.ambient_dim();
    let d = surface.param_dim();
    let caster = RayCaster::new(surface, options.cells_per_axis)?;

    // Bounding box from the cell-corner positions, padded by 5%.
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for corner in &caster.corners {
        for i in 0..n {
            lo[i] = lo[i].min(corner[i]);
            hi[i] = hi[i].max(corner[i]);
        }
    }
    let mut box_volume = 1.0;
    for i in 0..n {
        let pad = 0.05 * (hi[i] - lo[i]).max(1e-9);
        lo[i] -= pad;
        hi[i] += pad;
        box_volume *= hi[i] - lo[i];
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut inside = 0usize;
    let mut accepted = 0usize;
    let mut failures = 0usize;
    while accepted < options.samples {
        let mut query = Vector::zeros(n);
        for i in 0..n {
            query[i] = rng.gen_range(lo[i]..hi[i]);
        }
        match caster.crossing_parity(&query, &mut rng) {
            Some(odd) => {
                accepted += 1;
                if odd {
                    inside += 1;
                }
            }
            None => {
                failures += 1;
                if failures > options.samples {
                    return Err(GeomError::VolumeEstimation(format!(
                        "ray casting kept failing on '{}' ({} ambiguous rays)",
                        surface.name(),
                        failures
                    )));
                }
            }
        }
    }
    let p = inside as f64 / accepted as f64;
    let value = box_volume * p;
    let std_error = box_volume * (p * (1.0 - p) / accepted as f64).sqrt();
    let _ = d;
    Ok(VolumeEstimate { value, std_error: Some(std_error) })
}

/// Robust ray/parametric-surface intersection counting.
///
/// Rays travel along a fixed skew direction u (never aligned with chart
/// degeneracies). For a query point q, crossings are roots of the d
/// conditions (R(p) − q) · aᵢ = 0, where {aᵢ, u} is an orthonormal frame;
/// roots are bracketed on a parameter grid and polished with Newton steps
/// using the analytic first jet.
struct RayCaster<'a> {
    surface: &'a ParametricSurface,
    cells: usize,
    corners: Vec<Vector>,
    /// Orthonormal frame: d transverse axes then the ray direction.
    frame: Vec<Vector>,
    /// Per-cell padded bounding boxes in transverse coordinates.
    cell_boxes: Vec<(Vec<f64>, Vec<f64>)>,
    /// Cells bucketed by their extent along the first transverse axis, so a
    /// query scans a thin slab instead of every cell.
    buckets: Vec<Vec<u32>>,
    bucket_lo: f64,
    bucket_width: f64,
}

impl<'a> RayCaster<'a> {
    fn new(surface: &'a ParametricSurface, cells: usize) -> Result<Self> {
        let n = surface.ambient_dim();
        let d = surface.param_dim();

        // Fixed skew ray direction, orthonormalized against arbitrary seeds.
        let seeds: [Vector; 4] = [
            Vector::from_slice(&[0.288_673, 0.642_787, 0.709_041, 0.031_7][..n]),
            Vector::basis(n, 0),
            Vector::basis(n, 1),
            Vector::basis(n, 2),
        ];
        let mut frame: Vec<Vector> = Vec::with_capacity(n);
        for seed in seeds.iter().take(n) {
            let mut v = *seed;
            for prev in &frame {
                v = v - *prev * prev.dot(&v);
            }
            frame.push(v.normalized()?);
        }
        // Ray direction first in the construction; reorder so the transverse
        // axes come first and the ray direction is last.
        frame.rotate_left(1);

        let corners_per_axis = cells + 1;
        let mut corners = Vec::new();
        let mut corner_coords = Vec::new();
        let mut index = vec![0usize; d];
        loop {
            let point: Vec<f64> = (0..d)
                .map(|i| {
                    let axis = surface.domain().axis(i);
                    axis.start + axis.span() * index[i] as f64 / cells as f64
                })
                .collect();
            let position = surface.jet_unchecked(&point).position;
            let coords: Vec<f64> = (0..d).map(|i| frame[i].dot(&position)).collect();
            corners.push(position);
            corner_coords.push(coords);
            let mut carry = true;
            for slot in index.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot == corners_per_axis {
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

        // Padded transverse bounding box of each cell.
        let mut cell_boxes = Vec::with_capacity(cells.pow(d as u32));
        let mut cell_index = vec![0usize; d];
        loop {
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            let mut corner_offset = vec![0usize; d];
            loop {
                let mut flat = 0usize;
                for i in (0..d).rev() {
                    flat = flat * corners_per_axis + (cell_index[i] + corner_offset[i]);
                }
                for (i, &c) in corner_coords[flat].iter().enumerate() {
                    lo[i] = lo[i].min(c);
                    hi[i] = hi[i].max(c);
                }
                let mut carry = true;
                for slot in corner_offset.iter_mut() {
                    if carry {
                        *slot += 1;
                        if *slot == 2 {
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
            for i in 0..d {
                let pad = (hi[i] - lo[i]).max(1e-12);
                lo[i] -= pad;
                hi[i] += pad;
            }
            cell_boxes.push((lo, hi));
            let mut carry = true;
            for slot in cell_index.iter_mut() {
                if carry {
                    *slot += 1;
                    if *slot == cells {
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

        let bucket_count = 256usize;
        let bucket_lo = cell_boxes.iter().map(|(lo, _)| lo[0]).fold(f64::INFINITY, f64::min);
        let bucket_hi =
            cell_boxes.iter().map(|(_, hi)| hi[0]).fold(f64::NEG_INFINITY, f64::max);
        let bucket_width = ((bucket_hi - bucket_lo) / bucket_count as f64).max(1e-300);
        let mut buckets = vec![Vec::new(); bucket_count];
        for (flat, (lo, hi)) in cell_boxes.iter().enumerate() {
            let first = (((lo[0] - bucket_lo) / bucket_width) as usize).min(bucket_count - 1);
            let last = (((hi[0] - bucket_lo) / bucket_width) as usize).min(bucket_count - 1);
            for bucket in buckets.iter_mut().take(last + 1).skip(first) {
                bucket.push(flat as u32);
            }
        }

        Ok(Self { surface, cells, corners, frame, cell_boxes, buckets, bucket_lo, bucket_width })
    }

    /// Odd/even crossing count of the ray from `query`, or `None` when a
    /// grazing or otherwise ambiguous intersection calls for a fresh sample.
    fn crossing_parity(&self, query: &Vector, rng: &mut ChaCha8Rng) -> Option<bool> {
        let _ = rng;
        let d = self.surface.param_dim();
        let target: Vec<f64> = (0..d).map(|i| self.frame[i].dot(query)).collect();
        let ray = &self.frame[d];
        let ray_origin = ray.dot(query);

        let mut roots: Vec<Vec<f64>> = Vec::new();
        let bucket = (((target[0] - self.bucket_lo) / self.bucket_width) as isize)
            .clamp(0, self.buckets.len() as isize - 1) as usize;
        for &flat in &self.buckets[bucket] {
            let flat = flat as usize;
            let (lo, hi) = &self.cell_boxes[flat];
            let candidate = (0..d).all(|i| target[i] >= lo[i] && target[i] <= hi[i]);
            if candidate {
                let center: Vec<f64> = (0..d)
                    .map(|i| {
                        let cell = (flat / self.cells.pow(i as u32)) % self.cells;
                        let axis = self.surface.domain().axis(i);
                        axis.start + axis.span() * (cell as f64 + 0.5) / self.cells as f64
                    })
                    .collect();
                match self.newton(&center, &target) {
                    NewtonOutcome::Root(root) => {
                        if self.register_root(&mut roots, root, ray, ray_origin)?
                            == Ambiguity::Grazing
                        {
                            return None;
                        }
                    }
                    NewtonOutcome::Diverged => {}
                }
            }
        }

        let mut crossings = 0usize;
        for root in &roots {
            let position = self.surface.jet_unchecked(root).position;
            if ray.dot(&position) > ray_origin {
                crossings += 1;
            }
        }
        Some(crossings % 2 == 1)
    }

    fn newton(&self, start: &[f64], target: &[f64]) -> NewtonOutcome {
        let d = self.surface.param_dim();
        let mut p = start.to_vec();
        for _ in 0..40 {
            let jet = self.surface.jet_unchecked(&p);
            let mut residual = vec![0.0; d];
            let mut worst: f64 = 0.0;
            for i in 0..d {
                residual[i] = self.frame[i].dot(&jet.position) - target[i];
                worst = worst.max(residual[i].abs());
            }
            if worst < 1e-11 {
                return NewtonOutcome::Root(p);
            }
            let mut jac = Matrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    jac[(i, j)] = self.frame[i].dot(&jet.first[j]);
                }
            }
            let inv = match jac.inverse() {
                Ok(inv) => inv,
                Err(_) => return NewtonOutcome::Diverged,
            };
            let mut step_norm: f64 = 0.0;
            for i in 0..d {
                let mut step = 0.0;
                for j in 0..d {
                    step += inv[(i, j)] * residual[j];
                }
                p[i] -= step;
                step_norm = step_norm.max(step.abs());
            }
            // Give up on walks that leave the neighborhood of the domain.
            for i in 0..d {
                let axis = self.surface.domain().axis(i);
                let slack = axis.span().abs();
                if p[i] < axis.start - slack || p[i] > axis.end + slack {
                    return NewtonOutcome::Diverged;
                }
            }
            if step_norm < 1e-13 {
                let jet = self.surface.jet_unchecked(&p);
                let ok = (0..d).all(|i| (self.frame[i].dot(&jet.position) - target[i]).abs() < 1e-10);
                return if ok { NewtonOutcome::Root(p) } else { NewtonOutcome::Diverged };
            }
        }
        NewtonOutcome::Diverged
    }

    /// Deduplicates `root` against the found set (periodic axes wrap) and
    /// flags grazing intersections where the parity would be unreliable.
    fn register_root(
        &self,
        roots: &mut Vec<Vec<f64>>,
        root: Vec<f64>,
        ray: &Vector,
        ray_origin: f64,
    ) -> Option<Ambiguity> {
        let d = self.surface.param_dim();
        for existing in roots.iter() {
            let mut distinct = false;
            for i in 0..d {
                let axis = self.surface.domain().axis(i);
                let mut delta = (existing[i] - root[i]).abs();
                if axis.periodic {
                    let span = axis.span().abs();
                    delta = delta.min((delta - span).abs());
                }
                if delta > 1e-6 * axis.span().abs() {
                    distinct = true;
                }
            }
            if !distinct {
                return Some(Ambiguity::None);
            }
        }
        // Transversality: the surface normal must have a component along the
        // ray, and the hit must not sit at the query point itself.
        let jet = self.surface.jet_unchecked(&root);
        let raw = match crate::tensor::generalized_cross(&jet.first[..d]) {
            Ok(v) => v,
            Err(_) => return Some(Ambiguity::Grazing),
        };
        let raw_norm = raw.norm();
        if raw_norm < 1e-12 || (raw.dot(ray) / raw_norm).abs() < 1e-6 {
            return Some(Ambiguity::Grazing);
        }
        if (ray.dot(&jet.position) - ray_origin).abs() < 1e-10 {
            return Some(Ambiguity::Grazing);
        }
        roots.push(root);
        Some(Ambiguity::None)
    }
}

enum NewtonOutcome {
    Root(Vec<f64>),
    Diverged,
}

#[derive(PartialEq, Eq)]
enum Ambiguity {
    None,
    Grazing,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_matches_reference_values() {
        // Five-point rule, values from the standard tables.
        let (nodes, weights) = gauss_legendre_reference(5);
        let expected_nodes = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let expected_weights = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert!((nodes[i] - expected_nodes[i]).abs() < 1e-15);
            assert!((weights[i] - expected_weights[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = AxisRule::gauss_legendre(8, 0.0, 2.0).unwrap();
        // Degree 15 is the exactness limit of an 8-point rule.
        let value: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(15))
            .sum();
        assert!((value - 2.0f64.powi(16) / 16.0).abs() < 1e-10);
    }

    #[test]
    fn sphere_area_and_torus_area() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let rule = QuadratureRule::for_surface(&sphere, &[32, 64]).unwrap();
        let area = integrate_surface(&sphere, &rule, |_| 1.0f64).unwrap();
        assert!((area.value - 4.0 * PI).abs() < 1e-10, "sphere area {}", area.value);

        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let rule = QuadratureRule::for_surface(&torus, &[64, 64]).unwrap();
        let area = integrate_surface(&torus, &rule, |_| 1.0f64).unwrap();
        assert!((area.value - 4.0 * PI * PI).abs() < 1e-10, "torus area {}", area.value);

        let zero = integrate_surface(&torus, &rule, |_| 0.0f64).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn hypersphere_area() {
        let hs = zoo::make_hypersphere3(1.0).unwrap().surface;
        let rule = QuadratureRule::for_surface(&hs, &[24, 24, 48]).unwrap();
        let area = integrate_surface(&hs, &rule, |_| 1.0f64).unwrap();
        assert!((area.value - 2.0 * PI * PI).abs() < 1e-9, "hypersphere area {}", area.value);
    }

    #[test]
    fn boundary_circumference_and_fields() {
        let disk = zoo::make_disk(1.0).unwrap();
        let length = integrate_boundary(&disk.boundary, 64, |_| 1.0f64).unwrap();
        assert!((length.value - 2.0 * PI).abs() < 1e-12);

        let hemisphere = zoo::make_hemisphere(1.0).unwrap();
        let rxt = integrate_boundary(&hemisphere.boundary, 128, |f| {
            f.sample.position.cross(&f.tangent)
        })
        .unwrap();
        assert!((rxt.value - Vector::new3(0.0, 0.0, 2.0 * PI)).norm_inf() < 1e-10);

        let n_int = integrate_boundary(&hemisphere.boundary, 128, |f| f.in_surface_normal).unwrap();
        assert!((n_int.value - Vector::new3(0.0, 0.0, -2.0 * PI)).norm_inf() < 1e-10);
    }

    #[test]
    fn trapezoid_axis_is_spectral_on_periodic_integrand() {
        // The azimuthal integral of exp(sin φ) has no closed form needed:
        // compare low and high resolution, expecting at least 10x drop per
        // doubling until the floor.
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let reference = {
            let rule = QuadratureRule::for_surface(&torus, &[128, 128]).unwrap();
            integrate_surface(&torus, &rule, |s| s.position[0].sin().exp()).unwrap().value
        };
        let mut errors = Vec::new();
        for res in [8usize, 16, 32] {
            let rule = QuadratureRule::for_surface(&torus, &[res, res]).unwrap();
            let value = integrate_surface(&torus, &rule, |s| s.position[0].sin().exp()).unwrap();
            errors.push((value.value - reference).abs());
        }
        assert!(errors[1] < errors[0] / 10.0 || errors[1] < 1e-12, "{errors:?}");
        assert!(errors[2] < errors[1] / 10.0 || errors[2] < 1e-12, "{errors:?}");
    }

    #[test]
    fn gauss_axis_convergence_on_smooth_integrand() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let reference = {
            let rule = QuadratureRule::for_surface(&sphere, &[96, 64]).unwrap();
            integrate_surface(&sphere, &rule, |s| (3.0 * s.position[2]).cos()).unwrap().value
        };
        let mut errors = Vec::new();
        for res_theta in [6usize, 12, 24] {
            let rule = QuadratureRule::for_surface(&sphere, &[res_theta, 32]).unwrap();
            let value =
                integrate_surface(&sphere, &rule, |s| (3.0 * s.position[2]).cos()).unwrap();
            errors.push((value.value - reference).abs().max(1e-14));
        }
        assert!(errors[1] < errors[0] / 10.0 || errors[1] <= 1e-12, "{errors:?}");
        assert!(errors[2] < errors[1] / 10.0 || errors[2] <= 1e-12, "{errors:?}");
    }

    #[test]
    fn volume_uses_hint_when_present() {
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface;
        let v = enclosed_volume(&torus, &McVolumeOptions::default()).unwrap();
        assert_eq!(v.value, 2.0 * PI * PI * 2.0 * 0.25);
        assert!(v.std_error.is_none());

        let hs = zoo::make_hypersphere3(1.0).unwrap().surface;
        let v = enclosed_volume(&hs, &McVolumeOptions::default()).unwrap();
        assert_eq!(v.value, PI * PI / 2.0);

        let open = zoo::make_catenoid(1.0, (-1.0, 1.0)).unwrap().surface;
        assert!(matches!(
            enclosed_volume(&open, &McVolumeOptions::default()),
            Err(GeomError::NotClosed(_))
        ));
    }

    #[test]
    fn non_finite_field_is_rejected_with_the_node() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface;
        let rule = QuadratureRule::for_surface(&sphere, &[8, 8]).unwrap();
        let err = integrate_surface(&sphere, &rule, |s| {
            if s.position[2] > 0.5 {
                f64::NAN
            } else {
                1.0
            }
        })
        .unwrap_err();
        match err {
            GeomError::NonFiniteField { point } => assert_eq!(point.len(), 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_volume_of_sphere() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface.without_volume_hint();
        let options = McVolumeOptions { samples: 4000, seed: 42, cells_per_axis: 40 };
        let estimate = enclosed_volume(&sphere, &options).unwrap();
        let sigma = estimate.std_error.expect("monte carlo path reports an error bar");
        let truth = 4.0 * PI / 3.0;
        assert!(
            (estimate.value - truth).abs() < 4.0 * sigma,
            "estimate {} vs {truth}, sigma {sigma}",
            estimate.value
        );
        assert!(sigma < 0.2);
    }

    #[test]
    fn monte_carlo_volume_of_torus() {
        let torus = zoo::make_torus(2.0, 0.5).unwrap().surface.without_volume_hint();
        let options = McVolumeOptions { samples: 3000, seed: 7, cells_per_axis: 40 };
        let estimate = enclosed_volume(&torus, &options).unwrap();
        let sigma = estimate.std_error.unwrap();
        let truth = PI * PI;
        assert!(
            (estimate.value - truth).abs() < 4.0 * sigma,
            "estimate {} vs {truth}, sigma {sigma}",
            estimate.value
        );
    }

    #[test]
    fn monte_carlo_volume_of_hypersphere() {
        // The ray caster generalizes to three parameters in 4-space: three
        // transverse constraints, Newton on a 3×3 system.
        let hs = zoo::make_hypersphere3(1.0).unwrap().surface.without_volume_hint();
        let options = McVolumeOptions { samples: 300, seed: 42, cells_per_axis: 16 };
        let estimate = enclosed_volume(&hs, &options).unwrap();
        let sigma = estimate.std_error.unwrap();
        let truth = PI * PI / 2.0;
        assert!(
            (estimate.value - truth).abs() < 4.0 * sigma,
            "estimate {} vs {truth}, sigma {sigma}",
            estimate.value
        );
    }

    #[test]
    fn monte_carlo_volume_is_seed_deterministic() {
        let sphere = zoo::make_sphere(1.0).unwrap().surface.without_volume_hint();
        let options = McVolumeOptions { samples: 500, seed: 11, cells_per_axis: 32 };
        let a = enclosed_volume(&sphere, &options).unwrap();
        let b = enclosed_volume(&sphere, &options).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let other = enclosed_volume(
            &sphere,
            &McVolumeOptions { seed: 12, ..options },
        )
        .unwrap();
        assert_ne!(a.value.to_bits(), other.value.to_bits());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn surface_integration_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64) {
            let sphere = zoo::make_sphere(1.0).unwrap().surface;
            let rule = QuadratureRule::for_surface(&sphere, &[16, 16]).unwrap();
            let grid = SurfaceGrid::build(&sphere, &rule).unwrap();
            let f = |s: &GeometrySample| s.position[2];
            let g = |s: &GeometrySample| s.mean_curvature;
            let lhs = grid.integrate(|s| a * f(s) + b * g(s)).unwrap().value;
            let rhs = a * grid.integrate(f).unwrap().value + b * grid.integrate(g).unwrap().value;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            prop_assert!((lhs - rhs).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn pairwise_sum_is_shape_stable() {
        let values: Vec<f64> = (0..1023).map(|i| ((i * 37) % 101) as f64 * 0.377).collect();
        let a = pairwise_sum(&values);
        let b = pairwise_sum(&values);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
