//! Evaluation of both sides of the integral identities of closed surfaces
//! and bounded patches, with structured pass/fail reports.
//!
//! Both sides are always computed numerically, even where a closed form
//! exists; analytic values only appear as extra assertions in the zoo tests.
//! For every patch identity the two sides go through disjoint code paths
//! (surface quadrature versus boundary quadrature), so agreement is a
//! genuine cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::quadrature::{
    enclosed_volume, BoundaryGrid, McVolumeOptions, SurfaceGrid,
};
use crate::surface::{GeometrySample, ParametricSurface};
use crate::tensor::Vector;
use crate::zoo::{self, PatchEntry, ZooSurface};

/// Stable identifiers of the verified identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// ∫ N dS = 0 over a closed surface.
    ClosedNormal,
    /// ∫ N H dS = 0 over a closed surface.
    ClosedCurvatureNormal,
    /// ∫ N K dS = 0 (d = 2) or ∫ N R dS = 0 (d = 3) over a closed surface.
    ClosedCurvatureScalar,
    /// ∫ R × N dS = 0 over a closed surface in three dimensions.
    CrossNormal,
    /// ∫ R × N H dS = 0.
    CrossCurvatureNormal,
    /// ∫ R × N K dS = 0.
    CrossCurvatureScalar,
    /// ∫ R · N dS = n V.
    MomentNormal,
    /// ∫ R · N H dS = −(n−1) A.
    MomentCurvatureNormal,
    /// ∫ R · N K dS = −½ ∫ H dS, or its scalar-curvature form in n = 4.
    MomentCurvatureScalar,
    /// ∫_S N dS = ½ ∮_L R × T dL for a patch.
    PatchNormal,
    /// ∫_S N H dS = ∮_L n dL for a patch.
    PatchCurvatureNormal,
    /// ∫_S N K dS = ½ ∮_L (n_β H − n_α Bᵅ_β) Sᵝ dL for a patch.
    PatchCurvatureScalar,
    /// ∫ K dS depends on topology, not shape: 4π for sphere and ellipsoid,
    /// 0 for the torus.
    TopologicalInvariance,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::ClosedNormal,
        IdentityId::ClosedCurvatureNormal,
        IdentityId::ClosedCurvatureScalar,
        IdentityId::CrossNormal,
        IdentityId::CrossCurvatureNormal,
        IdentityId::CrossCurvatureScalar,
        IdentityId::MomentNormal,
        IdentityId::MomentCurvatureNormal,
        IdentityId::MomentCurvatureScalar,
        IdentityId::PatchNormal,
        IdentityId::PatchCurvatureNormal,
        IdentityId::PatchCurvatureScalar,
        IdentityId::TopologicalInvariance,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::ClosedNormal => "IN=0",
            IdentityId::ClosedCurvatureNormal => "INH=0",
            IdentityId::ClosedCurvatureScalar => "INK=0",
            IdentityId::CrossNormal => "RxN=0",
            IdentityId::CrossCurvatureNormal => "RxNH=0",
            IdentityId::CrossCurvatureScalar => "RxNK=0",
            IdentityId::MomentNormal => "IR.N",
            IdentityId::MomentCurvatureNormal => "IR.NH",
            IdentityId::MomentCurvatureScalar => "IR.NK",
            IdentityId::PatchNormal => "patch-N",
            IdentityId::PatchCurvatureNormal => "patch-NH",
            IdentityId::PatchCurvatureScalar => "patch-NK",
            IdentityId::TopologicalInvariance => "topo-K",
        }
    }

    pub fn parse(text: &str) -> Result<IdentityId> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(text))
            .ok_or_else(|| {
                let valid: Vec<&str> = IdentityId::ALL.iter().map(|id| id.as_str()).collect();
                GeomError::InvalidParameter(format!(
                    "unknown identity '{text}'; valid identities: {} (or 'all')",
                    valid.join(", ")
                ))
            })
    }

    pub fn is_patch_identity(&self) -> bool {
        matches!(
            self,
            IdentityId::PatchNormal
                | IdentityId::PatchCurvatureNormal
                | IdentityId::PatchCurvatureScalar
        )
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identities that apply to a given zoo surface. A closed two-dimensional
/// surface gets all nine closed-surface identities; the four-dimensional
/// hypersphere loses the three cross-product forms; patches get the three
/// boundary identities. The topology spot check runs on its own fixed trio
/// of surfaces and is never expanded from `all`.
pub fn applicable_identities(surface: &ZooSurface) -> Vec<IdentityId> {
    match surface {
        ZooSurface::Closed(entry) if entry.surface.is_closed() => {
            let mut ids = vec![
                IdentityId::ClosedNormal,
                IdentityId::ClosedCurvatureNormal,
                IdentityId::ClosedCurvatureScalar,
            ];
            if entry.surface.ambient_dim() == 3 {
                ids.extend([
                    IdentityId::CrossNormal,
                    IdentityId::CrossCurvatureNormal,
                    IdentityId::CrossCurvatureScalar,
                ]);
            }
            ids.extend([
                IdentityId::MomentNormal,
                IdentityId::MomentCurvatureNormal,
                IdentityId::MomentCurvatureScalar,
            ]);
            ids
        }
        ZooSurface::Closed(_) => Vec::new(),
        ZooSurface::Patch(_) => vec![
            IdentityId::PatchNormal,
            IdentityId::PatchCurvatureNormal,
            IdentityId::PatchCurvatureScalar,
        ],
    }
}

/// Default residual tolerance for an identity on a surface of the given
/// parameter dimension: 1e−8 for the spectral closed-surface checks in two
/// dimensions, 1e−6 in three, 1e−7 for patch identities that involve
/// curvature, and the stated 4σ rule for Monte Carlo volumes (applied where
/// the volume is estimated rather than exact).
pub fn default_tolerance(id: IdentityId, param_dim: usize) -> f64 {
    let spectral = if param_dim >= 3 { 1e-6 } else { 1e-8 };
    match id {
        IdentityId::ClosedNormal
        | IdentityId::ClosedCurvatureNormal
        | IdentityId::ClosedCurvatureScalar
        | IdentityId::CrossNormal
        | IdentityId::CrossCurvatureNormal
        | IdentityId::CrossCurvatureScalar
        | IdentityId::MomentNormal => spectral,
        IdentityId::MomentCurvatureNormal | IdentityId::MomentCurvatureScalar => {
            if param_dim >= 3 {
                1e-5
            } else {
                1e-7
            }
        }
        IdentityId::PatchNormal => 1e-8,
        IdentityId::PatchCurvatureNormal | IdentityId::PatchCurvatureScalar => 1e-7,
        IdentityId::TopologicalInvariance => 1e-7,
    }
}

/// Scalar or ambient-vector value carried by a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ReportValue {
    pub fn from_vector(v: &Vector) -> Self {
        ReportValue::Vector(v.as_slice().to_vec())
    }

    pub fn zero_like(&self) -> Self {
        match self {
            ReportValue::Scalar(_) => ReportValue::Scalar(0.0),
            ReportValue::Vector(v) => ReportValue::Vector(vec![0.0; v.len()]),
        }
    }

    /// Max-norm distance to another value of the same shape.
    pub fn distance(&self, other: &ReportValue) -> f64 {
        match (self, other) {
            (ReportValue::Scalar(a), ReportValue::Scalar(b)) => (a - b).abs(),
            (ReportValue::Vector(a), ReportValue::Vector(b)) => a
                .iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())),
            _ => f64::INFINITY,
        }
    }
}

/// One identity's evaluation: both sides, the residual, and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub surface: String,
    pub resolution: String,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default)]
    pub notes: String,
    pub wall_time_ms: f64,
}

impl IdentityReport {
    fn build(
        id: IdentityId,
        surface: &ParametricSurface,
        resolution: &str,
        lhs: ReportValue,
        rhs: ReportValue,
        tolerance: f64,
        notes: String,
    ) -> Self {
        let residual = lhs.distance(&rhs);
        IdentityReport {
            identity_id: id.as_str().to_string(),
            surface: surface.name().to_string(),
            resolution: resolution.to_string(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
            notes,
            wall_time_ms: 0.0,
        }
    }
}

/// Per-check knobs. `tolerance` overrides the defaults; `force_mc_volume`
/// drops the analytic volume hint so the Monte Carlo oracle is used.
#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub tolerance: Option<f64>,
    pub force_mc_volume: bool,
    pub mc: McVolumeOptions,
}

impl CheckOptions {
    fn tolerance_for(&self, id: IdentityId, param_dim: usize) -> f64 {
        self.tolerance.unwrap_or_else(|| default_tolerance(id, param_dim))
    }
}

fn require_closed(surface: &ParametricSurface) -> Result<()> {
    if !surface.is_closed() {
        return Err(GeomError::NotClosed(surface.name().to_string()));
    }
    Ok(())
}

fn gaussian_or_scalar(sample: &GeometrySample) -> f64 {
    match sample.gaussian_curvature {
        Some(k) => k,
        None => sample.scalar_curvature,
    }
}

/// ∫ N dS = 0 over a closed surface.
pub fn check_closed_normal(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let lhs = grid.integrate(|s| s.normal)?;
    let lhs = ReportValue::from_vector(&lhs.value);
    let rhs = lhs.zero_like();
    Ok(IdentityReport::build(
        IdentityId::ClosedNormal,
        surface,
        grid.resolution(),
        lhs,
        rhs,
        opts.tolerance_for(IdentityId::ClosedNormal, surface.param_dim()),
        String::new(),
    ))
}

/// ∫ N H dS = 0 over a closed surface.
pub fn check_closed_curvature_normal(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let lhs = grid.integrate(|s| s.normal * s.mean_curvature)?;
    let lhs = ReportValue::from_vector(&lhs.value);
    let rhs = lhs.zero_like();
    Ok(IdentityReport::build(
        IdentityId::ClosedCurvatureNormal,
        surface,
        grid.resolution(),
        lhs,
        rhs,
        opts.tolerance_for(IdentityId::ClosedCurvatureNormal, surface.param_dim()),
        String::new(),
    ))
}

/// ∫ N K dS = 0 over a closed surface; the scalar curvature stands in for K
/// when the surface dimension is three.
pub fn check_closed_curvature_scalar(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let lhs = grid.integrate(|s| s.normal * gaussian_or_scalar(s))?;
    let lhs = ReportValue::from_vector(&lhs.value);
    let rhs = lhs.zero_like();
    let notes = if surface.param_dim() == 2 {
        String::new()
    } else {
        "scalar curvature form".to_string()
    };
    Ok(IdentityReport::build(
        IdentityId::ClosedCurvatureScalar,
        surface,
        grid.resolution(),
        lhs,
        rhs,
        opts.tolerance_for(IdentityId::ClosedCurvatureScalar, surface.param_dim()),
        notes,
    ))
}

/// The three cross-product identities ∫ R × {N, NH, NK} dS = 0, for closed
/// surfaces in three-dimensional space.
pub fn check_cross_identities(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<Vec<IdentityReport>> {
    require_closed(surface)?;
    if surface.ambient_dim() != 3 {
        return Err(GeomError::UnsupportedDimension { required: 2, actual: surface.param_dim() });
    }
    type Weight = fn(&GeometrySample) -> f64;
    let weights: [(IdentityId, Weight); 3] = [
        (IdentityId::CrossNormal, |_| 1.0),
        (IdentityId::CrossCurvatureNormal, |s| s.mean_curvature),
        (IdentityId::CrossCurvatureScalar, |s| s.gaussian_curvature.expect("d = 2 surface")),
    ];
    let mut reports = Vec::with_capacity(3);
    for (id, weight) in weights {
        let lhs = grid.integrate(|s| s.position.cross(&s.normal) * weight(s))?;
        let lhs = ReportValue::from_vector(&lhs.value);
        let rhs = lhs.zero_like();
        reports.push(IdentityReport::build(
            id,
            surface,
            grid.resolution(),
            lhs,
            rhs,
            opts.tolerance_for(id, surface.param_dim()),
            String::new(),
        ));
    }
    Ok(reports)
}

/// ∫ R · N dS = n V, with the volume from the analytic hint or the Monte
/// Carlo oracle (whose 4σ band widens the tolerance).
pub fn check_moment_normal(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let n = surface.ambient_dim() as f64;
    let lhs = grid.integrate(|s| s.position.dot(&s.normal))?.value;
    let stripped;
    let volume_surface = if opts.force_mc_volume {
        stripped = surface.clone().without_volume_hint();
        &stripped
    } else {
        surface
    };
    let estimate = enclosed_volume(volume_surface, &opts.mc)?;
    let rhs = n * estimate.value;
    let mut tolerance = opts.tolerance_for(IdentityId::MomentNormal, surface.param_dim());
    let notes = match estimate.std_error {
        Some(sigma) => {
            let band = 4.0 * n * sigma;
            if opts.tolerance.is_none() {
                tolerance = band;
            }
            format!("volume {:.6} from Monte Carlo, sigma {sigma:.3e}, 4nσ band {band:.3e}", estimate.value)
        }
        None => "volume from analytic hint".to_string(),
    };
    Ok(IdentityReport::build(
        IdentityId::MomentNormal,
        surface,
        grid.resolution(),
        ReportValue::Scalar(lhs),
        ReportValue::Scalar(rhs),
        tolerance,
        notes,
    ))
}

/// ∫ R · N H dS = −(n−1) A, with the area from the same quadrature rule.
pub fn check_moment_curvature_normal(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let n = surface.ambient_dim() as f64;
    let lhs = grid.integrate(|s| s.position.dot(&s.normal) * s.mean_curvature)?.value;
    let area = grid.integrate(|_| 1.0f64)?.value;
    let rhs = -(n - 1.0) * area;
    Ok(IdentityReport::build(
        IdentityId::MomentCurvatureNormal,
        surface,
        grid.resolution(),
        ReportValue::Scalar(lhs),
        ReportValue::Scalar(rhs),
        opts.tolerance_for(IdentityId::MomentCurvatureNormal, surface.param_dim()),
        String::new(),
    ))
}

/// ∫ R · N K dS = −½ ∫ H dS in three-dimensional space; in four dimensions
/// the scalar-curvature form ∫ R · N R dS = −(n−2) ∫ H dS.
pub fn check_moment_curvature_scalar(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    let n = surface.ambient_dim() as f64;
    let total_h = grid.integrate(|s| s.mean_curvature)?.value;
    let (lhs, rhs, notes) = if surface.param_dim() == 2 {
        let lhs = grid
            .integrate(|s| s.position.dot(&s.normal) * s.gaussian_curvature.expect("d = 2"))?
            .value;
        (lhs, -0.5 * total_h, String::new())
    } else {
        let lhs = grid.integrate(|s| s.position.dot(&s.normal) * s.scalar_curvature)?.value;
        (lhs, -(n - 2.0) * total_h, "scalar curvature form".to_string())
    };
    Ok(IdentityReport::build(
        IdentityId::MomentCurvatureScalar,
        surface,
        grid.resolution(),
        ReportValue::Scalar(lhs),
        ReportValue::Scalar(rhs),
        opts.tolerance_for(IdentityId::MomentCurvatureScalar, surface.param_dim()),
        notes,
    ))
}

/// ∫_S N dS = ½ ∮_L R × T dL for a patch.
pub fn check_patch_normal(
    patch: &PatchEntry,
    grid: &SurfaceGrid,
    boundary: &BoundaryGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    let lhs = grid.integrate(|s| s.normal)?.value;
    let rhs = boundary.integrate(|f| f.sample.position.cross(&f.tangent))?.value * 0.5;
    Ok(IdentityReport::build(
        IdentityId::PatchNormal,
        &patch.surface,
        &format!("{} / boundary {}", grid.resolution(), boundary.resolution()),
        ReportValue::from_vector(&lhs),
        ReportValue::from_vector(&rhs),
        opts.tolerance_for(IdentityId::PatchNormal, patch.surface.param_dim()),
        String::new(),
    ))
}

/// ∫_S N H dS = ∮_L n dL for a patch.
pub fn check_patch_curvature_normal(
    patch: &PatchEntry,
    grid: &SurfaceGrid,
    boundary: &BoundaryGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    let lhs = grid.integrate(|s| s.normal * s.mean_curvature)?.value;
    let rhs = boundary.integrate(|f| f.in_surface_normal)?.value;
    Ok(IdentityReport::build(
        IdentityId::PatchCurvatureNormal,
        &patch.surface,
        &format!("{} / boundary {}", grid.resolution(), boundary.resolution()),
        ReportValue::from_vector(&lhs),
        ReportValue::from_vector(&rhs),
        opts.tolerance_for(IdentityId::PatchCurvatureNormal, patch.surface.param_dim()),
        String::new(),
    ))
}

/// ∫_S N K dS = ½ ∮_L (n_β H − n_α Bᵅ_β) Sᵝ dL for a patch.
pub fn check_patch_curvature_scalar(
    patch: &PatchEntry,
    grid: &SurfaceGrid,
    boundary: &BoundaryGrid,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    let lhs = grid.integrate(|s| s.normal * s.gaussian_curvature.expect("patch in 3-space"))?.value;
    let rhs = boundary
        .integrate(|f| {
            let s = &f.sample;
            let mut v = Vector::zeros(s.ambient_dim);
            for b in 0..s.param_dim {
                let mut coeff = f.normal_cov[b] * s.mean_curvature;
                for a in 0..s.param_dim {
                    coeff -= f.normal_cov[a] * s.shape_operator[(a, b)];
                }
                v = v + s.dual_basis[b] * coeff;
            }
            v
        })?
        .value
        * 0.5;
    Ok(IdentityReport::build(
        IdentityId::PatchCurvatureScalar,
        &patch.surface,
        &format!("{} / boundary {}", grid.resolution(), boundary.resolution()),
        ReportValue::from_vector(&lhs),
        ReportValue::from_vector(&rhs),
        opts.tolerance_for(IdentityId::PatchCurvatureScalar, patch.surface.param_dim()),
        String::new(),
    ))
}

/// Moment identities whose left side must not change when the origin moves:
/// recomputes the integrand with R replaced by R + shift and reports the
/// difference. Valid precisely for the three moment identities, whose paired
/// vector field integrates to zero.
pub fn check_origin_invariance(
    surface: &ParametricSurface,
    grid: &SurfaceGrid,
    id: IdentityId,
    shift: Vector,
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    require_closed(surface)?;
    if shift.dim() != surface.ambient_dim() {
        return Err(GeomError::DimensionMismatch(format!(
            "shift of dimension {} for surface in dimension {}",
            shift.dim(),
            surface.ambient_dim()
        )));
    }
    let weight = |s: &GeometrySample| -> f64 {
        match id {
            IdentityId::MomentNormal => 1.0,
            IdentityId::MomentCurvatureNormal => s.mean_curvature,
            IdentityId::MomentCurvatureScalar => gaussian_or_scalar(s),
            _ => f64::NAN,
        }
    };
    if !matches!(
        id,
        IdentityId::MomentNormal
            | IdentityId::MomentCurvatureNormal
            | IdentityId::MomentCurvatureScalar
    ) {
        return Err(GeomError::InvalidParameter(format!(
            "origin invariance applies to the moment identities, not {id}"
        )));
    }
    let base = grid.integrate(|s| s.position.dot(&s.normal) * weight(s))?.value;
    let shifted = grid.integrate(|s| (s.position + shift).dot(&s.normal) * weight(s))?.value;
    let tolerance = opts.tolerance.unwrap_or(1e-7);
    let notes = format!("origin shifted by {:?} under {}", shift.as_slice(), id);
    Ok(IdentityReport {
        identity_id: format!("origin:{id}"),
        surface: surface.name().to_string(),
        resolution: grid.resolution().to_string(),
        lhs: ReportValue::Scalar(shifted),
        rhs: ReportValue::Scalar(base),
        residual: (shifted - base).abs(),
        tolerance,
        pass: (shifted - base).abs() <= tolerance,
        notes,
        wall_time_ms: 0.0,
    })
}

/// Gauss-Bonnet spot check: ∫ K dS is 4π for the sphere and the ellipsoid
/// (same topology, different shape) and 0 for the torus.
pub fn check_topological_invariance(
    resolution: &[usize],
    opts: &CheckOptions,
) -> Result<IdentityReport> {
    let trio = [
        zoo::make_sphere(1.0)?,
        zoo::make_ellipsoid(1.0, 1.3, 0.7)?,
        zoo::make_torus(2.0, 0.5)?,
    ];
    let expected = [4.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI, 0.0];
    let mut lhs = Vec::with_capacity(3);
    let mut resolution_label = String::new();
    for entry in &trio {
        let rule = crate::quadrature::QuadratureRule::for_surface(&entry.surface, resolution)?;
        let grid = SurfaceGrid::build(&entry.surface, &rule)?;
        lhs.push(grid.integrate(|s| s.gaussian_curvature.expect("2d zoo surface"))?.value);
        resolution_label = grid.resolution().to_string();
    }
    let tolerance = opts.tolerance.unwrap_or(1e-7);
    let lhs_value = ReportValue::Vector(lhs.clone());
    let rhs_value = ReportValue::Vector(expected.to_vec());
    let shape_gap = (lhs[0] - lhs[1]).abs();
    let residual = lhs_value.distance(&rhs_value).max(shape_gap);
    Ok(IdentityReport {
        identity_id: IdentityId::TopologicalInvariance.as_str().to_string(),
        surface: "sphere:r=1 | ellipsoid:a=1,b=1.3,c=0.7 | torus:R=2,r=0.5".to_string(),
        resolution: resolution_label,
        lhs: lhs_value,
        rhs: rhs_value,
        residual,
        tolerance,
        pass: residual <= tolerance,
        notes: format!("sphere-vs-ellipsoid gap {shape_gap:.3e}"),
        wall_time_ms: 0.0,
    })
}

/// Number of boundary quadrature nodes per segment used by default.
pub const DEFAULT_BOUNDARY_NODES: usize = 256;

/// Runs one identity against grids that were already materialized, so a
/// family of identities can share one set of geometry samples.
pub fn run_identity_on_grids(
    surface: &ZooSurface,
    id: IdentityId,
    grid: &SurfaceGrid,
    boundary: Option<&BoundaryGrid>,
    opts: &CheckOptions,
) -> Result<Vec<IdentityReport>> {
    match surface {
        ZooSurface::Closed(entry) => {
            if id.is_patch_identity() {
                return Err(GeomError::NotPatch(entry.surface.name().to_string()));
            }
            let surface = &entry.surface;
            match id {
                IdentityId::ClosedNormal => Ok(vec![check_closed_normal(surface, grid, opts)?]),
                IdentityId::ClosedCurvatureNormal => {
                    Ok(vec![check_closed_curvature_normal(surface, grid, opts)?])
                }
                IdentityId::ClosedCurvatureScalar => {
                    Ok(vec![check_closed_curvature_scalar(surface, grid, opts)?])
                }
                IdentityId::CrossNormal
                | IdentityId::CrossCurvatureNormal
                | IdentityId::CrossCurvatureScalar => {
                    let all = check_cross_identities(surface, grid, opts)?;
                    Ok(all.into_iter().filter(|r| r.identity_id == id.as_str()).collect())
                }
                IdentityId::MomentNormal => Ok(vec![check_moment_normal(surface, grid, opts)?]),
                IdentityId::MomentCurvatureNormal => {
                    Ok(vec![check_moment_curvature_normal(surface, grid, opts)?])
                }
                IdentityId::MomentCurvatureScalar => {
                    Ok(vec![check_moment_curvature_scalar(surface, grid, opts)?])
                }
                _ => Err(GeomError::InvalidParameter(format!(
                    "{id} does not run against a single prepared surface"
                ))),
            }
        }
        ZooSurface::Patch(patch) => {
            if !id.is_patch_identity() {
                return Err(GeomError::NotClosed(patch.surface.name().to_string()));
            }
            let boundary = boundary.ok_or_else(|| {
                GeomError::InvalidParameter("patch identity without a boundary grid".into())
            })?;
            match id {
                IdentityId::PatchNormal => {
                    Ok(vec![check_patch_normal(patch, grid, boundary, opts)?])
                }
                IdentityId::PatchCurvatureNormal => {
                    Ok(vec![check_patch_curvature_normal(patch, grid, boundary, opts)?])
                }
                IdentityId::PatchCurvatureScalar => {
                    Ok(vec![check_patch_curvature_scalar(patch, grid, boundary, opts)?])
                }
                _ => unreachable!(),
            }
        }
    }
}

/// Runs one identity on a zoo surface, returning one report per emitted
/// check (the cross-product identity expands to three).
pub fn run_identity(
    surface: &ZooSurface,
    id: IdentityId,
    resolution: &[usize],
    boundary_nodes: usize,
    opts: &CheckOptions,
) -> Result<Vec<IdentityReport>> {
    if id == IdentityId::TopologicalInvariance {
        return Ok(vec![check_topological_invariance(resolution, opts)?]);
    }
    let inner = surface.surface();
    let rule = crate::quadrature::QuadratureRule::for_surface(inner, resolution)?;
    let grid = SurfaceGrid::build(inner, &rule)?;
    let boundary = match surface.boundary() {
        Some(curve) if id.is_patch_identity() => Some(BoundaryGrid::build(curve, boundary_nodes)?),
        _ => None,
    };
    run_identity_on_grids(surface, id, &grid, boundary.as_ref(), opts)
}
