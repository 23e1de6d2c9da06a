//! Analytic test surfaces with exact jets to order 2, their closed-form
//! invariants, and the classical minimal-surface residual checks.
//!
//! Jets are hand-authored (no finite differences below third order), so
//! integral residuals isolate quadrature error. Surfaces are addressable
//! from the CLI by `name:key=value,...` selectors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::surface::{
    Axis, BoundaryCurve, BoundarySegment, CurvePath, Domain, Jet2, ParametricSurface,
    SurfaceJets,
};
use crate::tensor::Vector;

/// Named exact values of a zoo surface, used as extra assertions next to the
/// always-numerical identity checks.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedForms {
    pub area: Option<f64>,
    pub volume: Option<f64>,
    /// ∫ H dS over the closed surface.
    pub total_mean_curvature: Option<f64>,
    /// ∫ K dS over the closed surface.
    pub total_gaussian_curvature: Option<f64>,
    /// Pointwise mean curvature where constant.
    pub mean_curvature: Option<f64>,
    /// Pointwise Gaussian curvature where constant.
    pub gaussian_curvature: Option<f64>,
    /// Pointwise scalar curvature where constant.
    pub scalar_curvature: Option<f64>,
}

/// A closed zoo surface together with its exact values.
#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub surface: ParametricSurface,
    pub closed_forms: ClosedForms,
    /// Parameter-space description of degenerate loci to keep samples away
    /// from (quadrature nodes avoid them by construction).
    pub degenerate_loci: Vec<String>,
}

/// An open patch with its boundary curve.
#[derive(Clone)]
pub struct PatchEntry {
    pub surface: ParametricSurface,
    pub boundary: BoundaryCurve,
}

/// Any surface the CLI can address.
#[derive(Clone)]
pub enum ZooSurface {
    Closed(ZooEntry),
    Patch(PatchEntry),
}

impl ZooSurface {
    pub fn surface(&self) -> &ParametricSurface {
        match self {
            ZooSurface::Closed(entry) => &entry.surface,
            ZooSurface::Patch(patch) => &patch.surface,
        }
    }

    pub fn boundary(&self) -> Option<&BoundaryCurve> {
        match self {
            ZooSurface::Closed(_) => None,
            ZooSurface::Patch(patch) => Some(&patch.boundary),
        }
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(GeomError::InvalidParameter(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}

fn sphere_jets(radius: f64, scale: Vector) -> SurfaceJets {
    Arc::new(move |p: &[f64]| {
        let (theta, phi) = (p[0], p[1]);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let at = |x: f64, y: f64, z: f64| {
            Vector::new3(radius * scale[0] * x, radius * scale[1] * y, radius * scale[2] * z)
        };
        let mut jet = Jet2::zeros(3);
        jet.position = at(st * cp, st * sp, ct);
        jet.first[0] = at(ct * cp, ct * sp, -st);
        jet.first[1] = at(-st * sp, st * cp, 0.0);
        jet.second[0][0] = at(-st * cp, -st * sp, -ct);
        jet.second[0][1] = at(-ct * sp, ct * cp, 0.0);
        jet.second[1][0] = jet.second[0][1];
        jet.second[1][1] = at(-st * cp, -st * sp, 0.0);
        jet
    })
}

/// Round sphere of the given radius, parametrized by colatitude and azimuth.
pub fn make_sphere(radius: f64) -> Result<ZooEntry> {
    check_positive("sphere radius", radius)?;
    let domain = Domain::new(vec![Axis::new(0.0, PI, false), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(
        format!("sphere:r={radius}"),
        3,
        domain,
        true,
        sphere_jets(radius, Vector::new3(1.0, 1.0, 1.0)),
    )?
    .with_area_hint(4.0 * PI * radius * radius)
    .with_volume_hint(4.0 * PI * radius.powi(3) / 3.0);
    Ok(ZooEntry {
        surface,
        closed_forms: ClosedForms {
            area: Some(4.0 * PI * radius * radius),
            volume: Some(4.0 * PI * radius.powi(3) / 3.0),
            total_mean_curvature: Some(-8.0 * PI * radius),
            total_gaussian_curvature: Some(4.0 * PI),
            mean_curvature: Some(-2.0 / radius),
            gaussian_curvature: Some(1.0 / (radius * radius)),
            scalar_curvature: Some(2.0 / (radius * radius)),
        },
        degenerate_loci: vec!["theta = 0".into(), "theta = pi".into()],
    })
}

/// Triaxial ellipsoid with semi-axes (a, b, c).
pub fn make_ellipsoid(a: f64, b: f64, c: f64) -> Result<ZooEntry> {
    check_positive("ellipsoid semi-axis a", a)?;
    check_positive("ellipsoid semi-axis b", b)?;
    check_positive("ellipsoid semi-axis c", c)?;
    let domain = Domain::new(vec![Axis::new(0.0, PI, false), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(
        format!("ellipsoid:a={a},b={b},c={c}"),
        3,
        domain,
        true,
        sphere_jets(1.0, Vector::new3(a, b, c)),
    )?
    .with_volume_hint(4.0 * PI * a * b * c / 3.0);
    Ok(ZooEntry {
        surface,
        closed_forms: ClosedForms {
            volume: Some(4.0 * PI * a * b * c / 3.0),
            total_gaussian_curvature: Some(4.0 * PI),
            ..ClosedForms::default()
        },
        degenerate_loci: vec!["theta = 0".into(), "theta = pi".into()],
    })
}

fn torus_jets(major: f64, minor: f64) -> SurfaceJets {
    Arc::new(move |p: &[f64]| {
        let (theta, phi) = (p[0], p[1]);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let ring = major + minor * ct;
        let mut jet = Jet2::zeros(3);
        jet.position = Vector::new3(ring * cp, ring * sp, minor * st);
        jet.first[0] = Vector::new3(-minor * st * cp, -minor * st * sp, minor * ct);
        jet.first[1] = Vector::new3(-ring * sp, ring * cp, 0.0);
        jet.second[0][0] = Vector::new3(-minor * ct * cp, -minor * ct * sp, -minor * st);
        jet.second[0][1] = Vector::new3(minor * st * sp, -minor * st * cp, 0.0);
        jet.second[1][0] = jet.second[0][1];
        jet.second[1][1] = Vector::new3(-ring * cp, -ring * sp, 0.0);
        jet
    })
}

/// Torus of revolution about the z axis, parametrized by tube angle and
/// azimuth (both periodic).
pub fn make_torus(major: f64, minor: f64) -> Result<ZooEntry> {
    check_positive("torus major radius", major)?;
    check_positive("torus minor radius", minor)?;
    if major <= minor {
        return Err(GeomError::InvalidParameter(format!(
            "torus needs major > minor, got {major} <= {minor}"
        )));
    }
    let domain =
        Domain::new(vec![Axis::new(0.0, 2.0 * PI, true), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(
        format!("torus:R={major},r={minor}"),
        3,
        domain,
        true,
        torus_jets(major, minor),
    )?
    .with_area_hint(4.0 * PI * PI * major * minor)
    .with_volume_hint(2.0 * PI * PI * major * minor * minor);
    Ok(ZooEntry {
        surface,
        closed_forms: ClosedForms {
            area: Some(4.0 * PI * PI * major * minor),
            volume: Some(2.0 * PI * PI * major * minor * minor),
            total_mean_curvature: Some(-4.0 * PI * PI * major),
            total_gaussian_curvature: Some(0.0),
            ..ClosedForms::default()
        },
        degenerate_loci: Vec::new(),
    })
}

/// Unit 3-sphere analogue in four-dimensional space, parametrized by two
/// polar angles and one azimuth.
pub fn make_hypersphere3(radius: f64) -> Result<ZooEntry> {
    check_positive("hypersphere radius", radius)?;
    let jets: SurfaceJets = Arc::new(move |p: &[f64]| {
        let (t1, t2, phi) = (p[0], p[1], p[2]);
        let (s1, c1) = t1.sin_cos();
        let (s2, c2) = t2.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let at = |a: f64, b: f64, c: f64, d: f64| {
            Vector::new4(radius * a, radius * b, radius * c, radius * d)
        };
        let mut jet = Jet2::zeros(4);
        jet.position = at(c1, s1 * c2, s1 * s2 * cp, s1 * s2 * sp);
        jet.first[0] = at(-s1, c1 * c2, c1 * s2 * cp, c1 * s2 * sp);
        jet.first[1] = at(0.0, -s1 * s2, s1 * c2 * cp, s1 * c2 * sp);
        jet.first[2] = at(0.0, 0.0, -s1 * s2 * sp, s1 * s2 * cp);
        jet.second[0][0] = at(-c1, -s1 * c2, -s1 * s2 * cp, -s1 * s2 * sp);
        jet.second[0][1] = at(0.0, -c1 * s2, c1 * c2 * cp, c1 * c2 * sp);
        jet.second[0][2] = at(0.0, 0.0, -c1 * s2 * sp, c1 * s2 * cp);
        jet.second[1][1] = at(0.0, -s1 * c2, -s1 * s2 * cp, -s1 * s2 * sp);
        jet.second[1][2] = at(0.0, 0.0, -s1 * c2 * sp, s1 * c2 * cp);
        jet.second[2][2] = at(0.0, 0.0, -s1 * s2 * cp, -s1 * s2 * sp);
        jet.second[1][0] = jet.second[0][1];
        jet.second[2][0] = jet.second[0][2];
        jet.second[2][1] = jet.second[1][2];
        jet
    });
    let domain = Domain::new(vec![
        Axis::new(0.0, PI, false),
        Axis::new(0.0, PI, false),
        Axis::new(0.0, 2.0 * PI, true),
    ]);
    let surface =
        ParametricSurface::new(format!("hypersphere3:r={radius}"), 4, domain, true, jets)?
            .with_area_hint(2.0 * PI * PI * radius.powi(3))
            .with_volume_hint(PI * PI * radius.powi(4) / 2.0);
    Ok(ZooEntry {
        surface,
        closed_forms: ClosedForms {
            area: Some(2.0 * PI * PI * radius.powi(3)),
            volume: Some(PI * PI * radius.powi(4) / 2.0),
            total_mean_curvature: Some(-6.0 * PI * PI * radius * radius),
            mean_curvature: Some(-3.0 / radius),
            scalar_curvature: Some(6.0 / (radius * radius)),
            ..ClosedForms::default()
        },
        degenerate_loci: vec!["theta1 in {0, pi}".into(), "theta2 in {0, pi}".into()],
    })
}

/// Catenoid of waist radius `a` over the axial range `z_range`: the surface
/// of revolution of the catenary r(z) = a cosh(z/a).
pub fn make_catenoid(a: f64, z_range: (f64, f64)) -> Result<ZooEntry> {
    check_positive("catenoid waist radius", a)?;
    let (z0, z1) = z_range;
    if !(z0.is_finite() && z1.is_finite() && z0 < z1) {
        return Err(GeomError::InvalidParameter(format!(
            "catenoid axial range ({z0}, {z1}) is not a bounded interval"
        )));
    }
    let jets: SurfaceJets = Arc::new(move |p: &[f64]| {
        let (z, phi) = (p[0], p[1]);
        let r = a * (z / a).cosh();
        let dr = (z / a).sinh();
        let ddr = (z / a).cosh() / a;
        let (sp, cp) = phi.sin_cos();
        let mut jet = Jet2::zeros(3);
        jet.position = Vector::new3(r * cp, r * sp, z);
        jet.first[0] = Vector::new3(dr * cp, dr * sp, 1.0);
        jet.first[1] = Vector::new3(-r * sp, r * cp, 0.0);
        jet.second[0][0] = Vector::new3(ddr * cp, ddr * sp, 0.0);
        jet.second[0][1] = Vector::new3(-dr * sp, dr * cp, 0.0);
        jet.second[1][0] = jet.second[0][1];
        jet.second[1][1] = Vector::new3(-r * cp, -r * sp, 0.0);
        jet
    });
    let domain = Domain::new(vec![Axis::new(z0, z1, false), Axis::new(0.0, 2.0 * PI, true)]);
    // ∫ 2π a cosh²(z/a) dz = π a² (u + sinh u cosh u), u = z/a.
    let anti = |z: f64| {
        let u = z / a;
        PI * a * a * (u + u.sinh() * u.cosh())
    };
    let surface = ParametricSurface::new(
        format!("catenoid:a={a},z={z0}..{z1}"),
        3,
        domain,
        false,
        jets,
    )?
    .with_area_hint(anti(z1) - anti(z0));
    Ok(ZooEntry {
        surface,
        closed_forms: ClosedForms {
            area: Some(anti(z1) - anti(z0)),
            mean_curvature: Some(0.0),
            ..ClosedForms::default()
        },
        degenerate_loci: Vec::new(),
    })
}

/// Gaussian curvature of the catenoid, K(z) = −1 / (a² cosh⁴(z/a)).
pub fn catenoid_gaussian_curvature(a: f64, z: f64) -> f64 {
    -1.0 / (a * a * (z / a).cosh().powi(4))
}

/// Residual of the catenary equation r″ r − r′² − 1 = 0 for a profile that
/// reports value and two derivatives at `z`.
pub fn catenary_residual<F>(profile: F, z: f64) -> f64
where
    F: Fn(f64) -> (f64, f64, f64),
{
    let (r, dr, ddr) = profile(z);
    ddr * r - dr * dr - 1.0
}

/// Height-function jet of a Monge patch z = F(x, y).
#[derive(Clone, Copy, Debug)]
pub struct MongeJet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

/// The minimal-surface expression
/// F_xx + F_yy + F_xx F_y² + F_yy F_x² − 2 F_x F_y F_xy.
///
/// For the upward-normal convention of [`make_monge_graph`], this equals
/// H (1 + |∇F|²)^{3/2} pointwise.
pub fn lagrange_residual(jet: &MongeJet) -> f64 {
    jet.dxx + jet.dyy + jet.dxx * jet.dy * jet.dy + jet.dyy * jet.dx * jet.dx
        - 2.0 * jet.dx * jet.dy * jet.dxy
}

type MongeFn = dyn Fn(f64, f64) -> MongeJet + Send + Sync;

/// Graph surface R = (x, y, F(x, y)) over a rectangle, with the upward
/// normal the jet order (x, y) defines.
pub fn make_monge_graph(
    name: impl Into<String>,
    height: Arc<MongeFn>,
    x_range: (f64, f64),
    y_range: (f64, f64),
) -> Result<ZooEntry> {
    let height_for_jets = Arc::clone(&height);
    let jets: SurfaceJets = Arc::new(move |p: &[f64]| {
        let f = height_for_jets(p[0], p[1]);
        let mut jet = Jet2::zeros(3);
        jet.position = Vector::new3(p[0], p[1], f.value);
        jet.first[0] = Vector::new3(1.0, 0.0, f.dx);
        jet.first[1] = Vector::new3(0.0, 1.0, f.dy);
        jet.second[0][0] = Vector::new3(0.0, 0.0, f.dxx);
        jet.second[0][1] = Vector::new3(0.0, 0.0, f.dxy);
        jet.second[1][0] = jet.second[0][1];
        jet.second[1][1] = Vector::new3(0.0, 0.0, f.dyy);
        jet
    });
    let domain = Domain::new(vec![
        Axis::new(x_range.0, x_range.1, false),
        Axis::new(y_range.0, y_range.1, false),
    ]);
    let surface = ParametricSurface::new(name, 3, domain, false, jets)?;
    Ok(ZooEntry { surface, closed_forms: ClosedForms::default(), degenerate_loci: Vec::new() })
}

/// Built-in Monge height functions addressable from the CLI, returned with
/// their (x, y) domains.
#[allow(clippy::type_complexity)]
pub fn monge_height(name: &str) -> Result<(Arc<MongeFn>, (f64, f64), (f64, f64))> {
    let square = (-1.0, 1.0);
    match name {
        "paraboloid" => Ok((
            Arc::new(|x, y| MongeJet {
                value: x * x + y * y,
                dx: 2.0 * x,
                dy: 2.0 * y,
                dxx: 2.0,
                dxy: 0.0,
                dyy: 2.0,
            }),
            square,
            square,
        )),
        "saddle" => Ok((
            Arc::new(|x, y| MongeJet {
                value: x * x - y * y,
                dx: 2.0 * x,
                dy: -2.0 * y,
                dxx: 2.0,
                dxy: 0.0,
                dyy: -2.0,
            }),
            square,
            square,
        )),
        "bump" => Ok((
            Arc::new(|x, y| MongeJet {
                value: x.sin() * y.sin(),
                dx: x.cos() * y.sin(),
                dy: x.sin() * y.cos(),
                dxx: -x.sin() * y.sin(),
                dxy: x.cos() * y.cos(),
                dyy: -x.sin() * y.sin(),
            }),
            square,
            square,
        )),
        "scherk" => Ok((
            Arc::new(|x, y| MongeJet {
                value: (x.cos() / y.cos()).ln(),
                dx: -x.tan(),
                dy: y.tan(),
                dxx: -1.0 / (x.cos() * x.cos()),
                dxy: 0.0,
                dyy: 1.0 / (y.cos() * y.cos()),
            }),
            (-1.2, 1.2),
            (-1.2, 1.2),
        )),
        other => Err(GeomError::InvalidParameter(format!(
            "unknown Monge height function '{other}' (expected paraboloid, saddle, bump or scherk)"
        ))),
    }
}

fn circle_of_latitude(theta: f64) -> CurvePath {
    Arc::new(move |t| (vec![theta, t], vec![0.0, 1.0]))
}

/// Upper hemisphere patch of the given radius; boundary is the equator.
pub fn make_hemisphere(radius: f64) -> Result<PatchEntry> {
    check_positive("hemisphere radius", radius)?;
    let domain =
        Domain::new(vec![Axis::new(0.0, FRAC_PI_2, false), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(
        format!("hemisphere:r={radius}"),
        3,
        domain,
        false,
        sphere_jets(radius, Vector::new3(1.0, 1.0, 1.0)),
    )?
    .with_area_hint(2.0 * PI * radius * radius);
    let boundary = BoundaryCurve::new(
        surface.clone(),
        vec![BoundarySegment::new(0.0, 2.0 * PI, true, circle_of_latitude(FRAC_PI_2))],
    );
    Ok(PatchEntry { surface, boundary })
}

/// Spherical cap of colatitude `theta0`; boundary is the rim circle.
pub fn make_spherical_cap(radius: f64, theta0: f64) -> Result<PatchEntry> {
    check_positive("cap radius", radius)?;
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(GeomError::InvalidParameter(format!(
            "cap colatitude must lie in (0, pi), got {theta0}"
        )));
    }
    let domain =
        Domain::new(vec![Axis::new(0.0, theta0, false), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(
        format!("cap:r={radius},theta0={theta0}"),
        3,
        domain,
        false,
        sphere_jets(radius, Vector::new3(1.0, 1.0, 1.0)),
    )?;
    let boundary = BoundaryCurve::new(
        surface.clone(),
        vec![BoundarySegment::new(0.0, 2.0 * PI, true, circle_of_latitude(theta0))],
    );
    Ok(PatchEntry { surface, boundary })
}

/// Flat disk of the given radius in the z = 0 plane, with upward normal.
pub fn make_disk(radius: f64) -> Result<PatchEntry> {
    check_positive("disk radius", radius)?;
    let jets: SurfaceJets = Arc::new(move |p: &[f64]| {
        let (u, phi) = (p[0], p[1]);
        let (sp, cp) = phi.sin_cos();
        let mut jet = Jet2::zeros(3);
        jet.position = Vector::new3(u * cp, u * sp, 0.0);
        jet.first[0] = Vector::new3(cp, sp, 0.0);
        jet.first[1] = Vector::new3(-u * sp, u * cp, 0.0);
        jet.second[0][1] = Vector::new3(-sp, cp, 0.0);
        jet.second[1][0] = jet.second[0][1];
        jet.second[1][1] = Vector::new3(-u * cp, -u * sp, 0.0);
        jet
    });
    let domain =
        Domain::new(vec![Axis::new(0.0, radius, false), Axis::new(0.0, 2.0 * PI, true)]);
    let surface = ParametricSurface::new(format!("disk:r={radius}"), 3, domain, false, jets)?
        .with_area_hint(PI * radius * radius);
    let rim: CurvePath =
        Arc::new(move |t| (vec![radius, t], vec![0.0, 1.0]));
    let boundary = BoundaryCurve::new(
        surface.clone(),
        vec![BoundarySegment::new(0.0, 2.0 * PI, true, rim)],
    );
    Ok(PatchEntry { surface, boundary })
}

/// Half torus cut at two meridians (azimuth 0 and π); the boundary is the
/// pair of meridian circles.
pub fn make_half_torus(major: f64, minor: f64) -> Result<PatchEntry> {
    check_positive("torus major radius", major)?;
    check_positive("torus minor radius", minor)?;
    if major <= minor {
        return Err(GeomError::InvalidParameter(format!(
            "torus needs major > minor, got {major} <= {minor}"
        )));
    }
    let domain = Domain::new(vec![Axis::new(0.0, 2.0 * PI, true), Axis::new(0.0, PI, false)]);
    let surface = ParametricSurface::new(
        format!("halftorus:R={major},r={minor}"),
        3,
        domain,
        false,
        torus_jets(major, minor),
    )?;
    let meridian = |phi: f64| -> CurvePath {
        Arc::new(move |t| (vec![t, phi], vec![1.0, 0.0]))
    };
    let boundary = BoundaryCurve::new(
        surface.clone(),
        vec![
            BoundarySegment::new(0.0, 2.0 * PI, true, meridian(0.0)),
            BoundarySegment::new(0.0, 2.0 * PI, true, meridian(PI)),
        ],
    );
    Ok(PatchEntry { surface, boundary })
}

/// Quarter-sphere lune bounded by the meridians at azimuth 0 and π/2. The
/// two meridian segments meet at the poles; quadrature nodes stay interior,
/// so the chart degeneracy there is never evaluated.
pub fn make_lune(radius: f64) -> Result<PatchEntry> {
    check_positive("lune radius", radius)?;
    let domain =
        Domain::new(vec![Axis::new(0.0, PI, false), Axis::new(0.0, FRAC_PI_2, false)]);
    let surface = ParametricSurface::new(
        format!("lune:r={radius}"),
        3,
        domain,
        false,
        sphere_jets(radius, Vector::new3(1.0, 1.0, 1.0)),
    )?;
    let meridian = |phi: f64| -> CurvePath {
        Arc::new(move |t| (vec![t, phi], vec![1.0, 0.0]))
    };
    let boundary = BoundaryCurve::new(
        surface.clone(),
        vec![
            BoundarySegment::new(0.0, PI, false, meridian(0.0)),
            BoundarySegment::new(0.0, PI, false, meridian(FRAC_PI_2)),
        ],
    );
    Ok(PatchEntry { surface, boundary })
}

/// Catalog of selector names with their parameter syntax, for `list` output
/// and error messages.
pub fn selector_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("sphere", "sphere:r=<radius>"),
        ("ellipsoid", "ellipsoid:a=<a>,b=<b>,c=<c>"),
        ("torus", "torus:R=<major>,r=<minor>"),
        ("hypersphere3", "hypersphere3:r=<radius>"),
        ("catenoid", "catenoid:a=<waist>,zmin=<z0>,zmax=<z1>"),
        ("monge", "monge:f=<paraboloid|saddle|bump|scherk>"),
        ("hemisphere", "hemisphere:r=<radius>"),
        ("cap", "cap:r=<radius>,theta0=<colatitude>"),
        ("disk", "disk:r=<radius>"),
        ("halftorus", "halftorus:R=<major>,r=<minor>"),
        ("lune", "lune:r=<radius>"),
    ]
}

fn parse_params(args: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    if args.is_empty() {
        return Ok(out);
    }
    for part in args.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            GeomError::InvalidParameter(format!("malformed selector parameter '{part}'"))
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn numeric(params: &[(String, String)], key: &str, default: f64) -> Result<f64> {
    for (k, v) in params {
        if k == key {
            return v.parse::<f64>().map_err(|_| {
                GeomError::InvalidParameter(format!("parameter {key}={v} is not a number"))
            });
        }
    }
    Ok(default)
}

/// Builds a zoo surface from a CLI selector such as `torus:R=2,r=0.5`.
pub fn from_selector(selector: &str) -> Result<ZooSurface> {
    let (name, args) = selector.split_once(':').unwrap_or((selector, ""));
    let params = parse_params(args)?;
    match name {
        "sphere" => Ok(ZooSurface::Closed(make_sphere(numeric(&params, "r", 1.0)?)?)),
        "ellipsoid" => Ok(ZooSurface::Closed(make_ellipsoid(
            numeric(&params, "a", 1.0)?,
            numeric(&params, "b", 1.3)?,
            numeric(&params, "c", 0.7)?,
        )?)),
        "torus" => Ok(ZooSurface::Closed(make_torus(
            numeric(&params, "R", 2.0)?,
            numeric(&params, "r", 0.5)?,
        )?)),
        "hypersphere3" => {
            Ok(ZooSurface::Closed(make_hypersphere3(numeric(&params, "r", 1.0)?)?))
        }
        "catenoid" => Ok(ZooSurface::Closed(make_catenoid(
            numeric(&params, "a", 1.0)?,
            (numeric(&params, "zmin", -1.0)?, numeric(&params, "zmax", 1.0)?),
        )?)),
        "monge" => {
            let fname = params
                .iter()
                .find(|(k, _)| k == "f")
                .map(|(_, v)| v.as_str())
                .unwrap_or("paraboloid");
            let (height, x_range, y_range) = monge_height(fname)?;
            Ok(ZooSurface::Closed(make_monge_graph(
                format!("monge:f={fname}"),
                height,
                x_range,
                y_range,
            )?))
        }
        "hemisphere" => Ok(ZooSurface::Patch(make_hemisphere(numeric(&params, "r", 1.0)?)?)),
        "cap" => Ok(ZooSurface::Patch(make_spherical_cap(
            numeric(&params, "r", 1.0)?,
            numeric(&params, "theta0", PI / 4.0)?,
        )?)),
        "disk" => Ok(ZooSurface::Patch(make_disk(numeric(&params, "r", 1.0)?)?)),
        "halftorus" => Ok(ZooSurface::Patch(make_half_torus(
            numeric(&params, "R", 2.0)?,
            numeric(&params, "r", 0.5)?,
        )?)),
        "lune" => Ok(ZooSurface::Patch(make_lune(numeric(&params, "r", 1.0)?)?)),
        other => {
            let names: Vec<&str> = selector_catalog().iter().map(|(n, _)| *n).collect();
            Err(GeomError::InvalidParameter(format!(
                "unknown surface '{other}'; valid surfaces: {}",
                names.join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_surface, QuadratureRule};
    use crate::surface::DEGENERACY_MARGIN;

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(make_sphere(0.0).is_err());
        assert!(make_sphere(-1.0).is_err());
        assert!(make_torus(0.5, 2.0).is_err());
        assert!(make_catenoid(1.0, (1.0, -1.0)).is_err());
        assert!(make_spherical_cap(1.0, 4.0).is_err());
    }

    #[test]
    fn catenoid_is_minimal_on_dense_grid() {
        let entry = make_catenoid(1.0, (-1.0, 1.0)).unwrap();
        let mut worst: f64 = 0.0;
        for p in entry.surface.interior_grid(50, DEGENERACY_MARGIN) {
            let s = entry.surface.sample(&p).unwrap();
            worst = worst.max(s.mean_curvature.abs());
        }
        assert!(worst < 1e-10, "max |H| = {worst}");
    }

    #[test]
    fn catenoid_gaussian_curvature_matches_formula_and_is_negative() {
        let a = 1.0;
        let entry = make_catenoid(a, (-1.0, 1.0)).unwrap();
        for p in entry.surface.interior_grid(12, DEGENERACY_MARGIN) {
            let s = entry.surface.sample(&p).unwrap();
            let k = s.gaussian_curvature.unwrap();
            let expected = catenoid_gaussian_curvature(a, p[0]);
            assert!(k < 0.0);
            assert!((k - expected).abs() < 1e-12 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn catenary_residual_examples() {
        let cosh_profile = |z: f64| (z.cosh(), z.sinh(), z.cosh());
        assert!(catenary_residual(cosh_profile, 0.35).abs() < 1e-12);

        for a in [0.5, 1.0, 2.0] {
            let scaled = move |z: f64| ((z / a).cosh() * a, (z / a).sinh(), (z / a).cosh() / a);
            for z in [-0.8, 0.0, 0.6, 1.3] {
                assert!(catenary_residual(scaled, z).abs() < 1e-12, "a = {a}, z = {z}");
            }
        }

        // Non-catenary profile r = 1 + z²: residual is 1 − 2z².
        let parabola = |z: f64| (1.0 + z * z, 2.0 * z, 2.0);
        for z in [0.0, 0.5, 1.0] {
            let expected = 1.0 - 2.0 * z * z;
            assert!((catenary_residual(parabola, z) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn lagrange_residual_examples() {
        // Linear height: every second derivative vanishes.
        let linear = MongeJet { value: 1.0, dx: 3.0, dy: -2.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 };
        assert_eq!(lagrange_residual(&linear), 0.0);

        // x² − y² at the origin: harmonic with flat gradient.
        let saddle_origin =
            MongeJet { value: 0.0, dx: 0.0, dy: 0.0, dxx: 2.0, dxy: 0.0, dyy: -2.0 };
        assert_eq!(lagrange_residual(&saddle_origin), 0.0);

        // x² + y² at (1, 0): 2·1 + 2·5 = 12.
        let (height, _, _) = monge_height("paraboloid").unwrap();
        assert_eq!(lagrange_residual(&height(1.0, 0.0)), 12.0);
        // And at the origin the residual reduces to the Laplacian, 4.
        assert_eq!(lagrange_residual(&height(0.0, 0.0)), 4.0);
    }

    #[test]
    fn lagrange_residual_is_mean_curvature_times_gradient_factor() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for fname in ["paraboloid", "saddle", "bump"] {
            let (height, x_range, y_range) = monge_height(fname).unwrap();
            let entry = make_monge_graph(
                format!("monge:f={fname}"),
                Arc::clone(&height),
                x_range,
                y_range,
            )
            .unwrap();
            for _ in 0..100 {
                let x = rng.gen_range(x_range.0..x_range.1);
                let y = rng.gen_range(y_range.0..y_range.1);
                let s = entry.surface.sample(&[x, y]).unwrap();
                if s.mean_curvature.abs() < 1e-6 {
                    continue;
                }
                let jet = height(x, y);
                let w = (1.0 + jet.dx * jet.dx + jet.dy * jet.dy).sqrt();
                let ratio = lagrange_residual(&jet) / (s.mean_curvature * w.powi(3));
                assert!((ratio - 1.0).abs() < 1e-10, "{fname}: ratio {ratio}");
            }
        }
    }

    #[test]
    fn scherk_height_is_minimal() {
        let (height, x_range, y_range) = monge_height("scherk").unwrap();
        let entry = make_monge_graph("monge:f=scherk", height, x_range, y_range).unwrap();
        for p in entry.surface.interior_grid(15, 1e-6) {
            let s = entry.surface.sample(&p).unwrap();
            assert!(s.mean_curvature.abs() < 1e-12, "H = {} at {p:?}", s.mean_curvature);
        }
    }

    #[test]
    fn zoo_closed_forms_reproduced_by_quadrature() {
        let entries = [
            make_sphere(1.0).unwrap(),
            make_torus(2.0, 0.5).unwrap(),
            make_ellipsoid(1.0, 1.3, 0.7).unwrap(),
        ];
        for entry in &entries {
            let rule = QuadratureRule::for_surface(&entry.surface, &[64, 64]).unwrap();
            if let Some(area) = entry.closed_forms.area {
                let value = integrate_surface(&entry.surface, &rule, |_| 1.0f64).unwrap().value;
                assert!((value - area).abs() < 1e-8, "{} area {value}", entry.surface.name());
            }
            if let Some(total_h) = entry.closed_forms.total_mean_curvature {
                let value =
                    integrate_surface(&entry.surface, &rule, |s| s.mean_curvature).unwrap().value;
                assert!((value - total_h).abs() < 1e-8, "{} ∫H {value}", entry.surface.name());
            }
            if let Some(total_k) = entry.closed_forms.total_gaussian_curvature {
                let value = integrate_surface(&entry.surface, &rule, |s| {
                    s.gaussian_curvature.unwrap()
                })
                .unwrap()
                .value;
                assert!((value - total_k).abs() < 1e-7, "{} ∫K {value}", entry.surface.name());
            }
        }
        let hs = make_hypersphere3(1.0).unwrap();
        let rule = QuadratureRule::for_surface(&hs.surface, &[24, 24, 48]).unwrap();
        let area = integrate_surface(&hs.surface, &rule, |_| 1.0f64).unwrap().value;
        assert!((area - hs.closed_forms.area.unwrap()).abs() < 1e-8);
        let total_h = integrate_surface(&hs.surface, &rule, |s| s.mean_curvature).unwrap().value;
        assert!((total_h - hs.closed_forms.total_mean_curvature.unwrap()).abs() < 1e-7);
    }

    #[test]
    fn selectors_round_trip() {
        for selector in [
            "sphere:r=1",
            "ellipsoid:a=1,b=1.3,c=0.7",
            "torus:R=2,r=0.5",
            "hypersphere3:r=1",
            "catenoid:a=1,zmin=-1,zmax=1",
            "monge:f=saddle",
            "hemisphere:r=1",
            "cap:r=1,theta0=0.785398",
            "disk:r=1",
            "halftorus:R=2,r=0.5",
            "lune:r=1",
        ] {
            assert!(from_selector(selector).is_ok(), "selector {selector}");
        }
        assert!(from_selector("bogus").is_err());
        assert!(from_selector("sphere:r=zero").is_err());
        assert!(from_selector("torus:R=0.5,r=2").is_err());
    }
}
