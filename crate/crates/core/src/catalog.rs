//! Generators for the explicitly known translator families: vertical
//! (minimal) hyperplanes, grim reaper cylinders and their tilted variants,
//! the bowl soliton and the winglike (translating catenoid) family.

use crate::geom::{
    GraphDirection, GraphPatch, GridSpec, Point, ProfileSample, RotProfile, SurfaceSample,
};
use crate::num::{cast_usize, lit, Real};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("grid leaves the domain of definition ({0})")]
    GridOutsideDomain(String),
    #[error("tilt angle must lie in [0, pi/2), got {0}")]
    BadTilt(f64),
    #[error("arclength step {step} too large for r_max {r_max} (need step <= r_max/100)")]
    StepTooLarge { step: f64, r_max: f64 },
    #[error("neck radius must be positive")]
    BadNeck,
    #[error("dimension n must be at least 2 for rotationally symmetric families")]
    BadDimension,
    #[error("cylinder normal must be a horizontal unit vector")]
    NonHorizontalNormal,
    #[error("candidate formula failed the translator residual gate (max |H - <e,nu>| = {0})")]
    ResidualGate(f64),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
}

/// Named translator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Plane,
    GrimReaper,
    TiltedGrimReaper,
    Bowl,
    Winglike,
    MinimalCylinder,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "plane" => Some(Family::Plane),
            "grim_reaper" => Some(Family::GrimReaper),
            "tilted_grim_reaper" => Some(Family::TiltedGrimReaper),
            "bowl" => Some(Family::Bowl),
            "winglike" => Some(Family::Winglike),
            "minimal_cylinder" => Some(Family::MinimalCylinder),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Plane => "plane",
            Family::GrimReaper => "grim_reaper",
            Family::TiltedGrimReaper => "tilted_grim_reaper",
            Family::Bowl => "bowl",
            Family::Winglike => "winglike",
            Family::MinimalCylinder => "minimal_cylinder",
        }
    }
}

/// Grim reaper cylinder: `u(x) = -ln cos(x_1)` on a grid strictly inside
/// the slab `(-pi/2, pi/2) x R^{n-1}`.
pub fn grim_reaper<T: Real>(n: usize, grid: GridSpec<T>) -> Result<GraphPatch<T>, CatalogError> {
    assert_eq!(grid.dims.len(), n);
    let half_pi = T::FRAC_PI_2();
    let lo = grid.origin[0];
    let hi = grid.origin[0] + grid.spacing * cast_usize::<T>(grid.dims[0] - 1);
    if lo <= -half_pi || hi >= half_pi {
        return Err(CatalogError::GridOutsideDomain(format!(
            "x_1 range [{}, {}] touches +-pi/2",
            lo.to_f64().unwrap_or(f64::NAN),
            hi.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(GraphPatch::from_fn(GraphDirection::Vertical, grid, |x| {
        -(x[0].cos().ln())
    }))
}

/// Tilted grim reaper: candidate closed form
/// `u(x) = sec^2(t) * (-ln cos(x_1 cos t)) + x_2 tan t`,
/// gated by the translator residual before being returned.
pub fn tilted_grim_reaper<T: Real>(
    n: usize,
    theta: T,
    grid: GridSpec<T>,
) -> Result<GraphPatch<T>, CatalogError> {
    assert_eq!(grid.dims.len(), n);
    assert!(n >= 2, "tilted grim reaper needs a second coordinate to grow along");
    let half_pi = T::FRAC_PI_2();
    if theta < T::zero() || theta >= half_pi {
        return Err(CatalogError::BadTilt(theta.to_f64().unwrap_or(f64::NAN)));
    }
    let c = theta.cos();
    let slab = half_pi / c;
    let lo = grid.origin[0];
    let hi = grid.origin[0] + grid.spacing * cast_usize::<T>(grid.dims[0] - 1);
    if lo <= -slab || hi >= slab {
        return Err(CatalogError::GridOutsideDomain(format!(
            "x_1 range exceeds slab of half-width {}",
            slab.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let sec2 = (c * c).recip();
    let tan_t = theta.tan();
    let patch = GraphPatch::from_fn(GraphDirection::Vertical, grid, |x| {
        sec2 * -((x[0] * c).cos().ln()) + x[1] * tan_t
    });
    // The closed form is a candidate; only emit it if it actually solves the
    // translator equation at second order on this grid.
    let sample = patch.graph_geometry()?;
    let report = crate::verify::translator_residual(&sample)
        .map_err(|_| CatalogError::GridOutsideDomain("empty grid".into()))?;
    let h = patch.spacing();
    let scale = sample
        .mean_curvature
        .iter()
        .fold(T::zero(), |m, &v| m.max(v.abs()))
        .max(T::one());
    let gate = lit::<T>(10.0) * h * h * scale;
    if report.max_abs > gate {
        return Err(CatalogError::ResidualGate(
            report.max_abs.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(patch)
}

fn rk4_step<T: Real>(state: [T; 3], ds: T, n: usize) -> [T; 3] {
    let f = |s: [T; 3]| -> [T; 3] {
        let [r, _z, a] = s;
        let nm1 = cast_usize::<T>(n - 1);
        [a.cos(), a.sin(), a.cos() - nm1 * a.sin() / r]
    };
    let two = lit::<T>(2.0);
    let six = lit::<T>(6.0);
    let k1 = f(state);
    let mid1 = [
        state[0] + ds / two * k1[0],
        state[1] + ds / two * k1[1],
        state[2] + ds / two * k1[2],
    ];
    let k2 = f(mid1);
    let mid2 = [
        state[0] + ds / two * k2[0],
        state[1] + ds / two * k2[1],
        state[2] + ds / two * k2[2],
    ];
    let k3 = f(mid2);
    let end = [state[0] + ds * k3[0], state[1] + ds * k3[1], state[2] + ds * k3[2]];
    let k4 = f(end);
    [
        state[0] + ds / six * (k1[0] + two * k2[0] + two * k3[0] + k4[0]),
        state[1] + ds / six * (k1[1] + two * k2[1] + two * k3[1] + k4[1]),
        state[2] + ds / six * (k1[2] + two * k2[2] + two * k3[2] + k4[2]),
    ]
}

/// Bowl soliton profile out to radius `r_max`, arclength step `h`.
///
/// The rotation ODE `a' = cos a - (n-1) sin(a)/r` is singular at the tip,
/// so the first ten steps come from the series
/// `u(r) = r^2/(2n) + r^4/(4 n^3 (n+2))`.
pub fn bowl<T: Real>(n: usize, r_max: T, h: T) -> Result<RotProfile<T>, CatalogError> {
    if n < 2 {
        return Err(CatalogError::BadDimension);
    }
    let hundred = lit::<T>(100.0);
    if h > r_max / hundred {
        return Err(CatalogError::StepTooLarge {
            step: h.to_f64().unwrap_or(f64::NAN),
            r_max: r_max.to_f64().unwrap_or(f64::NAN),
        });
    }
    let nf = cast_usize::<T>(n);
    let a4 = (nf * nf * nf * (nf + lit::<T>(2.0))).recip();
    let series_u = |r: T| r * r / (lit::<T>(2.0) * nf) + a4 * r.powi(4) / lit::<T>(4.0);
    let series_du = |r: T| r / nf + a4 * r.powi(3);

    let mut samples = Vec::new();
    for k in 0..=10usize {
        let r = cast_usize::<T>(k) * h;
        samples.push(ProfileSample {
            r,
            z: series_u(r),
            alpha: series_du(r).atan(),
        });
    }
    let last = *samples.last().unwrap();
    let mut state = [last.r, last.z, last.alpha];
    while state[0] < r_max {
        state = rk4_step(state, h, n);
        samples.push(ProfileSample { r: state[0], z: state[1], alpha: state[2] });
    }
    Ok(RotProfile { samples, step: h, dim: n })
}

/// Winglike translator with neck radius `R`: both wings integrated from the
/// vertical-tangent neck point `(r, z, a) = (R, 0, pi/2)` by arclength.
#[derive(Debug, Clone)]
pub struct Winglike<T> {
    pub upper: RotProfile<T>,
    pub lower: RotProfile<T>,
    /// Radius at the height minimum of the lower wing.
    pub r_star: T,
}

impl<T: Real> Winglike<T> {
    pub fn min_radius(&self) -> T {
        self.upper.min_radius().min(self.lower.min_radius())
    }

    pub fn min_height(&self) -> T {
        self.upper.min_height().min(self.lower.min_height())
    }

    /// Both wings translated so the overall height minimum is zero.
    pub fn normalized(&self) -> Winglike<T> {
        let dz = -self.min_height();
        Winglike {
            upper: self.upper.translated(dz),
            lower: self.lower.translated(dz),
            r_star: self.r_star,
        }
    }
}

pub fn winglike<T: Real>(
    n: usize,
    neck: T,
    s_max: T,
    h: T,
) -> Result<Winglike<T>, CatalogError> {
    if n < 2 {
        return Err(CatalogError::BadDimension);
    }
    if neck <= T::zero() {
        return Err(CatalogError::BadNeck);
    }
    let steps = (s_max / h).ceil().to_usize().unwrap_or(0);
    let start = ProfileSample { r: neck, z: T::zero(), alpha: T::FRAC_PI_2() };

    let integrate = |ds: T| -> Vec<ProfileSample<T>> {
        let mut out = vec![start];
        let mut state = [start.r, start.z, start.alpha];
        for _ in 0..steps {
            state = rk4_step(state, ds, n);
            assert!(state[0] > T::zero(), "profile left the r > 0 domain");
            out.push(ProfileSample { r: state[0], z: state[1], alpha: state[2] });
        }
        out
    };

    let upper = RotProfile { samples: integrate(h), step: h, dim: n };
    // Lower wing: same system traversed with negative arclength. The tangent
    // angle runs up through pi at the height minimum.
    let lower_raw = integrate(-h);
    let pi = T::PI();
    let mut r_star = T::nan();
    for w in lower_raw.windows(2) {
        let (a0, a1) = (w[0].alpha, w[1].alpha);
        if a0 < pi && a1 >= pi {
            let t = (pi - a0) / (a1 - a0);
            r_star = w[0].r + t * (w[1].r - w[0].r);
            break;
        }
    }
    let lower = RotProfile { samples: lower_raw, step: h, dim: n };
    Ok(Winglike { upper, lower, r_star })
}

/// Sampled vertical hyperplane through `base` with horizontal unit normal
/// `w`: `H = 0` and `<e_{n+1}, nu> = 0` exactly.
pub fn minimal_cylinder<T: Real>(
    w: &[T],
    base: &Point<T>,
    extent: T,
    h: T,
) -> Result<SurfaceSample<T>, CatalogError> {
    let dim = w.len();
    let tol = lit::<T>(1e-12);
    if (crate::vec::norm(w) - T::one()).abs() > tol || w[dim - 1].abs() > tol {
        return Err(CatalogError::NonHorizontalNormal);
    }
    // Orthonormal basis of the hyperplane: e_{n+1} plus horizontal fill.
    let mut basis: Vec<Vec<T>> = vec![crate::vec::basis(dim, dim - 1)];
    for k in 0..dim - 1 {
        let mut v = crate::vec::basis::<T>(dim, k);
        // Gram-Schmidt against w and the collected basis.
        let c0 = crate::vec::dot(&v, w);
        crate::vec::axpy(&mut v, -c0, w);
        for b in &basis {
            let c = crate::vec::dot(&v, b);
            crate::vec::axpy(&mut v, -c, b);
        }
        if let Some(unit) = crate::vec::normalized(&v) {
            if crate::vec::norm(&v) > lit(1e-8) {
                basis.push(unit);
            }
        }
    }
    assert_eq!(basis.len(), dim - 1);

    let m = (extent / h).floor().to_isize().unwrap_or(0);
    let mut out = SurfaceSample::empty(dim, "minimal_cylinder");
    let mut idx = vec![-m; dim - 1];
    loop {
        let mut p = base.coords.clone();
        let mut on_edge = false;
        for (k, &i) in idx.iter().enumerate() {
            let t = T::from_isize(i).unwrap() * h;
            crate::vec::axpy(&mut p, t, &basis[k]);
            if i == -m || i == m {
                on_edge = true;
            }
        }
        out.push(Point::new(p), w.to_vec(), T::zero(), on_edge);
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] <= m {
                break;
            }
            idx[k] = -m;
            k += 1;
        }
    }
}
