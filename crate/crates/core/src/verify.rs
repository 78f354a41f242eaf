//! Pointwise identity checks: every equation the soliton analysis leans on
//! becomes a numerical residual with a max/L2 report.

use crate::geom::{DistanceField, GraphPatch, Point, SurfaceSample};
use crate::num::{cast_usize, lit, Real};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("sample is empty (or has no interior points)")]
    EmptySample,
    #[error("sample touches the locus L_R (min distance {0})")]
    SampleTouchesLocus(f64),
    #[error("sample contains the origin; ||p|| bound is undefined there")]
    OriginInSample,
    #[error("coordinate index {j} invalid: the height coordinate is not a Killing direction")]
    BadCoordinateIndex { j: usize },
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
}

/// Max/L2 residual summary for one check at one resolution.
#[derive(Debug, Clone)]
pub struct ResidualReport<T> {
    pub max_abs: T,
    pub l2: T,
    pub grid_h: T,
    pub convergence_order: Option<T>,
}

impl<T: Real> ResidualReport<T> {
    pub fn from_values(values: &[T], grid_h: T) -> Result<Self, VerifyError> {
        if values.is_empty() {
            return Err(VerifyError::EmptySample);
        }
        let max_abs = values.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let l2 = (values.iter().map(|&v| v * v).sum::<T>() / cast_usize::<T>(values.len())).sqrt();
        Ok(ResidualReport { max_abs, l2, grid_h, convergence_order: None })
    }

    pub fn with_h(mut self, h: T) -> Self {
        self.grid_h = h;
        self
    }
}

/// Empirical order between two resolutions: `log(e1/e2) / log(h1/h2)`.
pub fn convergence_order<T: Real>(coarse: &ResidualReport<T>, fine: &ResidualReport<T>) -> T {
    (coarse.max_abs / fine.max_abs).ln() / (coarse.grid_h / fine.grid_h).ln()
}

/// Residual of the translator equation `H - <e_{n+1}, nu>` over interior
/// samples.
pub fn translator_residual<T: Real>(
    s: &SurfaceSample<T>,
) -> Result<ResidualReport<T>, VerifyError> {
    let dim = s.ambient_dim();
    let values: Vec<T> = s
        .interior()
        .map(|i| s.mean_curvature[i] - s.normals[i][dim - 1])
        .collect();
    ResidualReport::from_values(&values, T::zero())
}

/// Mean curvature in the conformal metric `exp((2/n) x_{n+1}) delta`, in
/// which translators are exactly minimal:
/// `H~ = exp(-x_{n+1}/n) (H - <e_{n+1}, nu>)`.
pub fn hi_mean_curvature<T: Real>(s: &SurfaceSample<T>, i: usize) -> T {
    let dim = s.ambient_dim();
    let n = cast_usize::<T>(dim - 1);
    let x_top = s.points[i].height();
    (-x_top / n).exp() * (s.mean_curvature[i] - s.normals[i][dim - 1])
}

/// Residual of minimality in the Huisken-Ilmanen metric over interior
/// samples.
pub fn hi_minimality_residual<T: Real>(
    s: &SurfaceSample<T>,
) -> Result<ResidualReport<T>, VerifyError> {
    let values: Vec<T> = s.interior().map(|i| hi_mean_curvature(s, i)).collect();
    ResidualReport::from_values(&values, T::zero())
}

/// Two-route check of the identity
/// `Lap_S f = (1 - |grad_S f|^2)/d - <grad d, nu><e_{n+1}, nu>`
/// on a translator graph patch away from the locus. The left side is the
/// discrete chart-metric Laplacian; the right side is assembled from the
/// closed-form distance field and the patch normals.
pub fn main_identity_check<T: Real>(
    patch: &GraphPatch<T>,
    df: &DistanceField<T>,
) -> Result<ResidualReport<T>, VerifyError> {
    let dim = patch.ambient_dim();
    let d_field = patch.sample_ambient(|p| df.distance(p));
    let min_d = (0..patch.len())
        .filter(|&i| patch.active(i))
        .map(|i| d_field[i])
        .fold(T::infinity(), T::min);
    if min_d < lit::<T>(10.0) * patch.spacing() {
        return Err(VerifyError::SampleTouchesLocus(min_d.to_f64().unwrap_or(f64::NAN)));
    }
    let lap = patch.surface_laplacian(&d_field)?;
    let fields = patch.geometry_fields()?;
    let mut values = Vec::new();
    for node in 0..patch.len() {
        let (lhs, nu) = match (lap[node], fields.normals[node].as_ref()) {
            (Some(l), Some(nu)) => (l, nu),
            _ => continue,
        };
        if !patch.has_full_stencil(node, 2) {
            continue;
        }
        let p = patch.point_at(node);
        let eval = df.eval(&p)?;
        let grad_dot_nu = crate::vec::dot(&eval.gradient, nu);
        let chi_dot_nu = crate::vec::dot(&eval.spectrum.chi, nu);
        // tr_S Hess d = (1 - <chi, nu>^2)/d pointwise; the translator term
        // enters with a plus under our mean-curvature sign (the tangential
        // divergence identity is Lap_S phi = tr_S Hess phi + H <grad phi, nu>).
        let rhs = (T::one() - chi_dot_nu * chi_dot_nu) / eval.d + grad_dot_nu * nu[dim - 1];
        values.push(lhs - rhs);
    }
    ResidualReport::from_values(&values, patch.spacing())
}

/// Finite-difference check that the ambient Laplacian of the locus distance
/// equals `1/d` at the given off-locus points.
pub fn ambient_trace_check<T: Real>(
    df: &DistanceField<T>,
    points: &[Point<T>],
) -> Result<ResidualReport<T>, VerifyError> {
    let h = lit::<T>(1e-4);
    let mut values = Vec::new();
    for p in points {
        let eval = df.eval(p)?;
        let mut lap = T::zero();
        for k in 0..p.dim() {
            let mut plus = p.clone();
            plus.coords[k] += h;
            let mut minus = p.clone();
            minus.coords[k] -= h;
            lap += (df.distance(&plus) - lit::<T>(2.0) * eval.d + df.distance(&minus)) / (h * h);
        }
        values.push(lap - eval.d.recip());
    }
    ResidualReport::from_values(&values, h)
}

/// Per-point outcome of the Omori-Yau bound checks.
#[derive(Debug, Clone)]
pub struct OyBoundStats<T> {
    pub report: ResidualReport<T>,
    pub max_abs_h: T,
}

/// Checks `|Lap_S ||p||| <= n/||p|| + 1` and `|H| <= 1` pointwise on a
/// translator sample, using
/// `Lap_S ||p|| = (n - 1 + <w, nu>^2)/||p|| + H <w, nu>` with `w = p/||p||`.
///
/// The residual records the excess over either bound, so a genuine
/// translator reports zero while a non-translator (e.g. a sphere) fails
/// with a visible margin.
pub fn oy_bound_checks<T: Real>(s: &SurfaceSample<T>) -> Result<OyBoundStats<T>, VerifyError> {
    let dim = s.ambient_dim();
    let n = cast_usize::<T>(dim - 1);
    let mut values = Vec::new();
    let mut max_abs_h = T::zero();
    for i in s.interior() {
        let p = &s.points[i];
        let norm = p.norm();
        if norm == T::zero() {
            return Err(VerifyError::OriginInSample);
        }
        let omega: Vec<T> = p.coords.iter().map(|&c| c / norm).collect();
        let cosang = crate::vec::dot(&omega, &s.normals[i]);
        let h = s.mean_curvature[i];
        max_abs_h = max_abs_h.max(h.abs());
        let lap = (n - T::one() + cosang * cosang) / norm + h * cosang;
        let bound = n / norm + T::one();
        let excess_bound = (lap.abs() - bound).max(T::zero());
        let excess_h = (h.abs() - T::one()).max(T::zero());
        values.push(excess_bound.max(excess_h));
    }
    Ok(OyBoundStats {
        report: ResidualReport::from_values(&values, T::zero())?,
        max_abs_h,
    })
}

/// Residual of the Killing-coordinate equation in the conformal metric for
/// `j = 1..n` (1-based): after the conformal reduction the check is
/// `exp(-2 x_{n+1}/n) * (Lap_S x_j + <grad_S x_{n+1}, grad_S x_j>) = 0`
/// on translators. The height coordinate `j = n+1` is rejected: vertical
/// translation is not an isometry of the conformal metric.
pub fn killing_coordinate_check<T: Real>(
    patch: &GraphPatch<T>,
    j: usize,
) -> Result<ResidualReport<T>, VerifyError> {
    let dim = patch.ambient_dim();
    if j == 0 || j >= dim {
        return Err(VerifyError::BadCoordinateIndex { j });
    }
    let n = cast_usize::<T>(dim - 1);
    let xj = patch.sample_ambient(|p| p[j - 1]);
    let xtop = patch.sample_ambient(|p| p[dim - 1]);
    let lap_j = patch.surface_laplacian(&xj)?;
    let du = patch.first_partials(&patch.values.clone())?;
    let dxj = patch.first_partials(&xj)?;
    let dxtop = patch.first_partials(&xtop)?;
    let mut values = Vec::new();
    for node in 0..patch.len() {
        let lap = match lap_j[node] {
            Some(l) => l,
            None => continue,
        };
        if !patch.has_full_stencil(node, 2) {
            continue;
        }
        let (gu, ga, gb) = match (du[node].as_ref(), dxtop[node].as_ref(), dxj[node].as_ref()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => continue,
        };
        let inner = patch.chart_inner(gu, ga, gb);
        let height = patch.point_at(node)[dim - 1];
        let weight = (-lit::<T>(2.0) * height / n).exp();
        values.push(weight * (lap + inner));
    }
    ResidualReport::from_values(&values, patch.spacing())
}

/// Residual of `Lap_S x_{n+1} = H^2` on a graph patch (the subharmonicity
/// identity behind the interior maximum principle for the height).
pub fn height_subharmonicity_residual<T: Real>(
    patch: &GraphPatch<T>,
) -> Result<ResidualReport<T>, VerifyError> {
    let dim = patch.ambient_dim();
    let xtop = patch.sample_ambient(|p| p[dim - 1]);
    let lap = patch.surface_laplacian(&xtop)?;
    let fields = patch.geometry_fields()?;
    let mut values = Vec::new();
    for node in 0..patch.len() {
        if let (Some(l), Some(h)) = (lap[node], fields.mean_curvature[node]) {
            if patch.has_full_stencil(node, 2) {
                values.push(l - h * h);
            }
        }
    }
    ResidualReport::from_values(&values, patch.spacing())
}
