use super::Point;
use crate::num::Real;

/// Discrete immersed hypersurface: positions, unit normals and scalar mean
/// curvature per sample, plus a provenance tag naming the generating chart.
#[derive(Debug, Clone)]
pub struct SurfaceSample<T> {
    pub points: Vec<Point<T>>,
    pub normals: Vec<Vec<T>>,
    pub mean_curvature: Vec<T>,
    /// `true` for samples computed with a one-sided stencil or lying on the
    /// boundary of the chart.
    pub boundary: Vec<bool>,
    pub source: String,
}

impl<T: Real> SurfaceSample<T> {
    pub fn empty(ambient_dim: usize, source: &str) -> Self {
        let _ = ambient_dim;
        SurfaceSample {
            points: Vec::new(),
            normals: Vec::new(),
            mean_curvature: Vec::new(),
            boundary: Vec::new(),
            source: source.to_string(),
        }
    }

    pub fn push(&mut self, p: Point<T>, normal: Vec<T>, h: T, boundary: bool) {
        debug_assert!(
            (crate::vec::norm(&normal) - T::one()).abs() < crate::num::lit(1e-10),
            "normals must be unit vectors"
        );
        self.points.push(p);
        self.normals.push(normal);
        self.mean_curvature.push(h);
        self.boundary.push(boundary);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.points.first().map(|p| p.dim()).unwrap_or(0)
    }

    /// Iterator over interior (full-stencil) sample indices.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| !self.boundary[i])
    }

    /// Restricts the sample to points satisfying a predicate.
    pub fn filtered(&self, keep: impl Fn(&Point<T>) -> bool) -> SurfaceSample<T> {
        let mut out = SurfaceSample::empty(self.ambient_dim(), &self.source);
        for i in 0..self.len() {
            if keep(&self.points[i]) {
                out.push(
                    self.points[i].clone(),
                    self.normals[i].clone(),
                    self.mean_curvature[i],
                    self.boundary[i],
                );
            }
        }
        out
    }
}
