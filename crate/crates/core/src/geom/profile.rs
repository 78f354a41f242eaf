use super::{Point, SurfaceSample};
use crate::num::{cast_usize, lit, Real};

/// One arclength sample of a rotationally symmetric profile curve:
/// radius, height and tangent angle (`r' = cos a`, `z' = sin a`).
#[derive(Debug, Clone, Copy)]
pub struct ProfileSample<T> {
    pub r: T,
    pub z: T,
    pub alpha: T,
}

/// Arclength-sampled profile of a hypersurface of revolution about the
/// `x_{n+1}`-axis in `R^{n+1}`.
#[derive(Debug, Clone)]
pub struct RotProfile<T> {
    pub samples: Vec<ProfileSample<T>>,
    pub step: T,
    /// Hypersurface dimension `n`.
    pub dim: usize,
}

impl<T: Real> RotProfile<T> {
    pub fn min_radius(&self) -> T {
        self.samples
            .iter()
            .map(|s| s.r)
            .fold(T::infinity(), T::min)
    }

    pub fn min_height(&self) -> T {
        self.samples
            .iter()
            .map(|s| s.z)
            .fold(T::infinity(), T::min)
    }

    /// Vertical translate of the profile.
    pub fn translated(&self, dz: T) -> RotProfile<T> {
        let mut p = self.clone();
        for s in &mut p.samples {
            s.z += dz;
        }
        p
    }

    /// Scalar mean curvature along the profile, `H = a' + (n-1) sin(a)/r`,
    /// with `a'` from second-order arclength differences.
    pub fn mean_curvature(&self) -> Vec<T> {
        let m = self.samples.len();
        let h = self.step;
        let two = lit::<T>(2.0);
        let nm1 = cast_usize::<T>(self.dim - 1);
        (0..m)
            .map(|i| {
                let dalpha = if i == 0 {
                    (self.samples[1].alpha - self.samples[0].alpha) / h
                } else if i == m - 1 {
                    (self.samples[m - 1].alpha - self.samples[m - 2].alpha) / h
                } else {
                    (self.samples[i + 1].alpha - self.samples[i - 1].alpha) / (two * h)
                };
                let s = &self.samples[i];
                dalpha + nm1 * s.alpha.sin() / s.r
            })
            .collect()
    }

    /// Revolves the profile through the given horizontal unit directions.
    ///
    /// At `(r w, z)` the unit normal is `(-sin(a) w, cos(a))`, so the
    /// translator residual `H - cos(a)` is azimuth-independent.
    pub fn revolve(&self, directions: &[Vec<T>], source: &str) -> SurfaceSample<T> {
        let n = self.dim;
        let curv = self.mean_curvature();
        let m = self.samples.len();
        let mut out = SurfaceSample::empty(n + 1, source);
        for (i, s) in self.samples.iter().enumerate() {
            let boundary = i == 0 || i == m - 1;
            for w in directions {
                debug_assert_eq!(w.len(), n);
                let mut coords = Vec::with_capacity(n + 1);
                for &wk in w {
                    coords.push(s.r * wk);
                }
                coords.push(s.z);
                let mut nu = Vec::with_capacity(n + 1);
                let sa = s.alpha.sin();
                for &wk in w {
                    nu.push(-sa * wk);
                }
                nu.push(s.alpha.cos());
                out.push(Point::new(coords), nu, curv[i], boundary);
            }
        }
        out
    }

    /// Height of a radially monotone profile at radius `r`, by linear
    /// interpolation; `None` outside the sampled range.
    pub fn height_at_radius(&self, r: T) -> Option<T> {
        let s = &self.samples;
        for w in s.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.r <= r && r <= b.r) || (b.r <= r && r <= a.r) {
                if a.r == b.r {
                    return Some(a.z);
                }
                let t = (r - a.r) / (b.r - a.r);
                return Some(a.z + t * (b.z - a.z));
            }
        }
        None
    }

    /// Distance from an ambient point to the revolved surface, measured in
    /// the half-plane `(radius, height)` against the profile polyline.
    pub fn distance_to_point(&self, p: &Point<T>) -> T {
        let n = self.dim;
        let mut rad2 = T::zero();
        for k in 0..n {
            rad2 += p[k] * p[k];
        }
        let rp = rad2.sqrt();
        let zp = p[n];
        let mut best = T::infinity();
        for w in self.samples.windows(2) {
            let d = segment_distance((rp, zp), (w[0].r, w[0].z), (w[1].r, w[1].z));
            best = best.min(d);
        }
        best
    }
}

fn segment_distance<T: Real>(p: (T, T), a: (T, T), b: (T, T)) -> T {
    let (px, py) = p;
    let (ax, ay) = a;
    let (bx, by) = b;
    let vx = bx - ax;
    let vy = by - ay;
    let len2 = vx * vx + vy * vy;
    let t = if len2 == T::zero() {
        T::zero()
    } else {
        (((px - ax) * vx + (py - ay) * vy) / len2)
            .max(T::zero())
            .min(T::one())
    };
    let dx = px - (ax + t * vx);
    let dy = py - (ay + t * vy);
    (dx * dx + dy * dy).sqrt()
}

/// `m` equally spaced unit directions on the circle (for `n = 2`).
pub fn circle_directions<T: Real>(m: usize) -> Vec<Vec<T>> {
    (0..m)
        .map(|k| {
            let phi = lit::<T>(2.0) * T::PI() * cast_usize::<T>(k) / cast_usize::<T>(m);
            vec![phi.cos(), phi.sin()]
        })
        .collect()
}
