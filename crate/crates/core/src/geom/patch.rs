use super::{GeomError, Point, SurfaceSample};
use crate::num::{cast_usize, Real};

/// Rectangular grid over a domain in `R^n`.
#[derive(Debug, Clone)]
pub struct GridSpec<T> {
    pub origin: Vec<T>,
    pub spacing: T,
    pub dims: Vec<usize>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(origin: Vec<T>, spacing: T, dims: Vec<usize>) -> Self {
        assert!(spacing > T::zero(), "spacing must be positive");
        assert_eq!(origin.len(), dims.len());
        GridSpec { origin, spacing, dims }
    }

    /// Uniform grid covering `[lo, hi]^n` with spacing `h` (inclusive ends).
    pub fn cube(n: usize, lo: T, hi: T, h: T) -> Self {
        let cells = ((hi - lo) / h).round().to_usize().expect("grid extent");
        GridSpec::new(vec![lo; n], h, vec![cells + 1; n])
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which ambient axis the graph is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphDirection {
    /// Graph `x_{n+1} = u(x_1, ..., x_n)` over the horizontal hyperplane.
    Vertical,
    /// Graph `x_1 = u(y_1, ..., y_n)` over a vertical hyperplane, with the
    /// chart coordinate `y_1` equal to the ambient height `x_{n+1}`.
    Sideways,
}

/// Intrinsic Laplacian values on the grid; `None` where the stencil does not fit.
pub type LaplacianField<T> = Vec<Option<T>>;

/// Grid-aligned normal and curvature fields of a graph patch.
#[derive(Debug, Clone)]
pub struct GeometryFields<T> {
    pub normals: Vec<Option<Vec<T>>>,
    pub mean_curvature: Vec<Option<T>>,
}

/// Function samples on a rectangular grid, read as a hypersurface graph.
#[derive(Debug, Clone)]
pub struct GraphPatch<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<T>,
    pub direction: GraphDirection,
    /// `true` marks a node that is excluded from the patch.
    pub boundary_mask: Vec<bool>,
}

impl<T: Real> GraphPatch<T> {
    pub fn from_fn(
        direction: GraphDirection,
        grid: GridSpec<T>,
        f: impl Fn(&[T]) -> T,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        let mut coords = vec![T::zero(); grid.dims.len()];
        for node in 0..grid.len() {
            node_coords(&grid, node, &mut coords);
            values.push(f(&coords));
        }
        let mask = vec![false; grid.len()];
        GraphPatch { grid, values, direction, boundary_mask: mask }
    }

    /// Base-space dimension `n`.
    pub fn n(&self) -> usize {
        self.grid.dims.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() + 1
    }

    pub fn spacing(&self) -> T {
        self.grid.spacing
    }

    pub fn active(&self, node: usize) -> bool {
        !self.boundary_mask[node]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Chart coordinates of a node.
    pub fn coords(&self, node: usize) -> Vec<T> {
        let mut c = vec![T::zero(); self.n()];
        node_coords(&self.grid, node, &mut c);
        c
    }

    /// Ambient position of a node.
    pub fn point_at(&self, node: usize) -> Point<T> {
        let y = self.coords(node);
        let u = self.values[node];
        Point::new(self.embed(&y, u))
    }

    fn embed(&self, y: &[T], u: T) -> Vec<T> {
        let n = self.n();
        match self.direction {
            GraphDirection::Vertical => {
                let mut x = y.to_vec();
                x.push(u);
                x
            }
            GraphDirection::Sideways => {
                // x_1 = u, x_{n+1} = y_1, x_k = y_k for k = 2..n.
                let mut x = vec![T::zero(); n + 1];
                x[0] = u;
                x[n] = y[0];
                for k in 1..n {
                    x[k] = y[k];
                }
                x
            }
        }
    }

    /// Neighbor of `node` along `axis`, `offset` cells away (may be negative).
    pub fn neighbor(&self, node: usize, axis: usize, offset: isize) -> Option<usize> {
        let (strides, _) = strides(&self.grid.dims);
        let i = (node / strides[axis]) % self.grid.dims[axis];
        let j = i as isize + offset;
        if j < 0 || j >= self.grid.dims[axis] as isize {
            return None;
        }
        let m = (node as isize + offset * strides[axis] as isize) as usize;
        if self.active(m) {
            Some(m)
        } else {
            None
        }
    }

    /// True when every node within `depth` cells along each axis is available.
    pub fn has_full_stencil(&self, node: usize, depth: isize) -> bool {
        if !self.active(node) {
            return false;
        }
        for axis in 0..self.n() {
            for off in 1..=depth {
                if self.neighbor(node, axis, off).is_none()
                    || self.neighbor(node, axis, -off).is_none()
                {
                    return false;
                }
            }
        }
        true
    }

    fn check_thickness(&self) -> Result<(), GeomError> {
        if self.grid.dims.iter().any(|&d| d < 3) {
            return Err(GeomError::PatchTooThin(self.grid.dims.clone()));
        }
        Ok(())
    }

    /// Second-order first derivative of a grid field along `axis`;
    /// central in the interior, one-sided at mask edges.
    fn d1_opt(&self, get: &impl Fn(usize) -> Option<T>, node: usize, axis: usize) -> Option<T> {
        let h = self.spacing();
        let two = crate::num::lit::<T>(2.0);
        let plus = self.neighbor(node, axis, 1).and_then(get);
        let minus = self.neighbor(node, axis, -1).and_then(get);
        if let (Some(fp), Some(fm)) = (plus, minus) {
            return Some((fp - fm) / (two * h));
        }
        let f0 = get(node)?;
        // one-sided second order: (-3 f0 + 4 f1 - f2) / 2h
        let three = crate::num::lit::<T>(3.0);
        let four = crate::num::lit::<T>(4.0);
        for sign in [1isize, -1] {
            let n1 = self.neighbor(node, axis, sign).and_then(get);
            let n2 = self.neighbor(node, axis, 2 * sign).and_then(get);
            if let (Some(f1), Some(f2)) = (n1, n2) {
                let s = crate::num::lit::<T>(sign as f64);
                return Some(s * (-three * f0 + four * f1 - f2) / (two * h));
            }
        }
        None
    }

    fn d1_field(&self, field: &[T], node: usize, axis: usize) -> Option<T> {
        let get = |m: usize| if self.active(m) { Some(field[m]) } else { None };
        self.d1_opt(&get, node, axis)
    }

    /// All first partials of a field; `None` where no second-order stencil fits.
    pub fn first_partials(&self, field: &[T]) -> Result<Vec<Option<Vec<T>>>, GeomError> {
        if field.len() != self.len() {
            return Err(GeomError::FieldSizeMismatch { got: field.len(), want: self.len() });
        }
        self.check_thickness()?;
        let n = self.n();
        let mut out = Vec::with_capacity(self.len());
        for node in 0..self.len() {
            if !self.active(node) {
                out.push(None);
                continue;
            }
            let mut g = Vec::with_capacity(n);
            let mut ok = true;
            for axis in 0..n {
                match self.d1_field(field, node, axis) {
                    Some(v) => g.push(v),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            out.push(if ok { Some(g) } else { None });
        }
        Ok(out)
    }

    /// Hessian of a field from nested first differences.
    fn hessian(
        &self,
        partials: &[Option<Vec<T>>],
        node: usize,
    ) -> Option<Vec<Vec<T>>> {
        let n = self.n();
        let mut h = vec![vec![T::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let get = |m: usize| partials[m].as_ref().map(|g| g[b]);
                let v = self.d1_opt(&get, node, a)?;
                h[a][b] = v;
                h[b][a] = v;
            }
        }
        Some(h)
    }

    /// Grid-aligned unit normals and mean curvature (`None` where the
    /// nested-difference stencil does not fit).
    pub fn geometry_fields(&self) -> Result<GeometryFields<T>, GeomError> {
        self.check_thickness()?;
        let n = self.n();
        let partials = self.first_partials(&self.values)?;
        let mut normals = Vec::with_capacity(self.len());
        let mut curvature = Vec::with_capacity(self.len());
        for node in 0..self.len() {
            if !self.active(node) || partials[node].is_none() {
                normals.push(None);
                curvature.push(None);
                continue;
            }
            let grad = partials[node].as_ref().unwrap();
            let hess = match self.hessian(&partials, node) {
                Some(h) => h,
                None => {
                    normals.push(None);
                    curvature.push(None);
                    continue;
                }
            };
            let w2 = T::one() + crate::vec::dot(grad, grad);
            let w = w2.sqrt();
            // H = sum_ij (delta_ij - u_i u_j / W^2) u_ij / W
            let mut num = T::zero();
            for i in 0..n {
                for j in 0..n {
                    let delta = if i == j { T::one() } else { T::zero() };
                    num += (delta - grad[i] * grad[j] / w2) * hess[i][j];
                }
            }
            normals.push(Some(self.normal_from_grad(grad, w)));
            curvature.push(Some(num / w));
        }
        Ok(GeometryFields { normals, mean_curvature: curvature })
    }

    /// Unit normal and scalar mean curvature at every available node.
    ///
    /// Samples are emitted for active nodes in row-major node order; nodes
    /// whose stencil does not support the nested second derivative are
    /// flagged as boundary samples.
    pub fn graph_geometry(&self) -> Result<SurfaceSample<T>, GeomError> {
        let fields = self.geometry_fields()?;
        let mut sample = SurfaceSample::empty(self.n() + 1, "graph-patch");
        for node in 0..self.len() {
            if let (Some(nu), Some(h)) = (&fields.normals[node], fields.mean_curvature[node]) {
                let interiorish = self.has_full_stencil(node, 2);
                sample.push(self.point_at(node), nu.clone(), h, !interiorish);
            }
        }
        Ok(sample)
    }

    fn normal_from_grad(&self, grad: &[T], w: T) -> Vec<T> {
        let n = self.n();
        match self.direction {
            GraphDirection::Vertical => {
                let mut nu = Vec::with_capacity(n + 1);
                for g in grad {
                    nu.push(-*g / w);
                }
                nu.push(w.recip());
                nu
            }
            GraphDirection::Sideways => {
                let mut nu = vec![T::zero(); n + 1];
                nu[0] = w.recip();
                nu[n] = -grad[0] / w;
                for k in 1..n {
                    nu[k] = -grad[k] / w;
                }
                nu
            }
        }
    }

    /// Samples an ambient scalar function at the graph's points
    /// (full grid order; masked nodes get zero).
    pub fn sample_ambient(&self, f: impl Fn(&Point<T>) -> T) -> Vec<T> {
        (0..self.len())
            .map(|node| {
                if self.active(node) {
                    f(&self.point_at(node))
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    /// Discrete intrinsic Laplacian of an ambient function sampled on the
    /// graph, via the chart-metric formula
    /// `Lap f = g^{ij} F_ij + (1/sqrt g) d_i(sqrt g g^{ij}) F_j`.
    pub fn surface_laplacian(&self, field: &[T]) -> Result<LaplacianField<T>, GeomError> {
        if field.len() != self.len() {
            return Err(GeomError::FieldSizeMismatch { got: field.len(), want: self.len() });
        }
        self.check_thickness()?;
        let n = self.n();
        let du = self.first_partials(&self.values)?;
        let df = self.first_partials(field)?;

        // M^{ij} = sqrt(g) g^{ij} with sqrt(g) = W and g^{ij} = delta - u_i u_j / W^2.
        let mut m_field: Vec<Option<Vec<Vec<T>>>> = Vec::with_capacity(self.len());
        for node in 0..self.len() {
            m_field.push(du[node].as_ref().map(|g| {
                let w2 = T::one() + crate::vec::dot(g, g);
                let w = w2.sqrt();
                let mut m = vec![vec![T::zero(); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let delta = if i == j { T::one() } else { T::zero() };
                        m[i][j] = w * (delta - g[i] * g[j] / w2);
                    }
                }
                m
            }));
        }

        let mut out: LaplacianField<T> = Vec::with_capacity(self.len());
        for node in 0..self.len() {
            if !self.active(node) {
                out.push(None);
                continue;
            }
            let (grad_u, grad_f) = match (du[node].as_ref(), df[node].as_ref()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    out.push(None);
                    continue;
                }
            };
            let w2 = T::one() + crate::vec::dot(grad_u, grad_u);
            let w = w2.sqrt();
            let hess_f = match self.hessian(&df, node) {
                Some(h) => h,
                None => {
                    out.push(None);
                    continue;
                }
            };
            let mut acc = T::zero();
            let mut ok = true;
            for j in 0..n {
                // div term: sum_i d_i M^{ij}
                let mut divj = T::zero();
                for i in 0..n {
                    let get = |mm: usize| m_field[mm].as_ref().map(|m| m[i][j]);
                    match self.d1_opt(&get, node, i) {
                        Some(v) => divj += v,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                acc += divj / w * grad_f[j];
                for i in 0..n {
                    let delta = if i == j { T::one() } else { T::zero() };
                    acc += (delta - grad_u[i] * grad_u[j] / w2) * hess_f[i][j];
                }
            }
            out.push(if ok { Some(acc) } else { None });
        }
        Ok(out)
    }

    /// Surface gradient squared-norm pairing `<grad_S a, grad_S b>_g`
    /// = `g^{ij} d_i A d_j B` from chart partials.
    pub fn chart_inner(&self, grad_u: &[T], da: &[T], db: &[T]) -> T {
        let n = self.n();
        let w2 = T::one() + crate::vec::dot(grad_u, grad_u);
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { T::one() } else { T::zero() };
                acc += (delta - grad_u[i] * grad_u[j] / w2) * da[i] * db[j];
            }
        }
        acc
    }
}

fn strides(dims: &[usize]) -> (Vec<usize>, usize) {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    (s, dims.iter().product())
}

fn node_coords<T: Real>(grid: &GridSpec<T>, node: usize, out: &mut [T]) {
    let (s, _) = strides(&grid.dims);
    for k in 0..grid.dims.len() {
        let i = (node / s[k]) % grid.dims[k];
        out[k] = grid.origin[k] + grid.spacing * cast_usize::<T>(i);
    }
}
