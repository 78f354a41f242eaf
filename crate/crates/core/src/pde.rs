//! Dirichlet solvers for the translator graph equations.
//!
//! Vertical graphs solve `div(Du/W) = 1/W`; sideways graphs (chart height
//! coordinate `y_1 = x_{n+1}`) solve `div(Du/W) = sigma * u_{y_1}/W` with
//! `sigma = -1` under this crate's orientation conventions. Both are
//! discretized with central differences and solved by damped Newton with a
//! banded direct linear solver.

use crate::geom::{GraphDirection, GraphPatch, GridSpec};
use crate::num::{cast_usize, lit, Real};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error("domain is degenerate: {0}")]
    DegenerateDomain(String),
    #[error("tilt angle must lie strictly between 0 and pi/2, got {0}")]
    BadTilt(f64),
    #[error("cutting plane misses the bowl (no intersection curve)")]
    NoIntersection,
    #[error("linear system is singular")]
    SingularSystem,
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
}

/// Gridded domain: `inside` marks nodes of the closed domain; unknowns are
/// inside nodes whose whole 3^n stencil block stays inside, the remaining
/// inside nodes carry Dirichlet data.
#[derive(Debug, Clone)]
pub struct Domain<T> {
    pub grid: GridSpec<T>,
    pub inside: Vec<bool>,
}

impl<T: Real> Domain<T> {
    pub fn from_fn(grid: GridSpec<T>, pred: impl Fn(&[T]) -> bool) -> Self {
        let mut inside = Vec::with_capacity(grid.len());
        let helper = GraphPatch {
            grid: grid.clone(),
            values: vec![T::zero(); grid.len()],
            direction: GraphDirection::Vertical,
            boundary_mask: vec![false; grid.len()],
        };
        for node in 0..grid.len() {
            inside.push(pred(&helper.coords(node)));
        }
        Domain { grid, inside }
    }

    /// Disk of radius `r` about `center`, gridded at spacing `h`.
    pub fn disk(center: &[T], r: T, h: T) -> Self {
        let n = center.len();
        let pad = lit::<T>(1.5) * h;
        let cells = ((lit::<T>(2.0) * (r + pad)) / h).ceil().to_usize().unwrap();
        let origin: Vec<T> = center.iter().map(|&c| c - r - pad).collect();
        let grid = GridSpec::new(origin, h, vec![cells + 1; n]);
        Domain::from_fn(grid, |y| crate::vec::dist(y, center) <= r)
    }

    fn stencil_inside(&self, node: usize) -> bool {
        let helper = self.helper();
        let n = self.grid.dims.len();
        // entire 3^n block around the node must be inside
        let mut offsets = vec![-1isize; n];
        loop {
            let mut m = node;
            let mut ok = true;
            for (axis, &off) in offsets.iter().enumerate() {
                match helper.neighbor(m, axis, off) {
                    Some(next) => m = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && !self.inside[m] {
                ok = false;
            }
            if !ok && offsets.iter().any(|&o| o != 0) {
                return false;
            }
            // odometer over {-1,0,1}^n
            let mut k = 0;
            loop {
                if k == n {
                    return true;
                }
                offsets[k] += 1;
                if offsets[k] <= 1 {
                    break;
                }
                offsets[k] = -1;
                k += 1;
            }
        }
    }

    fn helper(&self) -> GraphPatch<T> {
        GraphPatch {
            grid: self.grid.clone(),
            values: vec![T::zero(); self.grid.len()],
            direction: GraphDirection::Vertical,
            boundary_mask: vec![false; self.grid.len()],
        }
    }

    /// (unknown node list, Dirichlet node list); errors when degenerate.
    pub fn classify(&self) -> Result<(Vec<usize>, Vec<usize>), PdeError> {
        if self.grid.dims.iter().any(|&d| d < 3) {
            return Err(PdeError::DegenerateDomain(format!(
                "grid dims {:?} below 3 cells",
                self.grid.dims
            )));
        }
        let mut unknowns = Vec::new();
        let mut dirichlet = Vec::new();
        for node in 0..self.grid.len() {
            if !self.inside[node] {
                continue;
            }
            if self.stencil_inside(node) {
                unknowns.push(node);
            } else {
                dirichlet.push(node);
            }
        }
        if unknowns.is_empty() {
            return Err(PdeError::DegenerateDomain("no interior unknowns".into()));
        }
        if dirichlet.is_empty() {
            return Err(PdeError::DegenerateDomain("no boundary nodes".into()));
        }
        Ok((unknowns, dirichlet))
    }

    /// Every axis-parallel scan of inside nodes is contiguous (a cheap
    /// necessary condition for convexity of the gridded domain).
    pub fn orthogonally_convex(&self) -> bool {
        let helper = self.helper();
        for node in 0..self.grid.len() {
            if !self.inside[node] {
                continue;
            }
            for axis in 0..self.grid.dims.len() {
                // inside -> outside -> inside along the axis is forbidden
                let mut m = node;
                let mut seen_gap = false;
                while let Some(next) = helper.neighbor(m, axis, 1) {
                    if self.inside[next] {
                        if seen_gap {
                            return false;
                        }
                    } else {
                        seen_gap = true;
                    }
                    m = next;
                }
            }
        }
        true
    }
}

/// Outcome summary of one Dirichlet solve.
#[derive(Debug, Clone)]
pub struct SolverReport<T> {
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: T,
    pub max_gradient: T,
    /// Numerical evidence only: Newton failed under the full damping
    /// schedule or the gradient blew up; never a proof of nonexistence.
    pub nonexistence_flag: bool,
}

const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON_ITERS: usize = 60;
const MAX_HALVINGS: usize = 10;
const GRADIENT_BLOWUP: f64 = 1e6;

/// Band-limited sparse rows with partial pivoting; rows grow on fill.
pub(crate) struct BandedSystem<T> {
    pub(crate) rows: Vec<BandRow<T>>,
    pub(crate) rhs: Vec<T>,
}

pub(crate) struct BandRow<T> {
    start: usize,
    vals: Vec<T>,
}

impl<T: Real> BandRow<T> {
    fn get(&self, col: usize) -> T {
        if col < self.start || col >= self.start + self.vals.len() {
            T::zero()
        } else {
            self.vals[col - self.start]
        }
    }

    pub(crate) fn set(&mut self, col: usize, v: T) {
        self.reserve(col);
        self.vals[col - self.start] = v;
    }

    fn reserve(&mut self, col: usize) {
        if self.vals.is_empty() {
            self.start = col;
            self.vals.push(T::zero());
        } else if col < self.start {
            let mut grown = vec![T::zero(); self.start - col];
            grown.extend_from_slice(&self.vals);
            self.vals = grown;
            self.start = col;
        } else if col >= self.start + self.vals.len() {
            self.vals.resize(col - self.start + 1, T::zero());
        }
    }

    /// `self -= m * other`, over `other`'s support from `from` on.
    fn eliminate(&mut self, m: T, other: &BandRow<T>, from: usize) {
        let lo = other.start.max(from);
        let hi = other.start + other.vals.len();
        if lo >= hi {
            return;
        }
        self.reserve(lo);
        self.reserve(hi - 1);
        for col in lo..hi {
            let v = other.vals[col - other.start];
            if v != T::zero() {
                self.vals[col - self.start] -= m * v;
            }
        }
    }
}

impl<T: Real> BandedSystem<T> {
    pub(crate) fn new(n: usize) -> Self {
        BandedSystem {
            rows: (0..n).map(|_| BandRow { start: 0, vals: Vec::new() }).collect(),
            rhs: vec![T::zero(); n],
        }
    }

    /// Gaussian elimination with partial pivoting inside the band.
    pub(crate) fn solve(mut self, band: usize) -> Result<Vec<T>, PdeError> {
        let n = self.rows.len();
        for k in 0..n {
            let last = (k + band).min(n - 1);
            let mut pivot = k;
            let mut best = self.rows[k].get(k).abs();
            for r in k + 1..=last {
                let a = self.rows[r].get(k).abs();
                if a > best {
                    best = a;
                    pivot = r;
                }
            }
            if best == T::zero() {
                return Err(PdeError::SingularSystem);
            }
            if pivot != k {
                self.rows.swap(pivot, k);
                self.rhs.swap(pivot, k);
            }
            let diag = self.rows[k].get(k);
            for r in k + 1..=last {
                let a = self.rows[r].get(k);
                if a == T::zero() {
                    continue;
                }
                let m = a / diag;
                let (head, tail) = self.rows.split_at_mut(r);
                tail[0].eliminate(m, &head[k], k);
                tail[0].set(k, T::zero());
                let pivot_rhs = self.rhs[k];
                self.rhs[r] -= m * pivot_rhs;
            }
        }
        let mut x = vec![T::zero(); n];
        for k in (0..n).rev() {
            let row = &self.rows[k];
            let mut acc = self.rhs[k];
            let hi = row.start + row.vals.len();
            for col in (k + 1).max(row.start)..hi {
                acc -= row.vals[col - row.start] * x[col];
            }
            x[k] = acc / row.get(k);
        }
        Ok(x)
    }
}

/// Which translator graph equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Equation {
    /// `div(Du/W) - 1/W = 0`
    Vertical,
    /// `div(Du/W) - sigma u_{y_1}/W = 0`, `sigma = -1`
    Side,
}

struct Discretization<'a, T> {
    domain: &'a Domain<T>,
    equation: Equation,
    strides: Vec<usize>,
}

impl<'a, T: Real> Discretization<'a, T> {
    fn new(domain: &'a Domain<T>, equation: Equation) -> Self {
        let dims = &domain.grid.dims;
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Discretization { domain, equation, strides }
    }

    /// Nonlinear residual at an unknown node (all stencil nodes inside).
    fn residual(&self, u: &[T], node: usize) -> T {
        let n = self.strides.len();
        let h = self.domain.grid.spacing;
        let h2 = h * h;
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        let mut grad = vec![T::zero(); n];
        for a in 0..n {
            grad[a] = (u[node + self.strides[a]] - u[node - self.strides[a]]) / (two * h);
        }
        let w2 = T::one() + crate::vec::dot(&grad, &grad);
        let w = w2.sqrt();
        let mut acc = T::zero();
        for a in 0..n {
            let sa = self.strides[a];
            let uaa = (u[node + sa] - two * u[node] + u[node - sa]) / h2;
            acc += (T::one() - grad[a] * grad[a] / w2) * uaa;
            for b in a + 1..n {
                let sb = self.strides[b];
                let uab = (u[node + sa + sb] - u[node + sa - sb] - u[node - sa + sb]
                    + u[node - sa - sb])
                    / (four * h2);
                acc += -two * grad[a] * grad[b] / w2 * uab;
            }
        }
        // acc = W * div(Du/W); equations below share the 1/W weight
        match self.equation {
            Equation::Vertical => (acc - T::one()) / w,
            Equation::Side => (acc + grad[0]) / w,
        }
    }

    fn max_gradient(&self, u: &[T], unknowns: &[usize]) -> T {
        let h = self.domain.grid.spacing;
        let two = lit::<T>(2.0);
        let mut best = T::zero();
        for &node in unknowns {
            for a in 0..self.strides.len() {
                let g = (u[node + self.strides[a]] - u[node - self.strides[a]]) / (two * h);
                best = best.max(g.abs());
            }
        }
        best
    }
}

fn infinity_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Harmonic extension of the Dirichlet data: 5-point Laplace solve.
fn harmonic_guess<T: Real>(
    dis: &Discretization<T>,
    unknowns: &[usize],
    index: &[Option<usize>],
    u: &mut [T],
    band: usize,
) -> Result<(), PdeError> {
    let n = dis.strides.len();
    let m = unknowns.len();
    let mut sys = BandedSystem::new(m);
    for (row, &node) in unknowns.iter().enumerate() {
        sys.rows[row].set(row, -cast_usize::<T>(2 * n));
        let mut rhs = T::zero();
        for a in 0..n {
            for s in [node - dis.strides[a], node + dis.strides[a]] {
                match index[s] {
                    Some(col) => sys.rows[row].set(col, T::one()),
                    None => rhs -= u[s],
                }
            }
        }
        sys.rhs[row] = rhs;
    }
    let x = sys.solve(band)?;
    for (row, &node) in unknowns.iter().enumerate() {
        u[node] = x[row];
    }
    Ok(())
}

fn newton_solve<T: Real>(
    domain: &Domain<T>,
    equation: Equation,
    phi: &dyn Fn(&[T]) -> T,
) -> Result<(GraphPatch<T>, SolverReport<T>), PdeError> {
    let (unknowns, dirichlet) = domain.classify()?;
    let dis = Discretization::new(domain, equation);
    let helper = domain.helper();
    let total = domain.grid.len();

    let mut index: Vec<Option<usize>> = vec![None; total];
    for (i, &node) in unknowns.iter().enumerate() {
        index[node] = Some(i);
    }
    // unknown-index bandwidth of the 3^n stencil
    let mut band = 1usize;
    for (i, &node) in unknowns.iter().enumerate() {
        for a in 0..dis.strides.len() {
            for b in 0..dis.strides.len() {
                let reach = dis.strides[a] + if a == b { 0 } else { dis.strides[b] };
                for s in [node.checked_sub(reach), node.checked_add(reach)] {
                    if let Some(j) = s.and_then(|s| index.get(s).copied().flatten()) {
                        band = band.max(i.abs_diff(j));
                    }
                }
            }
        }
    }

    let mut u = vec![T::zero(); total];
    for &node in &dirichlet {
        u[node] = phi(&helper.coords(node));
    }
    harmonic_guess(&dis, &unknowns, &index, &mut u, band)?;

    let eval = |u: &[T]| -> Vec<T> { unknowns.iter().map(|&n| dis.residual(u, n)).collect() };

    let tol = lit::<T>(NEWTON_TOL);
    let mut f = eval(&u);
    let mut iterations = 0;
    let mut failed = false;
    while infinity_norm(&f) > tol && iterations < MAX_NEWTON_ITERS {
        iterations += 1;
        if dis.max_gradient(&u, &unknowns) > lit(GRADIENT_BLOWUP) {
            failed = true;
            break;
        }
        // numeric Jacobian: perturb each unknown, touch only stencil rows
        let mut sys = BandedSystem::new(unknowns.len());
        let mut u_pert = u.clone();
        for (col, &node) in unknowns.iter().enumerate() {
            let eps = lit::<T>(1e-7) * u[node].abs().max(T::one());
            u_pert[node] = u[node] + eps;
            for a in 0..=dis.strides.len() {
                // rows affected: the node itself and stencil neighbors
                let reaches: Vec<usize> = if a == dis.strides.len() {
                    vec![0]
                } else {
                    let mut r = vec![dis.strides[a]];
                    for b in a + 1..dis.strides.len() {
                        r.push(dis.strides[a] + dis.strides[b]);
                        r.push(dis.strides[a] - dis.strides[b]);
                    }
                    r
                };
                for reach in reaches {
                    for s in [node.checked_sub(reach), node.checked_add(reach)] {
                        if let Some(row) = s.and_then(|s| index.get(s).copied().flatten()) {
                            let df =
                                (dis.residual(&u_pert, unknowns[row]) - f[row]) / eps;
                            if df != T::zero() {
                                sys.rows[row].set(col, df);
                            }
                        }
                    }
                }
            }
            u_pert[node] = u[node];
        }
        for (row, &fi) in f.iter().enumerate() {
            sys.rhs[row] = -fi;
        }
        let delta = sys.solve(band)?;

        // damped line search
        let base_norm = infinity_norm(&f);
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = u.clone();
            for (i, &node) in unknowns.iter().enumerate() {
                trial[node] += lambda * delta[i];
            }
            let trial_f = eval(&trial);
            if infinity_norm(&trial_f) < base_norm {
                u = trial;
                f = trial_f;
                accepted = true;
                break;
            }
            lambda = lambda * lit(0.5);
        }
        if !accepted {
            failed = true;
            break;
        }
    }

    let final_residual = infinity_norm(&f);
    let max_gradient = dis.max_gradient(&u, &unknowns);
    // a graph that climbs more than half a unit per cell is not resolved:
    // the discrete solution exhibits the gradient blow-up of a surface
    // leaving graphicality, so treat it like the absolute blow-up gate
    let blowup_gate = lit::<T>(GRADIENT_BLOWUP).min(lit::<T>(0.5) / domain.grid.spacing);
    let unresolved = equation == Equation::Side && max_gradient > blowup_gate;
    let converged = !failed && !unresolved && final_residual <= tol;
    let nonexistence_flag = equation == Equation::Side && (failed || unresolved);

    let direction = match equation {
        Equation::Vertical => GraphDirection::Vertical,
        Equation::Side => GraphDirection::Sideways,
    };
    let boundary_mask: Vec<bool> = (0..total).map(|n| !domain.inside[n]).collect();
    let patch = GraphPatch {
        grid: domain.grid.clone(),
        values: u,
        direction,
        boundary_mask,
    };
    Ok((
        patch,
        SolverReport {
            converged,
            iterations,
            final_residual,
            max_gradient,
            nonexistence_flag,
        },
    ))
}

/// Dirichlet problem for the vertical translator graph equation
/// `div(Du/W) = 1/W` with boundary data `phi`.
pub fn solve_vertical<T: Real>(
    domain: &Domain<T>,
    phi: &dyn Fn(&[T]) -> T,
) -> Result<(GraphPatch<T>, SolverReport<T>), PdeError> {
    newton_solve(domain, Equation::Vertical, phi)
}

/// Dirichlet problem for the sideways translator graph equation
/// `div(Du/W) = -u_{y_1}/W` (chart coordinate `y_1` is the ambient
/// height). Failure under the full damping schedule or gradient blow-up
/// sets `nonexistence_flag` — numerical evidence, never a certificate.
pub fn solve_side<T: Real>(
    domain: &Domain<T>,
    phi: &dyn Fn(&[T]) -> T,
) -> Result<(GraphPatch<T>, SolverReport<T>), PdeError> {
    newton_solve(domain, Equation::Side, phi)
}

/// Data of the bowl-cut Dirichlet experiment: cut the bowl with the plane
/// `x_3 = c + tan(theta) x_1`, project the cap to the vertical plane
/// `Q = {x_1 = 0}` with chart `(y_1, y_2) = (x_3, x_2)`.
#[derive(Debug, Clone)]
pub struct Prop62Data<T> {
    pub domain: Domain<T>,
    pub tan_theta: T,
    pub offset: T,
    /// Some vertical line of `Q` meets the cap twice.
    pub nongraphical: bool,
}

impl<T: Real> Prop62Data<T> {
    /// Boundary data: the cut plane as a graph over `Q`.
    pub fn phi(&self, y: &[T]) -> T {
        (y[0] - self.offset) / self.tan_theta
    }
}

/// Builds the cap-projection Dirichlet data for tilt `theta` and plane
/// offset `c`, gridded at spacing `h`.
pub fn construct_prop62_data<T: Real>(
    theta: T,
    c: T,
    h: T,
) -> Result<Prop62Data<T>, PdeError> {
    if theta <= T::zero() || theta >= T::FRAC_PI_2() {
        return Err(PdeError::BadTilt(theta.to_f64().unwrap_or(f64::NAN)));
    }
    let t = theta.tan();
    // bowl profile b(r), fine enough to interpolate heights
    let r_max = lit::<T>(4.0) * (T::one() + t + c.abs());
    let profile = crate::catalog::bowl::<T>(2, r_max, r_max / lit(4000.0))?;

    // Gamma meets radius r iff |b(r) - c| <= t r; its extent bounds Omega
    let mut y1_max = T::neg_infinity();
    let mut y2_max = T::zero();
    let mut any = false;
    let mut nongraphical = false;
    for s in &profile.samples {
        let x1 = (s.z - c) / t;
        if x1.abs() <= s.r {
            any = true;
            y1_max = y1_max.max(s.z);
            y2_max = y2_max.max((s.r * s.r - x1 * x1).max(T::zero()).sqrt());
        }
        if s.r > T::zero() && s.z + t * s.r <= c {
            // both mirror points of the line through (x_2, x_3) are in the cap
            nongraphical = true;
        }
    }
    if !any {
        return Err(PdeError::NoIntersection);
    }

    let pad = lit::<T>(2.0) * h;
    let origin = vec![-pad, -y2_max - pad];
    let ny1 = ((y1_max + lit::<T>(2.0) * pad) / h).ceil().to_usize().unwrap() + 1;
    let ny2 = ((lit::<T>(2.0) * (y2_max + pad)) / h).ceil().to_usize().unwrap() + 1;
    let grid = GridSpec::new(origin, h, vec![ny1, ny2]);

    // Omega = affine shadow of the cut disk in the plane: (y_1, y_2) maps to
    // the plane point x_1 = (y_1 - c)/t, x_2 = y_2, inside iff above the bowl
    let domain = Domain::from_fn(grid, |y| {
        let x1 = (y[0] - c) / t;
        let r = (x1 * x1 + y[1] * y[1]).sqrt();
        match profile.height_at_radius(r) {
            Some(b) => y[0] >= b,
            None => false,
        }
    });
    Ok(Prop62Data { domain, tan_theta: t, offset: c, nongraphical })
}
