//! Graph mean curvature flow: `u_t = W div(Du/W)`, the quasilinear form
//! `u_t = (delta_ij - u_i u_j / W^2) u_ij`.
//!
//! Explicit time stepping under the CFL bound `dt <= h^2 / (2(n+1))`, plus a
//! semi-implicit variant with the coefficients frozen per step. Spheres are
//! evolved from the exact radius law `r(t) = sqrt(r0^2 - 2n t)` instead of a
//! second grid.

use crate::geom::{GraphPatch, Point};
use crate::num::{cast_usize, lit, Real};
use crate::pde::BandedSystem;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("time step {dt} violates the CFL bound {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("flow blew up at t = {time}: values exceed 1e12")]
    BlowUp { time: f64 },
    #[error("trajectories are not synchronized in time")]
    TimeMismatch,
    #[error("sphere is extinct at t = {time} (extinction at {extinction})")]
    PastExtinction { time: f64, extinction: f64 },
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,
    #[error(transparent)]
    Pde(#[from] crate::pde::PdeError),
}

/// How non-interior nodes evolve during the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMotion {
    /// Dirichlet data frozen at the initial values.
    Static,
    /// Dirichlet data from the exact translated surface: `u_0 + t`.
    Translating,
}

/// Time-indexed sequence of graph snapshots.
#[derive(Debug, Clone)]
pub struct FlowTrajectory<T> {
    pub snapshots: Vec<(T, GraphPatch<T>)>,
    pub dt: T,
}

const BLOWUP: f64 = 1e12;
const MAX_SNAPSHOTS: usize = 40;

impl<T: Real> FlowTrajectory<T> {
    pub fn initial(&self) -> &GraphPatch<T> {
        &self.snapshots.first().expect("nonempty trajectory").1
    }

    pub fn last(&self) -> &GraphPatch<T> {
        &self.snapshots.last().expect("nonempty trajectory").1
    }

    pub fn times(&self) -> Vec<T> {
        self.snapshots.iter().map(|&(t, _)| t).collect()
    }

    /// Embedded point clouds per snapshot.
    pub fn clouds(&self) -> CloudTrajectory<T> {
        let mut times = Vec::new();
        let mut clouds = Vec::new();
        for (t, patch) in &self.snapshots {
            times.push(*t);
            clouds.push((0..patch.len()).map(|node| patch.point_at(node)).collect());
        }
        CloudTrajectory { times, clouds }
    }
}

fn cfl_limit<T: Real>(h: T, n: usize) -> T {
    h * h / (lit::<T>(2.0) * cast_usize::<T>(n + 1))
}

/// Nodes updated by the interior scheme: full depth-1 stencil and not
/// flagged as boundary on the patch itself.
fn interior_nodes<T: Real>(patch: &GraphPatch<T>) -> Vec<usize> {
    (0..patch.len())
        .filter(|&node| patch.has_full_stencil(node, 1) && !patch.boundary_mask[node])
        .collect()
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Quasilinear right-hand side `(delta_ij - u_i u_j / W^2) u_ij` at a node.
fn velocity<T: Real>(u: &[T], node: usize, strides: &[usize], h: T) -> T {
    let n = strides.len();
    let h2 = h * h;
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let mut grad = vec![T::zero(); n];
    for a in 0..n {
        grad[a] = (u[node + strides[a]] - u[node - strides[a]]) / (two * h);
    }
    let w2 = T::one() + crate::vec::dot(&grad, &grad);
    let mut acc = T::zero();
    for a in 0..n {
        let sa = strides[a];
        let uaa = (u[node + sa] - two * u[node] + u[node - sa]) / h2;
        acc += (T::one() - grad[a] * grad[a] / w2) * uaa;
        for b in a + 1..n {
            let sb = strides[b];
            let uab = (u[node + sa + sb] - u[node + sa - sb] - u[node - sa + sb]
                + u[node - sa - sb])
                / (four * h2);
            acc += -two * grad[a] * grad[b] / w2 * uab;
        }
    }
    acc
}

fn snapshot_steps(total: usize) -> usize {
    (total / MAX_SNAPSHOTS).max(1)
}

/// Explicit graph mean curvature flow up to time `t_end`.
pub fn flow_graph_mcf<T: Real>(
    patch: &GraphPatch<T>,
    t_end: T,
    dt: T,
    boundary: BoundaryMotion,
) -> Result<FlowTrajectory<T>, FlowError> {
    let h = patch.spacing();
    let n = patch.n();
    let limit = cfl_limit(h, n);
    if dt > limit * (T::one() + lit(1e-12)) {
        return Err(FlowError::CflViolation {
            dt: dt.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    let strides = strides(&patch.grid.dims);
    let interior = interior_nodes(patch);
    let mut is_interior = vec![false; patch.len()];
    for &node in &interior {
        is_interior[node] = true;
    }
    let u0 = patch.values.clone();
    let mut u = u0.clone();
    let steps = (t_end / dt).ceil().to_usize().unwrap_or(0).max(1);
    let stride_snap = snapshot_steps(steps);

    let mut snapshots = Vec::new();
    let push = |snapshots: &mut Vec<(T, GraphPatch<T>)>, t: T, u: &[T]| {
        let mut snap = patch.clone();
        snap.values = u.to_vec();
        snapshots.push((t, snap));
    };
    push(&mut snapshots, T::zero(), &u);
    if u.iter().any(|v| v.abs() > lit(BLOWUP)) {
        return Err(FlowError::BlowUp { time: 0.0 });
    }

    let mut next = u.clone();
    for step in 0..steps {
        let t_new = dt * cast_usize::<T>(step + 1);
        for &node in &interior {
            next[node] = u[node] + dt * velocity(&u, node, &strides, h);
        }
        if boundary == BoundaryMotion::Translating {
            for node in 0..u.len() {
                if !is_interior[node] {
                    next[node] = u0[node] + t_new;
                }
            }
        }
        std::mem::swap(&mut u, &mut next);
        if u.iter().any(|v| v.abs() > lit(BLOWUP)) {
            return Err(FlowError::BlowUp {
                time: t_new.to_f64().unwrap_or(f64::NAN),
            });
        }
        if (step + 1) % stride_snap == 0 || step + 1 == steps {
            push(&mut snapshots, t_new, &u);
        }
    }
    Ok(FlowTrajectory { snapshots, dt })
}

/// Semi-implicit variant: the second-order coefficients are frozen at the
/// current step and the linear problem `(I - dt L(u^k)) u^{k+1} = u^k` is
/// solved directly; no CFL restriction.
pub fn flow_graph_mcf_semi_implicit<T: Real>(
    patch: &GraphPatch<T>,
    t_end: T,
    dt: T,
    boundary: BoundaryMotion,
) -> Result<FlowTrajectory<T>, FlowError> {
    let h = patch.spacing();
    let h2 = h * h;
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let strides = strides(&patch.grid.dims);
    let interior = interior_nodes(patch);
    let mut index = vec![None; patch.len()];
    for (i, &node) in interior.iter().enumerate() {
        index[node] = Some(i);
    }
    let band = strides.iter().sum::<usize>() + 1;
    let u0 = patch.values.clone();
    let mut u = u0.clone();
    let steps = (t_end / dt).ceil().to_usize().unwrap_or(0).max(1);
    let stride_snap = snapshot_steps(steps);

    let mut snapshots = Vec::new();
    let push = |snapshots: &mut Vec<(T, GraphPatch<T>)>, t: T, u: &[T]| {
        let mut snap = patch.clone();
        snap.values = u.to_vec();
        snapshots.push((t, snap));
    };
    push(&mut snapshots, T::zero(), &u);

    let n = strides.len();
    for step in 0..steps {
        let t_new = dt * cast_usize::<T>(step + 1);
        let boundary_at = |node: usize| -> T {
            match boundary {
                BoundaryMotion::Static => u0[node],
                BoundaryMotion::Translating => u0[node] + t_new,
            }
        };
        let mut sys = BandedSystem::new(interior.len());
        for (row, &node) in interior.iter().enumerate() {
            let mut grad = vec![T::zero(); n];
            for a in 0..n {
                grad[a] = (u[node + strides[a]] - u[node - strides[a]]) / (two * h);
            }
            let w2 = T::one() + crate::vec::dot(&grad, &grad);
            let mut diag = T::one();
            let mut rhs = u[node];
            let mut couple = |other: usize, coeff: T, rhs_acc: &mut T| match index[other] {
                Some(col) => sys.rows[row].set(col, -dt * coeff),
                None => *rhs_acc += dt * coeff * boundary_at(other),
            };
            for a in 0..n {
                let ca = (T::one() - grad[a] * grad[a] / w2) / h2;
                diag += two * dt * ca;
                couple(node + strides[a], ca, &mut rhs);
                couple(node - strides[a], ca, &mut rhs);
                for b in a + 1..n {
                    let cab = -two * grad[a] * grad[b] / w2 / (four * h2);
                    couple(node + strides[a] + strides[b], cab, &mut rhs);
                    couple(node - strides[a] - strides[b], cab, &mut rhs);
                    couple(node + strides[a] - strides[b], -cab, &mut rhs);
                    couple(node - strides[a] + strides[b], -cab, &mut rhs);
                }
            }
            sys.rows[row].set(row, diag);
            sys.rhs[row] = rhs;
        }
        let x = sys.solve(band)?;
        for node in 0..u.len() {
            u[node] = match index[node] {
                Some(i) => x[i],
                None => boundary_at(node),
            };
        }
        if u.iter().any(|v| v.abs() > lit(BLOWUP)) {
            return Err(FlowError::BlowUp {
                time: t_new.to_f64().unwrap_or(f64::NAN),
            });
        }
        if (step + 1) % stride_snap == 0 || step + 1 == steps {
            push(&mut snapshots, t_new, &u);
        }
    }
    Ok(FlowTrajectory { snapshots, dt })
}

/// Time-indexed point clouds, the common currency for set-distance tracks.
#[derive(Debug, Clone)]
pub struct CloudTrajectory<T> {
    pub times: Vec<T>,
    pub clouds: Vec<Vec<Point<T>>>,
}

/// Round sphere under MCF from the exact radius law `r(t) = sqrt(r0^2 - 2nt)`
/// (`n` = sphere dimension, ambient `R^{n+1}`), sampled at `m` great-circle
/// directions per coordinate plane.
pub fn sphere_trajectory<T: Real>(
    center: &[T],
    r0: T,
    times: &[T],
    m: usize,
) -> Result<CloudTrajectory<T>, FlowError> {
    let n = center.len() - 1;
    let extinction = r0 * r0 / (lit::<T>(2.0) * cast_usize::<T>(n));
    let mut clouds = Vec::new();
    for &t in times {
        if t >= extinction {
            return Err(FlowError::PastExtinction {
                time: t.to_f64().unwrap_or(f64::NAN),
                extinction: extinction.to_f64().unwrap_or(f64::NAN),
            });
        }
        let r = (r0 * r0 - lit::<T>(2.0) * cast_usize::<T>(n) * t).sqrt();
        let mut cloud = Vec::new();
        for axes in 0..center.len() {
            let partner = (axes + 1) % center.len();
            for k in 0..m {
                let theta = lit::<T>(2.0) * T::PI() * cast_usize::<T>(k) / cast_usize::<T>(m);
                let mut p = center.to_vec();
                p[axes] += r * theta.cos();
                p[partner] += r * theta.sin();
                cloud.push(Point::new(p));
            }
        }
        clouds.push(cloud);
    }
    Ok(CloudTrajectory {
        times: times.to_vec(),
        clouds,
    })
}

fn set_distance<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> T {
    let mut best = T::infinity();
    for p in a {
        for q in b {
            best = best.min(crate::vec::dist(&p.coords, &q.coords));
        }
    }
    best
}

/// Euclidean set-distance between synchronized trajectories, per time.
/// The first argument should sample a compact surface.
pub fn comparison_distance_track<T: Real>(
    compact: &CloudTrajectory<T>,
    other: &CloudTrajectory<T>,
) -> Result<Vec<(T, T)>, FlowError> {
    if compact.times.is_empty() {
        return Err(FlowError::EmptyTrajectory);
    }
    if compact.times.len() != other.times.len() {
        return Err(FlowError::TimeMismatch);
    }
    for (&ta, &tb) in compact.times.iter().zip(&other.times) {
        if (ta - tb).abs() > lit(1e-9) {
            return Err(FlowError::TimeMismatch);
        }
    }
    Ok(compact
        .times
        .iter()
        .zip(compact.clouds.iter().zip(&other.clouds))
        .map(|(&t, (ca, cb))| (t, set_distance(ca, cb)))
        .collect())
}

/// Whether the series never decreases by more than `tol` at any step.
pub fn nondecreasing_within<T: Real>(series: &[(T, T)], tol: T) -> bool {
    series.windows(2).all(|w| w[1].1 >= w[0].1 - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{GraphDirection, GridSpec};

    fn patch_from<T: Real>(
        origin: Vec<T>,
        h: T,
        dims: Vec<usize>,
        f: impl Fn(&[T]) -> T,
    ) -> GraphPatch<T> {
        GraphPatch::from_fn(GraphDirection::Vertical, GridSpec::new(origin, h, dims), f)
    }

    fn grim_patch(h: f64, half_width: f64) -> GraphPatch<f64> {
        let m = (2.0 * half_width / h).round() as usize + 1;
        patch_from(vec![-half_width], h, vec![m], |x: &[f64]| -x[0].cos().ln())
    }

    #[test]
    fn cfl_violation_rejected() {
        let patch = grim_patch(0.1, 1.0);
        // n = 1: limit h^2/4 = 2.5e-3
        let err = flow_graph_mcf(&patch, 1.0, 1e-2, BoundaryMotion::Static);
        assert!(matches!(err, Err(FlowError::CflViolation { .. })));
    }

    #[test]
    fn flat_plane_is_static() {
        let patch = patch_from(vec![-1.0, -1.0], 0.1, vec![21, 21], |_: &[f64]| 0.0);
        let traj = flow_graph_mcf(&patch, 0.1, 1e-3, BoundaryMotion::Static).unwrap();
        for (_, snap) in &traj.snapshots {
            assert!(snap.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn grim_reaper_translates_at_unit_speed() {
        let h = 0.01;
        let patch = grim_patch(h, 1.2);
        let dt = h * h / 4.0;
        let traj = flow_graph_mcf(&patch, 1.0, dt, BoundaryMotion::Translating).unwrap();
        let (t_final, last) = traj.snapshots.last().unwrap();
        let err = last
            .values
            .iter()
            .zip(&patch.values)
            .map(|(&a, &b)| (a - b - t_final).abs())
            .fold(0.0f64, f64::max);
        assert!(err <= 1e-2, "translation error {err} at t = {t_final}");
    }

    #[test]
    fn bowl_translates_at_unit_speed() {
        let h = 0.05;
        let profile = crate::catalog::bowl::<f64>(2, 2.0, 0.005).unwrap();
        let m = (1.0f64 / h).round() as usize + 1;
        let patch = patch_from(vec![-0.5, -0.5], h, vec![m, m], |x: &[f64]| {
            profile
                .height_at_radius((x[0] * x[0] + x[1] * x[1]).sqrt())
                .unwrap()
        });
        let dt = h * h / 6.0;
        let traj = flow_graph_mcf(&patch, 0.5, dt, BoundaryMotion::Translating).unwrap();
        let (t_final, last) = traj.snapshots.last().unwrap();
        let err = last
            .values
            .iter()
            .zip(&patch.values)
            .map(|(&a, &b)| (a - b - t_final).abs())
            .fold(0.0f64, f64::max);
        assert!(err <= 1e-2, "translation error {err} at t = {t_final}");
    }

    #[test]
    fn semi_implicit_agrees_with_explicit() {
        let h = 0.05;
        let patch = grim_patch(h, 1.0);
        let dt = h * h / 4.0;
        let a = flow_graph_mcf(&patch, 0.1, dt, BoundaryMotion::Translating).unwrap();
        let b =
            flow_graph_mcf_semi_implicit(&patch, 0.1, dt, BoundaryMotion::Translating).unwrap();
        let (ta, last_a) = a.snapshots.last().unwrap();
        let (tb, last_b) = b.snapshots.last().unwrap();
        assert!((ta - tb).abs() < 1e-12);
        let diff = last_a
            .values
            .iter()
            .zip(&last_b.values)
            .map(|(&x, &y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(diff <= 10.0 * dt, "schemes differ by {diff} (dt = {dt})");
    }

    #[test]
    fn sphere_above_plane_distance_nondecreasing() {
        let patch = patch_from(vec![-1.0, -1.0], 0.1, vec![21, 21], |_: &[f64]| 0.0);
        let flow = flow_graph_mcf(&patch, 0.2, 1.5e-3, BoundaryMotion::Static).unwrap();
        let times = flow.clouds().times;
        let sphere = sphere_trajectory(&[0.0, 0.0, 5.0], 1.0, &times, 32).unwrap();
        let track = comparison_distance_track(&sphere, &flow.clouds()).unwrap();
        assert!(nondecreasing_within(&track, 1e-9), "track {track:?}");
        assert!(track.last().unwrap().1 > track[0].1, "distance must grow");
    }

    #[test]
    fn grim_reaper_translates_keep_constant_distance() {
        let h = 0.05;
        let base = grim_patch(h, 1.0);
        let mut lifted = base.clone();
        for v in &mut lifted.values {
            *v += 1.0;
        }
        let dt = h * h / 4.0;
        let a = flow_graph_mcf(&base, 0.2, dt, BoundaryMotion::Translating).unwrap();
        let b = flow_graph_mcf(&lifted, 0.2, dt, BoundaryMotion::Translating).unwrap();
        let track = comparison_distance_track(&a.clouds(), &b.clouds()).unwrap();
        // both evolve by the same increments, so the gap is constant up to
        // floating-point shift non-associativity
        let d0 = track[0].1;
        for &(_, d) in &track {
            assert!((d - d0).abs() < 1e-4, "distance drifted: {d} vs {d0}");
        }
    }

    #[test]
    fn sphere_past_extinction_rejected() {
        // n = 2, r0 = 1: extinction at 0.25
        let err = sphere_trajectory(&[0.0, 0.0, 0.0], 1.0, &[0.0, 0.3], 16);
        assert!(matches!(err, Err(FlowError::PastExtinction { .. })));
    }

    #[test]
    fn time_mismatch_rejected() {
        let a = sphere_trajectory(&[0.0, 0.0, 5.0], 1.0, &[0.0, 0.1], 8).unwrap();
        let b = sphere_trajectory(&[0.0, 0.0, 5.0], 1.0, &[0.0, 0.12], 8).unwrap();
        assert!(matches!(
            comparison_distance_track(&a, &b),
            Err(FlowError::TimeMismatch)
        ));
    }

    #[test]
    fn blow_up_detected() {
        // the explicit scheme is stable under CFL, so the gate is exercised
        // on data that already exceeds it
        let mut patch = grim_patch(0.1, 1.0);
        patch.values[10] = 2e12;
        let err = flow_graph_mcf(&patch, 0.1, 2.5e-3, BoundaryMotion::Static);
        assert!(matches!(err, Err(FlowError::BlowUp { .. })));
    }
}
