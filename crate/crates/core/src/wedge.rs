//! Halfspace algebra, the transverse-wedge normal form, the wedge-existence
//! decision table and the Omori-Yau probe.
//!
//! A *wedge* is the intersection of two transverse vertical halfspaces. In
//! normal form the normals are `w_1 = (xi, eta, 0, ...)` and
//! `w_2 = (xi, -eta, 0, ...)` with `xi^2 + eta^2 = 1`, both halfspaces
//! through the origin.

use crate::geom::{Point, SurfaceSample};
use crate::num::{cast_usize, lit, Real};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error("halfspace normal must be a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("halfspace is not vertical: <w, e_(n+1)> = {0}")]
    NotVertical(f64),
    #[error("halfspaces are not transverse: <w_1, w_2> = {0}")]
    NotTransverse(f64),
    #[error("halfspace normals live in different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("sample is disjoint from the bounded wedge component V_R")]
    DisjointFromVr,
    #[error("cutoff needs ell > rho, got ell = {ell}, rho = {rho}")]
    BadCutoff { ell: f64, rho: f64 },
}

const TOL: f64 = 1e-12;

/// Affine halfspace `{x : <x - b, w> >= 0}` with unit normal `w`.
#[derive(Debug, Clone)]
pub struct Halfspace<T> {
    pub b: Point<T>,
    pub w: Vec<T>,
}

impl<T: Real> Halfspace<T> {
    pub fn new(b: Point<T>, w: Vec<T>) -> Result<Self, WedgeError> {
        let n = crate::vec::norm(&w);
        if (n - T::one()).abs() > lit(TOL) {
            return Err(WedgeError::NotUnit(n.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Halfspace { b, w })
    }

    /// Halfspace through the origin.
    pub fn through_origin(w: Vec<T>) -> Result<Self, WedgeError> {
        let dim = w.len();
        Halfspace::new(Point::new(vec![T::zero(); dim]), w)
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        let diff = crate::vec::sub(&x.coords, &self.b.coords);
        crate::vec::dot(&diff, &self.w) >= T::zero()
    }
}

/// Last component of a unit vector, read as its slope against `e_{n+1}`,
/// snapped to zero inside the transversality tolerance.
fn vertical_part<T: Real>(w: &[T]) -> T {
    let a = w[w.len() - 1];
    if a.abs() <= lit(TOL) {
        T::zero()
    } else {
        a
    }
}

/// True iff the halfspace normal is horizontal.
pub fn is_vertical<T: Real>(h: &Halfspace<T>) -> bool {
    vertical_part(&h.w) == T::zero()
}

/// True iff the two normals are neither parallel nor antiparallel.
pub fn is_transverse<T: Real>(h1: &Halfspace<T>, h2: &Halfspace<T>) -> bool {
    crate::vec::dot(&h1.w, &h2.w).abs() < T::one() - lit(TOL)
}

/// The `(xi, eta)` data of a wedge in normal form.
#[derive(Debug, Clone, Copy)]
pub struct WedgeNormalForm<T> {
    pub xi: T,
    pub eta: T,
}

impl<T: Real> WedgeNormalForm<T> {
    /// Normal `w_1 = (xi, eta, 0, ...)`, resp. `w_2 = (xi, -eta, 0, ...)`.
    pub fn normal(&self, which: usize, dim: usize) -> Vec<T> {
        let mut w = vec![T::zero(); dim];
        w[0] = self.xi;
        w[1] = if which == 0 { self.eta } else { -self.eta };
        w
    }

    /// First-coordinate position `R/xi` of the locus.
    pub fn locus_offset(&self, r: T) -> T {
        r / self.xi
    }

    /// Membership in the wedge (both normal-form halfspaces through 0).
    pub fn in_wedge(&self, x: &Point<T>) -> bool {
        let a = self.xi * x[0];
        let b = self.eta * x[1];
        a + b >= T::zero() && a - b >= T::zero()
    }

    pub fn distance_field(&self, r: T) -> crate::geom::DistanceField<T> {
        crate::geom::DistanceField { r, xi: self.xi, eta: self.eta }
    }

    /// Membership in `V_R`, the component of the wedge minus the solid
    /// cylinder `{d_R <= R}` on which `d_R` stays bounded.
    ///
    /// The cylinder is tangent to both wedge faces, so the bounded (apex)
    /// component is exactly the cone of directions from the locus whose
    /// first coordinate is `<= -xi`; the test is
    /// `R/xi - x_1 >= xi * d_R(x)` and needs no component search.
    pub fn in_vr(&self, x: &Point<T>, r: T) -> bool {
        let df = self.distance_field(r);
        let d = df.distance(x);
        self.in_wedge(x) && d > r && self.locus_offset(r) - x[0] >= self.xi * d
    }
}

/// Rigid motion `x -> Q (x - b)` with orthogonal `Q` fixing `e_{n+1}`.
#[derive(Debug, Clone)]
pub struct RigidMotion<T> {
    /// Rows of the rotation matrix.
    pub q: Vec<Vec<T>>,
    pub b: Point<T>,
}

impl<T: Real> RigidMotion<T> {
    pub fn apply(&self, x: &Point<T>) -> Point<T> {
        let shifted = crate::vec::sub(&x.coords, &self.b.coords);
        Point::new(self.q.iter().map(|row| crate::vec::dot(row, &shifted)).collect())
    }

    pub fn apply_vector(&self, v: &[T]) -> Vec<T> {
        self.q.iter().map(|row| crate::vec::dot(row, v)).collect()
    }

    pub fn invert(&self, y: &Point<T>) -> Point<T> {
        let dim = y.dim();
        let mut x = self.b.coords.clone();
        for (row, &yi) in self.q.iter().zip(&y.coords) {
            crate::vec::axpy(&mut x, yi, row);
        }
        debug_assert_eq!(x.len(), dim);
        Point::new(x)
    }

    pub fn invert_vector(&self, v: &[T]) -> Vec<T> {
        let dim = v.len();
        let mut x = vec![T::zero(); dim];
        for (row, &vi) in self.q.iter().zip(v) {
            crate::vec::axpy(&mut x, vi, row);
        }
        x
    }
}

/// Brings a pair of vertical transverse halfspaces to normal form.
///
/// Returns `(xi, eta)` together with the rigid motion carrying the input
/// wedge onto the normal-form wedge through the origin: a translation by a
/// common boundary point followed by a horizontal rotation taking
/// `(w_1 + w_2)` to `e_1` and `(w_1 - w_2)` to `e_2`.
pub fn normalize_pair<T: Real>(
    h1: &Halfspace<T>,
    h2: &Halfspace<T>,
) -> Result<(WedgeNormalForm<T>, RigidMotion<T>), WedgeError> {
    let dim = h1.w.len();
    if dim != h2.w.len() {
        return Err(WedgeError::DimensionMismatch(dim, h2.w.len()));
    }
    for h in [h1, h2] {
        if !is_vertical(h) {
            return Err(WedgeError::NotVertical(
                h.w[dim - 1].to_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    let c = crate::vec::dot(&h1.w, &h2.w);
    if !is_transverse(h1, h2) {
        return Err(WedgeError::NotTransverse(c.to_f64().unwrap_or(f64::NAN)));
    }
    let half = lit::<T>(0.5);
    let xi = ((T::one() + c) * half).sqrt();
    let eta = ((T::one() - c) * half).sqrt();

    // Common boundary point x = alpha w1 + beta w2 with <x, w_i> = <b_i, w_i>.
    let c1 = crate::vec::dot(&h1.b.coords, &h1.w);
    let c2 = crate::vec::dot(&h2.b.coords, &h2.w);
    let det = T::one() - c * c;
    let alpha = (c1 - c * c2) / det;
    let beta = (c2 - c * c1) / det;
    let mut b = vec![T::zero(); dim];
    crate::vec::axpy(&mut b, alpha, &h1.w);
    crate::vec::axpy(&mut b, beta, &h2.w);

    // Orthonormal rows: u1 -> e1, u2 -> e2, horizontal fill, e_{n+1} last.
    let u1 = crate::vec::normalized(&crate::vec::add(&h1.w, &h2.w)).expect("transverse");
    let u2 = crate::vec::normalized(&crate::vec::sub(&h1.w, &h2.w)).expect("transverse");
    let mut rows = vec![u1, u2];
    for k in 0..dim - 1 {
        let mut v = crate::vec::basis::<T>(dim, k);
        for row in &rows {
            let p = crate::vec::dot(&v, row);
            crate::vec::axpy(&mut v, -p, row);
        }
        if crate::vec::norm(&v) > lit(1e-8) {
            rows.push(crate::vec::normalized(&v).unwrap());
        }
        if rows.len() == dim - 1 {
            break;
        }
    }
    rows.push(crate::vec::basis(dim, dim - 1));
    debug_assert_eq!(rows.len(), dim);

    Ok((
        WedgeNormalForm { xi, eta },
        RigidMotion { q: rows, b: Point::new(b) },
    ))
}

/// Witness family for an existence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFamily {
    Bowl,
    TiltedGrimReaper,
    VerticalPlane,
}

/// Rule behind a nonexistence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoneRule {
    /// Transverse vertical pair: the bi-halfspace theorem.
    BiHalfspace,
    /// Some `<w_i, e_{n+1}>` is strictly negative (sphere comparison).
    NegativeSlope,
}

/// Verdict of the existence decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WedgeVerdict {
    Exists(WitnessFamily),
    None(NoneRule),
}

/// Does a complete properly immersed translator exist inside the wedge
/// `H_{(0,w_1)} \cap H_{(0,w_2)}`? Four-condition truth table over the
/// slopes `<w_i, e_{n+1}>` (zero within 1e-12) and parallelism.
pub fn wedge_existence<T: Real>(w1: &[T], w2: &[T]) -> WedgeVerdict {
    let a1 = vertical_part(w1);
    let a2 = vertical_part(w2);
    if a1 < T::zero() || a2 < T::zero() {
        return WedgeVerdict::None(NoneRule::NegativeSlope);
    }
    match (a1 > T::zero(), a2 > T::zero()) {
        (true, true) => WedgeVerdict::Exists(WitnessFamily::Bowl),
        (true, false) | (false, true) => WedgeVerdict::Exists(WitnessFamily::TiltedGrimReaper),
        (false, false) => {
            // Both vertical: existence iff parallel (or antiparallel).
            if crate::vec::dot(w1, w2).abs() >= T::one() - lit(TOL) {
                WedgeVerdict::Exists(WitnessFamily::VerticalPlane)
            } else {
                WedgeVerdict::None(NoneRule::BiHalfspace)
            }
        }
    }
}

/// Outcome of testing a sample against a list of halfspaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Containment<T> {
    Contained,
    /// First sample point (by index) outside some halfspace.
    Witness(Point<T>),
}

pub fn containment_check<T: Real>(
    s: &SurfaceSample<T>,
    halfspaces: &[Halfspace<T>],
) -> Containment<T> {
    for p in &s.points {
        if halfspaces.iter().any(|h| !h.contains(p)) {
            return Containment::Witness(p.clone());
        }
    }
    Containment::Contained
}

/// Smooth adiabatic cutoff `chi_ell(x) = psi(||x|| / ell)` with `psi = 0`
/// on `[0, 1]` and `psi = 1` on `[2, inf)`.
#[derive(Debug, Clone)]
pub struct Cutoff<T> {
    pub ell: T,
    /// Radius of the ball the cutoff must vanish on.
    pub rho: T,
    /// Amplitude (`sup f` in the adiabatic trick).
    pub m: T,
}

/// The `C^infinity` transition: `g(u)/(g(u) + g(1-u))` with
/// `g(u) = exp(-1/u)`, shifted to ramp over `[1, 2]`.
pub fn psi<T: Real>(t: T) -> T {
    let u = t - T::one();
    if u <= T::zero() {
        T::zero()
    } else if u >= T::one() {
        T::one()
    } else {
        let g = |v: T| (-v.recip()).exp();
        let a = g(u);
        a / (a + g(T::one() - u))
    }
}

impl<T: Real> Cutoff<T> {
    pub fn new(ell: T, rho: T, m: T) -> Result<Self, WedgeError> {
        if ell <= rho || ell <= T::zero() {
            return Err(WedgeError::BadCutoff {
                ell: ell.to_f64().unwrap_or(f64::NAN),
                rho: rho.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Cutoff { ell, rho, m })
    }

    pub fn chi(&self, x: &Point<T>) -> T {
        psi(x.norm() / self.ell)
    }

    /// `sup |psi'|`, so `||grad chi_ell|| <= psi_slope_bound() / ell`.
    pub fn psi_slope_bound() -> T {
        // max of psi' over the ramp, bracketed numerically once; the
        // symmetric transition peaks at t = 3/2 with slope just under 2.
        let mut best = T::zero();
        let m = 1000;
        let h = lit::<T>(1e-3);
        for k in 1..m {
            let t = T::one() + cast_usize::<T>(k) * h;
            let slope = (psi(t + h) - psi(t - h)) / (lit::<T>(2.0) * h);
            best = best.max(slope);
        }
        best
    }

    pub fn grad_norm_bound(&self) -> T {
        Self::psi_slope_bound() / self.ell
    }
}

/// Region tag of a probe point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeRegion {
    InVr,
    Outside,
}

/// One Omori-Yau probe record: the modified height `f`, its surface
/// gradient norm and intrinsic Laplacian (both from the closed-form
/// identities, using the sample's normal).
#[derive(Debug, Clone)]
pub struct OyProbe<T> {
    pub point: Point<T>,
    pub f: T,
    pub grad_norm: T,
    pub laplacian: T,
    pub region: ProbeRegion,
}

/// Result of an Omori-Yau probe sweep.
#[derive(Debug, Clone)]
pub struct OyProbeReport<T> {
    /// Probes sorted by decreasing `f` (ties by ascending point index).
    pub probes: Vec<OyProbe<T>>,
    /// `Delta_S f >= xi/(2R)` at some near-maximizer with
    /// `||grad_S f|| <= 0.1`.
    pub contradiction_indicator: bool,
    pub sup_f: T,
}

/// Ranks a translator sample by the modified distance `f` (`d_R` on `V_R`,
/// `R` outside) and evaluates the master identity at the top decile.
///
/// `grad_norm` and `laplacian` come from the closed forms
/// `||grad_S f||^2 = 1 - <grad d, nu>^2` and
/// `Lap_S f = (1 - <chi, nu>^2)/d + <grad d, nu><e_{n+1}, nu>`,
/// which `verify::main_identity_check` validates against finite
/// differences on graph patches. With a cutoff, the ranking uses
/// `f_ell = f + M chi_ell`.
pub fn oy_probe<T: Real>(
    s: &SurfaceSample<T>,
    nf: &WedgeNormalForm<T>,
    r: T,
    cutoff: Option<&Cutoff<T>>,
) -> Result<OyProbeReport<T>, WedgeError> {
    let dim = s.ambient_dim();
    let df = nf.distance_field(r);
    let mut probes = Vec::new();
    let mut any_in_vr = false;
    for i in 0..s.len() {
        let p = &s.points[i];
        let in_vr = nf.in_vr(p, r);
        any_in_vr |= in_vr;
        let (f, grad_norm, laplacian) = if in_vr {
            let eval = df.eval(p).expect("V_R avoids the locus");
            let nu = &s.normals[i];
            let grad_dot_nu = crate::vec::dot(&eval.gradient, nu);
            let chi_dot_nu = crate::vec::dot(&eval.spectrum.chi, nu);
            let gsq = (T::one() - grad_dot_nu * grad_dot_nu).max(T::zero());
            // master identity with the pointwise trace (1 - <chi, nu>^2)/d,
            // translator term signed for our mean-curvature convention
            // (see verify::main_identity_check)
            let lap = (T::one() - chi_dot_nu * chi_dot_nu) / eval.d
                + grad_dot_nu * nu[dim - 1];
            (eval.d, gsq.sqrt(), lap)
        } else {
            (r, T::zero(), T::zero())
        };
        let f = match cutoff {
            Some(c) => f + c.m * c.chi(p),
            None => f,
        };
        probes.push(OyProbe {
            point: p.clone(),
            f,
            grad_norm,
            laplacian,
            region: if in_vr { ProbeRegion::InVr } else { ProbeRegion::Outside },
        });
    }
    if !any_in_vr {
        return Err(WedgeError::DisjointFromVr);
    }
    // Stable sort: decreasing f, ties by original index (preserved by
    // stability of sort_by).
    probes.sort_by(|a, b| b.f.partial_cmp(&a.f).expect("finite f"));
    let sup_f = probes[0].f;
    let decile = (probes.len() / 10).max(1);
    let threshold = nf.xi / (lit::<T>(2.0) * r);
    let contradiction_indicator = probes[..decile].iter().any(|p| {
        p.region == ProbeRegion::InVr
            && p.grad_norm <= lit(0.1)
            && p.laplacian >= threshold
    });
    Ok(OyProbeReport { probes, contradiction_indicator, sup_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn hs(w: Vec<f64>) -> Halfspace<f64> {
        Halfspace::through_origin(w).unwrap()
    }

    #[test]
    fn verticality_examples() {
        assert!(is_vertical(&hs(vec![1.0, 0.0, 0.0])));
        assert!(!is_vertical(&hs(vec![0.0, 0.0, 1.0])));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(!is_vertical(&hs(vec![s, 0.0, s])));
    }

    #[test]
    fn transversality_examples() {
        let e1 = hs(vec![1.0, 0.0, 0.0]);
        let e2 = hs(vec![0.0, 1.0, 0.0]);
        let me1 = hs(vec![-1.0, 0.0, 0.0]);
        assert!(is_transverse(&e1, &e2));
        assert!(!is_transverse(&e1, &me1));
        assert!(!is_transverse(&e1, &e1.clone()));
    }

    #[test]
    fn normalize_perpendicular_pair() {
        let e1 = hs(vec![1.0, 0.0, 0.0]);
        let e2 = hs(vec![0.0, 1.0, 0.0]);
        let (nf, motion) = normalize_pair(&e1, &e2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((nf.xi - s).abs() < 1e-14);
        assert!((nf.eta - s).abs() < 1e-14);
        // The motion carries the original normals onto the normal form.
        let img1 = motion.apply_vector(&e1.w);
        let img2 = motion.apply_vector(&e2.w);
        for (got, want) in [(img1, nf.normal(0, 3)), (img2, nf.normal(1, 3))] {
            assert!(crate::vec::dist(&got, &want) < 1e-14);
        }
    }

    #[test]
    fn normalize_rejects_parallel_and_tilted() {
        let e1 = hs(vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            normalize_pair(&e1, &e1.clone()),
            Err(WedgeError::NotTransverse(_))
        ));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let tilted = hs(vec![s, 0.0, s]);
        assert!(matches!(
            normalize_pair(&e1, &tilted),
            Err(WedgeError::NotVertical(_))
        ));
    }

    #[test]
    fn existence_truth_table() {
        let lift = |a: f64, phi: f64| {
            let h = (1.0 - a * a).sqrt();
            vec![h * phi.cos(), h * phi.sin(), a]
        };
        // (+,+) -> bowl
        assert_eq!(
            wedge_existence(&lift(0.3, 0.0), &lift(0.3, 1.0)),
            WedgeVerdict::Exists(WitnessFamily::Bowl)
        );
        // (+,0) -> tilted grim reaper
        assert_eq!(
            wedge_existence(&lift(0.5, 0.2), &lift(0.0, 2.0)),
            WedgeVerdict::Exists(WitnessFamily::TiltedGrimReaper)
        );
        // (0,0) transverse -> bi-halfspace theorem
        assert_eq!(
            wedge_existence(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            WedgeVerdict::None(NoneRule::BiHalfspace)
        );
        // (0,0) antiparallel -> vertical plane (a slab witness)
        assert_eq!(
            wedge_existence(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]),
            WedgeVerdict::Exists(WitnessFamily::VerticalPlane)
        );
        // any negative slope -> none
        assert_eq!(
            wedge_existence(&lift(-0.1, 0.7), &lift(0.9, 0.0)),
            WedgeVerdict::None(NoneRule::NegativeSlope)
        );
    }

    #[test]
    fn grim_reaper_contained_in_slab() {
        let g = crate::geom::GridSpec::new(vec![-1.5, -1.5], 0.1, vec![31, 31]);
        let s = catalog::grim_reaper::<f64>(2, g).unwrap().graph_geometry().unwrap();
        let pi2 = std::f64::consts::FRAC_PI_2;
        let left = Halfspace::new(Point::new(vec![-pi2, 0.0, 0.0]), vec![1.0, 0.0, 0.0]).unwrap();
        let right = Halfspace::new(Point::new(vec![pi2, 0.0, 0.0]), vec![-1.0, 0.0, 0.0]).unwrap();
        assert_eq!(containment_check(&s, &[left, right]), Containment::Contained);
        assert_eq!(containment_check(&s, &[]), Containment::Contained);
    }

    #[test]
    fn bowl_escapes_every_vertical_halfspace() {
        let profile = catalog::bowl::<f64>(2, 6.0, 0.05).unwrap();
        let s = profile.revolve(&crate::geom::circle_directions(16), "bowl");
        let h = hs(vec![1.0, 0.0, 0.0]);
        match containment_check(&s, &[h]) {
            Containment::Witness(p) => assert!(p[0] < 0.0),
            Containment::Contained => panic!("bowl projects onto all of R^n"),
        }
    }

    #[test]
    fn cutoff_profile() {
        let c = Cutoff::new(2.0_f64, 1.0, 5.0).unwrap();
        assert_eq!(c.chi(&Point::new(vec![1.0, 0.0, 0.0])), 0.0);
        assert_eq!(c.chi(&Point::new(vec![0.0, 2.0, 0.0])), 0.0);
        assert_eq!(c.chi(&Point::new(vec![0.0, 0.0, 5.0])), 1.0);
        let mid = c.chi(&Point::new(vec![3.0, 0.0, 0.0]));
        assert!(mid > 0.0 && mid < 1.0);
        // symmetric transition: psi(3/2) = 1/2
        assert!((psi(1.5_f64) - 0.5).abs() < 1e-15);
        let bound = Cutoff::<f64>::psi_slope_bound();
        assert!(bound > 1.0 && bound < 3.0, "C = {bound}");
        assert!(Cutoff::new(1.0_f64, 2.0, 1.0).is_err());
    }

    /// Vertical plane `x_1 = a` clipped near the wedge apex: `f` approaches
    /// `R/xi` and the master identity forces `Lap f` above `xi/(2R)`.
    fn clipped_plane_sample(a: f64) -> SurfaceSample<f64> {
        let mut s = SurfaceSample::empty(3, "clipped-plane");
        let m = 21;
        for i in 0..m {
            for j in 0..m {
                let x2 = -a + 2.0 * a * i as f64 / (m - 1) as f64;
                let x3 = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
                s.push(Point::new(vec![a, x2, x3]), vec![1.0, 0.0, 0.0], 0.0, false);
            }
        }
        s
    }

    #[test]
    fn oy_probe_on_clipped_vertical_plane() {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let nf = WedgeNormalForm { xi: s2, eta: s2 };
        let r = 1.0;
        let s = clipped_plane_sample(0.1);
        let report = oy_probe(&s, &nf, r, None).unwrap();
        assert!(report.contradiction_indicator);
        let bound = nf.locus_offset(r);
        for p in &report.probes {
            assert!(p.f <= bound + 1e-12, "f = {} > R/xi = {}", p.f, bound);
            assert!(p.f >= r - 1e-12);
        }
        // the top of the ranking is genuinely inside V_R
        assert_eq!(report.probes[0].region, ProbeRegion::InVr);
        assert!(report.sup_f > r);
    }

    #[test]
    fn oy_probe_rejects_disjoint_sample() {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let nf = WedgeNormalForm { xi: s2, eta: s2 };
        let mut s = SurfaceSample::empty(3, "far-away");
        s.push(Point::new(vec![-5.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0], 0.0, false);
        assert!(matches!(oy_probe(&s, &nf, 1.0, None), Err(WedgeError::DisjointFromVr)));
    }

    #[test]
    fn oy_probe_with_cutoff_keeps_indicator() {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let nf = WedgeNormalForm { xi: s2, eta: s2 };
        let r = 1.0;
        let s = clipped_plane_sample(0.1);
        let base = oy_probe(&s, &nf, r, None).unwrap();
        let cutoff = Cutoff::new(10.0, 2.0, base.sup_f).unwrap();
        // all sample points lie inside B_ell, so chi = 0 and nothing moves
        let report = oy_probe(&s, &nf, r, Some(&cutoff)).unwrap();
        assert!(report.contradiction_indicator);
        assert!((report.sup_f - base.sup_f).abs() < 1e-15);
    }

    fn unit2(phi: f64) -> Vec<f64> {
        vec![phi.cos(), phi.sin(), 0.0]
    }

    fn rotate_horizontal(w: &[f64], phi: f64) -> Vec<f64> {
        let (c, s) = (phi.cos(), phi.sin());
        vec![c * w[0] - s * w[1], s * w[0] + c * w[1], w[2]]
    }

    proptest! {
        #[test]
        fn existence_is_symmetric(a1 in -0.99f64..0.99, a2 in -0.99f64..0.99,
                                  p1 in 0.0f64..6.28, p2 in 0.0f64..6.28) {
            let lift = |a: f64, phi: f64| {
                let h = (1.0 - a * a).sqrt();
                vec![h * phi.cos(), h * phi.sin(), a]
            };
            let w1 = lift(a1, p1);
            let w2 = lift(a2, p2);
            prop_assert_eq!(wedge_existence(&w1, &w2), wedge_existence(&w2, &w1));
        }

        #[test]
        fn existence_rotation_invariant(a1 in -0.99f64..0.99, a2 in -0.99f64..0.99,
                                        p1 in 0.0f64..6.28, p2 in 0.0f64..6.28,
                                        rot in 0.0f64..6.28) {
            let lift = |a: f64, phi: f64| {
                let h = (1.0 - a * a).sqrt();
                vec![h * phi.cos(), h * phi.sin(), a]
            };
            let w1 = lift(a1, p1);
            let w2 = lift(a2, p2);
            prop_assert_eq!(
                wedge_existence(&w1, &w2),
                wedge_existence(&rotate_horizontal(&w1, rot), &rotate_horizontal(&w2, rot))
            );
        }

        #[test]
        fn normal_form_invariant(p1 in 0.0f64..6.28, dphi in 0.05f64..3.09,
                                 b1 in -3.0f64..3.0, b2 in -3.0f64..3.0) {
            let h1 = Halfspace::new(Point::new(vec![b1, b2, 0.0]), unit2(p1)).unwrap();
            let h2 = hs(unit2(p1 + dphi));
            let (nf, motion) = normalize_pair(&h1, &h2).unwrap();
            prop_assert!(nf.xi > 0.0 && nf.eta > 0.0);
            prop_assert!((nf.xi * nf.xi + nf.eta * nf.eta - 1.0).abs() < 1e-12);
            // round trip through the motion reproduces the normals
            let back1 = motion.invert_vector(&motion.apply_vector(&h1.w));
            let back2 = motion.invert_vector(&motion.apply_vector(&h2.w));
            prop_assert!(crate::vec::dist(&back1, &h1.w) < 1e-10);
            prop_assert!(crate::vec::dist(&back2, &h2.w) < 1e-10);
            // and the forward images are the normal-form normals
            prop_assert!(crate::vec::dist(&motion.apply_vector(&h1.w), &nf.normal(0, 3)) < 1e-10);
            prop_assert!(crate::vec::dist(&motion.apply_vector(&h2.w), &nf.normal(1, 3)) < 1e-10);
            // the common point lands on both normal-form boundaries
            let img = motion.apply(&motion.invert(&Point::new(vec![0.0, 0.0, 0.0])));
            prop_assert!(img.norm() < 1e-10);
        }
    }
}
