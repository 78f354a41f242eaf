//! Convex hulls of projected samples and the five-case classification of
//! the projection `pi(Sigma)`, plus the compactness probe and the
//! compact-boundary hull bound.

use crate::geom::{project, Point, SurfaceSample};
use crate::num::{cast_usize, lit, Real};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HullError {
    #[error("empty input")]
    EmptyInput,
    #[error("hull computation supports dimensions 1..=3, got {0}")]
    BadDimension(usize),
    #[error("protocol needs rho_0 > 0 and K >= 3")]
    BadProtocol,
    #[error("classification indeterminate: {0}")]
    Indeterminate(String),
    #[error("sampler failed: {0}")]
    SamplerFailure(String),
    #[error("sample has no boundary points")]
    EmptyBoundary,
    #[error("barrier family is not monotone over the parameter range")]
    NonMonotoneFamily,
}

/// Convex hull of a finite point set.
#[derive(Debug, Clone)]
pub struct Hull<T> {
    /// Hull vertices in lexicographic order.
    pub vertices: Vec<Vec<T>>,
    /// Affine dimension spanned by the input.
    pub affine_dim: usize,
}

/// Five-way classification of `conv(pi(Sigma))`.
#[derive(Debug, Clone, PartialEq)]
pub enum HullCase<T> {
    FullSpace,
    Halfspace { normal: Vec<T> },
    Slab { normal: Vec<T>, width: T },
    Hyperplane { normal: Vec<T> },
    Compact,
}

impl<T: Real> HullCase<T> {
    /// One-line structured report: `case=<variant> width=<w> normal=<v>`.
    pub fn report(&self) -> String {
        let fmt_normal = |v: &[T]| {
            v.iter()
                .map(|c| format!("{c:.6}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            HullCase::FullSpace => "case=FullSpace".to_string(),
            HullCase::Halfspace { normal } => {
                format!("case=Halfspace normal={}", fmt_normal(normal))
            }
            HullCase::Slab { normal, width } => {
                format!("case=Slab width={width:.6} normal={}", fmt_normal(normal))
            }
            HullCase::Hyperplane { normal } => {
                format!("case=Hyperplane normal={}", fmt_normal(normal))
            }
            HullCase::Compact => "case=Compact".to_string(),
        }
    }
}

/// Dyadic sampling protocol: radii `rho_k = rho_0 * 2^k`, `k = 0..=levels`,
/// and a set of antipodal-representative directions in the projected space.
#[derive(Debug, Clone)]
pub struct SamplingProtocol<T> {
    pub rho0: T,
    pub levels: usize,
    /// One representative per antipodal pair; both `u` and `-u` are probed.
    pub directions: Vec<Vec<T>>,
}

impl<T: Real> SamplingProtocol<T> {
    pub fn new(rho0: T, levels: usize, directions: Vec<Vec<T>>) -> Result<Self, HullError> {
        if rho0 <= T::zero() || levels < 3 || directions.is_empty() {
            return Err(HullError::BadProtocol);
        }
        Ok(SamplingProtocol { rho0, levels, directions })
    }

    /// Default protocol: `K = 6`, 64 probed directions (32 representatives).
    pub fn default_for(n: usize, rho0: T) -> Result<Self, HullError> {
        Self::new(rho0, 6, default_directions(n, 32))
    }

    pub fn radius(&self, k: usize) -> T {
        self.rho0 * lit::<T>(2.0).powi(k as i32)
    }
}

/// Quasi-uniform antipodal representatives: equally spaced on the half
/// circle for `n = 2`, a spiral on the half sphere for `n = 3`, axes plus a
/// deterministic low-discrepancy fill above.
pub fn default_directions<T: Real>(n: usize, m: usize) -> Vec<Vec<T>> {
    assert!(n >= 1);
    if n == 1 {
        return vec![vec![T::one()]];
    }
    if n == 2 {
        return (0..m)
            .map(|k| {
                let phi = T::PI() * cast_usize::<T>(k) / cast_usize::<T>(m);
                vec![phi.cos(), phi.sin()]
            })
            .collect();
    }
    let mut dirs: Vec<Vec<T>> = (0..n).map(|k| crate::vec::basis(n, k)).collect();
    // golden-ratio lattice on angles, deterministic
    let golden = lit::<T>(0.618_033_988_749_894_9);
    let mut t = T::zero();
    while dirs.len() < m {
        t += golden;
        let frac = t - t.floor();
        let mut v = Vec::with_capacity(n);
        let mut acc = frac;
        for k in 0..n {
            acc = (acc * lit::<T>(9.0) + cast_usize::<T>(k + 1) * golden).sin();
            v.push(acc);
        }
        if let Some(u) = crate::vec::normalized(&v) {
            dirs.push(u);
        }
    }
    dirs
}

/// `(min <p, u>, max <p, u>)` over the point set.
pub fn support_width<T: Real>(points: &[Vec<T>], u: &[T]) -> Result<(T, T), HullError> {
    if points.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for p in points {
        let s = crate::vec::dot(p, u);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}

fn affine_dim<T: Real>(points: &[Vec<T>], tol: T) -> usize {
    let base = &points[0];
    let mut basis: Vec<Vec<T>> = Vec::new();
    for p in &points[1..] {
        let mut v = crate::vec::sub(p, base);
        for b in &basis {
            let c = crate::vec::dot(&v, b);
            crate::vec::axpy(&mut v, -c, b);
        }
        if crate::vec::norm(&v) > tol {
            basis.push(crate::vec::normalized(&v).unwrap());
        }
        if basis.len() == base.len() {
            break;
        }
    }
    basis.len()
}

fn scale_of<T: Real>(points: &[Vec<T>]) -> T {
    points
        .iter()
        .flat_map(|p| p.iter())
        .fold(T::one(), |m, &c| m.max(c.abs()))
}

fn lex_less<T: Real>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite coordinates") {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// Convex hull in dimension 1, 2 or 3. Degenerate inputs are reported with
/// their affine dimension and the hull of the spanned flat.
pub fn convex_hull<T: Real>(points: &[Vec<T>]) -> Result<Hull<T>, HullError> {
    if points.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let m = points[0].len();
    if m == 0 || m > 3 {
        return Err(HullError::BadDimension(m));
    }
    let mut pts: Vec<Vec<T>> = points.to_vec();
    pts.sort_by(|a, b| lex_less(a, b));
    pts.dedup_by(|a, b| lex_less(a, b) == std::cmp::Ordering::Equal);

    let tol = lit::<T>(1e-9) * scale_of(&pts);
    let dim = affine_dim(&pts, tol);
    let mut vertices = match dim {
        0 => vec![pts[0].clone()],
        1 => {
            // extremes along the spanning direction
            let d = crate::vec::normalized(&crate::vec::sub(pts.last().unwrap(), &pts[0])).unwrap();
            let (lo, hi) = support_width(&pts, &d)?;
            let mut ends = Vec::new();
            for p in &pts {
                let s = crate::vec::dot(p, &d);
                if (s - lo).abs() <= tol || (s - hi).abs() <= tol {
                    ends.push(p.clone());
                }
            }
            ends
        }
        2 => hull_planar(&pts, tol),
        3 => hull_3d(&pts, tol),
        _ => unreachable!(),
    };
    vertices.sort_by(|a, b| lex_less(a, b));
    vertices.dedup_by(|a, b| lex_less(a, b) == std::cmp::Ordering::Equal);
    Ok(Hull { vertices, affine_dim: dim })
}

/// Monotone chain on points spanning a 2-flat (embedded in dim 2 or 3).
fn hull_planar<T: Real>(pts: &[Vec<T>], tol: T) -> Vec<Vec<T>> {
    // orthonormal in-plane coordinates
    let base = pts[0].clone();
    let mut basis: Vec<Vec<T>> = Vec::new();
    for p in &pts[1..] {
        let mut v = crate::vec::sub(p, &base);
        for b in &basis {
            let c = crate::vec::dot(&v, b);
            crate::vec::axpy(&mut v, -c, b);
        }
        if crate::vec::norm(&v) > tol {
            basis.push(crate::vec::normalized(&v).unwrap());
        }
        if basis.len() == 2 {
            break;
        }
    }
    let coords: Vec<(T, T, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = crate::vec::sub(p, &base);
            (crate::vec::dot(&v, &basis[0]), crate::vec::dot(&v, &basis[1]), i)
        })
        .collect();
    let idx = monotone_chain(&coords, tol);
    idx.into_iter().map(|i| pts[i].clone()).collect()
}

fn monotone_chain<T: Real>(coords: &[(T, T, usize)], tol: T) -> Vec<usize> {
    let mut c = coords.to_vec();
    c.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.partial_cmp(&b.1).unwrap())
    });
    let cross = |o: &(T, T, usize), a: &(T, T, usize), b: &(T, T, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let build = |iter: Box<dyn Iterator<Item = &(T, T, usize)> + '_>| {
        let mut chain: Vec<(T, T, usize)> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p) <= tol
            {
                chain.pop();
            }
            chain.push(*p);
        }
        chain
    };
    let lower = build(Box::new(c.iter()));
    let upper = build(Box::new(c.iter().rev()));
    let mut out: Vec<usize> = lower[..lower.len() - 1].iter().map(|p| p.2).collect();
    out.extend(upper[..upper.len() - 1].iter().map(|p| p.2));
    out
}

/// Incremental 3-d hull: maintain outward-oriented triangular faces,
/// replace the visible region of each new point by its horizon cone.
fn hull_3d<T: Real>(pts: &[Vec<T>], tol: T) -> Vec<Vec<T>> {
    let orient = |a: &[T], b: &[T], c: &[T], p: &[T]| -> T {
        let u = crate::vec::sub(b, a);
        let v = crate::vec::sub(c, a);
        let w = crate::vec::sub(p, a);
        // det [u v w]
        u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0])
    };
    // initial non-degenerate tetrahedron (exists: affine dim is 3)
    let mut tet = vec![0usize, 1];
    for (i, p) in pts.iter().enumerate().skip(2) {
        match tet.len() {
            2 => {
                let d = crate::vec::sub(&pts[tet[1]], &pts[tet[0]]);
                let e = crate::vec::sub(p, &pts[tet[0]]);
                let cx = [
                    d[1] * e[2] - d[2] * e[1],
                    d[2] * e[0] - d[0] * e[2],
                    d[0] * e[1] - d[1] * e[0],
                ];
                if crate::vec::norm(&cx) > tol {
                    tet.push(i);
                }
            }
            3 => {
                if orient(&pts[tet[0]], &pts[tet[1]], &pts[tet[2]], p).abs() > tol {
                    tet.push(i);
                    break;
                }
            }
            _ => break,
        }
    }
    assert_eq!(tet.len(), 4, "affine dimension 3 guarantees a tetrahedron");
    let (a, b, c, d) = (tet[0], tet[1], tet[2], tet[3]);
    let mut faces: Vec<[usize; 3]> = if orient(&pts[a], &pts[b], &pts[c], &pts[d]) < T::zero() {
        vec![[a, b, c], [a, d, b], [b, d, c], [a, c, d]]
    } else {
        vec![[a, c, b], [a, b, d], [b, c, d], [a, d, c]]
    };

    for (i, p) in pts.iter().enumerate() {
        if tet.contains(&i) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| {
                let [x, y, z] = faces[f];
                orient(&pts[x], &pts[y], &pts[z], p) > tol
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon: directed edges of visible faces whose reverse is not in
        // the visible set
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &f in &visible {
            let [x, y, z] = faces[f];
            for e in [(x, y), (y, z), (z, x)] {
                if let Some(pos) = edges.iter().position(|&(u, v)| (v, u) == e) {
                    edges.swap_remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        let mut keep: Vec<[usize; 3]> = faces
            .iter()
            .enumerate()
            .filter(|(f, _)| !visible.contains(f))
            .map(|(_, &face)| face)
            .collect();
        for (u, v) in edges {
            keep.push([u, v, i]);
        }
        faces = keep;
    }

    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    used.into_iter().map(|i| pts[i].clone()).collect()
}

/// Anything that can produce every surface sample inside a centered ball.
pub trait SurfaceSampler<T> {
    fn sample_within(&self, rho: T) -> Result<SurfaceSample<T>, HullError>;
}

impl<T: Real, F: Fn(T) -> SurfaceSample<T>> SurfaceSampler<T> for F {
    fn sample_within(&self, rho: T) -> Result<SurfaceSample<T>, HullError> {
        Ok(self(rho))
    }
}

const GROWTH_REL: f64 = 1e-3;
const FLATNESS_REL: f64 = 1e-6;

struct SupportTable<T> {
    /// `sup <pi(p), u>` per (level, signed direction); directions stored as
    /// all representatives followed by their negations.
    values: Vec<Vec<T>>,
    diameter: T,
}

fn support_table<T: Real>(
    sampler: &impl SurfaceSampler<T>,
    protocol: &SamplingProtocol<T>,
) -> Result<SupportTable<T>, HullError> {
    let mut values = Vec::with_capacity(protocol.levels + 1);
    let mut diameter = T::zero();
    for k in 0..=protocol.levels {
        let rho = protocol.radius(k);
        let s = sampler.sample_within(rho)?;
        if s.is_empty() {
            return Err(HullError::SamplerFailure(format!(
                "no sample points within radius {}",
                rho.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let projected: Vec<Vec<T>> = s.points.iter().map(|p| project(p).coords).collect();
        let mut row = Vec::with_capacity(2 * protocol.directions.len());
        for u in &protocol.directions {
            row.push(support_width(&projected, u)?.1);
        }
        for u in &protocol.directions {
            let neg: Vec<T> = u.iter().map(|&c| -c).collect();
            row.push(support_width(&projected, &neg)?.1);
        }
        values.push(row);
        if k == protocol.levels {
            let r = projected
                .iter()
                .map(|p| crate::vec::norm(p))
                .fold(T::zero(), T::max);
            diameter = lit::<T>(2.0) * r;
        }
    }
    Ok(SupportTable { values, diameter })
}

/// Classifies `conv(pi(Sigma))` into the five cases by support-width growth
/// over dyadic radii. A signed direction counts as bounded when its support
/// value grows by at most `1e-3` of the pair width between levels `K-2` and
/// `K`; a bounded pair of width below `1e-6 * diameter` is flat.
pub fn classify_hull<T: Real>(
    sampler: &impl SurfaceSampler<T>,
    protocol: &SamplingProtocol<T>,
) -> Result<HullCase<T>, HullError> {
    let table = support_table(sampler, protocol)?;
    let kk = protocol.levels;
    let m = protocol.directions.len();
    let tiny = lit::<T>(1e-12);

    // sanity: supports must be nondecreasing in the radius
    for j in 0..2 * m {
        for k in 1..=kk {
            if table.values[k][j] < table.values[k - 1][j] - tiny {
                return Err(HullError::Indeterminate(
                    "support width decreased under radius growth".into(),
                ));
            }
        }
    }

    let growth = |j: usize| (table.values[kk][j] - table.values[kk - 2][j]).max(T::zero());
    let width = |i: usize| table.values[kk][i] + table.values[kk][i + m];
    let bounded = |j: usize| {
        let w = width(j % m).max(tiny);
        growth(j) <= lit::<T>(GROWTH_REL) * w
    };

    let mut bounded_pairs = Vec::new();
    let mut one_sided = Vec::new();
    let mut all_bounded = true;
    for i in 0..m {
        let (plus, minus) = (bounded(i), bounded(i + m));
        all_bounded &= plus && minus;
        match (plus, minus) {
            (true, true) => bounded_pairs.push(i),
            (true, false) => one_sided.push((i, T::one())),
            (false, true) => one_sided.push((i, -T::one())),
            (false, false) => {}
        }
    }
    if all_bounded {
        return Ok(HullCase::Compact);
    }
    if !bounded_pairs.is_empty() {
        if !one_sided.is_empty() || bounded_pairs.len() > 1 {
            return Err(HullError::Indeterminate(format!(
                "{} bounded pairs and {} one-sided directions",
                bounded_pairs.len(),
                one_sided.len()
            )));
        }
        let i = bounded_pairs[0];
        let normal = protocol.directions[i].clone();
        let w = width(i);
        if w <= lit::<T>(FLATNESS_REL) * table.diameter {
            return Ok(HullCase::Hyperplane { normal });
        }
        return Ok(HullCase::Slab { normal, width: w });
    }
    match one_sided.len() {
        0 => Ok(HullCase::FullSpace),
        1 => {
            let (i, sign) = one_sided[0];
            let normal = protocol.directions[i].iter().map(|&c| c * sign).collect();
            Ok(HullCase::Halfspace { normal })
        }
        k => Err(HullError::Indeterminate(format!(
            "{k} one-sided directions without a bounded pair"
        ))),
    }
}

/// The three equivalent conditions of the compactness characterization.
#[derive(Debug, Clone)]
pub struct CompactnessReport {
    /// The sample stabilizes in the ambient ball (compactness).
    pub compact: bool,
    /// `sup x_{n+1}` stabilizes.
    pub height_bounded: bool,
    /// `sup ||pi(p)||` stabilizes (containment in `K x R`).
    pub horizontally_bounded: bool,
}

impl CompactnessReport {
    pub fn agree(&self) -> bool {
        self.compact == self.height_bounded && self.compact == self.horizontally_bounded
    }
}

/// Evaluates the three compactness conditions by stabilization of the
/// respective suprema over the protocol radii.
pub fn compactness_probe<T: Real>(
    sampler: &impl SurfaceSampler<T>,
    protocol: &SamplingProtocol<T>,
) -> Result<CompactnessReport, HullError> {
    let kk = protocol.levels;
    let mut sup_norm = Vec::new();
    let mut sup_height = Vec::new();
    let mut sup_horiz = Vec::new();
    for k in 0..=kk {
        let s = sampler.sample_within(protocol.radius(k))?;
        if s.is_empty() {
            return Err(HullError::SamplerFailure("empty sample".into()));
        }
        sup_norm.push(s.points.iter().map(|p| p.norm()).fold(T::zero(), T::max));
        sup_height.push(
            s.points
                .iter()
                .map(|p| p.height())
                .fold(T::neg_infinity(), T::max),
        );
        sup_horiz.push(
            s.points
                .iter()
                .map(|p| crate::vec::norm(&project(p).coords))
                .fold(T::zero(), T::max),
        );
    }
    let stable = |v: &[T]| {
        let scale = v[kk].abs().max(T::one());
        (v[kk] - v[kk - 2]).abs() <= lit::<T>(GROWTH_REL) * scale
    };
    Ok(CompactnessReport {
        compact: stable(&sup_norm),
        height_bounded: stable(&sup_height),
        horizontally_bounded: stable(&sup_horiz),
    })
}

/// Checks `Sigma subset conv(pi(boundary)) x (-inf, max boundary height]`
/// on a compact sample with boundary, via support functions over the given
/// direction set, within tolerance `tol`.
pub fn boundary_hull_bound_check<T: Real>(
    s: &SurfaceSample<T>,
    directions: &[Vec<T>],
    tol: T,
) -> Result<bool, HullError> {
    if s.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let boundary: Vec<usize> = (0..s.len()).filter(|&i| s.boundary[i]).collect();
    if boundary.is_empty() {
        return Err(HullError::EmptyBoundary);
    }
    let bpts: Vec<Vec<T>> = boundary.iter().map(|&i| project(&s.points[i]).coords).collect();
    let max_bh = boundary
        .iter()
        .map(|&i| s.points[i].height())
        .fold(T::neg_infinity(), T::max);
    for i in 0..s.len() {
        if s.points[i].height() > max_bh + tol {
            return Ok(false);
        }
        let p = project(&s.points[i]).coords;
        for u in directions {
            let (_, sup_b) = support_width(&bpts, u)?;
            if crate::vec::dot(&p, u) > sup_b + tol {
                return Ok(false);
            }
            let neg: Vec<T> = u.iter().map(|&c| -c).collect();
            let (_, sup_bn) = support_width(&bpts, &neg)?;
            if crate::vec::dot(&p, &neg) > sup_bn + tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sweeps a monotone barrier family against a sample: returns the first
/// parameter at which the barrier comes within `tol` of the sample, `None`
/// if it never does. `barrier_distance(t, p)` is the distance from `p` to
/// the barrier at parameter `t`; the family must approach the sample
/// monotonically until first touch.
pub fn tangency_sweep<T: Real>(
    s: &SurfaceSample<T>,
    barrier_distance: impl Fn(T, &Point<T>) -> T,
    params: &[T],
    tol: T,
) -> Result<Option<T>, HullError> {
    if s.is_empty() || params.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let mut prev: Option<T> = None;
    for &t in params {
        let min_d = s
            .points
            .iter()
            .map(|p| barrier_distance(t, p))
            .fold(T::infinity(), T::min);
        if min_d <= tol {
            return Ok(Some(t));
        }
        if let Some(last) = prev {
            if min_d > last + tol {
                return Err(HullError::NonMonotoneFamily);
            }
        }
        prev = Some(min_d);
    }
    Ok(None)
}
