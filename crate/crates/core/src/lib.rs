//! Numerical laboratory for translating solitons of mean curvature flow.
//!
//! Conventions, fixed once for the whole crate: ambient space is
//! `R^{n+1}`, the translation direction is `e_{n+1}` at unit speed, and the
//! scalar mean curvature is signed so the soliton equation reads
//! `H = <e_{n+1}, nu>`.
//!
//! Everything numeric is generic over the scalar type through
//! [`num::Real`]; the aliases below pin the common concrete choices.

pub mod catalog;
pub mod flow;
pub mod geom;
pub mod hull;
pub mod io;
pub mod num;
pub mod pde;
pub mod vec;
pub mod verify;
pub mod wedge;

/// Ambient point, `f64`.
pub type Point64 = geom::Point<f64>;
/// Ambient point, `f32`.
pub type Point32 = geom::Point<f32>;
/// Graph patch, `f64`.
pub type GraphPatch64 = geom::GraphPatch<f64>;
/// Graph patch, `f32`.
pub type GraphPatch32 = geom::GraphPatch<f32>;
/// Surface sample, `f64`.
pub type SurfaceSample64 = geom::SurfaceSample<f64>;
/// Surface sample, `f32`.
pub type SurfaceSample32 = geom::SurfaceSample<f32>;
/// Rotational profile, `f64`.
pub type RotProfile64 = geom::RotProfile<f64>;
/// Locus distance field, `f64`.
pub type DistanceField64 = geom::DistanceField<f64>;
