//! Discrete surface representations and differential operators.
//!
//! Ambient space is `R^{n+1}` with translation direction `e_{n+1}` and unit
//! translation speed. The scalar mean curvature convention is fixed so that
//! the soliton equation reads `H = <e_{n+1}, nu>`, with `nu` chosen to have
//! nonnegative `e_{n+1}` component on graphs over horizontal domains.

mod distance;
mod patch;
mod point;
mod profile;
mod sample;

pub use distance::{DistanceEval, DistanceField, HessianSpectrum};
pub use patch::{GeometryFields, GraphDirection, GraphPatch, GridSpec, LaplacianField};
pub use point::{project, Point};
pub use profile::{circle_directions, ProfileSample, RotProfile};
pub use sample::SurfaceSample;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("patch must span at least 3 cells in every direction, got {0:?}")]
    PatchTooThin(Vec<usize>),
    #[error("field samples ({got}) do not match grid size ({want})")]
    FieldSizeMismatch { got: usize, want: usize },
    #[error("point lies on the locus L_R; gradient and spectrum are undefined there")]
    OnLocus,
    #[error("normal-form pair must satisfy xi^2 + eta^2 = 1 with xi in (0,1], eta in [0,1)")]
    BadNormalForm,
    #[error("sample is empty")]
    EmptySample,
}
