use crate::num::Real;

/// A point of the ambient space `R^{n+1}` (or of `R^n` after projection).
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    pub coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Last coordinate, `x_{n+1}` for ambient points.
    pub fn height(&self) -> T {
        *self.coords.last().expect("point has coordinates")
    }

    pub fn norm(&self) -> T {
        crate::vec::norm(&self.coords)
    }
}

impl<T: Real> std::ops::Index<usize> for Point<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

/// Orthogonal projection in the direction of translation: drops `x_{n+1}`.
pub fn project<T: Real>(p: &Point<T>) -> Point<T> {
    Point::new(p.coords[..p.dim() - 1].to_vec())
}
