use super::{GeomError, Point};
use crate::num::{lit, Real};

/// Distance field to the vertical locus
/// `L_R = {(R/xi, 0, x_3, ..., x_{n+1})}` of a normalized wedge.
#[derive(Debug, Clone)]
pub struct DistanceField<T> {
    pub r: T,
    pub xi: T,
    pub eta: T,
}

/// Hessian spectrum of the locus distance at an off-locus point: `n` zero
/// eigenvalues and a single eigenvalue `1/d` with unit eigenfield `chi`.
#[derive(Debug, Clone)]
pub struct HessianSpectrum<T> {
    pub zero_multiplicity: usize,
    pub nonzero_eigenvalue: T,
    pub chi: Vec<T>,
    pub trace: T,
}

#[derive(Debug, Clone)]
pub struct DistanceEval<T> {
    pub d: T,
    pub gradient: Vec<T>,
    pub spectrum: HessianSpectrum<T>,
}

impl<T: Real> DistanceField<T> {
    pub fn new(r: T, xi: T, eta: T) -> Result<Self, GeomError> {
        let tol = lit::<T>(1e-10);
        if r <= T::zero()
            || xi <= T::zero()
            || xi > T::one()
            || eta < T::zero()
            || eta >= T::one()
            || ((xi * xi + eta * eta) - T::one()).abs() > tol
        {
            return Err(GeomError::BadNormalForm);
        }
        Ok(DistanceField { r, xi, eta })
    }

    /// Horizontal position `R/xi` of the locus in the first coordinate.
    pub fn locus_offset(&self) -> T {
        self.r / self.xi
    }

    /// Representative locus point with trailing coordinates `tail`.
    pub fn locus_point(&self, ambient_dim: usize) -> Point<T> {
        let mut c = vec![T::zero(); ambient_dim];
        c[0] = self.locus_offset();
        Point::new(c)
    }

    /// `d_R(x) = sqrt((x_1 - R/xi)^2 + x_2^2)`, defined everywhere.
    pub fn distance(&self, p: &Point<T>) -> T {
        let a = p[0] - self.locus_offset();
        let b = p[1];
        (a * a + b * b).sqrt()
    }

    /// Distance together with unit gradient and Hessian spectrum; fails on
    /// the locus where both are undefined.
    pub fn eval(&self, p: &Point<T>) -> Result<DistanceEval<T>, GeomError> {
        let dim = p.dim();
        let a = p[0] - self.locus_offset();
        let b = p[1];
        let d = (a * a + b * b).sqrt();
        if d == T::zero() {
            return Err(GeomError::OnLocus);
        }
        let mut gradient = vec![T::zero(); dim];
        gradient[0] = a / d;
        gradient[1] = b / d;
        // chi = (-d_{x_2} d, d_{x_1} d, 0, ...)
        let mut chi = vec![T::zero(); dim];
        chi[0] = -b / d;
        chi[1] = a / d;
        Ok(DistanceEval {
            d,
            gradient,
            spectrum: HessianSpectrum {
                zero_multiplicity: dim - 1,
                nonzero_eigenvalue: d.recip(),
                chi,
                trace: d.recip(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn df() -> DistanceField<f64> {
        let xi = 0.6;
        let eta = 0.8;
        DistanceField::new(2.0, xi, eta).unwrap()
    }

    #[test]
    fn on_locus_distance_zero_and_eval_errors() {
        let f = df();
        let p = Point::new(vec![f.locus_offset(), 0.0, 7.0]);
        assert_eq!(f.distance(&p), 0.0);
        assert!(matches!(f.eval(&p), Err(GeomError::OnLocus)));
    }

    #[test]
    fn three_four_five_point() {
        let f = df();
        let p = Point::new(vec![f.locus_offset() + 3.0, 4.0, 0.0]);
        let e = f.eval(&p).unwrap();
        assert!((e.d - 5.0).abs() < 1e-14);
        assert!((e.spectrum.trace - 0.2).abs() < 1e-14);
        assert!((crate::vec::norm(&e.gradient) - 1.0).abs() < 1e-14);
        assert!((crate::vec::norm(&e.spectrum.chi) - 1.0).abs() < 1e-14);
        assert!(crate::vec::dot(&e.gradient, &e.spectrum.chi).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_normal_form() {
        assert!(DistanceField::new(1.0, 0.5, 0.5).is_err());
        assert!(DistanceField::new(-1.0, 0.6, 0.8).is_err());
    }
}
