//! Scalar abstraction for the numerical kernels.
//!
//! Everything numeric in this crate is generic over [`Scalar`] so the same
//! solvers run in `f32` or `f64`; the crate root exports `f64` aliases for
//! the concrete types used by the CLI.

use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the meshes, operators and steppers.
pub trait Scalar:
    nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + Default + std::iter::Sum + 'static
{
    /// Lossy conversion from `f64`, panicking only for non-finite overflow
    /// into a narrower type.
    fn from_f64c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant not representable in scalar type")
    }

    /// Widening conversion to `f64`.
    fn to_f64c(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }

    /// Gamma function, evaluated in `f64` precision.
    fn gamma(self) -> Self {
        Self::from_f64c(statrs::function::gamma::gamma(self.to_f64c()))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sum a slice pairwise. Deterministic for a fixed input order and more
/// accurate than a running sum on long Monte Carlo reductions.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= 32 {
        let mut acc = T::zero();
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Pairwise mean of a non-empty slice.
pub fn mean<T: Scalar>(xs: &[T]) -> T {
    pairwise_sum(xs) / T::from_usize(xs.len()).unwrap()
}

/// Unbiased sample variance (divisor `n - 1`) of a slice with `len >= 2`.
pub fn sample_variance<T: Scalar>(xs: &[T]) -> T {
    let m = mean(xs);
    let sq: Vec<T> = xs.iter().map(|&x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / T::from_usize(xs.len() - 1).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_known_values() {
        assert!((2.0f64.gamma() - 1.0).abs() < 1e-14);
        assert!((5.0f64.gamma() - 24.0).abs() < 1e-10);
        // Gamma(1/2) = sqrt(pi)
        assert!((0.5f64.gamma() - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn variance_of_constant_is_zero() {
        let xs = vec![3.5f64; 100];
        assert_eq!(sample_variance(&xs), 0.0);
    }

    #[test]
    fn variance_matches_two_point_case() {
        // var([a, b]) = (a-b)^2 / 2 with the n-1 divisor
        let xs = vec![1.0f64, 3.0];
        assert!((sample_variance(&xs) - 2.0).abs() < 1e-15);
    }
}
