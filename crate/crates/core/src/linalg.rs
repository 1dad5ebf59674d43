//! Small dense complex matrices evaluated pointwise.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const POWER_REL_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 10_000;

/// Largest singular value by power iteration on `a* a` (or `a a*`, whichever
/// is smaller), stopped when the Rayleigh quotient changes by less than
/// [`POWER_REL_TOL`] relative.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    if a.nrows() == 1 || a.ncols() == 1 {
        return a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    }
    let gram = if a.ncols() <= a.nrows() { a.adjoint() * a } else { a * a.adjoint() };
    let dim = gram.nrows();
    // Fixed start vector in general position.
    let mut v = nalgebra::DVector::from_fn(dim, |j, _| Complex64::from_polar(1.0 + 0.1 * j as f64, 0.7 + 1.3 * j as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for it in 0..POWER_MAX_ITERS {
        let gv = &gram * &v;
        let next = v.dotc(&gv).re;
        let len = gv.norm();
        if len == 0.0 {
            return 0.0;
        }
        v = gv / Complex64::new(len, 0.0);
        if it >= 2 && (next - lambda).abs() <= POWER_REL_TOL * next.abs() {
            lambda = next.max(lambda);
            break;
        }
        lambda = next;
    }
    lambda.max(0.0).sqrt()
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Inverse by LU with partial pivoting.
pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().lu().try_inverse()
}

/// Largest entry modulus, used for exact-zero checks.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}
