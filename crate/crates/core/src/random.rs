//! Seeded random elements for property checks: i.i.d. complex Gaussian
//! coefficients on a degree window, rescaled to sup norm 1.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::equivariant::{EquivariantMatrix, Space, UnitaryTwist};
use crate::error::Result;
use crate::function_core::{frac, Domain, TwistedLaurent};

pub const DEFAULT_WINDOW: (i64, i64) = (-4, 4);
const NORMALIZE_SAMPLES: usize = 256;

pub struct ElementSampler {
    rng: ChaCha8Rng,
    window: (i64, i64),
}

impl ElementSampler {
    pub fn new(seed: u64) -> Self {
        ElementSampler { rng: ChaCha8Rng::seed_from_u64(seed), window: DEFAULT_WINDOW }
    }

    pub fn with_window(mut self, lo: i64, hi: i64) -> Self {
        self.window = (lo.min(hi), lo.max(hi));
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn gaussian(&mut self) -> Complex64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    }

    /// Raw Gaussian coefficients on the window; negative degrees are dropped
    /// on the disk.
    pub fn raw_scalar(&mut self, domain: Domain, theta: f64) -> Result<TwistedLaurent> {
        let lo = if domain.is_annulus() { self.window.0 } else { self.window.0.max(0) };
        let hi = self.window.1.max(lo);
        let coeffs = (lo..=hi).map(|_| self.gaussian()).collect();
        TwistedLaurent::from_dense(domain, frac(theta), lo, coeffs)
    }

    pub fn scalar(&mut self, domain: Domain, theta: f64) -> Result<TwistedLaurent> {
        let f = self.raw_scalar(domain, theta)?;
        let s = f.sup_norm(NORMALIZE_SAMPLES, 1e-6);
        Ok(if s > 0.0 { f.scale(Complex64::new(1.0 / s, 0.0)) } else { f })
    }

    /// A random matrix with the weight signature of `space`, rescaled to sup
    /// norm 1.
    pub fn element(&mut self, space: Space, twist: &UnitaryTwist, domain: Domain) -> Result<EquivariantMatrix> {
        let (left, right) = space.weights(twist);
        self.matrix(domain, left, right)
    }

    pub fn matrix(&mut self, domain: Domain, left: Vec<f64>, right: Vec<f64>) -> Result<EquivariantMatrix> {
        let mut entries = Vec::with_capacity(left.len() * right.len());
        for &l in &left {
            for &r in &right {
                entries.push(self.raw_scalar(domain, frac(r - l))?);
            }
        }
        let m = EquivariantMatrix::holomorphic(domain, left, right, entries)?;
        let s = m.sup_norm(NORMALIZE_SAMPLES, 1e-6);
        Ok(if s > 0.0 { m.scale(Complex64::new(1.0 / s, 0.0)) } else { m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_normalized() {
        let d = Domain::annulus(0.7).unwrap();
        let t = UnitaryTwist::new(vec![0.25, 0.6]).unwrap();
        let a = ElementSampler::new(3).element(Space::Y, &t, d).unwrap();
        let b = ElementSampler::new(3).element(Space::Y, &t, d).unwrap();
        assert_eq!(a, b);
        assert!(a.is_in(Space::Y, &t));
        let s = a.sup_norm(1024, 1e-9);
        assert!(s <= 1.0 + 1e-6 && s > 0.9, "{s}");
    }
}
