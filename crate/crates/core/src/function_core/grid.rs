use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::domain::{angle, frac, multiplier, weights_match, Domain};
use crate::error::{Error, Result};

pub const MIN_GRID_SAMPLES: usize = 16;
/// Interior levels used when a layout asks for interior samples by default.
pub const DEFAULT_RADIAL: usize = 33;

/// Sample positions shared by all grid values: `n` equispaced angles on each
/// boundary circle followed by `radial` interior levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridLayout {
    domain: Domain,
    n: usize,
    radial: usize,
}

impl GridLayout {
    pub fn new(domain: Domain, n: usize, radial: usize) -> Result<Self> {
        if n < MIN_GRID_SAMPLES {
            return Err(Error::InvalidParameter(format!("grid needs at least {MIN_GRID_SAMPLES} angular samples, got {n}")));
        }
        Ok(GridLayout { domain, n, radial })
    }

    pub fn boundary(domain: Domain, n: usize) -> Result<Self> {
        Self::new(domain, n, 0)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn boundary_count(&self) -> usize {
        self.domain.boundary_levels().len()
    }

    /// Real parts of all levels, boundary circles first.
    pub fn levels(&self) -> Vec<f64> {
        let mut v = self.domain.boundary_levels();
        v.extend(self.domain.interior_levels(self.radial));
        v
    }

    pub fn len(&self) -> usize {
        self.n * (self.boundary_count() + self.radial)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cover points in storage order.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.len());
        for s in self.levels() {
            pts.extend((0..self.n).map(|k| Complex64::new(s, angle(k, self.n))));
        }
        pts
    }

    pub fn ensure_same(&self, other: &GridLayout) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// A continuous function sampled on a [`GridLayout`], with multiplier
/// `e^(2 pi i theta)` under the deck map.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    layout: GridLayout,
    theta: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_fn<F: Fn(Complex64) -> Complex64>(layout: &GridLayout, theta: f64, f: F) -> Self {
        let values = layout.points().into_iter().map(f).collect();
        GridFunction { layout: *layout, theta: frac(theta), values }
    }

    pub fn from_values(layout: &GridLayout, theta: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::ShapeMismatch(format!("expected {} samples, got {}", layout.len(), values.len())));
        }
        Ok(GridFunction { layout: *layout, theta: frac(theta), values })
    }

    pub fn constant(layout: &GridLayout, c: Complex64) -> Self {
        GridFunction { layout: *layout, theta: 0.0, values: vec![c; layout.len()] }
    }

    pub fn zero(layout: &GridLayout, theta: f64) -> Self {
        GridFunction { layout: *layout, theta: frac(theta), values: vec![Complex64::new(0.0, 0.0); layout.len()] }
    }

    pub fn layout(&self) -> &GridLayout {
        &self.layout
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn level(&self, l: usize) -> &[Complex64] {
        &self.values[l * self.layout.n..(l + 1) * self.layout.n]
    }

    pub fn boundary(&self, circle: usize) -> &[Complex64] {
        assert!(circle < self.layout.boundary_count());
        self.level(circle)
    }

    pub fn interior(&self, r: usize) -> Option<&[Complex64]> {
        (r < self.layout.radial).then(|| self.level(self.layout.boundary_count() + r))
    }

    pub fn conj(&self) -> Self {
        GridFunction { layout: self.layout, theta: frac(-self.theta), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        GridFunction { values: self.values.iter().map(|&v| v * s).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.layout.ensure_same(&other.layout)?;
        if !weights_match(self.theta, other.theta) {
            return Err(Error::WeightMismatch(format!("{} vs {}", self.theta, other.theta)));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.layout.ensure_same(&other.layout)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(GridFunction { layout: self.layout, theta: frac(self.theta + other.theta), values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Jump across the seam `Im w = 2 pi`: on every level, the multiplier
    /// image of the first sample against a cubic extrapolation of the last
    /// four. Small values mean the sampled function extends continuously with
    /// the recorded multiplier.
    pub fn seam_residual(&self) -> f64 {
        let n = self.layout.n;
        let mult = multiplier(self.theta);
        (0..self.layout.levels().len())
            .map(|l| {
                let v = self.level(l);
                let extrapolated = -v[n - 4] + v[n - 3] * 4.0 - v[n - 2] * 6.0 + v[n - 1] * 4.0;
                (extrapolated - mult * v[0]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Distance from the holomorphic class with this function's weight,
    /// measured on the boundary circles and relative to `max(1, max |f|)`.
    ///
    /// On the disk: the size of the negative Fourier modes on the unit
    /// circle. On the annulus: for each mode `m`, the mismatch between the
    /// inner and outer Fourier coefficients of `f e^(-i theta t)` required by
    /// a holomorphic extension `sum c_m e^((m + theta) w)`, balanced as
    /// `|inner e^(+lambda beta / 2) - outer e^(-lambda beta / 2)|` with
    /// `lambda = m + theta`. Modes whose scale factor would exceed `1e6` are
    /// skipped as unresolvable at double precision.
    pub fn holomorphic_defect(&self) -> f64 {
        let n = self.layout.n;
        let mut planner = FftPlanner::<f64>::new();
        let fft: Arc<dyn rustfft::Fft<f64>> = planner.plan_fft_forward(n);
        let modes = |circle: usize| {
            let mut buf: Vec<Complex64> = self
                .boundary(circle)
                .iter()
                .enumerate()
                .map(|(k, &v)| v * Complex64::from_polar(1.0, -self.theta * angle(k, n)) / n as f64)
                .collect();
            fft.process(&mut buf);
            buf
        };
        // Signed mode index of FFT bin j.
        let mode = |j: usize| if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
        let scale = self.max_abs().max(1.0);
        let outer = modes(0);
        let defect = match self.layout.domain {
            Domain::Disk => (0..n).filter(|&j| mode(j) < 0).map(|j| outer[j].norm()).fold(0.0, f64::max),
            Domain::Annulus { beta } => {
                let inner = modes(1);
                let band = n as i64 / 4;
                (0..n)
                    .filter(|&j| mode(j).abs() <= band)
                    .filter_map(|j| {
                        let lambda = mode(j) as f64 + self.theta;
                        let half = (lambda * beta / 2.0).abs();
                        (half <= 1e6f64.ln()).then(|| {
                            let e = (lambda * beta / 2.0).exp();
                            (inner[j] * e - outer[j] / e).norm()
                        })
                    })
                    .fold(0.0, f64::max)
            }
        };
        defect / scale
    }

    /// Membership in the weight-0 holomorphic algebra.
    pub fn is_in_algebra(&self, tol: f64) -> bool {
        weights_match(self.theta, 0.0) && self.holomorphic_defect() <= tol
    }
}

/// The continuous unimodular section `u(w) = e^(i theta Im w)` with
/// multiplier `e^(2 pi i theta)`.
pub fn unitary_section(theta: f64, w: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, theta * w.im)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GridRepr {
    pub domain: Domain,
    pub n: usize,
    #[serde(default)]
    pub radial: usize,
    pub theta: f64,
    pub samples: Vec<[f64; 2]>,
}

impl Serialize for GridFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRepr {
            domain: self.layout.domain,
            n: self.layout.n,
            radial: self.layout.radial,
            theta: self.theta,
            samples: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GridRepr::deserialize(d)?;
        let layout = GridLayout::new(r.domain, r.n, r.radial).map_err(serde::de::Error::custom)?;
        let values = r.samples.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        GridFunction::from_values(&layout, r.theta, values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_core::TwistedLaurent;
    use std::f64::consts::LN_2;

    fn ann() -> Domain {
        Domain::annulus(LN_2).unwrap()
    }

    #[test]
    fn refuses_coarse_and_mixed_grids() {
        assert!(GridLayout::new(ann(), 8, 0).is_err());
        let a = GridFunction::constant(&GridLayout::boundary(ann(), 32).unwrap(), Complex64::new(1.0, 0.0));
        let b = GridFunction::constant(&GridLayout::boundary(ann(), 64).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(a.add(&b), Err(Error::GridMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn conj_examples() {
        let layout = GridLayout::boundary(ann(), 64).unwrap();
        let i = GridFunction::constant(&layout, Complex64::i());
        assert!(i.conj().values().iter().all(|&v| v == -Complex64::i()));

        let f = TwistedLaurent::new(ann(), 0.3, [(0, Complex64::new(1.0, 0.0))]).unwrap();
        let g = f.to_grid_on(&layout).unwrap();
        let back = g.conj().conj();
        assert!(weights_match(back.theta(), g.theta()));
        assert_eq!(back.values(), g.values());
        let gc = g.conj();
        assert!((gc.theta() - 0.7).abs() < 1e-15);
        for k in 0..64 {
            let w = Complex64::new(0.0, angle(k, 64));
            assert!((gc.boundary(0)[k] - (w.conj() * 0.3).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn inner_circle_modulus() {
        let f = TwistedLaurent::new(ann(), 0.5, [(0, Complex64::new(1.0, 0.0))]).unwrap();
        let g = f.to_grid(64).unwrap();
        for v in g.boundary(1) {
            assert!((v.norm() - (-0.5 * LN_2).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn seam_detects_wrong_weight() {
        let layout = GridLayout::new(ann(), 1024, 3).unwrap();
        let good = GridFunction::from_fn(&layout, 0.3, |w| unitary_section(0.3, w));
        assert!(good.seam_residual() < 1e-8, "{}", good.seam_residual());
        let bad = GridFunction::from_fn(&layout, 0.0, |w| unitary_section(0.3, w));
        assert!(bad.seam_residual() > 0.1);
    }

    #[test]
    fn holomorphic_membership() {
        let layout = GridLayout::boundary(ann(), 256).unwrap();
        let f =
            TwistedLaurent::new(ann(), 0.0, [(-2, Complex64::new(0.3, 0.1)), (0, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.0, 0.5))])
                .unwrap();
        let g = f.to_grid_on(&layout).unwrap();
        assert!(g.is_in_algebra(1e-10), "{}", g.holomorphic_defect());
        assert!(!g.conj().is_in_algebra(1e-3));
        let t = TwistedLaurent::new(ann(), 0.4, [(1, Complex64::new(1.0, 0.0))]).unwrap().to_grid_on(&layout).unwrap();
        assert!(t.holomorphic_defect() < 1e-10);
        assert!(!t.is_in_algebra(1e-8));
        let disk = GridLayout::boundary(Domain::Disk, 64).unwrap();
        let z = GridFunction::from_fn(&disk, 0.0, |w| w.exp());
        assert!(z.is_in_algebra(1e-12));
        assert!(!z.conj().is_in_algebra(1e-3));
    }
}
