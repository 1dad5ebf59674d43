use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::{frac, weights_match, Domain, WEIGHT_TOL};
use super::grid::{GridFunction, GridLayout};
use super::sup::boundary_sup;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// A holomorphic function on the cover with multiplier `e^(2 pi i theta)`:
/// `f(w) = sum_m c_m e^((m + theta) w)` over a finite degree window.
///
/// On the disk `theta = 0`, degrees are non-negative and `f(z) = sum c_m z^m`.
/// Coefficients are stored densely from `min_degree`; an empty vector is the
/// zero function.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedLaurent {
    domain: Domain,
    theta: f64,
    min_degree: i64,
    coeffs: Vec<Complex64>,
}

impl TwistedLaurent {
    pub fn from_dense(domain: Domain, theta: f64, min_degree: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("weight must lie in [0, 1), got {theta}")));
        }
        let theta = if theta < WEIGHT_TOL || 1.0 - theta < WEIGHT_TOL { 0.0 } else { theta };
        if !domain.admits_weight(theta) {
            return Err(Error::WeightMismatch(format!("the disk admits only weight 0, got {theta}")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let f = TwistedLaurent { domain, theta, min_degree, coeffs };
        if domain == Domain::Disk && !f.coeffs.is_empty() && f.min_degree < 0 {
            let lowest = f.iter().find(|(_, c)| *c != Complex64::new(0.0, 0.0));
            if let Some((m, _)) = lowest {
                if m < 0 {
                    return Err(Error::InvalidParameter(format!("negative degree {m} on the disk")));
                }
            }
            return Ok(f.trimmed());
        }
        Ok(f)
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees add up.
    pub fn new<I>(domain: Domain, theta: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::from_dense(domain, theta, 0, Vec::new());
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (m, c) in terms {
            coeffs[(m - lo) as usize] += c;
        }
        Self::from_dense(domain, theta, lo, coeffs)
    }

    pub fn zero(domain: Domain, theta: f64) -> Result<Self> {
        Self::from_dense(domain, theta, 0, Vec::new())
    }

    pub fn constant(domain: Domain, c: Complex64) -> Self {
        TwistedLaurent { domain, theta: 0.0, min_degree: 0, coeffs: vec![c] }
    }

    pub fn monomial(domain: Domain, theta: f64, degree: i64, c: Complex64) -> Result<Self> {
        Self::from_dense(domain, theta, degree, vec![c])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Inclusive degree window, `None` for the empty representation.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.min_degree, self.min_degree + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        let i = m - self.min_degree;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, &c)| (self.min_degree + i as i64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Drops exactly-zero coefficients at both ends of the window.
    pub fn trimmed(mut self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let lead = self.coeffs.iter().take_while(|&&c| c == zero).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_degree = 0;
            return self;
        }
        let tail = self.coeffs.iter().rev().take_while(|&&c| c == zero).count();
        self.coeffs.truncate(self.coeffs.len() - tail);
        self.coeffs.drain(..lead);
        self.min_degree += lead as i64;
        self
    }

    /// Evaluates at a cover point `w` (for the disk, `z = e^w`).
    pub fn eval(&self, w: Complex64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let z = w.exp();
        let horner = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        horner * (w * (self.min_degree as f64 + self.theta)).exp()
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{:?} vs {:?}", self.domain, other.domain)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        if !weights_match(self.theta, other.theta) {
            return Err(Error::WeightMismatch(format!("{} vs {}", self.theta, other.theta)));
        }
        let (a, b) = match (self.degree_range(), other.degree_range()) {
            (None, _) => return Ok(TwistedLaurent { theta: self.theta, ..other.clone() }),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let lo = a.0.min(b.0);
        let hi = a.1.max(b.1);
        let coeffs = (lo..=hi).map(|m| self.coeff(m) + other.coeff(m)).collect();
        Ok(TwistedLaurent { domain: self.domain, theta: self.theta, min_degree: lo, coeffs })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TwistedLaurent { coeffs: self.coeffs.iter().map(|&c| c * s).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product by Cauchy convolution. Weights add modulo 1 and an integer
    /// overflow moves into the degree, so exponents `m + theta` add exactly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let total = self.theta + other.theta;
        let carry = if total >= 1.0 - WEIGHT_TOL { 1 } else { 0 };
        let theta = frac(total);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(TwistedLaurent { domain: self.domain, theta, min_degree: 0, coeffs: Vec::new() });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(TwistedLaurent { domain: self.domain, theta, min_degree: self.min_degree + other.min_degree + carry, coeffs })
    }

    /// Sup of `|f|` over the domain, attained on the boundary circles.
    pub fn sup_norm(&self, samples: usize, refine_tol: f64) -> f64 {
        self.sup_norm_with(samples, refine_tol, Exec::default())
    }

    pub fn sup_norm_with(&self, samples: usize, refine_tol: f64, exec: Exec) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        boundary_sup(&self.domain, samples, refine_tol, exec, |w| self.eval(w).norm())
    }

    /// Boundary samples only, `n` equispaced angles per circle.
    pub fn to_grid(&self, n: usize) -> Result<GridFunction> {
        self.to_grid_on(&GridLayout::boundary(self.domain, n)?)
    }

    pub fn to_grid_on(&self, layout: &GridLayout) -> Result<GridFunction> {
        if layout.domain() != self.domain {
            return Err(Error::DomainMismatch("grid layout domain differs".into()));
        }
        Ok(GridFunction::from_fn(layout, self.theta, |w| self.eval(w)))
    }

    /// True iff `f` has weight 0 and every non-constant coefficient is at most
    /// `tol` in modulus. On a connected domain this is exactly the case in
    /// which `f` and its conjugate are both holomorphic.
    pub fn is_constant(&self, tol: f64) -> bool {
        weights_match(self.theta, 0.0) && self.iter().all(|(m, c)| m == 0 || c.norm() <= tol)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    m: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    domain: Domain,
    theta: f64,
    coeffs: Vec<CoeffRepr>,
}

impl Serialize for TwistedLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            domain: self.domain,
            theta: self.theta,
            coeffs: self.iter().map(|(m, c)| CoeffRepr { m, re: c.re, im: c.im }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwistedLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LaurentRepr::deserialize(d)?;
        TwistedLaurent::new(r.domain, r.theta, r.coeffs.into_iter().map(|c| (c.m, Complex64::new(c.re, c.im))))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_core::domain::{deck, multiplier};
    use std::f64::consts::{LN_2, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ann() -> Domain {
        Domain::annulus(LN_2).unwrap()
    }

    #[test]
    fn add_identity_and_inverse() {
        let f = TwistedLaurent::new(ann(), 0.3, [(0, c(1.0)), (2, Complex64::new(0.5, -1.0))]).unwrap();
        let zero = TwistedLaurent::zero(ann(), 0.3).unwrap();
        assert_eq!(f.add(&zero).unwrap(), f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
    }

    #[test]
    fn add_disjoint_supports() {
        let f = TwistedLaurent::new(ann(), 0.3, [(0, c(1.0))]).unwrap();
        let g = TwistedLaurent::new(ann(), 0.3, [(1, c(2.0))]).unwrap();
        let s = f.add(&g).unwrap();
        assert_eq!(s.degree_range(), Some((0, 1)));
        assert_eq!(s.coeff(0), c(1.0));
        assert_eq!(s.coeff(1), c(2.0));
    }

    #[test]
    fn add_rejects_mismatches() {
        let f = TwistedLaurent::new(ann(), 0.3, [(0, c(1.0))]).unwrap();
        let g = TwistedLaurent::new(ann(), 0.4, [(0, c(1.0))]).unwrap();
        assert!(matches!(f.add(&g), Err(Error::WeightMismatch(_))));
        let h = TwistedLaurent::constant(Domain::annulus(1.0).unwrap(), c(1.0));
        let k = TwistedLaurent::constant(ann(), c(1.0));
        assert!(matches!(h.add(&k), Err(Error::DomainMismatch(_))));
        assert!(matches!(h.mul(&k), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn mul_carries_weight_overflow() {
        let f = TwistedLaurent::new(ann(), 0.3, [(0, c(1.0))]).unwrap();
        let g = TwistedLaurent::new(ann(), 0.7, [(-1, c(1.0))]).unwrap();
        let p = f.mul(&g).unwrap();
        assert_eq!(p.theta(), 0.0);
        assert_eq!(p.degree_range(), Some((0, 0)));
        assert_eq!(p.coeff(0), c(1.0));
    }

    #[test]
    fn mul_unit_and_square() {
        let z = TwistedLaurent::new(ann(), 0.0, [(1, c(1.0))]).unwrap();
        let one = TwistedLaurent::constant(ann(), c(1.0));
        assert_eq!(z.mul(&one).unwrap(), z);
        let z2 = z.mul(&z).unwrap();
        assert_eq!(z2.degree_range(), Some((2, 2)));
        assert_eq!(z2.coeff(2), c(1.0));
    }

    #[test]
    fn sup_norm_closed_forms() {
        let one = TwistedLaurent::constant(ann(), c(1.0));
        assert_eq!(one.sup_norm(1024, 1e-9), 1.0);
        let up = TwistedLaurent::new(ann(), 0.5, [(0, c(1.0))]).unwrap();
        assert!((up.sup_norm(1024, 1e-9) - 1.0).abs() < 1e-12);
        // e^(-0.5 w) = e^((-1 + 0.5) w)
        let down = TwistedLaurent::new(ann(), 0.5, [(-1, c(1.0))]).unwrap();
        assert!((down.sup_norm(1024, 1e-9) - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn multiplier_law_holds() {
        let f = TwistedLaurent::new(ann(), 0.37, [(-2, c(0.4)), (0, Complex64::new(1.0, 2.0)), (3, c(-0.7))]).unwrap();
        for k in 0..20 {
            let w = Complex64::new(-LN_2 * (k as f64) / 20.0, 0.3 * k as f64 - 2.0);
            let lhs = f.eval(deck(w));
            let rhs = multiplier(0.37) * f.eval(w);
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + f.eval(w).norm()));
        }
    }

    #[test]
    fn disk_grid_samples_are_roots_of_unity() {
        let z = TwistedLaurent::new(Domain::Disk, 0.0, [(1, c(1.0))]).unwrap();
        // The grid requires at least 16 samples; every 4th of 16 is a 4th root.
        let g = z.to_grid(16).unwrap();
        let expected = [c(1.0), Complex64::i(), c(-1.0), -Complex64::i()];
        for (q, e) in expected.iter().enumerate() {
            assert!((g.boundary(0)[4 * q] - e).norm() < 1e-15);
        }
    }

    #[test]
    fn disk_rejects_twist_and_negative_degree() {
        assert!(TwistedLaurent::new(Domain::Disk, 0.5, [(0, c(1.0))]).is_err());
        assert!(TwistedLaurent::new(Domain::Disk, 0.0, [(-1, c(1.0))]).is_err());
        assert!(TwistedLaurent::new(Domain::Disk, 0.0, [(-1, c(0.0)), (1, c(1.0))]).is_ok());
    }

    #[test]
    fn constancy() {
        assert!(TwistedLaurent::constant(ann(), c(5.0)).is_constant(1e-12));
        assert!(!TwistedLaurent::new(Domain::Disk, 0.0, [(1, c(1.0))]).unwrap().is_constant(1e-12));
        assert!(!TwistedLaurent::new(ann(), 0.3, [(0, c(1.0))]).unwrap().is_constant(1e-12));
    }

    #[test]
    fn json_round_trip() {
        let f = TwistedLaurent::new(ann(), 0.5, [(0, c(1.0)), (-3, Complex64::new(0.1, 1.0 / 3.0))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: TwistedLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let spec = r#"{"domain": {"kind": "annulus", "beta": 0.6931}, "theta": 0.5, "coeffs": [{"m": 0, "re": 1.0, "im": 0.0}]}"#;
        let h: TwistedLaurent = serde_json::from_str(spec).unwrap();
        assert_eq!(h.coeff(0), c(1.0));
    }
}
