//! Boundary maximization of moduli of holomorphic objects.
//!
//! `|f|` (or `||F||` for matrix-valued `F`) is subharmonic and deck
//! invariant, so its sup over the domain is attained on a boundary circle.
//! Each circle is sampled densely and the best local maxima are polished by
//! golden-section search in the angle.

use num_complex::Complex64;

use super::domain::{angle, Domain};
use crate::exec::Exec;

pub const DEFAULT_SAMPLES: usize = 1024;
pub const DEFAULT_REFINE_TOL: f64 = 1e-9;
/// Local maxima polished per circle.
const REFINE_CANDIDATES: usize = 8;

/// Golden-section maximization of `g` on `[a, b]` until the bracket is
/// shorter than `tol`.
pub fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
        iters += 1;
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Sup of `modulus(w)` over the boundary circles of `domain`.
pub fn boundary_sup<F>(domain: &Domain, samples: usize, refine_tol: f64, exec: Exec, modulus: F) -> f64
where
    F: Fn(Complex64) -> f64 + Sync + Send,
{
    let samples = samples.max(3);
    let mut best: f64 = 0.0;
    for s in domain.boundary_levels() {
        let at = |t: f64| modulus(Complex64::new(s, t));
        let vals = exec.map(samples, |k| at(angle(k, samples)));
        if vals.iter().any(|v| v.is_nan()) {
            return f64::NAN;
        }
        let mut peaks: Vec<usize> = (0..samples)
            .filter(|&k| {
                let prev = vals[(k + samples - 1) % samples];
                let next = vals[(k + 1) % samples];
                vals[k] >= prev && vals[k] >= next
            })
            .collect();
        peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
        peaks.truncate(REFINE_CANDIDATES);
        best = best.max(vals.iter().cloned().fold(0.0, f64::max));
        let h = angle(1, samples);
        let polished = exec.map(peaks.len(), |p| {
            let t0 = angle(peaks[p], samples);
            golden_max(at, t0 - h, t0 + h, refine_tol).1
        });
        best = polished.into_iter().fold(best, f64::max);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_peak() {
        let (t, v) = golden_max(|t| -(t - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-10);
        assert!((t - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn refinement_beats_coarse_sampling() {
        // A narrow off-grid peak at t = 0.123 on the unit circle.
        let f = |w: Complex64| 1.0 / (1.0 + 50.0 * (1.0 - (w.im - 0.123).cos()));
        let coarse = boundary_sup(&Domain::Disk, 64, 1e-10, Exec::Sequential, f);
        assert!((coarse - 1.0).abs() < 1e-12, "{coarse}");
    }
}
