//! Alternating search for low-norm holomorphic lifts of `1_B`.
//!
//! Coefficients are frame-relative: `y_i[j] = sum_d b_{ijd} e^{(d + phi_j) w}`
//! and `x_i[l] = sum_d a_{ild} e^{-(d + phi_l) w}` with `phi_j = frac(-theta_j)`,
//! so the window `[0, 0]` holds exactly the frame. The lift identity
//! `sum_i y_i[j] x_i[l] = delta_jl` becomes the bilinear system
//! `sum_i sum_{d1 - d2 = e} b_{ijd1} a_{ild2} = delta_jl delta_e0`, linear in
//! either factor and separable by `j` (resp. `l`). Each half-step minimizes
//! the sampled boundary sup of the assembled row (resp. column) under that
//! constraint with Lawson-reweighted least squares.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::context::{Level, Lift, LiftReport, LiftTarget, MoritaContext, SYMMETRY_TOL};
use crate::equivariant::EquivariantMatrix;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::function_core::{frac, Domain, TwistedLaurent};
use crate::linalg::{spectral_norm, CMat};

const MIN_SAMPLES: usize = 64;
const OVERSAMPLING: usize = 4;
const LAWSON_ITERS: usize = 30;
const FEASIBILITY_TOL: f64 = 1e-9;
/// Optimizer output must reconstruct the unit to this residual.
pub const OUTPUT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeParams {
    pub terms: usize,
    pub degree_min: i64,
    pub degree_max: i64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        OptimizeParams { terms: 1, degree_min: 0, degree_max: 0, restarts: 8, seed: 0, max_iters: 25 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub restart: usize,
    pub iteration: usize,
    pub row_norm: f64,
    pub col_norm: f64,
    pub lift_norm: f64,
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub best: Lift,
    pub report: LiftReport,
    pub best_restart: usize,
    pub best_seed: u64,
    /// Verified norm of each restart that produced a lift, in restart order.
    pub restart_norms: Vec<Option<f64>>,
    pub trace: Vec<TraceRow>,
}

impl OptimizeResult {
    pub fn norm(&self) -> f64 {
        self.report.lift_norm
    }
}

struct Problem {
    domain: Domain,
    n: usize,
    k: usize,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    /// `y` degrees `dy.0..=dy.1`, `x` degrees `dx.0..=dx.1`.
    dy: (i64, i64),
    dx: (i64, i64),
    /// Per `j`: samples x `y`-degrees, `e^{(d + phi_j) w_s}`.
    phi_y: Vec<CMat>,
    /// Per `l`: samples x `x`-degrees, `e^{-(d + phi_l) w_s}`.
    psi_x: Vec<CMat>,
    samples: usize,
}

/// `b[j]` is k x |Dy| (row i = coefficients of `y_i[j]`), `a[l]` is k x |Dx|.
#[derive(Clone)]
struct State {
    b: Vec<CMat>,
    a: Vec<CMat>,
}

impl Problem {
    fn new(ctx: &MoritaContext, p: &OptimizeParams) -> Result<Self> {
        let (lo, hi) = (p.degree_min.min(p.degree_max), p.degree_min.max(p.degree_max));
        let domain = ctx.domain();
        let n = ctx.twist().n();
        // The disk forbids negative powers of z in either factor.
        let dy = if domain.is_annulus() { (lo, hi) } else { (lo.max(0), hi) };
        let dx = if domain.is_annulus() { (lo, hi) } else { (lo, hi.min(0)) };
        if dy.0 > dy.1 || dx.0 > dx.1 || p.terms < n {
            return Err(Error::InfeasibleWindow(lo, hi));
        }
        let thetas = ctx.twist().thetas().to_vec();
        let phis: Vec<f64> = thetas.iter().map(|&t| frac(-t)).collect();
        let ny = (dy.1 - dy.0 + 1) as usize;
        let nx = (dx.1 - dx.0 + 1) as usize;
        let per_circle = MIN_SAMPLES.max(OVERSAMPLING * ny.max(nx));
        let points: Vec<Complex64> = domain
            .boundary_levels()
            .into_iter()
            .flat_map(|re| (0..per_circle).map(move |s| Complex64::new(re, 2.0 * PI * s as f64 / per_circle as f64)))
            .collect();
        let phi_y = phis
            .iter()
            .map(|&phi| DMatrix::from_fn(points.len(), ny, |s, d| ((dy.0 + d as i64) as f64 + phi) * points[s]).map(|z| z.exp()))
            .collect();
        let psi_x = phis
            .iter()
            .map(|&phi| DMatrix::from_fn(points.len(), nx, |s, d| -((dx.0 + d as i64) as f64 + phi) * points[s]).map(|z| z.exp()))
            .collect();
        Ok(Problem { domain, n, k: p.terms, thetas, phis, dy, dx, phi_y, psi_x, samples: points.len() })
    }

    fn ny(&self) -> usize {
        (self.dy.1 - self.dy.0 + 1) as usize
    }

    fn nx(&self) -> usize {
        (self.dx.1 - self.dx.0 + 1) as usize
    }

    fn e_range(&self) -> (i64, i64) {
        (self.dy.0 - self.dx.1, self.dy.1 - self.dx.0)
    }

    /// The frame in window coordinates, padded by zero terms; `None` if the
    /// window misses degree 0.
    fn frame_state(&self) -> Option<State> {
        if self.dy.0 > 0 || self.dy.1 < 0 || self.dx.0 > 0 || self.dx.1 < 0 {
            return None;
        }
        let (oy, ox) = ((-self.dy.0) as usize, (-self.dx.0) as usize);
        let b = (0..self.n)
            .map(|j| {
                let mut m = CMat::zeros(self.k, self.ny());
                m[(j, oy)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        let a = (0..self.n)
            .map(|l| {
                let mut m = CMat::zeros(self.k, self.nx());
                m[(l, ox)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        Some(State { b, a })
    }

    /// Values `y_i[j](w_s)` (per j: k x samples).
    fn y_values(&self, b: &[CMat]) -> Vec<CMat> {
        (0..self.n).map(|j| &b[j] * self.phi_y[j].transpose()).collect()
    }

    fn x_values(&self, a: &[CMat]) -> Vec<CMat> {
        (0..self.n).map(|l| &a[l] * self.psi_x[l].transpose()).collect()
    }

    /// Per-sample spectral norms of `G(w_s)` (n x k) and Frobenius norms.
    fn row_profile(&self, b: &[CMat]) -> (Vec<f64>, Vec<f64>) {
        let v = self.y_values(b);
        (0..self.samples)
            .map(|s| {
                let g = CMat::from_fn(self.n, self.k, |j, i| v[j][(i, s)]);
                (spectral_norm(&g), g.norm())
            })
            .unzip()
    }

    fn col_profile(&self, a: &[CMat]) -> (Vec<f64>, Vec<f64>) {
        let v = self.x_values(a);
        (0..self.samples)
            .map(|s| {
                let f = CMat::from_fn(self.k, self.n, |i, l| v[l][(i, s)]);
                (spectral_norm(&f), f.norm())
            })
            .unzip()
    }

    fn row_norm(&self, b: &[CMat]) -> f64 {
        self.row_profile(b).0.into_iter().fold(0.0, f64::max)
    }

    fn col_norm(&self, a: &[CMat]) -> f64 {
        self.col_profile(a).0.into_iter().fold(0.0, f64::max)
    }

    /// Constraint for `b[j]` given `a`: rows `(l, e)`, columns `(i, d1)`.
    #[allow(clippy::needless_range_loop)]
    fn y_constraint(&self, a: &[CMat], j: usize) -> (CMat, CMat) {
        let (e0, e1) = self.e_range();
        let ne = (e1 - e0 + 1) as usize;
        let (ny, nx) = (self.ny(), self.nx());
        let mut m = CMat::zeros(self.n * ne, self.k * ny);
        let mut c = CMat::zeros(self.n * ne, 1);
        for l in 0..self.n {
            for ei in 0..ne {
                let e = e0 + ei as i64;
                let row = l * ne + ei;
                if l == j && e == 0 {
                    c[(row, 0)] = Complex64::new(1.0, 0.0);
                }
                for i in 0..self.k {
                    for d1 in 0..ny {
                        let d2 = self.dy.0 + d1 as i64 - e - self.dx.0;
                        if d2 >= 0 && (d2 as usize) < nx {
                            m[(row, i * ny + d1)] = a[l][(i, d2 as usize)];
                        }
                    }
                }
            }
        }
        (m, c)
    }

    /// Constraint for `a[l]` given `b`: rows `(j, e)`, columns `(i, d2)`.
    #[allow(clippy::needless_range_loop)]
    fn x_constraint(&self, b: &[CMat], l: usize) -> (CMat, CMat) {
        let (e0, e1) = self.e_range();
        let ne = (e1 - e0 + 1) as usize;
        let (ny, nx) = (self.ny(), self.nx());
        let mut m = CMat::zeros(self.n * ne, self.k * nx);
        let mut c = CMat::zeros(self.n * ne, 1);
        for j in 0..self.n {
            for ei in 0..ne {
                let e = e0 + ei as i64;
                let row = j * ne + ei;
                if l == j && e == 0 {
                    c[(row, 0)] = Complex64::new(1.0, 0.0);
                }
                for i in 0..self.k {
                    for d2 in 0..nx {
                        let d1 = self.dx.0 + d2 as i64 + e - self.dy.0;
                        if d1 >= 0 && (d1 as usize) < ny {
                            m[(row, i * nx + d2)] = b[j][(i, d1 as usize)];
                        }
                    }
                }
            }
        }
        (m, c)
    }

    /// Minimizes `sum_s w_s sum_i |(basis coeffs_i)(s)|^2` subject to the
    /// constraint; returns the k x |D| coefficient block.
    fn weighted_solve(basis: &CMat, weights: &[f64], k: usize, constraint: &(CMat, CMat)) -> Option<CMat> {
        let nd = basis.ncols();
        let mut h = CMat::zeros(nd, nd);
        for (s, w) in weights.iter().enumerate().take(basis.nrows()) {
            let row = basis.row(s);
            h += row.adjoint() * row * Complex64::new(*w, 0.0);
        }
        let ridge = 1e-13 * (h.trace().re / nd as f64).max(1e-300);
        for d in 0..nd {
            h[(d, d)] += Complex64::new(ridge, 0.0);
        }
        let chol = h.cholesky()?;
        let l = chol.l();
        let linv = l.solve_lower_triangular(&CMat::identity(nd, nd))?;
        // b_i = Linv^H u_i
        let t = linv.adjoint();
        let (m, c) = constraint;
        let mut mw = CMat::zeros(m.nrows(), m.ncols());
        for i in 0..k {
            let block = m.columns(i * nd, nd) * &t;
            mw.columns_mut(i * nd, nd).copy_from(&block);
        }
        let svd = mw.svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let u = svd.solve(c, 1e-12 * smax.max(1e-300)).ok()?;
        let mut out = CMat::zeros(k, nd);
        for i in 0..k {
            let bi = &t * u.rows(i * nd, nd);
            for d in 0..nd {
                out[(i, d)] = bi[(d, 0)];
            }
        }
        let flat = CMat::from_fn(k * nd, 1, |r, _| out[(r / nd, r % nd)]);
        let res = (m * flat - c).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = out.iter().map(|z| z.norm()).fold(1.0, f64::max);
        (res <= FEASIBILITY_TOL * scale).then_some(out)
    }

    /// Lawson iteration for the `y` half-step. Returns the best feasible
    /// coefficients and their sampled row norm.
    fn y_step(&self, a: &[CMat]) -> Option<(Vec<CMat>, f64)> {
        let constraints: Vec<_> = (0..self.n).map(|j| self.y_constraint(a, j)).collect();
        self.lawson(
            |w| (0..self.n).map(|j| Self::weighted_solve(&self.phi_y[j], w, self.k, &constraints[j])).collect::<Option<Vec<_>>>(),
            |b| self.row_profile(b),
        )
    }

    fn x_step(&self, b: &[CMat]) -> Option<(Vec<CMat>, f64)> {
        let constraints: Vec<_> = (0..self.n).map(|l| self.x_constraint(b, l)).collect();
        self.lawson(
            |w| (0..self.n).map(|l| Self::weighted_solve(&self.psi_x[l], w, self.k, &constraints[l])).collect::<Option<Vec<_>>>(),
            |a| self.col_profile(a),
        )
    }

    fn lawson<S, P>(&self, solve: S, profile: P) -> Option<(Vec<CMat>, f64)>
    where
        S: Fn(&[f64]) -> Option<Vec<CMat>>,
        P: Fn(&[CMat]) -> (Vec<f64>, Vec<f64>),
    {
        let mut w = vec![1.0 / self.samples as f64; self.samples];
        let mut best: Option<(Vec<CMat>, f64)> = None;
        for _ in 0..LAWSON_ITERS {
            let coeffs = solve(&w)?;
            let (spec, frob) = profile(&coeffs);
            let norm = spec.iter().cloned().fold(0.0, f64::max);
            if best.as_ref().is_none_or(|(_, b)| norm < *b) {
                best = Some((coeffs, norm));
            }
            let mut total = 0.0;
            for (ws, r) in w.iter_mut().zip(&frob) {
                *ws *= r;
                total += *ws;
            }
            if !(total > 0.0) {
                break;
            }
            for ws in w.iter_mut() {
                *ws = (*ws / total).max(1e-300);
            }
        }
        best
    }

    fn to_lift(&self, st: &State) -> Result<Lift> {
        let mut xs = Vec::with_capacity(self.k);
        let mut ys = Vec::with_capacity(self.k);
        for i in 0..self.k {
            let y_entries = (0..self.n)
                .map(|j| {
                    let coeffs = (0..self.ny()).map(|d| st.b[j][(i, d)]).collect();
                    TwistedLaurent::from_dense(self.domain, self.phis[j], self.dy.0, coeffs)
                })
                .collect::<Result<Vec<_>>>()?;
            ys.push(EquivariantMatrix::holomorphic(self.domain, self.thetas.clone(), vec![0.0], y_entries)?);
            let x_entries = (0..self.n)
                .map(|l| {
                    // e^{-(d + phi_l) w} = e^{(m + theta_l) w} with m = -d - [theta_l != 0].
                    let shift = if self.thetas[l] == 0.0 { 0 } else { 1 };
                    let nx = self.nx();
                    let coeffs = (0..nx).map(|r| st.a[l][(i, nx - 1 - r)]).collect();
                    TwistedLaurent::from_dense(self.domain, self.thetas[l], -self.dx.1 - shift, coeffs)
                })
                .collect::<Result<Vec<_>>>()?;
            xs.push(EquivariantMatrix::holomorphic(self.domain, vec![0.0], self.thetas.clone(), x_entries)?);
        }
        Lift::new(LiftTarget::UnitB, xs, ys)
    }
}

fn scale_all(m: &mut [CMat], c: f64) {
    for b in m {
        *b *= Complex64::new(c, 0.0);
    }
}

fn balance(st: &mut State, row: f64, col: f64) -> f64 {
    if row > 0.0 && col > 0.0 {
        let c = (col / row).sqrt();
        scale_all(&mut st.b, c);
        scale_all(&mut st.a, 1.0 / c);
        (row * col).sqrt()
    } else {
        row.max(col)
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

struct RestartOutcome {
    lift: Option<(Lift, LiftReport)>,
    trace: Vec<TraceRow>,
}

fn run_restart(ctx: &MoritaContext, pb: &Problem, params: &OptimizeParams, restart: usize) -> Result<RestartOutcome> {
    let mut trace = Vec::new();
    let init = if restart == 0 { pb.frame_state() } else { None };
    let mut st = match init {
        Some(s) => s,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(params.seed, restart));
            let scale = 1.0 / ((pb.k * pb.nx()) as f64).sqrt();
            let mut g = || {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * scale
            };
            let a: Vec<CMat> = (0..pb.n).map(|_| CMat::from_fn(pb.k, pb.nx(), |_, _| g())).collect();
            match pb.y_step(&a) {
                Some((b, _)) => State { b, a },
                None => return Ok(RestartOutcome { lift: None, trace }),
            }
        }
    };
    let mut row = pb.row_norm(&st.b);
    let mut col = pb.col_norm(&st.a);
    let mut norm = balance(&mut st, row, col);
    row = norm;
    col = norm;
    trace.push(TraceRow { restart, iteration: 0, row_norm: row, col_norm: col, lift_norm: norm });

    for it in 1..=params.max_iters {
        let prev = norm;
        if let Some((b, r)) = pb.y_step(&st.a) {
            if r < row {
                st.b = b;
                row = r;
            }
        }
        if let Some((a, c)) = pb.x_step(&st.b) {
            if c < col {
                st.a = a;
                col = c;
            }
        }
        trace.push(TraceRow { restart, iteration: it, row_norm: row, col_norm: col, lift_norm: row.max(col) });
        norm = balance(&mut st, row, col);
        row = norm;
        col = norm;
        if prev - norm <= 1e-10 * norm {
            break;
        }
    }

    let lift = pb.to_lift(&st)?;
    let rep = ctx.verify_lift(&lift, SYMMETRY_TOL)?;
    if !(rep.residual <= OUTPUT_RESIDUAL_TOL) {
        return Ok(RestartOutcome { lift: None, trace });
    }
    let lift = lift.balanced(rep.row_norm, rep.col_norm);
    let rep = ctx.verify_lift(&lift, SYMMETRY_TOL)?;
    Ok(RestartOutcome { lift: Some((lift, rep)), trace })
}

/// Multi-start search for a lift of `1_B` with small
/// `max(||(y_i)||, ||(x_i)^t||)`, `terms` pairs, frame-relative degrees in
/// `[degree_min, degree_max]`. Restart 0 starts from the frame when the
/// window allows; the others start from seeded random `x`.
pub fn minimize_lift_norm(ctx: &MoritaContext, params: &OptimizeParams, exec: Exec) -> Result<OptimizeResult> {
    if ctx.level() != Level::Holomorphic {
        return Err(Error::InvalidParameter("lift search runs on the holomorphic level".into()));
    }
    if params.terms == 0 || params.restarts == 0 {
        return Err(Error::InvalidParameter("terms and restarts must be positive".into()));
    }
    let pb = Problem::new(ctx, params)?;
    let outcomes = exec.map(params.restarts, |r| run_restart(ctx, &pb, params, r));
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let mut trace = Vec::new();
    let mut restart_norms = Vec::with_capacity(outcomes.len());
    let mut best: Option<(f64, u64, usize, Lift, LiftReport)> = None;
    for (r, o) in outcomes.into_iter().enumerate() {
        trace.extend(o.trace);
        restart_norms.push(o.lift.as_ref().map(|(_, rep)| rep.lift_norm));
        if let Some((lift, rep)) = o.lift {
            let seed = restart_seed(params.seed, r);
            let better = best.as_ref().is_none_or(|(n, s, ..)| (rep.lift_norm, seed) < (*n, *s));
            if better {
                best = Some((rep.lift_norm, seed, r, lift, rep));
            }
        }
    }
    let (_, best_seed, best_restart, best, report) = best.ok_or(Error::InfeasibleWindow(params.degree_min, params.degree_max))?;
    Ok(OptimizeResult { best, report, best_restart, best_seed, restart_norms, trace })
}
