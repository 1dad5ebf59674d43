use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::twist::{Space, UnitaryTwist};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::function_core::{
    boundary_sup, deck, frac, multiplier, weights_match, Domain, GridFunction, GridLayout, TwistedLaurent, DEFAULT_SAMPLES,
};
use crate::linalg::{spectral_norm, CMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    Holomorphic,
    Grid,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Holomorphic(Vec<TwistedLaurent>),
    Grid(Vec<GridFunction>),
}

/// A `rows x cols` matrix of twisted functions. Entry `(i, j)` carries weight
/// `frac(right[j] - left[i])`, so that
/// `a(w + 2 pi i) = diag(e^(-2 pi i left)) a(w) diag(e^(2 pi i right))`.
///
/// Entries are stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMatrix {
    domain: Domain,
    left: Vec<f64>,
    right: Vec<f64>,
    entries: Entries,
}

fn entry_weight(left: &[f64], right: &[f64], i: usize, j: usize) -> f64 {
    frac(right[j] - left[i])
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl EquivariantMatrix {
    pub fn holomorphic(domain: Domain, left: Vec<f64>, right: Vec<f64>, entries: Vec<TwistedLaurent>) -> Result<Self> {
        let m = Self::holomorphic_unchecked(domain, left, right, entries)?;
        m.validate_weights()?;
        Ok(m)
    }

    /// Skips the entry-weight law. Only meant for building deliberately
    /// broken canaries.
    pub fn holomorphic_unchecked(domain: Domain, left: Vec<f64>, right: Vec<f64>, entries: Vec<TwistedLaurent>) -> Result<Self> {
        let left: Vec<f64> = left.into_iter().map(frac).collect();
        let right: Vec<f64> = right.into_iter().map(frac).collect();
        if entries.len() != left.len() * right.len() {
            return Err(Error::ShapeMismatch(format!("{} entries for a {}x{} matrix", entries.len(), left.len(), right.len())));
        }
        if let Some(e) = entries.iter().find(|e| e.domain() != domain) {
            return Err(Error::DomainMismatch(format!("entry on {:?}, matrix on {domain:?}", e.domain())));
        }
        Ok(EquivariantMatrix { domain, left, right, entries: Entries::Holomorphic(entries) })
    }

    pub fn grid(layout: &GridLayout, left: Vec<f64>, right: Vec<f64>, entries: Vec<GridFunction>) -> Result<Self> {
        let left: Vec<f64> = left.into_iter().map(frac).collect();
        let right: Vec<f64> = right.into_iter().map(frac).collect();
        if entries.len() != left.len() * right.len() {
            return Err(Error::ShapeMismatch(format!("{} entries for a {}x{} matrix", entries.len(), left.len(), right.len())));
        }
        for e in &entries {
            layout.ensure_same(e.layout())?;
        }
        let m = EquivariantMatrix { domain: layout.domain(), left, right, entries: Entries::Grid(entries) };
        m.validate_weights()?;
        Ok(m)
    }

    /// Grid matrix from a pointwise matrix-valued function.
    pub fn from_grid_fn<F>(layout: &GridLayout, left: Vec<f64>, right: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> CMat,
    {
        let values: Vec<CMat> = layout.points().into_iter().map(&f).collect();
        Self::from_samples(layout, left, right, &values)
    }

    /// Grid matrix from one value per sample point of `layout`.
    pub fn from_samples(layout: &GridLayout, left: Vec<f64>, right: Vec<f64>, values: &[CMat]) -> Result<Self> {
        let (p, q) = (left.len(), right.len());
        if values.len() != layout.len() {
            return Err(Error::GridMismatch(format!("{} samples for a layout of {}", values.len(), layout.len())));
        }
        if values.iter().any(|v| v.nrows() != p || v.ncols() != q) {
            return Err(Error::ShapeMismatch("pointwise value has the wrong shape".into()));
        }
        let mut entries = Vec::with_capacity(p * q);
        for i in 0..p {
            for j in 0..q {
                let samples = values.iter().map(|v| v[(i, j)]).collect();
                entries.push(GridFunction::from_values(layout, entry_weight(&left, &right, i, j), samples)?);
            }
        }
        Self::grid(layout, left, right, entries)
    }

    /// A constant matrix. Entries with nonzero weight must vanish.
    pub fn constant(domain: Domain, left: Vec<f64>, right: Vec<f64>, values: &CMat) -> Result<Self> {
        if values.nrows() != left.len() || values.ncols() != right.len() {
            return Err(Error::ShapeMismatch("constant value shape".into()));
        }
        let mut entries = Vec::with_capacity(left.len() * right.len());
        for i in 0..left.len() {
            for j in 0..right.len() {
                let w = entry_weight(&left, &right, i, j);
                let v = values[(i, j)];
                if v == zero() {
                    entries.push(TwistedLaurent::zero(domain, w)?);
                } else if weights_match(w, 0.0) {
                    entries.push(TwistedLaurent::constant(domain, v));
                } else {
                    return Err(Error::WeightMismatch(format!("nonzero constant at ({i}, {j}) with weight {w}")));
                }
            }
        }
        Self::holomorphic(domain, left, right, entries)
    }

    pub fn identity(domain: Domain, weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        Self::constant(domain, weights.clone(), weights, &CMat::identity(n, n))
    }

    pub fn zeros(domain: Domain, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let values = CMat::zeros(left.len(), right.len());
        Self::constant(domain, left, right, &values)
    }

    fn validate_weights(&self) -> Result<()> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let want = entry_weight(&self.left, &self.right, i, j);
                let have = self.entry_theta(i, j);
                if !weights_match(want, have) {
                    return Err(Error::WeightMismatch(format!("entry ({i}, {j}) has weight {have}, expected {want}")));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn rows(&self) -> usize {
        self.left.len()
    }

    pub fn cols(&self) -> usize {
        self.right.len()
    }

    pub fn left_weights(&self) -> &[f64] {
        &self.left
    }

    pub fn right_weights(&self) -> &[f64] {
        &self.right
    }

    pub fn repr(&self) -> Repr {
        match self.entries {
            Entries::Holomorphic(_) => Repr::Holomorphic,
            Entries::Grid(_) => Repr::Grid,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn layout(&self) -> Option<GridLayout> {
        match &self.entries {
            Entries::Grid(g) => g.first().map(|e| *e.layout()),
            Entries::Holomorphic(_) => None,
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.cols() + j
    }

    pub fn holomorphic_entry(&self, i: usize, j: usize) -> Option<&TwistedLaurent> {
        match &self.entries {
            Entries::Holomorphic(e) => Some(&e[self.idx(i, j)]),
            Entries::Grid(_) => None,
        }
    }

    pub fn grid_entry(&self, i: usize, j: usize) -> Option<&GridFunction> {
        match &self.entries {
            Entries::Grid(e) => Some(&e[self.idx(i, j)]),
            Entries::Holomorphic(_) => None,
        }
    }

    fn entry_theta(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            Entries::Holomorphic(e) => e[self.idx(i, j)].theta(),
            Entries::Grid(e) => e[self.idx(i, j)].theta(),
        }
    }

    /// True when this matrix has the weight signature of `space` for `twist`.
    pub fn is_in(&self, space: Space, twist: &UnitaryTwist) -> bool {
        let (l, r) = space.weights(twist);
        same_weights(&self.left, &l) && same_weights(&self.right, &r)
    }

    /// The pointwise value at a cover point; holomorphic representation only.
    pub fn eval(&self, w: Complex64) -> Option<CMat> {
        match &self.entries {
            Entries::Holomorphic(e) => Some(CMat::from_fn(self.rows(), self.cols(), |i, j| e[i * self.cols() + j].eval(w))),
            Entries::Grid(_) => None,
        }
    }

    /// The pointwise value at storage index `k`; grid representation only.
    pub fn sample(&self, k: usize) -> Option<CMat> {
        match &self.entries {
            Entries::Grid(e) => Some(CMat::from_fn(self.rows(), self.cols(), |i, j| e[i * self.cols() + j].values()[k])),
            Entries::Holomorphic(_) => None,
        }
    }

    /// All pointwise values in storage order; grid representation only.
    pub fn samples(&self) -> Option<Vec<CMat>> {
        let n = self.layout()?.len();
        Some((0..n).map(|k| self.sample(k).unwrap()).collect())
    }

    pub fn to_grid(&self, layout: &GridLayout) -> Result<Self> {
        match &self.entries {
            Entries::Grid(e) => {
                if let Some(first) = e.first() {
                    first.layout().ensure_same(layout)?;
                }
                Ok(self.clone())
            }
            Entries::Holomorphic(e) => {
                let entries = e.iter().map(|f| f.to_grid_on(layout)).collect::<Result<Vec<_>>>()?;
                Ok(EquivariantMatrix {
                    domain: self.domain,
                    left: self.left.clone(),
                    right: self.right.clone(),
                    entries: Entries::Grid(entries),
                })
            }
        }
    }

    /// Brings two operands to a common representation: holomorphic if both
    /// are, otherwise the grid of whichever operand is sampled.
    fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{:?} vs {:?}", self.domain, other.domain)));
        }
        match (self.layout(), other.layout()) {
            (None, None) if self.repr() == Repr::Holomorphic && other.repr() == Repr::Holomorphic => Ok((self.clone(), other.clone())),
            (Some(l), _) | (None, Some(l)) => Ok((self.to_grid(&l)?, other.to_grid(&l)?)),
            // Grid matrices without entries carry no layout.
            (None, None) => Ok((self.clone(), other.clone())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::ShapeMismatch(format!("{}x{} + {}x{}", self.rows(), self.cols(), other.rows(), other.cols())));
        }
        if !same_weights(&self.left, &other.left) || !same_weights(&self.right, &other.right) {
            return Err(Error::WeightMismatch("summands have different weight signatures".into()));
        }
        let (a, b) = self.unify(other)?;
        let entries = match (&a.entries, &b.entries) {
            (Entries::Holomorphic(x), Entries::Holomorphic(y)) => {
                Entries::Holomorphic(x.iter().zip(y).map(|(f, g)| f.add(g)).collect::<Result<_>>()?)
            }
            (Entries::Grid(x), Entries::Grid(y)) => Entries::Grid(x.iter().zip(y).map(|(f, g)| f.add(g)).collect::<Result<_>>()?),
            _ => unreachable!("unify returns matching representations"),
        };
        Ok(EquivariantMatrix { entries, ..a })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let entries = match &self.entries {
            Entries::Holomorphic(e) => Entries::Holomorphic(e.iter().map(|f| f.scale(s)).collect()),
            Entries::Grid(e) => Entries::Grid(e.iter().map(|f| f.scale(s)).collect()),
        };
        EquivariantMatrix { entries, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Pointwise matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch(format!("{}x{} times {}x{}", self.rows(), self.cols(), other.rows(), other.cols())));
        }
        if !same_weights(&self.right, &other.left) {
            return Err(Error::WeightMismatch("inner weights of the product differ".into()));
        }
        let (a, b) = self.unify(other)?;
        let (p, inner, q) = (a.rows(), a.cols(), b.cols());
        let left = a.left.clone();
        let right = b.right.clone();
        let entries = match (&a.entries, &b.entries) {
            (Entries::Holomorphic(x), Entries::Holomorphic(y)) => {
                let mut out = Vec::with_capacity(p * q);
                for i in 0..p {
                    for j in 0..q {
                        let mut acc = TwistedLaurent::zero(a.domain, entry_weight(&left, &right, i, j))?;
                        for l in 0..inner {
                            let term = x[i * inner + l].mul(&y[l * q + j])?;
                            acc = if acc.degree_range().is_none() { term } else { acc.add(&term)? };
                        }
                        out.push(acc);
                    }
                }
                Entries::Holomorphic(out)
            }
            (Entries::Grid(x), Entries::Grid(y)) => {
                let layout = match x.first().or(y.first()) {
                    Some(f) => *f.layout(),
                    None => return Ok(EquivariantMatrix { domain: a.domain, left, right, entries: Entries::Grid(Vec::new()) }),
                };
                let mut out = Vec::with_capacity(p * q);
                for i in 0..p {
                    for j in 0..q {
                        let mut acc = GridFunction::zero(&layout, entry_weight(&left, &right, i, j));
                        for l in 0..inner {
                            let term = x[i * inner + l].mul(&y[l * q + j])?;
                            acc = GridFunction::from_values(
                                &layout,
                                acc.theta(),
                                acc.values().iter().zip(term.values()).map(|(u, v)| u + v).collect(),
                            )?;
                        }
                        out.push(acc);
                    }
                }
                Entries::Grid(out)
            }
            _ => unreachable!("unify returns matching representations"),
        };
        Ok(EquivariantMatrix { domain: a.domain, left, right, entries })
    }

    /// Pointwise conjugate transpose, sampled on `layout` when holomorphic.
    /// Row and column weights swap roles.
    pub fn adjoint_on(&self, layout: &GridLayout) -> Result<Self> {
        let g = self.to_grid(layout)?;
        let Entries::Grid(e) = &g.entries else { unreachable!() };
        let (p, q) = (g.rows(), g.cols());
        let mut out = Vec::with_capacity(p * q);
        for j in 0..q {
            for i in 0..p {
                out.push(e[i * q + j].conj());
            }
        }
        Ok(EquivariantMatrix { domain: g.domain, left: g.right.clone(), right: g.left.clone(), entries: Entries::Grid(out) })
    }

    /// Adjoint on this matrix's own grid, or on the default boundary grid
    /// for holomorphic matrices.
    pub fn adjoint(&self) -> Result<Self> {
        let layout = match self.layout() {
            Some(l) => l,
            None => GridLayout::boundary(self.domain, DEFAULT_SAMPLES)?,
        };
        self.adjoint_on(&layout)
    }

    /// Sup over the domain of the pointwise spectral norm. Holomorphic
    /// matrices are maximized on the boundary with angular refinement; grid
    /// matrices over all stored samples.
    pub fn sup_norm(&self, samples: usize, refine_tol: f64) -> f64 {
        self.sup_norm_with(samples, refine_tol, Exec::default())
    }

    pub fn sup_norm_with(&self, samples: usize, refine_tol: f64, exec: Exec) -> f64 {
        match &self.entries {
            Entries::Holomorphic(e) => {
                if e.iter().all(|f| f.is_zero()) {
                    return 0.0;
                }
                boundary_sup(&self.domain, samples, refine_tol, exec, |w| spectral_norm(&self.eval(w).unwrap()))
            }
            Entries::Grid(_) => match self.layout() {
                None => 0.0,
                Some(l) => exec.max(l.len(), |k| spectral_norm(&self.sample(k).unwrap())),
            },
        }
    }

    /// Deck-equivariance residual. Holomorphic: max over `trials` random cover
    /// points of `||a(w + 2 pi i) - L a(w) R||`. Grid: the largest seam jump
    /// among the entries.
    pub fn check_equivariance(&self, trials: usize) -> f64 {
        self.check_equivariance_seeded(trials, 0x5eed)
    }

    pub fn check_equivariance_seeded(&self, trials: usize, seed: u64) -> f64 {
        match &self.entries {
            Entries::Holomorphic(_) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (p, q) = (self.rows(), self.cols());
                let twist = CMat::from_fn(p, q, |i, j| multiplier(self.right[j] - self.left[i]));
                (0..trials.max(1))
                    .map(|_| {
                        let w = self.domain.random_point(&mut rng);
                        let here = self.eval(w).unwrap();
                        let there = self.eval(deck(w)).unwrap();
                        spectral_norm(&(there - here.component_mul(&twist)))
                    })
                    .fold(0.0, f64::max)
            }
            Entries::Grid(e) => e.iter().map(|g| g.seam_residual()).fold(0.0, f64::max),
        }
    }

    /// Horizontal concatenation; all blocks share row weights.
    pub fn hstack(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::ShapeMismatch("empty hstack".into()))?;
        if blocks.iter().any(|b| b.domain != first.domain) {
            return Err(Error::DomainMismatch("hstack blocks live on different domains".into()));
        }
        let blocks = match blocks.iter().find_map(|b| b.layout()) {
            Some(layout) => blocks.iter().map(|b| b.to_grid(&layout)).collect::<Result<Vec<_>>>()?,
            None => blocks.to_vec(),
        };
        let p = first.rows();
        if blocks.iter().any(|b| !same_weights(&b.left, &first.left)) {
            return Err(Error::WeightMismatch("hstack blocks have different row weights".into()));
        }
        let right: Vec<f64> = blocks.iter().flat_map(|b| b.right.clone()).collect();
        let entries = match blocks[0].repr() {
            Repr::Holomorphic => {
                let mut out = Vec::new();
                for i in 0..p {
                    for b in &blocks {
                        for j in 0..b.cols() {
                            out.push(b.holomorphic_entry(i, j).unwrap().clone());
                        }
                    }
                }
                Entries::Holomorphic(out)
            }
            Repr::Grid => {
                let mut out = Vec::new();
                for i in 0..p {
                    for b in &blocks {
                        for j in 0..b.cols() {
                            out.push(b.grid_entry(i, j).unwrap().clone());
                        }
                    }
                }
                Entries::Grid(out)
            }
        };
        Ok(EquivariantMatrix { domain: first.domain, left: first.left.clone(), right, entries })
    }

    /// Vertical concatenation; all blocks share column weights.
    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let transposed = blocks.iter().map(|b| b.transpose()).collect::<Vec<_>>();
        Ok(Self::hstack(&transposed)?.transpose())
    }

    /// Plain transpose with weights negated, so that the entry-weight law
    /// still holds. Used internally for stacking.
    fn transpose(&self) -> Self {
        let (p, q) = (self.rows(), self.cols());
        let pick = |i: usize, j: usize| j * q + i;
        let entries = match &self.entries {
            Entries::Holomorphic(e) => {
                Entries::Holomorphic((0..q).flat_map(|i| (0..p).map(move |j| pick(i, j))).map(|k| e[k].clone()).collect())
            }
            Entries::Grid(e) => Entries::Grid((0..q).flat_map(|i| (0..p).map(move |j| pick(i, j))).map(|k| e[k].clone()).collect()),
        };
        EquivariantMatrix {
            domain: self.domain,
            left: self.right.iter().map(|&w| frac(-w)).collect(),
            right: self.left.iter().map(|&w| frac(-w)).collect(),
            entries,
        }
    }

    /// The sub-block of the given rows and columns.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Result<Self> {
        if rows.end > self.rows() || cols.end > self.cols() {
            return Err(Error::ShapeMismatch("block out of range".into()));
        }
        let left = self.left[rows.clone()].to_vec();
        let right = self.right[cols.clone()].to_vec();
        let idx: Vec<usize> = rows.flat_map(|i| cols.clone().map(move |j| (i, j))).map(|(i, j)| self.idx(i, j)).collect();
        let entries = match &self.entries {
            Entries::Holomorphic(e) => Entries::Holomorphic(idx.iter().map(|&k| e[k].clone()).collect()),
            Entries::Grid(e) => Entries::Grid(idx.iter().map(|&k| e[k].clone()).collect()),
        };
        Ok(EquivariantMatrix { domain: self.domain, left, right, entries })
    }

    pub fn column(&self, j: usize) -> Result<Self> {
        self.block(0..self.rows(), j..j + 1)
    }

    pub fn row(&self, i: usize) -> Result<Self> {
        self.block(i..i + 1, 0..self.cols())
    }

    /// Zero-padding to a larger matrix with the given extra weights.
    pub fn pad(&self, extra_left: &[f64], extra_right: &[f64]) -> Result<Self> {
        let zero_block = |l: &[f64], r: &[f64]| -> Result<Self> {
            let z = Self::zeros(self.domain, l.to_vec(), r.to_vec())?;
            match self.layout() {
                Some(layout) => z.to_grid(&layout),
                None => Ok(z),
            }
        };
        let mut top = vec![self.clone()];
        if !extra_right.is_empty() {
            top.push(zero_block(&self.left, extra_right)?);
        }
        let top = Self::hstack(&top)?;
        if extra_left.is_empty() {
            return Ok(top);
        }
        let bottom = zero_block(extra_left, &top.right)?;
        Self::vstack(&[top, bottom])
    }
}

pub(crate) fn same_weights(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| weights_match(x, y))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Laurent(TwistedLaurent),
    Grid(GridFunction),
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<Domain>,
    left_weights: Vec<f64>,
    right_weights: Vec<f64>,
    entries: Vec<Vec<EntryRepr>>,
}

impl Serialize for EquivariantMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| match &self.entries {
                        Entries::Holomorphic(e) => EntryRepr::Laurent(e[self.idx(i, j)].clone()),
                        Entries::Grid(e) => EntryRepr::Grid(e[self.idx(i, j)].clone()),
                    })
                    .collect()
            })
            .collect();
        MatrixRepr { domain: Some(self.domain), left_weights: self.left.clone(), right_weights: self.right.clone(), entries: rows }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquivariantMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        let flat: Vec<EntryRepr> = r.entries.into_iter().flatten().collect();
        let domain = match (r.domain, flat.first()) {
            (Some(d), _) => d,
            (None, Some(EntryRepr::Laurent(f))) => f.domain(),
            (None, Some(EntryRepr::Grid(g))) => g.layout().domain(),
            (None, None) => return Err(D::Error::custom("matrix without entries needs a domain")),
        };
        if flat.iter().all(|e| matches!(e, EntryRepr::Laurent(_))) {
            let e = flat.into_iter().map(|e| match e {
                EntryRepr::Laurent(f) => f,
                EntryRepr::Grid(_) => unreachable!(),
            });
            EquivariantMatrix::holomorphic(domain, r.left_weights, r.right_weights, e.collect()).map_err(D::Error::custom)
        } else if flat.iter().all(|e| matches!(e, EntryRepr::Grid(_))) {
            let e: Vec<GridFunction> = flat
                .into_iter()
                .map(|e| match e {
                    EntryRepr::Grid(g) => g,
                    EntryRepr::Laurent(_) => unreachable!(),
                })
                .collect();
            let layout = *e[0].layout();
            EquivariantMatrix::grid(&layout, r.left_weights, r.right_weights, e).map_err(D::Error::custom)
        } else {
            Err(D::Error::custom("mixed holomorphic and grid entries"))
        }
    }
}
