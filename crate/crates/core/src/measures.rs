//! Discrete measures from lattice-point weights and their Gaussian limits.
//!
//! `mu_D` puts mass proportional to the multinomial `(sum s_i; s_1, ..., s_r)`
//! on the lattice points of the face `F` maximizing `<u, v_Delta>`. Dilates
//! `kD` are Gaussian at scale `sqrt(k)` around `k m_D`, where `m_D` minimizes
//! `sum t_i log t_i` over `P`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QBrionError, Result};
use crate::lattice::{self, LatticeRow, Polytope};
use crate::linalg;

/// Finite probability measure on `Z^n` with exact weights `atom / total`.
///
/// Weights are kept as integers over one common denominator; `total` is always
/// the sum of the atoms, so the weights sum to exactly 1.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: BTreeMap<Vec<i64>, BigUint>,
    total: BigUint,
}

impl PartialEq for DiscreteMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.atoms.len() == other.atoms.len()
            && self.atoms.iter().zip(&other.atoms).all(|((u, a), (w, b))| {
                u == w && a * &other.total == b * &self.total
            })
    }
}

impl DiscreteMeasure {
    /// From unnormalized nonnegative integer masses; zero masses are dropped.
    pub fn from_masses(dim: usize, masses: impl IntoIterator<Item = (Vec<i64>, BigUint)>) -> Result<Self> {
        let mut atoms = BTreeMap::new();
        for (u, m) in masses {
            if u.len() != dim {
                return Err(QBrionError::InvalidInput(format!("atom {u:?} has wrong dimension")));
            }
            if !m.is_zero() {
                *atoms.entry(u).or_insert_with(BigUint::zero) += m;
            }
        }
        let total: BigUint = atoms.values().sum();
        if total.is_zero() {
            return Err(QBrionError::InvalidInput("measure has no mass".into()));
        }
        Ok(Self { dim, atoms, total })
    }

    /// From unnormalized nonnegative rational masses.
    pub fn from_rational_masses(dim: usize, masses: Vec<(Vec<i64>, BigRational)>) -> Result<Self> {
        if masses.iter().any(|(_, m)| m.is_negative()) {
            return Err(QBrionError::InvalidInput("negative mass".into()));
        }
        let lcm = masses
            .iter()
            .fold(BigInt::one(), |acc, (_, m)| num_integer::Integer::lcm(&acc, m.denom()));
        let ints = masses.into_iter().map(|(u, m)| {
            let scaled = (m * BigRational::from_integer(lcm.clone())).to_integer();
            (u, scaled.to_biguint().expect("nonnegative"))
        });
        Self::from_masses(dim, ints)
    }

    pub fn dirac(u: Vec<i64>) -> Self {
        let dim = u.len();
        Self::from_masses(dim, [(u, BigUint::one())]).expect("unit mass")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.atoms.keys()
    }

    /// Exact weight of `u` (zero off the support).
    pub fn weight(&self, u: &[i64]) -> BigRational {
        self.atoms.get(u).map_or_else(BigRational::zero, |m| {
            BigRational::new(BigInt::from(m.clone()), BigInt::from(self.total.clone()))
        })
    }

    /// Atoms with reduced weights, in lexicographic order.
    pub fn weights(&self) -> Vec<(Vec<i64>, BigRational)> {
        self.atoms.keys().map(|u| (u.clone(), self.weight(u))).collect()
    }

    fn weights_f64(&self) -> Vec<(&Vec<i64>, f64)> {
        let t = BigInt::from(self.total.clone());
        self.atoms
            .iter()
            .map(|(u, m)| (u, BigRational::new(BigInt::from(m.clone()), t.clone()).to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Exact total variation distance `1/2 sum |mu(u) - nu(u)|`.
    pub fn total_variation(&self, other: &Self) -> BigRational {
        let mut keys: Vec<&Vec<i64>> = self.atoms.keys().chain(other.atoms.keys()).collect();
        keys.sort();
        keys.dedup();
        let sum: BigRational = keys.iter().map(|u| (self.weight(u) - other.weight(u)).abs()).sum();
        sum / BigRational::from_integer(2.into())
    }

    /// CSV with columns `u_1..u_n, weight_num, weight_den, weight_float`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.dim).map(|i| format!("u_{i}")).collect();
        writeln!(out, "{},weight_num,weight_den,weight_float", header.join(",")).unwrap();
        for (u, w) in self.weights() {
            let coords: Vec<String> = u.iter().map(ToString::to_string).collect();
            writeln!(out, "{},{},{},{:.17e}", coords.join(","), w.numer(), w.denom(), w.to_f64().unwrap_or(f64::NAN))
                .unwrap();
        }
        out
    }
}

/// Lattice points maximizing `<u, v_Delta>` with their slack vectors.
pub fn max_face_points(p: &Polytope) -> Result<Vec<lattice::LatticePoint>> {
    let vd = p.normal_sum();
    let pts = lattice::lattice_points(p)?;
    let value = |u: &[i64]| u.iter().zip(&vd).map(|(a, b)| a * b).sum::<i64>();
    let best = pts.iter().map(|lp| value(&lp.u)).max().expect("nonempty");
    Ok(pts.into_iter().filter(|lp| value(&lp.u) == best).collect())
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::one(); n + 1];
    for i in 1..=n {
        f[i] = &f[i - 1] * BigUint::from(i);
    }
    f
}

/// Multinomial masses along one lattice row restricted to the face `F`,
/// walking from each point to the next by exact small-integer ratios.
fn row_masses(p: &Polytope, row: &LatticeRow, face_value: i64, fact: &[BigUint]) -> Vec<(Vec<i64>, BigUint)> {
    let vd = p.normal_sum();
    let mut out: Vec<(Vec<i64>, BigUint)> = Vec::new();
    let mut prev: Option<(i64, Vec<i64>)> = None;
    for u in row.points() {
        let on_face = u.iter().zip(&vd).map(|(a, b)| a * b).sum::<i64>() == face_value;
        if !on_face {
            prev = None;
            continue;
        }
        let s = p.slacks(&u);
        let t = *u.last().unwrap();
        let mass = match (&prev, out.last()) {
            (Some((pt, ps)), Some((_, pm))) if *pt == t - 1 => {
                // n!/prod s_i! from n!/prod ps_i!
                let mut num = BigUint::one();
                let mut den = BigUint::one();
                for (&a, &b) in ps.iter().zip(&s) {
                    for x in (b + 1)..=a {
                        num *= x as u64;
                    }
                    for x in (a + 1)..=b {
                        den *= x as u64;
                    }
                }
                pm * num / den
            }
            _ => {
                let n: i64 = s.iter().sum();
                s.iter().fold(fact[n as usize].clone(), |acc, &x| acc / &fact[x as usize])
            }
        };
        prev = Some((t, s));
        out.push((u, mass));
    }
    out
}

fn face_value(p: &Polytope) -> Result<i64> {
    let vd = p.normal_sum();
    let verts = lattice::enumerate_vertices(p)?;
    Ok(verts.iter().map(|v| v.point.iter().zip(&vd).map(|(a, b)| a * b).sum::<i64>()).max().expect("vertex"))
}

fn max_slack_sum(p: &Polytope, fv: i64) -> usize {
    (fv + p.offset_sum()).max(0) as usize
}

/// `mu_D`: multinomial masses `(sum s_i; s_1..s_r)` on the lattice points of
/// the face maximizing `<u, v_Delta>`, exactly normalized.
pub fn mu_measure(p: &Polytope) -> Result<DiscreteMeasure> {
    let fv = face_value(p)?;
    let fact = factorials(max_slack_sum(p, fv));
    let rows = lattice::lattice_rows(p)?;
    let masses: Vec<(Vec<i64>, BigUint)> =
        rows.par_iter().flat_map_iter(|row| row_masses(p, row, fv, &fact)).collect();
    DiscreteMeasure::from_masses(p.dim(), masses)
}

/// Exact first and second moments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: Vec<BigRational>,
    pub covariance: Vec<Vec<BigRational>>,
}

impl Moments {
    fn from_sums(s0: &BigInt, s1: &[BigInt], s2: &[Vec<BigInt>]) -> Self {
        let n = s1.len();
        let d = BigRational::from_integer(s0.clone());
        let mean: Vec<BigRational> = s1.iter().map(|x| BigRational::from_integer(x.clone()) / &d).collect();
        let covariance = (0..n)
            .map(|a| (0..n).map(|b| BigRational::from_integer(s2[a][b].clone()) / &d - &mean[a] * &mean[b]).collect())
            .collect();
        Self { mean, covariance }
    }

    pub fn mean_f64(&self) -> Vec<f64> {
        self.mean.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn covariance_f64(&self) -> Vec<Vec<f64>> {
        self.covariance.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
    }
}

#[derive(Clone)]
struct MomentSums {
    s0: BigInt,
    s1: Vec<BigInt>,
    s2: Vec<Vec<BigInt>>,
}

impl MomentSums {
    fn zero(n: usize) -> Self {
        Self { s0: BigInt::zero(), s1: vec![BigInt::zero(); n], s2: vec![vec![BigInt::zero(); n]; n] }
    }

    fn add_atom(&mut self, u: &[i64], m: &BigInt) {
        self.s0 += m;
        for a in 0..u.len() {
            let ma = m * u[a];
            for b in a..u.len() {
                self.s2[a][b] += &ma * u[b];
            }
            self.s1[a] += ma;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.s0 += other.s0;
        for (a, b) in self.s1.iter_mut().zip(other.s1) {
            *a += b;
        }
        for (ra, rb) in self.s2.iter_mut().zip(other.s2) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
        self
    }

    fn finish(mut self) -> Moments {
        let n = self.s1.len();
        for a in 0..n {
            for b in 0..a {
                self.s2[a][b] = self.s2[b][a].clone();
            }
        }
        Moments::from_sums(&self.s0, &self.s1, &self.s2)
    }
}

pub fn measure_moments(mu: &DiscreteMeasure) -> Moments {
    let mut sums = MomentSums::zero(mu.dim);
    for (u, m) in &mu.atoms {
        sums.add_atom(u, &BigInt::from(m.clone()));
    }
    sums.finish()
}

/// Moments of `mu_D` without materializing the measure; suitable for large
/// dilates.
pub fn mu_moments(p: &Polytope) -> Result<Moments> {
    let fv = face_value(p)?;
    let fact = factorials(max_slack_sum(p, fv));
    let n = p.dim();
    let rows = lattice::lattice_rows(p)?;
    let sums = rows
        .par_iter()
        .map(|row| {
            let mut acc = MomentSums::zero(n);
            for (u, m) in row_masses(p, row, fv, &fact) {
                acc.add_atom(&u, &BigInt::from(m));
            }
            acc
        })
        .reduce(|| MomentSums::zero(n), MomentSums::merge);
    Ok(sums.finish())
}

/// Normalized `prod_i 1/(q;q)_{s_i(u)}` over all of `P`, at a rational `q`.
pub fn mu_limit_estimate(p: &Polytope, q: &BigRational) -> Result<DiscreteMeasure> {
    if !q.is_positive() || *q >= BigRational::one() {
        return Err(QBrionError::InvalidInput(format!("q = {q} is not in (0, 1)")));
    }
    let pts = lattice::lattice_points(p)?;
    let max_s = pts.iter().flat_map(|lp| lp.slacks.iter().copied()).max().unwrap_or(0) as usize;
    // qp[j] = (q;q)_j
    let mut qp = vec![BigRational::one(); max_s + 1];
    let mut qj = BigRational::one();
    for j in 1..=max_s {
        qj *= q;
        qp[j] = &qp[j - 1] * (BigRational::one() - &qj);
    }
    let masses = pts
        .into_iter()
        .map(|lp| {
            let den = lp.slacks.iter().fold(BigRational::one(), |acc, &s| acc * &qp[s as usize]);
            (lp.u, den.recip())
        })
        .collect();
    DiscreteMeasure::from_rational_masses(p.dim(), masses)
}

fn entropy_terms(t: &[f64], active: &[usize]) -> f64 {
    active.iter().map(|&i| if t[i] > 0.0 { t[i] * t[i].ln() } else { 0.0 }).sum()
}

/// Facets whose slack is not identically zero on `P`.
pub fn active_facets(p: &Polytope) -> Result<Vec<usize>> {
    let verts = lattice::enumerate_vertices(p)?;
    Ok((0..p.num_facets()).filter(|&i| verts.iter().any(|v| p.slacks(&v.point)[i] != 0)).collect())
}

fn require_radial(p: &Polytope) -> Result<()> {
    if p.is_radially_symmetric() {
        Ok(())
    } else {
        Err(QBrionError::Precondition(format!("normals sum to {:?}, not zero", p.normal_sum())))
    }
}

/// `phi_D(m) = prod_i t_i^{t_i}` with `t_i = <m, v_i> + a_i` and `0^0 = 1`.
pub fn potential(p: &Polytope, m: &[f64]) -> Result<f64> {
    require_radial(p)?;
    if m.len() != p.dim() {
        return Err(QBrionError::InvalidInput("point has wrong dimension".into()));
    }
    let t = p.slacks_f64(m);
    if t.iter().any(|&x| x < -1e-12) {
        return Err(QBrionError::InvalidInput(format!("{m:?} lies outside the polytope")));
    }
    let active = active_facets(p)?;
    let t: Vec<f64> = t.into_iter().map(|x| x.max(0.0)).collect();
    Ok(entropy_terms(&t, &active).exp())
}

/// Default gradient tolerance and iteration cap for [`minimize_potential`].
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_NEWTON_ITERATIONS: usize = 200;

fn require_full_dimensional(p: &Polytope) -> Result<Vec<usize>> {
    let active = active_facets(p)?;
    if active.len() != p.num_facets() {
        return Err(QBrionError::Precondition("polytope is not full-dimensional".into()));
    }
    Ok(active)
}

fn normals_f64(p: &Polytope) -> Vec<DVector<f64>> {
    p.facets().iter().map(|f| DVector::from_iterator(p.dim(), f.normal.iter().map(|&x| x as f64))).collect()
}

fn gradient_and_hessian(p: &Polytope, vs: &[DVector<f64>], m: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = p.dim();
    let t = p.slacks_f64(m.as_slice());
    let mut g = DVector::zeros(n);
    let mut h = DMatrix::zeros(n, n);
    for (v, &ti) in vs.iter().zip(&t) {
        g += v * ti.ln();
        h += v * v.transpose() / ti;
    }
    (g, h)
}

/// Minimizer `m_D` of `sum_i t_i log t_i` over `P` by damped Newton steps from
/// the vertex centroid, keeping all slacks positive.
pub fn minimize_potential(p: &Polytope, tol: f64) -> Result<Vec<f64>> {
    require_radial(p)?;
    let active = require_full_dimensional(p)?;
    let n = p.dim();
    let verts = lattice::enumerate_vertices(p)?;
    let mut points: Vec<&Vec<i64>> = verts.iter().map(|v| &v.point).collect();
    points.dedup();
    let mut m = DVector::from_iterator(
        n,
        (0..n).map(|k| points.iter().map(|u| u[k] as f64).sum::<f64>() / points.len() as f64),
    );
    let vs = normals_f64(p);
    let objective = |m: &DVector<f64>| entropy_terms(&p.slacks_f64(m.as_slice()), &active);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (g, h) = gradient_and_hessian(p, &vs, &m);
        residual = g.norm();
        if residual <= tol {
            return Ok(m.iter().copied().collect());
        }
        let step = h.cholesky().ok_or(QBrionError::NonConvergence { iterations: 0, residual })?.solve(&-&g);
        let f0 = objective(&m);
        let slope = g.dot(&step);
        let mut alpha = 1.0;
        loop {
            let cand = &m + &step * alpha;
            let interior = p.slacks_f64(cand.as_slice()).iter().all(|&t| t > 0.0);
            if interior && objective(&cand) <= f0 + 1e-4 * alpha * slope {
                m = cand;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-16 {
                return Err(QBrionError::NonConvergence { iterations: 0, residual });
            }
        }
    }
    Err(QBrionError::NonConvergence { iterations: MAX_NEWTON_ITERATIONS, residual })
}

/// Gaussian limit of the rescaled measures `mu_{kD}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianModel {
    pub mean: Vec<f64>,
    /// `A = sum_{i in I_D} v_i v_i^T / t_i(m_D)`.
    pub precision: Vec<Vec<f64>>,
    /// Basis of the span of vertex differences, as reduced fractions.
    pub support_basis: Vec<Vec<String>>,
    pub active_set: Vec<usize>,
}

impl GaussianModel {
    /// `A^{-1}`.
    pub fn covariance(&self) -> Vec<Vec<f64>> {
        let n = self.mean.len();
        let a = DMatrix::from_fn(n, n, |i, j| self.precision[i][j]);
        let inv = a.try_inverse().expect("precision is positive definite");
        (0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect()
    }
}

pub fn gaussian_model(p: &Polytope, tol: f64) -> Result<GaussianModel> {
    let mean = minimize_potential(p, tol)?;
    let active = active_facets(p)?;
    let n = p.dim();
    let t = p.slacks_f64(&mean);
    let vs = normals_f64(p);
    let mut a = DMatrix::zeros(n, n);
    for &i in &active {
        a += &vs[i] * vs[i].transpose() / t[i];
    }
    let verts = lattice::enumerate_vertices(p)?;
    let base = &verts[0].point;
    let diffs: Vec<Vec<BigRational>> = verts
        .iter()
        .map(|v| v.point.iter().zip(base).map(|(x, y)| BigRational::from_integer((x - y).into())).collect())
        .collect();
    let support_basis = linalg::row_echelon(&diffs)
        .into_iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    Ok(GaussianModel {
        mean,
        precision: (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect(),
        support_basis,
        active_set: active,
    })
}

/// Exact convolution `mu * nu`.
pub fn convolve(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    if mu.dim != nu.dim {
        return Err(QBrionError::InvalidInput("dimension mismatch".into()));
    }
    let mut atoms: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
    for (u, a) in &mu.atoms {
        for (w, b) in &nu.atoms {
            let s: Vec<i64> = u.iter().zip(w).map(|(x, y)| x + y).collect();
            *atoms.entry(s).or_insert_with(BigUint::zero) += a * b;
        }
    }
    Ok(DiscreteMeasure { dim: mu.dim, atoms, total: &mu.total * &nu.total })
}

/// `sum_u mu(u) exp(i <u, x>)`, summed in atom order.
pub fn characteristic_function(mu: &DiscreteMeasure, x: &[f64]) -> Complex64 {
    characteristic_function_scaled(mu, x, 1.0)
}

/// Characteristic function of the pushforward under `u -> u / scale`.
pub fn characteristic_function_scaled(mu: &DiscreteMeasure, x: &[f64], scale: f64) -> Complex64 {
    mu.weights_f64()
        .into_iter()
        .map(|(u, w)| {
            let phase: f64 = u.iter().zip(x).map(|(&a, b)| a as f64 * b).sum::<f64>() / scale;
            Complex64::from_polar(w, phase)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: i64,
    /// `E/k` as reduced fractions.
    pub mean_over_k: Vec<String>,
    /// `||E/k - m_D||`.
    pub mean_deviation: f64,
    /// `Cov/k` in floating point.
    pub covariance_over_k: Vec<Vec<f64>>,
    /// `||Cov/k - A^{-1}||_F`.
    pub covariance_deviation: f64,
    /// The deviation divided by `||A^{-1}||_F`.
    pub relative_covariance_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub model: GaussianModel,
    pub rows: Vec<ConvergenceRow>,
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Moments of `mu_{kD}` against the Gaussian model of `D`, for each `k`.
pub fn convergence_report(p: &Polytope, k_values: &[i64], tol: f64) -> Result<ConvergenceReport> {
    require_radial(p)?;
    if k_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QBrionError::InvalidInput("k values must be strictly ascending".into()));
    }
    let model = gaussian_model(p, tol)?;
    let limit = model.covariance();
    let limit_norm = frobenius(&limit);
    let mut rows = Vec::new();
    for &k in k_values {
        let mom = mu_moments(&lattice::dilate(p, k)?)?;
        let kr = BigRational::from_integer(k.into());
        let mean_over_k: Vec<BigRational> = mom.mean.iter().map(|x| x / &kr).collect();
        let mean_deviation = mean_over_k
            .iter()
            .zip(&model.mean)
            .map(|(a, b)| (a.to_f64().unwrap_or(f64::NAN) - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let cov: Vec<Vec<f64>> =
            mom.covariance.iter().map(|r| r.iter().map(|x| (x / &kr).to_f64().unwrap_or(f64::NAN)).collect()).collect();
        let diff: Vec<Vec<f64>> =
            cov.iter().zip(&limit).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        let covariance_deviation = frobenius(&diff);
        rows.push(ConvergenceRow {
            k,
            mean_over_k: mean_over_k.iter().map(ToString::to_string).collect(),
            mean_deviation,
            covariance_over_k: cov,
            covariance_deviation,
            relative_covariance_deviation: covariance_deviation / limit_norm,
        });
    }
    Ok(ConvergenceReport { model, rows })
}

impl ConvergenceReport {
    /// Model summary lines followed by one row per `k`, tab separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(",");
        writeln!(out, "# mean\t{}", fmt(&self.model.mean)).unwrap();
        for (i, row) in self.model.covariance().iter().enumerate() {
            writeln!(out, "# covariance_row_{}\t{}", i + 1, fmt(row)).unwrap();
        }
        writeln!(out, "k\tmean_over_k\tmean_deviation\tcovariance_over_k\tcovariance_deviation\trelative_covariance_deviation")
            .unwrap();
        for r in &self.rows {
            let cov: Vec<String> = r.covariance_over_k.iter().map(|row| fmt(row)).collect();
            writeln!(
                out,
                "{}\t{}\t{:.6e}\t{}\t{:.6e}\t{:.6e}",
                r.k,
                r.mean_over_k.join(","),
                r.mean_deviation,
                cov.join(";"),
                r.covariance_deviation,
                r.relative_covariance_deviation
            )
            .unwrap();
        }
        out
    }
}

/// Normalized `[|a|; s(u)]_q` at a numeric `q in (0, 1)`, in log space.
///
/// The common factor `(q;q)_{|a|}` cancels in the normalization, so each point
/// gets `-sum_i log (q;q)_{s_i}`. The per-point terms are summed in sorted
/// slack order, so points with equal slack multisets get bit-identical weights.
pub fn heatmap_weights(p: &Polytope, q: f64) -> Result<Vec<(Vec<i64>, f64)>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(QBrionError::InvalidInput(format!("q = {q} is not in (0, 1)")));
    }
    let pts = lattice::lattice_points(p)?;
    let max_s = pts.iter().flat_map(|lp| lp.slacks.iter().copied()).max().unwrap_or(0) as usize;
    let mut log_qp = vec![0.0f64; max_s + 1];
    for j in 1..=max_s {
        log_qp[j] = log_qp[j - 1] + (-q.powi(j as i32)).ln_1p();
    }
    let logs: Vec<f64> = pts
        .iter()
        .map(|lp| {
            let mut s = lp.slacks.clone();
            s.sort_unstable();
            -s.iter().map(|&x| log_qp[x as usize]).sum::<f64>()
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(pts.into_iter().zip(raw).map(|(lp, w)| (lp.u, w / total)).collect())
}

pub fn heatmap_tsv(weights: &[(Vec<i64>, f64)]) -> String {
    let mut out = String::new();
    let n = weights.first().map_or(0, |(u, _)| u.len());
    let header: Vec<String> = (1..=n).map(|i| format!("u_{i}")).collect();
    writeln!(out, "{}\tweight", header.join("\t")).unwrap();
    for (u, w) in weights {
        let coords: Vec<String> = u.iter().map(ToString::to_string).collect();
        writeln!(out, "{}\t{:.17e}", coords.join("\t"), w).unwrap();
    }
    out
}
