//! The two sides of the q-Brion identity.
//!
//! Lattice-point side: `sum_{u in P} g(u) x^u` with `g(u) = prod_i 1/(q;q)_{s_i(u)}`.
//!
//! Vertex side: `1/(q;q)_inf^(r-n) * sum_p x^p sum_b q^{sum a_i b_i} J_{b,p} / prod_{i in I(p)} (x^{u_i(p)};q)_inf`
//! with
//! `J_{b,p} = prod_{i in I(p)} 1/(x^{u_i(p)} q^-1; q^-1)_{b_i} * prod_{j not in I(p)} 1/(q^-1;q^-1)_{b_j}`.
//!
//! The inner sum runs over the degrees of the torus-fixed points above `p`:
//! integer kernel vectors `b` with `b_j >= 0` off `I(p)`, see
//! [`fixed_point_degrees`]. Entries `b_i < 0` on `I(p)` use
//! `1/(c q^-1; q^-1)_{-m} = (c;q)_m`, so their full `I`-factor is `1/(c q^m; q)_inf`.
//! Restricting to nef degrees `b >= 0` only ([`DegreeRange::Nef`]) gives the
//! right answer when every `I(p)` complement is a product of coordinate
//! hyperplane pairs (segments, projective spaces, their products) but not in
//! general; the hexagon and the `F_1` trapezoid differ from `q^3` on.
//!
//! Identities in `x` are tested by evaluation at random generic rational
//! points, in exact arithmetic.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QBrionError, Result};
use crate::laurent::{monomial_value, LaurentQPoly};
use crate::lattice::{self, DegreeVector, Polytope, VertexData};
use crate::qalg::{self, QPolynomial, TruncatedQSeries};

/// Upper limit on rejected candidates in [`sample_generic_point`].
pub const MAX_RESAMPLES: usize = 10_000;

/// `prod_i 1/(q;q)_{s_i}` modulo `q^(order+1)`.
pub fn g_weight(slacks: &[i64], order: usize) -> Result<TruncatedQSeries> {
    let mut acc = TruncatedQSeries::one(order);
    for &s in slacks {
        if s < 0 {
            return Err(QBrionError::InvalidInput(format!("negative slack {s}")));
        }
        for k in 1..=(s as usize).min(order) {
            acc.div_binomial(&BigRational::one(), k)?;
        }
    }
    Ok(acc)
}

/// One term `g(u) x^u` per lattice point of `P`.
pub fn lhs_series(p: &Polytope, order: usize) -> Result<LaurentQPoly<TruncatedQSeries>> {
    let mut out = LaurentQPoly::zero(p.dim());
    for lp in lattice::lattice_points(p)? {
        out.insert(lp.u, g_weight(&lp.slacks, order)?);
    }
    Ok(out)
}

/// `RS_D = sum_u [|a|; s_1(u), ..., s_r(u)]_q x^u`. Requires `sum_i v_i = 0`.
pub fn rs_polynomial(p: &Polytope) -> Result<LaurentQPoly<QPolynomial>> {
    if !p.is_radially_symmetric() {
        return Err(QBrionError::Precondition(format!(
            "normals sum to {:?}, not zero; slack sums are not constant",
            p.normal_sum()
        )));
    }
    let total = p.offset_sum();
    if total < 0 {
        return Err(QBrionError::Precondition(format!("negative offset sum {total}")));
    }
    let mut out = LaurentQPoly::zero(p.dim());
    for lp in lattice::lattice_points(p)? {
        let parts: Vec<u64> = lp.slacks.iter().map(|&s| s as u64).collect();
        out.insert(lp.u, qalg::q_multinomial(total as u64, &parts)?);
    }
    Ok(out)
}

/// A sampled evaluation point and how many candidates were rejected first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericPoint {
    pub x: Vec<BigRational>,
    pub resamples: usize,
}

fn draw_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            let num = rng.random_range(1..=bound);
            let den = rng.random_range(1..=bound);
            let sign = if rng.random_bool(0.5) { -1 } else { 1 };
            BigRational::new((sign * num).into(), den.into())
        })
        .collect()
}

fn is_generic(x: &[BigRational], vertices: &[VertexData]) -> bool {
    vertices
        .iter()
        .flat_map(|vd| vd.dual_basis.iter())
        .all(|u| !monomial_value(x, u).is_one())
}

fn sample_with(rng: &mut ChaCha8Rng, n: usize, vertices: &[VertexData], bound: i64) -> Result<GenericPoint> {
    if bound < 2 {
        return Err(QBrionError::InvalidInput(format!("sampling bound must be >= 2, got {bound}")));
    }
    for resamples in 0..MAX_RESAMPLES {
        let x = draw_point(rng, n, bound);
        if is_generic(&x, vertices) {
            return Ok(GenericPoint { x, resamples });
        }
    }
    Err(QBrionError::ResampleLimit { attempts: MAX_RESAMPLES })
}

/// A rational point with `x^{u_i(p)} != 1` for every vertex `p` and `i in I(p)`.
/// Coordinates are `±num/den` with `num, den` uniform in `[1, bound]`;
/// deterministic in `seed`.
pub fn sample_generic_point(p: &Polytope, seed: u64, bound: i64) -> Result<GenericPoint> {
    let vertices = lattice::enumerate_vertices(p)?;
    sample_with(&mut ChaCha8Rng::seed_from_u64(seed), p.dim(), &vertices, bound)
}

/// Which degree vectors enter the inner sum of the vertex side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeRange {
    /// Fixed-point degrees of each vertex with valuation at most `bound`.
    FixedPoint { bound: usize },
    /// Nef degrees `b >= 0` with valuation at most `bound`, shared by all vertices.
    Nef { bound: usize },
}

impl DegreeRange {
    pub fn fixed_point(order: usize) -> Self {
        Self::FixedPoint { bound: order }
    }
}

/// The summand `x0^p q^{sum a_i b_i} J_{b,p}(x0) / prod_{i in I(p)} (x0^{u_i(p)};q)_inf`.
///
/// `b` must lie in the kernel and be nonnegative off `I(p)`. The result has
/// valuation at least [`DegreeVector::fixed_point_valuation`].
pub fn vertex_term(
    vd: &VertexData,
    b: &DegreeVector,
    x0: &[BigRational],
    p: &Polytope,
    order: usize,
) -> Result<TruncatedQSeries> {
    if b.b.len() != p.num_facets() || !b.in_kernel(p) {
        return Err(QBrionError::InvalidInput(format!("degree {:?} is not in the kernel", b.b)));
    }
    let slacks = p.slacks(&vd.point);
    let mut scalar = monomial_value(x0, &vd.point);
    let mut shift = 0usize;
    let mut factors: Vec<TruncatedQSeries> = Vec::new();
    for (j, &bj) in b.b.iter().enumerate() {
        if vd.contains_facet(j) {
            continue;
        }
        if bj < 0 {
            return Err(QBrionError::InvalidInput(format!("degree entry b_{j} = {bj} < 0 off the vertex cone")));
        }
        let r = qalg::inverse_reversed_pochhammer(None, bj as usize, order)?;
        scalar *= BigRational::from_integer(r.sign.into());
        shift += r.qshift + (bj * slacks[j]) as usize;
        factors.push(r.series);
    }
    if shift > order {
        return Ok(TruncatedQSeries::zero(order));
    }
    for (k, &i) in vd.facets.iter().enumerate() {
        let c = monomial_value(x0, &vd.dual_basis[k]);
        if c.is_one() {
            return Err(QBrionError::Pole(format!("x^{:?} = 1 at vertex {:?}", vd.dual_basis[k], vd.point)));
        }
        let bi = b.b[i];
        if bi >= 0 {
            let r = qalg::inverse_reversed_pochhammer(Some(&c), bi as usize, order)?;
            scalar *= BigRational::from_integer(r.sign.into()) * c.pow(r.power_of_c as i32);
            shift += r.qshift;
            factors.push(r.series);
            factors.push(qalg::pochhammer_infinite_inverse(&c, order)?);
        } else {
            factors.push(qalg::pochhammer_infinite_inverse_from(&c, bi.unsigned_abs() as usize, order)?);
        }
        if shift > order {
            return Ok(TruncatedQSeries::zero(order));
        }
    }
    let unit = factors.iter().fold(TruncatedQSeries::constant(scalar, order), |acc, f| &acc * f);
    Ok(unit.mul_q_power(shift))
}

fn degree_pairs(p: &Polytope, vertices: &[VertexData], range: DegreeRange) -> Vec<(usize, DegreeVector)> {
    match range {
        DegreeRange::FixedPoint { bound } => vertices
            .iter()
            .enumerate()
            .flat_map(|(k, vd)| lattice::fixed_point_degrees(p, vd, bound).into_iter().map(move |b| (k, b)))
            .collect(),
        DegreeRange::Nef { bound } => {
            let degrees = lattice::enumerate_degrees(p, bound);
            (0..vertices.len()).flat_map(|k| degrees.iter().cloned().map(move |b| (k, b))).collect()
        }
    }
}

fn rhs_with_vertices(
    p: &Polytope,
    vertices: &[VertexData],
    x0: &[BigRational],
    order: usize,
    range: DegreeRange,
) -> Result<(TruncatedQSeries, usize)> {
    let pairs = degree_pairs(p, vertices, range);
    let sum = pairs
        .par_iter()
        .map(|(k, b)| vertex_term(&vertices[*k], b, x0, p, order))
        .try_reduce(|| TruncatedQSeries::zero(order), |a, b| Ok(&a + &b))?;
    let euler = qalg::euler_inverse(order);
    let extra = p.num_facets() - p.dim();
    let total = (0..extra).fold(sum, |acc, _| &acc * &euler);
    Ok((total, pairs.len()))
}

/// The vertex side evaluated at `x0`, modulo `q^(order+1)`.
pub fn rhs_series_at(p: &Polytope, x0: &[BigRational], order: usize) -> Result<TruncatedQSeries> {
    rhs_series_with(p, x0, order, DegreeRange::fixed_point(order))
}

/// As [`rhs_series_at`] with an explicit degree range.
pub fn rhs_series_with(p: &Polytope, x0: &[BigRational], order: usize, range: DegreeRange) -> Result<TruncatedQSeries> {
    let vertices = lattice::enumerate_vertices(p)?;
    Ok(rhs_with_vertices(p, &vertices, x0, order, range)?.0)
}

/// Leading differing coefficient of a failed comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub power: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub polytope_hash: String,
    pub order: usize,
    pub trials: usize,
    /// Evaluation points, coordinates as reduced fractions.
    pub points: Vec<Vec<String>>,
    pub resamples: Vec<usize>,
    pub theorem1_form: bool,
    pub equal: bool,
    pub per_trial: Vec<bool>,
    pub first_mismatch: Option<Mismatch>,
    /// Number of (vertex, degree) pairs summed per point.
    pub degree_vectors_used: usize,
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Default numerator/denominator bound for generic points.
pub const DEFAULT_POINT_BOUND: i64 = 9;

fn first_difference(a: &TruncatedQSeries, b: &TruncatedQSeries) -> Option<usize> {
    (0..=a.order().min(b.order())).find(|&j| a.coeff(j) != b.coeff(j))
}

/// Compare both sides at `trials` generic points drawn from one seeded stream.
///
/// With `theorem1_form`, both sides are multiplied by `(q;q)_{|a|}` and each is
/// compared against `RS_D(x0)`; this needs `sum_i v_i = 0`.
pub fn verify_identity(
    p: &Polytope,
    order: usize,
    trials: usize,
    seed: u64,
    theorem1_form: bool,
) -> Result<VerificationReport> {
    verify_identity_with(p, order, trials, seed, theorem1_form, DegreeRange::fixed_point(order))
}

/// As [`verify_identity`] with an explicit degree range.
pub fn verify_identity_with(
    p: &Polytope,
    order: usize,
    trials: usize,
    seed: u64,
    theorem1_form: bool,
    range: DegreeRange,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let vertices = lattice::enumerate_vertices(p)?;
    let rs = if theorem1_form { Some(rs_polynomial(p)?) } else { None };
    let lhs = lhs_series(p, order)?;
    let factor = rs.as_ref().map(|_| qalg::q_pochhammer(p.offset_sum() as usize, order));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport {
        polytope_hash: p.canonical_hash(),
        order,
        trials,
        points: Vec::new(),
        resamples: Vec::new(),
        theorem1_form,
        equal: true,
        per_trial: Vec::new(),
        first_mismatch: None,
        degree_vectors_used: 0,
        elapsed_ms: None,
    };
    for trial in 0..trials {
        let pt = sample_with(&mut rng, p.dim(), &vertices, DEFAULT_POINT_BOUND)?;
        let mut left = lhs.evaluate(&pt.x, order);
        let (mut right, used) = rhs_with_vertices(p, &vertices, &pt.x, order, range)?;
        report.degree_vectors_used = used;
        let mut ok = true;
        if let (Some(rs), Some(f)) = (&rs, &factor) {
            let target = rs.evaluate(&pt.x, order);
            left = &left * f;
            right = &right * f;
            if let Some(j) = first_difference(&left, &target) {
                ok = false;
                record(&mut report, trial, j, &left, &target);
            }
            if let Some(j) = first_difference(&target, &right) {
                ok = false;
                record(&mut report, trial, j, &target, &right);
            }
        } else if let Some(j) = first_difference(&left, &right) {
            ok = false;
            record(&mut report, trial, j, &left, &right);
        }
        report.equal &= ok;
        report.per_trial.push(ok);
        report.points.push(pt.x.iter().map(ToString::to_string).collect());
        report.resamples.push(pt.resamples);
    }
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

fn record(report: &mut VerificationReport, trial: usize, power: usize, a: &TruncatedQSeries, b: &TruncatedQSeries) {
    if report.first_mismatch.is_none() {
        report.first_mismatch =
            Some(Mismatch { trial, power, lhs: a.coeff(power).to_string(), rhs: b.coeff(power).to_string() });
    }
}

/// `sum_{u in P} x0^u`.
pub fn lattice_point_sum(p: &Polytope, x0: &[BigRational]) -> Result<BigRational> {
    Ok(lattice::lattice_points(p)?.iter().map(|lp| monomial_value(x0, &lp.u)).sum())
}

/// Classical Brion sum `sum_p x0^p / prod_{i in I(p)} (1 - x0^{u_i(p)})`.
pub fn classical_brion_sum(p: &Polytope, x0: &[BigRational]) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for vd in lattice::enumerate_vertices(p)? {
        let mut t = monomial_value(x0, &vd.point);
        for u in &vd.dual_basis {
            let d = BigRational::one() - monomial_value(x0, u);
            if d.is_zero() {
                return Err(QBrionError::Pole(format!("x^{u:?} = 1")));
            }
            t /= d;
        }
        acc += t;
    }
    Ok(acc)
}

/// Whether some vertex cone has a negative entry among its fixed-point degrees
/// of valuation at most `order`, i.e. whether nef degrees alone are too few.
pub fn needs_negative_degrees(p: &Polytope, order: usize) -> Result<bool> {
    Ok(lattice::enumerate_vertices(p)?
        .iter()
        .any(|vd| lattice::fixed_point_degrees(p, vd, order).iter().any(|b| b.b.iter().any(|x| x.is_negative()))))
}
