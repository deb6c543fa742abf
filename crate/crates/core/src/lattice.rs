//! Lattice polytopes in H-representation `P = { u : <u, v_i> >= -a_i }`.
//!
//! Vertices are found by solving every `n`-subset of facet equations exactly.
//! Each vertex carries the facet index set `I(p)` of a cone of the normal fan and
//! the dual basis `u_i(p)` of `{v_i : i in I(p)}`. For a nef but not ample
//! offset vector (several fan cones collapsing onto one point) one
//! [`VertexData`] is emitted per fan cone; this is supported in dimension at
//! most 2, where the cones at a point are the angularly adjacent normal pairs.

use std::collections::BTreeMap;
use std::path::Path;

use itertools::Itertools;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{QBrionError, Result};
use crate::linalg::{self, Matrix};

/// One half-space `<u, normal> >= -offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    facets: Vec<Facet>,
}

/// A polytope given by primitive inward facet normals and integer offsets.
///
/// The facet order is significant: it fixes the oriented hyperplane arrangement
/// and the coordinates of slack and degree vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct Polytope {
    dim: usize,
    facets: Vec<Facet>,
}

impl TryFrom<RawPolytope> for Polytope {
    type Error = QBrionError;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        Polytope::new(raw.dim, raw.facets)
    }
}

impl Polytope {
    /// Checks that every normal is nonzero, primitive, of length `dim`, and
    /// that no normal repeats.
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if dim == 0 {
            return Err(QBrionError::InvalidInput("dimension must be positive".into()));
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(QBrionError::InvalidInput(format!(
                    "facet {i}: normal has length {}, expected {dim}",
                    f.normal.len()
                )));
            }
            let g = f.normal.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g == 0 {
                return Err(QBrionError::InvalidInput(format!("facet {i}: zero normal")));
            }
            if g != 1 {
                return Err(QBrionError::InvalidInput(format!(
                    "facet {i}: normal {:?} is not primitive",
                    f.normal
                )));
            }
        }
        if let Some((i, j)) = (0..facets.len())
            .tuple_combinations()
            .find(|&(i, j)| facets[i].normal == facets[j].normal)
        {
            return Err(QBrionError::InvalidInput(format!("facets {i} and {j} share a normal")));
        }
        Ok(Self { dim, facets })
    }

    /// Convenience constructor from parallel normal/offset lists.
    pub fn from_normals(normals: &[&[i64]], offsets: &[i64]) -> Result<Self> {
        if normals.len() != offsets.len() || normals.is_empty() {
            return Err(QBrionError::InvalidInput("normals and offsets must be nonempty and equal length".into()));
        }
        let dim = normals[0].len();
        let facets = normals
            .iter()
            .zip(offsets)
            .map(|(n, &a)| Facet { normal: n.to_vec(), offset: a })
            .collect();
        Self::new(dim, facets)
    }

    /// The segment `[0, m]`, facets `x >= 0` and `-x >= -m`.
    pub fn segment(m: i64) -> Self {
        Self::from_normals(&[&[1], &[-1]], &[0, m]).expect("valid segment")
    }

    /// The dilated standard simplex of `P^n`: normals `e_1..e_n, -(e_1+...+e_n)`
    /// with offsets `(0, ..., 0, k)`.
    pub fn projective_simplex(n: usize, k: i64) -> Self {
        let mut facets: Vec<Facet> = (0..n)
            .map(|i| Facet { normal: (0..n).map(|j| i64::from(i == j)).collect(), offset: 0 })
            .collect();
        facets.push(Facet { normal: vec![-1; n], offset: k });
        Self::new(n, facets).expect("valid simplex")
    }

    /// The box `[0, m_1] x ... x [0, m_n]` with normals ordered
    /// `e_1..e_n, -e_1..-e_n`.
    pub fn product_of_segments(lengths: &[i64]) -> Self {
        let n = lengths.len();
        let unit = |i: usize, s: i64| (0..n).map(|j| if i == j { s } else { 0 }).collect::<Vec<_>>();
        let mut facets: Vec<Facet> = (0..n).map(|i| Facet { normal: unit(i, 1), offset: 0 }).collect();
        facets.extend((0..n).map(|i| Facet { normal: unit(i, -1), offset: lengths[i] }));
        Self::new(n, facets).expect("valid box")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope serializes")
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn canonical_hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn normal(&self, i: usize) -> &[i64] {
        &self.facets[i].normal
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.facets.iter().map(|f| f.offset).collect()
    }

    /// `|a| = a_1 + ... + a_r`.
    pub fn offset_sum(&self) -> i64 {
        self.facets.iter().map(|f| f.offset).sum()
    }

    /// `v_Delta = v_1 + ... + v_r`.
    pub fn normal_sum(&self) -> Vec<i64> {
        (0..self.dim).map(|k| self.facets.iter().map(|f| f.normal[k]).sum()).collect()
    }

    pub fn is_radially_symmetric(&self) -> bool {
        self.normal_sum().iter().all(|&x| x == 0)
    }

    /// Same normals, new offsets.
    pub fn with_offsets(&self, offsets: &[i64]) -> Result<Self> {
        if offsets.len() != self.facets.len() {
            return Err(QBrionError::InvalidInput("offset count does not match facet count".into()));
        }
        let facets = self
            .facets
            .iter()
            .zip(offsets)
            .map(|(f, &a)| Facet { normal: f.normal.clone(), offset: a })
            .collect();
        Ok(Self { dim: self.dim, facets })
    }

    /// Slack vector `<u, v_i> + a_i`.
    pub fn slacks(&self, u: &[i64]) -> Vec<i64> {
        self.facets
            .iter()
            .map(|f| f.normal.iter().zip(u).map(|(v, x)| v * x).sum::<i64>() + f.offset)
            .collect()
    }

    pub fn slacks_f64(&self, m: &[f64]) -> Vec<f64> {
        self.facets
            .iter()
            .map(|f| f.normal.iter().zip(m).map(|(&v, x)| v as f64 * x).sum::<f64>() + f.offset as f64)
            .collect()
    }

    fn slacks_rational(&self, u: &[BigRational]) -> Vec<BigRational> {
        self.facets
            .iter()
            .map(|f| {
                f.normal.iter().zip(u).map(|(&v, x)| x * BigRational::from_integer(v.into())).sum::<BigRational>()
                    + BigRational::from_integer(f.offset.into())
            })
            .collect()
    }

    fn normal_matrix(&self, subset: &[usize]) -> Matrix {
        let rows: Vec<&[i64]> = subset.iter().map(|&i| self.normal(i)).collect();
        linalg::to_rational(&rows)
    }

    /// Every point that is the unique solution of some `n` facet equations and
    /// satisfies all inequalities, with its set of tight facets.
    fn geometric_vertices(&self) -> Vec<GeometricVertex> {
        let mut found: BTreeMap<Vec<BigRational>, Vec<usize>> = BTreeMap::new();
        for subset in (0..self.num_facets()).combinations(self.dim) {
            let m = self.normal_matrix(&subset);
            let Some((_, inv)) = linalg::inverse(&m) else { continue };
            let rhs: Vec<BigRational> =
                subset.iter().map(|&i| BigRational::from_integer((-self.facets[i].offset).into())).collect();
            let p = linalg::mat_vec(&inv, &rhs);
            if found.contains_key(&p) {
                continue;
            }
            let slacks = self.slacks_rational(&p);
            if slacks.iter().any(Signed::is_negative) {
                continue;
            }
            let tight = slacks.iter().positions(Zero::is_zero).collect();
            found.insert(p, tight);
        }
        found.into_iter().map(|(point, tight)| GeometricVertex { point, tight }).collect()
    }

    /// True when no point satisfies all inequalities. Assumes `P` is bounded.
    pub fn is_empty(&self) -> bool {
        self.geometric_vertices().is_empty()
    }

    /// `Err` if `P` is empty or unbounded.
    fn check_bounded_nonempty(&self) -> Result<Vec<GeometricVertex>> {
        let n = self.dim;
        let all: Vec<usize> = (0..self.num_facets()).collect();
        if linalg::rank(&self.normal_matrix(&all)) < n {
            return Err(QBrionError::Precondition("unbounded polytope: normals do not span".into()));
        }
        // The recession cone {w : <w, v_i> >= 0} is pointed; it is nonzero iff it
        // has an extreme ray cut out by n - 1 independent tight constraints.
        for subset in all.iter().copied().combinations(n - 1) {
            let rows = self.normal_matrix(&subset);
            let Some(w) = linalg::orthogonal_complement_line(&rows, n) else { continue };
            for sign in [1i64, -1] {
                let s = BigRational::from_integer(sign.into());
                let ok = self.facets.iter().all(|f| {
                    let dot: BigRational =
                        f.normal.iter().zip(&w).map(|(&v, x)| x * BigRational::from_integer(v.into())).sum();
                    !(dot * &s).is_negative()
                });
                if ok {
                    return Err(QBrionError::Precondition("unbounded polytope".into()));
                }
            }
        }
        let vertices = self.geometric_vertices();
        if vertices.is_empty() {
            return Err(QBrionError::Precondition("empty polytope".into()));
        }
        Ok(vertices)
    }
}

struct GeometricVertex {
    point: Vec<BigRational>,
    tight: Vec<usize>,
}

/// A vertex `p` together with one cone `I(p)` of the normal fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexData {
    pub point: Vec<i64>,
    /// Sorted facet indices `I(p)`, of size `n`.
    pub facets: Vec<usize>,
    /// `dual_basis[k]` is `u_{facets[k]}(p)`: `<u_i(p), v_j> = delta_ij` on `I(p)`.
    pub dual_basis: Vec<Vec<i64>>,
}

impl VertexData {
    pub fn dual(&self, facet: usize) -> Option<&[i64]> {
        self.facets.iter().position(|&i| i == facet).map(|k| self.dual_basis[k].as_slice())
    }

    pub fn contains_facet(&self, facet: usize) -> bool {
        self.facets.binary_search(&facet).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub smooth: bool,
    pub radially_symmetric: bool,
    pub all_facets_touch: bool,
    pub full_dimensional: bool,
    /// Every vertex is a lattice point.
    pub lattice: bool,
}

/// Geometric checks on a polytope. Errors only for empty or unbounded input.
pub fn validate(p: &Polytope) -> Result<ValidationReport> {
    let vertices = p.check_bounded_nonempty()?;
    let all_facets_touch = (0..p.num_facets()).all(|i| vertices.iter().any(|v| v.tight.contains(&i)));
    let full_dimensional = (0..p.num_facets()).all(|i| vertices.iter().any(|v| !v.tight.contains(&i)));
    let lattice = vertices.iter().all(|v| v.point.iter().all(BigRational::is_integer));
    let smooth = lattice && fan_cones(p, &vertices).is_ok();
    Ok(ValidationReport {
        smooth,
        radially_symmetric: p.is_radially_symmetric(),
        all_facets_touch,
        full_dimensional,
        lattice,
    })
}

/// Vertices with their fan cones and dual bases, sorted by point then facets.
///
/// Errors: non-integral vertex (not a lattice polytope); a vertex cone whose
/// normals are not a lattice basis (not smooth).
pub fn enumerate_vertices(p: &Polytope) -> Result<Vec<VertexData>> {
    let vertices = p.check_bounded_nonempty()?;
    if let Some(v) = vertices.iter().find(|v| !v.point.iter().all(BigRational::is_integer)) {
        return Err(QBrionError::Precondition(format!(
            "not a lattice polytope: vertex {}",
            v.point.iter().map(ToString::to_string).join(",")
        )));
    }
    fan_cones(p, &vertices)
}

fn fan_cones(p: &Polytope, vertices: &[GeometricVertex]) -> Result<Vec<VertexData>> {
    let n = p.dim();
    let mut out = Vec::new();
    for v in vertices {
        if v.tight.len() > n && n > 2 {
            return Err(QBrionError::Precondition(format!(
                "vertex lies on {} > {n} facets; degenerate vertices are only supported in dimension <= 2",
                v.tight.len()
            )));
        }
        let point: Vec<i64> = v.point.iter().map(|x| x.to_integer().to_i64().expect("small coordinate")).collect();
        let mut cones = 0;
        for subset in v.tight.iter().copied().combinations(n) {
            let m = p.normal_matrix(&subset);
            let Some((det, inv)) = linalg::inverse(&m) else { continue };
            // columns of inv are the dual basis vectors
            let dual: Vec<Vec<BigRational>> = (0..n).map(|k| (0..n).map(|row| inv[row][k].clone()).collect()).collect();
            let other_in_cone = v.tight.iter().filter(|j| !subset.contains(j)).any(|&j| {
                dual.iter().all(|u| {
                    let c: BigRational =
                        u.iter().zip(p.normal(j)).map(|(x, &y)| x * BigRational::from_integer(y.into())).sum();
                    !c.is_negative()
                })
            });
            if other_in_cone {
                continue;
            }
            if !(det.abs()).is_one() {
                return Err(QBrionError::Precondition(format!(
                    "not smooth: facets {subset:?} at vertex {point:?} have determinant {det}"
                )));
            }
            let dual_basis = dual
                .iter()
                .map(|u| u.iter().map(|x| x.to_integer().to_i64().expect("unimodular")).collect())
                .collect();
            out.push(VertexData { point: point.clone(), facets: subset, dual_basis });
            cones += 1;
        }
        if cones == 0 {
            return Err(QBrionError::Precondition(format!("no simplicial fan cone at vertex {point:?}")));
        }
    }
    out.sort_by(|a, b| (&a.point, &a.facets).cmp(&(&b.point, &b.facets)));
    Ok(out)
}

/// A lattice point of `P` with its slack vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePoint {
    pub u: Vec<i64>,
    pub slacks: Vec<i64>,
}

/// All of `P ∩ Z^n` by scanning the integer bounding box of the vertices, in
/// lexicographic order of `u`.
pub fn lattice_points(p: &Polytope) -> Result<Vec<LatticePoint>> {
    let vertices = p.check_bounded_nonempty()?;
    let n = p.dim();
    let lo: Vec<i64> = (0..n)
        .map(|k| vertices.iter().map(|v| v.point[k].ceil().to_integer()).min().unwrap().to_i64().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|k| vertices.iter().map(|v| v.point[k].floor().to_integer()).max().unwrap().to_i64().unwrap())
        .collect();
    let mut out = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(out);
    }
    let mut u = lo.clone();
    loop {
        let slacks = p.slacks(&u);
        if slacks.iter().all(|&s| s >= 0) {
            out.push(LatticePoint { u: u.clone(), slacks });
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if u[k] < hi[k] {
                u[k] += 1;
                break;
            }
            u[k] = lo[k];
        }
    }
}

/// The lattice points of `P` with a fixed prefix `u_1..u_{n-1}`: the last
/// coordinate runs over `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRow {
    pub prefix: Vec<i64>,
    pub lo: i64,
    pub hi: i64,
}

impl LatticeRow {
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (self.lo..=self.hi).map(|t| {
            let mut u = self.prefix.clone();
            u.push(t);
            u
        })
    }
}

/// `P ∩ Z^n` as nonempty rows along the last axis, in lexicographic order.
/// Cheaper than [`lattice_points`] for large dilates.
pub fn lattice_rows(p: &Polytope) -> Result<Vec<LatticeRow>> {
    let vertices = p.check_bounded_nonempty()?;
    let n = p.dim();
    let lo: Vec<i64> = (0..n - 1)
        .map(|k| vertices.iter().map(|v| v.point[k].ceil().to_integer()).min().unwrap().to_i64().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n - 1)
        .map(|k| vertices.iter().map(|v| v.point[k].floor().to_integer()).max().unwrap().to_i64().unwrap())
        .collect();
    let mut rows = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(rows);
    }
    let mut prefix = lo.clone();
    loop {
        // v_last * t >= -a - <prefix, v'>
        let mut t_lo = i64::MIN;
        let mut t_hi = i64::MAX;
        for f in p.facets() {
            let rest: i64 = -f.offset - f.normal[..n - 1].iter().zip(&prefix).map(|(v, x)| v * x).sum::<i64>();
            let c = f.normal[n - 1];
            match c.signum() {
                1 => t_lo = t_lo.max(Integer::div_ceil(&rest, &c)),
                -1 => t_hi = t_hi.min(Integer::div_floor(&-rest, &-c)),
                _ => {
                    if rest > 0 {
                        t_lo = i64::MAX;
                    }
                }
            }
        }
        if t_lo <= t_hi {
            rows.push(LatticeRow { prefix: prefix.clone(), lo: t_lo, hi: t_hi });
        }
        let mut k = n - 1;
        loop {
            if k == 0 {
                return Ok(rows);
            }
            k -= 1;
            if prefix[k] < hi[k] {
                prefix[k] += 1;
                break;
            }
            prefix[k] = lo[k];
        }
    }
}

/// A degree `b in Z^r` with `sum_i b_i v_i = 0`.
///
/// Degrees of the nef cone have all `b_i >= 0`. Fixed-point degrees attached to
/// a vertex cone `I(p)` only require `b_j >= 0` for `j` outside `I(p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DegreeVector {
    pub b: Vec<i64>,
}

impl DegreeVector {
    pub fn zero(r: usize) -> Self {
        Self { b: vec![0; r] }
    }

    pub fn in_kernel(&self, p: &Polytope) -> bool {
        (0..p.dim()).all(|k| self.b.iter().zip(p.facets()).map(|(b, f)| b * f.normal[k]).sum::<i64>() == 0)
    }

    /// `f(b) = sum_i [ b_i (b_i + 1)/2 + a_i b_i ]`, the q-valuation of the
    /// vertex terms of a nef-cone degree.
    pub fn nef_valuation(&self, p: &Polytope) -> i64 {
        self.b.iter().zip(p.facets()).map(|(&b, f)| triangular(b) + f.offset * b).sum()
    }

    /// q-valuation of the vertex term at `(vertex, b)`:
    /// `sum_{j not in I} [b_j s_j(p) + b_j(b_j+1)/2] + sum_{i in I, b_i > 0} b_i(b_i+1)/2`,
    /// where `s_j(p)` is the slack of the vertex at facet `j`.
    pub fn fixed_point_valuation(&self, p: &Polytope, vertex: &VertexData) -> i64 {
        let slacks = p.slacks(&vertex.point);
        self.b
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if vertex.contains_facet(i) {
                    if b > 0 { triangular(b) } else { 0 }
                } else {
                    b * slacks[i] + triangular(b)
                }
            })
            .sum()
    }
}

fn triangular(b: i64) -> i64 {
    b * (b + 1) / 2
}

/// All `b >= 0` in the kernel with `f(b) <= order`, by depth-first search with
/// per-coordinate pruning `g_i(b_i) <= order - sum_{j != i} min_t g_j(t)` where
/// `g_i(t) = t(t+1)/2 + a_i t`. Sorted; always contains `b = 0`.
pub fn enumerate_degrees(p: &Polytope, order: usize) -> Vec<DegreeVector> {
    let r = p.num_facets();
    let offsets = p.offsets();
    let g = |i: usize, t: i64| triangular(t) + offsets[i] * t;
    let mins: Vec<i64> = (0..r)
        .map(|i| {
            let mut t = 0;
            while g(i, t + 1) < g(i, t) {
                t += 1;
            }
            g(i, t)
        })
        .collect();
    // suffix[i] = sum_{j >= i} mins[j]
    let mut suffix = vec![0; r + 1];
    for i in (0..r).rev() {
        suffix[i] = suffix[i + 1] + mins[i];
    }
    let mut out = Vec::new();
    let mut b = vec![0i64; r];
    fn dfs(
        i: usize,
        partial: i64,
        b: &mut Vec<i64>,
        order: i64,
        suffix: &[i64],
        g: &dyn Fn(usize, i64) -> i64,
        p: &Polytope,
        out: &mut Vec<DegreeVector>,
    ) {
        if i == b.len() {
            let d = DegreeVector { b: b.clone() };
            if d.in_kernel(p) {
                out.push(d);
            }
            return;
        }
        let budget = order - partial - suffix[i + 1];
        let mut t = 0;
        loop {
            let v = g(i, t);
            if v <= budget {
                b[i] = t;
                dfs(i + 1, partial + v, b, order, suffix, g, p, out);
            } else if g(i, t + 1) > v {
                break;
            }
            t += 1;
        }
        b[i] = 0;
    }
    dfs(0, 0, &mut b, order as i64, &suffix, &g, p, &mut out);
    out.sort();
    out
}

/// Degrees indexing the torus-fixed points over the vertex cone `I(p)`: all
/// kernel vectors with `b_j >= 0` off `I(p)` (the entries on `I(p)` are then
/// determined, and may be negative) whose fixed-point valuation is at most
/// `order`. Sorted; contains `b = 0`.
pub fn fixed_point_degrees(p: &Polytope, vertex: &VertexData, order: usize) -> Vec<DegreeVector> {
    let r = p.num_facets();
    let n = p.dim();
    let slacks = p.slacks(&vertex.point);
    let free: Vec<usize> = (0..r).filter(|&j| !vertex.contains_facet(j)).collect();
    let cost = |j: usize, t: i64| t * slacks[j] + triangular(t);
    let order = order as i64;
    let mut out = Vec::new();
    let mut b = vec![0i64; r];
    fn dfs(
        k: usize,
        partial: i64,
        free: &[usize],
        b: &mut Vec<i64>,
        cost: &dyn Fn(usize, i64) -> i64,
        finish: &mut dyn FnMut(&[i64], i64),
        order: i64,
    ) {
        if k == free.len() {
            finish(b, partial);
            return;
        }
        let j = free[k];
        let mut t = 0;
        while partial + cost(j, t) <= order {
            b[j] = t;
            dfs(k + 1, partial + cost(j, t), free, b, cost, finish, order);
            t += 1;
        }
        b[j] = 0;
    }
    let mut finish = |b: &[i64], partial: i64| {
        let w: Vec<i64> = (0..n).map(|k| free.iter().map(|&j| b[j] * p.normal(j)[k]).sum()).collect();
        let mut full = b.to_vec();
        let mut val = partial;
        for (idx, &i) in vertex.facets.iter().enumerate() {
            let bi = -vertex.dual_basis[idx].iter().zip(&w).map(|(u, x)| u * x).sum::<i64>();
            full[i] = bi;
            if bi > 0 {
                val += triangular(bi);
            }
        }
        if val <= order {
            out.push(DegreeVector { b: full });
        }
    };
    dfs(0, 0, &free, &mut b, &cost, &mut finish, order);
    out.sort();
    out
}

/// `kP`: same normals, offsets multiplied by `k >= 1`.
pub fn dilate(p: &Polytope, k: i64) -> Result<Polytope> {
    if k < 1 {
        return Err(QBrionError::InvalidInput(format!("dilation factor must be >= 1, got {k}")));
    }
    p.with_offsets(&p.offsets().iter().map(|a| a * k).collect::<Vec<_>>())
}
