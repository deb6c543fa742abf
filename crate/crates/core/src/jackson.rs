//! q-shifts and Jackson derivatives on polynomials with q-polynomial
//! coefficients, and the recursions they satisfy on Rogers-Szegő polynomials.
//!
//! Axes are 0-based throughout this module.

use serde::Serialize;

use crate::brion::rs_polynomial;
use crate::error::{QBrionError, Result};
use crate::laurent::LaurentQPoly;
use crate::lattice::{self, Polytope};
use crate::qalg::{self, QPolynomial};

pub type QPoly = LaurentQPoly<QPolynomial>;

/// A polytope whose first `n` facets are `x_i >= 0`, i.e. normals `e_1..e_n`
/// with zero offsets, so that it lies in the first orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrthantDivisor {
    polytope: Polytope,
}

impl FirstOrthantDivisor {
    pub fn new(polytope: Polytope) -> Result<Self> {
        let n = polytope.dim();
        if polytope.num_facets() < n {
            return Err(QBrionError::Precondition("fewer facets than dimensions".into()));
        }
        for i in 0..n {
            let f = &polytope.facets()[i];
            let unit = (0..n).all(|k| f.normal[k] == i64::from(k == i));
            if !unit || f.offset != 0 {
                return Err(QBrionError::Precondition(format!(
                    "facet {i} must be x_{} >= 0 with offset 0 for a first-orthant divisor",
                    i + 1
                )));
            }
        }
        Ok(Self { polytope })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }
}

fn check_axis(f: &QPoly, i: usize) -> Result<()> {
    if i >= f.dim() {
        return Err(QBrionError::InvalidInput(format!("axis {i} out of range for dimension {}", f.dim())));
    }
    if let Some(u) = f.support().find(|u| u[i] < 0) {
        return Err(QBrionError::InvalidInput(format!("negative exponent {u:?} along axis {i}")));
    }
    Ok(())
}

/// `T_{i,q}`: `x_i -> q x_i`, so `c(q) x^u -> c(q) q^{u_i} x^u`.
pub fn q_shift(f: &QPoly, i: usize) -> Result<QPoly> {
    check_axis(f, i)?;
    let mut out = QPoly::zero(f.dim());
    for (u, c) in f.iter() {
        out.insert(u.clone(), c.shift(u[i] as usize));
    }
    Ok(out)
}

/// `(f - T_{i,q} f) / ((1 - q) x_i)`, termwise `c(q) [u_i]_q x^{u - e_i}`.
pub fn jackson_derivative(f: &QPoly, i: usize) -> Result<QPoly> {
    check_axis(f, i)?;
    let mut out = QPoly::zero(f.dim());
    for (u, c) in f.iter() {
        if u[i] == 0 {
            continue;
        }
        let mut w = u.clone();
        w[i] -= 1;
        out.insert(w, c * &qalg::q_integer(u[i])?);
    }
    Ok(out)
}

/// `[b]_q` for `b >= 0`, with `[0]_q = 0`.
fn q_integer_or_zero(b: i64) -> Result<QPolynomial> {
    if b == 0 { Ok(QPolynomial::zero()) } else { qalg::q_integer(b) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivedDivisor {
    Nonempty(FirstOrthantDivisor),
    /// The derived polytope has no points; the derivative must vanish.
    Empty,
}

/// Offsets `a_j + <e_i, v_j>` for `j > n`: the polytope `P_i` obtained by
/// intersecting `P` with `x_i >= 1` and translating by `-e_i`.
pub fn derived_divisor(d: &FirstOrthantDivisor, i: usize) -> Result<DerivedDivisor> {
    let n = d.dim();
    if i >= n {
        return Err(QBrionError::InvalidInput(format!("axis {i} out of range for dimension {n}")));
    }
    let p = d.polytope();
    let offsets: Vec<i64> = p
        .facets()
        .iter()
        .enumerate()
        .map(|(j, f)| if j < n { 0 } else { f.offset + f.normal[i] })
        .collect();
    let derived = p.with_offsets(&offsets)?;
    if derived.is_empty() {
        return Ok(DerivedDivisor::Empty);
    }
    Ok(DerivedDivisor::Nonempty(FirstOrthantDivisor::new(derived)?))
}

/// Both sides of `(d/dx_i)_q RS_D = [|a|]_q RS_{D_i}`.
pub fn derivative_recursion_sides(d: &FirstOrthantDivisor, i: usize) -> Result<(QPoly, QPoly)> {
    let p = d.polytope();
    let lhs = jackson_derivative(&rs_polynomial(p)?, i)?;
    let rhs = match derived_divisor(d, i)? {
        DerivedDivisor::Empty => QPoly::zero(p.dim()),
        DerivedDivisor::Nonempty(di) => rs_polynomial(di.polytope())?.scale(&q_integer_or_zero(p.offset_sum())?),
    };
    Ok((lhs, rhs))
}

pub fn verify_derivative_recursion(d: &FirstOrthantDivisor, i: usize) -> Result<bool> {
    let (lhs, rhs) = derivative_recursion_sides(d, i)?;
    Ok(lhs == rhs)
}

/// Variable set of the elementary symmetric polynomials in the raising operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `e_l(1, x_1, ..., x_n)`.
    VarsWithOne,
    /// `e_l(x_1, ..., x_n)`.
    VarsWithoutOne,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::VarsWithOne, Convention::VarsWithoutOne];
}

/// `e_l` of the chosen variable set as a polynomial in `x_1..x_n`.
pub fn elementary_symmetric(l: usize, n: usize, convention: Convention) -> QPoly {
    let mut out = QPoly::zero(n);
    let (with_one, m) = match convention {
        Convention::VarsWithOne => (true, n + 1),
        Convention::VarsWithoutOne => (false, n),
    };
    if l > m {
        return out;
    }
    // choose l of the m variables; with the constant included it is variable 0
    let mut chosen: Vec<usize> = (0..l).collect();
    loop {
        let mut u = vec![0i64; n];
        for &c in &chosen {
            let var = if with_one { c } else { c + 1 };
            if var > 0 {
                u[var - 1] += 1;
            }
        }
        let prev = out.get(&u).cloned().unwrap_or_default();
        out.insert(u, &prev + &QPolynomial::one());
        // next combination
        let mut k = l;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if chosen[k] < m - l + k {
                chosen[k] += 1;
                for j in k + 1..l {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `R_i = sum_{l=0}^{n} e_{l+1} (q - 1)^l (d/dx_i)_q^l`.
pub fn raising_operator(f: &QPoly, i: usize, n: usize, convention: Convention) -> Result<QPoly> {
    let q_minus_one = QPolynomial::from_i64s(&[-1, 1]);
    let mut out = QPoly::zero(n);
    let mut deriv = f.clone();
    for l in 0..=n {
        if l > 0 {
            deriv = jackson_derivative(&deriv, i)?;
        }
        if deriv.is_empty() {
            break;
        }
        let e = elementary_symmetric(l + 1, n, convention);
        let term = (&e * &deriv).scale(&q_minus_one.pow(l));
        out = &out + &term;
    }
    Ok(out)
}

/// `L_i = (d/dx_i)_q`.
pub fn lowering_operator(f: &QPoly, i: usize) -> Result<QPoly> {
    jackson_derivative(f, i)
}

/// The classical multivariate Rogers-Szegő polynomial `RS_{k,n}`: the RS
/// polynomial of the `k`-th dilate of the standard simplex.
pub fn classical_rs(n: usize, k: i64) -> Result<QPoly> {
    rs_polynomial(&Polytope::projective_simplex(n, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    pub n: usize,
    pub k: i64,
    pub axis: usize,
    pub convention: Convention,
    /// `R_i(RS_{k-1,n}) = RS_{k,n}`; `None` for `k = 0`.
    pub raising: Option<bool>,
    /// `L_i(RS_{k,n}) = [k]_q RS_{k-1,n}` (`L_i(RS_0) = 0` at `k = 0`).
    pub lowering: bool,
    /// `[L_i, R_i](RS_{k,n}) = q^k RS_{k,n}`.
    pub commutator: bool,
}

impl LadderReport {
    pub fn all_hold(&self) -> bool {
        self.raising.unwrap_or(true) && self.lowering && self.commutator
    }
}

/// Check the three ladder identities along axis `i` for `RS_{k,n}`.
pub fn verify_ladder(n: usize, k: i64, i: usize, convention: Convention) -> Result<LadderReport> {
    if n == 0 || i >= n || k < 0 {
        return Err(QBrionError::InvalidInput(format!("ladder needs 0 <= axis < n and k >= 0 (n={n}, k={k}, axis={i})")));
    }
    let rs_k = classical_rs(n, k)?;
    let raising = if k >= 1 {
        let rs_prev = classical_rs(n, k - 1)?;
        Some(raising_operator(&rs_prev, i, n, convention)? == rs_k)
    } else {
        None
    };
    let lowered = lowering_operator(&rs_k, i)?;
    let lowering = if k == 0 {
        lowered.is_empty()
    } else {
        lowered == classical_rs(n, k - 1)?.scale(&qalg::q_integer(k)?)
    };
    let lr = lowering_operator(&raising_operator(&rs_k, i, n, convention)?, i)?;
    let rl = raising_operator(&lowering_operator(&rs_k, i)?, i, n, convention)?;
    let commutator = &lr - &rl == rs_k.scale(&QPolynomial::monomial(1.into(), k as usize));
    Ok(LadderReport { n, k, axis: i, convention, raising, lowering, commutator })
}

/// The convention under which all ladder identities hold for `n = 1` and
/// `0 <= k <= max_k`. Errors unless exactly one convention qualifies.
pub fn discriminate_convention(max_k: i64) -> Result<Convention> {
    let mut passing = Vec::new();
    for c in Convention::ALL {
        let mut ok = true;
        for k in 0..=max_k {
            ok &= verify_ladder(1, k, 0, c)?.all_hold();
        }
        if ok {
            passing.push(c);
        }
    }
    match passing.as_slice() {
        [c] => Ok(*c),
        _ => Err(QBrionError::Precondition(format!("{} conventions satisfy the n = 1 ladder", passing.len()))),
    }
}

/// Iterated Jackson derivative of `RS_D` at a maximizer of `x_1 + ... + x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    /// Lexicographically largest lattice point maximizing the coordinate sum.
    pub maximizer: Vec<i64>,
    /// `(d/dx_1)_q^{i_1} ... (d/dx_n)_q^{i_n} RS_D`, a constant in `x`.
    pub derivative: QPolynomial,
    /// Coefficient of `x^maximizer` in `RS_D`.
    pub rs_coefficient: QPolynomial,
}

impl LeadingTerm {
    /// `rs_coefficient * prod_k [i_k]_q!`, the derivative of the top monomial.
    pub fn expected(&self) -> QPolynomial {
        self.maximizer
            .iter()
            .fold(self.rs_coefficient.clone(), |acc, &i| &acc * &qalg::q_factorial(i as u64))
    }

    /// `prod_k [i_k]_q` with `[0]_q = 0`.
    pub fn bare_product(&self) -> QPolynomial {
        self.maximizer
            .iter()
            .fold(QPolynomial::one(), |acc, &i| &acc * &q_integer_or_zero(i).expect("nonnegative"))
    }
}

pub fn leading_term_check(d: &FirstOrthantDivisor) -> Result<LeadingTerm> {
    let rs = rs_polynomial(d.polytope())?;
    let points = lattice::lattice_points(d.polytope())?;
    let maximizer = points
        .iter()
        .map(|lp| lp.u.clone())
        .max_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)))
        .expect("nonempty polytope");
    let mut f = rs.clone();
    for (axis, &times) in maximizer.iter().enumerate() {
        for _ in 0..times {
            f = jackson_derivative(&f, axis)?;
        }
    }
    let origin = vec![0; d.dim()];
    if f.support().any(|u| *u != origin) {
        return Err(QBrionError::Precondition("iterated derivative is not constant in x".into()));
    }
    let derivative = f.get(&origin).cloned().unwrap_or_default();
    let rs_coefficient = rs.get(&maximizer).cloned().unwrap_or_default();
    Ok(LeadingTerm { maximizer, derivative, rs_coefficient })
}
