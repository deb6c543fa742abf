//! Sparse Laurent polynomials in `x_1..x_n` with q-dependent coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qalg::{QPolynomial, TruncatedQSeries};

/// Coefficient ring of a [`LaurentQPoly`].
pub trait QCoefficient: Clone + PartialEq {
    fn is_zero_coeff(&self) -> bool;

    /// The coefficient as a truncated series of the given order, or of its own
    /// order if that is smaller.
    fn as_series(&self, order: usize) -> TruncatedQSeries;
}

impl QCoefficient for QPolynomial {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn as_series(&self, order: usize) -> TruncatedQSeries {
        self.to_series(order)
    }
}

impl QCoefficient for TruncatedQSeries {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn as_series(&self, order: usize) -> TruncatedQSeries {
        self.truncate(order.min(self.order())).expect("not extending")
    }
}

/// `x^u` at a rational point; negative exponents invert.
pub fn monomial_value(x: &[BigRational], u: &[i64]) -> BigRational {
    x.iter().zip(u).fold(BigRational::one(), |acc, (xi, &e)| acc * xi.pow(e as i32))
}

/// Finite map `u -> c_u(q)` representing `sum_u c_u(q) x^u`. Zero coefficients
/// are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentQPoly<C> {
    dim: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: QCoefficient> LaurentQPoly<C> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn monomial(u: Vec<i64>, c: C) -> Self {
        let mut p = Self::zero(u.len());
        p.insert(u, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set the coefficient of `x^u`, dropping it if zero.
    pub fn insert(&mut self, u: Vec<i64>, c: C) {
        assert_eq!(u.len(), self.dim, "exponent length");
        if c.is_zero_coeff() {
            self.terms.remove(&u);
        } else {
            self.terms.insert(u, c);
        }
    }

    pub fn get(&self, u: &[i64]) -> Option<&C> {
        self.terms.get(u)
    }

    /// Terms in lexicographic exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    /// `sum_u c_u(q) x0^u` as a series of order `order`.
    pub fn evaluate(&self, x0: &[BigRational], order: usize) -> TruncatedQSeries {
        let mut acc = TruncatedQSeries::zero(order);
        for (u, c) in &self.terms {
            let s = c.as_series(order).scale(&monomial_value(x0, u));
            acc = &acc + &s;
        }
        acc
    }
}

impl LaurentQPoly<QPolynomial> {
    /// Coefficientwise `q = 1`, as a map to integers.
    pub fn at_q_one(&self) -> BTreeMap<Vec<i64>, num_bigint::BigInt> {
        self.terms
            .iter()
            .map(|(u, c)| (u.clone(), c.eval_at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn scale(&self, c: &QPolynomial) -> Self {
        let mut out = Self::zero(self.dim);
        for (u, a) in &self.terms {
            out.insert(u.clone(), a * c);
        }
        out
    }

    fn accumulate(&mut self, u: Vec<i64>, c: &QPolynomial) {
        let cur = self.terms.remove(&u).unwrap_or_default();
        self.insert(u, &cur + c);
    }
}

impl Add for &LaurentQPoly<QPolynomial> {
    type Output = LaurentQPoly<QPolynomial>;

    fn add(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.accumulate(u.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentQPoly<QPolynomial> {
    type Output = LaurentQPoly<QPolynomial>;

    fn sub(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.accumulate(u.clone(), &-c);
        }
        out
    }
}

impl Mul for &LaurentQPoly<QPolynomial> {
    type Output = LaurentQPoly<QPolynomial>;

    fn mul(self, rhs: Self) -> Self::Output {
        let mut out = LaurentQPoly::zero(self.dim);
        for (u, a) in &self.terms {
            for (w, b) in &rhs.terms {
                let e = u.iter().zip(w).map(|(x, y)| x + y).collect();
                out.accumulate(e, &(a * b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[i64], &[i64])]) -> LaurentQPoly<QPolynomial> {
        let mut p = LaurentQPoly::zero(terms[0].0.len());
        for (u, c) in terms {
            p.insert(u.to_vec(), QPolynomial::from_i64s(c));
        }
        p
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = poly(&[(&[0], &[1]), (&[1], &[0])]);
        assert_eq!(p.len(), 1);
        let d = &p - &p;
        assert!(d.is_empty());
    }

    #[test]
    fn product_and_evaluation() {
        // (1 + x)(1 + q x) = 1 + (1 + q) x + q x^2
        let a = poly(&[(&[0], &[1]), (&[1], &[1])]);
        let b = poly(&[(&[0], &[1]), (&[1], &[0, 1])]);
        let ab = &a * &b;
        assert_eq!(ab, poly(&[(&[0], &[1]), (&[1], &[1, 1]), (&[2], &[0, 1])]));
        let x = [BigRational::new(1.into(), 2.into())];
        let lhs = ab.evaluate(&x, 3);
        let rhs = &a.evaluate(&x, 3) * &b.evaluate(&x, 3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn negative_exponents_invert() {
        let x = [BigRational::from_integer(2.into()), BigRational::from_integer(3.into())];
        assert_eq!(monomial_value(&x, &[-1, 2]), BigRational::new(9.into(), 2.into()));
    }
}
