use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QBrionError, Result};

/// Power series in `q` with exact rational coefficients, known modulo `q^(order+1)`.
///
/// Binary operations produce a result of order `min(lhs.order, rhs.order)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedQSeries {
    order: usize,
    coeffs: Vec<BigRational>,
}

impl TruncatedQSeries {
    pub fn zero(order: usize) -> Self {
        Self { order, coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Pads with zeros or drops terms beyond `q^order`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { order, coeffs }
    }

    pub fn from_i64s(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigRational {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` if zero to this order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Reduce to a lower order. Requesting a higher order is an error since the
    /// missing coefficients are unknown.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(QBrionError::InvalidInput(format!(
                "cannot extend a series of order {} to order {order}",
                self.order
            )));
        }
        Ok(Self { order, coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Multiply by `q^k`, keeping the order.
    pub fn mul_q_power(&self, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k.min(self.order + 1)];
        coeffs.extend(self.coeffs.iter().take((self.order + 1).saturating_sub(k)).cloned());
        Self { order: self.order, coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiply in place by the binomial `1 - c q^k`.
    pub fn mul_binomial(&mut self, c: &BigRational, k: usize) {
        if c.is_zero() {
            return;
        }
        if k == 0 {
            let f = BigRational::one() - c;
            self.coeffs.iter_mut().for_each(|x| *x *= &f);
            return;
        }
        for n in (k..=self.order).rev() {
            let t = &self.coeffs[n - k] * c;
            self.coeffs[n] -= t;
        }
    }

    /// Divide in place by the binomial `1 - c q^k`, i.e. multiply by the geometric
    /// series `sum_j c^j q^(kj)`. Fails only for `k = 0, c = 1`.
    pub fn div_binomial(&mut self, c: &BigRational, k: usize) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if k == 0 {
            let f = BigRational::one() - c;
            if f.is_zero() {
                return Err(QBrionError::Pole("division by 1 - c with c = 1".into()));
            }
            let inv = f.recip();
            self.coeffs.iter_mut().for_each(|x| *x *= &inv);
            return Ok(());
        }
        for n in k..=self.order {
            let t = &self.coeffs[n - k] * c;
            self.coeffs[n] += t;
        }
        Ok(())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(QBrionError::Pole("series with zero constant term is not invertible".into()));
        }
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); self.order + 1];
        out[0] = inv0.clone();
        for n in 1..=self.order {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[n - i];
                }
            }
            out[n] = -(acc * &inv0);
        }
        Ok(Self { order: self.order, coeffs: out })
    }

    /// Value of the truncated polynomial at a numeric `q`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * q + c)
    }
}

impl fmt::Display for TruncatedQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*q")?,
                _ => write!(f, "({a})*q^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

impl Add for &TruncatedQSeries {
    type Output = TruncatedQSeries;

    fn add(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order).map(|j| &self.coeffs[j] + &rhs.coeffs[j]).collect();
        TruncatedQSeries { order, coeffs }
    }
}

impl Sub for &TruncatedQSeries {
    type Output = TruncatedQSeries;

    fn sub(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order).map(|j| &self.coeffs[j] - &rhs.coeffs[j]).collect();
        TruncatedQSeries { order, coeffs }
    }
}

impl Mul for &TruncatedQSeries {
    type Output = TruncatedQSeries;

    fn mul(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedQSeries { order, coeffs }
    }
}

impl Neg for &TruncatedQSeries {
    type Output = TruncatedQSeries;

    fn neg(self) -> TruncatedQSeries {
        self.scale(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedQSeries {
            type Output = TruncatedQSeries;
            fn $m(self, rhs: TruncatedQSeries) -> TruncatedQSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn order_is_min_of_operands() {
        let a = TruncatedQSeries::from_i64s(&[1, 1, 1, 1, 1], 4);
        let b = TruncatedQSeries::from_i64s(&[1, -1], 2);
        let c = &a * &b;
        assert_eq!(c.order(), 2);
        assert_eq!(c, TruncatedQSeries::from_i64s(&[1, 0, 0], 2));
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn inverse_of_zero_constant_term_fails() {
        let s = TruncatedQSeries::from_i64s(&[0, 1], 3);
        assert!(matches!(s.inverse(), Err(QBrionError::Pole(_))));
    }

    #[test]
    fn binomial_division_matches_inverse() {
        let mut s = TruncatedQSeries::one(6);
        s.div_binomial(&r(2, 3), 2).unwrap();
        let mut f = TruncatedQSeries::one(6);
        f.mul_binomial(&r(2, 3), 2);
        assert_eq!(s, f.inverse().unwrap());
        let mut back = s.clone();
        back.mul_binomial(&r(2, 3), 2);
        assert_eq!(back, TruncatedQSeries::one(6));
    }

    #[test]
    fn q_power_shift_drops_overflow() {
        let s = TruncatedQSeries::from_i64s(&[1, 2, 3], 2);
        assert_eq!(s.mul_q_power(1), TruncatedQSeries::from_i64s(&[0, 1, 2], 2));
        assert_eq!(s.mul_q_power(5), TruncatedQSeries::zero(2));
    }

    #[test]
    fn truncate_cannot_extend() {
        let s = TruncatedQSeries::one(2);
        assert!(s.truncate(3).is_err());
        assert_eq!(s.truncate(0).unwrap(), TruncatedQSeries::one(0));
    }
}
