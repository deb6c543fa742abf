//! Exact q-arithmetic: integer q-polynomials, truncated rational q-series,
//! q-Pochhammer symbols and q-multinomial coefficients.
//!
//! Everything here is exact. A series of order `K` is trusted through the
//! coefficient of `q^K`; products and sums carry the smaller operand order.
//! Pochhammer symbols in the reciprocal base `q^-1` are never stored directly:
//! [`inverse_reversed_pochhammer`] rewrites them as a sign, a power of `c`, a
//! power of `q` and a series with unit constant term.

mod poly;
mod series;

pub use poly::QPolynomial;
pub use series::TruncatedQSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{QBrionError, Result};

/// `[b]_q = 1 + q + ... + q^(b-1)`.
pub fn q_integer(b: i64) -> Result<QPolynomial> {
    if b < 1 {
        return Err(QBrionError::InvalidInput(format!("q-integer requires b >= 1, got {b}")));
    }
    Ok(QPolynomial::from_coeffs(vec![BigInt::one(); b as usize]))
}

/// `[b]_q! = [1]_q [2]_q ... [b]_q`, with `[0]_q! = 1`.
pub fn q_factorial(b: u64) -> QPolynomial {
    (1..=b as i64).fold(QPolynomial::one(), |acc, j| &acc * &q_integer(j).expect("j >= 1"))
}

/// Gaussian binomial `[n choose k]_q` from the Pascal-type recurrence
/// `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
pub fn gaussian_binomial(n: u64, k: u64) -> QPolynomial {
    if k > n {
        return QPolynomial::zero();
    }
    let k = k.min(n - k) as usize;
    // row[j] holds [m choose j]_q for the current m
    let mut row = vec![QPolynomial::one()];
    for m in 1..=n as usize {
        let width = k.min(m);
        let mut next = Vec::with_capacity(width + 1);
        for j in 0..=width {
            let left = if j > 0 { row[j - 1].clone() } else { QPolynomial::zero() };
            let up = row.get(j).map(|p| p.shift(j)).unwrap_or_default();
            next.push(&left + &up);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// q-multinomial coefficient `(q;q)_m / prod (q;q)_{k_j}`, computed without
/// division as the product of Gaussian binomials `[k_1+...+k_j choose k_j]_q`.
pub fn q_multinomial(m: u64, parts: &[u64]) -> Result<QPolynomial> {
    let total: u64 = parts.iter().sum();
    if total != m {
        return Err(QBrionError::InvalidInput(format!(
            "multinomial parts sum to {total}, expected {m}"
        )));
    }
    let mut acc = QPolynomial::one();
    let mut running = 0;
    for &k in parts {
        running += k;
        if k > 0 && k < running {
            acc = &acc * &gaussian_binomial(running, k);
        }
    }
    Ok(acc)
}

/// `(c;q)_d = prod_{i=1}^{d} (1 - c q^(i-1))` modulo `q^(order+1)`.
pub fn pochhammer_finite(c: &BigRational, d: usize, order: usize) -> TruncatedQSeries {
    let mut s = TruncatedQSeries::one(order);
    for i in 0..d {
        s.mul_binomial(c, i);
    }
    s
}

/// `1 / (c;q)_inf` modulo `q^(order+1)`. Fails when `c = 1`.
pub fn pochhammer_infinite_inverse(c: &BigRational, order: usize) -> Result<TruncatedQSeries> {
    pochhammer_infinite_inverse_from(c, 0, order)
}

/// `1 / prod_{k >= start} (1 - c q^k)` modulo `q^(order+1)`; factors with
/// `k > order` are `1` at this order.
pub fn pochhammer_infinite_inverse_from(
    c: &BigRational,
    start: usize,
    order: usize,
) -> Result<TruncatedQSeries> {
    let mut s = TruncatedQSeries::one(order);
    for k in start..=order {
        s.div_binomial(c, k)
            .map_err(|_| QBrionError::Pole(format!("1/(c;q)_inf with c = {c}")))?;
    }
    Ok(s)
}

/// `(q;q)_d = prod_{k=1}^{d} (1 - q^k)` modulo `q^(order+1)`.
pub fn q_pochhammer(d: usize, order: usize) -> TruncatedQSeries {
    let one = BigRational::one();
    let mut s = TruncatedQSeries::one(order);
    for k in 1..=d.min(order) {
        s.mul_binomial(&one, k);
    }
    s
}

/// `1/(q;q)_d` modulo `q^(order+1)`.
pub fn q_pochhammer_inverse(d: usize, order: usize) -> TruncatedQSeries {
    let one = BigRational::one();
    let mut s = TruncatedQSeries::one(order);
    for k in 1..=d.min(order) {
        s.div_binomial(&one, k).expect("k >= 1");
    }
    s
}

/// `1/(q;q)_inf` modulo `q^(order+1)`: the partition generating function.
pub fn euler_inverse(order: usize) -> TruncatedQSeries {
    q_pochhammer_inverse(order, order)
}

/// Normal form of `1 / (c q^-1; q^-1)_d`:
/// `sign * c^power_of_c * q^qshift * series`, where `series = 1/(c^-1 q; q)_d`
/// has constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversedPochhammerInverse {
    pub sign: i8,
    pub power_of_c: i64,
    pub qshift: usize,
    pub series: TruncatedQSeries,
}

impl ReversedPochhammerInverse {
    /// Reassemble the full value as a series, given the value of `c`
    /// (`None` for the base `q^-1` itself).
    pub fn to_series(&self, c: Option<&BigRational>) -> TruncatedQSeries {
        let mut scalar = BigRational::from_integer(self.sign.into());
        if let Some(c) = c {
            scalar *= c.pow(self.power_of_c as i32);
        }
        self.series.mul_q_power(self.qshift).scale(&scalar)
    }
}

/// `1/(c q^-1; q^-1)_d = (-1)^d c^-d q^(d(d+1)/2) / (c^-1 q; q)_d`.
///
/// `c = None` stands for `1/(q^-1;q^-1)_d = (-1)^d q^(d(d+1)/2) / (q;q)_d`, in which
/// case `power_of_c` is 0. A value `c` must be nonzero.
pub fn inverse_reversed_pochhammer(
    c: Option<&BigRational>,
    d: usize,
    order: usize,
) -> Result<ReversedPochhammerInverse> {
    let sign = if d.is_multiple_of(2) { 1 } else { -1 };
    let qshift = d * (d + 1) / 2;
    let (power_of_c, series) = match c {
        None => (0, q_pochhammer_inverse(d, order)),
        Some(c) => {
            if c.is_zero() {
                return Err(QBrionError::InvalidInput("reversed Pochhammer base c = 0".into()));
            }
            let cinv = c.recip();
            let mut s = TruncatedQSeries::one(order);
            for k in 1..=d.min(order) {
                s.div_binomial(&cinv, k).expect("k >= 1");
            }
            (-(d as i64), s)
        }
    };
    Ok(ReversedPochhammerInverse { sign, power_of_c, qshift, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn series(coeffs: &[(i64, i64)], order: usize) -> TruncatedQSeries {
        TruncatedQSeries::from_coeffs(coeffs.iter().map(|&(n, d)| r(n, d)).collect(), order)
    }

    /// Brute-force partition count: number of non-increasing sequences summing to n.
    fn partitions(n: usize, max_part: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max_part.min(n)).map(|p| partitions(n - p, p)).sum()
    }

    /// Ordinary multinomial by factorials.
    fn multinomial(parts: &[u64]) -> BigInt {
        let fact = |n: u64| (1..=n).fold(BigInt::one(), |a, j| a * j);
        let m: u64 = parts.iter().sum();
        parts.iter().fold(fact(m), |acc, &k| acc / fact(k))
    }

    #[test]
    fn q_integer_examples() {
        assert_eq!(q_integer(1).unwrap(), QPolynomial::one());
        assert_eq!(q_integer(2).unwrap(), QPolynomial::from_i64s(&[1, 1]));
        assert_eq!(q_integer(4).unwrap(), QPolynomial::from_i64s(&[1, 1, 1, 1]));
        assert!(q_integer(0).is_err());
        assert!(q_integer(-3).is_err());
    }

    #[test]
    fn q_multinomial_examples() {
        assert_eq!(q_multinomial(3, &[1, 1, 1]).unwrap(), QPolynomial::from_i64s(&[1, 2, 2, 1]));
        assert_eq!(q_multinomial(5, &[5]).unwrap(), QPolynomial::one());
        assert_eq!(q_multinomial(2, &[1, 1]).unwrap(), QPolynomial::from_i64s(&[1, 1]));
        assert!(q_multinomial(4, &[1, 1]).is_err());
    }

    #[test]
    fn gaussian_binomial_small_table() {
        // [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
        assert_eq!(gaussian_binomial(4, 2), QPolynomial::from_i64s(&[1, 1, 2, 1, 1]));
        assert_eq!(gaussian_binomial(3, 4), QPolynomial::zero());
    }

    #[test]
    fn pochhammer_finite_examples() {
        assert_eq!(pochhammer_finite(&r(1, 1), 0, 5), TruncatedQSeries::one(5));
        // (c;q)_2 = (1 - c)(1 - cq) = 1 - c - c q + c^2 q
        let c = r(3, 5);
        let expect = series(&[(2, 5), (-3 * 5 + 9, 25)], 3);
        assert_eq!(pochhammer_finite(&c, 2, 3), expect);
        assert!(pochhammer_finite(&r(1, 1), 2, 3).is_zero());
    }

    #[test]
    fn pochhammer_infinite_inverse_examples() {
        assert_eq!(pochhammer_infinite_inverse(&r(0, 1), 4).unwrap(), TruncatedQSeries::one(4));
        assert_eq!(
            pochhammer_infinite_inverse(&r(1, 2), 2).unwrap(),
            series(&[(2, 1), (1, 1), (3, 2)], 2)
        );
        assert!(matches!(pochhammer_infinite_inverse(&r(1, 1), 2), Err(QBrionError::Pole(_))));
    }

    #[test]
    fn euler_inverse_is_partition_count() {
        assert_eq!(euler_inverse(0), TruncatedQSeries::one(0));
        assert_eq!(euler_inverse(1), TruncatedQSeries::from_i64s(&[1, 1], 1));
        assert_eq!(euler_inverse(5), TruncatedQSeries::from_i64s(&[1, 1, 2, 3, 5, 7], 5));
        let e = euler_inverse(10);
        for j in 0..=10 {
            assert_eq!(*e.coeff(j), BigRational::from_integer(partitions(j, j).into()));
            if j > 0 {
                assert!(e.coeff(j) >= e.coeff(j - 1));
            }
        }
    }

    #[test]
    fn inverse_reversed_pochhammer_examples() {
        let a = inverse_reversed_pochhammer(None, 1, 3).unwrap();
        assert_eq!((a.sign, a.qshift), (-1, 1));
        assert_eq!(a.series, TruncatedQSeries::from_i64s(&[1, 1, 1, 1], 3));

        let b = inverse_reversed_pochhammer(None, 0, 3).unwrap();
        assert_eq!((b.sign, b.qshift, b.power_of_c), (1, 0, 0));
        assert_eq!(b.series, TruncatedQSeries::one(3));

        let c = inverse_reversed_pochhammer(Some(&r(2, 1)), 1, 2).unwrap();
        assert_eq!((c.sign, c.power_of_c, c.qshift), (-1, -1, 1));
        assert_eq!(c.series, series(&[(1, 1), (1, 2), (1, 4)], 2));
    }

    #[test]
    fn reversal_identity_against_q_pochhammer() {
        // (-1)^d q^(d(d+1)/2) * series == 1/(q;q)_d
        for d in 0..=8 {
            let k = 12;
            let inv = inverse_reversed_pochhammer(None, d, k).unwrap();
            let mut direct = TruncatedQSeries::one(k);
            for j in 1..=d {
                let mut f = TruncatedQSeries::one(k);
                f.mul_binomial(&r(1, 1), j);
                direct = &direct * &f.inverse().unwrap();
            }
            assert_eq!(inv.series, direct, "d = {d}");
        }
    }

    #[test]
    fn reversed_pochhammer_reassembles_through_laurent_expansion() {
        // 1/(1 - c q^-1) = -c^-1 q / (1 - c^-1 q) for c = 3/2, checked by multiplying
        // the reassembled series by (q - c) and comparing with q.
        let c = r(3, 2);
        let k = 6;
        let v = inverse_reversed_pochhammer(Some(&c), 1, k).unwrap().to_series(Some(&c));
        let mut q_minus_c = TruncatedQSeries::constant(-c.clone(), k);
        q_minus_c = &q_minus_c + &TruncatedQSeries::one(k).mul_q_power(1);
        assert_eq!(&v * &q_minus_c, TruncatedQSeries::one(k).mul_q_power(1));
    }

    proptest! {
        #[test]
        fn multinomial_specializations(parts in proptest::collection::vec(0u64..5, 1..5)) {
            let m = parts.iter().sum();
            let p = q_multinomial(m, &parts).unwrap();
            prop_assert_eq!(p.eval_at_zero(), BigInt::one());
            prop_assert_eq!(p.eval_at_one(), multinomial(&parts));
        }

        #[test]
        fn pochhammer_splits(n in -9i64..9, den in 1i64..9, d in 0usize..6, e in 0usize..6) {
            let k = 10;
            let c = r(n, den);
            // (c;q)_d * (c q^d; q)_e == (c;q)_{d+e}
            let mut tail = TruncatedQSeries::one(k);
            for i in 0..e {
                tail.mul_binomial(&c, d + i);
            }
            prop_assert_eq!(&pochhammer_finite(&c, d, k) * &tail, pochhammer_finite(&c, d + e, k));
        }

        #[test]
        fn series_inversion(coeffs in proptest::collection::vec(-20i64..20, 1..8), c0 in 1i64..7) {
            let mut all = vec![c0];
            all.extend(coeffs);
            let s = TruncatedQSeries::from_i64s(&all, 7);
            let inv = s.inverse().unwrap();
            prop_assert_eq!(&s * &inv, TruncatedQSeries::one(7));
        }
    }
}
