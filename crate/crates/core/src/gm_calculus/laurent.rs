//! Truncated Laurent series in one variable `t` with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{q, Q};
use crate::Error;

/// `Σ coeffs[i] t^(val+i) + O(t^(val + coeffs.len()))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<Q>,
}

impl LaurentSeries {
    pub fn new(val: i64, coeffs: Vec<Q>) -> Self {
        LaurentSeries { val, coeffs }
    }

    /// The constant `c`, known to absolute order `prec`.
    pub fn constant(c: Q, prec: usize) -> Self {
        let mut coeffs = vec![Q::zero(); prec];
        if prec > 0 {
            coeffs[0] = c;
        }
        LaurentSeries { val: 0, coeffs }
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(Q::one(), prec)
    }

    /// `exp(c t)`.
    pub fn exp_linear(c: &Q, prec: usize) -> Self {
        let mut coeffs = Vec::with_capacity(prec);
        let mut term = Q::one();
        for j in 0..prec {
            if j > 0 {
                term = term * c / q(j as i64);
            }
            coeffs.push(term.clone());
        }
        LaurentSeries { val: 0, coeffs }
    }

    /// `(1 - exp(-c t)) / (c t)`, equal to 1 when `c = 0`.
    pub fn one_minus_exp_over_x(c: &Q, prec: usize) -> Self {
        // Σ_j (-c)^j t^j / (j+1)!
        let mut coeffs = Vec::with_capacity(prec);
        let mut term = Q::one();
        for j in 0..prec {
            if j > 0 {
                term = -term * c / q(j as i64 + 1);
            }
            coeffs.push(term.clone());
        }
        LaurentSeries { val: 0, coeffs }
    }

    /// `c t / (1 - exp(-c t))`, equal to 1 when `c = 0`.
    pub fn x_over_one_minus_exp(c: &Q, prec: usize) -> Self {
        Self::one_minus_exp_over_x(c, prec).inverse().expect("unit constant term")
    }

    /// `1 / (1 - exp(-c t))`, a series with a simple pole. Requires `c ≠ 0`.
    pub fn inv_one_minus_exp(c: &Q, prec: usize) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::Compute("1/(1-exp(0)) has no Laurent expansion".into()));
        }
        let mut s = Self::x_over_one_minus_exp(c, prec + 1);
        s = s.scale(&c.recip());
        s.val -= 1;
        Ok(s)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    /// Absolute order: coefficients of `t^e` with `e < end()` are known.
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Coefficient of `t^e`, or `None` when beyond precision.
    pub fn coeff(&self, e: i64) -> Option<Q> {
        if e >= self.end() {
            None
        } else if e < self.val {
            Some(Q::zero())
        } else {
            Some(self.coeffs[(e - self.val) as usize].clone())
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LaurentSeries { val: self.val, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { val: self.val + k, coeffs: self.coeffs.clone() }
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        LaurentSeries { val: self.val + lead as i64, coeffs: self.coeffs[lead..].to_vec() }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplicative inverse; fails when every known coefficient vanishes.
    pub fn inverse(&self) -> Result<Self, Error> {
        let s = self.normalized();
        if s.coeffs.is_empty() {
            return Err(Error::Compute("inverse of a series that vanishes to precision".into()));
        }
        let n = s.coeffs.len();
        let a0inv = s.coeffs[0].recip();
        let mut b = vec![Q::zero(); n];
        b[0] = a0inv.clone();
        for k in 1..n {
            let mut acc = Q::zero();
            for j in 1..=k {
                acc += &s.coeffs[j] * &b[k - j];
            }
            b[k] = -acc * &a0inv;
        }
        Ok(LaurentSeries { val: -s.val, coeffs: b })
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, o: &LaurentSeries) -> LaurentSeries {
        let val = self.val.min(o.val);
        let end = self.end().min(o.end());
        let coeffs = (val..end.max(val))
            .map(|e| self.coeff(e).unwrap() + o.coeff(e).unwrap())
            .collect();
        LaurentSeries { val, coeffs }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, o: &LaurentSeries) -> LaurentSeries {
        self + &(-o)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&-Q::one())
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, o: &LaurentSeries) -> LaurentSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut coeffs = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentSeries { val: self.val + o.val, coeffs }
    }
}
