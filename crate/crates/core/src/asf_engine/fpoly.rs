//! Laurent polynomials over `F_q`.

use crate::fq::Fq;

/// `Σ coeffs[i] ε^(low+i)`, kept without leading or trailing zeros (zero is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPoly {
    low: i64,
    coeffs: Vec<u32>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: u32, e: i64) -> Self {
        LPoly { low: e, coeffs: vec![c] }.normalized()
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<u32>) -> Self {
        LPoly { low, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        if lead == self.coeffs.len() {
            return LPoly::zero();
        }
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation; `None` for zero.
    pub fn val(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// One past the highest exponent (`low` for zero).
    pub fn top(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> u32 {
        if e < self.low || e >= self.top() {
            0
        } else {
            self.coeffs[(e - self.low) as usize]
        }
    }

    /// Nonzero terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, e: i64) -> Self {
        LPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, o: &LPoly, f: Fq) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let top = self.top().max(o.top());
        let coeffs = (low..top).map(|e| f.add(self.coeff(e), o.coeff(e))).collect();
        LPoly { low, coeffs }.normalized()
    }

    pub fn neg(&self, f: Fq) -> Self {
        LPoly { low: self.low, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, o: &LPoly, f: Fq) -> Self {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, c: u32, f: Fq) -> Self {
        LPoly { low: self.low, coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
            .normalized()
    }

    pub fn mul(&self, o: &LPoly, f: Fq) -> Self {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        let mut coeffs = vec![0u32; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        LPoly { low: self.low + o.low, coeffs }.normalized()
    }

    /// Terms of exponent `< e`.
    pub fn below(&self, e: i64) -> Self {
        let keep = (e - self.low).clamp(0, self.coeffs.len() as i64) as usize;
        LPoly { low: self.low, coeffs: self.coeffs[..keep].to_vec() }.normalized()
    }

    /// Whether all exponents are `≥ 0`.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.low >= 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let f = Fq::new(3).unwrap();
        let a = LPoly::from_coeffs(-1, vec![1, 2]); // ε^-1 + 2
        let b = LPoly::from_coeffs(0, vec![2, 1]); // 2 + ε
        let p = a.mul(&b, f); // 2ε^-1 + (1+4) + 2ε = 2ε^-1 + 2 + 2ε
        assert_eq!(p, LPoly::from_coeffs(-1, vec![2, 2, 2]));
        assert!(a.add(&a.neg(f), f).is_zero());
        assert_eq!(p.below(0), LPoly::monomial(2, -1));
        assert_eq!(p.val(), Some(-1));
        assert!(!p.is_integral());
        assert!(p.shift(1).is_integral());
        assert_eq!(LPoly::from_coeffs(2, vec![0, 0, 1, 0]), LPoly::monomial(1, 4));
    }
}
