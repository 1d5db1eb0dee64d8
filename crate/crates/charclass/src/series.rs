//! Truncated univariate power series with exact coefficients.
//!
//! A series of order n stores coefficients 0..=n. Binary operations never
//! read past the truncation order; results carry the minimum of the operand
//! orders.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<K: Scalar> {
    coeffs: Vec<K>,
}

impl<K: Scalar> PowerSeries<K> {
    /// Build from coefficients c_0..c_n; the vector must be nonempty.
    pub fn new(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        PowerSeries { coeffs }
    }

    pub fn constant(c: K, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> K {
        if i < self.coeffs.len() {
            self.coeffs[i].clone()
        } else {
            self.coeffs[0].zero_like()
        }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        PowerSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    fn zero_scalar(&self) -> K {
        self.coeffs[0].zero_like()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| self.coeffs[i].add(&other.coeffs[i]))
            .collect();
        PowerSeries { coeffs }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let zero = self.zero_scalar();
        let mut coeffs = vec![zero; n + 1];
        for i in 0..=n {
            for j in 0..=(n - i) {
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse up to the truncation order; requires an
    /// invertible constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let n = self.order();
        let zero = self.zero_scalar();
        let mut coeffs = vec![zero; n + 1];
        coeffs[0] = c0.clone();
        for k in 1..=n {
            // b_k = -c0^{-1} * sum_{i=1..k} a_i b_{k-i}
            let mut s = self.zero_scalar();
            for i in 1..=k {
                s = s.add(&self.coeffs[i].mul(&coeffs[k - i]));
            }
            coeffs[k] = s.neg().mul(&c0);
        }
        Ok(PowerSeries { coeffs })
    }

    /// Composition a(b(x)); requires b(0) = 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let a = self.truncate(n);
        let b = inner.truncate(n);
        // Horner: (((a_n b + a_{n-1}) b + ...) b + a_0)
        let mut acc = PowerSeries::constant(a.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.multiply(&b);
            acc.coeffs[0] = acc.coeffs[0].add(&a.coeffs[k]);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return PowerSeries::constant(self.zero_scalar(), 0);
        }
        let coeffs = (1..=self.order())
            .map(|i| self.coeffs[i].mul(&self.coeffs[i].of_i64(i as i64)))
            .collect();
        PowerSeries { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};
    use num::traits::{One, Zero};

    fn geom_denom(order: usize) -> PowerSeries<Rat> {
        // 1 + z
        let mut c = vec![Rat::zero(); order + 1];
        c[0] = Rat::one();
        c[1] = Rat::one();
        PowerSeries::new(c)
    }

    #[test]
    fn invert_one_plus_z() {
        let s = geom_denom(5).invert().unwrap();
        for i in 0..=5 {
            assert_eq!(s.coeff(i), rat_int(if i % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn invert_is_two_sided() {
        let s = geom_denom(8);
        let inv = s.invert().unwrap();
        let prod = s.multiply(&inv);
        assert_eq!(prod.coeff(0), Rat::one());
        for i in 1..=8 {
            assert!(Scalar::is_zero(&prod.coeff(i)));
        }
    }

    #[test]
    fn invert_needs_unit() {
        let mut c = vec![Rat::zero(); 4];
        c[1] = Rat::one();
        assert!(PowerSeries::new(c).invert().is_err());
    }

    #[test]
    fn alternating_unit_series_shape() {
        // (z + z^3) * (1 + z)^{-1} at p = 3, r = 1, order 6:
        // z - z^2 + 2z^3 - 2z^4 + 2z^5 - ...
        let order = 6;
        let mut num = vec![Rat::zero(); order + 1];
        num[1] = Rat::one();
        num[3] = Rat::one();
        let num = PowerSeries::new(num);
        let s = num.multiply(&geom_denom(order).invert().unwrap());
        let expected = [0i64, 1, -1, 2, -2, 2, -2];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(i), rat_int(*e), "coefficient {}", i);
        }
    }

    #[test]
    fn compose_requires_zero_constant() {
        let a = geom_denom(4);
        assert!(a.compose(&geom_denom(4)).is_err());
        let mut c = vec![Rat::zero(); 5];
        c[1] = Rat::one();
        c[2] = Rat::one();
        let b = PowerSeries::new(c);
        // (1 + b) where b = z + z^2
        let r = a.compose(&b).unwrap();
        assert_eq!(r.coeff(0), Rat::one());
        assert_eq!(r.coeff(1), Rat::one());
        assert_eq!(r.coeff(2), Rat::one());
        assert!(Scalar::is_zero(&r.coeff(3)));
    }

    #[test]
    fn orders_take_minimum()
    {
        let a = geom_denom(3);
        let b = geom_denom(7);
        assert_eq!(a.multiply(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }
}
