//! Exact rationals, truncated power series in one variable, and the Newton
//! identities between elementary and power-sum presentations.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{ChowError, Result};

/// Arbitrary-precision fraction, always reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Power series `a_0 + a_1 h + … + a_D h^D` with `h^{D+1} = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to length `degree + 1`.
    pub fn new(mut coeffs: Vec<Rational>, degree: usize) -> Self {
        coeffs.resize(degree + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], degree: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect(), degree)
    }

    pub fn one(degree: usize) -> Self {
        Self::from_ints(&[1], degree)
    }

    /// `1 + a·h`.
    pub fn linear(a: i64, degree: usize) -> Self {
        Self::from_ints(&[1, a], degree)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(ChowError::ModulusMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.degree();
        let mut coeffs = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(ChowError::NotUnit(a0.to_string()));
        }
        let d = self.degree();
        let inv0 = a0.recip();
        let mut out = vec![Rational::zero(); d + 1];
        out[0] = inv0.clone();
        for k in 1..=d {
            let mut s = Rational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s += &self.coeffs[i] * &out[k - i];
                }
            }
            out[k] = -s * &inv0;
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Integer power; negative exponents require constant term 1.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            if !self.coeffs[0].is_one() {
                return Err(ChowError::NotUnit(self.coeffs[0].to_string()));
            }
            self.inverse()?
        } else {
            self.clone()
        };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one(self.degree());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Substitutes `h ↦ t·h`.
    pub fn rescale_variable(&self, t: &Rational) -> Self {
        let mut power = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power *= t;
        }
        TruncatedSeries { coeffs }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = a.abs();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        write!(f, "h")?;
                    } else {
                        write!(f, "h^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Commutative Q-algebra operations needed by the Newton identities.
pub trait ClassAlgebra: Clone {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
}

impl ClassAlgebra for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
}

/// Power sums from elementary classes: `e[i]` is `e_{i+1}`, output `p[i]` is
/// `p_{i+1}`.
///
/// `p_k = Σ_{i=1}^{k−1} (−1)^{i−1} e_i p_{k−i} + (−1)^{k−1} k e_k`.
pub fn newton_p_from_e<T: ClassAlgebra>(e: &[T]) -> Vec<T> {
    let mut p: Vec<T> = Vec::with_capacity(e.len());
    for k in 1..=e.len() {
        let mut acc = e[k - 1].scaled(&rat(k as i64));
        if k % 2 == 0 {
            acc = acc.zero_like().minus(&acc);
        }
        for i in 1..k {
            let term = e[i - 1].times(&p[k - i - 1]);
            acc = if i % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        p.push(acc);
    }
    p
}

/// Inverse of [`newton_p_from_e`]: `k e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i`.
pub fn newton_e_from_p<T: ClassAlgebra>(p: &[T]) -> Vec<T> {
    let mut e: Vec<T> = Vec::with_capacity(p.len());
    for k in 1..=p.len() {
        let mut acc = p[k - 1].clone();
        if k % 2 == 0 {
            acc = acc.zero_like().minus(&acc);
        }
        for i in 1..k {
            let term = e[k - i - 1].times(&p[i - 1]);
            acc = if i % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        e.push(acc.scaled(&ratio(1, k as i64)));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_arithmetic() {
        let a = TruncatedSeries::linear(1, 3);
        let b = TruncatedSeries::linear(-1, 3);
        assert_eq!(a.mul(&b).unwrap(), TruncatedSeries::from_ints(&[1, 0, -1], 3));
        let c = TruncatedSeries::linear(2, 2);
        assert_eq!(c.mul(&c).unwrap(), TruncatedSeries::from_ints(&[1, 4, 4], 2));
        let d = TruncatedSeries::linear(1, 2);
        assert_eq!(d.pow(4).unwrap(), TruncatedSeries::from_ints(&[1, 4, 6], 2));
        assert_eq!(a.add(&b).unwrap(), TruncatedSeries::from_ints(&[2], 3));
        assert!(matches!(
            a.mul(&TruncatedSeries::one(2)),
            Err(ChowError::ModulusMismatch(3, 2))
        ));
    }

    #[test]
    fn series_powers() {
        let geo = TruncatedSeries::linear(-1, 3).pow(-1).unwrap();
        assert_eq!(geo, TruncatedSeries::from_ints(&[1, 1, 1, 1], 3));
        assert_eq!(
            TruncatedSeries::linear(2, 1).pow(3).unwrap(),
            TruncatedSeries::from_ints(&[1, 6], 1)
        );
        let s = TruncatedSeries::linear(6, 5);
        let q = s.mul(&s.pow(-1).unwrap()).unwrap();
        assert_eq!(q, TruncatedSeries::one(5));
        let non_unit = TruncatedSeries::from_ints(&[2, 1], 3);
        assert!(non_unit.pow(-1).is_err());
        assert!(TruncatedSeries::from_ints(&[0, 1], 3).inverse().is_err());
        assert_eq!(non_unit.pow(0).unwrap(), TruncatedSeries::one(3));
    }

    #[test]
    fn series_display() {
        assert_eq!(TruncatedSeries::from_ints(&[1, 0, -1], 3).to_string(), "1 - h^2");
        assert_eq!(TruncatedSeries::from_ints(&[0, 2], 3).to_string(), "2h");
        assert_eq!(TruncatedSeries::one(0).scale(&rat(0)).to_string(), "0");
    }

    #[test]
    fn newton_zero_case() {
        let e = vec![rat(0); 5];
        assert!(newton_p_from_e(&e).iter().all(|p| p.is_zero()));
        assert!(newton_e_from_p(&e).iter().all(|p| p.is_zero()));
    }

    #[test]
    fn newton_two_equal_roots() {
        // Roots {t, t} with t = 3: p_k = 2·3^k, e = (6, 9, 0).
        let p = vec![rat(6), rat(18), rat(54)];
        assert_eq!(newton_e_from_p(&p), vec![rat(6), rat(9), rat(0)]);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..7).prop_map(|(n, d)| ratio(n, d))
    }

    fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(small_rational(), 1..=12).prop_map(|mut v| {
            let d = v.len();
            v.insert(0, rat(1));
            TruncatedSeries::new(v, d)
        })
    }

    proptest! {
        #[test]
        fn unit_powers_cancel(a in unit_series(), e in 0i64..=10) {
            let pos = a.pow(e).unwrap();
            let neg = a.pow(-e).unwrap();
            prop_assert_eq!(pos.mul(&neg).unwrap(), TruncatedSeries::one(a.degree()));
        }

        #[test]
        fn newton_round_trip(e in proptest::collection::vec(small_rational(), 0..=10)) {
            let p = newton_p_from_e(&e);
            prop_assert_eq!(newton_e_from_p(&p), e.clone());
            let back = newton_p_from_e(&newton_e_from_p(&p));
            prop_assert_eq!(back, p);
        }
    }
}
