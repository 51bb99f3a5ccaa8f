//! Truncated formal power series with exact rational coefficients.
//!
//! A series of order `N` stores `[x^0] ..= [x^N]`. Binary operations return
//! a series whose order is the smaller of the two operand orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpsError {
    #[error("divisor has valuation {divisor} but dividend only {dividend}")]
    Valuation { dividend: usize, divisor: usize },
    #[error("divisor is zero to the available order")]
    ZeroDivisor,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstant,
    #[error("exp needs a zero constant term")]
    ExpConstant,
    #[error("log needs constant term 1")]
    LogConstant,
    #[error("reversion needs f(0) = 0 and f'(0) != 0")]
    NotReversible,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalPowerSeries {
    coeffs: Vec<Q>,
}

impl fmt::Debug for FormalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fps[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O(x^{})]", self.coeffs.len())
    }
}

impl fmt::Display for FormalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a.is_one();
            match i {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.coeffs.len())
    }
}

impl FormalPowerSeries {
    /// Builds a series of the given order; missing coefficients are zero and
    /// extra ones are dropped.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        FormalPowerSeries { coeffs }
    }

    pub fn from_ints(cs: &[i64], order: usize) -> Self {
        Self::new(cs.iter().map(|&c| qi(c)).collect(), order)
    }

    pub fn from_bigints(cs: &[BigInt], order: usize) -> Self {
        Self::new(cs.iter().map(|c| Q::from_integer(c.clone())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(Q::one(), 1, order)
    }

    pub fn monomial(c: Q, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// `[x^i]`, zero past the stored order.
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set_coeff(&mut self, i: usize, c: Q) {
        self.coeffs[i] = c;
    }

    /// Index of the first nonzero coefficient, or `None` if all stored
    /// coefficients vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// Integer view of the coefficients, `None` if any is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        FormalPowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut v = vec![Q::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        FormalPowerSeries { coeffs: v }
    }

    /// Divide by `x^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, FpsError> {
        let v = self.valuation().unwrap_or(usize::MAX);
        if v < k {
            return Err(FpsError::Valuation { dividend: v, divisor: k });
        }
        if k > self.order() {
            return Ok(Self::zero(0));
        }
        Ok(FormalPowerSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn add(&self, b: &Self) -> Self {
        let n = self.order().min(b.order());
        FormalPowerSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &b.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, b: &Self) -> Self {
        let n = self.order().min(b.order());
        FormalPowerSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &b.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FormalPowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, b: &Self) -> Self {
        let n = self.order().min(b.order());
        let mut out = vec![Q::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, c) in b.coeffs.iter().enumerate().take(n + 1 - i) {
                if !c.is_zero() {
                    out[i + j] += a * c;
                }
            }
        }
        FormalPowerSeries { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derive(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        FormalPowerSeries {
            coeffs: (1..=self.order())
                .map(|i| &self.coeffs[i] * qi(i as i64))
                .collect(),
        }
    }

    /// Antiderivative with constant 0.
    pub fn integrate(&self) -> Self {
        let mut v = vec![Q::zero()];
        v.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / qi(i as i64 + 1)),
        );
        FormalPowerSeries { coeffs: v }
    }

    /// `self / b`. When `b` has valuation `v > 0`, `self` must have valuation
    /// at least `v` and the quotient has order `min(orders) - v`.
    pub fn div(&self, b: &Self) -> Result<Self, FpsError> {
        let v = b.valuation().ok_or(FpsError::ZeroDivisor)?;
        let n = self.order().min(b.order());
        if v > 0 {
            let va = self.truncate(n).valuation().unwrap_or(usize::MAX);
            if va < v {
                return Err(FpsError::Valuation { dividend: va, divisor: v });
            }
        }
        let a = self.truncate(n).shift_down(v)?;
        let b = b.truncate(n).shift_down(v)?;
        let m = n - v;
        let inv0 = b.coeffs[0].recip();
        let mut out: Vec<Q> = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut s = a.coeffs[i].clone();
            for j in 1..=i {
                if !b.coeffs[j].is_zero() {
                    s -= &b.coeffs[j] * &out[i - j];
                }
            }
            out.push(s * &inv0);
        }
        Ok(FormalPowerSeries { coeffs: out })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self, FpsError> {
        Self::one(self.order()).div(self)
    }

    /// `self(g(x))`, requires `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self, FpsError> {
        if !g.coeffs[0].is_zero() {
            return Err(FpsError::NonzeroConstant);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Result<Self, FpsError> {
        if !self.coeffs[0].is_zero() {
            return Err(FpsError::ExpConstant);
        }
        let n = self.order();
        let mut e = vec![Q::one()];
        for m in 1..=n {
            let mut s = Q::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s += &self.coeffs[k] * qi(k as i64) * &e[m - k];
                }
            }
            e.push(s / qi(m as i64));
        }
        Ok(FormalPowerSeries { coeffs: e })
    }

    pub fn log(&self) -> Result<Self, FpsError> {
        if !self.coeffs[0].is_one() {
            return Err(FpsError::LogConstant);
        }
        Ok(self.derive().div(self)?.integrate())
    }

    /// Compositional inverse `g` with `f(g(x)) = x = g(f(x))`, solved one
    /// coefficient at a time.
    pub fn reversion(&self) -> Result<Self, FpsError> {
        let n = self.order();
        if n == 0 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(FpsError::NotReversible);
        }
        let f1 = self.coeffs[1].clone();
        let mut g = vec![Q::zero(); n + 1];
        g[1] = f1.recip();
        // pw[k][m] = [x^m] g^k; only columns m < current are final.
        let mut pw = vec![vec![Q::zero(); n + 1]; n + 1];
        pw[0][0] = Q::one();
        pw[1][1] = g[1].clone();
        for m in 2..=n {
            let mut rhs = Q::zero();
            for k in 2..=m {
                let mut c = Q::zero();
                for j in 1..=(m + 1 - k) {
                    if !g[j].is_zero() && !pw[k - 1][m - j].is_zero() {
                        c += &g[j] * &pw[k - 1][m - j];
                    }
                }
                if !self.coeffs[k].is_zero() {
                    rhs += &self.coeffs[k] * &c;
                }
                pw[k][m] = c;
            }
            g[m] = -rhs / &f1;
            pw[1][m] = g[m].clone();
        }
        Ok(FormalPowerSeries { coeffs: g })
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&FormalPowerSeries> for &FormalPowerSeries {
            type Output = FormalPowerSeries;
            fn $m(self, rhs: &FormalPowerSeries) -> FormalPowerSeries {
                FormalPowerSeries::$m(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &FormalPowerSeries {
    type Output = FormalPowerSeries;
    fn neg(self) -> FormalPowerSeries {
        FormalPowerSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &FormalPowerSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn add_cancels() {
        let a = FormalPowerSeries::from_ints(&[1, 1], 4);
        let b = FormalPowerSeries::from_ints(&[1, -1], 4);
        assert_eq!(a.add(&b), FormalPowerSeries::from_ints(&[2], 4));
        let z = FormalPowerSeries::zero(4);
        assert_eq!(z.add(&a), a);
    }

    #[test]
    fn order_is_min() {
        let a = FormalPowerSeries::from_ints(&[1, 2, 3], 7);
        let b = FormalPowerSeries::from_ints(&[1], 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }

    #[test]
    fn x_times_x() {
        let x = FormalPowerSeries::x(5);
        assert_eq!(ints(&x.mul(&x)), vec![0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn square_of_double_factorials() {
        let d = FormalPowerSeries::from_ints(&[1, 1, 3, 15, 105, 945], 5);
        // hand convolution of (1,1,3,15,105) with itself
        let mut hand = vec![0i64; 6];
        let c = [1i64, 1, 3, 15, 105, 945];
        for i in 0..6 {
            for j in 0..6 - i {
                hand[i + j] += c[i] * c[j];
            }
        }
        assert_eq!(ints(&d.mul(&d)), hand);
        assert_eq!(&hand[..5], &[1, 2, 7, 36, 249]);
    }

    #[test]
    fn derive_and_integrate() {
        let x2 = FormalPowerSeries::monomial(qi(1), 2, 4);
        assert_eq!(x2.derive(), FormalPowerSeries::monomial(qi(2), 1, 3));
        let two_x = FormalPowerSeries::monomial(qi(2), 1, 4);
        assert_eq!(two_x.integrate(), FormalPowerSeries::monomial(qi(1), 2, 5));
    }

    #[test]
    fn geometric() {
        let d = FormalPowerSeries::from_ints(&[1, -1], 6);
        let g = FormalPowerSeries::one(6).div(&d).unwrap();
        assert_eq!(ints(&g), vec![1; 7]);
    }

    #[test]
    fn div_with_valuation() {
        let a = FormalPowerSeries::from_ints(&[0, 0, 2, 4], 6);
        let b = FormalPowerSeries::from_ints(&[0, 1, 1], 6);
        let r = a.div(&b).unwrap();
        assert_eq!(r.order(), 5);
        assert_eq!(r.mul(&b.shift_down(1).unwrap()), a.shift_down(1).unwrap().truncate(5));
        let bad = FormalPowerSeries::from_ints(&[0, 1], 4).div(&FormalPowerSeries::from_ints(&[0, 0, 1], 4));
        assert!(matches!(bad, Err(FpsError::Valuation { .. })));
    }

    #[test]
    fn compose_identity_and_error() {
        let f = FormalPowerSeries::from_ints(&[3, 1, 4, 1, 5], 4);
        assert_eq!(f.compose(&FormalPowerSeries::x(4)).unwrap(), f);
        assert_eq!(
            f.compose(&FormalPowerSeries::from_ints(&[1, 1], 4)),
            Err(FpsError::NonzeroConstant)
        );
    }

    #[test]
    fn exp_of_negative_x() {
        let e = FormalPowerSeries::from_ints(&[0, -1], 6).exp().unwrap();
        let mut fact = 1i64;
        for k in 0..=6usize {
            if k > 0 {
                fact *= k as i64;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(e.coeff(k), q(sign, fact));
        }
        assert_eq!(FormalPowerSeries::zero(5).exp().unwrap(), FormalPowerSeries::one(5));
    }

    #[test]
    fn log_of_geometric() {
        let g = FormalPowerSeries::from_ints(&[1, 1, 1, 1], 3);
        let l = g.log().unwrap();
        assert_eq!(l.coeffs(), &[qi(0), qi(1), q(1, 2), q(1, 3)]);
        assert_eq!(FormalPowerSeries::from_ints(&[2], 3).log(), Err(FpsError::LogConstant));
    }

    #[test]
    fn reversion_catalan() {
        let f = FormalPowerSeries::from_ints(&[0, 1, -1], 6);
        let g = f.reversion().unwrap();
        // fixed point of R = x + R^2
        let x = FormalPowerSeries::x(6);
        let mut r = FormalPowerSeries::zero(6);
        for _ in 0..7 {
            r = x.add(&r.mul(&r));
        }
        assert_eq!(g, r);
        assert_eq!(ints(&g)[..5], [0, 1, 1, 2, 5]);
    }

    #[test]
    fn reversion_cubic() {
        let f = FormalPowerSeries::from_ints(&[0, 1, 1, 1], 7);
        let g = f.reversion().unwrap();
        // Newton oracle on g: g <- g - (f(g) - x)/f'(g)
        let x = FormalPowerSeries::x(7);
        let mut h = x.clone();
        for _ in 0..4 {
            let fg = f.compose(&h).unwrap();
            let dfg = f.derive().compose(&h).unwrap().truncate(7);
            let step = fg.sub(&x).div(&FormalPowerSeries::new(dfg.coeffs().to_vec(), 7)).unwrap();
            h = h.sub(&step);
        }
        assert_eq!(g, h);
        assert_eq!(ints(&g)[..4], [0, 1, -1, 1]);
        assert_eq!(FormalPowerSeries::x(5).reversion().unwrap(), FormalPowerSeries::x(5));
    }

    #[test]
    fn reversion_non_unit_linear_term() {
        let f = FormalPowerSeries::new(vec![qi(0), qi(3), q(1, 2), qi(-2)], 8);
        let g = f.reversion().unwrap();
        assert_eq!(f.compose(&g).unwrap(), FormalPowerSeries::x(8));
        assert_eq!(g.compose(&f).unwrap(), FormalPowerSeries::x(8));
    }
}
