//! Factorially divergent series with scale `2^{n+1/2} Gamma(n+1/2)`, which
//! is `sqrt(2 pi) (2n-1)!!`. Closed-form asymptotic images of `C` and
//! `C>=2`, a chain-rule check, and numeric fits against exact counts.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fps::{qi, FormalPowerSeries as Fps, FpsError, Q};
use crate::gfseries::{connected_counts, double_factorials, series_c, series_c2, series_d, series_s};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymError {
    #[error("n = {n} out of range for R = {r} (need R + 2 <= n <= {max})")]
    OutOfRange { n: usize, r: usize, max: usize },
    #[error("cannot add scaled series with different prefactors")]
    PrefactorMismatch,
    #[error("both factors carry 1/sqrt(2 pi)")]
    DoubleSqrt2Pi,
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error(transparent)]
    Fps(#[from] FpsError),
}

/// Largest `n` accepted by [`asymptotic_fit`].
pub const MAX_FIT_N: usize = 200;

/// Digits of `e^q` kept when evaluating fits.
pub const FIT_DIGITS: u32 = 60;

/// Empirical tolerances for the fit checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitTolerances {
    /// `|remainder / (e^q c_R) - 1|` at `n = 20`.
    pub remainder_at_20: f64,
    /// relative error of the connectedness probability at `n = 40`.
    pub connected_prob_40: f64,
    /// relative error of the 2-connectedness probability at `n = 40`.
    pub two_connected_prob_40: f64,
}

pub const TOLERANCES: FitTolerances = FitTolerances {
    remainder_at_20: 0.5,
    connected_prob_40: 0.002,
    two_connected_prob_40: 0.005,
};

/// `e^{exp_offset} * body`, times `1/sqrt(2 pi)` if the flag is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSeries {
    pub body: Fps,
    pub exp_offset: Q,
    pub sqrt2pi_inverse: bool,
}

impl ScaledSeries {
    pub fn new(body: Fps, exp_offset: Q, sqrt2pi_inverse: bool) -> Self {
        ScaledSeries { body, exp_offset, sqrt2pi_inverse }
    }

    pub fn plain(body: Fps) -> Self {
        ScaledSeries::new(body, Q::zero(), false)
    }

    /// `exp(e)` with the constant term of `e` moved into the offset.
    pub fn exp_of(e: &Fps) -> Result<Self, AsymError> {
        let c0 = e.coeff(0);
        let mut rest = e.clone();
        rest.set_coeff(0, Q::zero());
        Ok(ScaledSeries::new(rest.exp()?, c0, false))
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.body.coeff(i)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AsymError> {
        if self.sqrt2pi_inverse && other.sqrt2pi_inverse {
            return Err(AsymError::DoubleSqrt2Pi);
        }
        Ok(ScaledSeries::new(
            self.body.mul(&other.body),
            &self.exp_offset + &other.exp_offset,
            self.sqrt2pi_inverse || other.sqrt2pi_inverse,
        ))
    }

    pub fn mul_series(&self, f: &Fps) -> Self {
        ScaledSeries::new(self.body.mul(f), self.exp_offset.clone(), self.sqrt2pi_inverse)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AsymError> {
        if self.exp_offset != other.exp_offset || self.sqrt2pi_inverse != other.sqrt2pi_inverse {
            return Err(AsymError::PrefactorMismatch);
        }
        Ok(ScaledSeries::new(
            self.body.add(&other.body),
            self.exp_offset.clone(),
            self.sqrt2pi_inverse,
        ))
    }

    /// Substitute a series of positive valuation into the body.
    pub fn compose(&self, g: &Fps) -> Result<Self, AsymError> {
        Ok(ScaledSeries::new(
            self.body.compose(g)?,
            self.exp_offset.clone(),
            self.sqrt2pi_inverse,
        ))
    }

    pub fn truncate(&self, order: usize) -> Self {
        ScaledSeries::new(self.body.truncate(order), self.exp_offset.clone(), self.sqrt2pi_inverse)
    }
}

/// `(x/C) exp(-(2C + C^2)/(2x))`, offset `e^{-1}`.
pub fn alien_c(order: usize) -> Result<ScaledSeries, AsymError> {
    let c = series_c(order + 1);
    let c_over_x = c.shift_down(1)?;
    let x_over_c = c_over_x.recip()?;
    let e = c.scale(&qi(2)).add(&c.mul(&c)).shift_down(1)?.scale(&Q::new((-1).into(), 2.into()));
    let mut out = ScaledSeries::exp_of(&e)?.mul_series(&x_over_c);
    out.sqrt2pi_inverse = true;
    Ok(out)
}

/// The same image written with `x/C = 1 + C - 2xC'`.
pub fn alien_c_alternative(order: usize) -> Result<ScaledSeries, AsymError> {
    let c = series_c(order + 1);
    let pref = Fps::one(order)
        .add(&c.truncate(order))
        .sub(&c.derive().shift_up(1).scale(&qi(2)).truncate(order));
    let e = c.scale(&qi(2)).add(&c.mul(&c)).shift_down(1)?.scale(&Q::new((-1).into(), 2.into()));
    let mut out = ScaledSeries::exp_of(&e)?.mul_series(&pref);
    out.sqrt2pi_inverse = true;
    Ok(out)
}

/// `x^2/(C2 S)`.
pub fn c2_prefactor(order: usize) -> Result<Fps, AsymError> {
    let c2s = series_c2(order + 2).mul(&series_s(order + 2)).shift_down(2)?;
    Ok(c2s.recip()?.truncate(order))
}

/// `((S + x)^2 - 1)/(2x)`.
pub fn c2_exponent(order: usize) -> Result<Fps, AsymError> {
    let sx = series_s(order + 1).add(&Fps::x(order + 1));
    let e = sx.mul(&sx).sub(&Fps::one(order + 1)).shift_down(1)?;
    Ok(e.scale(&Q::new(1.into(), 2.into())))
}

/// `(x^2/(C2 S)) exp(-((S+x)^2 - 1)/(2x))`, offset `e^{-2}`.
pub fn alien_c2(order: usize) -> Result<ScaledSeries, AsymError> {
    let e = c2_exponent(order)?.neg();
    let mut out = ScaledSeries::exp_of(&e)?.mul_series(&c2_prefactor(order)?);
    out.sqrt2pi_inverse = true;
    Ok(out)
}

/// Image of `D = 1 + C(xD^2)` assembled from the chain rule. Without the
/// first summand when `drop_first` is set.
pub fn chain_rule_image(order: usize, drop_first: bool) -> Result<ScaledSeries, AsymError> {
    let d = series_d(order + 1);
    let d2 = d.mul(&d);
    let xd2 = d2.shift_up(1).truncate(order);
    let d = d.truncate(order);
    let alien_d = ScaledSeries::new(Fps::one(order), Q::zero(), true);

    let cprime = series_c(order + 1).derive().compose(&xd2)?;
    let first = alien_d.mul_series(&cprime.mul(&d.shift_up(1).scale(&qi(2))).truncate(order));

    let e = d2.sub(&Fps::one(order + 1)).div(&d2.shift_up(1).scale(&qi(2)))?.truncate(order);
    let chain = ScaledSeries::exp_of(&e)?.mul_series(&d.recip()?);
    let second = chain.mul(&alien_c(order)?.compose(&xd2)?)?.truncate(order);

    if drop_first {
        return Ok(second);
    }
    first.add(&second)
}

/// True iff the chain-rule image of `D` is exactly `1/sqrt(2 pi)`.
pub fn chain_rule_verify(order: usize) -> Result<bool, AsymError> {
    let img = chain_rule_image(order, false)?;
    Ok(img.exp_offset.is_zero()
        && img.sqrt2pi_inverse
        && img.body == Fps::one(order))
}

/// `e^q` to within `10^{-digits}` as an exact rational.
pub fn exp_rational(q: &Q, digits: u32) -> Q {
    // e^q = (e^{q/2^s})^{2^s} with |q/2^s| <= 1/2
    let mut s = 0u32;
    let mut r = q.clone();
    let half = Q::new(1.into(), 2.into());
    while r.abs() > half {
        r /= qi(2);
        s += 1;
    }
    let tol = Q::new(1.into(), BigInt::from(10).pow(digits + 10 + s));
    let mut term = Q::one();
    let mut sum = Q::one();
    let mut k = 1i64;
    while term.abs() > tol {
        term = term * &r / qi(k);
        sum += &term;
        k += 1;
    }
    // keep denominators bounded while squaring
    let scale = BigInt::from(10).pow(digits + 20);
    let round = |x: Q| Q::new((x * Q::from_integer(scale.clone())).round().to_integer(), scale.clone());
    let mut v = round(sum);
    for _ in 0..s {
        v = round(&v * &v);
    }
    v
}

/// Exact asymptotic model: coefficients `c_k` and offset `e^q`.
#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub name: &'static str,
    pub offset: Q,
    pub coeffs: Vec<Q>,
}

impl AsymptoticModel {
    pub fn for_series(name: &str, terms: usize) -> Result<Self, AsymError> {
        let s = match name {
            "C" => alien_c(terms)?,
            "C2" | "C>=2" => alien_c2(terms)?,
            other => return Err(AsymError::UnknownModel(other.to_string())),
        };
        Ok(AsymptoticModel {
            name: if name == "C" { "C" } else { "C2" },
            offset: s.exp_offset.clone(),
            coeffs: (0..=terms).map(|i| s.coeff(i)).collect(),
        })
    }
}

/// Exact coefficients `[x^n]` of `C` or `C2` for `n = 0..=nmax`.
pub fn exact_counts(name: &str, nmax: usize) -> Result<Vec<BigInt>, AsymError> {
    match name {
        "C" => Ok(connected_counts(nmax)),
        "C2" | "C>=2" => Ok(series_c2(nmax)
            .to_integers()
            .expect("C2 has integer coefficients")),
        other => Err(AsymError::UnknownModel(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub name: String,
    pub n: usize,
    pub terms: usize,
    pub exact: BigInt,
    /// `e^q sum_{k<R} c_k (2(n-k)-1)!!`.
    pub partial_sum: Q,
    /// `(exact - partial_sum) / (2(n-R)-1)!!`.
    pub scaled_remainder: Q,
    /// `e^q c_R`.
    pub predicted: Q,
}

impl FitReport {
    pub fn ratio(&self) -> f64 {
        (&self.scaled_remainder / &self.predicted).to_f64().unwrap_or(f64::NAN)
    }

    pub fn relative_deviation(&self) -> f64 {
        (self.ratio() - 1.0).abs()
    }

    pub fn scaled_remainder_f64(&self) -> f64 {
        self.scaled_remainder.to_f64().unwrap_or(f64::NAN)
    }

    pub fn predicted_f64(&self) -> f64 {
        self.predicted.to_f64().unwrap_or(f64::NAN)
    }
}

/// Fit `R` terms of the model for `name` against the exact count at `n`.
pub fn asymptotic_fit(name: &str, n: usize, terms: usize) -> Result<FitReport, AsymError> {
    if n < terms + 2 || n > MAX_FIT_N {
        return Err(AsymError::OutOfRange { n, r: terms, max: MAX_FIT_N });
    }
    let model = AsymptoticModel::for_series(name, terms)?;
    let exact = exact_counts(name, n)?[n].clone();
    Ok(fit_against(&model, &exact, n, terms))
}

/// Same as [`asymptotic_fit`] with a caller-supplied model and exact value.
pub fn fit_against(model: &AsymptoticModel, exact: &BigInt, n: usize, terms: usize) -> FitReport {
    let df = double_factorials(n);
    let eq = exp_rational(&model.offset, FIT_DIGITS);
    let mut partial = Q::zero();
    for k in 0..terms {
        partial += &model.coeffs[k] * Q::from_integer(df[n - k].clone());
    }
    let partial_sum = partial * &eq;
    let scaled_remainder =
        (Q::from_integer(exact.clone()) - &partial_sum) / Q::from_integer(df[n - terms].clone());
    FitReport {
        name: model.name.to_string(),
        n,
        terms,
        exact: exact.clone(),
        partial_sum,
        scaled_remainder,
        predicted: eq * &model.coeffs[terms],
    }
}

/// Probability that a uniform diagram on `n` chords lies in the class.
pub fn probability(name: &str, n: usize) -> Result<f64, AsymError> {
    let exact = exact_counts(name, n)?[n].clone();
    let df = double_factorials(n)[n].clone();
    Ok(Q::new(exact, df).to_f64().unwrap_or(f64::NAN))
}

/// Product rule: the image of `C^2` is `2C` times the image of `C`.
pub fn square_image(order: usize) -> Result<ScaledSeries, AsymError> {
    Ok(alien_c(order)?.mul_series(&series_c(order).scale(&qi(2))))
}

/// Fit of the product-rule image against the exact coefficients of `C^2`.
pub fn product_rule_fit(n: usize, terms: usize) -> Result<FitReport, AsymError> {
    let img = square_image(terms)?;
    let model = AsymptoticModel {
        name: "C^2",
        offset: img.exp_offset.clone(),
        coeffs: (0..=terms).map(|i| img.coeff(i)).collect(),
    };
    let c = series_c(n);
    let exact = c.mul(&c).coeff(n);
    debug_assert!(exact.is_integer());
    Ok(fit_against(&model, &exact.to_integer(), n, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::q;

    #[test]
    fn alien_c_prefix() {
        let a = alien_c(5).unwrap();
        let want = [q(1, 1), q(-5, 2), q(-43, 8), q(-579, 16), q(-44477, 128), q(-5326191, 1280)];
        assert_eq!(a.body.coeffs(), &want);
        assert_eq!(a.exp_offset, qi(-1));
        assert!(a.sqrt2pi_inverse);
        assert_eq!(alien_c_alternative(12).unwrap(), alien_c(12).unwrap());
    }

    #[test]
    fn alien_c2_prefix() {
        let a = alien_c2(5).unwrap();
        let want = [q(1, 1), q(-6, 1), q(-4, 1), q(-218, 3), q(-890, 1), q(-196838, 15)];
        assert_eq!(a.body.coeffs(), &want);
        assert_eq!(a.exp_offset, qi(-2));
        assert_eq!(c2_prefactor(5).unwrap(), Fps::from_ints(&[1, -2, -6, -50, -574, -8082], 5));
        assert_eq!(c2_exponent(5).unwrap(), Fps::from_ints(&[2, 4, 14, 104, 1082, 14028], 5));
    }

    #[test]
    fn chain_rule() {
        assert!(chain_rule_verify(10).unwrap());
        let img = chain_rule_image(10, false).unwrap();
        assert_eq!(img.exp_offset, qi(0));
        let bad = chain_rule_image(10, true).unwrap();
        assert_eq!(bad.body.coeff(0), qi(1));
        assert_ne!(bad.body.coeff(1), qi(0));
    }

    #[test]
    fn exp_rational_accuracy() {
        let e = exp_rational(&qi(1), 40);
        let e_ref = Q::new(
            "27182818284590452353602874713526624977572".parse().unwrap(),
            BigInt::from(10).pow(40),
        );
        assert!((e - e_ref).abs() < Q::new(1.into(), BigInt::from(10).pow(39)));
        let one = exp_rational(&qi(-3), 50) * exp_rational(&qi(3), 50);
        assert!((one - qi(1)).abs() < Q::new(1.into(), BigInt::from(10).pow(45)));
    }

    #[test]
    fn fit_range_guard() {
        assert!(asymptotic_fit("C", 3, 2).is_err());
        assert!(asymptotic_fit("C", 201, 1).is_err());
        assert!(asymptotic_fit("X", 30, 1).is_err());
    }
}
