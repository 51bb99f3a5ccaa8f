//! Tree-level amplitudes of a free scalar field after a field
//! diffeomorphism `F(t) = sum_j a_j t^{j+1}`, `a_0 = 1`.
//!
//! `b_n` is computed four ways: closed Bell form, `n! [t^n] F^{-1}`, the two
//! Bell recurrences (as residual checks) and the momentum-level recursion
//! over set partitions evaluated on random rational kinematics.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::bell::{factorial, BellTable};
use crate::fps::{qi, FormalPowerSeries as Fps, FpsError, Q};

/// Largest `n` for the momentum-level recursion.
pub const MAX_AMPLITUDE_N: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffeoError {
    #[error("a_0 must be 1")]
    NotTangent,
    #[error("n = {0} exceeds the recursion guard {MAX_AMPLITUDE_N}")]
    TooLarge(usize),
    #[error("kinematics cover {have} legs, need {need}")]
    KinematicsTooSmall { have: usize, need: usize },
    #[error("vanishing propagator denominator; resample kinematics")]
    VanishingDenominator,
    #[error(transparent)]
    Fps(#[from] FpsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diffeomorphism {
    a: Vec<Q>,
}

impl Diffeomorphism {
    pub fn new(a: Vec<Q>) -> Result<Self, DiffeoError> {
        if a.first() != Some(&Q::one()) {
            return Err(DiffeoError::NotTangent);
        }
        Ok(Diffeomorphism { a })
    }

    pub fn identity() -> Self {
        Diffeomorphism { a: vec![Q::one()] }
    }

    /// `a_0 = 1` and `a_1..a_m` random small rationals.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut a = vec![Q::one()];
        a.extend((0..m).map(|_| random_rational(rng)));
        Diffeomorphism { a }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.a
    }

    /// `a_j`, zero past the stored degree.
    pub fn a(&self, j: usize) -> Q {
        self.a.get(j).cloned().unwrap_or_else(Q::zero)
    }

    /// `F(t)` truncated at `order`.
    pub fn series(&self, order: usize) -> Fps {
        let mut c = vec![Q::zero(); order + 1];
        for (j, aj) in self.a.iter().enumerate() {
            if j + 1 <= order {
                c[j + 1] = aj.clone();
            }
        }
        Fps::new(c, order)
    }

    /// `sum_{j=0}^{r} a_j a_{r-j} w(j)`.
    fn conv(&self, r: usize, w: impl Fn(usize) -> i64) -> Q {
        (0..=r).fold(Q::zero(), |acc, j| acc + self.a(j) * self.a(r - j) * qi(w(j)))
    }

    /// `d_r = r! sum_j (j+1)(r-j+1) a_j a_{r-j}` (kinematic vertex constant).
    pub fn d(&self, r: usize) -> Q {
        Q::from_integer(factorial(r)) * self.conv(r, |j| ((j + 1) * (r - j + 1)) as i64)
    }

    /// `c_r = (r+2)! sum_j a_j a_{r-j}` (massive vertex constant).
    pub fn c(&self, r: usize) -> Q {
        Q::from_integer(factorial(r + 2)) * self.conv(r, |_| 1)
    }
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let num: i64 = rng.random_range(-30..=30);
    let den: i64 = rng.random_range(1..=12);
    Q::new(num.into(), den.into())
}

/// `b_{n+1} = sum_k (n+k)!/n! B_{n,k}(-1! a_1, -2! a_2, ...)`; `b_1 = 1`.
pub fn b_closed_form(d: &Diffeomorphism, n: usize) -> Q {
    if n == 0 {
        return Q::zero();
    }
    let m = n - 1;
    if m == 0 {
        return Q::one();
    }
    let xs: Vec<Q> = (1..=m)
        .map(|s| -Q::from_integer(factorial(s)) * d.a(s))
        .collect();
    let t = BellTable::new(&xs, m);
    let nf = factorial(m);
    (1..=m).fold(Q::zero(), |acc, k| {
        acc + Q::new(factorial(m + k), nf.clone()) * t.get(m, k)
    })
}

/// `b_1..b_nmax` (index 0 holds `b_0 = 0`) from `n! [t^n] F^{-1}`.
pub fn b_inverse_all(d: &Diffeomorphism, nmax: usize) -> Result<Vec<Q>, DiffeoError> {
    let g = d.series(nmax.max(1)).reversion()?;
    Ok((0..=nmax)
        .map(|n| g.coeff(n) * Q::from_integer(factorial(n)))
        .collect())
}

pub fn b_inverse(d: &Diffeomorphism, n: usize) -> Result<Q, DiffeoError> {
    Ok(b_inverse_all(d, n)?[n].clone())
}

/// Right-hand sides of the two Bell recurrences for `n = 1..=nmax`, given
/// `b` with `b[0] = 0`. Both vanish for the true amplitudes.
pub fn recurrence_residuals(d: &Diffeomorphism, b: &[Q], nmax: usize) -> Vec<(Q, Q)> {
    let xs: Vec<Q> = (1..=nmax).map(|i| b.get(i).cloned().unwrap_or_else(Q::zero)).collect();
    let t = BellTable::new(&xs, nmax);
    let half = Q::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let mut r1 = Q::zero();
        let mut r2 = Q::zero();
        for k in 1..=n {
            let kf = Q::from_integer(factorial(k - 1));
            let ni = n as i64;
            let ki = k as i64;
            let s1 = d.conv(k - 1, |j| {
                let j = j as i64;
                2 * ni * (j + 1) * (ki - j) - ki * (ki + 1)
            });
            r1 += t.get(n, k) * &kf * &half * s1;

            let w = d.conv(k - 1, |j| ((j + 1) * (k - j)) as i64);
            if w.is_zero() {
                continue;
            }
            let mut inner = Q::zero();
            for s in 1..=n {
                let bell = t.get(n - s, k - 1);
                if bell.is_zero() {
                    continue;
                }
                let si = s as i64;
                let coef = Q::new(BigInt::one(), factorial(s) * factorial(n - s));
                inner += xs[s - 1].clone() * coef * bell * qi(ki * si * (si - 1) + ni * (ni - 1));
            }
            r2 += w * &kf / qi(2 * ki) * inner;
        }
        out.push((r1, r2));
    }
    out
}

/// Both recurrences hold for `b = b_inverse` at every `1 <= n <= nmax`.
pub fn verify_recurrences(d: &Diffeomorphism, nmax: usize) -> Result<bool, DiffeoError> {
    let b = b_inverse_all(d, nmax)?;
    Ok(recurrence_residuals(d, &b, nmax)
        .iter()
        .all(|(r1, r2)| r1.is_zero() && r2.is_zero()))
}

/// `P = int F'^2`, `Q = (F^2)'/2`.
pub fn p_and_q(d: &Diffeomorphism, order: usize) -> (Fps, Fps) {
    let f = d.series(order + 1);
    let fp = f.derive();
    let p = fp.mul(&fp).integrate().truncate(order);
    let q = f.mul(&f).derive().scale(&Q::new(1.into(), 2.into())).truncate(order);
    (p, q)
}

/// The two differential equations evaluated at `g`:
/// `t (P(g))' - Q(g)` and `(P(g))'' + g'' P'(g)`.
pub fn ode_residuals(d: &Diffeomorphism, g: &Fps, order: usize) -> Result<(Fps, Fps), DiffeoError> {
    let (p, q) = p_and_q(d, order + 2);
    let g = g.truncate(order + 2);
    let pg = p.compose(&g)?;
    let first = pg.derive().shift_up(1).sub(&q.compose(&g)?).truncate(order);
    let second = pg
        .derive()
        .derive()
        .add(&g.derive().derive().mul(&p.derive().compose(&g)?))
        .truncate(order);
    Ok((first, second))
}

pub fn verify_ode(d: &Diffeomorphism, order: usize) -> Result<bool, DiffeoError> {
    let g = d.series(order + 2).reversion()?;
    let (r1, r2) = ode_residuals(d, &g, order)?;
    Ok(r1.is_zero() && r2.is_zero())
}

/// On-shell kinematics: `p_i^2 = m^2` and free rational `p_i . p_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinematicSample {
    pub m2: Q,
    /// `dots[i][j] = p_i . p_j`, symmetric, diagonal `m^2`.
    pub dots: Vec<Vec<Q>>,
}

impl KinematicSample {
    pub fn new(m2: Q, pairs: &[(usize, usize, Q)], n: usize) -> Self {
        let mut dots = vec![vec![Q::zero(); n]; n];
        for (i, row) in dots.iter_mut().enumerate() {
            row[i] = m2.clone();
        }
        for (i, j, s) in pairs {
            dots[*i][*j] = s.clone();
            dots[*j][*i] = s.clone();
        }
        KinematicSample { m2, dots }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m2 = random_rational(rng);
        while m2.is_zero() {
            m2 = random_rational(rng);
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, random_rational(rng)));
            }
        }
        KinematicSample::new(m2, &pairs, n)
    }

    pub fn legs(&self) -> usize {
        self.dots.len()
    }

    /// `(sum_{e in mask} p_e)^2`.
    pub fn square(&self, mask: u32) -> Q {
        let idx: Vec<usize> = (0..self.legs()).filter(|i| mask >> i & 1 == 1).collect();
        let mut s = Q::zero();
        for (a, &i) in idx.iter().enumerate() {
            s += &self.dots[i][i];
            for &j in &idx[a + 1..] {
                s += qi(2) * &self.dots[i][j];
            }
        }
        s
    }
}

/// All set partitions of the bits of `mask` into at least two blocks.
fn partitions_of(mask: u32) -> Vec<Vec<u32>> {
    let elems: Vec<u32> = (0..32).filter(|i| mask >> i & 1 == 1).collect();
    let mut out = Vec::new();
    let mut blocks: Vec<u32> = Vec::new();
    fn rec(i: usize, elems: &[u32], blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == elems.len() {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        let bit = 1u32 << elems[i];
        for b in 0..blocks.len() {
            blocks[b] |= bit;
            rec(i + 1, elems, blocks, out);
            blocks[b] &= !bit;
        }
        blocks.push(bit);
        rec(i + 1, elems, blocks, out);
        blocks.pop();
    }
    rec(0, &elems, &mut blocks, &mut out);
    out
}

/// `b_n` from the momentum-level recursion over set partitions of the
/// legs, including the propagator of the off-shell edge.
pub fn amplitude_recursion(d: &Diffeomorphism, n: usize, kin: &KinematicSample) -> Result<Q, DiffeoError> {
    if n > MAX_AMPLITUDE_N {
        return Err(DiffeoError::TooLarge(n));
    }
    if kin.legs() < n {
        return Err(DiffeoError::KinematicsTooSmall { have: kin.legs(), need: n });
    }
    if n == 0 {
        return Ok(Q::zero());
    }
    let mut memo: HashMap<u32, Q> = HashMap::new();
    amp(d, (1u32 << n) - 1, kin, &mut memo)
}

fn amp(d: &Diffeomorphism, mask: u32, kin: &KinematicSample, memo: &mut HashMap<u32, Q>) -> Result<Q, DiffeoError> {
    if mask.count_ones() == 1 {
        return Ok(Q::one());
    }
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let p2 = kin.square(mask);
    let den = &p2 - &kin.m2;
    if den.is_zero() {
        return Err(DiffeoError::VanishingDenominator);
    }
    let mut total = Q::zero();
    for blocks in partitions_of(mask) {
        let k = blocks.len();
        let mut prod = Q::one();
        let mut sq = p2.clone();
        for &bl in &blocks {
            prod *= amp(d, bl, kin, memo)?;
            sq += kin.square(bl);
        }
        // vertex of degree k+1: kinematic part minus massive part
        let vertex = d.d(k - 1) / qi(2) * sq - &kin.m2 / qi(2) * d.c(k - 1);
        total += prod * vertex;
    }
    let v = -total / den;
    memo.insert(mask, v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diffeo(a: &[Q]) -> Diffeomorphism {
        Diffeomorphism::new(a.to_vec()).unwrap()
    }

    #[test]
    fn small_b() {
        let (a1, a2) = (q(3, 5), q(-7, 2));
        let d = diffeo(&[qi(1), a1.clone(), a2.clone()]);
        let b3 = qi(12) * &a1 * &a1 - qi(6) * &a2;
        assert_eq!(b_closed_form(&d, 1), qi(1));
        assert_eq!(b_closed_form(&d, 2), qi(-2) * &a1);
        assert_eq!(b_closed_form(&d, 3), b3);
        assert_eq!(b_inverse(&d, 2).unwrap(), qi(-2) * &a1);
        assert_eq!(b_inverse(&d, 3).unwrap(), b3);
        assert!(Diffeomorphism::new(vec![qi(2)]).is_err());
    }

    #[test]
    fn identity_diffeo() {
        let d = Diffeomorphism::identity();
        let b = b_inverse_all(&d, 6).unwrap();
        assert_eq!(b[1], qi(1));
        assert!(b[2..].iter().all(|x| x.is_zero()));
        assert!(verify_recurrences(&d, 6).unwrap());
        assert!(verify_ode(&d, 8).unwrap());
    }

    #[test]
    fn recurrences_and_controls() {
        let d = diffeo(&[qi(1), qi(1)]);
        assert!(verify_recurrences(&d, 10).unwrap());
        let mut b = b_inverse_all(&d, 5).unwrap();
        b[3] += qi(1);
        let res = recurrence_residuals(&d, &b, 5);
        assert!(res[0].0.is_zero() && res[1].0.is_zero());
        assert!(!res[2].0.is_zero());

        let d = diffeo(&[qi(1), q(1, 2), q(1, 3)]);
        assert!(verify_ode(&d, 12).unwrap());
        let f = d.series(14);
        let (r1, _) = ode_residuals(&d, &f, 12).unwrap();
        assert_eq!(r1.valuation(), Some(2));
    }

    #[test]
    fn momentum_independence_n3() {
        let (a1, a2) = (q(2, 3), q(5, 4));
        let d = diffeo(&[qi(1), a1.clone(), a2.clone()]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2 {
            let kin = KinematicSample::random(3, &mut rng);
            assert_eq!(amplitude_recursion(&d, 1, &kin).unwrap(), qi(1));
            assert_eq!(amplitude_recursion(&d, 2, &kin).unwrap(), qi(-2) * &a1);
            assert_eq!(amplitude_recursion(&d, 3, &kin).unwrap(), qi(12) * &a1 * &a1 - qi(6) * &a2);
        }
        let kin = KinematicSample::random(8, &mut rng);
        assert_eq!(amplitude_recursion(&d, 8, &kin), Err(DiffeoError::TooLarge(8)));
    }

    #[test]
    fn partition_counts() {
        // Bell numbers minus the one-block partition
        let counts: Vec<usize> = (1..=5).map(|n| partitions_of((1 << n) - 1).len()).collect();
        assert_eq!(counts, [0, 1, 4, 14, 51]);
    }
}
