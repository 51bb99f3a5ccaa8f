//! Partial Bell polynomials, Faà di Bruno, a handful of Bell identities and
//! Lagrange inversion.
//!
//! Sequences `xs` are 1-based in the mathematics: `xs[0]` is `x_1`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fps::{qi, FormalPowerSeries as Fps, FpsError, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BellError {
    #[error("B_{{{n},{k}}} needs x_1..x_{need}, only {have} given")]
    InsufficientXs { n: usize, k: usize, need: usize, have: usize },
    #[error("invalid parameters for {0}")]
    InvalidRange(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("inner series must vanish at 0")]
    NonzeroG0,
    #[error("G must be invertible (G(0) != 0)")]
    NotInvertible,
    #[error(transparent)]
    Fps(#[from] FpsError),
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

fn qb(b: BigInt) -> Q {
    Q::from_integer(b)
}

/// All `B_{m,j}(xs)` for `m <= nmax`, `j <= m`, via
/// `k B_{n,k} = sum_s C(n,s) x_s B_{n-s,k-1}`.
#[derive(Debug, Clone)]
pub struct BellTable {
    table: Vec<Vec<Q>>,
}

impl BellTable {
    /// `xs` may be shorter than `nmax`; missing entries count as 0.
    pub fn new(xs: &[Q], nmax: usize) -> Self {
        let x = |s: usize| xs.get(s - 1).cloned().unwrap_or_else(Q::zero);
        let mut table = vec![vec![Q::zero(); nmax + 1]; nmax + 1];
        table[0][0] = Q::one();
        for n in 1..=nmax {
            for k in 1..=n {
                let mut acc = Q::zero();
                for s in 1..=(n - k + 1) {
                    let prev = &table[n - s][k - 1];
                    if prev.is_zero() {
                        continue;
                    }
                    let xs_ = x(s);
                    if xs_.is_zero() {
                        continue;
                    }
                    acc += qb(binomial(n, s)) * xs_ * prev;
                }
                table[n][k] = acc / qi(k as i64);
            }
        }
        BellTable { table }
    }

    /// `B_{n,k}`, zero outside the table's triangle.
    pub fn get(&self, n: usize, k: usize) -> Q {
        if n >= self.table.len() || k > n {
            return Q::zero();
        }
        self.table[n][k].clone()
    }
}

type MemoKey = (Vec<Q>, usize);
static MEMO: OnceLock<Mutex<HashMap<MemoKey, BellTable>>> = OnceLock::new();

/// `B_{n,k}(x_1, x_2, ...)`.
pub fn bell_partial(n: usize, k: usize, xs: &[Q]) -> Result<Q, BellError> {
    if k > n || (k == 0 && n > 0) {
        return Ok(Q::zero());
    }
    if n == 0 {
        return Ok(Q::one());
    }
    let need = n - k + 1;
    if xs.len() < need {
        return Err(BellError::InsufficientXs { n, k, need, have: xs.len() });
    }
    let key = (xs[..need.min(n)].to_vec(), n);
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = memo.lock().expect("memo poisoned").get(&key) {
        return Ok(t.get(n, k));
    }
    let t = BellTable::new(&key.0, n);
    let v = t.get(n, k);
    let mut guard = memo.lock().expect("memo poisoned");
    if guard.len() > 4096 {
        guard.clear();
    }
    guard.insert(key, t);
    Ok(v)
}

/// `B_{n,k}` as a literal sum over set partitions of `{1..n}` into `k`
/// blocks (restricted growth strings).
pub fn bell_partial_by_partitions(n: usize, k: usize, xs: &[Q]) -> Q {
    if n == 0 {
        return if k == 0 { Q::one() } else { Q::zero() };
    }
    let x = |s: usize| xs.get(s - 1).cloned().unwrap_or_else(Q::zero);
    let mut total = Q::zero();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        if blocks == k {
            let mut sizes = vec![0usize; blocks];
            for &b in &rgs {
                sizes[b] += 1;
            }
            total += sizes.iter().fold(Q::one(), |acc, &s| acc * x(s));
        }
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return total;
            }
            let m = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= m {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// `h_n = sum_k f_k B_{n,k}(g_1, g_2, ...)` for exponential coefficient
/// lists `f`, `g` (index = power of `t`).
pub fn faa_di_bruno(f: &[Q], g: &[Q], n: usize) -> Result<Q, BellError> {
    if g.first().is_some_and(|g0| !g0.is_zero()) {
        return Err(BellError::NonzeroG0);
    }
    let gs: Vec<Q> = (1..=n).map(|i| g.get(i).cloned().unwrap_or_else(Q::zero)).collect();
    let t = BellTable::new(&gs, n);
    let mut h = Q::zero();
    for k in 0..=n {
        if let Some(fk) = f.get(k) {
            h += fk * t.get(n, k);
        }
    }
    Ok(h)
}

pub const BELL_IDENTITIES: [&str; 5] = ["lemma1a", "lemma1b", "id1", "id2", "id3"];

/// Checks one identity exactly at `(n, k)`; `id2` checks every split
/// `k = k1 + k2`, `id3` reads `k` as the number of blocks on the left.
pub fn verify_bell_identity(which: &str, n: usize, k: usize, xs: &[Q]) -> Result<bool, BellError> {
    let x = |s: usize| xs.get(s.wrapping_sub(1)).cloned().unwrap_or_else(Q::zero);
    if xs.len() < n {
        return Err(BellError::InsufficientXs { n, k, need: n, have: xs.len() });
    }
    let t = BellTable::new(xs, n);
    let b = |m: usize, j: usize| t.get(m, j);
    match which {
        "lemma1a" | "lemma1b" => {
            if n == 0 || k == 0 {
                return Err(BellError::InvalidRange(which.into()));
            }
            let weight = |s: usize| if which == "lemma1a" { Q::one() } else { qi(s as i64) };
            let lhs = b(n, k) * qi(if which == "lemma1a" { k } else { n } as i64);
            let rhs = (1..=n).fold(Q::zero(), |acc, s| {
                acc + qb(binomial(n, s)) * weight(s) * x(s) * b(n - s, k - 1)
            });
            Ok(lhs == rhs)
        }
        "id1" => {
            if n <= k || xs.is_empty() || xs[0].is_zero() {
                return Err(BellError::InvalidRange(which.into()));
            }
            let mut s = Q::zero();
            for a in 1..=(n - k) {
                let br = qi(k as i64 + 1) - Q::new(BigInt::from(n + 1), BigInt::from(a + 1));
                s += qb(binomial(n, a)) * br * x(a + 1) * b(n - a, k);
            }
            let rhs = s / (&xs[0] * qi((n - k) as i64));
            Ok(b(n, k) == rhs)
        }
        "id2" => {
            for k1 in 0..=k {
                let k2 = k - k1;
                let c = Q::new(factorial(k1) * factorial(k2), factorial(k));
                let s = (0..=n).fold(Q::zero(), |acc, a| {
                    acc + qb(binomial(n, a)) * b(a, k1) * b(n - a, k2)
                });
                if b(n, k) != c * s {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "id3" => {
            if k == 0 || n == 0 {
                return Err(BellError::InvalidRange(which.into()));
            }
            let lhs = b(n, k);
            let nested = id3_nested(n, k, xs);
            let chained = id3_by_id2(n, k, xs);
            Ok(lhs == nested && nested == chained)
        }
        other => Err(BellError::UnknownIdentity(other.to_string())),
    }
}

/// Literal nested sum for `B_{n,K}`, `K = k + 1`:
/// `1/K! sum_{a1 > a2 > ... > ak >= 1} C(n,a1)C(a1,a2)...C(a_{k-1},ak)
///  x_{n-a1} x_{a1-a2} ... x_{ak}`.
pub fn id3_nested(n: usize, blocks: usize, xs: &[Q]) -> Q {
    let x = |s: usize| if s == 0 { Q::zero() } else { xs.get(s - 1).cloned().unwrap_or_else(Q::zero) };
    let k = blocks - 1;
    fn rec(prev: usize, depth: usize, k: usize, acc: Q, x: &dyn Fn(usize) -> Q) -> Q {
        if depth == k {
            return acc * x(prev);
        }
        let lo = k - depth;
        let mut s = Q::zero();
        if prev == 0 {
            return s;
        }
        for a in lo..prev {
            let term = &acc * qb(binomial(prev, a)) * x(prev - a);
            if !term.is_zero() {
                s += rec(a, depth + 1, k, term, x);
            }
        }
        s
    }
    rec(n, 0, k, Q::one(), &x) / qb(factorial(blocks))
}

/// `B_{n,K}` by peeling one block at a time with id2 (`k1 = 1`).
pub fn id3_by_id2(n: usize, blocks: usize, xs: &[Q]) -> Q {
    let x = |s: usize| if s == 0 { Q::zero() } else { xs.get(s - 1).cloned().unwrap_or_else(Q::zero) };
    if blocks == 1 {
        return x(n);
    }
    let mut s = Q::zero();
    for a in 1..n {
        s += qb(binomial(n, a)) * x(n - a) * id3_by_id2(a, blocks - 1, xs);
    }
    s / qi(blocks as i64)
}

/// The solution `R` of `R = x G(R)`, to `order`.
pub fn lift_solve(g: &Fps, order: usize) -> Result<Fps, BellError> {
    if g.coeff(0).is_zero() {
        return Err(BellError::NotInvertible);
    }
    let g = g.truncate(order);
    // R is the compositional inverse of t / G(t)
    let t_over_g = Fps::x(order).div(&g)?;
    Ok(t_over_g.reversion()?)
}

/// `[x^n] F(R) = (1/n) [t^{n-1}] F'(t) G(t)^n`.
pub fn lift_coefficient(f: &Fps, g: &Fps, n: usize) -> Result<Q, BellError> {
    if n == 0 {
        return Err(BellError::InvalidRange("lift_coefficient needs n >= 1".into()));
    }
    if g.coeff(0).is_zero() {
        return Err(BellError::NotInvertible);
    }
    let m = n - 1;
    let gt = g.truncate(m);
    let fp = Fps::new(f.derive().coeffs().to_vec(), m);
    Ok(fp.mul(&gt.pow(n as u32)).coeff(m) / qi(n as i64))
}

/// `sum_n ([x^n] H G^n) x^n = H(R) / (1 - x G'(R))`.
pub fn corolift(h: &Fps, g: &Fps, order: usize) -> Result<Fps, BellError> {
    let r = lift_solve(g, order)?;
    let hr = h.truncate(order).compose(&r)?;
    let gpr = Fps::new(g.derive().coeffs().to_vec(), order).compose(&r)?;
    let den = Fps::one(order).sub(&gpr.shift_up(1).truncate(order));
    Ok(hr.div(&den)?)
}

/// `I0 = x / (1 - x B'(Z))` with `Z = x B(Z)` and `B = Dleq2 + x`.
pub fn coro_pipeline(order: usize) -> Result<Fps, BellError> {
    let b = crate::gfseries::series_dleq2(order).add(&Fps::x(order));
    let s = corolift(&Fps::one(order), &b, order)?;
    Ok(s.shift_up(1).truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::q;

    fn ones(n: usize) -> Vec<Q> {
        vec![Q::one(); n]
    }

    #[test]
    fn diagonal_and_small() {
        assert_eq!(bell_partial(3, 3, &ones(3)).unwrap(), qi(1));
        assert_eq!(bell_partial(3, 2, &ones(2)).unwrap(), qi(3));
        assert_eq!(bell_partial(4, 2, &ones(3)).unwrap(), qi(7));
        assert_eq!(bell_partial(0, 0, &[]).unwrap(), qi(1));
        assert_eq!(bell_partial(3, 0, &ones(3)).unwrap(), qi(0));
        assert_eq!(bell_partial(2, 3, &ones(3)).unwrap(), qi(0));
        assert!(bell_partial(5, 2, &ones(2)).is_err());
    }

    #[test]
    fn partition_oracle_small() {
        // B_{3,2}(x1,x2) = 3 x1 x2
        let xs = [q(2, 1), q(5, 3)];
        assert_eq!(bell_partial_by_partitions(3, 2, &xs), qi(3) * q(2, 1) * q(5, 3));
        assert_eq!(bell_partial_by_partitions(4, 2, &ones(3)), qi(7));
        // Stirling numbers of the second kind at all-ones
        let s: Vec<Q> = (0..=5).map(|k| bell_partial_by_partitions(5, k, &ones(5))).collect();
        assert_eq!(s, [0, 1, 15, 25, 10, 1].map(|v| qi(v)).to_vec());
    }

    #[test]
    fn faa_trivial_cases() {
        let id = [qi(0), qi(1)];
        for n in 1..6 {
            let h = faa_di_bruno(&id, &id, n).unwrap();
            assert_eq!(h, if n == 1 { qi(1) } else { qi(0) });
        }
        let expf = ones(8);
        for n in 1..8 {
            assert_eq!(faa_di_bruno(&expf, &id, n).unwrap(), qi(1));
        }
        assert_eq!(faa_di_bruno(&expf, &[qi(1), qi(1)], 3), Err(BellError::NonzeroG0));
    }

    #[test]
    fn identities_examples() {
        let xs = [q(1, 2), q(-3, 4), q(5, 7), qi(2), q(1, 9)];
        assert!(verify_bell_identity("lemma1a", 5, 2, &xs).unwrap());
        assert!(verify_bell_identity("id2", 4, 2, &xs).unwrap());
        assert!(verify_bell_identity("id1", 6, 3, &ones(6)).unwrap());
        assert!(verify_bell_identity("id1", 3, 3, &ones(3)).is_err());
        assert!(verify_bell_identity("bogus", 3, 1, &ones(3)).is_err());
    }

    #[test]
    fn lift_constant_and_catalan() {
        let r = lift_solve(&Fps::one(6), 6).unwrap();
        assert_eq!(r, Fps::x(6));
        let g = Fps::one(6).div(&Fps::from_ints(&[1, -1], 6)).unwrap();
        let r = lift_solve(&g, 6).unwrap();
        // fixed point R <- x G(R)
        let mut it = Fps::zero(6);
        for _ in 0..7 {
            it = g.compose(&it).unwrap().shift_up(1).truncate(6);
        }
        assert_eq!(r, it);
        assert_eq!(r, Fps::from_ints(&[0, 1, 1, 2, 5, 14, 42], 6));
        assert_eq!(lift_solve(&Fps::x(4), 4), Err(BellError::NotInvertible));
    }

    #[test]
    fn coro_matches_indecomposables() {
        assert_eq!(coro_pipeline(8).unwrap(), crate::gfseries::series_i0(8));
    }
}
