//! Named generating series and the functional equations tying them together.
//!
//! Every constructor returns a series of exactly the requested order; any
//! extra precision needed internally (divisions by `x`, reversion) is taken
//! care of here.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fps::{qi, FormalPowerSeries as Fps, Q};

/// Largest order accepted by [`verify_identity`].
pub const MAX_VERIFY_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesName {
    D,
    C,
    C1,
    C2,
    I,
    I0,
    Dleq2,
    A,
    BLemmaB,
    S,
    Z,
    BChapter3,
}

impl SeriesName {
    pub const ALL: [SeriesName; 12] = [
        SeriesName::D,
        SeriesName::C,
        SeriesName::C1,
        SeriesName::C2,
        SeriesName::I,
        SeriesName::I0,
        SeriesName::Dleq2,
        SeriesName::A,
        SeriesName::BLemmaB,
        SeriesName::S,
        SeriesName::Z,
        SeriesName::BChapter3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesName::D => "D",
            SeriesName::C => "C",
            SeriesName::C1 => "C1",
            SeriesName::C2 => "C2",
            SeriesName::I => "I",
            SeriesName::I0 => "I0",
            SeriesName::Dleq2 => "Dleq2",
            SeriesName::A => "A",
            SeriesName::BLemmaB => "B_lemmaB",
            SeriesName::S => "S",
            SeriesName::Z => "Z",
            SeriesName::BChapter3 => "B_chapter3",
        }
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("unknown series {0:?}")]
    UnknownSeries(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("order {0} exceeds {MAX_VERIFY_ORDER}")]
    OrderTooLarge(usize),
}

impl FromStr for SeriesName {
    type Err = GfError;

    fn from_str(s: &str) -> Result<Self, GfError> {
        let t = s.trim();
        SeriesName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str().eq_ignore_ascii_case(t))
            .or(match t {
                "C>=2" | "Cge2" => Some(SeriesName::C2),
                "B" => Some(SeriesName::BLemmaB),
                _ => None,
            })
            .ok_or_else(|| GfError::UnknownSeries(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSeries {
    pub name: SeriesName,
    pub series: Fps,
}

impl NamedSeries {
    pub fn order(&self) -> usize {
        self.series.order()
    }
}

pub fn named(name: SeriesName, order: usize) -> NamedSeries {
    NamedSeries { name, series: series(name, order) }
}

static CACHE: OnceLock<Mutex<HashMap<(SeriesName, usize), Fps>>> = OnceLock::new();

/// Memoized constructor dispatch.
pub fn series(name: SeriesName, order: usize) -> Fps {
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache poisoned").get(&(name, order)) {
        return s.clone();
    }
    let s = match name {
        SeriesName::D => series_d(order),
        SeriesName::C => series_c(order),
        SeriesName::C1 => series_c1(order),
        SeriesName::C2 => series_c2(order),
        SeriesName::I => series_i0(order).add(&Fps::one(order)),
        SeriesName::I0 => series_i0(order),
        SeriesName::Dleq2 => series_dleq2(order),
        SeriesName::A => series_a(order),
        SeriesName::BLemmaB => series_b_lemma_b(order),
        SeriesName::S => series_s(order),
        SeriesName::Z => series_z(order),
        SeriesName::BChapter3 => series_dleq2(order).add(&Fps::x(order)),
    };
    cache.lock().expect("cache poisoned").insert((name, order), s.clone());
    s
}

/// `(2n-1)!!` for `n = 0..=order`.
pub fn double_factorials(order: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::one()];
    for n in 1..=order {
        let next = &v[n - 1] * BigInt::from(2 * n - 1);
        v.push(next);
    }
    v
}

pub fn series_d(order: usize) -> Fps {
    Fps::from_bigints(&double_factorials(order), order)
}

/// Connected diagram counts `C_0 = 0, C_1 = 1, ...` as integers, from
/// `2xCC' = C(1+C) - x`, i.e. `C_n = sum_{i+j=n} (2j-1) C_i C_j` for `n >= 2`.
pub fn connected_counts(order: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); order + 1];
    if order >= 1 {
        c[1] = BigInt::one();
    }
    for n in 2..=order {
        let mut s = BigInt::zero();
        for j in 1..n {
            s += &c[n - j] * &c[j] * BigInt::from(2 * j - 1);
        }
        c[n] = s;
    }
    c
}

pub fn series_c(order: usize) -> Fps {
    Fps::from_bigints(&connected_counts(order), order)
}

fn xd(s: &Fps) -> Fps {
    // x * s'
    s.derive().shift_up(1)
}

/// `2xC' - C`.
pub fn two_x_dc_minus_c(c: &Fps) -> Fps {
    xd(c).scale(&qi(2)).sub(c)
}

/// `C>=2 = (u - C) o u^{-1}` with `u = C^2/x`.
pub fn series_c2(order: usize) -> Fps {
    let c = series_c(order + 1);
    let u = c.mul(&c).shift_down(1).expect("C^2 has valuation 2");
    let c = c.truncate(order);
    let r = u.reversion().expect("u = x + ...");
    u.sub(&c).compose(&r).expect("r(0) = 0")
}

pub fn series_c1(order: usize) -> Fps {
    series_c(order).sub(&series_c2(order))
}

pub fn series_i0(order: usize) -> Fps {
    Fps::one(order).sub(&series_d(order).recip().expect("D(0) = 1"))
}

pub fn series_z(order: usize) -> Fps {
    let i0 = series_i0(order);
    let den = Fps::one(order).sub(&i0);
    Fps::x(order).div(&den.mul(&den)).expect("unit denominator")
}

pub fn series_dleq2(order: usize) -> Fps {
    let c = series_c(order);
    Fps::one(order)
        .add(&c)
        .add(&c.mul(&c))
        .add(&c.sub(&Fps::x(order)))
}

pub fn series_a(order: usize) -> Fps {
    let one_c = Fps::one(order).add(&series_c(order));
    one_c.mul(&one_c)
}

/// `x + 4(xC2' - C2)^2 / (x - (2xC2' - C2))`.
pub fn series_b_lemma_b(order: usize) -> Fps {
    let c2 = series_c2(order + 1);
    let x = Fps::x(order + 1);
    let a = xd(&c2).sub(&c2);
    let num = a.mul(&a).scale(&qi(4));
    let den = x.sub(&two_x_dc_minus_c(&c2));
    x.add(&num.div(&den).expect("denominator has valuation 1"))
        .truncate(order)
}

/// `1/(1 - C2/x)`.
pub fn series_s(order: usize) -> Fps {
    let c2x = series_c2(order + 1).shift_down(1).expect("C2(0) = 0");
    Fps::one(order).sub(&c2x).recip().expect("unit")
}

/// Outcome of an identity check: `first_failure` is the first coefficient
/// index at which the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub order: usize,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

impl IdentityReport {
    pub fn compare(name: &str, lhs: &Fps, rhs: &Fps, order: usize) -> Self {
        let first_failure = (0..=order).find(|&i| lhs.coeff(i) != rhs.coeff(i));
        IdentityReport {
            name: name.to_string(),
            order,
            holds: first_failure.is_none(),
            first_failure,
        }
    }
}

pub const IDENTITIES: [&str; 10] = [
    "lemma_cd_i",
    "lemma_cd_ii",
    "lemma_cd_iii",
    "lemma_inde",
    "coro",
    "endcoro",
    "c11eq",
    "prop_2connected",
    "lagrange",
    "dleq2_enumeration",
];

/// Checks one named functional equation to `order`.
pub fn verify_identity(name: &str, order: usize) -> Result<IdentityReport, GfError> {
    if order > MAX_VERIFY_ORDER {
        return Err(GfError::OrderTooLarge(order));
    }
    let n = order;
    let x = Fps::x(n);
    let one = Fps::one(n);
    let (lhs, rhs) = match name {
        // D = 1 + C(xD^2)
        "lemma_cd_i" => {
            let d = series_d(n);
            let arg = d.mul(&d).shift_up(1).truncate(n);
            (d.clone(), one.add(&series_c(n).compose(&arg).expect("val 1")))
        }
        // D = 1 + xD + 2x^2 D'
        "lemma_cd_ii" => {
            let d = series_d(n);
            let rhs = one
                .add(&d.shift_up(1).truncate(n))
                .add(&d.derive().shift_up(2).scale(&qi(2)).truncate(n));
            (d, rhs)
        }
        // C = x / (1 - (2xC' - C)) together with 2xCC' = C(1+C) - x
        "lemma_cd_iii" => {
            let c = series_c(n);
            let q = x.div(&one.sub(&two_x_dc_minus_c(&c))).expect("unit");
            let l2 = xd(&c).mul(&c).scale(&qi(2));
            let r2 = c.mul(&one.add(&c)).sub(&x);
            if l2 != r2 {
                let r = IdentityReport::compare(name, &l2, &r2, n);
                return Ok(r);
            }
            (c, q)
        }
        // I0 = x + 2x^2 I0' / (1 - I0)
        "lemma_inde" => {
            let i0 = series_i0(n);
            let t = i0.derive().shift_up(2).scale(&qi(2)).truncate(n);
            (i0.clone(), x.add(&t.div(&one.sub(&i0)).expect("unit")))
        }
        // I0 = x / (1 - x B'(Z)) with B = Dleq2 + x
        "coro" => {
            let b = series_dleq2(n).add(&x);
            let bz = b.derive().compose(&series_z(n)).expect("Z(0) = 0");
            let den = one.sub(&bz.shift_up(1).truncate(n));
            (series_i0(n), x.div(&den).expect("unit"))
        }
        // [x^k] A^k = [x^{k+1}] I0
        "endcoro" => {
            let a = series_a(n);
            let i0 = series_i0(n + 1);
            let mut l = Fps::zero(n);
            let mut r = Fps::zero(n);
            let mut p = Fps::one(n);
            for k in 0..=n {
                l.set_coeff(k, p.coeff(k));
                r.set_coeff(k, i0.coeff(k + 1));
                p = p.mul(&a);
            }
            (l, r)
        }
        "c11eq" => {
            let c1 = series_c1(n);
            let rhs = c11_rhs(n);
            (c1, rhs)
        }
        // C = C^2/x - C2(C^2/x)
        "prop_2connected" => {
            let c = series_c(n + 1);
            let u = c.mul(&c).shift_down(1).expect("val 2");
            let c = c.truncate(n);
            let rhs = u.sub(&series_c2(n).compose(&u).expect("val 1"));
            (c, rhs)
        }
        // reversion(C^2/x) composed back gives x on both sides
        "lagrange" => {
            let c = series_c(n + 1);
            let u = c.mul(&c).shift_down(1).expect("val 2");
            let r = u.reversion().expect("reversible");
            let a = u.compose(&r).expect("val 1");
            let b = r.compose(&u).expect("val 1");
            if a != x {
                return Ok(IdentityReport::compare(name, &a, &x, n));
            }
            (b, x.clone())
        }
        // Dleq2 counted by enumeration (diagrams with at most 2 components)
        "dleq2_enumeration" => {
            let m = n.min(7);
            let mut counts = vec![BigInt::zero(); m + 1];
            counts[0] = BigInt::one();
            for (k, slot) in counts.iter_mut().enumerate().skip(1) {
                let c = crate::chord::enumerate_diagrams(k)
                    .expect("k <= 7")
                    .filter(|d| d.components().len() <= 2)
                    .count();
                *slot = BigInt::from(c);
            }
            let l = Fps::from_bigints(&counts, m);
            (l, series_dleq2(m))
        }
        _ => return Err(GfError::UnknownIdentity(name.to_string())),
    };
    let ord = lhs.order().min(rhs.order());
    Ok(IdentityReport::compare(name, &lhs, &rhs, ord))
}

/// Right-hand side of the connectivity-1 decomposition
/// `C1 = x[1 + (2xC'-C)^2/(1-(2xC'-C)) + 2C2 + (2xC1'-C1) - x - 4(xC2'-C2)^2/(x-(2xC2'-C2))]`.
pub fn c11_rhs(order: usize) -> Fps {
    let n = order;
    let one = Fps::one(n);
    let c = series_c(n);
    let c1 = series_c1(n);
    let c2 = series_c2(n);
    let u = two_x_dc_minus_c(&c);
    let t1 = u.mul(&u).div(&one.sub(&u)).expect("unit");
    let t2 = c2.scale(&qi(2));
    let t3 = two_x_dc_minus_c(&c1);
    let b = series_b_lemma_b(n);
    // the last two bracket terms add up to -B
    let inner = one.add(&t1).add(&t2).add(&t3).sub(&b);
    inner.shift_up(1).truncate(n)
}

/// A labelled table row: exact coefficients from `x^0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub label: &'static str,
    pub coeffs: Vec<Q>,
}

fn row(label: &'static str, s: &Fps, len: usize) -> TableRow {
    TableRow { label, coeffs: (0..len).map(|i| s.coeff(i)).collect() }
}

/// First terms of `C`, `C1`, `C2` and the pieces of the connectivity-1
/// decomposition; rows have 9 or 7/8 entries.
pub fn table1() -> Vec<TableRow> {
    let n = 10;
    let x = Fps::x(n);
    let one = Fps::one(n);
    let c = series_c(n);
    let c1 = series_c1(n);
    let c2 = series_c2(n);
    let u = two_x_dc_minus_c(&c);
    let r8 = u.mul(&u).div(&one.sub(&u)).expect("unit").shift_up(1);
    let r9 = c2.scale(&qi(2)).shift_up(1);
    let r10 = two_x_dc_minus_c(&c1).shift_up(1);
    let r11 = series_b_lemma_b(n).mul(&x);
    vec![
        row("C", &c, 9),
        row("C1", &c1, 9),
        row("C2", &c2, 9),
        row("xC'", &xd(&c), 7),
        row("xC1'", &xd(&c1), 7),
        row("xC2'", &xd(&c2), 7),
        row("2xC'-C", &u, 7),
        row("x(2xC'-C)^2/(1-(2xC'-C))", &r8, 8),
        row("2xC2", &r9, 8),
        row("x(2xC1'-C1)", &r10, 8),
        row("xB", &r11, 9),
    ]
}

/// Composition `C2(t)/t^2` at `t = C^2/x` and its products.
pub fn table2() -> Vec<TableRow> {
    let n = 9;
    let c = series_c(n + 1);
    let u = c.mul(&c).shift_down(1).expect("val 2");
    let c = c.truncate(n);
    let g = series_c2(n + 2).shift_down(2).expect("val 2");
    let r2 = g.compose(&u).expect("val 1");
    let c2sq = c.mul(&c);
    let r3 = c2sq.mul(&r2);
    let cmx = c.sub(&Fps::x(n)).shift_down(1).expect("val 1");
    let r4 = cmx.mul(&r3);
    vec![
        row("C^2/x", &u, 7),
        row("[C2(t)/t^2]_{t=C^2/x}", &r2, 7),
        row("C^2*[C2(t)/t^2]", &r3, 7),
        row("((C-x)/x)*C^2*[C2(t)/t^2]", &r4, 7),
    ]
}

/// Building blocks for the asymptotics of 2-connected diagrams.
pub fn table3() -> Vec<TableRow> {
    let n = 10;
    let x = Fps::x(n + 1);
    let s = series_s(n + 1);
    let sx = s.add(&x);
    let sx2 = sx.mul(&sx);
    let r3 = sx2.sub(&Fps::one(n + 1)).shift_down(1).expect("val 1").scale(&Q::new(1.into(), 2.into()));
    let c2s = series_c2(n).mul(&s.truncate(n));
    let r5 = Fps::monomial(Q::one(), 2, n + 2)
        .div(&series_c2(n + 2).mul(&series_s(n + 2)))
        .expect("val 2");
    let shifted = r3.sub(&Fps::constant(qi(2), r3.order()));
    let r6 = shifted.neg().exp().expect("zero constant");
    vec![
        row("S", &s, 7),
        row("(S+x)^2", &sx2, 7),
        row("(1/2x)[(S+x)^2-1]", &r3, 6),
        row("C2*S", &c2s, 8),
        row("x^2/(C2*S)", &r5, 6),
        row("e^2*exp(-(1/2x)[(S+x)^2-1])", &r6, 6),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::q;

    fn ints(s: &Fps, range: std::ops::RangeInclusive<usize>) -> Vec<i64> {
        range.map(|i| s.coeff(i).to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn d_coefficients() {
        let d = series_d(6);
        assert_eq!(ints(&d, 0..=4), vec![1, 1, 3, 15, 105]);
        assert_eq!(ints(&d, 6..=6), vec![10395]);
    }

    #[test]
    fn c_coefficients() {
        let c = series_c(8);
        assert_eq!(ints(&c, 1..=6), vec![1, 1, 4, 27, 248, 2830]);
        assert_eq!(ints(&c, 8..=8), vec![593859]);
    }

    #[test]
    fn c2_and_c1() {
        assert_eq!(ints(&series_c2(6), 2..=6), vec![1, 1, 7, 63, 729]);
        assert_eq!(ints(&series_c1(7), 3..=7), vec![3, 20, 185, 2101, 28119]);
        assert_eq!(series_c2(6).order(), 6);
    }

    #[test]
    fn other_named_series() {
        assert_eq!(ints(&series_i0(5), 1..=5), vec![1, 2, 10, 74, 706]);
        assert_eq!(ints(&series_a(7), 0..=7), vec![1, 2, 3, 10, 63, 558, 6226, 82836]);
        let z = series_z(5);
        let d = series_d(5);
        assert_eq!(z, d.mul(&d).shift_up(1).truncate(5));
        assert_eq!(ints(&z, 1..=5), vec![1, 2, 7, 36, 249]);
        assert_eq!(series_dleq2(7).add(&Fps::x(7)), series_a(7));
    }

    #[test]
    fn b_lemma_b() {
        let b = series_b_lemma_b(7);
        assert_eq!(ints(&b, 0..=7), vec![0, 1, 0, 4, 28, 288, 3552, 50692]);
    }

    #[test]
    fn s_rows() {
        let s = series_s(6);
        assert_eq!(ints(&s, 0..=6), vec![1, 1, 2, 10, 82, 898, 12018]);
    }

    #[test]
    fn verify_all_identities() {
        for name in IDENTITIES {
            let r = verify_identity(name, 10).unwrap();
            assert!(r.holds, "{name} fails at {:?}", r.first_failure);
        }
        assert!(verify_identity("nope", 4).is_err());
        assert!(verify_identity("lemma_cd_i", 65).is_err());
    }

    #[test]
    fn endcoro_order_eight() {
        let r = verify_identity("endcoro", 8).unwrap();
        assert!(r.holds);
        assert_eq!(r.order, 8);
    }

    #[test]
    fn c11_rhs_coefficients() {
        let r = c11_rhs(7);
        assert_eq!(ints(&r, 1..=7), vec![1, 0, 3, 20, 185, 2101, 28119]);
    }

    #[test]
    fn cache_reproducible() {
        assert_eq!(series(SeriesName::C2, 9), series_c2(9));
        assert_eq!(series(SeriesName::C2, 9), series(SeriesName::C2, 9));
        assert_eq!("c2".parse::<SeriesName>().unwrap(), SeriesName::C2);
        assert_eq!(series(SeriesName::I, 3).coeff(0), q(1, 1));
    }
}
