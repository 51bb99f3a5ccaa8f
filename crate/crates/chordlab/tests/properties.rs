use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chordlab::bell::*;
use chordlab::bijections::{theta, theta_inv, Seed};
use chordlab::chord::enumerate_diagrams;
use chordlab::diffeo::*;
use chordlab::fps::{FormalPowerSeries as Fps, Q};
use chordlab::gfseries::series_c;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn series(order: usize) -> impl Strategy<Value = Fps> {
    proptest::collection::vec(rational(), order + 1).prop_map(move |c| Fps::new(c, order))
}

/// Series with zero constant term and the given first coefficient rule.
fn series_val1(order: usize) -> impl Strategy<Value = Fps> {
    (nonzero_rational(), proptest::collection::vec(rational(), order - 1)).prop_map(move |(a1, rest)| {
        let mut c = vec![Q::zero(), a1];
        c.extend(rest);
        Fps::new(c, order)
    })
}

fn series_val_ge1(order: usize) -> impl Strategy<Value = Fps> {
    proptest::collection::vec(rational(), order).prop_map(move |rest| {
        let mut c = vec![Q::zero()];
        c.extend(rest);
        Fps::new(c, order)
    })
}

fn unit_series(order: usize) -> impl Strategy<Value = Fps> {
    (nonzero_rational(), proptest::collection::vec(rational(), order)).prop_map(move |(a0, rest)| {
        let mut c = vec![a0];
        c.extend(rest);
        Fps::new(c, order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in (0usize..=12).prop_flat_map(|o| (series(o), series(o), series(o)))) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.sub(&a), Fps::zero(a.order()));
    }

    #[test]
    fn leibniz((a, b) in (1usize..=12).prop_flat_map(|o| (series(o), series(o)))) {
        let o = a.order() - 1;
        let lhs = a.mul(&b).derive().truncate(o);
        let rhs = a.derive().mul(&b.truncate(o)).add(&a.truncate(o).mul(&b.derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule((f, g) in (2usize..=10).prop_flat_map(|o| (series(o), series_val_ge1(o)))) {
        let o = f.order() - 1;
        let lhs = f.compose(&g).unwrap().derive().truncate(o);
        let fp = f.derive();
        let rhs = fp.compose(&g.truncate(o)).unwrap().mul(&g.derive());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversion_two_sided(f in (1usize..=10).prop_flat_map(series_val1)) {
        let r = f.reversion().unwrap();
        let x = Fps::x(f.order());
        prop_assert_eq!(f.compose(&r).unwrap(), x.clone());
        prop_assert_eq!(r.compose(&f).unwrap(), x);
    }

    #[test]
    fn div_undoes_mul((a, b) in (0usize..=12).prop_flat_map(|o| (series(o), unit_series(o)))) {
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn exp_log_inverse(f in (1usize..=10).prop_flat_map(series_val_ge1)) {
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn bell_recurrence_matches_partitions(xs in proptest::collection::vec(rational(), 8), n in 0usize..=8, k in 0usize..=8) {
        prop_assume!(k <= n);
        prop_assert_eq!(bell_partial(n, k, &xs).unwrap(), bell_partial_by_partitions(n, k, &xs));
    }

    #[test]
    fn faa_di_bruno_is_composition(
        f in proptest::collection::vec(rational(), 9),
        g in proptest::collection::vec(rational(), 8),
    ) {
        let order = 8;
        let mut gc = vec![Q::zero()];
        gc.extend(g);
        // exponential coefficients -> ordinary
        let fact = |i: usize| Q::from_integer(factorial(i));
        let fo = Fps::new(f.iter().enumerate().map(|(i, c)| c / fact(i)).collect(), order);
        let go = Fps::new(gc.iter().enumerate().map(|(i, c)| c / fact(i)).collect(), order);
        let h = fo.compose(&go).unwrap();
        for n in 0..=order {
            prop_assert_eq!(faa_di_bruno(&f, &gc, n).unwrap(), h.coeff(n) * fact(n));
        }
    }

    #[test]
    fn lift_coefficient_matches_composition(
        (f, g) in (2usize..=10).prop_flat_map(|o| (series(o), unit_series(o))),
    ) {
        let order = f.order();
        let r = lift_solve(&g, order).unwrap();
        // R = x G(R)
        prop_assert_eq!(r.clone(), g.compose(&r).unwrap().shift_up(1).truncate(order));
        let fr = f.compose(&r).unwrap();
        for n in 1..=order {
            prop_assert_eq!(lift_coefficient(&f, &g, n).unwrap(), fr.coeff(n));
        }
    }

    #[test]
    fn theta_on_random_seeds(n in 1usize..=7, pick in any::<prop::sample::Index>()) {
        let seeds = Seed::all(n);
        let s = &seeds[pick.index(seeds.len())];
        let t = theta(s);
        prop_assert!(t.check().is_ok());
        prop_assert_eq!(t.size(), n);
        let mut labels = t.labels();
        labels.sort_unstable();
        prop_assert_eq!(labels, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(&theta_inv(&t).unwrap(), s);
    }

    #[test]
    fn diffeo_closed_form_and_amplitudes(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Diffeomorphism::random(m, &mut rng);
        let b = b_inverse_all(&d, 10).unwrap();
        for (n, bn) in b.iter().enumerate().skip(1) {
            prop_assert_eq!(&b_closed_form(&d, n), bn);
        }
        let kin = KinematicSample::random(4, &mut rng);
        for n in 1..=4 {
            match amplitude_recursion(&d, n, &kin) {
                Ok(v) => prop_assert_eq!(&v, &b[n]),
                Err(DiffeoError::VanishingDenominator) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

#[test]
fn lagrange_consistency() {
    let order = 12;
    let c = series_c(order + 1);
    let u = c.mul(&c).shift_down(1).unwrap();
    let r = u.reversion().unwrap();
    assert_eq!(u.compose(&r).unwrap(), Fps::x(order));
    assert_eq!(r.compose(&u).unwrap(), Fps::x(order));
}

#[test]
fn label_counts_preserved_by_enumeration() {
    for n in 0..=5 {
        for d in enumerate_diagrams(n).unwrap() {
            let w = d.to_word();
            let mut counts = vec![0; n];
            for l in w {
                counts[l] += 1;
            }
            assert!(counts.iter().all(|&c| c == 2));
        }
    }
}
