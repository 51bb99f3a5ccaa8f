use std::collections::HashSet;

use chordlab::bijections::{nabla, nabla_inv, phi, phi_inv, theta, theta_inv, RootShareTriple, Seed};
use chordlab::chord::{enumerate_diagrams, ChordDiagram};
use chordlab::fps::FormalPowerSeries as Fps;
use chordlab::gfseries::{connected_counts, series_dleq2, series_z};

fn connected(n: usize) -> Vec<ChordDiagram> {
    enumerate_diagrams(n).unwrap().filter(|d| d.is_connected()).collect()
}

#[test]
fn phi_roundtrip_and_image() {
    let c = connected_counts(6);
    for n in 2..=6 {
        let mut image = HashSet::new();
        for d in connected(n) {
            let p = phi(&d).unwrap();
            assert_eq!(p.n(), n);
            assert!(p.is_indecomposable());
            assert_eq!(p.components().len(), 2);
            assert_eq!(phi_inv(&p).unwrap(), d);
            image.insert(p);
        }
        assert_eq!(image.len() as u64, u64::try_from(&c[n]).unwrap());
        // the image is everything indecomposable with two components
        let target: HashSet<ChordDiagram> = enumerate_diagrams(n)
            .unwrap()
            .filter(|d| d.is_indecomposable() && d.components().len() == 2)
            .collect();
        assert_eq!(image, target);
    }
}

#[test]
fn phi_image_sizes() {
    let sizes: Vec<usize> = (2..=4)
        .map(|n| connected(n).iter().map(|d| phi(d).unwrap()).collect::<HashSet<_>>().len())
        .collect();
    assert_eq!(sizes, vec![1, 4, 27]);
}

#[test]
fn nabla_roundtrip() {
    for n in 2..=6 {
        for d in connected(n) {
            let t = nabla(&d).unwrap();
            assert!(t.c1.is_connected() && t.c2.is_connected());
            assert_eq!(t.c1.n() + t.c2.n(), n);
            assert!(t.k >= 1 && t.k < 2 * t.c2.n());
            assert_eq!(nabla_inv(&t).unwrap(), d);
        }
    }
}

#[test]
fn every_triple_is_hit() {
    // nabla_inv o nabla covers all triples: compare counts and inverse image
    let c = connected_counts(8);
    for n in 2..=8usize {
        let mut total = 0u64;
        for b in 1..n {
            let a = n - b;
            total += u64::try_from(&c[a]).unwrap() * u64::try_from(&c[b]).unwrap() * (2 * b as u64 - 1);
        }
        assert_eq!(total, u64::try_from(&c[n]).unwrap());
    }
    for n in 2..=5 {
        let mut seen = HashSet::new();
        for a in 1..n {
            let b = n - a;
            for c1 in connected(a) {
                for c2 in connected(b) {
                    for k in 1..2 * b {
                        let t = RootShareTriple { c1: c1.clone(), c2: c2.clone(), k };
                        let d = nabla_inv(&t).unwrap();
                        assert!(d.is_connected());
                        assert_eq!(nabla(&d).unwrap(), t);
                        seen.insert(d);
                    }
                }
            }
        }
        assert_eq!(seen.len(), connected(n).len());
    }
}

#[test]
fn theta_roundtrip_and_counts() {
    let z = series_z(6);
    for n in 1..=6 {
        let mut image = HashSet::new();
        for s in Seed::all(n) {
            let t = theta(&s);
            t.check().unwrap();
            assert_eq!(t.size(), n);
            let mut labels = t.labels();
            labels.sort_unstable();
            assert_eq!(labels, (0..n).collect::<Vec<_>>());
            assert_eq!(theta_inv(&t).unwrap(), s, "{s}");
            image.insert(t);
        }
        assert_eq!(Fps::from_ints(&[image.len() as i64], 0).coeff(0), z.coeff(n));
    }
}

#[test]
fn z_tree_functional_equation() {
    // a vertex is a nonempty stack with a <=2-component structure on its children
    let n = 9;
    let z = series_z(n);
    let x = Fps::x(n);
    let stacks = x.div(&Fps::one(n).sub(&x)).unwrap();
    let rhs = stacks.mul(&series_dleq2(n).compose(&z).unwrap());
    assert_eq!(z, rhs);
    let expect = [0, 1, 2, 7, 36, 249, 2190, 23535];
    for (i, e) in expect.iter().enumerate() {
        assert_eq!(z.coeff(i), Fps::from_ints(&[*e], 0).coeff(0));
    }
}
