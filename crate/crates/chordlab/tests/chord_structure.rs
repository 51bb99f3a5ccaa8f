use std::collections::HashMap;

use chordlab::chord::{enumerate_diagrams, ChordDiagram};

// smallest number of chords whose removal leaves a disconnected or empty diagram
fn deletion_connectivity(d: &ChordDiagram) -> usize {
    let n = d.n();
    if n == 0 {
        return 0;
    }
    let mut best = n;
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&c| mask & (1 << c) == 0).collect();
        if d.induced(&keep).components().len() >= 2 {
            best = k;
        }
    }
    best
}

#[test]
fn window_connectivity_equals_deletion_connectivity() {
    for n in 0..=6 {
        for d in enumerate_diagrams(n).unwrap() {
            assert_eq!(d.connectivity(), deletion_connectivity(&d), "{d}");
        }
    }
}

#[test]
fn connected_iff_intersection_graph_connected() {
    for n in 1..=6 {
        for d in enumerate_diagrams(n).unwrap() {
            assert_eq!(d.is_connected(), d.components().len() == 1, "{d}");
        }
    }
}

#[test]
fn reasons_are_laminar() {
    for n in 1..=7 {
        for d in enumerate_diagrams(n).unwrap() {
            let rs = d.reasons_and_cuts();
            if d.connectivity() == 1 && n >= 2 {
                assert!(!rs.is_empty(), "{d}");
            }
            for a in &rs {
                for b in &rs {
                    assert!(a.disjoint(b) || a.contains(b) || b.contains(a), "{d}: {a:?} {b:?}");
                }
            }
        }
    }
}

#[test]
fn removing_a_cut_disconnects() {
    for d in enumerate_diagrams(5).unwrap() {
        for r in d.reasons_and_cuts() {
            let keep: Vec<usize> = (0..d.n()).filter(|&c| c != r.cut).collect();
            assert!(d.induced(&keep).components().len() >= 2, "{d}");
        }
    }
}

#[test]
fn minimal_and_maximal_reasons() {
    for d in enumerate_diagrams(6).unwrap() {
        let all = d.reasons_and_cuts();
        let mins = d.minimal_reasons();
        let maxs = d.maximal_reasons();
        assert_eq!(all.is_empty(), mins.is_empty());
        for r in &all {
            assert!(mins.iter().any(|m| r.contains(m)));
            assert!(maxs.iter().any(|m| m.contains(r)));
        }
    }
}

#[test]
fn labelled_intersection_graph_determines_connected_diagram() {
    for n in 1..=6 {
        let mut seen: HashMap<Vec<(usize, usize)>, ChordDiagram> = HashMap::new();
        for d in enumerate_diagrams(n).unwrap().filter(|d| d.is_connected()) {
            let key = d.intersection_graph().labelled_edges();
            if let Some(prev) = seen.insert(key, d.clone()) {
                panic!("{prev} and {d} share a labelled intersection graph");
            }
        }
    }
}

#[test]
fn root_labelled_one() {
    for d in enumerate_diagrams(5).unwrap() {
        let g = d.intersection_graph();
        assert_eq!(g.labels[0], 1);
        let mut l = g.labels.clone();
        l.sort_unstable();
        assert_eq!(l, (1..=5).collect::<Vec<_>>());
    }
}

#[test]
fn decomposition_roundtrip_exhaustive() {
    for n in 1..=6 {
        for d in enumerate_diagrams(n).unwrap() {
            let (core, dang) = d.root_decomposition().unwrap();
            assert!(core.is_connected());
            let rc = d.root_component().unwrap();
            for (k, &c) in rc.iter().enumerate() {
                assert_eq!(d.dangling(c).unwrap(), dang[k]);
            }
            assert_eq!(ChordDiagram::assemble(&core, &dang), d);
        }
    }
}
