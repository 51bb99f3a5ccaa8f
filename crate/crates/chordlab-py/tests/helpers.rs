use chordlab_py::*;

#[test]
fn series_strings() {
    assert_eq!(series_coeffs("C", 4).unwrap(), ["0", "1", "1", "4", "27"]);
    assert!(series_coeffs("nope", 4).is_err());
}

#[test]
fn counts_and_nabla() {
    let c = class_counts(4).unwrap();
    assert_eq!(c["connected"], 27);
    let (c1, c2, k) = nabla_triple("2: 3 4 1 2").unwrap();
    assert_eq!(nabla_inverse(&c1, &c2, k).unwrap(), "2: 3 4 1 2");
}

#[test]
fn alien_and_diffeo() {
    let (body, off) = alien("C", 2).unwrap();
    assert_eq!(body, ["1", "-5/2", "-43/8"]);
    assert_eq!(off, "-1");
    let a: Vec<String> = ["1", "1/2", "1/3"].map(String::from).to_vec();
    assert_eq!(b_values(&a, 5).unwrap(), b_closed(&a, 5).unwrap());
    assert!(b_values(&["2".to_string()], 3).is_err());
}
