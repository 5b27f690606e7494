use std::path::PathBuf;

use num_bigint::BigInt;
use nrc_core::input::{load_field, load_ring};
use nrc_core::picard::picard_group;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn shipped_fields_load() {
    let disc = |f: &str| load_field(&root().join("fields").join(f)).unwrap().field.disc().clone();
    assert_eq!(disc("example1.toml"), BigInt::from(-2840));
    assert_eq!(disc("example2.toml"), BigInt::from(18000));
    assert_eq!(disc("gauss.toml"), BigInt::from(-4));
}

#[test]
fn shipped_rings_give_picard_groups() {
    for f in ["example1.toml", "example2.toml"] {
        let spec = load_ring(&root().join("rings").join(f)).unwrap();
        let cl = spec.classgroup(None).unwrap();
        let pic = picard_group(spec.k(), &spec.ring, &cl).unwrap();
        assert_eq!(pic.group().invariants_i64(), vec![2], "{f}");
        assert!(spec.class_field_poly.is_some());
    }
}

#[test]
fn corrupted_witness_is_rejected() {
    let path = root().join("rings/example2.toml");
    let text = std::fs::read_to_string(&path).unwrap().replace("gamma = [3, 1, 3, 0]", "gamma = [3, 1, 3, 1]");
    let spec = nrc_core::input::parse_ring(&text, &path).unwrap();
    assert!(spec.classgroup(None).is_err());
}
