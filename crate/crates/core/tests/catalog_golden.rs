use monodromy_core::catalog::{export_json_lines, EXPORT_BOUND, EXPORT_PRIMES};

#[test]
fn shipped_catalog_matches_generator() {
    let shipped = include_str!("../data/catalog.jsonl");
    let fresh = export_json_lines(&EXPORT_PRIMES, EXPORT_BOUND).unwrap();
    let shipped: Vec<&str> = shipped.lines().collect();
    let fresh: Vec<&str> = fresh.lines().collect();
    assert_eq!(shipped.len(), fresh.len());
    for (k, (a, b)) in shipped.iter().zip(&fresh).enumerate() {
        assert_eq!(a, b, "line {}", k + 1);
    }
}
