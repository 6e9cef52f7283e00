use std::path::PathBuf;

use orbitforge::catalog;
use orbitforge::io::{parse_ring, RingDoc};

#[test]
fn bundled_files_match_the_catalog() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for (name, ring, f) in catalog::all() {
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let (r, g) = parse_ring(&text).unwrap();
        assert_eq!(r.carrier(), ring.carrier(), "{name}");
        assert_eq!(r.bracket_entries(), ring.bracket_entries(), "{name}");
        assert_eq!(g.as_ref(), Some(&f), "{name}");
        let doc: RingDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.format, 1);
    }
}
