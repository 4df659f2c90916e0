//! Total entry points for fuzzing the parsers, shared by the cargo-fuzz
//! targets and the corpus replay test so both exercise identical code.
//!
//! Each function accepts arbitrary bytes and must never panic on malformed
//! input — errors are expected and swallowed. When a document *does* parse,
//! the function asserts the serialise→parse round trip, so a panic here is
//! always a genuine bug in the codec.

use crate::io::{
    observable_to_json, parse_observable, parse_triple, triple_to_json, RegionBoundary,
};

/// Fuzz surface for observable JSON documents.
pub fn observable_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(obs) = parse_observable(s) else {
        return;
    };
    let again = parse_observable(&observable_to_json(&obs))
        .expect("serialised valid observable must re-parse");
    assert_eq!(again.dim(), obs.dim());
    assert_eq!(again.outcomes(), obs.outcomes());
    for i in 0..obs.outcome_count() {
        assert!(
            again.effect(i).entry_distance(obs.effect(i)) < 1e-12,
            "effect {i} drifted in round trip"
        );
    }
}

/// Fuzz surface for covariance-triple JSON documents.
pub fn triple_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(triple) = parse_triple(s) else {
        return;
    };
    let again =
        parse_triple(&triple_to_json(&triple)).expect("serialised valid triple must re-parse");
    assert_eq!(again.group().order(), triple.group().order());
    assert_eq!(again.group().cayley(), triple.group().cayley());
    assert_eq!(again.dim(), triple.dim());
    assert_eq!(again.action().outcomes(), triple.action().outcomes());
}

/// Fuzz surface for region-boundary JSON documents.
pub fn boundary_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(boundary) = RegionBoundary::from_json(s) else {
        return;
    };
    let again = RegionBoundary::from_json(&boundary.to_json())
        .expect("serialised valid boundary must re-parse");
    assert_eq!(again, boundary);
}

/// Fuzz surface for region-boundary CSV tables.
pub fn boundary_csv(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(boundary) = RegionBoundary::from_csv(s) else {
        return;
    };
    // 17-significant-digit emission round-trips every finite f64 exactly.
    let again = RegionBoundary::from_csv(&boundary.to_csv())
        .expect("emitted CSV must re-parse");
    assert_eq!(again, boundary);
}
