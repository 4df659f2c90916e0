//! Replays the checked-in fuzz corpus through the fuzzing entry points on
//! stable Rust, so corpus regressions are caught by `cargo test` without
//! needing the nightly fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

fn corpus_dir(target: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target)
}

fn replay(target: &str, entry: fn(&[u8])) {
    let dir = corpus_dir(target);
    let entries = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus directory {} missing: {e}", dir.display()));
    let mut count = 0usize;
    for entry_path in entries {
        let path = entry_path.expect("read corpus entry").path();
        if !path.is_file() {
            continue;
        }
        let bytes = fs::read(&path).expect("read corpus file");
        entry(&bytes);
        count += 1;
    }
    assert!(count > 0, "no corpus seeds found in {}", dir.display());
}

#[test]
fn observable_json_corpus_replays() {
    replay("observable_json", covmur::fuzzing::observable_json);
}

#[test]
fn triple_json_corpus_replays() {
    replay("triple_json", covmur::fuzzing::triple_json);
}

#[test]
fn boundary_json_corpus_replays() {
    replay("boundary_json", covmur::fuzzing::boundary_json);
}

#[test]
fn boundary_csv_corpus_replays() {
    replay("boundary_csv", covmur::fuzzing::boundary_csv);
}
