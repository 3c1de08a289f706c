#![no_main]

use kdclub::io::{parse_bytes, write_dimacs, Format, ParseOptions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let options = ParseOptions {
        max_vertices: 1 << 12,
        ..ParseOptions::default()
    };
    let Ok(instance) = parse_bytes(data, Format::Auto, &options) else {
        return;
    };
    let g = &instance.graph;
    assert_eq!(instance.labels.len(), g.order());
    assert!(2 * g.edge_count() <= g.order() * g.order().saturating_sub(1));

    let mut text = Vec::new();
    write_dimacs(g, &mut text).unwrap();
    let again = parse_bytes(&text, Format::Dimacs, &options).unwrap();
    assert_eq!(again.graph.snapshot(), g.snapshot());
});
