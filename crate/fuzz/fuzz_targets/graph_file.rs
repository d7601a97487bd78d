#![no_main]

use condensation::io::{parse_graph_file, write_graph_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = parse_graph_file(text) else {
        return;
    };
    // anything accepted must survive a write/parse round trip
    let written = write_graph_file(&doc.graph, doc.marking.as_ref());
    let again = parse_graph_file(&written).expect("written graph file parses");
    assert_eq!(again.graph, doc.graph);
    assert_eq!(again.marking, doc.marking);
});
