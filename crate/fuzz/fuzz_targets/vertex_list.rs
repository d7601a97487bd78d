#![no_main]

use condensation::io::parse_vertex_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(labels) = parse_vertex_list(text) {
        assert!(labels.iter().all(|l| !l.is_empty() && !l.contains(',')));
        assert_eq!(parse_vertex_list(&labels.join(",")).expect("joined list parses"), labels);
    }
});
