#![no_main]

use libfuzzer_sys::fuzz_target;
use nci::io::{read_edge_list, write_edge_list};

// Any edge list that parses must survive a write/read cycle unchanged.
fuzz_target!(|data: &[u8]| {
    let labels: Vec<String> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
    if let Ok(e) = read_edge_list(data, &labels) {
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &e.graph, &labels, e.intensities.as_ref()).unwrap();
        assert_eq!(read_edge_list(buf.as_slice(), &labels).unwrap(), e);
    }
});
