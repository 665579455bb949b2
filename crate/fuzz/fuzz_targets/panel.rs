#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = nci::io::read_panel(data) {
        let p = &f.panel;
        assert!(p.dates().windows(2).all(|d| d[0] < d[1]));
        if let Ok(r) = nci::netbuild::log_returns(p) {
            if let Ok(tree) = nci::netbuild::correlation_mst(&r) {
                assert_eq!(tree.edge_count() + 1, r.cols());
            }
        }
    }
});
