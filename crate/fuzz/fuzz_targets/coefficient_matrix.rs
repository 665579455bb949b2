#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = nci::io::read_coefficient_matrix(data) {
        let m = nci::netbuild::symmetrize(&c);
        let _ = nci::netbuild::threshold_graph(&m, 0.0);
    }
});
