#![no_main]

use libfuzzer_sys::fuzz_target;
use nci::degree_solver::SolverMode;
use nci::Transformation;

// Command-line option values: parsing then printing must reproduce a value that parses the same.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = s.parse::<Transformation>() {
        assert_eq!(t.to_string().parse::<Transformation>().unwrap(), t);
    }
    if let Ok(m) = s.parse::<SolverMode>() {
        assert_eq!(m.to_string().parse::<SolverMode>().unwrap(), m);
    }
});
