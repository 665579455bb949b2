#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = nci::io::read_weights(data) {
        assert_eq!(f.labels.len(), f.weights.len());
        let sum: f64 = f.weights.values().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(f.labels.windows(2).all(|p| p[0] < p[1]));
    }
});
