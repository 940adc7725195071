#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::source::SourceSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = SourceSpec::from_json_str(text) {
        // Validated specs always build.
        let e = spec.build().expect("validated source builds");
        let total: f64 = e.components().iter().map(|(w, _)| w).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
});
