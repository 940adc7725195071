#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::herald::{DetectionPattern, PatternJson};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = DetectionPattern::from_json_str(text) {
        let j = serde_json::to_string(&PatternJson::from(&p)).unwrap();
        assert_eq!(DetectionPattern::from_json_str(&j).unwrap(), p);
    }
});
