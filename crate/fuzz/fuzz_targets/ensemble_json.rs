#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::Ensemble;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = Ensemble::from_json_str(text) {
        let again = Ensemble::from_json_str(&e.to_json().to_string()).expect("dump parses");
        assert_eq!(e, again);
    }
});
