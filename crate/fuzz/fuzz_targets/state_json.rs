#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::PureState;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = PureState::from_json_str(text) {
        // Canonical output parses back to the same state.
        let again = PureState::from_json_str(&s.to_json().to_string()).expect("dump parses");
        assert_eq!(s, again);
    }
});
