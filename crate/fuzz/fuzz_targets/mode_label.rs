#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::ModeLabel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(l) = text.parse::<ModeLabel>() {
        assert_eq!(l.to_string().parse::<ModeLabel>().unwrap(), l);
    }
    let _ = text.parse::<noonsim::herald::Detector>();
});
