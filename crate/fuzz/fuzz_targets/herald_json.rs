#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::herald::HeraldSpec;

fuzz_target!(|data: &[u8]| {
    if data.len() > 16 * 1024 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = HeraldSpec::from_json_str(text);
});
