#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::runner::RunConfig;

fuzz_target!(|data: &[u8]| {
    if data.len() > 16 * 1024 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Err(e) = RunConfig::from_json_str(text) {
        // Rejections are always attributed to the config.
        assert!(e.is_config_error(), "{e}");
    }
});
