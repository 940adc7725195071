#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::optics::Circuit;
use noonsim::ModeRegistry;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = Circuit::from_json_str(text) else {
        return;
    };
    // Any accepted circuit either builds a unitary or reports missing modes.
    let reg = ModeRegistry::ab();
    if let Ok(missing) = c.missing_modes(&reg) {
        if missing.len() <= 16 {
            let s = noonsim::PureState::vacuum(reg).with_modes(&missing).unwrap();
            let _ = c.unitary(s.registry());
        }
    }
});
