#![no_main]

use libfuzzer_sys::fuzz_target;
use noonsim::poly::OpPolynomial;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = OpPolynomial::from_json_str(text) {
        let again = OpPolynomial::from_json_str(&p.to_json().to_string()).expect("dump parses");
        assert_eq!(p, again);
        let _ = p.to_string();
    }
});
