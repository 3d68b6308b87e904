#![no_main]

use antieigen::document::parse_theta;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(theta) = parse_theta(s) {
        assert!(theta.radians().is_finite());
    }
});
