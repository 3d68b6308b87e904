#![no_main]

use antieigen::document::RandomCampaign;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(campaign) = RandomCampaign::parse(s) {
        let spec = campaign.spec(0);
        assert!(spec.validate().is_ok());
        let _ = spec.generate();
    }
});
