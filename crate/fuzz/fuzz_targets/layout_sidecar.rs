#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(side) = aqec::codes::format::LayoutSidecar::from_json_str(s) {
            let _ = side.to_layout();
        }
    }
});
