#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(code) = aqec::codes::format::parse_stabilizer_text(s) {
            let text = aqec::codes::format::stabilizer_to_text(&code);
            aqec::codes::format::parse_stabilizer_text(&text).unwrap();
        }
    }
});
