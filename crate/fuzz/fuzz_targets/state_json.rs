#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = aqec::kernel::format::from_json_str(s);
    }
});
