#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(state) = aqec::kernel::format::decode(data) {
        // whatever decodes must encode back to the same bytes
        let again = aqec::kernel::format::encode(&state);
        assert_eq!(aqec::kernel::format::decode(&again).unwrap().labels(), state.labels());
    }
});
