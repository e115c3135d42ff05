#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = aqec_cli::config::ExperimentConfig::from_json_str(s) {
            let _ = cfg.hash();
        }
    }
});
