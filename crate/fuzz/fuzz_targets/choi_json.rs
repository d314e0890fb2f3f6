#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = choi_gauge::cli::formats::parse_choi_json(text) {
        if let Ok(choi) = file.to_choi() {
            let _ = choi_gauge::tomography::min_eigenpair(&choi);
            let _ = choi_gauge::cli::formats::choi_to_json(&file);
        }
    }
});
