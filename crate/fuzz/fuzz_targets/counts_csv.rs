#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must be total; a table that parses must survive the full
    // reconstruction path
    if let Ok(counts) = choi_gauge::cli::formats::parse_counts_csv(text) {
        let _ = choi_gauge::cli::formats::counts_to_csv(&counts);
        if let Ok(f) = choi_gauge::tomography::frequencies(&counts) {
            let choi = choi_gauge::tomography::reconstruct_choi(&f, true);
            let _ = choi_gauge::tomography::min_eigenpair(&choi);
            let _ = choi_gauge::tomography::reconstruct_states(&f);
        }
    }
});
