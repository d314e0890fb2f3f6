#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = choi_gauge::cli::formats::parse_witness_json(text) {
        let shots = choi_gauge::tomography::canonical_settings()
            .into_iter()
            .map(|k| (k, 394u64))
            .collect();
        let _ = choi_gauge::witness::hoeffding_bound(0.5, &shots, &w);
        let _ = choi_gauge::cli::formats::witness_to_json(&w);
    }
});
