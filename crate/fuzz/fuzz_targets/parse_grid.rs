#![no_main]

use dshell_cli::config::{parse_grid, parse_number, MAX_GRID};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_grid(text, parse_number) {
        assert!(!v.is_empty());
        assert!(v.len() <= MAX_GRID.max(text.len()));
        assert!(v.iter().all(|x| x.is_finite()));
    }
});
