#![no_main]

use dshell_fem::mm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = mm::parse(text) {
        for &(r, c, v) in &m.entries {
            assert!(c <= r && r < m.n);
            assert!(r != c || v.im == 0.0);
        }
    }
});
