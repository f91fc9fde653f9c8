#![no_main]

use dshell_cli::{commands, parse_config};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = parse_config(text) else { return };
    // what we emit must read back unchanged
    let again = parse_config(&cfg.to_json()).expect("emitted config parses");
    assert_eq!(again, cfg);
    if let Some(cmd) = cfg.command {
        let _ = commands::resolve(cmd, &cfg);
    }
});
