#![no_main]
use libfuzzer_sys::fuzz_target;

use color488::lattice::LatticeDump;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dump) = LatticeDump::parse(text) {
        let again = dump.to_json().unwrap();
        assert!(LatticeDump::parse(&again).is_ok());
    }
});
