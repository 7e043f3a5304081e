#![no_main]
use libfuzzer_sys::fuzz_target;

use color488::analysis::{read_samples_csv, write_samples_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_samples_csv(data) {
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &records, &[]).unwrap();
        assert_eq!(read_samples_csv(buf.as_slice()).unwrap(), records);
    }
});
