#![no_main]
use libfuzzer_sys::fuzz_target;

use color488_cli::config::{
    parse_distances, parse_order, parse_probabilities, Rounds, MAX_DISTANCE,
};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ds) = parse_distances(text) {
        assert!(ds
            .iter()
            .all(|&d| d >= 4 && d % 2 == 0 && d <= MAX_DISTANCE));
    }
    if let Ok(ps) = parse_probabilities(text) {
        assert!(ps.iter().all(|p| (0.0..=1.0).contains(p)));
    }
    if let Ok(r) = text.parse::<Rounds>() {
        assert_eq!(r.to_string().parse::<Rounds>().unwrap(), r);
    }
    let _ = parse_order(text);
});
