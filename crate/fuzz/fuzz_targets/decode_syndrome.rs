#![no_main]
use libfuzzer_sys::fuzz_target;

use color488::decoders::{check_failure, Decoder, DecoderConfig, Order, Syndrome};
use color488::lattice::ColorCodeLattice;
use color488::noise::syndrome;

// First byte picks distance and decoder; the rest is either a list of
// flipped qubits or raw syndrome bits.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let d = [4, 6, 8][(head % 3) as usize];
    let cfg = match (head >> 2) % 3 {
        0 => DecoderConfig::restricted(),
        1 => DecoderConfig::correlated(),
        _ => DecoderConfig::correlated().with_order(Order::RgThenRb),
    };
    let lat = ColorCodeLattice::new(d).unwrap();
    let dec = Decoder::new(&lat, cfg).unwrap();
    let tie = if head & 0x80 != 0 {
        Some(u64::from(head))
    } else {
        None
    };
    if head & 0x40 != 0 {
        let mut bits = vec![false; lat.num_checks()];
        for (i, b) in rest.iter().enumerate().take(bits.len()) {
            bits[i] = b & 1 == 1;
        }
        // every syndrome is reachable, so decoding must succeed
        let c = dec.decode(&Syndrome { bits: bits.clone() }, tie).unwrap();
        assert!(c.residual_zero);
        assert_eq!(syndrome(&lat, &c.flips).bits, bits);
    } else {
        let error: Vec<usize> = rest
            .iter()
            .map(|&b| b as usize % lat.num_qubits())
            .collect();
        let syn = syndrome(&lat, &error);
        let c = dec.decode(&syn, tie).unwrap();
        assert!(c.residual_zero);
        check_failure(&error, &c, &lat).unwrap();
    }
});
