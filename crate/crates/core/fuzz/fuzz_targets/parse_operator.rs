#![no_main]

use libfuzzer_sys::fuzz_target;
use nearderiv::format::{parse_operator, print_operator};

fuzz_target!(|text: &str| {
    if let Ok((_, op)) = parse_operator(text) {
        let (_, again) = parse_operator(&print_operator(&op)).expect("printed operator parses");
        assert_eq!(again, op);
    }
});
