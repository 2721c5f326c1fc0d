#![no_main]

use libfuzzer_sys::fuzz_target;
use nearderiv::format::{parse_seeds, print_seeds};

fuzz_target!(|text: &str| {
    let Ok((file, seeds)) = parse_seeds(text) else {
        return;
    };
    let (_, again) = parse_seeds(&print_seeds(file.nvars, &seeds)).expect("printed seeds parse");
    assert_eq!(again, seeds);
});
