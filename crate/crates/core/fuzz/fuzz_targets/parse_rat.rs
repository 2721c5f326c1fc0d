#![no_main]

use libfuzzer_sys::fuzz_target;
use nearderiv::exactmath::{format_rat, parse_rat};

fuzz_target!(|text: &str| {
    if let Ok(r) = parse_rat(text) {
        let printed = format_rat(&r);
        assert_eq!(parse_rat(&printed).as_ref(), Ok(&r), "{printed}");
    }
});
