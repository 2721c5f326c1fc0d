#![no_main]

use libfuzzer_sys::fuzz_target;
use nearderiv::format::parse_algebra;

fuzz_target!(|text: &str| {
    let Ok((file, tensor)) = parse_algebra(text) else {
        return;
    };
    // printing the parsed tensor and reading it back is lossless
    let (_, again) = parse_algebra(&file.to_json()).expect("printed file parses");
    assert_eq!(again, tensor);
});
