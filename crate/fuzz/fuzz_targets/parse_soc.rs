#![no_main]

use libfuzzer_sys::fuzz_target;
use metdist::ingest::{parse_soc, write_soc};

fuzz_target!(|data: &str| {
    let Ok(doc) = parse_soc(data) else {
        return;
    };
    let text = write_soc(&doc);
    let again = parse_soc(&text).expect("canonical output parses");
    assert_eq!(again.profile.names(), doc.profile.names());
    assert_eq!(again.profile.num_voters(), doc.profile.num_voters());
    assert_eq!(write_soc(&again), text);
});
