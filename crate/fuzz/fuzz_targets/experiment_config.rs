#![no_main]

use libfuzzer_sys::fuzz_target;
use metdist::harness::ExperimentConfig;

fuzz_target!(|data: &str| {
    if let Ok(config) = ExperimentConfig::parse(data) {
        let again = ExperimentConfig::parse(&config.to_toml()).expect("serialized config parses");
        assert_eq!(again.rules, config.rules);
        assert_eq!(again.sampler, config.sampler);
    }
});
