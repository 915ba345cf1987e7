#![no_main]

use libfuzzer_sys::fuzz_target;
use metdist::parse_lottery_spec;

fuzz_target!(|data: &str| {
    let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    if let Ok(p) = parse_lottery_spec(data, &names) {
        assert_eq!(p.len(), 4);
        assert!(p.probs().iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }
});
