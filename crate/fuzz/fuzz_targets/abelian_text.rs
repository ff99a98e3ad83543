#![no_main]
use libfuzzer_sys::fuzz_target;
use schurpair::abelian::AbelianInvariants;

fuzz_target!(|data: &str| {
    if let Ok(a) = data.parse::<AbelianInvariants>() {
        assert_eq!(a.to_string().parse::<AbelianInvariants>().unwrap(), a);
    }
});
