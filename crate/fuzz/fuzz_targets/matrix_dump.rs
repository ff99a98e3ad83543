#![no_main]
use libfuzzer_sys::fuzz_target;
use schurpair::linear::SparseIntMatrix;

fuzz_target!(|data: &str| {
    if let Ok(m) = SparseIntMatrix::parse_coordinate_text(data) {
        let again = SparseIntMatrix::parse_coordinate_text(&m.to_coordinate_text())
            .expect("dump re-parses");
        assert_eq!(again.to_coordinate_text(), m.to_coordinate_text());
    }
});
