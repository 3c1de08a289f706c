#![no_main]

use kdclub::report::{emit_records, read_csv, Emit};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_csv(data) else {
        return;
    };
    if records.iter().any(|r| !r.preprocess_time.is_finite() || !r.total_time.is_finite()) {
        return;
    }
    // Whatever parsed must survive a write and read back unchanged.
    let again = read_csv(&emit_records(&records, Emit::Csv)).unwrap();
    assert_eq!(again.len(), records.len());
});
