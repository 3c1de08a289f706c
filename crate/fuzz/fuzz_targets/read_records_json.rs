#![no_main]

use kdclub::report::{emit_records, read_json, Emit};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_json(data) else {
        return;
    };
    let again = read_json(&emit_records(&records, Emit::Json)).unwrap();
    assert_eq!(again, records);
});
