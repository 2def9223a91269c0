#![no_main]

use libfuzzer_sys::fuzz_target;
use nonlocal_pencil::config::ConfigDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((doc, _)) = ConfigDocument::load(text) {
        let again = ConfigDocument::parse(&doc.to_toml()).expect("serialized config parses");
        assert_eq!(again, doc);
    }
});
