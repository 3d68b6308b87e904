#![no_main]

use antieigen::document::MatrixDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = MatrixDocument::parse_bytes(data) else {
        return;
    };
    let t = doc.to_matrix().expect("parsed documents are valid");
    let back = MatrixDocument::from_matrix(&t, doc.label.clone());
    let again = MatrixDocument::parse_str(&back.to_json()).expect("serialized documents parse");
    let t2 = again.to_matrix().expect("round trip stays valid");
    for (a, b) in t.as_slice().iter().zip(t2.as_slice()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
});
