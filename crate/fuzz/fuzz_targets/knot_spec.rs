#![no_main]

use libfuzzer_sys::fuzz_target;

use knotcrit::parse::{parse_knot_spec, KnotSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_knot_spec(text) else {
        return;
    };
    // File specs are resolved lazily; everything else must build and
    // evaluate without panicking.
    if matches!(spec, KnotSpec::File(_)) {
        return;
    }
    let echoed = parse_knot_spec(&spec.describe()).expect("describe() round-trips");
    assert_eq!(spec, echoed);
    if let Ok(knot) = spec.build() {
        for t in [0.0, 0.37, 5.9] {
            let p = knot.position(t);
            assert_eq!(p.len(), knot.dim());
            let _ = knot.velocity(t);
            let _ = knot.acceleration(t);
        }
    }
});
