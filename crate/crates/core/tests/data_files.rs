//! The shipped presentation files are generator output, byte for byte.
//! Regenerate with `cargo run --example regenerate_presentations`.

use dko::presentation::generate::all_builtins;
use dko::presentation::{builtin_json, builtin_names, load_presentation};

#[test]
fn shipped_files_match_the_generator() {
    let generated = all_builtins();
    assert_eq!(generated.len(), builtin_names().len());
    for p in generated {
        let shipped = builtin_json(&p.name).unwrap_or_else(|| panic!("{} is not shipped", p.name));
        assert_eq!(shipped, p.to_json(), "{} drifted from the generator", p.name);
        assert_eq!(load_presentation(shipped).unwrap(), p, "{} does not round-trip", p.name);
    }
}
