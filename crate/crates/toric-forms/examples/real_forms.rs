//! Classify the real forms of P1 x P1 and of the degree six del Pezzo
//! surface: every torus-model class with its torus type, fingerprint,
//! and variety class.

use toric_forms::descent::classify_forms_real;
use toric_forms::fan::bundled_fan;
use toric_forms::report::forms_to_text;

fn main() {
    for name in ["p1xp1", "dp6"] {
        let fan = bundled_fan(name).expect("bundled fan");
        let report = classify_forms_real(&fan).expect("real classification");
        println!("== {} ==", name);
        print!("{}", forms_to_text(&report));
        println!();
    }
}
