//! Run the full analysis pipeline on two bundled fans and print the
//! rendered report: predicates, class group, weights, symmetry orders,
//! class-lattice flags, and the canonical omega with its target.

use toric_forms::fan::bundled_fan;
use toric_forms::report::analysis_report;

fn main() {
    for name in ["p2", "dp6"] {
        let fan = bundled_fan(name).expect("bundled fan");
        let report = analysis_report(&fan).expect("smooth projective fan analyzes fully");
        println!("== {} ==", name);
        print!("{}", report.to_text());
        println!();
    }
}
