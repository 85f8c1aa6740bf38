// Fiber products across coprime levels.
//
// Combines the Borel group `B0(3)` modulo 3 with 2-power groups by the
// Chinese remainder theorem; the index of a fiber product is the product
// of the indices, and its level is the product of the levels.
//
// ```bash
// cargo run --release --example fiber_product
// ```

use gl2lab::catalog::lookup;
use gl2lab::groups::{fiber_product, level_parts};
use gl2lab::invariants::label_invariants;

/// `(name, index, expected index, label)` per product.
pub fn run_example() -> gl2lab::Result<Vec<(String, u64, u64, String)>> {
    let odd = lookup("B0(3)")?;
    let a = odd.closure()?;
    let mut out = Vec::new();
    for two in ["H_3", "H_193n"] {
        let b = lookup(two)?;
        let g = fiber_product(a, b.closure()?)?;
        let expected = a.index() * b.closure()?.index();
        let label = label_invariants(&g)?.label();
        println!(
            "{} x {two}: modulus {}, index {} (product of indices {expected}), level parts {:?}, label {label}",
            odd.name,
            g.modulus(),
            g.index(),
            level_parts(&g)
        );
        out.push((format!("{} x {two}", odd.name), g.index(), expected, label));
    }
    Ok(out)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
