// Quadratic-twist classes.
//
// `GL(2, Z_2)` has no nontrivial twists since `-Id` is a square in it,
// while `H_3` has three twist classes at modulus 32 (itself and two
// index-2 subgroups without `-Id`).
//
// ```bash
// cargo run --release --example twist_census
// ```

use gl2lab::catalog::lookup;
use gl2lab::groups::full_lift;
use gl2lab::twists::{is_twist_rigid, twist_orbit};

/// `(name, classes, rigid)` for H_1 and H_3.
pub fn run_example() -> gl2lab::Result<Vec<(String, usize, bool)>> {
    let mut out = Vec::new();
    for name in ["H_1", "H_3"] {
        let g = full_lift(lookup(name)?.closure()?, 5)?;
        let orbit = twist_orbit(&g)?;
        let rigid = is_twist_rigid(&orbit.base)?;
        println!("{name}: {} twist classes, rigid {rigid}", orbit.size());
        for t in &orbit.members {
            println!("  order {:>6}, contains -Id {}", t.order(), t.contains_minus_id());
        }
        out.push((name.to_string(), orbit.size(), rigid));
    }
    Ok(out)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
