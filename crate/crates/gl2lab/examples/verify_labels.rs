// Verifies the claimed `N.i.g` label of every embedded catalog entry.
//
// For each entry with a claimed label, the group is enumerated, its level,
// index, cusps, elliptic points and genus are computed, and the resulting
// `N.i.g` prefix is compared with the claim.
//
// ```bash
// cargo run --release --example verify_labels
// ```

use gl2lab::catalog::builtin_catalog;
use gl2lab::invariants::label_invariants;

/// Prints one line per labelled entry and returns the number of mismatches.
pub fn run_example() -> gl2lab::Result<usize> {
    let mut mismatches = 0;
    for entry in builtin_catalog() {
        let Some(claimed) = entry.claimed_prefix() else { continue };
        let start = std::time::Instant::now();
        let inv = label_invariants(entry.closure()?)?;
        let ok = inv.label() == claimed;
        mismatches += usize::from(!ok);
        println!(
            "{:<8} claimed {:<12} computed {:<12} cusps {:>3} nu2 {:>2} nu3 {:>2}  {}  ({:.2?})",
            entry.name,
            entry.claimed_label.as_deref().unwrap_or(""),
            inv.label(),
            inv.cusp_count,
            inv.nu2,
            inv.nu3,
            if ok { "ok" } else { "MISMATCH" },
            start.elapsed()
        );
    }
    Ok(mismatches)
}

fn main() -> gl2lab::Result<()> {
    let mismatches = run_example()?;
    println!("{mismatches} mismatches");
    Ok(())
}
