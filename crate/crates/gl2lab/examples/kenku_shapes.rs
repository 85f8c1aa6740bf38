// Isogeny-graph shapes allowed by Kenku's theorem.
//
// Enumerates every vector of counts `C_p` with `C = prod C_p <= 8`, keeps
// the ones satisfying the bound table and the seven joint constraints, and
// names the resulting graph types.
//
// ```bash
// cargo run --release --example kenku_shapes
// ```

use std::collections::{BTreeMap, BTreeSet};

use gl2lab::isogeny::{classify_counts, kenku_bound, kenku_violations, KENKU_BOUNDS};

/// All count vectors with product at most 8 (entries of 1 omitted).
pub fn count_vectors() -> Vec<BTreeMap<u32, u32>> {
    fn extend(i: usize, total: u32, cur: &mut BTreeMap<u32, u32>, out: &mut Vec<BTreeMap<u32, u32>>) {
        if i == KENKU_BOUNDS.len() {
            out.push(cur.clone());
            return;
        }
        let p = KENKU_BOUNDS[i].0;
        for c in 1..=8 {
            if total * c > 8 {
                break;
            }
            if c > 1 {
                cur.insert(p, c);
            }
            extend(i + 1, total * c, cur, out);
            cur.remove(&p);
        }
    }
    let mut out = Vec::new();
    extend(0, 1, &mut BTreeMap::new(), &mut out);
    out
}

/// `(Kenku-valid count vectors, admissible shape names)`.
pub fn run_example() -> gl2lab::Result<(usize, BTreeSet<String>)> {
    let vectors = count_vectors();
    let valid: Vec<_> = vectors.iter().filter(|c| kenku_violations(c).is_empty()).collect();
    let mut names = BTreeSet::new();
    for c in &valid {
        match classify_counts(c) {
            Ok(name) => {
                println!("{c:?} -> {name}");
                names.insert(name);
            }
            Err(e) => println!("{c:?} -> {e}"),
        }
    }
    println!(
        "{} vectors, {} satisfy Kenku, {} shapes; C_2 bound {}",
        vectors.len(),
        valid.len(),
        names.len(),
        kenku_bound(2)
    );
    Ok((valid.len(), names))
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
