// Rational torsion from fixed vectors.
//
// The torsion of a curve visible modulo `2^k` is the subgroup of
// `(Z/2^k)^2` fixed by its image. For
// `<[[1,0],[2,1]], [[3,0],[0,1]], [[5,0],[0,1]]>` modulo 8 this is
// `Z/2 x Z/8`.
//
// ```bash
// cargo run --release --example torsion
// ```

use gl2lab::groups::{generate, SubgroupSpec};
use gl2lab::isogeny::{torsion_fixed, TorsionPair};

/// Torsion of a few small groups.
pub fn run_example() -> gl2lab::Result<Vec<TorsionPair>> {
    let cases: [(u64, &[[[i64; 2]; 2]]); 3] = [
        (8, &[[[1, 0], [2, 1]], [[3, 0], [0, 1]], [[5, 0], [0, 1]]]),
        (2, &[[[1, 0], [1, 1]]]),
        (4, &[[[1, 0], [0, 1]]]),
    ];
    let mut out = Vec::new();
    for (n, gens) in cases {
        let g = generate(&SubgroupSpec::from_rows(n, gens)?)?;
        let t = torsion_fixed(&g);
        println!("<{gens:?}> mod {n}: torsion {t} (symbol {:?})", t.symbol());
        out.push(t);
    }
    Ok(out)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
