// Closures, reduction kernels, full lifts and levels.
//
// Enumerates the kernels of reduction `GL(2, Z/2^m) -> GL(2, Z/2^n)`, the
// orders of 3 and 5 modulo `2^s`, and the group `H_3` modulo 4 together
// with its full lift to modulus 32, which keeps its index and level.
//
// ```bash
// cargo run --release --example closure_and_levels
// ```

use gl2lab::groups::{full_lift, generate, kernel_generators, level_parts, minimal_level, SubgroupSpec};
use gl2lab::residues::{unit_order, Modulus};

/// Summary of the computations.
#[derive(Debug, PartialEq, Eq)]
pub struct Summary {
    /// `(m, n, |ker|)` for `1 <= n <= m <= 5`.
    pub kernels: Vec<(u32, u32, u64)>,
    /// `(s, ord 3, ord 5)` modulo `2^s` for `3 <= s <= 7`.
    pub unit_orders: Vec<(u32, u64, u64)>,
    /// `(modulus, index, level)` of `H_3` and of its full lift.
    pub h3: [(u32, u64, u32); 2],
}

/// Runs the computations and prints them.
pub fn run_example() -> gl2lab::Result<Summary> {
    let mut kernels = Vec::new();
    for m in 1..=5 {
        for n in 1..=m {
            let order = generate(&kernel_generators(m, n)?)?.order();
            println!("ker GL2(Z/2^{m}) -> GL2(Z/2^{n}): order {order} = 2^{}", order.trailing_zeros());
            kernels.push((m, n, order));
        }
    }
    let mut unit_orders = Vec::new();
    for s in 3..=7 {
        let m = Modulus::two_power(s)?;
        let (o3, o5) = (unit_order(3, m)?, unit_order(5, m)?);
        println!("mod 2^{s}: ord(3) = {o3}, ord(5) = {o5}");
        unit_orders.push((s, o3, o5));
    }
    let h3 = generate(&SubgroupSpec::from_rows(4, &[[[3, 3], [0, 1]], [[0, 1], [3, 1]]])?)?;
    let lifted = full_lift(&h3, 5)?;
    let row = |g: &gl2lab::groups::GroupClosure| (g.modulus().n(), g.index(), minimal_level(g).n());
    for g in [&h3, &lifted] {
        let (n, i, l) = row(g);
        println!("H_3 at modulus {n}: order {}, index {i}, level {l}, parts {:?}", g.order(), level_parts(g));
    }
    Ok(Summary { kernels, unit_orders, h3: [row(&h3), row(&lifted)] })
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
