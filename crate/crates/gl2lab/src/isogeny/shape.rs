//! Isogeny-graph shapes from counts of cyclic rational subgroups.
//!
//! For an elliptic curve `E/Q`, `C_p` is the number of cyclic `Q`-rational
//! subgroups of `p`-power order (the trivial one included) and `C = prod C_p`
//! is the number of curves in the isogeny class. Kenku's theorem bounds these
//! counts prime by prime and through seven joint constraints; the 26 graph
//! types are exactly the admissible count vectors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::CyclicSubgroup;

/// Per-prime upper bounds on `C_p`; primes not listed have `C_p = 1`.
pub const KENKU_BOUNDS: [(u32, u32); 12] = [
    (2, 8),
    (3, 4),
    (5, 3),
    (7, 2),
    (11, 2),
    (13, 2),
    (17, 2),
    (19, 2),
    (37, 2),
    (43, 2),
    (67, 2),
    (163, 2),
];

/// Bound on `C_p` for any prime.
pub fn kenku_bound(p: u32) -> u32 {
    KENKU_BOUNDS.iter().find(|(q, _)| *q == p).map(|&(_, b)| b).unwrap_or(1)
}

fn count(counts: &BTreeMap<u32, u32>, p: u32) -> u32 {
    counts.get(&p).copied().unwrap_or(1)
}

/// Numbers of the constraints violated by a count vector: 0 stands for the
/// bound table together with `C <= 8`, 1–7 for the numbered constraints.
pub fn kenku_violations(counts: &BTreeMap<u32, u32>) -> Vec<u8> {
    let total: u64 = counts.values().map(|&c| c as u64).product();
    let c = |p| count(counts, p);
    let mut v = Vec::new();
    if total > 8 || counts.iter().any(|(&p, &k)| k == 0 || k > kenku_bound(p)) {
        v.push(0);
    }
    // (1) C_p = 2 for some p > 7 forces C_q = 1 for all other q.
    if counts.iter().any(|(&p, &k)| p > 7 && k == 2 && counts.iter().any(|(&q, &l)| q != p && l > 1)) {
        v.push(1);
    }
    // (2) C_7 = 2 implies C <= 4 and (C_3 = 2 or C_2 = 2 or C = 2).
    if c(7) == 2 && (total > 4 || !(c(3) == 2 || c(2) == 2 || total == 2)) {
        v.push(2);
    }
    // (3) C_5 <= 3, and C_5 = 3 implies C = 3.
    if c(5) > 3 || (c(5) == 3 && total != 3) {
        v.push(3);
    }
    // (4) C_5 = 2 implies C <= 4 and (C_3 = 2 or C_2 = 2 or C = 2).
    if c(5) == 2 && (total > 4 || !(c(3) == 2 || c(2) == 2 || total == 2)) {
        v.push(4);
    }
    // (5) C_3 <= 4, and C_3 = 4 implies C = 4.
    if c(3) > 4 || (c(3) == 4 && total != 4) {
        v.push(5);
    }
    // (6) C_3 = 3 implies C <= 6 and (C_2 = 2 or C = 3).
    if c(3) == 3 && (total > 6 || !(c(2) == 2 || total == 3)) {
        v.push(6);
    }
    // (7) C_3 = 2 implies C_2 <= 4.
    if c(3) == 2 && c(2) > 4 {
        v.push(7);
    }
    v
}

/// The graph-type name of a count vector (entries equal to 1 may be omitted).
///
/// Besides Kenku's constraints, the 2-primary count must be 1 or even: a
/// curve with a rational subgroup of order 2 and a rational cyclic subgroup
/// of order 4 containing it also has the second cyclic subgroup of order 4
/// over it, so the 2-power cyclic subgroups come in a tree whose vertex count
/// is never 3, 5 or 7.
pub fn classify_counts(counts: &BTreeMap<u32, u32>) -> Result<String> {
    let violations = kenku_violations(counts);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|i| format!("({i})")).collect();
        return Err(Error::Kenku { items: violations, detail: format!("counts {counts:?} violate {}", list.join(", ")) });
    }
    let nontrivial: Vec<(u32, u32)> = counts.iter().filter(|(_, &k)| k > 1).map(|(&p, &k)| (p, k)).collect();
    let c2 = count(counts, 2);
    if c2 > 1 && c2 % 2 == 1 {
        return Err(Error::Inadmissible(format!("2-primary count {c2} is neither 1 nor even")));
    }
    let name = match nontrivial.as_slice() {
        [] => "L_1".to_string(),
        [(p, 2)] => format!("L_2({p})"),
        [(3, 3)] => "L_3(9)".to_string(),
        [(5, 3)] => "L_3(25)".to_string(),
        [(3, 4)] => "L_4".to_string(),
        [(2, k)] => format!("T_{k}"),
        [(2, 2), (p, 2)] => format!("R_4({})", 2 * p),
        [(3, 2), (q, 2)] => format!("R_4({})", 3 * q),
        [(2, 2), (3, 3)] => "R_6".to_string(),
        [(2, 4), (3, 2)] => "S".to_string(),
        _ => return Err(Error::Inadmissible(format!("no graph type for counts {counts:?}"))),
    };
    Ok(name)
}

/// All 26 graph-type names.
pub const GRAPH_TYPES: [&str; 26] = [
    "L_1", "L_2(2)", "L_2(3)", "L_2(5)", "L_2(7)", "L_2(11)", "L_2(13)", "L_2(17)", "L_2(19)", "L_2(37)",
    "L_2(43)", "L_2(67)", "L_2(163)", "L_3(9)", "L_3(25)", "L_4", "T_4", "T_6", "T_8", "R_4(6)", "R_4(10)",
    "R_4(14)", "R_4(15)", "R_4(21)", "R_6", "S",
];

/// Expected degree sequence (sorted descending) of the 2-primary tree with `k` vertices.
fn two_primary_degrees(k: usize) -> Option<Vec<usize>> {
    match k {
        1 => Some(vec![0]),
        2 => Some(vec![1, 1]),
        4 => Some(vec![3, 1, 1, 1]),
        6 => Some(vec![3, 3, 1, 1, 1, 1]),
        8 => Some(vec![3, 3, 3, 1, 1, 1, 1, 1]),
        _ => None,
    }
}

/// Classifies the graph from the stable cyclic 2-power subgroups (the
/// containment lattice) and the odd counts `p -> C_p`.
///
/// The lattice must be a tree under index-2 containment with the degree
/// sequence of an `L_1`, `L_2(2)`, `T_4`, `T_6` or `T_8` graph.
pub fn classify_shape(two_adic_lattice: &[CyclicSubgroup], odd_counts: &BTreeMap<u32, u32>) -> Result<String> {
    if odd_counts.keys().any(|&p| p % 2 == 0) {
        return Err(Error::Invalid("odd counts must be keyed by odd primes".into()));
    }
    let k = two_adic_lattice.len();
    let mut counts = odd_counts.clone();
    counts.insert(2, k as u32);
    let name = classify_counts(&counts)?;
    let mut deg = vec![0usize; k];
    for (i, a) in two_adic_lattice.iter().enumerate() {
        for (j, b) in two_adic_lattice.iter().enumerate() {
            if a.is_index_two_in(b) {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    deg.sort_unstable_by(|a, b| b.cmp(a));
    if two_primary_degrees(k) != Some(deg.clone()) {
        return Err(Error::Inadmissible(format!("2-primary lattice with {k} vertices has degrees {deg:?}")));
    }
    Ok(name)
}
