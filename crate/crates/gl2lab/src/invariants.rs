//! Label invariants `N.i.g` of the modular curve attached to a group.
//!
//! The genus is computed for `Gamma = <G, -Id> ∩ SL(2, Z/L)` at the level `L`
//! from the permutation action of `SL(2, Z/L)` on the right cosets of
//! `Gamma`: the order-4 element `S = [[0,-1],[1,0]]` and the order-6 element
//! `ST = [[0,-1],[1,1]]` count elliptic points through their fixed cosets, the
//! translation `T = [[1,1],[0,1]]` counts cusps through its orbits, and
//! Riemann–Hurwitz gives
//! `12 (g - 1) = mu - 3 nu2 - 4 nu3 - 6 c`.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ambient_order, level_parts, minimal_level, reduce, GroupClosure};
use crate::residues::{crt_packed, det_packed, inv_mod, mul_packed, pack, unpack, Modulus};

/// Level, index and genus data of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    /// The least `L` such that the group is the full preimage of its reduction modulo `L`.
    pub level: u32,
    /// The 2-power part of the level.
    pub two_level: u32,
    /// The odd part of the level (odd conductor).
    pub odd_conductor: u32,
    /// Index in `GL(2, Z/NZ)` (equivalently in `GL(2, Z/LZ)`).
    pub index_in_ambient: u64,
    /// Index of the image of `<G, -Id> ∩ SL2` in `PSL2`, i.e. the number of cosets.
    pub psl2_index: u64,
    /// Elliptic points of order 2.
    pub nu2: u64,
    /// Elliptic points of order 3.
    pub nu3: u64,
    /// Cusps.
    pub cusp_count: u64,
    /// Genus.
    pub genus: u64,
}

impl CurveInvariants {
    /// The `N.i.g` label prefix.
    pub fn label(&self) -> String {
        label_string(self)
    }
}

/// Formats `level.index.genus`; the tiebreak digit is never produced.
pub fn label_string(inv: &CurveInvariants) -> String {
    format!("{}.{}.{}", inv.level, inv.index_in_ambient, inv.genus)
}

/// The elements of `SL(2, Z/NZ)`, built prime power by prime power.
pub fn sl2_elements(m: Modulus) -> Vec<u64> {
    let pps = m.prime_powers();
    if pps.len() <= 1 {
        let n = m.n();
        let one = 1 % n;
        let mut v = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let x = pack(a, b, c, d);
                        if det_packed(x, n) == one {
                            v.push(x);
                        }
                    }
                }
            }
        }
        return v;
    }
    let first = pps[0].2;
    let m1 = Modulus::new(first as u64).expect("factor");
    let m2 = Modulus::new((m.n() / first) as u64).expect("factor");
    let (a, b) = (sl2_elements(m1), sl2_elements(m2));
    let inv = inv_mod(m1.n() % m2.n(), m2.n()).expect("coprime");
    let mut v = Vec::with_capacity(a.len() * b.len());
    for &x in &a {
        for &y in &b {
            v.push(crt_packed(x, m1.n(), y, m2.n(), inv));
        }
    }
    v
}

/// Level, index, cusp and elliptic-point counts and genus of `g`.
pub fn label_invariants(g: &GroupClosure) -> Result<CurveInvariants> {
    if !g.det_surjective() {
        return Err(Error::DetNotSurjective(g.modulus().n()));
    }
    let lvl = minimal_level(g);
    let (two_level, odd_conductor) = level_parts(g);
    let h = reduce(g, lvl)?;
    let n = lvl.n();
    let index_in_ambient = ambient_order(g.modulus()) / g.order();
    debug_assert_eq!(index_in_ambient, ambient_order(lvl) / h.order());

    // Gamma = ±(H ∩ SL2).
    let one = 1 % n;
    let neg = |x: u64| {
        let e = unpack(x);
        pack((n - e[0]) % n, (n - e[1]) % n, (n - e[2]) % n, (n - e[3]) % n)
    };
    let mut gamma_set = FxHashSet::default();
    let mut gamma = Vec::new();
    for &x in h.packed_elements() {
        if det_packed(x, n) == one {
            for y in [x, neg(x)] {
                if gamma_set.insert(y) {
                    gamma.push(y);
                }
            }
        }
    }

    // Right cosets Gamma x of SL2.
    let sl2 = sl2_elements(lvl);
    let mut coset_of: FxHashMap<u64, u32> = FxHashMap::default();
    coset_of.reserve(sl2.len());
    let mut reps = Vec::new();
    for &x in &sl2 {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &y in &gamma {
            coset_of.insert(mul_packed(y, x, n), id);
        }
    }
    let mu = reps.len() as u64;
    let mat = |a: i64, b: i64, c: i64, d: i64| {
        let r = |v: i64| lvl.reduce(v);
        pack(r(a), r(b), r(c), r(d))
    };
    let s = mat(0, -1, 1, 0);
    let st = mat(0, -1, 1, 1);
    let t = mat(1, 1, 0, 1);
    let act = |x: u64, g: u64| coset_of[&mul_packed(x, g, n)];
    let nu2 = (0..reps.len()).filter(|&i| act(reps[i], s) == i as u32).count() as u64;
    let nu3 = (0..reps.len()).filter(|&i| act(reps[i], st) == i as u32).count() as u64;
    let mut seen = vec![false; reps.len()];
    let mut cusp_count = 0;
    for i in 0..reps.len() {
        if seen[i] {
            continue;
        }
        cusp_count += 1;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = act(reps[j], t) as usize;
        }
    }
    let twelve_g_minus_12 = mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusp_count as i64;
    if twelve_g_minus_12 % 12 != 0 || twelve_g_minus_12 < -12 {
        return Err(Error::Internal(format!(
            "Riemann-Hurwitz failed: mu={mu}, nu2={nu2}, nu3={nu3}, cusps={cusp_count}"
        )));
    }
    let genus = (twelve_g_minus_12 / 12 + 1) as u64;
    Ok(CurveInvariants {
        level: n,
        two_level,
        odd_conductor,
        index_in_ambient,
        psl2_index: mu,
        nu2,
        nu3,
        cusp_count,
        genus,
    })
}
