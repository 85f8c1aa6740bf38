//! Quadratic twists of groups.
//!
//! Two groups are quadratic twists of each other when adjoining `-Id` to
//! either gives conjugate groups. For a group `G` containing `-Id`, the
//! twists other than `G` itself are (up to conjugacy) the index-2 subgroups
//! of `G` not containing `-Id`. Index-2 subgroups are exactly kernels of
//! nonzero functionals on the elementary abelian quotient `G / Phi`, where
//! `Phi` is the subgroup generated by all squares; such a kernel avoids `-Id`
//! iff the functional is 1 on the class of `-Id`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::groups::{adjoin_minus_id, generate, is_conjugate, GroupClosure, SubgroupSpec};
use crate::residues::{inv_packed, minus_identity_packed, mul_packed, ResidueMatrix};

/// A group containing `-Id` with conjugacy-class representatives of all its
/// quadratic twists (the base first).
#[derive(Clone, Debug)]
pub struct TwistOrbit {
    /// The group with `-Id` adjoined.
    pub base: GroupClosure,
    /// Class representatives; `members[0]` is the base.
    pub members: Vec<GroupClosure>,
}

impl TwistOrbit {
    /// Number of twist classes, the base included.
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The elementary abelian quotient `G / Phi` with a vector for every element.
struct SquareQuotient {
    rank: usize,
    /// Subgroup generated by squares, as generators.
    phi_generators: Vec<u64>,
    /// Basis elements of the quotient, drawn from the generators of `G`.
    basis: Vec<u64>,
    /// Quotient vector (bit mask over the basis) of every element of `G`.
    vector: FxHashMap<u64, u32>,
}

fn square_quotient(g: &GroupClosure) -> Result<SquareQuotient> {
    let m = g.modulus();
    let n = m.n();
    let gens: Vec<u64> = g.generators().iter().map(|x| x.packed()).collect();
    // Normal closure of {s_i^2, (s_i s_j)^2}: the quotient by it is generated
    // by commuting involutions, hence elementary abelian, so it equals Phi.
    let mut w: Vec<u64> = Vec::new();
    for (i, &s) in gens.iter().enumerate() {
        w.push(mul_packed(s, s, n));
        for &t in &gens[i + 1..] {
            let st = mul_packed(s, t, n);
            w.push(mul_packed(st, st, n));
        }
    }
    w.sort_unstable();
    w.dedup();
    let phi = loop {
        let spec = SubgroupSpec::new(m, w.iter().map(|&p| ResidueMatrix::from_packed(m, p)).collect())?;
        let k = generate(&spec)?;
        let mut extra = Vec::new();
        for &s in &gens {
            let si = inv_packed(s, n).expect("invertible");
            for &x in &w {
                let c = mul_packed(mul_packed(s, x, n), si, n);
                if !k.contains_packed(c) && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            break k;
        }
        w.extend(extra);
    };
    // Cosets of Phi.
    let mut coset_of: FxHashMap<u64, u32> = FxHashMap::default();
    let mut reps: Vec<u64> = Vec::new();
    for &x in g.packed_elements() {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &y in phi.packed_elements() {
            coset_of.insert(mul_packed(y, x, n), id);
        }
    }
    let cosets = reps.len();
    if !cosets.is_power_of_two() {
        return Err(Error::Internal(format!("square quotient has order {cosets}")));
    }
    // Greedy basis from the generators; vectors of all cosets by spanning.
    let mut coset_vec: Vec<Option<u32>> = vec![None; cosets];
    coset_vec[coset_of[&g.packed_elements()[0]] as usize] = Some(0);
    let mut spanned: Vec<(u64, u32)> = vec![(g.packed_elements()[0], 0)];
    let mut basis = Vec::new();
    for &s in &gens {
        if coset_vec[coset_of[&s] as usize].is_some() {
            continue;
        }
        let bit = 1u32 << basis.len();
        basis.push(s);
        let mut new = Vec::new();
        for &(r, v) in &spanned {
            let x = mul_packed(r, s, n);
            let c = coset_of[&x] as usize;
            debug_assert!(coset_vec[c].is_none());
            coset_vec[c] = Some(v | bit);
            new.push((x, v | bit));
        }
        spanned.extend(new);
    }
    if spanned.len() != cosets {
        return Err(Error::Internal("generators do not span the square quotient".into()));
    }
    let vector = coset_of.into_iter().map(|(x, c)| (x, coset_vec[c as usize].unwrap())).collect();
    Ok(SquareQuotient {
        rank: basis.len(),
        phi_generators: w,
        basis,
        vector,
    })
}

/// All index-2 subgroups of `g` not containing `-Id`, one per conjugacy class
/// under `GL(2, Z/NZ)`.
pub fn index2_without_minus_id(g: &GroupClosure) -> Result<Vec<GroupClosure>> {
    if !g.contains_minus_id() {
        return Err(Error::MissingMinusId);
    }
    let m = g.modulus();
    let n = m.n();
    let q = square_quotient(g)?;
    let v0 = q.vector[&minus_identity_packed(n)];
    let mut reps: Vec<GroupClosure> = Vec::new();
    for f in 1u32..(1 << q.rank) {
        if (f & v0).count_ones() % 2 == 0 {
            continue;
        }
        let parity = |v: u32| (f & v).count_ones() % 2;
        let elements: Vec<u64> =
            g.packed_elements().iter().copied().filter(|x| parity(q.vector[x]) == 0).collect();
        // Generators of the kernel: Phi, basis vectors in ker f, and sums with a
        // fixed basis vector outside ker f.
        let j0 = (0..q.rank).find(|&j| f >> j & 1 == 1).expect("f nonzero");
        let mut gens: Vec<u64> = q.phi_generators.clone();
        for (i, &b) in q.basis.iter().enumerate() {
            if f >> i & 1 == 0 {
                gens.push(b);
            } else if i != j0 {
                gens.push(mul_packed(b, q.basis[j0], n));
            }
        }
        let spec = SubgroupSpec::new(m, gens.into_iter().map(|p| ResidueMatrix::from_packed(m, p)).collect())?;
        let k = GroupClosure::from_parts(spec, elements);
        let mut fresh = true;
        for r in &reps {
            if is_conjugate(r, &k)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(k);
        }
    }
    Ok(reps)
}

/// The base `<g, -Id>` together with its twist classes.
pub fn twist_orbit(g: &GroupClosure) -> Result<TwistOrbit> {
    let base = adjoin_minus_id(g);
    let mut members = vec![base.clone()];
    members.extend(index2_without_minus_id(&base)?);
    Ok(TwistOrbit { base, members })
}

/// True iff every index-2 subgroup of `g` contains `-Id`, i.e. `-Id` lies in
/// the subgroup generated by squares.
pub fn is_twist_rigid(g: &GroupClosure) -> Result<bool> {
    if !g.contains_minus_id() {
        return Err(Error::MissingMinusId);
    }
    let q = square_quotient(g)?;
    Ok(q.vector[&minus_identity_packed(g.modulus().n())] == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{ambient_group, full_lift};
    use crate::residues::Modulus;

    fn grp(n: u64, rows: &[[[i64; 2]; 2]]) -> GroupClosure {
        generate(&SubgroupSpec::from_rows(n, rows).unwrap()).unwrap()
    }

    #[test]
    fn full_groups_are_rigid() {
        let gl8 = ambient_group(Modulus::new(8).unwrap()).unwrap();
        assert!(is_twist_rigid(&gl8).unwrap());
        let gl32 = ambient_group(Modulus::new(32).unwrap()).unwrap();
        assert!(index2_without_minus_id(&gl32).unwrap().is_empty());
        assert_eq!(twist_orbit(&gl32).unwrap().size(), 1);
    }

    #[test]
    fn h3_has_three_twist_classes() {
        let h3 = full_lift(&grp(4, &[[[3, 3], [0, 1]], [[0, 1], [3, 1]]]), 5).unwrap();
        assert!(!is_twist_rigid(&h3).unwrap());
        let orbit = twist_orbit(&h3).unwrap();
        assert_eq!(orbit.size(), 3);
        for t in &orbit.members {
            assert!(t.order() == orbit.base.order() || 2 * t.order() == orbit.base.order());
            assert!(adjoin_minus_id(t).same_elements(&orbit.base));
        }
        assert_eq!(orbit.members.iter().filter(|t| t.contains_minus_id()).count(), 1);
    }

    #[test]
    fn missing_minus_id_is_an_error() {
        let u = grp(4, &[[[1, 1], [0, 1]]]);
        assert!(matches!(index2_without_minus_id(&u), Err(Error::MissingMinusId)));
        assert!(matches!(is_twist_rigid(&u), Err(Error::MissingMinusId)));
        // twist_orbit adjoins -Id instead.
        assert_eq!(twist_orbit(&u).unwrap().base.order(), 8);
    }
}
