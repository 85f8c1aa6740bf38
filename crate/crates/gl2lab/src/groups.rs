//! Finitely generated subgroups of `GL(2, Z/NZ)`.
//!
//! A [`SubgroupSpec`] is a modulus plus generators; [`closure`] enumerates it
//! into a [`GroupClosure`] by breadth-first multiplication. On top of that
//! this module provides reduction, kernels of reduction, full lifts, levels,
//! conjugacy search, transposition, fiber products and the stable cyclic
//! subgroups used by the isogeny engine.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residues::{
    crt_packed, det_packed, identity_packed, inv_mod, inv_packed, lift_packed, minus_identity_packed,
    mul_packed, order_packed, pack, reduce_packed, transpose_packed, unpack, Modulus, ResidueMatrix,
};

/// Default element cap for closures (`2^26`).
pub const DEFAULT_CAP: usize = 1 << 26;

/// Largest ambient group (per prime-power factor) scanned by [`is_conjugate`].
pub const CONJUGACY_SEARCH_CAP: u64 = 1 << 23;

static ELEMENT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CAP);

/// The element cap used by every operation that enumerates a group without
/// an explicit cap argument.
pub fn element_cap() -> usize {
    ELEMENT_CAP.load(Ordering::Relaxed)
}

/// Changes the process-wide element cap (see [`element_cap`]).
pub fn set_element_cap(cap: usize) {
    ELEMENT_CAP.store(cap.max(1), Ordering::Relaxed);
}

// ---------------------------------------------------------------------------
// Specs.

/// A modulus together with a nonempty list of invertible generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    modulus: Modulus,
    generators: Vec<ResidueMatrix>,
}

impl SubgroupSpec {
    /// Validates that the generators are invertible and share the modulus.
    pub fn new(modulus: Modulus, generators: Vec<ResidueMatrix>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("a subgroup needs at least one generator".into()));
        }
        for g in &generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch { left: modulus.n(), right: g.modulus().n() });
            }
            if !g.is_invertible() {
                return Err(Error::NotInvertible(g.to_string()));
            }
        }
        Ok(SubgroupSpec { modulus, generators })
    }

    /// Builds a spec from a modulus and row-major integer matrices.
    pub fn from_rows(n: u64, rows: &[[[i64; 2]; 2]]) -> Result<Self> {
        let m = Modulus::new(n)?;
        SubgroupSpec::new(m, rows.iter().map(|r| ResidueMatrix::new(m, *r)).collect())
    }

    /// The trivial group.
    pub fn trivial(modulus: Modulus) -> Self {
        SubgroupSpec { modulus, generators: vec![ResidueMatrix::identity(modulus)] }
    }

    /// The modulus.
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The generators.
    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    /// Spec with every generator transposed.
    pub fn transpose(&self) -> Self {
        SubgroupSpec {
            modulus: self.modulus,
            generators: self.generators.iter().map(|g| g.transpose()).collect(),
        }
    }

    fn packed(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.packed()).collect()
    }

    fn from_packed(modulus: Modulus, gens: impl IntoIterator<Item = u64>) -> Self {
        let mut generators: Vec<ResidueMatrix> =
            gens.into_iter().map(|p| ResidueMatrix::from_packed(modulus, p)).collect();
        if generators.is_empty() {
            generators.push(ResidueMatrix::identity(modulus));
        }
        SubgroupSpec { modulus, generators }
    }
}

// ---------------------------------------------------------------------------
// Membership index.

#[derive(Clone, Debug)]
enum Membership {
    /// One bit per matrix; used when `N^4 <= 2^24`.
    Dense { n: u64, bits: Vec<u64> },
    Sparse(FxHashSet<u64>),
}

impl Membership {
    fn new(n: u32) -> Self {
        let n = n as u64;
        if n.pow(4) <= 1 << 24 {
            Membership::Dense { n, bits: vec![0; (n.pow(4) as usize).div_ceil(64)] }
        } else {
            Membership::Sparse(FxHashSet::default())
        }
    }

    #[inline]
    fn slot(n: u64, x: u64) -> usize {
        let [a, b, c, d] = unpack(x).map(|v| v as u64);
        (a + n * (b + n * (c + n * d))) as usize
    }

    #[inline]
    fn insert(&mut self, x: u64) -> bool {
        match self {
            Membership::Dense { n, bits } => {
                let i = Self::slot(*n, x);
                let (w, m) = (i / 64, 1u64 << (i % 64));
                let fresh = bits[w] & m == 0;
                bits[w] |= m;
                fresh
            }
            Membership::Sparse(set) => set.insert(x),
        }
    }

    #[inline]
    fn contains(&self, x: u64) -> bool {
        match self {
            Membership::Dense { n, bits } => {
                let i = Self::slot(*n, x);
                if i >= bits.len() * 64 {
                    return false;
                }
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            Membership::Sparse(set) => set.contains(&x),
        }
    }
}

// ---------------------------------------------------------------------------
// Closures.

/// Cached boolean invariants of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFlags {
    /// `-Id` belongs to the group.
    pub contains_minus_id: bool,
    /// The determinant maps onto `(Z/NZ)^*`.
    pub det_surjective: bool,
    /// Some element is conjugate in `GL(2, Z/NZ)` to `[[1,1],[0,-1]]` or `[[1,0],[0,-1]]`.
    pub has_complex_conjugation: bool,
}

/// A fully enumerated subgroup of `GL(2, Z/NZ)`.
///
/// Elements are kept in breadth-first discovery order, which is a
/// deterministic function of the generator list.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    spec: SubgroupSpec,
    elements: Vec<u64>,
    members: Membership,
    contains_minus_id: bool,
    det_image: Vec<u32>,
    complex_conjugation: OnceLock<bool>,
    order_profile: OnceLock<Vec<(u32, u64)>>,
    level: OnceLock<Modulus>,
}

impl GroupClosure {
    /// Assembles a closure from an element list already known to be a group
    /// generated by `spec`.
    pub(crate) fn from_parts(spec: SubgroupSpec, elements: Vec<u64>) -> Self {
        let n = spec.modulus.n();
        let mut members = Membership::new(n);
        for &x in &elements {
            members.insert(x);
        }
        Self::from_indexed(spec, elements, members)
    }

    fn from_indexed(spec: SubgroupSpec, elements: Vec<u64>, members: Membership) -> Self {
        let n = spec.modulus.n();
        let contains_minus_id = members.contains(minus_identity_packed(n));
        let mut seen = vec![false; n as usize];
        for &x in &elements {
            seen[det_packed(x, n) as usize] = true;
        }
        let det_image = (0..n).filter(|&u| seen[u as usize]).collect();
        GroupClosure {
            spec,
            elements,
            members,
            contains_minus_id,
            det_image,
            complex_conjugation: OnceLock::new(),
            order_profile: OnceLock::new(),
            level: OnceLock::new(),
        }
    }

    /// The generating spec.
    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    /// The modulus.
    pub fn modulus(&self) -> Modulus {
        self.spec.modulus
    }

    /// The generators.
    pub fn generators(&self) -> &[ResidueMatrix] {
        self.spec.generators()
    }

    /// `|G|`.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `[GL(2, Z/NZ) : G]`.
    pub fn index(&self) -> u64 {
        ambient_order(self.modulus()) / self.order()
    }

    /// Packed elements in enumeration order.
    pub fn packed_elements(&self) -> &[u64] {
        &self.elements
    }

    /// Elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = ResidueMatrix> + '_ {
        let m = self.modulus();
        self.elements.iter().map(move |&p| ResidueMatrix::from_packed(m, p))
    }

    /// Membership test; matrices over another modulus are never members.
    pub fn contains(&self, x: &ResidueMatrix) -> bool {
        x.modulus() == self.modulus() && self.members.contains(x.packed())
    }

    /// Membership test on a packed matrix over the group's modulus.
    #[inline]
    pub fn contains_packed(&self, x: u64) -> bool {
        self.members.contains(x)
    }

    /// `-Id` belongs to the group.
    pub fn contains_minus_id(&self) -> bool {
        self.contains_minus_id
    }

    /// Sorted image of the determinant.
    pub fn det_image(&self) -> &[u32] {
        &self.det_image
    }

    /// The determinant is onto `(Z/NZ)^*`.
    pub fn det_surjective(&self) -> bool {
        self.det_image.len() == self.modulus().units().len()
    }

    /// Some element is conjugate to one of the two complex-conjugation models.
    pub fn has_complex_conjugation(&self) -> bool {
        *self.complex_conjugation.get_or_init(|| {
            let m = self.modulus();
            let n = m.n();
            let minus1 = n - 1;
            [pack(1 % n, 1 % n, 0, minus1 % n), pack(1 % n, 0, 0, minus1 % n)]
                .into_iter()
                .any(|model| conjugacy_class(model, m).iter().any(|&x| self.contains_packed(x)))
        })
    }

    /// `(element order, multiplicity)` pairs sorted by order; computed once.
    pub fn order_profile(&self) -> &[(u32, u64)] {
        self.order_profile.get_or_init(|| {
            let n = self.modulus().n();
            let orders: Vec<u32> = self.elements.par_iter().map(|&x| order_packed(x, n)).collect();
            let mut counts: HashMap<u32, u64> = HashMap::new();
            for o in orders {
                *counts.entry(o).or_default() += 1;
            }
            let mut v: Vec<(u32, u64)> = counts.into_iter().collect();
            v.sort_unstable();
            v
        })
    }

    /// The three cached boolean invariants.
    pub fn flags(&self) -> GroupFlags {
        group_flags(self)
    }

    /// True when both groups have the same modulus and the same element set.
    pub fn same_elements(&self, other: &GroupClosure) -> bool {
        self.modulus() == other.modulus()
            && self.order() == other.order()
            && self.elements.iter().all(|&x| other.contains_packed(x))
    }

    /// Elements sorted by packed value: a canonical listing independent of
    /// the generators.
    pub fn sorted_elements(&self) -> Vec<ResidueMatrix> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        let m = self.modulus();
        v.into_iter().map(|p| ResidueMatrix::from_packed(m, p)).collect()
    }
}

/// Breadth-first closure of `spec`, failing once more than `cap` elements appear.
pub fn closure(spec: &SubgroupSpec, cap: usize) -> Result<GroupClosure> {
    let n = spec.modulus.n();
    let gens = spec.packed();
    let mut members = Membership::new(n);
    let id = identity_packed(n);
    let mut elements = vec![id];
    members.insert(id);
    let mut i = 0;
    while i < elements.len() {
        let x = elements[i];
        i += 1;
        for &s in &gens {
            let y = mul_packed(x, s, n);
            if members.insert(y) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap, partial: elements.len() });
                }
                elements.push(y);
            }
        }
    }
    Ok(GroupClosure::from_indexed(spec.clone(), elements, members))
}

/// [`closure`] with the process-wide [`element_cap`].
pub fn generate(spec: &SubgroupSpec) -> Result<GroupClosure> {
    closure(spec, element_cap())
}

// ---------------------------------------------------------------------------
// The ambient group.

/// `|GL(2, Z/NZ)|`, multiplicative over prime powers:
/// `|GL(2, Z/p^e)| = p^(4(e-1)) (p^2 - 1)(p^2 - p)`.
pub fn ambient_order(m: Modulus) -> u64 {
    m.prime_powers()
        .into_iter()
        .map(|(p, e, _)| {
            let p = p as u64;
            p.pow(4 * (e - 1)) * (p * p - 1) * (p * p - p)
        })
        .product()
}

/// A generating set of `(Z/NZ)^*`, found greedily.
pub fn unit_generators(m: Modulus) -> Vec<u32> {
    let n = m.n();
    let units = m.units();
    let mut have: Vec<bool> = vec![false; n as usize];
    have[(1 % n) as usize] = true;
    let mut count = 1;
    let mut gens = Vec::new();
    for &u in &units {
        if count == units.len() {
            break;
        }
        if have[u as usize] {
            continue;
        }
        gens.push(u);
        // Re-close the generated subgroup.
        let mut list: Vec<u32> = (0..n).filter(|&x| have[x as usize]).collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            for &g in &gens {
                let y = (x as u64 * g as u64 % n as u64) as u32;
                if !have[y as usize] {
                    have[y as usize] = true;
                    list.push(y);
                }
            }
        }
        count = list.len();
    }
    gens
}

/// Generators of `GL(2, Z/NZ)`: the two elementary unipotents (which generate
/// `SL(2, Z/NZ)`) and `diag(u, 1)` for generators `u` of the units.
pub fn ambient_generators(m: Modulus) -> Vec<ResidueMatrix> {
    let mut gens = vec![ResidueMatrix::new(m, [[1, 1], [0, 1]]), ResidueMatrix::new(m, [[1, 0], [1, 1]])];
    gens.extend(unit_generators(m).into_iter().map(|u| ResidueMatrix::new(m, [[u as i64, 0], [0, 1]])));
    drop_identities(m, gens)
}

fn drop_identities(m: Modulus, gens: Vec<ResidueMatrix>) -> Vec<ResidueMatrix> {
    let id = ResidueMatrix::identity(m);
    let mut out: Vec<ResidueMatrix> = Vec::new();
    for g in gens {
        if g != id && !out.contains(&g) {
            out.push(g);
        }
    }
    if out.is_empty() {
        out.push(id);
    }
    out
}

/// The whole of `GL(2, Z/NZ)` as a closure.
pub fn ambient_group(m: Modulus) -> Result<GroupClosure> {
    generate(&SubgroupSpec::new(m, ambient_generators(m))?)
}

/// Every element of `GL(2, Z/NZ)`, cached per modulus. Built prime power by
/// prime power and combined by CRT.
pub fn ambient_elements(m: Modulus) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&m.n()) {
        return v.clone();
    }
    let pps = m.prime_powers();
    let v = if pps.len() <= 1 {
        let n = m.n();
        let mut v = Vec::with_capacity(ambient_order(m) as usize);
        for d in 0..n {
            for c in 0..n {
                for b in 0..n {
                    for a in 0..n {
                        let x = pack(a, b, c, d);
                        if m.is_unit(det_packed(x, n)) {
                            v.push(x);
                        }
                    }
                }
            }
        }
        v
    } else {
        let (_, _, first) = pps[0];
        let m1 = Modulus::new(first as u64).expect("factor");
        let m2 = Modulus::new((m.n() / first) as u64).expect("factor");
        let (a, b) = (ambient_elements(m1), ambient_elements(m2));
        let inv = inv_mod(m1.n() % m2.n(), m2.n()).expect("coprime");
        let mut v = Vec::with_capacity(a.len() * b.len());
        for &x in a.iter() {
            for &y in b.iter() {
                v.push(crt_packed(x, m1.n(), y, m2.n(), inv));
            }
        }
        v
    };
    let v = Arc::new(v);
    cache.lock().unwrap().insert(m.n(), v.clone());
    v
}

// ---------------------------------------------------------------------------
// Reduction, kernels and lifts.

/// The image of `g` under entrywise reduction to a divisor of its modulus.
pub fn reduce(g: &GroupClosure, target: Modulus) -> Result<GroupClosure> {
    let m = g.modulus();
    if !target.divides(m) {
        return Err(Error::NotDivisor { target: target.n(), modulus: m.n() });
    }
    if target == m {
        return Ok(g.clone());
    }
    let t = target.n();
    let gens = drop_identities(
        target,
        g.generators().iter().map(|x| x.reduce_to(target).expect("divisor")).collect(),
    );
    let spec = SubgroupSpec { modulus: target, generators: gens };
    let mut members = Membership::new(t);
    let mut elements = Vec::new();
    for &x in &g.elements {
        let y = reduce_packed(x, t);
        if members.insert(y) {
            elements.push(y);
        }
    }
    Ok(GroupClosure::from_indexed(spec, elements, members))
}

/// `|reduce(g, target)|` without building the image group.
pub fn image_order(g: &GroupClosure, target: Modulus) -> u64 {
    let t = target.n();
    let mut members = Membership::new(t);
    g.elements.iter().filter(|&&x| members.insert(reduce_packed(x, t))).count() as u64
}

/// Generators of the kernel of `GL(2, Z/2^m) -> GL(2, Z/2^n)` for `0 <= n <= m <= 7`.
///
/// * `n >= 2`: `diag(1+2^n, 1)`, `diag(1, 1+2^n)`, `[[1,2^n],[0,1]]`, `[[1,0],[2^n,1]]`;
/// * `n = 1`: additionally the diagonal matrices with 3 and 5 in each slot
///   (5 is dropped modulo 4, where it is trivial);
/// * `n = 0`: generators of the whole ambient group.
///
/// Identity generators are dropped; a trivial kernel is presented by the identity.
pub fn kernel_generators(m: u32, n: u32) -> Result<SubgroupSpec> {
    if n > m || m > crate::residues::MAX_TWO_EXPONENT {
        return Err(Error::ExponentRange(format!("need 0 <= n <= m <= 7, got m={m}, n={n}")));
    }
    let modulus = Modulus::two_power(m)?;
    let gens = if n == m {
        vec![]
    } else if n == 0 {
        ambient_generators(modulus)
    } else {
        let t = 1i64 << n;
        let mat = |r: [[i64; 2]; 2]| ResidueMatrix::new(modulus, r);
        if n == 1 {
            vec![
                mat([[3, 0], [0, 1]]),
                mat([[5, 0], [0, 1]]),
                mat([[1, 0], [0, 3]]),
                mat([[1, 0], [0, 5]]),
                mat([[1, 2], [0, 1]]),
                mat([[1, 0], [2, 1]]),
            ]
        } else {
            vec![mat([[1 + t, 0], [0, 1]]), mat([[1, 0], [0, 1 + t]]), mat([[1, t], [0, 1]]), mat([[1, 0], [t, 1]])]
        }
    };
    Ok(SubgroupSpec { modulus, generators: drop_identities(modulus, gens) })
}

/// Generators of the kernel of `GL(2, Z/big) -> GL(2, Z/small)` for any
/// supported `small | big`, assembled prime power by prime power.
pub fn reduction_kernel_generators(big: Modulus, small: Modulus) -> Result<SubgroupSpec> {
    if !small.divides(big) {
        return Err(Error::NotDivisor { target: small.n(), modulus: big.n() });
    }
    let mut gens = Vec::new();
    for (p, e, pe) in big.prime_powers() {
        let mut f = 0;
        while small.n().is_multiple_of(p.pow(f + 1)) {
            f += 1;
        }
        if f == e {
            continue;
        }
        let local_mod = Modulus::new(pe as u64)?;
        let local: Vec<ResidueMatrix> = if p == 2 {
            kernel_generators(e, f)?.generators
        } else if f == 0 {
            ambient_generators(local_mod)
        } else {
            let t = p.pow(f) as i64;
            [[[1 + t, 0], [0, 1]], [[1, 0], [0, 1 + t]], [[1, t], [0, 1]], [[1, 0], [t, 1]]]
                .into_iter()
                .map(|r| ResidueMatrix::new(local_mod, r))
                .collect()
        };
        let rest = big.n() / pe;
        for x in local {
            if rest == 1 {
                gens.push(x);
            } else {
                let inv = inv_mod(pe % rest, rest).expect("coprime");
                gens.push(ResidueMatrix::from_packed(
                    big,
                    crt_packed(x.packed(), pe, identity_packed(rest), rest, inv),
                ));
            }
        }
    }
    Ok(SubgroupSpec { modulus: big, generators: drop_identities(big, gens) })
}

/// The full preimage of `g` in `GL(2, Z/target)` for a multiple `target` of
/// its modulus: lifted generators together with the reduction kernel.
pub fn lift(g: &GroupClosure, target: Modulus) -> Result<GroupClosure> {
    let m = g.modulus();
    if !m.divides(target) {
        return Err(Error::NotDivisor { target: m.n(), modulus: target.n() });
    }
    if m == target {
        return Ok(g.clone());
    }
    let mut gens: Vec<ResidueMatrix> = g
        .generators()
        .iter()
        .map(|x| ResidueMatrix::from_packed(target, lift_packed(x.packed(), m, target)))
        .collect();
    gens.extend(reduction_kernel_generators(target, m)?.generators);
    generate(&SubgroupSpec { modulus: target, generators: drop_identities(target, gens) })
}

/// The full lift of a group at modulus `2^n` to modulus `2^m`.
pub fn full_lift(g: &GroupClosure, m: u32) -> Result<GroupClosure> {
    let md = g.modulus();
    if !md.is_two_power() {
        return Err(Error::NotTwoPower(md.n()));
    }
    if m < md.two_exponent() {
        return Err(Error::ExponentRange(format!("cannot lift from 2^{} down to 2^{m}", md.two_exponent())));
    }
    lift(g, Modulus::two_power(m)?)
}

/// True when `g` is the full preimage of its reduction modulo the divisor `d`.
pub fn is_full_preimage_of_reduction(g: &GroupClosure, d: Modulus) -> bool {
    let m = g.modulus();
    image_order(g, d) * (ambient_order(m) / ambient_order(d)) == g.order()
}

/// The least divisor `M` of the modulus such that `g` is the full preimage of
/// its reduction modulo `M`.
pub fn minimal_level(g: &GroupClosure) -> Modulus {
    *g.level.get_or_init(|| {
        g.modulus()
            .divisors()
            .into_iter()
            .find(|&d| is_full_preimage_of_reduction(g, d))
            .expect("the modulus itself always qualifies")
    })
}

/// The level `2^m` of a group at a 2-power modulus.
pub fn level(g: &GroupClosure) -> Result<u32> {
    if !g.modulus().is_two_power() {
        return Err(Error::NotTwoPower(g.modulus().n()));
    }
    Ok(minimal_level(g).n())
}

/// The level exponent `m` (so [`level`] is `2^m`).
pub fn level_exponent(g: &GroupClosure) -> Result<u32> {
    Ok(level(g)?.trailing_zeros())
}

/// For `N = 2^a q`: the least `2^j` such that `g` is the full preimage of its
/// reduction modulo `2^j q`, and the least `d | q` such that it is the full
/// preimage of its reduction modulo `2^a d`.
pub fn level_parts(g: &GroupClosure) -> (u32, u32) {
    let m = g.modulus();
    let q = m.odd_part();
    let two = (0..=m.two_exponent())
        .map(|j| (1u32 << j) * q)
        .find(|&d| is_full_preimage_of_reduction(g, Modulus::new(d as u64).unwrap()))
        .unwrap()
        / q;
    let odd = (1..=q)
        .filter(|d| q.is_multiple_of(*d))
        .find(|&d| is_full_preimage_of_reduction(g, Modulus::new((m.two_part() * d) as u64).unwrap()))
        .unwrap();
    (two, odd)
}

// ---------------------------------------------------------------------------
// Conjugacy.

/// Searches for `P` with `P G P^-1 = H` (as element sets).
///
/// Pre-filters on order, `-Id` membership, determinant image and the
/// element-order multiset. At prime-power moduli the whole ambient group is
/// scanned; at composite moduli conjugators are searched as CRT pairs drawn
/// from per-factor transporter sets, reduced modulo the factor kernels of `H`.
/// The returned conjugator is the first valid one in a fixed enumeration
/// order, so the answer is deterministic.
pub fn is_conjugate(g: &GroupClosure, h: &GroupClosure) -> Result<Option<ResidueMatrix>> {
    let m = g.modulus();
    if h.modulus() != m {
        return Err(Error::ModulusMismatch { left: m.n(), right: h.modulus().n() });
    }
    if g.order() != h.order()
        || g.contains_minus_id() != h.contains_minus_id()
        || g.det_image() != h.det_image()
    {
        return Ok(None);
    }
    if g.same_elements(h) {
        return Ok(Some(ResidueMatrix::identity(m)));
    }
    for (_, _, pe) in m.prime_powers() {
        if ambient_order(Modulus::new(pe as u64)?) > CONJUGACY_SEARCH_CAP {
            return Err(Error::SearchTooLarge(m.n()));
        }
    }
    if g.order_profile() != h.order_profile() {
        return Ok(None);
    }
    let n = m.n();
    let gens = g.spec.packed();
    let pps = m.prime_powers();
    if pps.len() <= 1 {
        let amb = ambient_elements(m);
        let found = amb.par_iter().find_first(|&&p| conjugates_into(p, &gens, h, n));
        return Ok(found.map(|&p| ResidueMatrix::from_packed(m, p)));
    }
    // Composite: N = m1 * m2 with coprime prime-power-free split.
    let m1 = Modulus::new(pps[0].2 as u64)?;
    let m2 = Modulus::new((n / pps[0].2) as u64)?;
    let (g1, h1) = (reduce(g, m1)?, reduce(h, m1)?);
    let (g2, h2) = (reduce(g, m2)?, reduce(h, m2)?);
    let t1 = transporter(&g1, &h1);
    if t1.is_empty() {
        return Ok(None);
    }
    let t2 = transporter(&g2, &h2);
    if t2.is_empty() {
        return Ok(None);
    }
    let id1 = identity_packed(m1.n());
    let id2 = identity_packed(m2.n());
    let k1: Vec<u64> = h
        .elements
        .iter()
        .filter(|&&x| reduce_packed(x, m2.n()) == id2)
        .map(|&x| reduce_packed(x, m1.n()))
        .collect();
    let k2: Vec<u64> = h
        .elements
        .iter()
        .filter(|&&x| reduce_packed(x, m1.n()) == id1)
        .map(|&x| reduce_packed(x, m2.n()))
        .collect();
    let r1 = left_transversal(&t1, &k1, m1.n());
    let r2 = left_transversal(&t2, &k2, m2.n());
    let inv = inv_mod(m1.n() % m2.n(), m2.n()).expect("coprime");
    let total = r1.len() * r2.len();
    let found = (0..total).into_par_iter().find_first(|&i| {
        let p = crt_packed(r1[i / r2.len()], m1.n(), r2[i % r2.len()], m2.n(), inv);
        conjugates_into(p, &gens, h, n)
    });
    Ok(found.map(|i| ResidueMatrix::from_packed(m, crt_packed(r1[i / r2.len()], m1.n(), r2[i % r2.len()], m2.n(), inv))))
}

#[inline]
fn conjugates_into(p: u64, gens: &[u64], h: &GroupClosure, n: u32) -> bool {
    let pinv = match inv_packed(p, n) {
        Some(x) => x,
        None => return false,
    };
    gens.iter().all(|&s| h.contains_packed(mul_packed(mul_packed(p, s, n), pinv, n)))
}

/// All `P` in the ambient group with `P G P^-1 = H` (equal orders assumed).
fn transporter(g: &GroupClosure, h: &GroupClosure) -> Vec<u64> {
    if g.order() != h.order() {
        return vec![];
    }
    let n = g.modulus().n();
    let gens = g.spec.packed();
    ambient_elements(g.modulus())
        .par_iter()
        .copied()
        .filter(|&p| conjugates_into(p, &gens, h, n))
        .collect()
}

/// One representative of each coset `K P` inside `t` (first in order).
fn left_transversal(t: &[u64], k: &[u64], n: u32) -> Vec<u64> {
    let mut seen = FxHashSet::default();
    let mut reps = Vec::new();
    for &p in t {
        if seen.contains(&p) {
            continue;
        }
        reps.push(p);
        for &x in k {
            seen.insert(mul_packed(x, p, n));
        }
    }
    reps
}

/// `P G P^-1` as a closure (generators conjugated, elements mapped).
pub fn conjugate_by(g: &GroupClosure, p: &ResidueMatrix) -> Result<GroupClosure> {
    let m = g.modulus();
    if p.modulus() != m {
        return Err(Error::ModulusMismatch { left: m.n(), right: p.modulus().n() });
    }
    let n = m.n();
    let pp = p.packed();
    let pinv = inv_packed(pp, n).ok_or_else(|| Error::NotInvertible(p.to_string()))?;
    let conj = |x: u64| mul_packed(mul_packed(pp, x, n), pinv, n);
    let spec = SubgroupSpec::from_packed(m, g.spec.packed().into_iter().map(conj));
    Ok(GroupClosure::from_parts(spec, g.elements.iter().map(|&x| conj(x)).collect()))
}

/// The group generated by the transposed generators; its elements are the
/// transposes of the elements of `g`.
pub fn transpose_group(g: &GroupClosure) -> GroupClosure {
    GroupClosure::from_parts(g.spec.transpose(), g.elements.iter().map(|&x| transpose_packed(x)).collect())
}

/// The conjugacy class of a packed matrix in `GL(2, Z/NZ)`, found as the
/// orbit under conjugation by the ambient generators.
pub fn conjugacy_class(x: u64, m: Modulus) -> Vec<u64> {
    let n = m.n();
    let gens: Vec<(u64, u64)> = ambient_generators(m)
        .into_iter()
        .map(|s| (s.packed(), inv_packed(s.packed(), n).expect("invertible")))
        .collect();
    let mut seen = FxHashSet::default();
    seen.insert(x);
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        let y = orbit[i];
        i += 1;
        for &(s, si) in &gens {
            let z = mul_packed(mul_packed(s, y, n), si, n);
            if seen.insert(z) {
                orbit.push(z);
            }
        }
    }
    orbit
}

/// The three boolean invariants of a group.
pub fn group_flags(g: &GroupClosure) -> GroupFlags {
    GroupFlags {
        contains_minus_id: g.contains_minus_id(),
        det_surjective: g.det_surjective(),
        has_complex_conjugation: g.has_complex_conjugation(),
    }
}

/// The group generated by `g` and `-Id`.
pub fn adjoin_minus_id(g: &GroupClosure) -> GroupClosure {
    if g.contains_minus_id() {
        return g.clone();
    }
    let m = g.modulus();
    let n = m.n();
    let mi = minus_identity_packed(n);
    let mut gens = g.spec.generators.clone();
    gens.push(ResidueMatrix::minus_identity(m));
    let mut elements = g.elements.clone();
    elements.extend(g.elements.iter().map(|&x| mul_packed(x, mi, n)));
    GroupClosure::from_parts(SubgroupSpec { modulus: m, generators: gens }, elements)
}

// ---------------------------------------------------------------------------
// Fiber products.

/// The subgroup of `GL(2, Z/2^M q)` of matrices reducing into `a` modulo `q`
/// and into `b` modulo `2^M`; its order is `|a| |b|`.
pub fn fiber_product(a: &GroupClosure, b: &GroupClosure) -> Result<GroupClosure> {
    let (mq, m2) = (a.modulus(), b.modulus());
    if mq.n() % 2 == 0 {
        return Err(Error::Invalid(format!("the odd factor has even modulus {mq}")));
    }
    if crate::residues::gcd(mq.n() as u64, m2.n() as u64) != 1 {
        return Err(Error::NotCoprime(m2.n(), mq.n()));
    }
    let target = Modulus::new(mq.n() as u64 * m2.n() as u64)?;
    let size = a.order() as usize * b.order() as usize;
    if size > element_cap() {
        return Err(Error::CapExceeded { cap: element_cap(), partial: 0 });
    }
    let (n1, n2) = (m2.n(), mq.n());
    let inv = inv_mod(n1 % n2, n2).expect("coprime");
    let crt = |y: u64, x: u64| crt_packed(y, n1, x, n2, inv);
    let mut gens: Vec<u64> = b.spec.packed().into_iter().map(|y| crt(y, identity_packed(n2))).collect();
    gens.extend(a.spec.packed().into_iter().map(|x| crt(identity_packed(n1), x)));
    let mut elements = Vec::with_capacity(size);
    for &y in &b.elements {
        for &x in &a.elements {
            elements.push(crt(y, x));
        }
    }
    let spec = SubgroupSpec {
        modulus: target,
        generators: drop_identities(target, gens.into_iter().map(|p| ResidueMatrix::from_packed(target, p)).collect()),
    };
    Ok(GroupClosure::from_parts(spec, elements))
}

// ---------------------------------------------------------------------------
// Stable cyclic subgroups.

/// A cyclic subgroup of order `2^r` of `(Z/2^r)^2`, stored by its canonical
/// generator: `(1, y)` when a generator with odd first coordinate exists,
/// otherwise `(x, 1)` with `x` even. The trivial subgroup (`r = 0`) is `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSubgroup {
    /// Exponent: the subgroup has order `2^r`.
    pub r: u32,
    /// Canonical generator.
    pub generator: [u32; 2],
}

impl CyclicSubgroup {
    /// The trivial subgroup.
    pub const TRIVIAL: CyclicSubgroup = CyclicSubgroup { r: 0, generator: [0, 0] };

    /// The subgroup generated by `v` in `(Z/2^r)^2`; `v` must have order `2^r`.
    pub fn new(r: u32, v: [u32; 2]) -> Result<Self> {
        if r > crate::residues::MAX_TWO_EXPONENT {
            return Err(Error::ExponentRange(format!("kernel exponent {r} too large")));
        }
        if r == 0 {
            return Ok(Self::TRIVIAL);
        }
        let n = 1u32 << r;
        let (x, y) = (v[0] % n, v[1] % n);
        let generator = if x % 2 == 1 {
            let xi = inv_mod(x, n).unwrap();
            [1, (y as u64 * xi as u64 % n as u64) as u32]
        } else if y % 2 == 1 {
            let yi = inv_mod(y, n).unwrap();
            [(x as u64 * yi as u64 % n as u64) as u32, 1]
        } else {
            return Err(Error::BadKernel(v[0], v[1], r));
        };
        Ok(CyclicSubgroup { r, generator })
    }

    /// All `3 * 2^(r-1)` cyclic subgroups of order `2^r` (just the trivial one for `r = 0`).
    pub fn all(r: u32) -> Vec<Self> {
        if r == 0 {
            return vec![Self::TRIVIAL];
        }
        let n = 1u32 << r;
        let mut v: Vec<Self> = (0..n).map(|y| CyclicSubgroup { r, generator: [1, y] }).collect();
        v.extend((0..n).step_by(2).map(|x| CyclicSubgroup { r, generator: [x, 1] }));
        v
    }

    /// The order `2^r`.
    pub fn order(&self) -> u32 {
        1 << self.r
    }

    /// The unique subgroup of order `2^s`, `s <= r`, in `(Z/2^s)^2` coordinates.
    pub fn subgroup_of_order(&self, s: u32) -> Self {
        assert!(s <= self.r);
        let n = 1u32 << s;
        CyclicSubgroup::new(s, [self.generator[0] % n, self.generator[1] % n]).expect("primitive")
    }

    /// True when `self` is contained in `other` with index 2.
    pub fn is_index_two_in(&self, other: &CyclicSubgroup) -> bool {
        other.r == self.r + 1 && other.subgroup_of_order(self.r) == *self
    }

    /// True when every matrix maps the subgroup into itself modulo `2^r`.
    pub fn is_stable_under(&self, gens: &[ResidueMatrix]) -> bool {
        if self.r == 0 {
            return true;
        }
        let n = 1u64 << self.r;
        let [x, y] = self.generator.map(|v| v as u64);
        gens.iter().all(|g| {
            let [a, b, c, d] = g.entries().map(|v| v as u64 % n);
            let (w0, w1) = ((a * x + b * y) % n, (c * x + d * y) % n);
            if x % 2 == 1 {
                w1 == w0 * y % n
            } else {
                w0 == w1 * x % n
            }
        })
    }
}

impl std::fmt::Display for CyclicSubgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<({},{})> of order {}", self.generator[0], self.generator[1], self.order())
    }
}

/// All cyclic subgroups of order `2^r` of `(Z/2^r)^2` stable under `g`
/// reduced modulo `2^r`.
pub fn stable_cyclic_subgroups(g: &GroupClosure, r: u32) -> Result<Vec<CyclicSubgroup>> {
    let m = g.modulus();
    if !m.is_two_power() {
        return Err(Error::NotTwoPower(m.n()));
    }
    if r > m.two_exponent() {
        return Err(Error::ExponentRange(format!("r = {r} exceeds the modulus exponent {}", m.two_exponent())));
    }
    Ok(CyclicSubgroup::all(r).into_iter().filter(|c| c.is_stable_under(g.generators())).collect())
}
