//! Isogeny image transforms and isogeny-torsion graphs.
//!
//! Let `G` be the image of a 2-adic Galois representation, known through its
//! reduction at level `2^m` (`m <= 5`), and let `C` be a `G`-stable cyclic
//! subgroup of order `2^r`, `r <= m`. After a change of basis sending a
//! generator of `C` to the second standard vector (Borel normalization),
//! every element `[[A, C], [B, D]]` has `2^r | C`, and the image of the
//! isogenous curve `E / C` modulo 32 is generated by the matrices
//! `[[A, C / 2^r], [2^r B, D]]`, taken over generators of the full lift of
//! `G` to level `2^(5+r)`.
//!
//! That full lift is generated by integer lifts of generators of `G mod 2^m`
//! together with the kernel of `GL(2, Z/2^(5+r)) -> GL(2, Z/2^m)`, and the
//! transform is a homomorphism (conjugation by `diag(1, 2^r)`), so the
//! image is computed without ever forming the group at level `2^(5+r)`: the
//! normalized generators are transformed directly and the transformed kernel
//! generators are appended in closed form.
//!
//! Matrices act on column vectors; the top-right entry of the row-major
//! `[[a, b], [c, d]]` plays the role of `C` above.

pub mod shape;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

pub use shape::{classify_counts, classify_shape, kenku_bound, kenku_violations, GRAPH_TYPES, KENKU_BOUNDS};

use crate::error::{Error, Result};
use crate::groups::{
    ambient_generators, ambient_order, conjugate_by, full_lift, generate, is_conjugate, level_exponent,
    minimal_level, reduce, stable_cyclic_subgroups, CyclicSubgroup, GroupClosure, SubgroupSpec,
};
use crate::residues::{gcd, Modulus, ResidueMatrix};

/// Exponent of the modulus 32 at which all transformed images live.
pub const TARGET_EXPONENT: u32 = 5;

/// Largest number of curves in an isogeny class over `Q`.
pub const MAX_VERTICES: usize = 8;

fn target_modulus() -> Modulus {
    Modulus::two_power(TARGET_EXPONENT).expect("32 is supported")
}

// ---------------------------------------------------------------------------
// Steps and normalization.

/// One isogeny: a cyclic 2-power kernel together with an odd degree that
/// does not affect the 2-adic image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IsogenyStep {
    /// The 2-power part of the kernel, of order `2^r`.
    pub kernel: CyclicSubgroup,
    /// The odd part of the degree.
    pub odd_degree: u32,
}

impl IsogenyStep {
    /// The step with kernel generated by `v` in `(Z/2^r)^2`, `r <= 5`.
    pub fn new(r: u32, v: [u32; 2]) -> Result<Self> {
        if r > TARGET_EXPONENT {
            return Err(Error::ExponentRange(format!("kernel order 2^{r} exceeds 32")));
        }
        Ok(Self::from_kernel(CyclicSubgroup::new(r, v)?))
    }

    /// The step with the given 2-power kernel and odd degree 1.
    pub fn from_kernel(kernel: CyclicSubgroup) -> Self {
        IsogenyStep { kernel, odd_degree: 1 }
    }

    /// The identity step.
    pub fn trivial() -> Self {
        Self::from_kernel(CyclicSubgroup::TRIVIAL)
    }

    /// An isogeny of odd degree `d`.
    pub fn odd(d: u32) -> Result<Self> {
        Self::trivial().with_odd_degree(d)
    }

    /// The same step with its odd degree replaced.
    pub fn with_odd_degree(self, d: u32) -> Result<Self> {
        if d.is_multiple_of(2) {
            return Err(Error::Invalid(format!("odd degree must be odd and positive, got {d}")));
        }
        Ok(IsogenyStep { odd_degree: d, ..self })
    }

    /// The exponent `r` of the kernel order `2^r`.
    pub fn r(&self) -> u32 {
        self.kernel.r
    }
}

/// The 2-part of a group: its reduction modulo the 2-power part of the modulus.
pub fn two_adic_part(g: &GroupClosure) -> Result<GroupClosure> {
    let m = g.modulus();
    if m.is_two_power() {
        return Ok(g.clone());
    }
    reduce(g, Modulus::new(m.two_part() as u64)?)
}

/// The 2-part of a group brought to modulus 32: full lift from a smaller
/// modulus, reduction from a larger one (whose level must divide 32).
pub fn at_level_32(g: &GroupClosure) -> Result<GroupClosure> {
    let h = two_adic_part(g)?;
    let k = h.modulus().two_exponent();
    if k <= TARGET_EXPONENT {
        return full_lift(&h, TARGET_EXPONENT);
    }
    let m = level_exponent(&h)?;
    if m > TARGET_EXPONENT {
        return Err(Error::ExponentRange(format!("level 2^{m} exceeds 32")));
    }
    reduce(&h, target_modulus())
}

/// The conjugator `P` (modulo `modulus`) sending the kernel generator to the
/// second standard vector, so that `P G P^-1` stabilizes `<(0, 1)>`.
///
/// For the canonical generator `(x, 1)` this is `[[1, -x], [0, 1]]`; for
/// `(1, y)` it is `[[-y, 1], [1, 0]]`. The kernel `<(0, 1)>` gives the
/// identity and `<(1, 0)>` the basis swap.
pub fn borel_conjugator(kernel: &CyclicSubgroup, modulus: Modulus) -> ResidueMatrix {
    if kernel.r == 0 {
        return ResidueMatrix::identity(modulus);
    }
    let [x, y] = kernel.generator.map(|v| v as i64);
    if y == 1 && x % 2 == 0 {
        ResidueMatrix::new(modulus, [[1, -x], [0, 1]])
    } else {
        ResidueMatrix::new(modulus, [[-y, 1], [1, 0]])
    }
}

fn check_stable(gens: &[ResidueMatrix], kernel: &CyclicSubgroup) -> Result<()> {
    if kernel.is_stable_under(gens) {
        Ok(())
    } else {
        Err(Error::NotStable(kernel.generator[0], kernel.generator[1]))
    }
}

/// Conjugates a group at modulus `2^k` so that the step's kernel becomes
/// `<(0, 1)>` modulo `2^r`; every element then has top-right entry
/// divisible by `2^r`. Returns the conjugated group and the conjugator `P`
/// (the new group is `P G P^-1`).
pub fn borel_normalize(g: &GroupClosure, step: &IsogenyStep) -> Result<(GroupClosure, ResidueMatrix)> {
    let m = g.modulus();
    if !m.is_two_power() {
        return Err(Error::NotTwoPower(m.n()));
    }
    let r = step.r();
    if r > m.two_exponent() {
        return Err(Error::ExponentRange(format!("kernel order 2^{r} exceeds the modulus {m}")));
    }
    check_stable(g.generators(), &step.kernel)?;
    let p = borel_conjugator(&step.kernel, m);
    Ok((conjugate_by(g, &p)?, p))
}

// ---------------------------------------------------------------------------
// The transform.

/// A generator of the level-`2^(5+r)` source group (as integer entries) and
/// its transform modulo 32.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedGenerator {
    /// Row-major integer entries of the normalized source generator.
    pub source: [[u64; 2]; 2],
    /// `[[a, b / 2^r], [2^r c, d]] mod 32`.
    pub image: ResidueMatrix,
    /// True for the generators of the reduction kernel appended in closed form.
    pub from_kernel: bool,
}

impl TransformedGenerator {
    /// Determinant of the integer source matrix modulo 32.
    pub fn source_det_mod_32(&self) -> u32 {
        let [[a, b], [c, d]] = self.source.map(|row| row.map(|v| v as i128));
        ((a * d - b * c).rem_euclid(32)) as u32
    }
}

/// The transform of an integer matrix `[[a, b], [c, d]]` with `2^r | b`:
/// `[[a, b / 2^r], [2^r c, d]] mod 32`.
///
/// A `b` not divisible by `2^r` contradicts normalization and is reported as
/// an internal error.
pub fn transform_generator(source: [[u64; 2]; 2], r: u32) -> Result<ResidueMatrix> {
    let [[a, b], [c, d]] = source;
    if b % (1u64 << r) != 0 {
        return Err(Error::Internal(format!("top-right entry {b} of a normalized generator is not divisible by 2^{r}")));
    }
    let m32 = |v: u64| (v % 32) as i64;
    Ok(ResidueMatrix::new(target_modulus(), [[m32(a), m32(b >> r)], [m32(c << r), m32(d)]]))
}

/// Closed-form transformed generators of the kernel of
/// `GL(2, Z/2^(5+r)) -> GL(2, Z/2^m)`, each paired with its source:
///
/// * `m >= 2`: `[[1, 2^(m-r)], [0, 1]]`, `[[1, 0], [2^(m+r), 1]]`,
///   `diag(1 + 2^m, 1)` and `diag(1, 1 + 2^m)`;
/// * `m = 1`: `[[1, 2^(1-r)], [0, 1]]`, `[[1, 0], [2^(1+r), 1]]` and the
///   diagonal matrices with 3 and 5 in either slot;
/// * `m = 0` (forcing `r = 0`): generators of `GL(2, Z/32)`.
pub fn kernel_image_generators(m: u32, r: u32) -> Result<Vec<TransformedGenerator>> {
    if r > m || m > TARGET_EXPONENT {
        return Err(Error::KernelTooLarge { r, m });
    }
    let t = target_modulus();
    let pair = |source: [[u64; 2]; 2], image: [[i64; 2]; 2]| TransformedGenerator {
        source,
        image: ResidueMatrix::new(t, image),
        from_kernel: true,
    };
    Ok(match m {
        0 => ambient_generators(t)
            .into_iter()
            .map(|x| {
                let [[a, b], [c, d]] = x.rows().map(|row| row.map(|v| v as u64));
                TransformedGenerator { source: [[a, b], [c, d]], image: x, from_kernel: true }
            })
            .collect(),
        1 => vec![
            pair([[1, 2], [0, 1]], [[1, 1 << (1 - r)], [0, 1]]),
            pair([[1, 0], [2, 1]], [[1, 0], [1 << (1 + r), 1]]),
            pair([[3, 0], [0, 1]], [[3, 0], [0, 1]]),
            pair([[5, 0], [0, 1]], [[5, 0], [0, 1]]),
            pair([[1, 0], [0, 3]], [[1, 0], [0, 3]]),
            pair([[1, 0], [0, 5]], [[1, 0], [0, 5]]),
        ],
        _ => {
            let s = 1u64 << m;
            vec![
                pair([[1, s], [0, 1]], [[1, 1 << (m - r)], [0, 1]]),
                pair([[1, 0], [s, 1]], [[1, 0], [1 << (m + r), 1]]),
                pair([[1 + s, 0], [0, 1]], [[1 + s as i64, 0], [0, 1]]),
                pair([[1, 0], [0, 1 + s]], [[1, 0], [0, 1 + s as i64]]),
            ]
        }
    })
}

/// Everything computed by one isogeny image transform.
#[derive(Clone, Debug)]
pub struct IsogenyImage {
    /// The step applied.
    pub step: IsogenyStep,
    /// Level exponent `m` of the 2-part of the source group.
    pub level_exponent: u32,
    /// The Borel conjugator modulo `2^m`.
    pub conjugator: ResidueMatrix,
    /// Source/transformed generator pairs: normalized generators of
    /// `G mod 2^m` first, then the kernel generators.
    pub generators: Vec<TransformedGenerator>,
    /// The image group modulo 32.
    pub image: GroupClosure,
}

/// The isogeny image transform with all intermediate data.
///
/// Mixed moduli are first reduced to their 2-part. Errors: `r > m`
/// ([`Error::KernelTooLarge`]), a level above 32, an unstable kernel, or a
/// failed divisibility after normalization ([`Error::Internal`]).
pub fn isogeny_image_detailed(g: &GroupClosure, step: &IsogenyStep) -> Result<IsogenyImage> {
    let h = two_adic_part(g)?;
    let m = level_exponent(&h)?;
    let r = step.r();
    if r > m {
        return Err(Error::KernelTooLarge { r, m });
    }
    if m > TARGET_EXPONENT {
        return Err(Error::ExponentRange(format!("level 2^{m} exceeds 32")));
    }
    let lm = Modulus::two_power(m)?;
    let gm = reduce(&h, lm)?;
    check_stable(gm.generators(), &step.kernel)?;
    let p = borel_conjugator(&step.kernel, lm);
    let pinv = crate::residues::mat_inv(&p)?;
    let mut generators = Vec::new();
    // At m = 0 the reduction lives modulo 1 and carries no information.
    for s in gm.generators().iter().filter(|_| m > 0) {
        let x = crate::residues::mat_mul(&crate::residues::mat_mul(&p, s)?, &pinv)?;
        let source = x.rows().map(|row| row.map(|v| v as u64));
        generators.push(TransformedGenerator { source, image: transform_generator(source, r)?, from_kernel: false });
    }
    generators.extend(kernel_image_generators(m, r)?);
    let mut images: Vec<ResidueMatrix> = Vec::new();
    for x in &generators {
        if !images.contains(&x.image) {
            images.push(x.image);
        }
    }
    let image = generate(&SubgroupSpec::new(target_modulus(), images)?)?;
    Ok(IsogenyImage { step: *step, level_exponent: m, conjugator: p, generators, image })
}

/// The image modulo 32 of the curve isogenous through `step`.
pub fn isogeny_image(g: &GroupClosure, step: &IsogenyStep) -> Result<GroupClosure> {
    Ok(isogeny_image_detailed(g, step)?.image)
}

// ---------------------------------------------------------------------------
// Torsion.

/// The abelian group `Z/d1 x Z/d2` with `d1 | d2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPair {
    /// The smaller invariant factor.
    pub d1: u32,
    /// The exponent.
    pub d2: u32,
}

impl TorsionPair {
    /// Builds the pair, checking `d1 | d2`.
    pub fn new(d1: u32, d2: u32) -> Result<Self> {
        if d1 == 0 || !d2.is_multiple_of(d1) {
            return Err(Error::Invalid(format!("torsion pair ({d1} | {d2}) needs d1 | d2")));
        }
        Ok(TorsionPair { d1, d2 })
    }

    /// Group order `d1 d2`.
    pub fn order(&self) -> u32 {
        self.d1 * self.d2
    }

    /// Table notation: `[d2]` for cyclic groups, `[d1, d2]` otherwise.
    pub fn symbol(&self) -> Vec<u32> {
        if self.d1 == 1 {
            vec![self.d2]
        } else {
            vec![self.d1, self.d2]
        }
    }

    /// Inverse of [`TorsionPair::symbol`].
    pub fn from_symbol(s: &[u32]) -> Result<Self> {
        match *s {
            [d] => Self::new(1, d),
            [d1, d2] => Self::new(d1, d2),
            _ => Err(Error::Invalid(format!("torsion symbol {s:?} needs one or two entries"))),
        }
    }
}

impl std::fmt::Display for TorsionPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} | {})", self.d1, self.d2)
    }
}

impl Serialize for TorsionPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.symbol().serialize(s)
    }
}

/// The vectors of `(Z/N)^2` fixed by every element of `g`, as `Z/d1 x Z/d2`.
///
/// `d2` is the largest order of a fixed vector (the exponent of the fixed
/// subgroup) and `d1 = |F| / d2`.
pub fn torsion_fixed(g: &GroupClosure) -> TorsionPair {
    let n = g.modulus().n();
    let mut count = 0u32;
    let mut exponent = 1u32;
    for x in 0..n {
        for y in 0..n {
            if g.generators().iter().all(|s| s.apply([x, y]) == [x, y]) {
                count += 1;
                let ord = n / gcd(gcd(x as u64, y as u64), n as u64) as u32;
                exponent = exponent.max(ord);
            }
        }
    }
    TorsionPair { d1: count / exponent, d2: exponent }
}

// ---------------------------------------------------------------------------
// Graphs.

/// A declared odd part of an isogeny graph: for each odd prime `p`, the
/// number `C_p` of curves in a chain of `p`-isogenies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OddPart {
    /// `p -> C_p` for odd primes with `C_p >= 2`.
    pub counts: BTreeMap<u32, u32>,
}

impl OddPart {
    /// No odd isogenies.
    pub fn none() -> Self {
        Self::default()
    }

    /// Builds an odd part from `(p, C_p)` pairs; counts of 1 are dropped.
    pub fn new(pairs: &[(u32, u32)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &(p, c) in pairs {
            if p < 3 || p % 2 == 0 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                return Err(Error::Invalid(format!("{p} is not an odd prime")));
            }
            if c == 0 {
                return Err(Error::Invalid(format!("count for {p} must be positive")));
            }
            if counts.insert(p, c).is_some() {
                return Err(Error::Invalid(format!("prime {p} given twice")));
            }
        }
        counts.retain(|_, c| *c > 1);
        Ok(OddPart { counts })
    }

    /// Parses `p:C_p` pairs separated by commas, e.g. `3:2,5:2`; the empty
    /// string means no odd part.
    pub fn parse(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::Parse { line: None, msg: format!("odd part item {item:?}: expected p:count") };
            let (p, c) = item.split_once(':').ok_or_else(bad)?;
            pairs.push((p.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?));
        }
        Self::new(&pairs)
    }

    /// Number of odd positions, `prod C_p`.
    pub fn size(&self) -> usize {
        self.counts.values().map(|&c| c as usize).product()
    }

    /// All positions in lexicographic order (one coordinate per prime).
    fn positions(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &c in self.counts.values() {
            out = out.into_iter().flat_map(|v| (0..c).map(move |i| [v.clone(), vec![i]].concat())).collect();
        }
        out
    }
}

/// A vertex of an isogeny graph.
#[derive(Clone, Debug)]
pub struct GraphVertex {
    /// Position in [`IsogenyGraph::vertices`].
    pub id: usize,
    /// The 2-power kernel from the root.
    pub kernel: CyclicSubgroup,
    /// Position along each odd chain, keyed by prime.
    pub odd_position: BTreeMap<u32, u32>,
    /// The image group modulo 32.
    pub image: GroupClosure,
    /// Level of the image (a divisor of 32).
    pub level: u32,
    /// Index of the image in `GL(2, Z/32)`.
    pub index: u64,
    /// Rational 2-power torsion read off from fixed vectors.
    pub torsion: TorsionPair,
    /// Names of catalog groups matching the image, filled in by callers.
    pub labels: Vec<String>,
}

/// An edge: an isogeny of prime degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphEdge {
    /// Lower vertex id.
    pub from: usize,
    /// Higher vertex id.
    pub to: usize,
    /// Degree: 2, or the odd prime.
    pub degree: u32,
}

/// A propagated isogeny-torsion graph.
#[derive(Clone, Debug)]
pub struct IsogenyGraph {
    /// The root group at modulus 32.
    pub root: GroupClosure,
    /// The stable cyclic 2-power subgroups of the root, ordered by `(r, generator)`.
    pub two_adic_lattice: Vec<CyclicSubgroup>,
    /// The declared odd part.
    pub odd_part: OddPart,
    /// Vertices: id `= i * |odd positions| + j` for lattice entry `i` and odd position `j`.
    pub vertices: Vec<GraphVertex>,
    /// Edges, sorted.
    pub edges: Vec<GraphEdge>,
    /// The graph-type name.
    pub shape: String,
}

/// One failed duality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityFailure {
    /// Vertex whose image was transformed.
    pub from: usize,
    /// Vertex whose image the transform should have reproduced.
    pub to: usize,
}

/// Finds an order-2 subgroup `D` stable under `target` such that
/// `isogeny_image(target, D)` is conjugate to `source` (both at modulus 32).
pub fn dual_kernel(target: &GroupClosure, source: &GroupClosure) -> Result<Option<CyclicSubgroup>> {
    let t = two_adic_part(target)?;
    if level_exponent(&t)? == 0 {
        return Ok(None);
    }
    let s = at_level_32(source)?;
    for d in stable_cyclic_subgroups(&t, 1)? {
        let back = isogeny_image(&t, &IsogenyStep::from_kernel(d))?;
        if back.order() == s.order() && is_conjugate(&back, &s)?.is_some() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Builds the isogeny graph of a root group.
///
/// The root's 2-part is brought to modulus 32 (see [`at_level_32`]). Its
/// stable cyclic subgroups of orders `1, 2, ..., 32` are the 2-primary
/// vertices, each carrying the transformed image and its torsion; index-2
/// containments are the 2-edges. The odd part replicates every 2-primary
/// vertex with the same image (odd isogenies do not change the 2-adic image)
/// and joins consecutive copies along each chain by `p`-edges.
///
/// Errors: more than 8 vertices, Kenku or shape violations, and the
/// transform's own errors.
pub fn propagate_graph(root: &GroupClosure, odd_part: &OddPart) -> Result<IsogenyGraph> {
    let root = at_level_32(root)?;
    let mut lattice = Vec::new();
    for r in 0..=TARGET_EXPONENT {
        lattice.extend(stable_cyclic_subgroups(&root, r)?);
    }
    let odd_size = odd_part.size();
    let total = lattice.len() * odd_size;
    if total > MAX_VERTICES {
        return Err(Error::TooManyVertices(total));
    }
    let shape = classify_shape(&lattice, &odd_part.counts)?;
    let images: Vec<GroupClosure> = lattice
        .par_iter()
        .map(|c| isogeny_image(&root, &IsogenyStep::from_kernel(*c)))
        .collect::<Result<_>>()?;
    let positions = odd_part.positions();
    let primes: Vec<u32> = odd_part.counts.keys().copied().collect();
    let full = ambient_order(target_modulus());
    let mut vertices = Vec::with_capacity(total);
    for (i, (c, img)) in lattice.iter().zip(&images).enumerate() {
        let level = minimal_level(img).n();
        let torsion = torsion_fixed(img);
        for (j, pos) in positions.iter().enumerate() {
            vertices.push(GraphVertex {
                id: i * odd_size + j,
                kernel: *c,
                odd_position: primes.iter().copied().zip(pos.iter().copied()).collect(),
                image: img.clone(),
                level,
                index: full / img.order(),
                torsion,
                labels: vec![],
            });
        }
    }
    let mut edges = Vec::new();
    for (i, a) in lattice.iter().enumerate() {
        for (k, b) in lattice.iter().enumerate() {
            if a.is_index_two_in(b) {
                for j in 0..odd_size {
                    let (u, v) = (i * odd_size + j, k * odd_size + j);
                    edges.push(GraphEdge { from: u.min(v), to: u.max(v), degree: 2 });
                }
            }
        }
    }
    for i in 0..lattice.len() {
        for (j, a) in positions.iter().enumerate() {
            for (k, b) in positions.iter().enumerate().skip(j + 1) {
                let diff: Vec<usize> = (0..a.len()).filter(|&t| a[t] != b[t]).collect();
                if let [t] = diff[..] {
                    if a[t].abs_diff(b[t]) == 1 {
                        edges.push(GraphEdge { from: i * odd_size + j, to: i * odd_size + k, degree: primes[t] });
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(IsogenyGraph { root, two_adic_lattice: lattice, odd_part: odd_part.clone(), vertices, edges, shape })
}

impl IsogenyGraph {
    /// Edges as unordered vertex pairs.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.from, e.to)).collect()
    }

    /// Torsion of every vertex, in vertex order.
    pub fn torsion_column(&self) -> Vec<TorsionPair> {
        self.vertices.iter().map(|v| v.torsion).collect()
    }

    /// The common index of all vertex images, if it is the same everywhere.
    pub fn uniform_index(&self) -> Option<u64> {
        let first = self.vertices.first()?.index;
        self.vertices.iter().all(|v| v.index == first).then_some(first)
    }

    /// Checks the duality round trip on every 2-edge, in both directions:
    /// each endpoint's image has a stable order-2 subgroup whose transform is
    /// conjugate to the other endpoint's image. Replicated odd copies share
    /// images, so each distinct pair of kernels is checked once.
    pub fn duality_failures(&self) -> Result<Vec<DualityFailure>> {
        let odd_size = self.odd_part.size();
        let pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| e.degree == 2 && e.from % odd_size == 0)
            .flat_map(|e| [(e.from, e.to), (e.to, e.from)])
            .collect();
        let results: Vec<Option<DualityFailure>> = pairs
            .par_iter()
            .map(|&(u, v)| {
                let ok = dual_kernel(&self.vertices[v].image, &self.vertices[u].image)?.is_some();
                Ok((!ok).then_some(DualityFailure { from: v, to: u }))
            })
            .collect::<Result<_>>()?;
        Ok(results.into_iter().flatten().collect())
    }

    /// The graph as a JSON document.
    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "id": v.id,
                    "kernel": {"order": v.kernel.order(), "generator": v.kernel.generator},
                    "odd_position": v.odd_position,
                    "generators": generator_rows(&v.image),
                    "level": v.level,
                    "index": v.index,
                    "torsion": v.torsion,
                    "labels": v.labels,
                })
            })
            .collect();
        json!({
            "shape": self.shape,
            "vertex_count": self.vertices.len(),
            "uniform_index": self.uniform_index(),
            "root": {"modulus": self.root.modulus().n(), "generators": generator_rows(&self.root)},
            "vertices": vertices,
            "edges": self.edges,
        })
    }
}

/// Distinct non-identity generators of a group as row-major integer rows.
pub fn generator_rows(g: &GroupClosure) -> Vec<[[u32; 2]; 2]> {
    let id = ResidueMatrix::identity(g.modulus());
    let mut out: Vec<[[u32; 2]; 2]> = Vec::new();
    for x in g.generators() {
        if *x != id && !out.contains(&x.rows()) {
            out.push(x.rows());
        }
    }
    out
}

/// Finds a bijection `phi` from the vertices of graph A to those of graph B
/// (both on `n` vertices) mapping edges onto edges, with
/// `compatible(i, phi(i))` for every vertex. Edges are unordered pairs.
pub fn find_graph_isomorphism(
    n: usize,
    edges_a: &[(usize, usize)],
    edges_b: &[(usize, usize)],
    compatible: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if edges_a.len() != edges_b.len() {
        return None;
    }
    let adjacency = |edges: &[(usize, usize)]| {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    };
    let (adj_a, adj_b) = (adjacency(edges_a), adjacency(edges_b));
    let compat: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| compatible(i, j)).collect()).collect();
    fn extend(
        i: usize,
        phi: &mut Vec<usize>,
        used: &mut [bool],
        adj_a: &[Vec<bool>],
        adj_b: &[Vec<bool>],
        compat: &[Vec<bool>],
    ) -> bool {
        let n = used.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || !compat[i][j] || (0..i).any(|k| adj_a[i][k] != adj_b[j][phi[k]]) {
                continue;
            }
            used[j] = true;
            phi.push(j);
            if extend(i + 1, phi, used, adj_a, adj_b, compat) {
                return true;
            }
            phi.pop();
            used[j] = false;
        }
        false
    }
    let mut phi = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(0, &mut phi, &mut used, &adj_a, &adj_b, &compat).then_some(phi)
}

#[cfg(test)]
mod tests;
