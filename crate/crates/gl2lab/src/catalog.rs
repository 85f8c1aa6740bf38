//! Named groups: the embedded catalog, catalog files and matching.
//!
//! Catalog files are JSON lines, one entry per line:
//!
//! ```text
//! {"name":"H_62j","modulus":8,"generators":[[[3,6],[0,7]],[[3,0],[0,5]]],"label":"8.48.0.115"}
//! ```
//!
//! Matrices are row-major integer rows; `label` is optional. Blank lines are
//! ignored. The embedded catalog holds the generator sets printed in the
//! source tables and text plus a few standard constructions (Borel and
//! Cartan subgroups modulo odd primes).

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{
    ambient_order, generate, is_conjugate, minimal_level, reduce, transpose_group, unit_generators, GroupClosure,
    SubgroupSpec,
};
use crate::invariants::label_invariants;
use crate::isogeny::IsogenyGraph;
use crate::residues::{Modulus, ResidueMatrix};

/// Where a catalog entry comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Generators printed in running text.
    PublishedText,
    /// Generators printed in a table.
    PublishedTable,
    /// Generated programmatically from a standard definition.
    BuiltinConstruction,
    /// Read from a user-supplied catalog file.
    ExternalFile,
}

impl Source {
    /// The kebab-case tag.
    pub fn tag(self) -> &'static str {
        match self {
            Source::PublishedText => "published-text",
            Source::PublishedTable => "published-table",
            Source::BuiltinConstruction => "builtin-construction",
            Source::ExternalFile => "external-file",
        }
    }
}

/// A named group.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Unique name, e.g. `H_3`, `B0(3)`, `Nsp(5)`.
    pub name: String,
    /// Modulus and generators.
    pub spec: SubgroupSpec,
    /// Claimed `N.i.g.n` label (or its `N.i.g` prefix), if any.
    pub claimed_label: Option<String>,
    /// Provenance.
    pub source: Source,
    /// Free-form note (not written to catalog files).
    pub note: Option<String>,
    closure: OnceLock<GroupClosure>,
}

impl PartialEq for CatalogEntry {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.spec == other.spec
            && self.claimed_label == other.claimed_label
            && self.source == other.source
            && self.note == other.note
    }
}

impl CatalogEntry {
    /// Builds an entry, validating the label syntax.
    pub fn new(name: &str, spec: SubgroupSpec, claimed_label: Option<&str>, source: Source) -> Result<Self> {
        if name.trim().is_empty() {
            return Err(Error::Invalid("catalog names must be nonempty".into()));
        }
        if let Some(l) = claimed_label {
            parse_label(l)?;
        }
        Ok(CatalogEntry {
            name: name.to_string(),
            spec,
            claimed_label: claimed_label.map(str::to_string),
            source,
            note: None,
            closure: OnceLock::new(),
        })
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    /// The enumerated group (computed once).
    pub fn closure(&self) -> Result<&GroupClosure> {
        if let Some(g) = self.closure.get() {
            return Ok(g);
        }
        let g = generate(&self.spec)?;
        Ok(self.closure.get_or_init(|| g))
    }

    /// The `N.i.g` prefix of the claimed label.
    pub fn claimed_prefix(&self) -> Option<String> {
        let parts = parse_label(self.claimed_label.as_deref()?).ok()?;
        Some(format!("{}.{}.{}", parts[0], parts[1], parts[2]))
    }

    /// Compares the computed `N.i.g` with the claimed label: `None` when no
    /// label is claimed, otherwise `(computed, matches)`.
    pub fn verify_label(&self) -> Result<Option<(String, bool)>> {
        let Some(claimed) = self.claimed_prefix() else { return Ok(None) };
        let computed = label_invariants(self.closure()?)?.label();
        let ok = computed == claimed;
        Ok(Some((computed, ok)))
    }
}

/// Parses an `N.i.g.n` label (the `N.i.g` prefix alone is accepted too)
/// into its integer components.
pub fn parse_label(s: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = s.split('.').collect();
    let bad = || Error::Parse { line: None, msg: format!("label {s:?}: expected N.i.g.n with integer parts") };
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    parts.iter().map(|p| p.parse::<u64>().map_err(|_| bad())).collect()
}

// ---------------------------------------------------------------------------
// The embedded catalog.

type Rows = &'static [[[i64; 2]; 2]];

/// Generators of the 23 groups of the table of genus-1 modular curves
/// attached to products of 2-adic and odd-level groups: (row, 2-adic name,
/// label, generators). The modulus is the label's first component.
const GENUS_ONE_ROWS: [(u32, &str, &str, Rows); 23] = [
    (1, "H_9", "20.36.1.3", &[[[1, 1], [0, 1]], [[9, 0], [0, 1]], [[13, 0], [0, 1]], [[3, 0], [0, 3]], [[3, 0], [0, 11]], [[3, 0], [10, 1]]]),
    (2, "H_11", "20.36.1.4", &[[[1, 2], [0, 1]], [[9, 0], [0, 1]], [[13, 0], [0, 1]], [[7, 9], [0, 1]], [[1, 0], [0, 9]], [[1, 0], [0, 13]], [[9, 2], [10, 7]]]),
    (3, "H_12", "20.36.1.2", &[[[3, 0], [0, 1]], [[11, 0], [0, 1]], [[1, 2], [0, 1]], [[1, 0], [0, 3]], [[1, 0], [0, 11]], [[11, 1], [10, 1]]]),
    (4, "H_16", "40.36.1.1", &[[[1, 1], [0, 1]], [[31, 0], [0, 1]], [[9, 0], [0, 1]], [[33, 0], [0, 1]], [[3, 0], [0, 3]], [[3, 0], [0, 11]], [[1, 0], [0, 31]], [[3, 0], [10, 1]]]),
    (5, "H_18", "40.36.1.3", &[[[3, 0], [0, 1]], [[11, 0], [0, 1]], [[1, 2], [0, 1]], [[21, 1], [0, 1]], [[1, 0], [0, 3]], [[1, 0], [0, 11]], [[1, 31], [0, 31]], [[11, 1], [10, 1]]]),
    (6, "H_11", "12.24.1.6", &[[[1, 2], [0, 1]], [[5, 0], [0, 1]], [[7, 3], [0, 1]], [[1, 0], [0, 5]], [[1, 0], [6, 7]]]),
    (7, "H_12", "12.24.1.5", &[[[5, 0], [0, 1]], [[1, 4], [0, 1]], [[1, 6], [0, 1]], [[11, 4], [0, 1]], [[1, 0], [0, 7]], [[1, 0], [0, 5]], [[1, 1], [6, 7]]]),
    (8, "H_14", "24.24.1.21", &[[[17, 0], [0, 1]], [[1, 0], [0, 17]], [[1, 8], [0, 1]], [[7, 8], [0, 1]], [[17, 14], [0, 1]], [[13, 17], [0, 1]], [[1, 0], [0, 7]], [[1, 1], [6, 7]]]),
    (9, "H_18", "24.24.1.22", &[[[17, 0], [0, 1]], [[1, 8], [0, 1]], [[7, 7], [0, 1]], [[5, 19], [0, 1]], [[1, 0], [6, 7]], [[1, 0], [0, 17]]]),
    (10, "H_9", "12.72.1.2", &[[[5, 0], [0, 1]], [[1, 3], [0, 1]], [[1, 0], [0, 5]], [[7, 0], [0, 7]], [[7, 0], [6, 1]]]),
    (11, "H_15", "24.72.1.2", &[[[19, 0], [0, 1]], [[1, 3], [0, 1]], [[11, 0], [0, 1]], [[5, 0], [0, 5]], [[5, 0], [0, 7]], [[5, 0], [0, 13]], [[5, 0], [6, 1]]]),
    (12, "H_2", "26.28.1.1", &[[[3, 0], [0, 1]], [[5, 0], [0, 1]], [[1, 2], [0, 1]], [[1, 0], [0, 3]], [[1, 0], [0, 5]], [[2, 1], [13, 1]]]),
    (13, "H_3", "52.28.1.1", &[[[3, 3], [0, 1]], [[5, 0], [0, 1]], [[29, 46], [0, 1]], [[1, 0], [0, 5]], [[1, 0], [0, 9]], [[4, 1], [39, 1]]]),
    (14, "H_5", "104.28.1", &[[[5, 5], [0, 1]], [[9, 0], [0, 1]], [[17, 0], [0, 1]], [[33, 0], [0, 1]], [[47, 100], [0, 1]], [[1, 0], [0, 9]], [[1, 0], [0, 17]], [[1, 0], [0, 33]], [[8, 1], [65, 1]]]),
    (15, "H_2", "10.12.1.1", &[[[3, 0], [0, 1]], [[1, 2], [0, 1]], [[1, 0], [0, 3]], [[3, 1], [5, 2]]]),
    (16, "H_3", "20.12.1.1", &[[[3, 3], [0, 1]], [[9, 0], [0, 1]], [[13, 0], [0, 1]], [[17, 6], [0, 1]], [[1, 0], [0, 9]], [[1, 0], [0, 13]], [[3, 1], [10, 19]], [[4, 1], [15, 1]]]),
    (17, "H_5", "40.12.1.6", &[[[31, 0], [0, 1]], [[9, 0], [0, 1]], [[3, 3], [0, 1]], [[33, 0], [0, 1]], [[3, 0], [0, 3]], [[3, 0], [0, 11]], [[3, 0], [0, 21]], [[3, 0], [5, 1]]]),
    (18, "H_7", "20.24.1.1", &[[[9, 0], [0, 1]], [[3, 3], [0, 1]], [[13, 0], [0, 1]], [[3, 0], [0, 3]], [[3, 0], [0, 11]], [[3, 0], [5, 1]], [[18, 1], [15, 1]]]),
    (19, "H_7", "12.16.1.1", &[[[5, 0], [0, 1]], [[1, 4], [0, 1]], [[7, 7], [0, 1]], [[1, 0], [0, 5]], [[7, 0], [0, 7]], [[7, 2], [3, 1]]]),
    (20, "H_2", "6.24.1.2", &[[[5, 0], [0, 1]], [[1, 0], [0, 5]], [[2, 3], [3, 1]]]),
    (21, "H_3", "12.24.1.3", &[[[5, 0], [0, 1]], [[7, 9], [0, 1]], [[7, 3], [0, 1]], [[1, 0], [0, 5]], [[7, 0], [0, 7]], [[7, 0], [3, 1]]]),
    (22, "H_4", "24.24.1.1", &[[[19, 0], [0, 1]], [[11, 0], [0, 1]], [[5, 15], [0, 1]], [[5, 0], [0, 5]], [[5, 0], [0, 7]], [[5, 0], [0, 13]], [[5, 0], [3, 1]]]),
    (23, "H_5", "24.24.1.2", &[[[7, 0], [0, 1]], [[17, 0], [0, 1]], [[5, 15], [0, 1]], [[5, 0], [0, 5]], [[1, 0], [0, 7]], [[5, 0], [0, 13]], [[5, 0], [3, 1]]]),
];

/// The odd primes with builtin Borel and Cartan constructions.
pub const CONSTRUCTION_PRIMES: [u32; 4] = [3, 5, 7, 13];

/// Name of the genus-1 table entry in a given row.
pub fn genus_one_name(row: u32) -> String {
    format!("G1-{row:02}")
}

fn entry(name: &str, n: u64, rows: &[[[i64; 2]; 2]], label: Option<&str>, source: Source) -> CatalogEntry {
    CatalogEntry::new(name, SubgroupSpec::from_rows(n, rows).expect("builtin spec"), label, source)
        .expect("builtin entry")
}

/// A generator of `F_{p^2}^*` written as the matrix `[[a, e b], [b, a]]` of
/// multiplication by `a + b sqrt(e)` for the least non-square `e`.
fn nonsplit_generator(p: u32) -> ([[i64; 2]; 2], i64) {
    let pi = p as i64;
    let e = (2..pi).find(|&e| (1..pi).all(|x| x * x % pi != e)).expect("non-square");
    let m = Modulus::new(p as u64).expect("supported prime");
    for a in 0..pi {
        for b in 1..pi {
            let x = ResidueMatrix::new(m, [[a, e * b], [b, a]]);
            if x.is_invertible() && x.order().ok() == Some(p * p - 1) {
                return ([[a, e * b], [b, a]], e);
            }
        }
    }
    unreachable!("F_p^2 is cyclic")
}

fn constructions(p: u32) -> Vec<CatalogEntry> {
    let n = p as u64;
    let us = unit_generators(Modulus::new(n).expect("supported prime"));
    let t = [[1, 1], [0, 1]];
    let du1: Vec<[[i64; 2]; 2]> = us.iter().map(|&u| [[u as i64, 0], [0, 1]]).collect();
    let d1u: Vec<[[i64; 2]; 2]> = us.iter().map(|&u| [[1, 0], [0, u as i64]]).collect();
    let w = [[0, 1], [1, 0]];
    let (c, _) = nonsplit_generator(p);
    let conj = [[1, 0], [0, -1]];
    let cat = |parts: &[&[[[i64; 2]; 2]]]| parts.concat();
    let make = |name: String, rows: &[[[i64; 2]; 2]], note: &str| {
        entry(&name, n, rows, None, Source::BuiltinConstruction).with_note(note)
    };
    vec![
        make(format!("B0({p})"), &cat(&[&[t], &du1, &d1u]), "upper-triangular matrices"),
        make(format!("B1({p})"), &cat(&[&[t], &d1u]), "matrices [[1,*],[0,*]]"),
        make(format!("Csp({p})"), &cat(&[&du1, &d1u]), "split Cartan: diagonal matrices"),
        make(format!("Nsp({p})"), &cat(&[&du1, &d1u, &[w]]), "normalizer of the split Cartan"),
        make(format!("Cns({p})"), &[c], "non-split Cartan: F_(p^2)^* acting on itself"),
        make(format!("Nns({p})"), &[c, conj], "normalizer of the non-split Cartan"),
    ]
}

/// The embedded entries, in a fixed order.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let mut v = vec![
        entry("H_1", 1, &[[[1, 0], [0, 1]]], Some("1.1.0.1"), Source::PublishedTable).with_note("GL(2, Z_2)"),
        entry("H_3", 4, &[[[3, 3], [0, 1]], [[0, 1], [3, 1]]], Some("4.2.0.1"), Source::PublishedText),
        entry("H_193n", 8, &[[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]], Some("8.96.0.40"), Source::PublishedText),
        entry("Z2xZ8", 8, &[[[1, 0], [2, 1]], [[3, 0], [0, 1]], [[5, 0], [0, 1]]], None, Source::PublishedText)
            .with_note("mod-8 image of a curve with torsion Z/2 x Z/8"),
    ];
    for (row, h, label, rows) in GENUS_ONE_ROWS {
        let n: u64 = label.split('.').next().unwrap().parse().unwrap();
        v.push(
            entry(&genus_one_name(row), n, rows, Some(label), Source::PublishedTable)
                .with_note(&format!("genus-1 table row {row}, 2-adic part {h}")),
        );
    }
    for p in CONSTRUCTION_PRIMES {
        v.extend(constructions(p));
    }
    v
}

/// The embedded entry with the given name.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    builtin_catalog().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
}

// ---------------------------------------------------------------------------
// Catalog files.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryLine {
    name: String,
    modulus: u64,
    generators: Vec<[[i64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parses JSON-lines catalog text. Errors carry 1-based line numbers;
/// duplicate names within the text are rejected.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = |msg: String| Error::Parse { line: Some(i + 1), msg };
        let e: EntryLine = serde_json::from_str(line).map_err(|err| at(err.to_string()))?;
        if e.modulus == 0 {
            return Err(at("modulus must be positive".into()));
        }
        let spec = SubgroupSpec::from_rows(e.modulus, &e.generators).map_err(|err| at(err.to_string()))?;
        let entry = CatalogEntry::new(&e.name, spec, e.label.as_deref(), Source::ExternalFile)
            .map_err(|err| at(err.to_string()))?;
        if out.iter().any(|x| x.name == entry.name) {
            return Err(Error::DuplicateName(entry.name));
        }
        out.push(entry);
    }
    Ok(out)
}

/// Reads a JSON-lines catalog file.
pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
}

/// Writes entries as JSON lines (the inverse of [`parse_catalog`] for
/// entries with reduced generator entries).
pub fn save_catalog(entries: &[CatalogEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let line = EntryLine {
            name: e.name.clone(),
            modulus: e.spec.modulus().n() as u64,
            generators: e.spec.generators().iter().map(|g| g.rows().map(|r| r.map(|v| v as i64))).collect(),
            label: e.claimed_label.clone(),
        };
        out.push_str(&serde_json::to_string(&line).expect("serializable"));
        out.push('\n');
    }
    out
}

/// A session catalog: the embedded entries plus loaded files, append-only
/// with unique names.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// An empty catalog.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The embedded entries.
    pub fn builtin() -> Self {
        Catalog { entries: builtin_catalog() }
    }

    /// Appends entries, rejecting names already present.
    pub fn extend(&mut self, entries: Vec<CatalogEntry>) -> Result<()> {
        for e in &entries {
            if self.get(&e.name).is_some() {
                return Err(Error::DuplicateName(e.name.clone()));
            }
        }
        self.entries.extend(entries);
        Ok(())
    }

    /// Loads a catalog file and appends its entries.
    pub fn load(&mut self, path: &Path) -> Result<usize> {
        let entries = load_catalog(path)?;
        let n = entries.len();
        self.extend(entries)?;
        Ok(n)
    }

    /// The entry with the given name.
    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// The entry with the given name, or [`Error::UnknownName`].
    pub fn resolve(&self, name: &str) -> Result<&CatalogEntry> {
        self.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// All entries in insertion order.
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when there are no entries.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Matching.

/// How a catalog group relates to the matched group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// The entry is conjugate to the group itself.
    AsIs,
    /// The entry is conjugate to the transpose of the group.
    Transpose,
}

/// One match result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogMatch {
    /// Entry name.
    pub name: String,
    /// Orientation of the match.
    pub orientation: Orientation,
}

/// Every entry whose group is conjugate to `g` or to its transpose, with
/// the orientation recorded.
///
/// Conjugate groups share their level and index, and two groups of level
/// `L` are conjugate iff their reductions modulo `L` are; so entries are
/// pre-filtered by level and index and compared at the common level.
pub fn match_group(g: &GroupClosure, entries: &[CatalogEntry]) -> Result<Vec<CatalogMatch>> {
    let level = minimal_level(g);
    let index = ambient_order(g.modulus()) / g.order();
    let gl = reduce(g, level)?;
    let glt = transpose_group(&gl);
    let mut out = Vec::new();
    for e in entries {
        let h = e.closure()?;
        if minimal_level(h) != level || ambient_order(h.modulus()) / h.order() != index {
            continue;
        }
        let hl = reduce(h, level)?;
        if is_conjugate(&hl, &gl)?.is_some() {
            out.push(CatalogMatch { name: e.name.clone(), orientation: Orientation::AsIs });
        }
        if is_conjugate(&hl, &glt)?.is_some() {
            out.push(CatalogMatch { name: e.name.clone(), orientation: Orientation::Transpose });
        }
    }
    Ok(out)
}

/// Fills each vertex's `labels` with the names of matching 2-power-modulus
/// entries (`name` for as-is matches, `name^T` for transpose matches).
pub fn annotate_graph(graph: &mut IsogenyGraph, entries: &[CatalogEntry]) -> Result<()> {
    let two_power: Vec<CatalogEntry> =
        entries.iter().filter(|e| e.spec.modulus().is_two_power()).cloned().collect();
    for v in &mut graph.vertices {
        v.labels = match_group(&v.image, &two_power)?
            .into_iter()
            .map(|m| match m.orientation {
                Orientation::AsIs => m.name,
                Orientation::Transpose => format!("{}^T", m.name),
            })
            .collect();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{ambient_group, full_lift};

    #[test]
    fn builtin_lookups() {
        let h3 = lookup("H_3").unwrap();
        assert_eq!(h3.spec.modulus().n(), 4);
        assert_eq!(h3.spec.generators().len(), 2);
        assert_eq!(h3.source, Source::PublishedText);
        let b03 = lookup("B0(3)").unwrap();
        assert_eq!(b03.closure().unwrap().order(), 12);
        let h193n = lookup("H_193n").unwrap();
        assert_eq!((h193n.spec.modulus().n(), h193n.spec.generators().len()), (8, 3));
        assert!(matches!(lookup("H_999"), Err(Error::UnknownName(_))));
        let names: Vec<String> = builtin_catalog().into_iter().map(|e| e.name).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(names.len(), dedup.len());
    }

    #[test]
    fn construction_orders() {
        for p in CONSTRUCTION_PRIMES {
            let p64 = p as u64;
            let order = |name: String| lookup(&name).unwrap().closure().unwrap().order();
            assert_eq!(order(format!("B0({p})")), (p64 - 1) * (p64 - 1) * p64);
            assert_eq!(order(format!("B1({p})")), (p64 - 1) * p64);
            assert_eq!(order(format!("Csp({p})")), (p64 - 1) * (p64 - 1));
            assert_eq!(order(format!("Nsp({p})")), 2 * (p64 - 1) * (p64 - 1));
            assert_eq!(order(format!("Cns({p})")), p64 * p64 - 1);
            assert_eq!(order(format!("Nns({p})")), 2 * (p64 * p64 - 1));
        }
    }

    #[test]
    fn small_labels_verify() {
        for name in ["H_1", "H_3", "H_193n", "G1-19", "G1-06"] {
            let (computed, ok) = lookup(name).unwrap().verify_label().unwrap().unwrap();
            assert!(ok, "{name}: computed {computed}");
        }
    }

    #[test]
    fn label_syntax() {
        assert_eq!(parse_label("8.96.0.40").unwrap(), vec![8, 96, 0, 40]);
        assert_eq!(parse_label("104.28.1").unwrap(), vec![104, 28, 1]);
        assert!(parse_label("8.96").is_err());
        assert!(parse_label("8.x.0.1").is_err());
    }

    #[test]
    fn file_round_trip() {
        let line = r#"{"name":"H_62j","modulus":8,"generators":[[[3,6],[0,7]],[[3,0],[0,5]],[[5,0],[0,5]],[[7,0],[4,7]]],"label":"8.48.0.115"}"#;
        let entries = parse_catalog(line).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].source, Source::ExternalFile);
        assert_eq!(save_catalog(&entries), format!("{line}\n"));
        assert_eq!(parse_catalog(&save_catalog(&entries)).unwrap(), entries);
        assert!(parse_catalog("").unwrap().is_empty());
        let bad = format!("{line}\n{}", r#"{"name":"X","modulus":0,"generators":[[[1,0],[0,1]]]}"#);
        match parse_catalog(&bad) {
            Err(Error::Parse { line: Some(2), .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_catalog(&format!("{line}\n{line}")), Err(Error::DuplicateName(_))));
        let builtin = builtin_catalog();
        let text = save_catalog(&builtin);
        assert_eq!(save_catalog(&parse_catalog(&text).unwrap()), text);
    }

    #[test]
    fn session_catalog_rejects_duplicates() {
        let mut c = Catalog::builtin();
        let again = vec![lookup("H_3").unwrap()];
        assert!(matches!(c.extend(again), Err(Error::DuplicateName(_))));
        assert!(c.resolve("Nsp(5)").is_ok());
    }

    #[test]
    fn matching() {
        let cat = builtin_catalog();
        let h193n = lookup("H_193n").unwrap().closure().unwrap().clone();
        let m = match_group(&h193n, &cat).unwrap();
        assert!(m.contains(&CatalogMatch { name: "H_193n".into(), orientation: Orientation::AsIs }));
        let t = transpose_group(&h193n);
        let m = match_group(&t, &cat).unwrap();
        assert!(m.contains(&CatalogMatch { name: "H_193n".into(), orientation: Orientation::Transpose }));
        assert!(m.contains(&CatalogMatch { name: "Z2xZ8".into(), orientation: Orientation::AsIs }));
        let gl = full_lift(&ambient_group(Modulus::new(2).unwrap()).unwrap(), 3).unwrap();
        let m = match_group(&gl, &cat).unwrap();
        assert_eq!(m[0].name, "H_1");
    }
}
