//! Checking transcribed table fixtures against computed isogeny graphs.
//!
//! A fixture is a JSON document with `"kind": "table"` or `"kind": "graph"`:
//!
//! ```text
//! {"schema":"gl2lab/1","kind":"table","shape":"T_8","edges":[[0,1],...],
//!  "rows":[{"row":1,"torsion":[[2,8],[8],...],
//!           "vertices":[{"name":"H_193n","label":"8.96.0.40"},...],"example":"210.e"}]}
//! ```
//!
//! Vertex `i` of a row is the `i`-th curve of the class; `torsion` symbols are
//! `[d]` for `Z/d` and `[d1,d2]` for `Z/d1 x Z/d2`. A `graph` fixture adds an
//! explicit `"root"` group reference (`name`/`generators`+`modulus`,
//! `transpose`), an optional `"odd"` part and `"uniform_index"`.
//!
//! For a `table` row the root is the catalog group named in its first vertex;
//! catalog generators use the opposite (row-vector) action, so the transpose
//! is tried first and the group as given second. Rows whose root is not in
//! the session catalog are skipped with a notice.
//!
//! Each checked row propagates the root and reports, up to graph
//! automorphism: shape, vertex count, adjacency with torsion, adjacency with
//! torsion and label invariants `N.i.g`, vertex names (when every name
//! resolves), the uniform index, and the duality round trip on every edge.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{match_group, parse_label, Catalog, Orientation};
use crate::error::{Error, Result};
use crate::groups::{full_lift, generate, transpose_group, GroupClosure, SubgroupSpec};
use crate::invariants::{label_invariants, CurveInvariants};
use crate::isogeny::{find_graph_isomorphism, propagate_graph, IsogenyGraph, OddPart, TorsionPair};

use super::CommandResult;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// The computed data agree with the fixture.
    Pass,
    /// They disagree.
    Fail,
    /// The check could not be run (missing catalog data).
    Skip,
}

/// One named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// `row N: what`.
    pub name: String,
    /// Outcome.
    pub status: CheckStatus,
    /// Explanation.
    pub detail: String,
}

impl Check {
    fn new(row: u64, what: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name: format!("row {row}: {what}"), status, detail: detail.into() }
    }

    fn skip(row: u64, what: &str, detail: impl Into<String>) -> Self {
        Check { name: format!("row {row}: {what}"), status: CheckStatus::Skip, detail: detail.into() }
    }
}

/// The checks of a verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// All checks in order.
    pub checks: Vec<Check>,
}

impl VerifyReport {
    /// Number of checks with the given status.
    pub fn count(&self, s: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// True when no check failed.
    pub fn ok(&self) -> bool {
        self.count(CheckStatus::Fail) == 0
    }

    /// Summary document.
    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.count(CheckStatus::Pass),
            "failed": self.count(CheckStatus::Fail),
            "skipped": self.count(CheckStatus::Skip),
            "checks": self.checks,
        })
    }
}

/// A parsed fixture row.
#[derive(Clone, Debug)]
struct Row {
    number: u64,
    torsion: Vec<TorsionPair>,
    names: Vec<Option<String>>,
    labels: Vec<Option<(u32, u64, u64)>>,
}

fn triple(i: &CurveInvariants) -> (u32, u64, u64) {
    (i.level, i.index_in_ambient, i.genus)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { line: None, msg: msg.into() }
}

fn parse_rows(doc: &Value) -> Result<Vec<Row>> {
    let rows = doc["rows"].as_array().ok_or_else(|| bad("fixture has no rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let number = r["row"].as_u64().unwrap_or(i as u64 + 1);
            let torsion = r["torsion"]
                .as_array()
                .ok_or_else(|| bad(format!("row {number}: no torsion column")))?
                .iter()
                .map(|t| {
                    let sym: Vec<u32> = serde_json::from_value(t.clone()).map_err(|e| bad(e.to_string()))?;
                    TorsionPair::from_symbol(&sym)
                })
                .collect::<Result<Vec<_>>>()?;
            let vertices = r["vertices"].as_array().cloned().unwrap_or_default();
            let names = vertices.iter().map(|v| v["name"].as_str().map(String::from)).collect();
            let labels = vertices
                .iter()
                .map(|v| match v["label"].as_str() {
                    Some(s) => {
                        let p = parse_label(s)?;
                        Ok(Some((p[0] as u32, p[1], p[2])))
                    }
                    None => Ok(None),
                })
                .collect::<Result<Vec<_>>>()?;
            if !vertices.is_empty() && vertices.len() != torsion.len() {
                return Err(bad(format!("row {number}: torsion and vertex columns differ in length")));
            }
            Ok(Row { number, torsion, names, labels })
        })
        .collect()
}

fn parse_edges(doc: &Value) -> Result<Vec<(usize, usize)>> {
    serde_json::from_value(doc["edges"].clone()).map_err(|e| bad(format!("edges: {e}")))
}

/// The root group of a `graph` fixture.
fn explicit_root(spec: &Value, catalog: &Catalog) -> Result<GroupClosure> {
    let g = if let Some(name) = spec["name"].as_str() {
        catalog.resolve(name)?.closure()?.clone()
    } else {
        let n = spec["modulus"].as_u64().ok_or_else(|| bad("root needs a name or a modulus"))?;
        let rows: Vec<[[i64; 2]; 2]> =
            serde_json::from_value(spec["generators"].clone()).map_err(|e| bad(format!("root generators: {e}")))?;
        generate(&SubgroupSpec::from_rows(n, &rows)?)?
    };
    Ok(if spec["transpose"].as_bool().unwrap_or(false) { transpose_group(&g) } else { g })
}

fn at_two_power(g: GroupClosure) -> Result<GroupClosure> {
    if g.modulus().is_two_power() && g.modulus().n() < 32 {
        full_lift(&g, 5)
    } else {
        Ok(g)
    }
}

/// Checks one row against the graph of `root`; `orientation` says how
/// catalog names relate to vertex images.
fn check_row(
    row: &Row,
    shape: Option<&str>,
    edges: &[(usize, usize)],
    graph: &IsogenyGraph,
    orientation: Orientation,
    uniform_index: Option<u64>,
    catalog: &Catalog,
) -> Result<Vec<Check>> {
    let r = row.number;
    let n = graph.vertices.len();
    let mut out = Vec::new();
    if let Some(shape) = shape {
        out.push(Check::new(r, "shape", graph.shape == shape, format!("computed {}, expected {shape}", graph.shape)));
    }
    let count_ok = n == row.torsion.len();
    out.push(Check::new(r, "vertex count", count_ok, format!("computed {n}, expected {}", row.torsion.len())));
    if !count_ok {
        return Ok(out);
    }
    let computed_edges = graph.edge_pairs();
    let torsion_ok = |i: usize, j: usize| row.torsion[i] == graph.vertices[j].torsion;
    let phi = find_graph_isomorphism(n, edges, &computed_edges, torsion_ok);
    out.push(Check::new(
        r,
        "edges and torsion",
        phi.is_some(),
        match &phi {
            Some(p) => format!("vertex map {p:?}"),
            None => format!("no automorphism matches torsion {:?}", graph.torsion_column()),
        },
    ));

    let invariants: Vec<CurveInvariants> =
        graph.vertices.iter().map(|v| label_invariants(&v.image)).collect::<Result<_>>()?;
    let label_ok = |i: usize, j: usize| row.labels[i].is_none_or(|l| l == triple(&invariants[j]));
    if row.labels.iter().any(Option::is_some) {
        let phi = find_graph_isomorphism(n, edges, &computed_edges, |i, j| torsion_ok(i, j) && label_ok(i, j));
        let computed: Vec<String> = invariants.iter().map(|i| i.label()).collect();
        out.push(Check::new(r, "labels", phi.is_some(), format!("computed {computed:?}")));
    }

    let expected = uniform_index.or_else(|| {
        let idx: Vec<u64> = row.labels.iter().flatten().map(|l| l.1).collect();
        (idx.len() == n && idx.windows(2).all(|w| w[0] == w[1])).then(|| idx[0])
    });
    if let Some(expected) = expected {
        let got = graph.uniform_index();
        out.push(Check::new(r, "uniform index", got == Some(expected), format!("computed {got:?}, expected {expected}")));
    }

    let missing: Vec<&str> =
        row.names.iter().flatten().filter(|s| catalog.get(s).is_none()).map(String::as_str).collect();
    if row.names.len() != n || row.names.iter().any(Option::is_none) {
        out.push(Check::skip(r, "names", "fixture row lacks vertex names"));
    } else if !missing.is_empty() {
        out.push(Check::skip(r, "names", format!("not in the session catalog: {}", missing.join(", "))));
    } else {
        let mut name_ok = vec![vec![false; n]; n];
        for (i, name) in row.names.iter().enumerate() {
            let entry = catalog.resolve(name.as_deref().unwrap())?;
            for (j, v) in graph.vertices.iter().enumerate() {
                name_ok[i][j] = match_group(&v.image, std::slice::from_ref(entry))?
                    .iter()
                    .any(|m| m.orientation == orientation);
            }
        }
        let phi = find_graph_isomorphism(n, edges, &computed_edges, |i, j| {
            torsion_ok(i, j) && label_ok(i, j) && name_ok[i][j]
        });
        out.push(Check::new(
            r,
            "names",
            phi.is_some(),
            match &phi {
                Some(p) => format!("vertex map {p:?}"),
                None => "no automorphism matches the named groups".to_string(),
            },
        ));
    }

    let failures = graph.duality_failures()?;
    out.push(Check::new(r, "duality", failures.is_empty(), format!("{} failing directed edges", failures.len())));
    Ok(out)
}

/// Verifies a parsed fixture document.
pub fn verify_document(doc: &Value, catalog: &Catalog) -> Result<VerifyReport> {
    let kind = doc["kind"].as_str().ok_or_else(|| bad("fixture has no kind"))?;
    let shape = doc["shape"].as_str();
    let edges = parse_edges(doc)?;
    let odd = OddPart::parse(doc["odd"].as_str().unwrap_or(""))?;
    let uniform_index = doc["uniform_index"].as_u64();
    let mut report = VerifyReport::default();
    for row in parse_rows(doc)? {
        match kind {
            "graph" => {
                let root = at_two_power(explicit_root(&doc["root"], catalog)?)?;
                let transposed = doc["root"]["transpose"].as_bool().unwrap_or(false);
                let orientation = if transposed { Orientation::Transpose } else { Orientation::AsIs };
                let graph = propagate_graph(&root, &odd)?;
                report.checks.extend(check_row(&row, shape, &edges, &graph, orientation, uniform_index, catalog)?);
            }
            "table" => {
                let Some(Some(first)) = row.names.first() else {
                    report.checks.push(Check::skip(row.number, "row", "no root name"));
                    continue;
                };
                let Some(entry) = catalog.get(first) else {
                    report.checks.push(Check::skip(row.number, "row", format!("{first} is not in the session catalog")));
                    continue;
                };
                let base = entry.closure()?;
                let mut chosen = None;
                for orientation in [Orientation::Transpose, Orientation::AsIs] {
                    let g = if orientation == Orientation::Transpose { transpose_group(base) } else { base.clone() };
                    let graph = propagate_graph(&at_two_power(g)?, &odd)?;
                    if graph.vertices.len() == row.torsion.len() || chosen.is_none() {
                        let fits = graph.vertices.len() == row.torsion.len();
                        chosen = Some((graph, orientation));
                        if fits {
                            break;
                        }
                    }
                }
                let (graph, orientation) = chosen.expect("at least one orientation tried");
                report.checks.extend(check_row(&row, shape, &edges, &graph, orientation, uniform_index, catalog)?);
            }
            other => return Err(bad(format!("unknown fixture kind {other:?}"))),
        }
    }
    Ok(report)
}

/// Verifies a fixture file.
pub fn verify_file(path: &Path, catalog: &Catalog) -> Result<VerifyReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    verify_document(&doc, catalog)
}

/// `verify`: status ok exactly when no check fails (skips do not count).
pub fn cmd_verify(path: &Path, catalog: &Catalog) -> CommandResult {
    match verify_file(path, catalog) {
        Ok(report) => {
            let mut payload = report.to_json();
            payload["fixture"] = json!(path.display().to_string());
            let skipped = report.count(CheckStatus::Skip);
            let diagnostics =
                if skipped > 0 { vec![format!("{skipped} checks skipped for lack of catalog data")] } else { vec![] };
            if report.ok() {
                CommandResult::ok(payload, diagnostics)
            } else {
                let failed = report.count(CheckStatus::Fail);
                CommandResult::failure("verification-failed", &format!("{failed} checks failed"), payload, diagnostics)
            }
        }
        Err(e) => CommandResult::error(&e),
    }
}
