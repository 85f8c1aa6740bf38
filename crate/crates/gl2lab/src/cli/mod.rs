//! The command layer behind the `gl2lab` binary.
//!
//! Every command produces a [`CommandResult`], rendered as one JSON document
//! with a top-level `"schema": "gl2lab/1"`:
//!
//! ```text
//! {"diagnostics":[...],"payload":{...},"schema":"gl2lab/1","status":"ok"}
//! ```
//!
//! On failure `status` is `"error"` and the payload carries the error `kind`
//! (one of [`Error::KINDS`], `"usage"` or `"verification-failed"`) and a message; the process exit
//! code is 0 exactly when the status is ok. Object keys are sorted and
//! element listings canonicalized, so identical inputs give byte-identical
//! output.
//!
//! Groups are referenced by catalog name (`--name H_3`) or inline
//! generators (`--gens "[[1,0],[1,1]]" --mod 2`, a single matrix or a JSON
//! list of matrices), optionally transposed (`--transpose`) and fully lifted
//! (`--full-lift[=E]`, default exponent 5). The session catalog is the
//! embedded one plus the file named by `--catalog` or `GL2LAB_CATALOG`.

pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{annotate_graph, match_group, Catalog};
use crate::error::{Error, Result};
use crate::groups::{
    ambient_order, fiber_product, full_lift, generate, group_flags, is_conjugate, level_parts, lift, minimal_level,
    set_element_cap, transpose_group, GroupClosure, SubgroupSpec, DEFAULT_CAP,
};
use crate::invariants::label_invariants;
use crate::isogeny::{
    generator_rows, isogeny_image_detailed, propagate_graph, torsion_fixed, IsogenyStep, OddPart,
};
use crate::residues::{matrix_rows_from_vec, Modulus};
use crate::twists::twist_orbit;

/// Version tag of every JSON document.
pub const SCHEMA: &str = "gl2lab/1";

/// Command outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Success.
    Ok,
    /// Failure; the payload names the error kind.
    Error,
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    /// Outcome.
    pub status: Status,
    /// Command-specific document (or error description).
    pub payload: Value,
    /// Free-form notes.
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    /// A successful result.
    pub fn ok(payload: Value, diagnostics: Vec<String>) -> Self {
        CommandResult { status: Status::Ok, payload, diagnostics }
    }

    /// A failed result for a library error.
    pub fn error(e: &Error) -> Self {
        Self::failure(e.kind(), &e.to_string(), Value::Null, vec![])
    }

    /// A failed result with an explicit kind and optional details.
    pub fn failure(kind: &str, message: &str, details: Value, diagnostics: Vec<String>) -> Self {
        let mut payload = json!({"kind": kind, "message": message});
        if !details.is_null() {
            payload["details"] = details;
        }
        CommandResult { status: Status::Error, payload, diagnostics }
    }

    /// The error kind of a failed result.
    pub fn error_kind(&self) -> Option<&str> {
        match self.status {
            Status::Ok => None,
            Status::Error => self.payload["kind"].as_str(),
        }
    }

    /// Process exit code: 0 for ok, 1 for errors, 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self.error_kind() {
            None => 0,
            Some("usage") => 2,
            Some(_) => 1,
        }
    }

    /// The full JSON document.
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        })
    }

    /// Pretty-printed JSON text.
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// A plain-text rendering: graph vertices as a table, everything else
    /// as indented `key: value` lines.
    pub fn render_human(&self) -> String {
        let mut out = format!("status: {}\n", if self.status == Status::Ok { "ok" } else { "error" });
        if let Some(vertices) = self.payload.get("vertices").and_then(Value::as_array) {
            out.push_str(&format!("shape: {}\n", self.payload["shape"].as_str().unwrap_or("?")));
            out.push_str(&format!("{:<4} {:<14} {:<10} {:<6} {:<6} {}\n", "id", "kernel", "torsion", "level", "index", "labels"));
            for v in vertices {
                out.push_str(&format!(
                    "{:<4} {:<14} {:<10} {:<6} {:<6} {}\n",
                    v["id"],
                    format!("{}<{}>", v["kernel"]["generator"], v["kernel"]["order"]),
                    v["torsion"].to_string(),
                    v["level"],
                    v["index"],
                    v["labels"]
                ));
            }
            for e in self.payload["edges"].as_array().into_iter().flatten() {
                out.push_str(&format!("edge {} -- {} (degree {})\n", e["from"], e["to"], e["degree"]));
            }
        } else {
            render_value(&self.payload, 0, &mut out);
        }
        for d in &self.diagnostics {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

// ---------------------------------------------------------------------------
// Arguments.

/// Command-line arguments.
#[derive(Parser, Debug, Clone)]
#[command(name = "gl2lab", version, about = "Finite matrix groups over Z/NZ for 2-adic images of isogeny-torsion graphs")]
pub struct Cli {
    /// Upper bound on the number of elements any closure may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub max_elements: usize,
    /// JSON-lines catalog file added to the embedded catalog.
    #[arg(long, global = true, env = "GL2LAB_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// Print a human-readable rendering instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// The command.
    #[command(subcommand)]
    pub command: Command,
}

/// A group given by catalog name or by inline generators.
#[derive(Args, Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupArgs {
    /// Catalog name, e.g. H_3.
    #[arg(long)]
    pub name: Option<String>,
    /// Generators: one matrix `[[a,b],[c,d]]` or a JSON list of matrices.
    #[arg(long)]
    pub gens: Option<String>,
    /// Modulus for --gens.
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
    /// Use the transposed group.
    #[arg(long)]
    pub transpose: bool,
    /// Replace the group by its full lift to 2-power exponent EXP (default 5).
    #[arg(long, num_args = 0..=1, default_missing_value = "5", value_name = "EXP")]
    pub full_lift: Option<u32>,
}

/// The second group of `conjugate`.
#[derive(Args, Debug, Clone, Default, PartialEq, Eq)]
pub struct OtherGroupArgs {
    /// Catalog name of the second group.
    #[arg(long = "with-name", id = "with_name")]
    pub name: Option<String>,
    /// Generators of the second group.
    #[arg(long = "with-gens", id = "with_gens")]
    pub gens: Option<String>,
    /// Modulus for --with-gens.
    #[arg(long = "with-mod", id = "with_mod")]
    pub modulus: Option<u64>,
    /// Transpose the second group.
    #[arg(long = "with-transpose", id = "with_transpose")]
    pub transpose: bool,
    /// Full lift of the second group to exponent EXP (default 5).
    #[arg(long = "with-full-lift", id = "with_full_lift", num_args = 0..=1, default_missing_value = "5", value_name = "EXP")]
    pub full_lift: Option<u32>,
}

impl From<OtherGroupArgs> for GroupArgs {
    fn from(o: OtherGroupArgs) -> Self {
        GroupArgs { name: o.name, gens: o.gens, modulus: o.modulus, transpose: o.transpose, full_lift: o.full_lift }
    }
}

/// Subcommands.
#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Order, level, index, genus, flags, torsion and label of a group.
    Info {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// The image modulo 32 of an isogenous curve.
    Isogeny {
        #[command(flatten)]
        group: GroupArgs,
        /// Kernel generator `x,y` in (Z/2^r)^2.
        #[arg(long, default_value = "0,0")]
        kernel: String,
        /// Kernel order exponent r.
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Odd part of the degree (does not change the 2-adic image).
        #[arg(long, default_value_t = 1)]
        odd_degree: u32,
    },
    /// The isogeny-torsion graph of a root group.
    Propagate {
        #[command(flatten)]
        group: GroupArgs,
        /// Odd part as `p:C_p` pairs, e.g. `3:2` or `3:2,5:2`.
        #[arg(long, default_value = "")]
        odd: String,
        /// Skip matching vertex images against the catalog.
        #[arg(long)]
        no_match: bool,
    },
    /// Quadratic-twist classes of a group.
    Twists {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Fiber product of an odd-level and a 2-power-level catalog group.
    Fiber {
        /// Catalog name of the odd-level factor.
        #[arg(long)]
        odd: String,
        /// Catalog name of the 2-power-level factor.
        #[arg(long)]
        two: String,
    },
    /// Catalog entries conjugate to a group or its transpose.
    Match {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Checks a fixture transcribed from the tables.
    Verify {
        /// Fixture file.
        fixture: PathBuf,
    },
    /// Parses a catalog file and reports its entries.
    CatalogLoad {
        /// JSON-lines catalog file.
        path: PathBuf,
        /// Also verify each claimed label.
        #[arg(long)]
        verify_labels: bool,
    },
    /// Full preimage of a group at a multiple of its modulus.
    Lift {
        #[command(flatten)]
        group: GroupArgs,
        /// Target modulus.
        #[arg(long)]
        to: u64,
    },
    /// Level, 2-power level and odd conductor.
    Level {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Decides conjugacy of two groups in GL(2, Z/NZ).
    Conjugate {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        other: OtherGroupArgs,
    },
}

// ---------------------------------------------------------------------------
// Helpers.

/// Parses `--gens`: a single matrix or a JSON list of matrices; matrices may
/// also be separated by `;`.
pub fn parse_generators(s: &str) -> Result<Vec<[[i64; 2]; 2]>> {
    let bad = |msg: String| Error::Parse { line: None, msg: format!("generators {s:?}: {msg}") };
    let text = if s.contains(';') { format!("[{}]", s.replace(';', ",")) } else { s.to_string() };
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let as_matrix = |m: &Value| -> Result<[[i64; 2]; 2]> {
        let rows: Vec<Vec<i64>> = serde_json::from_value(m.clone()).map_err(|e| bad(e.to_string()))?;
        matrix_rows_from_vec(&rows)
    };
    let Value::Array(items) = &v else { return Err(bad("expected a JSON array".into())) };
    let is_single = items.first().and_then(|r| r.as_array()).and_then(|r| r.first()).is_some_and(Value::is_number);
    if is_single {
        Ok(vec![as_matrix(&v)?])
    } else {
        items.iter().map(as_matrix).collect()
    }
}

/// Parses a kernel vector `x,y`.
pub fn parse_vector(s: &str) -> Result<[u32; 2]> {
    let bad = || Error::Parse { line: None, msg: format!("kernel {s:?}: expected x,y") };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [x, y] => Ok([x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?]),
        _ => Err(bad()),
    }
}

/// Resolves a group reference against the session catalog; returns the
/// group and a short description of how it was obtained.
pub fn resolve_group(args: &GroupArgs, catalog: &Catalog) -> Result<(GroupClosure, String)> {
    let (mut g, mut desc) = match (&args.name, &args.gens) {
        (Some(name), None) => (catalog.resolve(name)?.closure()?.clone(), name.clone()),
        (None, Some(gens)) => {
            let n = args.modulus.ok_or_else(|| Error::Invalid("--gens needs --mod".into()))?;
            let spec = SubgroupSpec::from_rows(n, &parse_generators(gens)?)?;
            (generate(&spec)?, format!("<{gens}> mod {n}"))
        }
        (Some(_), Some(_)) => return Err(Error::Invalid("give either --name or --gens, not both".into())),
        (None, None) => return Err(Error::Invalid("a group needs --name or --gens".into())),
    };
    if args.transpose {
        g = transpose_group(&g);
        desc = format!("transpose of {desc}");
    }
    if let Some(e) = args.full_lift {
        let m = g.modulus();
        g = if m.is_two_power() {
            full_lift(&g, e)?
        } else {
            lift(&g, Modulus::new((1u64 << e) * m.odd_part() as u64)?)?
        };
        desc = format!("full lift of {desc} to {}", g.modulus());
    }
    Ok((g, desc))
}

/// The standard description of a group: order, level data, index, flags,
/// torsion, label invariants (when the determinant is surjective) and
/// generators.
pub fn describe_group(g: &GroupClosure, diagnostics: &mut Vec<String>) -> Value {
    let (two_level, odd_conductor) = level_parts(g);
    let invariants = match label_invariants(g) {
        Ok(inv) => Some(inv),
        Err(e) => {
            diagnostics.push(format!("no label invariants: {e}"));
            None
        }
    };
    json!({
        "modulus": g.modulus().n(),
        "order": g.order(),
        "index": ambient_order(g.modulus()) / g.order(),
        "level": minimal_level(g).n(),
        "two_level": two_level,
        "odd_conductor": odd_conductor,
        "flags": group_flags(g),
        "torsion": torsion_fixed(g),
        "label": invariants.map(|i| i.label()),
        "invariants": invariants,
        "generators": generator_rows(g),
    })
}

fn session_catalog(cli: &Cli, diagnostics: &mut Vec<String>) -> Result<Catalog> {
    let mut catalog = Catalog::builtin();
    if let Some(path) = &cli.catalog {
        let n = catalog.load(path)?;
        diagnostics.push(format!("loaded {n} catalog entries from {}", path.display()));
    }
    Ok(catalog)
}

fn matches_json(g: &GroupClosure, catalog: &Catalog) -> Result<Value> {
    Ok(serde_json::to_value(match_group(g, catalog.entries())?).expect("serializable"))
}

// ---------------------------------------------------------------------------
// Commands.

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CommandResult {
    set_element_cap(cli.max_elements);
    let mut diagnostics = Vec::new();
    match dispatch(cli, &mut diagnostics) {
        Ok(result) => {
            let mut result = result;
            diagnostics.append(&mut result.diagnostics);
            result.diagnostics = diagnostics;
            result
        }
        Err(e) => {
            let mut r = CommandResult::error(&e);
            r.diagnostics = diagnostics;
            r
        }
    }
}

/// Parses arguments (the first is the program name) and runs them; usage
/// errors become results of kind `"usage"`. Help and version requests are
/// returned as `Err` text to print verbatim.
pub fn run_args<I, T>(args: I) -> std::result::Result<(CommandResult, bool), String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok((run(&cli), cli.human)),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Err(e.to_string()),
            _ => Ok((CommandResult::failure("usage", e.to_string().trim(), Value::Null, vec![]), false)),
        },
    }
}

fn dispatch(cli: &Cli, diagnostics: &mut Vec<String>) -> Result<CommandResult> {
    let catalog = session_catalog(cli, diagnostics)?;
    match &cli.command {
        Command::Info { group } => cmd_info(group, &catalog),
        Command::Isogeny { group, kernel, r, odd_degree } => cmd_isogeny(group, kernel, *r, *odd_degree, &catalog),
        Command::Propagate { group, odd, no_match } => cmd_propagate(group, odd, !no_match, &catalog),
        Command::Twists { group } => cmd_twists(group, &catalog),
        Command::Fiber { odd, two } => cmd_fiber(odd, two, &catalog),
        Command::Match { group } => cmd_match(group, &catalog),
        Command::Verify { fixture } => Ok(verify::cmd_verify(fixture, &catalog)),
        Command::CatalogLoad { path, verify_labels } => cmd_catalog_load(path, *verify_labels),
        Command::Lift { group, to } => cmd_lift(group, *to, &catalog),
        Command::Level { group } => cmd_level(group, &catalog),
        Command::Conjugate { group, other } => cmd_conjugate(group, &other.clone().into(), &catalog),
    }
}

/// `info`: the standard description of a group.
pub fn cmd_info(group: &GroupArgs, catalog: &Catalog) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    let mut diagnostics = vec![];
    let mut payload = describe_group(&g, &mut diagnostics);
    payload["group"] = json!(desc);
    Ok(CommandResult::ok(payload, diagnostics))
}

/// `isogeny`: the transformed image with its invariants and catalog matches.
pub fn cmd_isogeny(
    group: &GroupArgs,
    kernel: &str,
    r: u32,
    odd_degree: u32,
    catalog: &Catalog,
) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    let step = IsogenyStep::new(r, parse_vector(kernel)?)?.with_odd_degree(odd_degree)?;
    let detail = isogeny_image_detailed(&g, &step)?;
    let mut diagnostics = vec![];
    let mut image = describe_group(&detail.image, &mut diagnostics);
    image["matches"] = matches_json(&detail.image, catalog)?;
    Ok(CommandResult::ok(
        json!({
            "group": desc,
            "step": step,
            "level_exponent": detail.level_exponent,
            "conjugator": detail.conjugator.rows(),
            "image": image,
        }),
        diagnostics,
    ))
}

/// `propagate`: the isogeny-torsion graph, with catalog labels on vertices.
pub fn cmd_propagate(group: &GroupArgs, odd: &str, with_matches: bool, catalog: &Catalog) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    let mut graph = propagate_graph(&g, &OddPart::parse(odd)?)?;
    if with_matches {
        annotate_graph(&mut graph, catalog.entries())?;
    }
    let mut payload = graph.to_json();
    payload["group"] = json!(desc);
    let mut diagnostics = vec![];
    if graph.uniform_index().is_none() {
        diagnostics.push("vertex indices differ across the graph".into());
    }
    Ok(CommandResult::ok(payload, diagnostics))
}

/// `twists`: the twist classes of `<G, -Id>` (2-power groups at modulus 32).
pub fn cmd_twists(group: &GroupArgs, catalog: &Catalog) -> Result<CommandResult> {
    let (mut g, desc) = resolve_group(group, catalog)?;
    let mut diagnostics = vec![];
    // Twists by 2 and -2 only become visible at level 8, and the 2-adic
    // classification is settled modulo 32.
    if g.modulus().is_two_power() && g.modulus().n() < 32 {
        g = full_lift(&g, 5)?;
        diagnostics.push("2-power group lifted to modulus 32 before classifying twists".into());
    }
    let orbit = twist_orbit(&g)?;
    if !g.contains_minus_id() {
        diagnostics.push("-Id adjoined before computing twists".into());
    }
    let members: Vec<Value> = orbit
        .members
        .iter()
        .map(|t| {
            json!({
                "order": t.order(),
                "contains_minus_id": t.contains_minus_id(),
                "generators": generator_rows(t),
            })
        })
        .collect();
    Ok(CommandResult::ok(json!({"group": desc, "classes": orbit.size(), "members": members}), diagnostics))
}

/// `fiber`: the fiber product of an odd-level and a 2-power-level group.
pub fn cmd_fiber(odd: &str, two: &str, catalog: &Catalog) -> Result<CommandResult> {
    let a = catalog.resolve(odd)?.closure()?;
    let b = catalog.resolve(two)?.closure()?;
    let g = fiber_product(a, b)?;
    let mut diagnostics = vec![];
    let mut payload = describe_group(&g, &mut diagnostics);
    payload["group"] = json!(format!("{odd} x {two}"));
    Ok(CommandResult::ok(payload, diagnostics))
}

/// `match`: catalog entries conjugate to the group or its transpose.
pub fn cmd_match(group: &GroupArgs, catalog: &Catalog) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    Ok(CommandResult::ok(json!({"group": desc, "matches": matches_json(&g, catalog)?}), vec![]))
}

/// `catalog-load`: entries of a catalog file, optionally with label checks.
pub fn cmd_catalog_load(path: &std::path::Path, verify_labels: bool) -> Result<CommandResult> {
    let entries = crate::catalog::load_catalog(path)?;
    let mut rows = Vec::new();
    let mut diagnostics = vec![];
    for e in &entries {
        let mut row = json!({
            "name": e.name,
            "modulus": e.spec.modulus().n(),
            "generators": e.spec.generators().len(),
            "label": e.claimed_label,
        });
        if verify_labels {
            match e.verify_label() {
                Ok(Some((computed, ok))) => {
                    row["computed_label"] = json!(computed);
                    row["label_ok"] = json!(ok);
                }
                Ok(None) => {}
                Err(err) => diagnostics.push(format!("{}: {err}", e.name)),
            }
        }
        rows.push(row);
    }
    Ok(CommandResult::ok(json!({"path": path.display().to_string(), "count": entries.len(), "entries": rows}), diagnostics))
}

/// `lift`: the full preimage at a multiple of the modulus.
pub fn cmd_lift(group: &GroupArgs, to: u64, catalog: &Catalog) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    let h = lift(&g, Modulus::new(to)?)?;
    let mut diagnostics = vec![];
    let mut payload = describe_group(&h, &mut diagnostics);
    payload["group"] = json!(format!("lift of {desc} to {to}"));
    Ok(CommandResult::ok(payload, diagnostics))
}

/// `level`: the level and its 2-power and odd parts.
pub fn cmd_level(group: &GroupArgs, catalog: &Catalog) -> Result<CommandResult> {
    let (g, desc) = resolve_group(group, catalog)?;
    let (two_level, odd_conductor) = level_parts(&g);
    Ok(CommandResult::ok(
        json!({
            "group": desc,
            "modulus": g.modulus().n(),
            "level": minimal_level(&g).n(),
            "two_level": two_level,
            "odd_conductor": odd_conductor,
        }),
        vec![],
    ))
}

/// `conjugate`: whether two groups are conjugate, with a conjugator.
pub fn cmd_conjugate(a: &GroupArgs, b: &GroupArgs, catalog: &Catalog) -> Result<CommandResult> {
    let (g, gd) = resolve_group(a, catalog)?;
    let (h, hd) = resolve_group(b, catalog)?;
    let p = is_conjugate(&g, &h)?;
    Ok(CommandResult::ok(
        json!({
            "group": gd,
            "other": hd,
            "conjugate": p.is_some(),
            "conjugator": p.map(|p| p.rows()),
        }),
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_line(line: &str) -> CommandResult {
        let args = std::iter::once("gl2lab").chain(line.split_whitespace());
        run_args(args).unwrap().0
    }

    #[test]
    fn generator_parsing() {
        assert_eq!(parse_generators("[[1,0],[0,1]]").unwrap(), vec![[[1, 0], [0, 1]]]);
        assert_eq!(parse_generators("[[[1,0],[0,1]],[[3,0],[0,1]]]").unwrap().len(), 2);
        assert_eq!(parse_generators("[[1,0],[0,1]];[[3,0],[0,1]]").unwrap().len(), 2);
        assert!(parse_generators("[[1,0]]").is_err());
        assert!(parse_generators("x").is_err());
        assert_eq!(parse_vector("0,1").unwrap(), [0, 1]);
        assert!(parse_vector("0").is_err());
    }

    #[test]
    fn info_examples() {
        let r = run_line("info --name H_3");
        assert_eq!(r.payload["label"], "4.2.0");
        assert_eq!(r.exit_code(), 0);
        let r = run_line("info --gens [[1,0],[0,1]] --mod 2");
        assert_eq!(r.payload["order"], 1);
        let r = run_line("info --name H_193n --transpose");
        assert_eq!(r.payload["label"], "8.96.0");
        assert_eq!(r.to_json()["schema"], SCHEMA);
    }

    #[test]
    fn error_results() {
        let r = run_line("info --name H_999");
        assert_eq!(r.error_kind(), Some("unknown-name"));
        assert_eq!(r.exit_code(), 1);
        let r = run_line("isogeny --name H_1 --r 1 --kernel 0,1");
        assert_eq!(r.error_kind(), Some("kernel-too-large"));
        assert!(r.payload["message"].as_str().unwrap().contains("kernel larger than level permits"));
        let r = run_line("frobnicate");
        assert_eq!(r.error_kind(), Some("usage"));
        assert_eq!(r.exit_code(), 2);
        let r = run_line("info --max-elements 10 --name G1-19");
        assert_eq!(r.error_kind(), Some("cap-exceeded"));
    }

    #[test]
    fn isogeny_examples() {
        let r = run_line("isogeny --name H_1 --r 0");
        assert_eq!(r.payload["image"]["order"], ambient_order(Modulus::new(32).unwrap()));
        let r = run_line("isogeny --gens [[1,0],[1,1]] --mod 2 --full-lift --kernel 0,1 --r 1");
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.payload["image"]["index"], 3);
    }

    #[test]
    fn small_commands() {
        let r = run_line("propagate --name H_1");
        assert_eq!(r.payload["vertex_count"], 1);
        assert_eq!(r.payload["vertices"][0]["labels"][0], "H_1");
        let r = run_line("twists --name H_3");
        assert_eq!(r.payload["classes"], 3);
        assert_eq!(run_line("twists --name H_1").payload["classes"], 1);
        assert_eq!(r.payload["members"][0]["contains_minus_id"], true);
        let r = run_line("level --name G1-19");
        assert_eq!((r.payload["two_level"].as_u64(), r.payload["odd_conductor"].as_u64()), (Some(4), Some(3)));
        let r = run_line("lift --name H_3 --to 8");
        assert_eq!(r.payload["level"], 4);
        let r = run_line("conjugate --name Z2xZ8 --with-name H_193n --with-transpose");
        assert_eq!(r.payload["conjugate"], true);
        let r = run_line("match --name H_193n --transpose");
        assert!(r.payload["matches"].as_array().unwrap().iter().any(|m| m["name"] == "H_193n" && m["orientation"] == "transpose"));
        let r = run_line("fiber --odd B0(3) --two H_3");
        assert_eq!(r.payload["modulus"], 12);
        assert!(run_line("propagate --name H_1").render_human().contains("shape: L_1"));
    }

    #[test]
    fn output_is_deterministic() {
        let a = run_line("propagate --gens [[1,0],[0,1]] --mod 2").render_json();
        let b = run_line("propagate --gens [[1,0],[0,1]] --mod 2").render_json();
        assert_eq!(a, b);
        assert!(a.contains("\"T_4\""));
    }
}
