// Catalog files and matching.
//
// Writes a small JSON-lines catalog, loads it next to the embedded one,
// and matches groups up to conjugacy and transposition.
//
// ```bash
// cargo run --release --example catalog_files
// ```

use gl2lab::catalog::{match_group, save_catalog, Catalog, CatalogEntry, Orientation, Source};
use gl2lab::groups::{generate, transpose_group, SubgroupSpec};

/// Matches found for the transposed `H_193n`, as `(name, orientation)`.
pub fn run_example() -> gl2lab::Result<Vec<(String, Orientation)>> {
    let extra = CatalogEntry::new(
        "my_borel_4",
        SubgroupSpec::from_rows(4, &[[[1, 1], [0, 1]], [[3, 0], [0, 1]], [[1, 0], [0, 3]]])?,
        None,
        Source::ExternalFile,
    )?;
    let text = save_catalog(&[extra]);
    print!("catalog file:\n{text}");
    let path = std::env::temp_dir().join(format!("gl2lab-example-{}.jsonl", std::process::id()));
    std::fs::write(&path, &text)?;
    let mut catalog = Catalog::builtin();
    let loaded = catalog.load(&path);
    std::fs::remove_file(&path)?;
    println!("loaded {} entries; session catalog has {}", loaded?, catalog.len());

    let b4 = generate(&SubgroupSpec::from_rows(4, &[[[1, 0], [1, 1]], [[3, 0], [0, 1]], [[1, 0], [0, 3]]])?)?;
    for m in match_group(&b4, catalog.entries())? {
        println!("lower-triangular Borel mod 4 matches {} ({:?})", m.name, m.orientation);
    }
    let g = transpose_group(catalog.resolve("H_193n")?.closure()?);
    let matches = match_group(&g, catalog.entries())?;
    for m in &matches {
        println!("transpose of H_193n matches {} ({:?})", m.name, m.orientation);
    }
    Ok(matches.into_iter().map(|m| (m.name, m.orientation)).collect())
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
