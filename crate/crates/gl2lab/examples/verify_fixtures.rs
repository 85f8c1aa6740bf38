// Checks the shipped table fixtures against computed isogeny graphs.
//
// Rows whose groups are not in the session catalog are skipped; set
// `GL2LAB_CATALOG` to a JSON-lines catalog file to check more of them.
//
// ```bash
// GL2LAB_CATALOG=/path/to/catalog.jsonl cargo run --release --example verify_fixtures
// ```

use std::path::PathBuf;

use gl2lab::catalog::Catalog;
use gl2lab::cli::verify::{verify_file, CheckStatus};

/// `(fixture, passed, failed, skipped)` per fixture file.
pub fn run_example() -> gl2lab::Result<Vec<(String, usize, usize, usize)>> {
    let mut catalog = Catalog::builtin();
    if let Some(path) = std::env::var_os("GL2LAB_CATALOG") {
        let n = catalog.load(&PathBuf::from(path))?;
        println!("loaded {n} external catalog entries");
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let report = verify_file(&f, &catalog)?;
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let counts =
            (report.count(CheckStatus::Pass), report.count(CheckStatus::Fail), report.count(CheckStatus::Skip));
        println!("{name}: {} passed, {} failed, {} skipped", counts.0, counts.1, counts.2);
        for c in report.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
            println!("  FAIL {}: {}", c.name, c.detail);
        }
        out.push((name, counts.0, counts.1, counts.2));
    }
    Ok(out)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
