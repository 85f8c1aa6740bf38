// The command layer without a process: each line is parsed exactly as the
// `gl2lab` binary would parse it, and the JSON documents are printed.
//
// ```bash
// cargo run --release --example command_line
// ```

use gl2lab::cli::{run_args, CommandResult};

/// Command lines run by the example.
pub const LINES: [&str; 6] = [
    "info --name H_3",
    "level --name G1-19",
    "isogeny --gens [[1,0],[1,1]] --mod 2 --full-lift --kernel 0,1 --r 1",
    "twists --name H_3",
    "conjugate --name Z2xZ8 --with-name H_193n --with-transpose",
    "info --name H_999",
];

/// Runs every line and returns the results.
pub fn run_example() -> gl2lab::Result<Vec<CommandResult>> {
    let mut out = Vec::new();
    for line in LINES {
        let args = std::iter::once("gl2lab").chain(line.split_whitespace());
        let (result, _) = run_args(args).map_err(gl2lab::Error::Invalid)?;
        println!("$ gl2lab {line}   # exit {}\n{}", result.exit_code(), result.render_json());
        out.push(result);
    }
    Ok(out)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
