//! Command-line front end; all logic lives in `gl2lab::cli`.

fn main() {
    match gl2lab::cli::run_args(std::env::args_os()) {
        Ok((result, human)) => {
            println!("{}", if human { result.render_human() } else { result.render_json() });
            std::process::exit(result.exit_code());
        }
        Err(text) => print!("{text}"),
    }
}
