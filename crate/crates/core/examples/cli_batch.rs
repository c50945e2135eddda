//! Drive the command-line front end in-process, as the `superstab` binary does.
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let manifest = data.join("batch/smoke.json");
    let c4 = data.join("batch/c4.json");
    let runs: [&[&str]; 3] = [
        &["superstab", "gallery", "cycle(3)", "--format", "text"],
        &["superstab", "param", c4.to_str().unwrap()],
        &["superstab", "batch", manifest.to_str().unwrap()],
    ];
    for argv in runs {
        let code = superstab::cli::run(argv.iter().copied());
        eprintln!("{} -> exit {code}", argv[1..].join(" "));
    }
}
