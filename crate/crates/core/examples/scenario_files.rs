//! Driving the command-line pipelines in-process on the bundled scenario
//! files.

use std::path::Path;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let coin = fixtures.join("coin.json").display().to_string();
    let ht = fixtures.join("ht_counterexample.json").display().to_string();

    let runs: [&[&str]; 4] = [
        &["update", &coin, "--os", "--event", "el,l1,l2"],
        &["validate-cps", &ht, "--ht"],
        &["os-to-ht", &coin, "--format", "json"],
        &["partition", &coin, "--eps", "1/4"],
    ];
    for args in runs {
        let out = beliefkit::cli::run(args.iter().copied());
        println!("$ beliefkit {}  (exit {})", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
        println!();
    }
}
