//! Runs a few CLI requests in-process and shows their exit codes.

fn main() {
    let requests: &[&[&str]] = &[
        &["dko", "ph", "--max-degree", "12"],
        &["dko", "denominator", "--k-range", "1..6", "--format", "csv"],
        &["dko", "sphere", "--n", "9", "--variant", "differential"],
        &["dko", "ahss", "--space", "RP4"],
        &["dko", "ph", "--max-degree", "10"],
    ];
    for args in requests {
        let out = dko::cli::run_args(args.iter().copied());
        println!("$ {}  (exit {})", args[1..].join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
        println!();
    }
}
