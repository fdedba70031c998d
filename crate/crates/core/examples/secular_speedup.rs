//! Times lazy greedy with dense-eigensolve gains against secular gains.
//!
//! cargo run --release --example secular_speedup -- [n] [m] [k_frac]

use spectral_appraise::bench::{run_bench, BenchConfig};

fn main() -> spectral_appraise::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|s| s.parse().ok()).unwrap_or(200);
    let m = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let k_frac = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let config = BenchConfig {
        ns: vec![n],
        m,
        k_fracs: vec![k_frac],
        repeats: 1,
        ..BenchConfig::default()
    };
    let report = run_bench(&config)?;
    print!("{}", report.table());
    if !report.all_identical() {
        eprintln!("oracle and secular selections differ");
        std::process::exit(5);
    }
    Ok(())
}
