//! Calibration run for the Random Facet growth envelope.
//!
//! Prints the mean evaluation count per `n` and the ratio `mean / n^2` for
//! each benchmark family. The acceptance suite's envelope constant was
//! frozen from this output (seed 1, 10000 trials) with slack on top.
//!
//!     cargo run --release -p uso-core --example calibrate [seed] [trials]

use uso_core::{run_trials, Family};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let trials: u64 = args.next().map_or(10_000, |s| s.parse().expect("trials"));
    println!("family,n,mean,stddev,max,mean/n^2");
    for family in Family::all() {
        for stats in run_trials(family, &[4, 6, 8, 10, 12], trials, seed).expect("trials") {
            let n2 = (stats.n * stats.n) as f64;
            println!(
                "{},{},{:.3},{:.3},{},{:.4}",
                stats.family, stats.n, stats.mean, stats.stddev, stats.max, stats.mean / n2
            );
        }
    }
}
