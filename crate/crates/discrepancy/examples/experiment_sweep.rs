//! A reproducible sweep: same config + seed, byte-identical rows (apart
//! from the timing column).
//!
//! ```sh
//! cargo run --example experiment_sweep
//! ```

use discrepancy::experiment::{run_experiment, ExperimentConfig};

const CONFIG: &str = "\
master_seed = 2024

sweep
n = 100
m = 100
t = 3..6
trials = 3
algorithms = bf,lll
y_prob = 1.0
";

fn main() {
    let cfg = ExperimentConfig::from_text(CONFIG).unwrap();
    print!("{}", run_experiment(&cfg).unwrap());
}
