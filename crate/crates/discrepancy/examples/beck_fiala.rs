//! Iterative rounding on a random sparse system: the unconditional
//! `2t - 1` guarantee.
//!
//! ```sh
//! cargo run --example beck_fiala
//! ```

use discrepancy::rounding::beck_fiala_color;
use discrepancy::sampler::{sample_t_sparse, SampleConfig};

fn main() {
    for t in [2, 4, 6, 8] {
        let sys = sample_t_sparse(&SampleConfig {
            n: 100,
            m: 100,
            t,
            seed: 1,
        })
        .unwrap();
        let all: Vec<usize> = (0..sys.n()).collect();
        let chi = beck_fiala_color(&sys, &all).unwrap();
        let disc = sys.coloring_discrepancy(&chi);
        println!(
            "n = m = 100, t = {t}: discrepancy {disc} (guarantee {})",
            2 * t - 1
        );
    }
}
