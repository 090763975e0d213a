//! Ground truth on small instances: exhaustive and meet-in-the-middle
//! search agree, and both lower-bound what the fast algorithms achieve.
//!
//! ```sh
//! cargo run --example exact_oracle
//! ```

use discrepancy::oracle::{enumerate_discrepancy, exact_hereditary_discrepancy, mitm_discrepancy};
use discrepancy::rounding::beck_fiala_color;
use discrepancy::sampler::{sample_t_sparse, SampleConfig};

fn main() {
    for seed in 0..5 {
        let sys = sample_t_sparse(&SampleConfig {
            n: 12,
            m: 12,
            t: 3,
            seed,
        })
        .unwrap();
        let exact = enumerate_discrepancy(&sys).unwrap();
        let mitm = mitm_discrepancy(&sys).unwrap();
        let herdisc = exact_hereditary_discrepancy(&sys).unwrap();
        let all: Vec<usize> = (0..sys.n()).collect();
        let rounded = sys.coloring_discrepancy(&beck_fiala_color(&sys, &all).unwrap());
        assert_eq!(exact, mitm);
        assert!(exact <= rounded);
        println!("seed {seed}: exact {exact}, hereditary {herdisc}, rounding achieved {rounded}");
    }
}
