//! Discrepancy at most 2 when every possible column shows up often enough.
//!
//! Builds the m = 8, t = 4 system where each of the C(8,4) = 70 columns
//! appears 9 times (n = 630), decomposes the parity defect over the column
//! lattice, and colors the even remainders alternately.
//!
//! ```sh
//! cargo run --example lattice_coloring
//! ```

use discrepancy::lattice::{coverage_check, lattice_color, ColumnUniverse, MultiplicityProfile};
use discrepancy::set_system::SetSystem;

fn main() {
    let universe = ColumnUniverse::new(8, 4).unwrap();
    let mut columns = Vec::new();
    for rank in 0..universe.n_columns() {
        for _ in 0..9 {
            columns.push(universe.unrank(rank));
        }
    }
    let sys = SetSystem::new(8, columns).unwrap();
    println!(
        "system: n = {}, m = {}, t = {}",
        sys.n(),
        sys.m(),
        sys.sparsity()
    );

    let profile = MultiplicityProfile::from_system(&sys).unwrap();
    let (min, missing) = coverage_check(&profile);
    println!("coverage: min multiplicity {min}, {missing} columns missing");

    let schedule = lattice_color(&profile, 0).unwrap();
    let chi = schedule.apply_to_system(&sys).unwrap();
    println!(
        "signed combination: sup norm {}, max |c_i| = {}, {} retries",
        schedule.combination.sup_norm, schedule.combination.max_abs, schedule.combination.retries
    );
    println!(
        "discrepancy: {} (guarantee 2)",
        sys.coloring_discrepancy(&chi)
    );
}
