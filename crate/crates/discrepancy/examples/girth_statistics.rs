//! How rare are cycles among large sets? The deletion scheme needs the
//! element/large-set graph to be a forest, and at realistic scales it
//! almost always is.
//!
//! ```sh
//! cargo run --example girth_statistics
//! ```

use discrepancy::experiment::girth_stats;

fn main() {
    let (n, m, t, trials) = (2000, 2000, 20, 50);
    let stats = girth_stats(n, m, t, trials, 0).unwrap();
    let finite = stats.iter().filter(|g| g.is_some()).count();
    for (trial, g) in stats.iter().enumerate() {
        if let Some(girth) = g {
            println!("trial {trial}: girth {girth}");
        }
    }
    println!(
        "n = m = {n}, t = {t}: finite girth in {finite}/{trials} trials ({})",
        if finite == 0 {
            "all forests"
        } else {
            "cycles present"
        }
    );
}
