//! The local-lemma pipeline: classify sets, delete one element per large
//! set, pair the rest, and resample until every small set is balanced.
//!
//! ```sh
//! cargo run --example lll_pipeline
//! ```

use discrepancy::lll::{color_pipeline, PipelineConfig, PipelinePath};
use discrepancy::sampler::{sample_subset, sample_t_sparse, SampleConfig};

fn main() {
    let sys = sample_t_sparse(&SampleConfig {
        n: 500,
        m: 500,
        t: 8,
        seed: 42,
    })
    .unwrap();

    // color the full ground set
    let all: Vec<usize> = (0..sys.n()).collect();
    let (chi, report) = color_pipeline(&sys, &all, 42, &PipelineConfig::default()).unwrap();
    describe("full ground set", &sys, &chi, &report);

    // hereditary flavor: color a random half of the elements
    let subset = sample_subset(sys.n(), 0.5, 7);
    let (chi, report) = color_pipeline(&sys, &subset, 42, &PipelineConfig::default()).unwrap();
    describe("random half", &sys, &chi, &report);
}

fn describe(
    label: &str,
    sys: &discrepancy::SetSystem,
    chi: &discrepancy::Coloring,
    report: &discrepancy::lll::PipelineReport,
) {
    let path = match &report.path {
        PipelinePath::Matching => "matching".to_string(),
        PipelinePath::Fallback(reason) => format!("fallback ({reason:?})"),
    };
    println!(
        "{label}: path {path}, {} large sets, threshold {}, {} resamples, discrepancy {}",
        report.large_sets,
        report.threshold,
        report.resamples,
        sys.coloring_discrepancy(chi)
    );
}
