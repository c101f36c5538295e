//! Compute the evaluation metrics (accuracy, macro F1, per-class F1, AUC and
//! standardized partial AUC) from raw scores and labels.
//!
//! Run with: cargo run --example metrics

use casfend::evalkit::{evaluate_scores, DEFAULT_THRESHOLD};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Scores are P(fake); labels use fake = 1 as the positive class.
    let scores = [0.92, 0.81, 0.64, 0.58, 0.44, 0.40, 0.23, 0.11, 0.55, 0.35];
    let labels = [1u8, 1, 1, 0, 1, 0, 0, 0, 0, 1];

    let report = evaluate_scores(&scores, &labels, DEFAULT_THRESHOLD)?;
    println!("{}", report.to_table());
    println!("\nas JSON:\n{}", report.to_json());
    Ok(())
}
