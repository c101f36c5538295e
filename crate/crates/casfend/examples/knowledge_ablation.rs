//! Compare the full three-knowledge student against variants that drop the
//! semantic, emotional, or overall knowledge channel, using paired seeds so
//! every variant sees the same data and teacher.
//!
//! Run with: cargo run --example knowledge_ablation

use casfend::config::Config;
use casfend::corpus::{chronological_split, generate_synthetic_corpus, SyntheticSpec};
use casfend::emolex::EmotionResources;
use casfend::evalkit::{ablation_csv, ablation_sweep};
use casfend::textenc::Vocabulary;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = Config::default();
    cfg.model.d = 16;
    cfg.model.k = 8;
    cfg.training.max_epochs = 6;

    let spec = SyntheticSpec {
        n_records: 180,
        ..SyntheticSpec::default()
    };
    let records = generate_synthetic_corpus(&spec, cfg.seed)?;
    let split = chronological_split(&records, (4, 1, 1))?;
    let vocab = Vocabulary::build(&split.train, cfg.model.min_count)?;
    let res = EmotionResources::builtin();

    let rows = ablation_sweep(&cfg, &split, &vocab, &res, &[1, 2])?;
    print!("{}", ablation_csv(&rows));
    for row in &rows {
        println!("{:<14} mean test macF1 = {:.4}", row.variant, row.mean_mac_f1);
    }
    Ok(())
}
