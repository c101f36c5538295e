//! Early-detection experiment: the teacher's accuracy degrades as fewer
//! test-time comments are visible, while the distilled student needs none.
//!
//! Run with: cargo run --example comment_sweep

use casfend::config::Config;
use casfend::corpus::{chronological_split, generate_synthetic_corpus, SyntheticSpec};
use casfend::emolex::EmotionResources;
use casfend::evalkit::comment_proportion_sweep;
use casfend::student::KnowledgeSet;
use casfend::textenc::Vocabulary;
use casfend::trainer::{train_student, train_teacher, StudentObjective};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = Config::default();
    cfg.model.d = 16;
    cfg.model.k = 8;
    cfg.training.max_epochs = 8;

    let spec = SyntheticSpec {
        n_records: 240,
        ..SyntheticSpec::default()
    };
    let records = generate_synthetic_corpus(&spec, cfg.seed)?;
    let split = chronological_split(&records, (4, 1, 1))?;
    let vocab = Vocabulary::build(&split.train, cfg.model.min_count)?;
    let res = EmotionResources::builtin();

    let teacher = train_teacher(&cfg, &split, &vocab, &res)?;
    let student = train_student(
        &cfg,
        &split,
        &vocab,
        &res,
        &teacher.params,
        cfg.training.alpha,
        StudentObjective::Adaptive(KnowledgeSet::Full),
    )?;

    let sweep = comment_proportion_sweep(
        &cfg,
        &teacher.params,
        &student.params,
        &vocab,
        &res,
        &split.test,
        &[0.0, 0.25, 0.5, 0.75, 1.0],
    )?;
    println!("{}", sweep.to_table());
    println!("\nCSV:\n{}", sweep.to_csv());
    Ok(())
}
