//! End-to-end pipeline on a small synthetic corpus: generate data, split it
//! chronologically, train the comment-aware teacher, distill the content-only
//! student, and compare them on the held-out test set.
//!
//! Run with: cargo run --example quickstart

use casfend::config::Config;
use casfend::corpus::{chronological_split, generate_synthetic_corpus, SyntheticSpec};
use casfend::emolex::EmotionResources;
use casfend::student::KnowledgeSet;
use casfend::textenc::Vocabulary;
use casfend::trainer::{evaluate_student, evaluate_teacher, train_student, train_teacher, StudentObjective};

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
    println!(
        "corpus: {} train / {} val / {} test",
        split.train.len(),
        split.val.len(),
        split.test.len()
    );

    let vocab = Vocabulary::build(&split.train, cfg.model.min_count)?;
    let res = EmotionResources::builtin();

    let teacher = train_teacher(&cfg, &split, &vocab, &res)?;
    println!(
        "teacher: best epoch {} (val macF1 {:.4})",
        teacher.best_epoch, teacher.best_val_mac_f1
    );

    let student = train_student(
        &cfg,
        &split,
        &vocab,
        &res,
        &teacher.params,
        cfg.training.alpha,
        StudentObjective::Adaptive(KnowledgeSet::Full),
    )?;
    println!(
        "student: best epoch {} (val macF1 {:.4})",
        student.best_epoch, student.best_val_mac_f1
    );

    let t_report = evaluate_teacher(&cfg, &teacher.params, &vocab, &res, &split.test, 1.0)?;
    let s_report = evaluate_student(&cfg, &student.params, &vocab, &res, &split.test)?;
    println!("\nteacher on test (all comments visible):\n{}", t_report.to_table());
    println!("\nstudent on test (content only):\n{}", s_report.to_table());
    Ok(())
}
