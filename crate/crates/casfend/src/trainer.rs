//! Two-stage training: teacher on content+comments, then a content-only
//! student distilled from the frozen teacher. Deterministic given (seed,
//! config, corpus).

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::corpus::{sample_comments, CorpusSplit, NewsRecord};
use crate::emolex::EmotionResources;
use crate::error::{CheckpointError, TrainError};
use crate::evalkit::{evaluate_scores, EvalReport, DEFAULT_THRESHOLD};
use crate::nncore::{
    sha256_file, AdamState, BoundParams, Checkpoint, CheckpointKind, Graph, ParamSet,
};
use crate::student::{KdBaseline, KnowledgeSet, StudentModel};
use crate::teacher::{prepare_input, ModelInput, TeacherModel, TeacherTrace};
use crate::textenc::Vocabulary;

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStat {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_mac_f1: f64,
    pub val_acc: f64,
    pub val_auc: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters of the best-on-validation epoch.
    pub params: ParamSet,
    pub history: Vec<EpochStat>,
    pub best_epoch: usize,
    pub best_val_mac_f1: f64,
}

pub fn history_csv(history: &[EpochStat]) -> String {
    let mut out = String::from("epoch,train_loss,val_macF1,val_acc,val_auc\n");
    for h in history {
        let auc = match h.val_auc {
            Some(a) => format!("{a:.6}"),
            None => "undefined".to_string(),
        };
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{}\n",
            h.epoch, h.train_loss, h.val_mac_f1, h.val_acc, auc
        ));
    }
    out
}

pub fn teacher_model(cfg: &Config) -> TeacherModel {
    TeacherModel::new(
        cfg.model.d,
        cfg.model.k,
        cfg.model.max_content_len,
        cfg.model.max_comment_len,
    )
}

pub fn student_model(cfg: &Config, knowledge: KnowledgeSet) -> StudentModel {
    StudentModel::with_knowledge(
        cfg.model.d,
        cfg.model.k,
        cfg.model.max_content_len,
        cfg.model.max_comment_len,
        knowledge,
    )
}

pub fn prepare_inputs(
    model_encoder: &crate::textenc::Encoder,
    vocab: &Vocabulary,
    res: &EmotionResources,
    records: &[NewsRecord],
) -> Vec<ModelInput> {
    records
        .iter()
        .map(|r| prepare_input(model_encoder, vocab, res, r))
        .collect()
}

/// Earliest-first comment subsampling applied to the training partition only.
pub fn apply_comment_budget(split: &CorpusSplit, proportion: f64) -> CorpusSplit {
    CorpusSplit {
        train: split
            .train
            .iter()
            .map(|r| sample_comments(r, proportion))
            .collect(),
        val: split.val.clone(),
        test: split.test.clone(),
        ratio: split.ratio,
    }
}

fn mean_scale_grads(params: &mut ParamSet, n: usize) {
    let inv = 1.0 / n as f64;
    for p in params.iter_mut() {
        for g in p.grad.data_mut() {
            *g *= inv;
        }
    }
}

/// Shared epoch/early-stopping driver. `step` runs one record: builds the
/// graph, backpropagates into `params`, and returns the loss value.
fn run_training<S, V>(
    cfg: &Config,
    mut params: ParamSet,
    n_train: usize,
    mut step: S,
    mut validate: V,
) -> Result<TrainOutcome, TrainError>
where
    S: FnMut(&mut ParamSet, usize) -> Result<f64, TrainError>,
    V: FnMut(&ParamSet) -> Result<EvalReport, TrainError>,
{
    let mut adam = AdamState::new();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut history = Vec::new();
    let mut best: Option<(f64, ParamSet, usize)> = None;
    let mut last_strict_improve = 0usize;
    let mut indices: Vec<usize> = (0..n_train).collect();
    for epoch in 1..=cfg.training.max_epochs {
        indices.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        for (batch_no, batch) in indices.chunks(cfg.training.batch_size).enumerate() {
            params.zero_grads();
            for &idx in batch {
                let loss = step(&mut params, idx).map_err(|e| match e {
                    TrainError::Nn(inner) => {
                        // Attach where in the schedule the numerics failed.
                        let _ = inner;
                        TrainError::NonFiniteLoss {
                            epoch,
                            batch: batch_no,
                        }
                    }
                    other => other,
                })?;
                if !loss.is_finite() {
                    return Err(TrainError::NonFiniteLoss {
                        epoch,
                        batch: batch_no,
                    });
                }
                epoch_loss += loss;
            }
            mean_scale_grads(&mut params, batch.len());
            adam.step(&mut params, cfg.training.lr)?;
        }
        let report = validate(&params)?;
        let stat = EpochStat {
            epoch,
            train_loss: epoch_loss / n_train as f64,
            val_mac_f1: report.mac_f1,
            val_acc: report.acc,
            val_auc: report.auc,
        };
        // Ties update the snapshot (later epochs keep minimizing the loss,
        // which matters when this model later serves as a teacher) but only a
        // strict improvement resets the patience window, so a flat plateau
        // still stops after `patience` epochs.
        let strictly_improved = best
            .as_ref()
            .map_or(true, |(b, _, _)| stat.val_mac_f1 > *b);
        let tied = best
            .as_ref()
            .map_or(false, |(b, _, _)| stat.val_mac_f1 == *b);
        if strictly_improved || tied {
            best = Some((stat.val_mac_f1, params.clone(), epoch));
        }
        history.push(stat);
        if strictly_improved {
            last_strict_improve = epoch;
        }
        if epoch - last_strict_improve >= cfg.training.patience {
            break;
        }
    }
    let (best_val_mac_f1, params, best_epoch) = best.expect("at least one epoch ran");
    Ok(TrainOutcome {
        params,
        history,
        best_epoch,
        best_val_mac_f1,
    })
}

/// Stage one: minimize the teacher's classification loss on content+comments,
/// early-stopping on validation macro F1.
pub fn train_teacher(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
) -> Result<TrainOutcome, TrainError> {
    let model = teacher_model(cfg);
    let train_inputs = prepare_inputs(&model.encoder, vocab, res, &split.train);
    let val_inputs = prepare_inputs(&model.encoder, vocab, res, &split.val);
    let val_labels: Vec<u8> = split.val.iter().map(|r| r.label).collect();
    let params = model.init_params(vocab.len(), cfg.seed);

    let step_model = model.clone();
    let val_model = model;
    run_training(
        cfg,
        params,
        train_inputs.len(),
        move |params, idx| {
            let input = &train_inputs[idx];
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, params);
            let fwd = step_model.forward(&mut g, &bound, input)?;
            let loss = step_model.loss(&mut g, &fwd, input.label);
            g.backward(loss)?;
            bound.pull_grads(&g, params)?;
            Ok(g.value(loss).as_scalar())
        },
        move |params| {
            let scores: Vec<f64> = val_inputs
                .iter()
                .map(|i| val_model.predict(params, i))
                .collect::<Result<_, _>>()?;
            Ok(evaluate_scores(&scores, &val_labels, DEFAULT_THRESHOLD)
                .map_err(|e| TrainError::Config(e.to_string()))?)
        },
    )
}

/// What guides the student: the adaptive three-way distillation (optionally
/// ablated), a single-term baseline, or nothing (alpha = 0 / plain training).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudentObjective {
    Adaptive(KnowledgeSet),
    Baseline(KdBaseline),
}

/// Stage two: freeze the teacher, precompute its traces over the training
/// records, and train the content-only student. With `alpha == 0` the teacher
/// is never consulted and training depends only on content.
pub fn train_student(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
    teacher_params: &ParamSet,
    alpha: f64,
    objective: StudentObjective,
) -> Result<TrainOutcome, TrainError> {
    if alpha < 0.0 {
        return Err(TrainError::NegativeAlpha(alpha));
    }
    let knowledge = match objective {
        StudentObjective::Adaptive(k) => k,
        StudentObjective::Baseline(_) => KnowledgeSet::Full,
    };
    let model = student_model(cfg, knowledge);
    let train_inputs = prepare_inputs(&model.encoder, vocab, res, &split.train);
    let val_inputs = prepare_inputs(&model.encoder, vocab, res, &split.val);
    let val_labels: Vec<u8> = split.val.iter().map(|r| r.label).collect();
    let params = model.init_params(teacher_params, cfg.seed);

    // Teacher traces are constant across epochs because the teacher is
    // frozen; compute them once up front (skipped entirely at alpha = 0).
    let traces: Option<Vec<TeacherTrace>> = if alpha > 0.0 {
        let tm = teacher_model(cfg);
        let mut traces = Vec::with_capacity(train_inputs.len());
        for input in &train_inputs {
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, teacher_params);
            let fwd = tm.forward(&mut g, &bound, input)?;
            traces.push(tm.trace(&g, &fwd, input));
        }
        Some(traces)
    } else {
        None
    };

    let step_model = model.clone();
    let val_model = model;
    run_training(
        cfg,
        params,
        train_inputs.len(),
        move |params, idx| {
            let input = &train_inputs[idx];
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, params);
            let fwd = step_model.forward(&mut g, &bound, input)?;
            let trace = traces.as_ref().map(|t| &t[idx]);
            let loss = match objective {
                StudentObjective::Adaptive(_) => {
                    step_model.total_loss(&mut g, &fwd, trace, input, alpha)?
                }
                StudentObjective::Baseline(mode) => {
                    if alpha == 0.0 {
                        step_model.total_loss(&mut g, &fwd, None, input, 0.0)?
                    } else {
                        step_model.baseline_loss(
                            &mut g,
                            &fwd,
                            trace.expect("traces exist when alpha > 0"),
                            input,
                            alpha,
                            mode,
                        )?
                    }
                }
            };
            g.backward(loss)?;
            bound.pull_grads(&g, params)?;
            Ok(g.value(loss).as_scalar())
        },
        move |params| {
            let scores: Vec<f64> = val_inputs
                .iter()
                .map(|i| val_model.predict(params, i))
                .collect::<Result<_, _>>()?;
            Ok(evaluate_scores(&scores, &val_labels, DEFAULT_THRESHOLD)
                .map_err(|e| TrainError::Config(e.to_string()))?)
        },
    )
}

/// Teacher pipeline with a training-time comment budget: the earliest
/// `proportion` of each training record's comments is kept, evaluation data
/// untouched.
pub fn train_teacher_with_comment_budget(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
    proportion: f64,
) -> Result<TrainOutcome, TrainError> {
    train_teacher(cfg, &apply_comment_budget(split, proportion), vocab, res)
}

/// Teacher evaluation at a test-time comment proportion.
pub fn evaluate_teacher(
    cfg: &Config,
    params: &ParamSet,
    vocab: &Vocabulary,
    res: &EmotionResources,
    records: &[NewsRecord],
    comment_proportion: f64,
) -> Result<EvalReport, TrainError> {
    let model = teacher_model(cfg);
    let sampled: Vec<NewsRecord> = records
        .iter()
        .map(|r| sample_comments(r, comment_proportion))
        .collect();
    let inputs = prepare_inputs(&model.encoder, vocab, res, &sampled);
    let scores: Vec<f64> = inputs
        .iter()
        .map(|i| model.predict(params, i))
        .collect::<Result<_, _>>()?;
    let labels: Vec<u8> = records.iter().map(|r| r.label).collect();
    evaluate_scores(&scores, &labels, DEFAULT_THRESHOLD)
        .map_err(|e| TrainError::Config(e.to_string()))
}

/// Student evaluation; comments never participate.
pub fn evaluate_student(
    cfg: &Config,
    params: &ParamSet,
    vocab: &Vocabulary,
    res: &EmotionResources,
    records: &[NewsRecord],
) -> Result<EvalReport, TrainError> {
    let model = student_model(cfg, KnowledgeSet::Full);
    let inputs = prepare_inputs(&model.encoder, vocab, res, records);
    let scores: Vec<f64> = inputs
        .iter()
        .map(|i| model.predict(params, i))
        .collect::<Result<_, _>>()?;
    let labels: Vec<u8> = records.iter().map(|r| r.label).collect();
    evaluate_scores(&scores, &labels, DEFAULT_THRESHOLD)
        .map_err(|e| TrainError::Config(e.to_string()))
}

pub fn save_teacher_checkpoint(
    params: &ParamSet,
    cfg: &Config,
    vocab: &Vocabulary,
    path: &Path,
) -> Result<(), CheckpointError> {
    Checkpoint {
        kind: CheckpointKind::Teacher,
        config_hash: cfg.hash(),
        vocab_hash: vocab.file_hash(),
        teacher_hash: None,
        params: params.clone(),
    }
    .save(path)
}

pub fn save_student_checkpoint(
    params: &ParamSet,
    cfg: &Config,
    vocab: &Vocabulary,
    teacher_checkpoint: &Path,
    path: &Path,
) -> Result<(), CheckpointError> {
    Checkpoint {
        kind: CheckpointKind::Student,
        config_hash: cfg.hash(),
        vocab_hash: vocab.file_hash(),
        teacher_hash: Some(sha256_file(teacher_checkpoint)?),
        params: params.clone(),
    }
    .save(path)
}

/// Load a checkpoint and verify it was produced under this config and
/// vocabulary.
pub fn load_verified_checkpoint(
    path: &Path,
    expected_kind: CheckpointKind,
    cfg: &Config,
    vocab: &Vocabulary,
) -> Result<Checkpoint, CheckpointError> {
    let ckpt = Checkpoint::load(path)?;
    if ckpt.kind != expected_kind {
        return Err(CheckpointError::ParamMismatch(format!(
            "expected a {:?} checkpoint, found {:?}",
            expected_kind, ckpt.kind
        )));
    }
    if ckpt.config_hash != cfg.hash() {
        return Err(CheckpointError::HashMismatch { kind: "config" });
    }
    if ckpt.vocab_hash != vocab.file_hash() {
        return Err(CheckpointError::HashMismatch { kind: "vocabulary" });
    }
    Ok(ckpt)
}

/// End-to-end gradient verification on a small 4-record batch at d=8, k=4:
/// backpropagated gradients of the mean teacher loss and of the mean student
/// total loss (alpha 0.4) are compared against central finite differences.
pub fn grad_check_suite(
    seed: u64,
) -> Result<(crate::nncore::GradCheckReport, crate::nncore::GradCheckReport), TrainError> {
    use crate::corpus::{generate_synthetic_corpus, SyntheticSpec};
    use crate::nncore::grad_check;

    let spec = SyntheticSpec {
        n_records: 4,
        content_len: 6,
        comments_per_record: 2,
        comment_len: 4,
        ..Default::default()
    };
    let records = generate_synthetic_corpus(&spec, seed)?;
    let vocab = Vocabulary::build(&records, 1).map_err(TrainError::Encode)?;
    let res = EmotionResources::builtin();

    let teacher = TeacherModel::new(8, 4, 12, 12);
    let inputs = prepare_inputs(&teacher.encoder, &vocab, &res, &records);
    let mut t_params = teacher.init_params(vocab.len(), seed);

    let batch_teacher_loss = |model: &TeacherModel, ps: &ParamSet, inputs: &[ModelInput]| {
        let mut total = 0.0;
        for input in inputs {
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, ps);
            let fwd = model.forward(&mut g, &bound, input).unwrap();
            let loss = model.loss(&mut g, &fwd, input.label);
            total += g.value(loss).as_scalar();
        }
        total / inputs.len() as f64
    };

    t_params.zero_grads();
    for input in &inputs {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &t_params);
        let fwd = teacher.forward(&mut g, &bound, input)?;
        let loss = teacher.loss(&mut g, &fwd, input.label);
        let scaled = g.scale_const(loss, 1.0 / inputs.len() as f64);
        g.backward(scaled)?;
        bound.pull_grads(&g, &mut t_params)?;
    }
    let tm = teacher.clone();
    let t_inputs = inputs.clone();
    let teacher_report = grad_check(
        &mut t_params,
        move |ps| batch_teacher_loss(&tm, ps, &t_inputs),
        1e-5,
        1e-4,
    );

    // Student check against the frozen teacher's traces.
    let student = StudentModel::new(8, 4, 12, 12);
    let mut s_params = student.init_params(&t_params, seed ^ 1);
    let traces: Vec<TeacherTrace> = inputs
        .iter()
        .map(|input| {
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, &t_params);
            let fwd = teacher.forward(&mut g, &bound, input).unwrap();
            teacher.trace(&g, &fwd, input)
        })
        .collect();
    let alpha = 0.4;
    let batch_student_loss =
        |model: &StudentModel, ps: &ParamSet, inputs: &[ModelInput], traces: &[TeacherTrace]| {
            let mut total = 0.0;
            for (input, trace) in inputs.iter().zip(traces) {
                let mut g = Graph::new();
                let bound = BoundParams::bind(&mut g, ps);
                let fwd = model.forward(&mut g, &bound, input).unwrap();
                let loss = model
                    .total_loss(&mut g, &fwd, Some(trace), input, alpha)
                    .unwrap();
                total += g.value(loss).as_scalar();
            }
            total / inputs.len() as f64
        };

    s_params.zero_grads();
    for (input, trace) in inputs.iter().zip(&traces) {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &s_params);
        let fwd = student.forward(&mut g, &bound, input)?;
        let loss = student.total_loss(&mut g, &fwd, Some(trace), input, alpha)?;
        let scaled = g.scale_const(loss, 1.0 / inputs.len() as f64);
        g.backward(scaled)?;
        bound.pull_grads(&g, &mut s_params)?;
    }
    let sm = student.clone();
    let student_report = grad_check(
        &mut s_params,
        move |ps| batch_student_loss(&sm, ps, &inputs, &traces),
        1e-5,
        1e-4,
    );

    Ok((teacher_report, student_report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{chronological_split, generate_synthetic_corpus, SyntheticSpec};

    fn tiny_config() -> Config {
        let mut cfg = Config::default();
        cfg.seed = 5;
        cfg.model.d = 8;
        cfg.model.k = 4;
        cfg.model.max_content_len = 12;
        cfg.model.max_comment_len = 16;
        cfg.training.max_epochs = 3;
        cfg.synthetic = SyntheticSpec {
            n_records: 48,
            content_len: 8,
            comments_per_record: 3,
            comment_len: 4,
            ..Default::default()
        };
        cfg
    }

    fn tiny_setup(cfg: &Config) -> (CorpusSplit, Vocabulary, EmotionResources) {
        let records = generate_synthetic_corpus(&cfg.synthetic, cfg.seed).unwrap();
        let split = chronological_split(&records, (4, 1, 1)).unwrap();
        let vocab = Vocabulary::build(&split.train, cfg.model.min_count).unwrap();
        (split, vocab, EmotionResources::builtin())
    }

    #[test]
    fn teacher_training_is_deterministic() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let a = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let b = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        assert_eq!(a.history, b.history);
        for (pa, pb) in a.params.iter().zip(b.params.iter()) {
            assert_eq!(pa.name, pb.name);
            let bits_a: Vec<u64> = pa.values.data().iter().map(|v| v.to_bits()).collect();
            let bits_b: Vec<u64> = pb.values.data().iter().map(|v| v.to_bits()).collect();
            assert_eq!(bits_a, bits_b, "{} differs across runs", pa.name);
        }
    }

    #[test]
    fn best_epoch_has_the_maximum_recorded_val_macro_f1() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let out = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let max = out
            .history
            .iter()
            .map(|h| h.val_mac_f1)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(out.best_val_mac_f1, max);
    }

    #[test]
    fn teacher_params_untouched_by_student_training() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let teacher = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let before: Vec<(String, Vec<u64>)> = teacher
            .params
            .iter()
            .map(|p| {
                (
                    p.name.clone(),
                    p.values.data().iter().map(|v| v.to_bits()).collect(),
                )
            })
            .collect();
        let _student = train_student(
            &cfg,
            &split,
            &vocab,
            &res,
            &teacher.params,
            0.4,
            StudentObjective::Adaptive(KnowledgeSet::Full),
        )
        .unwrap();
        for (p, (name, bits)) in teacher.params.iter().zip(&before) {
            assert_eq!(&p.name, name);
            let now: Vec<u64> = p.values.data().iter().map(|v| v.to_bits()).collect();
            assert_eq!(&now, bits, "teacher param {} changed", name);
        }
    }

    #[test]
    fn alpha_zero_student_is_bitwise_independent_of_comments() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let teacher = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let mut stripped = split.clone();
        for r in &mut stripped.train {
            r.comments.clear();
        }
        let with = train_student(
            &cfg,
            &split,
            &vocab,
            &res,
            &teacher.params,
            0.0,
            StudentObjective::Adaptive(KnowledgeSet::Full),
        )
        .unwrap();
        let without = train_student(
            &cfg,
            &stripped,
            &vocab,
            &res,
            &teacher.params,
            0.0,
            StudentObjective::Adaptive(KnowledgeSet::Full),
        )
        .unwrap();
        for (pa, pb) in with.params.iter().zip(without.params.iter()) {
            let bits_a: Vec<u64> = pa.values.data().iter().map(|v| v.to_bits()).collect();
            let bits_b: Vec<u64> = pb.values.data().iter().map(|v| v.to_bits()).collect();
            assert_eq!(bits_a, bits_b, "{} depends on comments at alpha=0", pa.name);
        }
    }

    #[test]
    fn comment_budget_full_proportion_is_identity() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let full = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let budgeted = train_teacher_with_comment_budget(&cfg, &split, &vocab, &res, 1.0).unwrap();
        assert_eq!(full.history, budgeted.history);
    }

    #[test]
    fn history_csv_shape() {
        let history = vec![EpochStat {
            epoch: 1,
            train_loss: 0.5,
            val_mac_f1: 0.75,
            val_acc: 0.8,
            val_auc: None,
        }];
        let csv = history_csv(&history);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("epoch,train_loss,val_macF1,val_acc,val_auc"));
        assert_eq!(lines.next(), Some("1,0.500000,0.750000,0.800000,undefined"));
    }

    #[test]
    fn checkpoint_verification_rejects_wrong_config_or_vocab() {
        let cfg = tiny_config();
        let (split, vocab, res) = tiny_setup(&cfg);
        let out = train_teacher(&cfg, &split, &vocab, &res).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("teacher.ckpt");
        save_teacher_checkpoint(&out.params, &cfg, &vocab, &path).unwrap();
        assert!(load_verified_checkpoint(&path, CheckpointKind::Teacher, &cfg, &vocab).is_ok());
        let mut other_cfg = cfg.clone();
        other_cfg.training.lr = 9e-4;
        assert!(matches!(
            load_verified_checkpoint(&path, CheckpointKind::Teacher, &other_cfg, &vocab),
            Err(CheckpointError::HashMismatch { kind: "config" })
        ));
        let other_vocab = Vocabulary::build(&split.val, 1).unwrap();
        assert!(matches!(
            load_verified_checkpoint(&path, CheckpointKind::Teacher, &cfg, &other_vocab),
            Err(CheckpointError::HashMismatch { kind: "vocabulary" })
        ));
        assert!(matches!(
            load_verified_checkpoint(&path, CheckpointKind::Student, &cfg, &vocab),
            Err(CheckpointError::ParamMismatch(_))
        ));
    }
}
