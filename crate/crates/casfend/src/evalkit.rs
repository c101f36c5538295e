//! Metrics (macro F1, accuracy, AUC, standardized partial AUC) and the
//! experiment harnesses: comment-proportion sweeps and distillation ablations.

use serde::Serialize;

use crate::error::EvalError;

/// Fake (label 1) is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub n: usize,
    pub acc: f64,
    pub mac_f1: f64,
    pub f1_fake: f64,
    pub f1_real: f64,
    /// `None` when only one class is present (ranking is undefined).
    pub auc: Option<f64>,
    pub spauc: Option<f64>,
    pub confusion: Confusion,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_FPR_MAX: f64 = 0.1;

/// Score-level evaluation: scores are fake probabilities, labels 0/1.
/// Predictions threshold at `threshold` (score >= threshold -> fake).
pub fn evaluate_scores(
    scores: &[f64],
    labels: &[u8],
    threshold: f64,
) -> Result<EvalReport, EvalError> {
    if scores.is_empty() || scores.len() != labels.len() {
        return Err(EvalError::Empty);
    }
    let mut c = Confusion {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for (&s, &y) in scores.iter().zip(labels) {
        let pred = s >= threshold;
        match (pred, y == 1) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    let n = scores.len();
    let acc = (c.tp + c.tn) as f64 / n as f64;
    let f1_fake = f1(c.tp, c.fp, c.fn_);
    // Real-class F1 from the mirrored confusion matrix.
    let f1_real = f1(c.tn, c.fn_, c.fp);
    Ok(EvalReport {
        n,
        acc,
        mac_f1: 0.5 * (f1_fake + f1_real),
        f1_fake,
        f1_real,
        auc: auc(scores, labels),
        spauc: spauc(scores, labels, DEFAULT_FPR_MAX),
        confusion: c,
    })
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Rank-statistic AUC with tie-averaged ranks; `None` if one class only.
pub fn auc(scores: &[f64], labels: &[u8]) -> Option<f64> {
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks are 1-based; tied scores share the mean rank of their block.
        let mean_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 1)
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

/// Empirical ROC points (fpr, tpr), from (0,0) to (1,1), one step per unique
/// score threshold taken in descending order.
fn roc_points(scores: &[f64], labels: &[u8]) -> Option<Vec<(f64, f64)>> {
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
    }
    Some(points)
}

/// Standardized partial AUC over FPR in [0, fpr_max]: the raw partial area is
/// rescaled so that 0.5 is chance level and 1.0 is a perfect ranker.
pub fn spauc(scores: &[f64], labels: &[u8], fpr_max: f64) -> Option<f64> {
    assert!(
        fpr_max > 0.0 && fpr_max <= 1.0,
        "fpr_max must be in (0, 1], got {fpr_max}"
    );
    let points = roc_points(scores, labels)?;
    let mut area = 0.0;
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if x0 >= fpr_max {
            break;
        }
        if x1 <= fpr_max {
            area += (x1 - x0) * (y0 + y1) / 2.0;
        } else {
            // Interpolate the ROC at the cutoff and take the last trapezoid.
            let t = (fpr_max - x0) / (x1 - x0);
            let y_cut = y0 + t * (y1 - y0);
            area += (fpr_max - x0) * (y0 + y_cut) / 2.0;
            break;
        }
    }
    let min_area = fpr_max * fpr_max / 2.0;
    let max_area = fpr_max;
    Some(0.5 * (1.0 + (area - min_area) / (max_area - min_area)))
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned two-column text table.
    pub fn to_table(&self) -> String {
        let fmt_opt = |v: Option<f64>| match v {
            Some(x) => format!("{x:.4}"),
            None => "undefined".to_string(),
        };
        let rows = [
            ("n".to_string(), self.n.to_string()),
            ("accuracy".to_string(), format!("{:.4}", self.acc)),
            ("macro F1".to_string(), format!("{:.4}", self.mac_f1)),
            ("F1 (fake)".to_string(), format!("{:.4}", self.f1_fake)),
            ("F1 (real)".to_string(), format!("{:.4}", self.f1_real)),
            ("AUC".to_string(), fmt_opt(self.auc)),
            ("SPAUC@0.1".to_string(), fmt_opt(self.spauc)),
            (
                "confusion".to_string(),
                format!(
                    "tp={} fp={} fn={} tn={}",
                    self.confusion.tp, self.confusion.fp, self.confusion.fn_, self.confusion.tn
                ),
            ),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap();
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Test-time comment-availability matrix: the teacher is evaluated with the
/// earliest fraction of each record's comments, the student (which never sees
/// comments) contributes the 0% cell.
#[derive(Debug, Clone, Serialize)]
pub struct CommentSweep {
    pub student_at_zero: EvalReport,
    /// (proportion, report) for each nonzero proportion, ascending.
    pub teacher: Vec<(f64, EvalReport)>,
}

impl CommentSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,proportion,macF1,acc,auc,spauc\n");
        let fmt = |v: Option<f64>| v.map_or("undefined".into(), |x| format!("{x:.6}"));
        out.push_str(&format!(
            "student,0.00,{:.6},{:.6},{},{}\n",
            self.student_at_zero.mac_f1,
            self.student_at_zero.acc,
            fmt(self.student_at_zero.auc),
            fmt(self.student_at_zero.spauc),
        ));
        for (p, r) in &self.teacher {
            out.push_str(&format!(
                "teacher,{:.2},{:.6},{:.6},{},{}\n",
                p,
                r.mac_f1,
                r.acc,
                fmt(r.auc),
                fmt(r.spauc),
            ));
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut cols: Vec<String> = vec!["model".into()];
        cols.push("0%".into());
        for (p, _) in &self.teacher {
            cols.push(format!("{:.0}%", p * 100.0));
        }
        let mut student_row = vec!["student".to_string(), format!("{:.4}", self.student_at_zero.mac_f1)];
        student_row.extend(self.teacher.iter().map(|_| "-".to_string()));
        let mut teacher_row = vec!["teacher".to_string(), "-".to_string()];
        teacher_row.extend(self.teacher.iter().map(|(_, r)| format!("{:.4}", r.mac_f1)));
        let rows = [cols, student_row, teacher_row];
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap())
            .collect();
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(c, cell)| format!("{cell:<w$}", w = widths[c]))
                    .collect::<Vec<_>>()
                    .join("  ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

use crate::config::Config;
use crate::corpus::{CorpusSplit, NewsRecord};
use crate::emolex::EmotionResources;
use crate::error::TrainError;
use crate::nncore::ParamSet;
use crate::student::KnowledgeSet;
use crate::textenc::Vocabulary;
use crate::trainer::{
    evaluate_student, evaluate_teacher, train_student, train_teacher, StudentObjective,
};

/// Scenario I: vary the fraction of comments available at detection time.
pub fn comment_proportion_sweep(
    cfg: &Config,
    teacher_params: &ParamSet,
    student_params: &ParamSet,
    vocab: &Vocabulary,
    res: &EmotionResources,
    test: &[NewsRecord],
    proportions: &[f64],
) -> Result<CommentSweep, TrainError> {
    let student_at_zero = evaluate_student(cfg, student_params, vocab, res, test)?;
    let mut teacher = Vec::new();
    for &p in proportions.iter().filter(|&&p| p > 0.0) {
        teacher.push((p, evaluate_teacher(cfg, teacher_params, vocab, res, test, p)?));
    }
    Ok(CommentSweep {
        student_at_zero,
        teacher,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationRow {
    pub variant: String,
    pub per_seed_mac_f1: Vec<f64>,
    pub mean_mac_f1: f64,
}

pub fn ablation_csv(rows: &[AblationRow]) -> String {
    let mut out = String::from("variant,mean_macF1,per_seed\n");
    for r in rows {
        let per: Vec<String> = r.per_seed_mac_f1.iter().map(|v| format!("{v:.6}")).collect();
        out.push_str(&format!(
            "{},{:.6},{}\n",
            r.variant,
            r.mean_mac_f1,
            per.join(";")
        ));
    }
    out
}

/// Paired-seed ablation: per seed, one teacher is trained and shared by the
/// full student and each two-knowledge variant; rows report mean test macro
/// F1 across seeds.
pub fn ablation_sweep(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
    seeds: &[u64],
) -> Result<Vec<AblationRow>, TrainError> {
    let variants = [
        KnowledgeSet::Full,
        KnowledgeSet::WithoutSemantic,
        KnowledgeSet::WithoutEmotional,
        KnowledgeSet::WithoutOverall,
    ];
    let mut per_variant: Vec<Vec<f64>> = vec![Vec::new(); variants.len()];
    for &seed in seeds {
        let mut run_cfg = cfg.clone();
        run_cfg.seed = seed;
        let teacher = train_teacher(&run_cfg, split, vocab, res)?;
        for (vi, &variant) in variants.iter().enumerate() {
            let student = train_student(
                &run_cfg,
                split,
                vocab,
                res,
                &teacher.params,
                run_cfg.training.alpha,
                StudentObjective::Adaptive(variant),
            )?;
            let report = evaluate_student(&run_cfg, &student.params, vocab, res, &split.test)?;
            per_variant[vi].push(report.mac_f1);
        }
    }
    Ok(variants
        .iter()
        .zip(per_variant)
        .map(|(v, scores)| {
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            AblationRow {
                variant: v.label().to_string(),
                per_seed_mac_f1: scores,
                mean_mac_f1: mean,
            }
        })
        .collect())
}

/// Grid over the distillation weight; the teacher is trained once and shared.
pub fn alpha_sweep(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
    alphas: &[f64],
) -> Result<Vec<(f64, EvalReport)>, TrainError> {
    let teacher = train_teacher(cfg, split, vocab, res)?;
    let mut rows = Vec::new();
    for &alpha in alphas {
        let student = train_student(
            cfg,
            split,
            vocab,
            res,
            &teacher.params,
            alpha,
            StudentObjective::Adaptive(KnowledgeSet::Full),
        )?;
        rows.push((
            alpha,
            evaluate_student(cfg, &student.params, vocab, res, &split.test)?,
        ));
    }
    Ok(rows)
}

/// Grid over the initial learning rate; each cell retrains teacher and
/// student from scratch.
pub fn lr_sweep(
    cfg: &Config,
    split: &CorpusSplit,
    vocab: &Vocabulary,
    res: &EmotionResources,
    lrs: &[f64],
) -> Result<Vec<(f64, EvalReport, EvalReport)>, TrainError> {
    let mut rows = Vec::new();
    for &lr in lrs {
        let mut run_cfg = cfg.clone();
        run_cfg.training.lr = lr;
        let teacher = train_teacher(&run_cfg, split, vocab, res)?;
        let teacher_report =
            evaluate_teacher(&run_cfg, &teacher.params, vocab, res, &split.test, 1.0)?;
        let student = train_student(
            &run_cfg,
            split,
            vocab,
            res,
            &teacher.params,
            run_cfg.training.alpha,
            StudentObjective::Adaptive(KnowledgeSet::Full),
        )?;
        let student_report =
            evaluate_student(&run_cfg, &student.params, vocab, res, &split.test)?;
        rows.push((lr, teacher_report, student_report));
    }
    Ok(rows)
}

pub fn scalar_sweep_csv(name: &str, rows: &[(f64, EvalReport)]) -> String {
    let mut out = format!("{name},macF1,acc,auc,spauc\n");
    let fmt = |v: Option<f64>| v.map_or("undefined".into(), |x: f64| format!("{x:.6}"));
    for (x, r) in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{},{}\n",
            x,
            r.mac_f1,
            r.acc,
            fmt(r.auc),
            fmt(r.spauc)
        ));
    }
    out
}

pub fn lr_sweep_csv(rows: &[(f64, EvalReport, EvalReport)]) -> String {
    let mut out = String::from("lr,teacher_macF1,student_macF1\n");
    for (lr, t, s) in rows {
        out.push_str(&format!("{},{:.6},{:.6}\n", lr, t.mac_f1, s.mac_f1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perfect_scores_give_perfect_metrics() {
        let scores = [0.9, 0.9, 0.1, 0.1];
        let labels = [1, 1, 0, 0];
        let r = evaluate_scores(&scores, &labels, 0.5).unwrap();
        assert_eq!(r.acc, 1.0);
        assert_eq!(r.mac_f1, 1.0);
        assert_eq!(r.f1_fake, 1.0);
        assert_eq!(r.f1_real, 1.0);
        assert_eq!(r.auc, Some(1.0));
        assert_eq!(r.spauc, Some(1.0));
    }

    #[test]
    fn hand_confusion_matrix_case() {
        // tp=2, fp=1, fn=1, tn=2 -> f1_fake = 4/6, acc = 4/6.
        let scores = [0.9, 0.8, 0.7, 0.2, 0.1, 0.6];
        let labels = [1, 1, 0, 1, 0, 0];
        let r = evaluate_scores(&scores, &labels, 0.5).unwrap();
        assert_eq!(
            r.confusion,
            Confusion {
                tp: 2,
                fp: 2,
                fn_: 1,
                tn: 1
            }
        );
        // Adjust to the exact documented matrix with a different fixture.
        let scores = [0.9, 0.8, 0.6, 0.2, 0.1, 0.3];
        let labels = [1, 1, 0, 1, 0, 0];
        let r = evaluate_scores(&scores, &labels, 0.5).unwrap();
        assert_eq!(
            r.confusion,
            Confusion {
                tp: 2,
                fp: 1,
                fn_: 1,
                tn: 2
            }
        );
        assert!((r.f1_fake - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.acc - 2.0 / 3.0).abs() < 1e-12);
        // Symmetric matrix: real F1 equals fake F1 here.
        assert!((r.mac_f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn all_equal_scores_auc_is_half() {
        let scores = [0.5; 6];
        let labels = [1, 0, 1, 0, 1, 0];
        assert_eq!(auc(&scores, &labels), Some(0.5));
        let s = spauc(&scores, &labels, 0.1).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_class_is_undefined() {
        let scores = [0.9, 0.8];
        let labels = [1, 1];
        assert_eq!(auc(&scores, &labels), None);
        assert_eq!(spauc(&scores, &labels, 0.1), None);
        let r = evaluate_scores(&scores, &labels, 0.5).unwrap();
        assert!(r.auc.is_none() && r.spauc.is_none());
        assert_eq!(r.acc, 1.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(evaluate_scores(&[], &[], 0.5).is_err());
        assert!(evaluate_scores(&[0.5], &[1, 0], 0.5).is_err());
    }

    /// Brute-force AUC: fraction of (pos, neg) pairs ranked correctly, ties
    /// counting half.
    fn pairwise_auc(scores: &[f64], labels: &[u8]) -> f64 {
        let mut good = 0.0;
        let mut total = 0.0;
        for (i, &yi) in labels.iter().enumerate() {
            if yi != 1 {
                continue;
            }
            for (j, &yj) in labels.iter().enumerate() {
                if yj != 0 {
                    continue;
                }
                total += 1.0;
                if scores[i] > scores[j] {
                    good += 1.0;
                } else if scores[i] == scores[j] {
                    good += 0.5;
                }
            }
        }
        good / total
    }

    /// Brute-force partial area: enumerate all thresholds, build the ROC
    /// polyline independently, integrate by fine summation.
    fn brute_force_spauc(scores: &[f64], labels: &[u8], fpr_max: f64) -> f64 {
        let n_pos = labels.iter().filter(|&&y| y == 1).count() as f64;
        let n_neg = labels.len() as f64 - n_pos;
        let mut thresholds: Vec<f64> = scores.to_vec();
        thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
        thresholds.dedup();
        let mut pts = vec![(0.0, 0.0)];
        for &t in &thresholds {
            let tp = scores
                .iter()
                .zip(labels)
                .filter(|&(&s, &y)| s >= t && y == 1)
                .count() as f64;
            let fp = scores
                .iter()
                .zip(labels)
                .filter(|&(&s, &y)| s >= t && y == 0)
                .count() as f64;
            pts.push((fp / n_neg, tp / n_pos));
        }
        let mut area = 0.0;
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x0 >= fpr_max {
                break;
            }
            if x1 <= fpr_max {
                area += (x1 - x0) * (y0 + y1) / 2.0;
            } else {
                let t = (fpr_max - x0) / (x1 - x0);
                let y_cut = y0 + t * (y1 - y0);
                area += (fpr_max - x0) * (y0 + y_cut) / 2.0;
                break;
            }
        }
        let min_area = fpr_max * fpr_max / 2.0;
        0.5 * (1.0 + (area - min_area) / (fpr_max - min_area))
    }

    #[test]
    fn auc_matches_pairwise_oracle_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = rng.gen_range(4..40);
            let scores: Vec<f64> = (0..n).map(|_| (rng.gen::<f64>() * 10.0).round() / 10.0).collect();
            let mut labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            labels[0] = 1;
            labels[1] = 0;
            let got = auc(&scores, &labels).unwrap();
            let want = pairwise_auc(&scores, &labels);
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn spauc_matches_brute_force_oracle_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let n = rng.gen_range(6..40);
            let scores: Vec<f64> = (0..n).map(|_| (rng.gen::<f64>() * 10.0).round() / 10.0).collect();
            let mut labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            labels[0] = 1;
            labels[1] = 0;
            for fpr_max in [0.1, 0.3, 1.0] {
                let got = spauc(&scores, &labels, fpr_max).unwrap();
                let want = brute_force_spauc(&scores, &labels, fpr_max);
                assert!((got - want).abs() < 1e-9, "{got} vs {want} at {fpr_max}");
            }
        }
    }

    #[test]
    fn spauc_at_full_range_equals_auc() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..10 {
            let n = rng.gen_range(6..30);
            let scores: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let mut labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2) as u8).collect();
            labels[0] = 1;
            labels[1] = 0;
            let a = auc(&scores, &labels).unwrap();
            let s = spauc(&scores, &labels, 1.0).unwrap();
            assert!((a - s).abs() < 1e-9);
        }
    }

    #[test]
    fn ranking_metrics_invariant_under_monotone_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let scores: Vec<f64> = (0..25).map(|_| rng.gen()).collect();
        let mut labels: Vec<u8> = (0..25).map(|_| rng.gen_range(0..2) as u8).collect();
        labels[0] = 1;
        labels[1] = 0;
        // Strictly increasing transform.
        let warped: Vec<f64> = scores.iter().map(|s| (3.0 * s + 1.0).exp()).collect();
        assert!((auc(&scores, &labels).unwrap() - auc(&warped, &labels).unwrap()).abs() < 1e-12);
        assert!(
            (spauc(&scores, &labels, 0.1).unwrap() - spauc(&warped, &labels, 0.1).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn report_serializes_and_formats() {
        let r = evaluate_scores(&[0.9, 0.1], &[1, 0], 0.5).unwrap();
        let json = r.to_json();
        assert!(json.contains("\"mac_f1\""));
        let table = r.to_table();
        assert!(table.contains("macro F1"));
    }
}
