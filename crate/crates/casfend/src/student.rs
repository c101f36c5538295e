//! Content-only student: learned content attention, a virtual social-emotion
//! predictor, and a per-record knowledge preference scorer that adaptively
//! weights three distillation losses against the frozen teacher.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{NnError, TrainError};
use crate::nncore::{
    BoundParams, Graph, MaskAttentionSpec, MlpSpec, NodeId, ParamSet, ParamTensor, Tensor,
};
use crate::teacher::{ModelInput, TeacherTrace};
use crate::textenc::{Encoder, ENC_BIAS, ENC_EMB, ENC_PROJ};

pub const S_ATT_PREFIX: &str = "stu.att";
pub const S_EMO_ATT_PREFIX: &str = "stu.emoatt";
pub const S_EMO_MLP_PREFIX: &str = "stu.emomlp";
pub const S_PREF_ATT_PREFIX: &str = "stu.pref.att";
pub const S_PREF_MLP_PREFIX: &str = "stu.pref.mlp";
pub const S_AGG: &str = "stu.agg";
pub const S_CLS_PREFIX: &str = "stu.cls";

/// The three kinds of distilled knowledge, in scorer output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Knowledge {
    Overall,
    Semantic,
    Emotional,
}

pub const ALL_KNOWLEDGE: [Knowledge; 3] =
    [Knowledge::Overall, Knowledge::Semantic, Knowledge::Emotional];

/// Which knowledge types the scorer weighs; the ablations drop one and the
/// scorer softmaxes over the remaining two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KnowledgeSet {
    #[default]
    Full,
    WithoutSemantic,
    WithoutEmotional,
    WithoutOverall,
}

impl KnowledgeSet {
    pub fn active(&self) -> Vec<Knowledge> {
        ALL_KNOWLEDGE
            .iter()
            .copied()
            .filter(|k| match self {
                KnowledgeSet::Full => true,
                KnowledgeSet::WithoutSemantic => *k != Knowledge::Semantic,
                KnowledgeSet::WithoutEmotional => *k != Knowledge::Emotional,
                KnowledgeSet::WithoutOverall => *k != Knowledge::Overall,
            })
            .collect()
    }

    pub fn label(&self) -> &'static str {
        match self {
            KnowledgeSet::Full => "full",
            KnowledgeSet::WithoutSemantic => "wo_semantic",
            KnowledgeSet::WithoutEmotional => "wo_emotional",
            KnowledgeSet::WithoutOverall => "wo_overall",
        }
    }
}

/// Single-distillation baselines: align the fused feature only, or the
/// predicted probability only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdBaseline {
    Feature,
    Response,
}

pub struct StudentForward {
    pub a_p: NodeId,
    pub s_p: NodeId,
    pub e: NodeId,
    pub f: NodeId,
    pub scr: NodeId,
    pub y_hat: NodeId,
}

#[derive(Debug, Clone)]
pub struct StudentTrace {
    pub a_p: Vec<f64>,
    pub s_p: Vec<f64>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub scr: Vec<f64>,
    pub y_hat: f64,
}

#[derive(Debug, Clone)]
pub struct StudentModel {
    pub d: usize,
    pub k: usize,
    pub encoder: Encoder,
    pub knowledge: KnowledgeSet,
    att: MaskAttentionSpec,
    emo_att: MaskAttentionSpec,
    emo_mlp: MlpSpec,
    pref_att: MaskAttentionSpec,
    pref_mlp: MlpSpec,
    cls_mlp: MlpSpec,
}

impl StudentModel {
    pub fn new(d: usize, k: usize, max_content_len: usize, max_comment_len: usize) -> Self {
        Self::with_knowledge(d, k, max_content_len, max_comment_len, KnowledgeSet::Full)
    }

    pub fn with_knowledge(
        d: usize,
        k: usize,
        max_content_len: usize,
        max_comment_len: usize,
        knowledge: KnowledgeSet,
    ) -> Self {
        let n_active = knowledge.active().len();
        StudentModel {
            d,
            k,
            encoder: Encoder::new(d, max_content_len, max_comment_len),
            knowledge,
            att: MaskAttentionSpec::new(S_ATT_PREFIX, d, k),
            emo_att: MaskAttentionSpec::new(S_EMO_ATT_PREFIX, d, k),
            emo_mlp: MlpSpec::new(S_EMO_MLP_PREFIX, &[d, d, d], false),
            pref_att: MaskAttentionSpec::new(S_PREF_ATT_PREFIX, d, k),
            pref_mlp: MlpSpec::new(S_PREF_MLP_PREFIX, &[d, n_active], false),
            cls_mlp: MlpSpec::new(S_CLS_PREFIX, &[d, d, 1], true),
        }
    }

    /// Same model with one knowledge type removed and a 2-way scorer.
    pub fn ablation_variant(&self, knowledge: KnowledgeSet) -> Self {
        Self::with_knowledge(
            self.d,
            self.k,
            self.encoder.max_content_len,
            self.encoder.max_comment_len,
            knowledge,
        )
    }

    /// Fresh student parameters. The encoder weights are copied from the
    /// trained teacher and frozen so both models attend over identical token
    /// embeddings; everything else is seeded Gaussian.
    pub fn init_params(&self, teacher_params: &ParamSet, seed: u64) -> ParamSet {
        let mut params = ParamSet::new();
        for name in [ENC_EMB, ENC_PROJ, ENC_BIAS] {
            let src = teacher_params
                .get(name)
                .unwrap_or_else(|| panic!("teacher parameters missing {name}"));
            params.add(ParamTensor::new(name, src.values.clone(), false));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.att.init(&mut params, &mut rng);
        self.emo_att.init(&mut params, &mut rng);
        self.emo_mlp.init(&mut params, &mut rng);
        self.pref_att.init(&mut params, &mut rng);
        self.pref_mlp.init(&mut params, &mut rng);
        params.add_zeros(S_AGG, &[2]);
        self.cls_mlp.init(&mut params, &mut rng);
        params
    }

    /// Content attention pooling: weights over real tokens and the weighted
    /// token sum.
    pub fn content_attention(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        p: NodeId,
        mask: &[bool],
    ) -> Result<(NodeId, NodeId), NnError> {
        let (s_p, a_p) = self.att.pool(g, bound, p, mask)?;
        Ok((a_p, s_p))
    }

    /// Virtual social emotion predicted from content tokens alone.
    pub fn predict_social_emotion(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        p: NodeId,
        mask: &[bool],
    ) -> Result<NodeId, NnError> {
        let (pooled, _) = self.emo_att.pool(g, bound, p, mask)?;
        self.emo_mlp.forward(g, bound, pooled)
    }

    /// Per-record preference over the active knowledge types; a probability
    /// vector of length 3 (2 under ablation).
    pub fn knowledge_preference(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        p: NodeId,
        mask: &[bool],
    ) -> Result<NodeId, NnError> {
        let (pooled, _) = self.pref_att.pool(g, bound, p, mask)?;
        let logits = self.pref_mlp.forward(g, bound, pooled)?;
        let all = vec![true; self.knowledge.active().len()];
        g.masked_softmax(logits, &all)
    }

    fn aggregate(&self, g: &mut Graph, bound: &BoundParams, s_p: NodeId, e: NodeId) -> NodeId {
        let raw = bound.node(S_AGG);
        let gates = g.sigmoid(raw);
        let w_p = g.index(gates, 0);
        let w_e = g.index(gates, 1);
        let tp = g.scale_by_scalar(s_p, w_p);
        let te = g.scale_by_scalar(e, w_e);
        g.add(tp, te)
    }

    /// Forward pass from content only; the comment fields of the input are
    /// never read.
    pub fn forward(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        input: &ModelInput,
    ) -> Result<StudentForward, NnError> {
        let p = self
            .encoder
            .encode(g, bound, &input.content_ids, &input.content_mask);
        let (a_p, s_p) = self.content_attention(g, bound, p, &input.content_mask)?;
        let e = self.predict_social_emotion(g, bound, p, &input.content_mask)?;
        let scr = self.knowledge_preference(g, bound, p, &input.content_mask)?;
        let f = self.aggregate(g, bound, s_p, e);
        let y_hat = self.cls_mlp.forward(g, bound, f)?;
        let y_hat = g.index(y_hat, 0);
        Ok(StudentForward {
            a_p,
            s_p,
            e,
            f,
            scr,
            y_hat,
        })
    }

    /// Classification loss plus the adaptively weighted distillation losses:
    /// total = bce(y_hat, y) + alpha * sum_i scr_i * L_i over the active
    /// knowledge types. At alpha = 0 no distillation node is built, so the
    /// result (and its gradients) cannot depend on the teacher or comments.
    pub fn total_loss(
        &self,
        g: &mut Graph,
        fwd: &StudentForward,
        teacher: Option<&TeacherTrace>,
        input: &ModelInput,
        alpha: f64,
    ) -> Result<NodeId, TrainError> {
        if alpha < 0.0 {
            return Err(TrainError::NegativeAlpha(alpha));
        }
        let l_cls = g.bce(fwd.y_hat, input.label);
        if alpha == 0.0 {
            return Ok(l_cls);
        }
        let teacher = teacher.ok_or_else(|| {
            TrainError::Config("distillation with alpha > 0 requires a teacher trace".into())
        })?;
        let distill = self.distill_loss(g, fwd, teacher, input)?;
        let scaled = g.scale_const(distill, alpha);
        Ok(g.add(l_cls, scaled))
    }

    /// scr-weighted sum of the active knowledge losses for one record.
    pub fn distill_loss(
        &self,
        g: &mut Graph,
        fwd: &StudentForward,
        teacher: &TeacherTrace,
        input: &ModelInput,
    ) -> Result<NodeId, TrainError> {
        if teacher.content_mask != input.content_mask {
            return Err(TrainError::Nn(NnError::ShapeMismatch(
                "teacher trace content mask differs from student input".into(),
            )));
        }
        let mut total: Option<NodeId> = None;
        for (pos, kind) in self.knowledge.active().iter().enumerate() {
            let loss = match kind {
                Knowledge::Semantic => {
                    semantic_kd_loss(g, fwd.a_p, &teacher.a_p, &input.content_mask)?
                }
                Knowledge::Emotional => emotional_kd_loss(g, fwd.e, &teacher.e),
                Knowledge::Overall => overall_kd_loss(g, fwd.f, &teacher.f),
            };
            let weight = g.index(fwd.scr, pos);
            let term = g.mul_scalar(weight, loss);
            total = Some(match total {
                Some(t) => g.add(t, term),
                None => term,
            });
        }
        Ok(total.expect("at least one knowledge type is always active"))
    }

    /// Group II baselines: a single fixed distillation term instead of the
    /// adaptive scorer.
    pub fn baseline_loss(
        &self,
        g: &mut Graph,
        fwd: &StudentForward,
        teacher: &TeacherTrace,
        input: &ModelInput,
        alpha: f64,
        mode: KdBaseline,
    ) -> Result<NodeId, TrainError> {
        if alpha < 0.0 {
            return Err(TrainError::NegativeAlpha(alpha));
        }
        let l_cls = g.bce(fwd.y_hat, input.label);
        let kd = baseline_kd_loss(g, fwd, teacher, mode);
        let scaled = g.scale_const(kd, alpha);
        Ok(g.add(l_cls, scaled))
    }

    pub fn trace(&self, g: &Graph, fwd: &StudentForward) -> StudentTrace {
        StudentTrace {
            a_p: g.value(fwd.a_p).data().to_vec(),
            s_p: g.value(fwd.s_p).data().to_vec(),
            e: g.value(fwd.e).data().to_vec(),
            f: g.value(fwd.f).data().to_vec(),
            scr: g.value(fwd.scr).data().to_vec(),
            y_hat: g.value(fwd.y_hat).as_scalar(),
        }
    }

    /// Inference skips the knowledge-preference scorer entirely: it only
    /// weights the training loss, so prediction works for any ablation
    /// variant's parameters regardless of the scorer head shape.
    pub fn predict(&self, params: &ParamSet, input: &ModelInput) -> Result<f64, NnError> {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, params);
        let p = self
            .encoder
            .encode(&mut g, &bound, &input.content_ids, &input.content_mask);
        let (_, s_p) = self.content_attention(&mut g, &bound, p, &input.content_mask)?;
        let e = self.predict_social_emotion(&mut g, &bound, p, &input.content_mask)?;
        let f = self.aggregate(&mut g, &bound, s_p, e);
        let y_hat = self.cls_mlp.forward(&mut g, &bound, f)?;
        Ok(g.value(y_hat).data()[0])
    }
}

/// Mean squared error between the two attention distributions over the real
/// content tokens, normalized by their count.
pub fn semantic_kd_loss(
    g: &mut Graph,
    a_student: NodeId,
    a_teacher: &[f64],
    mask: &[bool],
) -> Result<NodeId, TrainError> {
    if a_teacher.len() != mask.len() {
        return Err(TrainError::Nn(NnError::ShapeMismatch(format!(
            "teacher attention length {} vs mask length {}",
            a_teacher.len(),
            mask.len()
        ))));
    }
    let m_real = mask.iter().filter(|&&m| m).count();
    let target = g.constant(Tensor::from_vec(&[a_teacher.len()], a_teacher.to_vec()));
    Ok(g.mse_masked(a_student, target, mask, m_real as f64))
}

/// MSE between predicted and teacher social emotion embeddings, per dimension.
pub fn emotional_kd_loss(g: &mut Graph, e_student: NodeId, e_teacher: &[f64]) -> NodeId {
    let d = e_teacher.len();
    let target = g.constant(Tensor::from_vec(&[d], e_teacher.to_vec()));
    g.mse_vec(e_student, target, d as f64)
}

/// MSE between the fused features, per dimension.
pub fn overall_kd_loss(g: &mut Graph, f_student: NodeId, f_teacher: &[f64]) -> NodeId {
    let d = f_teacher.len();
    let target = g.constant(Tensor::from_vec(&[d], f_teacher.to_vec()));
    g.mse_vec(f_student, target, d as f64)
}

/// Feature mode aligns the fused feature; response mode aligns the scalar
/// predicted probabilities.
pub fn baseline_kd_loss(
    g: &mut Graph,
    fwd: &StudentForward,
    teacher: &TeacherTrace,
    mode: KdBaseline,
) -> NodeId {
    match mode {
        KdBaseline::Feature => overall_kd_loss(g, fwd.f, &teacher.f),
        KdBaseline::Response => {
            let t = g.constant(Tensor::scalar(teacher.y_hat));
            let diff = g.sub(fwd.y_hat, t);
            g.mul_scalar(diff, diff)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Comment, NewsRecord};
    use crate::emolex::EmotionResources;
    use crate::nncore::grad_check;
    use crate::teacher::{prepare_input, TeacherModel};

    fn record(content: &str, comments: &[&str], label: u8) -> NewsRecord {
        NewsRecord {
            id: "r0".into(),
            content: content.into(),
            publish_time: 0,
            label,
            comments: comments
                .iter()
                .enumerate()
                .map(|(i, t)| Comment {
                    text: t.to_string(),
                    time: i as i64,
                })
                .collect(),
        }
    }

    struct Fixture {
        teacher: TeacherModel,
        student: StudentModel,
        teacher_params: ParamSet,
        input: ModelInput,
        trace: TeacherTrace,
    }

    fn fixture(knowledge: KnowledgeSet) -> Fixture {
        let rec = record("alpha beta gamma delta", &["wow liar !", "calm good"], 1);
        let vocab = crate::textenc::Vocabulary::build(std::slice::from_ref(&rec), 1).unwrap();
        let teacher = TeacherModel::new(4, 2, 6, 10);
        let teacher_params = teacher.init_params(vocab.len(), 21);
        let res = EmotionResources::builtin();
        let input = prepare_input(&teacher.encoder, &vocab, &res, &rec);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &teacher_params);
        let fwd = teacher.forward(&mut g, &bound, &input).unwrap();
        let trace = teacher.trace(&g, &fwd, &input);
        let student = StudentModel::with_knowledge(4, 2, 6, 10, knowledge);
        Fixture {
            teacher,
            student,
            teacher_params,
            input,
            trace,
        }
    }

    #[test]
    fn semantic_loss_analytic_case() {
        let mut g = Graph::new();
        let a_s = g.constant(Tensor::from_vec(&[2], vec![0.5, 0.5]));
        let l = semantic_kd_loss(&mut g, a_s, &[1.0, 0.0], &[true, true]).unwrap();
        assert!((g.value(l).as_scalar() - 0.25).abs() < 1e-12);
        // Identical distributions are a fixed point.
        let a_eq = g.constant(Tensor::from_vec(&[2], vec![1.0, 0.0]));
        let l0 = semantic_kd_loss(&mut g, a_eq, &[1.0, 0.0], &[true, true]).unwrap();
        assert_eq!(g.value(l0).as_scalar(), 0.0);
    }

    #[test]
    fn semantic_loss_ignores_padding() {
        let mut g = Graph::new();
        // Padded entries disagree wildly but are masked out.
        let a_s = g.constant(Tensor::from_vec(&[3], vec![1.0, 0.0, 9.0]));
        let l = semantic_kd_loss(&mut g, a_s, &[1.0, 0.0, -9.0], &[true, true, false]).unwrap();
        assert_eq!(g.value(l).as_scalar(), 0.0);
    }

    #[test]
    fn emotional_loss_analytic_case() {
        let mut g = Graph::new();
        let e_s = g.constant(Tensor::from_vec(&[2], vec![0.0, 0.0]));
        let l = emotional_kd_loss(&mut g, e_s, &[1.0, 0.0]);
        assert!((g.value(l).as_scalar() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overall_loss_analytic_case() {
        let mut g = Graph::new();
        let f_s = g.constant(Tensor::from_vec(&[4], vec![1.0, 0.0, 0.0, 0.0]));
        let l = overall_kd_loss(&mut g, f_s, &[0.0, 0.0, 0.0, 0.0]);
        assert!((g.value(l).as_scalar() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn response_baseline_analytic_case() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 9);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        // Force known probabilities through a synthetic trace.
        let mut trace = fx.trace.clone();
        trace.y_hat = 0.9;
        let y_s = g.value(fwd.y_hat).as_scalar();
        let kd = baseline_kd_loss(&mut g, &fwd, &trace, KdBaseline::Response);
        assert!((g.value(kd).as_scalar() - (y_s - 0.9) * (y_s - 0.9)).abs() < 1e-12);
        // And the documented 0.9 vs 0.5 case via raw nodes.
        let mut g2 = Graph::new();
        let half = g2.constant(Tensor::scalar(0.5));
        let t = g2.constant(Tensor::scalar(0.9));
        let diff = g2.sub(half, t);
        let sq = g2.mul_scalar(diff, diff);
        assert!((g2.value(sq).as_scalar() - 0.16).abs() < 1e-12);
    }

    #[test]
    fn feature_baseline_equals_overall_loss() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 9);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let kd = baseline_kd_loss(&mut g, &fwd, &fx.trace, KdBaseline::Feature);
        let direct = overall_kd_loss(&mut g, fwd.f, &fx.trace.f);
        assert_eq!(g.value(kd).as_scalar(), g.value(direct).as_scalar());
    }

    #[test]
    fn preference_scores_form_a_distribution() {
        for knowledge in [
            KnowledgeSet::Full,
            KnowledgeSet::WithoutSemantic,
            KnowledgeSet::WithoutEmotional,
            KnowledgeSet::WithoutOverall,
        ] {
            let fx = fixture(knowledge);
            let params = fx.student.init_params(&fx.teacher_params, 13);
            let mut g = Graph::new();
            let bound = BoundParams::bind(&mut g, &params);
            let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
            let scr = g.value(fwd.scr).data();
            assert_eq!(scr.len(), knowledge.active().len());
            assert!(scr.iter().all(|&s| s > 0.0));
            let sum: f64 = scr.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_preference_mlp_gives_uniform_scores() {
        let fx = fixture(KnowledgeSet::Full);
        let mut params = fx.student.init_params(&fx.teacher_params, 13);
        params.get_mut("stu.pref.mlp.w0").unwrap().values.fill(0.0);
        params.get_mut("stu.pref.mlp.b0").unwrap().values.fill(0.0);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        for &s in g.value(fwd.scr).data() {
            assert!((s - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fresh_aggregation_gates_are_half() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 17);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let f = g.value(fwd.f).data().to_vec();
        let s_p = g.value(fwd.s_p).data();
        let e = g.value(fwd.e).data();
        for i in 0..f.len() {
            assert!((f[i] - 0.5 * (s_p[i] + e[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_zero_is_exactly_classification_loss() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 23);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let total = fx
            .student
            .total_loss(&mut g, &fwd, None, &fx.input, 0.0)
            .unwrap();
        let mut g2 = Graph::new();
        let bound2 = BoundParams::bind(&mut g2, &params);
        let fwd2 = fx.student.forward(&mut g2, &bound2, &fx.input).unwrap();
        let bce = g2.bce(fwd2.y_hat, fx.input.label);
        assert_eq!(g.value(total).as_scalar(), g2.value(bce).as_scalar());
    }

    #[test]
    fn negative_alpha_is_rejected() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 23);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let err = fx
            .student
            .total_loss(&mut g, &fwd, Some(&fx.trace), &fx.input, -0.1);
        assert!(matches!(err, Err(TrainError::NegativeAlpha(_))));
    }

    #[test]
    fn matching_teacher_is_a_distillation_fixed_point() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 29);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        // Teacher trace copied from the student's own outputs.
        let self_trace = TeacherTrace {
            a_p: g.value(fwd.a_p).data().to_vec(),
            content_mask: fx.input.content_mask.clone(),
            s_p: g.value(fwd.s_p).data().to_vec(),
            s_c: vec![0.0; 4],
            e: g.value(fwd.e).data().to_vec(),
            f: g.value(fwd.f).data().to_vec(),
            y_hat: g.value(fwd.y_hat).as_scalar(),
        };
        let distill = fx
            .student
            .distill_loss(&mut g, &fwd, &self_trace, &fx.input)
            .unwrap();
        assert_eq!(g.value(distill).as_scalar(), 0.0);
    }

    #[test]
    fn ablation_drops_exactly_the_named_loss() {
        // Student matching the teacher on the two active kinds but not the
        // dropped one still reaches zero distillation loss.
        let fx = fixture(KnowledgeSet::WithoutOverall);
        let params = fx.student.init_params(&fx.teacher_params, 31);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let trace = TeacherTrace {
            a_p: g.value(fwd.a_p).data().to_vec(),
            content_mask: fx.input.content_mask.clone(),
            s_p: vec![9.0; 4],
            s_c: vec![9.0; 4],
            e: g.value(fwd.e).data().to_vec(),
            // Fused feature differs wildly; without the overall term this
            // must not matter.
            f: vec![9.0; 4],
            y_hat: 0.5,
        };
        let distill = fx
            .student
            .distill_loss(&mut g, &fwd, &trace, &fx.input)
            .unwrap();
        assert_eq!(g.value(distill).as_scalar(), 0.0);
        assert_eq!(fx.student.knowledge.active().len(), 2);
    }

    #[test]
    fn mask_mismatch_is_an_error() {
        let fx = fixture(KnowledgeSet::Full);
        let params = fx.student.init_params(&fx.teacher_params, 37);
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let mut bad = fx.trace.clone();
        bad.content_mask[0] = !bad.content_mask[0];
        assert!(fx
            .student
            .distill_loss(&mut g, &fwd, &bad, &fx.input)
            .is_err());
    }

    #[test]
    fn encoder_is_frozen_and_gradients_match_finite_differences() {
        let fx = fixture(KnowledgeSet::Full);
        let mut params = fx.student.init_params(&fx.teacher_params, 41);
        assert!(!params.get(ENC_EMB).unwrap().trainable);
        params.zero_grads();
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, &params);
        let fwd = fx.student.forward(&mut g, &bound, &fx.input).unwrap();
        let loss = fx
            .student
            .total_loss(&mut g, &fwd, Some(&fx.trace), &fx.input, 0.4)
            .unwrap();
        g.backward(loss).unwrap();
        bound.pull_grads(&g, &mut params).unwrap();
        let student = fx.student.clone();
        let (input, trace) = (fx.input.clone(), fx.trace.clone());
        let report = grad_check(
            &mut params,
            move |ps| {
                let mut g = Graph::new();
                let bound = BoundParams::bind(&mut g, ps);
                let fwd = student.forward(&mut g, &bound, &input).unwrap();
                let loss = student
                    .total_loss(&mut g, &fwd, Some(&trace), &input, 0.4)
                    .unwrap();
                g.value(loss).as_scalar()
            },
            1e-5,
            1e-4,
        );
        assert!(report.passed(), "max rel err {}", report.max_rel_err());
        // Frozen encoder reports exactly zero gradient.
        for name in [ENC_EMB, ENC_PROJ, ENC_BIAS] {
            let e = report.entries.iter().find(|e| e.name == name).unwrap();
            assert_eq!(e.grad_norm, 0.0);
        }
        let _ = fx.teacher;
    }
}
