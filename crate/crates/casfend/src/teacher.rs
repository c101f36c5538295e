//! Comment-aware teacher: token-level co-attention between news content and
//! comments, a social-emotion embedding, and an adaptive aggregation of the
//! three features into one veracity score.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::NewsRecord;
use crate::emolex::{extract_emotion, EmotionResources, EmotionVector, EMOTION_DIM};
use crate::error::NnError;
use crate::nncore::{BoundParams, Graph, MlpSpec, NodeId, ParamSet, Tensor};
use crate::textenc::{Encoder, Vocabulary};

pub const T_WL: &str = "tch.wl";
pub const T_WP: &str = "tch.wp";
pub const T_WC: &str = "tch.wc";
pub const T_WHP: &str = "tch.whp";
pub const T_WHC: &str = "tch.whc";
pub const T_AGG: &str = "tch.agg";
pub const T_EMO_PREFIX: &str = "tch.emo";
pub const T_CLS_PREFIX: &str = "tch.cls";

/// Everything the forward pass needs for one record, precomputed outside the
/// graph: padded token ids, masks, the raw social-emotion vector, and the
/// label as a float.
#[derive(Debug, Clone)]
pub struct ModelInput {
    pub content_ids: Vec<usize>,
    pub content_mask: Vec<bool>,
    pub comment_ids: Vec<usize>,
    pub comment_mask: Vec<bool>,
    pub emotion: EmotionVector,
    pub label: f64,
    pub id: String,
}

/// Build a [`ModelInput`] from a record. Comment sampling (if any) must be
/// applied to the record beforehand; this sees whatever comments remain.
pub fn prepare_input(
    encoder: &Encoder,
    vocab: &Vocabulary,
    resources: &EmotionResources,
    record: &NewsRecord,
) -> ModelInput {
    let (content_ids, content_mask) = encoder.content_ids(vocab, record);
    let (comment_ids, comment_mask) = encoder.comment_ids(vocab, record);
    let emotion = if record.comments.is_empty() {
        EmotionVector::zero()
    } else {
        let texts: Vec<&str> = record.comments.iter().map(|c| c.text.as_str()).collect();
        extract_emotion(&texts, resources)
    };
    ModelInput {
        content_ids,
        content_mask,
        comment_ids,
        comment_mask,
        emotion,
        label: record.label as f64,
        id: record.id.clone(),
    }
}

/// Graph nodes produced by one teacher forward pass.
pub struct TeacherForward {
    pub affinity: NodeId,
    pub a_p: NodeId,
    pub a_c: NodeId,
    pub s_p: NodeId,
    pub s_c: NodeId,
    pub e: NodeId,
    pub f: NodeId,
    pub y_hat: NodeId,
}

/// Plain-value snapshot of a forward pass; this is what gets distilled into
/// the student, so it is deliberately detached from any graph.
#[derive(Debug, Clone)]
pub struct TeacherTrace {
    pub a_p: Vec<f64>,
    pub content_mask: Vec<bool>,
    pub s_p: Vec<f64>,
    pub s_c: Vec<f64>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub y_hat: f64,
}

#[derive(Debug, Clone)]
pub struct TeacherModel {
    pub d: usize,
    pub k: usize,
    pub encoder: Encoder,
    emo_mlp: MlpSpec,
    cls_mlp: MlpSpec,
}

impl TeacherModel {
    pub fn new(d: usize, k: usize, max_content_len: usize, max_comment_len: usize) -> Self {
        TeacherModel {
            d,
            k,
            encoder: Encoder::new(d, max_content_len, max_comment_len),
            emo_mlp: MlpSpec::new(T_EMO_PREFIX, &[EMOTION_DIM, d, d], false),
            cls_mlp: MlpSpec::new(T_CLS_PREFIX, &[d, d, 1], true),
        }
    }

    /// Fresh parameter set (encoder included) from a seed.
    pub fn init_params(&self, vocab_size: usize, seed: u64) -> ParamSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ParamSet::new();
        self.encoder.init_params(vocab_size, &mut params, &mut rng);
        let (d, k) = (self.d, self.k);
        let std_d = (1.0 / d as f64).sqrt();
        let std_k = (1.0 / k as f64).sqrt();
        params.add_gaussian(T_WL, &[d, d], std_d, &mut rng);
        params.add_gaussian(T_WP, &[k, d], std_d, &mut rng);
        params.add_gaussian(T_WC, &[k, d], std_d, &mut rng);
        params.add_gaussian(T_WHP, &[k], std_k, &mut rng);
        params.add_gaussian(T_WHC, &[k], std_k, &mut rng);
        self.emo_mlp.init(&mut params, &mut rng);
        // Raw aggregation logits start at zero so every branch begins with
        // weight sigmoid(0) = 0.5.
        params.add_zeros(T_AGG, &[3]);
        self.cls_mlp.init(&mut params, &mut rng);
        params
    }

    /// Token-level co-attention between content matrix P (d x M) and comment
    /// matrix C (d x N):
    ///
    /// ```text
    /// F   = tanh(P^T Wl C)               M x N affinity
    /// Hp  = tanh(Wp P + (Wc C) F^T)      k x M
    /// Hc  = tanh(Wc C + (Wp P) F)        k x N
    /// a_p = softmax(whp^T Hp)  over real content tokens
    /// a_c = softmax(whc^T Hc)  over real comment tokens
    /// s_p = P a_p,  s_c = C a_c
    /// ```
    #[allow(clippy::too_many_arguments)]
    pub fn co_attention(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        p: NodeId,
        c: NodeId,
        content_mask: &[bool],
        comment_mask: &[bool],
    ) -> Result<CoAttention, NnError> {
        let wl = bound.node(T_WL);
        let wp = bound.node(T_WP);
        let wc = bound.node(T_WC);
        let whp = bound.node(T_WHP);
        let whc = bound.node(T_WHC);

        let wl_c = g.matmul(wl, c, false, false);
        let pre_f = g.matmul(p, wl_c, true, false);
        let affinity = g.tanh(pre_f);

        let wp_p = g.matmul(wp, p, false, false);
        let wc_c = g.matmul(wc, c, false, false);

        let cross_p = g.matmul(wc_c, affinity, false, true);
        let hp_pre = g.add(wp_p, cross_p);
        let hp = g.tanh(hp_pre);

        let cross_c = g.matmul(wp_p, affinity, false, false);
        let hc_pre = g.add(wc_c, cross_c);
        let hc = g.tanh(hc_pre);

        let p_scores = g.matvec(hp, whp, true);
        let a_p = g.masked_softmax(p_scores, content_mask)?;
        let c_scores = g.matvec(hc, whc, true);
        let a_c = g.masked_softmax(c_scores, comment_mask)?;

        let s_p = g.matvec(p, a_p, false);
        let s_c = g.matvec(c, a_c, false);
        Ok(CoAttention {
            affinity,
            a_p,
            a_c,
            s_p,
            s_c,
        })
    }

    /// Full forward pass for one record's prepared input.
    pub fn forward(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        input: &ModelInput,
    ) -> Result<TeacherForward, NnError> {
        let p = self
            .encoder
            .encode(g, bound, &input.content_ids, &input.content_mask);
        let c = self
            .encoder
            .encode(g, bound, &input.comment_ids, &input.comment_mask);
        let co = self.co_attention(g, bound, p, c, &input.content_mask, &input.comment_mask)?;

        let raw_emotion = g.constant(Tensor::from_vec(
            &[EMOTION_DIM],
            input.emotion.values().to_vec(),
        ));
        let e = self.emo_mlp.forward(g, bound, raw_emotion)?;

        let f = self.aggregate(g, bound, co.s_p, co.s_c, e);
        let y_hat = self.cls_mlp.forward(g, bound, f)?;
        let y_hat = g.index(y_hat, 0);
        Ok(TeacherForward {
            affinity: co.affinity,
            a_p: co.a_p,
            a_c: co.a_c,
            s_p: co.s_p,
            s_c: co.s_c,
            e,
            f,
            y_hat,
        })
    }

    /// f = sigmoid(g0) s_p + sigmoid(g1) s_c + sigmoid(g2) e, with the raw
    /// logits g trained jointly so each branch weight stays in (0, 1).
    fn aggregate(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        s_p: NodeId,
        s_c: NodeId,
        e: NodeId,
    ) -> NodeId {
        let raw = bound.node(T_AGG);
        let gates = g.sigmoid(raw);
        let w_p = g.index(gates, 0);
        let w_c = g.index(gates, 1);
        let w_e = g.index(gates, 2);
        let tp = g.scale_by_scalar(s_p, w_p);
        let tc = g.scale_by_scalar(s_c, w_c);
        let te = g.scale_by_scalar(e, w_e);
        let sum = g.add(tp, tc);
        g.add(sum, te)
    }

    /// Binary cross-entropy of the predicted probability against the label.
    pub fn loss(&self, g: &mut Graph, fwd: &TeacherForward, label: f64) -> NodeId {
        g.bce(fwd.y_hat, label)
    }

    /// Detach a forward pass into plain values for distillation or reporting.
    pub fn trace(&self, g: &Graph, fwd: &TeacherForward, input: &ModelInput) -> TeacherTrace {
        TeacherTrace {
            a_p: g.value(fwd.a_p).data().to_vec(),
            content_mask: input.content_mask.clone(),
            s_p: g.value(fwd.s_p).data().to_vec(),
            s_c: g.value(fwd.s_c).data().to_vec(),
            e: g.value(fwd.e).data().to_vec(),
            f: g.value(fwd.f).data().to_vec(),
            y_hat: g.value(fwd.y_hat).as_scalar(),
        }
    }

    /// Predicted probability for one input with fixed parameters.
    pub fn predict(&self, params: &ParamSet, input: &ModelInput) -> Result<f64, NnError> {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, params);
        let fwd = self.forward(&mut g, &bound, input)?;
        Ok(g.value(fwd.y_hat).as_scalar())
    }
}

pub struct CoAttention {
    pub affinity: NodeId,
    pub a_p: NodeId,
    pub a_c: NodeId,
    pub s_p: NodeId,
    pub s_c: NodeId,
}
