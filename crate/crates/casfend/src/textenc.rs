//! Tokenization, vocabulary, and the token-level embedding encoder that
//! produces the content matrix P and comment matrix C with validity masks.
//!
//! The encoder is a trainable embedding table followed by one linear
//! projection with tanh; small enough for finite-difference gradient checks
//! but still a trainable token-level feature extractor.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand_chacha::ChaCha8Rng;

use crate::corpus::NewsRecord;
use crate::error::EncodeError;
use crate::nncore::{BoundParams, Graph, NodeId, ParamSet, Tensor};

pub const PAD: usize = 0;
pub const UNK: usize = 1;

/// Lowercased word/punctuation tokens: alphanumeric runs and punctuation runs
/// each become one token. The emotion extractor consumes raw text, not these.
pub fn tokenize_words(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut current_is_word = false;
    for c in text.chars() {
        if c.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        let is_word = c.is_alphanumeric();
        if !current.is_empty() && is_word != current_is_word {
            tokens.push(std::mem::take(&mut current));
        }
        current_is_word = is_word;
        for lc in c.to_lowercase() {
            current.push(lc);
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    min_count: usize,
}

impl Vocabulary {
    /// Build from the TRAIN partition only. Tokens below `min_count` map to
    /// UNK. Ordering is count-descending, ties lexicographic, so two builds
    /// from the same data assign identical indices.
    pub fn build(train: &[NewsRecord], min_count: usize) -> Result<Self, EncodeError> {
        if train.is_empty() {
            return Err(EncodeError::EmptyTrainingSet);
        }
        let mut counts: HashMap<String, usize> = HashMap::new();
        for rec in train {
            for tok in tokenize_words(&rec.content) {
                *counts.entry(tok).or_insert(0) += 1;
            }
            for c in &rec.comments {
                for tok in tokenize_words(&c.text) {
                    *counts.entry(tok).or_insert(0) += 1;
                }
            }
        }
        let mut kept: Vec<(String, usize)> = counts
            .into_iter()
            .filter(|(_, n)| *n >= min_count)
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut tokens = vec!["<pad>".to_string(), "<unk>".to_string()];
        tokens.extend(kept.into_iter().map(|(t, _)| t));
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            tokens,
            index,
            min_count,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, idx: usize) -> Option<&str> {
        self.tokens.get(idx).map(|s| s.as_str())
    }

    pub fn lookup(&self, token: &str) -> usize {
        self.index.get(token).copied().unwrap_or(UNK)
    }

    /// Token indices for a text, truncated to `max_len`; empty text yields a
    /// single UNK.
    pub fn encode(&self, text: &str, max_len: usize) -> Vec<usize> {
        assert!(max_len >= 1, "max_len must be at least 1");
        let words = tokenize_words(text);
        if words.is_empty() {
            return vec![UNK];
        }
        words
            .iter()
            .take(max_len)
            .map(|w| self.lookup(w))
            .collect()
    }

    /// Persisted as "token<TAB>index" lines under a one-line header.
    pub fn save(&self, path: &Path) -> Result<(), EncodeError> {
        let mut f = fs::File::create(path).map_err(|e| EncodeError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut write = |s: String| -> Result<(), EncodeError> {
            writeln!(f, "{s}").map_err(|e| EncodeError::Io {
                path: path.to_path_buf(),
                source: e,
            })
        };
        write(format!(
            "# casfend-vocab v1\tV={}\tmin_count={}",
            self.tokens.len(),
            self.min_count
        ))?;
        for (i, t) in self.tokens.iter().enumerate() {
            write(format!("{t}\t{i}"))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, EncodeError> {
        let text = fs::read_to_string(path).map_err(|e| EncodeError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| EncodeError::Malformed {
            path: path.to_path_buf(),
            line: 1,
            msg: "empty vocabulary file".into(),
        })?;
        let min_count = header
            .split("min_count=")
            .nth(1)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| EncodeError::Malformed {
                path: path.to_path_buf(),
                line: 1,
                msg: "missing min_count in header".into(),
            })?;
        let mut tokens = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (tok, idx) = line.split_once('\t').ok_or_else(|| EncodeError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                msg: "expected token<TAB>index".into(),
            })?;
            let idx: usize = idx.trim().parse().map_err(|_| EncodeError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                msg: format!("bad index '{}'", idx.trim()),
            })?;
            if idx != tokens.len() {
                return Err(EncodeError::Malformed {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("indices must be dense, expected {} got {}", tokens.len(), idx),
                });
            }
            tokens.push(tok.to_string());
        }
        let index: HashMap<String, usize> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            index,
            tokens,
            min_count,
        })
    }

    pub fn file_hash(&self) -> [u8; 32] {
        let mut s = format!("v1\t{}\t{}\n", self.tokens.len(), self.min_count);
        for (i, t) in self.tokens.iter().enumerate() {
            s.push_str(&format!("{t}\t{i}\n"));
        }
        crate::nncore::sha256_bytes(s.as_bytes())
    }
}

/// A d x L token embedding matrix with its validity mask; masked-out columns
/// are all-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenMatrix {
    pub values: Tensor,
    pub mask: Vec<bool>,
}

impl TokenMatrix {
    pub fn real_tokens(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn check_invariants(&self) {
        assert_eq!(self.values.cols(), self.mask.len());
        assert!(self.real_tokens() >= 1, "mask must have a true entry");
        for (j, &m) in self.mask.iter().enumerate() {
            if !m {
                for i in 0..self.values.rows() {
                    assert_eq!(self.values.at(i, j), 0.0, "masked column {j} not zero");
                }
            }
        }
    }
}

/// Encoder dimensions plus the parameter-naming convention for the embedding
/// table and projection.
#[derive(Debug, Clone)]
pub struct Encoder {
    pub d: usize,
    pub max_content_len: usize,
    pub max_comment_len: usize,
}

pub const ENC_EMB: &str = "enc.emb";
pub const ENC_PROJ: &str = "enc.proj";
pub const ENC_BIAS: &str = "enc.bias";

impl Encoder {
    pub fn new(d: usize, max_content_len: usize, max_comment_len: usize) -> Self {
        Encoder {
            d,
            max_content_len,
            max_comment_len,
        }
    }

    pub fn init_params(&self, vocab_size: usize, params: &mut ParamSet, rng: &mut ChaCha8Rng) {
        params.add_gaussian(ENC_EMB, &[vocab_size, self.d], 0.1, rng);
        let std = (1.0 / self.d as f64).sqrt();
        params.add_gaussian(ENC_PROJ, &[self.d, self.d], std, rng);
        params.add_zeros(ENC_BIAS, &[self.d]);
    }

    /// Padded token ids and mask for the news content.
    pub fn content_ids(&self, vocab: &Vocabulary, record: &NewsRecord) -> (Vec<usize>, Vec<bool>) {
        let ids = vocab.encode(&record.content, self.max_content_len);
        pad_ids(ids, self.max_content_len)
    }

    /// Padded token ids and mask for the comments, joined in time order.
    /// Zero comments degenerate to a single UNK token so downstream softmax
    /// always has a real column.
    pub fn comment_ids(&self, vocab: &Vocabulary, record: &NewsRecord) -> (Vec<usize>, Vec<bool>) {
        let joined = record
            .comments
            .iter()
            .map(|c| c.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let ids = if joined.trim().is_empty() {
            vec![UNK]
        } else {
            vocab.encode(&joined, self.max_comment_len)
        };
        pad_ids(ids, self.max_comment_len)
    }

    /// Graph forward: column i = tanh(proj * emb[token_i] + bias) for real
    /// tokens, exactly zero for padding.
    pub fn encode(
        &self,
        g: &mut Graph,
        bound: &BoundParams,
        ids: &[usize],
        mask: &[bool],
    ) -> NodeId {
        let emb = bound.node(ENC_EMB);
        let proj = bound.node(ENC_PROJ);
        let bias = bound.node(ENC_BIAS);
        let gathered = g.gather_cols(emb, ids);
        let projected = g.matmul(proj, gathered, false, false);
        let shifted = g.add_col_bias(projected, bias);
        let activated = g.tanh(shifted);
        g.zero_cols(activated, mask)
    }

    /// Value-level encoding (builds a scratch graph); used for traces/tests.
    pub fn encode_values(&self, params: &ParamSet, ids: &[usize], mask: &[bool]) -> TokenMatrix {
        let mut g = Graph::new();
        let bound = BoundParams::bind(&mut g, params);
        let node = self.encode(&mut g, &bound, ids, mask);
        TokenMatrix {
            values: g.value(node).clone(),
            mask: mask.to_vec(),
        }
    }
}

fn pad_ids(mut ids: Vec<usize>, max_len: usize) -> (Vec<usize>, Vec<bool>) {
    ids.truncate(max_len);
    let n = ids.len();
    let mut mask = vec![true; n];
    ids.resize(max_len, PAD);
    mask.resize(max_len, false);
    (ids, mask)
}
