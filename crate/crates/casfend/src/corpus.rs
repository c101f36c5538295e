//! Loading, validation, chronological splitting, and comment subsampling of
//! content-comments records, plus a seeded synthetic corpus generator for
//! desk-scale experiments.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub text: String,
    pub time: i64,
}

/// One content-comments pair with label and timestamps, the unit of all
/// pipelines. Comments are kept sorted ascending by time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsRecord {
    pub id: String,
    pub content: String,
    pub publish_time: i64,
    pub label: u8,
    pub comments: Vec<Comment>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusConfig {
    /// Drop comments whose text is empty after trimming.
    pub drop_empty_comments: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            drop_empty_comments: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSplit {
    pub train: Vec<NewsRecord>,
    pub val: Vec<NewsRecord>,
    pub test: Vec<NewsRecord>,
    pub ratio: (usize, usize, usize),
}

fn validate(mut rec: NewsRecord, config: &CorpusConfig) -> Result<NewsRecord, CorpusError> {
    if rec.label > 1 {
        return Err(CorpusError::Invalid {
            id: rec.id.clone(),
            msg: format!("label must be 0 or 1, got {}", rec.label),
        });
    }
    if rec.content.trim().is_empty() {
        return Err(CorpusError::Invalid {
            id: rec.id.clone(),
            msg: "content is empty".into(),
        });
    }
    if config.drop_empty_comments {
        rec.comments.retain(|c| !c.text.trim().is_empty());
    }
    // Stable sort: ties preserve input order.
    rec.comments.sort_by_key(|c| c.time);
    Ok(rec)
}

/// Load a JSONL corpus; one record per line, validated and with comments
/// re-sorted by time.
pub fn load_corpus(path: &Path, config: &CorpusConfig) -> Result<Vec<NewsRecord>, CorpusError> {
    let file = fs::File::open(path).map_err(|e| CorpusError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| CorpusError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: NewsRecord = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let rec = validate(rec, config).map_err(|e| CorpusError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        if !seen.insert(rec.id.clone()) {
            return Err(CorpusError::DuplicateId(rec.id));
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn save_corpus(path: &Path, records: &[NewsRecord]) -> Result<(), CorpusError> {
    let mut file = fs::File::create(path).map_err(|e| CorpusError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    for rec in records {
        let line = serde_json::to_string(rec).expect("record serialization cannot fail");
        writeln!(file, "{}", line).map_err(|e| CorpusError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    Ok(())
}

/// Sort by publish time (ties broken by id for determinism) and partition
/// contiguously: floor(n*a/s) train, floor(n*b/s) val, remainder test.
pub fn chronological_split(
    records: &[NewsRecord],
    ratio: (usize, usize, usize),
) -> Result<CorpusSplit, CorpusError> {
    let (a, b, c) = ratio;
    let s = a + b + c;
    let n = records.len();
    if n < s {
        return Err(CorpusError::TooFewRecords { min: s, got: n });
    }
    let mut sorted = records.to_vec();
    sorted.sort_by(|x, y| {
        x.publish_time
            .cmp(&y.publish_time)
            .then_with(|| x.id.cmp(&y.id))
    });
    let n_train = n * a / s;
    let n_val = n * b / s;
    let test = sorted.split_off(n_train + n_val);
    let val = sorted.split_off(n_train);
    Ok(CorpusSplit {
        train: sorted,
        val,
        test,
        ratio,
    })
}

/// Keep the earliest `ceil(proportion * |comments|)` comments. The ceiling
/// means any nonzero proportion keeps at least one comment when any exist.
pub fn sample_comments(record: &NewsRecord, proportion: f64) -> NewsRecord {
    assert!(
        (0.0..=1.0).contains(&proportion),
        "proportion must be in [0, 1], got {proportion}"
    );
    let keep = (proportion * record.comments.len() as f64).ceil() as usize;
    let mut out = record.clone();
    out.comments.truncate(keep);
    out
}

/// Parameters of the synthetic corpus generator. Fake records carry
/// fake-marker tokens in the content with probability `p_marker`; comments
/// echo the content marker and carry class-specific emotion words so that all
/// three knowledge channels (semantic, emotional, overall) are learnable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_records: usize,
    pub vocab_size: usize,
    pub fake_markers: Vec<String>,
    pub real_markers: Vec<String>,
    /// Probability that a record's content carries its class marker.
    pub p_marker: f64,
    /// Probability that a comment echoes the content marker token.
    pub echo_rate: f64,
    pub content_len: usize,
    pub comments_per_record: usize,
    pub comment_len: usize,
    /// Per-token probability of an emotion word in fake-record comments.
    pub fake_emotion_rate: f64,
    /// Per-token probability of an emotion word in real-record comments.
    pub real_emotion_rate: f64,
    pub start_time: i64,
    pub time_step: i64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_records: 900,
            vocab_size: 120,
            fake_markers: vec![
                "hoax".into(),
                "fabricated".into(),
                "clickbait".into(),
                "rumor".into(),
            ],
            real_markers: vec![
                "official".into(),
                "confirmed".into(),
                "bulletin".into(),
                "statement".into(),
            ],
            p_marker: 0.75,
            echo_rate: 0.9,
            content_len: 24,
            comments_per_record: 8,
            comment_len: 8,
            fake_emotion_rate: 0.35,
            real_emotion_rate: 0.05,
            start_time: 1_600_000_000,
            time_step: 3600,
        }
    }
}

/// Emotion words injected into comments. High-arousal words for fake records,
/// calm ones for real records; all are present in the built-in lexicons.
const FAKE_EMOTION_WORDS: &[&str] = &[
    "furious", "terrified", "outraged", "horrible", "disgusting", "liar", "angry", "shocked",
];
const REAL_EMOTION_WORDS: &[&str] = &["calm", "good", "agree", "thanks", "helpful", "peaceful"];

/// Deterministic synthetic corpus: same seed, byte-identical output.
pub fn generate_synthetic_corpus(
    spec: &SyntheticSpec,
    seed: u64,
) -> Result<Vec<NewsRecord>, CorpusError> {
    let n_markers = spec.fake_markers.len() + spec.real_markers.len();
    if spec.vocab_size <= n_markers {
        return Err(CorpusError::VocabTooSmall {
            vocab: spec.vocab_size,
            markers: n_markers,
        });
    }
    let n_filler = spec.vocab_size - n_markers;
    let filler: Vec<String> = (0..n_filler).map(|i| format!("w{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(spec.n_records);
    for i in 0..spec.n_records {
        let label = (i % 2) as u8; // alternate so every chronological slice is balanced
        let fake = label == 1;
        let markers = if fake {
            &spec.fake_markers
        } else {
            &spec.real_markers
        };
        let mut tokens: Vec<String> = (0..spec.content_len)
            .map(|_| filler[rng.gen_range(0..n_filler)].clone())
            .collect();
        let marker = if rng.gen_bool(spec.p_marker) {
            let m = markers[rng.gen_range(0..markers.len())].clone();
            let pos = rng.gen_range(0..tokens.len());
            tokens[pos] = m.clone();
            Some(m)
        } else {
            None
        };
        let publish_time = spec.start_time + i as i64 * spec.time_step;
        let emotion_rate = if fake {
            spec.fake_emotion_rate
        } else {
            spec.real_emotion_rate
        };
        let emotion_words = if fake {
            FAKE_EMOTION_WORDS
        } else {
            REAL_EMOTION_WORDS
        };
        let mut comments = Vec::with_capacity(spec.comments_per_record);
        for j in 0..spec.comments_per_record {
            let mut words: Vec<String> = (0..spec.comment_len)
                .map(|_| {
                    if rng.gen_bool(emotion_rate) {
                        let w = emotion_words[rng.gen_range(0..emotion_words.len())];
                        // Fake-news crowds also shout.
                        if fake {
                            format!("{w}!")
                        } else {
                            w.to_string()
                        }
                    } else {
                        filler[rng.gen_range(0..n_filler)].clone()
                    }
                })
                .collect();
            if let Some(m) = &marker {
                if rng.gen_bool(spec.echo_rate) {
                    let pos = rng.gen_range(0..words.len());
                    words[pos] = m.clone();
                }
            }
            comments.push(Comment {
                text: words.join(" "),
                time: publish_time + (j as i64 + 1) * 60,
            });
        }
        records.push(NewsRecord {
            id: format!("syn{:05}", i),
            content: tokens.join(" "),
            publish_time,
            label,
            comments,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, time: i64, label: u8) -> NewsRecord {
        NewsRecord {
            id: id.into(),
            content: format!("content of {id}"),
            publish_time: time,
            label,
            comments: vec![],
        }
    }

    #[test]
    fn load_three_valid_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let lines = [
            r#"{"id":"a","content":"x y","publish_time":1,"label":0,"comments":[]}"#,
            r#"{"id":"b","content":"y z","publish_time":2,"label":1,"comments":[{"text":"hm","time":5}]}"#,
            r#"{"id":"c","content":"z","publish_time":3,"label":0,"comments":[]}"#,
        ];
        fs::write(&path, lines.join("\n")).unwrap();
        let recs = load_corpus(&path, &CorpusConfig::default()).unwrap();
        assert_eq!(recs.len(), 3);
    }

    #[test]
    fn missing_label_errors_with_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        fs::write(
            &path,
            r#"{"id":"a","content":"x","publish_time":1,"comments":[]}"#,
        )
        .unwrap();
        let err = load_corpus(&path, &CorpusConfig::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
        assert!(msg.contains("label"), "{msg}");
    }

    #[test]
    fn duplicate_id_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let line = r#"{"id":"a","content":"x","publish_time":1,"label":0,"comments":[]}"#;
        fs::write(&path, format!("{line}\n{line}")).unwrap();
        assert!(matches!(
            load_corpus(&path, &CorpusConfig::default()),
            Err(CorpusError::DuplicateId(_))
        ));
    }

    #[test]
    fn out_of_order_comments_are_sorted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        fs::write(
            &path,
            r#"{"id":"a","content":"x","publish_time":1,"label":0,"comments":[{"text":"late","time":9},{"text":"early","time":2},{"text":"mid","time":5}]}"#,
        )
        .unwrap();
        let recs = load_corpus(&path, &CorpusConfig::default()).unwrap();
        // Independent sort of the same list.
        let mut expect = vec![9, 2, 5];
        expect.sort();
        let got: Vec<i64> = recs[0].comments.iter().map(|c| c.time).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn empty_comments_dropped_by_default_kept_when_allowed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        fs::write(
            &path,
            r#"{"id":"a","content":"x","publish_time":1,"label":0,"comments":[{"text":" ","time":1},{"text":"ok","time":2}]}"#,
        )
        .unwrap();
        let recs = load_corpus(&path, &CorpusConfig::default()).unwrap();
        assert_eq!(recs[0].comments.len(), 1);
        let keep = CorpusConfig {
            drop_empty_comments: false,
        };
        let recs = load_corpus(&path, &keep).unwrap();
        assert_eq!(recs[0].comments.len(), 2);
    }

    #[test]
    fn split_exact_division() {
        let records: Vec<_> = (0..12).map(|i| rec(&format!("r{i:02}"), i, 0)).collect();
        let split = chronological_split(&records, (4, 1, 1)).unwrap();
        assert_eq!(split.train.len(), 8);
        assert_eq!(split.val.len(), 2);
        assert_eq!(split.test.len(), 2);
    }

    #[test]
    fn split_seven_records_remainder_to_test() {
        // Floor-based rule enumerated by hand: 7*4/6=4 train, 7*1/6=1 val, 2 test.
        let records: Vec<_> = (0..7).map(|i| rec(&format!("r{i}"), i, 0)).collect();
        let split = chronological_split(&records, (4, 1, 1)).unwrap();
        assert_eq!(
            (split.train.len(), split.val.len(), split.test.len()),
            (4, 1, 2)
        );
    }

    #[test]
    fn split_too_few_records_errors() {
        let records: Vec<_> = (0..5).map(|i| rec(&format!("r{i}"), i, 0)).collect();
        assert!(chronological_split(&records, (4, 1, 1)).is_err());
    }

    #[test]
    fn split_is_chronological_and_partition() {
        let records: Vec<_> = (0..20)
            .map(|i| rec(&format!("r{i:02}"), (37 * i) % 19, 0))
            .collect();
        let split = chronological_split(&records, (4, 1, 1)).unwrap();
        let max_train = split.train.iter().map(|r| r.publish_time).max().unwrap();
        let min_val = split.val.iter().map(|r| r.publish_time).min().unwrap();
        let max_val = split.val.iter().map(|r| r.publish_time).max().unwrap();
        let min_test = split.test.iter().map(|r| r.publish_time).min().unwrap();
        assert!(max_train <= min_val);
        assert!(max_val <= min_test);
        let mut all: Vec<_> = split
            .train
            .iter()
            .chain(&split.val)
            .chain(&split.test)
            .map(|r| r.id.clone())
            .collect();
        all.sort();
        let mut ids: Vec<_> = records.iter().map(|r| r.id.clone()).collect();
        ids.sort();
        assert_eq!(all, ids);
    }

    #[test]
    fn sample_comments_ceiling_rule() {
        let mut r = rec("a", 1, 0);
        r.comments = (0..4)
            .map(|i| Comment {
                text: format!("c{i}"),
                time: i,
            })
            .collect();
        assert_eq!(sample_comments(&r, 0.25).comments.len(), 1);
        assert_eq!(sample_comments(&r, 0.25).comments[0].text, "c0");
        assert_eq!(sample_comments(&r, 0.0).comments.len(), 0);
        assert_eq!(sample_comments(&r, 1.0).comments, r.comments);
        // 25% of a single comment still keeps it.
        r.comments.truncate(1);
        assert_eq!(sample_comments(&r, 0.25).comments.len(), 1);
    }

    #[test]
    fn synthetic_is_deterministic() {
        let spec = SyntheticSpec {
            n_records: 10,
            ..Default::default()
        };
        let a = generate_synthetic_corpus(&spec, 42).unwrap();
        let b = generate_synthetic_corpus(&spec, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_corpus(&spec, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn p_marker_one_forces_marker_in_every_fake_record() {
        let spec = SyntheticSpec {
            n_records: 40,
            p_marker: 1.0,
            ..Default::default()
        };
        let recs = generate_synthetic_corpus(&spec, 7).unwrap();
        for r in recs.iter().filter(|r| r.label == 1) {
            let has = spec
                .fake_markers
                .iter()
                .any(|m| r.content.split_whitespace().any(|t| t == m));
            assert!(has, "fake record {} lacks a marker", r.id);
        }
    }

    #[test]
    fn vocab_too_small_errors() {
        let spec = SyntheticSpec {
            vocab_size: 5,
            ..Default::default()
        };
        assert!(generate_synthetic_corpus(&spec, 1).is_err());
    }

    #[test]
    fn round_trip_equals() {
        let spec = SyntheticSpec {
            n_records: 6,
            ..Default::default()
        };
        let recs = generate_synthetic_corpus(&spec, 11).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        save_corpus(&path, &recs).unwrap();
        let back = load_corpus(&path, &CorpusConfig::default()).unwrap();
        assert_eq!(back, recs);
    }
}
