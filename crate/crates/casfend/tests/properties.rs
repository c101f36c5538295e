//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use casfend::corpus::{sample_comments, Comment, NewsRecord};
use casfend::emolex::{extract_emotion, EmotionResources};
use casfend::evalkit::auc;
use casfend::nncore::masked_softmax_values;
use casfend::textenc::{tokenize_words, Vocabulary};

fn record_with_comments(n: usize) -> NewsRecord {
    NewsRecord {
        id: "r".into(),
        content: "some content".into(),
        publish_time: 0,
        label: 0,
        comments: (0..n)
            .map(|i| Comment {
                text: format!("comment {i}"),
                time: i as i64,
            })
            .collect(),
    }
}

proptest! {
    /// Earliest-first sampling: a smaller proportion always yields a prefix
    /// of what a larger proportion yields, 1.0 keeps everything, and any
    /// nonzero proportion keeps at least one comment when any exist.
    #[test]
    fn comment_sampling_is_prefix_monotone(
        n in 0usize..30,
        p1 in 0.0f64..=1.0,
        p2 in 0.0f64..=1.0,
    ) {
        let record = record_with_comments(n);
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let a = sample_comments(&record, lo);
        let b = sample_comments(&record, hi);
        prop_assert!(a.comments.len() <= b.comments.len());
        for (x, y) in a.comments.iter().zip(&b.comments) {
            prop_assert_eq!(&x.text, &y.text);
        }
        prop_assert_eq!(sample_comments(&record, 1.0).comments.len(), n);
        if n > 0 && lo > 0.0 {
            prop_assert!(!a.comments.is_empty());
        }
    }

    /// Masked softmax is a probability distribution over the masked
    /// positions and exactly zero elsewhere.
    #[test]
    fn masked_softmax_is_distribution(
        scores in prop::collection::vec(-30.0f64..30.0, 1..20),
        seed in 0u64..1000,
    ) {
        let n = scores.len();
        let mut mask: Vec<bool> = (0..n).map(|i| (seed >> (i % 10)) & 1 == 1).collect();
        mask[(seed as usize) % n] = true; // at least one active position
        let out = masked_softmax_values(&scores, &mask).unwrap();
        let sum: f64 = out.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {}", sum);
        for (v, &m) in out.iter().zip(&mask) {
            if m {
                prop_assert!(*v >= 0.0);
            } else {
                prop_assert_eq!(*v, 0.0);
            }
        }
    }

    /// Extracting from a list of texts equals extracting from their
    /// space-joined concatenation.
    #[test]
    fn emotion_concatenation_consistency(
        words in prop::collection::vec("[a-z]{1,8}|furious|good|you|:\\)|!{1,3}", 1..25),
        cut in 0usize..25,
    ) {
        let res = EmotionResources::builtin();
        let cut = cut.min(words.len());
        let a = words[..cut].join(" ");
        let b = words[cut..].join(" ");
        let parts: Vec<&str> = [a.as_str(), b.as_str()]
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect();
        if parts.is_empty() {
            return Ok(());
        }
        let joined = parts.join(" ");
        let split_v = extract_emotion(&parts, &res);
        let joined_v = extract_emotion(&[joined.as_str()], &res);
        prop_assert_eq!(split_v.values(), joined_v.values());
    }

    /// AUC depends only on the score ordering: any strictly increasing
    /// transform leaves it unchanged.
    #[test]
    fn auc_invariant_under_monotone_transform(
        scores in prop::collection::vec(0.0f64..1.0, 4..40),
        labels in prop::collection::vec(0u8..2, 4..40),
    ) {
        let n = scores.len().min(labels.len());
        let scores = &scores[..n];
        let mut labels = labels[..n].to_vec();
        labels[0] = 1;
        labels[1] = 0;
        let base = auc(scores, &labels).unwrap();
        let transformed: Vec<f64> = scores.iter().map(|s| 3.0 * s.powi(3) + 1.0).collect();
        let t = auc(&transformed, &labels).unwrap();
        prop_assert!((base - t).abs() < 1e-12);
    }

    /// Every encoded id is a valid vocabulary index, and tokenization is
    /// stable under extra surrounding whitespace.
    #[test]
    fn vocabulary_encode_in_range(
        text in "[a-zA-Z0-9 ,.!?]{0,80}",
    ) {
        let records = vec![NewsRecord {
            id: "r".into(),
            content: "alpha beta gamma delta".into(),
            publish_time: 0,
            label: 0,
            comments: vec![],
        }];
        let vocab = Vocabulary::build(&records, 1).unwrap();
        let ids = vocab.encode(&text, 64);
        prop_assert!(!ids.is_empty());
        for id in ids {
            prop_assert!(id < vocab.len());
        }
        let padded = format!("  {text}\t");
        prop_assert_eq!(tokenize_words(&text), tokenize_words(&padded));
    }
}
