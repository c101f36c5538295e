//! Lexicon-based social-emotion features extracted from raw comment text.
//!
//! The feature vector has 25 dimensions in a fixed segment layout:
//!
//! | segment               | dims  | semantics                                           |
//! |-----------------------|-------|------------------------------------------------------|
//! | emotion_lexicon       | 0..8  | per-category matched-word frequency (count / words)  |
//! | emotion_intensity     | 8..16 | per-category mean intensity of matched words         |
//! | sentiment_score       | 16    | (pos - neg) / (pos + neg + 1)                         |
//! | emoticons_count       | 17    | emoticon tokens / non-whitespace characters           |
//! | punctuations_count    | 18,19 | '!' and '?' characters / non-whitespace characters    |
//! | sentiment_words_count | 20,21 | positive and negative word counts / words             |
//! | personal_pronoun      | 22,23 | 1st- and 2nd-person pronoun frequencies               |
//! | upper_case_count      | 24    | fully-uppercase words / words                         |
//!
//! Words are whitespace-split tokens; lexicon matching lowercases a token and
//! strips leading/trailing non-alphanumeric characters. All segments are
//! frequency-normalized so comment volume does not change the feature scale.

pub mod builtin;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::EmolexError;

/// The eight basic emotion categories, in segment order.
pub const CATEGORIES: [&str; 8] = [
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
];

pub const EMOTION_DIM: usize = 25;

/// Position of the smoothed sentiment score inside [`EmotionVector`].
pub const SENTIMENT_SCORE_IDX: usize = 16;

const FIRST_PERSON: &[&str] = &[
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
];
const SECOND_PERSON: &[&str] = &["you", "your", "yours", "yourself", "yourselves"];

#[derive(Debug, Clone)]
pub struct EmotionResources {
    /// word -> category index in [`CATEGORIES`].
    pub emotion: HashMap<String, usize>,
    /// word -> intensity in [0, 1].
    pub intensity: HashMap<String, f64>,
    /// word -> +1 / -1.
    pub sentiment: HashMap<String, i8>,
    pub emoticons: HashSet<String>,
    pub first_person: HashSet<String>,
    pub second_person: HashSet<String>,
    /// Compute the upper-case segment (meaningless for caseless scripts).
    pub use_upper_case: bool,
    /// Duplicate-entry warnings collected while loading.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmotionVector(pub [f64; EMOTION_DIM]);

impl EmotionVector {
    pub fn zero() -> Self {
        EmotionVector([0.0; EMOTION_DIM])
    }

    pub fn values(&self) -> &[f64; EMOTION_DIM] {
        &self.0
    }

    pub fn emotion_lexicon(&self) -> &[f64] {
        &self.0[0..8]
    }
    pub fn emotion_intensity(&self) -> &[f64] {
        &self.0[8..16]
    }
    pub fn sentiment_score(&self) -> f64 {
        self.0[16]
    }
    pub fn emoticons_count(&self) -> f64 {
        self.0[17]
    }
    pub fn punctuations_count(&self) -> (f64, f64) {
        (self.0[18], self.0[19])
    }
    pub fn sentiment_words_count(&self) -> (f64, f64) {
        (self.0[20], self.0[21])
    }
    pub fn personal_pronoun(&self) -> (f64, f64) {
        (self.0[22], self.0[23])
    }
    pub fn upper_case_count(&self) -> f64 {
        self.0[24]
    }
}

impl fmt::Display for EmotionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.0.iter().map(|v| format!("{v:.4}")).collect();
        write!(f, "[{}]", vals.join(", "))
    }
}

fn category_index(name: &str) -> Result<usize, EmolexError> {
    CATEGORIES
        .iter()
        .position(|c| *c == name)
        .ok_or_else(|| EmolexError::UnknownCategory(name.to_string()))
}

fn parse_emotion_tsv(
    text: &str,
    origin: &Path,
    warnings: &mut Vec<String>,
) -> Result<HashMap<String, usize>, EmolexError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, cat) = line.split_once('\t').ok_or_else(|| EmolexError::Malformed {
            path: origin.to_path_buf(),
            line: i + 1,
            msg: "expected word<TAB>category".into(),
        })?;
        let word = word.trim().to_lowercase();
        let idx = category_index(cat.trim())?;
        if map.insert(word.clone(), idx).is_some() {
            warnings.push(format!("duplicate emotion entry for '{word}', later wins"));
        }
    }
    Ok(map)
}

fn parse_intensity_tsv(
    text: &str,
    origin: &Path,
    warnings: &mut Vec<String>,
) -> Result<HashMap<String, f64>, EmolexError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, val) = line.split_once('\t').ok_or_else(|| EmolexError::Malformed {
            path: origin.to_path_buf(),
            line: i + 1,
            msg: "expected word<TAB>value".into(),
        })?;
        let word = word.trim().to_lowercase();
        let value: f64 = val.trim().parse().map_err(|_| EmolexError::Malformed {
            path: origin.to_path_buf(),
            line: i + 1,
            msg: format!("bad intensity value '{}'", val.trim()),
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(EmolexError::IntensityRange { word, value });
        }
        if map.insert(word.clone(), value).is_some() {
            warnings.push(format!("duplicate intensity entry for '{word}', later wins"));
        }
    }
    Ok(map)
}

fn parse_sentiment_tsv(
    text: &str,
    origin: &Path,
    warnings: &mut Vec<String>,
) -> Result<HashMap<String, i8>, EmolexError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, val) = line.split_once('\t').ok_or_else(|| EmolexError::Malformed {
            path: origin.to_path_buf(),
            line: i + 1,
            msg: "expected word<TAB>+1|-1".into(),
        })?;
        let word = word.trim().to_lowercase();
        let polarity = match val.trim() {
            "+1" | "1" => 1i8,
            "-1" => -1i8,
            other => {
                return Err(EmolexError::Malformed {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    msg: format!("bad sentiment polarity '{other}'"),
                })
            }
        };
        if map.insert(word.clone(), polarity).is_some() {
            warnings.push(format!("duplicate sentiment entry for '{word}', later wins"));
        }
    }
    Ok(map)
}

fn pronoun_sets() -> (HashSet<String>, HashSet<String>) {
    (
        FIRST_PERSON.iter().map(|s| s.to_string()).collect(),
        SECOND_PERSON.iter().map(|s| s.to_string()).collect(),
    )
}

impl EmotionResources {
    /// The built-in default resource set (~200 entries), used when no
    /// resource directory is configured.
    pub fn builtin() -> Self {
        let origin = Path::new("<builtin>");
        let mut warnings = Vec::new();
        let emotion = parse_emotion_tsv(builtin::EMOTION_LEXICON_TSV, origin, &mut warnings)
            .expect("builtin emotion lexicon is valid");
        let intensity = parse_intensity_tsv(builtin::INTENSITY_TSV, origin, &mut warnings)
            .expect("builtin intensity lexicon is valid");
        let sentiment = parse_sentiment_tsv(builtin::SENTIMENT_TSV, origin, &mut warnings)
            .expect("builtin sentiment lexicon is valid");
        let emoticons = builtin::EMOTICONS_TXT
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        let (first_person, second_person) = pronoun_sets();
        EmotionResources {
            emotion,
            intensity,
            sentiment,
            emoticons,
            first_person,
            second_person,
            use_upper_case: true,
            warnings,
        }
    }

    /// A deterministic fingerprint of the resource contents, recorded in
    /// checkpoints alongside the vocabulary hash.
    pub fn content_for_hash(&self) -> String {
        let mut parts: Vec<String> = self
            .emotion
            .iter()
            .map(|(w, c)| format!("e:{w}:{c}"))
            .chain(self.intensity.iter().map(|(w, v)| format!("i:{w}:{v}")))
            .chain(self.sentiment.iter().map(|(w, s)| format!("s:{w}:{s}")))
            .chain(self.emoticons.iter().map(|e| format!("m:{e}")))
            .collect();
        parts.sort();
        parts.join("\n")
    }
}

/// Load the four resource files from a directory: `emotion_lexicon.tsv`,
/// `intensity.tsv`, `sentiment.tsv`, `emoticons.txt`.
pub fn load_resources(dir: &Path) -> Result<EmotionResources, EmolexError> {
    let read = |name: &str| -> Result<(String, std::path::PathBuf), EmolexError> {
        let path = dir.join(name);
        if !path.exists() {
            return Err(EmolexError::MissingFile(path));
        }
        let text = fs::read_to_string(&path).map_err(|e| EmolexError::Io {
            path: path.clone(),
            source: e,
        })?;
        Ok((text, path))
    };
    let mut warnings = Vec::new();
    let (emo_text, emo_path) = read("emotion_lexicon.tsv")?;
    let emotion = parse_emotion_tsv(&emo_text, &emo_path, &mut warnings)?;
    let (int_text, int_path) = read("intensity.tsv")?;
    let intensity = parse_intensity_tsv(&int_text, &int_path, &mut warnings)?;
    let (sen_text, sen_path) = read("sentiment.tsv")?;
    let sentiment = parse_sentiment_tsv(&sen_text, &sen_path, &mut warnings)?;
    let (emoticon_text, _) = read("emoticons.txt")?;
    let emoticons = emoticon_text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    let (first_person, second_person) = pronoun_sets();
    Ok(EmotionResources {
        emotion,
        intensity,
        sentiment,
        emoticons,
        first_person,
        second_person,
        use_upper_case: true,
        warnings,
    })
}

/// Write the built-in resources as files, so users can start from a template.
pub fn write_default_resources(dir: &Path) -> Result<(), EmolexError> {
    let write = |name: &str, contents: &str| -> Result<(), EmolexError> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| EmolexError::Io { path, source: e })
    };
    write("emotion_lexicon.tsv", builtin::EMOTION_LEXICON_TSV)?;
    write("intensity.tsv", builtin::INTENSITY_TSV)?;
    write("sentiment.tsv", builtin::SENTIMENT_TSV)?;
    write("emoticons.txt", builtin::EMOTICONS_TXT)
}

/// Strip leading/trailing non-alphanumeric characters and lowercase;
/// this is the lexicon lookup key for a raw token.
fn lexicon_key(token: &str) -> String {
    token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

fn is_all_upper(token: &str) -> bool {
    let mut saw_alpha = false;
    for c in token.chars() {
        if c.is_alphabetic() {
            saw_alpha = true;
            if !c.is_uppercase() {
                return false;
            }
        }
    }
    saw_alpha
}

/// Extract the 25-dimensional emotion feature vector from a list of texts
/// (typically all comments of one record). Empty input yields the zero
/// vector.
pub fn extract_emotion(texts: &[&str], resources: &EmotionResources) -> EmotionVector {
    let mut out = [0.0; EMOTION_DIM];
    let mut total_words = 0usize;
    let mut total_chars = 0usize;
    let mut cat_counts = [0usize; 8];
    let mut cat_intensity_sums = [0.0f64; 8];
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut emoticon_count = 0usize;
    let mut exclaim = 0usize;
    let mut question = 0usize;
    let mut first = 0usize;
    let mut second = 0usize;
    let mut upper = 0usize;

    for text in texts {
        total_chars += text.chars().filter(|c| !c.is_whitespace()).count();
        exclaim += text.chars().filter(|&c| c == '!').count();
        question += text.chars().filter(|&c| c == '?').count();
        for token in text.split_whitespace() {
            total_words += 1;
            if resources.emoticons.contains(token) {
                emoticon_count += 1;
            }
            if resources.use_upper_case && is_all_upper(token) {
                upper += 1;
            }
            let key = lexicon_key(token);
            if key.is_empty() {
                continue;
            }
            if let Some(&cat) = resources.emotion.get(&key) {
                cat_counts[cat] += 1;
                cat_intensity_sums[cat] += resources.intensity.get(&key).copied().unwrap_or(0.0);
            }
            match resources.sentiment.get(&key) {
                Some(1) => pos += 1,
                Some(-1) => neg += 1,
                _ => {}
            }
            if resources.first_person.contains(&key) {
                first += 1;
            } else if resources.second_person.contains(&key) {
                second += 1;
            }
        }
    }

    if total_words == 0 {
        return EmotionVector::zero();
    }
    let w = total_words as f64;
    let ch = total_chars as f64;
    for c in 0..8 {
        out[c] = cat_counts[c] as f64 / w;
        out[8 + c] = if cat_counts[c] > 0 {
            cat_intensity_sums[c] / cat_counts[c] as f64
        } else {
            0.0
        };
    }
    out[16] = (pos as f64 - neg as f64) / (pos as f64 + neg as f64 + 1.0);
    out[17] = emoticon_count as f64 / ch;
    out[18] = exclaim as f64 / ch;
    out[19] = question as f64 / ch;
    out[20] = pos as f64 / w;
    out[21] = neg as f64 / w;
    out[22] = first as f64 / w;
    out[23] = second as f64 / w;
    out[24] = upper as f64 / w;
    EmotionVector(out)
}
