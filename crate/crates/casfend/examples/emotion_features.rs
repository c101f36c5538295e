//! Extract the 25-dimensional social-emotion feature vector from comment
//! texts and show the named sub-features.
//!
//! Run with: cargo run --example emotion_features

use casfend::emolex::{extract_emotion, EmotionResources, CATEGORIES, EMOTION_DIM};

fn main() {
    let res = EmotionResources::builtin();
    let comments = [
        "This is SHOCKING!! I can't believe they would lie to us :(",
        "Terrible news, I am so angry and afraid.",
        "Seems fine to me, thanks for sharing :)",
    ];
    let refs: Vec<&str> = comments.iter().copied().collect();
    let v = extract_emotion(&refs, &res);

    println!("{} comments -> {}-dim feature vector\n", refs.len(), EMOTION_DIM);
    for (cat, f) in CATEGORIES.iter().zip(v.emotion_lexicon()) {
        println!("  lexicon[{cat:>12}] = {f:.4}");
    }
    for (cat, f) in CATEGORIES.iter().zip(v.emotion_intensity()) {
        println!("  intensity[{cat:>10}] = {f:.4}");
    }
    println!("  sentiment score      = {:.4}", v.sentiment_score());
    println!("  emoticons            = {:.4}", v.emoticons_count());
    let (q, e) = v.punctuations_count();
    println!("  punctuation (?, !)   = ({q:.4}, {e:.4})");
    let (pos, neg) = v.sentiment_words_count();
    println!("  sentiment words +/-  = ({pos:.4}, {neg:.4})");
    let (first, second) = v.personal_pronoun();
    println!("  pronouns 1st/2nd     = ({first:.4}, {second:.4})");
    println!("  upper-case words     = {:.4}", v.upper_case_count());
}
