//! casfend: comment-assisted fake news detection.
//!
//! A comment-aware teacher model distills semantic, emotional, and overall
//! knowledge into a content-only student, so the student can score news at
//! publication time before any comments exist. Everything is pure Rust with
//! deterministic seeded training; see the `examples/` directory for runnable
//! entry points and the `casfend` binary for the experiment CLI.

pub mod config;
pub mod corpus;
pub mod emolex;
pub mod error;
pub mod evalkit;
pub mod nncore;
pub mod student;
pub mod teacher;
pub mod textenc;
pub mod trainer;
