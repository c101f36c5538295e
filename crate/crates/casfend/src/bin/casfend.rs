//! Batch CLI over the full pipeline: corpus generation, splitting, two-stage
//! training, evaluation, and the sweep/ablation harnesses.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use casfend::config::Config;
use casfend::corpus::{
    chronological_split, generate_synthetic_corpus, load_corpus, save_corpus, CorpusSplit,
    NewsRecord, SyntheticSpec,
};
use casfend::emolex::EmotionResources;
use casfend::error::TrainError;
use casfend::evalkit::{
    ablation_csv, ablation_sweep, alpha_sweep, comment_proportion_sweep, lr_sweep, lr_sweep_csv,
    scalar_sweep_csv,
};
use casfend::nncore::CheckpointKind;
use casfend::student::KnowledgeSet;
use casfend::textenc::Vocabulary;
use casfend::trainer::{
    evaluate_student, evaluate_teacher, grad_check_suite, history_csv, load_verified_checkpoint,
    save_student_checkpoint, save_teacher_checkpoint, train_student, train_teacher,
    StudentObjective,
};

const ALPHA_GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
const LR_GRID: [f64; 8] = [3e-5, 5e-5, 7e-5, 1e-4, 2e-4, 5e-4, 9e-4, 1e-3];
const PROPORTION_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Parser)]
#[command(name = "casfend", version, about = "comment-assisted fake news detection pipeline")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArg {
    /// TOML config; omitted means all defaults.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DataDirArg {
    /// Directory containing train.jsonl, val.jsonl, test.jsonl.
    #[arg(long)]
    data_dir: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic corpus as JSONL.
    GenCorpus {
        /// TOML file with generator parameters; omitted means defaults.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Chronological train/val/test split of a JSONL corpus.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        /// a:b:c integer ratio, e.g. 4:1:1.
        #[arg(long, default_value = "4:1:1")]
        ratio: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Stage one: train the comment-aware teacher.
    TrainTeacher {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        /// Checkpoint output; also writes <out>.vocab and <out>.history.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Stage two: distill the content-only student from a frozen teacher.
    TrainStudent {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        #[arg(long)]
        teacher: PathBuf,
        /// Distillation weight.
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a checkpoint on a JSONL dataset.
    Eval {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Fraction of earliest comments visible to a teacher model.
        #[arg(long, default_value_t = 1.0)]
        comments_prop: f64,
        /// Vocabulary file; defaults to <model>.vocab.
        #[arg(long)]
        vocab: Option<PathBuf>,
    },
    /// Teacher/student performance at test-time comment proportions 0-100%.
    SweepComments {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        #[arg(long)]
        teacher: PathBuf,
        #[arg(long)]
        student: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Student test performance over the distillation weight grid.
    SweepAlpha {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Teacher and student test performance over the learning-rate grid.
    SweepLr {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Paired-seed comparison of the full student against the three
    /// two-knowledge variants.
    Ablate {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        data: DataDirArg,
        /// Comma-separated seeds.
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the full default configuration as TOML.
    DefaultConfig,
    /// Verify backpropagation against finite differences end to end.
    GradCheck {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: 1,
            msg: msg.into(),
        }
    }
    fn data(msg: impl std::fmt::Display) -> Self {
        CliError {
            code: 2,
            msg: msg.to_string(),
        }
    }
    fn numeric(msg: impl std::fmt::Display) -> Self {
        CliError {
            code: 3,
            msg: msg.to_string(),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match &e {
            TrainError::NonFiniteLoss { .. } | TrainError::Nn(_) => CliError::numeric(e),
            TrainError::NegativeAlpha(_) => CliError::usage(e.to_string()),
            _ => CliError::data(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's rendered help/version on stdout with success, but
            // report genuine usage errors as exit 1.
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn load_config(arg: &ConfigArg) -> Result<Config, CliError> {
    match &arg.config {
        Some(path) => Config::load(path).map_err(CliError::data),
        None => Ok(Config::default()),
    }
}

fn load_split(cfg: &Config, dir: &Path) -> Result<CorpusSplit, CliError> {
    let part = |name: &str| -> Result<Vec<NewsRecord>, CliError> {
        load_corpus(&dir.join(name), &cfg.corpus).map_err(CliError::data)
    };
    Ok(CorpusSplit {
        train: part("train.jsonl")?,
        val: part("val.jsonl")?,
        test: part("test.jsonl")?,
        ratio: (4, 1, 1),
    })
}

fn vocab_path_for(model: &Path) -> PathBuf {
    let mut s = model.as_os_str().to_owned();
    s.push(".vocab");
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::GenCorpus { spec, seed, out } => {
            let spec: SyntheticSpec = match spec {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| {
                        CliError::data(format!("cannot read {}: {e}", path.display()))
                    })?;
                    toml::from_str(&text)
                        .map_err(|e| CliError::data(format!("bad spec {}: {e}", path.display())))?
                }
                None => SyntheticSpec::default(),
            };
            let records = generate_synthetic_corpus(&spec, seed).map_err(CliError::data)?;
            save_corpus(&out, &records).map_err(CliError::data)?;
            println!("wrote {} records to {}", records.len(), out.display());
        }
        Cmd::Split {
            input,
            ratio,
            out_dir,
        } => {
            let parts: Vec<usize> = ratio
                .split(':')
                .map(|p| p.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::usage(format!("bad ratio '{ratio}', expected a:b:c")))?;
            if parts.len() != 3 || parts.iter().any(|&p| p == 0) {
                return Err(CliError::usage(format!(
                    "bad ratio '{ratio}', expected three positive integers a:b:c"
                )));
            }
            let cfg = Config::default();
            let records = load_corpus(&input, &cfg.corpus).map_err(CliError::data)?;
            let split = chronological_split(&records, (parts[0], parts[1], parts[2]))
                .map_err(CliError::data)?;
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))?;
            save_corpus(&out_dir.join("train.jsonl"), &split.train).map_err(CliError::data)?;
            save_corpus(&out_dir.join("val.jsonl"), &split.val).map_err(CliError::data)?;
            save_corpus(&out_dir.join("test.jsonl"), &split.test).map_err(CliError::data)?;
            println!(
                "split {} records into {}/{}/{}",
                records.len(),
                split.train.len(),
                split.val.len(),
                split.test.len()
            );
        }
        Cmd::TrainTeacher { config, data, out } => {
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab =
                Vocabulary::build(&split.train, cfg.model.min_count).map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let outcome = train_teacher(&cfg, &split, &vocab, &res)?;
            vocab.save(&vocab_path_for(&out)).map_err(CliError::data)?;
            save_teacher_checkpoint(&outcome.params, &cfg, &vocab, &out)
                .map_err(CliError::data)?;
            write_file(
                &out.with_extension("history.csv"),
                &history_csv(&outcome.history),
            )?;
            println!(
                "teacher saved to {} (best epoch {}, val macF1 {:.4})",
                out.display(),
                outcome.best_epoch,
                outcome.best_val_mac_f1
            );
        }
        Cmd::TrainStudent {
            config,
            data,
            teacher,
            alpha,
            out,
        } => {
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab = Vocabulary::load(&vocab_path_for(&teacher)).map_err(CliError::data)?;
            let ckpt = load_verified_checkpoint(&teacher, CheckpointKind::Teacher, &cfg, &vocab)
                .map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let outcome = train_student(
                &cfg,
                &split,
                &vocab,
                &res,
                &ckpt.params,
                alpha,
                StudentObjective::Adaptive(KnowledgeSet::Full),
            )?;
            vocab.save(&vocab_path_for(&out)).map_err(CliError::data)?;
            save_student_checkpoint(&outcome.params, &cfg, &vocab, &teacher, &out)
                .map_err(CliError::data)?;
            write_file(
                &out.with_extension("history.csv"),
                &history_csv(&outcome.history),
            )?;
            println!(
                "student saved to {} (best epoch {}, val macF1 {:.4})",
                out.display(),
                outcome.best_epoch,
                outcome.best_val_mac_f1
            );
        }
        Cmd::Eval {
            config,
            model,
            data,
            comments_prop,
            vocab,
        } => {
            if !(0.0..=1.0).contains(&comments_prop) {
                return Err(CliError::usage(format!(
                    "--comments-prop must be in [0, 1], got {comments_prop}"
                )));
            }
            let cfg = load_config(&config)?;
            let vocab_path = vocab.unwrap_or_else(|| vocab_path_for(&model));
            let vocab = Vocabulary::load(&vocab_path).map_err(CliError::data)?;
            let records = load_corpus(&data, &cfg.corpus).map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let ckpt = casfend::nncore::Checkpoint::load(&model).map_err(CliError::data)?;
            let verified = load_verified_checkpoint(&model, ckpt.kind, &cfg, &vocab)
                .map_err(CliError::data)?;
            let report = match verified.kind {
                CheckpointKind::Teacher => evaluate_teacher(
                    &cfg,
                    &verified.params,
                    &vocab,
                    &res,
                    &records,
                    comments_prop,
                )?,
                CheckpointKind::Student => {
                    evaluate_student(&cfg, &verified.params, &vocab, &res, &records)?
                }
            };
            println!("{}", report.to_json());
            eprintln!("{}", report.to_table());
        }
        Cmd::SweepComments {
            config,
            data,
            teacher,
            student,
            out,
        } => {
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab = Vocabulary::load(&vocab_path_for(&teacher)).map_err(CliError::data)?;
            let t = load_verified_checkpoint(&teacher, CheckpointKind::Teacher, &cfg, &vocab)
                .map_err(CliError::data)?;
            let s = load_verified_checkpoint(&student, CheckpointKind::Student, &cfg, &vocab)
                .map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let sweep = comment_proportion_sweep(
                &cfg,
                &t.params,
                &s.params,
                &vocab,
                &res,
                &split.test,
                &PROPORTION_GRID,
            )?;
            write_file(&out, &sweep.to_csv())?;
            println!("{}", sweep.to_table());
        }
        Cmd::SweepAlpha { config, data, out } => {
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab =
                Vocabulary::build(&split.train, cfg.model.min_count).map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let rows = alpha_sweep(&cfg, &split, &vocab, &res, &ALPHA_GRID)?;
            let csv = scalar_sweep_csv("alpha", &rows);
            write_file(&out, &csv)?;
            print!("{csv}");
        }
        Cmd::SweepLr { config, data, out } => {
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab =
                Vocabulary::build(&split.train, cfg.model.min_count).map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let rows = lr_sweep(&cfg, &split, &vocab, &res, &LR_GRID)?;
            let csv = lr_sweep_csv(&rows);
            write_file(&out, &csv)?;
            print!("{csv}");
        }
        Cmd::Ablate {
            config,
            data,
            seeds,
            out,
        } => {
            let seeds: Vec<u64> = seeds
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| {
                    CliError::usage(format!("bad --seeds '{seeds}', expected comma-separated integers"))
                })?;
            if seeds.is_empty() {
                return Err(CliError::usage("--seeds must name at least one seed"));
            }
            let cfg = load_config(&config)?;
            let split = load_split(&cfg, &data.data_dir)?;
            let vocab =
                Vocabulary::build(&split.train, cfg.model.min_count).map_err(CliError::data)?;
            let res = EmotionResources::builtin();
            let rows = ablation_sweep(&cfg, &split, &vocab, &res, &seeds)?;
            let csv = ablation_csv(&rows);
            write_file(&out, &csv)?;
            print!("{csv}");
        }
        Cmd::DefaultConfig => {
            print!("{}", Config::default_toml());
        }
        Cmd::GradCheck { config, seed } => {
            let _ = load_config(&config)?; // validated for reproducibility records
            let (teacher, student) = grad_check_suite(seed)?;
            println!(
                "teacher loss: max rel err {:.3e} over {} parameters",
                teacher.max_rel_err(),
                teacher.entries.len()
            );
            println!(
                "student loss: max rel err {:.3e} over {} parameters",
                student.max_rel_err(),
                student.entries.len()
            );
            if !teacher.passed() || !student.passed() {
                return Err(CliError::numeric("gradient check failed at tolerance 1e-4"));
            }
            println!("gradient check passed (tolerance 1e-4)");
        }
    }
    Ok(())
}
