//! The `rfid28560` command line.
//!
//! ```text
//! rfid28560 encode    --model fixed|hybrid --in record.json [--profile NAME]
//! rfid28560 decode    --model fixed|hybrid --in FILE
//! rfid28560 convert   --from fixed|hybrid --to fixed|hybrid --in FILE
//!                     [--context ctx.json] [--profile NAME] [--loss loss.json]
//! rfid28560 inspect   --in FILE
//! rfid28560 lifecycle --in tag.dump --to STAGE [--from STAGE]
//!                     [--params params.json] [--loss loss.json]
//! ```
//!
//! Every command accepts `--registry DIR` (or `RFID28560_REGISTRY_DIR`).
//! Payloads go to stdout, diagnostics and loss reports to stderr. Exit
//! status: 0 ok, 2 validation or usage, 3 decode or integrity, 4 lifecycle,
//! 5 I/O.

mod document;
mod error;
mod inspect;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use document::{RecordDocument, SCHEMA_VERSION};
pub use error::{CliError, EXIT_DECODE, EXIT_IO, EXIT_LIFECYCLE, EXIT_OK, EXIT_VALIDATION};
pub use inspect::{inspect_fixed, inspect_tag};

use crate::config::CodecConfig;
use crate::data_model::{Afi, LossReport, TagProfile};
use crate::fixed::{decode_fixed_with, encode_fixed_with, FixedBlock};
use crate::hybrid::{
    convert_fixed_to_hybrid, convert_hybrid_to_fixed, decode_hybrid, detect_stage, encode_hybrid,
    transition, Gs1Context, LifecycleStage, TransitionParams,
};
use crate::tagmem::TagImage;

pub const REGISTRY_ENV: &str = "RFID28560_REGISTRY_DIR";
const DEFAULT_PROFILE: &str = "ICODE_ILT";

#[derive(Debug, Parser)]
#[command(name = "rfid28560", version, about = "Library RFID tag memory codecs")]
pub struct Cli {
    /// Directory with config.toml, publication_types.csv, managers.csv, alphabet.tsv.
    #[arg(long, global = true, env = REGISTRY_ENV, value_name = "DIR")]
    pub registry: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Fixed,
    Hybrid,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Record document to a fixed block (hex) or a tag dump.
    Encode {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        profile: Option<String>,
    },
    /// Fixed block (hex) or tag dump to a record document.
    Decode {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Re-encode between models, reporting lost fields on stderr.
    Convert {
        #[arg(long, value_enum)]
        from: Model,
        #[arg(long, value_enum)]
        to: Model,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Manager number and object class for the hybrid side (JSON).
        #[arg(long, value_name = "FILE")]
        context: Option<PathBuf>,
        #[arg(long)]
        profile: Option<String>,
        /// Also write the loss report as JSON.
        #[arg(long, value_name = "FILE")]
        loss: Option<PathBuf>,
    },
    /// Field-by-field listing of a fixed block or tag dump.
    Inspect {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Move a tag dump to another lifecycle stage.
    Lifecycle {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        to: LifecycleStage,
        /// Current stage; detected from the tag when omitted.
        #[arg(long)]
        from: Option<LifecycleStage>,
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        loss: Option<PathBuf>,
    },
}

/// Output of one command: the stdout payload and stderr diagnostics.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn load_config(dir: Option<&Path>) -> Result<CodecConfig, CliError> {
    match dir {
        Some(d) => Ok(CodecConfig::from_dir(d)?),
        None => Ok(CodecConfig::default()),
    }
}

fn profile<'a>(
    config: &'a CodecConfig,
    flag: Option<&str>,
    doc: Option<&str>,
) -> Result<&'a TagProfile, CliError> {
    Ok(config
        .profiles
        .get(flag.or(doc).unwrap_or(DEFAULT_PROFILE))?)
}

fn read_block(path: &Path) -> Result<FixedBlock, CliError> {
    Ok(FixedBlock::from_hex(&read(path)?)?)
}

fn read_tag(path: &Path, config: &CodecConfig) -> Result<TagImage, CliError> {
    Ok(TagImage::parse_dump(&read(path)?, &config.profiles)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::document(format!("{}: {e}", path.display())))
}

fn emit_loss(out: &mut Output, report: &LossReport, json: Option<&Path>) -> Result<(), CliError> {
    out.stderr
        .push_str(&format!("loss report ({}):\n", report.direction));
    if report.is_lossless() {
        out.stderr.push_str("(none)\n");
    } else {
        out.stderr.push_str(&report.to_text());
    }
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    Ok(())
}

/// AFI a tag currently presents: the serial AFI of a hybrid tag, else the
/// system-area value.
fn tag_afi(tag: &TagImage, config: &CodecConfig) -> Option<Afi> {
    decode_hybrid(tag, config)
        .ok()
        .map(|(r, _)| r.afi)
        .or_else(|| tag.afi_mirror())
}

fn afi_text(afi: Option<Afi>) -> String {
    afi.map_or_else(|| "unset".into(), |a| a.to_string())
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let config = load_config(cli.registry.as_deref())?;
    let mut out = Output::default();
    match &cli.command {
        Command::Encode {
            model,
            input,
            profile: flag,
        } => {
            let doc = RecordDocument::parse(&read(input)?).map_err(CliError::document)?;
            match model {
                Model::Fixed => {
                    let block = encode_fixed_with(&doc.record, &config.alphabet)?;
                    out.stdout = format!("{}\n", block.to_hex());
                }
                Model::Hybrid => {
                    let ctx = doc
                        .gs1_context
                        .as_ref()
                        .ok_or_else(|| CliError::document("hybrid encoding needs `gs1_context`"))?;
                    let p = profile(&config, flag.as_deref(), doc.profile.as_deref())?;
                    out.stdout = encode_hybrid(&doc.record, ctx, p, &config)?.to_dump();
                }
            }
        }
        Command::Decode { model, input } => {
            let doc = match model {
                Model::Fixed => {
                    let block = read_block(input)?;
                    RecordDocument {
                        schema: SCHEMA_VERSION,
                        record: decode_fixed_with(
                            block.as_bytes(),
                            config.default_afi,
                            &config.alphabet,
                        )?,
                        gs1_context: None,
                        profile: None,
                    }
                }
                Model::Hybrid => {
                    let tag = read_tag(input, &config)?;
                    let (record, ctx) = decode_hybrid(&tag, &config)?;
                    RecordDocument {
                        schema: SCHEMA_VERSION,
                        record,
                        gs1_context: Some(ctx),
                        profile: Some(tag.profile().name.clone()),
                    }
                }
            };
            out.stdout = doc.to_json();
        }
        Command::Convert {
            from,
            to,
            input,
            context,
            profile: flag,
            loss,
        } => {
            let report = match (from, to) {
                (Model::Fixed, Model::Hybrid) => {
                    let path = context
                        .as_deref()
                        .ok_or_else(|| CliError::usage("fixed -> hybrid needs --context"))?;
                    let ctx: Gs1Context = read_json(path)?;
                    let block = read_block(input)?;
                    let p = profile(&config, flag.as_deref(), None)?;
                    let (tag, report) = convert_fixed_to_hybrid(&block, &ctx, p, &config)?;
                    out.stdout = tag.to_dump();
                    report
                }
                (Model::Hybrid, Model::Fixed) => {
                    let tag = read_tag(input, &config)?;
                    let (block, report) = convert_hybrid_to_fixed(&tag, &config)?;
                    out.stdout = format!("{}\n", block.to_hex());
                    report
                }
                _ => return Err(CliError::usage("--from and --to must differ")),
            };
            emit_loss(&mut out, &report, loss.as_deref())?;
        }
        Command::Inspect { input } => {
            let text = read(input)?;
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'));
            out.stdout = match first {
                Some(l) if l.starts_with("profile:") => {
                    let tag = TagImage::parse_dump(&text, &config.profiles)?;
                    inspect_tag(&tag, &config)
                }
                Some(_) => inspect_fixed(&FixedBlock::from_hex(&text)?, &config),
                None => {
                    return Err(CliError::new(
                        "empty_input",
                        EXIT_DECODE,
                        format!("{}: nothing to inspect", input.display()),
                    ))
                }
            };
        }
        Command::Lifecycle {
            input,
            to,
            from,
            params,
            loss,
        } => {
            let tag = read_tag(input, &config)?;
            let params: TransitionParams = match params {
                Some(p) => read_json(p)?,
                None => TransitionParams::default(),
            };
            let from = from.unwrap_or_else(|| detect_stage(&tag, &config));
            let (next, report) = transition(&tag, from, *to, &params, &config)?;
            out.stdout = next.to_dump();
            out.stderr.push_str(&format!(
                "stage: {from} -> {to}\nafi: {} -> {}\n",
                afi_text(tag_afi(&tag, &config)),
                afi_text(tag_afi(&next, &config)),
            ));
            emit_loss(&mut out, &report, loss.as_deref())?;
        }
    }
    Ok(out)
}

/// Process entry point for the `rfid28560` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().write_all(out.stderr.as_bytes());
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit)
        }
    }
}
