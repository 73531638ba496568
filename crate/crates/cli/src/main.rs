mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Process outcome; when several apply the highest wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok = 0,
    Errors = 1,
    Loss = 2,
    Fatal = 3,
    Usage = 4,
}

#[derive(Debug, Parser)]
#[command(
    name = "termweave",
    version,
    about = "Validate and convert TBX entries between mainstream TBX and the TEI blend"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable report.
    Text,
    /// One tab-separated record per diagnostic.
    Lines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Tei,
    Tbx,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate files or directories of *.xml files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Registry overlay file applied to the default registry.
        #[arg(long, env = "TERMWEAVE_REGISTRY")]
        registry: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Convert between dialects.
    Convert {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum)]
        to: Target,
        /// Restore IDREF targets, xref and hi/@target when converting to TBX.
        #[arg(long)]
        strict_legacy: bool,
        /// Wrap source admin content in a TEI bibl when converting to TEI.
        #[arg(long)]
        wrap_bibl: bool,
        /// Exit 2 and write nothing for a file that would lose information.
        #[arg(long)]
        fail_on_loss: bool,
        /// Output directory; standard output is used for a single input file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the compact grammar generated from the registry.
    Schema {
        #[arg(long, env = "TERMWEAVE_REGISTRY")]
        registry: Option<PathBuf>,
    },
    /// Print the element reference generated from the registry.
    Docs {
        #[arg(long, env = "TERMWEAVE_REGISTRY")]
        registry: Option<PathBuf>,
    },
    /// Convert to the other dialect and back, and compare.
    Roundtrip {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    let exit = match cli.command {
        Command::Validate {
            paths,
            registry,
            format,
        } => commands::validate(&paths, registry.as_deref(), format),
        Command::Convert {
            paths,
            to,
            strict_legacy,
            wrap_bibl,
            fail_on_loss,
            out,
        } => {
            let opts = termweave::ConvertOptions {
                wrap_sources_as_bibl: wrap_bibl,
                strict_legacy,
                fail_on_loss,
            };
            commands::convert(&paths, to, opts, out.as_deref())
        }
        Command::Schema { registry } => commands::schema(registry.as_deref(), false),
        Command::Docs { registry } => commands::schema(registry.as_deref(), true),
        Command::Roundtrip { paths } => commands::roundtrip(&paths),
    };
    ExitCode::from(exit as u8)
}
