//! Command-line front end over JSON scenario files.
//!
//! Exit codes: 0 success, 1 a property failed and a witness is printed,
//! 2 usage, parse or validation error.

mod commands;
pub mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::rational::Rational;

pub use scenario::{parse_scenario, Scenario, ScenarioDoc, ScenarioError};

/// Environment variable capping the number of states a scenario may declare.
pub const MAX_STATES_VAR: &str = "BELIEFKIT_MAX_STATES";
pub const DEFAULT_MAX_STATES: usize = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "beliefkit", version, about = "Exact belief updating after surprising events")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file.
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Which updating rule of the scenario to use.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RuleChoice {
    /// The ordered-surprises block.
    #[arg(long)]
    os: bool,
    /// The hypothesis-testing block.
    #[arg(long)]
    ht: bool,
    /// Bayesian updating of the named belief.
    #[arg(long, value_name = "BELIEF")]
    bayes: Option<String>,
    /// The conservative block.
    #[arg(long)]
    conservative: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a rule is a conditional probability system.
    ValidateCps {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rule: RuleChoice,
    },
    /// Recover the ordered-surprises representation of a rule; JSON output is a scenario.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rule: RuleChoice,
    },
    /// Conditional belief given an event.
    Update {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rule: RuleChoice,
        #[arg(long, value_name = "LABELS")]
        event: String,
    },
    /// Conditional belief under ordered surprises with a threshold.
    EpsUpdate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: Rational,
        #[arg(long, value_name = "LABELS")]
        event: String,
    },
    /// Hypothesis-testing representation of the ordered-surprises block.
    OsToHt {
        #[command(flatten)]
        common: Common,
    },
    /// Hypothesis-testing representation of the ordered-surprises block with a threshold.
    EpsOsToHt {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: Rational,
    },
    /// Trace the hypothesis-testing selection on an event.
    HtSelect {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "LABELS")]
        event: String,
    },
    /// Compare two acts lexicographically, optionally after conditioning.
    LpsCompare {
        #[command(flatten)]
        common: Common,
        /// Two act names.
        #[arg(long = "act", num_args = 1, required = true)]
        acts: Vec<String>,
        #[arg(long, value_name = "LABELS")]
        event: Option<String>,
        /// Utility name; defaults to the only one defined.
        #[arg(long)]
        utility: Option<String>,
    },
    /// Check consequentialism, conditional consistency and risk independence.
    CheckAxioms {
        #[command(flatten)]
        common: Common,
        /// Check the conservative block instead of the preference family.
        #[arg(long)]
        conservative: bool,
        #[arg(long)]
        utility: Option<String>,
    },
    /// Completeness and concentration of the conservative block.
    Conservative {
        #[command(flatten)]
        common: Common,
    },
    /// Group the events by the prior that updates them.
    Partition {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0")]
        eps: Rational,
    },
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(kind: &str, message: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error[{kind}]: {message}\n"),
            code: EXIT_INPUT,
        }
    }
}

/// Variant name of a library error, as shown in reports.
pub fn error_name(e: &Error) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_ascii_alphanumeric()).collect()
}

/// Run the command line `args` (without the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("beliefkit")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INPUT,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            };
        }
    };
    let common = cli.command.common();
    let text = match std::fs::read_to_string(&common.scenario) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error("Io", format!("{}: {e}", common.scenario.display())),
    };
    let scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(&e.kind(), e),
    };
    let limit = match max_states() {
        Ok(l) => l,
        Err(msg) => return Outcome::input_error("Usage", msg),
    };
    if scenario.space.len() > limit {
        let e = Error::TooManyStates {
            states: scenario.space.len(),
            limit,
        };
        return Outcome::input_error(&error_name(&e), e);
    }
    let format = common.format;
    match commands::dispatch(&scenario, cli.command) {
        Ok(report) => Outcome {
            stdout: report.render(format),
            stderr: String::new(),
            code: report.code,
        },
        Err(f) => Outcome::input_error(&f.kind, f.message),
    }
}

fn max_states() -> Result<usize, String> {
    match std::env::var(MAX_STATES_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("{MAX_STATES_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_STATES),
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::ValidateCps { common, .. }
            | Command::Decompose { common, .. }
            | Command::Update { common, .. }
            | Command::EpsUpdate { common, .. }
            | Command::OsToHt { common }
            | Command::EpsOsToHt { common, .. }
            | Command::HtSelect { common, .. }
            | Command::LpsCompare { common, .. }
            | Command::CheckAxioms { common, .. }
            | Command::Conservative { common }
            | Command::Partition { common, .. } => common,
        }
    }
}
