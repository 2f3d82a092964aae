//! The `wkan` command line: load a JSON workspace, run one check, and print a
//! text or JSON report.

pub mod commands;
pub mod error;
pub mod report;
pub mod workspace;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use wkan_core::reedy::{CheckSide, Variance};
use wkan_core::{Budget, DEFAULT_BUDGET};

pub use error::{CliError, Located};
pub use report::{Report, Verdict};
pub use workspace::Workspace;

#[derive(Debug, Parser)]
#[command(
    name = "wkan",
    version,
    about = "Finite checks for W-types, M-types and Kan fibrations"
)]
pub struct Cli {
    /// Workspace file.
    #[arg(short, long, global = true)]
    pub workspace: Option<PathBuf>,
    /// Search budget in nodes.
    #[arg(long, global = true, env = "WKAN_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Fibration,
    Cofibration,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceArg {
    Covariant,
    Contravariant,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Stage sizes of the W-type of a signature.
    WStages {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        max_stage: usize,
        /// List the trees of the last stage.
        #[arg(long)]
        trees: bool,
    },
    /// Fold every tree up to a stage into an algebra.
    WFold {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        max_stage: usize,
    },
    /// Stages of the presheaf W-type of a map, with the stage equation checked.
    PshW {
        #[arg(long)]
        map: String,
        #[arg(long)]
        max_stage: usize,
        #[arg(long)]
        trees: bool,
    },
    /// Stages of a dependent W-type.
    DepW {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        max_stage: usize,
    },
    /// Truncate the unfolding of a coalgebra state.
    MTrunc {
        #[arg(long)]
        coalgebra: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        depth: usize,
    },
    /// Decide bisimilarity of two coalgebra states.
    MBisim {
        #[arg(long)]
        coalgebra: String,
        #[arg(long)]
        state: String,
        /// Second coalgebra; defaults to the first.
        #[arg(long)]
        other: Option<String>,
        #[arg(long)]
        other_state: String,
    },
    /// Minimal coalgebra up to bisimilarity.
    MMinimize {
        #[arg(long)]
        coalgebra: String,
    },
    /// Quotient by a pseudo-equivalence relation given as two parallel maps.
    Quotient {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Extensional quotient of the W-type stages of a signature.
    Aczel {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        max_stage: usize,
    },
    /// Check horn fillers for a map of truncated simplicial sets.
    KanCheck {
        #[arg(long)]
        map: String,
        #[arg(long)]
        dim: usize,
    },
    /// Solve a single lifting problem.
    Lift {
        #[arg(long)]
        i: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        top: String,
        #[arg(long)]
        bottom: String,
    },
    /// Dependent product of a family along a map.
    Pi {
        #[arg(long)]
        map: String,
        #[arg(long)]
        family: String,
        /// A map into the codomain on which to test the adjunction.
        #[arg(long)]
        test: Option<String>,
    },
    /// Validate a Reedy structure.
    ReedyValidate {
        #[arg(long)]
        reedy: String,
    },
    /// Check a map of diagrams for the Reedy fibration or cofibration condition.
    ReedyCheck {
        #[arg(long)]
        reedy: String,
        #[arg(long)]
        map: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = VarianceArg::Contravariant)]
        variance: VarianceArg,
    },
    /// Certify absolute pushout squares of minus maps.
    AbsPushout {
        #[arg(long)]
        reedy: String,
        /// Six morphism names `p,q,f,g,a,b`; defaults to every square found.
        #[arg(long)]
        square: Option<String>,
    },
    /// Check that an equivariant mono is a free cofibration.
    GsetCofib {
        #[arg(long)]
        gmap: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WStages { .. } => "w-stages",
            Command::WFold { .. } => "w-fold",
            Command::PshW { .. } => "psh-w",
            Command::DepW { .. } => "dep-w",
            Command::MTrunc { .. } => "m-trunc",
            Command::MBisim { .. } => "m-bisim",
            Command::MMinimize { .. } => "m-minimize",
            Command::Quotient { .. } => "quotient",
            Command::Aczel { .. } => "aczel",
            Command::KanCheck { .. } => "kan-check",
            Command::Lift { .. } => "lift",
            Command::Pi { .. } => "pi",
            Command::ReedyValidate { .. } => "reedy-validate",
            Command::ReedyCheck { .. } => "reedy-check",
            Command::AbsPushout { .. } => "abs-pushout",
            Command::GsetCofib { .. } => "gset-cofib",
        }
    }
}

fn dispatch(ws: &Workspace, cmd: &Command, budget: &Budget) -> Result<Report, CliError> {
    use commands as c;
    match cmd {
        Command::WStages {
            sig,
            max_stage,
            trees,
        } => c::w_stages(ws, sig, *max_stage, *trees, budget),
        Command::WFold { algebra, max_stage } => c::w_fold(ws, algebra, *max_stage, budget),
        Command::PshW {
            map,
            max_stage,
            trees,
        } => c::psh_w(ws, map, *max_stage, *trees, budget),
        Command::DepW { sig, max_stage } => c::dep_w(ws, sig, *max_stage, budget),
        Command::MTrunc {
            coalgebra,
            state,
            depth,
        } => c::m_trunc(ws, coalgebra, state, *depth),
        Command::MBisim {
            coalgebra,
            state,
            other,
            other_state,
        } => c::m_bisim(ws, coalgebra, state, other.as_deref(), other_state),
        Command::MMinimize { coalgebra } => c::m_minimize(ws, coalgebra),
        Command::Quotient { left, right } => c::quotient(ws, left, right, budget),
        Command::Aczel { sig, max_stage } => c::aczel(ws, sig, *max_stage, budget),
        Command::KanCheck { map, dim } => c::kan_check(ws, map, *dim, budget),
        Command::Lift { i, p, top, bottom } => c::lift(ws, i, p, top, bottom, budget),
        Command::Pi { map, family, test } => c::pi(ws, map, family, test.as_deref(), budget),
        Command::ReedyValidate { reedy } => c::reedy_validate(ws, reedy),
        Command::ReedyCheck {
            reedy,
            map,
            side,
            variance,
        } => {
            let side = match side {
                SideArg::Fibration => CheckSide::Fibration,
                SideArg::Cofibration => CheckSide::Cofibration,
            };
            let variance = match variance {
                VarianceArg::Covariant => Variance::Covariant,
                VarianceArg::Contravariant => Variance::Contravariant,
            };
            c::reedy_check(ws, reedy, map, side, variance, budget)
        }
        Command::AbsPushout { reedy, square } => c::abs_pushout(ws, reedy, square.as_deref()),
        Command::GsetCofib { gmap } => c::gset_cofib(ws, gmap),
    }
}

/// Runs a parsed command line and returns the rendered output with the exit
/// status: 0 for a positive verdict, 1 for a negative one, 2 for errors.
pub fn run(cli: &Cli) -> (String, i32) {
    let name = cli.command.name();
    let outcome = (|| {
        let path = cli
            .workspace
            .as_ref()
            .ok_or(CliError::MissingArgument("workspace"))?;
        let ws = Workspace::load(path)?;
        let budget = Budget::new(cli.budget);
        let start = Instant::now();
        let report = dispatch(&ws, &cli.command, &budget)?;
        let mut args = serde_json::to_value(&cli.command).expect("arguments serialize");
        if let Some(obj) = args.as_object_mut() {
            obj.remove("command");
        }
        Ok::<_, CliError>(report.finish(name, args, &budget, start.elapsed()))
    })();
    match (outcome, cli.format) {
        (Ok(r), Format::Json) => (format!("{:#}\n", r.to_json()), r.exit_code()),
        (Ok(r), Format::Text) => (r.to_text(), r.exit_code()),
        (Err(e), Format::Json) => {
            let v = json!({"command": name, "verdict": "error", "error": e.to_string()});
            (format!("{v:#}\n"), e.exit_code())
        }
        (Err(e), Format::Text) => (format!("error: {e}\n"), e.exit_code()),
    }
}
