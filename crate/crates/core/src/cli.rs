//! The `hallforge` command line.
//!
//! Exit status: 0 when the computation completes and every check passes, 1
//! when a check fails, 2 on usage or bound errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{HallError, Result};
use crate::fincat::{CategorySpec, Quiver};
use crate::hall::{HallAlgebra, HallElement, HallModule};
use crate::par::Execution;
use crate::qlinalg::FiniteField;
use crate::waldhausen::{corr0_negative_control, corr0_pipeline, two_segal_condition};

pub const SCHEMA: &str = "hallforge/1";

#[derive(Debug, Parser)]
#[command(name = "hallforge", version, about = "Hall algebras and 2-Segal checks over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product of two delta functions.
    Product {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// All structure constants up to the bound.
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// The 2-Segal condition obtained by removing vertices `i` and `i + 2` of `ord{n}`.
    Segal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// Pullback checks on the associativity cube of `ord{n}`.
    Corr0 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Run the square with the center replaced by `S_2 x S_1` instead.
        #[arg(long)]
        negative_control: bool,
    },
    /// Action of the Hall algebra of `Vect` on functions on the slice over `F_q^V`.
    Module {
        #[command(flatten)]
        common: Common,
        #[arg(long = "V")]
        v: usize,
        #[arg(long)]
        act: String,
        #[arg(long)]
        on: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CategoryArg {
    Vect,
    A2,
    Quiver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "vect")]
    pub category: CategoryArg,
    /// Quiver description `{"vertices": n, "arrows": [[s, t], ...]}`.
    #[arg(long)]
    pub quiver: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Bound on total dimension.
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    fn spec(&self) -> Result<CategorySpec> {
        let field = FiniteField::with_order(self.q)?;
        match (self.category, &self.quiver) {
            (CategoryArg::Vect, None) => Ok(CategorySpec::vect(field)),
            (CategoryArg::A2, None) => CategorySpec::quiver(field, Quiver::a2()),
            (CategoryArg::Quiver, Some(path)) => CategorySpec::quiver(field, Quiver::from_path(path)?),
            (CategoryArg::Quiver, None) => Err(HallError::InvalidArgument("--category quiver needs --quiver".into())),
            (_, Some(_)) => Err(HallError::InvalidArgument("--quiver is only used with --category quiver".into())),
        }
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn bound(&self, spec: &CategorySpec, default: usize) -> Result<usize> {
        let b = self.max_dim.unwrap_or(default);
        spec.check_bound(b)?;
        Ok(b)
    }
}

/// Result of one invocation: exit status and what goes to stdout / stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct Term {
    class: String,
    coeff: String,
}

#[derive(Serialize)]
struct Expansion {
    category: String,
    q: usize,
    bound: usize,
    lhs: String,
    rhs: String,
    terms: Vec<Term>,
    text: String,
}

fn terms(e: &HallElement) -> Vec<Term> {
    e.labelled().into_iter().map(|(class, c)| Term { class, coeff: c.to_string() }).collect()
}

/// Total dimension read off a label such as `2`, `[1,1]#0` or `1,zero`.
fn label_degree(label: &str) -> Option<usize> {
    let core = label.split('#').next()?.trim().trim_start_matches('[').trim_end_matches(']');
    if let Some((d, r)) = core.split_once(',') {
        if r.trim().parse::<usize>().is_err() {
            return d.trim().parse().ok();
        }
    }
    core.split(',').map(|p| p.trim().parse::<usize>().ok()).sum()
}

fn render<T: Serialize>(command: &str, format: Format, body: T, text: String) -> Result<String> {
    match format {
        Format::Text => Ok(text),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body })
                .map_err(|e| HallError::Malformed(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn execute(cmd: &Command) -> Result<(String, bool)> {
    match cmd {
        Command::Product { common, lhs, rhs } => {
            let spec = common.spec()?;
            let want = label_degree(lhs).unwrap_or(0) + label_degree(rhs).unwrap_or(0);
            let bound = common.bound(&spec, want.max(1))?;
            let h = HallAlgebra::new(&spec, bound, common.exec())?;
            let p = h.product(&h.delta_of(lhs)?, &h.delta_of(rhs)?)?;
            let text = p.to_string();
            let body = Expansion {
                category: spec.name(),
                q: spec.field.order(),
                bound,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                terms: terms(&p),
                text: text.clone(),
            };
            Ok((render("product", common.format, body, text + "\n")?, true))
        }
        Command::Table { common } => {
            let spec = common.spec()?;
            let bound = common.bound(&spec, 3)?;
            let t = HallAlgebra::new(&spec, bound, common.exec())?.table()?;
            let mut text = String::new();
            for e in &t.entries {
                let _ = writeln!(text, "{} * {} -> {} {}", e.u, e.w, e.coeff, e.v);
            }
            Ok((render("table", common.format, t, text)?, true))
        }
        Command::Segal { common, n, i } => {
            let spec = common.spec()?;
            let bound = common.bound(&spec, 3)?;
            let r = two_segal_condition(&spec, *n, *i, bound, common.exec())?;
            let mut text = format!("{} on {} (q = {}, total dimension <= {})\n", r.condition, r.category, r.q, r.bound);
            for g in &r.graded_results {
                let verdict = if g.pass { "pass" } else { "FAIL" };
                let _ = writeln!(
                    text,
                    "  {:<12} pi0 {} / {}  aut {}  {verdict}",
                    g.grade, g.pi0_lhs, g.pi0_rhs, g.aut_match
                );
            }
            let _ = writeln!(text, "{}", if r.pass { "pass" } else { "FAIL" });
            let pass = r.pass;
            Ok((render("segal", common.format, r, text)?, pass))
        }
        Command::Corr0 { common, n, negative_control } => {
            let spec = common.spec()?;
            let bound = common.bound(&spec, 3)?;
            let r = if *negative_control {
                if *n != 3 {
                    return Err(HallError::InvalidArgument("the negative control is the n = 3 square".into()));
                }
                corr0_negative_control(&spec, bound, common.exec())?
            } else {
                corr0_pipeline(&spec, *n, bound, common.exec())?
            };
            let mut text = format!("n = {} on {} (q = {}, total dimension <= {})\n", r.n, r.category, r.q, r.bound);
            for c in &r.conditions {
                let _ = writeln!(
                    text,
                    "  corner {} pullback {}  conditions {} pass {}  match {}",
                    c.corner,
                    c.corner_pullback,
                    c.conditions.join(","),
                    c.conditions_pass,
                    c.matches
                );
            }
            let _ = writeln!(text, "commutative: {}", r.commutative);
            let pass = r.commutative && r.conditions.iter().all(|c| c.matches);
            Ok((render("corr0", common.format, r, text)?, pass))
        }
        Command::Module { common, v, act, on } => {
            let spec = common.spec()?;
            let want = label_degree(act).unwrap_or(0) + label_degree(on).unwrap_or(0);
            let bound = common.bound(&spec, want.max(1))?;
            let h = HallAlgebra::new(&spec, bound, common.exec())?;
            let m = HallModule::new(&h, *v, common.exec())?;
            m.spec().check_bound(bound)?;
            let r = m.act(&h.delta_of(act)?, &m.delta(m.class(on)?)?)?;
            let text = r.to_string();
            let body = Expansion {
                category: m.spec().name(),
                q: spec.field.order(),
                bound,
                lhs: act.clone(),
                rhs: on.clone(),
                terms: terms(&r),
                text: text.clone(),
            };
            Ok((render("module", common.format, body, text + "\n")?, true))
        }
    }
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    let common = match cmd {
        Command::Product { common, .. }
        | Command::Table { common }
        | Command::Segal { common, .. }
        | Command::Corr0 { common, .. }
        | Command::Module { common, .. } => common,
    };
    common.output.as_ref()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli.command) {
        Ok((out, pass)) => {
            let code = if pass { 0 } else { 1 };
            match output_path(&cli.command) {
                Some(path) => match std::fs::write(path, &out) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => {
                        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) }
                    }
                },
                None => Outcome { code, stdout: out, stderr: String::new() },
            }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
