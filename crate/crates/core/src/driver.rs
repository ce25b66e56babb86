//! Command-line driver. [`run`] does all the work and returns what should
//! be printed, so the binary is a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::elaborate::{elaborate_unit, CoreTerm};
use crate::eval::{evaluate, EvalError, DEFAULT_FUEL};
use crate::fomega::fomega_typecheck;
use crate::kinds::{ctx_ok, kind_of};
use crate::resolution::{solve_with, Goal, ResolutionOutcome, SolveOptions, Witness, DEFAULT_LIMIT};
use crate::surface::diagnostic::{Code, Diagnostic};
use crate::surface::parser::{parse_context, parse_type, parse_unit, SourceUnit};
use crate::surface::pretty::{pretty_kind, pretty_type};
use crate::syntax::{Context, Kind};
use crate::typing::{type_of_with, TypedTerm};

#[derive(Parser, Debug, Clone)]
#[command(name = "fcci", version, about = "Check, elaborate and run programs with implicit abstractions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Largest witness measure resolution will consider.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: u64,
    /// Evaluation step budget.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Print diagnostics as one JSON object per line.
    #[arg(long, global = true)]
    pub json: bool,
    /// Dump the derivation chosen at every ascription.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Print every minimal witness instead of only a unique one.
    #[arg(long, global = true)]
    pub all_minimal: bool,
    /// Print the elaborated core term before the value.
    #[arg(long, global = true)]
    pub emit_core: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Typecheck a program and print its type.
    Check { file: PathBuf },
    /// Typecheck and print the elaborated core program.
    Elaborate { file: PathBuf },
    /// Typecheck, elaborate and evaluate a program.
    Run { file: PathBuf },
    /// Solve a single resolution goal.
    Resolve {
        /// File of binding declarations, one per line.
        #[arg(long)]
        context: Option<PathBuf>,
        /// Type to adapt; without it the goal is pure entailment.
        #[arg(long)]
        from: Option<String>,
        /// Type to match.
        #[arg(long)]
        to: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Output { stdout: text, stderr: String::new(), status: 0 }
                }
                _ => Output { stdout: String::new(), stderr: text, status: Code::E501.exit_status() },
            }
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Output {
    let mut session = Session { cfg, out: Output::default() };
    let _ = match &cfg.command {
        Command::Check { file } => session.check(file),
        Command::Elaborate { file } => session.elaborate(file),
        Command::Run { file } => session.run(file),
        Command::Resolve { context, from, to } => session.resolve(context.as_deref(), from.as_deref(), to),
    };
    session.out
}

/// Marker: a diagnostic has been reported.
struct Reported;

struct Session<'c> {
    cfg: &'c RunConfig,
    out: Output,
}

impl Session<'_> {
    fn options(&self) -> SolveOptions {
        SolveOptions { limit: self.cfg.limit as usize, ..SolveOptions::default() }
    }

    fn report(&mut self, mut diagnostic: Diagnostic, file: &str, unit: Option<&SourceUnit>) -> Reported {
        if diagnostic.span.is_none() {
            if let (Some(node), Some(unit)) = (diagnostic.node, unit) {
                diagnostic.span = unit.span_of(node);
            }
        }
        if self.cfg.json {
            self.out.stderr.push_str(&diagnostic.to_json(file));
            self.out.stderr.push('\n');
        } else {
            self.out.stderr.push_str(&diagnostic.render(file));
        }
        self.out.status = self.out.status.max(diagnostic.code.exit_status());
        Reported
    }

    fn read(&mut self, path: &Path) -> Result<String, Reported> {
        fs::read_to_string(path).map_err(|e| {
            let d = Diagnostic::error(Code::E501, format!("cannot read `{}`: {}", path.display(), e));
            self.report(d, &path.display().to_string(), None)
        })
    }

    fn typed(&mut self, path: &Path) -> Result<(SourceUnit, TypedTerm), Reported> {
        let text = self.read(path)?;
        let file = path.display().to_string();
        let unit = parse_unit(&text, &file).map_err(|d| self.report(d, &file, None))?;
        let typed = type_of_with(&Context::new(), &unit.body, &self.options())
            .map_err(|d| self.report(d, &file, Some(&unit)))?;
        Ok((unit, typed))
    }

    fn trace(&mut self, typed: &TypedTerm, unit: &SourceUnit) {
        if !self.cfg.trace {
            return;
        }
        let spans = ascription_spans(unit);
        for (id, witness) in &typed.resolutions {
            let at = spans.get(*id).map(|s| format!(" at {}:{}", s.0, s.1)).unwrap_or_default();
            let _ = writeln!(self.out.stdout, "-- ascription {}{}, measure {}", id, at, witness.measure);
            for line in witness.derivation.trace().lines() {
                let _ = writeln!(self.out.stdout, "--   {}", line);
            }
        }
    }

    fn core(&mut self, path: &Path) -> Result<(SourceUnit, TypedTerm, CoreTerm), Reported> {
        let (unit, typed) = self.typed(path)?;
        let core = elaborate_unit(&typed);
        let file = path.display().to_string();
        match fomega_typecheck(&Context::new(), core.term()) {
            Ok(ty) if ty == typed.ty.erase() => Ok((unit, typed, core)),
            Ok(ty) => {
                let d = Diagnostic::error(
                    Code::E401,
                    format!(
                        "elaborated program has type `{}`, expected `{}`",
                        pretty_type(&ty),
                        pretty_type(&typed.ty.erase())
                    ),
                );
                Err(self.report(d, &file, None))
            }
            Err(d) => Err(self.report(d, &file, None)),
        }
    }

    fn check(&mut self, path: &Path) -> Result<(), Reported> {
        let (unit, typed) = self.typed(path)?;
        self.trace(&typed, &unit);
        let _ = writeln!(self.out.stdout, "{}", pretty_type(&typed.ty));
        Ok(())
    }

    fn elaborate(&mut self, path: &Path) -> Result<(), Reported> {
        let (unit, typed, core) = self.core(path)?;
        self.trace(&typed, &unit);
        let _ = writeln!(self.out.stdout, "{}", core);
        Ok(())
    }

    fn run(&mut self, path: &Path) -> Result<(), Reported> {
        let (unit, typed, core) = self.core(path)?;
        self.trace(&typed, &unit);
        if self.cfg.emit_core {
            let _ = writeln!(self.out.stdout, "{}", core);
        }
        let file = path.display().to_string();
        match evaluate(&core, self.cfg.fuel) {
            Ok(value) => {
                let _ = writeln!(self.out.stdout, "{}", value);
                Ok(())
            }
            Err(e @ EvalError::OutOfFuel(_)) => Err(self.report(Diagnostic::error(Code::E402, e.to_string()), &file, None)),
            Err(e @ EvalError::Stuck(_)) => Err(self.report(Diagnostic::error(Code::E501, e.to_string()), &file, None)),
        }
    }

    fn resolve(&mut self, context: Option<&Path>, from: Option<&str>, to: &str) -> Result<(), Reported> {
        let (ctx, ctx_file) = match context {
            Some(path) => {
                let text = self.read(path)?;
                let file = path.display().to_string();
                let ctx = parse_context(&text).map_err(|d| self.report(d, &file, None))?;
                ctx_ok(&ctx).map_err(|d| self.report(d, &file, None))?;
                (ctx, file)
            }
            None => (Context::new(), "<context>".to_string()),
        };
        let _ = ctx_file;
        let target = self.goal_type(&ctx, to, "<to>")?;
        let goal = match from {
            Some(text) => Goal::matching(ctx.clone(), self.goal_type(&ctx, text, "<from>")?, target),
            None => Goal::entailment(ctx.clone(), target),
        };
        let outcome = solve_with(&goal, &self.options());
        let shown = |ws: &[Witness]| ws.iter().map(Witness::pretty).collect::<Vec<_>>();
        let describe = match &goal.source {
            Some(source) => format!("`{}` to `{}`", pretty_type(source), pretty_type(&goal.target)),
            None => format!("`{}`", pretty_type(&goal.target)),
        };
        match outcome {
            ResolutionOutcome::Unique(w) => {
                self.print_witnesses(std::slice::from_ref(&w));
                Ok(())
            }
            ResolutionOutcome::Ambiguous(ws) => {
                if self.cfg.all_minimal {
                    self.print_witnesses(&ws);
                }
                let d = Diagnostic::error(
                    Code::E302,
                    format!("ambiguous resolution of {}: {} minimal witnesses of measure {}", describe, ws.len(), ws[0].measure),
                )
                .with_witnesses(shown(&ws));
                Err(self.report(d, "<goal>", None))
            }
            ResolutionOutcome::NotDerivable => {
                let d = Diagnostic::error(Code::E301, format!("no derivation resolves {}", describe));
                Err(self.report(d, "<goal>", None))
            }
            ResolutionOutcome::Exhausted(limit) => {
                let d = Diagnostic::error(Code::E303, format!("no derivation resolves {} within measure {}", describe, limit))
                    .with_note("a larger `--limit` may find one");
                Err(self.report(d, "<goal>", None))
            }
            ResolutionOutcome::Incomplete(reason) => {
                let d = Diagnostic::error(Code::E304, format!("resolution of {} left an undecided constraint", describe))
                    .with_note(reason);
                Err(self.report(d, "<goal>", None))
            }
        }
    }

    fn print_witnesses(&mut self, witnesses: &[Witness]) {
        for w in witnesses {
            let _ = writeln!(self.out.stdout, "{}", w.pretty());
            if self.cfg.trace {
                for line in w.derivation.trace().lines() {
                    let _ = writeln!(self.out.stdout, "--   {}", line);
                }
            }
        }
    }

    fn goal_type(&mut self, ctx: &Context, text: &str, file: &str) -> Result<crate::syntax::Type, Reported> {
        let ty = parse_type(text, ctx).map_err(|d| self.report(d, file, None))?;
        match kind_of(ctx, &ty) {
            Ok(Kind::Star) => Ok(ty),
            Ok(kind) => {
                let d = Diagnostic::error(
                    Code::E101,
                    format!("`{}` has kind `{}`, expected `*`", pretty_type(&ty), pretty_kind(&kind)),
                );
                Err(self.report(d, file, None))
            }
            Err(d) => Err(self.report(d, file, None)),
        }
    }
}

/// Line and column of every ascription, in pre-order.
fn ascription_spans(unit: &SourceUnit) -> Vec<(usize, usize)> {
    fn walk(term: &crate::syntax::Term, node: &mut usize, unit: &SourceUnit, out: &mut Vec<(usize, usize)>) {
        use crate::syntax::Term;
        let here = *node;
        *node += 1;
        if let Term::Asc(..) = term {
            let span = unit.span_of(here).unwrap_or_default();
            out.push((span.line, span.col));
        }
        match term {
            Term::Var(..) | Term::IntLit(_) => {}
            Term::Abs(_, _, _, b) | Term::TAbs(_, _, _, b) | Term::TypeApp(_, b, _) | Term::Asc(b, _) => {
                walk(b, node, unit, out)
            }
            Term::App(_, f, a) => {
                walk(f, node, unit, out);
                walk(a, node, unit, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(&unit.body, &mut 0, unit, &mut out);
    out
}
