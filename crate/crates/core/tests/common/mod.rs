#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use fcci::resolution::{oracle_enumerate, solve, Goal, ResolutionOutcome};
use fcci::surface::parser::{parse_context, parse_type};
use fcci::surface::pretty::pretty_term;
use fcci::syntax::{BinderForm, Context, Hint, Kind, Term, Type, Var};
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Accept { ty: String, value: String },
    Reject { code: String },
}

#[derive(Clone, Debug)]
pub struct Program {
    pub name: String,
    pub path: PathBuf,
    pub text: String,
    pub expect: Expect,
}

/// Programs under `corpus/programs`, sorted by name. Each file starts with
/// `-- type:` and `-- value:` lines, or a single `-- error:` line.
pub fn programs() -> Vec<Program> {
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_dir().join("programs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "fcci"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).unwrap();
            let header = |key: &str| {
                text.lines()
                    .find_map(|l| l.strip_prefix(&format!("-- {}: ", key)))
                    .map(str::to_string)
            };
            let expect = match header("error") {
                Some(code) => Expect::Reject { code },
                None => Expect::Accept { ty: header("type").unwrap(), value: header("value").unwrap() },
            };
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            Program { name, path, text, expect }
        })
        .collect()
}

pub fn accepted() -> Vec<Program> {
    programs().into_iter().filter(|p| matches!(p.expect, Expect::Accept { .. })).collect()
}

pub struct GoalCase {
    pub name: String,
    pub goal: Goal,
    pub universe: Vec<Type>,
}

pub fn goals() -> Vec<GoalCase> {
    let text = fs::read_to_string(corpus_dir().join("goals.txt")).unwrap();
    let mut cases = Vec::new();
    for block in text.split("\n\n") {
        let field = |key: &str| {
            block.lines().find_map(|l| l.strip_prefix(&format!("{}:", key))).map(|v| v.trim().to_string())
        };
        let Some(name) = field("name") else { continue };
        let context = parse_context(&field("context").unwrap_or_default()).unwrap();
        let ty = |text: &str| parse_type(text, &context).unwrap_or_else(|d| panic!("{}: {}", name, d.message));
        let target = ty(&field("to").unwrap());
        let goal = match field("from") {
            Some(from) => Goal::matching(context.clone(), ty(&from), target),
            None => Goal::entailment(context.clone(), target),
        };
        let universe = field("universe").unwrap().split(';').map(|t| ty(t.trim())).collect();
        cases.push(GoalCase { name, goal, universe });
    }
    cases
}

/// Compares `solve` against the oracle on derivability, minimal measure and
/// the set of minimal witnesses. Returns a description of any difference.
pub fn agreement(case: &GoalCase, limit: usize) -> Result<(), String> {
    let outcome = solve(&case.goal, limit);
    let found = oracle_enumerate(&case.goal, limit, &case.universe);
    let show = |ts: &[Term]| ts.iter().map(pretty_term).collect::<Vec<_>>().join(", ");
    let solved: Vec<Term> = match &outcome {
        ResolutionOutcome::Unique(w) => vec![w.term.clone()],
        ResolutionOutcome::Ambiguous(ws) => ws.iter().map(|w| w.term.clone()).collect(),
        ResolutionOutcome::NotDerivable | ResolutionOutcome::Exhausted(_) => Vec::new(),
        ResolutionOutcome::Incomplete(why) => return Err(format!("{}: incomplete: {}", case.name, why)),
    };
    let minimal: Vec<Term> = match found.first() {
        Some(first) => found.iter().filter(|t| t.measure() == first.measure()).cloned().collect(),
        None => Vec::new(),
    };
    let same_set = solved.len() == minimal.len() && solved.iter().all(|t| minimal.contains(t));
    if same_set {
        Ok(())
    } else {
        Err(format!("{}: solve gave [{}], oracle gave [{}]", case.name, show(&solved), show(&minimal)))
    }
}

// ---------------------------------------------------------------------------
// Random generation

/// Type constructors available to generated types, as context entries.
pub fn generator_context() -> Context {
    parse_context("(S : * -> *), (L : * -> *), (P : * -> * -> *), (B : *)").unwrap()
}

const NAMES: [&str; 7] = ["a", "b", "c", "f", "x", "B", "S"];

pub struct Gen<'r, R: Rng> {
    pub rng: &'r mut R,
    ctx: Context,
    types: Vec<Kind>,
    terms: usize,
}

impl<'r, R: Rng> Gen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        Gen { rng, ctx: generator_context(), types: Vec::new(), terms: 0 }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    fn name(&mut self) -> &'static str {
        NAMES[self.rng.gen_range(0..NAMES.len())]
    }

    fn form(&mut self) -> BinderForm {
        if self.rng.gen_bool(0.5) {
            BinderForm::Explicit
        } else {
            BinderForm::Implicit
        }
    }

    pub fn kind(&mut self, depth: usize) -> Kind {
        if depth == 0 || self.rng.gen_bool(0.6) {
            Kind::Star
        } else {
            Kind::arrow(self.kind(depth - 1), self.kind(depth - 1))
        }
    }

    /// Variables of kind `kind`, bound ones first.
    fn variables(&self, kind: &Kind) -> Vec<Type> {
        let mut out: Vec<Type> = self
            .types
            .iter()
            .rev()
            .enumerate()
            .filter(|(_, k)| *k == kind)
            .map(|(i, _)| Type::Var(Var::Bound(i), Hint::new("v")))
            .collect();
        for level in 0..self.ctx.type_len() {
            let entry = self.ctx.type_entry(level).unwrap();
            if &entry.kind == kind {
                out.push(Type::free(level, &entry.name));
            }
        }
        out
    }

    fn under<T>(&mut self, kind: Kind, inner: impl FnOnce(&mut Self) -> T) -> T {
        self.types.push(kind);
        let out = inner(self);
        self.types.pop();
        out
    }

    /// A type of kind `kind` with at most `size` nodes.
    pub fn ty(&mut self, kind: &Kind, size: usize) -> Type {
        let vars = self.variables(kind);
        if size <= 1 || (size <= 3 && self.rng.gen_bool(0.5)) {
            match kind {
                Kind::Star if vars.is_empty() || self.rng.gen_bool(0.4) => return Type::Int,
                Kind::Star => return vars[self.rng.gen_range(0..vars.len())].clone(),
                Kind::Arrow(..) if !vars.is_empty() && self.rng.gen_bool(0.7) => {
                    return vars[self.rng.gen_range(0..vars.len())].clone()
                }
                Kind::Arrow(..) if size <= 1 => return self.constant(kind),
                Kind::Arrow(..) => {}
            }
        }
        let budget = size - 1;
        match kind {
            Kind::Arrow(domain, codomain) => {
                let name = self.name();
                let body = self.under((**domain).clone(), |g| g.ty(codomain, budget));
                Type::Lam(Hint::new(name), (**domain).clone(), Box::new(body))
            }
            Kind::Star => match self.rng.gen_range(0..4) {
                0 => {
                    let form = self.form();
                    let left = self.rng.gen_range(1..=budget.max(2) - 1);
                    Type::pi(form, self.ty(&Kind::Star, left), self.ty(&Kind::Star, budget - left.min(budget)))
                }
                1 => {
                    let form = self.form();
                    let name = self.name();
                    let k = self.kind(1);
                    let body = self.under(k.clone(), |g| g.ty(&Kind::Star, budget));
                    Type::All(form, Hint::new(name), k, Box::new(body))
                }
                _ => {
                    let arg_kind = self.kind(1);
                    let head_size = self.rng.gen_range(1..=budget.max(2) - 1);
                    let head = self.ty(&Kind::arrow(arg_kind.clone(), Kind::Star), head_size);
                    let arg = self.ty(&arg_kind, budget.saturating_sub(head_size).max(1));
                    Type::app(head, arg)
                }
            },
        }
    }

    /// A small closed type of the given kind.
    fn constant(&mut self, kind: &Kind) -> Type {
        match kind {
            Kind::Star => Type::Int,
            Kind::Arrow(domain, codomain) => {
                let body = self.under((**domain).clone(), |g| g.constant(codomain));
                Type::Lam(Hint::new("a"), (**domain).clone(), Box::new(body))
            }
        }
    }

    /// A well-scoped term of at most `size` nodes; not necessarily well typed.
    pub fn term(&mut self, size: usize) -> Term {
        if size <= 1 {
            return if self.terms > 0 && self.rng.gen_bool(0.7) {
                let i = self.rng.gen_range(0..self.terms);
                Term::Var(Var::Bound(i), Hint::new("v"))
            } else {
                Term::IntLit(self.rng.gen_range(0..1000))
            };
        }
        let budget = size - 1;
        match self.rng.gen_range(0..6) {
            0 => {
                let form = self.form();
                let name = self.name();
                let ty = self.ty(&Kind::Star, 4);
                self.terms += 1;
                let body = self.term(budget);
                self.terms -= 1;
                Term::Abs(form, Hint::new(name), ty, Box::new(body))
            }
            1 => {
                let form = self.form();
                let name = self.name();
                let k = self.kind(1);
                let body = self.under(k.clone(), |g| g.term(budget));
                Term::TAbs(form, Hint::new(name), k, Box::new(body))
            }
            2 | 3 => {
                let form = self.form();
                let left = self.rng.gen_range(1..=budget.max(2) - 1);
                let f = self.term(left);
                let a = self.term(budget.saturating_sub(left).max(1));
                Term::app(form, f, a)
            }
            4 => {
                let form = self.form();
                let f = self.term(budget);
                Term::type_app(form, f, self.ty(&Kind::Star, 3))
            }
            _ => {
                let e = self.term(budget);
                Term::asc(e, self.ty(&Kind::Star, 3))
            }
        }
    }
}
