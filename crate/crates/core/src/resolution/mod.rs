//! Implicit resolution: the matching judgment `Γ ⊩ τ ⇝ τ'` and entailment
//! `Γ ⊩ τ`, searched by iterative deepening on witness measure.
//!
//! A match goal is solved against a subject variable pushed (explicitly)
//! onto the context at level `n = Γ.term_len()`; the witness term refers to
//! it as `Var::Free(n)` and [`Witness::with_subject`] plugs in the real term.

mod oracle;
mod search;
pub mod unify;

use std::fmt::Write as _;
use std::rc::Rc;

use crate::kinds::{head_step, normalize, shape, type_equiv, Shape};
use crate::surface::pretty::{pretty_kind, pretty_term, pretty_type};
use crate::syntax::{BinderForm, Context, Kind, MetaVar, Term, Type};

pub use oracle::oracle_enumerate;
pub use unify::MetaStore;

/// Default measure bound.
pub const DEFAULT_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct Goal {
    pub context: Context,
    /// `None` for an entailment goal `Γ ⊩ target`.
    pub source: Option<Type>,
    pub target: Type,
}

impl Goal {
    pub fn matching(context: Context, source: Type, target: Type) -> Goal {
        Goal { context, source: Some(source), target }
    }

    pub fn entailment(context: Context, target: Type) -> Goal {
        Goal { context, source: None, target }
    }

    /// Level of the subject variable for match goals.
    pub fn subject_level(&self) -> Option<usize> {
        self.source.as_ref().map(|_| self.context.term_len())
    }

    fn subject(&self) -> Term {
        Term::free(self.context.term_len(), "subject")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    MBeta,
    MAll,
    MImpl,
    MEquiv,
    FBeta,
    FAll,
    FImpl,
    Lookup,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::MBeta => "m-beta",
            Rule::MAll => "m-all",
            Rule::MImpl => "m-impl",
            Rule::MEquiv => "m-equiv",
            Rule::FBeta => "f-beta",
            Rule::FAll => "f-all",
            Rule::FImpl => "f-impl",
            Rule::Lookup => "lookup",
        }
    }

    /// Number of premises a derivation node for this rule carries.
    pub fn arity(self) -> usize {
        match self {
            Rule::MImpl => 2,
            Rule::MEquiv => 0,
            _ => 1,
        }
    }
}

/// A context entry referenced by a derivation node.
#[derive(Clone, Debug, PartialEq)]
pub enum Binding {
    Type { level: usize, name: Rc<str>, kind: Kind },
    Term { level: usize, name: Rc<str>, ty: Type },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    /// The type chosen by `m-all`.
    pub instantiation: Option<Type>,
    /// The entry used by `lookup` or introduced by `f-all` / `f-impl`.
    pub binding: Option<Binding>,
    /// `None` on `lookup` nodes, whose conclusion is an entailment.
    pub source: Option<Type>,
    pub target: Type,
}

impl Derivation {
    /// Indented dump, one line per rule application.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.trace_into(0, &mut out);
        out
    }

    fn trace_into(&self, depth: usize, out: &mut String) {
        let indent = "  ".repeat(depth);
        match &self.source {
            Some(source) => {
                let _ = write!(
                    out,
                    "{}{} {} ~> {}",
                    indent,
                    self.rule.name(),
                    pretty_type(source),
                    pretty_type(&self.target)
                );
            }
            None => {
                let _ = write!(out, "{}{} |- {}", indent, self.rule.name(), pretty_type(&self.target));
            }
        }
        if let Some(ty) = &self.instantiation {
            let _ = write!(out, " with {}", pretty_type(ty));
        }
        match &self.binding {
            Some(Binding::Type { name, kind, .. }) => {
                let _ = write!(out, " introducing [{} : {}]", name, pretty_kind(kind));
            }
            Some(Binding::Term { name, ty, .. }) => {
                let verb = if self.rule == Rule::Lookup { "using" } else { "introducing" };
                let _ = write!(out, " {} [{} : {}]", verb, name, pretty_type(ty));
            }
            None => {}
        }
        out.push('\n');
        for premise in &self.premises {
            premise.trace_into(depth + 1, out);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Whether every node has the premise count its rule prescribes.
    pub fn well_shaped(&self) -> bool {
        self.premises.len() == self.rule.arity() && self.premises.iter().all(Derivation::well_shaped)
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// Elaborated term using explicit forms only.
    pub term: Term,
    pub derivation: Derivation,
    pub measure: usize,
    /// Level of the placeholder subject variable, for match goals.
    pub subject: Option<usize>,
}

impl Witness {
    /// The witness term with the real subject in place of the placeholder.
    pub fn with_subject(&self, subject: &Term) -> Term {
        match self.subject {
            Some(level) => self.term.replace_free(level, subject),
            None => self.term.clone(),
        }
    }

    pub fn pretty(&self) -> String {
        pretty_term(&self.term)
    }
}

#[derive(Clone, Debug)]
pub enum ResolutionOutcome {
    Unique(Witness),
    /// At least two witnesses of equal minimal measure, sorted by their
    /// printed form.
    Ambiguous(Vec<Witness>),
    NotDerivable,
    Exhausted(usize),
    Incomplete(String),
}

impl ResolutionOutcome {
    pub fn witnesses(&self) -> &[Witness] {
        match self {
            ResolutionOutcome::Unique(w) => std::slice::from_ref(w),
            ResolutionOutcome::Ambiguous(ws) => ws,
            _ => &[],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ResolutionOutcome::Unique(_) => "unique",
            ResolutionOutcome::Ambiguous(_) => "ambiguous",
            ResolutionOutcome::NotDerivable => "not derivable",
            ResolutionOutcome::Exhausted(_) => "exhausted",
            ResolutionOutcome::Incomplete(_) => "incomplete",
        }
    }
}

/// Order in which the search visits lookup candidates and pending
/// entailments. Outcomes do not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExplorationOrder {
    Sequential,
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub limit: usize,
    pub order: ExplorationOrder,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions { limit: DEFAULT_LIMIT, order: ExplorationOrder::Sequential }
    }
}

pub fn solve(goal: &Goal, limit: usize) -> ResolutionOutcome {
    solve_with(goal, &SolveOptions { limit, order: ExplorationOrder::Sequential })
}

pub fn solve_with(goal: &Goal, options: &SolveOptions) -> ResolutionOutcome {
    search::run(goal, options)
}

/// One rule application licensed for a goal, with the goals it leaves.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub rule: Rule,
    pub subgoals: Vec<Goal>,
    pub instantiation: Option<Type>,
    pub binding: Option<Binding>,
}

/// The one-step expansions of a goal. At most one rule applies to a match
/// goal; entailment goals expand by `lookup` once per implicit binding.
pub fn match_step(goal: &Goal) -> Vec<Expansion> {
    let ctx = &goal.context;
    let Some(source) = &goal.source else {
        return ctx
            .implicit_terms()
            .map(|(level, entry)| Expansion {
                rule: Rule::Lookup,
                subgoals: vec![Goal::matching(ctx.clone(), entry.ty.clone(), goal.target.clone())],
                instantiation: None,
                binding: Some(Binding::Term { level, name: entry.name.clone(), ty: entry.ty.clone() }),
            })
            .collect();
    };
    let target = &goal.target;
    let one = |rule, subgoals, instantiation, binding| {
        vec![Expansion { rule, subgoals, instantiation, binding }]
    };
    match shape(target) {
        Shape::Redex => {
            let next = head_step(target).expect("redex steps");
            return one(Rule::FBeta, vec![Goal::matching(ctx.clone(), source.clone(), next)], None, None);
        }
        Shape::ImplicitAll => {
            let Type::All(_, h, k, body) = target else { unreachable!() };
            let mut inner = ctx.clone();
            let level = inner.push_type(BinderForm::Implicit, h.as_str(), k.clone());
            let binding = Binding::Type { level, name: h.0.clone(), kind: k.clone() };
            let sub = Goal::matching(inner, source.clone(), body.open(level, h));
            return one(Rule::FAll, vec![sub], None, Some(binding));
        }
        Shape::ImplicitPi => {
            let Type::Pi(_, domain, codomain) = target else { unreachable!() };
            let mut inner = ctx.clone();
            let level = inner.push_term(BinderForm::Implicit, "x", (**domain).clone());
            let binding = Binding::Term { level, name: Rc::from("x"), ty: (**domain).clone() };
            let sub = Goal::matching(inner, source.clone(), (**codomain).clone());
            return one(Rule::FImpl, vec![sub], None, Some(binding));
        }
        Shape::Lambda | Shape::Flex => return Vec::new(),
        Shape::Simple => {}
    }
    match shape(source) {
        Shape::Redex => {
            let next = head_step(source).expect("redex steps");
            one(Rule::MBeta, vec![Goal::matching(ctx.clone(), next, target.clone())], None, None)
        }
        Shape::ImplicitAll => {
            let Type::All(_, _, _, body) = source else { unreachable!() };
            let meta = Type::Meta(MetaVar(next_meta(source, target)));
            let sub = Goal::matching(ctx.clone(), body.instantiate(&meta), target.clone());
            one(Rule::MAll, vec![sub], Some(meta), None)
        }
        Shape::ImplicitPi => {
            let Type::Pi(_, domain, codomain) = source else { unreachable!() };
            let entail = Goal::entailment(ctx.clone(), (**domain).clone());
            let rest = Goal::matching(ctx.clone(), (**codomain).clone(), target.clone());
            one(Rule::MImpl, vec![entail, rest], None, None)
        }
        Shape::Simple | Shape::Flex => {
            let closes = if source.contains_meta() || target.contains_meta() {
                let mut store = MetaStore::new();
                for _ in 0..next_meta(source, target) {
                    store.fresh(Kind::Star, ctx.type_len());
                }
                store.unify(source, target, &ctx.type_kinds()).is_ok()
            } else {
                type_equiv(ctx, source, target)
            };
            if closes {
                one(Rule::MEquiv, Vec::new(), None, None)
            } else {
                Vec::new()
            }
        }
        Shape::Lambda => Vec::new(),
    }
}

fn next_meta(a: &Type, b: &Type) -> usize {
    fn max_meta(ty: &Type) -> Option<usize> {
        match ty {
            Type::Meta(m) => Some(m.0),
            Type::Var(..) | Type::Int => None,
            Type::Pi(_, x, y) | Type::App(x, y) => max_meta(x).max(max_meta(y)),
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => max_meta(body),
        }
    }
    max_meta(a).max(max_meta(b)).map_or(0, |m| m + 1)
}

/// Builds the explicit term a derivation stands for, applied to `subject`.
pub fn elaborate_witness(d: &Derivation, subject: Term) -> Term {
    let premise = |i: usize| &d.premises[i];
    match d.rule {
        Rule::MEquiv => subject,
        Rule::MBeta | Rule::FBeta => elaborate_witness(premise(0), subject),
        Rule::MAll => {
            let ty = d.instantiation.as_ref().expect("m-all records its instantiation");
            let applied = Term::type_app(BinderForm::Explicit, subject, normalize(ty).erase());
            elaborate_witness(premise(0), applied)
        }
        Rule::MImpl => {
            let argument = elaborate_witness(premise(0), subject.clone());
            elaborate_witness(premise(1), Term::app(BinderForm::Explicit, subject, argument))
        }
        Rule::Lookup => match &d.binding {
            Some(Binding::Term { level, name, .. }) => elaborate_witness(premise(0), Term::free(*level, name)),
            _ => panic!("lookup without a term binding"),
        },
        Rule::FAll => match &d.binding {
            Some(Binding::Type { level, name, kind }) => {
                let body = elaborate_witness(premise(0), subject).close_type(*level);
                Term::tabs(BinderForm::Explicit, name, kind.clone(), body)
            }
            _ => panic!("f-all without a type binding"),
        },
        Rule::FImpl => match &d.binding {
            Some(Binding::Term { level, name, ty }) => {
                let body = elaborate_witness(premise(0), subject).close_term(*level);
                Term::abs(BinderForm::Explicit, name, normalize(ty).erase(), body)
            }
            _ => panic!("f-impl without a term binding"),
        },
    }
}
