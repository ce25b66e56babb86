//! Generate-and-test enumeration of resolution witnesses.
//!
//! Every `m-all` instantiation is drawn from a finite universe of types, so
//! no unification is involved. Used only to cross-check the search.

use crate::kinds::{head_step, kind_of, normalize, shape, type_equiv, Shape};
use crate::surface::pretty::pretty_term;
use crate::syntax::{BinderForm, Context, Term, Type};

use super::Goal;

/// All witness terms of derivations of `goal` with measure at most `limit`,
/// without duplicates, ordered by measure and then by printed form. Type
/// variables introduced by `f-all` join the universe in their scope.
pub fn oracle_enumerate(goal: &Goal, limit: usize, universe: &[Type]) -> Vec<Term> {
    let oracle = Oracle { universe: universe.to_vec() };
    let mut out = Vec::new();
    match &goal.source {
        Some(source) => {
            let mut ctx = goal.context.clone();
            let level = ctx.push_term(BinderForm::Explicit, "subject", source.clone());
            oracle.match_target(&ctx, source, &goal.target, Term::free(level, "subject"), limit, &mut out);
        }
        None => oracle.entail(&goal.context, &goal.target, limit, &mut out),
    }
    let mut unique: Vec<Term> = Vec::new();
    for term in out {
        if !unique.contains(&term) {
            unique.push(term);
        }
    }
    unique.sort_by_cached_key(|t| (t.measure(), pretty_term(t)));
    unique
}

struct Oracle {
    universe: Vec<Type>,
}

impl Oracle {
    fn entail(&self, ctx: &Context, target: &Type, budget: usize, out: &mut Vec<Term>) {
        for (level, entry) in ctx.implicit_terms() {
            self.match_target(ctx, &entry.ty, target, Term::free(level, &entry.name), budget, out);
        }
    }

    fn match_target(&self, ctx: &Context, source: &Type, target: &Type, subject: Term, budget: usize, out: &mut Vec<Term>) {
        if subject.measure() > budget {
            return;
        }
        match (shape(target), target) {
            (Shape::Redex, _) => {
                let next = head_step(target).unwrap();
                self.match_target(ctx, source, &next, subject, budget, out);
            }
            (Shape::ImplicitAll, Type::All(_, h, k, body)) => {
                let mut inner = ctx.clone();
                let level = inner.push_type(BinderForm::Implicit, h.as_str(), k.clone());
                let mut universe = self.universe.clone();
                universe.push(Type::free(level, h.as_str()));
                let mut found = Vec::new();
                Oracle { universe }.match_target(&inner, source, &body.open(level, h), subject, budget - 1, &mut found);
                out.extend(
                    found
                        .into_iter()
                        .map(|t| Term::tabs(BinderForm::Explicit, h.as_str(), k.clone(), t.close_type(level))),
                );
            }
            (Shape::ImplicitPi, Type::Pi(_, domain, codomain)) => {
                let mut inner = ctx.clone();
                let level = inner.push_term(BinderForm::Implicit, "x", (**domain).clone());
                let mut found = Vec::new();
                self.match_target(&inner, source, codomain, subject, budget - 1, &mut found);
                let annotation = normalize(domain).erase();
                out.extend(
                    found
                        .into_iter()
                        .map(|t| Term::abs(BinderForm::Explicit, "x", annotation.clone(), t.close_term(level))),
                );
            }
            (Shape::Simple, _) => self.match_source(ctx, source, target, subject, budget, out),
            _ => {}
        }
    }

    fn match_source(&self, ctx: &Context, source: &Type, target: &Type, subject: Term, budget: usize, out: &mut Vec<Term>) {
        if subject.measure() > budget {
            return;
        }
        match (shape(source), source) {
            (Shape::Redex, _) => {
                let next = head_step(source).unwrap();
                self.match_source(ctx, &next, target, subject, budget, out);
            }
            (Shape::ImplicitAll, Type::All(_, _, k, body)) => {
                for candidate in &self.universe {
                    if kind_of(ctx, candidate).as_ref() != Ok(k) {
                        continue;
                    }
                    let applied = Term::type_app(BinderForm::Explicit, subject.clone(), normalize(candidate).erase());
                    self.match_source(ctx, &body.instantiate(candidate), target, applied, budget, out);
                }
            }
            (Shape::ImplicitPi, Type::Pi(_, domain, codomain)) => {
                // the application node and the argument come on top of the subject
                let room = budget.saturating_sub(subject.measure() + 1);
                let mut arguments = Vec::new();
                self.entail(ctx, domain, room, &mut arguments);
                for argument in arguments {
                    let applied = Term::app(BinderForm::Explicit, subject.clone(), argument);
                    self.match_source(ctx, codomain, target, applied, budget, out);
                }
            }
            (Shape::Simple, _) if type_equiv(ctx, source, target) => out.push(subject),
            _ => {}
        }
    }
}
