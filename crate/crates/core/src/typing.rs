//! The typing judgment `Γ ⊢ e : τ`. Resolution runs only at ascriptions.
//!
//! Terms are checked in opened form: each binder pushes a context entry and
//! its body is opened with the new level, so every type the checker handles
//! refers to the context by level.

use std::collections::BTreeMap;

use crate::kinds::{ctx_ok, kind_of, normalize};
use crate::resolution::{solve_with, Goal, ResolutionOutcome, SolveOptions, Witness};
use crate::surface::diagnostic::{Code, Diagnostic};
use crate::surface::pretty::{pretty_kind, pretty_term, pretty_type};
use crate::syntax::{BinderForm, Context, Kind, Term, Type, Var};

/// A checked term with the witness chosen at each ascription.
#[derive(Clone, Debug)]
pub struct TypedTerm {
    pub term: Term,
    /// β-normal.
    pub ty: Type,
    /// Keyed by the pre-order index of the ascription among all
    /// ascriptions of `term`.
    pub resolutions: BTreeMap<usize, Witness>,
    pub context: Context,
}

pub fn type_of(ctx: &Context, term: &Term) -> Result<TypedTerm, Diagnostic> {
    type_of_with(ctx, term, &SolveOptions::default())
}

pub fn type_of_with(ctx: &Context, term: &Term, options: &SolveOptions) -> Result<TypedTerm, Diagnostic> {
    ctx_ok(ctx)?;
    let mut checker = Checker { ctx: ctx.clone(), options, node: 0, asc: 0, resolutions: BTreeMap::new() };
    let ty = checker.check(term)?;
    Ok(TypedTerm { term: term.clone(), ty, resolutions: checker.resolutions, context: ctx.clone() })
}

struct Checker<'o> {
    ctx: Context,
    options: &'o SolveOptions,
    /// Pre-order index of the next term node.
    node: usize,
    /// Pre-order index of the next ascription.
    asc: usize,
    resolutions: BTreeMap<usize, Witness>,
}

fn form_name(form: BinderForm) -> &'static str {
    match form {
        BinderForm::Explicit => "explicit",
        BinderForm::Implicit => "implicit",
    }
}

impl Checker<'_> {
    fn check(&mut self, term: &Term) -> Result<Type, Diagnostic> {
        let node = self.node;
        self.node += 1;
        self.check_node(term).map_err(|d| d.at_node(node))
    }

    fn kind(&self, ty: &Type) -> Result<Kind, Diagnostic> {
        kind_of(&self.ctx, ty)
    }

    fn check_node(&mut self, term: &Term) -> Result<Type, Diagnostic> {
        match term {
            Term::Var(Var::Free(level), _) => match self.ctx.term_entry(*level) {
                Some(entry) => Ok(normalize(&entry.ty)),
                None => Err(Diagnostic::error(Code::E201, format!("variable #{} is not in scope", level))),
            },
            Term::Var(Var::Unbound(name), _) => {
                Err(Diagnostic::error(Code::E201, format!("unbound variable `{}`", name)))
            }
            Term::Var(Var::Bound(i), h) => Err(Diagnostic::error(
                Code::E201,
                format!("variable `{}` refers to binder #{} that does not exist", h, i),
            )),
            Term::IntLit(_) => Ok(Type::Int),
            Term::Abs(form, h, annotation, body) => {
                let kind = self.kind(annotation)?;
                if kind != Kind::Star {
                    return Err(Diagnostic::error(
                        Code::E101,
                        format!(
                            "parameter `{}` has type `{}` of kind `{}`, expected `*`",
                            h,
                            pretty_type(annotation),
                            pretty_kind(&kind)
                        ),
                    ));
                }
                let level = self.ctx.push_term(*form, h.as_str(), annotation.clone());
                let result = self.check(&body.open_term(level, h));
                self.ctx.pop();
                Ok(Type::pi(*form, normalize(annotation), result?))
            }
            Term::TAbs(form, h, kind, body) => {
                let level = self.ctx.push_type(*form, h.as_str(), kind.clone());
                let result = self.check(&body.open_type(level, h));
                self.ctx.pop();
                Ok(Type::All(*form, h.clone(), kind.clone(), Box::new(result?.close(level))))
            }
            Term::App(form, function, argument) => {
                let f_ty = self.check(function)?;
                let Type::Pi(expected, domain, codomain) = f_ty else {
                    return Err(Diagnostic::error(
                        Code::E204,
                        format!(
                            "`{}` has type `{}`, which is not a function type",
                            pretty_term(function),
                            pretty_type(&f_ty)
                        ),
                    ));
                };
                if expected != *form {
                    return Err(Diagnostic::error(
                        Code::E203,
                        format!(
                            "{} application of a function with {} parameter of type `{}`",
                            form_name(*form),
                            form_name(expected),
                            pretty_type(&Type::Pi(expected, domain, codomain))
                        ),
                    ));
                }
                let a_ty = self.check(argument)?;
                if a_ty != *domain {
                    return Err(Diagnostic::error(
                        Code::E202,
                        format!(
                            "argument has type `{}`, expected `{}`",
                            pretty_type(&a_ty),
                            pretty_type(&domain)
                        ),
                    ));
                }
                Ok(*codomain)
            }
            Term::TypeApp(form, function, argument) => {
                let f_ty = self.check(function)?;
                let Type::All(expected, h, kind, body) = f_ty else {
                    return Err(Diagnostic::error(
                        Code::E204,
                        format!(
                            "`{}` has type `{}`, which is not a universal type",
                            pretty_term(function),
                            pretty_type(&f_ty)
                        ),
                    ));
                };
                if expected != *form {
                    return Err(Diagnostic::error(
                        Code::E203,
                        format!(
                            "{} type application of a term with {} type parameter of type `{}`",
                            form_name(*form),
                            form_name(expected),
                            pretty_type(&Type::All(expected, h, kind, body))
                        ),
                    ));
                }
                let actual = self.kind(argument)?;
                if actual != kind {
                    return Err(Diagnostic::error(
                        Code::E101,
                        format!(
                            "type argument `{}` has kind `{}`, expected `{}`",
                            pretty_type(argument),
                            pretty_kind(&actual),
                            pretty_kind(&kind)
                        ),
                    ));
                }
                Ok(normalize(&body.instantiate(argument)))
            }
            Term::Asc(subject, target) => {
                let id = self.asc;
                self.asc += 1;
                let source = self.check(subject)?;
                let kind = self.kind(target)?;
                if kind != Kind::Star {
                    return Err(Diagnostic::error(
                        Code::E205,
                        format!("ascription target `{}` has kind `{}`, expected `*`", pretty_type(target), pretty_kind(&kind)),
                    ));
                }
                let target = normalize(target);
                let goal = Goal::matching(self.ctx.clone(), source.clone(), target.clone());
                let shown = |w: &Witness| pretty_term(&w.with_subject(subject));
                let describe = format!("`{}` to `{}`", pretty_type(&source), pretty_type(&target));
                match solve_with(&goal, self.options) {
                    ResolutionOutcome::Unique(w) => {
                        self.resolutions.insert(id, w);
                        Ok(target)
                    }
                    ResolutionOutcome::Ambiguous(ws) => Err(Diagnostic::error(
                        Code::E302,
                        format!("ambiguous resolution of {}: {} minimal witnesses of measure {}", describe, ws.len(), ws[0].measure),
                    )
                    .with_witnesses(ws.iter().map(shown).collect())),
                    ResolutionOutcome::NotDerivable => {
                        Err(Diagnostic::error(Code::E301, format!("no derivation resolves {}", describe)))
                    }
                    ResolutionOutcome::Exhausted(limit) => Err(Diagnostic::error(
                        Code::E303,
                        format!("no derivation resolves {} within measure {}", describe, limit),
                    )
                    .with_note("a larger `--limit` may find one")),
                    ResolutionOutcome::Incomplete(reason) => Err(Diagnostic::error(
                        Code::E304,
                        format!("resolution of {} left an undecided constraint", describe),
                    )
                    .with_note(reason)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::{parse_context, parse_term, parse_type, parse_unit};

    fn check(text: &str) -> Result<TypedTerm, Diagnostic> {
        type_of(&Context::new(), &parse_unit(text, "t.fcci").unwrap().body)
    }

    fn code(text: &str) -> Code {
        check(text).unwrap_err().code
    }

    #[test]
    fn summon_type() {
        let typed = check("/\\[a]. \\[x : a]. x").unwrap();
        assert_eq!(pretty_type(&typed.ty), "forall [a]. a => a");
    }

    #[test]
    fn summon_with_given() {
        let typed = check("let [y : Int] = 7 in (/\\[a]. \\[x : a]. x) :: Int").unwrap();
        assert_eq!(typed.ty, Type::Int);
        assert_eq!(typed.resolutions.len(), 1);
        let w = &typed.resolutions[&0];
        assert_eq!(w.pretty(), "subject @(Int) (y)");
    }

    #[test]
    fn focusing_ascription() {
        let ctx = parse_context("[y : Int -> Int], (f : Int => (Int -> Int) => Int)").unwrap();
        let term = parse_term("f :: Int => Int", &ctx).unwrap();
        let typed = type_of(&ctx, &term).unwrap();
        assert_eq!(pretty_type(&typed.ty), "Int => Int");
        let w = &typed.resolutions[&0];
        assert_eq!(pretty_term(&w.with_subject(&Term::free(1, "f"))), "\\(x : Int). f (x) (y)");
    }

    #[test]
    fn binder_form_mismatch() {
        let ctx = parse_context("(f : Int -> Int)").unwrap();
        let term = parse_term("f [3]", &ctx).unwrap();
        let err = type_of(&ctx, &term).unwrap_err();
        assert_eq!(err.code, Code::E203);
        assert_eq!(err.node, Some(0));
        assert_eq!(code("(/\\[a]. \\[x : a]. x) @(Int)"), Code::E203);
    }

    #[test]
    fn error_codes() {
        assert_eq!(code("z"), Code::E201);
        assert_eq!(code("(\\(x : Int). x) (\\(y : Int). y)"), Code::E202);
        assert_eq!(code("7 (7)"), Code::E204);
        assert_eq!(code("7 @(Int)"), Code::E204);
        assert_eq!(code("7 :: \\a : *. a"), Code::E205);
        assert_eq!(code("\\(x : \\a : *. a). x"), Code::E101);
        assert_eq!(code("(/\\(f : * -> *). 7) @(Int)"), Code::E101);
        assert_eq!(code("7 :: Int -> Int"), Code::E301);
        assert_eq!(code("let [a : Int] = 1 in let [b : Int] = 2 in (/\\[t]. \\[x : t]. x) :: Int"), Code::E302);
    }

    #[test]
    fn ascription_errors_point_at_the_ascription() {
        let err = check("\\(z : Int). 7 :: Int -> Int").unwrap_err();
        assert_eq!(err.code, Code::E301);
        assert_eq!(err.node, Some(1));
    }

    #[test]
    fn types_stay_normal() {
        let typed = check("\\(x : (\\a : *. a) Int). x").unwrap();
        assert_eq!(pretty_type(&typed.ty), "Int -> Int");
        let typed = check("(/\\(f : * -> *). \\(x : f Int). x) @(\\a : *. a -> a)").unwrap();
        assert_eq!(pretty_type(&typed.ty), "(Int -> Int) -> Int -> Int");
    }

    #[test]
    fn ascription_identity() {
        let typed = check("(\\(x : Int). x) :: Int -> Int").unwrap();
        assert_eq!(typed.resolutions[&0].measure, 1);
        let ctx = Context::new();
        let target = parse_type("forall (a). a -> a", &ctx).unwrap();
        let typed = check("(/\\(a). \\(x : a). x) :: forall (b). b -> b").unwrap();
        assert_eq!(typed.ty, target);
    }

    #[test]
    fn implicit_binders_are_ordinary_variables() {
        let typed = check("\\[x : Int]. x").unwrap();
        assert_eq!(pretty_type(&typed.ty), "Int => Int");
    }

    #[test]
    fn ascriptions_are_numbered_in_pre_order() {
        let typed = check("let [y : Int] = 7 in ((/\\[a]. \\[x : a]. x) :: Int) :: Int").unwrap();
        assert_eq!(typed.resolutions.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(typed.resolutions[&0].measure, 1);
        assert_eq!(typed.resolutions[&1].measure, 5);
    }
}
