//! A checker for plain F-omega, used to validate elaborated programs.
//!
//! It shares kinding and type equivalence with the rest of the crate but
//! not the typing code path. Any failure is reported as E401.

use crate::kinds::{kind_of, normalize, type_equiv, whnf};
use crate::surface::diagnostic::{Code, Diagnostic};
use crate::surface::pretty::{pretty_term, pretty_type};
use crate::syntax::{BinderForm, Context, Entry, Kind, Term, Type, Var};

fn reject(message: String) -> Diagnostic {
    Diagnostic::error(Code::E401, message)
}

/// Types `term` under `ctx`, which must contain explicit entries only.
/// Returns the β-normal type.
pub fn fomega_typecheck(ctx: &Context, term: &Term) -> Result<Type, Diagnostic> {
    for entry in ctx.entries() {
        let (form, name) = match entry {
            Entry::Type(e) => (e.form, &e.name),
            Entry::Term(e) => (e.form, &e.name),
        };
        if form != BinderForm::Explicit {
            return Err(reject(format!("context entry `{}` is implicit", name)));
        }
    }
    let mut ctx = ctx.clone();
    infer(&mut ctx, term).map(|ty| normalize(&ty))
}

fn proper(ctx: &Context, ty: &Type) -> Result<(), Diagnostic> {
    if ty.has_implicit_form() {
        return Err(reject(format!("type `{}` has an implicit binder", pretty_type(ty))));
    }
    match kind_of(ctx, ty) {
        Ok(Kind::Star) => Ok(()),
        Ok(_) => Err(reject(format!("type `{}` is not a proper type", pretty_type(ty)))),
        Err(d) => Err(reject(d.message)),
    }
}

fn infer(ctx: &mut Context, term: &Term) -> Result<Type, Diagnostic> {
    match term {
        Term::Var(Var::Free(level), h) => ctx
            .term_entry(*level)
            .map(|e| e.ty.clone())
            .ok_or_else(|| reject(format!("variable `{}` is not in scope", h))),
        Term::Var(_, h) => Err(reject(format!("variable `{}` is not in scope", h))),
        Term::IntLit(_) => Ok(Type::Int),
        Term::Abs(BinderForm::Explicit, h, ty, body) => {
            proper(ctx, ty)?;
            let level = ctx.push_term(BinderForm::Explicit, h.as_str(), ty.clone());
            let result = infer(ctx, &body.open_term(level, h));
            ctx.pop();
            Ok(Type::arrow(ty.clone(), result?))
        }
        Term::TAbs(BinderForm::Explicit, h, kind, body) => {
            let level = ctx.push_type(BinderForm::Explicit, h.as_str(), kind.clone());
            let result = infer(ctx, &body.open_type(level, h));
            ctx.pop();
            Ok(Type::All(BinderForm::Explicit, h.clone(), kind.clone(), Box::new(result?.close(level))))
        }
        Term::App(BinderForm::Explicit, f, a) => {
            let f_ty = whnf(&infer(ctx, f)?);
            let a_ty = infer(ctx, a)?;
            match f_ty {
                Type::Pi(BinderForm::Explicit, domain, codomain) => {
                    if type_equiv(ctx, &domain, &a_ty) {
                        Ok(*codomain)
                    } else {
                        Err(reject(format!(
                            "argument `{}` has type `{}`, expected `{}`",
                            pretty_term(a),
                            pretty_type(&a_ty),
                            pretty_type(&domain)
                        )))
                    }
                }
                other => Err(reject(format!(
                    "`{}` of type `{}` is applied to a term",
                    pretty_term(f),
                    pretty_type(&other)
                ))),
            }
        }
        Term::TypeApp(BinderForm::Explicit, f, ty) => {
            let f_ty = whnf(&infer(ctx, f)?);
            if ty.has_implicit_form() {
                return Err(reject(format!("type argument `{}` has an implicit binder", pretty_type(ty))));
            }
            match f_ty {
                Type::All(BinderForm::Explicit, _, kind, body) => match kind_of(ctx, ty) {
                    Ok(k) if k == kind => Ok(body.instantiate(ty)),
                    Ok(_) | Err(_) => Err(reject(format!("type argument `{}` has the wrong kind", pretty_type(ty)))),
                },
                other => Err(reject(format!(
                    "`{}` of type `{}` is applied to a type",
                    pretty_term(f),
                    pretty_type(&other)
                ))),
            }
        }
        Term::Asc(..) => Err(reject("ascriptions are not part of F-omega".to_string())),
        _ => Err(reject(format!("`{}` uses an implicit binder form", pretty_term(term)))),
    }
}
