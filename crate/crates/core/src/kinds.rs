//! Context well-formedness, kinding, β-normalization and type equivalence.

use crate::surface::diagnostic::{Code, Diagnostic};
use crate::surface::pretty::pretty_type;
use crate::syntax::{BinderForm, Context, Entry, Kind, Type, Var};

pub type KindingResult = Result<Kind, Diagnostic>;

fn kind_error(message: String) -> Diagnostic {
    Diagnostic::error(Code::E101, message)
}

/// Checks that every entry is well scoped and every term binding has a
/// proper type.
pub fn ctx_ok(ctx: &Context) -> Result<(), Diagnostic> {
    let mut prefix = Context::new();
    for entry in ctx.entries() {
        match entry {
            Entry::Type(e) => {
                prefix.push_type(e.form, &e.name, e.kind.clone());
            }
            Entry::Term(e) => {
                let kind = kind_of(&prefix, &e.ty)
                    .map_err(|d| d.with_note(format!("in the binding of `{}`", e.name)))?;
                if kind != Kind::Star {
                    return Err(kind_error(format!(
                        "binding `{}` has type `{}` of kind `{}`, expected `*`",
                        e.name,
                        pretty_type(&e.ty),
                        crate::surface::pretty::pretty_kind(&kind)
                    )));
                }
                prefix.push_term(e.form, &e.name, e.ty.clone());
            }
        }
    }
    Ok(())
}

pub fn kind_of(ctx: &Context, ty: &Type) -> KindingResult {
    kind_in(ctx, &mut Vec::new(), ty)
}

fn kind_in(ctx: &Context, locals: &mut Vec<Kind>, ty: &Type) -> KindingResult {
    match ty {
        Type::Var(Var::Bound(i), h) => locals
            .len()
            .checked_sub(i + 1)
            .map(|ix| locals[ix].clone())
            .ok_or_else(|| kind_error(format!("type variable `{}` escapes its binder", h))),
        Type::Var(Var::Free(l), h) => ctx
            .type_entry(*l)
            .map(|e| e.kind.clone())
            .ok_or_else(|| kind_error(format!("type variable `{}` is not in scope", h))),
        Type::Var(Var::Unbound(name), _) => {
            Err(kind_error(format!("unbound type variable `{}`", name)))
        }
        Type::Int => Ok(Kind::Star),
        Type::Meta(m) => Err(kind_error(format!("unsolved metavariable ?{}", m.0))),
        Type::Pi(_, domain, codomain) => {
            expect_star(ctx, locals, domain)?;
            expect_star(ctx, locals, codomain)?;
            Ok(Kind::Star)
        }
        Type::All(_, _, kind, body) => {
            locals.push(kind.clone());
            let result = expect_star(ctx, locals, body);
            locals.pop();
            result.map(|_| Kind::Star)
        }
        Type::Lam(_, kind, body) => {
            locals.push(kind.clone());
            let result = kind_in(ctx, locals, body);
            locals.pop();
            Ok(Kind::arrow(kind.clone(), result?))
        }
        Type::App(operator, operand) => match kind_in(ctx, locals, operator)? {
            Kind::Arrow(domain, codomain) => {
                let actual = kind_in(ctx, locals, operand)?;
                if actual == *domain {
                    Ok(*codomain)
                } else {
                    Err(kind_error(format!(
                        "type argument `{}` has kind `{}`, expected `{}`",
                        pretty_type(operand),
                        crate::surface::pretty::pretty_kind(&actual),
                        crate::surface::pretty::pretty_kind(&domain)
                    )))
                }
            }
            Kind::Star => Err(kind_error(format!(
                "type `{}` of kind `*` is applied to an argument",
                pretty_type(operator)
            ))),
        },
    }
}

fn expect_star(ctx: &Context, locals: &mut Vec<Kind>, ty: &Type) -> Result<(), Diagnostic> {
    match kind_in(ctx, locals, ty)? {
        Kind::Star => Ok(()),
        other => Err(kind_error(format!(
            "type `{}` has kind `{}`, expected `*`",
            pretty_type(ty),
            crate::surface::pretty::pretty_kind(&other)
        ))),
    }
}

/// Full β-normal form, normal order.
pub fn normalize(ty: &Type) -> Type {
    match ty {
        Type::Var(..) | Type::Int | Type::Meta(_) => ty.clone(),
        Type::Pi(form, a, b) => Type::pi(*form, normalize(a), normalize(b)),
        Type::All(form, h, k, body) => Type::All(*form, h.clone(), k.clone(), Box::new(normalize(body))),
        Type::Lam(h, k, body) => Type::Lam(h.clone(), k.clone(), Box::new(normalize(body))),
        Type::App(f, a) => match whnf(f) {
            Type::Lam(_, _, body) => normalize(&body.instantiate(a)),
            head => Type::app(normalize(&head), normalize(a)),
        },
    }
}

/// The β-normal form of a well-kinded type. The context only documents the
/// scope the type lives in; β-reduction does not consult it.
pub fn normalize_type(_ctx: &Context, ty: &Type) -> Type {
    normalize(ty)
}

/// Weak-head normal form: reduces head redexes only.
pub fn whnf(ty: &Type) -> Type {
    let mut current = ty.clone();
    while let Some(next) = head_step(&current) {
        current = next;
    }
    current
}

/// One β-step at the head of the application spine, if the head is a redex.
pub fn head_step(ty: &Type) -> Option<Type> {
    match ty {
        Type::App(f, a) => match &**f {
            Type::Lam(_, _, body) => Some(body.instantiate(a)),
            _ => head_step(f).map(|f2| Type::app(f2, (**a).clone())),
        },
        _ => None,
    }
}

/// `Γ ⊢ a ≡ b`: α-equivalence of β-normal forms. No η.
pub fn type_equiv(_ctx: &Context, a: &Type, b: &Type) -> bool {
    normalize(a) == normalize(b)
}

/// How a type in weak-head normal form presents itself to resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Variable, `Int`, variable-headed application, explicit `Π` or `∀`.
    Simple,
    /// `(λα.τ1) τ2 ..` at the head.
    Redex,
    ImplicitAll,
    ImplicitPi,
    /// A type-level λ; never the type of a term.
    Lambda,
    /// Headed by a metavariable: simplicity is not yet known.
    Flex,
}

pub fn shape(ty: &Type) -> Shape {
    match ty {
        Type::Var(..) | Type::Int => Shape::Simple,
        Type::Pi(BinderForm::Explicit, ..) | Type::All(BinderForm::Explicit, ..) => Shape::Simple,
        Type::Pi(BinderForm::Implicit, ..) => Shape::ImplicitPi,
        Type::All(BinderForm::Implicit, ..) => Shape::ImplicitAll,
        Type::Lam(..) => Shape::Lambda,
        Type::Meta(_) => Shape::Flex,
        Type::App(..) => match ty.spine().0 {
            Type::Lam(..) => Shape::Redex,
            Type::Meta(_) => Shape::Flex,
            _ => {
                if head_step(ty).is_some() {
                    Shape::Redex
                } else {
                    Shape::Simple
                }
            }
        },
    }
}

/// Whether a β-normal type is in the simple class the matching rules target.
pub fn is_simple(ty: &Type) -> bool {
    shape(ty) == Shape::Simple
}
