//! Abstract syntax for kinds, types, terms and contexts.
//!
//! Binders use a locally nameless representation: variables bound inside a
//! type or term are de Bruijn indices (`Var::Bound`), while variables that
//! refer to a context entry are de Bruijn levels (`Var::Free`). Types and
//! terms keep two independent index spaces: type indices count only type
//! binders (`∀`, type-level `λ`, `Λ`), term indices count only term `λ`s.
//!
//! Source names survive as [`Hint`]s, which never take part in equality.
//! Derived `PartialEq` on [`Type`] and [`Term`] is therefore α-equivalence.

use std::fmt;
use std::rc::Rc;

/// `*` or `k1 -> k2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Star,
    Arrow(Box<Kind>, Box<Kind>),
}

impl Kind {
    pub fn arrow(domain: Kind, codomain: Kind) -> Kind {
        Kind::Arrow(Box::new(domain), Box::new(codomain))
    }
}

/// Round `(·)` or square `[·]` binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinderForm {
    Explicit,
    Implicit,
}

/// A display-only name. All hints compare equal.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub Rc<str>);

impl Hint {
    pub fn new(name: &str) -> Hint {
        Hint(Rc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl std::hash::Hash for Hint {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A variable reference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// De Bruijn index into the enclosing binders of the same namespace.
    Bound(usize),
    /// De Bruijn level into the context entries of the same namespace.
    Free(usize),
    /// A source identifier that did not resolve to any binder.
    Unbound(Rc<str>),
}

/// Unification variable; only ever created by the resolution engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaVar(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Var(Var, Hint),
    /// `Π(τ1).τ2` / `Π[τ1].τ2`, i.e. `τ1 -> τ2` / `τ1 => τ2`.
    Pi(BinderForm, Box<Type>, Box<Type>),
    /// `∀(α:κ).τ` / `∀[α:κ].τ`.
    All(BinderForm, Hint, Kind, Box<Type>),
    /// Type-level `λα:κ.τ`.
    Lam(Hint, Kind, Box<Type>),
    App(Box<Type>, Box<Type>),
    Int,
    Meta(MetaVar),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var, Hint),
    Abs(BinderForm, Hint, Type, Box<Term>),
    App(BinderForm, Box<Term>, Box<Term>),
    TAbs(BinderForm, Hint, Kind, Box<Term>),
    TypeApp(BinderForm, Box<Term>, Type),
    Asc(Box<Term>, Type),
    IntLit(i64),
}

// ---------------------------------------------------------------------------
// Types

impl Type {
    pub fn free(level: usize, name: &str) -> Type {
        Type::Var(Var::Free(level), Hint::new(name))
    }

    pub fn bound(index: usize, name: &str) -> Type {
        Type::Var(Var::Bound(index), Hint::new(name))
    }

    pub fn pi(form: BinderForm, domain: Type, codomain: Type) -> Type {
        Type::Pi(form, Box::new(domain), Box::new(codomain))
    }

    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::pi(BinderForm::Explicit, domain, codomain)
    }

    pub fn implies(domain: Type, codomain: Type) -> Type {
        Type::pi(BinderForm::Implicit, domain, codomain)
    }

    pub fn all(form: BinderForm, name: &str, kind: Kind, body: Type) -> Type {
        Type::All(form, Hint::new(name), kind, Box::new(body))
    }

    pub fn lam(name: &str, kind: Kind, body: Type) -> Type {
        Type::Lam(Hint::new(name), kind, Box::new(body))
    }

    pub fn app(operator: Type, operand: Type) -> Type {
        Type::App(Box::new(operator), Box::new(operand))
    }

    /// Rebuilds the type, replacing every variable through `on_var`, which
    /// receives the number of type binders crossed so far.
    fn map_vars(&self, depth: usize, on_var: &dyn Fn(usize, &Var, &Hint) -> Type) -> Type {
        match self {
            Type::Var(v, h) => on_var(depth, v, h),
            Type::Pi(form, a, b) => Type::Pi(
                *form,
                Box::new(a.map_vars(depth, on_var)),
                Box::new(b.map_vars(depth, on_var)),
            ),
            Type::All(form, h, k, body) => Type::All(
                *form,
                h.clone(),
                k.clone(),
                Box::new(body.map_vars(depth + 1, on_var)),
            ),
            Type::Lam(h, k, body) => {
                Type::Lam(h.clone(), k.clone(), Box::new(body.map_vars(depth + 1, on_var)))
            }
            Type::App(f, a) => Type::App(
                Box::new(f.map_vars(depth, on_var)),
                Box::new(a.map_vars(depth, on_var)),
            ),
            Type::Int => Type::Int,
            Type::Meta(m) => Type::Meta(*m),
        }
    }

    /// Adds `amount` to every bound index at or above `cutoff`.
    pub fn shift(&self, amount: usize, cutoff: usize) -> Type {
        if amount == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|depth, v, h| match v {
            Var::Bound(i) if *i >= depth => Type::Var(Var::Bound(i + amount), h.clone()),
            _ => Type::Var(v.clone(), h.clone()),
        })
    }

    /// Replaces the outermost loose bound variable (index 0) of a binder body.
    pub fn instantiate(&self, replacement: &Type) -> Type {
        self.map_vars(0, &|depth, v, h| match v {
            Var::Bound(i) if *i == depth => replacement.shift(depth, 0),
            Var::Bound(i) if *i > depth => Type::Var(Var::Bound(i - 1), h.clone()),
            _ => Type::Var(v.clone(), h.clone()),
        })
    }

    /// Opens a binder body with the context variable at `level`.
    pub fn open(&self, level: usize, name: &Hint) -> Type {
        self.instantiate(&Type::Var(Var::Free(level), name.clone()))
    }

    /// Inverse of [`Type::open`]: abstracts the context variable at `level`
    /// into a loose bound index 0.
    pub fn close(&self, level: usize) -> Type {
        self.map_vars(0, &|depth, v, h| match v {
            Var::Free(l) if *l == level => Type::Var(Var::Bound(depth), h.clone()),
            Var::Bound(i) if *i >= depth => Type::Var(Var::Bound(i + 1), h.clone()),
            _ => Type::Var(v.clone(), h.clone()),
        })
    }

    /// Whether a bound variable with index `>= depth` (relative to the root)
    /// occurs, i.e. whether the type is not locally closed at that depth.
    pub fn has_loose_bound(&self, depth: usize) -> bool {
        match self {
            Type::Var(Var::Bound(i), _) => *i >= depth,
            Type::Var(..) | Type::Int | Type::Meta(_) => false,
            Type::Pi(_, a, b) | Type::App(a, b) => {
                a.has_loose_bound(depth) || b.has_loose_bound(depth)
            }
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => body.has_loose_bound(depth + 1),
        }
    }

    pub fn mentions_free(&self, level: usize) -> bool {
        match self {
            Type::Var(Var::Free(l), _) => *l == level,
            Type::Var(..) | Type::Int | Type::Meta(_) => false,
            Type::Pi(_, a, b) | Type::App(a, b) => a.mentions_free(level) || b.mentions_free(level),
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => body.mentions_free(level),
        }
    }

    pub fn contains_meta(&self) -> bool {
        match self {
            Type::Meta(_) => true,
            Type::Var(..) | Type::Int => false,
            Type::Pi(_, a, b) | Type::App(a, b) => a.contains_meta() || b.contains_meta(),
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => body.contains_meta(),
        }
    }

    /// Head and arguments of an application spine, `h a1 .. an`.
    pub fn spine(&self) -> (&Type, Vec<&Type>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Type::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Rewrites every implicit `Π`/`∀` into its explicit counterpart.
    pub fn erase(&self) -> Type {
        match self {
            Type::Var(..) | Type::Int | Type::Meta(_) => self.clone(),
            Type::Pi(_, a, b) => Type::pi(BinderForm::Explicit, a.erase(), b.erase()),
            Type::All(_, h, k, body) => {
                Type::All(BinderForm::Explicit, h.clone(), k.clone(), Box::new(body.erase()))
            }
            Type::Lam(h, k, body) => Type::Lam(h.clone(), k.clone(), Box::new(body.erase())),
            Type::App(f, a) => Type::app(f.erase(), a.erase()),
        }
    }

    pub fn has_implicit_form(&self) -> bool {
        match self {
            Type::Var(..) | Type::Int | Type::Meta(_) => false,
            Type::Pi(form, a, b) => {
                *form == BinderForm::Implicit || a.has_implicit_form() || b.has_implicit_form()
            }
            Type::All(form, _, _, body) => {
                *form == BinderForm::Implicit || body.has_implicit_form()
            }
            Type::Lam(_, _, body) => body.has_implicit_form(),
            Type::App(f, a) => f.has_implicit_form() || a.has_implicit_form(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(..) | Type::Int | Type::Meta(_) => 1,
            Type::Pi(_, a, b) | Type::App(a, b) => 1 + a.size() + b.size(),
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => 1 + body.size(),
        }
    }
}

/// `[α ↦ replacement] body`, where `body` is the body of a type binder.
pub fn subst_type_in_type(body: &Type, replacement: &Type) -> Type {
    body.instantiate(replacement)
}

/// `[α ↦ replacement] body`, where `body` is the body of a `Λ`.
pub fn subst_type_in_term(body: &Term, replacement: &Type) -> Term {
    body.instantiate_type(replacement)
}

pub fn alpha_eq_type(a: &Type, b: &Type) -> bool {
    a == b
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    a == b
}

// ---------------------------------------------------------------------------
// Terms

impl Term {
    pub fn var(var: Var, name: &str) -> Term {
        Term::Var(var, Hint::new(name))
    }

    pub fn free(level: usize, name: &str) -> Term {
        Term::var(Var::Free(level), name)
    }

    pub fn abs(form: BinderForm, name: &str, annotation: Type, body: Term) -> Term {
        Term::Abs(form, Hint::new(name), annotation, Box::new(body))
    }

    pub fn app(form: BinderForm, function: Term, argument: Term) -> Term {
        Term::App(form, Box::new(function), Box::new(argument))
    }

    pub fn tabs(form: BinderForm, name: &str, kind: Kind, body: Term) -> Term {
        Term::TAbs(form, Hint::new(name), kind, Box::new(body))
    }

    pub fn type_app(form: BinderForm, function: Term, argument: Type) -> Term {
        Term::TypeApp(form, Box::new(function), argument)
    }

    pub fn asc(subject: Term, target: Type) -> Term {
        Term::Asc(Box::new(subject), target)
    }

    /// Rebuilds the term; `on_var` sees term variables with the number of
    /// term binders crossed, `on_type` sees embedded types with the number of
    /// type binders crossed.
    fn map(
        &self,
        term_depth: usize,
        type_depth: usize,
        on_var: &dyn Fn(usize, &Var, &Hint) -> Term,
        on_type: &dyn Fn(usize, &Type) -> Type,
    ) -> Term {
        match self {
            Term::Var(v, h) => on_var(term_depth, v, h),
            Term::Abs(form, h, ty, body) => Term::Abs(
                *form,
                h.clone(),
                on_type(type_depth, ty),
                Box::new(body.map(term_depth + 1, type_depth, on_var, on_type)),
            ),
            Term::App(form, f, a) => Term::App(
                *form,
                Box::new(f.map(term_depth, type_depth, on_var, on_type)),
                Box::new(a.map(term_depth, type_depth, on_var, on_type)),
            ),
            Term::TAbs(form, h, k, body) => Term::TAbs(
                *form,
                h.clone(),
                k.clone(),
                Box::new(body.map(term_depth, type_depth + 1, on_var, on_type)),
            ),
            Term::TypeApp(form, f, ty) => Term::TypeApp(
                *form,
                Box::new(f.map(term_depth, type_depth, on_var, on_type)),
                on_type(type_depth, ty),
            ),
            Term::Asc(e, ty) => Term::Asc(
                Box::new(e.map(term_depth, type_depth, on_var, on_type)),
                on_type(type_depth, ty),
            ),
            Term::IntLit(n) => Term::IntLit(*n),
        }
    }

    fn map_types(&self, on_type: &dyn Fn(usize, &Type) -> Type) -> Term {
        self.map(0, 0, &|_, v, h| Term::Var(v.clone(), h.clone()), on_type)
    }

    /// Opens a `λ` body with the term context variable at `level`.
    pub fn open_term(&self, level: usize, name: &Hint) -> Term {
        self.map(
            0,
            0,
            &|depth, v, h| match v {
                Var::Bound(i) if *i == depth => Term::Var(Var::Free(level), name.clone()),
                Var::Bound(i) if *i > depth => Term::Var(Var::Bound(i - 1), h.clone()),
                _ => Term::Var(v.clone(), h.clone()),
            },
            &|_, ty| ty.clone(),
        )
    }

    /// Abstracts the term context variable at `level` into bound index 0.
    pub fn close_term(&self, level: usize) -> Term {
        self.map(
            0,
            0,
            &|depth, v, h| match v {
                Var::Free(l) if *l == level => Term::Var(Var::Bound(depth), h.clone()),
                Var::Bound(i) if *i >= depth => Term::Var(Var::Bound(i + 1), h.clone()),
                _ => Term::Var(v.clone(), h.clone()),
            },
            &|_, ty| ty.clone(),
        )
    }

    /// Replaces the type variable bound by an enclosing `Λ`.
    pub fn instantiate_type(&self, replacement: &Type) -> Term {
        self.map_types(&|depth, ty| {
            ty.map_vars(depth, &|d, v, h| match v {
                Var::Bound(i) if *i == d => replacement.shift(d, 0),
                Var::Bound(i) if *i > d => Type::Var(Var::Bound(i - 1), h.clone()),
                _ => Type::Var(v.clone(), h.clone()),
            })
        })
    }

    /// Opens a `Λ` body with the type context variable at `level`.
    pub fn open_type(&self, level: usize, name: &Hint) -> Term {
        self.instantiate_type(&Type::Var(Var::Free(level), name.clone()))
    }

    /// Abstracts the type context variable at `level` into bound index 0.
    pub fn close_type(&self, level: usize) -> Term {
        self.map_types(&|depth, ty| {
            ty.map_vars(depth, &|d, v, h| match v {
                Var::Free(l) if *l == level => Type::Var(Var::Bound(d), h.clone()),
                Var::Bound(i) if *i >= d => Type::Var(Var::Bound(i + 1), h.clone()),
                _ => Type::Var(v.clone(), h.clone()),
            })
        })
    }

    /// Substitutes a locally closed term for the free term variable `level`.
    pub fn replace_free(&self, level: usize, replacement: &Term) -> Term {
        self.map(
            0,
            0,
            &|_, v, h| match v {
                Var::Free(l) if *l == level => replacement.clone(),
                _ => Term::Var(v.clone(), h.clone()),
            },
            &|_, ty| ty.clone(),
        )
    }

    /// Rewrites every binder form to explicit and erases embedded types.
    /// Ascriptions are left in place.
    pub fn erase_forms(&self) -> Term {
        match self {
            Term::Var(..) | Term::IntLit(_) => self.clone(),
            Term::Abs(_, h, ty, body) => {
                Term::Abs(BinderForm::Explicit, h.clone(), ty.erase(), Box::new(body.erase_forms()))
            }
            Term::App(_, f, a) => Term::app(BinderForm::Explicit, f.erase_forms(), a.erase_forms()),
            Term::TAbs(_, h, k, body) => {
                Term::TAbs(BinderForm::Explicit, h.clone(), k.clone(), Box::new(body.erase_forms()))
            }
            Term::TypeApp(_, f, ty) => {
                Term::type_app(BinderForm::Explicit, f.erase_forms(), ty.erase())
            }
            Term::Asc(e, ty) => Term::asc(e.erase_forms(), ty.erase()),
        }
    }

    /// Node count where each variable, literal, abstraction, application and
    /// type abstraction counts one, and a type argument counts one regardless
    /// of its size. Annotations on binders are not counted.
    pub fn measure(&self) -> usize {
        match self {
            Term::Var(..) | Term::IntLit(_) => 1,
            Term::Abs(_, _, _, body) | Term::TAbs(_, _, _, body) => 1 + body.measure(),
            Term::App(_, f, a) => 1 + f.measure() + a.measure(),
            Term::TypeApp(_, f, _) => 2 + f.measure(),
            Term::Asc(e, _) => 1 + e.measure(),
        }
    }

    pub fn is_explicit_core(&self) -> bool {
        match self {
            Term::Var(..) | Term::IntLit(_) => true,
            Term::Abs(form, _, ty, body) => {
                *form == BinderForm::Explicit && !ty.has_implicit_form() && body.is_explicit_core()
            }
            Term::App(form, f, a) => {
                *form == BinderForm::Explicit && f.is_explicit_core() && a.is_explicit_core()
            }
            Term::TAbs(form, _, _, body) => *form == BinderForm::Explicit && body.is_explicit_core(),
            Term::TypeApp(form, f, ty) => {
                *form == BinderForm::Explicit && !ty.has_implicit_form() && f.is_explicit_core()
            }
            Term::Asc(..) => false,
        }
    }

    pub fn count_ascriptions(&self) -> usize {
        match self {
            Term::Var(..) | Term::IntLit(_) => 0,
            Term::Abs(_, _, _, b) | Term::TAbs(_, _, _, b) | Term::TypeApp(_, b, _) => {
                b.count_ascriptions()
            }
            Term::App(_, f, a) => f.count_ascriptions() + a.count_ascriptions(),
            Term::Asc(e, _) => 1 + e.count_ascriptions(),
        }
    }
}

// ---------------------------------------------------------------------------
// Contexts

#[derive(Clone, Debug, PartialEq)]
pub struct TypeEntry {
    pub form: BinderForm,
    pub name: Rc<str>,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermEntry {
    pub form: BinderForm,
    pub name: Rc<str>,
    pub ty: Type,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Type(TypeEntry),
    Term(TermEntry),
}

/// An ordered telescope of type and term bindings.
///
/// Types stored in term entries refer to earlier type entries by level, so
/// entries never need shifting when the context grows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<Entry>,
    types: Vec<usize>,
    terms: Vec<usize>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn type_len(&self) -> usize {
        self.types.len()
    }

    pub fn term_len(&self) -> usize {
        self.terms.len()
    }

    /// Pushes a type binding and returns its level.
    pub fn push_type(&mut self, form: BinderForm, name: &str, kind: Kind) -> usize {
        let level = self.types.len();
        self.types.push(self.entries.len());
        self.entries.push(Entry::Type(TypeEntry { form, name: Rc::from(name), kind }));
        level
    }

    /// Pushes a term binding and returns its level.
    pub fn push_term(&mut self, form: BinderForm, name: &str, ty: Type) -> usize {
        let level = self.terms.len();
        self.terms.push(self.entries.len());
        self.entries.push(Entry::Term(TermEntry { form, name: Rc::from(name), ty }));
        level
    }

    pub fn pop(&mut self) -> Option<Entry> {
        let entry = self.entries.pop()?;
        match entry {
            Entry::Type(_) => self.types.pop(),
            Entry::Term(_) => self.terms.pop(),
        };
        Some(entry)
    }

    pub fn type_entry(&self, level: usize) -> Option<&TypeEntry> {
        match self.entries.get(*self.types.get(level)?) {
            Some(Entry::Type(entry)) => Some(entry),
            _ => None,
        }
    }

    pub fn term_entry(&self, level: usize) -> Option<&TermEntry> {
        match self.entries.get(*self.terms.get(level)?) {
            Some(Entry::Term(entry)) => Some(entry),
            _ => None,
        }
    }

    /// Innermost type binding with this name.
    pub fn lookup_type(&self, name: &str) -> Option<usize> {
        (0..self.types.len()).rev().find(|&l| &*self.type_entry(l).unwrap().name == name)
    }

    /// Innermost term binding with this name.
    pub fn lookup_term(&self, name: &str) -> Option<usize> {
        (0..self.terms.len()).rev().find(|&l| &*self.term_entry(l).unwrap().name == name)
    }

    /// Every implicit term binding, shadowed or not, outermost first.
    pub fn implicit_terms(&self) -> impl Iterator<Item = (usize, &TermEntry)> {
        (0..self.terms.len())
            .map(move |l| (l, self.term_entry(l).unwrap()))
            .filter(|(_, e)| e.form == BinderForm::Implicit)
    }

    /// Kinds of all type entries, indexed by level.
    pub fn type_kinds(&self) -> Vec<Kind> {
        (0..self.types.len()).map(|l| self.type_entry(l).unwrap().kind.clone()).collect()
    }

    /// The same telescope with every entry made explicit and every type erased.
    pub fn erase(&self) -> Context {
        let mut out = Context::new();
        for entry in &self.entries {
            match entry {
                Entry::Type(e) => {
                    out.push_type(BinderForm::Explicit, &e.name, e.kind.clone());
                }
                Entry::Term(e) => {
                    out.push_term(BinderForm::Explicit, &e.name, e.ty.erase());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BinderForm::*;

    fn a() -> Type {
        Type::bound(0, "a")
    }

    #[test]
    fn subst_replaces_bound_variable() {
        let body = Type::arrow(a(), a());
        assert_eq!(subst_type_in_type(&body, &Type::Int), Type::arrow(Type::Int, Type::Int));
    }

    #[test]
    fn subst_leaves_other_variables() {
        let beta = Type::free(0, "b");
        assert_eq!(subst_type_in_type(&beta, &Type::Int), beta);
    }

    #[test]
    fn subst_does_not_capture() {
        // body of λα: ∀(β:∗).α, replacement the free variable β
        let body = Type::all(Explicit, "b", Kind::Star, Type::bound(1, "a"));
        let beta = Type::free(0, "b");
        let out = subst_type_in_type(&body, &beta);
        assert_eq!(out, Type::all(Explicit, "c", Kind::Star, beta.clone()));
        match out {
            Type::All(_, _, _, inner) => assert_eq!(*inner, Type::Var(Var::Free(0), Hint::new("b"))),
            _ => unreachable!(),
        }
    }

    #[test]
    fn subst_in_term_reaches_annotations_and_arguments() {
        let body = Term::abs(Explicit, "x", a(), Term::var(Var::Bound(0), "x"));
        assert_eq!(
            subst_type_in_term(&body, &Type::Int),
            Term::abs(Explicit, "x", Type::Int, Term::var(Var::Bound(0), "x"))
        );
        let x = Term::free(0, "x");
        assert_eq!(subst_type_in_term(&x, &Type::Int), x);
        let list_int = Type::app(Type::free(0, "L"), Type::Int);
        let e = Term::type_app(Explicit, Term::free(0, "e"), a());
        assert_eq!(
            subst_type_in_term(&e, &list_int),
            Term::type_app(Explicit, Term::free(0, "e"), list_int.clone())
        );
    }

    #[test]
    fn alpha_equivalence_examples() {
        let id_a = Type::all(Implicit, "a", Kind::Star, Type::implies(a(), a()));
        let id_b = Type::all(Implicit, "b", Kind::Star, Type::implies(Type::bound(0, "b"), Type::bound(0, "b")));
        assert!(alpha_eq_type(&id_a, &id_b));
        let explicit = Type::all(Implicit, "a", Kind::Star, Type::arrow(a(), a()));
        assert!(!alpha_eq_type(&id_a, &explicit));
        assert!(alpha_eq_type(&Type::lam("a", Kind::Star, a()), &Type::lam("b", Kind::Star, Type::bound(0, "b"))));

        let lx = Term::abs(Implicit, "x", Type::Int, Term::var(Var::Bound(0), "x"));
        let ly = Term::abs(Implicit, "y", Type::Int, Term::var(Var::Bound(0), "y"));
        assert!(alpha_eq_term(&lx, &ly));
        assert!(!alpha_eq_term(&Term::free(0, "x"), &Term::free(1, "y")));
        let summon = |n: &str, m: &str| {
            Term::tabs(Implicit, n, Kind::Star, Term::abs(Implicit, m, Type::bound(0, n), Term::var(Var::Bound(0), m)))
        };
        assert!(alpha_eq_term(&summon("a", "x"), &summon("b", "z")));
    }

    #[test]
    fn unbound_names_compare_by_name() {
        let x = Term::var(Var::Unbound("x".into()), "x");
        let y = Term::var(Var::Unbound("y".into()), "y");
        assert!(!alpha_eq_term(&x, &y));
    }

    #[test]
    fn open_close_round_trip() {
        let body = Type::arrow(a(), Type::all(Explicit, "b", Kind::Star, Type::bound(1, "a")));
        let opened = body.open(3, &Hint::new("a"));
        assert!(!opened.has_loose_bound(0));
        assert_eq!(opened.close(3), body);
    }

    #[test]
    fn context_levels_and_shadowing() {
        let mut ctx = Context::new();
        let s = ctx.push_type(Explicit, "S", Kind::arrow(Kind::Star, Kind::Star));
        let x0 = ctx.push_term(Implicit, "x", Type::app(Type::free(s, "S"), Type::Int));
        let x1 = ctx.push_term(Implicit, "x", Type::Int);
        assert_eq!(ctx.lookup_term("x"), Some(x1));
        assert_eq!(ctx.implicit_terms().map(|(l, _)| l).collect::<Vec<_>>(), vec![x0, x1]);
        ctx.pop();
        assert_eq!(ctx.lookup_term("x"), Some(x0));
        assert_eq!(ctx.type_len(), 1);
    }

    #[test]
    fn measure_counts_type_arguments_once() {
        // subject @(Int) (y)
        let w = Term::app(
            Explicit,
            Term::type_app(Explicit, Term::free(1, "e"), Type::arrow(Type::Int, Type::Int)),
            Term::free(0, "y"),
        );
        assert_eq!(w.measure(), 5);
    }
}
