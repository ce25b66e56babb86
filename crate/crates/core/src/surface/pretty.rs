//! Pretty-printing in the concrete syntax accepted by the parser.
//!
//! Bound variables are printed from their hints, renamed when the hint is
//! already in scope or collides with a free name, so printed output always
//! parses back to an α-equivalent tree.

use std::collections::HashSet;

use super::lexer::KEYWORDS;
use crate::syntax::{BinderForm, Kind, Term, Type, Var};

pub fn pretty_kind(kind: &Kind) -> String {
    match kind {
        Kind::Star => "*".to_string(),
        Kind::Arrow(a, b) => {
            let domain = match **a {
                Kind::Star => pretty_kind(a),
                _ => format!("({})", pretty_kind(a)),
            };
            format!("{} -> {}", domain, pretty_kind(b))
        }
    }
}

pub fn pretty_type(ty: &Type) -> String {
    let mut printer = Printer::default();
    collect_type_names(ty, &mut printer.avoid);
    printer.ty(ty, TyPrec::Top)
}

pub fn pretty_term(term: &Term) -> String {
    let mut printer = Printer::default();
    collect_term_names(term, &mut printer.avoid);
    printer.term(term, TmPrec::Top)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TyPrec {
    Top,
    App,
    Atom,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TmPrec {
    Top,
    /// Subject of an ascription.
    Subject,
    /// Function position of an application.
    Function,
}

#[derive(Default)]
struct Printer {
    /// Free names and keywords that binders must never reuse.
    avoid: HashSet<String>,
    types: Vec<String>,
    terms: Vec<String>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&name)
}

fn collect_type_names(ty: &Type, out: &mut HashSet<String>) {
    match ty {
        Type::Var(Var::Free(_), h) => {
            out.insert(h.to_string());
        }
        Type::Var(Var::Unbound(name), _) => {
            out.insert(name.to_string());
        }
        Type::Var(..) | Type::Int | Type::Meta(_) => {}
        Type::Pi(_, a, b) | Type::App(a, b) => {
            collect_type_names(a, out);
            collect_type_names(b, out);
        }
        Type::All(_, _, _, body) | Type::Lam(_, _, body) => collect_type_names(body, out),
    }
}

fn collect_term_names(term: &Term, out: &mut HashSet<String>) {
    match term {
        Term::Var(Var::Free(_), h) => {
            out.insert(h.to_string());
        }
        Term::Var(Var::Unbound(name), _) => {
            out.insert(name.to_string());
        }
        Term::Var(..) | Term::IntLit(_) => {}
        Term::Abs(_, _, ty, body) => {
            collect_type_names(ty, out);
            collect_term_names(body, out);
        }
        Term::App(_, f, a) => {
            collect_term_names(f, out);
            collect_term_names(a, out);
        }
        Term::TAbs(_, _, _, body) => collect_term_names(body, out),
        Term::TypeApp(_, f, ty) | Term::Asc(f, ty) => {
            collect_term_names(f, out);
            collect_type_names(ty, out);
        }
    }
}

fn open_close(form: BinderForm) -> (&'static str, &'static str) {
    match form {
        BinderForm::Explicit => ("(", ")"),
        BinderForm::Implicit => ("[", "]"),
    }
}

impl Printer {
    fn fresh(&self, hint: &str, fallback: &str) -> String {
        let base = if is_identifier(hint) { hint } else { fallback };
        let taken = |n: &str| {
            self.avoid.contains(n) || self.types.iter().any(|t| t == n) || self.terms.iter().any(|t| t == n)
        };
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{}{}", base, i))
            .find(|candidate| !taken(candidate))
            .unwrap()
    }

    fn type_var(&self, var: &Var, hint: &str) -> String {
        match var {
            Var::Bound(i) => match self.types.len().checked_sub(i + 1) {
                Some(ix) => self.types[ix].clone(),
                None => format!("#{}", i),
            },
            Var::Free(_) => hint.to_string(),
            Var::Unbound(name) => name.to_string(),
        }
    }

    fn term_var(&self, var: &Var, hint: &str) -> String {
        match var {
            Var::Bound(i) => match self.terms.len().checked_sub(i + 1) {
                Some(ix) => self.terms[ix].clone(),
                None => format!("#{}", i),
            },
            Var::Free(_) => hint.to_string(),
            Var::Unbound(name) => name.to_string(),
        }
    }

    fn ty(&mut self, ty: &Type, prec: TyPrec) -> String {
        let (text, own) = match ty {
            Type::Var(v, h) => (self.type_var(v, h.as_str()), TyPrec::Atom),
            Type::Int => ("Int".to_string(), TyPrec::Atom),
            Type::Meta(m) => (format!("?{}", m.0), TyPrec::Atom),
            Type::Pi(form, a, b) => {
                let arrow = match form {
                    BinderForm::Explicit => "->",
                    BinderForm::Implicit => "=>",
                };
                let text = format!("{} {} {}", self.ty(a, TyPrec::App), arrow, self.ty(b, TyPrec::Top));
                (text, TyPrec::Top)
            }
            Type::All(form, h, k, body) => {
                let name = self.fresh(h.as_str(), "a");
                let (open, close) = open_close(*form);
                let binder = match k {
                    Kind::Star => format!("{}{}{}", open, name, close),
                    _ => format!("{}{} : {}{}", open, name, pretty_kind(k), close),
                };
                self.types.push(name);
                let body = self.ty(body, TyPrec::Top);
                self.types.pop();
                (format!("forall {}. {}", binder, body), TyPrec::Top)
            }
            Type::Lam(h, k, body) => {
                let name = self.fresh(h.as_str(), "a");
                let header = format!("\\{} : {}. ", name, pretty_kind(k));
                self.types.push(name);
                let body = self.ty(body, TyPrec::Top);
                self.types.pop();
                (format!("{}{}", header, body), TyPrec::Top)
            }
            Type::App(f, a) => {
                let text = format!("{} {}", self.ty(f, TyPrec::App), self.ty(a, TyPrec::Atom));
                (text, TyPrec::App)
            }
        };
        if own < prec {
            format!("({})", text)
        } else {
            text
        }
    }

    fn term(&mut self, term: &Term, prec: TmPrec) -> String {
        // Binders extend as far right as possible, so they need parentheses
        // anywhere but the top; ascriptions need them in function position.
        let (text, needs_parens) = match term {
            Term::Var(v, h) => (self.term_var(v, h.as_str()), false),
            Term::IntLit(n) => (n.to_string(), false),
            Term::Abs(form, h, ty, body) => {
                let ty = self.ty(ty, TyPrec::Top);
                let name = self.fresh(h.as_str(), "x");
                let (open, close) = open_close(*form);
                self.terms.push(name.clone());
                let body = self.term(body, TmPrec::Top);
                self.terms.pop();
                (format!("\\{}{} : {}{}. {}", open, name, ty, close, body), prec > TmPrec::Top)
            }
            Term::TAbs(form, h, k, body) => {
                let name = self.fresh(h.as_str(), "a");
                let (open, close) = open_close(*form);
                let binder = match k {
                    Kind::Star => format!("{}{}{}", open, name, close),
                    _ => format!("{}{} : {}{}", open, name, pretty_kind(k), close),
                };
                self.types.push(name);
                let body = self.term(body, TmPrec::Top);
                self.types.pop();
                (format!("/\\{}. {}", binder, body), prec > TmPrec::Top)
            }
            Term::App(form, f, a) => {
                let (open, close) = open_close(*form);
                let f = self.term(f, TmPrec::Function);
                let a = self.term(a, TmPrec::Top);
                (format!("{} {}{}{}", f, open, a, close), false)
            }
            Term::TypeApp(form, f, ty) => {
                let (open, close) = open_close(*form);
                let f = self.term(f, TmPrec::Function);
                let ty = self.ty(ty, TyPrec::Top);
                (format!("{} @{}{}{}", f, open, ty, close), false)
            }
            Term::Asc(e, ty) => {
                let e = self.term(e, TmPrec::Subject);
                let ty = self.ty(ty, TyPrec::Top);
                (format!("{} :: {}", e, ty), prec > TmPrec::Subject)
            }
        };
        if needs_parens {
            format!("({})", text)
        } else {
            text
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::BinderForm::*;

    #[test]
    fn type_examples() {
        let summon_ty = Type::all(Implicit, "a", Kind::Star, Type::implies(Type::bound(0, "a"), Type::bound(0, "a")));
        assert_eq!(pretty_type(&summon_ty), "forall [a]. a => a");
        assert_eq!(pretty_type(&Type::arrow(Type::Int, Type::Int)), "Int -> Int");
        let redex = Type::app(Type::lam("a", Kind::Star, Type::bound(0, "a")), Type::Int);
        assert_eq!(pretty_type(&redex), "(\\a : *. a) Int");
    }

    #[test]
    fn term_examples() {
        let summon = Term::tabs(
            Implicit,
            "a",
            Kind::Star,
            Term::abs(Implicit, "x", Type::bound(0, "a"), Term::var(Var::Bound(0), "x")),
        );
        assert_eq!(pretty_term(&summon), "/\\[a]. \\[x : a]. x");
        assert_eq!(pretty_term(&Term::IntLit(7)), "7");
        assert_eq!(pretty_term(&Term::type_app(Explicit, Term::free(0, "f"), Type::Int)), "f @(Int)");
    }

    #[test]
    fn arrows_in_domain_are_parenthesized() {
        let t = Type::arrow(Type::arrow(Type::Int, Type::Int), Type::Int);
        assert_eq!(pretty_type(&t), "(Int -> Int) -> Int");
        let k = Kind::arrow(Kind::arrow(Kind::Star, Kind::Star), Kind::Star);
        assert_eq!(pretty_kind(&k), "(* -> *) -> *");
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        let t = Type::all(
            Explicit,
            "a",
            Kind::Star,
            Type::all(Explicit, "a", Kind::Star, Type::arrow(Type::bound(1, "a"), Type::bound(0, "a"))),
        );
        assert_eq!(pretty_type(&t), "forall (a). forall (a1). a -> a1");
        // a binder must not capture a free variable with the same hint
        let t = Type::all(Explicit, "b", Kind::Star, Type::arrow(Type::free(0, "b"), Type::bound(0, "b")));
        assert_eq!(pretty_type(&t), "forall (b1). b -> b1");
    }

    #[test]
    fn binders_in_function_position_are_parenthesized() {
        let id = Term::abs(Explicit, "x", Type::Int, Term::var(Var::Bound(0), "x"));
        let t = Term::app(Explicit, id.clone(), Term::IntLit(7));
        assert_eq!(pretty_term(&t), "(\\(x : Int). x) (7)");
        let asc = Term::asc(id, Type::arrow(Type::Int, Type::Int));
        assert_eq!(pretty_term(&asc), "(\\(x : Int). x) :: Int -> Int");
    }
}
