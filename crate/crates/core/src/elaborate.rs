//! Elaboration of checked programs into plain F-omega.

use std::fmt;

use crate::resolution::elaborate_witness;
use crate::surface::pretty::pretty_term;
use crate::syntax::{BinderForm, Term};
use crate::typing::TypedTerm;

/// A term with explicit binder forms only and no ascriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreTerm(Term);

impl CoreTerm {
    /// Accepts `term` only if it lies in the explicit fragment.
    pub fn new(term: Term) -> Option<CoreTerm> {
        term.is_explicit_core().then_some(CoreTerm(term))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }
}

impl fmt::Display for CoreTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_term(&self.0))
    }
}

/// Replaces every ascription by the elaboration of its recorded witness and
/// rewrites implicit forms to explicit ones.
pub fn elaborate_unit(typed: &TypedTerm) -> CoreTerm {
    let mut elaborator = Elaborator {
        typed,
        terms: typed.context.term_len(),
        types: typed.context.type_len(),
        asc: 0,
    };
    let term = elaborator.go(&typed.term);
    CoreTerm::new(term).expect("elaboration yields explicit terms")
}

struct Elaborator<'t> {
    typed: &'t TypedTerm,
    terms: usize,
    types: usize,
    asc: usize,
}

impl Elaborator<'_> {
    fn go(&mut self, term: &Term) -> Term {
        let explicit = BinderForm::Explicit;
        match term {
            Term::Var(..) | Term::IntLit(_) => term.clone(),
            Term::Abs(_, h, ty, body) => {
                let level = self.terms;
                self.terms += 1;
                let body = self.go(&body.open_term(level, h)).close_term(level);
                self.terms -= 1;
                Term::Abs(explicit, h.clone(), ty.erase(), Box::new(body))
            }
            Term::TAbs(_, h, kind, body) => {
                let level = self.types;
                self.types += 1;
                let body = self.go(&body.open_type(level, h)).close_type(level);
                self.types -= 1;
                Term::TAbs(explicit, h.clone(), kind.clone(), Box::new(body))
            }
            Term::App(_, f, a) => Term::app(explicit, self.go(f), self.go(a)),
            Term::TypeApp(_, f, ty) => Term::type_app(explicit, self.go(f), ty.erase()),
            Term::Asc(subject, _) => {
                let id = self.asc;
                self.asc += 1;
                let subject = self.go(subject);
                let witness = &self.typed.resolutions[&id];
                elaborate_witness(&witness.derivation, subject)
            }
        }
    }
}
