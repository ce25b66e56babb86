//! Recursive-descent parser for kinds, types, terms and context files.
//!
//! Names are resolved while parsing: locally bound names become de Bruijn
//! indices, names found in the supplied context become levels, and anything
//! else is kept as `Var::Unbound` for the checker to report.

use super::diagnostic::{Code, Diagnostic, Span};
use super::lexer::{lex, Tok, Token};
use crate::syntax::{BinderForm, Context, Hint, Kind, Term, Type, Var};

/// A parsed source file.
#[derive(Clone, Debug)]
pub struct SourceUnit {
    pub path: String,
    pub body: Term,
    /// Source range of every term node, in pre-order of `body`.
    pub spans: Vec<Span>,
}

impl SourceUnit {
    pub fn span_of(&self, node: usize) -> Option<Span> {
        self.spans.get(node).copied()
    }
}

/// Span of one term node together with the spans of its children, in the
/// child order used by pre-order traversal.
struct SpanTree {
    span: Span,
    children: Vec<SpanTree>,
}

impl SpanTree {
    fn leaf(span: Span) -> SpanTree {
        SpanTree { span, children: Vec::new() }
    }

    fn flatten(self, out: &mut Vec<Span>) {
        out.push(self.span);
        for child in self.children {
            child.flatten(out);
        }
    }
}

pub fn parse_unit(text: &str, path: &str) -> Result<SourceUnit, Diagnostic> {
    let ctx = Context::new();
    let tokens = lex(text, false)?;
    let mut parser = Parser::new(&tokens, &ctx);
    let (body, tree) = parser.expr()?;
    parser.expect_end()?;
    let mut spans = Vec::new();
    tree.flatten(&mut spans);
    Ok(SourceUnit { path: path.to_string(), body, spans })
}

pub fn parse_term(text: &str, ctx: &Context) -> Result<Term, Diagnostic> {
    let tokens = lex(text, false)?;
    let mut parser = Parser::new(&tokens, ctx);
    let (term, _) = parser.expr()?;
    parser.expect_end()?;
    Ok(term)
}

pub fn parse_type(text: &str, ctx: &Context) -> Result<Type, Diagnostic> {
    let tokens = lex(text, false)?;
    let mut parser = Parser::new(&tokens, ctx);
    let ty = parser.ty()?;
    parser.expect_end()?;
    Ok(ty)
}

pub fn parse_kind(text: &str) -> Result<Kind, Diagnostic> {
    let ctx = Context::new();
    let tokens = lex(text, false)?;
    let mut parser = Parser::new(&tokens, &ctx);
    let kind = parser.kind()?;
    parser.expect_end()?;
    Ok(kind)
}

/// Parses a sequence of binding declarations such as
/// `(S : * -> *)` and `[si : S Int]`, separated by newlines or commas.
pub fn parse_context(text: &str) -> Result<Context, Diagnostic> {
    let mut ctx = Context::new();
    let tokens = lex(text, true)?;
    let mut pos = 0;
    loop {
        while matches!(tokens[pos].tok, Tok::Newline | Tok::Comma) {
            pos += 1;
        }
        if tokens[pos].tok == Tok::Eof {
            return Ok(ctx);
        }
        let mut parser = Parser::new(&tokens, &ctx);
        parser.pos = pos;
        let (form, name) = parser.binder_open()?;
        parser.expect(Tok::Colon)?;
        let entry = if let Some(kind) = parser.try_kind_then_close(form) {
            Err(kind)
        } else {
            let ty = parser.ty()?;
            parser.close(form)?;
            Ok(ty)
        };
        pos = parser.pos;
        match entry {
            Err(kind) => {
                ctx.push_type(form, &name, kind);
            }
            Ok(ty) => {
                ctx.push_term(form, &name, ty);
            }
        }
        match tokens[pos].tok {
            Tok::Newline | Tok::Comma | Tok::Eof => {}
            _ => return Err(unexpected(&tokens[pos], "a separator between declarations")),
        }
    }
}

fn unexpected(token: &Token, expected: &str) -> Diagnostic {
    Diagnostic::error(
        Code::E001,
        format!("expected {}, found {}", expected, token.tok.describe()),
    )
    .with_span(token.span)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    base: &'a Context,
    /// Locally bound type names, innermost last.
    types: Vec<String>,
    /// Locally bound term names, innermost last.
    terms: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], base: &'a Context) -> Parser<'a> {
        Parser { tokens, pos: 0, base, types: Vec::new(), terms: Vec::new() }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn token(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let token = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if *self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(unexpected(self.token(), &tok.describe()))
        }
    }

    fn expect_end(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(unexpected(self.token(), "end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(unexpected(self.token(), "an identifier")),
        }
    }

    /// `(` or `[` followed by a name.
    fn binder_open(&mut self) -> Result<(BinderForm, String), Diagnostic> {
        let form = match self.peek() {
            Tok::LParen => BinderForm::Explicit,
            Tok::LBracket => BinderForm::Implicit,
            _ => return Err(unexpected(self.token(), "`(` or `[`")),
        };
        self.bump();
        Ok((form, self.ident()?))
    }

    fn close(&mut self, form: BinderForm) -> Result<Span, Diagnostic> {
        match form {
            BinderForm::Explicit => self.expect(Tok::RParen),
            BinderForm::Implicit => self.expect(Tok::RBracket),
        }
    }

    /// After `(a :` in a context file: a kind followed by the closing
    /// bracket makes this a type binding.
    fn try_kind_then_close(&mut self, form: BinderForm) -> Option<Kind> {
        let after_colon = self.pos;
        if let Ok(kind) = self.kind() {
            if self.close(form).is_ok() {
                return Some(kind);
            }
        }
        self.pos = after_colon;
        None
    }

    // -- kinds --------------------------------------------------------------

    fn kind(&mut self) -> Result<Kind, Diagnostic> {
        let domain = match self.peek() {
            Tok::Star => {
                self.bump();
                Kind::Star
            }
            Tok::LParen => {
                self.bump();
                let k = self.kind()?;
                self.expect(Tok::RParen)?;
                k
            }
            _ => return Err(unexpected(self.token(), "a kind")),
        };
        if self.eat(Tok::Arrow) {
            Ok(Kind::arrow(domain, self.kind()?))
        } else {
            Ok(domain)
        }
    }

    // -- types --------------------------------------------------------------

    fn ty(&mut self) -> Result<Type, Diagnostic> {
        match self.peek() {
            Tok::Forall => {
                self.bump();
                let (form, name) = self.binder_open()?;
                let kind = if self.eat(Tok::Colon) { self.kind()? } else { Kind::Star };
                self.close(form)?;
                self.expect(Tok::Dot)?;
                self.types.push(name.clone());
                let body = self.ty();
                self.types.pop();
                Ok(Type::All(form, Hint::new(&name), kind, Box::new(body?)))
            }
            Tok::Lambda => {
                self.bump();
                let name = self.ident()?;
                let kind = if self.eat(Tok::Colon) { self.kind()? } else { Kind::Star };
                self.expect(Tok::Dot)?;
                self.types.push(name.clone());
                let body = self.ty();
                self.types.pop();
                Ok(Type::Lam(Hint::new(&name), kind, Box::new(body?)))
            }
            _ => {
                let domain = self.app_ty()?;
                match self.peek() {
                    Tok::Arrow => {
                        self.bump();
                        Ok(Type::arrow(domain, self.ty()?))
                    }
                    Tok::FatArrow => {
                        self.bump();
                        Ok(Type::implies(domain, self.ty()?))
                    }
                    _ => Ok(domain),
                }
            }
        }
    }

    fn starts_atom_ty(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::IntType | Tok::LParen)
    }

    fn app_ty(&mut self) -> Result<Type, Diagnostic> {
        let mut ty = self.atom_ty()?;
        while self.starts_atom_ty() {
            ty = Type::app(ty, self.atom_ty()?);
        }
        Ok(ty)
    }

    fn atom_ty(&mut self) -> Result<Type, Diagnostic> {
        match self.peek().clone() {
            Tok::IntType => {
                self.bump();
                Ok(Type::Int)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(self.resolve_type(&name))
            }
            Tok::LParen => {
                self.bump();
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            _ => Err(unexpected(self.token(), "a type")),
        }
    }

    fn resolve_type(&self, name: &str) -> Type {
        let hint = Hint::new(name);
        if let Some(i) = self.types.iter().rev().position(|n| n == name) {
            return Type::Var(Var::Bound(i), hint);
        }
        match self.base.lookup_type(name) {
            Some(level) => Type::Var(Var::Free(level), hint),
            None => Type::Var(Var::Unbound(name.into()), hint),
        }
    }

    fn resolve_term(&self, name: &str) -> Term {
        let hint = Hint::new(name);
        if let Some(i) = self.terms.iter().rev().position(|n| n == name) {
            return Term::Var(Var::Bound(i), hint);
        }
        match self.base.lookup_term(name) {
            Some(level) => Term::Var(Var::Free(level), hint),
            None => Term::Var(Var::Unbound(name.into()), hint),
        }
    }

    // -- terms --------------------------------------------------------------

    fn expr(&mut self) -> Result<(Term, SpanTree), Diagnostic> {
        let start = self.token().span;
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let (form, name) = self.binder_open()?;
                self.expect(Tok::Colon)?;
                let annotation = self.ty()?;
                self.close(form)?;
                self.expect(Tok::Dot)?;
                self.terms.push(name.clone());
                let body = self.expr();
                self.terms.pop();
                let (body, body_tree) = body?;
                let span = start.join(self.prev_span());
                Ok((
                    Term::Abs(form, Hint::new(&name), annotation, Box::new(body)),
                    SpanTree { span, children: vec![body_tree] },
                ))
            }
            Tok::BigLambda => {
                self.bump();
                let (form, name) = self.binder_open()?;
                let kind = if self.eat(Tok::Colon) { self.kind()? } else { Kind::Star };
                self.close(form)?;
                self.expect(Tok::Dot)?;
                self.types.push(name.clone());
                let body = self.expr();
                self.types.pop();
                let (body, body_tree) = body?;
                let span = start.join(self.prev_span());
                Ok((
                    Term::TAbs(form, Hint::new(&name), kind, Box::new(body)),
                    SpanTree { span, children: vec![body_tree] },
                ))
            }
            Tok::Let => {
                // let ⟨x:T⟩ = e1 in e2  :=  (λ⟨x:T⟩. e2) ⟨e1⟩
                self.bump();
                let (form, name) = self.binder_open()?;
                self.expect(Tok::Colon)?;
                let annotation = self.ty()?;
                self.close(form)?;
                self.expect(Tok::Equals)?;
                let (bound, bound_tree) = self.expr()?;
                self.expect(Tok::In)?;
                self.terms.push(name.clone());
                let body = self.expr();
                self.terms.pop();
                let (body, body_tree) = body?;
                let span = start.join(self.prev_span());
                let abs = Term::Abs(form, Hint::new(&name), annotation, Box::new(body));
                let abs_tree = SpanTree { span, children: vec![body_tree] };
                Ok((
                    Term::App(form, Box::new(abs), Box::new(bound)),
                    SpanTree { span, children: vec![abs_tree, bound_tree] },
                ))
            }
            _ => {
                let (mut term, mut tree) = self.app_expr()?;
                while self.eat(Tok::DoubleColon) {
                    let target = self.ty()?;
                    let span = start.join(self.prev_span());
                    term = Term::Asc(Box::new(term), target);
                    tree = SpanTree { span, children: vec![tree] };
                }
                Ok((term, tree))
            }
        }
    }

    fn app_expr(&mut self) -> Result<(Term, SpanTree), Diagnostic> {
        let start = self.token().span;
        let (mut term, mut tree) = self.atom_expr()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                    let (arg, arg_tree) = self.atom_expr()?;
                    let span = start.join(self.prev_span());
                    term = Term::app(BinderForm::Explicit, term, arg);
                    tree = SpanTree { span, children: vec![tree, arg_tree] };
                }
                Tok::LBracket => {
                    self.bump();
                    let (arg, arg_tree) = self.expr()?;
                    self.expect(Tok::RBracket)?;
                    let span = start.join(self.prev_span());
                    term = Term::app(BinderForm::Implicit, term, arg);
                    tree = SpanTree { span, children: vec![tree, arg_tree] };
                }
                Tok::At => {
                    self.bump();
                    let form = match self.peek() {
                        Tok::LParen => BinderForm::Explicit,
                        Tok::LBracket => BinderForm::Implicit,
                        _ => return Err(unexpected(self.token(), "`(` or `[` after `@`")),
                    };
                    self.bump();
                    let arg = self.ty()?;
                    self.close(form)?;
                    let span = start.join(self.prev_span());
                    term = Term::type_app(form, term, arg);
                    tree = SpanTree { span, children: vec![tree] };
                }
                _ => return Ok((term, tree)),
            }
        }
    }

    fn atom_expr(&mut self) -> Result<(Term, SpanTree), Diagnostic> {
        let token = self.token().clone();
        match token.tok {
            Tok::Ident(name) => {
                self.bump();
                Ok((self.resolve_term(&name), SpanTree::leaf(token.span)))
            }
            Tok::Int(n) => {
                self.bump();
                Ok((Term::IntLit(n), SpanTree::leaf(token.span)))
            }
            Tok::LParen => {
                self.bump();
                let (term, mut tree) = self.expr()?;
                let close = self.expect(Tok::RParen)?;
                // widen the node to include the parentheses
                tree.span = token.span.join(close);
                Ok((term, tree))
            }
            _ => Err(unexpected(&token, "a term")),
        }
    }
}
