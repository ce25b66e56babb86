//! Higher-order pattern unification over types with metavariables.
//!
//! Types are unified in opened form: every variable in scope is a level,
//! and `kinds[l]` is the kind of level `l`. A metavariable created with
//! depth `d` may only be solved with types mentioning levels below `d`,
//! plus the variables it is applied to.

use crate::kinds::normalize;
use crate::surface::pretty::pretty_type;
use crate::syntax::{Hint, Kind, MetaVar, Type, Var};

#[derive(Clone, Debug)]
struct MetaInfo {
    kind: Kind,
    depth: usize,
    solution: Option<Type>,
}

#[derive(Clone, Debug)]
struct Constraint {
    left: Type,
    right: Type,
    kinds: Vec<Kind>,
}

/// Why two types failed to unify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clash {
    Mismatch,
}

#[derive(Clone, Debug, Default)]
pub struct MetaStore {
    metas: Vec<MetaInfo>,
    /// Constraints outside the pattern fragment, retried whenever a
    /// metavariable gets solved.
    postponed: Vec<Constraint>,
    dirty: bool,
}

enum Attempt {
    Solved,
    Postpone,
}

impl MetaStore {
    pub fn new() -> MetaStore {
        MetaStore::default()
    }

    pub fn fresh(&mut self, kind: Kind, depth: usize) -> MetaVar {
        self.metas.push(MetaInfo { kind, depth, solution: None });
        MetaVar(self.metas.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.metas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty()
    }

    pub fn kind(&self, m: MetaVar) -> &Kind {
        &self.metas[m.0].kind
    }

    pub fn depth(&self, m: MetaVar) -> usize {
        self.metas[m.0].depth
    }

    pub fn solution(&self, m: MetaVar) -> Option<&Type> {
        self.metas[m.0].solution.as_ref()
    }

    /// Assigns a solution without any checks.
    pub fn assign(&mut self, m: MetaVar, ty: Type) {
        self.metas[m.0].solution = Some(ty);
    }

    /// Substitutes solved metavariables, without normalizing.
    pub fn zonk(&self, ty: &Type) -> Type {
        match ty {
            Type::Meta(m) => match &self.metas[m.0].solution {
                Some(solution) => self.zonk(solution),
                None => ty.clone(),
            },
            Type::Var(..) | Type::Int => ty.clone(),
            Type::Pi(form, a, b) => Type::pi(*form, self.zonk(a), self.zonk(b)),
            Type::All(form, h, k, body) => Type::All(*form, h.clone(), k.clone(), Box::new(self.zonk(body))),
            Type::Lam(h, k, body) => Type::Lam(h.clone(), k.clone(), Box::new(self.zonk(body))),
            Type::App(f, a) => Type::app(self.zonk(f), self.zonk(a)),
        }
    }

    /// Zonks and normalizes.
    pub fn resolve(&self, ty: &Type) -> Type {
        normalize(&self.zonk(ty))
    }

    /// Unsolved metavariables occurring in `ty` after zonking, in order of
    /// first occurrence.
    pub fn unsolved_in(&self, ty: &Type, out: &mut Vec<MetaVar>) {
        match self.zonk(ty) {
            Type::Meta(m) => {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            other => walk_metas(&other, out),
        }
    }

    /// A human-readable description of the first constraint that could not
    /// be decided, if any.
    pub fn stuck(&self) -> Option<String> {
        self.postponed
            .iter()
            .map(|c| {
                describe_pair(&self.resolve(&c.left), &self.resolve(&c.right))
            })
            .min()
    }

    /// Unifies `a` and `b`, solving metavariables in the pattern fragment
    /// and postponing everything else.
    pub fn unify(&mut self, a: &Type, b: &Type, kinds: &[Kind]) -> Result<(), Clash> {
        let mut kinds = kinds.to_vec();
        self.unify_core(a, b, &mut kinds)?;
        while self.dirty {
            self.dirty = false;
            for c in std::mem::take(&mut self.postponed) {
                let mut kinds = c.kinds.clone();
                self.unify_core(&c.left, &c.right, &mut kinds)?;
            }
        }
        Ok(())
    }

    fn unify_core(&mut self, a: &Type, b: &Type, kinds: &mut Vec<Kind>) -> Result<(), Clash> {
        let a = self.resolve(a);
        let b = self.resolve(b);
        if a == b {
            return Ok(());
        }
        if let Some((m, args)) = flex(&a) {
            match self.try_solve(m, &args, &b)? {
                Attempt::Solved => return Ok(()),
                Attempt::Postpone => {
                    if let Some((n, args)) = flex(&b) {
                        if let Attempt::Solved = self.try_solve(n, &args, &a)? {
                            return Ok(());
                        }
                    }
                    self.postpone(a, b, kinds);
                    return Ok(());
                }
            }
        }
        if let Some((m, args)) = flex(&b) {
            return match self.try_solve(m, &args, &a)? {
                Attempt::Solved => Ok(()),
                Attempt::Postpone => {
                    self.postpone(a, b, kinds);
                    Ok(())
                }
            };
        }
        match (&a, &b) {
            (Type::Pi(f1, a1, b1), Type::Pi(f2, a2, b2)) if f1 == f2 => {
                self.unify_core(a1, a2, kinds)?;
                self.unify_core(b1, b2, kinds)
            }
            (Type::All(f1, h, k1, b1), Type::All(f2, _, k2, b2)) if f1 == f2 && k1 == k2 => {
                self.unify_under(h, k1, b1, b2, kinds)
            }
            (Type::Lam(h, k1, b1), Type::Lam(_, k2, b2)) if k1 == k2 => self.unify_under(h, k1, b1, b2, kinds),
            (Type::App(..), Type::App(..)) => {
                let (h1, args1) = a.spine();
                let (h2, args2) = b.spine();
                if h1 != h2 || args1.len() != args2.len() {
                    return Err(Clash::Mismatch);
                }
                for (x, y) in args1.into_iter().zip(args2) {
                    self.unify_core(x, y, kinds)?;
                }
                Ok(())
            }
            _ => Err(Clash::Mismatch),
        }
    }

    fn unify_under(&mut self, h: &Hint, k: &Kind, b1: &Type, b2: &Type, kinds: &mut Vec<Kind>) -> Result<(), Clash> {
        let level = kinds.len();
        kinds.push(k.clone());
        let result = self.unify_core(&b1.open(level, h), &b2.open(level, h), kinds);
        kinds.pop();
        result
    }

    fn postpone(&mut self, left: Type, right: Type, kinds: &[Kind]) {
        self.postponed.push(Constraint { left, right, kinds: kinds.to_vec() });
    }

    /// Tries `?m args := rhs` where `rhs` is normalized and zonked.
    fn try_solve(&mut self, m: MetaVar, args: &[Type], rhs: &Type) -> Result<Attempt, Clash> {
        let depth = self.metas[m.0].depth;
        let mut params: Vec<(usize, Hint)> = Vec::new();
        for arg in args {
            match arg {
                Type::Var(Var::Free(l), h) if *l >= depth && params.iter().all(|(p, _)| p != l) => {
                    params.push((*l, h.clone()));
                }
                _ => return Ok(Attempt::Postpone),
            }
        }
        let mut check = ScopeCheck { store: self, meta: m, depth, params: &params, lower: Vec::new() };
        match check.visit(rhs, false) {
            Verdict::Ok => {}
            Verdict::Postpone => return Ok(Attempt::Postpone),
            Verdict::Fail => return Err(Clash::Mismatch),
        }
        let lower = check.lower;
        if !lower.is_empty() && !params.is_empty() {
            return Ok(Attempt::Postpone);
        }
        for n in lower {
            self.metas[n.0].depth = self.metas[n.0].depth.min(depth);
        }
        let mut solution = rhs.clone();
        for (level, hint) in params.iter().rev() {
            let kind = self.param_kind(m, args, *level);
            solution = Type::Lam(hint.clone(), kind, Box::new(solution.close(*level)));
        }
        self.metas[m.0].solution = Some(solution);
        self.dirty = true;
        Ok(Attempt::Solved)
    }

    /// Kind of the parameter at `level` among the arguments of `?m`, read
    /// off the metavariable's own kind.
    fn param_kind(&self, m: MetaVar, args: &[Type], level: usize) -> Kind {
        let mut kind = &self.metas[m.0].kind;
        for arg in args {
            match kind {
                Kind::Arrow(domain, codomain) => {
                    if matches!(arg, Type::Var(Var::Free(l), _) if *l == level) {
                        return (**domain).clone();
                    }
                    kind = codomain;
                }
                Kind::Star => break,
            }
        }
        Kind::Star
    }

    /// Sets every unsolved metavariable to one of two canonical inhabitants
    /// of its kind.
    pub fn ground(&mut self, variant: usize) {
        for info in &mut self.metas {
            if info.solution.is_none() {
                info.solution = Some(canonical(&info.kind, variant));
            }
        }
    }
}

/// Two distinct closed types of every kind.
pub fn canonical(kind: &Kind, variant: usize) -> Type {
    match kind {
        Kind::Star if variant == 0 => Type::Int,
        Kind::Star => Type::arrow(Type::Int, Type::Int),
        Kind::Arrow(domain, codomain) => Type::Lam(Hint::new("a"), (**domain).clone(), Box::new(canonical(codomain, variant))),
    }
}

fn flex(ty: &Type) -> Option<(MetaVar, Vec<Type>)> {
    let (head, args) = ty.spine();
    match head {
        Type::Meta(m) => Some((*m, args.into_iter().cloned().collect())),
        _ => None,
    }
}

fn walk_metas(ty: &Type, out: &mut Vec<MetaVar>) {
    match ty {
        Type::Meta(m) => {
            if !out.contains(m) {
                out.push(*m);
            }
        }
        Type::Var(..) | Type::Int => {}
        Type::Pi(_, a, b) | Type::App(a, b) => {
            walk_metas(a, out);
            walk_metas(b, out);
        }
        Type::All(_, _, _, body) | Type::Lam(_, _, body) => walk_metas(body, out),
    }
}

/// Prints both sides with metavariables numbered by first occurrence, so the
/// description does not depend on creation order.
fn describe_pair(left: &Type, right: &Type) -> String {
    let mut seen = Vec::new();
    walk_metas(left, &mut seen);
    walk_metas(right, &mut seen);
    let renumber = |ty: &Type| {
        let mut store = MetaStore::new();
        let top = seen.iter().map(|m| m.0).max().map_or(0, |m| m + 1);
        for _ in 0..top {
            store.fresh(Kind::Star, 0);
        }
        for (i, m) in seen.iter().enumerate() {
            store.assign(*m, Type::Var(Var::Unbound(format!("?{}", i).into()), Hint::new("?")));
        }
        pretty_type(&store.zonk(ty))
    };
    format!(
        "cannot decide `{}` = `{}`: a metavariable is applied to arguments that are not distinct bound variables",
        renumber(left),
        renumber(right)
    )
}

enum Verdict {
    Ok,
    Postpone,
    Fail,
}

/// Checks that a solution candidate only mentions variables in scope for
/// the metavariable being solved and does not mention it.
struct ScopeCheck<'a> {
    store: &'a MetaStore,
    meta: MetaVar,
    depth: usize,
    params: &'a [(usize, Hint)],
    /// Metavariables whose depth must drop to the solved one's.
    lower: Vec<MetaVar>,
}

impl ScopeCheck<'_> {
    /// `flexible` is set below the arguments of another metavariable, where
    /// an offending occurrence could still disappear.
    fn visit(&mut self, ty: &Type, flexible: bool) -> Verdict {
        let soft = |flexible: bool| if flexible { Verdict::Postpone } else { Verdict::Fail };
        match ty {
            Type::Var(Var::Free(l), _) => {
                if *l < self.depth || self.params.iter().any(|(p, _)| p == l) {
                    Verdict::Ok
                } else {
                    soft(flexible)
                }
            }
            Type::Var(..) | Type::Int => Verdict::Ok,
            Type::Meta(n) => {
                if *n == self.meta {
                    soft(flexible)
                } else {
                    if self.store.metas[n.0].depth > self.depth {
                        self.lower.push(*n);
                    }
                    Verdict::Ok
                }
            }
            Type::App(..) if matches!(ty.spine().0, Type::Meta(_)) => {
                let (head, args) = ty.spine();
                let head = self.visit(head, flexible);
                if !matches!(head, Verdict::Ok) {
                    return head;
                }
                for arg in args {
                    match self.visit(arg, true) {
                        Verdict::Ok => {}
                        other => return other,
                    }
                }
                Verdict::Ok
            }
            Type::Pi(_, a, b) | Type::App(a, b) => match self.visit(a, flexible) {
                Verdict::Ok => self.visit(b, flexible),
                other => other,
            },
            Type::All(_, _, _, body) | Type::Lam(_, _, body) => self.visit(body, flexible),
        }
    }
}
