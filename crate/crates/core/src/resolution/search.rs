//! Bounded search for resolution derivations.
//!
//! Matching is deterministic once the shapes of source and target are
//! known, so match subgoals are processed eagerly. The only branching
//! points are entailments, which are queued and later discharged by
//! `lookup` against every implicit binding. Each branch owns a copy of the
//! metavariable store, the node arena and the queue.

use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::unify::MetaStore;
use super::{
    elaborate_witness, Binding, Derivation, ExplorationOrder, Goal, ResolutionOutcome, Rule, SolveOptions,
    Witness,
};
use crate::kinds::{head_step, shape, whnf, Shape};
use crate::surface::pretty::{pretty_term, pretty_type};
use crate::syntax::{BinderForm, Context, Term, Type};

#[derive(Clone, Debug)]
struct Node {
    rule: Rule,
    premises: Vec<usize>,
    instantiation: Option<Type>,
    binding: Option<Binding>,
    source: Option<Type>,
    target: Type,
}

#[derive(Clone, Debug)]
struct Obligation {
    ctx: Rc<Context>,
    target: Type,
    /// Placeholder node that becomes the `lookup`.
    node: usize,
}

#[derive(Clone, Debug)]
struct State {
    metas: MetaStore,
    nodes: Vec<Node>,
    pending: Vec<Obligation>,
    cost: usize,
    root: usize,
}

impl State {
    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Marker for a branch that produced no derivation.
struct Dead;

struct Search<'g> {
    goal: &'g Goal,
    bound: usize,
    rng: Option<ChaCha8Rng>,
    /// Smallest cost above the bound at which some branch was cut.
    next_cut: Option<usize>,
    /// Undecided branches whose lower bound fits under the bound.
    incomplete: Option<String>,
    solutions: Vec<Witness>,
}

pub(super) fn run(goal: &Goal, options: &SolveOptions) -> ResolutionOutcome {
    let mut bound = 1;
    loop {
        if bound > options.limit {
            return ResolutionOutcome::Exhausted(options.limit);
        }
        let rng = match options.order {
            ExplorationOrder::Sequential => None,
            ExplorationOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed ^ bound as u64)),
        };
        let mut search = Search { goal, bound, rng, next_cut: None, incomplete: None, solutions: Vec::new() };
        search.start();
        if let Some(reason) = search.incomplete {
            return ResolutionOutcome::Incomplete(reason);
        }
        if !search.solutions.is_empty() {
            return classify(search.solutions);
        }
        match search.next_cut {
            None => return ResolutionOutcome::NotDerivable,
            Some(next) => bound = next,
        }
    }
}

/// Groups witnesses into α-equivalence classes of terms, keeping for each
/// the derivation with the smallest trace.
fn classify(solutions: Vec<Witness>) -> ResolutionOutcome {
    let mut classes: Vec<(String, Witness, String)> = Vec::new();
    for witness in solutions {
        let trace = witness.derivation.trace();
        match classes.iter_mut().find(|(_, w, _)| w.term == witness.term) {
            Some(class) => {
                if trace < class.2 {
                    class.1 = witness;
                    class.2 = trace;
                }
            }
            None => classes.push((pretty_term(&witness.term), witness, trace)),
        }
    }
    let least = classes.iter().map(|(_, w, _)| w.measure).min().expect("nonempty");
    classes.retain(|(_, w, _)| w.measure == least);
    classes.sort_by(|a, b| (&a.0, &a.2).cmp(&(&b.0, &b.2)));
    let mut witnesses: Vec<Witness> = classes.into_iter().map(|(_, w, _)| w).collect();
    if witnesses.len() == 1 {
        ResolutionOutcome::Unique(witnesses.pop().unwrap())
    } else {
        ResolutionOutcome::Ambiguous(witnesses)
    }
}

fn placeholder(target: Type) -> Node {
    Node { rule: Rule::Lookup, premises: Vec::new(), instantiation: None, binding: None, source: None, target }
}

impl Search<'_> {
    fn start(&mut self) {
        let goal = self.goal;
        let mut state = State { metas: MetaStore::new(), nodes: Vec::new(), pending: Vec::new(), cost: 1, root: 0 };
        match &goal.source {
            Some(source) => {
                let mut ctx = goal.context.clone();
                ctx.push_term(BinderForm::Explicit, "subject", source.clone());
                let ctx = Rc::new(ctx);
                match self.match_target(&mut state, &ctx, source.clone(), goal.target.clone()) {
                    Ok(root) => state.root = root,
                    Err(Dead) => return,
                }
            }
            None => {
                let node = state.push(placeholder(goal.target.clone()));
                state.pending.push(Obligation { ctx: Rc::new(goal.context.clone()), target: goal.target.clone(), node });
            }
        }
        self.explore(state);
    }

    fn cut(&mut self, cost: usize) {
        self.next_cut = Some(self.next_cut.map_or(cost, |c| c.min(cost)));
    }

    fn charge(&mut self, state: &mut State, amount: usize) -> Result<(), Dead> {
        state.cost += amount;
        if state.cost > self.bound {
            self.cut(state.cost);
            Err(Dead)
        } else {
            Ok(())
        }
    }

    /// A branch that might still yield witnesses of measure at least
    /// `lower`, but that the search cannot follow.
    fn undecided(&mut self, lower: usize, reason: String) {
        if lower > self.bound {
            self.cut(lower);
        } else if self.incomplete.as_ref().is_none_or(|r| reason < *r) {
            self.incomplete = Some(reason);
        }
    }

    fn explore(&mut self, mut state: State) {
        if state.cost > self.bound {
            self.cut(state.cost);
            return;
        }
        if state.pending.is_empty() {
            self.finish(state);
            return;
        }
        let ready: Vec<usize> = (0..state.pending.len())
            .filter(|&i| is_ready(&state.metas, &state.pending[i].target))
            .collect();
        if ready.is_empty() {
            let target = state.metas.resolve(&state.pending[0].target);
            self.undecided(
                state.cost,
                format!("cannot search for an implicit of type `{}` before it is determined", pretty_type(&target)),
            );
            return;
        }
        let pick = match &mut self.rng {
            Some(rng) => ready[rng.gen_range(0..ready.len())],
            None => ready[0],
        };
        let obligation = state.pending.remove(pick);
        let mut candidates: Vec<(usize, Rc<str>, Type)> = obligation
            .ctx
            .implicit_terms()
            .map(|(level, entry)| (level, entry.name.clone(), entry.ty.clone()))
            .collect();
        if let Some(rng) = &mut self.rng {
            candidates.shuffle(rng);
        }
        for (level, name, ty) in candidates {
            let mut branch = state.clone();
            if let Ok(premise) = self.match_target(&mut branch, &obligation.ctx, ty.clone(), obligation.target.clone()) {
                let node = &mut branch.nodes[obligation.node];
                node.binding = Some(Binding::Term { level, name, ty });
                node.premises = vec![premise];
                self.explore(branch);
            }
        }
    }

    /// Focusing phase: decomposes a non-simple target.
    fn match_target(&mut self, state: &mut State, ctx: &Rc<Context>, source: Type, target: Type) -> Result<usize, Dead> {
        let t = state.metas.zonk(&target);
        let node = |rule, premise, binding| Node {
            rule,
            premises: vec![premise],
            instantiation: None,
            binding,
            source: Some(source.clone()),
            target: t.clone(),
        };
        match shape(&t) {
            Shape::Redex => {
                let next = head_step(&t).expect("redex steps");
                let premise = self.match_target(state, ctx, source.clone(), next)?;
                Ok(state.push(node(Rule::FBeta, premise, None)))
            }
            Shape::ImplicitAll => {
                let Type::All(_, h, k, body) = &t else { unreachable!() };
                self.charge(state, 1)?;
                let mut inner = (**ctx).clone();
                let level = inner.push_type(BinderForm::Implicit, h.as_str(), k.clone());
                let premise = self.match_target(state, &Rc::new(inner), source.clone(), body.open(level, h))?;
                let binding = Binding::Type { level, name: h.0.clone(), kind: k.clone() };
                Ok(state.push(node(Rule::FAll, premise, Some(binding))))
            }
            Shape::ImplicitPi => {
                let Type::Pi(_, domain, codomain) = &t else { unreachable!() };
                self.charge(state, 1)?;
                let mut inner = (**ctx).clone();
                let level = inner.push_term(BinderForm::Implicit, "x", (**domain).clone());
                let premise = self.match_target(state, &Rc::new(inner), source.clone(), (**codomain).clone())?;
                let binding = Binding::Term { level, name: Rc::from("x"), ty: (**domain).clone() };
                Ok(state.push(node(Rule::FImpl, premise, Some(binding))))
            }
            Shape::Flex => {
                let shown = state.metas.resolve(&t);
                self.undecided(state.cost, format!("target `{}` is not determined", pretty_type(&shown)));
                Err(Dead)
            }
            Shape::Lambda => Err(Dead),
            Shape::Simple => self.match_source(state, ctx, source, t),
        }
    }

    /// Matching phase: peels the source until it is simple, then closes
    /// the goal by `m-equiv`.
    fn match_source(&mut self, state: &mut State, ctx: &Rc<Context>, source: Type, target: Type) -> Result<usize, Dead> {
        let s = state.metas.zonk(&source);
        let node = |rule, premises, instantiation| Node {
            rule,
            premises,
            instantiation,
            binding: None,
            source: Some(s.clone()),
            target: target.clone(),
        };
        match shape(&s) {
            Shape::Redex => {
                let next = head_step(&s).expect("redex steps");
                let premise = self.match_source(state, ctx, next, target.clone())?;
                Ok(state.push(node(Rule::MBeta, vec![premise], None)))
            }
            Shape::ImplicitAll => {
                let Type::All(_, _, k, body) = &s else { unreachable!() };
                self.charge(state, 2)?;
                let meta = Type::Meta(state.metas.fresh(k.clone(), ctx.type_len()));
                let premise = self.match_source(state, ctx, body.instantiate(&meta), target.clone())?;
                Ok(state.push(node(Rule::MAll, vec![premise], Some(meta))))
            }
            Shape::ImplicitPi => {
                let Type::Pi(_, domain, codomain) = &s else { unreachable!() };
                self.charge(state, 2)?;
                let entail = state.push(placeholder((**domain).clone()));
                state.pending.push(Obligation { ctx: ctx.clone(), target: (**domain).clone(), node: entail });
                let premise = self.match_source(state, ctx, (**codomain).clone(), target.clone())?;
                Ok(state.push(node(Rule::MImpl, vec![entail, premise], None)))
            }
            Shape::Lambda => Err(Dead),
            Shape::Flex | Shape::Simple => {
                let kinds = ctx.type_kinds();
                match state.metas.unify(&s, &target, &kinds) {
                    Ok(()) => Ok(state.push(node(Rule::MEquiv, Vec::new(), None))),
                    Err(_) => Err(Dead),
                }
            }
        }
    }

    fn finish(&mut self, state: State) {
        if let Some(reason) = state.metas.stuck() {
            self.undecided(state.cost, reason);
            return;
        }
        let mut unsolved = Vec::new();
        for node in &state.nodes {
            if let Some(ty) = &node.instantiation {
                state.metas.unsolved_in(ty, &mut unsolved);
            }
        }
        let variants = if unsolved.is_empty() { 1 } else { 2 };
        for variant in 0..variants {
            let mut metas = state.metas.clone();
            metas.ground(variant);
            let derivation = build(&state.nodes, state.root, &metas);
            let subject = match self.goal.source {
                Some(_) => self.goal.subject(),
                None => Term::IntLit(0),
            };
            let term = elaborate_witness(&derivation, subject);
            let measure = term.measure();
            debug_assert_eq!(measure, state.cost, "search cost tracks the witness measure");
            self.solutions.push(Witness { term, derivation, measure, subject: self.goal.subject_level() });
        }
    }
}

/// Whether an entailment target is known well enough to run `lookup`: its
/// focusing spine must not end in an unsolved metavariable.
fn is_ready(metas: &MetaStore, target: &Type) -> bool {
    let t = whnf(&metas.zonk(target));
    match &t {
        Type::Pi(BinderForm::Implicit, _, codomain) => is_ready(metas, codomain),
        Type::All(BinderForm::Implicit, _, _, body) => is_ready(metas, body),
        _ => shape(&t) != Shape::Flex,
    }
}

fn build(nodes: &[Node], id: usize, metas: &MetaStore) -> Derivation {
    let node = &nodes[id];
    let binding = node.binding.as_ref().map(|b| match b {
        Binding::Term { level, name, ty } => Binding::Term { level: *level, name: name.clone(), ty: metas.resolve(ty) },
        other => other.clone(),
    });
    Derivation {
        rule: node.rule,
        premises: node.premises.iter().map(|&p| build(nodes, p, metas)).collect(),
        instantiation: node.instantiation.as_ref().map(|t| metas.resolve(t)),
        binding,
        source: node.source.as_ref().map(|t| metas.zonk(t)),
        target: metas.zonk(&node.target),
    }
}
