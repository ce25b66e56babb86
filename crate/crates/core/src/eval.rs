//! Call-by-value evaluation of core terms.

use std::fmt;
use std::rc::Rc;

use crate::elaborate::CoreTerm;
use crate::syntax::{Term, Var};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Closure { body: Rc<Term>, env: Env },
    TypeClosure { body: Rc<Term>, env: Env },
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{}", n),
            Value::Closure { .. } => f.write_str("<function>"),
            Value::TypeClosure { .. } => f.write_str("<type function>"),
        }
    }
}

/// Values of the enclosing term binders, innermost first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env(Option<Rc<(Value, Env)>>);

impl Env {
    fn push(&self, value: Value) -> Env {
        Env(Some(Rc::new((value, self.clone()))))
    }

    fn get(&self, index: usize) -> Option<&Value> {
        let mut env = self;
        for _ in 0..index {
            env = &env.0.as_ref()?.1;
        }
        env.0.as_ref().map(|cell| &cell.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    OutOfFuel(u64),
    /// Only reachable on ill-typed input.
    Stuck(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::OutOfFuel(fuel) => write!(f, "evaluation did not finish within {} steps", fuel),
            EvalError::Stuck(why) => write!(f, "evaluation is stuck: {}", why),
        }
    }
}

impl std::error::Error for EvalError {}

pub fn evaluate(term: &CoreTerm, fuel: u64) -> Result<Value, EvalError> {
    let mut machine = Machine { fuel, budget: fuel };
    machine.eval(term.term(), &Env::default())
}

struct Machine {
    fuel: u64,
    budget: u64,
}

impl Machine {
    fn tick(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::OutOfFuel(self.budget));
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(&mut self, term: &Term, env: &Env) -> Result<Value, EvalError> {
        // Tail positions (function bodies) loop instead of recursing.
        let mut term = term.clone();
        let mut env = env.clone();
        loop {
            self.tick()?;
            match term {
                Term::Var(Var::Bound(i), ref h) => {
                    return env.get(i).cloned().ok_or_else(|| EvalError::Stuck(format!("unbound variable `{}`", h)))
                }
                Term::Var(_, ref h) => return Err(EvalError::Stuck(format!("free variable `{}`", h))),
                Term::IntLit(n) => return Ok(Value::Int(n)),
                Term::Abs(_, _, _, body) => return Ok(Value::Closure { body: Rc::new(*body), env }),
                Term::TAbs(_, _, _, body) => return Ok(Value::TypeClosure { body: Rc::new(*body), env }),
                Term::App(_, f, a) => {
                    let function = self.eval(&f, &env)?;
                    let argument = self.eval(&a, &env)?;
                    match function {
                        Value::Closure { body, env: captured } => {
                            term = (*body).clone();
                            env = captured.push(argument);
                        }
                        other => return Err(EvalError::Stuck(format!("{} applied to a value", other))),
                    }
                }
                Term::TypeApp(_, f, ty) => match self.eval(&f, &env)? {
                    Value::TypeClosure { body, env: captured } => {
                        term = body.instantiate_type(&ty);
                        env = captured;
                    }
                    other => return Err(EvalError::Stuck(format!("{} applied to a type", other))),
                },
                Term::Asc(..) => return Err(EvalError::Stuck("ascription in a core term".to_string())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::parse_unit;

    fn run(text: &str) -> Result<Value, EvalError> {
        let term = CoreTerm::new(parse_unit(text, "t.fcci").unwrap().body).unwrap();
        evaluate(&term, DEFAULT_FUEL)
    }

    #[test]
    fn examples() {
        assert_eq!(run("(\\(x : Int). x) (7)").unwrap(), Value::Int(7));
        assert_eq!(run("(\\(y : Int). (/\\(a). \\(x : a). x) @(Int) (y)) (7)").unwrap(), Value::Int(7));
        assert_eq!(run("(/\\(a). \\(x : a). x) @(Int) (7)").unwrap(), Value::Int(7));
    }

    #[test]
    fn call_by_value_left_to_right() {
        let k = "(\\(x : Int). \\(y : Int). x) (1) (2)";
        assert_eq!(run(k).unwrap(), Value::Int(1));
        assert_eq!(run("\\(x : Int). x").unwrap().to_string(), "<function>");
        assert_eq!(run("/\\(a). \\(x : a). x").unwrap().to_string(), "<type function>");
    }

    #[test]
    fn fuel_runs_out() {
        let term = CoreTerm::new(parse_unit("(\\(x : Int). x) (7)", "t").unwrap().body).unwrap();
        assert_eq!(evaluate(&term, 2), Err(EvalError::OutOfFuel(2)));
        assert!(evaluate(&term, 4).is_ok());
    }

    #[test]
    fn deterministic() {
        let text = "(/\\(a). \\(f : a -> a). \\(x : a). f (f (x))) @(Int) (\\(z : Int). z) (3)";
        let first = run(text).unwrap();
        for _ in 0..5 {
            assert_eq!(run(text).unwrap(), first);
        }
    }
}
