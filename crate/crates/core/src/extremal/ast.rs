use std::fmt;

use serde::Serialize;

use super::ambient::Ambient;
use crate::error::{domain, Result};

/// A lattice term built from variables with meet and join only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    Var(usize),
    Meet(Box<Formula>, Box<Formula>),
    Join(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(i: usize) -> Formula {
        Formula::Var(i)
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Formula::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Formula {
        Formula::Join(Box::new(a), Box::new(b))
    }

    /// Left-nested join of the given variables; `None` when empty.
    pub fn join_all(vars: impl IntoIterator<Item = usize>) -> Option<Formula> {
        vars.into_iter().map(Formula::Var).reduce(Formula::join)
    }

    fn max_var(&self) -> usize {
        match self {
            Formula::Var(i) => *i,
            Formula::Meet(a, b) | Formula::Join(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Value under a partial assignment; `None` if a variable is unset.
    pub fn eval(&self, amb: &Ambient, asg: &[Option<u64>]) -> Option<u64> {
        match self {
            Formula::Var(i) => asg.get(*i).copied().flatten(),
            Formula::Meet(a, b) => Some(amb.meet(a.eval(amb, asg)?, b.eval(amb, asg)?)),
            Formula::Join(a, b) => Some(amb.join(a.eval(amb, asg)?, b.eval(amb, asg)?)),
        }
    }

    fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "{}", names.get(*i).map_or("?", String::as_str)),
            Formula::Meet(a, b) | Formula::Join(a, b) => {
                let op = if matches!(self, Formula::Meet(..)) {
                    "∩"
                } else {
                    "∪"
                };
                write!(f, "(")?;
                a.fmt_with(names, f)?;
                write!(f, " {op} ")?;
                b.fmt_with(names, f)?;
                write!(f, ")")
            }
        }
    }
}

/// `f ⊂ g` (read as `f ≤ g` in the ambient order) or `f = g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Statement {
    Subset(Formula, Formula),
    Equal(Formula, Formula),
}

impl Statement {
    pub fn subset(a: Formula, b: Formula) -> Statement {
        Statement::Subset(a, b)
    }

    pub fn equal(a: Formula, b: Formula) -> Statement {
        Statement::Equal(a, b)
    }

    fn eval(&self, amb: &Ambient, asg: &[Option<u64>]) -> Option<bool> {
        match self {
            Statement::Subset(a, b) => Some(amb.leq(a.eval(amb, asg)?, b.eval(amb, asg)?)),
            Statement::Equal(a, b) => Some(a.eval(amb, asg)? == b.eval(amb, asg)?),
        }
    }

    fn max_var(&self) -> usize {
        match self {
            Statement::Subset(a, b) | Statement::Equal(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// Boolean combination of statements. An empty `And` is true and an empty
/// `Or` is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Body {
    Stmt(Statement),
    And(Vec<Body>),
    Or(Vec<Body>),
    Not(Box<Body>),
}

impl Body {
    pub fn not(b: Body) -> Body {
        Body::Not(Box::new(b))
    }

    /// Three-valued (Kleene) evaluation: `None` means not yet decided by the
    /// assigned variables.
    pub fn eval(&self, amb: &Ambient, asg: &[Option<u64>]) -> Option<bool> {
        match self {
            Body::Stmt(s) => s.eval(amb, asg),
            Body::Not(b) => b.eval(amb, asg).map(|v| !v),
            Body::And(parts) => {
                let mut unknown = false;
                for p in parts {
                    match p.eval(amb, asg) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                (!unknown).then_some(true)
            }
            Body::Or(parts) => {
                let mut unknown = false;
                for p in parts {
                    match p.eval(amb, asg) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                (!unknown).then_some(false)
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Body::Stmt(s) => Some(s.max_var()),
            Body::Not(b) => b.max_var(),
            Body::And(ps) | Body::Or(ps) => ps.iter().filter_map(Body::max_var).max(),
        }
    }

    fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Stmt(Statement::Subset(a, b)) | Body::Stmt(Statement::Equal(a, b)) => {
                let op = if matches!(self, Body::Stmt(Statement::Subset(..))) {
                    "⊂"
                } else {
                    "="
                };
                write!(f, "(")?;
                a.fmt_with(names, f)?;
                write!(f, " {op} ")?;
                b.fmt_with(names, f)?;
                write!(f, ")")
            }
            Body::Not(b) => {
                write!(f, "¬")?;
                b.fmt_with(names, f)
            }
            Body::And(ps) | Body::Or(ps) => {
                if ps.is_empty() {
                    return write!(
                        f,
                        "{}",
                        if matches!(self, Body::And(_)) {
                            "true"
                        } else {
                            "false"
                        }
                    );
                }
                let op = if matches!(self, Body::And(_)) {
                    " ∧ "
                } else {
                    " ∨ "
                };
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    p.fmt_with(names, f)?;
                }
                Ok(())
            }
        }
    }
}

/// Named variables and a body over them. Witnesses must assign pairwise
/// distinct points to the variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineConfiguration {
    pub name: String,
    pub variables: Vec<String>,
    pub body: Body,
}

impl AffineConfiguration {
    pub fn new(name: impl Into<String>, variables: Vec<String>, body: Body) -> Result<Self> {
        if variables.is_empty() {
            return domain("a configuration needs at least one variable");
        }
        if let Some(v) = body.max_var() {
            if v >= variables.len() {
                return domain(format!(
                    "body uses variable #{v} but only {} are declared",
                    variables.len()
                ));
            }
        }
        Ok(AffineConfiguration {
            name: name.into(),
            variables,
            body,
        })
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }
}

impl fmt::Display for AffineConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt_with(&self.variables, f)
    }
}
