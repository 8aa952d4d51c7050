//! The ProbLog-subset logic core.
//!
//! Programs hold probabilistic facts, deterministic clauses (optionally
//! probability-annotated), annotated disjunctions, and query atoms. The
//! engine desugars annotated rules, grounds over the fact-defined domains,
//! stratifies negation, and evaluates queries exactly by enumerating every
//! total choice.

mod engine;
mod parse;

pub use engine::{
    desugar, ground, least_model, query_exact, query_exact_report, stratify, EngineError,
    EngineOptions, EngineReport, GroundProgram, QueryResult, TotalChoice,
};
pub use parse::{parse_program, PlParseError};

use crate::prob::{self, Probability};
use num::rational::BigRational;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Sym(String),
    Num(BigRational),
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Sym(s) => write!(f, "{s}"),
            Constant::Num(n) => match prob::decimal_exact(n) {
                Some(d) => write!(f, "{d}"),
                None => write!(f, "{}", prob::fraction_string(n)),
            },
        }
    }
}

/// Variables start with an uppercase letter, constants never do.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Constant),
    Var(String),
}

impl Term {
    pub fn sym(name: impl Into<String>) -> Term {
        Term::Const(Constant::Sym(name.into()))
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub symbol: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(symbol: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { symbol: symbol.into(), args }
    }

    pub fn nullary(symbol: impl Into<String>) -> Atom {
        Atom::new(symbol, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { atom, negated: true }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not({})", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// `head :- body`, optionally annotated `P::head :- body`.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
    pub probability: Option<Probability>,
}

impl Clause {
    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &str| {
            if !out.iter().any(|x| x == v) {
                out.push(v.to_string());
            }
        };
        for v in self.head.vars() {
            push(v);
        }
        for lit in &self.body {
            for v in lit.atom.vars() {
                push(v);
            }
        }
        out
    }
}

/// `P1::a1; ...; Pn::an :- body` with exact `ΣPi <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Disjunction {
    pub alternatives: Vec<(Probability, Atom)>,
    pub body: Vec<Literal>,
}

impl Disjunction {
    pub fn mass(&self) -> BigRational {
        self.alternatives.iter().map(|(p, _)| p.value().clone()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Fact(Atom),
    ProbFact(Probability, Atom),
    Clause(Clause),
    Disjunction(Disjunction),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogicProgram {
    pub statements: Vec<Statement>,
    pub queries: Vec<Atom>,
}

impl LogicProgram {
    pub fn facts(&self) -> impl Iterator<Item = &Atom> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Fact(a) => Some(a),
            _ => None,
        })
    }

    pub fn prob_facts(&self) -> impl Iterator<Item = (&Probability, &Atom)> {
        self.statements.iter().filter_map(|s| match s {
            Statement::ProbFact(p, a) => Some((p, a)),
            _ => None,
        })
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Clause(c) => Some(c),
            _ => None,
        })
    }

    pub fn disjunctions(&self) -> impl Iterator<Item = &Disjunction> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Disjunction(d) => Some(d),
            _ => None,
        })
    }

    /// Every symbol mentioned anywhere in the program.
    pub fn symbols(&self) -> std::collections::HashSet<String> {
        let mut out = std::collections::HashSet::new();
        let mut atom = |a: &Atom| {
            out.insert(a.symbol.clone());
        };
        for stmt in &self.statements {
            match stmt {
                Statement::Fact(a) | Statement::ProbFact(_, a) => atom(a),
                Statement::Clause(c) => {
                    atom(&c.head);
                    for l in &c.body {
                        atom(&l.atom);
                    }
                }
                Statement::Disjunction(d) => {
                    for (_, a) in &d.alternatives {
                        atom(a);
                    }
                    for l in &d.body {
                        atom(&l.atom);
                    }
                }
            }
        }
        for q in &self.queries {
            atom(q);
        }
        out
    }
}

/// Substitution of variables by constants.
pub(crate) fn subst_atom(atom: &Atom, env: &std::collections::HashMap<String, Constant>) -> Atom {
    Atom {
        symbol: atom.symbol.clone(),
        args: atom
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => match env.get(v) {
                    Some(c) => Term::Const(c.clone()),
                    None => t.clone(),
                },
                Term::Const(_) => t.clone(),
            })
            .collect(),
    }
}
