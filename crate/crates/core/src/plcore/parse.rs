//! Textual parser for the ProbLog subset: facts, probabilistic facts, rules,
//! annotated rules, annotated disjunctions, `query/1` directives, `not(...)`
//! negation, and `%` line comments. Arguments are constants or variables;
//! no compound terms.

use super::*;
use crate::prob::{ProbError, Probability, ProbStyle};
use num::bigint::BigInt;
use num::rational::BigRational;


#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum PlParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Probability {
        line: usize,
        #[source]
        source: ProbError,
    },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    VarIdent(String),
    Number(String),
    ColonDash,
    ColonColon,
    Semi,
    Comma,
    LParen,
    RParen,
    Dot,
    Slash,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1 }
    }

    fn error(&self, message: impl Into<String>) -> PlParseError {
        PlParseError::Syntax { line: self.line, message: message.into() }
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                b' ' | b'\t' | b'\r' => self.pos += 1,
                b'%' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, usize)>, PlParseError> {
        self.skip_trivia();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let line = self.line;
        let c = self.src[self.pos];
        let tok = match c {
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b';' => {
                self.pos += 1;
                Tok::Semi
            }
            b'.' => {
                self.pos += 1;
                Tok::Dot
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b':' => {
                if self.src.get(self.pos + 1) == Some(&b'-') {
                    self.pos += 2;
                    Tok::ColonDash
                } else if self.src.get(self.pos + 1) == Some(&b':') {
                    self.pos += 2;
                    Tok::ColonColon
                } else {
                    return Err(self.error("stray `:`"));
                }
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                // A dot is part of the number only when digits follow it.
                if self.src.get(self.pos) == Some(&b'.')
                    && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
                {
                    self.pos += 1;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                Tok::Number(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                if c.is_ascii_uppercase() || c == b'_' {
                    Tok::VarIdent(text)
                } else {
                    Tok::Ident(text)
                }
            }
            other => {
                return Err(self.error(format!("unexpected character `{}`", other as char)));
            }
        };
        Ok(Some((tok, line)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l)| *l)
            .unwrap_or(1)
    }

    fn error(&self, message: impl Into<String>) -> PlParseError {
        PlParseError::Syntax { line: self.line(), message: message.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), PlParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_number(&mut self) -> Result<BigRational, PlParseError> {
        match self.bump() {
            Some(Tok::Number(n)) => crate::prob::parse_decimal(&n)
                .ok_or_else(|| self.error(format!("bad numeric literal `{n}`"))),
            _ => Err(self.error("expected a number")),
        }
    }

    /// `0.5` or `1/6`, normalized to an exact rational.
    fn parse_probability(&mut self) -> Result<Probability, PlParseError> {
        let line = self.line();
        let first = self.parse_number()?;
        let (value, style) = if self.eat(&Tok::Slash) {
            let den = self.parse_number()?;
            if den == BigRational::from_integer(BigInt::from(0)) {
                return Err(self.error("zero denominator"));
            }
            (first / den, ProbStyle::Fraction)
        } else {
            (first, ProbStyle::Decimal)
        };
        Probability::new(value, style).map_err(|source| PlParseError::Probability { line, source })
    }

    fn parse_term(&mut self) -> Result<Term, PlParseError> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(Term::sym(s)),
            Some(Tok::VarIdent(v)) => Ok(Term::var(v)),
            Some(Tok::Number(n)) => {
                let value = crate::prob::parse_decimal(&n)
                    .ok_or_else(|| self.error(format!("bad numeric literal `{n}`")))?;
                Ok(Term::Const(Constant::Num(value)))
            }
            _ => Err(self.error("expected a term")),
        }
    }

    fn parse_atom(&mut self) -> Result<Atom, PlParseError> {
        let symbol = match self.bump() {
            Some(Tok::Ident(s)) => s,
            _ => return Err(self.error("expected an atom")),
        };
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.parse_term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(Atom::new(symbol, args))
    }

    fn parse_literal(&mut self) -> Result<Literal, PlParseError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "not")
            && self.toks.get(self.pos + 1).map(|(t, _)| t) == Some(&Tok::LParen)
        {
            self.pos += 2;
            let atom = self.parse_atom()?;
            self.expect(Tok::RParen, "`)` closing not(...)")?;
            return Ok(Literal::neg(atom));
        }
        Ok(Literal::pos(self.parse_atom()?))
    }

    fn parse_body(&mut self) -> Result<Vec<Literal>, PlParseError> {
        let mut body = vec![self.parse_literal()?];
        while self.eat(&Tok::Comma) {
            body.push(self.parse_literal()?);
        }
        Ok(body)
    }

    fn parse_statement(&mut self, program: &mut LogicProgram) -> Result<(), PlParseError> {
        if matches!(self.peek(), Some(Tok::Number(_))) {
            // Annotated: probabilistic fact, annotated rule, or disjunction.
            let p = self.parse_probability()?;
            self.expect(Tok::ColonColon, "`::` after probability")?;
            let atom = self.parse_atom()?;
            let mut alternatives = vec![(p, atom)];
            while self.eat(&Tok::Semi) {
                let p = self.parse_probability()?;
                self.expect(Tok::ColonColon, "`::` after probability")?;
                alternatives.push((p, self.parse_atom()?));
            }
            let body = if self.eat(&Tok::ColonDash) { self.parse_body()? } else { Vec::new() };
            self.expect(Tok::Dot, "`.`")?;
            if alternatives.len() > 1 {
                let d = Disjunction { alternatives, body };
                if d.mass() > BigRational::from_integer(BigInt::from(1)) {
                    return Err(self.error("annotated disjunction mass exceeds 1"));
                }
                program.statements.push(Statement::Disjunction(d));
            } else {
                let (p, atom) = alternatives.pop().unwrap();
                if body.is_empty() {
                    program.statements.push(Statement::ProbFact(p, atom));
                } else {
                    program.statements.push(Statement::Clause(Clause {
                        head: atom,
                        body,
                        probability: Some(p),
                    }));
                }
            }
            return Ok(());
        }

        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "query")
            && self.toks.get(self.pos + 1).map(|(t, _)| t) == Some(&Tok::LParen)
        {
            self.pos += 2;
            let inner = self.parse_atom()?;
            self.expect(Tok::RParen, "`)` closing query(...)")?;
            self.expect(Tok::Dot, "`.`")?;
            program.queries.push(inner);
            return Ok(());
        }

        let head = self.parse_atom()?;
        if self.eat(&Tok::ColonDash) {
            let body = self.parse_body()?;
            self.expect(Tok::Dot, "`.`")?;
            program.statements.push(Statement::Clause(Clause { head, body, probability: None }));
        } else {
            self.expect(Tok::Dot, "`.`")?;
            program.statements.push(Statement::Fact(head));
        }
        Ok(())
    }
}

pub fn parse_program(source: &str) -> Result<LogicProgram, PlParseError> {
    let mut lexer = Lexer::new(source);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let mut parser = Parser { toks, pos: 0 };
    let mut program = LogicProgram::default();
    while parser.peek().is_some() {
        parser.parse_statement(&mut program)?;
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_program() {
        let src = "
            % facts
            0.8::a.
            0.3::b(1); 0.5::b(2); 0.2::b(3).
            c :- a.
            c :- b(1).
            query(c).
        ";
        let p = parse_program(src).unwrap();
        assert_eq!(p.prob_facts().count(), 1);
        assert_eq!(p.disjunctions().count(), 1);
        assert_eq!(p.clauses().count(), 2);
        assert_eq!(p.queries, vec![Atom::nullary("c")]);
    }

    #[test]
    fn parses_annotated_rules_and_negation() {
        let src = "0.9::alarm :- burglary, not(earthquake(none)).\nquery(alarm).";
        let p = parse_program(src).unwrap();
        let clause = p.clauses().next().unwrap();
        assert!(clause.probability.is_some());
        assert!(clause.body[1].negated);
    }

    #[test]
    fn parses_query_with_arguments() {
        let p = parse_program("query(die_value(six)).").unwrap();
        assert_eq!(p.queries, vec![Atom::new("die_value", vec![Term::sym("six")])]);
        let p = parse_program("query(person_calls(X)).").unwrap();
        assert_eq!(p.queries, vec![Atom::new("person_calls", vec![Term::var("X")])]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_program("p :- .").is_err());
        assert!(parse_program("p").is_err());
        assert!(parse_program("1.5::p.").is_err());
        assert!(parse_program("0.6::a; 0.6::b.").is_err());
        assert!(parse_program("p :- q,.").is_err());
    }

    #[test]
    fn fraction_probabilities() {
        let p = parse_program("1/6::die(one).").unwrap();
        let (prob, _) = p.prob_facts().next().unwrap();
        assert_eq!(prob, &Probability::from_ratio(1, 6).unwrap());
        assert_eq!(prob.render_source(), "1/6");
    }
}
