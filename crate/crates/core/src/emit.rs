//! Rendering logic programs back to ProbLog source text.

use crate::plcore::{Atom, Clause, Disjunction, Literal, LogicProgram, Statement};
use crate::translate::TranslationOutput;
use std::fmt::Write;

pub fn emit_atom(atom: &Atom) -> String {
    atom.to_string()
}

fn emit_literal(lit: &Literal) -> String {
    lit.to_string()
}

fn emit_body(body: &[Literal]) -> String {
    body.iter().map(emit_literal).collect::<Vec<_>>().join(", ")
}

pub fn emit_statement(stmt: &Statement) -> String {
    match stmt {
        Statement::Fact(atom) => format!("{}.", emit_atom(atom)),
        Statement::ProbFact(p, atom) => format!("{}::{}.", p.render_source(), emit_atom(atom)),
        Statement::Clause(Clause { head, body, probability }) => {
            let mut s = String::new();
            if let Some(p) = probability {
                write!(s, "{}::", p.render_source()).unwrap();
            }
            write!(s, "{}", emit_atom(head)).unwrap();
            if !body.is_empty() {
                write!(s, " :- {}", emit_body(body)).unwrap();
            }
            s.push('.');
            s
        }
        Statement::Disjunction(Disjunction { alternatives, body }) => {
            let alts = alternatives
                .iter()
                .map(|(p, a)| format!("{}::{}", p.render_source(), emit_atom(a)))
                .collect::<Vec<_>>()
                .join("; ");
            if body.is_empty() {
                format!("{alts}.")
            } else {
                format!("{alts} :- {}.", emit_body(body))
            }
        }
    }
}

/// Plain rendering of a program: one statement per line, queries last.
pub fn emit_program(program: &LogicProgram) -> String {
    let mut out = String::new();
    for stmt in &program.statements {
        out.push_str(&emit_statement(stmt));
        out.push('\n');
    }
    for q in &program.queries {
        writeln!(out, "query({}).", emit_atom(q)).unwrap();
    }
    out
}

/// Sectioned rendering of a translated model: each non-empty section gets a
/// `% <title>` comment header, statements keep translation order, queries
/// come last.
pub fn emit_translation(t: &TranslationOutput) -> String {
    let mut out = String::new();
    for section in &t.sections {
        if section.range.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        if let Some(title) = &section.title {
            writeln!(out, "% {title}").unwrap();
        }
        for stmt in &t.program.statements[section.range.clone()] {
            out.push_str(&emit_statement(stmt));
            out.push('\n');
        }
    }
    if !t.program.queries.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "% queries").unwrap();
        for q in &t.program.queries {
            writeln!(out, "query({}).", emit_atom(q)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plcore::parse_program;

    #[test]
    fn emit_parse_round_trip() {
        let source = "\
0.8::a.
0.3::b(1); 0.5::b(2); 0.2::b(3).
c :- a.
c :- b(1), not(a).
1/6::d(X) :- b(X).
query(c).
";
        let program = parse_program(source).unwrap();
        let text = emit_program(&program);
        assert_eq!(text, source);
        let reparsed = parse_program(&text).unwrap();
        assert_eq!(emit_program(&reparsed), text);
    }
}
