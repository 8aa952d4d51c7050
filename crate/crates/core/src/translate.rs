//! Translation of a validated [`PdmnModel`] into a ProbLog-subset program.
//!
//! Every row of a U/A table becomes one rule per output column (closed world:
//! rows whose output is No are dropped). F tables get synthetic row atoms and
//! negate all earlier rows. Ch tables become annotated disjunctions. Types
//! become unary facts, and one type atom per quantifier variable is added to
//! each rule body.

use crate::model::*;
use crate::plcore::{Atom, Clause, Disjunction, Literal, LogicProgram, Statement, Term};
use crate::prob::Probability;
use std::ops::Range;

/// Where a statement came from, for diagnostics and emission grouping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOrigin {
    pub table: String,
    /// 1-based rule-row index; 0 for synthetic statements (type facts, ...).
    pub row: usize,
}

#[derive(Clone, Debug)]
pub struct Section {
    /// Comment header for emission (`% facts`, `% Burglary`, ...).
    pub title: Option<String>,
    /// Statement indices into the program.
    pub range: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct SymbolInfo {
    pub raw_name: String,
    pub symbol: String,
    pub arity: usize,
}

#[derive(Clone, Debug)]
pub struct TranslationOutput {
    pub program: LogicProgram,
    pub sections: Vec<Section>,
    /// Parallel to `program.statements`.
    pub provenance: Vec<Option<RowOrigin>>,
    pub symbol_table: Vec<SymbolInfo>,
}

pub fn translate_model(model: &PdmnModel) -> TranslationOutput {
    let g = &model.glossary;
    let mut program = LogicProgram::default();
    let mut sections = Vec::new();
    let mut provenance: Vec<Option<RowOrigin>> = Vec::new();

    let start = program.statements.len();
    for decl in &g.types {
        for stmt in translate_type(decl) {
            program.statements.push(stmt);
            provenance.push(None);
        }
    }
    for table in &model.facts {
        for stmt in translate_fact_table(g, table) {
            program.statements.push(stmt);
            provenance.push(None);
        }
    }
    sections.push(Section { title: Some("facts".into()), range: start..program.statements.len() });

    for table in &model.tables {
        let start = program.statements.len();
        let stmts = match table.policy {
            HitPolicy::Unique | HitPolicy::Any => translate_u_table(g, table),
            HitPolicy::First => translate_f_table(g, table),
            HitPolicy::Choice => translate_ch_table(g, table),
        };
        for (stmt, row) in stmts {
            program.statements.push(stmt);
            provenance.push(Some(RowOrigin { table: table.name.clone(), row }));
        }
        sections.push(Section {
            title: Some(table.name.clone()),
            range: start..program.statements.len(),
        });
    }

    program.queries = translate_queries(&model.queries, g);

    let mut symbol_table = Vec::new();
    for p in &g.predicates {
        symbol_table.push(SymbolInfo {
            raw_name: p.raw_name.clone(),
            symbol: p.mangled.clone(),
            arity: p.arg_types.len(),
        });
    }
    for f in &g.functions {
        symbol_table.push(SymbolInfo {
            raw_name: f.raw_name.clone(),
            symbol: f.mangled.clone(),
            arity: f.arg_types.len() + 1,
        });
    }

    TranslationOutput { program, sections, provenance, symbol_table }
}

/// One unary fact per element, in declaration order.
pub fn translate_type(decl: &TypeDecl) -> Vec<Statement> {
    decl.elements
        .iter()
        .map(|e| Statement::Fact(Atom::new(decl.mangled.clone(), vec![element_term(e)])))
        .collect()
}

pub fn translate_fact_table(g: &Glossary, table: &FactTable) -> Vec<Statement> {
    table
        .rows
        .iter()
        .map(|row| {
            let mut args: Vec<Term> = row.args.iter().map(element_term).collect();
            if let Some(v) = &row.value {
                args.push(element_term(v));
            }
            Statement::Fact(Atom::new(g.mangled(row.target).to_string(), args))
        })
        .collect()
}

fn element_term(e: &Element) -> Term {
    match e {
        Element::Symbol(s) => Term::sym(s.to_ascii_lowercase()),
        Element::Number(n) => Term::Const(crate::plcore::Constant::Num(n.clone())),
    }
}

fn binding_term(b: &Binding) -> Term {
    match b {
        Binding::Var(v) => Term::var(v.clone()),
        Binding::Elem(e) => element_term(e),
    }
}

fn header_atom(g: &Glossary, header: &ColumnHeader, value: Option<Term>) -> Atom {
    let mut args: Vec<Term> = header.bindings.iter().map(binding_term).collect();
    if let Some(v) = value {
        args.push(v);
    }
    Atom::new(g.mangled(header.target).to_string(), args)
}

/// Quantifier variables of a table with their types, in header order
/// (inputs, then outputs); cell variables are appended when rows are walked.
fn table_vars(g: &Glossary, table: &DecisionTable) -> Vec<(String, usize)> {
    let mut vars: Vec<(String, usize)> = Vec::new();
    let mut add = |v: &str, t: usize| {
        if !vars.iter().any(|(name, _)| name == v) {
            vars.push((v.to_string(), t));
        }
    };
    for header in table.inputs.iter().chain(&table.outputs) {
        let types = g.arg_types(header.target);
        for (binding, t) in header.bindings.iter().zip(types) {
            if let Binding::Var(v) = binding {
                add(v, *t);
            }
        }
    }
    for row in &table.rows {
        for (col, cell) in row.inputs.iter().enumerate() {
            if let CellExpr::Var(v) = cell {
                if let Some(t) = g.range_type(table.inputs[col].target) {
                    add(v, t);
                }
            }
        }
    }
    vars
}

fn type_atoms(g: &Glossary, vars: &[(String, usize)]) -> Vec<Literal> {
    vars.iter()
        .map(|(v, t)| {
            Literal::pos(Atom::new(g.types[*t].mangled.clone(), vec![Term::var(v.clone())]))
        })
        .collect()
}

/// Expands one row's input cells into alternative literal lists (the
/// cartesian product over per-column matches; comparisons and value sets
/// yield one alternative per matching element).
fn row_conditions(g: &Glossary, table: &DecisionTable, row: &RuleRow) -> Vec<Vec<Literal>> {
    let mut alternatives: Vec<Vec<Literal>> = vec![Vec::new()];
    for (col, cell) in row.inputs.iter().enumerate() {
        let header = &table.inputs[col];
        let options: Vec<Option<Literal>> = match cell {
            CellExpr::DontCare => vec![None],
            CellExpr::Bool(b) => {
                let atom = header_atom(g, header, None);
                vec![Some(if *b { Literal::pos(atom) } else { Literal::neg(atom) })]
            }
            CellExpr::Value(e) => {
                vec![Some(Literal::pos(header_atom(g, header, Some(element_term(e)))))]
            }
            CellExpr::Var(v) => {
                vec![Some(Literal::pos(header_atom(g, header, Some(Term::var(v.clone())))))]
            }
            CellExpr::ValueSet(es) => es
                .iter()
                .map(|e| Some(Literal::pos(header_atom(g, header, Some(element_term(e))))))
                .collect(),
            CellExpr::Comparison(op, bound) => matching_elements(g, header, |n| op.holds(n, bound))
                .into_iter()
                .map(|e| Some(Literal::pos(header_atom(g, header, Some(element_term(&e))))))
                .collect(),
            CellExpr::Range(lo, hi) => matching_elements(g, header, |n| n >= lo && n <= hi)
                .into_iter()
                .map(|e| Some(Literal::pos(header_atom(g, header, Some(element_term(&e))))))
                .collect(),
            CellExpr::Prob(_) => vec![None],
        };
        let mut next = Vec::with_capacity(alternatives.len() * options.len().max(1));
        for base in &alternatives {
            for opt in &options {
                let mut body = base.clone();
                if let Some(lit) = opt {
                    body.push(lit.clone());
                }
                next.push(body);
            }
        }
        alternatives = next;
    }
    alternatives
}

fn matching_elements(
    g: &Glossary,
    header: &ColumnHeader,
    pred: impl Fn(&num::rational::BigRational) -> bool,
) -> Vec<Element> {
    let Some(t) = g.range_type(header.target) else {
        return Vec::new();
    };
    g.types[t]
        .elements
        .iter()
        .filter(|e| e.as_number().is_some_and(&pred))
        .cloned()
        .collect()
}

enum SlotOutcome {
    Skip,
    Head(Atom, Option<Probability>),
}

/// What one output slot of one row contributes: nothing (closed world) or a
/// head atom with an optional probability annotation.
fn slot_outcome(g: &Glossary, table: &DecisionTable, row: &RuleRow, slot: usize) -> SlotOutcome {
    let header = &table.outputs[table.output_slots[slot]];
    match &table.value_row {
        Some(values) => {
            let p = match &row.outputs[slot] {
                CellExpr::Prob(p) => p.clone(),
                _ => return SlotOutcome::Skip,
            };
            if p.is_zero() {
                return SlotOutcome::Skip;
            }
            let atom = match &values[slot] {
                OutputValue::Bool(false) => return SlotOutcome::Skip,
                OutputValue::Bool(true) => header_atom(g, header, None),
                OutputValue::Elem(e) => header_atom(g, header, Some(element_term(e))),
            };
            let prob = if p.is_one() { None } else { Some(p) };
            SlotOutcome::Head(atom, prob)
        }
        None => match &row.outputs[slot] {
            CellExpr::Bool(false) | CellExpr::DontCare => SlotOutcome::Skip,
            CellExpr::Bool(true) => SlotOutcome::Head(header_atom(g, header, None), None),
            CellExpr::Value(e) => {
                SlotOutcome::Head(header_atom(g, header, Some(element_term(e))), None)
            }
            _ => SlotOutcome::Skip,
        },
    }
}

fn make_statement(head: Atom, body: Vec<Literal>, prob: Option<Probability>) -> Statement {
    match (body.is_empty(), prob) {
        (true, None) => Statement::Fact(head),
        (true, Some(p)) => Statement::ProbFact(p, head),
        (false, prob) => Statement::Clause(Clause { head, body, probability: prob }),
    }
}

/// Unique and Any tables: one clause per row, output column, and expanded
/// input alternative. Rows whose output is No (or probability 0) vanish.
pub fn translate_u_table(g: &Glossary, table: &DecisionTable) -> Vec<(Statement, usize)> {
    let vars = table_vars(g, table);
    let types = type_atoms(g, &vars);
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let conditions = row_conditions(g, table, row);
        for slot in 0..table.output_slots.len() {
            let SlotOutcome::Head(head, prob) = slot_outcome(g, table, row, slot) else {
                continue;
            };
            for condition in &conditions {
                let mut body = condition.clone();
                body.extend(types.iter().cloned());
                out.push((make_statement(head.clone(), body, prob.clone()), i + 1));
            }
        }
    }
    out
}

/// First-hit tables: a synthetic `<table>_r<i>` atom per row captures whether
/// the row fires; each output clause negates every earlier row's atom.
/// Trailing all-No rows are dropped entirely (no later row needs them).
pub fn translate_f_table(g: &Glossary, table: &DecisionTable) -> Vec<(Statement, usize)> {
    let vars = table_vars(g, table);
    let types = type_atoms(g, &vars);
    let table_sym = mangle_name(&table.name).unwrap_or_else(|_| "table".into());
    let row_atom = |i: usize| {
        Atom::new(
            format!("{table_sym}_r{}", i + 1),
            vars.iter().map(|(v, _)| Term::var(v.clone())).collect(),
        )
    };

    let produces: Vec<bool> = (0..table.rows.len())
        .map(|i| {
            (0..table.output_slots.len())
                .any(|s| matches!(slot_outcome(g, table, &table.rows[i], s), SlotOutcome::Head(..)))
        })
        .collect();
    let last_needed = match produces.iter().rposition(|&p| p) {
        Some(i) => i,
        None => return Vec::new(),
    };

    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate().take(last_needed + 1) {
        for condition in row_conditions(g, table, row) {
            let mut body = condition;
            body.extend(types.iter().cloned());
            out.push((
                Statement::Clause(Clause { head: row_atom(i), body, probability: None }),
                i + 1,
            ));
        }
    }
    for (i, row) in table.rows.iter().enumerate().take(last_needed + 1) {
        for slot in 0..table.output_slots.len() {
            let SlotOutcome::Head(head, prob) = slot_outcome(g, table, row, slot) else {
                continue;
            };
            let mut body = vec![Literal::pos(row_atom(i))];
            for j in 0..i {
                body.push(Literal::neg(row_atom(j)));
            }
            body.extend(types.iter().cloned());
            out.push((Statement::Clause(Clause { head, body, probability: prob }), i + 1));
        }
    }
    out
}

/// Choice tables: one annotated disjunction per row. Zero-probability
/// alternatives are dropped; a lone alternative with probability 1 collapses
/// to a plain clause.
pub fn translate_ch_table(g: &Glossary, table: &DecisionTable) -> Vec<(Statement, usize)> {
    let vars = table_vars(g, table);
    let types = type_atoms(g, &vars);
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let mut alternatives = Vec::new();
        for slot in 0..table.output_slots.len() {
            if let SlotOutcome::Head(atom, prob) = slot_outcome(g, table, row, slot) {
                alternatives.push((prob.unwrap_or_else(Probability::one), atom));
            }
        }
        if alternatives.is_empty() {
            continue;
        }
        for condition in row_conditions(g, table, row) {
            let mut body = condition;
            body.extend(types.iter().cloned());
            if alternatives.len() == 1 && alternatives[0].0.is_one() {
                out.push((make_statement(alternatives[0].1.clone(), body, None), i + 1));
            } else {
                out.push((
                    Statement::Disjunction(Disjunction {
                        alternatives: alternatives.clone(),
                        body,
                    }),
                    i + 1,
                ));
            }
        }
    }
    out
}

/// Query atoms in document order; an absent Query table queries every
/// glossary symbol with fresh variables.
pub fn translate_queries(queries: &QuerySet, g: &Glossary) -> Vec<Atom> {
    queries
        .entries
        .iter()
        .map(|entry| {
            let mut args: Vec<Term> = entry.args.iter().map(binding_term).collect();
            if let Some(v) = &entry.value {
                args.push(binding_term(v));
            }
            Atom::new(g.mangled(entry.target).to_string(), args)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emit::{emit_statement, emit_translation};
    use crate::tableparse::parse_workbook;

    fn lines(model: &PdmnModel) -> Vec<String> {
        let t = translate_model(model);
        t.program.statements.iter().map(emit_statement).collect()
    }

    const COINS_TABLE: &str = "
predicate
| heads1 |
| heads2 |
| twoHeads |
| someHeads |

decision \"Heads\" U
| heads1 | heads2 || twoHeads | someHeads |
| Yes | Yes || Yes | Yes |
| Yes | No || No | Yes |
| No | Yes || No | Yes |
| No | No || No | No |
";

    #[test]
    fn u_table_matches_the_coin_rules() {
        let model = parse_workbook(COINS_TABLE, "coins.pdmn").unwrap();
        assert_eq!(
            lines(&model),
            vec![
                "twoheads :- heads1, heads2.",
                "someheads :- heads1, heads2.",
                "someheads :- heads1, not(heads2).",
                "someheads :- not(heads1), heads2.",
            ]
        );
    }

    #[test]
    fn all_no_rows_vanish() {
        let model = parse_workbook(COINS_TABLE, "coins.pdmn").unwrap();
        let t = translate_model(&model);
        // Four rows, two output columns, but the all-No row contributes nothing
        // and No cells elsewhere are skipped.
        assert_eq!(t.program.statements.len(), 4);
        assert!(t.provenance.iter().flatten().all(|o| o.row != 4));
    }

    #[test]
    fn f_table_negates_earlier_rows() {
        let source = COINS_TABLE.replace("\"Heads\" U", "\"Heads\" F");
        let model = parse_workbook(&source, "coins.pdmn").unwrap();
        assert_eq!(
            lines(&model),
            vec![
                "heads_r1 :- heads1, heads2.",
                "heads_r2 :- heads1, not(heads2).",
                "heads_r3 :- not(heads1), heads2.",
                "twoheads :- heads_r1.",
                "someheads :- heads_r1.",
                "someheads :- heads_r2, not(heads_r1).",
                "someheads :- heads_r3, not(heads_r1), not(heads_r2).",
            ]
        );
    }

    #[test]
    fn types_become_facts_and_variables_get_type_atoms() {
        let source = "
type
| Person | ann, bob |

predicate
| Person is infected |
| sick |

decision \"T\" U
| X is infected || sick |
| Yes || Yes |
";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        assert_eq!(
            lines(&model),
            vec![
                "person(ann).",
                "person(bob).",
                "sick :- person_is_infected(X), person(X).",
            ]
        );
    }

    #[test]
    fn ch_table_becomes_an_annotated_disjunction() {
        let source = "
type
| Color | red, blue |

function
| pick | Color |

decision \"Pick\" Ch
|| pick | |
|| red | blue |
|| 0.3 | 0.7 |
";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        assert_eq!(lines(&model), vec!["color(red).", "color(blue).", "0.3::pick(red); 0.7::pick(blue)."]);
    }

    #[test]
    fn value_sets_expand_to_one_clause_per_element() {
        let source = "
type
| Age | 1, 2, 3 |

function
| years | Age |

predicate
| young |

fact
| years = 1 |

decision \"T\" U
| years || young |
| < 3 || Yes |
";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        assert_eq!(
            lines(&model),
            vec![
                "age(1).",
                "age(2).",
                "age(3).",
                "years(1).",
                "young :- years(1).",
                "young :- years(2).",
            ]
        );
    }

    #[test]
    fn sections_group_statements_by_table() {
        let source = "
type
| Color | red |

function
| pick | Color |

decision \"Pick\" Ch
|| pick |
|| red |
|| 1 |
";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        let t = translate_model(&model);
        let text = emit_translation(&t);
        assert!(text.starts_with("% facts\ncolor(red).\n\n% Pick\npick(red).\n"), "unexpected: {text}");
    }
}
