//! Model validation. Diagnostics come back in document order and never abort
//! the pipeline; the caller decides what an Error means.

use super::*;
use crate::diag::{DiagCode, Diagnostic};
use num::Zero;
use std::collections::HashSet;

pub fn validate_model(model: &PdmnModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let defined = defined_symbols(model);
    let mut reported_undefined: HashSet<SymbolRef> = HashSet::new();

    for table in &model.tables {
        check_undefined_inputs(model, table, &defined, &mut reported_undefined, &mut diags);
        check_choice_mass(model, table, &mut diags);
        check_multi_valued_function(model, table, &mut diags);
        check_overlaps(model, table, &mut diags);
    }
    diags
}

/// Symbols given a definition somewhere: decision-table outputs and fact rows.
fn defined_symbols(model: &PdmnModel) -> HashSet<SymbolRef> {
    let mut defined = HashSet::new();
    for table in &model.tables {
        for out in &table.outputs {
            defined.insert(out.target);
        }
    }
    for facts in &model.facts {
        for row in &facts.rows {
            defined.insert(row.target);
        }
    }
    defined
}

fn check_undefined_inputs(
    model: &PdmnModel,
    table: &DecisionTable,
    defined: &HashSet<SymbolRef>,
    reported: &mut HashSet<SymbolRef>,
    diags: &mut Vec<Diagnostic>,
) {
    for input in &table.inputs {
        if !defined.contains(&input.target) && reported.insert(input.target) {
            diags.push(Diagnostic::warning(
                DiagCode::UndefinedInput,
                format!(
                    "`{}` is read by table \"{}\" but never defined by any table or fact; \
                     under the closed world it is always false",
                    model.glossary.mangled(input.target),
                    table.name
                ),
                input.span.clone(),
            ));
        }
    }
}

fn check_choice_mass(model: &PdmnModel, table: &DecisionTable, diags: &mut Vec<Diagnostic>) {
    let _ = model;
    if table.policy != HitPolicy::Choice {
        return;
    }
    for (i, row) in table.rows.iter().enumerate() {
        let mut sum = num::BigRational::zero();
        for cell in &row.outputs {
            if let CellExpr::Prob(p) = cell {
                sum += p.value();
            }
        }
        if sum > num::BigRational::from_integer(1.into()) {
            diags.push(Diagnostic::error(
                DiagCode::ChoiceRowMass,
                format!(
                    "row {} of Choice table \"{}\" assigns total probability {} > 1",
                    i + 1,
                    table.name,
                    crate::prob::fraction_string(&sum)
                ),
                row.span.clone(),
            ));
        }
    }
}

fn check_multi_valued_function(
    model: &PdmnModel,
    table: &DecisionTable,
    diags: &mut Vec<Diagnostic>,
) {
    if table.policy == HitPolicy::Choice || !table.is_probabilistic() {
        return;
    }
    for out in &table.outputs {
        if matches!(out.target, SymbolRef::Func(_)) {
            diags.push(Diagnostic::warning(
                DiagCode::MultiValuedFunction,
                format!(
                    "table \"{}\" gives probabilistic values to function `{}` under the {} \
                     hit policy; there are outcomes in which it takes several values at once \
                     (use Ch to make the values mutually exclusive)",
                    table.name,
                    model.glossary.mangled(out.target),
                    table.policy.letter()
                ),
                out.span.clone(),
            ));
        }
    }
}

fn check_overlaps(model: &PdmnModel, table: &DecisionTable, diags: &mut Vec<Diagnostic>) {
    if !matches!(table.policy, HitPolicy::Unique | HitPolicy::Any) || table.inputs.is_empty() {
        return;
    }
    for i in 0..table.rows.len() {
        for j in i + 1..table.rows.len() {
            if !rows_overlap(model, table, &table.rows[i], &table.rows[j]) {
                continue;
            }
            match table.policy {
                HitPolicy::Unique => diags.push(Diagnostic::warning(
                    DiagCode::OverlappingRows,
                    format!(
                        "rows {} and {} of Unique table \"{}\" can match the same inputs",
                        i + 1,
                        j + 1,
                        table.name
                    ),
                    table.rows[j].span.clone(),
                )),
                HitPolicy::Any => {
                    if table.rows[i].outputs != table.rows[j].outputs {
                        diags.push(Diagnostic::error(
                            DiagCode::ConflictingAnyRows,
                            format!(
                                "rows {} and {} of Any table \"{}\" overlap but disagree on \
                                 their outputs",
                                i + 1,
                                j + 1,
                                table.name
                            ),
                            table.rows[j].span.clone(),
                        ));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
}

fn rows_overlap(model: &PdmnModel, table: &DecisionTable, a: &RuleRow, b: &RuleRow) -> bool {
    table.inputs.iter().enumerate().all(|(col, header)| {
        cells_intersect(model, header, &a.inputs[col], &b.inputs[col])
    })
}

/// Syntactic cell intersection: `None` means "matches everything".
fn cell_match_set(
    model: &PdmnModel,
    header: &ColumnHeader,
    cell: &CellExpr,
) -> Option<Vec<Element>> {
    let range = model
        .glossary
        .range_type(header.target)
        .map(|t| &model.glossary.types[t].elements[..]);
    match cell {
        CellExpr::DontCare | CellExpr::Var(_) => None,
        CellExpr::Bool(b) => Some(vec![Element::Symbol(if *b { "Yes" } else { "No" }.into())]),
        CellExpr::Value(e) => Some(vec![e.clone()]),
        CellExpr::ValueSet(es) => Some(es.clone()),
        CellExpr::Comparison(op, bound) => Some(
            range
                .unwrap_or(&[])
                .iter()
                .filter(|e| e.as_number().is_some_and(|n| op.holds(n, bound)))
                .cloned()
                .collect(),
        ),
        CellExpr::Range(lo, hi) => Some(
            range
                .unwrap_or(&[])
                .iter()
                .filter(|e| e.as_number().is_some_and(|n| n >= lo && n <= hi))
                .cloned()
                .collect(),
        ),
        CellExpr::Prob(_) => None,
    }
}

fn cells_intersect(
    model: &PdmnModel,
    header: &ColumnHeader,
    a: &CellExpr,
    b: &CellExpr,
) -> bool {
    match (cell_match_set(model, header, a), cell_match_set(model, header, b)) {
        (None, None) => true,
        (None, Some(s)) | (Some(s), None) => !s.is_empty(),
        (Some(sa), Some(sb)) => sa.iter().any(|e| sb.contains(e)),
    }
}
