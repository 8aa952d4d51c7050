//! Parser for the canonical textual workbook format.
//!
//! A workbook is a sequence of tables. Each table starts with a header line
//! (`type`, `predicate`, `function`, `decision "Name" <policy>`, `fact`,
//! `query`, or `model "Name"`) followed by pipe-delimited rows. In decision
//! tables a double pipe `||` marks the input/output boundary and must sit at
//! the same cell position in every row. Blank lines and `#` comments are
//! ignored. See docs/FORMAT.md for the full grammar.

use crate::diag::SourceSpan;
use crate::model::*;
use crate::prob::{self, Probability};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownPolicy,
    NoGlossary,
    UnknownSymbol,
    AmbiguousSymbol,
    TypeMismatch,
    UnknownElement,
    InvalidProbability,
    InvalidName,
    NotAFunction,
    DuplicateDecl,
    BadTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(kind: ParseErrorKind, message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError { kind, message: message.into(), span }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

fn model_err(e: ModelError, span: SourceSpan) -> ParseError {
    let kind = match &e {
        ModelError::InvalidName(_) => ParseErrorKind::InvalidName,
        ModelError::UnknownSymbol(_) => ParseErrorKind::UnknownSymbol,
        ModelError::AmbiguousSymbol(_) => ParseErrorKind::AmbiguousSymbol,
        ModelError::TypeMismatch(_) => ParseErrorKind::TypeMismatch,
        ModelError::NotAFunction(_) => ParseErrorKind::NotAFunction,
        ModelError::DuplicateDecl(_) => ParseErrorKind::DuplicateDecl,
        ModelError::EmptyType(_)
        | ModelError::DuplicateElement(_, _)
        | ModelError::MixedElements(_) => ParseErrorKind::BadTable,
    };
    ParseError::new(kind, e.to_string(), span)
}

// ---------------------------------------------------------------------------
// Raw scanning: lines -> tables of cells.

#[derive(Clone, Debug)]
struct RawCell {
    text: String,
    span: SourceSpan,
}

#[derive(Clone, Debug)]
struct RawRow {
    cells: Vec<RawCell>,
    /// Cell boundary index of the `||` separator, if present.
    sep: Option<usize>,
    span: SourceSpan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TableKind {
    Model,
    Type,
    Predicate,
    Function,
    Decision,
    Fact,
    Query,
}

#[derive(Clone, Debug)]
struct RawTable {
    kind: TableKind,
    name: Option<String>,
    policy: Option<HitPolicy>,
    rows: Vec<RawRow>,
    span: SourceSpan,
}

fn split_row(line: &str, file: &str, line_no: usize) -> Result<RawRow, ParseError> {
    let indent = line.len() - line.trim_start().len();
    let text = line.trim();
    let bytes = text.as_bytes();
    let at = |i: usize, len: usize| SourceSpan {
        file: file.to_string(),
        line: line_no,
        column: indent + i + 1,
        length: len,
    };
    let row_span = at(0, text.len());
    let mut cells = Vec::new();
    let mut sep = None;
    let set_sep = |sep: &mut Option<usize>, pos: usize, i: usize| {
        if sep.is_some() {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                "a row may contain at most one `||` separator",
                at(i, 2),
            ));
        }
        *sep = Some(pos);
        Ok(())
    };
    let mut i = 1;
    if bytes.get(1) == Some(&b'|') {
        set_sep(&mut sep, 0, 0)?;
        i = 2;
    }
    while i <= bytes.len() {
        if i == bytes.len() {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                "table row must end with `|`",
                at(text.len().saturating_sub(1), 1),
            ));
        }
        let j = match text[i..].find('|') {
            Some(off) => i + off,
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    "table row must end with `|`",
                    at(text.len().saturating_sub(1), 1),
                ));
            }
        };
        let raw = &text[i..j];
        let lead = raw.len() - raw.trim_start().len();
        cells.push(RawCell {
            text: raw.trim().to_string(),
            span: at(i + lead, raw.trim().len().max(1)),
        });
        i = j + 1;
        if i >= bytes.len() {
            break;
        }
        if bytes[i] == b'|' {
            set_sep(&mut sep, cells.len(), j)?;
            i += 1;
            if i >= bytes.len() {
                break;
            }
        }
    }
    Ok(RawRow { cells, sep, span: row_span })
}

fn parse_table_header(
    line: &str,
    file: &str,
    line_no: usize,
) -> Result<(TableKind, Option<String>, Option<HitPolicy>), ParseError> {
    let text = line.trim();
    let span = SourceSpan {
        file: file.to_string(),
        line: line_no,
        column: line.len() - line.trim_start().len() + 1,
        length: text.len(),
    };
    let (word, rest) = match text.split_once(char::is_whitespace) {
        Some((w, r)) => (w, r.trim()),
        None => (text, ""),
    };
    let kind = match word {
        "model" => TableKind::Model,
        "type" => TableKind::Type,
        "predicate" => TableKind::Predicate,
        "function" => TableKind::Function,
        "decision" => TableKind::Decision,
        "fact" => TableKind::Fact,
        "query" => TableKind::Query,
        _ => {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                format!("expected a table header, found `{word}`"),
                span,
            ));
        }
    };
    let (name, rest) = if let Some(after) = rest.strip_prefix('"') {
        match after.split_once('"') {
            Some((name, tail)) => (Some(name.to_string()), tail.trim()),
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    "unterminated quoted name",
                    span,
                ));
            }
        }
    } else {
        (None, rest)
    };
    let mut policy = None;
    match kind {
        TableKind::Model => {
            if name.is_none() || !rest.is_empty() {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    "expected `model \"Name\"`",
                    span,
                ));
            }
        }
        TableKind::Decision => {
            if name.is_none() {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    "decision tables need a quoted name",
                    span,
                ));
            }
            policy = Some(HitPolicy::from_letter(rest).ok_or_else(|| {
                ParseError::new(
                    ParseErrorKind::UnknownPolicy,
                    format!("unknown hit policy `{rest}` (expected U, A, F or Ch)"),
                    span.clone(),
                )
            })?);
        }
        _ => {
            if !rest.is_empty() {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    format!("unexpected `{rest}` after table header"),
                    span,
                ));
            }
        }
    }
    Ok((kind, name, policy))
}

/// One `model` section worth of raw tables.
struct RawSection {
    name: String,
    tables: Vec<RawTable>,
}

fn scan(source: &str, file: &str) -> Result<Vec<RawSection>, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut sections: Vec<RawSection> = Vec::new();
    let default_name = file_stem(file);
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if text.starts_with('|') {
            match split_row(line, file, line_no) {
                Ok(row) => match sections.last_mut().and_then(|s| s.tables.last_mut()) {
                    Some(table) => table.rows.push(row),
                    None => errors.push(ParseError::new(
                        ParseErrorKind::Syntax,
                        "table row before any table header",
                        row.span,
                    )),
                },
                Err(e) => errors.push(e),
            }
            continue;
        }
        match parse_table_header(line, file, line_no) {
            Ok((TableKind::Model, name, _)) => {
                sections.push(RawSection { name: name.unwrap(), tables: Vec::new() });
            }
            Ok((kind, name, policy)) => {
                if sections.is_empty() {
                    sections.push(RawSection { name: default_name.clone(), tables: Vec::new() });
                }
                let span = SourceSpan {
                    file: file.to_string(),
                    line: line_no,
                    column: 1,
                    length: text.len(),
                };
                sections.last_mut().unwrap().tables.push(RawTable {
                    kind,
                    name,
                    policy,
                    rows: Vec::new(),
                    span,
                });
            }
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(sections)
    } else {
        Err(errors)
    }
}

fn file_stem(file: &str) -> String {
    let base = file.rsplit(['/', '\\']).next().unwrap_or(file);
    base.strip_suffix(".pdmn").unwrap_or(base).to_string()
}

// ---------------------------------------------------------------------------
// Cell parsing.

/// Everything [`parse_cell`] needs to know about the column a cell sits in.
pub struct CellContext<'a> {
    pub glossary: &'a Glossary,
    /// `None` for predicate columns, `Some(type)` for function columns.
    pub range_type: Option<usize>,
    pub side: Side,
    /// True for output cells of a probabilistic table's rule rows, which hold
    /// probabilities rather than values.
    pub probabilistic: bool,
}

/// Parses one rule-row cell against its column.
pub fn parse_cell(text: &str, ctx: &CellContext, span: &SourceSpan) -> Result<CellExpr, ParseError> {
    let t = text.trim();
    let err = |kind, msg: String| Err(ParseError::new(kind, msg, span.clone()));
    if ctx.probabilistic && ctx.side == Side::Output {
        if t.is_empty() || t == "-" {
            return Ok(CellExpr::DontCare);
        }
        return Probability::parse(t).map(CellExpr::Prob).map_err(|e| {
            ParseError::new(ParseErrorKind::InvalidProbability, e.to_string(), span.clone())
        });
    }
    if t.is_empty() {
        return err(ParseErrorKind::Syntax, "empty cell (use `-` for don't-care)".into());
    }
    if t == "-" {
        return Ok(CellExpr::DontCare);
    }
    if t == "Yes" || t == "No" {
        if ctx.range_type.is_some() {
            return err(
                ParseErrorKind::TypeMismatch,
                "Yes/No is only valid in a predicate column".into(),
            );
        }
        return Ok(CellExpr::Bool(t == "Yes"));
    }
    if ctx.side == Side::Output
        && (t.starts_with(['<', '>', '[']) || t.contains(',') || is_quantifier_letter(t))
    {
        return err(
            ParseErrorKind::Syntax,
            "output cells take a single value (no sets, ranges or quantifiers)".into(),
        );
    }
    if ctx.range_type.is_none() {
        return err(ParseErrorKind::TypeMismatch, format!("`{t}` in a Yes/No column"));
    }
    let range = ctx.range_type.unwrap();
    let ty = &ctx.glossary.types[range];
    let numeric_bound = |s: &str| {
        prob::parse_decimal(s.trim()).ok_or_else(|| {
            ParseError::new(ParseErrorKind::Syntax, format!("`{s}` is not a number"), span.clone())
        })
    };
    let need_numeric = |what: &str| {
        if ty.is_numeric() {
            Ok(())
        } else {
            Err(ParseError::new(
                ParseErrorKind::TypeMismatch,
                format!("{what} needs a numeric column (type `{}` is symbolic)", ty.name),
                span.clone(),
            ))
        }
    };
    if let Some(rest) = t.strip_prefix("<=") {
        need_numeric("a comparison")?;
        return Ok(CellExpr::Comparison(CmpOp::Le, numeric_bound(rest)?));
    }
    if let Some(rest) = t.strip_prefix(">=") {
        need_numeric("a comparison")?;
        return Ok(CellExpr::Comparison(CmpOp::Ge, numeric_bound(rest)?));
    }
    if let Some(rest) = t.strip_prefix('<') {
        need_numeric("a comparison")?;
        return Ok(CellExpr::Comparison(CmpOp::Lt, numeric_bound(rest)?));
    }
    if let Some(rest) = t.strip_prefix('>') {
        need_numeric("a comparison")?;
        return Ok(CellExpr::Comparison(CmpOp::Gt, numeric_bound(rest)?));
    }
    if let Some(inner) = t.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| {
            ParseError::new(ParseErrorKind::Syntax, "unterminated `[lo..hi]` range", span.clone())
        })?;
        need_numeric("a range")?;
        let (lo, hi) = inner.split_once("..").ok_or_else(|| {
            ParseError::new(ParseErrorKind::Syntax, "a range is written `[lo..hi]`", span.clone())
        })?;
        let (lo, hi) = (numeric_bound(lo)?, numeric_bound(hi)?);
        if lo > hi {
            return err(ParseErrorKind::Syntax, "empty range: lower bound above upper".into());
        }
        return Ok(CellExpr::Range(lo, hi));
    }
    if t.contains(',') {
        let mut elems = Vec::new();
        for part in t.split(',') {
            let e = Element::parse(part).map_err(|e| model_err(e, span.clone()))?;
            if !ty.contains(&e) {
                return err(
                    ParseErrorKind::UnknownElement,
                    format!("`{}` is not an element of type `{}`", part.trim(), ty.name),
                );
            }
            elems.push(e);
        }
        return Ok(CellExpr::ValueSet(elems));
    }
    if is_quantifier_letter(t) {
        return Ok(CellExpr::Var(t.into()));
    }
    let e = Element::parse(t).map_err(|e| model_err(e, span.clone()))?;
    if !ty.contains(&e) {
        return err(
            ParseErrorKind::UnknownElement,
            format!("`{t}` is not an element of type `{}`", ty.name),
        );
    }
    Ok(CellExpr::Value(e))
}

fn parse_value_cell(
    text: &str,
    g: &Glossary,
    range_type: Option<usize>,
    span: &SourceSpan,
) -> Result<OutputValue, ParseError> {
    let t = text.trim();
    match range_type {
        None => match t {
            "Yes" => Ok(OutputValue::Bool(true)),
            "No" => Ok(OutputValue::Bool(false)),
            _ => Err(ParseError::new(
                ParseErrorKind::TypeMismatch,
                format!("`{t}` in a Yes/No column (expected Yes or No)"),
                span.clone(),
            )),
        },
        Some(ti) => {
            let e = Element::parse(t).map_err(|e| model_err(e, span.clone()))?;
            if !g.types[ti].contains(&e) {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownElement,
                    format!("`{t}` is not an element of type `{}`", g.types[ti].name),
                    span.clone(),
                ));
            }
            Ok(OutputValue::Elem(e))
        }
    }
}

// ---------------------------------------------------------------------------
// Table building.

fn build_decision_table(g: &Glossary, raw: &RawTable) -> Result<DecisionTable, Vec<ParseError>> {
    let name = raw.name.clone().unwrap();
    let policy = raw.policy.unwrap();
    let mut errors = Vec::new();
    let bail = |e: ParseError| Err(vec![e]);
    if raw.rows.is_empty() {
        return bail(ParseError::new(
            ParseErrorKind::BadTable,
            format!("decision table `{name}` has no rows"),
            raw.span.clone(),
        ));
    }
    let header = &raw.rows[0];
    let Some(sep) = header.sep else {
        return bail(ParseError::new(
            ParseErrorKind::Syntax,
            "decision table header needs a `||` input/output separator",
            header.span.clone(),
        ));
    };
    let width = header.cells.len();
    if sep >= width {
        return bail(ParseError::new(
            ParseErrorKind::BadTable,
            format!("decision table `{name}` has no output column"),
            header.span.clone(),
        ));
    }

    let mut inputs = Vec::new();
    for cell in &header.cells[..sep] {
        if cell.text.is_empty() {
            errors.push(ParseError::new(
                ParseErrorKind::Syntax,
                "input header cells must name a glossary entry",
                cell.span.clone(),
            ));
            continue;
        }
        match g.resolve_header(&cell.text) {
            Ok((target, bindings)) => inputs.push(ColumnHeader {
                target,
                bindings,
                side: Side::Input,
                span: cell.span.clone(),
            }),
            Err(e) => errors.push(model_err(e, cell.span.clone())),
        }
    }

    let mut outputs: Vec<ColumnHeader> = Vec::new();
    let mut output_slots = Vec::new();
    for cell in &header.cells[sep..] {
        if cell.text.is_empty() {
            // Continuation: another value slot for the previous header.
            if outputs.is_empty() {
                errors.push(ParseError::new(
                    ParseErrorKind::Syntax,
                    "the first output header cell must name a glossary entry",
                    cell.span.clone(),
                ));
                continue;
            }
            output_slots.push(outputs.len() - 1);
            continue;
        }
        match g.resolve_header(&cell.text) {
            Ok((target, bindings)) => {
                outputs.push(ColumnHeader {
                    target,
                    bindings,
                    side: Side::Output,
                    span: cell.span.clone(),
                });
                output_slots.push(outputs.len() - 1);
            }
            Err(e) => errors.push(model_err(e, cell.span.clone())),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    // Quantifier letters must be typed consistently across the whole table.
    let mut var_types: Vec<(String, usize, String)> = Vec::new();
    let mut note_var = |v: &str, t: usize, span: &SourceSpan, errors: &mut Vec<ParseError>| {
        match var_types.iter().find(|(name, _, _)| name == v) {
            Some((_, t0, ty_name)) if *t0 != t => errors.push(ParseError::new(
                ParseErrorKind::TypeMismatch,
                format!("quantifier `{v}` is used both as `{ty_name}` and as `{}`", ty_name_of(g, t)),
                span.clone(),
            )),
            Some(_) => {}
            None => var_types.push((v.to_string(), t, ty_name_of(g, t))),
        }
    };
    for h in inputs.iter().chain(&outputs) {
        let types = g.arg_types(h.target);
        for (b, t) in h.bindings.iter().zip(types) {
            if let Binding::Var(v) = b {
                note_var(v, *t, &h.span, &mut errors);
            }
        }
    }

    // Body rows: an optional leading value row (all input cells empty), then
    // rule rows. Zero-input tables are always in value-row form.
    let body = &raw.rows[1..];
    for row in body {
        if row.cells.len() != width || row.sep != Some(sep) {
            errors.push(ParseError::new(
                ParseErrorKind::BadTable,
                format!(
                    "row has {} cells with `||` at {:?}, but the header has {width} cells with `||` at {sep}",
                    row.cells.len(),
                    row.sep
                ),
                row.span.clone(),
            ));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let is_value_row = |row: &RawRow| row.cells[..sep].iter().all(|c| c.text.is_empty());
    let value_row_present = body.first().is_some_and(is_value_row) || sep == 0;
    if let Some(pos) = body.iter().skip(1).position(|r| sep > 0 && is_value_row(r)) {
        return bail(ParseError::new(
            ParseErrorKind::BadTable,
            "only the first body row may be an output value row",
            body[pos + 1].span.clone(),
        ));
    }
    if value_row_present && body.is_empty() {
        return bail(ParseError::new(
            ParseErrorKind::BadTable,
            format!("decision table `{name}` needs an output value row and at least one rule row"),
            raw.span.clone(),
        ));
    }

    let slot_range = |slot: usize| g.range_type(outputs[output_slots[slot]].target);
    let value_row = if value_row_present {
        let row = &body[0];
        let mut values = Vec::new();
        for (slot, cell) in row.cells[sep..].iter().enumerate() {
            match parse_value_cell(&cell.text, g, slot_range(slot), &cell.span) {
                Ok(v) => values.push(v),
                Err(e) => errors.push(e),
            }
        }
        Some(values)
    } else {
        None
    };
    if policy == HitPolicy::Choice && value_row.is_none() {
        return bail(ParseError::new(
            ParseErrorKind::BadTable,
            format!("Ch table `{name}` needs an output value row (its rule rows hold probabilities)"),
            raw.span.clone(),
        ));
    }

    let probabilistic = value_row.is_some();
    let mut rows = Vec::new();
    for row in &body[if probabilistic { 1 } else { 0 }..] {
        let mut cells_in = Vec::new();
        for (col, cell) in row.cells[..sep].iter().enumerate() {
            let ctx = CellContext {
                glossary: g,
                range_type: g.range_type(inputs[col].target),
                side: Side::Input,
                probabilistic,
            };
            match parse_cell(&cell.text, &ctx, &cell.span) {
                Ok(expr) => {
                    if let CellExpr::Var(v) = &expr {
                        match ctx.range_type {
                            Some(t) => note_var(v, t, &cell.span, &mut errors),
                            None => errors.push(ParseError::new(
                                ParseErrorKind::TypeMismatch,
                                "a quantifier cell needs a function column",
                                cell.span.clone(),
                            )),
                        }
                    }
                    cells_in.push(expr);
                }
                Err(e) => errors.push(e),
            }
        }
        let mut cells_out = Vec::new();
        for (slot, cell) in row.cells[sep..].iter().enumerate() {
            let ctx = CellContext {
                glossary: g,
                range_type: slot_range(slot),
                side: Side::Output,
                probabilistic,
            };
            match parse_cell(&cell.text, &ctx, &cell.span) {
                Ok(expr) => cells_out.push(expr),
                Err(e) => errors.push(e),
            }
        }
        rows.push(RuleRow { inputs: cells_in, outputs: cells_out, span: row.span.clone() });
    }

    if errors.is_empty() {
        Ok(DecisionTable {
            name,
            policy,
            inputs,
            outputs,
            output_slots,
            value_row,
            rows,
            span: raw.span.clone(),
        })
    } else {
        Err(errors)
    }
}

fn ty_name_of(g: &Glossary, t: usize) -> String {
    g.types[t].name.clone()
}

/// Parses one fact-table cell, e.g. `ann contacted bob` or
/// `vaccine of ann = a`. Fact atoms must be ground.
pub fn parse_fact_cell(text: &str, g: &Glossary, span: &SourceSpan) -> Result<FactAtom, ParseError> {
    let (lhs, rhs) = match text.split_once('=') {
        Some((l, r)) => (l.trim(), Some(r.trim())),
        None => (text.trim(), None),
    };
    let (target, bindings) = g.resolve_header(lhs).map_err(|e| model_err(e, span.clone()))?;
    let mut args = Vec::new();
    for b in bindings {
        match b {
            Binding::Elem(e) => args.push(e),
            Binding::Var(_) => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    "fact rows must be ground (no quantifier letters)",
                    span.clone(),
                ));
            }
        }
    }
    let value = match (g.range_type(target), rhs) {
        (None, None) => None,
        (None, Some(_)) => {
            return Err(ParseError::new(
                ParseErrorKind::NotAFunction,
                format!("`{lhs}` is a predicate, not a function"),
                span.clone(),
            ));
        }
        (Some(_), None) => {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                format!("function fact `{lhs}` needs a value (`= v`)"),
                span.clone(),
            ));
        }
        (Some(t), Some(rhs)) => {
            let e = Element::parse(rhs).map_err(|e| model_err(e, span.clone()))?;
            if !g.types[t].contains(&e) {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownElement,
                    format!("`{rhs}` is not an element of type `{}`", g.types[t].name),
                    span.clone(),
                ));
            }
            Some(e)
        }
    };
    Ok(FactAtom { target, args, value, span: span.clone() })
}

/// Parses one query-table cell, e.g. `twoHeads`, `X is infected`, or
/// `vaccine of ann = a`. A function queried without `= v` gets a fresh
/// quantifier for its value.
pub fn parse_query_cell(
    text: &str,
    g: &Glossary,
    span: &SourceSpan,
) -> Result<QueryEntry, ParseError> {
    let (lhs, rhs) = match text.split_once('=') {
        Some((l, r)) => (l.trim(), Some(r.trim())),
        None => (text.trim(), None),
    };
    let (target, args) = g.resolve_header(lhs).map_err(|e| model_err(e, span.clone()))?;
    let value = match (g.range_type(target), rhs) {
        (None, None) => None,
        (None, Some(_)) => {
            return Err(ParseError::new(
                ParseErrorKind::NotAFunction,
                format!("`{lhs}` is a predicate, not a function"),
                span.clone(),
            ));
        }
        (Some(_), Some(v)) if is_quantifier_letter(v) => Some(Binding::Var(v.into())),
        (Some(t), Some(v)) => {
            let e = Element::parse(v).map_err(|e| model_err(e, span.clone()))?;
            if !g.types[t].contains(&e) {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownElement,
                    format!("`{v}` is not an element of type `{}`", g.types[t].name),
                    span.clone(),
                ));
            }
            Some(Binding::Elem(e))
        }
        (Some(_), None) => {
            let used: Vec<String> = args
                .iter()
                .filter_map(|b| match b {
                    Binding::Var(v) => Some(v.clone()),
                    _ => None,
                })
                .collect();
            let fresh = fresh_letters(&used).next().unwrap();
            Some(Binding::Var(fresh))
        }
    };
    Ok(QueryEntry { target, args, value, span: span.clone() })
}

// ---------------------------------------------------------------------------
// Whole-workbook assembly.

fn build_model(section: &RawSection) -> Result<PdmnModel, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut glossary = Glossary::default();

    for table in section.tables.iter().filter(|t| t.kind == TableKind::Type) {
        for row in &table.rows {
            if row.cells.len() != 2 {
                errors.push(ParseError::new(
                    ParseErrorKind::BadTable,
                    "a type row is `| Name | element, element, ... |`",
                    row.span.clone(),
                ));
                continue;
            }
            let name = row.cells[0].text.clone();
            let mut elements = Vec::new();
            let mut bad = false;
            for part in row.cells[1].text.split(',') {
                match Element::parse(part) {
                    Ok(e) => elements.push(e),
                    Err(e) => {
                        errors.push(model_err(e, row.cells[1].span.clone()));
                        bad = true;
                    }
                }
            }
            if bad {
                continue;
            }
            match TypeDecl::new(&name, elements, row.span.clone())
                .and_then(|decl| glossary.add_type(decl))
            {
                Ok(()) => {}
                Err(e) => errors.push(model_err(e, row.span.clone())),
            }
        }
    }
    for table in &section.tables {
        match table.kind {
            TableKind::Predicate => {
                for row in &table.rows {
                    if row.cells.len() != 1 {
                        errors.push(ParseError::new(
                            ParseErrorKind::BadTable,
                            "a predicate row is `| name with Type slots |`",
                            row.span.clone(),
                        ));
                        continue;
                    }
                    if let Err(e) = glossary.add_predicate(&row.cells[0].text, row.span.clone()) {
                        errors.push(model_err(e, row.span.clone()));
                    }
                }
            }
            TableKind::Function => {
                for row in &table.rows {
                    if row.cells.len() != 2 {
                        errors.push(ParseError::new(
                            ParseErrorKind::BadTable,
                            "a function row is `| name with Type slots | RangeType |`",
                            row.span.clone(),
                        ));
                        continue;
                    }
                    if let Err(e) = glossary.add_function(
                        &row.cells[0].text,
                        &row.cells[1].text,
                        row.span.clone(),
                    ) {
                        errors.push(model_err(e, row.span.clone()));
                    }
                }
            }
            _ => {}
        }
    }

    let mut tables = Vec::new();
    let mut facts = Vec::new();
    let mut query_entries = Vec::new();
    let mut saw_query_table = false;
    for table in &section.tables {
        match table.kind {
            TableKind::Decision => {
                if tables.iter().any(|t: &DecisionTable| Some(&t.name) == table.name.as_ref()) {
                    errors.push(ParseError::new(
                        ParseErrorKind::DuplicateDecl,
                        format!("duplicate decision table `{}`", table.name.as_deref().unwrap_or("")),
                        table.span.clone(),
                    ));
                    continue;
                }
                match build_decision_table(&glossary, table) {
                    Ok(t) => tables.push(t),
                    Err(mut es) => errors.append(&mut es),
                }
            }
            TableKind::Fact => {
                let mut rows = Vec::new();
                for row in &table.rows {
                    for cell in row.cells.iter().filter(|c| !c.text.is_empty()) {
                        match parse_fact_cell(&cell.text, &glossary, &cell.span) {
                            Ok(atom) => rows.push(atom),
                            Err(e) => errors.push(e),
                        }
                    }
                }
                facts.push(FactTable { name: table.name.clone(), rows, span: table.span.clone() });
            }
            TableKind::Query => {
                saw_query_table = true;
                for row in &table.rows {
                    for cell in row.cells.iter().filter(|c| !c.text.is_empty()) {
                        match parse_query_cell(&cell.text, &glossary, &cell.span) {
                            Ok(entry) => query_entries.push(entry),
                            Err(e) => errors.push(e),
                        }
                    }
                }
            }
            _ => {}
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let queries = if saw_query_table {
        QuerySet { entries: query_entries, implicit_all: false }
    } else {
        QuerySet::all_symbols(&glossary)
    };
    Ok(PdmnModel { name: section.name.clone(), glossary, tables, facts, queries })
}

/// Parses every `model` section of a workbook. `file` is used in error spans
/// and, when the workbook has no `model` line, as the model name.
pub fn parse_workbook_all(source: &str, file: &str) -> Result<Vec<PdmnModel>, Vec<ParseError>> {
    let sections = scan(source, file)?;
    if sections.iter().all(|s| s.tables.is_empty()) {
        return Err(vec![ParseError::new(
            ParseErrorKind::NoGlossary,
            "no glossary Type table found",
            SourceSpan { file: file.to_string(), line: 1, column: 1, length: 0 },
        )]);
    }
    let mut models = Vec::new();
    let mut errors = Vec::new();
    for section in &sections {
        match build_model(section) {
            Ok(m) => models.push(m),
            Err(mut es) => errors.append(&mut es),
        }
    }
    if errors.is_empty() {
        Ok(models)
    } else {
        Err(errors)
    }
}

/// Parses a single-model workbook.
pub fn parse_workbook(source: &str, file: &str) -> Result<PdmnModel, Vec<ParseError>> {
    let mut models = parse_workbook_all(source, file)?;
    if models.len() > 1 {
        return Err(vec![ParseError::new(
            ParseErrorKind::Syntax,
            format!("workbook defines {} models; pick one", models.len()),
            SourceSpan { file: file.to_string(), line: 1, column: 1, length: 0 },
        )]);
    }
    Ok(models.pop().unwrap())
}

// ---------------------------------------------------------------------------
// Rendering (the inverse of parsing).

fn render_cell(expr: &CellExpr) -> String {
    match expr {
        CellExpr::DontCare => "-".into(),
        CellExpr::Value(e) => e.to_string(),
        CellExpr::ValueSet(es) => {
            es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
        }
        CellExpr::Comparison(op, n) => format!("{} {}", op.symbol(), render_number(n)),
        CellExpr::Range(lo, hi) => format!("[{}..{}]", render_number(lo), render_number(hi)),
        CellExpr::Bool(true) => "Yes".into(),
        CellExpr::Bool(false) => "No".into(),
        CellExpr::Var(v) => v.clone(),
        CellExpr::Prob(p) => p.render_source(),
    }
}

fn render_number(n: &num::rational::BigRational) -> String {
    prob::decimal_exact(n).unwrap_or_else(|| prob::fraction_string(n))
}

fn render_row(cells: &[String], sep: usize) -> String {
    let mut out = String::from("|");
    for (i, cell) in cells.iter().enumerate() {
        if i == sep {
            out.push('|');
        }
        out.push(' ');
        out.push_str(cell);
        out.push_str(" |");
    }
    if sep == cells.len() {
        out.push('|');
    }
    out
}

/// Renders a model back into workbook text. Parsing the result yields an
/// equivalent model.
pub fn render_workbook(model: &PdmnModel) -> String {
    let g = &model.glossary;
    let mut out = format!("model \"{}\"\n", model.name);
    if !g.types.is_empty() {
        out.push_str("\ntype\n");
        for t in &g.types {
            let elems = t.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
            out.push_str(&render_row(&[t.name.clone(), elems], usize::MAX));
            out.push('\n');
        }
    }
    if !g.predicates.is_empty() {
        out.push_str("\npredicate\n");
        for p in &g.predicates {
            out.push_str(&render_row(&[p.raw_name.clone()], usize::MAX));
            out.push('\n');
        }
    }
    if !g.functions.is_empty() {
        out.push_str("\nfunction\n");
        for f in &g.functions {
            out.push_str(&render_row(
                &[f.raw_name.clone(), g.types[f.range_type].name.clone()],
                usize::MAX,
            ));
            out.push('\n');
        }
    }
    for table in &model.tables {
        out.push_str(&format!("\ndecision \"{}\" {}\n", table.name, table.policy.letter()));
        let sep = table.inputs.len();
        let mut header: Vec<String> =
            table.inputs.iter().map(|h| g.render_header(h.target, &h.bindings)).collect();
        let mut prev = usize::MAX;
        for &idx in &table.output_slots {
            if idx == prev {
                header.push(String::new());
            } else {
                let h = &table.outputs[idx];
                header.push(g.render_header(h.target, &h.bindings));
                prev = idx;
            }
        }
        out.push_str(&render_row(&header, sep));
        out.push('\n');
        if let Some(values) = &table.value_row {
            let mut cells = vec![String::new(); sep];
            cells.extend(values.iter().map(|v| v.to_string()));
            out.push_str(&render_row(&cells, sep));
            out.push('\n');
        }
        for row in &table.rows {
            let mut cells: Vec<String> = row.inputs.iter().map(render_cell).collect();
            cells.extend(row.outputs.iter().map(render_cell));
            out.push_str(&render_row(&cells, sep));
            out.push('\n');
        }
    }
    for table in &model.facts {
        match &table.name {
            Some(n) => out.push_str(&format!("\nfact \"{n}\"\n")),
            None => out.push_str("\nfact\n"),
        }
        for row in &table.rows {
            let args: Vec<Binding> = row.args.iter().cloned().map(Binding::Elem).collect();
            let mut text = g.render_header(row.target, &args);
            if let Some(v) = &row.value {
                text.push_str(&format!(" = {v}"));
            }
            out.push_str(&render_row(&[text], usize::MAX));
            out.push('\n');
        }
    }
    if !model.queries.implicit_all {
        out.push_str("\nquery\n");
        for entry in &model.queries.entries {
            let mut text = g.render_header(entry.target, &entry.args);
            if let Some(v) = &entry.value {
                let rhs = match v {
                    Binding::Var(x) => x.clone(),
                    Binding::Elem(e) => e.to_string(),
                };
                text.push_str(&format!(" = {rhs}"));
            }
            out.push_str(&render_row(&[text], usize::MAX));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const COINS: &str = r#"
model "Coins"

predicate
| heads1 |
| heads2 |
| twoHeads |

decision "Heads1" U
|| heads1 |
|| Yes |
|| 0.5 |

decision "TwoHeads" U
| heads1 | heads2 || twoHeads |
| Yes | Yes || Yes |

query
| twoHeads |
"#;

    #[test]
    fn parses_a_small_workbook() {
        let model = parse_workbook(COINS, "coins.pdmn").unwrap();
        assert_eq!(model.name, "Coins");
        assert_eq!(model.glossary.predicates.len(), 3);
        assert_eq!(model.tables.len(), 2);
        let h1 = &model.tables[0];
        assert_eq!(h1.policy, HitPolicy::Unique);
        assert!(h1.is_probabilistic());
        assert_eq!(h1.value_row, Some(vec![OutputValue::Bool(true)]));
        assert_eq!(h1.rows.len(), 1);
        let th = &model.tables[1];
        assert!(!th.is_probabilistic());
        assert_eq!(th.inputs.len(), 2);
        assert_eq!(th.rows[0].inputs, vec![CellExpr::Bool(true), CellExpr::Bool(true)]);
        assert_eq!(model.queries.entries.len(), 1);
        assert!(!model.queries.implicit_all);
    }

    #[test]
    fn missing_query_table_queries_everything() {
        let source = "predicate\n| p |\n\ndecision \"P\" U\n|| p |\n|| Yes |\n|| 0.5 |\n";
        let model = parse_workbook(source, "t.pdmn").unwrap();
        assert!(model.queries.implicit_all);
        assert_eq!(model.queries.entries.len(), 1);
        assert_eq!(model.name, "t");
    }

    #[test]
    fn empty_input_is_an_error() {
        let errs = parse_workbook("", "x.pdmn").unwrap_err();
        assert_eq!(errs[0].kind, ParseErrorKind::NoGlossary);
        assert_eq!(errs[0].message, "no glossary Type table found");
    }

    #[test]
    fn query_only_workbook_reports_unknown_symbols() {
        let errs = parse_workbook("query\n| mystery |\n| wat |\n", "x.pdmn").unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(errs.iter().all(|e| e.kind == ParseErrorKind::UnknownSymbol));
    }

    #[test]
    fn unknown_policy_is_rejected() {
        let errs =
            parse_workbook("decision \"T\" Z\n| p || q |\n", "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.kind == ParseErrorKind::UnknownPolicy));
    }

    #[test]
    fn separator_must_line_up() {
        let source = "predicate\n| p |\n| q |\n\ndecision \"T\" U\n| p || q |\n| Yes | Yes |\n";
        let errs = parse_workbook(source, "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.kind == ParseErrorKind::BadTable));
    }

    #[test]
    fn at_most_one_separator() {
        let err = split_row("| a || b || c |", "x", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn spans_point_at_the_cell() {
        let row = split_row("| abc | de |", "x.pdmn", 7).unwrap();
        assert_eq!(row.cells[0].span.line, 7);
        assert_eq!(row.cells[0].span.column, 3);
        assert_eq!(row.cells[1].span.column, 9);
    }

    #[test]
    fn continuation_headers_share_one_output() {
        let source = "type\n| Color | red, blue |\n\nfunction\n| pick | Color |\n\n\
            decision \"Pick\" Ch\n|| pick | |\n|| red | blue |\n|| 0.5 | 0.5 |\n";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        let t = &model.tables[0];
        assert_eq!(t.outputs.len(), 1);
        assert_eq!(t.output_slots, vec![0, 0]);
        assert_eq!(t.value_row.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn comparisons_and_sets_need_the_right_columns() {
        let base = "type\n| Age | 1, 2, 3 |\n| Color | red, blue |\n\nfunction\n\
            | years | Age |\n| shade | Color |\n\npredicate\n| ok |\n\n";
        // Comparison against a symbolic type.
        let bad = format!("{base}decision \"T\" U\n| shade || ok |\n| < 2 || Yes |\n");
        let errs = parse_workbook(&bad, "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.kind == ParseErrorKind::TypeMismatch));
        // Range and set on a numeric input are fine.
        let good = format!(
            "{base}decision \"T\" U\n| years || ok |\n| [1..2] || Yes |\n| 1, 3 || Yes |\n"
        );
        let model = parse_workbook(&good, "x.pdmn").unwrap();
        let rows = &model.tables[0].rows;
        assert!(matches!(rows[0].inputs[0], CellExpr::Range(_, _)));
        assert!(matches!(rows[1].inputs[0], CellExpr::ValueSet(_)));
        // Sets are input-only.
        let bad = format!("{base}decision \"T\" U\n| ok || years |\n| Yes || 1, 2 |\n");
        let errs = parse_workbook(&bad, "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.kind == ParseErrorKind::Syntax));
    }

    #[test]
    fn quantifier_types_must_agree() {
        let source = "type\n| Person | ann |\n| Color | red |\n\nfunction\n\
            | color of Person | Color |\n\npredicate\n| ok |\n\n\
            decision \"T\" U\n| color of X || ok |\n| X || Yes |\n";
        let errs = parse_workbook(source, "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.kind == ParseErrorKind::TypeMismatch));
    }

    #[test]
    fn facts_must_be_ground() {
        let source = "type\n| Person | ann |\n\npredicate\n| Person waves |\n\n\
            fact\n| X waves |\n";
        let errs = parse_workbook(source, "x.pdmn").unwrap_err();
        assert!(errs.iter().any(|e| e.message.contains("ground")));
    }

    #[test]
    fn function_queries_default_to_a_fresh_value_variable() {
        let source = "type\n| Color | red |\n\nfunction\n| pick | Color |\n\n\
            decision \"C\" Ch\n|| pick |\n|| red |\n|| 1 |\n\nquery\n| pick |\n";
        let model = parse_workbook(source, "x.pdmn").unwrap();
        assert_eq!(model.queries.entries[0].value, Some(Binding::Var("X".into())));
    }

    #[test]
    fn multiple_models_roundtrip_through_parse_workbook_all() {
        let source = "model \"A\"\npredicate\n| p |\n\nmodel \"B\"\npredicate\n| q |\n";
        let models = parse_workbook_all(source, "x.pdmn").unwrap();
        assert_eq!(models.len(), 2);
        assert_eq!(models[1].name, "B");
        assert!(parse_workbook(source, "x.pdmn").is_err());
    }

    #[test]
    fn render_parse_render_is_stable() {
        for source in [COINS] {
            let model = parse_workbook(source, "x.pdmn").unwrap();
            let rendered = render_workbook(&model);
            let reparsed = parse_workbook(&rendered, "x.pdmn").unwrap();
            assert_eq!(render_workbook(&reparsed), rendered);
        }
    }
}
