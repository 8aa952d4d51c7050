//! In-memory representation of a pDMN workbook.
//!
//! A workbook is a glossary (types, predicates, functions), a list of decision
//! tables, optional fact tables, and a query set. Everything here is immutable
//! after construction; validation lives in [`validate`].

mod validate;

pub use validate::validate_model;

use crate::diag::SourceSpan;
use crate::prob::{self, Probability};
use num::rational::BigRational;
use std::fmt;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("`{0}` is not a valid name (letters, digits, spaces and underscores only, starting with a letter)")]
    InvalidName(String),
    #[error("no glossary entry matches `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` matches more than one glossary entry")]
    AmbiguousSymbol(String),
    #[error("{0}")]
    TypeMismatch(String),
    #[error("`{0}` is a predicate, not a function")]
    NotAFunction(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDecl(String),
    #[error("type `{0}` has no elements")]
    EmptyType(String),
    #[error("type `{0}` repeats element `{1}`")]
    DuplicateElement(String, String),
    #[error("type `{0}` mixes numeric and symbolic elements")]
    MixedElements(String),
}

/// One member of a type's domain: a symbolic name or an exact numeric literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Symbol(String),
    Number(BigRational),
}

impl Element {
    /// Parses a single element token: a decimal literal or a symbolic name.
    pub fn parse(text: &str) -> Result<Element, ModelError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(ModelError::InvalidName(text.into()));
        }
        if text.chars().next().unwrap().is_ascii_digit() {
            return prob::parse_decimal(text)
                .map(Element::Number)
                .ok_or_else(|| ModelError::InvalidName(text.into()));
        }
        if !text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ModelError::InvalidName(text.into()));
        }
        Ok(Element::Symbol(text.into()))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Element::Number(_))
    }

    pub fn as_number(&self) -> Option<&BigRational> {
        match self {
            Element::Number(n) => Some(n),
            Element::Symbol(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Symbol(s) => write!(f, "{s}"),
            Element::Number(n) => match prob::decimal_exact(n) {
                Some(d) => write!(f, "{d}"),
                None => write!(f, "{}", prob::fraction_string(n)),
            },
        }
    }
}

/// Lowercases `raw_name` and joins its words with underscores.
///
/// Type tokens stay inside the symbol, so `Person is infected` becomes
/// `person_is_infected` and distinct declarations can never collide.
pub fn mangle_name(raw_name: &str) -> Result<String, ModelError> {
    if raw_name.trim().is_empty()
        || !raw_name.chars().all(|c| c.is_ascii_alphanumeric() || c == ' ' || c == '_')
    {
        return Err(ModelError::InvalidName(raw_name.into()));
    }
    let mangled: String = raw_name
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect::<Vec<_>>()
        .join("_");
    if !mangled.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
        return Err(ModelError::InvalidName(raw_name.into()));
    }
    Ok(mangled)
}

#[derive(Clone, Debug)]
pub struct TypeDecl {
    pub name: String,
    pub mangled: String,
    pub elements: Vec<Element>,
    pub span: SourceSpan,
}

impl TypeDecl {
    pub fn new(name: &str, elements: Vec<Element>, span: SourceSpan) -> Result<Self, ModelError> {
        if elements.is_empty() {
            return Err(ModelError::EmptyType(name.into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(ModelError::DuplicateElement(name.into(), e.to_string()));
            }
        }
        let numeric = elements[0].is_numeric();
        if elements.iter().any(|e| e.is_numeric() != numeric) {
            return Err(ModelError::MixedElements(name.into()));
        }
        let mangled = mangle_name(name)?;
        Ok(TypeDecl { name: name.into(), mangled, elements, span })
    }

    pub fn is_numeric(&self) -> bool {
        self.elements[0].is_numeric()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }
}

#[derive(Clone, Debug)]
pub struct PredicateDecl {
    pub raw_name: String,
    /// Indices into `Glossary::types`, one per argument position.
    pub arg_types: Vec<usize>,
    pub mangled: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct FunctionDecl {
    pub raw_name: String,
    pub arg_types: Vec<usize>,
    /// Index into `Glossary::types`; the value domain, not an argument.
    pub range_type: usize,
    pub mangled: String,
    pub span: SourceSpan,
}

/// Reference to a glossary predicate or function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolRef {
    Pred(usize),
    Func(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Glossary {
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
}

/// An argument slot bound either to a quantifier variable or a concrete element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Var(String),
    Elem(Element),
}

impl Glossary {
    pub fn type_index(&self, name: &str) -> Option<usize> {
        self.types.iter().position(|t| t.name == name)
    }

    pub fn add_type(&mut self, decl: TypeDecl) -> Result<(), ModelError> {
        if self.type_index(&decl.name).is_some() {
            return Err(ModelError::DuplicateDecl(decl.name));
        }
        self.types.push(decl);
        Ok(())
    }

    pub fn add_predicate(&mut self, raw_name: &str, span: SourceSpan) -> Result<(), ModelError> {
        let mangled = mangle_name(raw_name)?;
        if self.decl_with_mangled(&mangled).is_some() {
            return Err(ModelError::DuplicateDecl(raw_name.into()));
        }
        let arg_types = self.arg_type_positions(raw_name);
        // Types become unary predicates in the translation, so a unary
        // declaration with a type's name would share its atoms.
        if arg_types.len() == 1 && self.types.iter().any(|t| t.mangled == mangled) {
            return Err(ModelError::DuplicateDecl(raw_name.into()));
        }
        self.predicates.push(PredicateDecl { raw_name: raw_name.into(), arg_types, mangled, span });
        Ok(())
    }

    pub fn add_function(
        &mut self,
        raw_name: &str,
        range_type_name: &str,
        span: SourceSpan,
    ) -> Result<(), ModelError> {
        let mangled = mangle_name(raw_name)?;
        if self.decl_with_mangled(&mangled).is_some() {
            return Err(ModelError::DuplicateDecl(raw_name.into()));
        }
        let range_type = self
            .type_index(range_type_name)
            .ok_or_else(|| ModelError::UnknownSymbol(range_type_name.into()))?;
        let arg_types = self.arg_type_positions(raw_name);
        if arg_types.is_empty() && self.types.iter().any(|t| t.mangled == mangled) {
            return Err(ModelError::DuplicateDecl(raw_name.into()));
        }
        self.functions.push(FunctionDecl {
            raw_name: raw_name.into(),
            arg_types,
            range_type,
            mangled,
            span,
        });
        Ok(())
    }

    fn arg_type_positions(&self, raw_name: &str) -> Vec<usize> {
        raw_name.split_whitespace().filter_map(|tok| self.type_index(tok)).collect()
    }

    fn decl_with_mangled(&self, mangled: &str) -> Option<SymbolRef> {
        if let Some(i) = self.predicates.iter().position(|p| p.mangled == mangled) {
            return Some(SymbolRef::Pred(i));
        }
        self.functions.iter().position(|f| f.mangled == mangled).map(SymbolRef::Func)
    }

    pub fn raw_name(&self, sym: SymbolRef) -> &str {
        match sym {
            SymbolRef::Pred(i) => &self.predicates[i].raw_name,
            SymbolRef::Func(i) => &self.functions[i].raw_name,
        }
    }

    pub fn mangled(&self, sym: SymbolRef) -> &str {
        match sym {
            SymbolRef::Pred(i) => &self.predicates[i].mangled,
            SymbolRef::Func(i) => &self.functions[i].mangled,
        }
    }

    pub fn arg_types(&self, sym: SymbolRef) -> &[usize] {
        match sym {
            SymbolRef::Pred(i) => &self.predicates[i].arg_types,
            SymbolRef::Func(i) => &self.functions[i].arg_types,
        }
    }

    pub fn range_type(&self, sym: SymbolRef) -> Option<usize> {
        match sym {
            SymbolRef::Pred(_) => None,
            SymbolRef::Func(i) => Some(self.functions[i].range_type),
        }
    }

    /// Matches header text like `X contacted Y` or `vaccine of bob` against the
    /// glossary. Type-name tokens in a declaration act as argument slots; the
    /// header fills each slot with a quantifier letter, a concrete element, or
    /// the type name itself (which stands for a fresh quantifier variable).
    pub fn resolve_header(&self, text: &str) -> Result<(SymbolRef, Vec<Binding>), ModelError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(ModelError::UnknownSymbol(text.into()));
        }
        let mut matches: Vec<(SymbolRef, Vec<Binding>)> = Vec::new();
        let mut mismatch: Option<String> = None;
        let preds = self.predicates.iter().enumerate().map(|(i, p)| {
            (SymbolRef::Pred(i), p.raw_name.as_str())
        });
        let funcs = self.functions.iter().enumerate().map(|(i, f)| {
            (SymbolRef::Func(i), f.raw_name.as_str())
        });
        for (sym, raw) in preds.chain(funcs) {
            match self.match_decl(raw, &tokens) {
                MatchOutcome::Match(bindings) => matches.push((sym, bindings)),
                MatchOutcome::TypeMismatch(msg) => mismatch = mismatch.or(Some(msg)),
                MatchOutcome::NoMatch => {}
            }
        }
        match matches.len() {
            1 => {
                let (sym, bindings) = matches.pop().unwrap();
                Ok((sym, self.assign_fresh_vars(bindings)))
            }
            0 => match mismatch {
                Some(msg) => Err(ModelError::TypeMismatch(msg)),
                None => Err(ModelError::UnknownSymbol(text.into())),
            },
            _ => Err(ModelError::AmbiguousSymbol(text.into())),
        }
    }

    fn match_decl(&self, raw: &str, tokens: &[&str]) -> MatchOutcome {
        let decl_tokens: Vec<&str> = raw.split_whitespace().collect();
        if decl_tokens.len() != tokens.len() {
            return MatchOutcome::NoMatch;
        }
        let mut bindings = Vec::new();
        let mut mismatch = None;
        for (decl_tok, tok) in decl_tokens.iter().zip(tokens) {
            match self.type_index(decl_tok) {
                Some(type_idx) => {
                    let slot = self.classify_slot_token(tok, type_idx);
                    match slot {
                        Some(b) => bindings.push(b),
                        None => {
                            // Known element of a different type: report precisely.
                            let elem = Element::parse(tok).ok();
                            let belongs_elsewhere = elem.as_ref().is_some_and(|e| {
                                self.types.iter().any(|t| t.contains(e))
                            });
                            if belongs_elsewhere {
                                mismatch = Some(format!(
                                    "`{tok}` is not an element of type `{}`",
                                    self.types[type_idx].name
                                ));
                            } else {
                                return MatchOutcome::NoMatch;
                            }
                        }
                    }
                }
                None => {
                    if decl_tok != tok {
                        return MatchOutcome::NoMatch;
                    }
                }
            }
        }
        match mismatch {
            Some(msg) => MatchOutcome::TypeMismatch(msg),
            None => MatchOutcome::Match(bindings),
        }
    }

    fn classify_slot_token(&self, tok: &str, type_idx: usize) -> Option<Binding> {
        if is_quantifier_letter(tok) {
            return Some(Binding::Var(tok.into()));
        }
        if tok == self.types[type_idx].name {
            // The type name itself stands for a fresh quantifier variable.
            return Some(Binding::Var(String::new()));
        }
        let elem = Element::parse(tok).ok()?;
        if self.types[type_idx].contains(&elem) {
            Some(Binding::Elem(elem))
        } else {
            None
        }
    }

    fn assign_fresh_vars(&self, bindings: Vec<Binding>) -> Vec<Binding> {
        let used: Vec<String> = bindings
            .iter()
            .filter_map(|b| match b {
                Binding::Var(v) if !v.is_empty() => Some(v.clone()),
                _ => None,
            })
            .collect();
        let mut fresh = fresh_letters(&used);
        bindings
            .into_iter()
            .map(|b| match b {
                Binding::Var(v) if v.is_empty() => Binding::Var(fresh.next().unwrap()),
                other => other,
            })
            .collect()
    }

    /// The inverse of [`Glossary::resolve_header`]: declaration text with each
    /// type token replaced by its binding.
    pub fn render_header(&self, sym: SymbolRef, bindings: &[Binding]) -> String {
        let raw = self.raw_name(sym);
        let mut next = bindings.iter();
        raw.split_whitespace()
            .map(|tok| match self.type_index(tok) {
                Some(_) => match next.next() {
                    Some(Binding::Var(v)) => v.clone(),
                    Some(Binding::Elem(e)) => e.to_string(),
                    None => tok.to_string(),
                },
                None => tok.to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

enum MatchOutcome {
    Match(Vec<Binding>),
    TypeMismatch(String),
    NoMatch,
}

pub fn is_quantifier_letter(tok: &str) -> bool {
    tok.len() == 1 && tok.chars().next().unwrap().is_ascii_uppercase()
}

/// Quantifier letters in header order, skipping those already taken.
pub fn fresh_letters(used: &[String]) -> impl Iterator<Item = String> + '_ {
    "XYZWVUTSRQPONMLKJIHGFEDCBA"
        .chars()
        .map(|c| c.to_string())
        .filter(move |c| !used.contains(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitPolicy {
    Unique,
    Any,
    First,
    Choice,
}

impl HitPolicy {
    pub fn letter(self) -> &'static str {
        match self {
            HitPolicy::Unique => "U",
            HitPolicy::Any => "A",
            HitPolicy::First => "F",
            HitPolicy::Choice => "Ch",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "U" => Some(HitPolicy::Unique),
            "A" => Some(HitPolicy::Any),
            "F" => Some(HitPolicy::First),
            "Ch" => Some(HitPolicy::Choice),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// One parsed cell of a decision table.
#[derive(Clone, Debug, PartialEq)]
pub enum CellExpr {
    DontCare,
    Value(Element),
    /// Comma list of elements; input cells only.
    ValueSet(Vec<Element>),
    Comparison(CmpOp, BigRational),
    /// Inclusive on both ends.
    Range(BigRational, BigRational),
    Bool(bool),
    Var(String),
    Prob(Probability),
}

/// An output-value-row entry of a probabilistic table.
#[derive(Clone, Debug, PartialEq)]
pub enum OutputValue {
    Bool(bool),
    Elem(Element),
}

impl fmt::Display for OutputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputValue::Bool(true) => write!(f, "Yes"),
            OutputValue::Bool(false) => write!(f, "No"),
            OutputValue::Elem(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

#[derive(Clone, Debug)]
pub struct ColumnHeader {
    pub target: SymbolRef,
    pub bindings: Vec<Binding>,
    pub side: Side,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct RuleRow {
    pub inputs: Vec<CellExpr>,
    pub outputs: Vec<CellExpr>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct DecisionTable {
    pub name: String,
    pub policy: HitPolicy,
    pub inputs: Vec<ColumnHeader>,
    pub outputs: Vec<ColumnHeader>,
    /// Maps each output grid column ("slot") to an entry of `outputs`.
    /// Identity when every output column has its own header; a Choice table
    /// has one header spanning all slots.
    pub output_slots: Vec<usize>,
    pub value_row: Option<Vec<OutputValue>>,
    pub rows: Vec<RuleRow>,
    pub span: SourceSpan,
}

impl DecisionTable {
    pub fn is_probabilistic(&self) -> bool {
        self.value_row.is_some()
    }
}

/// A ground predicate or function assignment supplied as data.
#[derive(Clone, Debug)]
pub struct FactAtom {
    pub target: SymbolRef,
    pub args: Vec<Element>,
    pub value: Option<Element>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct FactTable {
    pub name: Option<String>,
    pub rows: Vec<FactAtom>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct QueryEntry {
    pub target: SymbolRef,
    pub args: Vec<Binding>,
    /// Queried range value; `Some` exactly for functions.
    pub value: Option<Binding>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct QuerySet {
    pub entries: Vec<QueryEntry>,
    /// True when the workbook had no Query table and every glossary symbol is
    /// queried with fresh variables.
    pub implicit_all: bool,
}

impl QuerySet {
    /// The default query set: every predicate and function, fully quantified.
    pub fn all_symbols(glossary: &Glossary) -> QuerySet {
        let mut entries = Vec::new();
        for (i, p) in glossary.predicates.iter().enumerate() {
            let mut fresh = fresh_letters(&[]);
            let args = p.arg_types.iter().map(|_| Binding::Var(fresh.next().unwrap())).collect();
            entries.push(QueryEntry {
                target: SymbolRef::Pred(i),
                args,
                value: None,
                span: SourceSpan::default(),
            });
        }
        for (i, f) in glossary.functions.iter().enumerate() {
            let mut fresh = fresh_letters(&[]);
            let args: Vec<Binding> =
                f.arg_types.iter().map(|_| Binding::Var(fresh.next().unwrap())).collect();
            let value = Some(Binding::Var(fresh.next().unwrap()));
            entries.push(QueryEntry {
                target: SymbolRef::Func(i),
                args,
                value,
                span: SourceSpan::default(),
            });
        }
        QuerySet { entries, implicit_all: true }
    }
}

#[derive(Clone, Debug)]
pub struct PdmnModel {
    pub name: String,
    pub glossary: Glossary,
    pub tables: Vec<DecisionTable>,
    pub facts: Vec<FactTable>,
    pub queries: QuerySet,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span() -> SourceSpan {
        SourceSpan::default()
    }

    fn fig4_glossary() -> Glossary {
        let mut g = Glossary::default();
        g.add_type(
            TypeDecl::new(
                "Person",
                vec![Element::Symbol("ann".into()), Element::Symbol("bob".into())],
                span(),
            )
            .unwrap(),
        )
        .unwrap();
        g.add_type(
            TypeDecl::new(
                "Vaccine",
                vec![
                    Element::Symbol("a".into()),
                    Element::Symbol("b".into()),
                    Element::Symbol("n".into()),
                ],
                span(),
            )
            .unwrap(),
        )
        .unwrap();
        g.add_predicate("Person is infected", span()).unwrap();
        g.add_predicate("Person contacted Person", span()).unwrap();
        g.add_function("vaccine of Person", "Vaccine", span()).unwrap();
        g
    }

    #[test]
    fn mangle_examples() {
        assert_eq!(mangle_name("Person is infected").unwrap(), "person_is_infected");
        assert_eq!(mangle_name("vaccine of Person").unwrap(), "vaccine_of_person");
        assert_eq!(mangle_name("alarm").unwrap(), "alarm");
        assert_eq!(mangle_name("Throwing  Dice").unwrap(), "throwing_dice");
    }

    #[test]
    fn mangle_rejects_bad_names() {
        assert!(mangle_name("").is_err());
        assert!(mangle_name("foo-bar").is_err());
        assert!(mangle_name("1st thing").is_err());
        assert!(mangle_name("what?").is_err());
    }

    #[test]
    fn mangle_idempotent() {
        for raw in ["Person is infected", "vaccine of Person", "alarm", "X Y Z"] {
            if let Ok(m) = mangle_name(raw) {
                assert_eq!(mangle_name(&m).unwrap(), m);
            }
        }
    }

    #[test]
    fn resolve_header_examples() {
        let g = fig4_glossary();
        let (sym, bindings) = g.resolve_header("X contacted Y").unwrap();
        assert_eq!(g.mangled(sym), "person_contacted_person");
        assert_eq!(bindings, vec![Binding::Var("X".into()), Binding::Var("Y".into())]);

        let (sym, bindings) = g.resolve_header("vaccine of bob").unwrap();
        assert_eq!(g.mangled(sym), "vaccine_of_person");
        assert_eq!(bindings, vec![Binding::Elem(Element::Symbol("bob".into()))]);
    }

    #[test]
    fn resolve_zero_ary() {
        let mut g = fig4_glossary();
        g.add_predicate("burglary", span()).unwrap();
        let (sym, bindings) = g.resolve_header("burglary").unwrap();
        assert_eq!(g.mangled(sym), "burglary");
        assert!(bindings.is_empty());
    }

    #[test]
    fn resolve_type_name_gives_fresh_var() {
        let g = fig4_glossary();
        let (sym, bindings) = g.resolve_header("Person is infected").unwrap();
        assert_eq!(g.mangled(sym), "person_is_infected");
        assert_eq!(bindings, vec![Binding::Var("X".into())]);
    }

    #[test]
    fn resolve_errors() {
        let g = fig4_glossary();
        assert!(matches!(g.resolve_header("nonsense here"), Err(ModelError::UnknownSymbol(_))));
        assert!(matches!(g.resolve_header("vaccine of six"), Err(ModelError::UnknownSymbol(_))));
        // `a` is a Vaccine element used in a Person slot.
        assert!(matches!(g.resolve_header("a is infected"), Err(ModelError::TypeMismatch(_))));
    }

    #[test]
    fn render_resolve_round_trip() {
        let g = fig4_glossary();
        for text in ["X contacted Y", "vaccine of bob", "ann is infected"] {
            let (sym, bindings) = g.resolve_header(text).unwrap();
            let rendered = g.render_header(sym, &bindings);
            assert_eq!(rendered, text);
            let (sym2, bindings2) = g.resolve_header(&rendered).unwrap();
            assert_eq!(sym, sym2);
            assert_eq!(bindings, bindings2);
        }
    }

    #[test]
    fn type_invariants() {
        assert!(TypeDecl::new("T", vec![], span()).is_err());
        assert!(TypeDecl::new(
            "T",
            vec![Element::Symbol("x".into()), Element::Symbol("x".into())],
            span()
        )
        .is_err());
        assert!(TypeDecl::new(
            "T",
            vec![Element::Symbol("x".into()), Element::parse("1").unwrap()],
            span()
        )
        .is_err());
    }

    #[test]
    fn numeric_elements() {
        let e = Element::parse("18.5").unwrap();
        assert!(e.is_numeric());
        assert_eq!(e.to_string(), "18.5");
    }
}
