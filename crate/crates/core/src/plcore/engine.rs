//! Exact inference: desugar annotated rules, ground over fact-defined
//! domains, stratify negation, and enumerate every total choice.

use super::*;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::{HashMap, HashSet};

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("variable `{var}` in `{clause}` is not bound by any fact-defined positive literal")]
    UnsafeVariable { clause: String, var: String },
    #[error("program is not stratified; negation cycle through: {}", cycle.join(" -> "))]
    NotStratified { cycle: Vec<String> },
    #[error("{points} probabilistic choice points exceed the enumeration cap of {cap}")]
    ChoiceSpaceTooLarge { points: usize, cap: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    pub max_choice_points: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { max_choice_points: 30 }
    }
}

/// Symbols are keyed by name and arity throughout the engine.
type Key = (String, usize);

fn key_of(atom: &Atom) -> Key {
    (atom.symbol.clone(), atom.args.len())
}

fn key_name(k: &Key) -> String {
    format!("{}/{}", k.0, k.1)
}

/// Replaces every `P::h :- body` by `h :- body, aux` plus `P::aux`, with one
/// fresh aux symbol per annotated rule, parameterized by the rule's variables
/// so each grounding is an independent trial. An annotation of exactly 1 is
/// simply dropped.
pub fn desugar(program: &LogicProgram) -> LogicProgram {
    let symbols = program.symbols();
    let mut prefix = String::from("aux");
    while symbols.iter().any(|s| s.starts_with(&prefix)) {
        prefix.push('x');
    }
    let mut out = LogicProgram { statements: Vec::new(), queries: program.queries.clone() };
    let mut counter = 0usize;
    for stmt in &program.statements {
        match stmt {
            Statement::Clause(c) if c.probability.is_some() && !c.body.is_empty() => {
                let p = c.probability.clone().unwrap();
                if p.is_one() {
                    out.statements.push(Statement::Clause(Clause {
                        head: c.head.clone(),
                        body: c.body.clone(),
                        probability: None,
                    }));
                    continue;
                }
                counter += 1;
                let aux = Atom::new(
                    format!("{prefix}{counter}"),
                    c.vars().into_iter().map(Term::var).collect(),
                );
                let mut body = c.body.clone();
                body.push(Literal::pos(aux.clone()));
                out.statements.push(Statement::Clause(Clause {
                    head: c.head.clone(),
                    body,
                    probability: None,
                }));
                out.statements.push(Statement::ProbFact(p, aux));
            }
            Statement::Clause(c) if c.probability.is_some() => {
                // Annotated fact: keep as a probabilistic fact.
                let p = c.probability.clone().unwrap();
                if p.is_one() {
                    out.statements.push(Statement::Fact(c.head.clone()));
                } else {
                    out.statements.push(Statement::ProbFact(p, c.head.clone()));
                }
            }
            other => out.statements.push(other.clone()),
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub facts: Vec<Atom>,
    pub prob_facts: Vec<(Probability, Atom)>,
    pub clauses: Vec<Clause>,
    pub ads: Vec<Disjunction>,
    pub queries: Vec<Atom>,
}

/// Instantiates every clause and disjunction over the constants supplied by
/// deterministic facts. Variables are bound by joining the positive body
/// literals whose symbols are defined only by facts (the translator's type
/// atoms); instances whose unary type-atom conditions fail are dropped.
pub fn ground(program: &LogicProgram) -> Result<GroundProgram, EngineError> {
    let mut derived: HashSet<Key> = HashSet::new();
    for stmt in &program.statements {
        match stmt {
            Statement::Clause(c) => {
                derived.insert(key_of(&c.head));
            }
            Statement::Disjunction(d) => {
                for (_, a) in &d.alternatives {
                    derived.insert(key_of(a));
                }
            }
            Statement::ProbFact(_, a) => {
                derived.insert(key_of(a));
            }
            Statement::Fact(_) => {}
        }
    }

    let mut facts: Vec<Atom> = Vec::new();
    let mut fact_index: HashMap<Key, Vec<Atom>> = HashMap::new();
    for a in program.facts() {
        if !a.is_ground() {
            return Err(EngineError::UnsafeVariable {
                clause: a.to_string(),
                var: a.vars().next().unwrap_or("?").to_string(),
            });
        }
        facts.push(a.clone());
        fact_index.entry(key_of(a)).or_default().push(a.clone());
    }

    let fact_complete = |key: &Key| !derived.contains(key);

    let mut out = GroundProgram { facts, ..Default::default() };

    for stmt in &program.statements {
        match stmt {
            Statement::Clause(c) => {
                let rendered = render_clause(c);
                for env in join_instances(&c.body, c.vars(), &fact_index, fact_complete, &rendered)?
                {
                    out.clauses.push(Clause {
                        head: subst_atom(&c.head, &env),
                        body: c.body.iter().map(|l| subst_lit(l, &env)).collect(),
                        probability: c.probability.clone(),
                    });
                }
            }
            Statement::Disjunction(d) => {
                let mut vars: Vec<String> = Vec::new();
                for (_, a) in &d.alternatives {
                    for v in a.vars() {
                        if !vars.iter().any(|x| x == v) {
                            vars.push(v.to_string());
                        }
                    }
                }
                for l in &d.body {
                    for v in l.atom.vars() {
                        if !vars.iter().any(|x| x == v) {
                            vars.push(v.to_string());
                        }
                    }
                }
                let rendered = render_disjunction(d);
                for env in join_instances(&d.body, vars, &fact_index, fact_complete, &rendered)? {
                    out.ads.push(Disjunction {
                        alternatives: d
                            .alternatives
                            .iter()
                            .map(|(p, a)| (p.clone(), subst_atom(a, &env)))
                            .collect(),
                        body: d.body.iter().map(|l| subst_lit(l, &env)).collect(),
                    });
                }
            }
            _ => {}
        }
    }

    // Probabilistic facts: ground ones pass through; non-ground templates
    // (desugaring aux facts) take one instance per ground occurrence of the
    // same atom in a clause or disjunction body.
    let occurrences: Vec<Atom> = out
        .clauses
        .iter()
        .flat_map(|c| c.body.iter())
        .chain(out.ads.iter().flat_map(|d| d.body.iter()))
        .map(|l| l.atom.clone())
        .collect();
    for (p, a) in program.prob_facts() {
        if a.is_ground() {
            out.prob_facts.push((p.clone(), a.clone()));
        } else {
            let mut seen: HashSet<Atom> = HashSet::new();
            for occ in &occurrences {
                if occ.is_ground() && unifies(a, occ) && seen.insert(occ.clone()) {
                    out.prob_facts.push((p.clone(), occ.clone()));
                }
            }
        }
    }

    // Queries: expand non-ground queries over every matching ground atom the
    // program mentions, in program order.
    let mut universe: Vec<Atom> = Vec::new();
    let mut seen: HashSet<Atom> = HashSet::new();
    let push = |a: &Atom, universe: &mut Vec<Atom>, seen: &mut HashSet<Atom>| {
        if a.is_ground() && seen.insert(a.clone()) {
            universe.push(a.clone());
        }
    };
    for a in &out.facts {
        push(a, &mut universe, &mut seen);
    }
    for (_, a) in &out.prob_facts {
        push(a, &mut universe, &mut seen);
    }
    for d in &out.ads {
        for (_, a) in &d.alternatives {
            push(a, &mut universe, &mut seen);
        }
    }
    for c in &out.clauses {
        push(&c.head, &mut universe, &mut seen);
    }
    for q in &program.queries {
        if q.is_ground() {
            out.queries.push(q.clone());
        } else {
            let mut matched: HashSet<Atom> = HashSet::new();
            for a in &universe {
                if unifies(q, a) && matched.insert(a.clone()) {
                    out.queries.push(a.clone());
                }
            }
        }
    }

    Ok(out)
}

fn subst_lit(lit: &Literal, env: &HashMap<String, Constant>) -> Literal {
    Literal { atom: subst_atom(&lit.atom, env), negated: lit.negated }
}

/// Does the ground atom `ground` instantiate the template `pat`?
fn unifies(pat: &Atom, ground: &Atom) -> bool {
    if pat.symbol != ground.symbol || pat.args.len() != ground.args.len() {
        return false;
    }
    let mut env: HashMap<&str, &Constant> = HashMap::new();
    for (p, g) in pat.args.iter().zip(&ground.args) {
        let gc = match g {
            Term::Const(c) => c,
            Term::Var(_) => return false,
        };
        match p {
            Term::Const(c) => {
                if c != gc {
                    return false;
                }
            }
            Term::Var(v) => match env.get(v.as_str()) {
                Some(prev) => {
                    if *prev != gc {
                        return false;
                    }
                }
                None => {
                    env.insert(v, gc);
                }
            },
        }
    }
    true
}

fn render_clause(c: &Clause) -> String {
    let body: Vec<String> = c.body.iter().map(|l| l.to_string()).collect();
    if body.is_empty() {
        format!("{}.", c.head)
    } else {
        format!("{} :- {}.", c.head, body.join(", "))
    }
}

fn render_disjunction(d: &Disjunction) -> String {
    let alts: Vec<String> =
        d.alternatives.iter().map(|(p, a)| format!("{}::{}", p.render_source(), a)).collect();
    alts.join("; ")
}

/// Enumerates all variable assignments satisfying the fact-defined positive
/// body literals, in fact order. Unary fact-defined literals always join (and
/// prune); wider ones join only when needed to bind a variable.
fn join_instances(
    body: &[Literal],
    vars: Vec<String>,
    fact_index: &HashMap<Key, Vec<Atom>>,
    fact_complete: impl Fn(&Key) -> bool,
    rendered: &str,
) -> Result<Vec<HashMap<String, Constant>>, EngineError> {
    let empty: Vec<Atom> = Vec::new();
    let mut join: Vec<(&Atom, &[Atom])> = Vec::new();
    let mut bound: HashSet<&str> = HashSet::new();
    let candidates: Vec<&Atom> = body
        .iter()
        .filter(|l| !l.negated && fact_complete(&key_of(&l.atom)))
        .map(|l| &l.atom)
        .collect();
    for a in &candidates {
        if a.args.len() == 1 {
            join.push((a, fact_index.get(&key_of(a)).map_or(&empty[..], |v| v)));
            bound.extend(a.vars());
        }
    }
    for a in &candidates {
        if a.args.len() != 1 && a.vars().any(|v| !bound.contains(v)) {
            join.push((a, fact_index.get(&key_of(a)).map_or(&empty[..], |v| v)));
            bound.extend(a.vars());
        }
    }
    if let Some(v) = vars.iter().find(|v| !bound.contains(v.as_str())) {
        return Err(EngineError::UnsafeVariable { clause: rendered.to_string(), var: v.clone() });
    }

    let mut out = Vec::new();
    let mut env: HashMap<String, Constant> = HashMap::new();
    fn recurse(
        join: &[(&Atom, &[Atom])],
        env: &mut HashMap<String, Constant>,
        out: &mut Vec<HashMap<String, Constant>>,
    ) {
        match join.split_first() {
            None => out.push(env.clone()),
            Some(((pat, facts), rest)) => {
                'fact: for fact in *facts {
                    let mut added: Vec<String> = Vec::new();
                    for (p, g) in pat.args.iter().zip(&fact.args) {
                        let gc = match g {
                            Term::Const(c) => c.clone(),
                            Term::Var(_) => continue 'fact,
                        };
                        match p {
                            Term::Const(c) => {
                                if *c != gc {
                                    for v in added.drain(..) {
                                        env.remove(&v);
                                    }
                                    continue 'fact;
                                }
                            }
                            Term::Var(v) => match env.get(v) {
                                Some(prev) => {
                                    if *prev != gc {
                                        for v in added.drain(..) {
                                            env.remove(&v);
                                        }
                                        continue 'fact;
                                    }
                                }
                                None => {
                                    env.insert(v.clone(), gc);
                                    added.push(v.clone());
                                }
                            },
                        }
                    }
                    recurse(rest, env, out);
                    for v in added {
                        env.remove(&v);
                    }
                }
            }
        }
    }
    recurse(&join, &mut env, &mut out);
    Ok(out)
}

/// Stratum number per derived symbol; base symbols live in stratum 0.
#[derive(Clone, Debug, Default)]
pub struct Strata {
    pub of: HashMap<Key, usize>,
    pub count: usize,
}

impl Strata {
    pub fn stratum(&self, atom: &Atom) -> usize {
        self.of.get(&key_of(atom)).copied().unwrap_or(0)
    }

    /// Derived symbols grouped by stratum, for inspection.
    pub fn layers(&self) -> Vec<Vec<String>> {
        let mut layers = vec![Vec::new(); self.count];
        let mut keys: Vec<_> = self.of.iter().collect();
        keys.sort();
        for (k, s) in keys {
            layers[*s].push(key_name(k));
        }
        layers
    }
}

/// Assigns strata so positive dependencies never decrease and negative
/// dependencies strictly increase.
pub fn stratify(ground: &GroundProgram) -> Result<Strata, EngineError> {
    let mut derived: HashSet<Key> = HashSet::new();
    let mut edges: Vec<(Key, Key, bool)> = Vec::new(); // head <- body, negated
    for c in &ground.clauses {
        let h = key_of(&c.head);
        derived.insert(h.clone());
        for l in &c.body {
            edges.push((h.clone(), key_of(&l.atom), l.negated));
        }
    }
    for d in &ground.ads {
        for (_, a) in &d.alternatives {
            let h = key_of(a);
            derived.insert(h.clone());
            for l in &d.body {
                edges.push((h.clone(), key_of(&l.atom), l.negated));
            }
        }
    }

    let mut of: HashMap<Key, usize> = derived.iter().map(|k| (k.clone(), 0)).collect();
    let limit = derived.len().max(1);
    let mut stable = false;
    for _ in 0..=limit {
        let mut changed = false;
        for (h, b, neg) in &edges {
            if !derived.contains(b) {
                continue;
            }
            let need = of[b] + usize::from(*neg);
            if of[h] < need {
                of.insert(h.clone(), need);
                changed = true;
            }
        }
        if !changed {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(EngineError::NotStratified { cycle: negative_cycle(&derived, &edges) });
    }
    let count = of.values().copied().max().map_or(1, |m| m + 1);
    Ok(Strata { of, count })
}

/// When stratification fails, recovers one offending cycle for the error
/// message: a negative edge whose target reaches back to its source.
fn negative_cycle(derived: &HashSet<Key>, edges: &[(Key, Key, bool)]) -> Vec<String> {
    let mut adj: HashMap<&Key, Vec<&Key>> = HashMap::new();
    for (h, b, _) in edges {
        if derived.contains(b) {
            adj.entry(h).or_default().push(b);
        }
    }
    for (h, b, neg) in edges {
        if !*neg || !derived.contains(b) {
            continue;
        }
        // DFS from b looking for h.
        let mut stack = vec![(b, vec![b.clone()])];
        let mut seen: HashSet<&Key> = HashSet::new();
        while let Some((node, path)) = stack.pop() {
            if node == h {
                let mut cycle: Vec<String> = path.iter().map(key_name).collect();
                cycle.push(key_name(b));
                return cycle;
            }
            if !seen.insert(node) {
                continue;
            }
            for next in adj.get(node).into_iter().flatten() {
                let mut p = path.clone();
                p.push((*next).clone());
                stack.push((*next, p));
            }
        }
    }
    Vec::new()
}

/// One joint outcome of all probabilistic facts and AD selections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalChoice {
    /// Truth of each ground probabilistic fact, in program order.
    pub facts: Vec<bool>,
    /// Selected alternative per ground AD; `None` selects no alternative.
    pub ad_choice: Vec<Option<usize>>,
}

/// The unique stable model of a stratified ground program under a total choice.
pub fn least_model(ground: &GroundProgram, choice: &TotalChoice) -> HashSet<Atom> {
    let strata = stratify(ground).expect("least_model requires a stratified program");
    least_model_with(ground, &strata, choice)
}

fn least_model_with(
    ground: &GroundProgram,
    strata: &Strata,
    choice: &TotalChoice,
) -> HashSet<Atom> {
    let mut truth: HashSet<Atom> = ground.facts.iter().cloned().collect();
    for ((p, a), chosen) in ground.prob_facts.iter().zip(&choice.facts) {
        let _ = p;
        if *chosen {
            truth.insert(a.clone());
        }
    }
    let ad_stratum: Vec<usize> = ground
        .ads
        .iter()
        .map(|d| d.alternatives.iter().map(|(_, a)| strata.stratum(a)).max().unwrap_or(0))
        .collect();

    for s in 0..strata.count {
        loop {
            let mut changed = false;
            for c in &ground.clauses {
                if strata.stratum(&c.head) != s || truth.contains(&c.head) {
                    continue;
                }
                if body_satisfied(&c.body, &truth) {
                    truth.insert(c.head.clone());
                    changed = true;
                }
            }
            for (i, d) in ground.ads.iter().enumerate() {
                if ad_stratum[i] != s {
                    continue;
                }
                if let Some(alt) = choice.ad_choice[i] {
                    let atom = &d.alternatives[alt].1;
                    if !truth.contains(atom) && body_satisfied(&d.body, &truth) {
                        truth.insert(atom.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    truth
}

fn body_satisfied(body: &[Literal], truth: &HashSet<Atom>) -> bool {
    body.iter().all(|l| truth.contains(&l.atom) != l.negated)
}

#[derive(Clone, Debug)]
pub struct QueryResult {
    pub atom: Atom,
    pub probability: BigRational,
}

#[derive(Clone, Debug)]
pub struct EngineReport {
    pub results: Vec<QueryResult>,
    /// Sum of all total-choice weights; exactly 1 for a well-formed program.
    pub total_weight: BigRational,
    pub choice_points: usize,
}

/// Exact marginal probability of every query atom, by full enumeration of the
/// total-choice space (probabilistic facts and AD selections).
pub fn query_exact_report(
    program: &LogicProgram,
    options: &EngineOptions,
) -> Result<EngineReport, EngineError> {
    let desugared = desugar(program);
    let ground = self::ground(&desugared)?;
    let strata = stratify(&ground)?;

    let points = ground.prob_facts.len() + ground.ads.len();
    if points > options.max_choice_points {
        return Err(EngineError::ChoiceSpaceTooLarge {
            points,
            cap: options.max_choice_points,
        });
    }

    // Mixed-radix enumeration: one digit per probabilistic fact (2 states) and
    // one per AD (its alternatives, plus "none" when the mass is below 1).
    let one = BigRational::one();
    let ad_none_mass: Vec<Option<BigRational>> = ground
        .ads
        .iter()
        .map(|d| {
            let rest = &one - d.mass();
            if rest.is_zero() {
                None
            } else {
                Some(rest)
            }
        })
        .collect();
    let radix: Vec<usize> = ground
        .prob_facts
        .iter()
        .map(|_| 2usize)
        .chain(
            ground
                .ads
                .iter()
                .zip(&ad_none_mass)
                .map(|(d, none)| d.alternatives.len() + usize::from(none.is_some())),
        )
        .collect();

    let mut sums: Vec<BigRational> = vec![BigRational::zero(); ground.queries.len()];
    let mut total_weight = BigRational::zero();
    let mut digits = vec![0usize; radix.len()];
    let n_facts = ground.prob_facts.len();

    loop {
        let choice = TotalChoice {
            facts: digits[..n_facts].iter().map(|&d| d == 1).collect(),
            ad_choice: digits[n_facts..]
                .iter()
                .zip(&ground.ads)
                .map(|(&d, ad)| if d < ad.alternatives.len() { Some(d) } else { None })
                .collect(),
        };

        let mut weight = BigRational::one();
        for ((p, _), &truth) in ground.prob_facts.iter().zip(&choice.facts) {
            weight *= if truth { p.value().clone() } else { &one - p.value() };
        }
        for ((ad, none), sel) in ground.ads.iter().zip(&ad_none_mass).zip(&choice.ad_choice) {
            weight *= match sel {
                Some(i) => ad.alternatives[*i].0.value().clone(),
                None => none.clone().expect("none-branch only exists when mass < 1"),
            };
        }

        if !weight.is_zero() {
            let model = least_model_with(&ground, &strata, &choice);
            for (i, q) in ground.queries.iter().enumerate() {
                if model.contains(q) {
                    sums[i] += &weight;
                }
            }
        }
        total_weight += weight;

        // Increment the odometer.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                let results = ground
                    .queries
                    .iter()
                    .cloned()
                    .zip(sums)
                    .map(|(atom, probability)| QueryResult { atom, probability })
                    .collect();
                return Ok(EngineReport { results, total_weight, choice_points: points });
            }
            digits[pos] += 1;
            if digits[pos] < radix[pos] {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

pub fn query_exact(program: &LogicProgram) -> Result<Vec<QueryResult>, EngineError> {
    query_exact_report(program, &EngineOptions::default()).map(|r| r.results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plcore::parse_program;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const EXAMPLE_1: &str = "
        0.8::a.
        0.3::b(1); 0.5::b(2); 0.2::b(3).
        c :- a.
        c :- b(1).
        query(c).
    ";

    #[test]
    fn example_1_exact() {
        let program = parse_program(EXAMPLE_1).unwrap();
        let results = query_exact(&program).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].probability, ratio(43, 50));
    }

    #[test]
    fn example_1_weights_sum_to_one() {
        let program = parse_program(EXAMPLE_1).unwrap();
        let report = query_exact_report(&program, &EngineOptions::default()).unwrap();
        assert_eq!(report.total_weight, BigRational::one());
        assert_eq!(report.choice_points, 2);
    }

    #[test]
    fn ad_with_mass_below_one_has_none_branch() {
        let program = parse_program("0.3::x(1); 0.5::x(2). y :- x(1). query(y). query(x(2)).")
            .unwrap();
        let report = query_exact_report(&program, &EngineOptions::default()).unwrap();
        assert_eq!(report.total_weight, BigRational::one());
        assert_eq!(report.results[0].probability, ratio(3, 10));
        assert_eq!(report.results[1].probability, ratio(1, 2));
    }

    #[test]
    fn desugar_introduces_one_aux_per_annotated_rule() {
        let program = parse_program(
            "0.9::alarm :- burglary. 0.3::alarm :- storm. burglary. storm.",
        )
        .unwrap();
        let desugared = desugar(&program);
        let probs: Vec<_> = desugared.prob_facts().collect();
        assert_eq!(probs.len(), 2);
        assert!(probs[0].1.symbol.starts_with("aux"));
        assert_eq!(desugared.clauses().count(), 2);
        // The annotated-rule bodies each gained their aux literal.
        for c in desugared.clauses() {
            assert!(c.body.iter().any(|l| l.atom.symbol.starts_with("aux")));
        }
    }

    #[test]
    fn desugar_avoids_aux_collisions() {
        let program = parse_program("0.5::p :- aux1. aux1.").unwrap();
        let desugared = desugar(&program);
        let (_, aux) = desugared.prob_facts().next().unwrap();
        assert!(aux.symbol.starts_with("auxx"));
    }

    #[test]
    fn desugar_drops_certain_annotations() {
        let program = parse_program("1.0::p :- q. q.").unwrap();
        let desugared = desugar(&program);
        assert_eq!(desugared.prob_facts().count(), 0);
        assert_eq!(desugared.clauses().count(), 1);
    }

    const INFECTION: &str = "
        person(ann). person(bob).
        vaccine(a). vaccine(b). vaccine(n).
        0.36::vaccine_of_person(X,a); 0.63::vaccine_of_person(X,b); 0.01::vaccine_of_person(X,n) :- person(X).
        0.8::person_is_infected(X) :- person_contacted_person(X,Y), person_is_infected(Y), vaccine_of_person(X,n), person(X), person(Y).
        0.1::person_is_infected(X) :- person_contacted_person(X,Y), person_is_infected(Y), vaccine_of_person(X,a), person(X), person(Y).
        0.2::person_is_infected(X) :- person_contacted_person(X,Y), person_is_infected(Y), vaccine_of_person(X,b), person(X), person(Y).
        query(person_is_infected(X)).
    ";

    #[test]
    fn grounding_expands_over_type_atoms_only() {
        let program = parse_program(INFECTION).unwrap();
        let ground = ground(&desugar(&program)).unwrap();
        // One AD per person; 3 rules x 2 persons x 2 contacts.
        assert_eq!(ground.ads.len(), 2);
        assert_eq!(ground.clauses.len(), 12);
        // Non-ground query expands over both persons.
        assert_eq!(ground.queries.len(), 2);
    }

    #[test]
    fn unbound_variable_is_rejected() {
        let program = parse_program("p(X) :- not(q(X)). q(a).").unwrap();
        match ground(&desugar(&program)) {
            Err(EngineError::UnsafeVariable { var, .. }) => assert_eq!(var, "X"),
            other => panic!("expected UnsafeVariable, got {other:?}"),
        }
    }

    #[test]
    fn negation_cycle_is_not_stratified() {
        let program = parse_program("p :- not(q). q :- not(p). query(p).").unwrap();
        let ground = ground(&desugar(&program)).unwrap();
        match stratify(&ground) {
            Err(EngineError::NotStratified { cycle }) => {
                assert!(cycle.first() == cycle.last());
                assert!(cycle.len() >= 3);
            }
            other => panic!("expected NotStratified, got {other:?}"),
        }
    }

    #[test]
    fn stratified_negation_computes_least_model() {
        let program = parse_program("p :- not(q). r :- p. query(r).").unwrap();
        let results = query_exact(&program).unwrap();
        assert_eq!(results[0].probability, BigRational::one());
    }

    #[test]
    fn choice_point_cap_is_enforced() {
        let program = parse_program("0.5::a. 0.5::b. query(a).").unwrap();
        let options = EngineOptions { max_choice_points: 1 };
        match query_exact_report(&program, &options) {
            Err(EngineError::ChoiceSpaceTooLarge { points, cap }) => {
                assert_eq!((points, cap), (2, 1));
            }
            other => panic!("expected ChoiceSpaceTooLarge, got {other:?}"),
        }
    }
}
