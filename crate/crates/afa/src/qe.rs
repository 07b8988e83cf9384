//! Quantifier elimination for F(B) expanded with tester predicates.
//!
//! Formulas are normalized to *standard* form: positive combinations of
//! quantifier-free formulas and *special* formulas, which are existential
//! blocks over a constrained conjunction shape (see [`Special`]). Two
//! procedures carry the whole construction:
//!
//! - [`to_standard`] turns any existential-positive formula into a standard
//!   one, by rewriting equations, disequations and tester atoms until every
//!   conjunct fits the special shape;
//! - [`negate_standard`] closes standard formulas under negation. Negated
//!   special formulas become universally quantified clauses, which dissolve
//!   by substitution, decomposition over B, and a case analysis of the
//!   domain each bound variable ranges over (empty, exactly B, or infinite).
//!
//! Alternating the two eliminates arbitrary quantifier prefixes. The
//! rewriting is non-elementary in the worst case, so every step draws from a
//! node budget; exhaustion surfaces as [`Error::BudgetExhausted`], never as
//! a wrong answer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{evaluate_qf, Formula, OTerm};
use crate::free_extension::{build_partial_algebra, ElemId, PartialAlgebra};
use crate::term::EquationSet;

/// Tuning knobs for the elimination pipeline.
#[derive(Debug, Clone, Copy)]
pub struct QeOptions {
    /// Rewriting-node budget. Each task, clause and expansion branch costs
    /// one node.
    pub budget: u64,
}

impl Default for QeOptions {
    fn default() -> QeOptions {
        QeOptions { budget: 1_000_000 }
    }
}

/// Counters reported after an elimination run; the domain counters record
/// how often the finiteness case analysis of bound-variable domains fired.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QeStats {
    pub nodes: u64,
    pub empty_domains: u64,
    pub finite_domain_expansions: u64,
    pub infinite_domain_drops: u64,
}

/// A formula in the shape ∃y₀…y_m (⋀ x_α = t_α ∧ ⋀ x_β ≠ t_β ∧
/// ⋀ y_γ ≠ t_γ ∧ ⋀ Is_f(y_ε) ∧ ⋀ ¬Is_f(y_χ)), where the x's are free, the
/// y's are bound, every equation subject occurs exactly once in the whole
/// block, and no subject occurs in its own right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Special {
    pub bound: Vec<String>,
    pub free_eqs: Vec<(String, OTerm)>,
    pub free_neqs: Vec<(String, OTerm)>,
    pub bound_neqs: Vec<(String, OTerm)>,
    /// (function symbol, bound variable)
    pub pos_testers: Vec<(String, String)>,
    pub neg_testers: Vec<(String, String)>,
}

impl Special {
    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let bound: BTreeSet<&String> = self.bound.iter().collect();
        let add_term = |t: &OTerm, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        for (x, t) in self.free_eqs.iter().chain(&self.free_neqs) {
            out.insert(x.clone());
            add_term(t, &mut out);
        }
        for (_, t) in &self.bound_neqs {
            add_term(t, &mut out);
        }
        out
    }

    /// Checks the structural invariants of the special shape. Returns a
    /// description of the first violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let bound: BTreeSet<&String> = self.bound.iter().collect();
        if bound.len() != self.bound.len() {
            return Err("duplicate bound variable".into());
        }
        for (x, t) in &self.free_eqs {
            if bound.contains(x) {
                return Err(format!("equation subject `{x}` is bound"));
            }
            if t.mentions(x) {
                return Err(format!("subject `{x}` occurs in its own right-hand side"));
            }
        }
        for (x, t) in &self.free_neqs {
            if bound.contains(x) {
                return Err(format!("free disequation subject `{x}` is bound"));
            }
            if t.mentions(x) {
                return Err(format!("subject `{x}` occurs in its own right-hand side"));
            }
        }
        for (y, t) in &self.bound_neqs {
            if !bound.contains(y) {
                return Err(format!("bound disequation subject `{y}` is not bound"));
            }
            if t.mentions(y) {
                return Err(format!("subject `{y}` occurs in its own right-hand side"));
            }
        }
        for (_, y) in self.pos_testers.iter().chain(&self.neg_testers) {
            if !bound.contains(y) {
                return Err(format!("tester argument `{y}` is not a bound variable"));
            }
        }
        // each equation subject occurs exactly once in the whole block
        for (i, (x, _)) in self.free_eqs.iter().enumerate() {
            let mut occurrences = 0usize;
            for (j, (x2, t2)) in self.free_eqs.iter().enumerate() {
                if x2 == x {
                    occurrences += 1;
                    if i != j {
                        return Err(format!("subject `{x}` heads two equations"));
                    }
                }
                if t2.mentions(x) {
                    occurrences += 1;
                }
            }
            for (z, t) in self.free_neqs.iter().chain(&self.bound_neqs) {
                if z == x {
                    occurrences += 1;
                }
                if t.mentions(x) {
                    occurrences += 1;
                }
            }
            if occurrences != 1 {
                return Err(format!("subject `{x}` occurs {occurrences} times"));
            }
        }
        Ok(())
    }

    /// The special formula as a plain [`Formula`].
    pub fn to_formula(&self) -> Formula {
        let mut conjuncts = Vec::new();
        for (x, t) in &self.free_eqs {
            conjuncts.push(Formula::Eq(OTerm::Var(x.clone()), t.clone()));
        }
        for (x, t) in &self.free_neqs {
            conjuncts.push(Formula::not(Formula::Eq(OTerm::Var(x.clone()), t.clone())));
        }
        for (y, t) in &self.bound_neqs {
            conjuncts.push(Formula::not(Formula::Eq(OTerm::Var(y.clone()), t.clone())));
        }
        for (f, y) in &self.pos_testers {
            conjuncts.push(Formula::Is(f.clone(), OTerm::Var(y.clone())));
        }
        for (f, y) in &self.neg_testers {
            conjuncts.push(Formula::not(Formula::Is(f.clone(), OTerm::Var(y.clone()))));
        }
        let mut body = Formula::and(conjuncts);
        for y in self.bound.iter().rev() {
            body = Formula::exists(y.clone(), body);
        }
        body
    }
}

/// A standard formula: a positive ∧/∨ combination of special formulas and
/// quantifier-free formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Standard {
    Qf(Formula),
    Special(Special),
    And(Vec<Standard>),
    Or(Vec<Standard>),
}

impl Standard {
    pub fn truth(value: bool) -> Standard {
        Standard::Qf(if value { Formula::True } else { Formula::False })
    }

    fn and(parts: Vec<Standard>) -> Standard {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Standard::Qf(Formula::True) => {}
                Standard::Qf(Formula::False) => return Standard::truth(false),
                Standard::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.dedup();
        match flat.len() {
            0 => Standard::truth(true),
            1 => flat.pop().expect("one element"),
            _ => Standard::And(flat),
        }
    }

    fn or(parts: Vec<Standard>) -> Standard {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Standard::Qf(Formula::False) => {}
                Standard::Qf(Formula::True) => return Standard::truth(true),
                Standard::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.dedup();
        match flat.len() {
            0 => Standard::truth(false),
            1 => flat.pop().expect("one element"),
            _ => Standard::Or(flat),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Standard::Qf(f) => f.clone(),
            Standard::Special(sp) => sp.to_formula(),
            Standard::And(v) => Formula::and(v.iter().map(Standard::to_formula).collect()),
            Standard::Or(v) => Formula::or(v.iter().map(Standard::to_formula).collect()),
        }
    }

    /// All special subformulas, for structural checks.
    pub fn specials(&self) -> Vec<&Special> {
        match self {
            Standard::Qf(_) => Vec::new(),
            Standard::Special(sp) => vec![sp],
            Standard::And(v) | Standard::Or(v) => v.iter().flat_map(Standard::specials).collect(),
        }
    }

    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for sp in self.specials() {
            sp.check_invariants()?;
        }
        // the quantifier-free parts must actually be quantifier-free
        fn check_qf(s: &Standard) -> std::result::Result<(), String> {
            match s {
                Standard::Qf(f) if !f.is_quantifier_free() => {
                    Err("quantified formula in a Qf leaf".into())
                }
                Standard::And(v) | Standard::Or(v) => v.iter().try_for_each(check_qf),
                _ => Ok(()),
            }
        }
        check_qf(self)
    }
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_formula())
    }
}

// ---------------------------------------------------------------------------
// Literals and simplification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Lit {
    Eq(OTerm, OTerm),
    Neq(OTerm, OTerm),
    Is(String, OTerm),
    NotIs(String, OTerm),
}

impl Lit {
    fn vars(&self) -> BTreeSet<String> {
        match self {
            Lit::Eq(u, t) | Lit::Neq(u, t) => u.vars().union(&t.vars()).cloned().collect(),
            Lit::Is(_, t) | Lit::NotIs(_, t) => t.vars(),
        }
    }

    fn mentions(&self, var: &str) -> bool {
        match self {
            Lit::Eq(u, t) | Lit::Neq(u, t) => u.mentions(var) || t.mentions(var),
            Lit::Is(_, t) | Lit::NotIs(_, t) => t.mentions(var),
        }
    }

    fn mentions_any(&self, vars: &[String]) -> bool {
        vars.iter().any(|v| self.mentions(v))
    }

    fn subst(&self, var: &str, replacement: &OTerm) -> Lit {
        match self {
            Lit::Eq(u, t) => Lit::Eq(u.subst(var, replacement), t.subst(var, replacement)),
            Lit::Neq(u, t) => Lit::Neq(u.subst(var, replacement), t.subst(var, replacement)),
            Lit::Is(f, t) => Lit::Is(f.clone(), t.subst(var, replacement)),
            Lit::NotIs(f, t) => Lit::NotIs(f.clone(), t.subst(var, replacement)),
        }
    }

    fn negate(&self) -> Lit {
        match self {
            Lit::Eq(u, t) => Lit::Neq(u.clone(), t.clone()),
            Lit::Neq(u, t) => Lit::Eq(u.clone(), t.clone()),
            Lit::Is(f, t) => Lit::NotIs(f.clone(), t.clone()),
            Lit::NotIs(f, t) => Lit::Is(f.clone(), t.clone()),
        }
    }

    fn to_formula(&self) -> Formula {
        match self {
            Lit::Eq(u, t) => Formula::Eq(u.clone(), t.clone()),
            Lit::Neq(u, t) => Formula::not(Formula::Eq(u.clone(), t.clone())),
            Lit::Is(f, t) => Formula::Is(f.clone(), t.clone()),
            Lit::NotIs(f, t) => Formula::not(Formula::Is(f.clone(), t.clone())),
        }
    }
}

/// Result of simplifying a literal.
enum Simp {
    True,
    False,
    Keep(Lit),
}

/// Folds ground subterms of an open term into carrier elements: constants
/// become elements, and defined applications over elements collapse.
fn nf_oterm(b: &PartialAlgebra, t: &OTerm) -> OTerm {
    match t {
        OTerm::Var(_) | OTerm::Elem(_) => t.clone(),
        OTerm::App(f, children) => {
            if children.is_empty() {
                return match b.constant(f) {
                    Some(id) => OTerm::Elem(id),
                    None => t.clone(),
                };
            }
            let children: Vec<OTerm> = children.iter().map(|c| nf_oterm(b, c)).collect();
            let ids: Option<Vec<ElemId>> = children
                .iter()
                .map(|c| match c {
                    OTerm::Elem(id) => Some(*id),
                    _ => None,
                })
                .collect();
            if let Some(ids) = ids {
                if let Some(&result) = b.table().get(&(f.clone(), ids)) {
                    return OTerm::Elem(result);
                }
            }
            OTerm::App(f.clone(), children)
        }
    }
}

/// Simplifies a literal: normal-forms both sides, evaluates it when ground,
/// and folds syntactic (dis)equalities. Two normal-formed ground terms are
/// equal in F(B) exactly when they are syntactically equal.
fn simp_lit(b: &PartialAlgebra, lit: Lit) -> Simp {
    match lit {
        Lit::Eq(u, t) => {
            let (u, t) = (nf_oterm(b, &u), nf_oterm(b, &t));
            if u == t {
                return Simp::True;
            }
            if u.vars().is_empty() && t.vars().is_empty() {
                return Simp::False;
            }
            if u <= t {
                Simp::Keep(Lit::Eq(u, t))
            } else {
                Simp::Keep(Lit::Eq(t, u))
            }
        }
        Lit::Neq(u, t) => {
            let (u, t) = (nf_oterm(b, &u), nf_oterm(b, &t));
            if u == t {
                return Simp::False;
            }
            if u.vars().is_empty() && t.vars().is_empty() {
                return Simp::True;
            }
            if u <= t {
                Simp::Keep(Lit::Neq(u, t))
            } else {
                Simp::Keep(Lit::Neq(t, u))
            }
        }
        Lit::Is(f, t) => {
            let t = nf_oterm(b, &t);
            match &t {
                OTerm::Elem(_) => Simp::False,
                // a compound normal form evaluates to a carrier element or
                // to a stuck term with its own root symbol; either way a
                // tester for a different symbol is false, and a ground
                // compound (which nf left unfolded, hence stuck) satisfies
                // exactly its root's tester
                OTerm::App(root, _) if root != &f => Simp::False,
                OTerm::App(..) if t.vars().is_empty() => Simp::True,
                _ => Simp::Keep(Lit::Is(f, t)),
            }
        }
        Lit::NotIs(f, t) => match simp_lit(b, Lit::Is(f, t)) {
            Simp::True => Simp::False,
            Simp::False => Simp::True,
            Simp::Keep(Lit::Is(f, t)) => Simp::Keep(Lit::NotIs(f, t)),
            Simp::Keep(_) => unreachable!("Is simplifies to Is"),
        },
    }
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

struct Ctx<'a> {
    b: &'a PartialAlgebra,
    limit: u64,
    stats: QeStats,
    fresh: u64,
    /// F(B) = B, i.e. every operation is total on the carrier.
    total: bool,
    /// Solved universal clauses, keyed by bound variables and sorted
    /// literals. Repeated clauses are the norm after carrier expansions.
    clause_memo: std::collections::HashMap<(Vec<String>, Vec<Lit>), Formula>,
}

impl<'a> Ctx<'a> {
    fn new(b: &'a PartialAlgebra, options: &QeOptions) -> Ctx<'a> {
        Ctx {
            b,
            limit: options.budget,
            stats: QeStats::default(),
            fresh: 0,
            total: b.is_total(),
            clause_memo: std::collections::HashMap::new(),
        }
    }

    fn charge(&mut self, amount: u64) -> Result<()> {
        self.stats.nodes += amount;
        if self.stats.nodes > self.limit {
            Err(Error::BudgetExhausted {
                spent: self.stats.nodes,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("${}", self.fresh)
    }

    /// Advances the fresh-name counter past every `$n` name already present,
    /// so separately produced formulas never collide with new fresh names.
    /// Surface identifiers cannot contain `$`.
    fn seed_fresh(&mut self, f: &Formula) {
        for name in f.all_vars() {
            if let Some(n) = name.strip_prefix('$').and_then(|s| s.parse::<u64>().ok()) {
                self.fresh = self.fresh.max(n);
            }
        }
    }

    fn elems(&self) -> Vec<ElemId> {
        self.b.elements().collect()
    }
}

/// Renames every bound variable to a globally fresh name, so substitution
/// never captures.
fn rename_apart(ctx: &mut Ctx, f: &Formula, env: &BTreeMap<String, String>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Eq(u, t) => Formula::Eq(rename_term(u, env), rename_term(t, env)),
        Formula::Is(g, t) => Formula::Is(g.clone(), rename_term(t, env)),
        Formula::Not(inner) => Formula::Not(Box::new(rename_apart(ctx, inner, env))),
        Formula::And(v) => Formula::And(v.iter().map(|p| rename_apart(ctx, p, env)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|p| rename_apart(ctx, p, env)).collect()),
        Formula::Exists(x, body) => {
            let fresh = ctx.fresh_var();
            let mut env = env.clone();
            env.insert(x.clone(), fresh.clone());
            Formula::Exists(fresh, Box::new(rename_apart(ctx, body, &env)))
        }
        Formula::Forall(x, body) => {
            let fresh = ctx.fresh_var();
            let mut env = env.clone();
            env.insert(x.clone(), fresh.clone());
            Formula::Forall(fresh, Box::new(rename_apart(ctx, body, &env)))
        }
    }
}

fn rename_term(t: &OTerm, env: &BTreeMap<String, String>) -> OTerm {
    match t {
        OTerm::Var(v) => match env.get(v) {
            Some(fresh) => OTerm::Var(fresh.clone()),
            None => t.clone(),
        },
        OTerm::Elem(_) => t.clone(),
        OTerm::App(f, children) => OTerm::App(
            f.clone(),
            children.iter().map(|c| rename_term(c, env)).collect(),
        ),
    }
}

/// Negation normal form: pushes negation down to atoms, flipping quantifiers
/// and connectives.
fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True => {
            if negate {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if negate {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Eq(..) | Formula::Is(..) => {
            if negate {
                Formula::Not(Box::new(f.clone()))
            } else {
                f.clone()
            }
        }
        Formula::Not(inner) => nnf(inner, !negate),
        Formula::And(v) => {
            let parts = v.iter().map(|p| nnf(p, negate)).collect();
            if negate {
                Formula::or(parts)
            } else {
                Formula::and(parts)
            }
        }
        Formula::Or(v) => {
            let parts = v.iter().map(|p| nnf(p, negate)).collect();
            if negate {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Exists(x, body) => {
            let body = nnf(body, negate);
            if negate {
                Formula::forall(x.clone(), body)
            } else {
                Formula::exists(x.clone(), body)
            }
        }
        Formula::Forall(x, body) => {
            let body = nnf(body, negate);
            if negate {
                Formula::exists(x.clone(), body)
            } else {
                Formula::forall(x.clone(), body)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// to_standard: existential-positive formulas into standard form
// ---------------------------------------------------------------------------

/// One existential disjunct under construction: ∃bound(⋀ lits).
#[derive(Debug, Clone)]
struct Task {
    bound: Vec<String>,
    lits: Vec<Lit>,
}

impl Task {
    /// Inserts a literal with simplification and deduplication. Returns
    /// false when the literal is false, killing the task.
    fn push(&mut self, b: &PartialAlgebra, lit: Lit) -> bool {
        match simp_lit(b, lit) {
            Simp::True => true,
            Simp::False => false,
            Simp::Keep(lit) => {
                if !self.lits.contains(&lit) {
                    self.lits.push(lit);
                }
                true
            }
        }
    }

    /// Substitutes a term for a variable across all literals, re-simplifying.
    /// Returns false when a literal becomes false.
    fn substitute(&mut self, b: &PartialAlgebra, var: &str, replacement: &OTerm) -> bool {
        let lits = std::mem::take(&mut self.lits);
        for lit in lits {
            if !self.push(b, lit.subst(var, replacement)) {
                return false;
            }
        }
        true
    }

    /// A conjunction is contradictory when it contains a literal and its
    /// negation, or two positive testers with different symbols on one term.
    fn is_contradictory(&self) -> bool {
        for (i, lit) in self.lits.iter().enumerate() {
            let negated = lit.negate();
            if self.lits[i + 1..].contains(&negated) {
                return true;
            }
            if let Lit::Is(f, t) = lit {
                for other in &self.lits[i + 1..] {
                    if let Lit::Is(g, t2) = other {
                        if f != g && t == t2 {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Iterator over all tuples of carrier elements of a given width.
fn elem_tuples(elems: &[ElemId], width: usize) -> Vec<Vec<ElemId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..width {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for prefix in &out {
            for &e in elems {
                let mut tuple = prefix.clone();
                tuple.push(e);
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

enum TaskStep {
    Terminal,
    Replace(Vec<Task>),
}

/// Pins a variable to a carrier element inside a task: bound variables are
/// substituted away, free ones keep a defining equation. The substitution
/// runs first so the defining equation is not folded away with it.
fn bind_var_to_elem(b: &PartialAlgebra, branch: &mut Task, v: &str, e: ElemId) -> bool {
    let was_bound = branch.bound.iter().any(|x| x == v);
    branch.bound.retain(|x| x != v);
    if !branch.substitute(b, v, &OTerm::Elem(e)) {
        return false;
    }
    was_bound || branch.push(b, Lit::Eq(OTerm::Var(v.to_string()), OTerm::Elem(e)))
}

fn is_var_of(t: &OTerm) -> Option<&str> {
    match t {
        OTerm::Var(v) => Some(v),
        _ => None,
    }
}

fn is_elem(t: &OTerm) -> bool {
    matches!(t, OTerm::Elem(_))
}

/// Finds and applies the first rewriting step of the standardization
/// procedure to a task.
fn step_task(ctx: &mut Ctx, task: &Task) -> Result<TaskStep> {
    let bound = &task.bound;
    let is_bound = |v: &str| bound.iter().any(|b| b == v);

    if task.is_contradictory() {
        return Ok(TaskStep::Replace(Vec::new()));
    }

    for (i, lit) in task.lits.iter().enumerate() {
        let mentions_bound = lit.mentions_any(bound);
        match lit {
            Lit::Eq(u, t) => {
                // bound-variable side with no self-occurrence: substitute
                for (side, other) in [(u, t), (t, u)] {
                    if let Some(y) = is_var_of(side) {
                        if is_bound(y) && !other.mentions(y) {
                            let mut replaced = task.clone();
                            replaced.lits.remove(i);
                            replaced.bound.retain(|v| v != y);
                            ctx.charge(1)?;
                            if replaced.substitute(ctx.b, y, other) {
                                return Ok(TaskStep::Replace(vec![replaced]));
                            }
                            return Ok(TaskStep::Replace(Vec::new()));
                        }
                    }
                }
                // variable side occurring in the other side: every variable
                // of the equation is forced into B
                let self_occurring = [u, t].into_iter().any(|side| {
                    is_var_of(side).is_some_and(|v| {
                        let (_, other) = if side == u { (u, t) } else { (t, u) };
                        other.mentions(v)
                    })
                });
                if self_occurring {
                    return expand_equation_over_elements(ctx, task, i);
                }
                // element = compound mentioning a bound variable: the bound
                // variable must take a value in B
                let compound_elem = match (u, t) {
                    (OTerm::Elem(_), OTerm::App(..)) => Some(t),
                    (OTerm::App(..), OTerm::Elem(_)) => Some(u),
                    _ => None,
                };
                if let Some(compound) = compound_elem {
                    if let Some(y0) = compound.vars().into_iter().find(|v| is_bound(v)) {
                        return expand_bound_var_over_elements(ctx, task, &y0);
                    }
                    continue; // no bound variable: a quantifier-free conjunct
                }
                // compound = compound mentioning a bound variable
                if let (OTerm::App(f, us), OTerm::App(g, ts)) = (u, t) {
                    if mentions_bound {
                        return expand_compound_equation(ctx, task, i, f, us, g, ts);
                    }
                    continue;
                }
                // free variable subject: enforce single occurrence among the
                // special-destined literals
                if mentions_bound {
                    for (side, other) in [(u, t), (t, u)] {
                        if let Some(x) = is_var_of(side) {
                            if !is_bound(x) && !other.mentions(x) {
                                let clash = task.lits.iter().enumerate().any(|(j, l)| {
                                    j != i && l.mentions(x) && l.mentions_any(bound)
                                });
                                if clash {
                                    return substitute_free_subject(ctx, task, i, x, other);
                                }
                                break;
                            }
                        }
                    }
                }
            }
            Lit::Neq(u, t) => {
                // variable side occurring in the other side
                for (side, other) in [(u, t), (t, u)] {
                    if let Some(z) = is_var_of(side) {
                        if other.mentions(z) {
                            return expand_self_disequation(ctx, task, i, z, other);
                        }
                    }
                }
                if is_var_of(u).is_some() || is_var_of(t).is_some() {
                    continue; // z ≠ t with z not in t: already special shape
                }
                if !mentions_bound {
                    continue;
                }
                match (u, t) {
                    (OTerm::Elem(_), OTerm::App(..)) | (OTerm::App(..), OTerm::Elem(_)) => {
                        let compound = if is_elem(u) { t } else { u };
                        let y0 = compound
                            .vars()
                            .into_iter()
                            .find(|v| is_bound(v))
                            .expect("literal mentions a bound variable");
                        return expand_elem_disequation(ctx, task, i, &y0);
                    }
                    (OTerm::App(f, us), OTerm::App(g, ts)) => {
                        return expand_compound_disequation(ctx, task, i, f, us, g, ts);
                    }
                    _ => unreachable!("remaining shapes handled above"),
                }
            }
            Lit::Is(_, w) | Lit::NotIs(_, w) => {
                if is_var_of(w).is_some() || !mentions_bound {
                    continue;
                }
                return expand_compound_tester(ctx, task, i);
            }
        }
    }
    Ok(TaskStep::Terminal)
}

/// Expands an equation whose variables are all forced into the carrier:
/// substitute every tuple of carrier values, keeping `z = b` constraints
/// for the free variables.
fn expand_equation_over_elements(ctx: &mut Ctx, task: &Task, i: usize) -> Result<TaskStep> {
    let lit = task.lits[i].clone();
    let vars: Vec<String> = lit.vars().into_iter().collect();
    let elems = ctx.elems();
    let mut out = Vec::new();
    for tuple in elem_tuples(&elems, vars.len()) {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.lits.remove(i);
        let mut alive = true;
        let mut ground = lit.clone();
        for (v, e) in vars.iter().zip(&tuple) {
            ground = ground.subst(v, &OTerm::Elem(*e));
            if !bind_var_to_elem(ctx.b, &mut branch, v, *e) {
                alive = false;
                break;
            }
        }
        if alive && branch.push(ctx.b, ground) {
            out.push(branch);
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Substituting free variables needs care: the defining equation stays, so
/// re-add it after the task-wide substitution.
fn substitute_free_subject(
    ctx: &mut Ctx,
    task: &Task,
    i: usize,
    x: &str,
    replacement: &OTerm,
) -> Result<TaskStep> {
    ctx.charge(1)?;
    let mut replaced = task.clone();
    replaced.lits.remove(i);
    if !replaced.substitute(ctx.b, x, replacement) {
        return Ok(TaskStep::Replace(Vec::new()));
    }
    if !replaced.push(ctx.b, Lit::Eq(OTerm::Var(x.to_string()), replacement.clone())) {
        return Ok(TaskStep::Replace(Vec::new()));
    }
    Ok(TaskStep::Replace(vec![replaced]))
}

/// A bound variable inside a term equated with a carrier element can only
/// take carrier values: expand it over B.
fn expand_bound_var_over_elements(ctx: &mut Ctx, task: &Task, y0: &str) -> Result<TaskStep> {
    let elems = ctx.elems();
    let mut out = Vec::new();
    for e in elems {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.bound.retain(|v| v != y0);
        if branch.substitute(ctx.b, y0, &OTerm::Elem(e)) {
            out.push(branch);
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Compound = compound: either every argument evaluates into B (element
/// expansion), or — with equal root symbols — some argument escapes B and
/// the arguments are equal pairwise.
fn expand_compound_equation(
    ctx: &mut Ctx,
    task: &Task,
    i: usize,
    f: &str,
    us: &[OTerm],
    g: &str,
    ts: &[OTerm],
) -> Result<TaskStep> {
    let mut out = match expand_equation_over_elements(ctx, task, i)? {
        TaskStep::Replace(tasks) => tasks,
        TaskStep::Terminal => unreachable!("expansion always replaces"),
    };
    if f == g {
        let elems = ctx.elems();
        for j in 0..us.len() {
            ctx.charge(1)?;
            let mut branch = task.clone();
            branch.lits.remove(i);
            let mut alive = true;
            for e in &elems {
                if !branch.push(ctx.b, Lit::Neq(us[j].clone(), OTerm::Elem(*e))) {
                    alive = false;
                    break;
                }
            }
            if alive {
                for (uc, tc) in us.iter().zip(ts) {
                    if !branch.push(ctx.b, Lit::Eq(uc.clone(), tc.clone())) {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                out.push(branch);
            }
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Self-occurring disequation: z ≠ t with z inside t splits on whether z
/// escapes B (a term never equals a strict superterm outside the carrier).
fn expand_self_disequation(
    ctx: &mut Ctx,
    task: &Task,
    i: usize,
    z: &str,
    _t: &OTerm,
) -> Result<TaskStep> {
    let elems = ctx.elems();
    let mut out = Vec::new();
    // branch: z outside B, the disequation holds outright
    {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.lits.remove(i);
        let mut alive = true;
        for e in &elems {
            if !branch.push(ctx.b, Lit::Neq(OTerm::Var(z.to_string()), OTerm::Elem(*e))) {
                alive = false;
                break;
            }
        }
        if alive {
            out.push(branch);
        }
    }
    // branches: z = b for each carrier element
    for e in elems {
        ctx.charge(1)?;
        let mut branch = task.clone();
        if bind_var_to_elem(ctx.b, &mut branch, z, e) {
            out.push(branch);
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Element ≠ compound splits on whether the first bound variable of the
/// compound escapes B.
fn expand_elem_disequation(ctx: &mut Ctx, task: &Task, i: usize, y0: &str) -> Result<TaskStep> {
    let elems = ctx.elems();
    let mut out = Vec::new();
    // y0 outside B: the compound is stuck, distinct from every element
    {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.lits.remove(i);
        let mut alive = true;
        for e in &elems {
            if !branch.push(ctx.b, Lit::Neq(OTerm::Var(y0.to_string()), OTerm::Elem(*e))) {
                alive = false;
                break;
            }
        }
        if alive {
            out.push(branch);
        }
    }
    // y0 = b branches keep the (now smaller) disequation
    for e in elems {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.bound.retain(|v| v != y0);
        if branch.substitute(ctx.b, y0, &OTerm::Elem(e)) {
            out.push(branch);
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Compound ≠ compound: escape cases per argument plus the all-in-carrier
/// expansion.
fn expand_compound_disequation(
    ctx: &mut Ctx,
    task: &Task,
    i: usize,
    f: &str,
    us: &[OTerm],
    g: &str,
    ts: &[OTerm],
) -> Result<TaskStep> {
    let lit = task.lits[i].clone();
    let elems = ctx.elems();
    let mut out = Vec::new();

    // all-variables-in-B expansion
    let vars: Vec<String> = lit.vars().into_iter().collect();
    for tuple in elem_tuples(&elems, vars.len()) {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.lits.remove(i);
        let mut alive = true;
        let mut ground = lit.clone();
        for (v, e) in vars.iter().zip(&tuple) {
            ground = ground.subst(v, &OTerm::Elem(*e));
            if !bind_var_to_elem(ctx.b, &mut branch, v, *e) {
                alive = false;
                break;
            }
        }
        if alive && branch.push(ctx.b, ground) {
            out.push(branch);
        }
    }

    if f != g {
        // some argument of either side escapes B: the roots differ, so the
        // disequation holds outright
        for side in [us, ts] {
            for arg in side {
                ctx.charge(1)?;
                let mut branch = task.clone();
                branch.lits.remove(i);
                let mut alive = true;
                for e in &elems {
                    if !branch.push(ctx.b, Lit::Neq(arg.clone(), OTerm::Elem(*e))) {
                        alive = false;
                        break;
                    }
                }
                if alive {
                    out.push(branch);
                }
            }
        }
    } else {
        // equal roots: some argument escapes B and some argument pair differs
        for position in 0..us.len() {
            for escaping in [&us[position], &ts[position]] {
                for pair in 0..us.len() {
                    ctx.charge(1)?;
                    let mut branch = task.clone();
                    branch.lits.remove(i);
                    let mut alive = true;
                    for e in &elems {
                        if !branch.push(ctx.b, Lit::Neq((*escaping).clone(), OTerm::Elem(*e))) {
                            alive = false;
                            break;
                        }
                    }
                    if alive && branch.push(ctx.b, Lit::Neq(us[pair].clone(), ts[pair].clone()))
                    {
                        out.push(branch);
                    }
                }
            }
        }
    }
    Ok(TaskStep::Replace(out))
}

/// A tester on a compound term: once any variable of the term escapes B
/// the term is stuck and the tester reads its root symbol; otherwise the
/// variables range over the carrier.
fn expand_compound_tester(ctx: &mut Ctx, task: &Task, i: usize) -> Result<TaskStep> {
    let lit = task.lits[i].clone();
    let (symbol, term, positive) = match &lit {
        Lit::Is(f, t) => (f.clone(), t.clone(), true),
        Lit::NotIs(f, t) => (f.clone(), t.clone(), false),
        _ => unreachable!("caller checked"),
    };
    let root = match &term {
        OTerm::App(root, _) => root.clone(),
        _ => unreachable!("caller checked"),
    };
    let vars: Vec<String> = term.vars().into_iter().collect();
    let elems = ctx.elems();

    // shortcut: some variable of the term is already constrained out of B,
    // so the term is stuck and the tester reads off the root symbol
    for z in &vars {
        let all_out = elems.iter().all(|e| {
            task.lits
                .contains(&Lit::Neq(OTerm::Var(z.clone()), OTerm::Elem(*e)))
        });
        if all_out {
            ctx.charge(1)?;
            let mut branch = task.clone();
            branch.lits.remove(i);
            let truth = (root == symbol) == positive;
            if truth {
                return Ok(TaskStep::Replace(vec![branch]));
            }
            return Ok(TaskStep::Replace(Vec::new()));
        }
    }

    let mut out = Vec::new();
    // all variables in B: the tester becomes ground and folds
    for tuple in elem_tuples(&elems, vars.len()) {
        ctx.charge(1)?;
        let mut branch = task.clone();
        branch.lits.remove(i);
        let mut alive = true;
        let mut ground = lit.clone();
        for (v, e) in vars.iter().zip(&tuple) {
            ground = ground.subst(v, &OTerm::Elem(*e));
            if !bind_var_to_elem(ctx.b, &mut branch, v, *e) {
                alive = false;
                break;
            }
        }
        if alive && branch.push(ctx.b, ground) {
            out.push(branch);
        }
    }
    // some variable escapes B: the term is stuck, the tester reads the root
    let truth_when_stuck = (root == symbol) == positive;
    if truth_when_stuck {
        for z in &vars {
            ctx.charge(1)?;
            let mut branch = task.clone();
            branch.lits.remove(i);
            let mut alive = true;
            for e in &elems {
                if !branch.push(ctx.b, Lit::Neq(OTerm::Var(z.clone()), OTerm::Elem(*e))) {
                    alive = false;
                    break;
                }
            }
            if alive {
                out.push(branch);
            }
        }
    }
    Ok(TaskStep::Replace(out))
}

/// Expands an existential-positive formula into finished tasks.
fn formula_tasks(ctx: &mut Ctx, f: &Formula) -> Result<Vec<Task>> {
    // partial tasks carry unexpanded subformulas
    let mut work: Vec<(Task, Vec<Formula>)> = vec![(
        Task {
            bound: Vec::new(),
            lits: Vec::new(),
        },
        vec![f.clone()],
    )];
    let mut expanded = Vec::new();
    while let Some((mut task, mut pending)) = work.pop() {
        match pending.pop() {
            None => expanded.push(task),
            Some(next) => {
                match next {
                    Formula::True => work.push((task, pending)),
                    Formula::False => {}
                    Formula::Eq(u, t) => {
                        if task.push(ctx.b, Lit::Eq(u, t)) {
                            work.push((task, pending));
                        }
                    }
                    Formula::Is(f, t) => {
                        if task.push(ctx.b, Lit::Is(f, t)) {
                            work.push((task, pending));
                        }
                    }
                    Formula::Not(inner) => {
                        let lit = match *inner {
                            Formula::Eq(u, t) => Lit::Neq(u, t),
                            Formula::Is(f, t) => Lit::NotIs(f, t),
                            other => {
                                return Err(Error::NotExistentialPositive(format!(
                                    "negation above atom level: {other:?}"
                                )))
                            }
                        };
                        if task.push(ctx.b, lit) {
                            work.push((task, pending));
                        }
                    }
                    Formula::And(v) => {
                        pending.extend(v.into_iter().rev());
                        work.push((task, pending));
                    }
                    Formula::Or(v) => {
                        for branch in v {
                            ctx.charge(1)?;
                            let mut p = pending.clone();
                            p.push(branch);
                            work.push((task.clone(), p));
                        }
                    }
                    Formula::Exists(x, body) => {
                        // fresh name per expansion: the same existential
                        // subformula may be embedded in several places
                        let fresh = ctx.fresh_var();
                        task.bound.push(fresh.clone());
                        pending.push(body.subst(&x, &OTerm::Var(fresh)));
                        work.push((task, pending));
                    }
                    Formula::Forall(..) => {
                        return Err(Error::NotExistentialPositive(
                            "universal quantifier in existential normalization".into(),
                        ))
                    }
                }
            }
        }
    }
    Ok(expanded)
}

/// Runs the per-task rewriting to fixpoint and assembles the standard form.
fn tasks_to_standard(ctx: &mut Ctx, tasks: Vec<Task>) -> Result<Standard> {
    let mut work = tasks;
    let mut disjuncts = Vec::new();
    while let Some(task) = work.pop() {
        ctx.charge(1)?;
        match step_task(ctx, &task)? {
            TaskStep::Replace(replacements) => work.extend(replacements),
            TaskStep::Terminal => {
                disjuncts.push(finish_task(&task));
            }
        }
    }
    // deterministic disjunct order regardless of worklist order
    disjuncts.sort_by_key(|s| format!("{s:?}"));
    Ok(Standard::or(disjuncts))
}

/// Splits a terminal task into its special part (literals mentioning a bound
/// variable) and its quantifier-free part.
fn finish_task(task: &Task) -> Standard {
    let is_bound = |v: &str| task.bound.iter().any(|b| b == v);
    let mut special = Special {
        bound: Vec::new(),
        free_eqs: Vec::new(),
        free_neqs: Vec::new(),
        bound_neqs: Vec::new(),
        pos_testers: Vec::new(),
        neg_testers: Vec::new(),
    };
    let mut qf = Vec::new();
    for lit in &task.lits {
        if !lit.mentions_any(&task.bound) {
            qf.push(lit.to_formula());
            continue;
        }
        match lit {
            Lit::Eq(u, t) => {
                let (x, rhs) = [(u, t), (t, u)]
                    .into_iter()
                    .find_map(|(side, other)| match side {
                        OTerm::Var(v) if !is_bound(v) && !other.mentions(v) => {
                            Some((v.clone(), other.clone()))
                        }
                        _ => None,
                    })
                    .expect("terminal equations have a free-variable subject");
                special.free_eqs.push((x, rhs));
            }
            Lit::Neq(u, t) => {
                // prefer a bound subject, then a free-variable subject
                let bound_subject = [(u, t), (t, u)].into_iter().find_map(|(side, other)| {
                    match side {
                        OTerm::Var(v) if is_bound(v) && !other.mentions(v) => {
                            Some((v.clone(), other.clone()))
                        }
                        _ => None,
                    }
                });
                if let Some((y, rhs)) = bound_subject {
                    special.bound_neqs.push((y, rhs));
                } else {
                    let (z, rhs) = [(u, t), (t, u)]
                        .into_iter()
                        .find_map(|(side, other)| match side {
                            OTerm::Var(v) if !other.mentions(v) => {
                                Some((v.clone(), other.clone()))
                            }
                            _ => None,
                        })
                        .expect("terminal disequations have a variable subject");
                    special.free_neqs.push((z, rhs));
                }
            }
            Lit::Is(f, w) => match w {
                OTerm::Var(y) => special.pos_testers.push((f.clone(), y.clone())),
                _ => unreachable!("terminal testers apply to variables"),
            },
            Lit::NotIs(f, w) => match w {
                OTerm::Var(y) => special.neg_testers.push((f.clone(), y.clone())),
                _ => unreachable!("terminal testers apply to variables"),
            },
        }
    }
    // keep only the bound variables the special part actually uses
    special.bound = task
        .bound
        .iter()
        .filter(|y| {
            special
                .free_eqs
                .iter()
                .chain(&special.free_neqs)
                .any(|(_, t)| t.mentions(y))
                || special
                    .bound_neqs
                    .iter()
                    .any(|(z, t)| z == *y || t.mentions(y))
                || special
                    .pos_testers
                    .iter()
                    .chain(&special.neg_testers)
                    .any(|(_, z)| z == *y)
        })
        .cloned()
        .collect();
    let qf_formula = Formula::and(qf);
    let has_special = !(special.free_eqs.is_empty()
        && special.free_neqs.is_empty()
        && special.bound_neqs.is_empty()
        && special.pos_testers.is_empty()
        && special.neg_testers.is_empty());
    if has_special {
        Standard::and(vec![Standard::Qf(qf_formula), Standard::Special(special)])
    } else {
        Standard::Qf(qf_formula)
    }
}

fn to_standard_inner(ctx: &mut Ctx, f: &Formula) -> Result<Standard> {
    let normalized = nnf(f, false);
    let tasks = formula_tasks(ctx, &normalized)?;
    tasks_to_standard(ctx, tasks)
}

/// Rewrites a formula built from quantifier-free parts, ∧, ∨ and ∃ into an
/// equivalent standard formula.
pub fn to_standard(b: &PartialAlgebra, f: &Formula, options: &QeOptions) -> Result<Standard> {
    let mut ctx = Ctx::new(b, options);
    ctx.seed_fresh(f);
    let renamed = rename_apart(&mut ctx, f, &BTreeMap::new());
    to_standard_inner(&mut ctx, &renamed)
}

// ---------------------------------------------------------------------------
// negate_standard: universal clause solving
// ---------------------------------------------------------------------------

/// A universal clause problem: ∀bound(⋁ lits).
#[derive(Debug, Clone)]
struct UClause {
    bound: Vec<String>,
    lits: Vec<Lit>,
}

impl UClause {
    /// Inserts a literal with simplification. Returns true when the literal
    /// is trivially true, making the whole clause true.
    fn push(&mut self, b: &PartialAlgebra, lit: Lit) -> bool {
        match simp_lit(b, lit) {
            Simp::True => true,
            Simp::False => false,
            Simp::Keep(lit) => {
                if !self.lits.contains(&lit) {
                    self.lits.push(lit);
                }
                false
            }
        }
    }

    fn has_complementary_pair(&self) -> bool {
        self.lits
            .iter()
            .enumerate()
            .any(|(i, lit)| self.lits[i + 1..].contains(&lit.negate()))
    }
}

/// The domain a bound variable ranges over once its tester constraints are
/// taken into account.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Domain {
    Empty,
    ExactlyB,
    Infinite,
}

/// Classifies the domain of `y` from the tester literals of the clause.
/// The clause is a disjunction, so a matrix literal ¬Is_f(y) constrains y to
/// satisfy Is_f, and vice versa.
fn classify(ctx: &Ctx, lits: &[Lit], y: &str) -> Domain {
    let mut required: BTreeSet<&str> = BTreeSet::new();
    let mut forbidden: BTreeSet<&str> = BTreeSet::new();
    for lit in lits {
        match lit {
            Lit::NotIs(f, OTerm::Var(v)) if v == y => {
                required.insert(f);
            }
            Lit::Is(f, OTerm::Var(v)) if v == y => {
                forbidden.insert(f);
            }
            _ => {}
        }
    }
    if required.len() > 1 || required.intersection(&forbidden).next().is_some() {
        return Domain::Empty;
    }
    if required.len() == 1 {
        // y must be stuck with the required root; such elements exist
        // exactly when F(B) has stuck terms at all
        return if ctx.total {
            Domain::Empty
        } else {
            Domain::Infinite
        };
    }
    if ctx.total {
        return Domain::ExactlyB;
    }
    let all_function_symbols_forbidden = ctx
        .b
        .signature()
        .functions()
        .iter()
        .all(|(f, _)| forbidden.contains(f.as_str()));
    if all_function_symbols_forbidden {
        Domain::ExactlyB
    } else {
        Domain::Infinite
    }
}

/// Solves ∀bound(⋁ lits) into an equivalent existential-positive formula,
/// memoizing on the clause structure.
fn solve_universal(ctx: &mut Ctx, bound: Vec<String>, lits: Vec<Lit>) -> Result<Formula> {
    let mut key_lits = lits.clone();
    key_lits.sort();
    key_lits.dedup();
    let key = (bound.clone(), key_lits);
    if let Some(cached) = ctx.clause_memo.get(&key).cloned() {
        ctx.charge(1)?;
        return Ok(cached);
    }
    let solved = solve_universal_uncached(ctx, bound, lits)?;
    ctx.clause_memo.insert(key, solved.clone());
    Ok(solved)
}

fn solve_universal_uncached(ctx: &mut Ctx, bound: Vec<String>, lits: Vec<Lit>) -> Result<Formula> {
    ctx.charge(1)?;
    let mut clause = UClause {
        bound,
        lits: Vec::new(),
    };
    for lit in lits {
        if clause.push(ctx.b, lit) {
            return Ok(Formula::True);
        }
    }
    let mut outer: Vec<Formula> = Vec::new();

    'solve: loop {
        if clause.has_complementary_pair() {
            return Ok(Formula::True);
        }
        // disjuncts without bound variables move out of the quantifier scope
        let mut kept = Vec::new();
        for lit in std::mem::take(&mut clause.lits) {
            if lit.mentions_any(&clause.bound) {
                kept.push(lit);
            } else {
                outer.push(lit.to_formula());
            }
        }
        clause.lits = kept;

        if clause.lits.is_empty() {
            // ∀ over nonempty domains of an empty disjunction is false
            return Ok(Formula::or(outer));
        }

        // M5: ∀y(y ≠ t ∨ R) ⟺ R[y/t]
        let substitutable = clause.lits.iter().enumerate().find_map(|(i, lit)| {
            if let Lit::Neq(u, t) = lit {
                for (side, other) in [(u, t), (t, u)] {
                    if let OTerm::Var(y) = side {
                        if clause.bound.iter().any(|b| b == y) && !other.mentions(y) {
                            return Some((i, y.clone(), other.clone()));
                        }
                    }
                }
            }
            None
        });
        if let Some((i, y, other)) = substitutable {
            clause.lits.remove(i);
            clause.bound.retain(|v| v != &y);
            let lits = std::mem::take(&mut clause.lits);
            for lit in lits {
                if clause.push(ctx.b, lit.subst(&y, &other)) {
                    return Ok(Formula::True);
                }
            }
            continue 'solve;
        }

        // disequation and tester decompositions
        for (i, lit) in clause.lits.iter().enumerate() {
            match lit {
                Lit::Neq(u, t) => {
                    // self-occurring variable side: z ≠ t(z) splits over B
                    for (side, other) in [(u, t), (t, u)] {
                        if let OTerm::Var(z) = side {
                            if other.mentions(z) {
                                let z = z.clone();
                                let other = other.clone();
                                let mut rest = clause.clone();
                                rest.lits.remove(i);
                                return solve_self_disequation(ctx, rest, outer, &z, &other);
                            }
                        }
                    }
                    let has_var_side = is_var_of(u).is_some() || is_var_of(t).is_some();
                    if has_var_side {
                        // a free-variable subject over a compound with bound
                        // variables is the hard case of negating a special
                        let (z, other) = [(u, t), (t, u)]
                            .into_iter()
                            .find_map(|(side, other)| {
                                is_var_of(side).map(|v| (v.to_string(), other.clone()))
                            })
                            .expect("variable side exists");
                        debug_assert!(!clause.bound.contains(&z), "handled by M5");
                        if matches!(other, OTerm::App(..)) {
                            let mut rest = clause.clone();
                            rest.lits.remove(i);
                            return solve_free_var_disequation(ctx, rest, outer, &z, &other);
                        }
                        continue;
                    }
                    match (u, t) {
                        (OTerm::Elem(e), OTerm::App(..)) => {
                            let (e, t) = (*e, t.clone());
                            let mut rest = clause.clone();
                            rest.lits.remove(i);
                            return solve_elem_disequation(ctx, rest, outer, e, &t);
                        }
                        (OTerm::App(..), OTerm::Elem(e)) => {
                            let (e, u) = (*e, u.clone());
                            let mut rest = clause.clone();
                            rest.lits.remove(i);
                            return solve_elem_disequation(ctx, rest, outer, e, &u);
                        }
                        (OTerm::App(..), OTerm::App(..)) => {
                            let (u, t) = (u.clone(), t.clone());
                            let mut rest = clause.clone();
                            rest.lits.remove(i);
                            return solve_compound_disequation(ctx, rest, outer, &u, &t);
                        }
                        _ => unreachable!("ground disequations fold in simp"),
                    }
                }
                Lit::Is(f, w @ OTerm::App(root, _)) => {
                    // Is_f on a compound: false unless the roots agree, in
                    // which case it says the term escapes B
                    let (f, w, root) = (f.clone(), w.clone(), root.clone());
                    let mut rest = clause.clone();
                    rest.lits.remove(i);
                    if root != f {
                        return solve_universal_clause(ctx, rest, outer);
                    }
                    // w ∉ B ⟺ ⋀_b w ≠ b: conjunction splits the clause
                    let mut conjuncts = Vec::new();
                    for e in ctx.elems() {
                        let mut sub = rest.clone();
                        if !sub.push(ctx.b, Lit::Neq(w.clone(), OTerm::Elem(e))) {
                            conjuncts.push(solve_universal_clause(ctx, sub, Vec::new())?);
                        }
                    }
                    let inner = Formula::and(conjuncts);
                    outer.push(inner);
                    return Ok(Formula::or(outer));
                }
                Lit::NotIs(f, w @ OTerm::App(root, _)) => {
                    // ¬Is_f on a compound: true unless roots agree, else the
                    // term lies in B, a finite disjunction of equations
                    let (f, w, root) = (f.clone(), w.clone(), root.clone());
                    let mut rest = clause.clone();
                    rest.lits.remove(i);
                    if root != f {
                        return Ok(Formula::True);
                    }
                    for e in ctx.elems() {
                        if rest.push(ctx.b, Lit::Eq(w.clone(), OTerm::Elem(e))) {
                            return Ok(Formula::True);
                        }
                    }
                    return solve_universal_clause(ctx, rest, outer);
                }
                _ => {}
            }
        }

        // T-phase: only equations and testers on bound variables remain
        debug_assert!(clause.lits.iter().all(|l| matches!(
            l,
            Lit::Eq(..) | Lit::Is(_, OTerm::Var(_)) | Lit::NotIs(_, OTerm::Var(_))
        )));
        if clause.bound.is_empty() {
            outer.extend(clause.lits.iter().map(Lit::to_formula));
            return Ok(Formula::or(outer));
        }
        for y in clause.bound.clone() {
            if classify(ctx, &clause.lits, &y) == Domain::Empty {
                ctx.stats.empty_domains += 1;
                return Ok(Formula::True);
            }
        }
        let y = clause.bound.last().expect("nonempty").clone();
        match classify(ctx, &clause.lits, &y) {
            Domain::Empty => unreachable!("checked above"),
            Domain::Infinite => {
                // a tall witness for y falsifies every equation mentioning
                // it, so those equations contribute nothing
                ctx.stats.infinite_domain_drops += 1;
                clause.bound.pop();
                clause.lits.retain(|lit| match lit {
                    Lit::Eq(..) => !lit.mentions(&y),
                    Lit::Is(_, OTerm::Var(v)) | Lit::NotIs(_, OTerm::Var(v)) => v != &y,
                    _ => true,
                });
                continue 'solve;
            }
            Domain::ExactlyB => {
                ctx.stats.finite_domain_expansions += 1;
                clause.bound.pop();
                let template: Vec<Lit> = clause
                    .lits
                    .iter()
                    .filter(|lit| {
                        !matches!(lit,
                            Lit::Is(_, OTerm::Var(v)) | Lit::NotIs(_, OTerm::Var(v)) if v == &y)
                    })
                    .cloned()
                    .collect();
                let mut conjuncts = Vec::new();
                for e in ctx.elems() {
                    ctx.charge(1)?;
                    let substituted: Vec<Lit> =
                        template.iter().map(|l| l.subst(&y, &OTerm::Elem(e))).collect();
                    conjuncts.push(solve_universal(ctx, clause.bound.clone(), substituted)?);
                }
                outer.push(Formula::and(conjuncts));
                return Ok(Formula::or(outer));
            }
        }
    }
}

/// Re-enters the solver with an updated clause, merging the accumulated
/// outer disjuncts.
fn solve_universal_clause(
    ctx: &mut Ctx,
    clause: UClause,
    mut outer: Vec<Formula>,
) -> Result<Formula> {
    let solved = solve_universal(ctx, clause.bound, clause.lits)?;
    if outer.is_empty() {
        return Ok(solved);
    }
    outer.push(solved);
    Ok(Formula::or(outer))
}

/// z ≠ t with z occurring in t: either z escapes B (the disequation holds)
/// or z is an element and the disequation grounds one level.
fn solve_self_disequation(
    ctx: &mut Ctx,
    rest: UClause,
    mut outer: Vec<Formula>,
    z: &str,
    t: &OTerm,
) -> Result<Formula> {
    let mut conjuncts = Vec::new();
    // clause variant per carrier element: rest ∨ z ≠ e ∨ e ≠ t[z/e]
    for e in ctx.elems() {
        ctx.charge(1)?;
        let mut sub = rest.clone();
        let mut satisfied = sub.push(ctx.b, Lit::Neq(OTerm::Var(z.to_string()), OTerm::Elem(e)));
        satisfied |= sub.push(
            ctx.b,
            Lit::Neq(OTerm::Elem(e), t.subst(z, &OTerm::Elem(e))),
        );
        if !satisfied {
            conjuncts.push(solve_universal_clause(ctx, sub, Vec::new())?);
        }
    }
    outer.push(Formula::and(conjuncts));
    Ok(Formula::or(outer))
}

/// The positive-height disequation x ≠ f(t̄) with free subject x: case split
/// on Is_f(x), decomposing the stuck case into fresh existential children.
fn solve_free_var_disequation(
    ctx: &mut Ctx,
    rest: UClause,
    mut outer: Vec<Formula>,
    x: &str,
    t: &OTerm,
) -> Result<Formula> {
    let OTerm::App(f, ts) = t else {
        unreachable!("caller checked")
    };
    ctx.charge(1)?;

    // Branch A: Is_f(x). Then x = f(z̄) for fresh z̄ outside B, and
    // x ≠ t ⟺ some child pair differs, or t evaluates into B.
    let zs: Vec<String> = ts.iter().map(|_| ctx.fresh_var()).collect();
    let mut a_clause = rest.clone();
    let mut a_true = false;
    for (z, tc) in zs.iter().zip(ts) {
        if a_clause.push(ctx.b, Lit::Neq(OTerm::Var(z.clone()), tc.clone())) {
            a_true = true;
            break;
        }
    }
    if !a_true {
        for e in ctx.elems() {
            if a_clause.push(ctx.b, Lit::Eq(t.clone(), OTerm::Elem(e))) {
                a_true = true;
                break;
            }
        }
    }
    let a_inner = if a_true {
        Formula::True
    } else {
        solve_universal_clause(ctx, a_clause, Vec::new())?
    };
    let mut a_body = Formula::and(vec![
        Formula::Eq(
            OTerm::Var(x.to_string()),
            OTerm::App(f.clone(), zs.iter().map(|z| OTerm::Var(z.clone())).collect()),
        ),
        a_inner,
    ]);
    for z in zs.iter().rev() {
        a_body = Formula::exists(z.clone(), a_body);
    }
    let branch_a = Formula::and(vec![
        Formula::Is(f.clone(), OTerm::Var(x.to_string())),
        a_body,
    ]);

    // Branch B: ¬Is_f(x). Either x escapes B entirely (then x ≠ t holds and
    // the clause is true), or x is some element e and the literal grounds.
    let x_outside_b = Formula::and(
        ctx.elems()
            .into_iter()
            .map(|e| {
                Formula::not(Formula::Eq(OTerm::Var(x.to_string()), OTerm::Elem(e)))
            })
            .collect(),
    );
    let mut b_cases = Vec::new();
    for e in ctx.elems() {
        ctx.charge(1)?;
        let mut sub = rest.clone();
        let mut satisfied = false;
        let lits = std::mem::take(&mut sub.lits);
        for lit in lits {
            if sub.push(ctx.b, lit.subst(x, &OTerm::Elem(e))) {
                satisfied = true;
                break;
            }
        }
        if !satisfied && sub.push(ctx.b, Lit::Neq(OTerm::Elem(e), t.subst(x, &OTerm::Elem(e)))) {
            satisfied = true;
        }
        let solved = if satisfied {
            Formula::True
        } else {
            solve_universal_clause(ctx, sub, Vec::new())?
        };
        b_cases.push(Formula::and(vec![
            Formula::Eq(OTerm::Var(x.to_string()), OTerm::Elem(e)),
            solved,
        ]));
    }
    let branch_b = Formula::and(vec![
        Formula::not(Formula::Is(f.clone(), OTerm::Var(x.to_string()))),
        Formula::or(vec![x_outside_b, Formula::or(b_cases)]),
    ]);

    outer.push(Formula::or(vec![branch_a, branch_b]));
    Ok(Formula::or(outer))
}

/// e ≠ f(t̄): for every preimage tuple of e under f, some argument must
/// differ. A conjunction over the preimage, each conjunct a smaller clause.
fn solve_elem_disequation(
    ctx: &mut Ctx,
    rest: UClause,
    mut outer: Vec<Formula>,
    e: ElemId,
    t: &OTerm,
) -> Result<Formula> {
    let OTerm::App(f, ts) = t else {
        unreachable!("caller checked")
    };
    let preimage: Vec<Vec<ElemId>> = ctx
        .b
        .table()
        .iter()
        .filter(|((g, _), result)| g == f && **result == e)
        .map(|((_, args), _)| args.clone())
        .collect();
    let mut conjuncts = Vec::new();
    for tuple in preimage {
        ctx.charge(1)?;
        let mut sub = rest.clone();
        let mut satisfied = false;
        for (tc, ce) in ts.iter().zip(&tuple) {
            if sub.push(ctx.b, Lit::Neq(tc.clone(), OTerm::Elem(*ce))) {
                satisfied = true;
                break;
            }
        }
        if !satisfied {
            conjuncts.push(solve_universal_clause(ctx, sub, Vec::new())?);
        }
    }
    outer.push(Formula::and(conjuncts));
    Ok(Formula::or(outer))
}

/// f(ū) ≠ g(t̄) in a universal clause: never produced by the pipeline's own
/// rewrites, but handled for completeness. Both sides agree only if they
/// evaluate to one element together, or have equal roots with pairwise equal
/// arguments outside B.
fn solve_compound_disequation(
    ctx: &mut Ctx,
    rest: UClause,
    mut outer: Vec<Formula>,
    u: &OTerm,
    t: &OTerm,
) -> Result<Formula> {
    let (OTerm::App(f, us), OTerm::App(g, ts)) = (u, t) else {
        unreachable!("caller checked")
    };
    let mut conjuncts = Vec::new();
    // for every element e: u ≠ e or t ≠ e
    for e in ctx.elems() {
        ctx.charge(1)?;
        let mut sub = rest.clone();
        let sat = sub.push(ctx.b, Lit::Neq(u.clone(), OTerm::Elem(e)))
            || sub.push(ctx.b, Lit::Neq(t.clone(), OTerm::Elem(e)));
        if !sat {
            conjuncts.push(solve_universal_clause(ctx, sub, Vec::new())?);
        }
    }
    if f == g && us.len() == ts.len() {
        // and additionally: u ∈ B, or some argument pair differs
        ctx.charge(1)?;
        let mut sub = rest.clone();
        let mut satisfied = false;
        for e in ctx.elems() {
            if sub.push(ctx.b, Lit::Eq(u.clone(), OTerm::Elem(e))) {
                satisfied = true;
                break;
            }
        }
        if !satisfied {
            for (uc, tc) in us.iter().zip(ts) {
                if sub.push(ctx.b, Lit::Neq(uc.clone(), tc.clone())) {
                    satisfied = true;
                    break;
                }
            }
        }
        if !satisfied {
            conjuncts.push(solve_universal_clause(ctx, sub, Vec::new())?);
        }
    }
    outer.push(Formula::and(conjuncts));
    Ok(Formula::or(outer))
}

/// Negates one special formula into an equivalent standard formula.
fn negate_special(ctx: &mut Ctx, sp: &Special) -> Result<Standard> {
    let mut lits = Vec::new();
    for (x, t) in &sp.free_eqs {
        lits.push(Lit::Neq(OTerm::Var(x.clone()), t.clone()));
    }
    for (x, t) in &sp.free_neqs {
        lits.push(Lit::Eq(OTerm::Var(x.clone()), t.clone()));
    }
    for (y, t) in &sp.bound_neqs {
        lits.push(Lit::Eq(OTerm::Var(y.clone()), t.clone()));
    }
    for (f, y) in &sp.pos_testers {
        lits.push(Lit::NotIs(f.clone(), OTerm::Var(y.clone())));
    }
    for (f, y) in &sp.neg_testers {
        lits.push(Lit::Is(f.clone(), OTerm::Var(y.clone())));
    }
    let solved = solve_universal(ctx, sp.bound.clone(), lits)?;
    to_standard_inner(ctx, &solved)
}

fn negate_standard_inner(ctx: &mut Ctx, s: &Standard) -> Result<Standard> {
    match s {
        Standard::Qf(f) => Ok(Standard::Qf(nnf(f, true))),
        Standard::Special(sp) => negate_special(ctx, sp),
        Standard::And(v) => {
            let parts = v
                .iter()
                .map(|p| negate_standard_inner(ctx, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(Standard::or(parts))
        }
        Standard::Or(v) => {
            let parts = v
                .iter()
                .map(|p| negate_standard_inner(ctx, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(Standard::and(parts))
        }
    }
}

/// Rewrites the negation of a standard formula into standard form.
pub fn negate_standard(b: &PartialAlgebra, s: &Standard, options: &QeOptions) -> Result<Standard> {
    let mut ctx = Ctx::new(b, options);
    ctx.seed_fresh(&s.to_formula());
    negate_standard_inner(&mut ctx, s)
}

// ---------------------------------------------------------------------------
// eliminate and decide
// ---------------------------------------------------------------------------

fn standardize(ctx: &mut Ctx, f: &Formula) -> Result<Standard> {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Is(..) => {
            Ok(Standard::Qf(f.clone()))
        }
        Formula::Not(inner) => {
            let s = standardize(ctx, inner)?;
            negate_standard_inner(ctx, &s)
        }
        Formula::And(v) => {
            let parts = standardize_parts(ctx, v)?;
            Ok(Standard::and(parts))
        }
        Formula::Or(v) => {
            let parts = standardize_parts(ctx, v)?;
            Ok(Standard::or(parts))
        }
        Formula::Exists(x, body) => {
            let inner = standardize(ctx, body)?;
            let rebuilt = Formula::exists(x.clone(), inner.to_formula());
            to_standard_inner(ctx, &rebuilt)
        }
        Formula::Forall(x, body) => {
            // ∀xφ ⟺ ¬∃x¬φ
            let negated_body = standardize(ctx, &Formula::not((**body).clone()))?;
            let rebuilt = Formula::exists(x.clone(), negated_body.to_formula());
            let existential = to_standard_inner(ctx, &rebuilt)?;
            negate_standard_inner(ctx, &existential)
        }
    }
}

fn standardize_parts(ctx: &mut Ctx, parts: &[Formula]) -> Result<Vec<Standard>> {
    parts.iter().map(|p| standardize(ctx, p)).collect()
}

/// Evaluates a closed special formula: its negation contains no
/// disequations with free subjects, so the universal solver grounds it
/// completely and the truth value falls out.
fn closed_special_value(ctx: &mut Ctx, sp: &Special) -> Result<bool> {
    let negated = negate_special(ctx, sp)?;
    let formula = negated.to_formula();
    debug_assert!(formula.is_quantifier_free() && formula.is_closed());
    let value = evaluate_qf(ctx.b, &formula, &BTreeMap::new())?;
    Ok(!value)
}

fn reduce_closed_specials(ctx: &mut Ctx, s: &Standard) -> Result<Standard> {
    match s {
        Standard::Qf(_) => Ok(s.clone()),
        Standard::Special(sp) => {
            if sp.is_closed() {
                Ok(Standard::truth(closed_special_value(ctx, sp)?))
            } else {
                Ok(s.clone())
            }
        }
        Standard::And(v) => Ok(Standard::and(
            v.iter()
                .map(|p| reduce_closed_specials(ctx, p))
                .collect::<Result<Vec<_>>>()?,
        )),
        Standard::Or(v) => Ok(Standard::or(
            v.iter()
                .map(|p| reduce_closed_specials(ctx, p))
                .collect::<Result<Vec<_>>>()?,
        )),
    }
}

/// The result of an elimination run.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub formula: Formula,
    pub standard: Standard,
    pub stats: QeStats,
}

/// Eliminates quantifiers innermost-out, alternating standardization and
/// negation. Closed special subformulas reduce to truth values, so closed
/// inputs always come out quantifier-free (variable-free, in fact); an open
/// input keeps a special subformula only where the theory offers no
/// quantifier-free equivalent.
pub fn eliminate(b: &PartialAlgebra, f: &Formula, options: &QeOptions) -> Result<Elimination> {
    let mut ctx = Ctx::new(b, options);
    ctx.seed_fresh(f);
    let renamed = rename_apart(&mut ctx, f, &BTreeMap::new());
    let standard = standardize(&mut ctx, &renamed)?;
    let reduced = reduce_closed_specials(&mut ctx, &standard)?;
    Ok(Elimination {
        formula: reduced.to_formula(),
        standard: reduced,
        stats: ctx.stats,
    })
}

/// Decides a sentence over F(B)* for the partial algebra induced by Γ.
pub fn decide_sentence(gamma: &EquationSet, f: &Formula, options: &QeOptions) -> Result<bool> {
    let algebra = build_partial_algebra(gamma);
    decide_in_algebra(&algebra, f, options)
}

/// Decides a sentence against an already-built partial algebra.
pub fn decide_in_algebra(b: &PartialAlgebra, f: &Formula, options: &QeOptions) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(
            free.into_iter().collect::<Vec<_>>().join(", "),
        ));
    }
    let elimination = eliminate(b, f, options)?;
    evaluate_qf(b, &elimination.formula, &BTreeMap::new())
}
