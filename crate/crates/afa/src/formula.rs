//! First-order formulas over F(B) with tester predicates: abstract syntax,
//! parsing, and evaluation.
//!
//! Open terms mix signature symbols, carrier elements of B (written `[t]` in
//! the surface syntax) and variables. Atoms are equalities between open
//! terms and tester applications `is_f(t)`; formulas close them under `&`,
//! `|`, `!`, `exists v.` and `forall v.`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::free_extension::{is_f, BTerm, ElemId, PartialAlgebra};
use crate::term::Cursor;

/// A term with variables over Σ ∪ B: a variable, a carrier element, or a
/// symbol application (constants are nullary applications).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OTerm {
    Var(String),
    Elem(ElemId),
    App(String, Vec<OTerm>),
}

impl OTerm {
    pub fn constant(name: &str) -> OTerm {
        OTerm::App(name.to_string(), Vec::new())
    }

    /// Height with variables and B elements at 0.
    pub fn height(&self) -> usize {
        match self {
            OTerm::Var(_) | OTerm::Elem(_) => 0,
            OTerm::App(_, children) => children
                .iter()
                .map(|c| c.height() + 1)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, OTerm::Var(_))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            OTerm::Var(v) => {
                out.insert(v.clone());
            }
            OTerm::Elem(_) => {}
            OTerm::App(_, children) => children.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            OTerm::Var(v) => v == var,
            OTerm::Elem(_) => false,
            OTerm::App(_, children) => children.iter().any(|c| c.mentions(var)),
        }
    }

    /// Substitutes `replacement` for every occurrence of `var`.
    pub fn subst(&self, var: &str, replacement: &OTerm) -> OTerm {
        match self {
            OTerm::Var(v) if v == var => replacement.clone(),
            OTerm::Var(_) | OTerm::Elem(_) => self.clone(),
            OTerm::App(f, children) => OTerm::App(
                f.clone(),
                children.iter().map(|c| c.subst(var, replacement)).collect(),
            ),
        }
    }

    /// Evaluates a term under a valuation of its variables.
    pub fn eval(
        &self,
        algebra: &PartialAlgebra,
        valuation: &BTreeMap<String, BTerm>,
    ) -> Result<BTerm> {
        match self {
            OTerm::Var(v) => valuation
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnassignedVariable(v.clone())),
            OTerm::Elem(id) => Ok(BTerm::Elem(*id)),
            OTerm::App(f, children) => {
                if children.is_empty() {
                    return algebra
                        .constant(f)
                        .map(BTerm::Elem)
                        .ok_or_else(|| Error::UnknownSymbol(f.clone()));
                }
                let args = children
                    .iter()
                    .map(|c| c.eval(algebra, valuation))
                    .collect::<Result<Vec<_>>>()?;
                algebra.apply(f, args)
            }
        }
    }

    /// Renders the term, bracketing B elements with their representatives.
    pub fn render(&self, algebra: &PartialAlgebra) -> String {
        match self {
            OTerm::Var(v) => v.clone(),
            OTerm::Elem(id) => format!("[{}]", algebra.rep(*id)),
            OTerm::App(f, children) => {
                if children.is_empty() {
                    f.clone()
                } else {
                    let inner: Vec<String> =
                        children.iter().map(|c| c.render(algebra)).collect();
                    format!("{f}({})", inner.join(","))
                }
            }
        }
    }
}

impl fmt::Display for OTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OTerm::Var(v) => write!(f, "{v}"),
            OTerm::Elem(id) => write!(f, "[#{id}]"),
            OTerm::App(g, children) => {
                write!(f, "{g}")?;
                if !children.is_empty() {
                    write!(f, "(")?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// First-order formulas over F(B) with tester predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Eq(OTerm, OTerm),
    /// The tester atom Is_f(t).
    Is(String, OTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    /// Conjunction with constant folding and flattening.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.dedup();
        match flat.len() {
            0 => Formula::True,
            1 => flat.pop().expect("one element"),
            _ => Formula::And(flat),
        }
    }

    /// Disjunction with constant folding and flattening.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.dedup();
        match flat.len() {
            0 => Formula::False,
            1 => flat.pop().expect("one element"),
            _ => Formula::Or(flat),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Is(..) => true,
            Formula::Not(inner) => inner.is_quantifier_free(),
            Formula::And(v) | Formula::Or(v) => v.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Eq(u, t) => {
                    for v in u.vars().union(&t.vars()) {
                        if !bound.iter().any(|b| b == v) {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::Is(_, t) => {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
                Formula::Not(inner) => go(inner, bound, out),
                Formula::And(v) | Formula::Or(v) => v.iter().for_each(|p| go(p, bound, out)),
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Eq(u, t) => {
                    out.extend(u.vars());
                    out.extend(t.vars());
                }
                Formula::Is(_, t) => out.extend(t.vars()),
                Formula::Not(inner) => go(inner, out),
                Formula::And(v) | Formula::Or(v) => v.iter().for_each(|p| go(p, out)),
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    out.insert(x.clone());
                    go(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Substitutes a term for a free variable (capture is the caller's
    /// concern; the elimination pipeline keeps bound names globally unique).
    pub fn subst(&self, var: &str, replacement: &OTerm) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(u, t) => {
                Formula::Eq(u.subst(var, replacement), t.subst(var, replacement))
            }
            Formula::Is(f, t) => Formula::Is(f.clone(), t.subst(var, replacement)),
            Formula::Not(inner) => Formula::Not(Box::new(inner.subst(var, replacement))),
            Formula::And(v) => {
                Formula::And(v.iter().map(|p| p.subst(var, replacement)).collect())
            }
            Formula::Or(v) => Formula::Or(v.iter().map(|p| p.subst(var, replacement)).collect()),
            Formula::Exists(x, body) if x != var => {
                Formula::Exists(x.clone(), Box::new(body.subst(var, replacement)))
            }
            Formula::Forall(x, body) if x != var => {
                Formula::Forall(x.clone(), Box::new(body.subst(var, replacement)))
            }
            Formula::Exists(..) | Formula::Forall(..) => self.clone(),
        }
    }

    /// Renders with B-element brackets resolved against the algebra.
    pub fn render(&self, algebra: &PartialAlgebra) -> String {
        fn go(f: &Formula, algebra: &PartialAlgebra, out: &mut String) {
            match f {
                Formula::True => out.push_str("true"),
                Formula::False => out.push_str("false"),
                Formula::Eq(u, t) => {
                    out.push_str(&u.render(algebra));
                    out.push_str(" = ");
                    out.push_str(&t.render(algebra));
                }
                Formula::Is(g, t) => {
                    out.push_str("is_");
                    out.push_str(g);
                    out.push('(');
                    out.push_str(&t.render(algebra));
                    out.push(')');
                }
                Formula::Not(inner) => {
                    out.push_str("!(");
                    go(inner, algebra, out);
                    out.push(')');
                }
                Formula::And(v) => {
                    out.push('(');
                    for (i, p) in v.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" & ");
                        }
                        go(p, algebra, out);
                    }
                    out.push(')');
                }
                Formula::Or(v) => {
                    out.push('(');
                    for (i, p) in v.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" | ");
                        }
                        go(p, algebra, out);
                    }
                    out.push(')');
                }
                Formula::Exists(x, body) => {
                    out.push_str("exists ");
                    out.push_str(x);
                    out.push_str(". ");
                    go(body, algebra, out);
                }
                Formula::Forall(x, body) => {
                    out.push_str("forall ");
                    out.push_str(x);
                    out.push_str(". ");
                    go(body, algebra, out);
                }
            }
        }
        let mut out = String::new();
        go(self, algebra, &mut out);
        out
    }
}

/// Evaluates a quantifier-free formula under a valuation of its free
/// variables.
pub fn evaluate_qf(
    algebra: &PartialAlgebra,
    formula: &Formula,
    valuation: &BTreeMap<String, BTerm>,
) -> Result<bool> {
    match formula {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq(u, t) => Ok(u.eval(algebra, valuation)? == t.eval(algebra, valuation)?),
        Formula::Is(f, t) => Ok(is_f(&t.eval(algebra, valuation)?, f)),
        Formula::Not(inner) => Ok(!evaluate_qf(algebra, inner, valuation)?),
        Formula::And(v) => {
            for p in v {
                if !evaluate_qf(algebra, p, valuation)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(v) => {
            for p in v {
                if evaluate_qf(algebra, p, valuation)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(..) | Formula::Forall(..) => Err(Error::NotExistentialPositive(
            "quantifier in quantifier-free evaluation".into(),
        )),
    }
}

/// Full first-order evaluation with quantifiers ranging over an explicit
/// domain of F(B)-terms. Exact on finite algebras (domain = carrier); a
/// bounded model check otherwise. Used as a semantic oracle in tests.
pub fn evaluate_in_domain(
    algebra: &PartialAlgebra,
    formula: &Formula,
    valuation: &mut BTreeMap<String, BTerm>,
    domain: &[BTerm],
) -> Result<bool> {
    match formula {
        Formula::Exists(x, body) => {
            for value in domain {
                let previous = valuation.insert(x.clone(), value.clone());
                let holds = evaluate_in_domain(algebra, body, valuation, domain)?;
                match previous {
                    Some(p) => {
                        valuation.insert(x.clone(), p);
                    }
                    None => {
                        valuation.remove(x);
                    }
                }
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(x, body) => {
            for value in domain {
                let previous = valuation.insert(x.clone(), value.clone());
                let holds = evaluate_in_domain(algebra, body, valuation, domain)?;
                match previous {
                    Some(p) => {
                        valuation.insert(x.clone(), p);
                    }
                    None => {
                        valuation.remove(x);
                    }
                }
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Not(inner) => Ok(!evaluate_in_domain(algebra, inner, valuation, domain)?),
        Formula::And(v) => {
            for p in v {
                if !evaluate_in_domain(algebra, p, valuation, domain)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(v) => {
            for p in v {
                if evaluate_in_domain(algebra, p, valuation, domain)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => evaluate_qf(algebra, formula, valuation),
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

const KEYWORDS: [&str; 5] = ["exists", "forall", "not", "true", "false"];

struct FormulaParser<'a, 'b> {
    cur: Cursor<'a>,
    algebra: &'b PartialAlgebra,
}

/// Parses a formula. Grammar, loosest to tightest: `exists v. φ` /
/// `forall v. φ`, then `|`, then `&`, then `!` (also spelled `not`), then
/// atoms: `true`, `false`, `(φ)`, `is_f(t)`, `t = t`, `t != t`. Identifiers
/// that are not declared symbols are variables; `[t]` denotes the carrier
/// element of the ground term `t`.
pub fn parse_formula(text: &str, algebra: &PartialAlgebra) -> Result<Formula> {
    let mut parser = FormulaParser {
        cur: Cursor::new(text),
        algebra,
    };
    let formula = parser.formula()?;
    if parser.cur.at_end() {
        Ok(formula)
    } else {
        Err(Error::TrailingInput(parser.cur.rest().trim().to_string()))
    }
}

impl<'a, 'b> FormulaParser<'a, 'b> {
    fn peek_ident(&mut self) -> Option<String> {
        self.cur.skip_ws();
        let save = self.cur.clone_pos();
        let ident = self.cur.ident();
        self.cur.restore_pos(save);
        ident
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek_ident().as_deref() {
            Some("exists") => {
                self.cur.ident();
                self.quantified(true)
            }
            Some("forall") => {
                self.cur.ident();
                self.quantified(false)
            }
            _ => self.or_expr(),
        }
    }

    fn quantified(&mut self, existential: bool) -> Result<Formula> {
        let Some(var) = self.cur.ident() else {
            return Err(self.cur.error("expected a variable after the quantifier"));
        };
        if KEYWORDS.contains(&var.as_str()) {
            return Err(self.cur.error(format!("`{var}` is reserved")));
        }
        if self.algebra.signature().arity(&var).is_some() {
            return Err(self
                .cur
                .error(format!("quantified variable `{var}` shadows a signature symbol")));
        }
        self.cur.skip_ws();
        self.cur.expect('.')?;
        let body = self.formula()?;
        Ok(if existential {
            Formula::exists(var, body)
        } else {
            Formula::forall(var, body)
        })
    }

    fn or_expr(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and_expr()?];
        loop {
            self.cur.skip_ws();
            if self.cur.eat('|') {
                parts.push(self.and_expr()?);
            } else {
                return Ok(Formula::or(parts));
            }
        }
    }

    fn and_expr(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        loop {
            self.cur.skip_ws();
            if self.cur.eat('&') {
                parts.push(self.unary()?);
            } else {
                return Ok(Formula::and(parts));
            }
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        self.cur.skip_ws();
        if self.cur.eat('!') {
            // lookahead distinguishes negation from `!=` typos at formula level
            return Ok(Formula::not(self.unary()?));
        }
        if self.peek_ident().as_deref() == Some("not") {
            self.cur.ident();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        self.cur.skip_ws();
        if self.cur.eat('(') {
            let inner = self.formula()?;
            self.cur.skip_ws();
            self.cur.expect(')')?;
            return Ok(inner);
        }
        match self.peek_ident().as_deref() {
            Some("true") => {
                self.cur.ident();
                return Ok(Formula::True);
            }
            Some("false") => {
                self.cur.ident();
                return Ok(Formula::False);
            }
            Some(name) => {
                // tester syntax: is_<function symbol>(term)
                if let Some(symbol) = name.strip_prefix("is_") {
                    if self.algebra.signature().is_function(symbol) {
                        let symbol = symbol.to_string();
                        self.cur.ident();
                        self.cur.skip_ws();
                        self.cur.expect('(')?;
                        let arg = self.term()?;
                        self.cur.skip_ws();
                        self.cur.expect(')')?;
                        return Ok(Formula::Is(symbol, arg));
                    }
                }
            }
            None => {}
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        self.cur.skip_ws();
        if self.cur.eat('=') {
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        if self.cur.eat('!') {
            self.cur.expect('=')?;
            let rhs = self.term()?;
            return Ok(Formula::not(Formula::Eq(lhs, rhs)));
        }
        Err(self.cur.error("expected `=` or `!=` after a term"))
    }

    fn term(&mut self) -> Result<OTerm> {
        self.cur.skip_ws();
        if self.cur.eat('[') {
            let start = self.cur.rest();
            let mut depth = 0usize;
            let mut len = 0usize;
            loop {
                match self.cur.peek() {
                    Some('[') => depth += 1,
                    Some(']') if depth == 0 => break,
                    Some(']') => depth -= 1,
                    Some(_) => {}
                    None => return Err(self.cur.error("unterminated `[`")),
                }
                len += self.cur.bump().map(char::len_utf8).unwrap_or(0);
            }
            self.cur.expect(']')?;
            let inner = &start[..len];
            let ground = crate::term::parse_term(inner, self.algebra.signature())?;
            return self
                .algebra
                .class_of_term(&ground)
                .map(OTerm::Elem)
                .ok_or_else(|| Error::NotAnElement(ground.to_string()));
        }
        let Some(name) = self.cur.ident() else {
            return Err(self.cur.error("expected a term"));
        };
        if KEYWORDS.contains(&name.as_str()) {
            return Err(self.cur.error(format!("`{name}` is reserved")));
        }
        match self.algebra.signature().arity(&name) {
            Some(0) => Ok(OTerm::constant(&name)),
            Some(arity) => {
                self.cur.skip_ws();
                self.cur.expect('(')?;
                let mut children = Vec::new();
                self.cur.skip_ws();
                if !self.cur.eat(')') {
                    loop {
                        children.push(self.term()?);
                        self.cur.skip_ws();
                        if self.cur.eat(',') {
                            continue;
                        }
                        self.cur.expect(')')?;
                        break;
                    }
                }
                if children.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name,
                        expected: arity,
                        found: children.len(),
                    });
                }
                Ok(OTerm::App(name, children))
            }
            None => Ok(OTerm::Var(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_extension::build_partial_algebra;
    use crate::term::{parse_signature, parse_term, EquationSet};

    fn algebra_ex() -> PartialAlgebra {
        let sig = parse_signature("fun f 2; const a b c").unwrap();
        let gamma = EquationSet::new(
            sig.clone(),
            vec![
                (parse_term("a", &sig).unwrap(), parse_term("fbc", &sig).unwrap()),
                (parse_term("c", &sig).unwrap(), parse_term("fab", &sig).unwrap()),
            ],
        )
        .unwrap();
        build_partial_algebra(&gamma)
    }

    fn algebra_free() -> PartialAlgebra {
        let sig = parse_signature("fun f 2; const a b c").unwrap();
        build_partial_algebra(&EquationSet::empty(sig))
    }

    #[test]
    fn parse_examples() {
        let b = algebra_free();
        let f = parse_formula("exists y. x = f(y,b)", &b).unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "y",
                Formula::Eq(
                    OTerm::Var("x".into()),
                    OTerm::App(
                        "f".into(),
                        vec![OTerm::Var("y".into()), OTerm::constant("b")]
                    )
                )
            )
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);

        let f = parse_formula("forall y. (y = a | is_f(y))", &b).unwrap();
        assert!(matches!(f, Formula::Forall(..)));
        assert!(f.is_closed());

        let f = parse_formula("is_f(a) & not a = b", &b).unwrap();
        match &f {
            Formula::And(parts) => {
                assert_eq!(parts.len(), 2);
                assert!(matches!(&parts[0], Formula::Is(sym, _) if sym == "f"));
                assert!(matches!(&parts[1], Formula::Not(_)));
            }
            other => panic!("expected a conjunction, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        let b = algebra_free();
        assert!(matches!(
            parse_formula("f(a) = a", &b),
            Err(Error::ArityMismatch { .. })
        ));
        // an undeclared identifier is a variable, so `g(…)` is a stray paren
        assert!(matches!(
            parse_formula("g(a) = a", &b),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_formula("exists f. f = a", &b),
            Err(Error::Parse { .. })
        ));
        assert!(parse_formula("a = b extra", &b).is_err());
    }

    #[test]
    fn bracket_literals_resolve_carrier_elements() {
        let b = algebra_ex();
        let f = parse_formula("[f(b,c)] = a", &b).unwrap();
        match &f {
            Formula::Eq(OTerm::Elem(id), _) => {
                assert_eq!(b.rep(*id).to_string(), "a");
            }
            other => panic!("expected an element literal, got {other:?}"),
        }
        // f(a,a) is a carrier class of Γ_ex, but f(a,f(a,a)) is not
        assert!(parse_formula("[f(a,a)] = a", &b).is_ok());
        assert!(matches!(
            parse_formula("[f(a,f(a,a))] = a", &b),
            Err(Error::NotAnElement(_))
        ));
    }

    #[test]
    fn evaluate_qf_examples() {
        let free = algebra_free();
        let empty = BTreeMap::new();
        let t = parse_formula("a = a", &free).unwrap();
        assert!(evaluate_qf(&free, &t, &empty).unwrap());

        let b = algebra_ex();
        let t = parse_formula("f(b,c) = a", &b).unwrap();
        assert!(evaluate_qf(&b, &t, &empty).unwrap());

        let t = parse_formula("is_f(f(a,a))", &free).unwrap();
        assert!(evaluate_qf(&free, &t, &empty).unwrap());
        let t = parse_formula("is_f(a)", &free).unwrap();
        assert!(!evaluate_qf(&free, &t, &empty).unwrap());

        let open = parse_formula("x = a", &free).unwrap();
        assert!(matches!(
            evaluate_qf(&free, &open, &empty),
            Err(Error::UnassignedVariable(_))
        ));
        let quantified = parse_formula("exists y. y = a", &free).unwrap();
        assert!(evaluate_qf(&free, &quantified, &empty).is_err());
    }

    #[test]
    fn domain_evaluation_matches_intuition() {
        let b = algebra_ex();
        let domain = b.terms_up_to_height(1);
        let mut valuation = BTreeMap::new();
        let f = parse_formula("exists y. f(b,y) = a", &b).unwrap();
        // witness y = [c]: f(b,c) ∼ a
        assert!(evaluate_in_domain(&b, &f, &mut valuation, &domain).unwrap());
        let f = parse_formula("forall y. f(b,y) = a", &b).unwrap();
        assert!(!evaluate_in_domain(&b, &f, &mut valuation, &domain).unwrap());
        assert!(valuation.is_empty());
    }
}
