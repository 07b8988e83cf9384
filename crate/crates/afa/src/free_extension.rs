//! The finite partial algebra B induced by Γ and its free extension F(B).
//!
//! B collects the ∼_Γ-classes that contain a term of height ≤ N, where N is
//! the largest height of an equation side; a function symbol is defined on a
//! tuple of classes exactly when the resulting class is again in B. Every
//! ground term then evaluates in the free extension F(B): either all the way
//! into B, or to a "stuck" application whose value is undefined. Evaluation
//! identifies exactly the ∼_Γ-equal terms, which makes F(B) an explicit copy
//! of F_Γ, and the tester predicate Is_f recognizes the stuck terms rooted
//! at f.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::canonical::{canonical_rep, compute_types, TypeAssignment};
use crate::error::{Error, Result};
use crate::term::{Cursor, EquationSet, Signature, Term};

/// Index of a carrier element of B. Elements are ordered by their canonical
/// representative in the term order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub usize);

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite partial algebra B: carrier classes named by their canonical
/// representatives, the constant map, and the partial operation table.
#[derive(Debug, Clone)]
pub struct PartialAlgebra {
    gamma: EquationSet,
    types: TypeAssignment,
    /// The height bound N used to build the carrier.
    height_bound: usize,
    /// Canonical representative of each carrier class, ascending.
    carrier: Vec<Term>,
    rep_index: HashMap<Term, ElemId>,
    constants: BTreeMap<String, ElemId>,
    table: BTreeMap<(String, Vec<ElemId>), ElemId>,
}

/// An element of F(B): a carrier element of B, or a stuck application whose
/// evaluation in B is undefined. Structural equality is equality in F(B).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BTerm {
    Elem(ElemId),
    Stuck(String, Vec<BTerm>),
}

impl BTerm {
    pub fn is_elem(&self) -> bool {
        matches!(self, BTerm::Elem(_))
    }

    /// Height with B elements at 0 and stuck nodes one above their children.
    pub fn height(&self) -> usize {
        match self {
            BTerm::Elem(_) => 0,
            BTerm::Stuck(_, children) => {
                1 + children.iter().map(BTerm::height).max().unwrap_or(0)
            }
        }
    }
}

/// The tester predicate Is_f: false on every element of B, true on a stuck
/// term exactly when its root symbol is `f`.
pub fn is_f(x: &BTerm, f: &str) -> bool {
    match x {
        BTerm::Elem(_) => false,
        BTerm::Stuck(root, _) => root == f,
    }
}

impl PartialAlgebra {
    pub fn gamma(&self) -> &EquationSet {
        &self.gamma
    }

    pub fn signature(&self) -> &Signature {
        self.gamma.signature()
    }

    pub fn types(&self) -> &TypeAssignment {
        &self.types
    }

    /// The height bound N of the construction.
    pub fn height_bound(&self) -> usize {
        self.height_bound
    }

    /// Canonical representatives of the carrier classes, ascending.
    pub fn carrier(&self) -> &[Term] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.carrier.len()).map(ElemId)
    }

    /// The representative term naming a carrier element.
    pub fn rep(&self, id: ElemId) -> &Term {
        &self.carrier[id.0]
    }

    pub fn constant(&self, name: &str) -> Option<ElemId> {
        self.constants.get(name).copied()
    }

    pub fn table(&self) -> &BTreeMap<(String, Vec<ElemId>), ElemId> {
        &self.table
    }

    /// The carrier element whose class contains `t`, if that class is in B.
    pub fn class_of_term(&self, t: &Term) -> Option<ElemId> {
        let rep = canonical_rep(&self.gamma, &self.types, t);
        self.rep_index.get(&rep).copied()
    }

    /// True when every operation is total on B, i.e. F(B) = B and the
    /// algebra is finite.
    pub fn is_total(&self) -> bool {
        self.signature()
            .functions()
            .iter()
            .all(|(f, arity)| {
                let expected = self.carrier.len().checked_pow(*arity as u32).unwrap_or(0);
                self.table.keys().filter(|(g, _)| g == f).count() == expected
            })
    }

    /// Interprets `f` in F(B): a table lookup when all arguments are B
    /// elements and the operation is defined, a stuck node otherwise.
    pub fn apply(&self, f: &str, args: Vec<BTerm>) -> Result<BTerm> {
        let Some(arity) = self.signature().arity(f) else {
            return Err(Error::UnknownSymbol(f.to_string()));
        };
        if arity != args.len() || arity == 0 {
            return Err(Error::ArityMismatch {
                symbol: f.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        let ids: Option<Vec<ElemId>> = args
            .iter()
            .map(|a| match a {
                BTerm::Elem(id) => Some(*id),
                BTerm::Stuck(..) => None,
            })
            .collect();
        if let Some(ids) = ids {
            if let Some(&result) = self.table.get(&(f.to_string(), ids)) {
                return Ok(BTerm::Elem(result));
            }
        }
        Ok(BTerm::Stuck(f.to_string(), args))
    }

    /// Evaluates a ground term bottom-up in F(B).
    pub fn normalize(&self, t: &Term) -> Result<BTerm> {
        if t.is_constant() {
            return self
                .constant(t.symbol())
                .map(BTerm::Elem)
                .ok_or_else(|| Error::UnknownSymbol(t.symbol().to_string()));
        }
        let children = t
            .children()
            .iter()
            .map(|c| self.normalize(c))
            .collect::<Result<Vec<_>>>()?;
        self.apply(t.symbol(), children)
    }

    /// Prints an F(B)-term: B elements bracketed as `[rep]`, stuck nodes in
    /// functional notation.
    pub fn render(&self, x: &BTerm) -> String {
        match x {
            BTerm::Elem(id) => format!("[{}]", self.rep(*id)),
            BTerm::Stuck(f, children) => {
                let inner: Vec<String> = children.iter().map(|c| self.render(c)).collect();
                format!("{f}({})", inner.join(","))
            }
        }
    }

    /// Every F(B)-term of height ≤ `h`, ascending. The count grows doubly
    /// exponentially in `h`; intended for bounded searches in tests.
    pub fn terms_up_to_height(&self, h: usize) -> Vec<BTerm> {
        let mut all: BTreeSet<BTerm> = self.elements().map(BTerm::Elem).collect();
        for level in 1..=h {
            let pool: Vec<BTerm> = all.iter().cloned().collect();
            let mut fresh: Vec<BTerm> = Vec::new();
            for (f, arity) in self.signature().functions() {
                let mut tuple = vec![0usize; *arity];
                loop {
                    let args: Vec<BTerm> = tuple.iter().map(|&i| pool[i].clone()).collect();
                    if args.iter().map(BTerm::height).max() == Some(level - 1) {
                        let value = self.apply(f, args).expect("arity matches");
                        if value.height() == level {
                            fresh.push(value);
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == tuple.len() {
                            break;
                        }
                        tuple[k] += 1;
                        if tuple[k] < pool.len() {
                            break;
                        }
                        tuple[k] = 0;
                        k += 1;
                    }
                    if k == tuple.len() {
                        break;
                    }
                }
            }
            all.extend(fresh);
        }
        all.into_iter().collect()
    }
}

impl fmt::Display for PartialAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "height bound N = {}", self.height_bound)?;
        writeln!(f, "carrier ({} classes):", self.carrier.len())?;
        for (i, rep) in self.carrier.iter().enumerate() {
            writeln!(f, "  {i}: [{rep}]")?;
        }
        writeln!(f, "constants:")?;
        for (name, id) in &self.constants {
            writeln!(f, "  {name} -> [{}]", self.rep(*id))?;
        }
        writeln!(f, "operations:")?;
        for ((g, args), result) in &self.table {
            let rendered: Vec<String> = args
                .iter()
                .map(|id| format!("[{}]", self.rep(*id)))
                .collect();
            writeln!(f, "  {g}({}) = [{}]", rendered.join(","), self.rep(*result))?;
        }
        Ok(())
    }
}

/// Builds the partial algebra B of Γ: the classes of all ground terms of
/// height ≤ N, with the operation table restricted to the carrier.
///
/// Classes are found level by level: the classes of height ≤ h terms are the
/// constant classes plus the classes of f applied to representatives of
/// classes from the previous levels, since the class of an application
/// depends only on the classes of its arguments.
pub fn build_partial_algebra(gamma: &EquationSet) -> PartialAlgebra {
    let sig = gamma.signature().clone();
    let types = compute_types(gamma);
    let height_bound = gamma.max_side_height();

    let mut classes: BTreeSet<Term> = BTreeSet::new();
    for c in sig.constants() {
        let term = sig.constant(c).expect("declared constant");
        classes.insert(canonical_rep(gamma, &types, &term));
    }
    for _ in 1..=height_bound {
        let pool: Vec<Term> = classes.iter().cloned().collect();
        let mut fresh: Vec<Term> = Vec::new();
        for (f, arity) in sig.functions() {
            let mut tuple = vec![0usize; *arity];
            loop {
                let children: Vec<Term> = tuple.iter().map(|&i| pool[i].clone()).collect();
                let applied = sig.term(f, children).expect("arity matches");
                fresh.push(canonical_rep(gamma, &types, &applied));
                let mut k = 0;
                loop {
                    if k == tuple.len() {
                        break;
                    }
                    tuple[k] += 1;
                    if tuple[k] < pool.len() {
                        break;
                    }
                    tuple[k] = 0;
                    k += 1;
                }
                if k == tuple.len() {
                    break;
                }
            }
        }
        classes.extend(fresh);
    }

    let carrier: Vec<Term> = classes.into_iter().collect();
    let rep_index: HashMap<Term, ElemId> = carrier
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), ElemId(i)))
        .collect();
    let constants: BTreeMap<String, ElemId> = sig
        .constants()
        .iter()
        .map(|c| {
            let term = sig.constant(c).expect("declared constant");
            let rep = canonical_rep(gamma, &types, &term);
            (c.clone(), rep_index[&rep])
        })
        .collect();

    let mut table = BTreeMap::new();
    for (f, arity) in sig.functions() {
        let mut tuple = vec![0usize; *arity];
        if carrier.is_empty() {
            break;
        }
        loop {
            let children: Vec<Term> = tuple.iter().map(|&i| carrier[i].clone()).collect();
            let applied = sig.term(f, children).expect("arity matches");
            let rep = canonical_rep(gamma, &types, &applied);
            if let Some(&result) = rep_index.get(&rep) {
                table.insert((f.clone(), tuple.iter().map(|&i| ElemId(i)).collect()), result);
            }
            let mut k = 0;
            loop {
                if k == tuple.len() {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < carrier.len() {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == tuple.len() {
                break;
            }
        }
    }

    PartialAlgebra {
        gamma: gamma.clone(),
        types,
        height_bound,
        carrier,
        rep_index,
        constants,
        table,
    }
}

/// Parses a printed F(B)-term back: `[t]` resolves a ground term to its
/// carrier element, `f(…)` applies `f` in F(B), and a bare constant
/// evaluates to its class.
pub fn parse_bterm(text: &str, algebra: &PartialAlgebra) -> Result<BTerm> {
    let mut cur = Cursor::new(text.trim());
    let parsed = parse_bterm_inner(&mut cur, algebra)?;
    if cur.at_end() {
        Ok(parsed)
    } else {
        Err(Error::TrailingInput(cur.rest().trim().to_string()))
    }
}

fn parse_bterm_inner(cur: &mut Cursor, algebra: &PartialAlgebra) -> Result<BTerm> {
    cur.skip_ws();
    if cur.eat('[') {
        let start = cur.rest();
        let mut depth = 0usize;
        let mut len = 0usize;
        loop {
            match cur.peek() {
                Some('[') => depth += 1,
                Some(']') if depth == 0 => break,
                Some(']') => depth -= 1,
                Some(_) => {}
                None => return Err(cur.error("unterminated `[`")),
            }
            len += cur.bump().map(char::len_utf8).unwrap_or(0);
        }
        cur.expect(']')?;
        let inner = &start[..len];
        let term = crate::term::parse_term(inner, algebra.signature())?;
        return algebra
            .class_of_term(&term)
            .map(BTerm::Elem)
            .ok_or_else(|| Error::NotAnElement(term.to_string()));
    }
    let Some(name) = cur.ident() else {
        return Err(cur.error("expected `[`, a symbol, or a constant"));
    };
    let Some(arity) = algebra.signature().arity(&name) else {
        return Err(Error::UnknownSymbol(name));
    };
    cur.skip_ws();
    if cur.eat('(') {
        let mut children = Vec::new();
        cur.skip_ws();
        if !cur.eat(')') {
            loop {
                children.push(parse_bterm_inner(cur, algebra)?);
                cur.skip_ws();
                if cur.eat(',') {
                    continue;
                }
                cur.expect(')')?;
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
        algebra.apply(&name, children)
    } else {
        if arity != 0 {
            return Err(Error::ArityMismatch {
                symbol: name,
                expected: arity,
                found: 0,
            });
        }
        algebra
            .constant(&name)
            .map(BTerm::Elem)
            .ok_or(Error::UnknownSymbol(name))
    }
}
