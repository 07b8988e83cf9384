//! Signatures, ground terms, positions and tree representations.
//!
//! A [`Signature`] lists function symbols with their arities plus a nonempty
//! set of constants. A [`Term`] is an immutable ground term over such a
//! signature; terms are reference-counted trees with cached height, size and
//! hash, so cloning and hashing are cheap and equality is structural.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite functional signature: function symbols with arity ≥ 1 and at
/// least one constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
    arities: HashMap<String, usize>,
}

impl Signature {
    /// Builds a signature, rejecting duplicate symbols, zero-arity functions
    /// and constant-free declarations.
    pub fn new<S: Into<String>>(
        functions: Vec<(S, usize)>,
        constants: Vec<S>,
    ) -> Result<Signature> {
        let functions: Vec<(String, usize)> = functions
            .into_iter()
            .map(|(name, arity)| (name.into(), arity))
            .collect();
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        let mut arities = HashMap::new();
        for (name, arity) in &functions {
            if *arity == 0 {
                return Err(Error::parse(
                    0,
                    0,
                    format!("function `{name}` declared with arity 0; declare it as a constant"),
                ));
            }
            if arities.insert(name.clone(), *arity).is_some() {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        for name in &constants {
            if arities.insert(name.clone(), 0).is_some() {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        if constants.is_empty() {
            return Err(Error::NoConstants);
        }
        Ok(Signature {
            functions,
            constants,
            arities,
        })
    }

    /// Function symbols in declaration order.
    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    /// Constant symbols in declaration order.
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    /// Arity of a declared symbol; constants have arity 0.
    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn is_constant(&self, symbol: &str) -> bool {
        self.arity(symbol) == Some(0)
    }

    pub fn is_function(&self, symbol: &str) -> bool {
        matches!(self.arity(symbol), Some(a) if a > 0)
    }

    /// Largest declared arity, 0 when there are no function symbols.
    pub fn max_arity(&self) -> usize {
        self.functions.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    /// Builds `symbol(children)`, checking that the symbol is declared and
    /// the child count matches its arity.
    pub fn term(&self, symbol: &str, children: Vec<Term>) -> Result<Term> {
        match self.arity(symbol) {
            None => Err(Error::UnknownSymbol(symbol.to_string())),
            Some(arity) if arity != children.len() => Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: arity,
                found: children.len(),
            }),
            Some(_) => Ok(Term::make(symbol.to_string(), children)),
        }
    }

    /// Shorthand for a constant term.
    pub fn constant(&self, name: &str) -> Result<Term> {
        self.term(name, Vec::new())
    }

    /// Checks that every node of `t` is declared with the right arity.
    pub fn validate(&self, t: &Term) -> Result<()> {
        match self.arity(t.symbol()) {
            None => Err(Error::UnknownSymbol(t.symbol().to_string())),
            Some(arity) if arity != t.children().len() => Err(Error::ArityMismatch {
                symbol: t.symbol().to_string(),
                expected: arity,
                found: t.children().len(),
            }),
            Some(_) => t.children().iter().try_for_each(|c| self.validate(c)),
        }
    }

    /// All symbols are single characters, which makes Polish notation
    /// unambiguous.
    pub fn all_symbols_single_char(&self) -> bool {
        self.arities.keys().all(|s| s.chars().count() == 1)
    }
}

#[derive(Debug)]
struct TermNode {
    symbol: String,
    children: Vec<Term>,
    height: usize,
    size: usize,
    hash: u64,
}

/// An immutable ground term. Equality and hashing are structural.
#[derive(Debug, Clone)]
pub struct Term(Arc<TermNode>);

impl Term {
    fn make(symbol: String, children: Vec<Term>) -> Term {
        let height = children.iter().map(|c| c.height() + 1).max().unwrap_or(0);
        let size = 1 + children.iter().map(|c| c.size()).sum::<usize>();
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        symbol.hash(&mut hasher);
        for c in &children {
            c.cached_hash().hash(&mut hasher);
        }
        let hash = hasher.finish();
        Term(Arc::new(TermNode {
            symbol,
            children,
            height,
            size,
            hash,
        }))
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub fn children(&self) -> &[Term] {
        &self.0.children
    }

    pub fn is_constant(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Height of the tree representation; constants have height 0.
    pub fn height(&self) -> usize {
        self.0.height
    }

    /// Number of nodes of the tree representation.
    pub fn size(&self) -> usize {
        self.0.size
    }

    fn cached_hash(&self) -> u64 {
        self.0.hash
    }

    /// The subterm rooted at `pos`.
    pub fn subterm_at(&self, pos: &Position) -> Result<Term> {
        let mut cur = self.clone();
        for &i in pos.indices() {
            let child = cur.children().get(i).cloned();
            match child {
                Some(c) => cur = c,
                None => {
                    return Err(Error::InvalidPosition {
                        position: pos.to_string(),
                        term: self.to_string(),
                    })
                }
            }
        }
        Ok(cur)
    }

    /// Returns a copy of `self` with the subterm at `pos` replaced.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term> {
        fn go(t: &Term, indices: &[usize], replacement: Term) -> Option<Term> {
            match indices.split_first() {
                None => Some(replacement),
                Some((&i, rest)) => {
                    let mut children = t.children().to_vec();
                    let slot = children.get_mut(i)?;
                    *slot = go(slot, rest, replacement)?;
                    Some(Term::make(t.symbol().to_string(), children))
                }
            }
        }
        go(self, pos.indices(), replacement).ok_or_else(|| Error::InvalidPosition {
            position: pos.to_string(),
            term: self.to_string(),
        })
    }

    /// All positions of the tree representation in preorder; the root comes
    /// first.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![(self.clone(), Position::root())];
        while let Some((t, pos)) = stack.pop() {
            for (i, c) in t.children().iter().enumerate().rev() {
                stack.push((c.clone(), pos.child(i)));
            }
            out.push(pos);
        }
        out
    }

    /// All distinct subterms of `self`, including `self`.
    pub fn subterms(&self) -> Vec<Term> {
        let mut seen = Vec::new();
        fn go(t: &Term, seen: &mut Vec<Term>) {
            if seen.contains(t) {
                return;
            }
            seen.push(t.clone());
            for c in t.children() {
                go(c, seen);
            }
        }
        go(self, &mut seen);
        seen
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.hash == other.0.hash
            && self.0.symbol == other.0.symbol
            && self.0.children == other.0.children
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// Term order used wherever a representative has to be chosen: ascending
/// height, then size, then the functional-notation rendering.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then(self.size().cmp(&other.size()))
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    /// Canonical printing uses functional notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())?;
        if !self.children().is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children().iter().enumerate() {
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

/// A node position: the sequence of child indices from the root. The root is
/// the empty sequence ε.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn from_indices(indices: Vec<usize>) -> Position {
        Position(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    /// Renders the position: `ε` for the root, a digit string when every
    /// index is below 10, dash-separated integers otherwise.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        if self.0.iter().all(|&i| i < 10) {
            self.0.iter().map(|i| i.to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join("-")
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// The labeled tree Ω(t): a prefix-closed map from positions to symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRepresentation {
    nodes: BTreeMap<Position, String>,
}

impl TreeRepresentation {
    pub fn nodes(&self) -> &BTreeMap<Position, String> {
        &self.nodes
    }

    pub fn symbol_at(&self, pos: &Position) -> Option<&str> {
        self.nodes.get(pos).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl fmt::Display for TreeRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (pos, sym)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{pos}↦{sym}")?;
        }
        write!(f, "}}")
    }
}

/// Computes the tree representation Ω(t).
pub fn tree_of(t: &Term) -> TreeRepresentation {
    let mut nodes = BTreeMap::new();
    let mut stack = vec![(t.clone(), Position::root())];
    while let Some((t, pos)) = stack.pop() {
        for (i, c) in t.children().iter().enumerate() {
            stack.push((c.clone(), pos.child(i)));
        }
        nodes.insert(pos, t.symbol().to_string());
    }
    TreeRepresentation { nodes }
}

/// The subterm of `t` rooted at `pos` (Ω⁻¹ in tree terms).
pub fn subterm_at(t: &Term, pos: &Position) -> Result<Term> {
    t.subterm_at(pos)
}

/// A finite set Γ of ground-term equations over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSet {
    sig: Signature,
    equations: Vec<(Term, Term)>,
}

impl EquationSet {
    /// Builds Γ, checking that both sides of every equation are well-formed
    /// over `sig`.
    pub fn new(sig: Signature, equations: Vec<(Term, Term)>) -> Result<EquationSet> {
        for (lhs, rhs) in &equations {
            sig.validate(lhs)?;
            sig.validate(rhs)?;
        }
        Ok(EquationSet { sig, equations })
    }

    pub fn empty(sig: Signature) -> EquationSet {
        EquationSet {
            sig,
            equations: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn equations(&self) -> &[(Term, Term)] {
        &self.equations
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Distinct terms occurring as a side of an equation, in input order.
    /// This is the vertex set V_Γ of the type graph.
    pub fn side_terms(&self) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for (lhs, rhs) in &self.equations {
            if !out.contains(lhs) {
                out.push(lhs.clone());
            }
            if !out.contains(rhs) {
                out.push(rhs.clone());
            }
        }
        out
    }

    /// Largest height among equation sides; 0 for the empty set.
    pub fn max_side_height(&self) -> usize {
        self.equations
            .iter()
            .map(|(l, r)| l.height().max(r.height()))
            .max()
            .unwrap_or(0)
    }

    /// Sum of |p| + |q| over the equations, the size measure |Γ|.
    pub fn weight(&self) -> usize {
        self.equations
            .iter()
            .map(|(l, r)| l.size() + r.size())
            .sum()
    }

    /// The union Γ₁ ∪ Γ₂, which must share a signature.
    pub fn union(&self, other: &EquationSet) -> Result<EquationSet> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                "cannot union equation sets over different signatures".into(),
            ));
        }
        let mut equations = self.equations.clone();
        for eq in &other.equations {
            if !equations.contains(eq) {
                equations.push(eq.clone());
            }
        }
        Ok(EquationSet {
            sig: self.sig.clone(),
            equations,
        })
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, r)) in self.equations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l} = {r}")?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

pub(crate) struct Cursor<'a> {
    text: &'a str,
    /// Byte offset into `text`.
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Cursor<'a> {
        Cursor { text, pos: 0 }
    }

    pub(crate) fn line_col(&self) -> (usize, usize) {
        let consumed = &self.text[..self.pos];
        let line = consumed.matches('\n').count() + 1;
        let column = consumed
            .rsplit('\n')
            .next()
            .map(|l| l.chars().count())
            .unwrap_or(0)
            + 1;
        (line, column)
    }

    pub(crate) fn error(&self, message: impl fmt::Display) -> Error {
        let (line, column) = self.line_col();
        Error::parse(line, column, message)
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == '#' {
                // comment to end of line
                while let Some(c) = self.peek() {
                    self.pos += c.len_utf8();
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    pub(crate) fn clone_pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn restore_pos(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    /// Reads an identifier: alphanumerics and underscores, not starting with
    /// a digit.
    pub(crate) fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => {
                self.bump();
            }
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        Some(self.text[start..self.pos].to_string())
    }

    pub(crate) fn number(&mut self) -> Option<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return None;
        }
        self.text[start..self.pos].parse().ok()
    }
}

/// Parses a signature from its source grammar: statements separated by `;`,
/// each `fun <name> <arity>` or `const <name>+`.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut cur = Cursor::new(text);
    let mut functions: Vec<(String, usize)> = Vec::new();
    let mut constants: Vec<String> = Vec::new();
    loop {
        if cur.at_end() {
            break;
        }
        let Some(keyword) = cur.ident() else {
            return Err(cur.error("expected `fun` or `const`"));
        };
        match keyword.as_str() {
            "fun" => {
                let Some(name) = cur.ident() else {
                    return Err(cur.error("expected function name after `fun`"));
                };
                let Some(arity) = cur.number() else {
                    return Err(cur.error(format!("expected arity after `fun {name}`")));
                };
                if arity == 0 {
                    return Err(cur.error(format!(
                        "function `{name}` declared with arity 0; declare it as a constant"
                    )));
                }
                functions.push((name, arity));
            }
            "const" => {
                let mut any = false;
                while let Some(name) = cur.ident() {
                    constants.push(name);
                    any = true;
                }
                if !any {
                    return Err(cur.error("expected at least one constant name after `const`"));
                }
            }
            other => {
                return Err(cur.error(format!("expected `fun` or `const`, found `{other}`")));
            }
        }
        cur.skip_ws();
        if !cur.eat(';') && !cur.at_end() {
            return Err(cur.error("expected `;` between statements"));
        }
    }
    Signature::new(functions, constants)
}

fn parse_functional(cur: &mut Cursor, sig: &Signature) -> Result<Term> {
    let Some(name) = cur.ident() else {
        return Err(cur.error("expected a symbol"));
    };
    let Some(arity) = sig.arity(&name) else {
        return Err(Error::UnknownSymbol(name));
    };
    cur.skip_ws();
    if cur.eat('(') {
        let mut children = Vec::new();
        cur.skip_ws();
        if !cur.eat(')') {
            loop {
                children.push(parse_functional(cur, sig)?);
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
        Ok(Term::make(name, children))
    } else {
        if arity != 0 {
            return Err(Error::ArityMismatch {
                symbol: name,
                expected: arity,
                found: 0,
            });
        }
        Ok(Term::make(name, Vec::new()))
    }
}

fn parse_polish(text: &str, sig: &Signature) -> Result<Term> {
    fn go(chars: &[char], at: &mut usize, sig: &Signature) -> Result<Term> {
        let Some(&c) = chars.get(*at) else {
            return Err(Error::parse(1, *at + 1, "unexpected end of Polish term"));
        };
        *at += 1;
        let name = c.to_string();
        let Some(arity) = sig.arity(&name) else {
            return Err(Error::UnknownSymbol(name));
        };
        let mut children = Vec::with_capacity(arity);
        for _ in 0..arity {
            children.push(go(chars, at, sig)?);
        }
        Ok(Term::make(name, children))
    }
    let chars: Vec<char> = text.chars().collect();
    let mut at = 0;
    let t = go(&chars, &mut at, sig)?;
    if at != chars.len() {
        return Err(Error::TrailingInput(chars[at..].iter().collect()));
    }
    Ok(t)
}

/// Parses a ground term in functional notation (`f(a,b)`) or, when every
/// symbol of the signature is a single character, Polish notation (`fab`).
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let trimmed = text.trim();
    let mut cur = Cursor::new(trimmed);
    let functional = parse_functional(&mut cur, sig).and_then(|t| {
        if cur.at_end() {
            Ok(t)
        } else {
            Err(Error::TrailingInput(cur.rest().trim().to_string()))
        }
    });
    match functional {
        Ok(t) => Ok(t),
        Err(err) => {
            // Polish fallback: only for unambiguous single-character alphabets
            // with no grouping syntax in the input.
            let plain = !trimmed.contains(['(', ')', ',']) && !trimmed.contains(char::is_whitespace);
            if plain
                && sig.all_symbols_single_char()
                && trimmed.chars().all(|c| sig.arity(&c.to_string()).is_some())
            {
                parse_polish(trimmed, sig).or(Err(err))
            } else {
                Err(err)
            }
        }
    }
}

/// Enumerates every ground term of height ≤ `h`, grouped by exact height.
/// Index `k` of the result holds the terms of height exactly `k`.
pub fn terms_by_height(sig: &Signature, h: usize) -> Vec<Vec<Term>> {
    let mut levels: Vec<Vec<Term>> = Vec::with_capacity(h + 1);
    let constants: Vec<Term> = sig
        .constants()
        .iter()
        .map(|c| Term::make(c.clone(), Vec::new()))
        .collect();
    levels.push(constants);
    for height in 1..=h {
        let below: Vec<Term> = levels.iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for (f, arity) in sig.functions() {
            let mut tuple = vec![0usize; *arity];
            loop {
                let children: Vec<Term> = tuple.iter().map(|&i| below[i].clone()).collect();
                if children.iter().map(|c| c.height()).max() == Some(height - 1) {
                    level.push(Term::make(f.clone(), children));
                }
                // advance the mixed-radix counter
                let mut k = 0;
                loop {
                    if k == tuple.len() {
                        break;
                    }
                    tuple[k] += 1;
                    if tuple[k] < below.len() {
                        break;
                    }
                    tuple[k] = 0;
                    k += 1;
                }
                if k == tuple.len() {
                    break;
                }
            }
            if below.is_empty() {
                break;
            }
        }
        levels.push(level);
    }
    levels
}

/// Checks the prefix-closure and arity invariants of a tree representation
/// against a signature. Used by tests; `tree_of` always produces valid trees.
pub fn tree_is_valid(tree: &TreeRepresentation, sig: &Signature) -> bool {
    let mut expected: BTreeMap<Position, ()> = BTreeMap::new();
    expected.insert(Position::root(), ());
    for (pos, sym) in tree.nodes() {
        if !expected.contains_key(pos) {
            return false;
        }
        let Some(arity) = sig.arity(sym) else {
            return false;
        };
        for i in 0..arity {
            if let Entry::Vacant(e) = expected.entry(pos.child(i)) {
                e.insert(());
            }
        }
    }
    expected.len() == tree.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sig_ex() -> Signature {
        parse_signature("fun f 2; const a b c").unwrap()
    }

    #[test]
    fn parse_signature_examples() {
        let sig = sig_ex();
        assert_eq!(sig.arity("f"), Some(2));
        assert_eq!(sig.constants(), &["a", "b", "c"]);

        let minimal = parse_signature("const a").unwrap();
        assert!(minimal.functions().is_empty());
        assert_eq!(minimal.constants(), &["a"]);

        assert!(matches!(
            parse_signature("fun f 2; fun f 1; const a"),
            Err(Error::DuplicateSymbol(s)) if s == "f"
        ));
        assert!(matches!(parse_signature("fun f 2"), Err(Error::NoConstants)));
        assert!(matches!(parse_signature("fun f 0; const a"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_term_examples() {
        let sig = sig_ex();
        let fbc = parse_term("fbc", &sig).unwrap();
        assert_eq!(fbc, parse_term("f(b,c)", &sig).unwrap());
        assert_eq!(fbc.to_string(), "f(b,c)");

        assert_eq!(parse_term("a", &sig).unwrap().to_string(), "a");

        assert!(matches!(
            parse_term("f(a)", &sig),
            Err(Error::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(parse_term("g(a)", &sig), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("a b", &sig), Err(Error::TrailingInput(_))));
    }

    #[test]
    fn polish_requires_single_char_symbols() {
        let sig = parse_signature("fun pair 2; const a b").unwrap();
        assert!(parse_term("pairab", &sig).is_err());
        assert!(parse_term("pair(a,b)", &sig).is_ok());
    }

    #[test]
    fn tree_of_examples() {
        let sig = sig_ex();
        let a = parse_term("a", &sig).unwrap();
        let tree = tree_of(&a);
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.symbol_at(&Position::root()), Some("a"));

        let fbc = parse_term("f(b,c)", &sig).unwrap();
        let tree = tree_of(&fbc);
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.symbol_at(&Position::root()), Some("f"));
        assert_eq!(tree.symbol_at(&Position::from_indices(vec![0])), Some("b"));
        assert_eq!(tree.symbol_at(&Position::from_indices(vec![1])), Some("c"));

        let t = parse_term("f(f(a,a),b)", &sig).unwrap();
        let tree = tree_of(&t);
        assert_eq!(tree.len(), 5);
        assert_eq!(tree.symbol_at(&Position::from_indices(vec![0, 0])), Some("a"));
        assert_eq!(tree.symbol_at(&Position::from_indices(vec![0, 1])), Some("a"));
        assert_eq!(tree.symbol_at(&Position::from_indices(vec![1])), Some("b"));
        assert!(tree_is_valid(&tree, &sig));
    }

    #[test]
    fn subterm_examples() {
        let sig = sig_ex();
        let fbc = parse_term("f(b,c)", &sig).unwrap();
        let c = parse_term("c", &sig).unwrap();
        assert_eq!(subterm_at(&fbc, &Position::from_indices(vec![1])).unwrap(), c);
        assert_eq!(subterm_at(&fbc, &Position::root()).unwrap(), fbc);
        let a = parse_term("a", &sig).unwrap();
        assert!(matches!(
            subterm_at(&a, &Position::from_indices(vec![0])),
            Err(Error::InvalidPosition { .. })
        ));
    }

    #[test]
    fn height_and_size_examples() {
        let sig = sig_ex();
        for (text, height, size) in [("a", 0, 1), ("f(b,c)", 1, 3), ("f(f(a,a),b)", 2, 5)] {
            let t = parse_term(text, &sig).unwrap();
            assert_eq!(t.height(), height, "height of {text}");
            assert_eq!(t.size(), size, "size of {text}");
        }
    }

    #[test]
    fn positions_compose() {
        let sig = sig_ex();
        let t = parse_term("f(f(a,b),f(c,a))", &sig).unwrap();
        for pos in t.positions() {
            let sub = t.subterm_at(&pos).unwrap();
            for inner in sub.positions() {
                let all: Vec<usize> = pos
                    .indices()
                    .iter()
                    .chain(inner.indices())
                    .copied()
                    .collect();
                let direct = t.subterm_at(&Position::from_indices(all)).unwrap();
                assert_eq!(direct, sub.subterm_at(&inner).unwrap());
            }
        }
    }

    #[test]
    fn terms_by_height_counts() {
        let sig = sig_ex();
        let levels = terms_by_height(&sig, 2);
        assert_eq!(levels[0].len(), 3);
        assert_eq!(levels[1].len(), 9);
        // height exactly 2: f over (height ≤ 1)² minus the all-constant pairs
        assert_eq!(levels[2].len(), 12 * 12 - 9);
    }

    #[test]
    fn position_rendering() {
        assert_eq!(Position::root().render(), "ε");
        assert_eq!(Position::from_indices(vec![0, 1]).render(), "01");
        assert_eq!(Position::from_indices(vec![0, 12]).render(), "0-12");
    }
}
