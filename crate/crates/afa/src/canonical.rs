//! Types of terms, reduced typed representations and canonical
//! representatives.
//!
//! The terms mentioned in Γ fall into finitely many ∼_Γ-classes, the
//! *types* 1,…,k. A term equivalent to a type-i term "has type i"; most
//! terms have no type. The reduced typed representation r(t) collapses the
//! maximal typed strict subterms of t into type leaves, and the canonical
//! representative rep(t) grafts a fixed representative of each type back
//! onto those leaves. rep is constant on congruence classes and injective
//! across them, which turns the word problem into a syntactic comparison.

use std::collections::BTreeMap;
use std::fmt;

use crate::congruence::decide_equal_unchecked;
use crate::term::{EquationSet, Position, Term};

/// The partition of V_Γ (the terms mentioned in Γ) into ∼_Γ-classes,
/// together with the chosen representative of each class.
///
/// Type indices are 1-based; 0 is reserved for "untyped" throughout the
/// crate. Components are ordered by their representative under the term
/// order (height, then size, then rendering), so indices are stable across
/// runs.
#[derive(Debug, Clone)]
pub struct TypeAssignment {
    components: Vec<TypeComponent>,
}

#[derive(Debug, Clone)]
pub struct TypeComponent {
    /// Distinct members of the component, ascending in the term order.
    pub members: Vec<Term>,
    /// The minimal member: the chosen p_i.
    pub representative: Term,
}

impl TypeAssignment {
    /// Number of types k.
    pub fn count(&self) -> usize {
        self.components.len()
    }

    /// The component of type `i` (1-based).
    pub fn component(&self, i: usize) -> &TypeComponent {
        &self.components[i - 1]
    }

    /// The representative p_i of type `i` (1-based).
    pub fn representative(&self, i: usize) -> &Term {
        &self.components[i - 1].representative
    }

    pub fn components(&self) -> &[TypeComponent] {
        &self.components
    }
}

/// Computes the types induced by Γ: the connected components of the graph
/// on V_Γ whose edges join F_Γ-equal terms.
pub fn compute_types(gamma: &EquationSet) -> TypeAssignment {
    let sides = gamma.side_terms();
    // The edge relation is an equivalence on V_Γ, so components can be grown
    // greedily against one witness per component.
    let mut groups: Vec<Vec<Term>> = Vec::new();
    for term in sides {
        match groups
            .iter_mut()
            .find(|g| decide_equal_unchecked(gamma, &g[0], &term))
        {
            Some(g) => {
                if !g.contains(&term) {
                    g.push(term);
                }
            }
            None => groups.push(vec![term]),
        }
    }
    let mut components: Vec<TypeComponent> = groups
        .into_iter()
        .map(|mut members| {
            members.sort();
            TypeComponent {
                representative: members[0].clone(),
                members,
            }
        })
        .collect();
    components.sort_by(|a, b| a.representative.cmp(&b.representative));
    TypeAssignment { components }
}

/// The type of `t` under Γ, if any: the unique `i` with t ∼_Γ p_i.
pub fn type_of(gamma: &EquationSet, types: &TypeAssignment, t: &Term) -> Option<usize> {
    (1..=types.count()).find(|&i| decide_equal_unchecked(gamma, t, types.representative(i)))
}

/// A node label of a reduced typed representation: a signature symbol on
/// the untyped spine, or a type index at a collapsed leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducedLabel {
    Symbol(String),
    Type(usize),
}

impl fmt::Display for ReducedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedLabel::Symbol(s) => write!(f, "{s}"),
            ReducedLabel::Type(i) => write!(f, "⟨{i}⟩"),
        }
    }
}

/// The reduced typed representation r(t): the root keeps its symbol, each
/// maximal typed strict subterm becomes a type-index leaf, and the untyped
/// spine in between keeps its symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedTree {
    nodes: BTreeMap<Position, ReducedLabel>,
}

impl ReducedTree {
    pub fn nodes(&self) -> &BTreeMap<Position, ReducedLabel> {
        &self.nodes
    }

    pub fn label_at(&self, pos: &Position) -> Option<&ReducedLabel> {
        self.nodes.get(pos)
    }

    /// Positions of the type-index leaves, with their types, ascending.
    pub fn typed_leaves(&self) -> Vec<(Position, usize)> {
        self.nodes
            .iter()
            .filter_map(|(pos, label)| match label {
                ReducedLabel::Type(i) => Some((pos.clone(), *i)),
                ReducedLabel::Symbol(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for ReducedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (pos, label)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{pos}↦{label}")?;
        }
        write!(f, "}}")
    }
}

/// Computes r(t). The root always keeps its signature symbol, even when t
/// itself is typed; `canonical_rep` handles the typed-whole-term case before
/// ever consulting r(t).
pub fn reduced_rep(gamma: &EquationSet, types: &TypeAssignment, t: &Term) -> ReducedTree {
    let mut nodes = BTreeMap::new();
    nodes.insert(Position::root(), ReducedLabel::Symbol(t.symbol().to_string()));
    fn descend(
        gamma: &EquationSet,
        types: &TypeAssignment,
        t: &Term,
        pos: &Position,
        nodes: &mut BTreeMap<Position, ReducedLabel>,
    ) {
        for (i, child) in t.children().iter().enumerate() {
            let child_pos = pos.child(i);
            match type_of(gamma, types, child) {
                Some(ty) => {
                    nodes.insert(child_pos, ReducedLabel::Type(ty));
                }
                None => {
                    nodes.insert(
                        child_pos.clone(),
                        ReducedLabel::Symbol(child.symbol().to_string()),
                    );
                    descend(gamma, types, child, &child_pos, nodes);
                }
            }
        }
    }
    descend(gamma, types, t, &Position::root(), &mut nodes);
    ReducedTree { nodes }
}

/// The canonical representative rep(t): the fixed p_i when t has type i,
/// otherwise t with every maximal typed strict subterm replaced by the
/// representative of its type.
pub fn canonical_rep(gamma: &EquationSet, types: &TypeAssignment, t: &Term) -> Term {
    if let Some(i) = type_of(gamma, types, t) {
        return types.representative(i).clone();
    }
    graft(gamma, types, t)
}

fn graft(gamma: &EquationSet, types: &TypeAssignment, t: &Term) -> Term {
    if t.is_constant() {
        return t.clone();
    }
    let children = t
        .children()
        .iter()
        .map(|child| match type_of(gamma, types, child) {
            Some(i) => types.representative(i).clone(),
            None => graft(gamma, types, child),
        })
        .collect();
    gamma
        .signature()
        .term(t.symbol(), children)
        .expect("grafting preserves arities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::decide_equal;
    use crate::oracle::{rewrite_once_all, rewrite_oracle, OracleVerdict, RewriteBudget};
    use crate::term::{parse_signature, parse_term, Signature};

    fn sig_ex() -> Signature {
        parse_signature("fun f 2; const a b c").unwrap()
    }

    fn gamma_ex() -> EquationSet {
        let sig = sig_ex();
        EquationSet::new(
            sig.clone(),
            vec![
                (parse_term("a", &sig).unwrap(), parse_term("fbc", &sig).unwrap()),
                (parse_term("c", &sig).unwrap(), parse_term("fab", &sig).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn compute_types_examples() {
        let gamma = gamma_ex();
        let types = compute_types(&gamma);
        assert_eq!(types.count(), 2);
        let ones: Vec<String> = types.component(1).members.iter().map(|t| t.to_string()).collect();
        let twos: Vec<String> = types.component(2).members.iter().map(|t| t.to_string()).collect();
        assert_eq!(ones, vec!["a", "f(b,c)"]);
        assert_eq!(twos, vec!["c", "f(a,b)"]);

        let sig = sig_ex();
        assert_eq!(compute_types(&EquationSet::empty(sig.clone())).count(), 0);

        let chain = EquationSet::new(
            sig.clone(),
            vec![
                (parse_term("a", &sig).unwrap(), parse_term("b", &sig).unwrap()),
                (parse_term("b", &sig).unwrap(), parse_term("c", &sig).unwrap()),
            ],
        )
        .unwrap();
        // the oracle confirms a ∼ b ∼ c before we freeze the single component
        let a = parse_term("a", &sig).unwrap();
        let c = parse_term("c", &sig).unwrap();
        assert_eq!(
            rewrite_oracle(&chain, &a, &c, RewriteBudget::default()),
            OracleVerdict::Equal
        );
        let types = compute_types(&chain);
        assert_eq!(types.count(), 1);
        assert_eq!(types.component(1).members.len(), 3);
    }

    #[test]
    fn type_of_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);
        let fab = parse_term("f(a,b)", &sig).unwrap();
        let b = parse_term("b", &sig).unwrap();
        let deep = parse_term("f(b,f(a,b))", &sig).unwrap();
        assert_eq!(type_of(&gamma, &types, &fab), Some(2));
        assert_eq!(type_of(&gamma, &types, &b), None);
        // oracle: f(b,f(a,b)) rewrites to f(b,c) and then to a
        assert_eq!(
            rewrite_oracle(&gamma, &deep, &parse_term("a", &sig).unwrap(), RewriteBudget::default()),
            OracleVerdict::Equal
        );
        assert_eq!(type_of(&gamma, &types, &deep), Some(1));
    }

    #[test]
    fn reduced_rep_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);

        let fbc = parse_term("f(b,c)", &sig).unwrap();
        let r = reduced_rep(&gamma, &types, &fbc);
        assert_eq!(
            r.label_at(&Position::root()),
            Some(&ReducedLabel::Symbol("f".into()))
        );
        assert_eq!(
            r.label_at(&Position::from_indices(vec![0])),
            Some(&ReducedLabel::Symbol("b".into()))
        );
        assert_eq!(
            r.label_at(&Position::from_indices(vec![1])),
            Some(&ReducedLabel::Type(2))
        );
        assert_eq!(r.nodes().len(), 3);

        // with no equations there are no types and r(t) is Ω(t)
        let empty = EquationSet::empty(sig.clone());
        let no_types = compute_types(&empty);
        let t = parse_term("f(f(a,a),b)", &sig).unwrap();
        let r = reduced_rep(&empty, &no_types, &t);
        assert_eq!(r.nodes().len(), t.size());
        assert!(r.typed_leaves().is_empty());

        let nested = parse_term("f(f(a,b),b)", &sig).unwrap();
        let r = reduced_rep(&gamma, &types, &nested);
        assert_eq!(
            r.label_at(&Position::from_indices(vec![0])),
            Some(&ReducedLabel::Type(2))
        );
        assert_eq!(
            r.label_at(&Position::from_indices(vec![1])),
            Some(&ReducedLabel::Symbol("b".into()))
        );
        assert_eq!(r.nodes().len(), 3);
    }

    #[test]
    fn canonical_rep_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);

        let deep = parse_term("f(b,f(a,b))", &sig).unwrap();
        assert_eq!(canonical_rep(&gamma, &types, &deep).to_string(), "a");

        let empty = EquationSet::empty(sig.clone());
        let no_types = compute_types(&empty);
        let t = parse_term("f(c,f(a,b))", &sig).unwrap();
        assert_eq!(canonical_rep(&empty, &no_types, &t), t);

        let faa = parse_term("f(a,a)", &sig).unwrap();
        assert_eq!(canonical_rep(&gamma, &types, &faa), faa);
    }

    #[test]
    fn no_typed_leaf_has_typed_strict_ancestor_below_root() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);
        for text in ["f(f(a,b),f(b,c))", "f(b,f(f(a,b),b))", "f(a,a)", "b"] {
            let t = parse_term(text, &sig).unwrap();
            let r = reduced_rep(&gamma, &types, &t);
            for (pos, _) in r.typed_leaves() {
                // every strict ancestor below the root carries a symbol label
                let indices = pos.indices();
                for cut in 1..indices.len() {
                    let ancestor = Position::from_indices(indices[..cut].to_vec());
                    assert!(matches!(
                        r.label_at(&ancestor),
                        Some(ReducedLabel::Symbol(_))
                    ));
                }
            }
        }
    }

    fn mix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_term(sig: &Signature, height: usize, state: &mut u64) -> Term {
        let constants = sig.constants();
        if height == 0 || sig.functions().is_empty() || mix(state).is_multiple_of(3) {
            let c = &constants[(mix(state) as usize) % constants.len()];
            return sig.constant(c).unwrap();
        }
        let funcs = sig.functions();
        let (f, arity) = funcs[(mix(state) as usize) % funcs.len()].clone();
        let children = (0..arity)
            .map(|_| random_term(sig, height - 1, state))
            .collect();
        sig.term(&f, children).unwrap()
    }

    #[test]
    fn representative_laws_on_random_terms() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);
        let mut state = 0x1234;
        for _ in 0..60 {
            let t = random_term(&sig, 3, &mut state);
            let rep = canonical_rep(&gamma, &types, &t);
            // rep(t) ∼ t
            assert!(decide_equal(&gamma, &t, &rep).unwrap(), "t = {t}");
            // idempotence
            assert_eq!(canonical_rep(&gamma, &types, &rep), rep, "t = {t}");
        }
    }

    #[test]
    fn rep_characterizes_equality() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let types = compute_types(&gamma);
        let mut state = 0x4321;
        // independent random pairs: both directions of the iff
        for _ in 0..40 {
            let s = random_term(&sig, 3, &mut state);
            let t = random_term(&sig, 3, &mut state);
            let equal = decide_equal(&gamma, &s, &t).unwrap();
            let same_rep =
                canonical_rep(&gamma, &types, &s) == canonical_rep(&gamma, &types, &t);
            assert_eq!(equal, same_rep, "s = {s}, t = {t}");
        }
        // pairs equal by construction: a short random Γ-rewrite walk
        for _ in 0..40 {
            let s = random_term(&sig, 3, &mut state);
            let mut t = s.clone();
            for _ in 0..1 + mix(&mut state) % 5 {
                let succ = rewrite_once_all(&gamma, &t);
                if succ.is_empty() {
                    break;
                }
                t = succ[(mix(&mut state) as usize) % succ.len()].clone();
            }
            assert_eq!(
                canonical_rep(&gamma, &types, &s),
                canonical_rep(&gamma, &types, &t),
                "s = {s}, t = {t}"
            );
        }
    }
}
