//! Class cardinality, the intrinsic infinity test, the finiteness test and
//! the isomorphism test.
//!
//! The central object is the typed mixed graph: R_Γ with every node labeled
//! by the type of its rooted subterm, and undirected edges between any two
//! distinct nodes of a common type. Its quotient graph has one vertex per
//! type plus one per untyped occurrence; a directed cycle reachable from a
//! type makes every class of that type infinite, and acyclic types admit an
//! exact count by a recursion over reduced representations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::canonical::{
    canonical_rep, compute_types, reduced_rep, type_of, ReducedTree, TypeAssignment,
};
use crate::congruence::{build_r_gamma, decide_equal_unchecked};
use crate::error::{Error, Result};
use crate::term::{EquationSet, Position, Term};

/// A node of the typed mixed graph: a subterm occurrence in Γ with its type
/// (0 for untyped).
#[derive(Debug, Clone)]
pub struct TypedNode {
    /// Index of the origin tree in side-term order.
    pub tree: usize,
    pub pos: Position,
    pub term: Term,
    /// 1-based type index, or 0 when the subterm has no type.
    pub ty: usize,
    pub children: Vec<usize>,
}

/// R_Γ with type annotations. Undirected edges are implicit: all pairs of
/// distinct nodes sharing a positive type.
#[derive(Debug, Clone)]
pub struct TypedMixedGraph {
    pub nodes: Vec<TypedNode>,
    /// Origin terms, one per tree.
    pub origins: Vec<Term>,
}

impl TypedMixedGraph {
    /// The implicit undirected edges: each pair of distinct nodes with the
    /// same positive type.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (u, nu) in self.nodes.iter().enumerate() {
            if nu.ty == 0 {
                continue;
            }
            for (v, nv) in self.nodes.iter().enumerate().skip(u + 1) {
                if nv.ty == nu.ty {
                    edges.push((u, v));
                }
            }
        }
        edges
    }
}

/// Builds the typed mixed graph for Γ.
pub fn typed_graph(gamma: &EquationSet, types: &TypeAssignment) -> TypedMixedGraph {
    let graph = build_r_gamma(gamma);
    let nodes = graph
        .nodes()
        .iter()
        .map(|n| TypedNode {
            tree: n.tree,
            pos: n.pos.clone(),
            term: n.term.clone(),
            ty: type_of(gamma, types, &n.term).unwrap_or(0),
            children: n.children.clone(),
        })
        .collect();
    TypedMixedGraph {
        nodes,
        origins: graph.trees().to_vec(),
    }
}

/// The quotient of the typed mixed graph by its undirected edges: one class
/// per positive type, one singleton per untyped occurrence.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    /// For each class: its member node ids (ascending) and its type (0 for a
    /// singleton of an untyped node).
    pub classes: Vec<(Vec<usize>, usize)>,
    /// Directed adjacency between classes, induced by the tree edges.
    pub successors: Vec<BTreeSet<usize>>,
    /// Class id of each node.
    pub class_of: Vec<usize>,
}

/// Builds the quotient graph of the typed mixed graph.
pub fn quotient_graph(graph: &TypedMixedGraph) -> QuotientGraph {
    let mut classes: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut class_of = vec![usize::MAX; graph.nodes.len()];
    let mut class_by_type: BTreeMap<usize, usize> = BTreeMap::new();
    for (id, node) in graph.nodes.iter().enumerate() {
        if node.ty > 0 {
            let class = *class_by_type.entry(node.ty).or_insert_with(|| {
                classes.push((Vec::new(), node.ty));
                classes.len() - 1
            });
            classes[class].0.push(id);
            class_of[id] = class;
        } else {
            classes.push((vec![id], 0));
            class_of[id] = classes.len() - 1;
        }
    }
    let mut successors = vec![BTreeSet::new(); classes.len()];
    for (id, node) in graph.nodes.iter().enumerate() {
        for &child in &node.children {
            successors[class_of[id]].insert(class_of[child]);
        }
    }
    QuotientGraph {
        classes,
        successors,
        class_of,
    }
}

/// Marks the quotient classes from which a directed cycle is reachable.
/// Peeling vertices whose successors are all dead leaves exactly the
/// vertices that reach a cycle (a class on a cycle, self-loops included,
/// reaches one trivially).
fn classes_reaching_cycles(quotient: &QuotientGraph) -> Vec<bool> {
    let n = quotient.classes.len();
    let mut survives = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if survives[v] && quotient.successors[v].iter().all(|&w| !survives[w]) {
                survives[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    survives
}

/// The set of cyclic types: types whose quotient class reaches a directed
/// cycle.
pub fn cyclic_types(gamma: &EquationSet, types: &TypeAssignment) -> BTreeSet<usize> {
    let graph = typed_graph(gamma, types);
    let quotient = quotient_graph(&graph);
    let reaching = classes_reaching_cycles(&quotient);
    quotient
        .classes
        .iter()
        .enumerate()
        .filter(|(class, (_, ty))| *ty > 0 && reaching[*class])
        .map(|(_, (_, ty))| *ty)
        .collect()
}

/// The size of a congruence class: an exact natural number or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u128),
    Infinite,
}

impl Cardinality {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinality::Infinite)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => write!(f, "inf"),
        }
    }
}

/// Everything `class_size` needs, computed once per presentation.
pub struct CountingContext<'a> {
    gamma: &'a EquationSet,
    types: TypeAssignment,
    cyclic: BTreeSet<usize>,
    /// Distinct member terms of the mixed-graph class of each type
    /// (index 0 unused).
    members_by_type: Vec<Vec<Term>>,
    memo: HashMap<usize, u128>,
}

impl<'a> CountingContext<'a> {
    pub fn new(gamma: &'a EquationSet) -> CountingContext<'a> {
        let types = compute_types(gamma);
        let cyclic = cyclic_types(gamma, &types);
        let graph = typed_graph(gamma, &types);
        let mut members_by_type: Vec<Vec<Term>> = vec![Vec::new(); types.count() + 1];
        for node in &graph.nodes {
            if node.ty > 0 && !members_by_type[node.ty].contains(&node.term) {
                members_by_type[node.ty].push(node.term.clone());
            }
        }
        CountingContext {
            gamma,
            types,
            cyclic,
            members_by_type,
            memo: HashMap::new(),
        }
    }

    pub fn types(&self) -> &TypeAssignment {
        &self.types
    }

    pub fn cyclic(&self) -> &BTreeSet<usize> {
        &self.cyclic
    }

    /// #[v] for the class of type `i`: the sum, over the distinct reduced
    /// representations of the class members, of the product of the counts of
    /// their typed leaves. Only called on acyclic types, where the recursion
    /// bottoms out.
    fn count_type(&mut self, i: usize) -> u128 {
        if let Some(&n) = self.memo.get(&i) {
            return n;
        }
        debug_assert!(!self.cyclic.contains(&i), "counting a cyclic type");
        let mut reduced: BTreeSet<ReducedTree> = BTreeSet::new();
        for member in self.members_by_type[i].clone() {
            reduced.insert(reduced_rep(self.gamma, &self.types, &member));
        }
        let mut total: u128 = 0;
        for r in reduced {
            let mut product: u128 = 1;
            for (_, leaf_type) in r.typed_leaves() {
                product = product
                    .checked_mul(self.count_type(leaf_type))
                    .expect("class size overflows u128");
            }
            total = total.checked_add(product).expect("class size overflows u128");
        }
        self.memo.insert(i, total);
        total
    }

    /// The cardinality of the ∼_Γ-class of `t`.
    pub fn class_size(&mut self, t: &Term) -> Cardinality {
        // ∞ exactly when some subterm has a cyclic type
        for sub in t.subterms() {
            if let Some(i) = type_of(self.gamma, &self.types, &sub) {
                if self.cyclic.contains(&i) {
                    return Cardinality::Infinite;
                }
            }
        }
        if let Some(i) = type_of(self.gamma, &self.types, t) {
            return Cardinality::Finite(self.count_type(i));
        }
        // untyped t: one term per choice of class member at each typed leaf
        let r = reduced_rep(self.gamma, &self.types, t);
        let mut product: u128 = 1;
        for (_, leaf_type) in r.typed_leaves() {
            product = product
                .checked_mul(self.count_type(leaf_type))
                .expect("class size overflows u128");
        }
        Cardinality::Finite(product)
    }
}

/// The size of the ∼_Γ-congruence class of `t`, possibly ∞.
pub fn class_size(gamma: &EquationSet, t: &Term) -> Cardinality {
    CountingContext::new(gamma).class_size(t)
}

/// True when every congruence class of F_Γ is infinite: every constant must
/// have a cyclic type.
pub fn intrinsic_infinite(gamma: &EquationSet) -> bool {
    let types = compute_types(gamma);
    let cyclic = cyclic_types(gamma, &types);
    gamma.signature().constants().iter().all(|c| {
        let term = gamma.signature().constant(c).expect("declared constant");
        match type_of(gamma, &types, &term) {
            Some(i) => cyclic.contains(&i),
            None => false,
        }
    })
}

/// The set ST(Γ) of all subterms of terms occurring in Γ.
#[derive(Debug, Clone)]
pub struct SubtermAlgebra {
    /// Distinct subterms, ascending in the term order.
    pub members: Vec<Term>,
}

/// Collects ST(Γ).
pub fn subterm_closure(gamma: &EquationSet) -> SubtermAlgebra {
    let mut members: BTreeSet<Term> = BTreeSet::new();
    for side in gamma.side_terms() {
        members.extend(side.subterms());
    }
    SubtermAlgebra {
        members: members.into_iter().collect(),
    }
}

/// Decides whether F_Γ is finite.
///
/// With at least one function symbol this is the subterm-closure test: every
/// constant must be equivalent to a member of ST(Γ), and every application
/// of a function symbol to members of ST(Γ) must be equivalent to a member
/// again. A signature without function symbols generates a finite algebra
/// outright.
pub fn is_finite(gamma: &EquationSet) -> bool {
    let sig = gamma.signature();
    if sig.functions().is_empty() {
        return true;
    }
    let st = subterm_closure(gamma).members;
    let equivalent_to_some_member =
        |t: &Term| -> bool { st.iter().any(|u| decide_equal_unchecked(gamma, t, u)) };
    // (1) constants collapse into ST(Γ)
    for c in sig.constants() {
        let term = sig.constant(c).expect("declared constant");
        if !equivalent_to_some_member(&term) {
            return false;
        }
    }
    // (2) ST(Γ) is closed under every function symbol, up to ∼_Γ
    for (f, arity) in sig.functions() {
        let mut tuple = vec![0usize; *arity];
        loop {
            let children: Vec<Term> = tuple.iter().map(|&i| st[i].clone()).collect();
            let applied = sig.term(f, children).expect("arity matches");
            if !equivalent_to_some_member(&applied) {
                return false;
            }
            let mut k = 0;
            loop {
                if k == tuple.len() {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < st.len() {
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
    true
}

/// The finite algebra F_Γ, explicitly: one canonical representative per
/// class and a total operation table over carrier indices.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    /// Canonical representatives, ascending in the term order.
    pub carrier: Vec<Term>,
    /// (symbol, argument indices) → result index.
    pub table: BTreeMap<(String, Vec<usize>), usize>,
}

/// Enumerates F_Γ when it is finite: the classes of constants and ST(Γ)
/// members carry the whole algebra, and the operation table follows the
/// canonical homomorphism.
pub fn enumerate_if_finite(gamma: &EquationSet) -> Result<FiniteAlgebra> {
    if !is_finite(gamma) {
        return Err(Error::NotFinite);
    }
    let sig = gamma.signature();
    let types = compute_types(gamma);
    let mut carrier: BTreeSet<Term> = BTreeSet::new();
    for c in sig.constants() {
        let term = sig.constant(c).expect("declared constant");
        carrier.insert(canonical_rep(gamma, &types, &term));
    }
    for member in subterm_closure(gamma).members {
        carrier.insert(canonical_rep(gamma, &types, &member));
    }
    let carrier: Vec<Term> = carrier.into_iter().collect();
    let index_of = |t: &Term| -> Option<usize> { carrier.iter().position(|r| r == t) };

    let mut table = BTreeMap::new();
    for (f, arity) in sig.functions() {
        let mut tuple = vec![0usize; *arity];
        loop {
            let children: Vec<Term> = tuple.iter().map(|&i| carrier[i].clone()).collect();
            let applied = sig.term(f, children).expect("arity matches");
            let rep = canonical_rep(gamma, &types, &applied);
            let target = index_of(&rep)
                .expect("finiteness guarantees every application lands in the carrier");
            table.insert((f.clone(), tuple.clone()), target);
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
    Ok(FiniteAlgebra { carrier, table })
}

/// Decides F_Γ₁ ≅ F_Γ₂ for two presentations over the same signature, by
/// the pairwise criterion on B = constants ∪ ST(Γ₁ ∪ Γ₂): the two
/// congruences must agree on every pair of members.
pub fn are_isomorphic(gamma1: &EquationSet, gamma2: &EquationSet) -> Result<bool> {
    if gamma1.signature() != gamma2.signature() {
        return Err(Error::SignatureMismatch(
            "isomorphism requires both presentations over one signature".into(),
        ));
    }
    let sig = gamma1.signature();
    let union = gamma1.union(gamma2)?;
    let mut base: BTreeSet<Term> = BTreeSet::new();
    for c in sig.constants() {
        base.insert(sig.constant(c).expect("declared constant"));
    }
    base.extend(subterm_closure(&union).members);
    let base: Vec<Term> = base.into_iter().collect();
    for (i, u) in base.iter().enumerate() {
        for t in &base[i + 1..] {
            if decide_equal_unchecked(gamma1, u, t) != decide_equal_unchecked(gamma2, u, t) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{class_closure, RewriteBudget};
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

    fn gamma_of(sig: &Signature, eqs: &[(&str, &str)]) -> EquationSet {
        EquationSet::new(
            sig.clone(),
            eqs.iter()
                .map(|(l, r)| (parse_term(l, sig).unwrap(), parse_term(r, sig).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn typed_graph_matches_figure() {
        let gamma = gamma_ex();
        let types = compute_types(&gamma);
        let graph = typed_graph(&gamma, &types);
        let tys: Vec<usize> = graph.nodes.iter().map(|n| n.ty).collect();
        assert_eq!(tys, vec![1, 1, 0, 2, 2, 2, 1, 0]);

        let empty = EquationSet::empty(sig_ex());
        let no_types = compute_types(&empty);
        assert!(typed_graph(&empty, &no_types).nodes.is_empty());

        let sig = sig_ex();
        let ab = gamma_of(&sig, &[("a", "b")]);
        let t = compute_types(&ab);
        let graph = typed_graph(&ab, &t);
        assert_eq!(
            graph.nodes.iter().map(|n| n.ty).collect::<Vec<_>>(),
            vec![1, 1]
        );
        assert_eq!(graph.undirected_edges(), vec![(0, 1)]);
    }

    #[test]
    fn cyclic_types_examples() {
        let gamma = gamma_ex();
        let types = compute_types(&gamma);
        assert_eq!(
            cyclic_types(&gamma, &types).into_iter().collect::<Vec<_>>(),
            vec![1, 2]
        );

        let sig = sig_ex();
        let ab = gamma_of(&sig, &[("a", "b")]);
        assert!(cyclic_types(&ab, &compute_types(&ab)).is_empty());

        let empty = EquationSet::empty(sig);
        assert!(cyclic_types(&empty, &compute_types(&empty)).is_empty());
    }

    #[test]
    fn class_size_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let a = parse_term("a", &sig).unwrap();
        assert_eq!(class_size(&gamma, &a), Cardinality::Infinite);
        let c = parse_term("c", &sig).unwrap();
        assert_eq!(class_size(&gamma, &c), Cardinality::Infinite);
        let b = parse_term("b", &sig).unwrap();
        assert_eq!(class_size(&gamma, &b), Cardinality::Finite(1));

        let empty = EquationSet::empty(sig.clone());
        let t = parse_term("f(a,f(b,c))", &sig).unwrap();
        assert_eq!(class_size(&empty, &t), Cardinality::Finite(1));

        let ab = gamma_of(&sig, &[("a", "b")]);
        let fac = parse_term("f(a,c)", &sig).unwrap();
        // oracle cross-check before freezing the count
        let closure = class_closure(&ab, &fac, RewriteBudget::default());
        assert!(closure.saturated);
        assert_eq!(closure.members.len(), 2);
        assert_eq!(class_size(&ab, &fac), Cardinality::Finite(2));
    }

    #[test]
    fn class_size_multiplies_typed_leaves() {
        // two independent typed leaves of class size 3 each: 9 terms total
        let sig = parse_signature("fun f 2; const a b e x").unwrap();
        let gamma = gamma_of(&sig, &[("a", "b"), ("b", "e")]);
        let t = parse_term("f(a,e)", &sig).unwrap();
        let closure = class_closure(&gamma, &t, RewriteBudget::default());
        assert!(closure.saturated);
        assert_eq!(closure.members.len(), 9);
        assert_eq!(class_size(&gamma, &t), Cardinality::Finite(9));
    }

    #[test]
    fn class_size_sums_distinct_reduced_representations() {
        // type of c has members {c, g(b)} with distinct reduced trees:
        // #[c] = 1 + #[b-type] = 1 + 2 = 3
        let sig = parse_signature("fun g 1; const a b c").unwrap();
        let gamma = gamma_of(&sig, &[("g(b)", "c"), ("a", "b")]);
        let c = parse_term("c", &sig).unwrap();
        let closure = class_closure(&gamma, &c, RewriteBudget::default());
        assert!(closure.saturated);
        assert_eq!(closure.members.len(), 3);
        assert_eq!(class_size(&gamma, &c), Cardinality::Finite(3));
    }

    #[test]
    fn intrinsic_infinite_examples() {
        assert!(!intrinsic_infinite(&gamma_ex()));

        let sig = sig_ex();
        assert!(!intrinsic_infinite(&EquationSet::empty(sig)));

        let unary = parse_signature("fun f 1; const a").unwrap();
        let gamma = gamma_of(&unary, &[("a", "f(a)")]);
        assert!(intrinsic_infinite(&gamma));
    }

    #[test]
    fn intrinsic_infinite_iff_every_constant_class_is_infinite() {
        let sig_unary = parse_signature("fun f 1; const a").unwrap();
        let sig_two = parse_signature("fun f 1; fun g 1; const a b").unwrap();
        let gammas = [
            gamma_of(&sig_unary, &[("a", "f(a)")]),
            gamma_ex(),
            gamma_of(&sig_two, &[("a", "f(b)"), ("b", "g(a)")]),
            gamma_of(&sig_ex(), &[("a", "b")]),
        ];
        for gamma in &gammas {
            let all_infinite = gamma.signature().constants().iter().all(|c| {
                let t = gamma.signature().constant(c).unwrap();
                class_size(gamma, &t).is_infinite()
            });
            assert_eq!(intrinsic_infinite(gamma), all_infinite, "Γ = {gamma}");
        }
    }

    #[test]
    fn subterm_closure_examples() {
        let gamma = gamma_ex();
        let st: Vec<String> = subterm_closure(&gamma)
            .members
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(st, vec!["a", "b", "c", "f(a,b)", "f(b,c)"]);

        let sig = sig_ex();
        assert!(subterm_closure(&EquationSet::empty(sig)).members.is_empty());

        let unary = parse_signature("fun f 1; const a").unwrap();
        let gamma = gamma_of(&unary, &[("f(a)", "a")]);
        let st: Vec<String> = subterm_closure(&gamma)
            .members
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(st, vec!["a", "f(a)"]);
    }

    #[test]
    fn is_finite_examples() {
        let unary = parse_signature("fun f 1; const a").unwrap();
        assert!(is_finite(&gamma_of(&unary, &[("f(a)", "a")])));
        assert!(!is_finite(&EquationSet::empty(unary)));
        assert!(!is_finite(&gamma_ex()));
        // no function symbols: always finite
        let consts = parse_signature("const a b").unwrap();
        assert!(is_finite(&EquationSet::empty(consts)));
    }

    #[test]
    fn enumerate_if_finite_examples() {
        let unary = parse_signature("fun f 1; const a").unwrap();
        let gamma = gamma_of(&unary, &[("f(a)", "a")]);
        let algebra = enumerate_if_finite(&gamma).unwrap();
        assert_eq!(algebra.carrier.len(), 1);
        assert_eq!(algebra.carrier[0].to_string(), "a");
        assert_eq!(algebra.table.get(&("f".into(), vec![0])), Some(&0));

        let two = parse_signature("fun f 1; const a b").unwrap();
        let gamma = gamma_of(&two, &[("f(a)", "a"), ("a", "b")]);
        let algebra = enumerate_if_finite(&gamma).unwrap();
        assert_eq!(algebra.carrier.len(), 1);

        let consts = parse_signature("const a b c").unwrap();
        let algebra = enumerate_if_finite(&EquationSet::empty(consts)).unwrap();
        assert_eq!(
            algebra
                .carrier
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>(),
            vec!["a", "b", "c"]
        );
        assert!(algebra.table.is_empty());

        assert!(matches!(
            enumerate_if_finite(&gamma_ex()),
            Err(Error::NotFinite)
        ));
    }

    #[test]
    fn are_isomorphic_examples() {
        let gamma = gamma_ex();
        assert!(are_isomorphic(&gamma, &gamma).unwrap());

        let sig = sig_ex();
        let ab = gamma_of(&sig, &[("a", "b")]);
        let ba = gamma_of(&sig, &[("b", "a")]);
        let ac = gamma_of(&sig, &[("a", "c")]);
        assert!(are_isomorphic(&ab, &ba).unwrap());
        assert!(!are_isomorphic(&ab, &ac).unwrap());
        // symmetry
        assert!(!are_isomorphic(&ac, &ab).unwrap());

        let other = parse_signature("fun g 1; const x").unwrap();
        let foreign = EquationSet::empty(other);
        assert!(matches!(
            are_isomorphic(&ab, &foreign),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn class_size_is_a_class_invariant() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        for (s, t) in [("a", "f(b,c)"), ("c", "f(a,b)"), ("f(b,f(a,b))", "a")] {
            let s = parse_term(s, &sig).unwrap();
            let t = parse_term(t, &sig).unwrap();
            assert_eq!(class_size(&gamma, &s), class_size(&gamma, &t));
        }
        let ab = gamma_of(&sig, &[("a", "b")]);
        let s = parse_term("f(a,c)", &sig).unwrap();
        let t = parse_term("f(b,c)", &sig).unwrap();
        assert_eq!(class_size(&ab, &s), class_size(&ab, &t));
    }
}
