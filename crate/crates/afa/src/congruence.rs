//! Congruence closure over the mixed graph R_Γ, deciding the word problem
//! F_Γ ⊨ s = t in polynomial time.
//!
//! The graph is the disjoint union of the tree representations of the terms
//! mentioned in Γ (plus any query terms). Closure starts from two kinds of
//! seed edges — syntactically equal rooted subterms and the equations of Γ
//! themselves — and then closes under transitivity and the child-wise
//! congruence rule. The fixpoint is maintained with a union-find; on small
//! inputs the tests check it against a literal edge-by-edge fixpoint.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::term::{EquationSet, Position, Term};

/// One node of R_Γ: a position in the tree of one adjoined origin term.
#[derive(Debug, Clone)]
pub struct GraphNode {
    /// Index of the origin tree this node belongs to.
    pub tree: usize,
    pub pos: Position,
    /// The subterm of the origin term rooted at `pos`.
    pub term: Term,
    /// Node ids of the children, in child order.
    pub children: Vec<usize>,
}

impl GraphNode {
    pub fn symbol(&self) -> &str {
        self.term.symbol()
    }
}

/// The graph R_Γ, possibly extended with query trees. Directed (tree) edges
/// are stored in the nodes; undirected equality edges exist only after
/// [`close`] and are represented by the class map of [`ClosureResult`].
#[derive(Debug, Clone)]
pub struct CongruenceGraph {
    gamma: EquationSet,
    /// Origin terms in adjoin order, one entry per tree.
    trees: Vec<Term>,
    /// Node id of each tree's root.
    roots: Vec<usize>,
    nodes: Vec<GraphNode>,
}

impl CongruenceGraph {
    fn adjoin(&mut self, term: &Term) -> usize {
        let tree = self.trees.len();
        self.trees.push(term.clone());
        fn walk(
            nodes: &mut Vec<GraphNode>,
            tree: usize,
            pos: Position,
            term: &Term,
        ) -> usize {
            let id = nodes.len();
            nodes.push(GraphNode {
                tree,
                pos: pos.clone(),
                term: term.clone(),
                children: Vec::new(),
            });
            let mut children = Vec::with_capacity(term.children().len());
            for (i, c) in term.children().iter().enumerate() {
                children.push(walk(nodes, tree, pos.child(i), c));
            }
            nodes[id].children = children;
            id
        }
        let root = walk(&mut self.nodes, tree, Position::root(), term);
        self.roots.push(root);
        root
    }

    pub fn gamma(&self) -> &EquationSet {
        &self.gamma
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn trees(&self) -> &[Term] {
        &self.trees
    }

    /// Node id of the root of the `i`-th adjoined tree.
    pub fn root_of_tree(&self, i: usize) -> usize {
        self.roots[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Builds R_Γ: one tree per distinct term occurring as a side of an equation
/// of Γ, in input order, with no undirected edges yet.
pub fn build_r_gamma(gamma: &EquationSet) -> CongruenceGraph {
    let mut graph = CongruenceGraph {
        gamma: gamma.clone(),
        trees: Vec::new(),
        roots: Vec::new(),
        nodes: Vec::new(),
    };
    for side in gamma.side_terms() {
        graph.adjoin(&side);
    }
    graph
}

/// R_Γ(s,t): adjoins the trees Ω(s) and Ω(t) as two fresh origins. Returns
/// the extended graph together with the ids of the two new roots.
pub fn extend_with_terms(
    graph: &CongruenceGraph,
    s: &Term,
    t: &Term,
) -> (CongruenceGraph, usize, usize) {
    let mut extended = graph.clone();
    let s_root = extended.adjoin(s);
    let t_root = extended.adjoin(t);
    (extended, s_root, t_root)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes; the smaller root index wins, keeping class
    /// representatives deterministic.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The closure fixpoint: the graph plus the equivalence it induces on nodes.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub graph: CongruenceGraph,
    /// Class id per node; ids are numbered by smallest member node.
    pub class_of: Vec<usize>,
    /// Members of each class, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl ClosureResult {
    pub fn connected(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }

    /// The undirected edge set at fixpoint: every pair of distinct nodes in a
    /// common class (transitivity makes classes complete).
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for class in &self.classes {
            for (i, &u) in class.iter().enumerate() {
                for &v in &class[i + 1..] {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        edges
    }
}

/// Runs Kozen's closure on the graph: seed edges for syntactically equal
/// subterms and for the equations of Γ, then the transitivity and congruence
/// rules to fixpoint.
pub fn close(graph: &CongruenceGraph) -> ClosureResult {
    let n = graph.len();
    let mut uf = UnionFind::new(n);

    // Step 0a: syntactically equal rooted subterms. Grouping by term hash
    // avoids the quadratic scan.
    let mut first_by_term: HashMap<&Term, usize> = HashMap::new();
    for (id, node) in graph.nodes().iter().enumerate() {
        match first_by_term.entry(&node.term) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(id);
            }
            std::collections::hash_map::Entry::Occupied(e) => {
                uf.union(*e.get(), id);
            }
        }
    }

    // Step 0b: the equations of Γ link any occurrence of one side to any
    // occurrence of the other. One representative occurrence per side
    // suffices since step 0a merged duplicates.
    for (lhs, rhs) in graph.gamma().equations() {
        if let (Some(&u), Some(&v)) = (first_by_term.get(lhs), first_by_term.get(rhs)) {
            uf.union(u, v);
        }
    }

    // Step n: the child-wise congruence rule, via a signature table keyed by
    // (symbol, child classes). Transitivity is implicit in the union-find.
    loop {
        let mut changed = false;
        let mut table: HashMap<(String, Vec<usize>), usize> = HashMap::new();
        for id in 0..n {
            let node = &graph.nodes()[id];
            let key = (
                node.symbol().to_string(),
                node.children.iter().map(|&c| uf.find(c)).collect::<Vec<_>>(),
            );
            match table.entry(key) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(id);
                }
                std::collections::hash_map::Entry::Occupied(e) => {
                    changed |= uf.union(*e.get(), id);
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Deterministic class numbering by smallest member.
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut class_of = vec![0usize; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (id, slot) in class_of.iter_mut().enumerate() {
        let root = uf.find(id);
        let class = *class_index.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        *slot = class;
        classes[class].push(id);
    }

    ClosureResult {
        graph: graph.clone(),
        class_of,
        classes,
    }
}

/// Decides the word problem F_Γ ⊨ s = t.
pub fn decide_equal(gamma: &EquationSet, s: &Term, t: &Term) -> Result<bool> {
    gamma
        .signature()
        .validate(s)
        .and_then(|()| gamma.signature().validate(t))
        .map_err(|e| Error::SignatureMismatch(e.to_string()))?;
    Ok(decide_equal_unchecked(gamma, s, t))
}

/// The word problem without the signature check; callers guarantee that both
/// terms are well-formed over Γ's signature.
pub(crate) fn decide_equal_unchecked(gamma: &EquationSet, s: &Term, t: &Term) -> bool {
    if s == t {
        return true;
    }
    let (graph, s_root, t_root) = extend_with_terms(&build_r_gamma(gamma), s, t);
    let closure = close(&graph);
    closure.connected(s_root, t_root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{rewrite_oracle, OracleVerdict, RewriteBudget};
    use crate::term::{parse_signature, parse_term, Signature};
    use std::collections::BTreeSet;

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

    /// Literal transcription of the closure steps: an explicit undirected
    /// edge set grown to fixpoint. Quartic and only for cross-checking.
    fn naive_close(graph: &CongruenceGraph) -> BTreeSet<(usize, usize)> {
        let n = graph.len();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let add = |edges: &mut BTreeSet<(usize, usize)>, u: usize, v: usize| -> bool {
            if u == v {
                return false;
            }
            edges.insert((u.min(v), u.max(v)))
        };
        // Step 0
        for u in 0..n {
            for v in u + 1..n {
                let tu = &graph.nodes()[u].term;
                let tv = &graph.nodes()[v].term;
                let seeded = tu == tv
                    || graph.gamma().equations().iter().any(|(l, r)| {
                        (l == tu && r == tv) || (l == tv && r == tu)
                    });
                if seeded {
                    add(&mut edges, u, v);
                }
            }
        }
        // Step n, repeated until no new edge appears
        loop {
            let mut new_edges: Vec<(usize, usize)> = Vec::new();
            let connected =
                |edges: &BTreeSet<(usize, usize)>, u: usize, v: usize| -> bool {
                    u == v || edges.contains(&(u.min(v), u.max(v)))
                };
            for &(u, v) in edges.iter() {
                for w in 0..n {
                    if connected(&edges, v, w) && !connected(&edges, u, w) && u != w {
                        new_edges.push((u.min(w), u.max(w)));
                    }
                    if connected(&edges, u, w) && !connected(&edges, v, w) && v != w {
                        new_edges.push((v.min(w), v.max(w)));
                    }
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    let nu = &graph.nodes()[u];
                    let nv = &graph.nodes()[v];
                    if nu.symbol() == nv.symbol()
                        && !nu.children.is_empty()
                        && nu.children.len() == nv.children.len()
                        && !connected(&edges, u, v)
                        && nu
                            .children
                            .iter()
                            .zip(&nv.children)
                            .all(|(&cu, &cv)| connected(&edges, cu, cv))
                    {
                        new_edges.push((u, v));
                    }
                }
            }
            let before = edges.len();
            edges.extend(new_edges);
            if edges.len() == before {
                break;
            }
        }
        edges
    }

    #[test]
    fn build_r_gamma_examples() {
        let graph = build_r_gamma(&gamma_ex());
        assert_eq!(graph.len(), 8);
        let labels: Vec<(String, String, String)> = graph
            .nodes()
            .iter()
            .map(|n| {
                (
                    graph.trees()[n.tree].to_string(),
                    n.symbol().to_string(),
                    n.pos.render(),
                )
            })
            .collect();
        let expect = [
            ("a", "a", "ε"),
            ("f(b,c)", "f", "ε"),
            ("f(b,c)", "b", "0"),
            ("f(b,c)", "c", "1"),
            ("c", "c", "ε"),
            ("f(a,b)", "f", "ε"),
            ("f(a,b)", "a", "0"),
            ("f(a,b)", "b", "1"),
        ];
        for (got, want) in labels.iter().zip(expect.iter()) {
            assert_eq!(
                (got.0.as_str(), got.1.as_str(), got.2.as_str()),
                *want
            );
        }

        let sig = sig_ex();
        assert!(build_r_gamma(&EquationSet::empty(sig.clone())).is_empty());

        let ab = EquationSet::new(
            sig.clone(),
            vec![(parse_term("a", &sig).unwrap(), parse_term("b", &sig).unwrap())],
        )
        .unwrap();
        let graph = build_r_gamma(&ab);
        assert_eq!(graph.len(), 2);
        assert!(graph.nodes().iter().all(|n| n.children.is_empty()));
    }

    #[test]
    fn extend_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let base = build_r_gamma(&gamma);
        let a = parse_term("a", &sig).unwrap();
        let c = parse_term("c", &sig).unwrap();
        let (ext, _, _) = extend_with_terms(&base, &a, &c);
        assert_eq!(ext.len(), 10);

        let empty = build_r_gamma(&EquationSet::empty(sig.clone()));
        let (ext, s_root, t_root) = extend_with_terms(&empty, &a, &a);
        assert_eq!(ext.len(), 2);
        assert_ne!(s_root, t_root);

        let fbc = parse_term("f(b,c)", &sig).unwrap();
        let fab = parse_term("f(a,b)", &sig).unwrap();
        let (ext, _, _) = extend_with_terms(&base, &fbc, &fab);
        assert_eq!(ext.len(), 14);
    }

    #[test]
    fn close_gamma_ex_links_the_two_triples() {
        let graph = build_r_gamma(&gamma_ex());
        let closure = close(&graph);
        // node ids in adjoin order: 0:(a,a,ε) 1:(fbc,f,ε) 2:(fbc,b,0)
        // 3:(fbc,c,1) 4:(c,c,ε) 5:(fab,f,ε) 6:(fab,a,0) 7:(fab,b,1)
        assert!(closure.connected(0, 1) && closure.connected(1, 6));
        assert!(closure.connected(4, 3) && closure.connected(3, 5));
        assert!(!closure.connected(0, 4));
        // the two b occurrences meet by syntactic equality
        assert!(closure.connected(2, 7));
        assert!(!closure.connected(2, 0) && !closure.connected(2, 4));
    }

    #[test]
    fn close_empty_and_transitivity() {
        let sig = sig_ex();
        let empty = build_r_gamma(&EquationSet::empty(sig.clone()));
        let closure = close(&empty);
        assert!(closure.classes.is_empty());

        let gamma = EquationSet::new(
            sig.clone(),
            vec![
                (parse_term("a", &sig).unwrap(), parse_term("b", &sig).unwrap()),
                (parse_term("b", &sig).unwrap(), parse_term("c", &sig).unwrap()),
            ],
        )
        .unwrap();
        let (graph, s_root, t_root) = extend_with_terms(
            &build_r_gamma(&gamma),
            &parse_term("a", &sig).unwrap(),
            &parse_term("c", &sig).unwrap(),
        );
        let closure = close(&graph);
        assert!(closure.connected(s_root, t_root));
        // a, b, c all in one class
        assert_eq!(closure.classes.len(), 1);
    }

    #[test]
    fn decide_equal_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let a = parse_term("a", &sig).unwrap();
        let b = parse_term("b", &sig).unwrap();
        let deep = parse_term("f(b,f(a,b))", &sig).unwrap();
        assert!(decide_equal(&gamma, &a, &deep).unwrap());
        assert!(decide_equal(&gamma, &deep, &deep).unwrap());
        assert!(!decide_equal(&gamma, &a, &b).unwrap());

        let other = parse_signature("fun g 1; const x").unwrap();
        let x = parse_term("x", &other).unwrap();
        assert!(matches!(
            decide_equal(&gamma, &a, &x),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn every_equation_is_satisfied() {
        for gamma in [gamma_ex()] {
            for (l, r) in gamma.equations() {
                assert!(decide_equal(&gamma, l, r).unwrap());
            }
        }
    }

    /// Tiny deterministic generator for cross-check instances.
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

    fn random_gamma(sig: &Signature, size: usize, height: usize, state: &mut u64) -> EquationSet {
        let eqs = (0..size)
            .map(|_| {
                (
                    random_term(sig, height, state),
                    random_term(sig, height, state),
                )
            })
            .collect();
        EquationSet::new(sig.clone(), eqs).unwrap()
    }

    #[test]
    fn union_find_matches_naive_fixpoint() {
        let sig = parse_signature("fun f 2; fun g 1; const a b").unwrap();
        let mut state = 0x5eed;
        for round in 0..40 {
            let gamma = random_gamma(&sig, 1 + round % 4, 2, &mut state);
            let s = random_term(&sig, 2, &mut state);
            let t = random_term(&sig, 2, &mut state);
            let (graph, _, _) = extend_with_terms(&build_r_gamma(&gamma), &s, &t);
            let closure = close(&graph);
            let fast: BTreeSet<(usize, usize)> =
                closure.undirected_edges().into_iter().collect();
            let slow = naive_close(&graph);
            assert_eq!(fast, slow, "Γ = {gamma}, s = {s}, t = {t}");
        }
    }

    #[test]
    fn equivalence_and_congruence_properties() {
        let sig = sig_ex();
        let mut state = 0xabcd;
        for _ in 0..30 {
            let gamma = random_gamma(&sig, 3, 2, &mut state);
            let ts: Vec<Term> = (0..3).map(|_| random_term(&sig, 3, &mut state)).collect();
            // reflexive, symmetric, transitive on the sample
            for t in &ts {
                assert!(decide_equal(&gamma, t, t).unwrap());
            }
            for u in &ts {
                for v in &ts {
                    assert_eq!(
                        decide_equal(&gamma, u, v).unwrap(),
                        decide_equal(&gamma, v, u).unwrap()
                    );
                }
            }
            if decide_equal(&gamma, &ts[0], &ts[1]).unwrap()
                && decide_equal(&gamma, &ts[1], &ts[2]).unwrap()
            {
                assert!(decide_equal(&gamma, &ts[0], &ts[2]).unwrap());
            }
            // congruence: equal children give equal applications
            let u = sig.term("f", vec![ts[0].clone(), ts[1].clone()]).unwrap();
            let v = sig.term("f", vec![ts[0].clone(), ts[1].clone()]).unwrap();
            assert!(decide_equal(&gamma, &u, &v).unwrap());
        }
    }

    #[test]
    fn agrees_with_rewrite_oracle_when_conclusive() {
        let sig = parse_signature("fun f 2; fun g 1; const a b").unwrap();
        let mut state = 0xfeed;
        let budget = RewriteBudget::new(20_000, 6);
        for _ in 0..25 {
            let gamma = random_gamma(&sig, 2, 2, &mut state);
            let s = random_term(&sig, 2, &mut state);
            let t = random_term(&sig, 2, &mut state);
            let fast = decide_equal(&gamma, &s, &t).unwrap();
            match rewrite_oracle(&gamma, &s, &t, budget) {
                OracleVerdict::Equal => assert!(fast, "oracle equal, closure not: {gamma} {s} {t}"),
                OracleVerdict::NotEqual => {
                    assert!(!fast, "oracle not-equal, closure says equal: {gamma} {s} {t}")
                }
                OracleVerdict::Unknown => {}
            }
        }
    }
}
