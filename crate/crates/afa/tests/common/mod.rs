//! Shared generators for the integration and acceptance suites: a tiny
//! deterministic RNG plus random signatures, terms, presentations and
//! sentences.

use afa::formula::{Formula, OTerm};
use afa::term::{EquationSet, Signature, Term};

/// splitmix64: deterministic across platforms and rust versions.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// A random signature with at most `max_functions` function symbols of arity
/// ≤ 2 and one to three constants.
pub fn random_signature(rng: &mut Rng, max_functions: usize) -> Signature {
    let function_names = ["f", "g", "h"];
    let constant_names = ["a", "b", "c"];
    let n_functions = 1 + rng.below(max_functions);
    let n_constants = 1 + rng.below(3);
    let functions: Vec<(String, usize)> = function_names[..n_functions]
        .iter()
        .map(|name| (name.to_string(), 1 + rng.below(2)))
        .collect();
    let constants: Vec<String> = constant_names[..n_constants]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Signature::new(functions, constants).expect("generated signatures are well-formed")
}

/// A random ground term of height at most `height`.
pub fn random_term(sig: &Signature, height: usize, rng: &mut Rng) -> Term {
    if height == 0 || sig.functions().is_empty() || rng.chance(35) {
        let c = rng.pick(sig.constants());
        return sig.constant(c).expect("declared constant");
    }
    let (f, arity) = rng.pick(sig.functions()).clone();
    let children = (0..arity)
        .map(|_| random_term(sig, height - 1, rng))
        .collect();
    sig.term(&f, children).expect("arity matches")
}

/// A random presentation over `sig` with at most `max_equations` equations
/// whose sides have height at most `side_height`.
pub fn random_gamma(
    sig: &Signature,
    max_equations: usize,
    side_height: usize,
    rng: &mut Rng,
) -> EquationSet {
    let count = rng.below(max_equations + 1);
    let equations = (0..count)
        .map(|_| {
            (
                random_term(sig, side_height, rng),
                random_term(sig, side_height, rng),
            )
        })
        .collect();
    EquationSet::new(sig.clone(), equations).expect("terms are over sig")
}

/// Applies 1..=max random rewrite steps to `t`; the result is ∼_Γ-equal to
/// `t` by construction.
pub fn random_rewrite_walk(gamma: &EquationSet, t: &Term, max: usize, rng: &mut Rng) -> Term {
    let mut current = t.clone();
    for _ in 0..1 + rng.below(max) {
        let successors = afa::oracle::rewrite_once_all(gamma, &current);
        if successors.is_empty() {
            break;
        }
        current = rng.pick(&successors).clone();
    }
    current
}

/// The Γ_ex presentation of the running example: {a = f(b,c), c = f(a,b)}.
pub fn gamma_ex() -> EquationSet {
    let sig = afa::term::parse_signature("fun f 2; const a b c").expect("valid");
    let parse = |s: &str| afa::term::parse_term(s, &sig).expect("valid");
    EquationSet::new(sig.clone(), vec![(parse("a"), parse("fbc")), (parse("c"), parse("fab"))])
        .expect("valid")
}

/// A random open term over the signature, the given variables, and height
/// at most `height`.
pub fn random_oterm(sig: &Signature, vars: &[&str], height: usize, rng: &mut Rng) -> OTerm {
    if height == 0 || sig.functions().is_empty() || rng.chance(40) {
        if !vars.is_empty() && rng.chance(60) {
            return OTerm::Var(rng.pick(vars).to_string());
        }
        return OTerm::constant(rng.pick(sig.constants()));
    }
    let (f, arity) = rng.pick(sig.functions()).clone();
    let children = (0..arity)
        .map(|_| random_oterm(sig, vars, height - 1, rng))
        .collect();
    OTerm::App(f, children)
}

/// A random quantifier-free matrix over the variables: a small ∧/∨/¬
/// combination of equality and tester atoms.
pub fn random_matrix(sig: &Signature, vars: &[&str], rng: &mut Rng) -> Formula {
    let atom = |rng: &mut Rng| -> Formula {
        if !sig.functions().is_empty() && rng.chance(30) {
            let (f, _) = rng.pick(sig.functions()).clone();
            Formula::Is(f, random_oterm(sig, vars, 1, rng))
        } else {
            Formula::Eq(
                random_oterm(sig, vars, 2, rng),
                random_oterm(sig, vars, 2, rng),
            )
        }
    };
    let literal = |rng: &mut Rng| -> Formula {
        let a = atom(rng);
        if rng.chance(40) {
            Formula::not(a)
        } else {
            a
        }
    };
    match rng.below(3) {
        0 => literal(rng),
        1 => Formula::and(vec![literal(rng), literal(rng)]),
        _ => Formula::or(vec![literal(rng), Formula::and(vec![literal(rng), literal(rng)])]),
    }
}

/// A random closed sentence of quantifier depth ≤ 2 over ≤ 2 variables.
pub fn random_sentence(sig: &Signature, rng: &mut Rng) -> Formula {
    let two_vars = rng.chance(60);
    if two_vars {
        let matrix = random_matrix(sig, &["x", "y"], rng);
        let inner = if rng.chance(50) {
            Formula::exists("y", matrix)
        } else {
            Formula::forall("y", matrix)
        };
        if rng.chance(50) {
            Formula::exists("x", inner)
        } else {
            Formula::forall("x", inner)
        }
    } else {
        let matrix = random_matrix(sig, &["x"], rng);
        if rng.chance(50) {
            Formula::exists("x", matrix)
        } else {
            Formula::forall("x", matrix)
        }
    }
}

/// A random prenex-existential sentence: ∃x(…) or ∃x∃y(…) with a positive
/// chance of negated atoms in the matrix.
pub fn random_existential_sentence(sig: &Signature, vars: usize, rng: &mut Rng) -> Formula {
    if vars >= 2 && rng.chance(50) {
        let matrix = random_matrix(sig, &["x", "y"], rng);
        Formula::exists("x", Formula::exists("y", matrix))
    } else {
        let matrix = random_matrix(sig, &["x"], rng);
        Formula::exists("x", matrix)
    }
}
