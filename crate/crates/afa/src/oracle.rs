//! Brute-force semi-decision of ∼_Γ by rewriting closure.
//!
//! This module is deliberately naive: it explores the congruence class of a
//! term by applying single-step replacements in both directions of every
//! equation, at every position, breadth-first. It exists as independent
//! ground truth for the polynomial-time procedures and may take exponential
//! time; nothing else in the library depends on it.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::term::{EquationSet, Term};

/// Exploration limits for the rewriting closure.
///
/// `max_steps` counts successor terms produced (before deduplication);
/// `max_height` discards any successor strictly taller than the cap. Both
/// must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteBudget {
    pub max_steps: usize,
    pub max_height: usize,
}

impl RewriteBudget {
    pub fn new(max_steps: usize, max_height: usize) -> RewriteBudget {
        assert!(max_steps > 0 && max_height > 0, "budget limits must be positive");
        RewriteBudget {
            max_steps,
            max_height,
        }
    }
}

impl Default for RewriteBudget {
    fn default() -> RewriteBudget {
        RewriteBudget {
            max_steps: 100_000,
            max_height: 8,
        }
    }
}

/// Verdict of [`rewrite_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Equal,
    NotEqual,
    /// The budget ran out or the height cap pruned the closure before it
    /// saturated; no conclusion.
    Unknown,
}

/// The explored part of the ∼_Γ-class of a term.
#[derive(Debug, Clone)]
pub struct ClassClosure {
    pub members: BTreeSet<Term>,
    /// True when the closure reached a fixpoint without the height cap ever
    /// firing; only then is `members` the whole congruence class.
    pub saturated: bool,
}

/// All terms reachable from `t` by one application of one equation of Γ, in
/// either direction, at any position.
pub fn rewrite_once_all(gamma: &EquationSet, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm_at(&pos).expect("position comes from the term");
        for (lhs, rhs) in gamma.equations() {
            if sub == *lhs {
                out.push(t.replace_at(&pos, rhs.clone()).expect("valid position"));
            }
            if sub == *rhs {
                out.push(t.replace_at(&pos, lhs.clone()).expect("valid position"));
            }
        }
    }
    out
}

struct Exploration {
    seen: HashSet<Term>,
    queue: VecDeque<Term>,
    steps: usize,
    pruned: bool,
    exhausted: bool,
}

impl Exploration {
    fn new(start: Term) -> Exploration {
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::new();
        queue.push_back(start);
        Exploration {
            seen,
            queue,
            steps: 0,
            pruned: false,
            exhausted: false,
        }
    }

    /// Expands the frontier breadth-first. Returns early when `stop` matches
    /// a newly discovered term.
    fn run(&mut self, gamma: &EquationSet, budget: RewriteBudget, stop: Option<&Term>) -> bool {
        while let Some(t) = self.queue.pop_front() {
            for succ in rewrite_once_all(gamma, &t) {
                self.steps += 1;
                if self.steps > budget.max_steps {
                    self.exhausted = true;
                    return false;
                }
                if succ.height() > budget.max_height {
                    self.pruned = true;
                    continue;
                }
                if self.seen.insert(succ.clone()) {
                    if stop == Some(&succ) {
                        return true;
                    }
                    self.queue.push_back(succ);
                }
            }
        }
        false
    }

    fn saturated(&self) -> bool {
        !self.pruned && !self.exhausted && self.queue.is_empty()
    }
}

/// Semi-decides F_Γ ⊨ s = t by closing {s} under →_Γ in both directions.
///
/// Returns `Equal` as soon as `t` is reached, `NotEqual` only when the
/// closure saturated inside the budget without the height cap ever firing,
/// and `Unknown` otherwise.
pub fn rewrite_oracle(
    gamma: &EquationSet,
    s: &Term,
    t: &Term,
    budget: RewriteBudget,
) -> OracleVerdict {
    if s == t {
        return OracleVerdict::Equal;
    }
    let mut exploration = Exploration::new(s.clone());
    if exploration.run(gamma, budget, Some(t)) {
        return OracleVerdict::Equal;
    }
    if exploration.saturated() {
        OracleVerdict::NotEqual
    } else {
        OracleVerdict::Unknown
    }
}

/// Explores the ∼_Γ-class of `t` within the budget.
pub fn class_closure(gamma: &EquationSet, t: &Term, budget: RewriteBudget) -> ClassClosure {
    let mut exploration = Exploration::new(t.clone());
    exploration.run(gamma, budget, None);
    ClassClosure {
        saturated: exploration.saturated(),
        members: exploration.seen.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_signature, parse_term, EquationSet};

    fn gamma_ex() -> EquationSet {
        let sig = parse_signature("fun f 2; const a b c").unwrap();
        let eqs = vec![
            (
                parse_term("a", &sig).unwrap(),
                parse_term("f(b,c)", &sig).unwrap(),
            ),
            (
                parse_term("c", &sig).unwrap(),
                parse_term("f(a,b)", &sig).unwrap(),
            ),
        ];
        EquationSet::new(sig, eqs).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let gamma = gamma_ex();
        let sig = gamma.signature().clone();
        let a = parse_term("a", &sig).unwrap();
        let fbc = parse_term("f(b,c)", &sig).unwrap();
        let deep = parse_term("f(b,f(a,b))", &sig).unwrap();

        assert_eq!(
            rewrite_oracle(&gamma, &a, &fbc, RewriteBudget::default()),
            OracleVerdict::Equal
        );
        assert_eq!(
            rewrite_oracle(&gamma, &a, &deep, RewriteBudget::new(10_000, 6)),
            OracleVerdict::Equal
        );

        // With no equations, distinct terms never meet.
        let empty = EquationSet::empty(sig.clone());
        let b = parse_term("b", &sig).unwrap();
        assert_eq!(
            rewrite_oracle(&empty, &a, &b, RewriteBudget::default()),
            OracleVerdict::NotEqual
        );

        // b is rewrite-inert under Γ_ex, so its closure saturates at {b}.
        assert_eq!(
            rewrite_oracle(&gamma, &b, &a, RewriteBudget::default()),
            OracleVerdict::NotEqual
        );

        // The class of a is infinite: the bounded exploration cannot conclude.
        assert_eq!(
            rewrite_oracle(&gamma, &a, &b, RewriteBudget::new(500, 6)),
            OracleVerdict::Unknown
        );
    }

    #[test]
    fn class_closure_examples() {
        let sig = parse_signature("fun f 2; const a b c").unwrap();
        let a = parse_term("a", &sig).unwrap();
        let b = parse_term("b", &sig).unwrap();

        let ab = EquationSet::new(sig.clone(), vec![(a.clone(), b.clone())]).unwrap();
        let closure = class_closure(&ab, &a, RewriteBudget::default());
        assert!(closure.saturated);
        assert_eq!(
            closure.members.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            vec!["a", "b"]
        );

        let empty = EquationSet::empty(sig.clone());
        let t = parse_term("f(a,f(b,c))", &sig).unwrap();
        let closure = class_closure(&empty, &t, RewriteBudget::default());
        assert!(closure.saturated);
        assert_eq!(closure.members.len(), 1);

        let gamma = gamma_ex();
        let closure = class_closure(&gamma, &a, RewriteBudget::new(100, 8));
        assert!(!closure.saturated);
        assert!(closure.members.len() >= 5);
    }
}
