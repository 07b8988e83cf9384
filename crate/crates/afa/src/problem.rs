//! Problem files: one signature plus one set of ground equations.
//!
//! The grammar is `;`-separated statements, with `#` line comments:
//!
//! ```text
//! fun f 2;
//! const a b c;
//! eq a = f(b,c);
//! eq c = f(a,b);
//! ```
//!
//! `fun` declares a function symbol with its arity, `const` declares
//! constants, and each `eq` adds one ground equation between terms in
//! functional or Polish notation.

use crate::error::Result;
use crate::term::{parse_term, Cursor, EquationSet, Signature, Term};

/// A parsed problem: the presentation (Σ, Γ) every subcommand operates on.
#[derive(Debug, Clone)]
pub struct Problem {
    pub gamma: EquationSet,
}

impl Problem {
    pub fn signature(&self) -> &Signature {
        self.gamma.signature()
    }
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut cur = Cursor::new(text);
    let mut functions: Vec<(String, usize)> = Vec::new();
    let mut constants: Vec<String> = Vec::new();
    let mut raw_equations: Vec<(String, String)> = Vec::new();
    loop {
        if cur.at_end() {
            break;
        }
        let Some(keyword) = cur.ident() else {
            return Err(cur.error("expected `fun`, `const` or `eq`"));
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
            "eq" => {
                let (lhs, rhs) = split_equation(&mut cur)?;
                raw_equations.push((lhs, rhs));
            }
            other => {
                return Err(cur.error(format!("expected `fun`, `const` or `eq`, found `{other}`")));
            }
        }
        cur.skip_ws();
        if !cur.eat(';') && !cur.at_end() {
            return Err(cur.error("expected `;` between statements"));
        }
    }
    let sig = Signature::new(functions, constants)?;
    let equations: Vec<(Term, Term)> = raw_equations
        .iter()
        .map(|(lhs, rhs)| Ok((parse_term(lhs, &sig)?, parse_term(rhs, &sig)?)))
        .collect::<Result<_>>()?;
    let gamma = EquationSet::new(sig, equations)?;
    Ok(Problem { gamma })
}

/// Collects the raw `lhs = rhs` text of an `eq` statement up to the next
/// `;` or end of input. Terms are parsed after the whole signature is known.
fn split_equation(cur: &mut Cursor) -> Result<(String, String)> {
    cur.skip_ws();
    let body_start = cur.rest();
    let mut len = 0usize;
    while let Some(c) = cur.peek() {
        if c == ';' || c == '#' {
            break;
        }
        len += c.len_utf8();
        cur.bump();
    }
    let body = &body_start[..len];
    let Some((lhs, rhs)) = body.split_once('=') else {
        return Err(cur.error("expected `eq <term> = <term>`"));
    };
    if lhs.trim().is_empty() || rhs.trim().is_empty() {
        return Err(cur.error("expected terms on both sides of `=`"));
    }
    Ok((lhs.trim().to_string(), rhs.trim().to_string()))
}
